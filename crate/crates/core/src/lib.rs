//! Simulation of multiphoton entangled-state generation by path identity on
//! photonic chips.
//!
//! Two independent routes predict the same post-selected states:
//!
//! * [`circuit`] expands coherently pumped pair sources to a fixed number of
//!   pairs, pushes the state through linear optics and 2D gratings
//!   ([`optics`]) and conditions on coincidence clicks.
//! * [`graph`] reads the experiment as a graph whose perfect matchings are
//!   the emission events that fire every detector.
//!
//! Both produce [`fock::FockState`] values, so they can be compared by
//! fidelity. The guide in `book/` walks through the constructions.

pub mod circuit;
pub mod error;
pub mod fock;
pub mod format;
pub mod graph;
pub mod optics;

pub use circuit::{Circuit, DetectorGroup, Element, SimulationReport};
pub use error::{Error, Result};
pub use fock::{Channel, FockState, FockTerm, Mode, Signature};
pub use graph::{ExperimentGraph, GraphState};
pub use optics::{GratingMap, LinearElement, PairSource};

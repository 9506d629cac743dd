//! Sparse bosonic Fock-state algebra.
//!
//! States are polynomials in creation operators acting on vacuum. Products
//! of pair-emission terms, mode substitutions by linear optics and
//! post-selection all reduce to operations on these polynomials.

mod mode;
mod state;

pub use mode::{Channel, ChannelKind, Mode};
pub(crate) use state::factorial;
pub use state::{
    fidelity, inner_product, normalize, pruning_epsilon, set_pruning_epsilon, term_multiply, FockState, FockTerm,
    Signature, DEFAULT_EPSILON,
};

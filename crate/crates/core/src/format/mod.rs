//! JSON file formats for circuits, experiment graphs and state literals.
//!
//! Circuit files carry `"format": 1`. Modes are written in their compact text
//! form (`H_a`, `u_b`, `s2a`, …) everywhere except the top-level `modes`
//! declaration, which lists `{port, channel}` objects. A term literal is
//! `[["H_a", "V_b"], amp]` where `amp` is a number or `[re, im]`; a mode
//! repeated in the list means a multiply occupied mode.

mod report;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, DetectorGroup, Element};
use crate::error::{Error, Result};
use crate::fock::{FockState, Mode, Signature};
use crate::graph::ExperimentGraph;
use crate::optics::{GratingMap, LinearElement, PairSource};

pub use report::{
    equivalence_json, graph_state_json, matchings_json, report_json, round_sig, simulation_table, state_json,
};

/// Circuit file format version understood by this crate.
pub const CIRCUIT_FORMAT: u64 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

impl Amplitude {
    pub fn value(&self) -> C64 {
        match *self {
            Amplitude::Real(r) => C64::new(r, 0.0),
            Amplitude::Complex([re, im]) => C64::new(re, im),
        }
    }
}

/// `[["H_a", "V_b"], amp]`.
pub type TermLiteral = (Vec<String>, Amplitude);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateLiteral {
    Object { terms: Vec<TermLiteral> },
    Bare(Vec<TermLiteral>),
}

impl StateLiteral {
    fn terms(&self) -> &[TermLiteral] {
        match self {
            StateLiteral::Object { terms } | StateLiteral::Bare(terms) => terms,
        }
    }

    pub fn to_state(&self) -> Result<FockState> {
        let mut s = FockState::zero();
        for (i, (modes, amp)) in self.terms().iter().enumerate() {
            let modes = modes
                .iter()
                .map(|m| m.parse::<Mode>())
                .collect::<Result<Vec<_>>>()
                .map_err(|e| parse_err(format!("terms[{i}]"), e))?;
            s.add(Signature::from_modes(modes), amp.value());
        }
        Ok(s)
    }

    pub fn from_state(state: &FockState) -> Self {
        StateLiteral::Object {
            terms: state
                .iter()
                .map(|(sig, a)| (sig.modes().map(|m| m.to_string()).collect(), Amplitude::Complex([a.re, a.im])))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceFile {
    pub id: String,
    pub g: [f64; 2],
    pub emission: Vec<(String, u32)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ElementFile {
    Bs {
        modes: [String; 2],
        reflectance: f64,
    },
    Mzi {
        modes: [String; 2],
        theta: f64,
        #[serde(default)]
        phi: f64,
    },
    Mmi {
        modes: [String; 2],
    },
    Phase {
        mode: String,
        phi: f64,
    },
    Grating {
        port: String,
    },
    Unitary {
        modes: Vec<String>,
        matrix: Vec<Vec<[f64; 2]>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorFile {
    pub port: String,
    pub modes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub format: u64,
    pub modes: Vec<Mode>,
    pub sources: Vec<SourceFile>,
    pub elements: Vec<ElementFile>,
    pub detectors: Vec<DetectorFile>,
    pub pairs: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<StateLiteral>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub u: String,
    pub v: String,
    pub weight: [f64; 2],
    pub labels: [u8; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeFile>,
    #[serde(default)]
    pub triggers: Vec<String>,
}

fn parse_err(path: impl Into<String>, e: impl std::fmt::Display) -> Error {
    Error::Parse { path: path.into(), message: e.to_string() }
}

/// Deserializes with the failing field path and line/column in the error.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        parse_err(path, e.into_inner())
    })
}

fn mode_at(path: String, s: &str) -> Result<Mode> {
    s.parse::<Mode>().map_err(|e| parse_err(path, e))
}

fn pair_at(path: &str, modes: &[String; 2]) -> Result<[Mode; 2]> {
    Ok([mode_at(format!("{path}.modes[0]"), &modes[0])?, mode_at(format!("{path}.modes[1]"), &modes[1])?])
}

impl CircuitFile {
    pub fn into_circuit(self) -> Result<Circuit> {
        if self.format != CIRCUIT_FORMAT {
            return Err(Error::FormatVersion(self.format));
        }
        let sources = self
            .sources
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let counts = s
                    .emission
                    .iter()
                    .enumerate()
                    .map(|(j, (m, c))| Ok((mode_at(format!("sources[{i}].emission[{j}]"), m)?, *c)))
                    .collect::<Result<Vec<_>>>()?;
                let emission = FockState::from_term(crate::fock::FockTerm::new(
                    C64::new(1.0, 0.0),
                    Signature::from_counts(counts),
                ));
                PairSource::new(&s.id, emission, C64::new(s.g[0], s.g[1]))
            })
            .collect::<Result<Vec<_>>>()?;
        let elements = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let path = format!("elements[{i}]");
                Ok(match e {
                    ElementFile::Bs { modes, reflectance } => {
                        Element::Beamsplitter { modes: pair_at(&path, modes)?, reflectance: *reflectance }
                    }
                    ElementFile::Mzi { modes, theta, phi } => {
                        Element::Mzi { modes: pair_at(&path, modes)?, theta: *theta, phi: *phi }
                    }
                    ElementFile::Mmi { modes } => Element::Mmi { modes: pair_at(&path, modes)? },
                    ElementFile::Phase { mode, phi } => {
                        Element::Phase { mode: mode_at(format!("{path}.mode"), mode)?, phi: *phi }
                    }
                    ElementFile::Grating { port } => Element::Grating(GratingMap::new(port)),
                    ElementFile::Unitary { modes, matrix } => {
                        let k = modes.len();
                        let modes = modes
                            .iter()
                            .enumerate()
                            .map(|(j, m)| mode_at(format!("{path}.modes[{j}]"), m))
                            .collect::<Result<Vec<_>>>()?;
                        if matrix.len() != k || matrix.iter().any(|r| r.len() != k) {
                            return Err(parse_err(format!("{path}.matrix"), format!("expected {k}x{k} entries")));
                        }
                        let m = DMatrix::from_fn(k, k, |r, c| C64::new(matrix[r][c][0], matrix[r][c][1]));
                        Element::Unitary(LinearElement::new(modes, m)?)
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let detectors = self
            .detectors
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let modes = d
                    .modes
                    .iter()
                    .enumerate()
                    .map(|(j, m)| mode_at(format!("detectors[{i}].modes[{j}]"), m))
                    .collect::<Result<Vec<_>>>()?;
                Ok(DetectorGroup::new(&d.port, modes))
            })
            .collect::<Result<Vec<_>>>()?;
        let target = self.target.as_ref().map(|t| t.to_state()).transpose()?;
        let circuit = Circuit { modes: self.modes, sources, elements, detectors, pairs: self.pairs, target };
        circuit.validate()?;
        Ok(circuit)
    }

    /// Canonical file form of a circuit. Fails for sources whose emission is
    /// not a single unit-amplitude monomial.
    pub fn from_circuit(c: &Circuit) -> Result<CircuitFile> {
        let sources = c
            .sources
            .iter()
            .map(|s| {
                let terms: Vec<_> = s.emission().iter().collect();
                match terms.as_slice() {
                    [(sig, amp)] if (**amp - C64::new(1.0, 0.0)).norm() == 0.0 => Ok(SourceFile {
                        id: s.id.clone(),
                        g: [s.pump.re, s.pump.im],
                        emission: sig.entries().iter().map(|(m, n)| (m.to_string(), *n)).collect(),
                    }),
                    _ => {
                        Err(Error::InvalidCircuit(format!("source `{}` emission is not a single unit monomial", s.id)))
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let names = |ms: &[Mode; 2]| [ms[0].to_string(), ms[1].to_string()];
        let elements = c
            .elements
            .iter()
            .map(|e| match e {
                Element::Beamsplitter { modes, reflectance } => {
                    ElementFile::Bs { modes: names(modes), reflectance: *reflectance }
                }
                Element::Mzi { modes, theta, phi } => {
                    ElementFile::Mzi { modes: names(modes), theta: *theta, phi: *phi }
                }
                Element::Mmi { modes } => ElementFile::Mmi { modes: names(modes) },
                Element::Phase { mode, phi } => ElementFile::Phase { mode: mode.to_string(), phi: *phi },
                Element::Grating(g) => ElementFile::Grating { port: g.port.clone() },
                Element::Unitary(u) => ElementFile::Unitary {
                    modes: u.modes().iter().map(Mode::to_string).collect(),
                    matrix: (0..u.modes().len())
                        .map(|r| (0..u.modes().len()).map(|c| [u.matrix()[(r, c)].re, u.matrix()[(r, c)].im]).collect())
                        .collect(),
                },
            })
            .collect();
        Ok(CircuitFile {
            format: CIRCUIT_FORMAT,
            modes: c.modes.clone(),
            sources,
            elements,
            detectors: c
                .detectors
                .iter()
                .map(|d| DetectorFile { port: d.port.clone(), modes: d.modes.iter().map(Mode::to_string).collect() })
                .collect(),
            pairs: c.pairs,
            target: c.target.as_ref().map(StateLiteral::from_state),
        })
    }
}

impl GraphFile {
    pub fn into_graph(self) -> Result<ExperimentGraph> {
        let mut g = ExperimentGraph::new(self.vertices)?;
        for e in &self.edges {
            g.add_edge(&e.u, &e.v, C64::new(e.weight[0], e.weight[1]), (e.labels[0], e.labels[1]))?;
        }
        let triggers: Vec<&str> = self.triggers.iter().map(String::as_str).collect();
        g.set_triggers(&triggers)?;
        Ok(g)
    }

    pub fn from_graph(g: &ExperimentGraph) -> GraphFile {
        let vs = g.vertices();
        GraphFile {
            vertices: vs.to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeFile {
                    u: vs[e.u].clone(),
                    v: vs[e.v].clone(),
                    weight: [e.weight.re, e.weight.im],
                    labels: [e.label_u, e.label_v],
                })
                .collect(),
            triggers: g.triggers().iter().map(|s| s.to_string()).collect(),
        }
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    from_json::<CircuitFile>(text)?.into_circuit()
}

pub fn circuit_to_json(c: &Circuit) -> Result<String> {
    Ok(serde_json::to_string_pretty(&CircuitFile::from_circuit(c)?).expect("circuit file serializes"))
}

pub fn parse_graph(text: &str) -> Result<ExperimentGraph> {
    from_json::<GraphFile>(text)?.into_graph()
}

pub fn graph_to_json(g: &ExperimentGraph) -> String {
    serde_json::to_string_pretty(&GraphFile::from_graph(g)).expect("graph file serializes")
}

pub fn parse_state(text: &str) -> Result<FockState> {
    from_json::<StateLiteral>(text)?.to_state()
}

pub fn state_to_json(s: &FockState) -> String {
    serde_json::to_string_pretty(&StateLiteral::from_state(s)).expect("state serializes")
}

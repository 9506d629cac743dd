//! Experiment graphs: vertices are photon paths, edges are pair sources.
//!
//! The state produced by an experiment under full coincidence is the sum over
//! perfect matchings of the graph, each matching contributing the product of
//! its edge weights times the ket that assigns every vertex the label its
//! matched edge gives it. Label 0 is read out as `H`, label 1 as `V`.

mod dot;
mod families;

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::circuit::{Circuit, DetectorGroup, Element};
use crate::error::{Error, Result};
use crate::fock::{Channel, FockState, Mode, Signature};
use crate::optics::{GratingMap, PairSource};

pub use dot::to_dot;
pub use families::{ghz_graph, w_graph};

/// A pair source between two vertices. Orange edges carry labels `(0, 0)`,
/// green edges `(1, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: C64,
    pub label_u: u8,
    pub label_v: u8,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    /// Label the edge gives to vertex `x`.
    pub fn label_at(&self, x: usize) -> u8 {
        if self.u == x {
            self.label_u
        } else {
            self.label_v
        }
    }

    /// Unordered identity `(min vertex, its label, max vertex, its label)`.
    fn key(&self) -> (usize, u8, usize, u8) {
        if self.u <= self.v {
            (self.u, self.label_u, self.v, self.label_v)
        } else {
            (self.v, self.label_v, self.u, self.label_u)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    triggers: Vec<usize>,
}

/// A perfect matching, as sorted edge indices.
pub type Matching = Vec<usize>;

impl ExperimentGraph {
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Result<Self> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::InvalidGraph(format!("vertex `{v}` listed twice")));
            }
            if v.parse::<Mode>().map(|m| m.channel != Channel::Single).unwrap_or(true) {
                return Err(Error::InvalidGraph(format!("vertex label `{v}` is not a plain port name")));
            }
        }
        Ok(ExperimentGraph { vertices, edges: Vec::new(), triggers: Vec::new() })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn triggers(&self) -> Vec<&str> {
        self.triggers.iter().map(|&t| self.vertices[t].as_str()).collect()
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex `{label}`")))
    }

    /// Adds an edge. Self-loops, labels outside `{0, 1}` and a second edge
    /// with the same endpoints and label pair are rejected.
    pub fn add_edge(&mut self, u: &str, v: &str, weight: C64, labels: (u8, u8)) -> Result<()> {
        let (iu, iv) = (self.index(u)?, self.index(v)?);
        if iu == iv {
            return Err(Error::InvalidGraph(format!("self-loop on `{u}`")));
        }
        if labels.0 > 1 || labels.1 > 1 {
            return Err(Error::InvalidGraph(format!("edge {u}-{v}: labels must be 0 or 1")));
        }
        let e = Edge { u: iu, v: iv, weight, label_u: labels.0, label_v: labels.1 };
        if self.edges.iter().any(|x| x.key() == e.key()) {
            return Err(Error::InvalidGraph(format!("parallel edge {u}-{v} with identical labels")));
        }
        self.edges.push(e);
        Ok(())
    }

    pub fn with_edge(mut self, u: &str, v: &str, weight: C64, labels: (u8, u8)) -> Result<Self> {
        self.add_edge(u, v, weight, labels)?;
        Ok(self)
    }

    pub fn set_triggers(&mut self, triggers: &[&str]) -> Result<()> {
        let mut idx = triggers.iter().map(|t| self.index(t)).collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        idx.dedup();
        self.triggers = idx;
        Ok(())
    }

    pub fn edge_weight_mut(&mut self, edge: usize) -> &mut C64 {
        &mut self.edges[edge].weight
    }

    /// All perfect matchings, each once, sorted lexicographically.
    ///
    /// Branches on the lowest-indexed uncovered vertex.
    pub fn perfect_matchings(&self) -> Vec<Matching> {
        let n = self.vertices.len();
        if n % 2 == 1 {
            return Vec::new();
        }
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            incident[e.u].push(i);
            incident[e.v].push(i);
        }
        let mut out = Vec::new();
        let mut covered = vec![false; n];
        let mut chosen = Vec::with_capacity(n / 2);
        self.branch(&incident, &mut covered, &mut chosen, &mut out);
        for m in &mut out {
            m.sort_unstable();
        }
        out.sort();
        out
    }

    fn branch(&self, incident: &[Vec<usize>], covered: &mut [bool], chosen: &mut Vec<usize>, out: &mut Vec<Matching>) {
        let Some(v) = covered.iter().position(|&c| !c) else {
            out.push(chosen.clone());
            return;
        };
        covered[v] = true;
        for &ei in &incident[v] {
            let w = self.edges[ei].other(v);
            if covered[w] {
                continue;
            }
            covered[w] = true;
            chosen.push(ei);
            self.branch(incident, covered, chosen, out);
            chosen.pop();
            covered[w] = false;
        }
        covered[v] = false;
    }

    fn matching_term(&self, m: &Matching) -> (Signature, C64) {
        let mut amp = C64::new(1.0, 0.0);
        let mut modes = Vec::with_capacity(self.vertices.len());
        for &ei in m {
            let e = &self.edges[ei];
            amp *= e.weight;
            modes.push(Mode::new(&self.vertices[e.u], Channel::polarization(e.label_u)));
            modes.push(Mode::new(&self.vertices[e.v], Channel::polarization(e.label_v)));
        }
        (Signature::from_modes(modes), amp)
    }

    /// Matching-sum state; see [`GraphState`].
    pub fn state(&self) -> GraphState {
        let matchings = self.perfect_matchings();
        let mut unnormalized = FockState::zero();
        for m in &matchings {
            let (sig, amp) = self.matching_term(m);
            unnormalized.add(sig, amp);
        }
        let normalized = unnormalized.normalize().ok();
        GraphState { unnormalized, normalized, matching_count: matchings.len() }
    }

    /// Graph state conditioned on every trigger vertex reading label 1, with
    /// the trigger modes traced out. Normalized; `None` if nothing survives.
    pub fn projected_state(&self) -> Option<FockState> {
        let full = self.state().unnormalized;
        project_triggers(&full, &self.triggers().iter().map(|s| s.to_string()).collect::<Vec<_>>()).normalize().ok()
    }

    /// Same graph with vertices renamed; unmapped labels keep their name.
    pub fn relabel(&self, map: &BTreeMap<String, String>) -> Result<ExperimentGraph> {
        let names = self.vertices.iter().map(|v| map.get(v).cloned().unwrap_or_else(|| v.clone()));
        let mut g = ExperimentGraph::new(names)?;
        g.edges = self.edges.clone();
        g.triggers = self.triggers.clone();
        Ok(g)
    }

    /// The oracle circuit for this graph: one idealized source per edge
    /// feeding the labelled rails, a grating per vertex, one detector per
    /// vertex and `⌈|V|/2⌉` pairs. An odd graph gives a circuit whose
    /// coincidence never fires, matching its empty matching sum.
    pub fn to_circuit(&self) -> Result<Circuit> {
        if self.edges.is_empty() {
            return Err(Error::InvalidGraph("edge-per-source circuit needs a graph with edges".into()));
        }
        let rail = |x: usize, l: u8| Mode::new(&self.vertices[x], Channel::rail(l));
        let sources = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| PairSource::pair(format!("e{i}"), rail(e.u, e.label_u), rail(e.v, e.label_v), e.weight))
            .collect();
        Ok(Circuit {
            modes: self.vertices.iter().flat_map(|p| [Mode::upper(p), Mode::lower(p)]).collect(),
            sources,
            elements: self.vertices.iter().map(|p| Element::Grating(GratingMap::new(p))).collect(),
            detectors: self.vertices.iter().map(DetectorGroup::polarization).collect(),
            pairs: self.vertices.len().div_ceil(2) as u32,
            target: None,
        })
    }
}

/// Result of [`ExperimentGraph::state`].
#[derive(Clone, Debug, PartialEq)]
pub struct GraphState {
    /// Raw matching sum, before normalization.
    pub unnormalized: FockState,
    /// `None` when no perfect matching exists or all contributions cancel.
    pub normalized: Option<FockState>,
    pub matching_count: usize,
}

/// Free-function form of [`ExperimentGraph::perfect_matchings`].
pub fn perfect_matchings(g: &ExperimentGraph) -> Vec<Matching> {
    g.perfect_matchings()
}

/// Free-function form of [`ExperimentGraph::state`].
pub fn graph_to_state(g: &ExperimentGraph) -> GraphState {
    g.state()
}

/// Keeps terms with `V` on every trigger port (and nothing else there),
/// then drops the trigger modes.
pub fn project_triggers(state: &FockState, triggers: &[String]) -> FockState {
    let mut out = FockState::zero();
    'terms: for (sig, amp) in state.iter() {
        for t in triggers {
            let hit = Mode::v(t);
            let on_port: u32 = sig.entries().iter().filter(|(m, _)| &m.port == t).map(|(_, c)| c).sum();
            if on_port != 1 || sig.count(&hit) != 1 {
                continue 'terms;
            }
        }
        let rest = Signature::from_counts(sig.entries().iter().filter(|(m, _)| !triggers.contains(&m.port)).cloned());
        out.add(rest, *amp);
    }
    out
}

/// Outcome of comparing a graph prediction with a circuit simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct Equivalence {
    pub fidelity: f64,
    pub pass: bool,
    pub graph_state: Option<FockState>,
    pub circuit_state: Option<FockState>,
}

/// Minimum fidelity for [`verify_equivalence`] to pass.
pub const EQUIVALENCE_THRESHOLD: f64 = 1.0 - 1e-9;

/// Compares `graph_to_state(g)` with `run(c)` where vertex labels name the
/// circuit's detector ports one-to-one.
pub fn verify_equivalence(g: &ExperimentGraph, c: &Circuit) -> Result<Equivalence> {
    let map: BTreeMap<String, String> = g.vertices().iter().map(|v| (v.clone(), v.clone())).collect();
    verify_equivalence_with(g, c, &map)
}

/// [`verify_equivalence`] with an explicit vertex → detector-port mapping.
pub fn verify_equivalence_with(
    g: &ExperimentGraph,
    c: &Circuit,
    map: &BTreeMap<String, String>,
) -> Result<Equivalence> {
    let mut ports: Vec<&str> = c.detectors.iter().map(|d| d.port.as_str()).collect();
    ports.sort_unstable();
    let mut mapped = Vec::new();
    for v in g.vertices() {
        let p = map.get(v).ok_or_else(|| Error::MappingMismatch(format!("vertex `{v}` has no port")))?;
        mapped.push(p.as_str());
    }
    mapped.sort_unstable();
    if mapped != ports {
        return Err(Error::MappingMismatch(format!("vertices map to {mapped:?}, detectors are {ports:?}")));
    }
    let graph_state = g.relabel(map)?.state().normalized;
    let circuit_state = c.run()?.postselected_state;
    let fidelity = match (&graph_state, &circuit_state) {
        (Some(a), Some(b)) => a.fidelity(b)?,
        _ => 0.0,
    };
    Ok(Equivalence { fidelity, pass: fidelity >= EQUIVALENCE_THRESHOLD, graph_state, circuit_state })
}

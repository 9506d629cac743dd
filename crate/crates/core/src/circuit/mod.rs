//! Netlist simulation: pair expansion, propagation and coincidence
//! post-selection.
//!
//! All probabilities are conditional on exactly `pairs` photon pairs having
//! been emitted. The `n`-pair state is `(Σ_i g_i E_i)^n / n!`, which keeps
//! double emissions from a single source; coincidence post-selection is what
//! removes them.

mod builders;

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{factorial, ChannelKind, FockState, Mode, Signature};
use crate::optics::{make_beamsplitter, make_mmi, make_mzi, make_phase, GratingMap, LinearElement, PairSource};

pub use builders::{
    bell_circuit, bell_target, build_ghz_circuit, build_w3_circuit, ghz_layout, ghz_target, port_name, w3_target,
    w_target, GhzEdge, W3Settings,
};

/// One step of the netlist, kept in constructor form so circuits serialize
/// back to what was written.
#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Beamsplitter { modes: [Mode; 2], reflectance: f64 },
    Mzi { modes: [Mode; 2], theta: f64, phi: f64 },
    Mmi { modes: [Mode; 2] },
    Phase { mode: Mode, phi: f64 },
    Unitary(LinearElement),
    Grating(GratingMap),
}

impl Element {
    pub fn linear(&self) -> Result<Option<LinearElement>> {
        Ok(Some(match self {
            Element::Beamsplitter { modes: [a, b], reflectance } => {
                make_beamsplitter(a.clone(), b.clone(), *reflectance)?
            }
            Element::Mzi { modes: [a, b], theta, phi } => make_mzi(a.clone(), b.clone(), *theta, *phi)?,
            Element::Mmi { modes: [a, b] } => make_mmi(a.clone(), b.clone())?,
            Element::Phase { mode, phi } => make_phase(mode.clone(), *phi),
            Element::Unitary(u) => u.clone(),
            Element::Grating(_) => return Ok(None),
        }))
    }

    pub fn apply(&self, state: &FockState) -> Result<FockState> {
        match self {
            Element::Grating(g) => g.apply(state),
            other => Ok(other.linear()?.expect("non-grating element").apply(state)),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Element::Beamsplitter { .. } => "bs",
            Element::Mzi { .. } => "mzi",
            Element::Mmi { .. } => "mmi",
            Element::Phase { .. } => "phase",
            Element::Unitary(_) => "unitary",
            Element::Grating(_) => "grating",
        }
    }

    fn modes(&self) -> Vec<Mode> {
        match self {
            Element::Beamsplitter { modes, .. } | Element::Mzi { modes, .. } | Element::Mmi { modes } => modes.to_vec(),
            Element::Phase { mode, .. } => vec![mode.clone()],
            Element::Unitary(u) => u.modes().to_vec(),
            Element::Grating(g) => vec![Mode::upper(&g.port), Mode::lower(&g.port)],
        }
    }
}

/// Modes counted together by one click detector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectorGroup {
    pub port: String,
    pub modes: Vec<Mode>,
}

impl DetectorGroup {
    pub fn new(port: impl Into<String>, modes: Vec<Mode>) -> Self {
        DetectorGroup { port: port.into(), modes }
    }

    /// Both polarizations of a fibre port.
    pub fn polarization(port: impl Into<String>) -> Self {
        let port = port.into();
        DetectorGroup { modes: vec![Mode::h(&port), Mode::v(&port)], port }
    }

    pub fn count(&self, sig: &Signature) -> u32 {
        self.modes.iter().map(|m| sig.count(m)).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub modes: Vec<Mode>,
    pub sources: Vec<PairSource>,
    pub elements: Vec<Element>,
    pub detectors: Vec<DetectorGroup>,
    pub pairs: u32,
    /// Optional reference state for fidelity reporting.
    pub target: Option<FockState>,
}

/// Probability of one emission event (a multiset of sources).
#[derive(Clone, Debug, PartialEq)]
pub struct ProcessProbability {
    pub sources: Vec<String>,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationReport {
    /// Normalized post-selected state, `None` when nothing survives.
    pub postselected_state: Option<FockState>,
    /// Coincidence probability within the n-pair sector.
    pub success_probability: f64,
    /// Terms in the propagated state before post-selection.
    pub raw_term_count: usize,
    pub per_process_breakdown: Option<Vec<ProcessProbability>>,
    /// Fidelity with the circuit's target, when one is set and the
    /// post-selection is non-empty.
    pub fidelity: Option<f64>,
}

impl SimulationReport {
    pub fn is_empty(&self) -> bool {
        self.postselected_state.is_none()
    }

    /// Sum of the per-process probabilities, when a breakdown was requested.
    pub fn summed_process_probability(&self) -> Option<f64> {
        self.per_process_breakdown.as_ref().map(|rows| rows.iter().fold(0.0, |acc, r| acc + r.probability))
    }
}

/// Kept part of a state after conditioning on a click pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct Postselection {
    /// Unnormalized kept terms.
    pub state: FockState,
    pub probability: f64,
}

/// `(Σ_i g_i E_i)^n / n!`. `n = 0` yields the vacuum.
pub fn expand_pairs(sources: &[PairSource], n: u32) -> FockState {
    let mut sum = FockState::zero();
    for s in sources {
        sum = sum.plus(&s.weighted());
    }
    sum.pow(n).scale(C64::new(1.0 / factorial(n), 0.0))
}

/// Keeps terms with exactly one photon per detector group and no photon
/// anywhere else.
pub fn postselect(state: &FockState, detectors: &[DetectorGroup]) -> Postselection {
    postselect_pattern(state, detectors, &vec![1; detectors.len()])
}

/// Generalized click pattern: group `i` must see exactly `counts[i]` photons,
/// undetected modes must be empty.
pub fn postselect_pattern(state: &FockState, detectors: &[DetectorGroup], counts: &[u32]) -> Postselection {
    assert_eq!(detectors.len(), counts.len(), "one count per detector group");
    let watched: BTreeSet<&Mode> = detectors.iter().flat_map(|d| d.modes.iter()).collect();
    let kept = state.filter(|sig, _| {
        sig.entries().iter().all(|(m, _)| watched.contains(m))
            && detectors.iter().zip(counts).all(|(d, &n)| d.count(sig) == n)
    });
    let total = state.norm_sqr();
    let probability = if total > 0.0 { kept.norm_sqr() / total } else { 0.0 };
    Postselection { state: kept, probability }
}

impl Circuit {
    /// Checks mode references, detector disjointness, source ids and the
    /// pair count.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidCircuit(msg));
        if self.pairs == 0 {
            return bad("pairs must be at least 1".into());
        }
        if self.sources.is_empty() {
            return bad("at least one source is required".into());
        }
        let mut ids = BTreeSet::new();
        for s in &self.sources {
            if !ids.insert(s.id.as_str()) {
                return bad(format!("duplicate source id `{}`", s.id));
            }
        }

        let mut available: BTreeSet<Mode> = BTreeSet::new();
        for m in &self.modes {
            if !available.insert(m.clone()) {
                return bad(format!("mode `{m}` declared twice"));
            }
        }
        for s in &self.sources {
            for m in s.emission().modes() {
                if !available.contains(&m) {
                    return bad(format!("source `{}` emits into undeclared mode `{m}`", s.id));
                }
            }
        }
        let mut relabeled = BTreeSet::new();
        for (i, e) in self.elements.iter().enumerate() {
            match e {
                Element::Grating(g) => {
                    if !relabeled.insert(g.port.clone()) {
                        return bad(format!("element {i}: grating on port `{}` applied twice", g.port));
                    }
                    let has_rail = available.iter().any(|m| m.port == g.port && m.channel.kind() == ChannelKind::Rail);
                    if !has_rail {
                        return bad(format!("element {i}: grating on port `{}` without declared rails", g.port));
                    }
                    available.insert(Mode::h(&g.port));
                    available.insert(Mode::v(&g.port));
                }
                other => {
                    other.linear()?;
                    for m in other.modes() {
                        if !available.contains(&m) {
                            return bad(format!("element {i} ({}): unknown mode `{m}`", other.kind()));
                        }
                    }
                }
            }
        }

        let mut seen = BTreeSet::new();
        for d in &self.detectors {
            if d.modes.is_empty() {
                return bad(format!("detector `{}` watches no modes", d.port));
            }
            for m in &d.modes {
                if !available.contains(m) {
                    return bad(format!("detector `{}` watches unknown mode `{m}`", d.port));
                }
                if !seen.insert(m.clone()) {
                    return bad(format!("detector groups overlap on mode `{m}`"));
                }
            }
        }
        if 2 * self.pairs < self.detectors.len() as u32 {
            return bad(format!("{} detector groups cannot all fire with {} pairs", self.detectors.len(), self.pairs));
        }
        Ok(())
    }

    /// Pushes a state through every element in netlist order.
    pub fn propagate(&self, state: &FockState) -> Result<FockState> {
        let mut s = state.clone();
        for e in &self.elements {
            s = e.apply(&s)?;
        }
        Ok(s)
    }

    pub fn run(&self) -> Result<SimulationReport> {
        self.validate()?;
        let out = self.propagate(&expand_pairs(&self.sources, self.pairs))?;
        let sel = postselect(&out, &self.detectors);
        let postselected_state = if sel.state.is_zero() { None } else { Some(sel.state.normalize()?) };
        let fidelity = match (&postselected_state, &self.target) {
            (Some(s), Some(t)) => Some(s.fidelity(t)?),
            _ => None,
        };
        Ok(SimulationReport {
            postselected_state,
            success_probability: sel.probability,
            raw_term_count: out.len(),
            per_process_breakdown: None,
            fidelity,
        })
    }

    /// [`Circuit::run`] plus the probability of every emission event that
    /// can fire the coincidence.
    pub fn run_with_breakdown(&self) -> Result<SimulationReport> {
        let mut report = self.run()?;
        let mut rows = Vec::new();
        let ids: Vec<&str> = self.sources.iter().map(|s| s.id.as_str()).collect();
        for process in ids.iter().copied().combinations_with_replacement(self.pairs as usize) {
            let p = self.per_process_probability(&process)?;
            if p > 0.0 {
                rows.push(ProcessProbability {
                    sources: process.iter().map(|s| s.to_string()).collect(),
                    probability: p,
                });
            }
        }
        report.per_process_breakdown = Some(rows);
        Ok(report)
    }

    /// Probability that the coincidence fires given that exactly the listed
    /// sources emitted (ids may repeat for multiple pairs from one source).
    ///
    /// The event state `Π_i E_i^{m_i} / m_i!` is propagated and post-selected
    /// on its own, so the result does not depend on pump amplitudes.
    pub fn per_process_probability(&self, process: &[&str]) -> Result<f64> {
        self.validate()?;
        if process.len() != self.pairs as usize {
            return Err(Error::InvalidProcess(format!(
                "process names {} pairs but the circuit expands {}",
                process.len(),
                self.pairs
            )));
        }
        let mut multiplicity: BTreeMap<&str, u32> = BTreeMap::new();
        for id in process {
            *multiplicity.entry(id).or_insert(0) += 1;
        }
        let mut event = FockState::vacuum();
        for (id, m) in multiplicity {
            let src = self
                .sources
                .iter()
                .find(|s| s.id == id)
                .ok_or_else(|| Error::InvalidProcess(format!("unknown source `{id}`")))?;
            event = event.times(&src.emission().pow(m).scale(C64::new(1.0 / factorial(m), 0.0)));
        }
        let out = self.propagate(&event)?;
        Ok(postselect(&out, &self.detectors).probability)
    }

    /// Copy with every pump amplitude multiplied by `factor`.
    pub fn scale_pumps(&self, factor: C64) -> Circuit {
        let mut c = self.clone();
        for s in &mut c.sources {
            s.pump *= factor;
        }
        c
    }

    /// Copy with the named sources' pumps replaced.
    pub fn with_pumps(&self, pumps: &[(&str, C64)]) -> Circuit {
        let mut c = self.clone();
        for s in &mut c.sources {
            if let Some((_, g)) = pumps.iter().find(|(id, _)| *id == s.id) {
                s.pump = *g;
            }
        }
        c
    }
}

/// Free-function form of [`Circuit::run`].
pub fn run(circuit: &Circuit) -> Result<SimulationReport> {
    circuit.run()
}

/// Free-function form of [`Circuit::per_process_probability`].
pub fn per_process_probability(circuit: &Circuit, process: &[&str]) -> Result<f64> {
    circuit.per_process_probability(process)
}

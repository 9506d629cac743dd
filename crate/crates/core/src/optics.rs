//! Pair sources, passive linear optics and the 2D-grating relabeling.
//!
//! Linear elements act by substituting every creation operator on one of
//! their modes, `a†_i → Σ_j U[j][i] a†_j`, and re-expanding the polynomial.
//! Column `i` of the matrix is therefore where a photon entering mode `i`
//! ends up.
//!
//! Conventions:
//!
//! * Beamsplitter / directional coupler with reflectance `r`:
//!   `U = [[√(1−r), i√r], [i√r, √(1−r)]]`.
//! * MMI: the lossless balanced coupler, `r = 1/2`.
//! * MZI with internal phase `θ` and output phase `φ`:
//!   `U = diag(e^{iφ}, 1) · B̄ · diag(e^{iθ}, 1) · B` where `B` is the balanced
//!   coupler and `B̄` the mirrored one (coupling phase `−i`). This works out to
//!   `diag(e^{iφ}, 1) · e^{iθ/2} [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`,
//!   so `θ = 0` is the bar state (identity), the cross probability is
//!   `sin²(θ/2)`, and internal phases add under composition.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{Channel, ChannelKind, FockState, Mode, Signature};

const UNITARY_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A coherently pumped photon-pair source.
///
/// `emission` is the polynomial the source adds to the pump Hamiltonian
/// (degree two only), `pump` the relative complex pump amplitude.
#[derive(Clone, Debug, PartialEq)]
pub struct PairSource {
    pub id: String,
    emission: FockState,
    pub pump: C64,
}

impl PairSource {
    pub fn new(id: impl Into<String>, emission: FockState, pump: C64) -> Result<Self> {
        let id = id.into();
        if emission.is_zero() || emission.iter().any(|(s, _)| s.photon_number() != 2) {
            return Err(Error::InvalidEmission { id });
        }
        Ok(PairSource { id, emission, pump })
    }

    /// An idealized path-identity source emitting one photon into each of
    /// two modes (the same mode twice gives a degenerate `a†²` source).
    pub fn pair(id: impl Into<String>, m1: Mode, m2: Mode, pump: C64) -> Self {
        PairSource { id: id.into(), emission: FockState::monomial(c(1.0, 0.0), [m1, m2]), pump }
    }

    pub fn emission(&self) -> &FockState {
        &self.emission
    }

    /// `pump · emission`.
    pub fn weighted(&self) -> FockState {
        self.emission.scale(self.pump)
    }

    pub fn with_pump(&self, pump: C64) -> PairSource {
        PairSource { pump, ..self.clone() }
    }
}

/// A unitary acting on an ordered list of modes.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearElement {
    modes: Vec<Mode>,
    matrix: DMatrix<C64>,
}

impl LinearElement {
    /// Fails if the modes repeat, the shape is wrong, or `U†U` deviates from
    /// the identity by more than 1e-10 in any entry.
    pub fn new(modes: Vec<Mode>, matrix: DMatrix<C64>) -> Result<Self> {
        let k = modes.len();
        if matrix.nrows() != k || matrix.ncols() != k {
            return Err(Error::ShapeMismatch { rows: matrix.nrows(), cols: matrix.ncols(), modes: k });
        }
        for (i, m) in modes.iter().enumerate() {
            if modes[..i].contains(m) {
                return Err(Error::RepeatedMode(m.to_string()));
            }
        }
        let dev = unitarity_deviation(&matrix);
        if dev > UNITARY_TOL {
            return Err(Error::NonUnitary(dev));
        }
        Ok(LinearElement { modes, matrix })
    }

    pub fn identity(modes: Vec<Mode>) -> Result<Self> {
        let k = modes.len();
        LinearElement::new(modes, DMatrix::identity(k, k))
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// The same transformation written on a larger ordered mode list
    /// (identity on the extra modes).
    pub fn embed(&self, modes: &[Mode]) -> Result<LinearElement> {
        let k = modes.len();
        let mut m = DMatrix::<C64>::identity(k, k);
        let idx: Vec<usize> = self
            .modes
            .iter()
            .map(|md| {
                modes
                    .iter()
                    .position(|x| x == md)
                    .ok_or_else(|| Error::InvalidCircuit(format!("mode `{md}` missing from embedding")))
            })
            .collect::<Result<_>>()?;
        for (a, &ia) in idx.iter().enumerate() {
            for (b, &ib) in idx.iter().enumerate() {
                m[(ia, ib)] = self.matrix[(a, b)];
            }
        }
        LinearElement::new(modes.to_vec(), m)
    }

    /// The element equivalent to applying `self` and then `next`.
    pub fn then(&self, next: &LinearElement) -> Result<LinearElement> {
        let mut modes = self.modes.clone();
        for m in &next.modes {
            if !modes.contains(m) {
                modes.push(m.clone());
            }
        }
        let first = self.embed(&modes)?;
        let second = next.embed(&modes)?;
        LinearElement::new(modes, &second.matrix * &first.matrix)
    }

    /// Transfer amplitude from input mode `from` to output mode `to`.
    pub fn amplitude(&self, from: usize, to: usize) -> C64 {
        self.matrix[(to, from)]
    }

    /// Applies the element by mode substitution.
    pub fn apply(&self, state: &FockState) -> FockState {
        let index: BTreeMap<&Mode, usize> = self.modes.iter().enumerate().map(|(i, m)| (m, i)).collect();
        // image of each a†_i
        let images: Vec<FockState> = (0..self.modes.len())
            .map(|i| {
                let mut img = FockState::zero();
                for (j, m) in self.modes.iter().enumerate() {
                    img.add(Signature::from_modes([m.clone()]), self.matrix[(j, i)]);
                }
                img
            })
            .collect();

        let mut out = FockState::zero();
        for (sig, amp) in state.iter() {
            let mut untouched = Vec::new();
            let mut poly = FockState::vacuum().scale(*amp);
            for (m, count) in sig.entries() {
                match index.get(m) {
                    Some(&i) => poly = poly.times(&images[i].pow(*count)),
                    None => untouched.push((m.clone(), *count)),
                }
            }
            let rest = Signature::from_counts(untouched);
            for (s, a) in poly.iter() {
                out.add(s.merge(&rest), *a);
            }
        }
        out
    }
}

/// Free-function form of [`LinearElement::apply`].
pub fn apply_linear(state: &FockState, element: &LinearElement) -> FockState {
    element.apply(state)
}

/// Largest entry of `|U†U − I|`.
pub fn unitarity_deviation(u: &DMatrix<C64>) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let prod = u.adjoint() * u;
    let id = DMatrix::<C64>::identity(u.nrows(), u.ncols());
    (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn two_mode(m1: Mode, m2: Mode, entries: [C64; 4]) -> Result<LinearElement> {
    if m1 == m2 {
        return Err(Error::RepeatedMode(m1.to_string()));
    }
    LinearElement::new(vec![m1, m2], DMatrix::from_row_slice(2, 2, &entries))
}

/// Symmetric directional coupler with power reflectance `r`.
pub fn make_beamsplitter(m1: Mode, m2: Mode, r: f64) -> Result<LinearElement> {
    if !(0.0..=1.0).contains(&r) || r.is_nan() {
        return Err(Error::InvalidReflectance(r));
    }
    let t = (1.0 - r).sqrt();
    let r = r.sqrt();
    two_mode(m1, m2, [c(t, 0.0), c(0.0, r), c(0.0, r), c(t, 0.0)])
}

/// Multimode interferometer, modeled as a lossless balanced coupler.
pub fn make_mmi(m1: Mode, m2: Mode) -> Result<LinearElement> {
    make_beamsplitter(m1, m2, 0.5)
}

/// Mach-Zehnder interferometer; see the module docs for the convention.
pub fn make_mzi(m1: Mode, m2: Mode, theta: f64, phi: f64) -> Result<LinearElement> {
    let h = theta / 2.0;
    let g = C64::from_polar(1.0, h);
    let out = C64::from_polar(1.0, phi);
    two_mode(m1, m2, [out * g * h.cos(), -out * g * h.sin(), g * h.sin(), g * h.cos()])
}

/// Internal MZI phase giving the requested cross probability.
pub fn mzi_theta_for_cross(p: f64) -> f64 {
    2.0 * p.clamp(0.0, 1.0).sqrt().asin()
}

/// Single-mode phase shifter (heater).
pub fn make_phase(mode: Mode, phi: f64) -> LinearElement {
    LinearElement { modes: vec![mode], matrix: DMatrix::from_element(1, 1, C64::from_polar(1.0, phi)) }
}

/// A 2D grating coupler on one port: upper rail → H, lower rail → V.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GratingMap {
    pub port: String,
}

impl GratingMap {
    pub fn new(port: impl Into<String>) -> Self {
        GratingMap { port: port.into() }
    }

    /// Fails if the port already carries polarization channels.
    pub fn apply(&self, state: &FockState) -> Result<FockState> {
        let relabeled = state.port_kinds().get(&self.port).is_some_and(|k| k.contains(&ChannelKind::Polarization));
        if relabeled {
            return Err(Error::DoubleRelabel(self.port.clone()));
        }
        Ok(state.map_modes(|m| {
            if m.port != self.port {
                return m.clone();
            }
            match m.channel {
                Channel::RailUpper => Mode::h(&m.port),
                Channel::RailLower => Mode::v(&m.port),
                _ => m.clone(),
            }
        }))
    }

    /// Inverse relabeling, polarization back to rails.
    pub fn invert(&self, state: &FockState) -> Result<FockState> {
        let has_rails = state.port_kinds().get(&self.port).is_some_and(|k| k.contains(&ChannelKind::Rail));
        if has_rails {
            return Err(Error::DoubleRelabel(self.port.clone()));
        }
        Ok(state.map_modes(|m| {
            if m.port != self.port {
                return m.clone();
            }
            match m.channel {
                Channel::PolH => Mode::upper(&m.port),
                Channel::PolV => Mode::lower(&m.port),
                _ => m.clone(),
            }
        }))
    }
}

/// Free-function form of [`GratingMap::apply`].
pub fn apply_grating(state: &FockState, grating: &GratingMap) -> Result<FockState> {
    grating.apply(state)
}

/// Port used for the two micro-ring rails in [`rhom_source_output`].
pub const RHOM_PORT: &str = "s";

/// Outcome probabilities of the reversed-HOM separator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhomProbabilities {
    pub p11: f64,
    pub p20: f64,
    pub p02: f64,
}

/// Output of the two-ring source followed by a balanced coupler.
///
/// The input is `(a†_u² − e^{iΔφ} a†_l²)/2`, i.e. the normalized
/// `(|2,0⟩ − e^{iΔφ}|0,2⟩)/√2`, on the rails of port [`RHOM_PORT`].
pub fn rhom_source_output(delta_phi: f64) -> FockState {
    let u = Mode::upper(RHOM_PORT);
    let l = Mode::lower(RHOM_PORT);
    let input = FockState::monomial(c(0.5, 0.0), [u.clone(), u.clone()])
        .plus(&FockState::monomial(-C64::from_polar(0.5, delta_phi), [l.clone(), l.clone()]));
    make_beamsplitter(u, l, 0.5).expect("balanced coupler is valid").apply(&input)
}

/// `P(|1,1⟩)`, `P(|2,0⟩)`, `P(|0,2⟩)` of [`rhom_source_output`].
pub fn rhom_probabilities(delta_phi: f64) -> RhomProbabilities {
    let out = rhom_source_output(delta_phi);
    let u = Mode::upper(RHOM_PORT);
    let l = Mode::lower(RHOM_PORT);
    RhomProbabilities {
        p11: out.weight(&Signature::from_modes([u.clone(), l.clone()])),
        p20: out.weight(&Signature::from_counts([(u, 2)])),
        p02: out.weight(&Signature::from_counts([(l, 2)])),
    }
}

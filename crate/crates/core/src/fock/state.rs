use std::collections::btree_map::{self, BTreeMap, Entry};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64 as C64;

use super::mode::{ChannelKind, Mode};
use crate::error::{Error, Result};

/// Default magnitude below which combined amplitudes are discarded.
pub const DEFAULT_EPSILON: f64 = 1e-12;

// 0 means "not overridden".
static EPSILON_BITS: AtomicU64 = AtomicU64::new(0);

/// Current pruning epsilon.
pub fn pruning_epsilon() -> f64 {
    match EPSILON_BITS.load(Ordering::Relaxed) {
        0 => DEFAULT_EPSILON,
        bits => f64::from_bits(bits),
    }
}

/// Override the pruning epsilon for the whole process. Intended for the
/// command-line front end; library tests always run with [`DEFAULT_EPSILON`].
pub fn set_pruning_epsilon(eps: f64) {
    EPSILON_BITS.store(eps.to_bits(), Ordering::Relaxed);
}

/// Canonical occupation pattern of a monomial: `(mode, count)` pairs sorted by
/// mode, counts strictly positive. The empty signature is the vacuum.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(Vec<(Mode, u32)>);

impl Signature {
    pub fn vacuum() -> Self {
        Signature(Vec::new())
    }

    /// Builds a signature from any list of modes with counts; repeated modes
    /// are merged and zero counts dropped.
    pub fn from_counts<I: IntoIterator<Item = (Mode, u32)>>(items: I) -> Self {
        let mut map: BTreeMap<Mode, u32> = BTreeMap::new();
        for (m, c) in items {
            *map.entry(m).or_insert(0) += c;
        }
        Signature(map.into_iter().filter(|&(_, c)| c > 0).collect())
    }

    /// One photon per listed mode (repeats add up).
    pub fn from_modes<I: IntoIterator<Item = Mode>>(modes: I) -> Self {
        Signature::from_counts(modes.into_iter().map(|m| (m, 1)))
    }

    pub fn entries(&self) -> &[(Mode, u32)] {
        &self.0
    }

    pub fn count(&self, mode: &Mode) -> u32 {
        self.0.binary_search_by(|(m, _)| m.cmp(mode)).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn photon_number(&self) -> u32 {
        self.0.iter().map(|(_, c)| c).sum()
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    /// Π count!, the squared norm of the monomial acting on vacuum.
    pub fn bosonic_weight(&self) -> f64 {
        self.0.iter().map(|&(_, c)| factorial(c)).product()
    }

    /// Product of two monomials: counts add pointwise.
    pub fn merge(&self, other: &Signature) -> Signature {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Signature(out)
    }

    pub fn map_modes(&self, mut f: impl FnMut(&Mode) -> Mode) -> Signature {
        Signature::from_counts(self.0.iter().map(|(m, c)| (f(m), *c)))
    }

    /// Modes flattened with repetition, in canonical order.
    pub fn modes(&self) -> impl Iterator<Item = &Mode> {
        self.0.iter().flat_map(|(m, c)| std::iter::repeat_n(m, *c as usize))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (i, (m, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
            if *c > 1 {
                write!(f, "^{c}")?;
            }
        }
        f.write_str("⟩")
    }
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// A monomial of creation operators with a complex coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct FockTerm {
    pub signature: Signature,
    pub amplitude: C64,
}

impl FockTerm {
    pub fn new(amplitude: C64, signature: Signature) -> Self {
        FockTerm { signature, amplitude }
    }

    /// `amplitude · a†_mode`.
    pub fn creation(mode: Mode, amplitude: C64) -> Self {
        FockTerm::new(amplitude, Signature(vec![(mode, 1)]))
    }

    pub fn photon_number(&self) -> u32 {
        self.signature.photon_number()
    }

    /// Product of creation-operator monomials. Creation operators commute,
    /// so this is symmetric in its arguments.
    pub fn multiply(&self, other: &FockTerm) -> FockTerm {
        FockTerm { signature: self.signature.merge(&other.signature), amplitude: self.amplitude * other.amplitude }
    }
}

/// Free-function form of [`FockTerm::multiply`].
pub fn term_multiply(t1: &FockTerm, t2: &FockTerm) -> FockTerm {
    t1.multiply(t2)
}

/// Sparse, unnormalized multiphoton state: a polynomial in creation
/// operators applied to vacuum.
///
/// Amplitudes are the raw polynomial coefficients. The bosonic `√(n!)`
/// normalization of each Fock ket is applied only when computing inner
/// products, so `a†²|0⟩` is stored with amplitude 1 and has squared norm 2.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FockState {
    terms: BTreeMap<Signature, C64>,
}

impl FockState {
    /// The zero vector (no terms). Not the vacuum.
    pub fn zero() -> Self {
        FockState::default()
    }

    /// The vacuum state `|0⟩` with unit amplitude.
    pub fn vacuum() -> Self {
        FockState::from_term(FockTerm::new(C64::new(1.0, 0.0), Signature::vacuum()))
    }

    pub fn from_term(term: FockTerm) -> Self {
        let mut s = FockState::zero();
        s.add_term(term);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = FockTerm>>(terms: I) -> Self {
        let mut s = FockState::zero();
        for t in terms {
            s.add_term(t);
        }
        s
    }

    /// Convenience: `amp · Π a†_m` for the listed modes.
    pub fn monomial<I: IntoIterator<Item = Mode>>(amplitude: C64, modes: I) -> Self {
        FockState::from_term(FockTerm::new(amplitude, Signature::from_modes(modes)))
    }

    /// Adds a term, combining with an existing one of equal signature.
    /// Combined amplitudes below the pruning epsilon are dropped.
    pub fn add_term(&mut self, term: FockTerm) {
        self.add(term.signature, term.amplitude);
    }

    pub fn add(&mut self, signature: Signature, amplitude: C64) {
        let eps = pruning_epsilon();
        match self.terms.entry(signature) {
            Entry::Occupied(mut e) => {
                let sum = *e.get() + amplitude;
                if sum.norm() < eps {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            Entry::Vacant(e) => {
                if amplitude.norm() >= eps {
                    e.insert(amplitude);
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, signature: &Signature) -> C64 {
        self.terms.get(signature).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Signature, C64> {
        self.terms.iter()
    }

    pub fn terms(&self) -> impl Iterator<Item = FockTerm> + '_ {
        self.terms.iter().map(|(s, a)| FockTerm::new(*a, s.clone()))
    }

    /// Probability weight of one ket: `|amp|² · Π count!`.
    pub fn weight(&self, signature: &Signature) -> f64 {
        self.amplitude(signature).norm_sqr() * signature.bosonic_weight()
    }

    pub fn scale(&self, c: C64) -> FockState {
        FockState::from_terms(self.terms.iter().map(|(s, a)| FockTerm::new(a * c, s.clone())))
    }

    pub fn plus(&self, other: &FockState) -> FockState {
        let mut out = self.clone();
        for (s, a) in &other.terms {
            out.add(s.clone(), *a);
        }
        out
    }

    /// Polynomial product.
    pub fn times(&self, other: &FockState) -> FockState {
        let mut out = FockState::zero();
        for (s1, a1) in &self.terms {
            for (s2, a2) in &other.terms {
                out.add(s1.merge(s2), a1 * a2);
            }
        }
        out
    }

    /// Polynomial power; `pow(0)` is the vacuum.
    pub fn pow(&self, n: u32) -> FockState {
        let mut out = FockState::vacuum();
        for _ in 0..n {
            out = out.times(self);
        }
        out
    }

    /// Keeps terms satisfying the predicate.
    pub fn filter(&self, mut keep: impl FnMut(&Signature, C64) -> bool) -> FockState {
        FockState { terms: self.terms.iter().filter(|(s, a)| keep(s, **a)).map(|(s, a)| (s.clone(), *a)).collect() }
    }

    /// Relabels modes term by term. Terms that collide after relabeling combine.
    pub fn map_modes(&self, mut f: impl FnMut(&Mode) -> Mode) -> FockState {
        let mut out = FockState::zero();
        for (s, a) in &self.terms {
            out.add(s.map_modes(&mut f), *a);
        }
        out
    }

    /// All modes that carry at least one photon in some term.
    pub fn modes(&self) -> BTreeSet<Mode> {
        self.terms.keys().flat_map(|s| s.entries().iter().map(|(m, _)| m.clone())).collect()
    }

    /// Per-port channel kinds present in the state.
    pub fn port_kinds(&self) -> HashMap<String, BTreeSet<ChannelKind>> {
        let mut out: HashMap<String, BTreeSet<ChannelKind>> = HashMap::new();
        for m in self.modes() {
            out.entry(m.port.clone()).or_default().insert(m.channel.kind());
        }
        out
    }

    /// Bosonic squared norm: `Σ |amp|² · Π count!`.
    pub fn norm_sqr(&self) -> f64 {
        // an empty f64 sum is -0.0; start from +0.0 so vacuum reports print as 0
        self.terms.iter().fold(0.0, |acc, (s, a)| acc + a.norm_sqr() * s.bosonic_weight())
    }

    /// `⟨self|other⟩` with bosonic weights.
    pub fn inner(&self, other: &FockState) -> Result<C64> {
        check_basis(self, other)?;
        // iterate over the smaller map
        let (small, large, flip) =
            if self.terms.len() <= other.terms.len() { (self, other, false) } else { (other, self, true) };
        let mut acc = C64::new(0.0, 0.0);
        for (s, a) in &small.terms {
            if let Some(b) = large.terms.get(s) {
                let (bra, ket) = if flip { (b, a) } else { (a, b) };
                acc += bra.conj() * ket * s.bosonic_weight();
            }
        }
        Ok(acc)
    }

    pub fn normalize(&self) -> Result<FockState> {
        let n = self.norm_sqr();
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::ZeroState);
        }
        Ok(self.scale(C64::new(1.0 / n.sqrt(), 0.0)))
    }

    /// `|⟨target|self⟩|² / (‖self‖² ‖target‖²)`.
    pub fn fidelity(&self, target: &FockState) -> Result<f64> {
        let ns = self.norm_sqr();
        let nt = target.norm_sqr();
        if ns <= 0.0 || nt <= 0.0 {
            return Err(Error::ZeroState);
        }
        let ov = target.inner(self)?;
        Ok((ov.norm_sqr() / (ns * nt)).clamp(0.0, 1.0))
    }

    /// Equality up to a global phase and scale, via fidelity.
    pub fn approx_same_ray(&self, other: &FockState, tol: f64) -> bool {
        self.fidelity(other).map(|f| f >= 1.0 - tol).unwrap_or(false)
    }
}

/// Free-function form of [`FockState::inner`].
pub fn inner_product(s1: &FockState, s2: &FockState) -> Result<C64> {
    s1.inner(s2)
}

/// Free-function form of [`FockState::normalize`].
pub fn normalize(s: &FockState) -> Result<FockState> {
    s.normalize()
}

/// Free-function form of [`FockState::fidelity`].
pub fn fidelity(s: &FockState, target: &FockState) -> Result<f64> {
    s.fidelity(target)
}

fn check_basis(a: &FockState, b: &FockState) -> Result<()> {
    let ka = a.port_kinds();
    let kb = b.port_kinds();
    for (port, kinds) in &ka {
        let Some(other) = kb.get(port) else { continue };
        let rail_pol = kinds.contains(&ChannelKind::Rail) && other.contains(&ChannelKind::Polarization);
        let pol_rail = kinds.contains(&ChannelKind::Polarization) && other.contains(&ChannelKind::Rail);
        if rail_pol || pol_rail {
            return Err(Error::BasisMismatch { port: port.clone() });
        }
    }
    Ok(())
}

impl FromIterator<FockTerm> for FockState {
    fn from_iter<I: IntoIterator<Item = FockTerm>>(iter: I) -> Self {
        FockState::from_terms(iter)
    }
}

/// Renders terms in canonical order, e.g. `0.7071|H_a H_b⟩ + 0.7071|V_a V_b⟩`.
///
/// The formatter precision sets the number of decimals (default 4).
impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(4);
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let tiny = 0.5 * 10f64.powi(-(prec as i32));
        for (i, (sig, amp)) in self.terms.iter().enumerate() {
            let real_only = amp.im.abs() < tiny;
            let imag_only = amp.re.abs() < tiny && !real_only;
            let (neg, body) = if real_only {
                (amp.re < 0.0, format!("{:.prec$}", amp.re.abs()))
            } else if imag_only {
                (amp.im < 0.0, format!("{:.prec$}i", amp.im.abs()))
            } else {
                let sign = if amp.im < 0.0 { '-' } else { '+' };
                (false, format!("({:.prec$}{}{:.prec$}i)", amp.re, sign, amp.im.abs()))
            };
            match (i, neg) {
                (0, true) => write!(f, "-{body}{sig}")?,
                (0, false) => write!(f, "{body}{sig}")?,
                (_, true) => write!(f, " - {body}{sig}")?,
                (_, false) => write!(f, " + {body}{sig}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn epsilon_default_bits() {
        assert_eq!(pruning_epsilon(), DEFAULT_EPSILON);
    }

    #[test]
    fn same_mode_product() {
        let t = FockTerm::creation(Mode::upper("a"), c(1.0, 0.0));
        let p = t.multiply(&t);
        assert_eq!(p.signature, Signature::from_counts([(Mode::upper("a"), 2)]));
        assert_eq!(p.amplitude, c(1.0, 0.0));
    }

    #[test]
    fn distinct_mode_product() {
        let t1 = FockTerm::creation(Mode::upper("a"), c(0.0, 2.0));
        let t2 = FockTerm::creation(Mode::lower("b"), c(1.0, 0.0));
        let p = term_multiply(&t1, &t2);
        assert_eq!(p.signature, Signature::from_modes([Mode::upper("a"), Mode::lower("b")]));
        assert_eq!(p.amplitude, c(0.0, 2.0));
        assert_eq!(p, term_multiply(&t2, &t1));
    }

    #[test]
    fn inner_product_examples() {
        let ab = FockState::monomial(c(1.0, 0.0), [Mode::single("a"), Mode::single("b")]);
        assert_eq!(inner_product(&ab, &ab).unwrap(), c(1.0, 0.0));

        let a2 = FockState::monomial(c(1.0, 0.0), [Mode::single("a"), Mode::single("a")]);
        assert_eq!(inner_product(&a2, &a2).unwrap(), c(2.0, 0.0));

        // (a†² − b†²)/2 : 2 · (1/4) · 2! = 1
        let psi = FockState::monomial(c(0.5, 0.0), [Mode::upper("s"), Mode::upper("s")])
            .plus(&FockState::monomial(c(-0.5, 0.0), [Mode::lower("s"), Mode::lower("s")]));
        assert!((psi.inner(&psi).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn basis_mismatch_is_rejected() {
        let rail = FockState::monomial(c(1.0, 0.0), [Mode::upper("a")]);
        let pol = FockState::monomial(c(1.0, 0.0), [Mode::h("a")]);
        assert!(matches!(rail.inner(&pol), Err(Error::BasisMismatch { .. })));
        assert!(matches!(pol.fidelity(&rail), Err(Error::BasisMismatch { .. })));
        // different ports never conflict
        let other = FockState::monomial(c(1.0, 0.0), [Mode::h("b")]);
        assert_eq!(rail.inner(&other).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn normalize_examples() {
        let a2 = FockState::monomial(c(1.0, 0.0), [Mode::h("a"), Mode::h("a")]);
        let n = a2.normalize().unwrap();
        let sig = Signature::from_counts([(Mode::h("a"), 2)]);
        assert!((n.amplitude(&sig) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);

        let bell = FockState::monomial(c(1.0, 0.0), [Mode::h("a"), Mode::h("b")])
            .plus(&FockState::monomial(c(1.0, 0.0), [Mode::v("a"), Mode::v("b")]));
        let nb = bell.normalize().unwrap();
        for (_, a) in nb.iter() {
            assert!((a - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
        let again = nb.normalize().unwrap();
        for (s, a) in nb.iter() {
            assert!((again.amplitude(s) - a).norm() < 1e-12);
        }
        assert!(matches!(FockState::zero().normalize(), Err(Error::ZeroState)));
    }

    #[test]
    fn fidelity_examples() {
        let hh = FockState::monomial(c(1.0, 0.0), [Mode::h("a"), Mode::h("b")]);
        let vv = FockState::monomial(c(1.0, 0.0), [Mode::v("a"), Mode::v("b")]);
        assert!((hh.fidelity(&hh).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(hh.fidelity(&vv).unwrap(), 0.0);
        let bell = hh.plus(&vv).scale(c(FRAC_1_SQRT_2, 0.0));
        assert!((bell.fidelity(&hh).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(hh.fidelity(&FockState::zero()), Err(Error::ZeroState)));
    }

    #[test]
    fn cancellation_prunes_term() {
        let mut s = FockState::monomial(c(1.0, 0.0), [Mode::h("a")]);
        s.add_term(FockTerm::creation(Mode::h("a"), c(-1.0, 1e-14)));
        assert!(s.is_zero());
    }

    #[test]
    fn pow_zero_is_vacuum() {
        let s = FockState::monomial(c(3.0, 0.0), [Mode::h("a")]);
        assert_eq!(s.pow(0), FockState::vacuum());
        assert_eq!(FockState::vacuum().norm_sqr(), 1.0);
    }

    #[test]
    fn pretty_printer() {
        let bell = FockState::monomial(c(1.0, 0.0), [Mode::h("a"), Mode::h("b")])
            .plus(&FockState::monomial(c(-1.0, 0.0), [Mode::v("a"), Mode::v("b")]))
            .normalize()
            .unwrap();
        assert_eq!(bell.to_string(), "0.7071|H_a H_b⟩ - 0.7071|V_a V_b⟩");
        let odd = FockState::monomial(c(0.0, 0.5), [Mode::upper("s"), Mode::upper("s")])
            .plus(&FockState::monomial(c(0.5, -0.5), [Mode::lower("s")]));
        assert_eq!(format!("{odd:.2}"), "0.50i|u_s^2⟩ + (0.50-0.50i)|l_s⟩");
        assert_eq!(FockState::zero().to_string(), "0");
    }
}

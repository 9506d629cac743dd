//! Chip layouts for the Bell, GHZ and three-photon W circuits.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;

use super::{Circuit, DetectorGroup, Element};
use crate::error::{Error, Result};
use crate::fock::{Channel, FockState, Mode};
use crate::optics::{mzi_theta_for_cross, GratingMap, PairSource};

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Output port names: `a`, `b`, … `z`, then `p26`, `p27`, ….
pub fn port_name(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("p{i}")
    }
}

/// One crystal of the GHZ path-identity ring: it feeds `ports` with the
/// given qubit labels (0 = upper rail / H, 1 = lower rail / V).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhzEdge {
    pub ports: (usize, usize),
    pub labels: (u8, u8),
}

/// Crystal layout shared by [`build_ghz_circuit`] and the GHZ experiment graph.
///
/// The `N` ports form the ring `p0, p2, p3, …, p(N−1), p1`. Alternate ring
/// edges make up the two perfect matchings, so exactly two emission events
/// fire all `N` detectors. For `N = 4` this is the ring `a-c-d-b` with
/// crystals `H_aH_c`, `V_bH_d` (first event) and `V_aH_b`, `V_cV_d` (second
/// event). Port `b` carries the opposite label from the rest for `N ≥ 4`;
/// for `N = 2` the ring collapses to two parallel crystals `HH` and `VV`.
///
/// Edges come back ordered: first-event crystals, then second-event
/// crystals, each sorted by port pair. Source `k` of the circuit is edge
/// `k − 1`.
pub fn ghz_layout(n: usize) -> Result<Vec<GhzEdge>> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::GhzParity(n));
    }
    if n == 2 {
        return Ok(vec![GhzEdge { ports: (0, 1), labels: (0, 0) }, GhzEdge { ports: (0, 1), labels: (1, 1) }]);
    }
    let mut ring = vec![0];
    ring.extend(2..n);
    ring.push(1);
    // value of each port in the first term; the second term is its complement
    let first = |p: usize| u8::from(p == 1);
    let mut events: [Vec<GhzEdge>; 2] = [Vec::new(), Vec::new()];
    for k in 0..n {
        let (u, v) = (ring[k], ring[(k + 1) % n]);
        let (u, v) = (u.min(v), u.max(v));
        let flip = (k % 2) as u8;
        events[k % 2].push(GhzEdge { ports: (u, v), labels: (first(u) ^ flip, first(v) ^ flip) });
    }
    for e in &mut events {
        e.sort_by_key(|g| g.ports);
    }
    let [a, b] = events;
    Ok(a.into_iter().chain(b).collect())
}

/// The two-term state the GHZ layout post-selects to, normalized.
pub fn ghz_target(n: usize) -> Result<FockState> {
    ghz_layout(n)?;
    let first = |p: usize| u8::from(n >= 4 && p == 1);
    let term = |flip: u8| {
        FockState::monomial(one(), (0..n).map(|p| Mode::new(port_name(p), Channel::polarization(first(p) ^ flip))))
    };
    term(0).plus(&term(1)).normalize()
}

/// GHZ chip: one idealized source per ring crystal feeding grating rails,
/// a 2D grating on every port, `N`-fold coincidence over `N/2` pairs.
pub fn build_ghz_circuit(n: usize) -> Result<Circuit> {
    let layout = ghz_layout(n)?;
    let rail = |p: usize, l: u8| Mode::new(port_name(p), Channel::rail(l));
    let sources = layout
        .iter()
        .enumerate()
        .map(|(k, e)| {
            PairSource::pair((k + 1).to_string(), rail(e.ports.0, e.labels.0), rail(e.ports.1, e.labels.1), one())
        })
        .collect();
    let ports: Vec<String> = (0..n).map(port_name).collect();
    Ok(Circuit {
        modes: ports.iter().flat_map(|p| [Mode::upper(p), Mode::lower(p)]).collect(),
        sources,
        elements: ports.iter().map(|p| Element::Grating(GratingMap::new(p))).collect(),
        detectors: ports.iter().map(DetectorGroup::polarization).collect(),
        pairs: (n / 2) as u32,
        target: Some(ghz_target(n)?),
    })
}

/// Two coherently pumped sources feeding `HH` and `VV` with pumps `alpha`
/// and `beta`.
pub fn bell_circuit(alpha: C64, beta: C64) -> Circuit {
    let mut c = build_ghz_circuit(2).expect("N = 2 is valid");
    c.sources[0].pump = alpha;
    c.sources[1].pump = beta;
    c.target = Some(bell_target(alpha, beta));
    c
}

/// `α|H_a H_b⟩ + β|V_a V_b⟩`, unnormalized.
pub fn bell_target(alpha: C64, beta: C64) -> FockState {
    FockState::monomial(alpha, [Mode::h("a"), Mode::h("b")])
        .plus(&FockState::monomial(beta, [Mode::v("a"), Mode::v("b")]))
}

/// `W_N` on the given ports (label 1 = V on exactly one port), optionally
/// tensored with `V` on each trigger port. Normalized.
pub fn w_target(ports: &[String], triggers: &[String]) -> Result<FockState> {
    let mut s = FockState::zero();
    for k in 0..ports.len() {
        let modes = ports
            .iter()
            .enumerate()
            .map(|(i, p)| Mode::new(p, Channel::polarization(u8::from(i == k))))
            .chain(triggers.iter().map(Mode::v));
        s = s.plus(&FockState::monomial(one(), modes));
    }
    s.normalize()
}

/// `(|H_aH_bV_c⟩ + |H_aV_bH_c⟩ + |V_aH_bH_c⟩)|V_d⟩ / √3`.
pub fn w3_target() -> FockState {
    let ports: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
    w_target(&ports, &["d".to_string()]).expect("non-empty")
}

/// Tunable MZI angles of the three-photon W chip.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct W3Settings {
    /// First MZI: splits the heralded photon from `c` toward `a`.
    pub theta_first: f64,
    /// Second MZI: splits the remainder between `c` and `b`.
    pub theta_second: f64,
}

impl Default for W3Settings {
    /// Cross probabilities 1/3 then 1/2: one third to each of `a`, `b`, `c`.
    fn default() -> Self {
        W3Settings { theta_first: mzi_theta_for_cross(1.0 / 3.0), theta_second: mzi_theta_for_cross(0.5) }
    }
}

/// Three-photon W chip.
///
/// * Sources 1, 2, 3 each feed two of the upper rails `a`, `b`, `c`
///   (pairs `ac`, `ab`, `bc`). Each upper rail is shared by two sources
///   through a balanced MMI whose second output is a dump waveguide, so
///   each photon reaches its grating with probability 1/2.
/// * Source 4 sends one photon to `d` (read out as `V_d`) and one into the
///   lower rail of `c`, from where two MZIs split it over the lower rails
///   of `a`, `b`, `c`.
/// * Phase trims on the cross-coupled MMI inputs and on `l_a` give the
///   three coincidence processes equal phase.
pub fn build_w3_circuit(settings: W3Settings) -> Result<Circuit> {
    let m = |s: &str| s.parse::<Mode>().expect("static mode literal");
    let modes = ["u_a", "l_a", "u_b", "l_b", "u_c", "l_c", "l_d", "s2a", "s3b", "s3c"].map(m).to_vec();
    let sources = vec![
        PairSource::pair("1", m("u_a"), m("u_c"), one()),
        PairSource::pair("2", m("s2a"), m("u_b"), one()),
        PairSource::pair("3", m("s3b"), m("s3c"), one()),
        PairSource::pair("4", m("l_c"), m("l_d"), one()),
    ];
    let mut elements = vec![
        Element::Phase { mode: m("s2a"), phi: -FRAC_PI_2 },
        Element::Phase { mode: m("s3b"), phi: -FRAC_PI_2 },
        Element::Phase { mode: m("s3c"), phi: -FRAC_PI_2 },
        Element::Mmi { modes: [m("u_a"), m("s2a")] },
        Element::Mmi { modes: [m("u_b"), m("s3b")] },
        Element::Mmi { modes: [m("u_c"), m("s3c")] },
        Element::Mzi { modes: [m("l_c"), m("l_a")], theta: settings.theta_first, phi: 0.0 },
        Element::Mzi { modes: [m("l_c"), m("l_b")], theta: settings.theta_second, phi: 0.0 },
        Element::Phase { mode: m("l_a"), phi: settings.theta_second / 2.0 },
    ];
    elements.extend(["a", "b", "c", "d"].map(|p| Element::Grating(GratingMap::new(p))));
    Ok(Circuit {
        modes,
        sources,
        elements,
        detectors: vec![
            DetectorGroup::polarization("a"),
            DetectorGroup::polarization("b"),
            DetectorGroup::polarization("c"),
            DetectorGroup::new("d", vec![m("V_d")]),
        ],
        pairs: 2,
        target: Some(w3_target()),
    })
}

//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p pathid --test acceptance -- --nocapture --test-threads 1`
//! to see them in order.

mod common;

use std::f64::consts::{PI, TAU};

use common::*;
use num_complex::Complex64 as C64;
use pathid::circuit::{
    self, bell_circuit, bell_target, build_ghz_circuit, build_w3_circuit, expand_pairs, ghz_target, postselect,
    w3_target, w_target, W3Settings,
};
use pathid::fock::Signature;
use pathid::graph::{ghz_graph, verify_equivalence, w_graph, ExperimentGraph};
use pathid::optics::{rhom_probabilities, LinearElement};
use pathid::FockState;
use rand::Rng;

fn verdict(id: u32, name: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] {id:>2}. {name}: {detail}");
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_rhom_curve() {
    let mut worst11: f64 = 0.0;
    let mut worst_bunched: f64 = 0.0;
    for k in 0..=100 {
        let dphi = TAU * k as f64 / 100.0;
        let p = rhom_probabilities(dphi);
        worst11 = worst11.max((p.p11 - (dphi / 2.0).sin().powi(2)).abs());
        worst_bunched = worst_bunched.max((p.p20 + p.p02 - (dphi / 2.0).cos().powi(2)).abs());
    }
    verdict(
        1,
        "RHOM curve",
        worst11 <= 1e-12 && worst_bunched <= 1e-12,
        format!(
            "max |P11 - sin^2| = {worst11:.2e}, max |P20+P02 - cos^2| = {worst_bunched:.2e} (tol 1e-12, 101 points)"
        ),
    );
}

#[test]
fn criterion_02_bell_any_pump() {
    let mut rng = rng();
    let mut pumps = vec![(c(1.0, 0.0), c(1.0, 0.0))];
    while pumps.len() < 20 {
        pumps.push((random_complex(&mut rng), random_complex(&mut rng)));
    }
    let mut worst: f64 = 1.0;
    for (a, b) in pumps {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (a, b) = (a / n, b / n);
        let r = bell_circuit(a, b).run().unwrap();
        let f = r.postselected_state.unwrap().fidelity(&bell_target(a, b)).unwrap();
        worst = worst.min(f);
    }
    verdict(
        2,
        "Bell state from two pumped sources",
        worst >= 1.0 - 1e-10,
        format!("min fidelity over 20 pumps = {worst:.15}"),
    );
}

#[test]
fn criterion_03_ghz4() {
    let c = build_ghz_circuit(4).unwrap();
    let r = c.run().unwrap();
    let state = r.postselected_state.clone().unwrap();
    let f = state.fidelity(&ghz_target(4).unwrap()).unwrap();

    // doubles only: every source firing twice, nothing else
    let doubles = c
        .sources
        .iter()
        .map(|s| s.weighted().pow(2).scale(C64::new(0.5, 0.0)))
        .fold(FockState::zero(), |acc, s| acc.plus(&s));
    let doubles_kept = postselect(&c.propagate(&doubles).unwrap(), &c.detectors).state.norm_sqr();
    let ids: Vec<String> = c.sources.iter().map(|s| s.id.clone()).collect();
    let double_process_max = ids.iter().map(|id| c.per_process_probability(&[id, id]).unwrap()).fold(0.0, f64::max);

    let pass = f >= 1.0 - 1e-10 && state.len() == 2 && doubles_kept == 0.0 && double_process_max == 0.0;
    verdict(
        3,
        "GHZ_4 four-fold state",
        pass,
        format!(
            "fidelity = {f:.15}, surviving signatures = {}, double-emission weight after coincidence = {doubles_kept}",
            state.len()
        ),
    );
}

#[test]
fn criterion_04_ghz_scaling() {
    let mut lines = Vec::new();
    let mut pass = true;
    for n in [2, 4, 6, 8] {
        let circuit = build_ghz_circuit(n).unwrap();
        let graph = ghz_graph(n).unwrap();
        let eq = verify_equivalence(&graph, &circuit).unwrap();
        let cs = eq.circuit_state.clone().unwrap();
        let gs = eq.graph_state.clone().unwrap();
        let halves = |s: &FockState| s.len() == 2 && s.iter().all(|(sig, _)| (s.weight(sig) - 0.5).abs() <= 1e-12);
        let ok = eq.pass && eq.fidelity >= 1.0 - 1e-9 && halves(&cs) && halves(&gs);
        pass &= ok;
        lines.push(format!("N={n}: F={:.12} terms={}/{}", eq.fidelity, cs.len(), gs.len()));
    }
    verdict(4, "GHZ_N circuit vs graph", pass, lines.join("; "));
}

#[test]
fn criterion_05_w3_graph() {
    let g = w_graph(3).unwrap();
    // and the same graph written out by hand
    let one = c(1.0, 0.0);
    let mut hand = ExperimentGraph::new(["a", "b", "c", "d"]).unwrap();
    for (u, v) in [("a", "b"), ("a", "c"), ("b", "c")] {
        hand.add_edge(u, v, one, (0, 0)).unwrap();
    }
    for u in ["a", "b", "c"] {
        hand.add_edge(u, "d", one, (1, 1)).unwrap();
    }
    hand.set_triggers(&["d"]).unwrap();
    let target = w_target(&["a", "b", "c"].map(String::from), &[]).unwrap();
    let f_gen = g.projected_state().unwrap().fidelity(&target).unwrap();
    let f_hand = hand.projected_state().unwrap().fidelity(&target).unwrap();
    verdict(
        5,
        "W_3 from the four-vertex graph",
        f_gen >= 1.0 - 1e-10 && f_hand >= 1.0 - 1e-10,
        format!("fidelity (builder) = {f_gen:.15}, fidelity (hand graph) = {f_hand:.15}"),
    );
}

#[test]
fn criterion_06_w3_chip() {
    let c = build_w3_circuit(W3Settings::default()).unwrap();
    let r = c.run_with_breakdown().unwrap();
    let f = r.postselected_state.as_ref().unwrap().fidelity(&w3_target()).unwrap();
    let rows = r.per_process_breakdown.clone().unwrap();
    let processes: Vec<Vec<String>> = rows.iter().map(|p| p.sources.clone()).collect();
    let expected: Vec<Vec<String>> =
        [["1", "4"], ["2", "4"], ["3", "4"]].iter().map(|p| p.map(String::from).to_vec()).collect();
    let worst = rows.iter().map(|p| (p.probability - 1.0 / 12.0).abs()).fold(0.0, f64::max);
    let summed = r.summed_process_probability().unwrap();
    let pass = f >= 1.0 - 1e-10 && processes == expected && worst <= 1e-10;
    verdict(
        6,
        "W_3 chip",
        pass,
        format!(
            "fidelity = {f:.15}; per-process {} each within {worst:.1e} of 1/12; summed per-process probability = {summed:.12} \
             (expected 1/4); n-pair-sector coincidence probability = {:.12}",
            rows.iter().map(|p| format!("{{{}}}", p.sources.join(","))).collect::<Vec<_>>().join(" "),
            r.success_probability
        ),
    );
}

#[test]
fn criterion_07_w_family() {
    let mut pass = true;
    let mut lines = Vec::new();
    for n in [3, 5, 7] {
        let g = w_graph(n).unwrap();
        let s = g.projected_state().unwrap();
        let ports: Vec<String> = (0..n).map(circuit::port_name).collect();
        let f = s.fidelity(&w_target(&ports, &[]).unwrap()).unwrap();
        let even = s.iter().all(|(sig, _)| (s.weight(sig) - 1.0 / n as f64).abs() <= 1e-12);
        let ok = s.len() == n && even && f >= 1.0 - 1e-10;
        pass &= ok;
        lines.push(format!("N={n}: {}-fold, terms={}, F={f:.12}", g.vertices().len(), s.len()));
    }
    verdict(7, "odd-N W graph family", pass, lines.join("; "));
}

#[test]
fn criterion_08_oracle_equivalence() {
    let mut rng = rng();
    let mut both_zero = 0;
    let mut worst: f64 = 1.0;
    let mut mismatches = Vec::new();
    let mut checked = 0;
    while checked < 50 {
        let n = rng.gen_range(2..=8);
        let g = random_graph(&mut rng, n);
        if g.edges().is_empty() {
            continue;
        }
        checked += 1;
        let gs = g.state().normalized;
        let cs = g.to_circuit().unwrap().run().unwrap().postselected_state;
        match (&gs, &cs) {
            (Some(a), Some(b)) => worst = worst.min(a.fidelity(b).unwrap()),
            (None, None) => both_zero += 1,
            _ => mismatches.push(format!("graph #{checked} ({n} vertices): one side zero")),
        }
    }
    verdict(
        8,
        "graph vs edge-per-source circuit (50 random graphs)",
        mismatches.is_empty() && worst >= 1.0 - 1e-9,
        format!("seed {}, min fidelity = {worst:.15}, both-zero = {both_zero}, mismatches = {mismatches:?}", seed()),
    );
}

#[test]
fn criterion_09_matching_counts() {
    let mut pass = true;
    let mut lines = Vec::new();
    for k in 1..=5 {
        let g = complete_graph(2 * k);
        let fast = g.perfect_matchings();
        let brute = brute_force_matchings(&g);
        let expect = double_factorial_odd(2 * k - 1);
        pass &= fast.len() == expect && fast == brute;
        lines.push(format!("K{}: {} (brute {}, (2n-1)!! {expect})", 2 * k, fast.len(), brute.len()));
    }
    verdict(9, "perfect matchings of K_2n", pass, lines.join("; "));
}

#[test]
fn criterion_10_algebra_invariants() {
    let mut rng = rng();
    let mut worst_norm: f64 = 0.0;
    let mut worst_sym: f64 = 0.0;
    for _ in 0..1000 {
        let k = rng.gen_range(1..=4);
        let pool = modes(k);
        let s = random_state(&mut rng, &pool, 4);
        let u = LinearElement::new(pool.clone(), random_unitary(&mut rng, k)).unwrap();
        let out = u.apply(&s);
        worst_norm = worst_norm.max((out.norm_sqr() - s.norm_sqr()).abs());
        let t = random_state(&mut rng, &pool, 4);
        let lhs = s.inner(&t).unwrap();
        let rhs = t.inner(&s).unwrap().conj();
        worst_sym = worst_sym.max((lhs - rhs).norm());
    }
    verdict(
        10,
        "algebra invariants (1000 random states)",
        worst_norm <= 1e-10 && worst_sym <= 1e-12,
        format!("max norm drift = {worst_norm:.2e} (tol 1e-10), max conj-symmetry error = {worst_sym:.2e} (tol 1e-12)"),
    );
}

#[test]
fn sector_bookkeeping_is_consistent() {
    // the whole-sector coincidence probability equals the sum of process
    // probabilities weighted by each event's share of the n-pair norm
    let c = build_w3_circuit(W3Settings::default()).unwrap();
    let total = expand_pairs(&c.sources, 2).norm_sqr();
    let r = c.run_with_breakdown().unwrap();
    let weighted: f64 = r
        .per_process_breakdown
        .unwrap()
        .iter()
        .map(|p| {
            let ids: Vec<&str> = p.sources.iter().map(String::as_str).collect();
            let ev = ids
                .iter()
                .map(|id| c.sources.iter().find(|s| &s.id == id).unwrap().emission().clone())
                .fold(FockState::vacuum(), |a, e| a.times(&e));
            p.probability * ev.norm_sqr() / total
        })
        .sum();
    assert!((weighted - r.success_probability).abs() < 1e-12);
    assert!((r.success_probability - 1.0 / 40.0).abs() < 1e-12);
    let _ = (PI, Signature::vacuum());
}

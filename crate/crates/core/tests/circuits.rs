mod common;

use common::*;
use itertools::Itertools;
use pathid::circuit::{
    bell_circuit, build_ghz_circuit, build_w3_circuit, expand_pairs, ghz_target, postselect_pattern, w3_target,
    W3Settings,
};
use pathid::fock::{FockState, Mode, Signature};
use pathid::graph::{ghz_graph, verify_equivalence, w_graph};
use pathid::optics::mzi_theta_for_cross;
use rand::Rng;

#[test]
fn bell_run_has_two_signatures() {
    let r = bell_circuit(c(1.0, 0.0), c(0.0, 1.0)).run().unwrap();
    let s = r.postselected_state.unwrap();
    assert_eq!(s.len(), 2);
    assert!((r.fidelity.unwrap() - 1.0).abs() <= 1e-12);
    // single pairs land on both detectors; half of the n = 1 sector
    assert!(r.success_probability > 0.0 && r.success_probability <= 1.0);
}

#[test]
fn ghz4_report() {
    let r = build_ghz_circuit(4).unwrap().run().unwrap();
    assert!((r.fidelity.unwrap() - 1.0).abs() <= 1e-12);
    assert!((r.postselected_state.unwrap().fidelity(&ghz_target(4).unwrap()).unwrap() - 1.0).abs() <= 1e-12);
    assert!(r.raw_term_count > 2);
}

#[test]
fn w3_processes_are_one_twelfth_each() {
    let c = build_w3_circuit(W3Settings::default()).unwrap();
    for p in [["1", "4"], ["2", "4"], ["3", "4"]] {
        assert!((c.per_process_probability(&p).unwrap() - 1.0 / 12.0).abs() <= 1e-12);
    }
    for p in [["1", "2"], ["1", "1"], ["4", "4"], ["2", "3"]] {
        assert!(c.per_process_probability(&p).unwrap().abs() <= 1e-15, "{p:?}");
    }
    assert!(c.per_process_probability(&["1"]).is_err());
    assert!(c.per_process_probability(&["1", "9"]).is_err());
}

#[test]
fn detuned_w3_is_unbalanced() {
    let settings = W3Settings { theta_first: mzi_theta_for_cross(0.5), ..W3Settings::default() };
    let r = build_w3_circuit(settings).unwrap().run().unwrap();
    let s = r.postselected_state.unwrap().normalize().unwrap();
    assert!(r.fidelity.unwrap() < 0.99);
    let sig = |m: [&str; 4]| Signature::from_modes(m.map(|x| x.parse::<Mode>().unwrap()));
    assert!((s.weight(&sig(["V_a", "H_b", "H_c", "V_d"])) - 0.5).abs() <= 1e-12);
    assert!((s.weight(&sig(["H_a", "V_b", "H_c", "V_d"])) - 0.25).abs() <= 1e-12);
    assert!((s.weight(&sig(["H_a", "H_b", "V_c", "V_d"])) - 0.25).abs() <= 1e-12);
}

#[test]
fn global_pump_phase_and_scale_do_not_change_the_state() {
    let base = build_w3_circuit(W3Settings::default()).unwrap();
    let r0 = base.run().unwrap();
    let mut rng = rng();
    for _ in 0..5 {
        // phase only: the sector probability is unchanged too
        let ph = c(0.0, rng.gen_range(0.0..std::f64::consts::TAU)).exp();
        let r = base.scale_pumps(ph).run().unwrap();
        assert!((r.success_probability - r0.success_probability).abs() <= 1e-12);
        assert!((r.fidelity.unwrap() - 1.0).abs() <= 1e-12);
        let k = c(rng.gen_range(0.1..5.0), 0.0);
        let r = base.scale_pumps(k).run().unwrap();
        assert!((r.success_probability - r0.success_probability).abs() <= 1e-12);
        let a = r.postselected_state.unwrap().normalize().unwrap();
        assert!(a.approx_same_ray(&r0.postselected_state.clone().unwrap().normalize().unwrap(), 1e-10));
    }
}

#[test]
fn exclusive_click_patterns_sum_to_at_most_one() {
    let c = build_ghz_circuit(4).unwrap();
    let out = c.propagate(&expand_pairs(&c.sources, 2)).unwrap();
    let mut total = 0.0;
    for pattern in (0..4).map(|_| 0u32..=4).multi_cartesian_product() {
        total += postselect_pattern(&out, &c.detectors, &pattern).probability;
    }
    assert!(total <= 1.0 + 1e-12);
    assert!((total - 1.0).abs() <= 1e-12, "every photon lands on some detector");
}

#[test]
fn builders_agree_with_their_graphs() {
    for n in [2, 4, 6] {
        let eq = verify_equivalence(&ghz_graph(n).unwrap(), &build_ghz_circuit(n).unwrap()).unwrap();
        assert!(eq.pass, "GHZ {n}: {}", eq.fidelity);
    }
    let eq = verify_equivalence(&w_graph(3).unwrap(), &build_w3_circuit(W3Settings::default()).unwrap()).unwrap();
    assert!(eq.pass, "W3: {}", eq.fidelity);
    let fail = verify_equivalence(&ghz_graph(4).unwrap(), &build_w3_circuit(W3Settings::default()).unwrap()).unwrap();
    assert!(!fail.pass);
}

#[test]
fn w3_target_has_three_terms() {
    let t = w3_target();
    assert_eq!(t.len(), 3);
    assert!(t.iter().all(|(sig, _)| (t.weight(sig) - 1.0 / 3.0).abs() <= 1e-12));
    assert_eq!(FockState::zero().len(), 0);
}

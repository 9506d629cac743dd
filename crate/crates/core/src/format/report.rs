//! Human-readable and JSON reports. JSON numbers are rounded to 12
//! significant digits.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::circuit::SimulationReport;
use crate::fock::FockState;
use crate::graph::{Equivalence, ExperimentGraph, GraphState, Matching};

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn num(x: f64) -> Value {
    json!(round_sig(x))
}

/// `{"terms": [[["H_a", ...], [re, im]], ...]}`.
pub fn state_json(s: &FockState) -> Value {
    let terms: Vec<Value> = s
        .iter()
        .map(|(sig, a)| {
            let modes: Vec<String> = sig.modes().map(|m| m.to_string()).collect();
            json!([modes, [round_sig(a.re), round_sig(a.im)]])
        })
        .collect();
    json!({ "terms": terms })
}

pub fn report_json(r: &SimulationReport) -> Value {
    json!({
        "command": "simulate",
        "empty": r.is_empty(),
        "probability": num(r.success_probability),
        "raw_term_count": r.raw_term_count,
        "postselected": r.postselected_state.as_ref().map(state_json),
        "fidelity": r.fidelity.map(round_sig),
        "breakdown": r.per_process_breakdown.as_ref().map(|rows| {
            rows.iter()
                .map(|p| json!({ "sources": p.sources, "probability": num(p.probability) }))
                .collect::<Vec<_>>()
        }),
        "summed_process_probability": r.summed_process_probability().map(round_sig),
    })
}

fn state_lines(out: &mut String, s: &FockState) {
    for (sig, a) in s.iter() {
        if a.im.abs() < 5e-13 {
            writeln!(out, "  {:+.12}  {sig}", a.re).unwrap();
        } else {
            writeln!(out, "  ({:+.12}{:+.12}i)  {sig}", a.re, a.im).unwrap();
        }
    }
}

/// Plain-text report with amplitudes and probabilities to 12 decimals.
pub fn simulation_table(r: &SimulationReport) -> String {
    let mut out = String::new();
    match &r.postselected_state {
        Some(s) => {
            out.push_str("post-selected state\n");
            state_lines(&mut out, s);
        }
        None => out.push_str("post-selected state: none (coincidence never fires)\n"),
    }
    writeln!(out, "probability   {:.12}", r.success_probability).unwrap();
    writeln!(out, "raw terms     {}", r.raw_term_count).unwrap();
    if let Some(f) = r.fidelity {
        writeln!(out, "fidelity      {f:.12}").unwrap();
    }
    if let Some(rows) = &r.per_process_breakdown {
        out.push_str("process       probability\n");
        for p in rows {
            writeln!(out, "  {:<11} {:.12}", p.sources.join(" "), p.probability).unwrap();
        }
        writeln!(out, "summed        {:.12}", r.summed_process_probability().unwrap_or(0.0)).unwrap();
    }
    out
}

pub fn graph_state_json(gs: &GraphState, projected: Option<&FockState>) -> Value {
    json!({
        "command": "graph-state",
        "matchings": gs.matching_count,
        "state": gs.normalized.as_ref().map(state_json),
        "unnormalized": state_json(&gs.unnormalized),
        "projected": projected.map(state_json),
    })
}

fn describe_edge(g: &ExperimentGraph, e: usize) -> String {
    let e = &g.edges()[e];
    format!("{}-{}({},{})", g.vertices()[e.u], g.vertices()[e.v], e.label_u, e.label_v)
}

/// Matchings as lists of `u-v(lu,lv)` strings.
pub fn matchings_json(g: &ExperimentGraph, ms: &[Matching]) -> Value {
    let rows: Vec<Vec<String>> = ms.iter().map(|m| m.iter().map(|&e| describe_edge(g, e)).collect()).collect();
    json!({ "command": "matchings", "count": ms.len(), "matchings": rows })
}

pub fn equivalence_json(eq: &Equivalence) -> Value {
    json!({
        "command": "verify",
        "fidelity": num(eq.fidelity),
        "pass": eq.pass,
        "graph_state": eq.graph_state.as_ref().map(state_json),
        "circuit_state": eq.circuit_state.as_ref().map(state_json),
    })
}

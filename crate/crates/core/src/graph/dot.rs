use std::fmt::Write;

use super::ExperimentGraph;

/// Graphviz export. Orange (`0,0`) and green (`1,1`) edges keep their colour;
/// mixed-label edges are drawn black. Endpoint labels go in `taillabel` /
/// `headlabel`, weights in `weight_re` / `weight_im`.
pub fn to_dot(g: &ExperimentGraph) -> String {
    let mut out = String::from("graph experiment {\n");
    let triggers = g.triggers();
    for v in g.vertices() {
        let shape = if triggers.contains(&v.as_str()) { "doublecircle" } else { "circle" };
        writeln!(out, "  \"{v}\" [shape={shape}];").unwrap();
    }
    for e in g.edges() {
        let color = match (e.label_u, e.label_v) {
            (0, 0) => "orange",
            (1, 1) => "green",
            _ => "black",
        };
        writeln!(
            out,
            "  \"{}\" -- \"{}\" [color={color}, taillabel=\"{}\", headlabel=\"{}\", weight_re={}, weight_im={}];",
            g.vertices()[e.u],
            g.vertices()[e.v],
            e.label_u,
            e.label_v,
            e.weight.re,
            e.weight.im
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

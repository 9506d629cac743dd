//! Generated graph families.

use num_complex::Complex64 as C64;

use super::ExperimentGraph;
use crate::circuit::{ghz_layout, port_name};
use crate::error::{Error, Result};

/// GHZ ring graph with the same crystals as the GHZ chip builder.
///
/// For `N = 2` this is one orange and one green edge between `a` and `b`.
/// For `N ≥ 4` it is an `N`-cycle with exactly two perfect matchings.
pub fn ghz_graph(n: usize) -> Result<ExperimentGraph> {
    let layout = ghz_layout(n)?;
    let mut g = ExperimentGraph::new((0..n).map(port_name))?;
    for e in layout {
        g.add_edge(&port_name(e.ports.0), &port_name(e.ports.1), C64::new(1.0, 0.0), e.labels)?;
    }
    Ok(g)
}

/// Odd-`N` W-state graph with one trigger vertex.
///
/// W vertices are `a, b, …` and the trigger is the next letter (`d` for
/// `N = 3`). Orange edges form a chain of triangles
/// `(w1 w2 w3), (w3 w4 w5), …` where consecutive triangles share one vertex,
/// and every W vertex has a green edge to the trigger. Every matching uses
/// exactly one green edge, and removing any single W vertex leaves the
/// triangle chain with exactly one perfect matching, so each of the `N`
/// single-excitation kets appears once with unit weight.
pub fn w_graph(n: usize) -> Result<ExperimentGraph> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::WParity(n));
    }
    let one = C64::new(1.0, 0.0);
    let trigger = port_name(n);
    let mut g = ExperimentGraph::new((0..=n).map(port_name))?;
    for k in (0..n - 1).step_by(2) {
        let (x, y, z) = (port_name(k), port_name(k + 1), port_name(k + 2));
        g.add_edge(&x, &y, one, (0, 0))?;
        g.add_edge(&x, &z, one, (0, 0))?;
        g.add_edge(&y, &z, one, (0, 0))?;
    }
    for k in 0..n {
        g.add_edge(&port_name(k), &trigger, one, (1, 1))?;
    }
    g.set_triggers(&[trigger.as_str()])?;
    Ok(g)
}

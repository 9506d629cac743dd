#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use pathid::{ExperimentGraph, FockState, Mode, Signature};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed for randomized suites; override with `PATHID_SEED`.
pub fn seed() -> u64 {
    std::env::var("PATHID_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(42)
}

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed())
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_complex(rng: &mut impl Rng) -> C64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Haar-ish random unitary: Gram-Schmidt on a random complex matrix.
pub fn random_unitary(rng: &mut impl Rng, k: usize) -> DMatrix<C64> {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(k);
    while cols.len() < k {
        let mut v: Vec<C64> = (0..k).map(|_| random_complex(rng)).collect();
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-6 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    DMatrix::from_fn(k, k, |r, col| cols[col][r])
}

pub fn modes(k: usize) -> Vec<Mode> {
    (0..k).map(|i| Mode::single(format!("m{i}"))).collect()
}

/// Random state over `pool` with up to `max_terms` terms of 1..=3 photons.
pub fn random_state(rng: &mut impl Rng, pool: &[Mode], max_terms: usize) -> FockState {
    let mut s = FockState::zero();
    let n_terms = rng.gen_range(1..=max_terms);
    for _ in 0..n_terms {
        let photons = rng.gen_range(1..=3);
        let picked: Vec<Mode> = (0..photons).map(|_| pool.choose(rng).unwrap().clone()).collect();
        s.add(Signature::from_modes(picked), random_complex(rng));
    }
    if s.is_zero() {
        s = FockState::monomial(c(1.0, 0.0), [pool[0].clone()]);
    }
    s
}

/// Complete graph on `n` vertices with orange edges and unit weights.
pub fn complete_graph(n: usize) -> ExperimentGraph {
    let names: Vec<String> = (0..n).map(pathid::circuit::port_name).collect();
    let mut g = ExperimentGraph::new(names.clone()).unwrap();
    for i in 0..n {
        for j in i + 1..n {
            g.add_edge(&names[i], &names[j], c(1.0, 0.0), (0, 0)).unwrap();
        }
    }
    g
}

/// Independent perfect-matching count: every `n/2`-subset of edges checked
/// for covering each vertex exactly once.
pub fn brute_force_matchings(g: &ExperimentGraph) -> Vec<Vec<usize>> {
    let n = g.vertices().len();
    if n % 2 == 1 {
        return Vec::new();
    }
    let k = n / 2;
    let m = g.edges().len();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    loop {
        let mut seen = vec![false; n];
        let ok = idx.iter().all(|&e| {
            let ed = &g.edges()[e];
            let fresh = !seen[ed.u] && !seen[ed.v];
            seen[ed.u] = true;
            seen[ed.v] = true;
            fresh
        });
        if ok {
            out.push(idx.clone());
        }
        // next combination
        let mut i = k;
        while i > 0 && idx[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// Random graph on `n` vertices: random subset of (pair, label-pair)
/// combinations, random complex weights.
pub fn random_graph(rng: &mut impl Rng, n: usize) -> ExperimentGraph {
    let names: Vec<String> = (0..n).map(pathid::circuit::port_name).collect();
    let mut g = ExperimentGraph::new(names.clone()).unwrap();
    let density = rng.gen_range(0.15..0.5);
    for i in 0..n {
        for j in i + 1..n {
            for lu in 0..2u8 {
                for lv in 0..2u8 {
                    if rng.gen_bool(density / 2.0) {
                        g.add_edge(&names[i], &names[j], random_complex(rng), (lu, lv)).unwrap();
                    }
                }
            }
        }
    }
    g
}

pub fn double_factorial_odd(n: usize) -> usize {
    (1..=n).step_by(2).product()
}

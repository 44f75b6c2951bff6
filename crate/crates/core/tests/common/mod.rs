//! Brute-force oracles shared by the integration tests. None of them touches
//! the simplex code, the branch-and-bound or the heuristics under test.

#![allow(dead_code)]

use std::path::PathBuf;

use popcolor::graph::fixtures;
use popcolor::model::IlpModel;
use popcolor::{Graph, Rational};
use rand::rngs::StdRng;
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

/// Chromatic number by exhaustive search over `k`-colourings, `k = 1, 2, ...`.
pub fn chromatic_number(g: &Graph) -> usize {
    if g.n() == 0 {
        return 0;
    }
    (1..=g.n()).find(|&k| colorable(g, k)).unwrap()
}

pub fn colorable(g: &Graph, k: usize) -> bool {
    let mut color = vec![0usize; g.n() + 1];
    extend(g, k, 1, &mut color)
}

fn extend(g: &Graph, k: usize, v: usize, color: &mut [usize]) -> bool {
    if v > g.n() {
        return true;
    }
    // colours beyond max used + 1 are symmetric
    let used = color[1..v].iter().copied().max().unwrap_or(0);
    for c in 1..=k.min(used + 1) {
        if g.neighbors(v).iter().all(|&w| w > v || color[w] != c) {
            color[v] = c;
            if extend(g, k, v + 1, color) {
                return true;
            }
        }
    }
    color[v] = 0;
    false
}

/// `(n, p)` pairs drawn as in the acceptance sweeps.
pub fn random_connected(rng: &mut StdRng, n_lo: usize, n_hi: usize) -> Graph {
    let n = rng.gen_range(n_lo..=n_hi);
    let p = if rng.gen_bool(0.5) { 0.3 } else { 0.5 };
    fixtures::random_connected(rng, n, p)
}

/// Solves the square system `a x = b` by Gauss-Jordan; `None` if singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let d = b.len();
    for col in 0..d {
        let piv = (col..d).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..d {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &(&f * p);
                }
                let t = &f * &b[col];
                b[r] -= &t;
            }
        }
    }
    Some(b)
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// LP optimum by enumerating every basic solution: each choice of `d` tight
/// hyperplanes among rows and bounds. Only for a handful of variables.
/// `None` means infeasible (all variables are boxed, so never unbounded).
pub fn lp_by_vertex_enumeration(m: &IlpModel) -> Option<Rational> {
    let d = m.variables.len();
    let mut planes: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for c in &m.constraints {
        let mut row = vec![Rational::zero(); d];
        for (j, a) in &c.terms {
            row[*j] = a.clone();
        }
        planes.push((row, c.rhs.clone()));
    }
    for (j, var) in m.variables.iter().enumerate() {
        for bound in [&var.lower, &var.upper] {
            let mut row = vec![Rational::zero(); d];
            row[j] = Rational::one();
            planes.push((row, bound.clone()));
        }
    }
    let mut choice = Vec::new();
    let mut all = Vec::new();
    subsets(planes.len(), d, 0, &mut choice, &mut all);
    let mut best: Option<Rational> = None;
    for set in all {
        let a = set.iter().map(|&i| planes[i].0.clone()).collect();
        let b = set.iter().map(|&i| planes[i].1.clone()).collect();
        let Some(x) = solve_square(a, b) else { continue };
        if m.is_feasible(&x, false) {
            let v = m.objective.value(&x);
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
    }
    best
}

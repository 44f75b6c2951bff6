//! Exact checks of the relaxation bounds, run by `popcolor verify`.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::graph::{fixtures, Graph, Vertex};
use crate::lp::{relax, solve_lp, LpError, LpStatus};
use crate::model::{build_model, ModelError, ModelKind};
use crate::preprocess::dsatur_upper_bound;
use crate::rational::Rational;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("relaxation of {kind} is {status:?}")]
    NotOptimal { kind: ModelKind, status: LpStatus },
}

/// Exact optimum of the LP relaxation of `kind` on `g` with `h` colours rooted at `q`.
pub fn relaxation_value(g: &Graph, kind: ModelKind, h: usize, q: Vertex) -> Result<Rational, VerifyError> {
    let m = relax(&build_model(g, kind, h, q)?);
    let sol = solve_lp(&m)?;
    sol.value.ok_or(VerifyError::NotOptimal { kind, status: sol.status })
}

/// Relaxation value with the defaults used by the report: `H` from DSATUR
/// unless overridden, `q` of maximum degree.
pub fn default_relaxation(g: &Graph, kind: ModelKind, colors: Option<usize>) -> Result<Rational, VerifyError> {
    let h = colors.unwrap_or_else(|| dsatur_upper_bound(g).0);
    relaxation_value(g, kind, h, g.max_degree_vertex().unwrap_or(1))
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Overrides the DSATUR colour bound where the check does not fix `H`.
    pub colors: Option<usize>,
    pub seed: u64,
    pub random_graphs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { colors: None, seed: 7, random_graphs: 20 }
    }
}

fn check(name: impl Into<String>, passed: bool, detail: String) -> Check {
    Check { name: name.into(), passed, detail }
}

/// `2 + 1/k`.
fn two_plus(k: usize) -> Rational {
    Rational::from(2) + Rational::new(1, k as i64)
}

/// Odd cycles `C_{2k+1}`, `k = 1..=4`: POP1 reaches `7/3` on the triangle and
/// `2 + 1/(k+1)` beyond it; POP2 reaches `2 + 1/(k+1)` throughout.
pub fn odd_cycle_checks(colors: Option<usize>) -> Result<Vec<Check>, VerifyError> {
    let mut out = Vec::new();
    for k in 1..=4usize {
        let g = fixtures::cycle(2 * k + 1);
        let h = colors.unwrap_or_else(|| dsatur_upper_bound(&g).0);
        let pop1 = relaxation_value(&g, ModelKind::Pop1, h, 1)?;
        let need1 = if k == 1 { Rational::new(7, 3) } else { two_plus(k + 1) };
        out.push(check(format!("odd cycle C{} POP1", 2 * k + 1), pop1 >= need1, format!("nu={pop1} >= {need1}")));
        let pop2 = relaxation_value(&g, ModelKind::Pop2, h, 1)?;
        let need2 = two_plus(k + 1);
        out.push(check(format!("odd cycle C{} POP2", 2 * k + 1), pop2 >= need2, format!("nu={pop2} >= {need2}")));
    }
    Ok(out)
}

/// K4 with four colours separates POP2 from POP1.
pub fn k4_checks() -> Result<Vec<Check>, VerifyError> {
    let g = fixtures::complete(4);
    let pop1 = relaxation_value(&g, ModelKind::Pop1, 4, 1)?;
    let pop2 = relaxation_value(&g, ModelKind::Pop2, 4, 1)?;
    Ok(vec![
        check("K4 POP1 upper", pop1 <= Rational::new(12, 5), format!("nu={pop1} <= 12/5")),
        check("K4 POP2 lower", pop2 >= Rational::new(5, 2), format!("nu={pop2} >= 5/2")),
        check("K4 POP2 > POP1", pop2 > pop1, format!("{pop2} > {pop1}")),
    ])
}

/// Relaxation values on a named graph: ASS is 2, POP is 3/2, POP1 is at
/// least `2 + 1/|V|` and the strength chain holds.
pub fn chain_checks(name: &str, g: &Graph, colors: Option<usize>) -> Result<Vec<Check>, VerifyError> {
    let nu = |kind| default_relaxation(g, kind, colors);
    let (ass, pop, pop1, pop2) = (nu(ModelKind::Ass)?, nu(ModelKind::Pop)?, nu(ModelKind::Pop1)?, nu(ModelKind::Pop2)?);
    let floor1 = two_plus(g.n());
    Ok(vec![
        check(format!("{name} ASS"), ass == Rational::from(2), format!("nu={ass} = 2")),
        check(format!("{name} POP"), pop == Rational::new(3, 2), format!("nu={pop} = 3/2")),
        check(format!("{name} POP1"), pop1 >= floor1, format!("nu={pop1} >= {floor1}")),
        check(
            format!("{name} chain"),
            pop2 >= pop1 && pop1 >= ass && ass >= pop,
            format!("POP2={pop2} >= POP1={pop1} >= ASS={ass} >= POP={pop}"),
        ),
    ])
}

/// Pure and hybrid variants have equal relaxations.
pub fn hybrid_check(name: &str, g: &Graph, colors: Option<usize>) -> Result<Check, VerifyError> {
    let pairs =
        [(ModelKind::Pop, ModelKind::Poph), (ModelKind::Pop1, ModelKind::Poph1), (ModelKind::Pop2, ModelKind::Poph2)];
    let mut passed = true;
    let mut detail = Vec::new();
    for (pure, hybrid) in pairs {
        let (a, b) = (default_relaxation(g, pure, colors)?, default_relaxation(g, hybrid, colors)?);
        passed &= a == b;
        detail.push(format!("{pure}={a} {hybrid}={b}"));
    }
    Ok(check(format!("{name} pure = hybrid"), passed, detail.join(", ")))
}

/// Random connected graph with `4 <= n <= 10` for the seeded sweeps.
pub fn random_graph(rng: &mut StdRng) -> Graph {
    let n = rng.gen_range(4..=10);
    let p = if rng.gen_bool(0.5) { 0.3 } else { 0.5 };
    fixtures::random_connected(rng, n, p)
}

/// The full report.
pub fn run_suite(opts: &VerifyOptions) -> Result<Vec<Check>, VerifyError> {
    let mut out = odd_cycle_checks(opts.colors)?;
    out.extend(k4_checks()?);
    let named = [
        ("K3", fixtures::complete(3)),
        ("C5", fixtures::cycle(5)),
        ("Petersen", fixtures::petersen()),
        ("myciel3", fixtures::myciel(3)),
    ];
    for (name, g) in &named {
        out.extend(chain_checks(name, g, opts.colors)?);
    }
    let mut rng = StdRng::seed_from_u64(opts.seed);
    for t in 0..opts.random_graphs {
        let g = random_graph(&mut rng);
        let name = format!("random#{t} (n={}, m={})", g.n(), g.m());
        out.push(hybrid_check(&name, &g, opts.colors)?);
        if g.has_odd_cycle() {
            let pop1 = default_relaxation(&g, ModelKind::Pop1, opts.colors)?;
            let floor1 = two_plus(g.n());
            out.push(check(format!("{name} POP1"), pop1 >= floor1, format!("nu={pop1} >= {floor1}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_separates() {
        assert!(k4_checks().unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn triangle_chain() {
        let checks = chain_checks("K3", &fixtures::complete(3), None).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn display_has_verdict() {
        let c = check("x", false, "y".into());
        assert_eq!(c.to_string(), "FAIL x: y");
    }
}

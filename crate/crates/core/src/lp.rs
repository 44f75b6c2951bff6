//! Exact LP relaxations.
//!
//! A bounded primal simplex on a sparse tableau. Each row is kept as integer
//! numerators over one positive row denominator, so a pivot only touches rows
//! with a nonzero in the entering column and never rounds. Nonbasic variables
//! always sit at zero: a variable resting at its upper bound is complemented
//! (`y = u - y'`) instead. Entering and leaving variables follow Bland's rule.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::model::{IlpModel, Sense};
use crate::rational::Rational;

/// Stored tableau entries; products are formed in `Wide` and narrowed back.
type Int = i64;
type Wide = i128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimum value; `None` unless `status` is `Optimal`.
    pub value: Option<Rational>,
    /// One value per model variable when optimal, otherwise empty.
    pub values: Vec<Rational>,
    /// Pivots plus bound flips.
    pub iterations: usize,
}

impl LpSolution {
    fn without_point(status: LpStatus, iterations: usize) -> Self {
        LpSolution { status, value: None, values: Vec::new(), iterations }
    }

    /// Variable name to value.
    pub fn assignment(&self, m: &IlpModel) -> BTreeMap<String, Rational> {
        m.variables.iter().zip(&self.values).map(|(v, x)| (v.kind.to_string(), x.clone())).collect()
    }

    pub fn to_json(&self, m: &IlpModel) -> serde_json::Value {
        serde_json::json!({
            "model": m.kind.name(),
            "h": m.h,
            "status": self.status,
            "value": self.value.as_ref().map(Rational::to_string),
            "value_decimal": self.value.as_ref().map(Rational::to_f64),
            "iterations": self.iterations,
            "assignment": self.assignment(m),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("model has {0} integer variables; relax it first")]
    IntegerVariables(usize),
    #[error("variable {var} has non-integral bound {bound}")]
    FractionalBound { var: String, bound: Rational },
    #[error(
        "tableau entries outgrew 64 bits after {iterations} iterations \
         ({rows} rows, {columns} columns, largest row denominator {largest_den} bits)"
    )]
    Magnitude { iterations: usize, rows: usize, columns: usize, largest_den: u32 },
    #[error("solver invariant broken: {0}")]
    Internal(String),
}

/// Same model with every integrality flag cleared.
pub fn relax(m: &IlpModel) -> IlpModel {
    let mut out = m.clone();
    for v in &mut out.variables {
        v.integer = false;
    }
    out
}

/// Solves the LP `m`, which must carry no integrality flags.
pub fn solve_lp(m: &IlpModel) -> Result<LpSolution, LpError> {
    let ints = m.num_integer();
    if ints > 0 {
        return Err(LpError::IntegerVariables(ints));
    }
    let lower: Vec<_> = m.variables.iter().map(|v| v.lower.clone()).collect();
    let upper: Vec<_> = m.variables.iter().map(|v| v.upper.clone()).collect();
    solve_relaxation(m, &lower, &upper)
}

/// Solves the relaxation of `m` with the given bounds in place of the stored ones.
///
/// Integrality flags are ignored. Bounds must be integers.
pub fn solve_relaxation(m: &IlpModel, lower: &[Rational], upper: &[Rational]) -> Result<LpSolution, LpError> {
    solve_rows(m, lower, upper, &LpHints::default())
}

/// Optional help for [`solve_rows`].
#[derive(Debug, Clone, Copy, Default)]
pub struct LpHints<'a> {
    /// Rows to keep. Only rows that every point within the bounds satisfies may be left out.
    pub active: Option<&'a [bool]>,
    /// A point whose variables at their upper bound start there instead of at
    /// the lower bound. When the point is feasible, phase one has nothing to do.
    pub start: Option<&'a [Rational]>,
}

/// Like [`solve_relaxation`], with row selection and a starting point.
pub fn solve_rows(
    m: &IlpModel,
    lower: &[Rational],
    upper: &[Rational],
    hints: &LpHints,
) -> Result<LpSolution, LpError> {
    let mut tab = match Tableau::build(m, lower, upper, hints)? {
        Some(t) => t,
        None => return Ok(LpSolution::without_point(LpStatus::Infeasible, 0)),
    };
    let status = tab.run().map_err(|_| tab.magnitude_error())?;
    if status != LpStatus::Optimal {
        return Ok(LpSolution::without_point(status, tab.iterations));
    }
    let values = tab.point(m, lower);
    let value = m.objective.value(&values);
    let within = values.iter().zip(lower.iter().zip(upper)).all(|(x, (l, u))| l <= x && x <= u);
    if !within || !m.constraints.iter().all(|c| c.is_satisfied(&values)) {
        return Err(LpError::Internal("optimal basis violates a constraint".into()));
    }
    Ok(LpSolution { status, value: Some(value), values, iterations: tab.iterations })
}

#[derive(Debug)]
struct Overflow;

fn narrow(v: Wide) -> Result<Int, Overflow> {
    Int::try_from(v).map_err(|_| Overflow)
}

/// `a * b - c * d`, exact.
fn cross(a: Int, b: Int, c: Int, d: Int) -> Result<Int, Overflow> {
    narrow(a as Wide * b as Wide - c as Wide * d as Wide)
}

/// `a/b < c/d` for positive `b`, `d`.
fn frac_lt(a: Wide, b: Wide, c: Wide, d: Wide) -> bool {
    match (a.checked_mul(d), c.checked_mul(b)) {
        (Some(x), Some(y)) => x < y,
        _ => BigInt::from(a) * BigInt::from(d) < BigInt::from(c) * BigInt::from(b),
    }
}

fn rational_to_int(r: &Rational) -> Option<Int> {
    if !r.is_integer() {
        return None;
    }
    r.to_i64()
}

/// `x_basic + Σ (entries / den) x_j = rhs / den`.
#[derive(Debug, Clone)]
struct Row {
    entries: Vec<(usize, Int)>,
    rhs: Int,
    den: Int,
}

impl Row {
    fn coef(&self, col: usize) -> Int {
        match self.entries.binary_search_by_key(&col, |e| e.0) {
            Ok(k) => self.entries[k].1,
            Err(_) => 0,
        }
    }

    fn reduce(&mut self) {
        let mut g = self.den.abs();
        g = g.gcd(&self.rhs);
        for &(_, v) in &self.entries {
            if g == 1 {
                return;
            }
            g = g.gcd(&v);
        }
        if g > 1 {
            self.den /= g;
            self.rhs /= g;
            for e in &mut self.entries {
                e.1 /= g;
            }
        }
    }

    /// `self - (t / self.den) * pivot`, where `t` is this row's entry in the
    /// pivot column and `pivot` is already solved for that column.
    fn eliminate(&self, t: Int, pivot: &Row, col: usize) -> Result<Row, Overflow> {
        let (p, a) = (pivot.den, self);
        let mut entries = Vec::with_capacity(a.entries.len() + pivot.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < a.entries.len() || j < pivot.entries.len() {
            let ci = a.entries.get(i).map_or(usize::MAX, |e| e.0);
            let cj = pivot.entries.get(j).map_or(usize::MAX, |e| e.0);
            let (c, v) = if ci < cj {
                i += 1;
                (ci, cross(p, a.entries[i - 1].1, 0, 0)?)
            } else if cj < ci {
                j += 1;
                (cj, cross(0, 0, t, pivot.entries[j - 1].1)?)
            } else {
                i += 1;
                j += 1;
                (ci, cross(p, a.entries[i - 1].1, t, pivot.entries[j - 1].1)?)
            };
            if v != 0 && c != col {
                entries.push((c, v));
            }
        }
        let mut row = Row { entries, rhs: cross(p, a.rhs, t, pivot.rhs)?, den: cross(a.den, p, 0, 0)? };
        row.reduce();
        Ok(row)
    }

    /// Flips the sign of column `col`, substituting `u - y` for `y`.
    fn complement(&mut self, col: usize, u: Int) -> Result<(), Overflow> {
        if let Ok(k) = self.entries.binary_search_by_key(&col, |e| e.0) {
            let t = self.entries[k].1;
            self.rhs = cross(self.rhs, 1, t, u)?;
            self.entries[k].1 = -t;
        }
        Ok(())
    }
}

struct Tableau {
    rows: Vec<Row>,
    basis: Vec<usize>,
    /// Row of each basic column.
    basic_row: Vec<Option<usize>>,
    /// Upper bound of each shifted column; `None` is unbounded.
    upper: Vec<Option<Int>>,
    flipped: Vec<bool>,
    /// Internal column of each model variable kept by presolve.
    structural: Vec<Option<usize>>,
    first_art: usize,
    phase1: Option<Row>,
    objective: Row,
    iterations: usize,
}

impl Tableau {
    /// Shifts bounds to zero, substitutes fixed variables and scales rows to
    /// integers. `None` when presolve already proves infeasibility.
    fn build(
        m: &IlpModel,
        lower: &[Rational],
        upper: &[Rational],
        hints: &LpHints,
    ) -> Result<Option<Tableau>, LpError> {
        let name = |j: usize| m.variables[j].kind.to_string();
        let mut structural = vec![None; m.variables.len()];
        let mut col_upper = Vec::new();
        let mut at_upper = vec![false; m.variables.len()];
        for j in 0..m.variables.len() {
            let (l, u) = (&lower[j], &upper[j]);
            if l > u {
                return Ok(None);
            }
            if !l.is_integer() {
                return Err(LpError::FractionalBound { var: name(j), bound: l.clone() });
            }
            if !u.is_integer() {
                return Err(LpError::FractionalBound { var: name(j), bound: u.clone() });
            }
            if l != u {
                let width = rational_to_int(&(u - l)).ok_or(LpError::Magnitude {
                    iterations: 0,
                    rows: 0,
                    columns: 0,
                    largest_den: 0,
                })?;
                structural[j] = Some(col_upper.len());
                col_upper.push(Some(width));
                at_upper[j] = hints.start.is_some_and(|x| &x[j] == u);
            }
        }
        let n_struct = col_upper.len();
        let overflow =
            || LpError::Magnitude { iterations: 0, rows: m.constraints.len(), columns: n_struct, largest_den: 0 };

        // Rows in shifted variables: `Σ a y  sense  r`.
        let mut shifted = Vec::with_capacity(m.constraints.len());
        for (k, c) in m.constraints.iter().enumerate() {
            if hints.active.is_some_and(|a| !a[k]) {
                continue;
            }
            let mut r = c.rhs.clone();
            let mut terms = Vec::new();
            for (j, a) in &c.terms {
                if at_upper[*j] {
                    r -= &(a * &upper[*j]);
                    terms.push((structural[*j].unwrap(), -a));
                } else {
                    r -= &(a * &lower[*j]);
                    if let Some(col) = structural[*j] {
                        terms.push((col, a.clone()));
                    }
                }
            }
            if terms.is_empty() {
                if !c.sense.holds(&Rational::zero(), &r) {
                    return Ok(None);
                }
                continue;
            }
            let scale = terms.iter().fold(r.denom(), |acc, (_, a)| acc.lcm(&a.denom()));
            let scale = Rational::from_big(scale.into());
            let to_int = |x: &Rational| rational_to_int(&(x * &scale));
            let ints: Option<Vec<(usize, Int)>> = terms.iter().map(|(col, a)| to_int(a).map(|v| (*col, v))).collect();
            let ints = ints.ok_or_else(overflow)?;
            shifted.push((ints, c.sense, to_int(&r).ok_or_else(overflow)?));
        }

        let mut upper_all = col_upper;
        let mut basis = Vec::with_capacity(shifted.len());
        let mut rows = Vec::with_capacity(shifted.len());
        let mut artificial_rows = Vec::new();
        let mut pending_art = Vec::new();
        for (k, (terms, sense, r)) in shifted.into_iter().enumerate() {
            let slack_sign: Option<Int> = match sense {
                Sense::Le => Some(1),
                Sense::Ge => Some(-1),
                Sense::Eq => None,
            };
            let slack_col = slack_sign.map(|_| {
                upper_all.push(None);
                upper_all.len() - 1
            });
            let (sign, basic_is_slack) = match slack_sign {
                Some(s) if s * r.signum() >= 0 => (s, true),
                _ => (if r < 0 { -1 } else { 1 }, false),
            };
            let mut entries: Vec<(usize, Int)> = terms.into_iter().map(|(c, a)| (c, sign * a)).collect();
            if let (Some(col), Some(s), false) = (slack_col, slack_sign, basic_is_slack) {
                entries.push((col, sign * s));
            }
            let row = Row { entries, rhs: sign * r, den: 1 };
            if basic_is_slack {
                basis.push(slack_col.unwrap());
            } else {
                basis.push(usize::MAX);
                pending_art.push(k);
                artificial_rows.push(k);
            }
            rows.push(row);
        }
        let first_art = upper_all.len();
        for k in pending_art {
            upper_all.push(None);
            basis[k] = upper_all.len() - 1;
        }
        let ncols = upper_all.len();
        let mut basic_row = vec![None; ncols];
        for (k, &b) in basis.iter().enumerate() {
            basic_row[b] = Some(k);
        }

        // Phase II objective `z - Σ c y = c0 + Σ c l`, scaled to integers.
        let mut constant = m.objective.constant.clone();
        let mut costs = Vec::new();
        for (j, c) in &m.objective.terms {
            if at_upper[*j] {
                constant += &(c * &upper[*j]);
                costs.push((structural[*j].unwrap(), -c));
            } else {
                constant += &(c * &lower[*j]);
                if let Some(col) = structural[*j] {
                    costs.push((col, c.clone()));
                }
            }
        }
        costs.sort_by_key(|e| e.0);
        let scale = costs.iter().fold(constant.denom(), |acc, (_, c)| acc.lcm(&c.denom()));
        let scale = Rational::from_big(scale.into());
        let to_int = |x: &Rational| rational_to_int(&(x * &scale)).ok_or_else(overflow);
        let mut objective = Row {
            entries: costs.iter().map(|(col, c)| Ok((*col, -to_int(c)?))).collect::<Result<_, LpError>>()?,
            rhs: to_int(&constant)?,
            den: to_int(&Rational::one())?,
        };
        objective.entries.retain(|e| e.1 != 0);
        objective.reduce();

        // Phase I objective `w - Σ art = 0` with the artificial rows substituted in.
        let phase1 = if artificial_rows.is_empty() {
            None
        } else {
            let mut acc: BTreeMap<usize, Int> = BTreeMap::new();
            let mut rhs: Int = 0;
            for &k in &artificial_rows {
                for &(c, v) in &rows[k].entries {
                    let e = acc.entry(c).or_insert(0);
                    *e = e.checked_add(v).ok_or_else(overflow)?;
                }
                rhs = rhs.checked_add(rows[k].rhs).ok_or_else(overflow)?;
            }
            Some(Row { entries: acc.into_iter().filter(|e| e.1 != 0).collect(), rhs, den: 1 })
        };

        for row in &mut rows {
            row.entries.sort_by_key(|e| e.0);
        }
        let mut flipped = vec![false; ncols];
        for j in 0..m.variables.len() {
            if at_upper[j] {
                flipped[structural[j].unwrap()] = true;
            }
        }
        Ok(Some(Tableau {
            rows,
            basis,
            basic_row,
            upper: upper_all,
            flipped,
            structural,
            first_art,
            phase1,
            objective,
            iterations: 0,
        }))
    }

    fn magnitude_error(&self) -> LpError {
        let largest_den = self.rows.iter().map(|r| Int::BITS - r.den.leading_zeros()).max().unwrap_or(0);
        LpError::Magnitude {
            iterations: self.iterations,
            rows: self.rows.len(),
            columns: self.upper.len(),
            largest_den,
        }
    }

    fn run(&mut self) -> Result<LpStatus, Overflow> {
        if self.phase1.is_some() {
            while self.phase1.as_ref().unwrap().rhs != 0 {
                let Some(s) = self.entering(self.phase1.as_ref().unwrap()) else { break };
                let step = self.step(s)?;
                debug_assert_ne!(step, Step::Unbounded, "phase one objective is bounded below");
            }
            if self.phase1.as_ref().unwrap().rhs != 0 {
                return Ok(LpStatus::Infeasible);
            }
            self.phase1 = None;
            for c in self.first_art..self.upper.len() {
                self.upper[c] = Some(0);
                if self.basic_row[c].is_none() {
                    self.drop_column(c);
                }
            }
        }
        while let Some(s) = self.entering(&self.objective) {
            if self.step(s)? == Step::Unbounded {
                return Ok(LpStatus::Unbounded);
            }
        }
        Ok(LpStatus::Optimal)
    }

    /// Smallest-index column whose increase lowers the objective.
    fn entering(&self, obj: &Row) -> Option<usize> {
        obj.entries
            .iter()
            .find(|&&(c, t)| t > 0 && self.basic_row[c].is_none() && self.upper[c] != Some(0))
            .map(|e| e.0)
    }

    fn all_rows(&mut self) -> impl Iterator<Item = &mut Row> {
        self.rows.iter_mut().chain(std::iter::once(&mut self.objective)).chain(self.phase1.iter_mut())
    }

    fn drop_column(&mut self, c: usize) {
        for row in self.all_rows() {
            if let Ok(k) = row.entries.binary_search_by_key(&c, |e| e.0) {
                row.entries.remove(k);
            }
        }
    }

    fn step(&mut self, s: usize) -> Result<Step, Overflow> {
        self.iterations += 1;
        // (ratio numerator, denominator, row or usize::MAX for a bound flip, leaves at upper)
        let mut best: Option<(Wide, Wide, usize, bool)> = self.upper[s].map(|u| (u as Wide, 1, usize::MAX, false));
        for (i, row) in self.rows.iter().enumerate() {
            let t = row.coef(s);
            if t == 0 {
                continue;
            }
            let (num, den, to_upper) = if t > 0 {
                (row.rhs as Wide, t as Wide, false)
            } else {
                match self.upper[self.basis[i]] {
                    Some(u) => (u as Wide * row.den as Wide - row.rhs as Wide, -(t as Wide), true),
                    None => continue,
                }
            };
            let better = match best {
                None => true,
                Some((bn, bd, bi, _)) => {
                    frac_lt(num, den, bn, bd)
                        || (bi != usize::MAX && !frac_lt(bn, bd, num, den) && self.basis[i] < self.basis[bi])
                }
            };
            if better {
                best = Some((num, den, i, to_upper));
            }
        }
        let Some((_, _, r, to_upper)) = best else {
            return Ok(Step::Unbounded);
        };
        if r == usize::MAX {
            self.complement(s)?;
            return Ok(Step::Flip);
        }
        let leaving = self.basis[r];
        self.pivot(r, s)?;
        if to_upper {
            self.complement(leaving)?;
        }
        Ok(Step::Pivot)
    }

    fn pivot(&mut self, r: usize, s: usize) -> Result<(), Overflow> {
        let leaving = self.basis[r];
        let old = &self.rows[r];
        let t = old.coef(s);
        let keep_leaving = self.upper[leaving] != Some(0);
        let mut entries: Vec<(usize, Int)> = old.entries.iter().copied().filter(|e| e.0 != s).collect();
        if keep_leaving {
            let at = entries.partition_point(|e| e.0 < leaving);
            entries.insert(at, (leaving, old.den));
        }
        let sign = t.signum();
        let mut pivot = Row {
            entries: entries.into_iter().map(|(c, v)| (c, sign * v)).collect(),
            rhs: sign * old.rhs,
            den: sign * t,
        };
        pivot.reduce();

        let mut rows = std::mem::take(&mut self.rows);
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let ti = row.coef(s);
            if ti != 0 {
                *row = row.eliminate(ti, &pivot, s)?;
            }
        }
        let to = self.objective.coef(s);
        if to != 0 {
            self.objective = self.objective.eliminate(to, &pivot, s)?;
        }
        if let Some(p1) = &self.phase1 {
            let tp = p1.coef(s);
            if tp != 0 {
                self.phase1 = Some(p1.eliminate(tp, &pivot, s)?);
            }
        }
        rows[r] = pivot;
        self.rows = rows;
        self.basis[r] = s;
        self.basic_row[s] = Some(r);
        self.basic_row[leaving] = None;
        Ok(())
    }

    fn complement(&mut self, c: usize) -> Result<(), Overflow> {
        let u = self.upper[c].expect("only bounded columns are complemented");
        for row in self.all_rows() {
            row.complement(c, u)?;
        }
        self.flipped[c] = !self.flipped[c];
        Ok(())
    }

    /// Current basic solution mapped back to model variables.
    fn point(&self, m: &IlpModel, lower: &[Rational]) -> Vec<Rational> {
        (0..m.variables.len())
            .map(|j| {
                let Some(c) = self.structural[j] else {
                    return lower[j].clone();
                };
                let mut y = match self.basic_row[c] {
                    Some(i) => Rational::from_big(num_rational::BigRational::new(
                        self.rows[i].rhs.into(),
                        self.rows[i].den.into(),
                    )),
                    None => Rational::zero(),
                };
                if self.flipped[c] {
                    y = Rational::from_big(BigInt::from(self.upper[c].unwrap()).into()) - y;
                }
                &lower[j] + &y
            })
            .collect()
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Step {
    Pivot,
    Flip,
    Unbounded,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use crate::model::{build_model, LinCon, ModelKind, Objective, VarKind, Variable};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn nu(g: &crate::graph::Graph, kind: ModelKind, h: usize, q: usize) -> Rational {
        let m = relax(&build_model(g, kind, h, q).unwrap());
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        sol.value.unwrap()
    }

    /// Model over `n` continuous `[0, upper]` columns named `w_1..`.
    type Row = (Vec<(usize, i64)>, Sense, i64);

    fn plain(n: usize, upper: i64, rows: Vec<Row>, obj: Vec<(usize, i64)>) -> IlpModel {
        let mut m = IlpModel::empty(ModelKind::Ass, 1, 1, 1, vec![]);
        for i in 1..=n {
            m.add_variable(Variable {
                kind: VarKind::W { i },
                lower: Rational::zero(),
                upper: Rational::from(upper),
                integer: false,
                priority: 0,
            });
        }
        m.constraints = rows
            .into_iter()
            .map(|(terms, sense, rhs)| LinCon {
                terms: terms.into_iter().map(|(j, a)| (j, Rational::from(a))).collect(),
                sense,
                rhs: Rational::from(rhs),
                tag: "T".into(),
            })
            .collect();
        m.objective = Objective {
            constant: Rational::zero(),
            terms: obj.into_iter().map(|(j, c)| (j, Rational::from(c))).collect(),
        };
        m
    }

    #[test]
    fn small_lp_with_fractional_optimum() {
        // min -x - y  s.t. 2x + y <= 2, x + 3y <= 3, 0 <= x, y <= 10
        let m = plain(
            2,
            10,
            vec![(vec![(0, 2), (1, 1)], Sense::Le, 2), (vec![(0, 1), (1, 3)], Sense::Le, 3)],
            vec![(0, -1), (1, -1)],
        );
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.value, Some(r(-7, 5)));
        assert_eq!(sol.values, vec![r(3, 5), r(4, 5)]);
    }

    #[test]
    fn equality_and_ge_rows_need_phase_one() {
        // min x + 2y  s.t. x + y = 3/2 written as 2x + 2y = 3, x - y >= -1, bounds [0,1]
        let m = plain(
            2,
            1,
            vec![(vec![(0, 2), (1, 2)], Sense::Eq, 3), (vec![(0, 1), (1, -1)], Sense::Ge, -1)],
            vec![(0, 1), (1, 2)],
        );
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.value, Some(r(2, 1)));
        assert_eq!(sol.values, vec![Rational::one(), r(1, 2)]);
    }

    #[test]
    fn infeasible_and_unbounded_statuses() {
        let m = plain(2, 1, vec![(vec![(0, 1), (1, 1)], Sense::Ge, 3)], vec![(0, 1)]);
        assert_eq!(solve_lp(&m).unwrap().status, LpStatus::Infeasible);
        let mut m = plain(1, 1, vec![], vec![(0, -1)]);
        assert_eq!(solve_lp(&m).unwrap().value, Some(r(-1, 1)));
        m.variables[0].upper = r(-1, 1);
        assert_eq!(solve_lp(&m).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn upper_bounds_are_native() {
        // min -3x - 2y s.t. x + y <= 3/2 (as 2x+2y <= 3), bounds [0,1]: x=1, y=1/2
        let m = plain(2, 1, vec![(vec![(0, 2), (1, 2)], Sense::Le, 3)], vec![(0, -3), (1, -2)]);
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.value, Some(r(-4, 1)));
        assert_eq!(sol.values, vec![Rational::one(), r(1, 2)]);
    }

    #[test]
    fn rejects_integer_models() {
        let m = build_model(&fixtures::complete(3), ModelKind::Ass, 3, 1).unwrap();
        assert_eq!(solve_lp(&m).unwrap_err(), LpError::IntegerVariables(12));
        let relaxed = relax(&m);
        assert_eq!(relaxed.variables.len(), 12);
        assert_eq!(relaxed.constraints, m.constraints);
        assert_eq!(relax(&relaxed), relaxed);
    }

    #[test]
    fn relaxation_values_on_small_graphs() {
        let k3 = fixtures::complete(3);
        assert_eq!(nu(&k3, ModelKind::Ass, 3, 1), r(2, 1));
        assert_eq!(nu(&k3, ModelKind::AssQ, 3, 1), r(2, 1));
        assert_eq!(nu(&k3, ModelKind::Pop, 3, 1), r(3, 2));
        assert!(nu(&k3, ModelKind::Pop2, 3, 1) >= r(5, 2));
        let k4 = fixtures::complete(4);
        let pop1 = nu(&k4, ModelKind::Pop1, 4, 1);
        assert!(pop1 <= r(12, 5) && pop1 >= r(7, 3), "{pop1}");
        assert!(nu(&k4, ModelKind::Pop2, 4, 1) >= r(5, 2));
    }

    #[test]
    fn json_has_exact_and_decimal_value() {
        let m = relax(&build_model(&fixtures::complete(3), ModelKind::Pop, 3, 1).unwrap());
        let sol = solve_lp(&m).unwrap();
        let j = sol.to_json(&m);
        assert_eq!(j["value"], "3/2");
        assert_eq!(j["value_decimal"], 1.5);
        assert_eq!(j["status"], "Optimal");
        assert_eq!(j["assignment"].as_object().unwrap().len(), m.variables.len());
    }
}

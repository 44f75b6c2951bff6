//! Branch-and-bound over exact LP relaxations.
//!
//! Variables are branched on in order of their model priority (vertex
//! degree). Below the root, bounds are tightened by activity-based
//! propagation and by the colour cap implied by the incumbent, and rows that
//! the tightened bounds already imply are left out of the node LP.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::lp::{solve_rows, LpError, LpHints, LpSolution, LpStatus};
use crate::model::{encode_coloring, extract_coloring, IlpModel, ModelError, Sense};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SearchOrder {
    #[default]
    DepthFirst,
    BestBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BnbConfig {
    /// Seconds; checked between nodes.
    pub time_limit: Option<f64>,
    pub node_limit: Option<u64>,
    pub order: SearchOrder,
}

impl Default for BnbConfig {
    fn default() -> Self {
        BnbConfig { time_limit: Some(60.0), node_limit: None, order: SearchOrder::DepthFirst }
    }
}

impl BnbConfig {
    pub fn unlimited() -> Self {
        BnbConfig { time_limit: None, node_limit: None, order: SearchOrder::DepthFirst }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MipStatus {
    Optimal,
    /// A limit stopped the search with an incumbent in hand.
    Feasible,
    Infeasible,
    /// A limit stopped the search before any incumbent was found.
    LimitReached,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MipResult {
    pub status: MipStatus,
    /// Best proven dual bound; `None` once infeasibility is proven.
    pub dual_bound: Option<Rational>,
    pub root_bound: Option<Rational>,
    /// Objective of the incumbent; `None` is +∞.
    pub ub: Option<Rational>,
    pub incumbent: Option<Coloring>,
    #[serde(skip)]
    pub values: Option<Vec<Rational>>,
    pub nodes: u64,
    pub lp_iterations: u64,
    pub time_s: f64,
}

impl MipResult {
    /// Dual bound rounded up, as reported.
    pub fn lb(&self) -> Option<Rational> {
        self.dual_bound.as_ref().map(Rational::ceil)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BnbError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("integral LP point does not decode: {0}")]
    Decode(#[from] ModelError),
    #[error("no fractional integer variable to branch on")]
    Integral,
}

/// Fractional integer variable with the highest priority; ties go to the
/// value closest to 1/2, then to the lower index.
pub fn choose_branch_var(values: &[Rational], m: &IlpModel) -> Result<usize, BnbError> {
    let half = Rational::new(1, 2);
    m.variables
        .iter()
        .zip(values)
        .enumerate()
        .filter(|(_, (var, x))| var.integer && !x.is_integer())
        .min_by_key(|(j, (var, x))| (Reverse(var.priority), (x.fract() - &half).abs(), *j))
        .map(|(j, _)| j)
        .ok_or(BnbError::Integral)
}

pub fn solve_mip(m: &IlpModel, cfg: &BnbConfig) -> Result<MipResult, BnbError> {
    solve_mip_from(m, cfg, None)
}

/// Branch-and-bound seeded with an optional starting colouring.
///
/// A start that is not feasible for `m` is ignored with a warning.
pub fn solve_mip_from(m: &IlpModel, cfg: &BnbConfig, start: Option<&Coloring>) -> Result<MipResult, BnbError> {
    let mut search = Search::new(m, cfg);
    if let Some(c) = start {
        match encode_coloring(m, c).filter(|v| m.is_feasible(v, true)) {
            Some(values) => {
                search.ub = Some(m.objective.value(&values));
                search.incumbent = Some((extract_coloring(m, &values)?, values));
            }
            None => log::warn!("starting colouring is not feasible for the {} model; ignored", m.kind),
        }
    }
    search.run()
}

struct Node {
    lower: Vec<Rational>,
    upper: Vec<Rational>,
    /// Bound of the parent LP, valid for this subtree.
    bound: Rational,
    depth: usize,
}

enum Frontier {
    Stack(Vec<Node>),
    Heap(BinaryHeap<HeapNode>),
}

struct HeapNode(Node, u64);

impl PartialEq for HeapNode {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}
impl Eq for HeapNode {}
impl PartialOrd for HeapNode {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapNode {
    // max-heap: smallest bound first, then deepest, then oldest
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.0.bound.cmp(&self.0.bound).then(self.0.depth.cmp(&other.0.depth)).then(other.1.cmp(&self.1))
    }
}

impl Frontier {
    fn push(&mut self, node: Node, seq: u64) {
        match self {
            Frontier::Stack(s) => s.push(node),
            Frontier::Heap(h) => h.push(HeapNode(node, seq)),
        }
    }

    fn pop(&mut self) -> Option<Node> {
        match self {
            Frontier::Stack(s) => s.pop(),
            Frontier::Heap(h) => h.pop().map(|n| n.0),
        }
    }

    fn min_bound(&self) -> Option<Rational> {
        match self {
            Frontier::Stack(s) => s.iter().map(|n| n.bound.clone()).min(),
            Frontier::Heap(h) => h.peek().map(|n| n.0.bound.clone()),
        }
    }
}

struct Search<'a> {
    m: &'a IlpModel,
    cfg: &'a BnbConfig,
    /// Rows touching each variable.
    rows_of: Vec<Vec<usize>>,
    integral_objective: bool,
    ub: Option<Rational>,
    incumbent: Option<(Coloring, Vec<Rational>)>,
    nodes: u64,
    lp_iterations: u64,
    seq: u64,
}

impl<'a> Search<'a> {
    fn new(m: &'a IlpModel, cfg: &'a BnbConfig) -> Self {
        let mut rows_of = vec![Vec::new(); m.variables.len()];
        for (k, c) in m.constraints.iter().enumerate() {
            for &(j, _) in &c.terms {
                rows_of[j].push(k);
            }
        }
        let integral_objective = m.objective.constant.is_integer()
            && m.objective.terms.iter().all(|(j, c)| c.is_integer() && m.variables[*j].integer);
        Search { m, cfg, rows_of, integral_objective, ub: None, incumbent: None, nodes: 0, lp_iterations: 0, seq: 0 }
    }

    /// A subtree with LP bound `nu` cannot beat the incumbent.
    fn dominated(&self, nu: &Rational) -> bool {
        match &self.ub {
            None => false,
            Some(ub) if self.integral_objective => &nu.ceil() >= ub,
            Some(ub) => nu >= ub,
        }
    }

    fn run(mut self) -> Result<MipResult, BnbError> {
        let started = Instant::now();
        let deadline = self.cfg.time_limit.map(|s| started + Duration::from_secs_f64(s.max(0.0)));
        let lower: Vec<_> = self.m.variables.iter().map(|v| v.lower.clone()).collect();
        let upper: Vec<_> = self.m.variables.iter().map(|v| v.upper.clone()).collect();

        let start = self.incumbent.as_ref().map(|(_, v)| v.as_slice());
        let root = solve_rows(self.m, &lower, &upper, &LpHints { active: None, start })?;
        self.nodes = 1;
        self.lp_iterations = root.iterations as u64;
        let root_bound = root.value.clone();
        let mut frontier = match self.cfg.order {
            SearchOrder::DepthFirst => Frontier::Stack(Vec::new()),
            SearchOrder::BestBound => Frontier::Heap(BinaryHeap::new()),
        };
        self.expand(root, lower, upper, 0, &mut frontier)?;

        let mut limited = false;
        loop {
            let out_of_nodes = self.cfg.node_limit.is_some_and(|n| self.nodes >= n);
            let out_of_time = deadline.is_some_and(|d| Instant::now() >= d);
            let Some(node) = frontier.pop() else { break };
            if self.dominated(&node.bound) {
                continue;
            }
            if out_of_nodes || out_of_time {
                frontier.push(node, 0);
                limited = true;
                break;
            }
            self.nodes += 1;
            let Node { mut lower, mut upper, depth, .. } = node;
            let Some(active) = self.propagate(&mut lower, &mut upper) else { continue };
            let sol = solve_rows(self.m, &lower, &upper, &LpHints { active: Some(&active), start: None })?;
            self.lp_iterations += sol.iterations as u64;
            self.expand(sol, lower, upper, depth, &mut frontier)?;
        }

        // Nodes already dominated by the incumbent no longer bound anything.
        let open = if limited {
            let mut open = None::<Rational>;
            while let Some(node) = frontier.pop() {
                if !self.dominated(&node.bound) {
                    open = Some(open.map_or(node.bound.clone(), |b| b.min(node.bound)));
                }
            }
            open
        } else {
            frontier.min_bound()
        };
        let dual_bound = match (&open, &self.ub) {
            (Some(b), Some(ub)) => Some(b.clone().min(ub.clone())),
            (Some(b), None) => Some(b.clone()),
            (None, ub) => ub.clone(),
        };
        let status = match (open.is_some(), &self.incumbent) {
            (false, Some(_)) => MipStatus::Optimal,
            (false, None) => MipStatus::Infeasible,
            (true, Some(_)) => MipStatus::Feasible,
            (true, None) => MipStatus::LimitReached,
        };
        let (incumbent, values) = match self.incumbent {
            Some((c, v)) => (Some(c), Some(v)),
            None => (None, None),
        };
        Ok(MipResult {
            status,
            dual_bound,
            root_bound,
            ub: self.ub,
            incumbent,
            values,
            nodes: self.nodes,
            lp_iterations: self.lp_iterations,
            time_s: started.elapsed().as_millis() as f64 / 1000.0,
        })
    }

    /// Records an integral LP point or pushes two children for a fractional one.
    fn expand(
        &mut self,
        sol: LpSolution,
        lower: Vec<Rational>,
        upper: Vec<Rational>,
        depth: usize,
        frontier: &mut Frontier,
    ) -> Result<(), BnbError> {
        if sol.status != LpStatus::Optimal {
            return Ok(());
        }
        let nu = sol.value.expect("optimal LP has a value");
        if self.dominated(&nu) {
            return Ok(());
        }
        let integral = self.m.variables.iter().zip(&sol.values).all(|(v, x)| !v.integer || x.is_integer());
        if integral {
            let coloring = extract_coloring(self.m, &sol.values)?;
            log::debug!("incumbent {nu} at node {}", self.nodes);
            self.ub = Some(nu);
            self.incumbent = Some((coloring, sol.values));
            return Ok(());
        }
        let j = choose_branch_var(&sol.values, self.m)?;
        let x = &sol.values[j];
        for up in [false, true] {
            let (mut lo, mut hi) = (lower.clone(), upper.clone());
            if up {
                lo[j] = x.ceil();
            } else {
                hi[j] = x.floor();
            }
            self.seq += 1;
            frontier.push(Node { lower: lo, upper: hi, bound: nu.clone(), depth: depth + 1 }, self.seq);
        }
        Ok(())
    }

    /// Tightens bounds to a fixpoint. Returns the rows that are not yet
    /// implied by the bounds, or `None` if some row cannot be satisfied.
    fn propagate(&self, lower: &mut [Rational], upper: &mut [Rational]) -> Option<Vec<bool>> {
        let m = self.m;
        if self.integral_objective {
            if let Some(ub) = &self.ub {
                let cap = ub.to_i64().unwrap_or(i64::MAX) - 1;
                for j in m.cap_fixings(cap.max(0) as usize) {
                    if lower[j].is_positive() {
                        return None;
                    }
                    upper[j] = Rational::zero();
                }
            }
        }
        let mut queued = vec![true; m.constraints.len()];
        let mut queue: VecDeque<usize> = (0..m.constraints.len()).collect();
        while let Some(k) = queue.pop_front() {
            queued[k] = false;
            let c = &m.constraints[k];
            let (min_act, max_act) = activity(c, lower, upper);
            let le = c.sense != Sense::Ge;
            let ge = c.sense != Sense::Le;
            if (le && min_act > c.rhs) || (ge && max_act < c.rhs) {
                return None;
            }
            for (j, a) in &c.terms {
                let j = *j;
                let var = &m.variables[j];
                let (mut lo, mut hi) = (lower[j].clone(), upper[j].clone());
                let span = &hi - &lo;
                if span.is_zero() {
                    continue;
                }
                if le {
                    // room left by the other terms at their minimum
                    let room = &(&c.rhs - &min_act) / a;
                    if a.is_positive() {
                        hi = hi.min(&lo + &room);
                    } else {
                        lo = lo.max(&hi + &room);
                    }
                }
                if ge {
                    let room = &(&max_act - &c.rhs) / a;
                    if a.is_positive() {
                        lo = lo.max(&hi - &room);
                    } else {
                        hi = hi.min(&lo - &room);
                    }
                }
                if var.integer {
                    lo = lo.ceil();
                    hi = hi.floor();
                }
                if lo > hi {
                    return None;
                }
                if lo != lower[j] || hi != upper[j] {
                    lower[j] = lo;
                    upper[j] = hi;
                    for &r in &self.rows_of[j] {
                        if !queued[r] {
                            queued[r] = true;
                            queue.push_back(r);
                        }
                    }
                }
            }
        }
        let active = m
            .constraints
            .iter()
            .map(|c| {
                let (min_act, max_act) = activity(c, lower, upper);
                let le_implied = c.sense == Sense::Ge || max_act <= c.rhs;
                let ge_implied = c.sense == Sense::Le || min_act >= c.rhs;
                !(le_implied && ge_implied)
            })
            .collect();
        Some(active)
    }
}

fn activity(c: &crate::model::LinCon, lower: &[Rational], upper: &[Rational]) -> (Rational, Rational) {
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for (j, a) in &c.terms {
        if a.is_positive() {
            lo += &(a * &lower[*j]);
            hi += &(a * &upper[*j]);
        } else {
            lo += &(a * &upper[*j]);
            hi += &(a * &lower[*j]);
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures, Graph};
    use crate::lp::{relax, solve_lp};
    use crate::model::{build_model, ModelKind, VarKind};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn solve(g: &Graph, kind: ModelKind, h: usize, q: usize) -> MipResult {
        let m = build_model(g, kind, h, q).unwrap();
        solve_mip(&m, &BnbConfig::unlimited()).unwrap()
    }

    #[test]
    fn triangle_and_five_cycle() {
        let res = solve(&fixtures::complete(3), ModelKind::Pop2, 3, 1);
        assert_eq!(res.status, MipStatus::Optimal);
        assert_eq!(res.ub, Some(r(3, 1)));
        assert!(res.incumbent.unwrap().is_proper(&fixtures::complete(3)));
        let c5 = fixtures::cycle(5);
        let res = solve(&c5, ModelKind::Poph2, 3, 1);
        assert_eq!(res.status, MipStatus::Optimal);
        assert_eq!(res.ub, Some(r(3, 1)));
        assert_eq!(res.lb(), Some(r(3, 1)));
        let c = res.incumbent.unwrap();
        assert!(c.is_proper(&c5));
        assert_eq!(c.num_colors(), 3);
    }

    #[test]
    fn every_kind_colours_the_petersen_graph_with_three() {
        let g = fixtures::petersen();
        for kind in ModelKind::ALL {
            let res = solve(&g, kind, 4, 1);
            assert_eq!(res.status, MipStatus::Optimal, "{kind}");
            assert_eq!(res.ub, Some(r(3, 1)), "{kind}");
            assert!(res.incumbent.unwrap().is_proper(&g));
        }
    }

    #[test]
    fn root_bound_matches_lp() {
        let g = fixtures::myciel(3);
        for kind in [ModelKind::Ass, ModelKind::Pop1, ModelKind::Poph2] {
            let m = build_model(&g, kind, 4, 1).unwrap();
            let nu = solve_lp(&relax(&m)).unwrap().value.unwrap();
            let cfg = BnbConfig { node_limit: Some(1), ..BnbConfig::unlimited() };
            let res = solve_mip(&m, &cfg).unwrap();
            assert_eq!(res.root_bound, Some(nu.clone()));
            assert_eq!(res.lb(), Some(nu.ceil()));
            assert!(matches!(res.status, MipStatus::Optimal | MipStatus::LimitReached));
        }
    }

    #[test]
    fn starting_colouring_sets_ub() {
        let g = fixtures::cycle(5);
        let m = build_model(&g, ModelKind::Pop2, 3, 5).unwrap();
        let start: Coloring = [(1, 1), (2, 2), (3, 1), (4, 2), (5, 3)].into_iter().collect();
        let cfg = BnbConfig { node_limit: Some(1), ..BnbConfig::unlimited() };
        let res = solve_mip_from(&m, &cfg, Some(&start)).unwrap();
        assert_eq!(res.ub, Some(r(3, 1)));
        assert!(res.incumbent.is_some());
        assert!(matches!(res.status, MipStatus::Optimal | MipStatus::Feasible));
        // q must carry the largest colour, so this start is rejected
        let bad: Coloring = [(1, 3), (2, 2), (3, 1), (4, 2), (5, 1)].into_iter().collect();
        let res = solve_mip_from(&m, &BnbConfig::unlimited(), Some(&bad)).unwrap();
        assert_eq!(res.ub, Some(r(3, 1)));
    }

    #[test]
    fn best_bound_agrees_with_depth_first() {
        let g = fixtures::myciel(3);
        let m = build_model(&g, ModelKind::Pop2, 4, 1).unwrap();
        let cfg = BnbConfig { order: SearchOrder::BestBound, ..BnbConfig::unlimited() };
        let res = solve_mip(&m, &cfg).unwrap();
        assert_eq!(res.status, MipStatus::Optimal);
        assert_eq!(res.ub, Some(r(4, 1)));
    }

    #[test]
    fn infeasible_model() {
        let mut m = build_model(&fixtures::complete(3), ModelKind::Pop1, 3, 1).unwrap();
        for i in 1..=3 {
            let j = m.var_index(VarKind::G { i, v: 1 }).unwrap();
            m.variables[j].upper = Rational::zero();
        }
        let res = solve_mip(&m, &BnbConfig::unlimited()).unwrap();
        assert_eq!(res.status, MipStatus::Infeasible);
        assert_eq!(res.dual_bound, None);
        assert_eq!(res.ub, None);
    }

    #[test]
    fn branching_rule() {
        // star with centre 1 (degree 5) and leaves of degree 1
        let g = fixtures::star(5);
        let m = build_model(&g, ModelKind::Ass, 2, 1).unwrap();
        let mut values = vec![Rational::zero(); m.variables.len()];
        let x = |v, i| m.var_index(VarKind::X { v, i }).unwrap();
        values[x(2, 1)] = r(1, 2);
        values[x(1, 1)] = r(1, 3);
        assert_eq!(choose_branch_var(&values, &m).unwrap(), x(1, 1));

        let k3 = fixtures::complete(3);
        let m = build_model(&k3, ModelKind::Ass, 3, 1).unwrap();
        let x = |v, i| m.var_index(VarKind::X { v, i }).unwrap();
        let mut values = vec![Rational::zero(); m.variables.len()];
        values[x(1, 1)] = r(9, 10);
        values[x(2, 1)] = r(1, 2);
        assert_eq!(choose_branch_var(&values, &m).unwrap(), x(2, 1));

        let mut values = vec![Rational::zero(); m.variables.len()];
        values[x(3, 2)] = r(1, 4);
        assert_eq!(choose_branch_var(&values, &m).unwrap(), x(3, 2));
        values[x(3, 2)] = Rational::one();
        assert_eq!(choose_branch_var(&values, &m), Err(BnbError::Integral));
    }
}

//! Solver-agnostic integer programs for vertex colouring.
//!
//! Eight formulations share one intermediate representation:
//!
//! | kind    | variables      | objective          |
//! |---------|----------------|--------------------|
//! | `Ass`   | `x`, `w`       | `Σ w_i`            |
//! | `AssQ`  | `x`, `w`       | `Σ w_i`            |
//! | `Pop`   | `g`, `l`       | `1 + Σ g_{i,q}`    |
//! | `Pop1`  | `g`            | `1 + Σ g_{i,q}`    |
//! | `Pop2`  | `g`            | `1 + Σ g_{i,q}`    |
//! | `Poph`  | `g`, `l`, `x`  | `1 + Σ g_{i,q}`    |
//! | `Poph1` | `g`, `x`       | `1 + Σ g_{i,q}`    |
//! | `Poph2` | `g`, `x`       | `1 + Σ g_{i,q}`    |
//!
//! `x_{v,i} = 1` iff `v` has colour `i`; `w_i = 1` iff colour `i` is used;
//! `g_{i,v} = 1` iff `v`'s colour is above `i`; `l_{v,i} = 1` iff it is below `i`.
//! Every row carries a tag naming the constraint family it belongs to.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::graph::{Graph, Vertex};
use crate::preprocess::{greedy_clique, PrecolorPlan};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ModelKind {
    Ass,
    AssQ,
    Pop,
    Pop1,
    Pop2,
    Poph,
    Poph1,
    Poph2,
}

impl ModelKind {
    pub const ALL: [ModelKind; 8] = [
        ModelKind::Ass,
        ModelKind::AssQ,
        ModelKind::Pop,
        ModelKind::Pop1,
        ModelKind::Pop2,
        ModelKind::Poph,
        ModelKind::Poph1,
        ModelKind::Poph2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Ass => "ASS",
            ModelKind::AssQ => "ASSQ",
            ModelKind::Pop => "POP",
            ModelKind::Pop1 => "POP1",
            ModelKind::Pop2 => "POP2",
            ModelKind::Poph => "POPH",
            ModelKind::Poph1 => "POPH1",
            ModelKind::Poph2 => "POPH2",
        }
    }

    /// Partial-ordering kinds: colours are encoded through `g` and `q` carries the largest colour.
    pub fn is_pop_family(self) -> bool {
        !matches!(self, ModelKind::Ass | ModelKind::AssQ)
    }

    /// Kinds whose formulation depends on the distinguished vertex `q`.
    pub fn uses_q(self) -> bool {
        self != ModelKind::Ass
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ModelError::UnknownKind(s.to_string()))
    }
}

impl From<ModelKind> for String {
    fn from(k: ModelKind) -> String {
        k.name().to_string()
    }
}

impl TryFrom<String> for ModelKind {
    type Error = ModelError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Identity of a model variable. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    X { v: Vertex, i: usize },
    W { i: usize },
    L { v: Vertex, i: usize },
    G { i: usize, v: Vertex },
}

impl VarKind {
    pub fn vertex(self) -> Option<Vertex> {
        match self {
            VarKind::X { v, .. } | VarKind::L { v, .. } | VarKind::G { v, .. } => Some(v),
            VarKind::W { .. } => None,
        }
    }
}

impl fmt::Display for VarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarKind::X { v, i } => write!(f, "x_{v}_{i}"),
            VarKind::W { i } => write!(f, "w_{i}"),
            VarKind::L { v, i } => write!(f, "l_{v}_{i}"),
            VarKind::G { i, v } => write!(f, "g_{i}_{v}"),
        }
    }
}

impl FromStr for VarKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::BadVariableName(s.to_string());
        let mut parts = s.split('_');
        let tag = parts.next().ok_or_else(bad)?;
        let nums: Vec<usize> = parts.map(|p| p.parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        match (tag, nums.as_slice()) {
            ("x", &[v, i]) => Ok(VarKind::X { v, i }),
            ("w", &[i]) => Ok(VarKind::W { i }),
            ("l", &[v, i]) => Ok(VarKind::L { v, i }),
            ("g", &[i, v]) => Ok(VarKind::G { i, v }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub kind: VarKind,
    pub lower: Rational,
    pub upper: Rational,
    pub integer: bool,
    /// Larger values are branched on first.
    pub priority: i64,
}

impl Variable {
    pub fn is_fixed(&self) -> bool {
        self.lower == self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Eq => lhs == rhs,
            Sense::Ge => lhs >= rhs,
        }
    }
}

/// Sparse linear row `Σ coef * var  sense  rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinCon {
    /// `(variable index, coefficient)`, sorted by index, no zeros, no repeats.
    pub terms: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
    pub tag: String,
}

impl LinCon {
    pub fn activity(&self, values: &[Rational]) -> Rational {
        self.terms.iter().map(|(j, a)| a * &values[*j]).sum()
    }

    pub fn is_satisfied(&self, values: &[Rational]) -> bool {
        self.sense.holds(&self.activity(values), &self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub constant: Rational,
    pub terms: Vec<(usize, Rational)>,
}

impl Objective {
    pub fn value(&self, values: &[Rational]) -> Rational {
        &self.constant + self.terms.iter().map(|(j, c)| c * &values[*j]).sum::<Rational>()
    }
}

/// A minimisation program plus what is needed to decode its solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpModel {
    pub kind: ModelKind,
    pub h: usize,
    pub q: Vertex,
    /// Vertex count of the graph the model was built on.
    pub n: usize,
    /// Edges of that graph, for checking decoded colourings.
    pub edges: Vec<(Vertex, Vertex)>,
    /// `vertex_map[v - 1]` is the caller's id for model vertex `v`.
    pub vertex_map: Vec<Vertex>,
    pub variables: Vec<Variable>,
    pub constraints: Vec<LinCon>,
    pub objective: Objective,
    index: HashMap<VarKind, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown model kind {0:?}")]
    UnknownKind(String),
    #[error("cannot parse variable name {0:?}")]
    BadVariableName(String),
    #[error("colour bound H={h} must lie in 1..={n}")]
    BadColorBound { h: usize, n: usize },
    #[error("H={h} is below the clique lower bound {clique}; the model is infeasible")]
    BoundBelowClique { h: usize, clique: usize },
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Vertex),
    #[error("precolouring plan was made for H={plan}, model has H={model}")]
    PlanColorMismatch { plan: usize, model: usize },
    #[error("precolouring plan uses q={plan}, model has q={model}")]
    PlanQMismatch { plan: Vertex, model: Vertex },
    #[error("colour {color} for vertex {vertex} is outside 1..=H")]
    ColorOutOfRange { vertex: Vertex, color: usize },
    #[error("variable {0} is not integral in the assignment")]
    NonIntegral(String),
    #[error("assignment has {got} values for {expected} variables")]
    AssignmentLength { got: usize, expected: usize },
    #[error("vertex {0} decodes to no single colour")]
    NoColor(Vertex),
    #[error("decoded colouring puts edge {0}-{1} in one colour class")]
    ImproperDecode(Vertex, Vertex),
    #[error("variable {0} referenced before registration")]
    UnregisteredVariable(String),
}

impl IlpModel {
    /// Bare model with no variables or rows; used by readers that rebuild a model.
    pub fn empty(kind: ModelKind, h: usize, q: Vertex, n: usize, edges: Vec<(Vertex, Vertex)>) -> Self {
        IlpModel {
            kind,
            h,
            q,
            n,
            edges,
            vertex_map: (1..=n).collect(),
            variables: Vec::new(),
            constraints: Vec::new(),
            objective: Objective { constant: Rational::zero(), terms: Vec::new() },
            index: HashMap::new(),
        }
    }

    pub fn var_index(&self, kind: VarKind) -> Option<usize> {
        self.index.get(&kind).copied()
    }

    pub fn add_variable(&mut self, var: Variable) -> usize {
        let idx = self.variables.len();
        let prev = self.index.insert(var.kind, idx);
        assert!(prev.is_none(), "variable {} registered twice", var.kind);
        self.variables.push(var);
        idx
    }

    pub fn num_integer(&self) -> usize {
        self.variables.iter().filter(|v| v.integer).count()
    }

    /// Number of rows per constraint tag.
    pub fn tag_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for c in &self.constraints {
            *out.entry(c.tag.clone()).or_insert(0) += 1;
        }
        out
    }

    /// Checks bounds, rows and integrality of `values`.
    pub fn is_feasible(&self, values: &[Rational], check_integrality: bool) -> bool {
        values.len() == self.variables.len()
            && self.variables.iter().zip(values).all(|(var, x)| {
                &var.lower <= x && x <= &var.upper && (!check_integrality || !var.integer || x.is_integer())
            })
            && self.constraints.iter().all(|c| c.is_satisfied(values))
    }

    /// Variables forced to zero in every integral solution that uses at most
    /// `k` colours.
    pub fn cap_fixings(&self, k: usize) -> Vec<usize> {
        let kinds: Vec<VarKind> = if self.kind.is_pop_family() {
            (k.max(1)..=self.h).map(|i| VarKind::G { i, v: self.q }).collect()
        } else {
            (k + 1..=self.h).map(|i| VarKind::W { i }).collect()
        };
        kinds.into_iter().filter_map(|kind| self.var_index(kind)).collect()
    }

    fn var(&self, kind: VarKind) -> usize {
        self.index[&kind]
    }

    fn fix(&mut self, kind: VarKind, value: i64) {
        if let Some(j) = self.var_index(kind) {
            let v = Rational::from(value);
            self.variables[j].lower = v.clone();
            self.variables[j].upper = v;
        }
    }
}

/// Accumulates a row, merging repeated variables and dropping cancelled terms.
struct RowBuilder {
    terms: BTreeMap<usize, Rational>,
}

impl RowBuilder {
    fn new() -> Self {
        RowBuilder { terms: BTreeMap::new() }
    }

    fn add(mut self, var: usize, coef: i64) -> Self {
        let entry = self.terms.entry(var).or_insert_with(Rational::zero);
        *entry += &Rational::from(coef);
        self
    }

    fn finish(self, sense: Sense, rhs: i64, tag: &str) -> Option<LinCon> {
        let terms: Vec<_> = self.terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let rhs = Rational::from(rhs);
        if terms.is_empty() {
            assert!(sense.holds(&Rational::zero(), &rhs), "row {tag} reduced to an infeasible constant");
            return None;
        }
        Some(LinCon { terms, sense, rhs, tag: tag.to_string() })
    }
}

struct Builder<'g> {
    g: &'g Graph,
    h: usize,
    q: Vertex,
    m: IlpModel,
}

impl Builder<'_> {
    fn binary(&mut self, kind: VarKind) {
        let priority = kind.vertex().map_or(0, |v| self.g.degree(v) as i64);
        self.m.add_variable(Variable {
            kind,
            lower: Rational::zero(),
            upper: Rational::one(),
            integer: true,
            priority,
        });
    }

    fn x(&self, v: Vertex, i: usize) -> usize {
        self.m.var(VarKind::X { v, i })
    }
    fn w(&self, i: usize) -> usize {
        self.m.var(VarKind::W { i })
    }
    fn l(&self, v: Vertex, i: usize) -> usize {
        self.m.var(VarKind::L { v, i })
    }
    fn g(&self, i: usize, v: Vertex) -> usize {
        self.m.var(VarKind::G { i, v })
    }

    fn push(&mut self, row: RowBuilder, sense: Sense, rhs: i64, tag: &str) {
        if let Some(c) = row.finish(sense, rhs, tag) {
            self.m.constraints.push(c);
        }
    }

    fn add_x_vars(&mut self) {
        for v in 1..=self.g.n() {
            for i in 1..=self.h {
                self.binary(VarKind::X { v, i });
            }
        }
    }

    fn add_g_vars(&mut self) {
        for v in 1..=self.g.n() {
            for i in 1..=self.h {
                self.binary(VarKind::G { i, v });
            }
        }
    }

    fn add_l_vars(&mut self) {
        for v in 1..=self.g.n() {
            for i in 1..=self.h {
                self.binary(VarKind::L { v, i });
            }
        }
    }

    fn assignment(&mut self, with_q: bool) {
        let (n, h) = (self.g.n(), self.h);
        self.add_x_vars();
        for i in 1..=h {
            self.binary(VarKind::W { i });
        }
        self.m.objective.terms = (1..=h).map(|i| (self.w(i), Rational::one())).collect();

        for v in 1..=n {
            let row = (1..=h).fold(RowBuilder::new(), |r, i| r.add(self.x(v, i), 1));
            self.push(row, Sense::Eq, 1, "one-colour");
        }
        for &(u, v) in self.g.edges() {
            for i in 1..=h {
                let row = RowBuilder::new().add(self.x(u, i), 1).add(self.x(v, i), 1).add(self.w(i), -1);
                self.push(row, Sense::Le, 0, "edge");
            }
        }
        for i in 1..=h {
            let row = (1..=n).fold(RowBuilder::new().add(self.w(i), 1), |r, v| r.add(self.x(v, i), -1));
            self.push(row, Sense::Le, 0, "colour-used");
        }
        for i in 2..=h {
            let row = RowBuilder::new().add(self.w(i), 1).add(self.w(i - 1), -1);
            self.push(row, Sense::Le, 0, "colour-order");
        }
        if with_q {
            let q = self.q;
            for v in (1..=n).filter(|&v| v != q) {
                for i in 1..=h {
                    let row = (1..=i).fold(RowBuilder::new(), |r, j| r.add(self.x(v, j), 1).add(self.x(q, j), -1));
                    self.push(row, Sense::Ge, 0, "q-largest");
                }
            }
        }
    }

    fn pop_objective(&mut self) {
        self.m.objective.constant = Rational::one();
        let q = self.q;
        self.m.objective.terms = (1..=self.h).map(|i| (self.g(i, q), Rational::one())).collect();
    }

    /// `g_{i,q} >= g_{i,v}` for `v != q`.
    fn q_is_largest(&mut self, tag: &str) {
        let q = self.q;
        for v in (1..=self.g.n()).filter(|&v| v != q) {
            for i in 1..=self.h {
                let row = RowBuilder::new().add(self.g(i, q), 1).add(self.g(i, v), -1);
                self.push(row, Sense::Ge, 0, tag);
            }
        }
    }

    fn g_top_zero(&mut self, tag: &str) {
        for v in 1..=self.g.n() {
            let row = RowBuilder::new().add(self.g(self.h, v), 1);
            self.push(row, Sense::Eq, 0, tag);
        }
    }

    fn g_monotone(&mut self, tag: &str) {
        for v in 1..=self.g.n() {
            for i in 2..=self.h {
                let row = RowBuilder::new().add(self.g(i - 1, v), 1).add(self.g(i, v), -1);
                self.push(row, Sense::Ge, 0, tag);
            }
        }
    }

    /// Rows shared by the plain pure and hybrid models: start/end fixings,
    /// monotonicity and the `g`/`l` complement rows.
    fn pop_base(&mut self) {
        let (n, h) = (self.g.n(), self.h);
        for v in 1..=n {
            let row = RowBuilder::new().add(self.l(v, 1), 1);
            self.push(row, Sense::Eq, 0, "ends-fixed");
            let row = RowBuilder::new().add(self.g(h, v), 1);
            self.push(row, Sense::Eq, 0, "ends-fixed");
        }
        self.g_monotone("order-monotone");
        for v in 1..=n {
            for i in 2..=h {
                let row = RowBuilder::new().add(self.g(i - 1, v), 1).add(self.l(v, i), 1);
                self.push(row, Sense::Eq, 1, "order-complement");
            }
        }
    }

    fn pop(&mut self) {
        self.add_g_vars();
        self.add_l_vars();
        self.pop_objective();
        self.pop_base();
        for &(u, v) in self.g.edges() {
            for i in 1..=self.h {
                let row = RowBuilder::new()
                    .add(self.g(i, u), 1)
                    .add(self.l(u, i), 1)
                    .add(self.g(i, v), 1)
                    .add(self.l(v, i), 1);
                self.push(row, Sense::Ge, 1, "edge");
            }
        }
        self.q_is_largest("q-largest");
    }

    fn poph(&mut self) {
        let (n, h) = (self.g.n(), self.h);
        self.add_g_vars();
        self.add_l_vars();
        self.add_x_vars();
        self.pop_objective();
        self.pop_base();
        for v in 1..=n {
            for i in 1..=h {
                let row = RowBuilder::new().add(self.x(v, i), 1).add(self.l(v, i), 1).add(self.g(i, v), 1);
                self.push(row, Sense::Eq, 1, "order-link");
            }
        }
        for &(u, v) in self.g.edges() {
            for i in 1..=h {
                let row = RowBuilder::new().add(self.x(u, i), 1).add(self.x(v, i), 1);
                self.push(row, Sense::Le, 1, "edge");
            }
        }
        self.q_is_largest("q-largest");
    }

    fn pop1(&mut self) {
        let h = self.h;
        let q = self.q;
        self.add_g_vars();
        self.pop_objective();
        self.g_top_zero("top-zero");
        self.g_monotone("order-monotone");
        for &(u, v) in self.g.edges() {
            let row = RowBuilder::new().add(self.g(1, u), 1).add(self.g(1, v), 1).add(self.g(1, q), 1);
            self.push(row, Sense::Ge, 2, "edge-first");
        }
        for &(u, v) in self.g.edges() {
            for i in 2..=h {
                let row = RowBuilder::new()
                    .add(self.g(i - 1, u), 1)
                    .add(self.g(i, u), -1)
                    .add(self.g(i - 1, v), 1)
                    .add(self.g(i, v), -1)
                    .add(self.g(i - 1, q), -1);
                self.push(row, Sense::Le, 0, "edge");
            }
        }
        self.q_is_largest("q-largest");
    }

    fn poph1(&mut self) {
        let (n, h, q) = (self.g.n(), self.h, self.q);
        self.add_g_vars();
        self.add_x_vars();
        self.pop_objective();
        self.g_top_zero("top-zero");
        for v in 1..=n {
            let row = RowBuilder::new().add(self.x(v, 1), 1).add(self.g(1, v), 1);
            self.push(row, Sense::Eq, 1, "link-first");
        }
        for v in 1..=n {
            for i in 2..=h {
                let row = RowBuilder::new().add(self.x(v, i), 1).add(self.g(i - 1, v), -1).add(self.g(i, v), 1);
                self.push(row, Sense::Eq, 0, "order-link");
            }
        }
        for &(u, v) in self.g.edges() {
            let row = RowBuilder::new().add(self.x(u, 1), 1).add(self.x(v, 1), 1).add(self.g(1, q), -1);
            self.push(row, Sense::Le, 0, "edge-first");
        }
        for &(u, v) in self.g.edges() {
            for i in 2..=h {
                let row = RowBuilder::new().add(self.x(u, i), 1).add(self.x(v, i), 1).add(self.g(i - 1, q), -1);
                self.push(row, Sense::Le, 0, "edge");
            }
        }
        self.q_is_largest("q-largest");
    }

    /// `g_{i+1,q} >= g_{i,v}` for neighbours `v` of `q`.
    fn neighbor_of_q(&mut self) {
        let q = self.q;
        for &v in self.g.neighbors(q) {
            for i in 1..self.h {
                let row = RowBuilder::new().add(self.g(i + 1, q), 1).add(self.g(i, v), -1);
                self.push(row, Sense::Ge, 0, "q-neighbour");
            }
        }
    }
}

/// Builds the `kind` formulation on `g` with colour bound `h` and
/// distinguished vertex `q` (ignored by `Ass`).
pub fn build_model(g: &Graph, kind: ModelKind, h: usize, q: Vertex) -> Result<IlpModel, ModelError> {
    let n = g.n();
    if h == 0 || h > n {
        return Err(ModelError::BadColorBound { h, n });
    }
    if q == 0 || q > n {
        return Err(ModelError::UnknownVertex(q));
    }
    let clique = greedy_clique(g).len();
    if h < clique {
        return Err(ModelError::BoundBelowClique { h, clique });
    }
    let mut b = Builder { g, h, q, m: IlpModel::empty(kind, h, q, n, g.edges().to_vec()) };
    match kind {
        ModelKind::Ass => b.assignment(false),
        ModelKind::AssQ => b.assignment(true),
        ModelKind::Pop => b.pop(),
        ModelKind::Pop1 => b.pop1(),
        ModelKind::Pop2 => {
            b.pop1();
            b.neighbor_of_q();
        }
        ModelKind::Poph => b.poph(),
        ModelKind::Poph1 => b.poph1(),
        ModelKind::Poph2 => {
            b.poph1();
            b.neighbor_of_q();
        }
    }
    Ok(b.m)
}

/// Fixes the clique colours of `plan` by tightening variable bounds.
pub fn apply_precoloring(m: &IlpModel, plan: &PrecolorPlan) -> Result<IlpModel, ModelError> {
    if plan.h != m.h {
        return Err(ModelError::PlanColorMismatch { plan: plan.h, model: m.h });
    }
    if m.kind.uses_q() && plan.q != m.q {
        return Err(ModelError::PlanQMismatch { plan: plan.q, model: m.q });
    }
    let mut out = m.clone();
    for &(v, c) in &plan.fixed {
        if v == 0 || v > m.n {
            return Err(ModelError::UnknownVertex(v));
        }
        if c == 0 || c > m.h {
            return Err(ModelError::ColorOutOfRange { vertex: v, color: c });
        }
        for i in 1..=m.h {
            out.fix(VarKind::X { v, i }, (i == c) as i64);
            out.fix(VarKind::G { i, v }, (i < c) as i64);
            out.fix(VarKind::L { v, i }, (i > c) as i64);
        }
        if !m.kind.is_pop_family() {
            out.fix(VarKind::W { i: c }, 1);
        }
    }
    Ok(out)
}

/// Stored nonzero coefficients of the constraint matrix (objective excluded).
pub fn nonzero_count(m: &IlpModel) -> usize {
    m.constraints.iter().map(|c| c.terms.len()).sum()
}

/// Decodes an integral assignment (indexed like `m.variables`) into a colouring
/// of the model's vertices `1..=n`.
pub fn extract_coloring(m: &IlpModel, assignment: &[Rational]) -> Result<Coloring, ModelError> {
    if assignment.len() != m.variables.len() {
        return Err(ModelError::AssignmentLength { got: assignment.len(), expected: m.variables.len() });
    }
    if let Some((var, _)) = m.variables.iter().zip(assignment).find(|(_, x)| !x.is_integer()) {
        return Err(ModelError::NonIntegral(var.kind.to_string()));
    }
    let is_one = |kind| m.var_index(kind).is_some_and(|j| assignment[j].is_one());
    let mut coloring = Coloring::new();
    for v in 1..=m.n {
        let color = if m.kind.is_pop_family() {
            1 + (1..=m.h).filter(|&i| is_one(VarKind::G { i, v })).count()
        } else {
            let colors: Vec<usize> = (1..=m.h).filter(|&i| is_one(VarKind::X { v, i })).collect();
            match colors.as_slice() {
                [c] => *c,
                _ => return Err(ModelError::NoColor(v)),
            }
        };
        coloring.set(v, color);
    }
    if let Some(&(u, v)) = m.edges.iter().find(|&&(u, v)| coloring.get(u) == coloring.get(v)) {
        return Err(ModelError::ImproperDecode(u, v));
    }
    Ok(coloring)
}

/// Integral assignment encoding `coloring` in `m`'s variables, or `None` when
/// some colour exceeds `H` or violates a fixed bound.
pub fn encode_coloring(m: &IlpModel, coloring: &Coloring) -> Option<Vec<Rational>> {
    let mut values = vec![Rational::zero(); m.variables.len()];
    let used: Vec<bool> = (0..=m.h).map(|i| (1..=m.n).any(|v| coloring.get(v) == Some(i))).collect();
    for (j, var) in m.variables.iter().enumerate() {
        let value = match var.kind {
            VarKind::X { v, i } => coloring.get(v)? == i,
            VarKind::G { i, v } => coloring.get(v)? > i,
            VarKind::L { v, i } => coloring.get(v)? < i,
            VarKind::W { i } => used[i],
        };
        values[j] = Rational::from(value as i64);
    }
    (1..=m.n).all(|v| coloring.get(v).is_some_and(|c| (1..=m.h).contains(&c))).then_some(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn ass_on_triangle_counts() {
        let m = build_model(&fixtures::complete(3), ModelKind::Ass, 3, 1).unwrap();
        assert_eq!(m.variables.len(), 12);
        assert_eq!(m.constraints.len(), 17);
        let tags = m.tag_counts();
        assert_eq!(tags["one-colour"], 3);
        assert_eq!(tags["edge"], 9);
        assert_eq!(tags["colour-used"], 3);
        assert_eq!(tags["colour-order"], 2);
        assert!(m.objective.constant.is_zero());
    }

    #[test]
    fn pop1_on_triangle_counts() {
        let m = build_model(&fixtures::complete(3), ModelKind::Pop1, 3, 1).unwrap();
        assert_eq!(m.variables.len(), 9);
        assert!(m.variables.iter().all(|v| matches!(v.kind, VarKind::G { .. })));
        assert_eq!(m.constraints.len(), 3 + 6 + 3 + 6 + 6);
        assert_eq!(m.objective.constant, Rational::one());
    }

    #[test]
    fn k4_fractional_point_is_feasible_for_pop1() {
        let m = build_model(&fixtures::complete(4), ModelKind::Pop1, 4, 1).unwrap();
        let mut relaxed = m.clone();
        for v in &mut relaxed.variables {
            v.integer = false;
        }
        let gq = [r(4, 5), r(2, 5), r(1, 5), r(0, 1)];
        let gv = [r(3, 5), r(1, 5), r(0, 1), r(0, 1)];
        let mut values = vec![Rational::zero(); m.variables.len()];
        for (j, var) in m.variables.iter().enumerate() {
            if let VarKind::G { i, v } = var.kind {
                values[j] = if v == 1 { gq[i - 1].clone() } else { gv[i - 1].clone() };
            }
        }
        assert!(relaxed.is_feasible(&values, false));
        assert_eq!(m.objective.value(&values), r(12, 5));
    }

    #[test]
    fn invalid_arguments() {
        let k3 = fixtures::complete(3);
        assert_eq!(
            build_model(&k3, ModelKind::Pop2, 2, 1).unwrap_err(),
            ModelError::BoundBelowClique { h: 2, clique: 3 }
        );
        assert_eq!(build_model(&k3, ModelKind::Pop2, 3, 4).unwrap_err(), ModelError::UnknownVertex(4));
        assert!(matches!(build_model(&k3, ModelKind::Ass, 0, 1), Err(ModelError::BadColorBound { .. })));
    }

    #[test]
    fn precoloring_pop1() {
        let m = build_model(&fixtures::complete(3), ModelKind::Pop1, 3, 1).unwrap();
        let plan = PrecolorPlan { clique: vec![1, 2], q: 1, fixed: vec![(2, 1)], h: 3, clique_lb: 2 };
        let fixed = apply_precoloring(&m, &plan).unwrap();
        assert_eq!(fixed.constraints, m.constraints);
        for i in 1..=3 {
            let var = &fixed.variables[fixed.var_index(VarKind::G { i, v: 2 }).unwrap()];
            assert!(var.lower.is_zero() && var.upper.is_zero());
        }
    }

    #[test]
    fn precoloring_ass() {
        let m = build_model(&fixtures::complete(3), ModelKind::Ass, 3, 1).unwrap();
        let plan = PrecolorPlan { clique: vec![1, 2, 3], q: 1, fixed: vec![(2, 1), (3, 2)], h: 3, clique_lb: 3 };
        let fixed = apply_precoloring(&m, &plan).unwrap();
        let bounds = |k| {
            let v = &fixed.variables[fixed.var_index(k).unwrap()];
            (v.lower.to_i64().unwrap(), v.upper.to_i64().unwrap())
        };
        assert_eq!(bounds(VarKind::X { v: 2, i: 1 }), (1, 1));
        assert_eq!(bounds(VarKind::X { v: 3, i: 2 }), (1, 1));
        let zeros = [(2, 2), (2, 3), (3, 1), (3, 3)];
        for (v, i) in zeros {
            assert_eq!(bounds(VarKind::X { v, i }), (0, 0));
        }
        let fixed_count = fixed.variables.iter().filter(|v| v.is_fixed()).count();
        // six x-fixings plus w_1 and w_2
        assert_eq!(fixed_count, 8);

        let empty = PrecolorPlan::trivial(1, 3);
        assert_eq!(apply_precoloring(&m, &empty).unwrap(), m);
        let stray = PrecolorPlan { fixed: vec![(9, 1)], ..PrecolorPlan::trivial(1, 3) };
        assert_eq!(apply_precoloring(&m, &stray).unwrap_err(), ModelError::UnknownVertex(9));
    }

    #[test]
    fn decode_pop1_triangle() {
        let m = build_model(&fixtures::complete(3), ModelKind::Pop1, 3, 1).unwrap();
        let pattern = |i: usize, v: usize| -> i64 {
            let gv = [[1, 1, 0], [1, 0, 0], [0, 0, 0]];
            gv[v - 1][i - 1]
        };
        let values: Vec<Rational> = m
            .variables
            .iter()
            .map(|var| match var.kind {
                VarKind::G { i, v } => Rational::from(pattern(i, v)),
                _ => unreachable!(),
            })
            .collect();
        assert!(m.is_feasible(&values, true));
        let c = extract_coloring(&m, &values).unwrap();
        assert_eq!(c, [(1, 3), (2, 2), (3, 1)].into_iter().collect());
    }

    #[test]
    fn decode_errors() {
        let m = build_model(&fixtures::empty(1), ModelKind::Ass, 1, 1).unwrap();
        let c = extract_coloring(&m, &[Rational::one(), Rational::one()]).unwrap();
        assert_eq!(c.get(1), Some(1));
        assert_eq!(extract_coloring(&m, &[Rational::zero(), Rational::one()]), Err(ModelError::NoColor(1)));
        assert!(matches!(extract_coloring(&m, &[r(1, 2), Rational::one()]), Err(ModelError::NonIntegral(_))));
    }

    #[test]
    fn var_names_round_trip() {
        for k in [VarKind::X { v: 3, i: 12 }, VarKind::W { i: 2 }, VarKind::L { v: 1, i: 4 }, VarKind::G { i: 7, v: 9 }]
        {
            assert_eq!(k.to_string().parse::<VarKind>().unwrap(), k);
        }
        assert!("y_1".parse::<VarKind>().is_err());
        assert!("x_1".parse::<VarKind>().is_err());
    }

    #[test]
    fn encode_then_decode() {
        let g = fixtures::cycle(5);
        let coloring: Coloring = [(1, 1), (2, 2), (3, 1), (4, 2), (5, 3)].into_iter().collect();
        for kind in ModelKind::ALL {
            let m = build_model(&g, kind, 3, 5).unwrap();
            let values = encode_coloring(&m, &coloring).unwrap();
            assert!(m.is_feasible(&values, true), "{kind}");
            assert_eq!(extract_coloring(&m, &values).unwrap(), coloring, "{kind}");
            assert_eq!(m.objective.value(&values), Rational::from(3), "{kind}");
        }
    }
}

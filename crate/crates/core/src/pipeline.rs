//! End-to-end solving of DIMACS instances and the benchmark sweep.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bnb::{solve_mip_from, BnbConfig, BnbError, MipStatus};
use crate::coloring::{validate_coloring, Coloring};
use crate::error::ParseError;
use crate::graph::{parse_dimacs, Graph, Vertex};
use crate::model::{apply_precoloring, build_model, ModelError, ModelKind};
use crate::preprocess::{dsatur_upper_bound, lift_coloring, preprocess_pipeline, PrecolorPlan};
use crate::rational::Rational;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("cannot read {}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("no .col files in {0}")]
    EmptyDirectory(PathBuf),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] BnbError),
    #[error("colouring of {instance} under {kind} is improper on edges {edges:?}")]
    ImproperColoring { instance: String, kind: ModelKind, edges: Vec<(Vertex, Vertex)> },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl PipelineError {
    /// Input problems as opposed to broken internal invariants.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            PipelineError::Io { .. }
                | PipelineError::Parse { .. }
                | PipelineError::EmptyDirectory(_)
                | PipelineError::Csv(_)
                | PipelineError::Model(
                    ModelError::BadColorBound { .. } | ModelError::BoundBelowClique { .. } | ModelError::UnknownKind(_)
                )
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub bnb: BnbConfig,
    /// Dominance removal and clique precolouring.
    pub preprocess: bool,
    /// Colour bound to use instead of the DSATUR bound.
    pub colors: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { bnb: BnbConfig::default(), preprocess: true, colors: None }
    }
}

/// Outcome of solving one graph under one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSolution {
    pub kind: ModelKind,
    pub status: MipStatus,
    /// `usize::MAX` once the model is proven infeasible; written as "inf".
    #[serde(with = "lb_text")]
    pub lb: usize,
    /// `None` if no colouring was found.
    pub ub: Option<usize>,
    pub coloring: Option<Coloring>,
    pub nodes: u64,
    pub time_s: f64,
    /// Every component was settled by preprocessing alone.
    pub early_exit: bool,
}

mod lb_text {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(lb: &usize, s: S) -> Result<S::Ok, S::Error> {
        match *lb {
            usize::MAX => s.serialize_str("inf"),
            v => s.serialize_u64(v as u64),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) if t == "inf" => Ok(usize::MAX),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad lower bound {t:?}"))),
        }
    }
}

/// Relabels `c` (colours `1..=k`) so that `q` gets colour `k` and each fixed
/// vertex of `plan` gets its prescribed colour.
pub fn align_coloring(c: &Coloring, plan: &PrecolorPlan, k: usize) -> Coloring {
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    if let Some(cq) = c.get(plan.q) {
        map.insert(cq, k);
    }
    for &(v, target) in &plan.fixed {
        if let Some(cv) = c.get(v) {
            map.entry(cv).or_insert(target);
        }
    }
    let taken: Vec<usize> = map.values().copied().collect();
    let mut free = (1..).filter(|t| !taken.contains(t));
    for color in 1..=c.max_color() {
        map.entry(color).or_insert_with(|| free.next().unwrap());
    }
    c.iter().map(|(v, color)| (v, map[&color])).collect()
}

struct ComponentOutcome {
    status: MipStatus,
    lb: usize,
    ub: Option<usize>,
    coloring: Option<Coloring>,
    nodes: u64,
    early_exit: bool,
}

fn solve_component(
    g: &Graph,
    kind: ModelKind,
    opts: &SolveOptions,
    bnb: &BnbConfig,
) -> Result<ComponentOutcome, PipelineError> {
    if opts.preprocess {
        let report = preprocess_pipeline(g);
        let h = opts.colors.unwrap_or(report.h);
        if report.early_exit && opts.colors.is_none() {
            return Ok(ComponentOutcome {
                status: MipStatus::Optimal,
                lb: report.clique_lb,
                ub: Some(report.h),
                coloring: Some(report.witness),
                nodes: 0,
                early_exit: true,
            });
        }
        let residual = &report.trace.residual;
        let plan = PrecolorPlan { h, ..report.plan.clone() };
        let model = apply_precoloring(&build_model(residual, kind, h, plan.q)?, &plan)?;
        let residual_start: Coloring = (1..=residual.n())
            .map(|v| (v, report.witness.get(report.trace.residual_to_parent[v - 1]).unwrap()))
            .collect();
        let residual_start = align_coloring(&residual_start, &plan, report.h);
        let res = solve_mip_from(&model, bnb, Some(&residual_start))?;
        let coloring = match &res.incumbent {
            Some(c) => Some(
                lift_coloring(&report.trace, &c.relabel(&report.trace.residual_to_parent))
                    .expect("incumbent colours every residual vertex"),
            ),
            None => None,
        };
        Ok(ComponentOutcome {
            status: res.status,
            lb: lb_usize(res.lb()).max(report.clique_lb),
            ub: res.ub.as_ref().and_then(Rational::to_i64).map(|u| u as usize),
            coloring,
            nodes: res.nodes,
            early_exit: false,
        })
    } else {
        let (dsatur, start) = dsatur_upper_bound(g);
        let h = opts.colors.unwrap_or(dsatur);
        let q = g.max_degree_vertex().unwrap_or(1);
        let model = build_model(g, kind, h, q)?;
        let start = align_coloring(&start, &PrecolorPlan::trivial(q, h), dsatur);
        let res = solve_mip_from(&model, bnb, Some(&start))?;
        Ok(ComponentOutcome {
            status: res.status,
            lb: lb_usize(res.lb()),
            ub: res.ub.as_ref().and_then(Rational::to_i64).map(|u| u as usize),
            coloring: res.incumbent,
            nodes: res.nodes,
            early_exit: false,
        })
    }
}

/// `None` (proven infeasible) maps to `usize::MAX`.
fn lb_usize(lb: Option<Rational>) -> usize {
    lb.and_then(|r| r.to_i64()).map_or(usize::MAX, |v| v.max(0) as usize)
}

/// Splits `g` into components, solves each, and joins the colourings.
pub fn solve_graph(g: &Graph, kind: ModelKind, opts: &SolveOptions) -> Result<GraphSolution, PipelineError> {
    let started = Instant::now();
    let deadline = opts.bnb.time_limit.map(|s| started + Duration::from_secs_f64(s.max(0.0)));
    let mut out = GraphSolution {
        kind,
        status: MipStatus::Optimal,
        lb: 0,
        ub: Some(0),
        coloring: Some(Coloring::new()),
        nodes: 0,
        time_s: 0.0,
        early_exit: true,
    };
    let mut statuses = Vec::new();
    for comp in g.connected_components().components {
        let mut bnb = opts.bnb.clone();
        if let Some(d) = deadline {
            bnb.time_limit = Some(d.saturating_duration_since(Instant::now()).as_secs_f64());
        }
        let res = solve_component(&comp.graph, kind, opts, &bnb)?;
        statuses.push(res.status);
        out.lb = out.lb.max(res.lb);
        out.ub = match (out.ub, res.ub) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        out.coloring = match (out.coloring.take(), res.coloring) {
            (Some(mut all), Some(c)) => {
                for (v, color) in c.relabel(&comp.to_original).iter() {
                    all.set(v, color);
                }
                Some(all)
            }
            _ => None,
        };
        out.nodes += res.nodes;
        out.early_exit &= res.early_exit;
    }
    out.status = if statuses.contains(&MipStatus::Infeasible) {
        MipStatus::Infeasible
    } else if statuses.iter().all(|s| *s == MipStatus::Optimal) {
        MipStatus::Optimal
    } else if out.coloring.is_some() {
        MipStatus::Feasible
    } else {
        MipStatus::LimitReached
    };
    if let Some(c) = &out.coloring {
        let bad = validate_coloring(g, c).map_err(|_| PipelineError::ImproperColoring {
            instance: g.name().unwrap_or("?").to_string(),
            kind,
            edges: vec![],
        })?;
        if !bad.is_empty() {
            return Err(PipelineError::ImproperColoring {
                instance: g.name().unwrap_or("?").to_string(),
                kind,
                edges: bad,
            });
        }
        out.ub = Some(c.num_colors());
    }
    if out.status == MipStatus::Optimal {
        out.lb = out.ub.unwrap_or(out.lb);
    }
    out.time_s = started.elapsed().as_millis() as f64 / 1000.0;
    Ok(out)
}

/// `⌈10 · density⌉` clamped to `1..=10`; graphs with fewer than two vertices fall in class 1.
pub fn density_class(g: &Graph) -> u8 {
    match g.density() {
        Ok(d) => (&d * &Rational::from(10)).ceil().to_i64().unwrap_or(1).clamp(1, 10) as u8,
        Err(_) => 1,
    }
}

/// One CSV row: an instance solved under one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "E")]
    pub e: usize,
    pub model: ModelKind,
    pub lb: Bound,
    pub ub: Bound,
    pub status: MipStatus,
    pub time_s: f64,
    pub density_class: u8,
}

impl BenchRecord {
    pub fn solved(&self) -> bool {
        self.status == MipStatus::Optimal
    }
}

/// Objective bound: an exact value or +∞.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bound {
    Finite(Rational),
    Infinite,
}

impl From<Option<usize>> for Bound {
    fn from(v: Option<usize>) -> Self {
        match v {
            Some(x) if x != usize::MAX => Bound::Finite(Rational::from(x)),
            _ => Bound::Infinite,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(r) => write!(f, "{r}"),
            Bound::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Bound {
    type Err = crate::rational::ParseRationalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            Ok(Bound::Infinite)
        } else {
            s.parse().map(Bound::Finite)
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Reads a DIMACS file; the instance is named after the file stem.
pub fn read_instance(path: &Path) -> Result<(String, Graph), PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|source| PipelineError::Io { path: path.into(), source })?;
    let g = parse_dimacs(&text).map_err(|source| PipelineError::Parse { path: path.into(), source })?;
    let name = path.file_stem().map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned());
    Ok((name, g))
}

/// Parses, preprocesses, solves and validates one instance under each kind.
pub fn run_instance(path: &Path, kinds: &[ModelKind], opts: &SolveOptions) -> Result<Vec<BenchRecord>, PipelineError> {
    let (name, g) = read_instance(path)?;
    run_graph(&name, &g, kinds, opts)
}

pub fn run_graph(
    name: &str,
    g: &Graph,
    kinds: &[ModelKind],
    opts: &SolveOptions,
) -> Result<Vec<BenchRecord>, PipelineError> {
    let class = density_class(g);
    kinds
        .iter()
        .map(|&kind| {
            let sol = solve_graph(g, kind, opts)?;
            log::info!("{name} {kind}: lb={} ub={:?} {:?} in {}s", sol.lb, sol.ub, sol.status, sol.time_s);
            Ok(BenchRecord {
                instance: name.to_string(),
                v: g.n(),
                e: g.m(),
                model: kind,
                lb: Some(sol.lb).into(),
                ub: sol.ub.into(),
                status: sol.status,
                time_s: sol.time_s,
                density_class: class,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    /// `(kind, density class) -> (solved, attempted)`.
    pub summary: BTreeMap<(ModelKind, u8), (usize, usize)>,
}

/// Solves every `.col` file in `dir` under each kind, `jobs` instances at a time.
pub fn bench(dir: &Path, kinds: &[ModelKind], opts: &SolveOptions, jobs: usize) -> Result<BenchReport, PipelineError> {
    let entries = std::fs::read_dir(dir).map_err(|source| PipelineError::Io { path: dir.into(), source })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "col"))
        .collect();
    if files.is_empty() {
        return Err(PipelineError::EmptyDirectory(dir.into()));
    }
    files.sort();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    let per_file: Vec<Result<Vec<BenchRecord>, PipelineError>> =
        pool.install(|| files.par_iter().map(|p| run_instance(p, kinds, opts)).collect());
    let mut records = Vec::new();
    for r in per_file {
        records.extend(r?);
    }
    records
        .sort_by(|a, b| a.instance.cmp(&b.instance).then(kind_order(a.model, kinds).cmp(&kind_order(b.model, kinds))));
    let summary = summarize(&records);
    Ok(BenchReport { records, summary })
}

fn kind_order(k: ModelKind, kinds: &[ModelKind]) -> usize {
    kinds.iter().position(|&x| x == k).unwrap_or(usize::MAX)
}

pub fn summarize(records: &[BenchRecord]) -> BTreeMap<(ModelKind, u8), (usize, usize)> {
    let mut out = BTreeMap::new();
    for r in records {
        let e = out.entry((r.model, r.density_class)).or_insert((0, 0));
        e.0 += r.solved() as usize;
        e.1 += 1;
    }
    out
}

/// Solved/attempted per density class, one column per kind.
pub fn summary_table(summary: &BTreeMap<(ModelKind, u8), (usize, usize)>) -> String {
    let kinds: Vec<ModelKind> = ModelKind::ALL.into_iter().filter(|k| summary.keys().any(|(kk, _)| kk == k)).collect();
    let mut out = String::from("class");
    for k in &kinds {
        out.push_str(&format!("\t{k}"));
    }
    out.push('\n');
    for class in 1..=10u8 {
        if !kinds.iter().any(|k| summary.contains_key(&(*k, class))) {
            continue;
        }
        out.push_str(&format!("({:.1},{:.1}]", (class - 1) as f64 / 10.0, class as f64 / 10.0));
        for k in &kinds {
            let (s, a) = summary.get(&(*k, class)).copied().unwrap_or((0, 0));
            out.push_str(&format!("\t{s}/{a}"));
        }
        out.push('\n');
    }
    out
}

pub fn write_csv<W: std::io::Write>(records: &[BenchRecord], w: W) -> Result<(), PipelineError> {
    let mut wr = csv::Writer::from_writer(w);
    for r in records {
        wr.serialize(r)?;
    }
    wr.flush().map_err(|source| PipelineError::Io { path: "<csv>".into(), source })?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(r: R) -> Result<Vec<BenchRecord>, PipelineError> {
    csv::Reader::from_reader(r).deserialize().map(|rec| rec.map_err(PipelineError::from)).collect()
}

//! MPS export and a reader for the files this module writes.
//!
//! The reader accepts general fixed or free MPS for the sections written here
//! (no RANGES, no SOS). Model metadata that MPS has no place for (kind, H, q,
//! the graph, row tags, branching priorities) travels in `*` comment lines so
//! that a written model reads back identical.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::model::{IlpModel, LinCon, Sense, VarKind, Variable};
use crate::rational::Rational;
use crate::ModelKind;

/// Longest name allowed by fixed-format MPS.
pub const FIXED_NAME_LEN: usize = 8;

const OBJ: &str = "OBJ";
const PER_LINE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MpsFormat {
    #[default]
    Fixed,
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MpsError {
    #[error("name {0:?} exceeds 8 characters; use free MPS format")]
    NameTooLong(String),
    #[error("value {0} has no exact decimal form")]
    Inexact(Rational),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing popcolor metadata header")]
    MissingMetadata,
    #[error("unsupported MPS section {0}")]
    Unsupported(String),
    #[error("variable {0} has an infinite bound")]
    InfiniteBound(String),
}

fn number(r: &Rational) -> Result<String, MpsError> {
    r.to_exact_decimal().ok_or_else(|| MpsError::Inexact(r.clone()))
}

fn row_name(i: usize) -> String {
    format!("R{i}")
}

struct Writer {
    format: MpsFormat,
    out: String,
}

impl Writer {
    fn check(&self, name: &str) -> Result<(), MpsError> {
        if self.format == MpsFormat::Fixed && name.len() > FIXED_NAME_LEN {
            return Err(MpsError::NameTooLong(name.to_string()));
        }
        Ok(())
    }

    /// One data line: field 1 code, then name / name / value.
    fn line(&mut self, code: &str, fields: &[&str]) -> Result<(), MpsError> {
        match self.format {
            MpsFormat::Fixed => {
                let mut s = format!(" {code:<2} ");
                // name fields start at columns 5, 15; numbers at 25, 40 with width 12
                for (k, f) in fields.iter().enumerate() {
                    match k {
                        0 | 1 => s.push_str(&format!("{f:<10}")),
                        _ => s.push_str(&format!("{f:<15}")),
                    }
                }
                self.out.push_str(s.trim_end());
            }
            MpsFormat::Free => {
                let mut s = format!(" {code}");
                for f in fields {
                    s.push(' ');
                    s.push_str(f);
                }
                self.out.push_str(s.trim_end());
            }
        }
        self.out.push('\n');
        Ok(())
    }

    fn value_line(&mut self, code: &str, a: &str, b: &str, v: &Rational) -> Result<(), MpsError> {
        let v = number(v)?;
        if self.format == MpsFormat::Fixed && v.len() > 12 {
            return Err(MpsError::NameTooLong(v));
        }
        self.line(code, &[a, b, &v])
    }

    fn comment_list<T: ToString>(&mut self, key: &str, items: impl Iterator<Item = T>) {
        let items: Vec<String> = items.map(|t| t.to_string()).collect();
        if items.is_empty() {
            let _ = writeln!(self.out, "* {key}");
        }
        for chunk in items.chunks(PER_LINE) {
            let _ = writeln!(self.out, "* {key} {}", chunk.join(" "));
        }
    }
}

/// Runs of equal values as `(first, last, value)`.
fn runs<T: PartialEq + Clone>(xs: impl Iterator<Item = T>) -> Vec<(usize, usize, T)> {
    let mut out: Vec<(usize, usize, T)> = Vec::new();
    for (i, x) in xs.enumerate() {
        match out.last_mut() {
            Some(last) if last.2 == x => last.1 = i,
            _ => out.push((i, i, x)),
        }
    }
    out
}

pub fn write_mps(m: &IlpModel, format: MpsFormat) -> Result<String, MpsError> {
    let mut w = Writer { format, out: String::new() };
    let name = format!("{}_H{}", m.kind.name(), m.h);
    w.check(&name)?;

    let _ = writeln!(w.out, "* POPCOLOR {} {} {} {}", m.kind.name(), m.h, m.q, m.n);
    w.comment_list("EDGES", m.edges.iter().map(|(u, v)| format!("{u}-{v}")));
    w.comment_list("VMAP", m.vertex_map.iter());
    for (a, b, tag) in runs(m.constraints.iter().map(|c| c.tag.clone())) {
        let _ = writeln!(w.out, "* TAG {a} {b} {tag}");
    }
    for (a, b, p) in runs(m.variables.iter().map(|v| v.priority)) {
        let _ = writeln!(w.out, "* PRIORITY {a} {b} {p}");
    }

    let _ = writeln!(w.out, "NAME          {name}");
    w.out.push_str("ROWS\n");
    w.line("N", &[OBJ])?;
    for (i, c) in m.constraints.iter().enumerate() {
        let code = match c.sense {
            Sense::Le => "L",
            Sense::Eq => "E",
            Sense::Ge => "G",
        };
        let r = row_name(i);
        w.check(&r)?;
        w.line(code, &[&r])?;
    }

    let mut by_col: Vec<Vec<(String, &Rational)>> = vec![Vec::new(); m.variables.len()];
    for (j, c) in &m.objective.terms {
        by_col[*j].push((OBJ.to_string(), c));
    }
    for (i, con) in m.constraints.iter().enumerate() {
        for (j, a) in &con.terms {
            by_col[*j].push((row_name(i), a));
        }
    }

    w.out.push_str("COLUMNS\n");
    let zero = Rational::zero();
    let mut in_int = false;
    let mut markers = 0usize;
    for (j, var) in m.variables.iter().enumerate() {
        if var.integer != in_int {
            let marker = format!("M{markers}");
            let kind = if var.integer { "'INTORG'" } else { "'INTEND'" };
            w.line("", &[&marker, "'MARKER'", kind])?;
            markers += 1;
            in_int = var.integer;
        }
        let col = var.kind.to_string();
        w.check(&col)?;
        if by_col[j].is_empty() {
            w.value_line("", &col, OBJ, &zero)?;
        }
        for (row, a) in &by_col[j] {
            w.value_line("", &col, row, a)?;
        }
    }
    if in_int {
        w.line("", &[&format!("M{markers}"), "'MARKER'", "'INTEND'"])?;
    }

    w.out.push_str("RHS\n");
    if !m.objective.constant.is_zero() {
        w.value_line("", "RHS", OBJ, &-m.objective.constant.clone())?;
    }
    for (i, c) in m.constraints.iter().enumerate() {
        if !c.rhs.is_zero() {
            w.value_line("", "RHS", &row_name(i), &c.rhs)?;
        }
    }

    w.out.push_str("BOUNDS\n");
    let one = Rational::one();
    for var in &m.variables {
        let col = var.kind.to_string();
        if var.integer && var.lower.is_zero() && var.upper == one {
            w.line("BV", &["BND", &col])?;
        } else if var.lower == var.upper {
            w.value_line("FX", "BND", &col, &var.lower)?;
        } else {
            if !var.lower.is_zero() {
                w.value_line("LO", "BND", &col, &var.lower)?;
            }
            w.value_line("UP", "BND", &col, &var.upper)?;
        }
    }
    w.out.push_str("ENDATA\n");
    Ok(w.out)
}

#[derive(PartialEq)]
enum Section {
    None,
    Rows,
    Columns,
    Rhs,
    Bounds,
    Done,
}

struct Meta {
    kind: ModelKind,
    h: usize,
    q: usize,
    n: usize,
    edges: Vec<(usize, usize)>,
    vmap: Vec<usize>,
    tags: Vec<(usize, usize, String)>,
    priorities: Vec<(usize, usize, i64)>,
}

/// Reads a model written by [`write_mps`] (either format).
pub fn read_mps(text: &str) -> Result<IlpModel, MpsError> {
    let mut meta: Option<Meta> = None;
    let mut section = Section::None;
    let mut obj_name = String::new();
    let mut rows: Vec<(String, Sense)> = Vec::new();
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut row_terms: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    let mut obj_terms: Vec<(usize, Rational)> = Vec::new();
    let mut constant = Rational::zero();
    let mut cols: Vec<(VarKind, bool)> = Vec::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut lower: Vec<Option<Rational>> = Vec::new();
    let mut upper: Vec<Option<Rational>> = Vec::new();
    let mut in_int = false;

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let syntax = |msg: String| MpsError::Syntax { line, msg };
        let num = |s: &str| s.parse::<Rational>().map_err(|_| syntax(format!("bad number {s:?}")));
        if let Some(c) = raw.strip_prefix('*') {
            read_comment(c, &mut meta).map_err(syntax)?;
            continue;
        }
        if raw.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with([' ', '\t']) {
            section = match f[0] {
                "NAME" => Section::None,
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::Done,
                other => return Err(MpsError::Unsupported(other.to_string())),
            };
            continue;
        }
        match section {
            Section::Rows => {
                let [code, name] = f[..] else { return Err(syntax("ROWS entry needs two fields".into())) };
                let sense = match code {
                    "N" => {
                        if obj_name.is_empty() {
                            obj_name = name.to_string();
                        }
                        continue;
                    }
                    "L" => Sense::Le,
                    "E" => Sense::Eq,
                    "G" => Sense::Ge,
                    _ => return Err(syntax(format!("row type {code:?}"))),
                };
                row_index.insert(name.to_string(), rows.len());
                rows.push((name.to_string(), sense));
                row_terms.push(Vec::new());
                rhs.push(Rational::zero());
            }
            Section::Columns => {
                if f.len() == 3 && f[1] == "'MARKER'" {
                    in_int = match f[2] {
                        "'INTORG'" => true,
                        "'INTEND'" => false,
                        _ => return Err(syntax(format!("marker {:?}", f[2]))),
                    };
                    continue;
                }
                if f.len() != 3 && f.len() != 5 {
                    return Err(syntax("COLUMNS entry needs 3 or 5 fields".into()));
                }
                let j = match col_index.get(f[0]) {
                    Some(&j) => j,
                    None => {
                        let kind: VarKind = f[0].parse().map_err(|_| syntax(format!("column {:?}", f[0])))?;
                        col_index.insert(f[0].to_string(), cols.len());
                        cols.push((kind, in_int));
                        lower.push(None);
                        upper.push(None);
                        cols.len() - 1
                    }
                };
                for pair in f[1..].chunks(2) {
                    let v = num(pair[1])?;
                    if v.is_zero() {
                        continue;
                    }
                    if pair[0] == obj_name {
                        obj_terms.push((j, v));
                    } else {
                        let i = *row_index.get(pair[0]).ok_or_else(|| syntax(format!("unknown row {:?}", pair[0])))?;
                        row_terms[i].push((j, v));
                    }
                }
            }
            Section::Rhs => {
                if f.len() != 3 && f.len() != 5 {
                    return Err(syntax("RHS entry needs 3 or 5 fields".into()));
                }
                for pair in f[1..].chunks(2) {
                    let v = num(pair[1])?;
                    if pair[0] == obj_name {
                        constant = -v;
                    } else {
                        let i = *row_index.get(pair[0]).ok_or_else(|| syntax(format!("unknown row {:?}", pair[0])))?;
                        rhs[i] = v;
                    }
                }
            }
            Section::Bounds => {
                let j = *f
                    .get(2)
                    .and_then(|c| col_index.get(*c))
                    .ok_or_else(|| syntax("bound on unknown column".into()))?;
                let value = || f.get(3).map(|s| num(s)).unwrap_or_else(|| Err(syntax("missing bound value".into())));
                match f[0] {
                    "BV" => {
                        lower[j] = Some(Rational::zero());
                        upper[j] = Some(Rational::one());
                        cols[j].1 = true;
                    }
                    "FX" => {
                        let v = value()?;
                        lower[j] = Some(v.clone());
                        upper[j] = Some(v);
                    }
                    "LO" => lower[j] = Some(value()?),
                    "UP" => upper[j] = Some(value()?),
                    "LI" => {
                        lower[j] = Some(value()?);
                        cols[j].1 = true;
                    }
                    "UI" => {
                        upper[j] = Some(value()?);
                        cols[j].1 = true;
                    }
                    "MI" | "PL" | "FR" => return Err(MpsError::InfiniteBound(f[2].to_string())),
                    other => return Err(syntax(format!("bound type {other:?}"))),
                }
            }
            Section::None | Section::Done => return Err(syntax("data line outside a section".into())),
        }
    }

    let meta = meta.ok_or(MpsError::MissingMetadata)?;
    let mut m = IlpModel::empty(meta.kind, meta.h, meta.q, meta.n, meta.edges);
    m.vertex_map = meta.vmap;
    for (j, (kind, integer)) in cols.into_iter().enumerate() {
        let upper = upper[j].take().ok_or_else(|| MpsError::InfiniteBound(kind.to_string()))?;
        let lower = lower[j].take().unwrap_or_else(Rational::zero);
        m.add_variable(Variable { kind, lower, upper, integer, priority: 0 });
    }
    for (a, b, p) in meta.priorities {
        for v in m.variables.iter_mut().take(b + 1).skip(a) {
            v.priority = p;
        }
    }
    let mut tags = vec![String::new(); rows.len()];
    for (a, b, t) in meta.tags {
        for tag in tags.iter_mut().take(b + 1).skip(a) {
            tag.clone_from(&t);
        }
    }
    for (i, ((_, sense), terms)) in rows.into_iter().zip(row_terms).enumerate() {
        m.constraints.push(LinCon { terms, sense, rhs: rhs[i].clone(), tag: std::mem::take(&mut tags[i]) });
    }
    m.objective.terms = obj_terms;
    m.objective.constant = constant;
    Ok(m)
}

fn read_comment(c: &str, meta: &mut Option<Meta>) -> Result<(), String> {
    let f: Vec<&str> = c.split_whitespace().collect();
    let int = |s: &str| s.parse::<usize>().map_err(|_| format!("bad integer {s:?}"));
    let Some(&key) = f.first() else { return Ok(()) };
    if key == "POPCOLOR" {
        let [_, kind, h, q, n] = f[..] else { return Err("POPCOLOR header needs four fields".into()) };
        *meta = Some(Meta {
            kind: kind.parse().map_err(|e: crate::ModelError| e.to_string())?,
            h: int(h)?,
            q: int(q)?,
            n: int(n)?,
            edges: Vec::new(),
            vmap: Vec::new(),
            tags: Vec::new(),
            priorities: Vec::new(),
        });
        return Ok(());
    }
    let Some(meta) = meta.as_mut() else { return Ok(()) };
    match key {
        "EDGES" => {
            for e in &f[1..] {
                let (u, v) = e.split_once('-').ok_or_else(|| format!("bad edge {e:?}"))?;
                meta.edges.push((int(u)?, int(v)?));
            }
        }
        "VMAP" => {
            for v in &f[1..] {
                meta.vmap.push(int(v)?);
            }
        }
        "TAG" => {
            let [_, a, b, t] = f[..] else { return Err("TAG needs three fields".into()) };
            meta.tags.push((int(a)?, int(b)?, t.to_string()));
        }
        "PRIORITY" => {
            let [_, a, b, p] = f[..] else { return Err("PRIORITY needs three fields".into()) };
            meta.priorities.push((int(a)?, int(b)?, p.parse().map_err(|_| format!("bad priority {p:?}"))?));
        }
        _ => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::model::{build_model, Objective};

    fn k(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, edges)
    }

    #[test]
    fn skeleton_of_single_binary() {
        let mut m = IlpModel::empty(ModelKind::Ass, 1, 1, 1, Vec::new());
        let j = m.add_variable(Variable {
            kind: VarKind::W { i: 1 },
            lower: Rational::zero(),
            upper: Rational::one(),
            integer: true,
            priority: 0,
        });
        m.objective = Objective { constant: Rational::zero(), terms: vec![(j, Rational::one())] };
        let text = write_mps(&m, MpsFormat::Fixed).unwrap();
        assert_eq!(text.lines().filter(|l| l.trim() == "N  OBJ").count(), 1);
        assert_eq!(text.lines().filter(|l| l.starts_with("    w_1")).count(), 1);
        assert!(text.lines().any(|l| l.trim_start().starts_with("BV") && l.ends_with("w_1")));
        assert!(text.ends_with("ENDATA\n"));
        assert_eq!(read_mps(&text).unwrap(), m);
    }

    #[test]
    fn ass_on_k3_counts() {
        let m = build_model(&k(3), ModelKind::Ass, 3, 1).unwrap();
        let text = write_mps(&m, MpsFormat::Fixed).unwrap();
        let rows = text.lines().skip_while(|l| *l != "ROWS").skip(1).take_while(|l| l.starts_with(' ')).count();
        assert_eq!(rows, 18);
        assert_eq!(read_mps(&text).unwrap().variables.len(), 12);
    }

    #[test]
    fn round_trip_free_and_fixed() {
        for kind in ModelKind::ALL {
            let m = build_model(&k(4), kind, 4, 1).unwrap();
            for format in [MpsFormat::Fixed, MpsFormat::Free] {
                let text = write_mps(&m, format).unwrap();
                assert_eq!(read_mps(&text).unwrap(), m, "{kind} {format:?}");
            }
        }
    }

    #[test]
    fn objective_constant_is_negated_rhs() {
        let m = build_model(&k(3), ModelKind::Pop, 3, 1).unwrap();
        assert_eq!(m.objective.constant, Rational::one());
        let text = write_mps(&m, MpsFormat::Free).unwrap();
        assert!(text.lines().any(|l| l.trim() == "RHS OBJ -1"));
    }

    #[test]
    fn long_names_need_free_format() {
        let n = 1000;
        let g = Graph::from_edges(n, [(1, 2)]);
        let m = build_model(&g, ModelKind::Ass, 10, 1).unwrap();
        assert!(matches!(write_mps(&m, MpsFormat::Fixed), Err(MpsError::NameTooLong(_))));
        assert_eq!(read_mps(&write_mps(&m, MpsFormat::Free).unwrap()).unwrap(), m);
    }

    #[test]
    fn reader_rejects_garbage() {
        assert_eq!(read_mps("NAME x\nROWS\n N OBJ\nENDATA\n"), Err(MpsError::MissingMetadata));
        assert!(matches!(read_mps("RANGES\n"), Err(MpsError::Unsupported(_))));
        assert!(matches!(read_mps("ROWS\n Q R0\n"), Err(MpsError::Syntax { line: 2, .. })));
    }
}

//! Simple undirected graphs with 1-based vertex ids and DIMACS `.col` I/O.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::rational::Rational;

/// Vertex identifier. Always 1-based on public interfaces.
pub type Vertex = usize;

/// A simple undirected graph on vertices `1..=n`.
///
/// Immutable after construction. Edges are stored once as `(u, v)` with
/// `u < v`, sorted; adjacency lists are sorted as well.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
    name: Option<String>,
}

impl Graph {
    /// Builds a graph from an edge list, silently dropping duplicates.
    ///
    /// Panics on self-loops or out-of-range endpoints; use [`Graph::try_from_edges`]
    /// for untrusted input.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        Self::try_from_edges(n, edges).expect("invalid edge list")
    }

    pub fn try_from_edges(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, ParseError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(ParseError::SelfLoop { line: 0, vertex: u });
            }
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(ParseError::VertexOutOfRange { line: 0, vertex: w, n });
                }
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n + 1];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        1..=self.n
    }

    /// Canonical edge list: `u < v`, lexicographically sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Vertex of largest degree, smallest id on ties; `None` for the empty graph.
    pub fn max_degree_vertex(&self) -> Option<Vertex> {
        self.vertices().max_by_key(|&v| (self.degree(v), std::cmp::Reverse(v)))
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v && u >= 1 && u <= self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_clique(&self, vs: &[Vertex]) -> bool {
        vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Induced subgraph on `keep` (original ids), relabelled `1..=keep.len()` in
    /// the given order. Returns the subgraph and the local-to-original map
    /// (`map[local - 1] = original`).
    pub fn induced(&self, keep: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let mut local = vec![0usize; self.n + 1];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i + 1;
        }
        let edges =
            self.edges.iter().filter(|&&(u, v)| local[u] != 0 && local[v] != 0).map(|&(u, v)| (local[u], local[v]));
        let mut sub = Graph::from_edges(keep.len(), edges);
        sub.name = self.name.clone();
        (sub, keep.to_vec())
    }

    /// `2|E| / (|V|(|V|-1))` as an exact rational.
    pub fn density(&self) -> Result<Rational, GraphError> {
        if self.n < 2 {
            return Err(GraphError::TooFewVertices(self.n));
        }
        let n = self.n as i64;
        Ok(Rational::new(2 * self.m() as i64, n * (n - 1)))
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.bfs_order(1).len() == self.n
    }

    fn bfs_order(&self, start: Vertex) -> Vec<Vertex> {
        let mut seen = vec![false; self.n + 1];
        let mut order = vec![start];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        order
    }

    /// Connected components, each relabelled `1..=k` in ascending original-id order.
    pub fn connected_components(&self) -> ComponentMap {
        let mut seen = vec![false; self.n + 1];
        let mut components = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            let mut members = self.bfs_order(s);
            for &v in &members {
                seen[v] = true;
            }
            members.sort_unstable();
            let (sub, map) = self.induced(&members);
            components.push(Component { graph: sub, to_original: map });
        }
        ComponentMap { components }
    }

    /// Returns `true` iff the graph has an odd cycle.
    pub fn has_odd_cycle(&self) -> bool {
        let mut side = vec![u8::MAX; self.n + 1];
        for s in self.vertices() {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        queue.push_back(w);
                    } else if side[w] == side[u] {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Serializes to DIMACS `.col` with the canonical sorted edge list.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(out, "c FILE: {name}");
        }
        let _ = writeln!(out, "p edge {} {}", self.n, self.m());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "e {u} {v}");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("density needs at least two vertices, graph has {0}")]
    TooFewVertices(usize),
}

/// One connected component with its map back to the parent graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub graph: Graph,
    /// `to_original[local - 1]` is the parent-graph id of local vertex `local`.
    pub to_original: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentMap {
    pub components: Vec<Component>,
}

/// Parses DIMACS `.col` text.
///
/// Duplicate edges (in either orientation) are merged. A header edge count
/// that disagrees with the deduplicated count only produces a warning.
pub fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut raw_edges = Vec::new();
    let mut name = None;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !line.is_ascii() {
            return Err(ParseError::NonAscii { line: lineno });
        }
        let mut fields = line.split_whitespace();
        let tag = fields.next().unwrap_or_default();
        match tag {
            "c" => {
                if name.is_none() {
                    let rest = line[1..].trim();
                    if let Some(file) = rest.strip_prefix("FILE:") {
                        name = Some(file.trim().trim_end_matches(".col").to_string());
                    }
                }
            }
            "p" => {
                if header.is_some() {
                    return Err(ParseError::DuplicateProblemLine { line: lineno });
                }
                let kind = fields.next();
                let n = fields.next().and_then(|s| s.parse::<usize>().ok());
                let m = fields.next().and_then(|s| s.parse::<usize>().ok());
                match (kind, n, m, fields.next()) {
                    (Some("edge" | "col"), Some(n), Some(m), None) => header = Some((n, m)),
                    _ => return Err(ParseError::BadProblemLine { line: lineno, content: line.to_string() }),
                }
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(ParseError::EdgeBeforeHeader { line: lineno });
                };
                let u = fields.next().and_then(|s| s.parse::<usize>().ok());
                let v = fields.next().and_then(|s| s.parse::<usize>().ok());
                let (Some(u), Some(v), None) = (u, v, fields.next()) else {
                    return Err(ParseError::BadEdgeLine { line: lineno, content: line.to_string() });
                };
                for w in [u, v] {
                    if w == 0 || w > n {
                        return Err(ParseError::VertexOutOfRange { line: lineno, vertex: w, n });
                    }
                }
                if u == v {
                    return Err(ParseError::SelfLoop { line: lineno, vertex: u });
                }
                raw_edges.push((u, v));
            }
            other => return Err(ParseError::UnknownRecord { line: lineno, tag: other.to_string() }),
        }
    }
    let (n, m) = header.ok_or(ParseError::MissingProblemLine)?;
    let g = Graph::try_from_edges(n, raw_edges)?;
    if g.m() != m {
        log::warn!("DIMACS header declares {m} edges, found {} distinct edges", g.m());
    }
    Ok(match name {
        Some(name) => g.with_name(name),
        None => g,
    })
}

/// Small named graph families used by tests, examples and the `verify` report.
pub mod fixtures {
    use rand::Rng;

    use super::{Graph, Vertex};

    pub fn complete(n: usize) -> Graph {
        let edges = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).with_name(format!("K{n}"))
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let edges = (1..=n).map(|u| (u, u % n + 1));
        Graph::from_edges(n, edges).with_name(format!("C{n}"))
    }

    pub fn path(n: usize) -> Graph {
        let edges = (1..n).map(|u| (u, u + 1));
        Graph::from_edges(n, edges).with_name(format!("P{n}"))
    }

    pub fn star(leaves: usize) -> Graph {
        let edges = (2..=leaves + 1).map(|v| (1, v));
        Graph::from_edges(leaves + 1, edges).with_name(format!("K1,{leaves}"))
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_edges(n, []).with_name(format!("E{n}"))
    }

    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i + 1, (i + 1) % 5 + 1));
            edges.push((i + 1, i + 6));
            edges.push((i + 6, (i + 2) % 5 + 6));
        }
        Graph::from_edges(10, edges).with_name("petersen")
    }

    /// Mycielskian of `g`: vertices `1..=n` keep their ids, shadows are
    /// `n+1..=2n`, the apex is `2n+1`.
    pub fn mycielskian(g: &Graph) -> Graph {
        let n = g.n();
        let mut edges = Vec::new();
        for &(u, v) in g.edges() {
            edges.push((u, v));
            edges.push((u, v + n));
            edges.push((v, u + n));
        }
        for v in 1..=n {
            edges.push((v + n, 2 * n + 1));
        }
        Graph::from_edges(2 * n + 1, edges)
    }

    /// DIMACS `mycielK`: `myciel3` is the Mycielskian of C5 (the Grötzsch graph).
    pub fn myciel(k: usize) -> Graph {
        assert!(k >= 3, "myciel{k} is not a DIMACS instance");
        let mut g = cycle(5);
        for _ in 3..=k {
            g = mycielskian(&g);
        }
        g.with_name(format!("myciel{k}"))
    }

    /// DIMACS `queenR_C`: squares of an R x C board, adjacent when a queen
    /// attacks along a row, column or diagonal.
    pub fn queen(rows: usize, cols: usize) -> Graph {
        let id = |r: usize, c: usize| -> Vertex { r * cols + c + 1 };
        let mut edges = Vec::new();
        for r1 in 0..rows {
            for c1 in 0..cols {
                for r2 in 0..rows {
                    for c2 in 0..cols {
                        let (a, b) = (id(r1, c1), id(r2, c2));
                        if a >= b {
                            continue;
                        }
                        let same_line = r1 == r2 || c1 == c2;
                        let diagonal = r1.abs_diff(r2) == c1.abs_diff(c2);
                        if same_line || diagonal {
                            edges.push((a, b));
                        }
                    }
                }
            }
        }
        Graph::from_edges(rows * cols, edges).with_name(format!("queen{rows}_{cols}"))
    }

    /// Erdős–Rényi `G(n, p)` sample.
    pub fn random<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, edges)
    }

    /// `G(n, p)` conditioned on connectivity by rejection.
    pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
        loop {
            let g = random(rng, n, p);
            if g.is_connected() {
                return g;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_triangle() {
        let g = parse_dimacs("p edge 3 3\ne 1 2\ne 2 3\ne 1 3").unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        assert_eq!(g.edges(), &[(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn reversed_duplicate_is_merged() {
        let g = parse_dimacs("c dup\np edge 2 1\ne 1 2\ne 2 1").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
    }

    #[test]
    fn header_count_mismatch_is_not_an_error() {
        let g = parse_dimacs("p edge 3 7\ne 1 2").unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_dimacs("p edge 2 1\ne 1 1"), Err(ParseError::SelfLoop { .. })));
        assert!(matches!(parse_dimacs("p edge 2 1\ne 1 3"), Err(ParseError::VertexOutOfRange { vertex: 3, .. })));
        assert!(matches!(parse_dimacs("e 1 2"), Err(ParseError::EdgeBeforeHeader { .. })));
        assert!(matches!(parse_dimacs("c only"), Err(ParseError::MissingProblemLine)));
        assert!(matches!(parse_dimacs("p edge x 1"), Err(ParseError::BadProblemLine { .. })));
        assert!(matches!(parse_dimacs("p edge 2 1\np edge 2 1"), Err(ParseError::DuplicateProblemLine { .. })));
        assert!(matches!(parse_dimacs("p edge 2 1\nn 1 5"), Err(ParseError::UnknownRecord { .. })));
        assert!(matches!(parse_dimacs("p edge 2 1\ne 1"), Err(ParseError::BadEdgeLine { .. })));
    }

    #[test]
    fn components() {
        let k3 = fixtures::complete(3);
        let cm = k3.connected_components();
        assert_eq!(cm.components.len(), 1);
        assert_eq!(cm.components[0].graph.edges(), k3.edges());

        let two = Graph::from_edges(4, [(1, 3), (2, 4)]);
        let cm = two.connected_components();
        assert_eq!(cm.components.len(), 2);
        assert_eq!(cm.components[0].to_original, vec![1, 3]);
        assert_eq!(cm.components[1].to_original, vec![2, 4]);
        assert!(cm.components.iter().all(|c| c.graph.m() == 1));

        let cm = fixtures::empty(4).connected_components();
        assert_eq!(cm.components.len(), 4);
        assert!(cm.components.iter().all(|c| c.graph.n() == 1));
    }

    #[test]
    fn densities() {
        assert_eq!(fixtures::complete(3).density().unwrap(), Rational::one());
        assert_eq!(fixtures::path(3).density().unwrap(), Rational::new(2, 3));
        let m3 = fixtures::myciel(3);
        assert_eq!((m3.n(), m3.m()), (11, 20));
        assert_eq!(m3.density().unwrap(), Rational::new(4, 11));
        assert!(fixtures::empty(1).density().is_err());
    }

    #[test]
    fn named_fixtures_match_dimacs_sizes() {
        let sizes = [
            (fixtures::myciel(4), 23, 71),
            (fixtures::myciel(5), 47, 236),
            (fixtures::queen(5, 5), 25, 160),
            (fixtures::queen(6, 6), 36, 290),
            (fixtures::queen(7, 7), 49, 476),
            (fixtures::petersen(), 10, 15),
        ];
        for (g, n, m) in sizes {
            assert_eq!((g.n(), g.m()), (n, m), "{:?}", g.name());
        }
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..12).prop_flat_map(|n| {
            proptest::collection::vec((1..=n, 1..=n), 0..40)
                .prop_map(move |pairs| Graph::from_edges(n, pairs.into_iter().filter(|(u, v)| u != v)))
        })
    }

    proptest! {
        #[test]
        fn dimacs_round_trip(g in arb_graph()) {
            let back = parse_dimacs(&g.to_dimacs()).unwrap();
            prop_assert_eq!(back.edges(), g.edges());
            prop_assert_eq!(back.n(), g.n());
        }

        #[test]
        fn degree_sum_and_symmetry(g in arb_graph()) {
            let sum: usize = g.vertices().map(|v| g.degree(v)).sum();
            prop_assert_eq!(sum, 2 * g.m());
            for u in g.vertices() {
                for &v in g.neighbors(u) {
                    prop_assert!(g.neighbors(v).contains(&u));
                }
            }
        }

        #[test]
        fn components_partition_vertices(g in arb_graph()) {
            let cm = g.connected_components();
            let mut all: Vec<_> = cm.components.iter().flat_map(|c| c.to_original.clone()).collect();
            all.sort_unstable();
            prop_assert_eq!(all, (1..=g.n()).collect::<Vec<_>>());
            for c in &cm.components {
                prop_assert!(c.graph.is_connected());
            }
            let edges: usize = cm.components.iter().map(|c| c.graph.m()).sum();
            prop_assert_eq!(edges, g.m());
        }
    }
}

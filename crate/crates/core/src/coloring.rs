use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Vertex};

/// Colour assignment, vertex id to colour in `1..`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring(BTreeMap<Vertex, usize>);

impl Coloring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: Vertex) -> Option<usize> {
        self.0.get(&v).copied()
    }

    pub fn set(&mut self, v: Vertex, color: usize) {
        self.0.insert(v, color);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, usize)> + '_ {
        self.0.iter().map(|(&v, &c)| (v, c))
    }

    /// Number of distinct colours in use.
    pub fn num_colors(&self) -> usize {
        self.0.values().collect::<BTreeSet<_>>().len()
    }

    pub fn max_color(&self) -> usize {
        self.0.values().copied().max().unwrap_or(0)
    }

    /// Renames vertices through `map[local - 1]`.
    pub fn relabel(&self, map: &[Vertex]) -> Coloring {
        self.iter().map(|(v, c)| (map[v - 1], c)).collect()
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        matches!(validate_coloring(g, self), Ok(v) if v.is_empty())
    }
}

impl FromIterator<(Vertex, usize)> for Coloring {
    fn from_iter<T: IntoIterator<Item = (Vertex, usize)>>(iter: T) -> Self {
        Coloring(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColoringError {
    #[error("vertex {0} has no colour")]
    MissingVertex(Vertex),
}

/// Every edge whose endpoints share a colour; empty iff the colouring is proper.
pub fn validate_coloring(g: &Graph, c: &Coloring) -> Result<Vec<(Vertex, Vertex)>, ColoringError> {
    if let Some(v) = g.vertices().find(|&v| c.get(v).is_none()) {
        return Err(ColoringError::MissingVertex(v));
    }
    Ok(g.edges().iter().copied().filter(|&(u, v)| c.get(u) == c.get(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn validation() {
        let k3 = fixtures::complete(3);
        let good: Coloring = [(1, 1), (2, 2), (3, 3)].into_iter().collect();
        assert_eq!(validate_coloring(&k3, &good).unwrap(), vec![]);
        let bad: Coloring = [(1, 1), (2, 1), (3, 2)].into_iter().collect();
        assert_eq!(validate_coloring(&k3, &bad).unwrap(), vec![(1, 2)]);
        let e = fixtures::empty(3);
        let mono: Coloring = (1..=3).map(|v| (v, 1)).collect();
        assert_eq!(validate_coloring(&e, &mono).unwrap(), vec![]);
        let partial: Coloring = [(1, 1)].into_iter().collect();
        assert_eq!(validate_coloring(&k3, &partial), Err(ColoringError::MissingVertex(2)));
    }
}

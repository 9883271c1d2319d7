//! In-memory edge-list graph used as the input type for layouts, reductions and
//! oracles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iomachine::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    directed: bool,
    weighted: bool,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, directed: bool, weighted: bool) -> Self {
        Graph { n, directed, weighted, edges: Vec::new() }
    }

    pub fn undirected(n: usize) -> Self {
        Self::new(n, false, false)
    }

    pub fn directed(n: usize) -> Self {
        Self::new(n, true, false)
    }

    /// Unweighted graph from `(u, v)` pairs.
    pub fn from_pairs(n: usize, directed: bool, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n, directed, false);
        for &(u, v) in pairs {
            g.add_edge(u, v, 1)?;
        }
        Ok(g)
    }

    pub fn from_weighted(n: usize, directed: bool, edges: &[(usize, usize, Word)]) -> Result<Self> {
        let mut g = Self::new(n, directed, true);
        for &(u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_pairs(n, false, &pairs).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_pairs(n, false, &pairs).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u, v));
            }
        }
        Self::from_pairs(n, false, &pairs).unwrap()
    }

    /// Star with node 0 as center.
    pub fn star(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Self::from_pairs(n, false, &pairs).unwrap()
    }

    pub fn add_node(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: Word) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Argument(format!("edge ({u},{v}) outside 0..{}", self.n)));
        }
        if !self.weighted && w != 1 {
            self.weighted = true;
        }
        self.edges.push(Edge { u, v, w });
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored edges (an undirected edge counts once).
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn set_weighted(&mut self, weighted: bool) {
        self.weighted = weighted;
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Option<Edge> {
        self.edges.get(i).copied()
    }

    pub fn max_abs_weight(&self) -> Word {
        self.edges.iter().map(|e| e.w.abs()).max().unwrap_or(0)
    }

    /// Arcs as stored in a layout: undirected edges appear in both directions.
    pub fn arcs(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edges.len() * if self.directed { 1 } else { 2 });
        for &e in &self.edges {
            out.push(e);
            if !self.directed {
                out.push(Edge { u: e.v, v: e.u, w: e.w });
            }
        }
        out
    }

    /// Out-neighbors with weights, in insertion order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, Word)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in self.arcs() {
            adj[e.u].push((e.v, e.w));
        }
        adj
    }

    /// Reverse adjacency (in-neighbors).
    pub fn reverse_adjacency(&self) -> Vec<Vec<(usize, Word)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in self.arcs() {
            adj[e.v].push((e.u, e.w));
        }
        adj
    }

    /// No self-loops and no repeated (unordered, if undirected) pairs.
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        for e in &self.edges {
            if e.u == e.v {
                return false;
            }
            let key = if self.directed { (e.u, e.v) } else { (e.u.min(e.v), e.u.max(e.v)) };
            if !seen.insert(key) {
                return false;
            }
        }
        true
    }

    /// Copy with edge `i` removed.
    pub fn without_edge(&self, i: usize) -> Graph {
        let mut g = self.clone();
        g.edges.remove(i);
        g
    }

    /// Copy with every undirected edge replaced by two arcs.
    pub fn to_directed(&self) -> Graph {
        Graph { n: self.n, directed: true, weighted: self.weighted, edges: self.arcs() }
    }

    /// Whether every node reaches every other (ignoring direction for
    /// undirected graphs, following arcs for directed ones).
    pub fn is_strongly_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let reach = |adj: &Vec<Vec<(usize, Word)>>| {
            let mut seen = vec![false; self.n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(u) = stack.pop() {
                for &(v, _) in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(&self.adjacency()) && (!self.directed || reach(&self.reverse_adjacency()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders() {
        assert_eq!(Graph::complete(4).m(), 6);
        assert_eq!(Graph::cycle(5).m(), 5);
        assert_eq!(Graph::star(4).adjacency()[0].len(), 3);
        assert!(Graph::path(3).is_strongly_connected());
        let mut g = Graph::undirected(3);
        g.add_edge(0, 1, 1).unwrap();
        assert!(!g.is_strongly_connected());
        assert!(g.add_edge(0, 3, 1).is_err());
    }

    #[test]
    fn simplicity() {
        let g = Graph::from_pairs(3, false, &[(0, 1), (1, 0)]).unwrap();
        assert!(!g.is_simple());
        let g = Graph::from_pairs(3, true, &[(0, 1), (1, 0)]).unwrap();
        assert!(g.is_simple());
    }
}

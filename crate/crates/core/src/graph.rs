//! Undirected weighted graphs and their Laplacians.

use std::collections::{BTreeMap, HashMap, VecDeque};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected link `i < j` with conductance `weight`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Immutable weighted graph on nodes `0..n`.
///
/// Links are stored once with `i < j`, sorted lexicographically. Every
/// per-link vector in this crate follows that order.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    n: usize,
    links: Vec<Link>,
    adjacency: Vec<Vec<(usize, f64)>>,
    index: HashMap<(usize, usize), usize>,
}

fn key(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl WeightedGraph {
    /// Builds a graph on `n` nodes. Repeated links with the same weight are
    /// merged; repeated links with different weights are rejected.
    pub fn new(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut set: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(a, b, w) in edges {
            for node in [a, b] {
                if node >= n {
                    return Err(Error::IndexOutOfRange { node, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop { node: a });
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonpositiveWeight { i: a, j: b, weight: w });
            }
            let k = key(a, b);
            match set.get(&k) {
                Some(&old) if old != w => return Err(Error::DuplicateLink { i: k.0, j: k.1 }),
                _ => {
                    set.insert(k, w);
                }
            }
        }
        let links: Vec<Link> = set
            .into_iter()
            .map(|((i, j), weight)| Link { i, j, weight })
            .collect();
        let mut adjacency = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(links.len());
        for (l, link) in links.iter().enumerate() {
            adjacency[link.i].push((link.j, link.weight));
            adjacency[link.j].push((link.i, link.weight));
            index.insert((link.i, link.j), l);
        }
        Ok(Self { n, links, adjacency, index })
    }

    /// Builds a graph whose node count is one more than the largest index seen.
    pub fn from_edges(edges: &[(usize, usize, f64)]) -> Result<Self> {
        let n = edges.iter().map(|&(a, b, _)| a.max(b) + 1).max().unwrap_or(0);
        Self::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// Neighbours of `i` with the conductance of the connecting link.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    /// Combinatorial degree `d_i`.
    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Weighted degree `k_i`.
    pub fn weighted_degree(&self, i: usize) -> f64 {
        self.adjacency[i].iter().map(|&(_, w)| w).sum()
    }

    pub fn link_index(&self, i: usize, j: usize) -> Option<usize> {
        self.index.get(&key(i, j)).copied()
    }

    pub fn has_link(&self, i: usize, j: usize) -> bool {
        self.link_index(i, j).is_some()
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        self.link_index(i, j).map(|l| self.links[l].weight)
    }

    pub fn edge_list(&self) -> Vec<(usize, usize, f64)> {
        self.links.iter().map(|l| (l.i, l.j, l.weight)).collect()
    }

    pub fn laplacian(&self) -> Laplacian {
        let mut q = DMatrix::zeros(self.n, self.n);
        for l in &self.links {
            q[(l.i, l.j)] -= l.weight;
            q[(l.j, l.i)] -= l.weight;
            q[(l.i, l.i)] += l.weight;
            q[(l.j, l.j)] += l.weight;
        }
        Laplacian(q)
    }

    pub fn components(&self) -> ComponentInfo {
        self.components_without(&vec![false; self.n], None)
    }

    /// Components after deleting the masked nodes and optionally one link.
    /// Removed nodes get no label (`usize::MAX`).
    fn components_without(&self, removed: &[bool], skip: Option<(usize, usize)>) -> ComponentInfo {
        let mut labels = vec![usize::MAX; self.n];
        let mut beta = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if removed[s] || labels[s] != usize::MAX {
                continue;
            }
            labels[s] = beta;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &self.adjacency[u] {
                    if removed[v] || labels[v] != usize::MAX || skip == Some(key(u, v)) {
                        continue;
                    }
                    labels[v] = beta;
                    queue.push_back(v);
                }
            }
            beta += 1;
        }
        ComponentInfo { beta, labels }
    }

    /// True when deleting the link increases the number of components.
    pub fn is_cut_link(&self, i: usize, j: usize) -> Result<bool> {
        if !self.has_link(i, j) {
            return Err(Error::LinkNotFound { i, j });
        }
        let before = self.components().beta;
        let after = self.components_without(&vec![false; self.n], Some(key(i, j))).beta;
        Ok(after > before)
    }

    /// Number of components left after deleting `nodes` and their links.
    pub fn removal_components(&self, nodes: &[usize]) -> usize {
        let mut removed = vec![false; self.n];
        for &v in nodes {
            if v < self.n {
                removed[v] = true;
            }
        }
        self.components_without(&removed, None).beta
    }

    /// Number of components after deleting one link (node set unchanged).
    pub fn link_removal_components(&self, i: usize, j: usize) -> usize {
        self.components_without(&vec![false; self.n], Some(key(i, j))).beta
    }

    /// Subgraph induced on `nodes`, relabelled in the given order.
    pub fn induced(&self, nodes: &[usize]) -> WeightedGraph {
        let mut map = vec![usize::MAX; self.n];
        for (new, &old) in nodes.iter().enumerate() {
            map[old] = new;
        }
        let edges: Vec<_> = self
            .links
            .iter()
            .filter(|l| map[l.i] != usize::MAX && map[l.j] != usize::MAX)
            .map(|l| (map[l.i], map[l.j], l.weight))
            .collect();
        WeightedGraph::new(nodes.len(), &edges).expect("induced subgraph of a valid graph")
    }

    /// Copy of the graph with one extra link.
    pub fn with_link(&self, i: usize, j: usize, weight: f64) -> Result<WeightedGraph> {
        if self.has_link(i, j) {
            return Err(Error::DuplicateLink { i: i.min(j), j: i.max(j) });
        }
        let mut edges = self.edge_list();
        edges.push((i, j, weight));
        WeightedGraph::new(self.n, &edges)
    }

    /// True when the graph has no cycles.
    pub fn is_forest(&self) -> bool {
        self.m() + self.components().beta == self.n
    }
}

/// Dense graph Laplacian `Q = diag(k) - C`.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian(pub DMatrix<f64>);

impl Laplacian {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }
}

/// Connected components: `labels[v]` is the component id of `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentInfo {
    pub beta: usize,
    pub labels: Vec<usize>,
}

impl ComponentInfo {
    /// Node lists per component, each sorted ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.beta];
        for (v, &c) in self.labels.iter().enumerate() {
            if c != usize::MAX {
                out[c].push(v);
            }
        }
        out
    }

    /// Components of the nonzero off-diagonal pattern of a square matrix.
    pub fn of_matrix(q: &DMatrix<f64>) -> ComponentInfo {
        let n = q.nrows();
        let mut labels = vec![usize::MAX; n];
        let mut beta = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if labels[s] != usize::MAX {
                continue;
            }
            labels[s] = beta;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for v in 0..n {
                    if v != u && labels[v] == usize::MAX && q[(u, v)] != 0.0 {
                        labels[v] = beta;
                        stack.push(v);
                    }
                }
            }
            beta += 1;
        }
        ComponentInfo { beta, labels }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap()
    }

    #[test]
    fn single_edge() {
        let g = WeightedGraph::new(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.laplacian().0, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn triangle_laplacian() {
        let q = triangle().laplacian().0;
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(q[(i, j)], if i == j { 2.0 } else { -1.0 });
            }
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(WeightedGraph::new(1, &[(0, 0, 1.0)]).unwrap_err(), Error::SelfLoop { node: 0 });
        assert!(matches!(
            WeightedGraph::new(2, &[(0, 1, 0.0)]),
            Err(Error::NonpositiveWeight { .. })
        ));
        assert!(matches!(
            WeightedGraph::new(2, &[(0, 1, f64::NAN)]),
            Err(Error::NonpositiveWeight { .. })
        ));
        assert_eq!(
            WeightedGraph::new(2, &[(0, 1, 1.0), (1, 0, 2.0)]).unwrap_err(),
            Error::DuplicateLink { i: 0, j: 1 }
        );
        assert_eq!(
            WeightedGraph::new(2, &[(0, 2, 1.0)]).unwrap_err(),
            Error::IndexOutOfRange { node: 2, n: 2 }
        );
        let g = WeightedGraph::new(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn empty_graph() {
        let g = WeightedGraph::new(3, &[]).unwrap();
        assert_eq!(g.laplacian().0, DMatrix::zeros(3, 3));
        assert_eq!(g.components().beta, 3);
    }

    #[test]
    fn component_counts() {
        assert_eq!(triangle().components().beta, 1);
        let g = WeightedGraph::new(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let c = g.components();
        assert_eq!(c.beta, 2);
        assert_eq!(c.labels, vec![0, 0, 1, 1]);
    }

    #[test]
    fn cut_links() {
        let path = WeightedGraph::new(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        for l in path.links() {
            assert!(path.is_cut_link(l.i, l.j).unwrap());
        }
        let t = triangle();
        for l in t.links() {
            assert!(!t.is_cut_link(l.i, l.j).unwrap());
        }
        let bowtie = WeightedGraph::new(
            6,
            &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (3, 4, 1.0), (4, 5, 1.0), (5, 3, 1.0), (2, 3, 1.0)],
        )
        .unwrap();
        assert!(bowtie.is_cut_link(2, 3).unwrap());
        assert!(!bowtie.is_cut_link(0, 1).unwrap());
        assert_eq!(t.is_cut_link(0, 5).unwrap_err(), Error::LinkNotFound { i: 0, j: 5 });
    }

    #[test]
    fn node_removal() {
        let star = WeightedGraph::new(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
        assert_eq!(star.removal_components(&[0]), 3);
        let c4 = WeightedGraph::new(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap();
        assert_eq!(c4.removal_components(&[2]), 1);
        let p5 = WeightedGraph::new(5, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)]).unwrap();
        assert_eq!(p5.removal_components(&[2]), 2);
    }

    #[test]
    fn matrix_components() {
        let g = WeightedGraph::new(5, &[(0, 1, 1.0), (3, 4, 2.0)]).unwrap();
        let c = ComponentInfo::of_matrix(&g.laplacian().0);
        assert_eq!(c, g.components());
    }
}

//! Weighted random spanning trees (forests on disconnected graphs).

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg;
use crate::resistance::ResistanceProfile;
use crate::rng::{rng_for, stream};

/// Link indices (graph order, ascending) of a spanning tree or forest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpanningTree {
    pub links: Vec<usize>,
}

impl SpanningTree {
    /// Product of the link weights.
    pub fn weight(&self, g: &WeightedGraph) -> f64 {
        self.links.iter().map(|&l| g.links()[l].weight).product()
    }

    /// Tree degree of every node.
    pub fn degrees(&self, g: &WeightedGraph) -> Vec<usize> {
        let mut d = vec![0; g.n()];
        for &l in &self.links {
            d[g.links()[l].i] += 1;
            d[g.links()[l].j] += 1;
        }
        d
    }

    /// Spans every component of `g` without cycles.
    pub fn is_spanning_forest_of(&self, g: &WeightedGraph) -> bool {
        self.spans_with(g, g.components().beta)
    }

    fn spans_with(&self, g: &WeightedGraph, beta: usize) -> bool {
        if self.links.len() + beta != g.n() {
            return false;
        }
        let mut parent: Vec<usize> = (0..g.n()).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &l in &self.links {
            let Some(link) = g.links().get(l) else { return false };
            let (a, b) = (root(&mut parent, link.i), root(&mut parent, link.j));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }
}

/// `Σ_T Π_{l∈T} c_l` by the matrix-tree theorem (determinant of the
/// Laplacian with row and column 0 removed).
pub fn tree_weight_total(g: &WeightedGraph) -> Result<f64> {
    let beta = g.components().beta;
    if beta != 1 {
        return Err(Error::Disconnected { beta });
    }
    let n = g.n();
    if n <= 1 {
        return Ok(1.0);
    }
    let rest: Vec<usize> = (1..n).collect();
    let reduced = linalg::gather(g.laplacian().matrix(), &rest);
    Ok(reduced.lu().determinant())
}

/// One tree drawn with probability proportional to its weight, by
/// loop-erased random walks rooted at the smallest node of each component.
pub fn sample_tree_with<R: Rng + ?Sized>(g: &WeightedGraph, rng: &mut R) -> SpanningTree {
    let n = g.n();
    let mut in_tree = vec![false; n];
    let comps = g.components();
    for members in comps.members() {
        in_tree[members[0]] = true;
    }
    let k: Vec<f64> = (0..n).map(|i| g.weighted_degree(i)).collect();
    let mut next = vec![usize::MAX; n];
    let mut links = Vec::with_capacity(n - comps.beta);
    for start in 0..n {
        let mut u = start;
        while !in_tree[u] {
            let mut x = rng.random::<f64>() * k[u];
            let nb = g.neighbors(u);
            let mut pick = nb[nb.len() - 1].0;
            for &(v, c) in nb {
                if x < c {
                    pick = v;
                    break;
                }
                x -= c;
            }
            next[u] = pick;
            u = pick;
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            links.push(g.link_index(u, next[u]).expect("walk follows links"));
            u = next[u];
        }
    }
    links.sort_unstable();
    SpanningTree { links }
}

/// Tree number `index` of the stream keyed by `seed`.
pub fn sample_tree(g: &WeightedGraph, seed: u64, index: u64) -> SpanningTree {
    sample_tree_with(g, &mut rng_for(seed, stream::TREES, index))
}

#[derive(Debug, Clone, Default)]
struct Tally {
    link_hits: Vec<u64>,
    degree_sum: Vec<u64>,
    degree_sq: Vec<u64>,
    trees: HashMap<Vec<usize>, u64>,
}

impl Tally {
    fn new(n: usize, m: usize) -> Self {
        Self { link_hits: vec![0; m], degree_sum: vec![0; n], degree_sq: vec![0; n], trees: HashMap::new() }
    }

    fn merge(&mut self, other: Tally) {
        for (a, b) in self.link_hits.iter_mut().zip(other.link_hits) {
            *a += b;
        }
        for (a, b) in self.degree_sum.iter_mut().zip(other.degree_sum) {
            *a += b;
        }
        for (a, b) in self.degree_sq.iter_mut().zip(other.degree_sq) {
            *a += b;
        }
        for (t, c) in other.trees {
            *self.trees.entry(t).or_insert(0) += c;
        }
    }
}

const CHUNK: u64 = 2048;

fn tally(g: &WeightedGraph, samples: u64, seed: u64, keep_trees: bool) -> Tally {
    let chunks = samples.div_ceil(CHUNK);
    let beta = g.components().beta;
    let parts: Vec<Tally> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut t = Tally::new(g.n(), g.m());
            for s in (c * CHUNK)..((c + 1) * CHUNK).min(samples) {
                let tree = sample_tree(g, seed, s);
                debug_assert!(tree.spans_with(g, beta));
                for (v, d) in tree.degrees(g).into_iter().enumerate() {
                    t.degree_sum[v] += d as u64;
                    t.degree_sq[v] += (d * d) as u64;
                }
                for &l in &tree.links {
                    t.link_hits[l] += 1;
                }
                if keep_trees {
                    *t.trees.entry(tree.links).or_insert(0) += 1;
                }
            }
            t
        })
        .collect();
    let mut total = Tally::new(g.n(), g.m());
    for p in parts {
        total.merge(p);
    }
    total
}

/// Fraction of sampled trees containing the link.
pub fn link_inclusion_frequency(g: &WeightedGraph, i: usize, j: usize, samples: u64, seed: u64) -> Result<f64> {
    let l = g.link_index(i, j).ok_or(Error::LinkNotFound { i, j })?;
    if samples == 0 {
        return Err(Error::InvalidSize { reason: "at least one sample is required".into() });
    }
    Ok(tally(g, samples, seed, false).link_hits[l] as f64 / samples as f64)
}

/// Sample mean of `1 - d_i^T / 2` and its standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_err: f64,
}

pub fn expected_combinatorial_curvature(g: &WeightedGraph, node: usize, samples: u64, seed: u64) -> Result<MeanEstimate> {
    if node >= g.n() {
        return Err(Error::IndexOutOfRange { node, n: g.n() });
    }
    if samples == 0 {
        return Err(Error::InvalidSize { reason: "at least one sample is required".into() });
    }
    let t = tally(g, samples, seed, false);
    Ok(degree_estimate(&t, node, samples))
}

fn degree_estimate(t: &Tally, v: usize, samples: u64) -> MeanEstimate {
    let n = samples as f64;
    let m1 = t.degree_sum[v] as f64 / n;
    let m2 = t.degree_sq[v] as f64 / n;
    let var_d = if samples > 1 { (m2 - m1 * m1).max(0.0) * n / (n - 1.0) } else { 0.0 };
    MeanEstimate { mean: 1.0 - m1 / 2.0, std_err: (var_d / 4.0 / n).sqrt() }
}

/// Inclusion frequency of one link against its relative resistance.
#[derive(Debug, Clone, Serialize)]
pub struct LinkInclusion {
    pub i: usize,
    pub j: usize,
    pub relative: f64,
    pub empirical: f64,
    pub sigma: f64,
    pub pass: bool,
}

/// Expected tree curvature of one node against `p_i`.
#[derive(Debug, Clone, Serialize)]
pub struct NodeTreeCurvature {
    pub node: usize,
    pub p: f64,
    pub mean: f64,
    pub std_err: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeReport {
    pub samples: u64,
    pub seed: u64,
    pub links: Vec<LinkInclusion>,
    pub nodes: Vec<NodeTreeCurvature>,
}

impl TreeReport {
    pub fn all_pass(&self) -> bool {
        self.links.iter().all(|l| l.pass) && self.nodes.iter().all(|n| n.pass)
    }
}

/// Samples `samples` trees once and compares link frequencies with `c ω`
/// and mean tree curvature with `p`, each within three standard errors.
pub fn tree_report(g: &WeightedGraph, profile: &ResistanceProfile, samples: u64, seed: u64) -> Result<TreeReport> {
    if samples == 0 {
        return Err(Error::InvalidSize { reason: "at least one sample is required".into() });
    }
    let t = tally(g, samples, seed, false);
    let n = samples as f64;
    let links = g
        .links()
        .iter()
        .enumerate()
        .map(|(l, link)| {
            let q = profile.relative[l];
            let empirical = t.link_hits[l] as f64 / n;
            let sigma = (q * (1.0 - q)).max(0.0).sqrt() / n.sqrt();
            let pass = (empirical - q).abs() <= (3.0 * sigma).max(1e-9);
            LinkInclusion { i: link.i, j: link.j, relative: q, empirical, sigma, pass }
        })
        .collect();
    let p = crate::curvature::node_curvature(g, profile);
    let nodes = (0..g.n())
        .map(|v| {
            let est = degree_estimate(&t, v, samples);
            let pass = (est.mean - p[v]).abs() <= (3.0 * est.std_err).max(1e-9);
            NodeTreeCurvature { node: v, p: p[v], mean: est.mean, std_err: est.std_err, pass }
        })
        .collect();
    Ok(TreeReport { samples, seed, links, nodes })
}

/// Every spanning forest of a graph with at most 8 nodes, with its weight.
pub fn enumerate_spanning_trees(g: &WeightedGraph) -> Result<Vec<(SpanningTree, f64)>> {
    if g.n() > 8 {
        return Err(Error::InvalidSize { reason: format!("enumeration is limited to 8 nodes, got {}", g.n()) });
    }
    let need = g.n() - g.components().beta;
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        r
    }
    fn rec(
        g: &WeightedGraph,
        start: usize,
        need: usize,
        parent: Vec<usize>,
        chosen: &mut Vec<usize>,
        out: &mut Vec<(SpanningTree, f64)>,
    ) {
        if chosen.len() == need {
            let t = SpanningTree { links: chosen.clone() };
            let w = t.weight(g);
            out.push((t, w));
            return;
        }
        if g.m() - start < need - chosen.len() {
            return;
        }
        for l in start..g.m() {
            let link = g.links()[l];
            let mut p = parent.clone();
            let (a, b) = (find(&mut p, link.i), find(&mut p, link.j));
            if a == b {
                continue;
            }
            p[a] = b;
            chosen.push(l);
            rec(g, l + 1, need, p, chosen, out);
            chosen.pop();
        }
    }
    rec(g, 0, need, parent, &mut chosen, &mut out);
    Ok(out)
}

/// Pearson chi-square test of sampled trees against the exact law.
#[derive(Debug, Clone, Serialize)]
pub struct ChiSquareTest {
    pub trees: usize,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub min_expected: f64,
}

pub fn tree_chi_square(g: &WeightedGraph, samples: u64, seed: u64) -> Result<ChiSquareTest> {
    let exact = enumerate_spanning_trees(g)?;
    let total: f64 = exact.iter().map(|(_, w)| w).sum();
    let t = tally(g, samples, seed, true);
    let n = samples as f64;
    let mut statistic = 0.0;
    let mut min_expected = f64::INFINITY;
    let mut seen = 0u64;
    for (tree, w) in &exact {
        let e = n * w / total;
        let o = *t.trees.get(&tree.links).unwrap_or(&0) as f64;
        seen += o as u64;
        min_expected = min_expected.min(e);
        statistic += (o - e) * (o - e) / e;
    }
    if seen != samples {
        return Err(Error::InvalidSize { reason: "sampled a tree missing from the enumeration".into() });
    }
    let dof = exact.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).map(|d| d.sf(statistic)).unwrap_or(f64::NAN)
    };
    Ok(ChiSquareTest { trees: exact.len(), statistic, dof, p_value, min_expected })
}

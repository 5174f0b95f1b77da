//! Structural bounds on node and link curvature.

use serde::Serialize;

use crate::graph::WeightedGraph;
use crate::resistance::ResistanceProfile;

#[derive(Debug, Clone, Serialize)]
pub struct NodeBound {
    pub node: usize,
    pub p: f64,
    /// `1 - d_i / 2`.
    pub lower: f64,
    /// `1 - β(G_i \ {i}) / 2`.
    pub upper: f64,
    pub within: bool,
    /// Every incident link is a cut link.
    pub all_cut: bool,
    pub lower_tight: bool,
    /// The lower bound is tight exactly when all incident links are cut links.
    pub equality_consistent: bool,
    pub cut_node: bool,
    /// For cut nodes: `p ≤ 0`, with `p = 0` exactly when `d = 2`.
    pub cut_node_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkBound {
    pub i: usize,
    pub j: usize,
    pub kappa: f64,
    /// `(4 - d_i - d_j) / ω_ij`.
    pub lower: f64,
    /// `(6 - 2β(G_i \ (i,j)) - β(G_i \ {i,j})) / ω_ij`.
    pub upper: f64,
    pub within: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub nodes: Vec<NodeBound>,
    pub links: Vec<LinkBound>,
    pub tolerance: f64,
}

impl BoundsReport {
    pub fn all_ok(&self) -> bool {
        self.nodes.iter().all(|b| b.within && b.equality_consistent && b.cut_node_ok)
            && self.links.iter().all(|b| b.within)
    }
}

/// Checks every node and link bound. Tolerances are `1e-9` for exact
/// profiles and `3ε` (relative to the bound magnitude where larger than 1)
/// for approximate ones.
pub fn bounds_report(g: &WeightedGraph, profile: &ResistanceProfile, p: &[f64], kappa: &[f64]) -> BoundsReport {
    let tol = profile.epsilon.map_or(1e-9, |e| 3.0 * e);
    let slack = |x: f64| tol * x.abs().max(1.0);
    let beta = g.components().beta;
    // Components of G_i after deleting things inside it: the other β - 1
    // components are untouched.
    let local = |total: usize| total - (beta - 1);

    let cut: Vec<bool> = g.links().iter().map(|l| g.is_cut_link(l.i, l.j).unwrap_or(false)).collect();
    let mut nodes = Vec::new();
    for i in 0..g.n() {
        let d = g.degree(i);
        if d == 0 {
            continue;
        }
        let lower = 1.0 - d as f64 / 2.0;
        let without = local(g.removal_components(&[i]));
        let upper = 1.0 - without as f64 / 2.0;
        let within = p[i] >= lower - slack(lower) && p[i] <= upper + slack(upper);
        let all_cut = g.neighbors(i).iter().all(|&(j, _)| cut[g.link_index(i, j).unwrap()]);
        let lower_tight = (p[i] - lower).abs() <= slack(lower);
        let cut_node = without >= 2;
        let cut_node_ok = !cut_node || {
            let nonpositive = p[i] <= tol;
            let zero = p[i].abs() <= tol;
            nonpositive && (zero == (d == 2))
        };
        nodes.push(NodeBound {
            node: i,
            p: p[i],
            lower,
            upper,
            within,
            all_cut,
            lower_tight,
            equality_consistent: lower_tight == all_cut,
            cut_node,
            cut_node_ok,
        });
    }

    let mut links = Vec::new();
    for ((l, &w), &k) in g.links().iter().zip(&profile.link_omega).zip(kappa) {
        let lower = (4.0 - g.degree(l.i) as f64 - g.degree(l.j) as f64) / w;
        let split = local(g.link_removal_components(l.i, l.j)) as f64;
        let rest = local(g.removal_components(&[l.i, l.j])) as f64;
        let upper = (6.0 - 2.0 * split - rest) / w;
        let within = k >= lower - slack(lower) && k <= upper + slack(upper);
        links.push(LinkBound { i: l.i, j: l.j, kappa: k, lower, upper, within });
    }
    BoundsReport { nodes, links, tolerance: tol }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::CurvatureReport;
    use crate::generators::{cycle, path, regular_tree};
    use crate::resistance::effective_resistance;

    fn check(g: &WeightedGraph) -> BoundsReport {
        let prof = effective_resistance(g).unwrap();
        let r = CurvatureReport::new(g, &prof);
        bounds_report(g, &prof, &r.p, &r.kappa)
    }

    #[test]
    fn path_middle_is_tight_cut_node() {
        let b = check(&path(3, 1.0).unwrap());
        assert!(b.all_ok());
        let mid = &b.nodes[1];
        assert!(mid.cut_node && mid.lower_tight && mid.p.abs() < 1e-12);
    }

    #[test]
    fn tree_lower_bound_tight() {
        let b = check(&regular_tree(3, 2, 1.0).unwrap());
        assert!(b.all_ok());
        assert!(b.nodes.iter().all(|x| x.lower_tight && x.all_cut));
        assert!(b.links.iter().all(|l| (l.kappa - l.lower).abs() < 1e-9 && (l.kappa - l.upper).abs() < 1e-9));
    }

    #[test]
    fn triangle_strict() {
        let b = check(&cycle(3, 1.0).unwrap());
        assert!(b.all_ok());
        for x in &b.nodes {
            assert!(x.p > x.lower + 1e-3 && x.p < x.upper - 1e-3);
        }
    }
}

//! Effective and relative resistances.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::Result;
use crate::graph::{Link, WeightedGraph};
use crate::linalg;

/// Effective resistances of a graph.
///
/// Exact profiles carry the full resistance matrix and the pseudoinverse;
/// approximate profiles only know the per-link values and carry their
/// accuracy tag `epsilon`. Pairs in different components have infinite
/// resistance, which [`ResistanceProfile::is_infinite`] reports; the stored
/// matrix holds `f64::INFINITY` there.
#[derive(Debug, Clone)]
pub struct ResistanceProfile {
    pub n: usize,
    pub beta: usize,
    pub labels: Vec<usize>,
    pub links: Vec<Link>,
    /// `ω_ij` per link, in graph link order.
    pub link_omega: Vec<f64>,
    /// `c_ij ω_ij` per link.
    pub relative: Vec<f64>,
    pub omega: Option<DMatrix<f64>>,
    pub pinv: Option<DMatrix<f64>>,
    /// Diagonal of the pseudoinverse.
    pub zeta: Option<DVector<f64>>,
    pub epsilon: Option<f64>,
}

impl ResistanceProfile {
    pub fn is_exact(&self) -> bool {
        self.omega.is_some()
    }

    pub fn is_infinite(&self, i: usize, j: usize) -> bool {
        self.labels[i] != self.labels[j]
    }

    /// Full resistance matrix; panics on approximate profiles.
    pub fn omega_matrix(&self) -> &DMatrix<f64> {
        self.omega.as_ref().expect("exact resistance profile required")
    }

    pub fn omega(&self, i: usize, j: usize) -> f64 {
        self.omega_matrix()[(i, j)]
    }

    /// Node lists of each component.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.beta];
        for (v, &c) in self.labels.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Sum of relative resistances over all links.
    pub fn relative_sum(&self) -> f64 {
        self.relative.iter().sum()
    }

    pub fn rows(&self) -> Vec<ResistanceRow> {
        self.links
            .iter()
            .zip(self.link_omega.iter().zip(&self.relative))
            .map(|(l, (&omega, &relative))| ResistanceRow { i: l.i, j: l.j, omega, relative })
            .collect()
    }
}

/// One exported row `i,j,omega,relative`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResistanceRow {
    pub i: usize,
    pub j: usize,
    pub omega: f64,
    pub relative: f64,
}

/// Exact resistances through a dense per-component factorization.
pub fn effective_resistance(g: &WeightedGraph) -> Result<ResistanceProfile> {
    let comps = g.components();
    let n = g.n();
    let q = g.laplacian();
    let mut pinv = DMatrix::zeros(n, n);
    let mut omega = DMatrix::from_element(n, n, f64::INFINITY);
    for members in comps.members() {
        let block = linalg::component_pseudoinverse(q.matrix(), &members)?;
        linalg::scatter(&mut pinv, &members, &block);
        linalg::scatter(&mut omega, &members, &linalg::omega_from_pinv(&block));
    }
    let link_omega: Vec<f64> = g.links().iter().map(|l| omega[(l.i, l.j)]).collect();
    let relative = g.links().iter().zip(&link_omega).map(|(l, w)| l.weight * w).collect();
    let zeta = pinv.diagonal();
    Ok(ResistanceProfile {
        n,
        beta: comps.beta,
        labels: comps.labels,
        links: g.links().to_vec(),
        link_omega,
        relative,
        omega: Some(omega),
        pinv: Some(pinv),
        zeta: Some(zeta),
        epsilon: None,
    })
}

/// `|Σ c ω - (n - β)|`.
pub fn foster_check(profile: &ResistanceProfile) -> f64 {
    (profile.relative_sum() - (profile.n - profile.beta) as f64).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_path() {
        let g = WeightedGraph::new(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let r = effective_resistance(&g).unwrap();
        assert!((r.omega(0, 1) - 1.0).abs() < 1e-12);
        assert!((r.omega(0, 2) - 2.0).abs() < 1e-12);
        assert!(foster_check(&r) < 1e-12);
    }

    #[test]
    fn triangle() {
        let g = WeightedGraph::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let r = effective_resistance(&g).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 0.0 } else { 2.0 / 3.0 };
                assert!((r.omega(i, j) - want).abs() < 1e-12);
            }
        }
        assert!(foster_check(&r) < 1e-12);
    }

    #[test]
    fn tree_links_are_unit() {
        let g = WeightedGraph::new(5, &[(0, 1, 0.3), (0, 2, 2.0), (2, 3, 7.0), (2, 4, 1.5)]).unwrap();
        let r = effective_resistance(&g).unwrap();
        for &x in &r.relative {
            assert!((x - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn disjoint_edges() {
        let g = WeightedGraph::new(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let r = effective_resistance(&g).unwrap();
        assert_eq!(r.beta, 2);
        assert!(foster_check(&r) < 1e-12);
        assert!(r.is_infinite(0, 2));
        assert!(r.omega(0, 3).is_infinite());
        assert!(!r.is_infinite(2, 3));
    }
}

//! Combinatorial, Forman-Ricci and Ollivier-Ricci curvature, used as
//! reference points for the resistance curvature.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::characterizations::{extrapolate, LimitEstimate};
use crate::curvature::{link_curvature, node_curvature, normalized_link_curvature};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::resistance::ResistanceProfile;
use crate::transport::wasserstein1;

/// Degree of a face around a node in a planar embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FaceDegree {
    Bounded(u32),
    /// The outer face of a tree or any face of infinite degree.
    Unbounded,
}

/// `1 - d/2 + Σ_f 1/d_f`.
pub fn combinatorial_curvature(d: usize, faces: &[FaceDegree]) -> Result<f64> {
    let mut s = 1.0 - d as f64 / 2.0;
    for f in faces {
        if let FaceDegree::Bounded(k) = *f {
            if k < 3 {
                return Err(Error::InvalidFaceDegree { degree: k });
            }
            s += 1.0 / k as f64;
        }
    }
    Ok(s)
}

/// Forman-Ricci curvature with unit node and link weights: `4 - d_i - d_j`.
pub fn forman_curvature(g: &WeightedGraph, i: usize, j: usize) -> Result<f64> {
    if !g.has_link(i, j) {
        return Err(Error::LinkNotFound { i, j });
    }
    Ok(4.0 - g.degree(i) as f64 - g.degree(j) as f64)
}

/// Forman-Ricci curvature for arbitrary positive node weights and link
/// weights (given per link in graph order).
pub fn forman_weighted(g: &WeightedGraph, node_w: &[f64], link_w: &[f64], i: usize, j: usize) -> Result<f64> {
    let l = g.link_index(i, j).ok_or(Error::LinkNotFound { i, j })?;
    let wij = link_w[l];
    let side = |a: usize| {
        let s: f64 = g
            .neighbors(a)
            .iter()
            .map(|&(k, _)| (wij / link_w[g.link_index(a, k).unwrap()]).sqrt())
            .sum();
        2.0 * node_w[a] * (1.0 - 0.5 * s)
    };
    Ok(side(i) + side(j))
}

/// Which random-walk ball to transport.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ball {
    /// `(I - Q t) e_i`, valid for `t ≤ 1/k_max`.
    Lazy,
    /// `(I - Q diag(k)^-1 t) e_i`, valid for `t ≤ 1`.
    Normalized,
}

/// Support and masses of the ball around `i`.
pub fn walk_ball(g: &WeightedGraph, i: usize, t: f64, ball: Ball) -> (Vec<usize>, Vec<f64>) {
    let k = g.weighted_degree(i);
    let mut nodes = vec![i];
    let mut mass = vec![match ball {
        Ball::Lazy => 1.0 - k * t,
        Ball::Normalized => 1.0 - t,
    }];
    for &(j, c) in g.neighbors(i) {
        nodes.push(j);
        mass.push(match ball {
            Ball::Lazy => c * t,
            Ball::Normalized => c * t / k,
        });
    }
    (nodes, mass)
}

/// Settings for the Ollivier-Ricci limit.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OllivierSchedule {
    pub t0: Option<f64>,
    pub tolerance: f64,
    pub max_halvings: usize,
}

impl Default for OllivierSchedule {
    fn default() -> Self {
        Self { t0: None, tolerance: 1e-9, max_halvings: 30 }
    }
}

fn ollivier(
    g: &WeightedGraph,
    profile: &ResistanceProfile,
    i: usize,
    j: usize,
    ball: Ball,
    schedule: &OllivierSchedule,
) -> Result<LimitEstimate> {
    let l = g.link_index(i, j).ok_or(Error::LinkNotFound { i, j })?;
    let omega = profile.omega_matrix();
    let w = profile.link_omega[l];
    let f = |t: f64| -> Result<f64> {
        let (si, mi) = walk_ball(g, i, t, ball);
        let (sj, mj) = walk_ball(g, j, t, ball);
        let cost = DMatrix::from_fn(si.len(), sj.len(), |a, b| omega[(si[a], sj[b])]);
        let plan = wasserstein1(&mi, &mj, &cost)?;
        Ok((1.0 - plan.cost / w) / t)
    };
    let t0 = schedule.t0.unwrap_or(match ball {
        Ball::Lazy => {
            let k_max = (0..g.n()).map(|v| g.weighted_degree(v)).fold(0.0f64, f64::max);
            1.0 / (8.0 * k_max)
        }
        Ball::Normalized => 0.125,
    });
    extrapolate(f, t0, schedule.tolerance, schedule.max_halvings)
}

/// Ollivier-Ricci curvature of a link under the resistance metric with the
/// lazy walk ball, as the `t → 0` limit of `(1 - W₁/ω_ij) / t`.
pub fn ollivier_curvature_resistance(
    g: &WeightedGraph,
    profile: &ResistanceProfile,
    i: usize,
    j: usize,
    schedule: &OllivierSchedule,
) -> Result<f64> {
    ollivier(g, profile, i, j, Ball::Lazy, schedule).map(|e| e.value)
}

/// The same limit with degree-normalized walk balls.
pub fn lly_normalized_curvature(
    g: &WeightedGraph,
    profile: &ResistanceProfile,
    i: usize,
    j: usize,
    schedule: &OllivierSchedule,
) -> Result<f64> {
    ollivier(g, profile, i, j, Ball::Normalized, schedule).map(|e| e.value)
}

/// One row of the curvature comparison table.
#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub i: usize,
    pub j: usize,
    pub kappa: f64,
    pub kappa_or: f64,
    pub kappa_lly: f64,
    pub kappa_norm: f64,
    pub kappa_fr_over_omega: f64,
    pub sandwich_ok: bool,
}

/// Forman / resistance / Ollivier values for every link, with the ordering
/// checked at slack `tol`.
pub fn compare_links(
    g: &WeightedGraph,
    profile: &ResistanceProfile,
    schedule: &OllivierSchedule,
    tol: f64,
) -> Result<Vec<CompareRow>> {
    let p = node_curvature(g, profile);
    let kappa = link_curvature(g, profile, &p);
    let kappa_norm = normalized_link_curvature(g, profile, &p);
    g.links()
        .iter()
        .enumerate()
        .map(|(l, link)| {
            let fr = forman_curvature(g, link.i, link.j)? / profile.link_omega[l];
            let or = ollivier_curvature_resistance(g, profile, link.i, link.j, schedule)?;
            let lly = lly_normalized_curvature(g, profile, link.i, link.j, schedule)?;
            let k = kappa[l];
            Ok(CompareRow {
                i: link.i,
                j: link.j,
                kappa: k,
                kappa_or: or,
                kappa_lly: lly,
                kappa_norm: kappa_norm[l],
                kappa_fr_over_omega: fr,
                sandwich_ok: k - fr >= -tol && or - k >= -tol && lly - kappa_norm[l] >= -tol,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, path, star};
    use crate::resistance::effective_resistance;

    #[test]
    fn combinatorial_examples() {
        use FaceDegree::*;
        assert_eq!(combinatorial_curvature(3, &[Unbounded]).unwrap(), -0.5);
        assert!((combinatorial_curvature(3, &[Bounded(4); 3]).unwrap() - 0.25).abs() < 1e-15);
        assert!(combinatorial_curvature(3, &[Bounded(6); 3]).unwrap().abs() < 1e-15);
        assert!(combinatorial_curvature(2, &[Bounded(2)]).is_err());
    }

    #[test]
    fn forman_examples() {
        assert_eq!(forman_curvature(&path(2, 1.0).unwrap(), 0, 1).unwrap(), 2.0);
        assert_eq!(forman_curvature(&cycle(3, 1.0).unwrap(), 0, 1).unwrap(), 0.0);
        assert_eq!(forman_curvature(&path(3, 1.0).unwrap(), 0, 1).unwrap(), 1.0);
        let g = cycle(5, 1.0).unwrap();
        let unit = forman_weighted(&g, &[1.0; 5], &[1.0; 5], 1, 2).unwrap();
        assert_eq!(unit, forman_curvature(&g, 1, 2).unwrap());
    }

    #[test]
    fn ollivier_on_edge_and_triangle() {
        let sched = OllivierSchedule::default();
        let g = path(2, 1.0).unwrap();
        let prof = effective_resistance(&g).unwrap();
        assert!((ollivier_curvature_resistance(&g, &prof, 0, 1, &sched).unwrap() - 2.0).abs() < 1e-6);
        assert!(lly_normalized_curvature(&g, &prof, 0, 1, &sched).unwrap() >= 2.0 - 1e-6);
        let g = cycle(3, 1.0).unwrap();
        let prof = effective_resistance(&g).unwrap();
        assert!(ollivier_curvature_resistance(&g, &prof, 0, 1, &sched).unwrap() >= 2.0 - 1e-6);
        assert!(lly_normalized_curvature(&g, &prof, 0, 1, &sched).unwrap() >= 1.0 - 1e-6);
    }

    #[test]
    fn star_link_bounds() {
        let g = star(3, 1.0).unwrap();
        let prof = effective_resistance(&g).unwrap();
        let rows = compare_links(&g, &prof, &OllivierSchedule::default(), 1e-6).unwrap();
        for r in rows {
            assert!(r.sandwich_ok);
            assert!((r.kappa_or - r.kappa).abs() < 1e-6 && (r.kappa_fr_over_omega - r.kappa).abs() < 1e-9);
            assert!(r.kappa_lly >= 2.0 / 3.0 - 1e-6);
        }
    }
}

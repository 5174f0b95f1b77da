//! Equivalent routes to node curvature: diffusion limits, the resistance
//! simplex and distance identities.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::curvature::sigma_squared;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::resistance::ResistanceProfile;

/// `exp(-Q t)`, computed as `e^{-kt} exp((kI - Q) t)` with `k = max_i Q_ii`
/// so that every intermediate matrix is entrywise nonnegative.
pub fn heat_kernel(q: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
    let n = q.nrows();
    let k = (0..n).map(|i| q[(i, i)]).fold(0.0f64, f64::max);
    if t == 0.0 || k == 0.0 {
        return DMatrix::identity(n, n);
    }
    let mut squarings = 0u32;
    let mut h = t;
    while k * h > 0.5 {
        h *= 0.5;
        squarings += 1;
    }
    let a = (DMatrix::identity(n, n) * k - q) * h;
    let mut term = DMatrix::identity(n, n);
    let mut sum = term.clone();
    for m in 1..40 {
        term = &term * &a / m as f64;
        sum += &term;
        if term.max() < 1e-20 {
            break;
        }
    }
    let mut e = sum * (-k * h).exp();
    for _ in 0..squarings {
        e = &e * &e;
    }
    e
}

/// `ρ_{t,i} = exp(-Q t) e_i`.
#[derive(Debug, Clone, Serialize)]
pub struct HeatDistribution {
    pub t: f64,
    pub source: usize,
    pub values: Vec<f64>,
}

pub fn heat_distribution(q: &DMatrix<f64>, i: usize, t: f64) -> HeatDistribution {
    let e = heat_kernel(q, t);
    HeatDistribution { t, source: i, values: e.column(i).iter().copied().collect() }
}

/// Which ball around a node is used in the small-time limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kernel {
    /// `exp(-Q t) e_i`.
    Heat,
    /// `(I - Q t) e_i`, for which the tail is exactly affine.
    Lazy,
}

/// Three-point schedule `{t0, t0/2, t0/4}` for extrapolating to `t = 0`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LimitSchedule {
    pub kernel: Kernel,
    /// Largest time; `None` picks a default from the maximum weighted degree.
    pub t0: Option<f64>,
    /// Allowed deviation of the `t0` value from the line through the other two.
    pub tolerance: f64,
    pub max_halvings: usize,
}

impl LimitSchedule {
    pub fn heat() -> Self {
        Self { kernel: Kernel::Heat, t0: None, tolerance: 1e-7, max_halvings: 12 }
    }

    pub fn lazy() -> Self {
        Self { kernel: Kernel::Lazy, t0: None, tolerance: 1e-9, max_halvings: 12 }
    }

    /// Default `t0`: `1/(8 k_max)` for the lazy ball, `1e-4/k_max` for the heat
    /// kernel whose tail carries a quadratic term.
    pub fn start(&self, k_max: f64) -> f64 {
        self.t0.unwrap_or(match self.kernel {
            Kernel::Lazy => 1.0 / (8.0 * k_max),
            Kernel::Heat => 1e-4 / k_max,
        })
    }
}

/// Result of a small-time extrapolation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LimitEstimate {
    pub value: f64,
    pub slope: f64,
    /// Deviation of the third point from the fitted line.
    pub residual: f64,
    pub t0: f64,
}

/// Fits a line through `f(t0/4)` and `f(t0/2)`, checks `f(t0)` against it and
/// halves `t0` while the check fails.
pub fn extrapolate<F>(mut f: F, t0: f64, tolerance: f64, max_halvings: usize) -> Result<LimitEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut t0 = t0;
    let mut residual = f64::INFINITY;
    for _ in 0..=max_halvings {
        let (t1, t2) = (t0 / 4.0, t0 / 2.0);
        let (f1, f2, f0) = (f(t1)?, f(t2)?, f(t0)?);
        let slope = (f2 - f1) / (t2 - t1);
        let value = f1 - slope * t1;
        residual = (f0 - (value + slope * t0)).abs();
        if residual <= tolerance {
            return Ok(LimitEstimate { value, slope, residual, t0 });
        }
        t0 *= 0.5;
    }
    Err(Error::NonLinearTail { residual, halvings: max_halvings })
}

fn ball(q: &DMatrix<f64>, kernel: Kernel, t: f64) -> DMatrix<f64> {
    match kernel {
        Kernel::Heat => heat_kernel(q, t),
        Kernel::Lazy => DMatrix::identity(q.nrows(), q.nrows()) - q * t,
    }
}

fn k_max(g: &WeightedGraph) -> f64 {
    (0..g.n()).map(|i| g.weighted_degree(i)).fold(0.0f64, f64::max)
}

/// Restriction of the graph to the component holding `nodes`.
fn component_view(g: &WeightedGraph, profile: &ResistanceProfile, node: usize) -> (Vec<usize>, DMatrix<f64>, DMatrix<f64>) {
    let members: Vec<usize> = (0..g.n()).filter(|&v| profile.labels[v] == profile.labels[node]).collect();
    let sub = g.induced(&members);
    let q = sub.laplacian().0;
    let omega = crate::linalg::gather(profile.omega_matrix(), &members);
    (members, q, omega)
}

/// Small-time limit of `1 - ρᵀΩρ / (4t)` with `ρ` the chosen ball around `i`.
pub fn limit_node_curvature(
    g: &WeightedGraph,
    profile: &ResistanceProfile,
    i: usize,
    schedule: &LimitSchedule,
) -> Result<LimitEstimate> {
    if g.degree(i) == 0 {
        return Ok(LimitEstimate { value: 1.0, slope: 0.0, residual: 0.0, t0: 0.0 });
    }
    let (members, q, omega) = component_view(g, profile, i);
    let a = members.binary_search(&i).expect("node in its own component");
    let f = |t: f64| {
        let rho: DVector<f64> = ball(&q, schedule.kernel, t).column(a).into_owned();
        Ok(1.0 - rho.dot(&(&omega * &rho)) / (4.0 * t))
    };
    extrapolate(f, schedule.start(k_max(g)), schedule.tolerance, schedule.max_halvings)
}

/// Small-time limit of `(1 - ρ_iᵀΩρ_j / ω_ij) / t` on a link.
pub fn limit_link_curvature(
    g: &WeightedGraph,
    profile: &ResistanceProfile,
    i: usize,
    j: usize,
    schedule: &LimitSchedule,
) -> Result<LimitEstimate> {
    if !g.has_link(i, j) {
        return Err(Error::LinkNotFound { i, j });
    }
    let (members, q, omega) = component_view(g, profile, i);
    let a = members.binary_search(&i).expect("node in its own component");
    let b = members.binary_search(&j).expect("linked nodes share a component");
    let w = omega[(a, b)];
    let f = |t: f64| {
        let e = ball(&q, schedule.kernel, t);
        let (ri, rj) = (e.column(a), e.column(b));
        Ok((1.0 - ri.dot(&(&omega * rj)) / w) / t)
    };
    extrapolate(f, schedule.start(k_max(g)), schedule.tolerance, schedule.max_halvings)
}

/// Points `φ(i)` with `‖φ(i) - φ(j)‖² = ω_ij`.
#[derive(Debug, Clone)]
pub struct SimplexEmbedding {
    /// Row `i` holds `φ(i)`; there are `n - 1` columns.
    pub coords: DMatrix<f64>,
}

impl SimplexEmbedding {
    pub fn point(&self, weights: &[f64]) -> DVector<f64> {
        let w = DVector::from_column_slice(weights);
        self.coords.transpose() * w
    }

    pub fn squared_distance(&self, a: &DVector<f64>, i: usize) -> f64 {
        (a - self.coords.row(i).transpose()).norm_squared()
    }
}

/// Embedding through the symmetric square root of `Q†`.
pub fn simplex_embedding(profile: &ResistanceProfile) -> Result<SimplexEmbedding> {
    if profile.beta != 1 {
        return Err(Error::Disconnected { beta: profile.beta });
    }
    let pinv = profile.pinv.as_ref().expect("exact resistance profile required");
    let n = pinv.nrows();
    let eig = SymmetricEigen::new(pinv.clone());
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, &x| a.max(x.abs())).max(1e-300);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    if let Some(&low) = order.last() {
        let v = eig.eigenvalues[low];
        if v < -1e-10 * scale {
            return Err(Error::NegativeEigenvalue { value: v });
        }
    }
    let dims = n.saturating_sub(1);
    let coords = DMatrix::from_fn(n, dims, |i, c| {
        let k = order[c];
        eig.eigenvalues[k].max(0.0).sqrt() * eig.eigenvectors[(i, k)]
    });
    Ok(SimplexEmbedding { coords })
}

/// Node curvature recovered from distances to a probe node `x`.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceCharacterization {
    pub probe: usize,
    /// `None` at the probe itself.
    pub p: Vec<Option<f64>>,
    /// `¼ Σ_links c_ab (ω_ax - ω_bx)²`.
    pub sigma2: f64,
}

/// `p_i = (k_i / 2)(ω_ix - Σ_{j~i} (c_ij / k_i) ω_jx)` for every `i ≠ x`,
/// and `σ²` from the same distances.
pub fn distance_characterizations(
    g: &WeightedGraph,
    profile: &ResistanceProfile,
    x: usize,
) -> Result<DistanceCharacterization> {
    if profile.beta != 1 {
        return Err(Error::Disconnected { beta: profile.beta });
    }
    let omega = profile.omega_matrix();
    let p = (0..g.n())
        .map(|i| {
            (i != x).then(|| {
                let ki = g.weighted_degree(i);
                let avg: f64 = g.neighbors(i).iter().map(|&(j, c)| c * omega[(j, x)]).sum::<f64>() / ki;
                0.5 * ki * (omega[(i, x)] - avg)
            })
        })
        .collect();
    let sigma2 = 0.25
        * g.links()
            .iter()
            .map(|l| {
                let d = omega[(l.i, x)] - omega[(l.j, x)];
                l.weight * d * d
            })
            .sum::<f64>();
    Ok(DistanceCharacterization { probe: x, p, sigma2 })
}

/// `p_i = ½ - ¼ Σ_{j,k ~ i} (c_ij c_ik / k_i) ω_jk`, from distances among
/// the neighbours only.
pub fn neighbor_pair_curvature(g: &WeightedGraph, profile: &ResistanceProfile) -> Vec<f64> {
    let omega = profile.omega_matrix();
    (0..g.n())
        .map(|i| {
            let nb = g.neighbors(i);
            if nb.is_empty() {
                return 1.0;
            }
            let ki = g.weighted_degree(i);
            let mut s = 0.0;
            for &(j, cj) in nb {
                for &(k, ck) in nb {
                    if j != k {
                        s += cj * ck * omega[(j, k)];
                    }
                }
            }
            0.5 - 0.25 * s / ki
        })
        .collect()
}

/// Largest `|‖φ(p) - φ(i)‖² - σ²|` over nodes.
pub fn circumcenter_residual(profile: &ResistanceProfile, p: &[f64]) -> Result<f64> {
    let emb = simplex_embedding(profile)?;
    let s2 = sigma_squared(profile, p)[0];
    let c = emb.point(p);
    Ok((0..profile.n).map(|i| (emb.squared_distance(&c, i) - s2).abs()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, path};
    use crate::resistance::effective_resistance;

    #[test]
    fn heat_identity_and_single_edge() {
        let g = path(2, 1.0).unwrap();
        let q = g.laplacian().0;
        let h0 = heat_distribution(&q, 0, 0.0);
        assert_eq!(h0.values, vec![1.0, 0.0]);
        let h = heat_distribution(&q, 0, 0.1);
        let e = (-0.2f64).exp();
        assert!((h.values[0] - (1.0 + e) / 2.0).abs() < 1e-14);
        assert!((h.values[1] - (1.0 - e) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn heat_mixes_to_uniform() {
        let g = cycle(6, 1.0).unwrap();
        let q = g.laplacian().0;
        let lambda2 = 2.0 - 2.0 * (std::f64::consts::TAU / 6.0).cos();
        let h = heat_distribution(&q, 2, 100.0 / lambda2);
        for v in h.values {
            assert!((v - 1.0 / 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn extrapolation_of_affine_function() {
        let est = extrapolate(|t| Ok(3.0 - 2.0 * t), 0.1, 1e-12, 0).unwrap();
        assert!((est.value - 3.0).abs() < 1e-13 && (est.slope + 2.0).abs() < 1e-10);
        assert!(matches!(
            extrapolate(|t| Ok(t.sqrt()), 0.1, 1e-12, 3),
            Err(Error::NonLinearTail { .. })
        ));
    }

    #[test]
    fn limits_on_small_graphs() {
        for (g, node, want) in [(cycle(3, 1.0).unwrap(), 0, 1.0 / 3.0), (path(3, 1.0).unwrap(), 0, 0.5)] {
            let prof = effective_resistance(&g).unwrap();
            for s in [LimitSchedule::heat(), LimitSchedule::lazy()] {
                let est = limit_node_curvature(&g, &prof, node, &s).unwrap();
                assert!((est.value - want).abs() < 1e-6, "{s:?} {}", est.value);
            }
        }
        let g = path(2, 1.0).unwrap();
        let prof = effective_resistance(&g).unwrap();
        let est = limit_link_curvature(&g, &prof, 0, 1, &LimitSchedule::heat()).unwrap();
        assert!((est.value - 2.0).abs() < 1e-6);
    }

    #[test]
    fn embedding_of_edge_and_triangle() {
        let prof = effective_resistance(&path(2, 1.0).unwrap()).unwrap();
        let emb = simplex_embedding(&prof).unwrap();
        assert_eq!(emb.coords.ncols(), 1);
        let mid = emb.point(&[0.5, 0.5]);
        assert!((emb.squared_distance(&emb.coords.row(0).transpose(), 1) - 1.0).abs() < 1e-12);
        assert!((emb.squared_distance(&mid, 0) - 0.25).abs() < 1e-12);
        let prof = effective_resistance(&cycle(3, 1.0).unwrap()).unwrap();
        let emb = simplex_embedding(&prof).unwrap();
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            let d = (emb.coords.row(i) - emb.coords.row(j)).norm_squared();
            assert!((d - 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn distance_route_on_path() {
        let g = path(3, 1.0).unwrap();
        let prof = effective_resistance(&g).unwrap();
        let d = distance_characterizations(&g, &prof, 0).unwrap();
        assert_eq!(d.p[0], None);
        assert!(d.p[1].unwrap().abs() < 1e-12);
        assert!((d.p[2].unwrap() - 0.5).abs() < 1e-12);
    }
}

//! Boundary-curvature model for Euclidean random graphs on a disc and the
//! Monte Carlo profile it is compared against.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::node_curvature;
use crate::error::{Error, Result};
use crate::generators::{euclidean_random_graph, ErgConfig};
use crate::graph::WeightedGraph;
use crate::resistance::effective_resistance;
use crate::rng::{derive_seed, stream};

/// Area of the segment of a radius-`r` disc lying beyond height `t`.
pub fn segment_area(t: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) || !(t >= -r && t <= r) {
        return Err(Error::OutOfRange { value: t, lo: -r, hi: r });
    }
    let u = (t / r).clamp(-1.0, 1.0);
    Ok(r * r * u.acos() - t * (r * r - t * t).max(0.0).sqrt())
}

/// `1/(λ S_i) + 1/(λ S_j)`.
pub fn heuristic_resistance(s_i: f64, s_j: f64, lambda: f64) -> Result<f64> {
    for s in [s_i, s_j] {
        if !(s > 0.0) {
            return Err(Error::ZeroArea { area: s });
        }
    }
    Ok(1.0 / (lambda * s_i) + 1.0 / (lambda * s_j))
}

/// Straight-boundary model with connection radius `r` and intensity `λ`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundaryModel {
    pub r: f64,
    pub lambda: f64,
    /// Initial Simpson panel count per sub-interval.
    pub panels: usize,
}

const MAX_REFINEMENTS: usize = 12;

impl BoundaryModel {
    pub fn new(r: f64, lambda: f64, panels: usize) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::OutOfRange { value: r, lo: 0.0, hi: f64::INFINITY });
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::OutOfRange { value: lambda, lo: 0.0, hi: f64::INFINITY });
        }
        if panels < 100 {
            return Err(Error::InvalidSize { reason: format!("need at least 100 panels, got {panels}") });
        }
        Ok(Self { r, lambda, panels })
    }

    pub fn for_config(cfg: &ErgConfig) -> Result<Self> {
        Self::new(cfg.connection_radius, cfg.intensity(), 1000)
    }

    /// Intersection area of the domain with the radius-`r` disc around a
    /// point at boundary distance `d`.
    pub fn reach_area(&self, d: f64) -> f64 {
        let r = self.r;
        if d >= r {
            PI * r * r
        } else {
            segment_area(-d.max(0.0), r).expect("height within the disc")
        }
    }

    /// Expected node curvature at boundary distance `d`:
    /// `½ (1 - ∫_{-r}^{min(r,d)} |dA(t)| / S(d - t))`, with `|dA| = 2√(r²-t²) dt`.
    /// The bulk branch `d ≥ 2r` returns exactly 0.
    pub fn expected_boundary_curvature(&self, d: f64) -> Result<f64> {
        if !(d >= 0.0) {
            return Err(Error::OutOfRange { value: d, lo: 0.0, hi: f64::INFINITY });
        }
        let r = self.r;
        if d >= 2.0 * r {
            return Ok(0.0);
        }
        // t = r sin θ removes the square-root endpoints; split where the
        // neighbour's reach area stops being the full disc.
        let top = (d.min(r) / r).asin();
        let kink = ((d - r) / r).clamp(-1.0, 1.0).asin();
        let f = |th: f64| {
            let c = th.cos();
            2.0 * r * r * c * c / self.reach_area(d - r * th.sin())
        };
        let mut total = 0.0;
        let mut lo = -PI / 2.0;
        for hi in [kink, top] {
            if hi > lo {
                total += self.integrate(&f, lo, hi, d)?;
                lo = hi;
            }
        }
        Ok(0.5 * (1.0 - total))
    }

    fn integrate(&self, f: &impl Fn(f64) -> f64, a: f64, b: f64, d: f64) -> Result<f64> {
        let mut panels = self.panels;
        let mut prev = simpson(f, a, b, panels);
        for _ in 0..MAX_REFINEMENTS {
            panels *= 2;
            let next = simpson(f, a, b, panels);
            let change = (next - prev).abs();
            if change <= 1e-12 {
                return Ok(next + (next - prev) / 15.0);
            }
            prev = next;
        }
        let change = (simpson(f, a, b, panels * 2) - prev).abs();
        Err(Error::QuadratureFailure { d, change })
    }
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

/// Single-sample heuristic `p̂_i = 1 - d_i/(2λS(D_i)) - ½ Σ_{j~i} 1/(λS(D_j))`.
pub fn heuristic_node_curvature(
    g: &WeightedGraph,
    boundary_distances: Option<&[f64]>,
    model: &BoundaryModel,
) -> Result<Vec<f64>> {
    let dist = boundary_distances.ok_or(Error::MissingGeometry)?;
    if dist.len() != g.n() {
        return Err(Error::MissingGeometry);
    }
    let inv = |v: usize| 1.0 / (model.lambda * model.reach_area(dist[v]));
    Ok((0..g.n())
        .map(|i| {
            let d = g.degree(i) as f64;
            let others: f64 = g.neighbors(i).iter().map(|&(j, _)| inv(j)).sum();
            1.0 - 0.5 * d * inv(i) - 0.5 * others
        })
        .collect())
}

/// Monte Carlo boundary profile binned by `D/r`.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileBins {
    /// Bin edges on `D/r`, `bins + 1` values from 0 to `R/r`.
    pub edges: Vec<f64>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub count: Vec<usize>,
    /// Model value at each bin center.
    pub model: Vec<f64>,
    pub samples: usize,
    pub skipped: Vec<usize>,
    pub total_nodes: usize,
    /// Pooled statistics over nodes with `D ≥ 2r`.
    pub bulk_mean: f64,
    pub bulk_std_err: f64,
    pub bulk_count: usize,
}

impl ProfileBins {
    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Largest `|mc_mean - model|` over non-empty bins.
    pub fn sup_model_gap(&self) -> f64 {
        (0..self.mean.len())
            .filter(|&b| self.count[b] > 0)
            .map(|b| (self.mean[b] - self.model[b]).abs())
            .fold(0.0, f64::max)
    }

    /// Positive in the first bin, a negative dip before `2r`, and bulk mean
    /// within `bulk_tol` of zero.
    pub fn sign_pattern(&self, bulk_tol: f64) -> bool {
        let centers = self.centers();
        let first = self.count.iter().position(|&c| c > 0);
        let Some(first) = first else { return false };
        let dip = (first + 1..self.mean.len())
            .filter(|&b| self.count[b] > 0 && centers[b] < 2.0)
            .map(|b| self.mean[b])
            .fold(f64::INFINITY, f64::min);
        self.mean[first] > 0.0 && dip < 0.0 && self.bulk_mean.abs() <= bulk_tol
    }
}

/// Per-sample seed used by the ensemble.
pub fn ensemble_seed(seed: u64, sample: usize) -> u64 {
    derive_seed(seed, stream::ERG_ENSEMBLE, sample as u64)
}

struct SampleNodes {
    d_over_r: Vec<f64>,
    p: Vec<f64>,
}

/// Samples `ensemble_size` graphs with derived seeds, computes exact node
/// curvature and bins it by `D/r`. Samples whose resistance solve fails are
/// skipped and listed in `skipped`.
pub fn monte_carlo_profile(cfg: &ErgConfig, ensemble_size: usize, bins: usize) -> Result<ProfileBins> {
    cfg.validate()?;
    if ensemble_size == 0 || bins == 0 {
        return Err(Error::InvalidSize { reason: "need at least one sample and one bin".into() });
    }
    let r = cfg.connection_radius;
    let model = BoundaryModel::for_config(cfg)?;
    let runs: Vec<Option<SampleNodes>> = (0..ensemble_size)
        .into_par_iter()
        .map(|s| {
            let mut c = *cfg;
            c.seed = ensemble_seed(cfg.seed, s);
            let sample = euclidean_random_graph(&c).ok()?;
            let prof = effective_resistance(&sample.graph).ok()?;
            let p = node_curvature(&sample.graph, &prof);
            Some(SampleNodes { d_over_r: sample.boundary_distances.iter().map(|d| d / r).collect(), p })
        })
        .collect();

    let top = cfg.disc_radius / r;
    let width = top / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|b| b as f64 * width).collect();
    let mut sum = vec![0.0; bins];
    let mut sq = vec![0.0; bins];
    let mut count = vec![0usize; bins];
    let (mut bsum, mut bsq, mut bcount) = (0.0, 0.0, 0usize);
    let mut skipped = Vec::new();
    let mut total = 0;
    for (s, run) in runs.iter().enumerate() {
        let Some(run) = run else {
            skipped.push(s);
            continue;
        };
        for (&x, &p) in run.d_over_r.iter().zip(&run.p) {
            let b = ((x / width).floor().max(0.0) as usize).min(bins - 1);
            sum[b] += p;
            sq[b] += p * p;
            count[b] += 1;
            total += 1;
            if x >= 2.0 {
                bsum += p;
                bsq += p * p;
                bcount += 1;
            }
        }
    }
    let stats = |s: f64, q: f64, c: usize| -> (f64, f64) {
        if c == 0 {
            return (f64::NAN, f64::NAN);
        }
        let m = s / c as f64;
        let var = if c > 1 { ((q - c as f64 * m * m) / (c - 1) as f64).max(0.0) } else { 0.0 };
        (m, var.sqrt())
    };
    let mut mean = Vec::with_capacity(bins);
    let mut std = Vec::with_capacity(bins);
    for b in 0..bins {
        let (m, sd) = stats(sum[b], sq[b], count[b]);
        mean.push(m);
        std.push(sd);
    }
    let model_values = edges
        .windows(2)
        .map(|w| model.expected_boundary_curvature(0.5 * (w[0] + w[1]) * r))
        .collect::<Result<Vec<_>>>()?;
    let (bulk_mean, bulk_sd) = stats(bsum, bsq, bcount);
    Ok(ProfileBins {
        edges,
        mean,
        std,
        count,
        model: model_values,
        samples: ensemble_size,
        skipped,
        total_nodes: total,
        bulk_mean,
        bulk_std_err: bulk_sd / (bcount.max(1) as f64).sqrt(),
        bulk_count: bcount,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_examples() {
        assert!((segment_area(-1.0, 1.0).unwrap() - PI).abs() < 1e-15);
        assert!((segment_area(0.0, 1.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert_eq!(segment_area(1.0, 1.0).unwrap(), 0.0);
        let want = 0.5f64.acos() - 0.5 * 0.75f64.sqrt();
        assert!((segment_area(0.5, 1.0).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.6142).abs() < 1e-4);
        assert!(segment_area(1.5, 1.0).is_err());
    }

    #[test]
    fn resistance_examples() {
        let lam = 2.0;
        let full = PI;
        assert!((heuristic_resistance(full, full, lam).unwrap() - 2.0 / (lam * PI)).abs() < 1e-15);
        assert!((heuristic_resistance(full / 2.0, full, lam).unwrap() - 3.0 / (lam * PI)).abs() < 1e-15);
        let a = heuristic_resistance(1.0, 2.0, lam).unwrap();
        assert!((heuristic_resistance(1.0, 2.0, lam / 2.0).unwrap() - 2.0 * a).abs() < 1e-15);
        assert!(heuristic_resistance(0.0, 1.0, lam).is_err());
    }

    #[test]
    fn model_shape() {
        let m = BoundaryModel::new(1.0, 1.0, 200).unwrap();
        assert_eq!(m.expected_boundary_curvature(2.0).unwrap(), 0.0);
        assert_eq!(m.expected_boundary_curvature(3.0).unwrap(), 0.0);
        assert!(m.expected_boundary_curvature(0.0).unwrap() > 0.1);
        assert!(m.expected_boundary_curvature(0.95).unwrap() < -0.05);
        for x in [1.0, 2.0] {
            let l = m.expected_boundary_curvature(x - 1e-9).unwrap();
            let r = m.expected_boundary_curvature(x + 1e-9).unwrap();
            assert!((l - r).abs() < 1e-6, "jump at {x}: {l} vs {r}");
        }
        assert!(BoundaryModel::new(1.0, 1.0, 10).is_err());
    }

    #[test]
    fn heuristic_isolated_and_missing() {
        let m = BoundaryModel::new(1.0, 3.0, 100).unwrap();
        let g = WeightedGraph::new(2, &[]).unwrap();
        assert_eq!(heuristic_node_curvature(&g, Some(&[5.0, 5.0]), &m).unwrap(), vec![1.0, 1.0]);
        assert!(matches!(heuristic_node_curvature(&g, None, &m), Err(Error::MissingGeometry)));
    }
}

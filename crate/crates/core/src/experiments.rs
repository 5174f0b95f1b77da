//! Erdős–Rényi curvature sweep.

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::CurvatureReport;
use crate::error::{Error, Result};
use crate::generators::erdos_renyi;
use crate::resistance::effective_resistance;
use crate::rng::{derive_seed, stream};

/// `count` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![hi];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|k| {
            if k + 1 == count {
                hi
            } else {
                (a + (b - a) * k as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

/// Fixed node-curvature histogram: `[lo, 1]` in steps of `width`, with
/// anything below `lo` counted in the first bin.
#[derive(Debug, Clone, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub width: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn new(lo: f64, width: f64) -> Self {
        let bins = ((1.0 - lo) / width).round() as usize;
        Self { lo, width, counts: vec![0; bins] }
    }

    pub fn add(&mut self, x: f64) {
        let b = ((x - self.lo) / self.width).floor().max(0.0) as usize;
        let last = self.counts.len() - 1;
        self.counts[b.min(last)] += 1;
    }

    pub fn edges(&self, b: usize) -> (f64, f64) {
        (self.lo + b as f64 * self.width, self.lo + (b + 1) as f64 * self.width)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub rho: f64,
    pub samples: usize,
    pub links: usize,
    /// Mean link curvature pooled over all links of all samples.
    pub mean_kappa: f64,
    pub mean_p: f64,
    /// Mean fraction of nodes in the largest component.
    pub giant_fraction: f64,
    pub histogram: Histogram,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub n: usize,
    pub rho: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.samples == 0 || self.rho.is_empty() {
            return Err(Error::InvalidSize { reason: "need n ≥ 2, one sample and one density".into() });
        }
        for &r in &self.rho {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::OutOfRange { value: r, lo: 0.0, hi: 1.0 });
            }
        }
        Ok(())
    }
}

struct SampleStats {
    kappa_sum: f64,
    links: usize,
    p: Vec<f64>,
    giant: usize,
}

/// Seed of sample `s` at grid index `k`.
pub fn sweep_seed(seed: u64, k: usize, samples: usize, s: usize) -> u64 {
    derive_seed(seed, stream::ER_SWEEP, (k * samples + s) as u64)
}

pub fn er_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> =
        (0..cfg.rho.len()).flat_map(|k| (0..cfg.samples).map(move |s| (k, s))).collect();
    let stats: Vec<SampleStats> = jobs
        .par_iter()
        .map(|&(k, s)| {
            let g = erdos_renyi(cfg.n, cfg.rho[k], sweep_seed(cfg.seed, k, cfg.samples, s))?;
            let prof = effective_resistance(&g)?;
            let rep = CurvatureReport::new(&g, &prof);
            let giant = prof.members().iter().map(Vec::len).max().unwrap_or(0);
            Ok(SampleStats { kappa_sum: rep.kappa.iter().sum(), links: g.m(), p: rep.p, giant })
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(cfg.rho.len());
    for (k, chunk) in stats.chunks(cfg.samples).enumerate() {
        let mut hist = Histogram::new(-10.0, 0.1);
        let (mut ks, mut links, mut ps, mut giant) = (0.0, 0usize, 0.0, 0.0);
        for st in chunk {
            ks += st.kappa_sum;
            links += st.links;
            giant += st.giant as f64 / cfg.n as f64;
            for &p in &st.p {
                ps += p;
                hist.add(p);
            }
        }
        rows.push(SweepRow {
            rho: cfg.rho[k],
            samples: cfg.samples,
            links,
            mean_kappa: if links > 0 { ks / links as f64 } else { f64::NAN },
            mean_p: ps / (cfg.n * cfg.samples) as f64,
            giant_fraction: giant / cfg.samples as f64,
            histogram: hist,
        });
    }
    Ok(rows)
}

/// First density where the mean link curvature goes from positive to
/// non-positive, interpolated linearly in `ln ρ`.
pub fn zero_crossing(rows: &[SweepRow]) -> Option<f64> {
    let with_links: Vec<&SweepRow> = rows.iter().filter(|r| r.links > 0).collect();
    with_links.windows(2).find_map(|w| {
        let (a, b) = (w[0], w[1]);
        if a.mean_kappa > 0.0 && b.mean_kappa <= 0.0 {
            let s = a.mean_kappa / (a.mean_kappa - b.mean_kappa);
            Some((a.rho.ln() + s * (b.rho.ln() - a.rho.ln())).exp())
        } else {
            None
        }
    })
}

//! Randomized effective resistances: random-sign projection of the
//! weighted incidence matrix, one preconditioned conjugate-gradient solve
//! per projection row.

use rayon::prelude::*;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::resistance::ResistanceProfile;
use crate::rng::{rng_for, stream};

/// Accuracy, seed and optional sketch size for [`approx_effective_resistance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxConfig {
    pub epsilon: f64,
    pub seed: u64,
    pub sketch_dim: Option<usize>,
}

impl ApproxConfig {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        Self { epsilon, seed, sketch_dim: None }
    }

    /// `⌈24 ln n / ε²⌉` unless overridden.
    pub fn dimension(&self, n: usize) -> usize {
        self.sketch_dim
            .unwrap_or_else(|| (24.0 * (n.max(2) as f64).ln() / (self.epsilon * self.epsilon)).ceil() as usize)
            .max(1)
    }
}

/// Laplacian in compressed sparse row form (off-diagonal part only).
#[derive(Debug, Clone)]
pub struct CsrLaplacian {
    pub n: usize,
    pub diag: Vec<f64>,
    pub row_start: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl CsrLaplacian {
    pub fn new(g: &WeightedGraph) -> Self {
        let n = g.n();
        let mut row_start = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(2 * g.m());
        let mut vals = Vec::with_capacity(2 * g.m());
        let mut diag = vec![0.0; n];
        row_start.push(0);
        for (i, d) in diag.iter_mut().enumerate() {
            for &(j, c) in g.neighbors(i) {
                cols.push(j);
                vals.push(c);
                *d += c;
            }
            row_start.push(cols.len());
        }
        Self { n, diag, row_start, cols, vals }
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut s = self.diag[i] * x[i];
            for k in self.row_start[i]..self.row_start[i + 1] {
                s -= self.vals[k] * x[self.cols[k]];
            }
            y[i] = s;
        }
    }

    fn apply_lanes(&self, x: &[[f64; LANES]], y: &mut [[f64; LANES]]) {
        for i in 0..self.n {
            let mut s = [0.0; LANES];
            let d = self.diag[i];
            for (l, v) in s.iter_mut().enumerate() {
                *v = d * x[i][l];
            }
            for k in self.row_start[i]..self.row_start[i + 1] {
                let c = self.vals[k];
                let xj = &x[self.cols[k]];
                for l in 0..LANES {
                    s[l] -= c * xj[l];
                }
            }
            y[i] = s;
        }
    }
}

/// Jacobi-preconditioned conjugate gradient for a consistent system `Q z = b`.
/// Stops when `‖r‖ ≤ tol ‖b‖`; fails after `max_iter` iterations.
pub fn conjugate_gradient(q: &CsrLaplacian, b: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = q.n;
    let inv: Vec<f64> = q.diag.iter().map(|&d| if d > 0.0 { 1.0 / d } else { 0.0 }).collect();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let bnorm = dot(b, b).sqrt();
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut z: Vec<f64> = r.iter().zip(&inv).map(|(a, m)| a * m).collect();
    let mut p = z.clone();
    let mut qp = vec![0.0; n];
    let mut rz = dot(&r, &z);
    for it in 0..max_iter {
        if dot(&r, &r).sqrt() <= tol * bnorm {
            return Ok(x);
        }
        q.apply(&p, &mut qp);
        let alpha = rz / dot(&p, &qp);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * qp[i];
            z[i] = r[i] * inv[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        if !alpha.is_finite() {
            return Err(Error::SolverDivergence { iterations: it, residual: f64::NAN });
        }
    }
    let res = dot(&r, &r).sqrt() / bnorm;
    if res <= tol {
        Ok(x)
    } else {
        Err(Error::SolverDivergence { iterations: max_iter, residual: res })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

const LANES: usize = 8;

/// Solves `LANES` independent systems at once; each lane runs its own
/// conjugate-gradient recurrence and freezes once converged.
fn cg_lanes(
    q: &CsrLaplacian,
    inv: &[f64],
    b: &[[f64; LANES]],
    active: usize,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<[f64; LANES]>> {
    let n = q.n;
    let mut x = vec![[0.0; LANES]; n];
    let mut r = b.to_vec();
    let mut z = vec![[0.0; LANES]; n];
    for i in 0..n {
        for l in 0..LANES {
            z[i][l] = r[i][l] * inv[i];
        }
    }
    let mut p = z.clone();
    let mut qp = vec![[0.0; LANES]; n];
    let bnorm = lane_dot(b, b).map(f64::sqrt);
    let mut rz = lane_dot(&r, &z);
    let mut done = [false; LANES];
    for l in 0..LANES {
        done[l] = l >= active || bnorm[l] == 0.0;
    }
    let mut rr = lane_dot(&r, &r);
    for _ in 0..max_iter {
        for l in 0..LANES {
            if !done[l] && rr[l].sqrt() <= tol * bnorm[l] {
                done[l] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok(x);
        }
        q.apply_lanes(&p, &mut qp);
        let pqp = lane_dot(&p, &qp);
        let mut alpha = [0.0; LANES];
        for l in 0..LANES {
            if !done[l] {
                alpha[l] = rz[l] / pqp[l];
            }
        }
        for i in 0..n {
            for l in 0..LANES {
                x[i][l] += alpha[l] * p[i][l];
                r[i][l] -= alpha[l] * qp[i][l];
                z[i][l] = r[i][l] * inv[i];
            }
        }
        let rz_new = lane_dot(&r, &z);
        let mut beta = [0.0; LANES];
        for l in 0..LANES {
            if !done[l] {
                beta[l] = rz_new[l] / rz[l];
            }
        }
        rz = rz_new;
        for i in 0..n {
            for l in 0..LANES {
                p[i][l] = z[i][l] + beta[l] * p[i][l];
            }
        }
        rr = lane_dot(&r, &r);
        if alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::SolverDivergence { iterations: max_iter, residual: f64::NAN });
        }
    }
    for l in 0..LANES {
        if !done[l] && rr[l].sqrt() > tol * bnorm[l] {
            return Err(Error::SolverDivergence { iterations: max_iter, residual: rr[l].sqrt() / bnorm[l] });
        }
    }
    Ok(x)
}

fn lane_dot(a: &[[f64; LANES]], b: &[[f64; LANES]]) -> [f64; LANES] {
    let mut s = [0.0; LANES];
    for (x, y) in a.iter().zip(b) {
        for l in 0..LANES {
            s[l] += x[l] * y[l];
        }
    }
    s
}

/// Approximate resistances on every link. Each link value is within
/// `(1 ± ε)` of the exact one with high probability; the output depends
/// only on the graph and `cfg`.
pub fn approx_effective_resistance(g: &WeightedGraph, cfg: &ApproxConfig) -> Result<ResistanceProfile> {
    if !(cfg.epsilon > 0.0 && cfg.epsilon < 1.0) {
        return Err(Error::OutOfRange { value: cfg.epsilon, lo: 0.0, hi: 1.0 });
    }
    let n = g.n();
    let m = g.m();
    let k = cfg.dimension(n);
    let q = CsrLaplacian::new(g);
    let inv: Vec<f64> = q.diag.iter().map(|&d| if d > 0.0 { 1.0 / d } else { 0.0 }).collect();
    let sqrt_c: Vec<f64> = g.links().iter().map(|l| l.weight.sqrt()).collect();
    let scale = 1.0 / (k as f64).sqrt();
    let tol = cfg.epsilon / 10.0;
    let max_iter = 10 * n.max(1);
    let batches = k.div_ceil(LANES);

    let partial: Vec<Result<Vec<f64>>> = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let first = batch * LANES;
            let active = LANES.min(k - first);
            let mut b = vec![[0.0; LANES]; n];
            for lane in 0..active {
                let mut rng = rng_for(cfg.seed, stream::SKETCH, (first + lane) as u64);
                let mut bits = 0u64;
                for (l, link) in g.links().iter().enumerate() {
                    if l % 64 == 0 {
                        bits = rng.next_u64();
                    }
                    let sign = if bits & 1 == 1 { 1.0 } else { -1.0 };
                    bits >>= 1;
                    let v = sign * scale * sqrt_c[l];
                    b[link.i][lane] += v;
                    b[link.j][lane] -= v;
                }
            }
            let z = cg_lanes(&q, &inv, &b, active, tol, max_iter)?;
            let mut acc = vec![0.0; m];
            for (l, link) in g.links().iter().enumerate() {
                let (zi, zj) = (&z[link.i], &z[link.j]);
                let mut s = 0.0;
                for lane in 0..active {
                    let d = zi[lane] - zj[lane];
                    s += d * d;
                }
                acc[l] = s;
            }
            Ok(acc)
        })
        .collect();

    let mut link_omega = vec![0.0; m];
    for part in partial {
        for (a, b) in link_omega.iter_mut().zip(part?) {
            *a += b;
        }
    }
    let comps = g.components();
    let relative = g.links().iter().zip(&link_omega).map(|(l, w)| l.weight * w).collect();
    Ok(ResistanceProfile {
        n,
        beta: comps.beta,
        labels: comps.labels,
        links: g.links().to_vec(),
        link_omega,
        relative,
        omega: None,
        pinv: None,
        zeta: None,
        epsilon: Some(cfg.epsilon),
    })
}

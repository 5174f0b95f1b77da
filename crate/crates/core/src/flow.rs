//! Resistance Ricci flow `dQ/dt = 2 Q diag(p) Q` on generalized Laplacians.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ComponentInfo, WeightedGraph};
use crate::linalg::{
    block_pseudoinverse, curvature_from_q, max_abs, omega_from_pinv, project_row_sums, spectral_radius, symmetrize,
};

/// Plain flow or its degree-normalized variant `dQ/dt = 2 Q diag(p/k) Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FlowKind {
    Standard,
    Normalized,
}

/// Resistances, curvature, `σ²` and potential of a generalized Laplacian.
#[derive(Debug, Clone)]
pub struct FlowPoint {
    pub omega: DMatrix<f64>,
    pub p: Vec<f64>,
    pub sigma2: f64,
    pub potential: f64,
}

fn connected(q: &DMatrix<f64>) -> Result<()> {
    let beta = ComponentInfo::of_matrix(q).beta;
    if beta > 1 {
        return Err(Error::DisconnectedDuringFlow { beta });
    }
    Ok(())
}

pub fn flow_point(q: &DMatrix<f64>) -> Result<FlowPoint> {
    connected(q)?;
    let omega = omega_from_pinv(&block_pseudoinverse(q)?);
    let p: Vec<f64> = curvature_from_q(q, &omega).iter().copied().collect();
    let pv = nalgebra::DVector::from_column_slice(&p);
    let sigma2 = 0.5 * pv.dot(&(&omega * &pv));
    let potential = potential_with(&omega, q);
    Ok(FlowPoint { omega, p, sigma2, potential })
}

fn potential_with(omega: &DMatrix<f64>, q: &DMatrix<f64>) -> f64 {
    0.5 * (omega * q * omega).trace()
}

/// `tr(½ Ω Q Ω)`.
pub fn potential(q: &DMatrix<f64>) -> Result<f64> {
    Ok(flow_point(q)?.potential)
}

fn rhs_with(q: &DMatrix<f64>, kind: FlowKind) -> Result<DMatrix<f64>> {
    let pt = flow_point(q)?;
    let n = q.nrows();
    let scale: Vec<f64> = match kind {
        FlowKind::Standard => pt.p.clone(),
        FlowKind::Normalized => (0..n).map(|i| pt.p[i] / q[(i, i)]).collect(),
    };
    let mut qd = q.clone();
    for j in 0..n {
        qd.column_mut(j).scale_mut(scale[j]);
    }
    let mut out = qd * q * 2.0;
    symmetrize(&mut out);
    Ok(out)
}

/// `2 Q diag(p) Q` with `p` computed from `Q` itself.
pub fn flow_rhs(q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    rhs_with(q, FlowKind::Standard)
}

/// `2 Q diag(p/k) Q` with `k = diag(Q)`.
pub fn normalized_flow_rhs(q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    rhs_with(q, FlowKind::Normalized)
}

/// Link-weight rates `dc_ij/dt = -2 Σ_k c_ik c_kj p_k + 2 c_ij (k_i p_i + k_j p_j)`
/// for every off-diagonal pair.
pub fn link_weight_rates(q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let p = flow_point(q)?.p;
    let n = q.nrows();
    let c = |i: usize, j: usize| -q[(i, j)];
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            return 0.0;
        }
        let shared: f64 = (0..n).filter(|&k| k != i && k != j).map(|k| c(i, k) * c(k, j) * p[k]).sum();
        -2.0 * shared + 2.0 * c(i, j) * (q[(i, i)] * p[i] + q[(j, j)] * p[j])
    }))
}

/// What to do when a resistance falls below the merge threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MergePolicy {
    Halt,
    Merge,
}

/// Step-size and halting controls.
#[derive(Debug, Clone, Serialize)]
pub struct StepControl {
    pub rtol: f64,
    /// Absolute tolerance; defaults to `rtol · max|Q0|`.
    pub atol: Option<f64>,
    pub initial_step: Option<f64>,
    pub max_step: Option<f64>,
    pub merge: MergePolicy,
    /// Merge (or halt) when some `ω_ij < merge_ratio · median ω`.
    pub merge_ratio: f64,
    /// Halt once the spectral radius exceeds this multiple of the initial one.
    pub blowup_factor: f64,
    /// Stop as soon as a positive off-diagonal appears. Off by default:
    /// most graphs (any cycle longer than 3) leave the cone immediately and
    /// the flow stays well defined on generalized Laplacians.
    pub halt_outside_cone: bool,
    pub snapshot_times: Vec<f64>,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: None,
            initial_step: None,
            max_step: None,
            merge: MergePolicy::Halt,
            merge_ratio: 1e-6,
            blowup_factor: 1e6,
            halt_outside_cone: false,
            snapshot_times: Vec::new(),
            max_steps: 200_000,
        }
    }
}

/// A contraction of two current nodes during the flow.
#[derive(Debug, Clone, Serialize)]
pub struct MergeEvent {
    pub t: f64,
    /// Current indices before the merge (`kept < removed`).
    pub kept: usize,
    pub removed: usize,
}

/// Current generalized Laplacian.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub q: DMatrix<f64>,
    pub t: f64,
    pub is_laplacian: bool,
    pub merges: Vec<MergeEvent>,
}

/// One recorded time.
#[derive(Debug, Clone)]
pub struct FlowSample {
    pub t: f64,
    pub q: DMatrix<f64>,
    pub omega: DMatrix<f64>,
    pub p: Vec<f64>,
    pub sigma2: f64,
    pub potential: f64,
    pub is_laplacian: bool,
    /// Smallest link weight `-Q_ij` over nonzero off-diagonals.
    pub min_weight: f64,
}

/// Why the integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Halt {
    Completed,
    BlowUpDetected { t: f64 },
    LeftLaplacianCone { t: f64 },
    MergeThreshold { t: f64, i: usize, j: usize },
    SingleNode { t: f64 },
}

impl Halt {
    pub fn time(&self) -> Option<f64> {
        match *self {
            Halt::Completed => None,
            Halt::BlowUpDetected { t }
            | Halt::LeftLaplacianCone { t }
            | Halt::MergeThreshold { t, .. }
            | Halt::SingleNode { t } => Some(t),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Halt::Completed => "Completed",
            Halt::BlowUpDetected { .. } => "BlowUpDetected",
            Halt::LeftLaplacianCone { .. } => "LeftLaplacianCone",
            Halt::MergeThreshold { .. } => "MergeThreshold",
            Halt::SingleNode { .. } => "SingleNode",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub kind: FlowKind,
    pub samples: Vec<FlowSample>,
    /// Indices into `samples` that fall on requested snapshot times.
    pub snapshots: Vec<usize>,
    pub merges: Vec<MergeEvent>,
    pub halt: Halt,
}

impl FlowTrajectory {
    pub fn last(&self) -> &FlowSample {
        self.samples.last().expect("trajectory holds the initial sample")
    }

    pub fn state(&self) -> FlowState {
        let s = self.last();
        FlowState { q: s.q.clone(), t: s.t, is_laplacian: s.is_laplacian, merges: self.merges.clone() }
    }

    /// Turns the two abnormal halts into errors carrying the halt time.
    pub fn into_result(self) -> Result<FlowTrajectory> {
        match self.halt {
            Halt::BlowUpDetected { t } => Err(Error::BlowUpDetected { t }),
            Halt::LeftLaplacianCone { t } => Err(Error::LeftLaplacianCone { t }),
            _ => Ok(self),
        }
    }

    /// Largest increase of the potential between consecutive samples of
    /// equal size while the state stays in the Laplacian cone.
    pub fn potential_increase(&self) -> Option<f64> {
        self.samples
            .windows(2)
            .filter(|w| w[0].q.nrows() == w[1].q.nrows() && w[0].is_laplacian && w[1].is_laplacian)
            .map(|w| w[1].potential - w[0].potential)
            .reduce(f64::max)
    }
}

fn sample_of(q: &DMatrix<f64>, t: f64, is_laplacian: bool) -> Result<FlowSample> {
    let pt = flow_point(q)?;
    let n = q.nrows();
    let mut min_weight = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            if q[(i, j)] != 0.0 {
                min_weight = min_weight.min(-q[(i, j)]);
            }
        }
    }
    Ok(FlowSample {
        t,
        q: q.clone(),
        omega: pt.omega,
        p: pt.p,
        sigma2: pt.sigma2,
        potential: pt.potential,
        is_laplacian,
        min_weight,
    })
}

fn off_diagonal_max(q: &DMatrix<f64>) -> f64 {
    let n = q.nrows();
    let mut m = f64::NEG_INFINITY;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m = m.max(q[(i, j)]);
            }
        }
    }
    m
}

/// No off-diagonal above `1e-10 · max|Q|`.
pub fn in_cone(q: &DMatrix<f64>) -> bool {
    off_diagonal_max(q) <= CONE_TOL * max_abs(q)
}

const CONE_TOL: f64 = 1e-10;

/// Contracts current nodes `a < b` of a generalized Laplacian.
pub fn merge_matrix(q: &DMatrix<f64>, a: usize, b: usize) -> DMatrix<f64> {
    let (a, b) = (a.min(b), a.max(b));
    let n = q.nrows();
    let keep: Vec<usize> = (0..n).filter(|&v| v != b).collect();
    let mut out = DMatrix::from_fn(n - 1, n - 1, |x, y| {
        let (u, v) = (keep[x], keep[y]);
        let mut s = q[(u, v)];
        if u == a {
            s += q[(b, v)];
        }
        if v == a {
            s += q[(u, b)];
        }
        if u == a && v == a {
            s += q[(b, b)];
        }
        s
    });
    project_row_sums(&mut out);
    out
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One embedded step; returns the fifth-order solution and the error estimate.
fn dopri_step(q: &DMatrix<f64>, h: f64, kind: FlowKind) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let mut k: Vec<DMatrix<f64>> = Vec::with_capacity(7);
    for s in 0..7 {
        let mut y = q.clone();
        for (r, kr) in k.iter().enumerate() {
            if A[s][r] != 0.0 {
                y += kr * (h * A[s][r]);
            }
        }
        k.push(rhs_with(&y, kind)?);
    }
    let mut y5 = q.clone();
    let mut err = DMatrix::zeros(q.nrows(), q.ncols());
    for s in 0..7 {
        if B5[s] != 0.0 {
            y5 += &k[s] * (h * B5[s]);
        }
        err += &k[s] * (h * (B5[s] - B4[s]));
    }
    Ok((y5, err))
}

fn median_resistance(omega: &DMatrix<f64>) -> (f64, usize, usize, f64) {
    let n = omega.nrows();
    let mut vals = Vec::with_capacity(n * (n - 1) / 2);
    let (mut lo, mut li, mut lj) = (f64::INFINITY, 0, 0);
    for i in 0..n {
        for j in (i + 1)..n {
            let w = omega[(i, j)];
            vals.push(w);
            if w < lo {
                (lo, li, lj) = (w, i, j);
            }
        }
    }
    vals.sort_by(f64::total_cmp);
    let med = if vals.is_empty() { 0.0 } else { vals[vals.len() / 2] };
    (lo, li, lj, med)
}

/// Integrates from `q0` to `t_end` (or an earlier halt) with adaptive
/// Dormand-Prince steps, re-symmetrizing and re-projecting row sums after
/// every accepted step. Every accepted step is recorded.
pub fn integrate(q0: &DMatrix<f64>, t_end: f64, ctl: &StepControl, kind: FlowKind) -> Result<FlowTrajectory> {
    connected(q0)?;
    let mut q = q0.clone();
    let rho0 = spectral_radius(q0).max(f64::MIN_POSITIVE);
    let atol = ctl.atol.unwrap_or(ctl.rtol * max_abs(q0).max(f64::MIN_POSITIVE));
    let mut t = 0.0;
    let mut h = ctl.initial_step.unwrap_or(1e-3 / rho0).min(t_end.max(f64::MIN_POSITIVE));
    let mut is_laplacian = in_cone(&q);
    let mut samples = vec![sample_of(&q, t, is_laplacian)?];
    let mut snaps: Vec<f64> = ctl.snapshot_times.iter().copied().filter(|&s| s > 0.0 && s <= t_end).collect();
    snaps.sort_by(f64::total_cmp);
    let mut snapshots = Vec::new();
    if ctl.snapshot_times.contains(&0.0) {
        snapshots.push(0);
    }
    let mut next_snap = 0;
    let mut merges = Vec::new();
    let mut halt = Halt::Completed;
    let mut steps = 0;

    while t < t_end {
        if q.nrows() == 1 {
            halt = Halt::SingleNode { t };
            break;
        }
        steps += 1;
        if steps > ctl.max_steps {
            halt = Halt::BlowUpDetected { t };
            break;
        }
        let mut target = t_end;
        if next_snap < snaps.len() {
            target = target.min(snaps[next_snap]);
        }
        let mut step = h.min(target - t);
        if let Some(m) = ctl.max_step {
            step = step.min(m);
        }
        let landing = t + step >= target * (1.0 - 1e-15);
        if step < 1e-14 * t.abs().max(1.0) && !landing {
            halt = Halt::BlowUpDetected { t };
            break;
        }
        let attempt = dopri_step(&q, step, kind);
        let (mut y, err) = match attempt {
            Ok(v) => v,
            Err(_) => {
                h = step * 0.25;
                continue;
            }
        };
        let mut e = 0.0f64;
        for (idx, ev) in err.iter().enumerate() {
            let scale = atol + ctl.rtol * q[idx].abs().max(y[idx].abs());
            e = e.max(ev.abs() / scale);
        }
        if !e.is_finite() || e > 1.0 {
            let f = if e.is_finite() { (0.9 * e.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
            h = step * f;
            continue;
        }
        symmetrize(&mut y);
        project_row_sums(&mut y);
        let grow = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
        h = step * grow;
        t = if landing { target } else { t + step };
        q = y;

        is_laplacian = in_cone(&q);
        let sample = match sample_of(&q, t, is_laplacian) {
            Ok(s) => s,
            Err(_) => {
                halt = Halt::BlowUpDetected { t };
                break;
            }
        };
        let (lo, li, lj, med) = median_resistance(&sample.omega);
        let blown = spectral_radius(&q) > ctl.blowup_factor * rho0;
        let tiny = lo < ctl.merge_ratio * med;
        samples.push(sample);
        if next_snap < snaps.len() && t >= snaps[next_snap] {
            snapshots.push(samples.len() - 1);
            next_snap += 1;
        }
        if !is_laplacian && ctl.halt_outside_cone {
            halt = Halt::LeftLaplacianCone { t };
            break;
        }
        match ctl.merge {
            MergePolicy::Halt => {
                if blown {
                    halt = Halt::BlowUpDetected { t };
                    break;
                }
                if tiny {
                    halt = Halt::MergeThreshold { t, i: li, j: lj };
                    break;
                }
            }
            MergePolicy::Merge => {
                if tiny {
                    q = merge_matrix(&q, li, lj);
                    merges.push(MergeEvent { t, kept: li, removed: lj });
                    h = ctl.initial_step.unwrap_or(1e-3 / spectral_radius(&q).max(f64::MIN_POSITIVE));
                    if q.nrows() > 1 {
                        samples.push(sample_of(&q, t, in_cone(&q))?);
                    }
                    continue;
                }
                if blown {
                    halt = Halt::BlowUpDetected { t };
                    break;
                }
            }
        }
    }
    Ok(FlowTrajectory { kind, samples, snapshots, merges, halt })
}

/// The resistance Ricci flow.
pub fn integrate_flow(q0: &DMatrix<f64>, t_end: f64, ctl: &StepControl) -> Result<FlowTrajectory> {
    integrate(q0, t_end, ctl, FlowKind::Standard)
}

/// The degree-normalized flow.
pub fn integrate_normalized_flow(q0: &DMatrix<f64>, t_end: f64, ctl: &StepControl) -> Result<FlowTrajectory> {
    integrate(q0, t_end, ctl, FlowKind::Normalized)
}

/// Largest `|dω_ij/dt + 2(p_i + p_j)|` over interior samples, with the
/// derivative taken by three-point finite differences on the recorded
/// times. For the normalized flow the target is `-2(p_i/k_i + p_j/k_j)`.
/// The identity does not need `Q` to stay in the Laplacian cone. Returns
/// NaN when the trajectory has fewer than three usable samples.
pub fn resistance_flow_check(traj: &FlowTrajectory) -> f64 {
    let mut worst = f64::NAN;
    for w in traj.samples.windows(3) {
        let (a, b, c) = (&w[0], &w[1], &w[2]);
        let n = b.q.nrows();
        if a.q.nrows() != n || c.q.nrows() != n {
            continue;
        }
        let (h1, h2) = (b.t - a.t, c.t - b.t);
        if h1 <= 0.0 || h2 <= 0.0 {
            continue;
        }
        if worst.is_nan() {
            worst = 0.0;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (h1 * h1 * c.omega[(i, j)] - h2 * h2 * a.omega[(i, j)] + (h2 * h2 - h1 * h1) * b.omega[(i, j)])
                    / (h1 * h2 * (h1 + h2));
                let want = match traj.kind {
                    FlowKind::Standard => -2.0 * (b.p[i] + b.p[j]),
                    FlowKind::Normalized => -2.0 * (b.p[i] / b.q[(i, i)] + b.p[j] / b.q[(j, j)]),
                };
                worst = worst.max((d - want).abs());
            }
        }
    }
    worst
}

/// Largest deviation between central differences of `tr(½ΩQΩ)` in each
/// `ω_ij` (with `Q` held fixed) and `2(p_i + p_j)`.
pub fn gradient_check(q: &DMatrix<f64>) -> Result<f64> {
    let pt = flow_point(q)?;
    let n = q.nrows();
    let h = 1e-4;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let mut plus = pt.omega.clone();
            let mut minus = pt.omega.clone();
            plus[(i, j)] += h;
            plus[(j, i)] += h;
            minus[(i, j)] -= h;
            minus[(j, i)] -= h;
            let fd = (potential_with(&plus, q) - potential_with(&minus, q)) / (2.0 * h);
            worst = worst.max((fd - 2.0 * (pt.p[i] + pt.p[j])).abs());
        }
    }
    Ok(worst)
}

/// `Q(t) = [I - (2t/n) Q0]^† Q0` for node-transitive `Q0`, evaluated
/// eigenvalue by eigenvalue.
pub fn transitive_closed_form(q0: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>> {
    let n = q0.nrows() as f64;
    let eig = SymmetricEigen::new(q0.clone());
    let mu_max = eig.eigenvalues.iter().fold(0.0f64, |a, &x| a.max(x));
    let t_max = n / (2.0 * mu_max);
    if t >= t_max {
        return Err(Error::PastBlowUp { t, t_max });
    }
    let vals = eig.eigenvalues.map(|x| x / (1.0 - 2.0 * t * x / n));
    let v = &eig.eigenvectors;
    let mut out = v * DMatrix::from_diagonal(&vals) * v.transpose();
    symmetrize(&mut out);
    Ok(out)
}

/// Blow-up time `n / (2 μ_max)` of a node-transitive flow.
pub fn transitive_blowup_time(q0: &DMatrix<f64>) -> f64 {
    q0.nrows() as f64 / (2.0 * spectral_radius(q0))
}

/// Contracts the link `(i, j)`: `j` is folded into `i`, parallel links add
/// their weights, and nodes above `j` shift down by one.
pub fn merge_nodes(g: &WeightedGraph, i: usize, j: usize) -> Result<WeightedGraph> {
    if !g.has_link(i, j) {
        return Err(Error::LinkNotFound { i, j });
    }
    let (keep, gone) = (i.min(j), i.max(j));
    let map = |v: usize| {
        let v = if v == gone { keep } else { v };
        if v > gone {
            v - 1
        } else {
            v
        }
    };
    let mut acc: std::collections::BTreeMap<(usize, usize), f64> = std::collections::BTreeMap::new();
    for l in g.links() {
        let (a, b) = (map(l.i), map(l.j));
        if a == b {
            continue;
        }
        *acc.entry((a.min(b), a.max(b))).or_insert(0.0) += l.weight;
    }
    let edges: Vec<_> = acc.into_iter().map(|((a, b), w)| (a, b, w)).collect();
    WeightedGraph::new(g.n() - 1, &edges)
}

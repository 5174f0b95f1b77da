//! CSV and JSON tables for external plotting. Floats are written with 17
//! significant digits so reruns compare byte for byte.

use std::fmt::Write;

use serde::Serialize;

use crate::curvature::CurvatureReport;
use crate::erg::ProfileBins;
use crate::experiments::SweepRow;
use crate::flow::FlowTrajectory;
use crate::reference::CompareRow;
use crate::resistance::ResistanceProfile;
use crate::trees::TreeReport;

/// Seventeen significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn table(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

pub fn profile_csv(profile: &ResistanceProfile) -> String {
    table(
        "i,j,omega,relative",
        profile.rows().into_iter().map(|r| format!("{},{},{},{}", r.i, r.j, fmt_f64(r.omega), fmt_f64(r.relative))),
    )
}

pub fn node_curvature_csv(report: &CurvatureReport) -> String {
    table("node,p", report.p.iter().enumerate().map(|(i, p)| format!("{i},{}", fmt_f64(*p))))
}

pub fn link_curvature_csv(report: &CurvatureReport) -> String {
    table(
        "i,j,kappa,kappa_norm",
        report
            .links
            .iter()
            .zip(report.kappa.iter().zip(&report.kappa_norm))
            .map(|(l, (k, kn))| format!("{},{},{},{}", l.i, l.j, fmt_f64(*k), fmt_f64(*kn))),
    )
}

pub fn compare_csv(rows: &[CompareRow]) -> String {
    table(
        "i,j,kappa,kappa_or,kappa_lly,kappa_fr_over_omega,sandwich_ok",
        rows.iter().map(|r| {
            format!(
                "{},{},{},{},{},{},{}",
                r.i,
                r.j,
                fmt_f64(r.kappa),
                fmt_f64(r.kappa_or),
                fmt_f64(r.kappa_lly),
                fmt_f64(r.kappa_fr_over_omega),
                r.sandwich_ok
            )
        }),
    )
}

pub fn trajectory_csv(traj: &FlowTrajectory) -> String {
    table(
        "t,potential,sigma2,min_weight,is_laplacian",
        traj.samples.iter().map(|s| {
            format!(
                "{},{},{},{},{}",
                fmt_f64(s.t),
                fmt_f64(s.potential),
                fmt_f64(s.sigma2),
                fmt_f64(s.min_weight),
                s.is_laplacian
            )
        }),
    )
}

#[derive(Serialize)]
struct Snapshot {
    t: f64,
    n: usize,
    is_laplacian: bool,
    q: Vec<Vec<f64>>,
}

/// Full matrices at the requested snapshot times.
pub fn snapshots_json(traj: &FlowTrajectory) -> String {
    let snaps: Vec<Snapshot> = traj
        .snapshots
        .iter()
        .map(|&k| {
            let s = &traj.samples[k];
            let n = s.q.nrows();
            Snapshot {
                t: s.t,
                n,
                is_laplacian: s.is_laplacian,
                q: (0..n).map(|i| (0..n).map(|j| s.q[(i, j)]).collect()).collect(),
            }
        })
        .collect();
    serde_json::to_string_pretty(&snaps).expect("snapshots serialize")
}

/// Parses [`snapshots_json`] output back into `(t, Q)` pairs.
pub fn parse_snapshots(text: &str) -> serde_json::Result<Vec<(f64, nalgebra::DMatrix<f64>)>> {
    #[derive(serde::Deserialize)]
    struct Raw {
        t: f64,
        n: usize,
        q: Vec<Vec<f64>>,
    }
    let raw: Vec<Raw> = serde_json::from_str(text)?;
    Ok(raw
        .into_iter()
        .map(|r| (r.t, nalgebra::DMatrix::from_fn(r.n, r.n, |i, j| r.q[i][j])))
        .collect())
}

pub fn erg_profile_csv(bins: &ProfileBins) -> String {
    let centers = bins.centers();
    table(
        "bin_center_D_over_r,mc_mean,mc_std,mc_count,model_value",
        (0..centers.len()).map(|b| {
            format!(
                "{},{},{},{},{}",
                fmt_f64(centers[b]),
                fmt_f64(bins.mean[b]),
                fmt_f64(bins.std[b]),
                bins.count[b],
                fmt_f64(bins.model[b])
            )
        }),
    )
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    table(
        "rho,samples,links,mean_kappa,mean_p,giant_fraction",
        rows.iter().map(|r| {
            format!(
                "{},{},{},{},{},{}",
                fmt_f64(r.rho),
                r.samples,
                r.links,
                fmt_f64(r.mean_kappa),
                fmt_f64(r.mean_p),
                fmt_f64(r.giant_fraction)
            )
        }),
    )
}

pub fn sweep_histogram_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("rho,p_lo,p_hi,count\n");
    for r in rows {
        for (b, &c) in r.histogram.counts.iter().enumerate() {
            let (lo, hi) = r.histogram.edges(b);
            writeln!(out, "{},{},{},{}", fmt_f64(r.rho), fmt_f64(lo), fmt_f64(hi), c).unwrap();
        }
    }
    out
}

pub fn tree_links_csv(report: &TreeReport) -> String {
    table(
        "i,j,relative,empirical,sigma,pass",
        report.links.iter().map(|l| {
            format!("{},{},{},{},{},{}", l.i, l.j, fmt_f64(l.relative), fmt_f64(l.empirical), fmt_f64(l.sigma), l.pass)
        }),
    )
}

pub fn tree_nodes_csv(report: &TreeReport) -> String {
    table(
        "node,p,mean,std_err,pass",
        report
            .nodes
            .iter()
            .map(|n| format!("{},{},{},{},{}", n.node, fmt_f64(n.p), fmt_f64(n.mean), fmt_f64(n.std_err), n.pass)),
    )
}

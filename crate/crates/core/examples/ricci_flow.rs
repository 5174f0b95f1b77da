//! The resistance Ricci flow on three graphs.
//!
//! A cycle follows the node-transitive closed form until it blows up. A path
//! loses its end links at `t = 1/c0`. Merging lets the path shrink node by node.

use resist_curve::flow::{
    integrate_flow, transitive_blowup_time, transitive_closed_form, MergePolicy, StepControl,
};
use resist_curve::generators::{cycle, path};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = cycle(6, 1.0)?.laplacian().0;
    let t_blow = transitive_blowup_time(&q);
    let times: Vec<f64> = (1..=4).map(|k| 0.2 * k as f64 * t_blow).collect();
    let ctl = StepControl { snapshot_times: times, ..StepControl::default() };
    let traj = integrate_flow(&q, 0.8 * t_blow, &ctl)?;
    println!("cycle 6, blow-up at {t_blow:.4}");
    for &k in &traj.snapshots {
        let s = &traj.samples[k];
        let exact = transitive_closed_form(&q, s.t)?;
        let err = (&s.q - &exact).amax() / exact.amax();
        println!("  t = {:.4}  c01 = {:.6}  potential = {:.6}  rel err {err:.1e}", s.t, -s.q[(0, 1)], s.potential);
    }

    let q = path(4, 1.0)?.laplacian().0;
    let traj = integrate_flow(&q, 2.0, &StepControl::default())?;
    println!("path 4 halts: {:?}", traj.halt);
    let last = traj.last();
    println!("  end link {:.1} at t = {:.6}, 1/(1-t) = {:.1}", -last.q[(0, 1)], last.t, 1.0 / (1.0 - last.t));

    let ctl = StepControl { merge: MergePolicy::Merge, ..StepControl::default() };
    let traj = integrate_flow(&path(5, 1.0)?.laplacian().0, 10.0, &ctl)?;
    for m in &traj.merges {
        println!("  merge at t = {:.4}: node {} into {}", m.t, m.removed, m.kept);
    }
    println!("  final size {} ({:?})", traj.last().q.nrows(), traj.halt);
    Ok(())
}

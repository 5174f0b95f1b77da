mod common;

use common::random_connected;
use nalgebra::DMatrix;
use proptest::prelude::*;
use resist_curve::flow::{
    flow_point, flow_rhs, gradient_check, in_cone, integrate_flow, integrate_normalized_flow, link_weight_rates,
    merge_nodes, normalized_flow_rhs, potential, resistance_flow_check, transitive_blowup_time, transitive_closed_form,
    Halt, MergePolicy, StepControl,
};
use resist_curve::generators::{complete, cycle, path, platonic, Platonic};
use resist_curve::Error;

fn laplacian() -> impl Strategy<Value = DMatrix<f64>> {
    (2usize..10, 0.0f64..0.6, any::<u64>())
        .prop_map(|(n, extra, seed)| random_connected(n, extra, 0.2, 5.0, seed).laplacian().0)
}

#[test]
fn transitive_graphs_follow_closed_form() {
    for g in [complete(5, 1.0).unwrap(), platonic(Platonic::Cube, 1.0).unwrap(), cycle(8, 2.0).unwrap()] {
        let q = g.laplacian().0;
        let t_end = 0.7 * transitive_blowup_time(&q);
        let ctl = StepControl { snapshot_times: vec![0.25 * t_end, 0.5 * t_end, t_end], ..StepControl::default() };
        let traj = integrate_flow(&q, t_end, &ctl).unwrap();
        assert_eq!(traj.halt, Halt::Completed);
        assert_eq!(traj.snapshots.len(), 3);
        for &k in &traj.snapshots {
            let s = &traj.samples[k];
            let want = transitive_closed_form(&q, s.t).unwrap();
            assert!((&s.q - &want).amax() <= 1e-6 * want.amax());
        }
    }
}

#[test]
fn complete_graph_stays_in_cone() {
    let q = complete(6, 1.0).unwrap().laplacian().0;
    let traj = integrate_flow(&q, 0.5 * transitive_blowup_time(&q), &StepControl::default()).unwrap();
    assert!(traj.samples.iter().all(|s| s.is_laplacian));
    assert!(traj.potential_increase().unwrap() <= 1e-12);
}

#[test]
fn long_cycles_leave_the_cone() {
    let q = cycle(6, 1.0).unwrap().laplacian().0;
    assert!(!in_cone(&(&q + flow_rhs(&q).unwrap() * 1e-3)));
    let ctl = StepControl { halt_outside_cone: true, ..StepControl::default() };
    let traj = integrate_flow(&q, 0.1, &ctl).unwrap();
    assert!(matches!(traj.halt, Halt::LeftLaplacianCone { .. }));
    assert!(matches!(traj.into_result(), Err(Error::LeftLaplacianCone { .. })));
}

#[test]
fn path_merges_down_to_one_node() {
    let q = path(4, 1.0).unwrap().laplacian().0;
    let ctl = StepControl { merge: MergePolicy::Merge, ..StepControl::default() };
    let traj = integrate_flow(&q, 10.0, &ctl).unwrap();
    assert!(!traj.merges.is_empty());
    let first = &traj.merges[0];
    assert!((first.t - 1.0).abs() < 1e-3, "first merge at {}", first.t);
    assert!(traj.last().q.nrows() < 4);

    let halted = integrate_flow(&q, 10.0, &StepControl::default()).unwrap();
    assert!(matches!(halted.halt, Halt::MergeThreshold { .. } | Halt::BlowUpDetected { .. }));
    assert!((halted.halt.time().unwrap() - 1.0).abs() < 1e-3);
}

#[test]
fn merge_nodes_adds_parallel_weights() {
    let g = cycle(4, 1.0).unwrap();
    let h = merge_nodes(&g, 0, 1).unwrap();
    assert_eq!(h.n(), 3);
    assert_eq!(h.edge_list(), vec![(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]);
    assert!(merge_nodes(&g, 0, 2).is_err());
}

#[test]
fn normalized_flow_tracks_its_resistance_law() {
    let q = random_connected(6, 0.4, 0.5, 2.0, 3).laplacian().0;
    let ctl = StepControl { max_step: Some(1e-3), ..StepControl::default() };
    let traj = integrate_normalized_flow(&q, 0.05, &ctl).unwrap();
    assert!(resistance_flow_check(&traj) < 1e-4);
    let pt = flow_point(&q).unwrap();
    let scaled = DMatrix::from_fn(6, 6, |i, j| q[(i, j)] * pt.p[j] / q[(j, j)]);
    assert!((normalized_flow_rhs(&q).unwrap() - 2.0 * scaled * &q).amax() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rhs_is_a_generalized_laplacian(q in laplacian()) {
        let r = flow_rhs(&q).unwrap();
        let n = q.nrows();
        prop_assert!((&r - r.transpose()).amax() < 1e-10 * r.amax().max(1.0));
        for i in 0..n {
            prop_assert!(r.row(i).sum().abs() < 1e-9 * r.amax().max(1.0));
        }
        let rates = link_weight_rates(&q).unwrap();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    prop_assert!((rates[(i, j)] + r[(i, j)]).abs() < 1e-10 * r.amax().max(1.0));
                }
            }
        }
    }

    #[test]
    fn potential_identities(q in laplacian()) {
        let pt = flow_point(&q).unwrap();
        let n = q.nrows() as f64;
        prop_assert!((potential(&q).unwrap() - 2.0 * n * pt.sigma2).abs() < 1e-8 * pt.potential.max(1.0));
        prop_assert!(gradient_check(&q).unwrap() < 1e-5);
    }

    #[test]
    fn potential_decreases(q in laplacian()) {
        let traj = integrate_flow(&q, 0.02, &StepControl::default()).unwrap();
        for w in traj.samples.windows(2) {
            prop_assert!(w[1].potential <= w[0].potential * (1.0 + 1e-12));
        }
    }
}

mod common;

use common::{random_connected, random_tree};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use resist_curve::bounds::bounds_report;
use resist_curve::characterizations::{
    circumcenter_residual, distance_characterizations, limit_link_curvature, limit_node_curvature,
    neighbor_pair_curvature, LimitSchedule,
};
use resist_curve::curvature::{
    equilibrium_curvature, link_curvature, node_curvature, sigma_squared, sigma_squared_inverse, CurvatureReport,
};
use resist_curve::generators::{cycle, path, star};
use resist_curve::{effective_resistance, WeightedGraph};

fn graph() -> impl Strategy<Value = WeightedGraph> {
    (2usize..14, 0.0f64..0.6, any::<u64>()).prop_map(|(n, extra, seed)| random_connected(n, extra, 0.1, 10.0, seed))
}

fn report(g: &WeightedGraph) -> CurvatureReport {
    CurvatureReport::new(g, &effective_resistance(g).unwrap())
}

#[test]
fn small_examples() {
    let r = report(&path(3, 1.0).unwrap());
    assert_eq!(r.p.len(), 3);
    for (got, want) in r.p.iter().zip([0.5, 0.0, 0.5]) {
        assert!((got - want).abs() < 1e-12);
    }
    let r = report(&cycle(5, 1.0).unwrap());
    assert!(r.p.iter().all(|p| (p - 0.2).abs() < 1e-12));
    assert!(r.kappa.iter().all(|k| (k - 1.0).abs() < 1e-12));
    let r = report(&path(2, 1.0).unwrap());
    assert!((r.kappa[0] - 2.0).abs() < 1e-12);
    assert!((r.sigma2.unwrap()[0] - 0.25).abs() < 1e-12);
    // The star center is negatively curved: 1 - k/2.
    let r = report(&star(6, 1.0).unwrap());
    assert!((r.p[0] + 2.0).abs() < 1e-12);
}

#[test]
fn isolated_node_and_forest() {
    let g = WeightedGraph::new(4, &[(0, 1, 1.0)]).unwrap();
    let r = report(&g);
    assert_eq!(r.beta, 3);
    assert!((r.p[2] - 1.0).abs() < 1e-12 && (r.p[3] - 1.0).abs() < 1e-12);
    assert!((r.p.iter().sum::<f64>() - 3.0).abs() < 1e-12);
}

#[test]
fn trees_follow_degree_formula() {
    for seed in 0..20 {
        let g = random_tree(2 + seed as usize % 15, 0.1, 10.0, seed);
        let r = report(&g);
        for i in 0..g.n() {
            assert!((r.p[i] - (1.0 - g.degree(i) as f64 / 2.0)).abs() < 1e-9);
        }
        for (l, k) in g.links().iter().zip(&r.kappa) {
            let want = l.weight * (4.0 - (g.degree(l.i) + g.degree(l.j)) as f64);
            assert!((k - want).abs() < 1e-9 * want.abs().max(1.0));
        }
    }
}

#[test]
fn limits_on_a_cycle() {
    let g = cycle(7, 1.5).unwrap();
    let prof = effective_resistance(&g).unwrap();
    let p = node_curvature(&g, &prof);
    let kappa = link_curvature(&g, &prof, &p);
    let e = limit_node_curvature(&g, &prof, 3, &LimitSchedule::lazy()).unwrap();
    assert!((e.value - p[3]).abs() < 1e-9);
    assert!((e.slope - 1.5).abs() < 1e-6);
    let e = limit_link_curvature(&g, &prof, 0, 1, &LimitSchedule::heat()).unwrap();
    assert!((e.value - kappa[0]).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_identities(g in graph()) {
        let n = g.n();
        let prof = effective_resistance(&g).unwrap();
        let omega = prof.omega_matrix();
        let q = g.laplacian().0;
        let p = node_curvature(&g, &prof);
        let s2 = sigma_squared(&prof, &p)[0];
        let pv = DVector::from_column_slice(&p);
        let u = DVector::from_element(n, 1.0);

        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let lhs = &q * omega;
        let rhs = DMatrix::identity(n, n) * -2.0 + &pv * u.transpose() * 2.0;
        prop_assert!((lhs - rhs).amax() < 1e-8);
        prop_assert!((omega * &pv - &u * (2.0 * s2)).amax() < 1e-8 * omega.amax().max(1.0));
        let inv = &q * -0.5 + &pv * pv.transpose() / (2.0 * s2);
        prop_assert!((omega * inv - DMatrix::identity(n, n)).amax() < 1e-8);
        prop_assert!((sigma_squared_inverse(&prof).unwrap()[0] - s2).abs() < 1e-9 * s2.max(1.0));
        prop_assert!(circumcenter_residual(&prof, &p).unwrap() < 1e-8);
    }

    #[test]
    fn characterizations_agree(g in graph(), probe in any::<usize>()) {
        let prof = effective_resistance(&g).unwrap();
        let p = node_curvature(&g, &prof);
        let eq = equilibrium_curvature(&prof).unwrap();
        let pairs = neighbor_pair_curvature(&g, &prof);
        let d = distance_characterizations(&g, &prof, probe % g.n()).unwrap();
        let s2 = sigma_squared(&prof, &p)[0];
        prop_assert!((d.sigma2 - s2).abs() < 1e-9 * s2.max(1.0));
        for i in 0..g.n() {
            prop_assert!((eq[i] - p[i]).abs() < 1e-9);
            prop_assert!((pairs[i] - p[i]).abs() < 1e-9);
            if let Some(v) = d.p[i] {
                prop_assert!((v - p[i]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn scaling_weights(g in graph(), a in 0.1f64..10.0) {
        let scaled: Vec<_> = g.edge_list().into_iter().map(|(i, j, c)| (i, j, a * c)).collect();
        let h = WeightedGraph::new(g.n(), &scaled).unwrap();
        let (rg, rh) = (report(&g), report(&h));
        for (x, y) in rg.p.iter().zip(&rh.p) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        for (x, y) in rg.kappa.iter().zip(&rh.kappa) {
            prop_assert!((a * x - y).abs() < 1e-8 * y.abs().max(1.0));
        }
        for (x, y) in rg.kappa_norm.iter().zip(&rh.kappa_norm) {
            prop_assert!((x - y).abs() < 1e-8 * y.abs().max(1.0));
        }
    }

    #[test]
    fn bounds_hold(g in graph()) {
        let prof = effective_resistance(&g).unwrap();
        let p = node_curvature(&g, &prof);
        let kappa = link_curvature(&g, &prof, &p);
        prop_assert!(bounds_report(&g, &prof, &p, &kappa).all_ok());
    }

    #[test]
    fn node_curvature_range(g in graph()) {
        // Every link has c ω ≤ 1, so 1 - d/2 ≤ p < 1.
        let r = report(&g);
        for (i, p) in r.p.iter().enumerate() {
            prop_assert!(*p >= 1.0 - g.degree(i) as f64 / 2.0 - 1e-9);
            prop_assert!(*p < 1.0);
        }
    }
}

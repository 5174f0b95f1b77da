use proptest::prelude::*;
use resist_curve::generators::{
    complete_bipartite, erdos_renyi, euclidean_random_graph, hexagonal_torus, make_family, platonic, regular_tree,
    torus, triangular_torus, ErgConfig, Family, Platonic,
};

#[test]
fn family_sizes() {
    let sizes = [(Platonic::Tetrahedron, 4, 6), (Platonic::Cube, 8, 12), (Platonic::Octahedron, 6, 12),
        (Platonic::Dodecahedron, 20, 30), (Platonic::Icosahedron, 12, 30)];
    for (which, n, m) in sizes {
        let g = platonic(which, 1.0).unwrap();
        assert_eq!((g.n(), g.m()), (n, m), "{which:?}");
        let d = 2 * m / n;
        assert!((0..n).all(|i| g.degree(i) == d));
    }
    let g = torus(5, 7, 1.0).unwrap();
    assert_eq!((g.n(), g.m()), (35, 70));
    let g = triangular_torus(4, 4, 1.0).unwrap();
    assert!((0..16).all(|i| g.degree(i) == 6));
    assert!(hexagonal_torus(3, 4, 1.0).is_err());
    let g = hexagonal_torus(4, 6, 1.0).unwrap();
    assert!((0..g.n()).all(|i| g.degree(i) == 3));
    let g = complete_bipartite(2, 3, 1.0).unwrap();
    assert_eq!(g.m(), 6);
    let g = regular_tree(3, 2, 1.0).unwrap();
    assert_eq!((g.n(), g.m()), (10, 9));
    assert!(g.is_forest());
    assert_eq!(make_family(Family::Cycle(5), 2.0).unwrap().weight(0, 4), Some(2.0));
    assert!(make_family(Family::Cycle(2), 1.0).is_err());
}

#[test]
fn erdos_renyi_extremes() {
    assert_eq!(erdos_renyi(12, 0.0, 1).unwrap().m(), 0);
    assert_eq!(erdos_renyi(12, 1.0, 1).unwrap().m(), 66);
    assert!(erdos_renyi(12, 1.5, 1).is_err());
}

#[test]
fn erg_geometry() {
    let s = euclidean_random_graph(&ErgConfig::new(3.0, 1.0, 200.0, 4)).unwrap();
    for (i, x) in s.positions.iter().enumerate() {
        let norm = x[0].hypot(x[1]);
        assert!(norm <= 3.0);
        assert!((s.boundary_distances[i] - (3.0 - norm)).abs() < 1e-12);
    }
    for l in s.graph.links() {
        let (a, b) = (s.positions[l.i], s.positions[l.j]);
        assert!((a[0] - b[0]).hypot(a[1] - b[1]) <= 1.0);
        assert_eq!(l.weight, 1.0);
    }
    let fixed = euclidean_random_graph(&ErgConfig { fixed_count: true, ..ErgConfig::new(3.0, 1.0, 200.0, 4) }).unwrap();
    assert_eq!(fixed.graph.n(), 200);
    assert!(euclidean_random_graph(&ErgConfig::new(-1.0, 1.0, 10.0, 0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generators_are_deterministic(n in 2usize..40, rho in 0.0f64..1.0, seed in any::<u64>()) {
        prop_assert_eq!(erdos_renyi(n, rho, seed).unwrap().edge_list(), erdos_renyi(n, rho, seed).unwrap().edge_list());
        let cfg = ErgConfig::new(2.0, 0.7, n as f64, seed);
        let (a, b) = (euclidean_random_graph(&cfg).unwrap(), euclidean_random_graph(&cfg).unwrap());
        prop_assert_eq!(a.positions, b.positions);
        prop_assert_eq!(a.graph.edge_list(), b.graph.edge_list());
    }
}

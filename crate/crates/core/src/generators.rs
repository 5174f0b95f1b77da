//! Graph families with known curvature, plus random graph models.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rng::{rng_for, stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Platonic {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
}

impl Platonic {
    pub const ALL: [Platonic; 5] = [
        Platonic::Tetrahedron,
        Platonic::Cube,
        Platonic::Octahedron,
        Platonic::Dodecahedron,
        Platonic::Icosahedron,
    ];
}

/// Named deterministic families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    /// `K_{1,k}` with the center at node 0.
    Star(usize),
    CompleteBipartite(usize, usize),
    /// Root of degree `d`, every internal node of degree `d`, leaves at `depth`.
    RegularTree { d: usize, depth: usize },
    Torus { width: usize, height: usize },
    TriangularTorus { width: usize, height: usize },
    HexagonalTorus { width: usize, height: usize },
    Platonic(Platonic),
}

pub fn make_family(kind: Family, c: f64) -> Result<WeightedGraph> {
    match kind {
        Family::Path(n) => path(n, c),
        Family::Cycle(n) => cycle(n, c),
        Family::Complete(n) => complete(n, c),
        Family::Star(k) => star(k, c),
        Family::CompleteBipartite(a, b) => complete_bipartite(a, b, c),
        Family::RegularTree { d, depth } => regular_tree(d, depth, c),
        Family::Torus { width, height } => torus(width, height, c),
        Family::TriangularTorus { width, height } => triangular_torus(width, height, c),
        Family::HexagonalTorus { width, height } => hexagonal_torus(width, height, c),
        Family::Platonic(p) => platonic(p, c),
    }
}

fn invalid(reason: impl Into<String>) -> Error {
    Error::InvalidSize { reason: reason.into() }
}

pub fn path(n: usize, c: f64) -> Result<WeightedGraph> {
    if n < 1 {
        return Err(invalid("path needs at least one node"));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i, c)).collect();
    WeightedGraph::new(n, &edges)
}

pub fn cycle(n: usize, c: f64) -> Result<WeightedGraph> {
    if n < 3 {
        return Err(invalid("cycle needs at least three nodes"));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, c)).collect();
    WeightedGraph::new(n, &edges)
}

pub fn complete(n: usize, c: f64) -> Result<WeightedGraph> {
    if n < 1 {
        return Err(invalid("complete graph needs at least one node"));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j, c));
        }
    }
    WeightedGraph::new(n, &edges)
}

pub fn star(k: usize, c: f64) -> Result<WeightedGraph> {
    if k < 1 {
        return Err(invalid("star needs at least one leaf"));
    }
    let edges: Vec<_> = (1..=k).map(|i| (0, i, c)).collect();
    WeightedGraph::new(k + 1, &edges)
}

pub fn complete_bipartite(a: usize, b: usize, c: f64) -> Result<WeightedGraph> {
    if a < 1 || b < 1 {
        return Err(invalid("both sides of a bipartite graph need nodes"));
    }
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            edges.push((i, a + j, c));
        }
    }
    WeightedGraph::new(a + b, &edges)
}

pub fn regular_tree(d: usize, depth: usize, c: f64) -> Result<WeightedGraph> {
    if d < 2 {
        return Err(invalid("regular tree needs degree at least 2"));
    }
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let mut next_id = 1;
    for level in 0..depth {
        let children = if level == 0 { d } else { d - 1 };
        let mut next = Vec::new();
        for &parent in &frontier {
            for _ in 0..children {
                edges.push((parent, next_id, c));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    WeightedGraph::new(next_id, &edges)
}

fn torus_index(x: usize, y: usize, w: usize) -> usize {
    y * w + x
}

/// Square lattice on a `width × height` torus.
pub fn torus(width: usize, height: usize, c: f64) -> Result<WeightedGraph> {
    if width < 3 || height < 3 {
        return Err(invalid("torus sides must be at least 3"));
    }
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            let v = torus_index(x, y, width);
            edges.push((v, torus_index((x + 1) % width, y, width), c));
            edges.push((v, torus_index(x, (y + 1) % height, width), c));
        }
    }
    WeightedGraph::new(width * height, &edges)
}

/// Triangular lattice on a torus: the square torus plus one diagonal per cell.
pub fn triangular_torus(width: usize, height: usize, c: f64) -> Result<WeightedGraph> {
    if width < 3 || height < 3 {
        return Err(invalid("triangular torus sides must be at least 3"));
    }
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            let v = torus_index(x, y, width);
            edges.push((v, torus_index((x + 1) % width, y, width), c));
            edges.push((v, torus_index(x, (y + 1) % height, width), c));
            edges.push((v, torus_index((x + 1) % width, (y + 1) % height, width), c));
        }
    }
    WeightedGraph::new(width * height, &edges)
}

/// Honeycomb lattice on a torus in brick-wall form. Both sides must be even.
pub fn hexagonal_torus(width: usize, height: usize, c: f64) -> Result<WeightedGraph> {
    if width < 4 || height < 4 || width % 2 == 1 || height % 2 == 1 {
        return Err(invalid("hexagonal torus sides must be even and at least 4"));
    }
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            let v = torus_index(x, y, width);
            edges.push((v, torus_index((x + 1) % width, y, width), c));
            if (x + y) % 2 == 0 {
                edges.push((v, torus_index(x, (y + 1) % height, width), c));
            }
        }
    }
    WeightedGraph::new(width * height, &edges)
}

const ICOSAHEDRON: [(usize, usize); 30] = [
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5),
    (1, 2), (2, 3), (3, 4), (4, 5), (5, 1),
    (1, 6), (1, 7), (2, 7), (2, 8), (3, 8), (3, 9), (4, 9), (4, 10), (5, 10), (5, 6),
    (6, 7), (7, 8), (8, 9), (9, 10), (10, 6),
    (11, 6), (11, 7), (11, 8), (11, 9), (11, 10),
];

const DODECAHEDRON: [(usize, usize); 30] = [
    (0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (9, 0),
    (0, 10), (1, 11), (2, 12), (3, 13), (4, 14), (5, 15), (6, 16), (7, 17), (8, 18), (9, 19),
    (10, 12), (11, 13), (12, 14), (13, 15), (14, 16), (15, 17), (16, 18), (17, 19), (18, 10), (19, 11),
];

pub fn platonic(which: Platonic, c: f64) -> Result<WeightedGraph> {
    let (n, pairs): (usize, Vec<(usize, usize)>) = match which {
        Platonic::Tetrahedron => (4, (0..4).flat_map(|i| ((i + 1)..4).map(move |j| (i, j))).collect()),
        Platonic::Cube => (
            8,
            (0..8usize)
                .flat_map(|i| (0..3).map(move |b| (i, i ^ (1 << b))))
                .filter(|&(i, j)| i < j)
                .collect(),
        ),
        Platonic::Octahedron => (
            6,
            (0..6usize)
                .flat_map(|i| ((i + 1)..6).map(move |j| (i, j)))
                .filter(|&(i, j)| j != i + 3)
                .collect(),
        ),
        Platonic::Dodecahedron => (20, DODECAHEDRON.to_vec()),
        Platonic::Icosahedron => (12, ICOSAHEDRON.to_vec()),
    };
    let edges: Vec<_> = pairs.into_iter().map(|(i, j)| (i, j, c)).collect();
    WeightedGraph::new(n, &edges)
}

/// `G(n, ρ)` with unit weights. Pairs are visited in lexicographic order,
/// one uniform draw each.
pub fn erdos_renyi(n: usize, rho: f64, seed: u64) -> Result<WeightedGraph> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::OutOfRange { value: rho, lo: 0.0, hi: 1.0 });
    }
    let mut rng = rng_for(seed, stream::ERDOS_RENYI, 0);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < rho {
                edges.push((i, j, 1.0));
            }
        }
    }
    WeightedGraph::new(n, &edges)
}

/// Euclidean random graph on a disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErgConfig {
    pub disc_radius: f64,
    pub connection_radius: f64,
    pub expected_nodes: f64,
    pub seed: u64,
    /// Use exactly `round(expected_nodes)` points instead of a Poisson count.
    #[serde(default)]
    pub fixed_count: bool,
}

impl ErgConfig {
    pub fn new(disc_radius: f64, connection_radius: f64, expected_nodes: f64, seed: u64) -> Self {
        Self { disc_radius, connection_radius, expected_nodes, seed, fixed_count: false }
    }

    /// Point intensity `λ = N / (π R²)`.
    pub fn intensity(&self) -> f64 {
        self.expected_nodes / (std::f64::consts::PI * self.disc_radius * self.disc_radius)
    }

    pub fn validate(&self) -> Result<()> {
        for (v, name) in [
            (self.disc_radius, "disc radius"),
            (self.connection_radius, "connection radius"),
            (self.expected_nodes, "expected node count"),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// A sampled geometric graph with its embedding.
#[derive(Debug, Clone)]
pub struct ErgSample {
    pub graph: WeightedGraph,
    pub positions: Vec<[f64; 2]>,
    /// `R - ‖x_i‖` per node.
    pub boundary_distances: Vec<f64>,
}

pub fn euclidean_random_graph(cfg: &ErgConfig) -> Result<ErgSample> {
    cfg.validate()?;
    let mut rng = rng_for(cfg.seed, stream::ERG, 0);
    let count = if cfg.fixed_count {
        cfg.expected_nodes.round() as usize
    } else {
        let poisson = Poisson::new(cfg.expected_nodes).map_err(|e| invalid(e.to_string()))?;
        poisson.sample(&mut rng) as usize
    };
    let big_r = cfg.disc_radius;
    let mut positions = Vec::with_capacity(count);
    let mut boundary_distances = Vec::with_capacity(count);
    for _ in 0..count {
        let rad = big_r * rng.random::<f64>().sqrt();
        let theta = std::f64::consts::TAU * rng.random::<f64>();
        positions.push([rad * theta.cos(), rad * theta.sin()]);
        boundary_distances.push(big_r - rad);
    }
    let r2 = cfg.connection_radius * cfg.connection_radius;
    let mut edges = Vec::new();
    for i in 0..count {
        for j in (i + 1)..count {
            let dx = positions[i][0] - positions[j][0];
            let dy = positions[i][1] - positions[j][1];
            if dx * dx + dy * dy <= r2 {
                edges.push((i, j, 1.0));
            }
        }
    }
    let graph = WeightedGraph::new(count, &edges)?;
    Ok(ErgSample { graph, positions, boundary_distances })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regular(g: &WeightedGraph, d: usize) -> bool {
        (0..g.n()).all(|i| g.degree(i) == d)
    }

    #[test]
    fn simple_families() {
        let c5 = cycle(5, 1.0).unwrap();
        assert_eq!((c5.n(), c5.m()), (5, 5));
        assert!(regular(&c5, 2));
        let t = torus(4, 4, 1.0).unwrap();
        assert_eq!((t.n(), t.m()), (16, 32));
        assert!(regular(&t, 4));
        assert_eq!(star(3, 1.0).unwrap().degree(0), 3);
        let tree = regular_tree(3, 3, 1.0).unwrap();
        assert_eq!(tree.n(), 1 + 3 + 6 + 12);
        assert!(tree.is_forest());
    }

    #[test]
    fn platonic_counts() {
        for (p, n, m, d) in [
            (Platonic::Tetrahedron, 4, 6, 3),
            (Platonic::Cube, 8, 12, 3),
            (Platonic::Octahedron, 6, 12, 4),
            (Platonic::Dodecahedron, 20, 30, 3),
            (Platonic::Icosahedron, 12, 30, 5),
        ] {
            let g = platonic(p, 1.0).unwrap();
            assert_eq!((g.n(), g.m()), (n, m), "{p:?}");
            assert!(regular(&g, d), "{p:?}");
            assert_eq!(g.components().beta, 1);
        }
        let k4 = complete(4, 1.0).unwrap();
        assert_eq!(platonic(Platonic::Tetrahedron, 1.0).unwrap().edge_list(), k4.edge_list());
    }

    #[test]
    fn lattice_tori() {
        let tri = triangular_torus(4, 5, 1.0).unwrap();
        assert!(regular(&tri, 6));
        let hex = hexagonal_torus(6, 4, 1.0).unwrap();
        assert!(regular(&hex, 3));
        assert!(hexagonal_torus(5, 4, 1.0).is_err());
        assert!(cycle(2, 1.0).is_err());
    }

    #[test]
    fn erdos_renyi_extremes() {
        assert_eq!(erdos_renyi(10, 0.0, 1).unwrap().m(), 0);
        assert_eq!(erdos_renyi(10, 1.0, 1).unwrap().m(), 45);
        assert!(erdos_renyi(10, 1.5, 1).is_err());
    }

    #[test]
    fn erg_limits() {
        let mut cfg = ErgConfig::new(1.0, 2.5, 30.0, 4);
        let s = euclidean_random_graph(&cfg).unwrap();
        let n = s.graph.n();
        assert_eq!(s.graph.m(), n * (n - 1) / 2);
        cfg.connection_radius = 1e-9;
        assert_eq!(euclidean_random_graph(&cfg).unwrap().graph.m(), 0);
        for (x, d) in s.positions.iter().zip(&s.boundary_distances) {
            assert!(((x[0].hypot(x[1])) + d - 1.0).abs() < 1e-12);
        }
    }
}

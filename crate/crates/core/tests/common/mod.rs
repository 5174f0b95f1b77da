#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resist_curve::WeightedGraph;

/// Random spanning tree plus extra links with probability `extra`, weights
/// uniform in `[lo, hi]`.
pub fn random_connected(n: usize, extra: f64, lo: f64, hi: f64, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let w = |rng: &mut ChaCha8Rng| if lo == hi { lo } else { rng.random_range(lo..hi) };
    for v in 1..n {
        let u = rng.random_range(0..v);
        let c = w(&mut rng);
        edges.push((u, v, c));
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.random::<f64>() < extra && !edges.iter().any(|&(x, y, _)| (x, y) == (a, b) || (y, x) == (a, b)) {
                let c = w(&mut rng);
                edges.push((a, b, c));
            }
        }
    }
    WeightedGraph::new(n, &edges).unwrap()
}

/// Random labelled tree on `n` nodes with weights in `[lo, hi]`.
pub fn random_tree(n: usize, lo: f64, hi: f64, seed: u64) -> WeightedGraph {
    random_connected(n, 0.0, lo, hi, seed)
}

pub fn size_in(lo: usize, hi: usize, seed: u64) -> usize {
    ChaCha8Rng::seed_from_u64(seed ^ 0x5eed).random_range(lo..=hi)
}

//! The same node curvature reached four ways on a random weighted graph:
//! the defining sum, the equilibrium vector of the resistance matrix,
//! distances to a probe node, and the small-time limit of heat diffusion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resist_curve::characterizations::{distance_characterizations, limit_node_curvature, LimitSchedule};
use resist_curve::curvature::{equilibrium_curvature, node_curvature};
use resist_curve::{effective_resistance, WeightedGraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 7;
    let mut edges: Vec<(usize, usize, f64)> = (1..n).map(|v| (v - 1, v, rng.random_range(0.5..3.0))).collect();
    edges.extend([(0, 3, 1.0), (2, 6, 0.7), (1, 5, 2.2)]);
    let g = WeightedGraph::new(n, &edges)?;
    let prof = effective_resistance(&g)?;

    let p = node_curvature(&g, &prof);
    let eq = equilibrium_curvature(&prof)?;
    let dist = distance_characterizations(&g, &prof, 0)?;
    println!("node      sum   equilibrium  probe 0   heat limit   lazy slope  k/2");
    for i in 0..n {
        let heat = limit_node_curvature(&g, &prof, i, &LimitSchedule::heat())?;
        let lazy = limit_node_curvature(&g, &prof, i, &LimitSchedule::lazy())?;
        let probe = dist.p[i].map_or("    -   ".to_string(), |v| format!("{v:8.5}"));
        println!(
            "{i:>4}  {:8.5}  {:8.5}    {probe}  {:8.5}    {:8.5}  {:8.5}",
            p[i],
            eq[i],
            heat.value,
            lazy.slope,
            g.weighted_degree(i) / 2.0
        );
    }
    println!("sigma^2 from probe distances: {:.6}", dist.sigma2);
    Ok(())
}

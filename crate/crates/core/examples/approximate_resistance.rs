//! Sketched effective resistances against the exact ones on a torus.
//!
//! `cargo run --release --example approximate_resistance -- 20 0.1`

use std::time::Instant;

use resist_curve::approx::{approx_effective_resistance, ApproxConfig};
use resist_curve::generators::torus;
use resist_curve::effective_resistance;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let side: usize = args.get(1).map_or(Ok(20), |s| s.parse())?;
    let eps: f64 = args.get(2).map_or(Ok(0.1), |s| s.parse())?;
    let g = torus(side, side, 1.0)?;

    let t = Instant::now();
    let exact = effective_resistance(&g)?;
    let exact_time = t.elapsed();

    let cfg = ApproxConfig::new(eps, 7);
    let t = Instant::now();
    let approx = approx_effective_resistance(&g, &cfg)?;
    let approx_time = t.elapsed();

    let ratios: Vec<f64> = approx.link_omega.iter().zip(&exact.link_omega).map(|(a, e)| a / e).collect();
    let inside = ratios.iter().filter(|r| (*r - 1.0).abs() <= eps).count();
    let worst = ratios.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
    println!("torus {side}x{side}: n = {}, m = {}, sketch rows = {}", g.n(), g.m(), cfg.dimension(g.n()));
    println!("exact {exact_time:.2?}, sketched {approx_time:.2?}");
    println!("{inside}/{} links within 1 ± {eps}, worst relative error {worst:.4}", ratios.len());
    Ok(())
}

//! Node curvature of Euclidean random graphs against the distance to the
//! disc boundary, with the straight-boundary model for comparison.
//!
//! `cargo run --release --example erg_boundary_profile -- 20`

use resist_curve::erg::monte_carlo_profile;
use resist_curve::generators::ErgConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let samples: usize = std::env::args().nth(1).map_or(Ok(8), |s| s.parse())?;
    let cfg = ErgConfig::new(4.0, 1.0, 800.0, 1);
    let bins = monte_carlo_profile(&cfg, samples, 20)?;
    println!("  D/r     mean p    model    nodes");
    for (b, c) in bins.centers().iter().enumerate() {
        if bins.count[b] > 0 {
            println!("{c:6.2}  {:8.4}  {:8.4}  {:6}", bins.mean[b], bins.model[b], bins.count[b]);
        }
    }
    println!("bulk (D >= 2r): {:.4} ± {:.4} over {} nodes", bins.bulk_mean, bins.bulk_std_err, bins.bulk_count);
    println!("largest gap to the model {:.4}", bins.sup_model_gap());
    Ok(())
}

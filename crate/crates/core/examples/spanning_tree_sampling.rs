//! Wilson's algorithm against Kirchhoff: link inclusion frequencies match
//! the relative resistances `c ω`, and the mean tree curvature `1 - d/2`
//! matches the node curvature.
//!
//! `cargo run --release --example spanning_tree_sampling -- 200000`

use resist_curve::effective_resistance;
use resist_curve::generators::complete_bipartite;
use resist_curve::trees::{tree_chi_square, tree_report};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let samples: u64 = std::env::args().nth(1).map_or(Ok(100_000), |s| s.parse())?;
    let g = complete_bipartite(2, 3, 1.0)?.with_link(0, 1, 2.0)?;
    let prof = effective_resistance(&g)?;
    let report = tree_report(&g, &prof, samples, 1)?;
    println!("link      c*omega   frequency   3 sigma");
    for l in &report.links {
        println!("({}, {})   {:8.5}   {:8.5}   {:8.5}  {}", l.i, l.j, l.relative, l.empirical, 3.0 * l.sigma, l.pass);
    }
    println!("node      p        tree mean   std err");
    for v in &report.nodes {
        println!("{:>4}   {:8.5}   {:8.5}   {:8.5}  {}", v.node, v.p, v.mean, v.std_err, v.pass);
    }
    let chi = tree_chi_square(&g, samples, 2)?;
    println!("{} trees, chi^2 = {:.2} on {} dof, p-value {:.3}", chi.trees, chi.statistic, chi.dof, chi.p_value);
    Ok(())
}

//! Forman and Ollivier curvature bracket the resistance curvature on unweighted
//! graphs: κ_FR/ω ≤ κ ≤ κ_OR. On a tree all three coincide.

use resist_curve::effective_resistance;
use resist_curve::generators::{erdos_renyi, platonic, regular_tree, Platonic};
use resist_curve::reference::{compare_links, OllivierSchedule};
use resist_curve::WeightedGraph;

fn table(name: &str, g: &WeightedGraph) -> resist_curve::Result<()> {
    let prof = effective_resistance(g)?;
    let rows = compare_links(g, &prof, &OllivierSchedule::default(), 1e-6)?;
    let ok = rows.iter().filter(|r| r.sandwich_ok).count();
    println!("{name}: {ok}/{} links ordered", rows.len());
    println!("     i   j    FR/omega     kappa      OR");
    for r in rows.iter().take(6) {
        println!("  {:>4}{:>4}  {:>9.4}  {:>9.4}  {:>9.4}", r.i, r.j, r.kappa_fr_over_omega, r.kappa, r.kappa_or);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    table("binary tree", &regular_tree(3, 2, 1.0)?)?;
    table("icosahedron", &platonic(Platonic::Icosahedron, 1.0)?)?;
    let g = erdos_renyi(14, 0.35, 2)?;
    if g.components().beta == 1 {
        table("G(14, 0.35)", &g)?;
    }
    Ok(())
}

//! Node and link curvature of a few small graphs, or of an edge-list file.
//!
//! `cargo run --example compute_curvature -- [graph.txt]`

use resist_curve::curvature::CurvatureReport;
use resist_curve::generators::{cycle, path, platonic, star, Platonic};
use resist_curve::io::read_graph;
use resist_curve::{effective_resistance, WeightedGraph};

fn show(name: &str, g: &WeightedGraph) -> resist_curve::Result<()> {
    let prof = effective_resistance(g)?;
    let r = CurvatureReport::new(g, &prof);
    println!("{name}: n = {}, m = {}, components = {}", g.n(), g.m(), r.beta);
    let p: Vec<String> = r.p.iter().map(|x| format!("{x:.4}")).collect();
    println!("  p = [{}]", p.join(", "));
    for (l, k) in r.links.iter().zip(&r.kappa).take(8) {
        println!("  kappa({}, {}) = {k:.4}  omega = {:.4}", l.i, l.j, prof.omega(l.i, l.j));
    }
    if let Some(s2) = &r.sigma2 {
        println!("  sigma^2 = {:.4}", s2[0]);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    if let Some(file) = std::env::args().nth(1) {
        let f = read_graph(file.as_ref())?;
        show(&file, &f.graph)?;
        return Ok(());
    }
    show("path 4", &path(4, 1.0)?)?;
    show("cycle 5", &cycle(5, 1.0)?)?;
    show("star K1,4", &star(4, 1.0)?)?;
    show("cube", &platonic(Platonic::Cube, 1.0)?)?;
    Ok(())
}

//! Resistance curvature on weighted graphs.
//!
//! Node curvature `p_i = 1 - ½ Σ_{j~i} c_ij ω_ij` and link curvature
//! `κ_ij = 2 (p_i + p_j) / ω_ij` built on effective resistances `ω`, with
//! the tools to check them: reference curvatures, random spanning trees,
//! the associated Ricci flow and random-graph experiments.

pub mod approx;
pub mod bounds;
pub mod characterizations;
pub mod cli;
pub mod curvature;
pub mod erg;
pub mod error;
pub mod experiments;
pub mod export;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod reference;
pub mod resistance;
pub mod rng;
pub mod transport;
pub mod trees;

pub use error::{Error, Result};
pub use graph::{ComponentInfo, Laplacian, Link, WeightedGraph};
pub use resistance::{effective_resistance, ResistanceProfile};

//! Graph file formats.
//!
//! Edge lists hold one `i j c` triple per line (`c` defaults to 1), with
//! `#` starting a comment. Node tokens that are not all non-negative
//! integers are treated as labels and numbered in order of appearance.
//! The JSON form is `{"n": 3, "links": [[0, 1, 1.0], ...]}` with an
//! optional `geometry` object.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::ErgSample;
use crate::graph::WeightedGraph;

/// Node embedding carried by geometric graphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub positions: Vec<[f64; 2]>,
    pub boundary_distances: Vec<f64>,
}

/// A parsed graph with whatever extra data the file carried.
#[derive(Debug, Clone)]
pub struct GraphFile {
    pub graph: WeightedGraph,
    pub labels: Option<Vec<String>>,
    pub geometry: Option<Geometry>,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    n: usize,
    links: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    geometry: Option<Geometry>,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_edge_list(text: &str) -> Result<GraphFile> {
    let mut rows: Vec<(usize, &str, &str, f64)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tok: Vec<&str> = body.split_whitespace().collect();
        if tok.len() != 2 && tok.len() != 3 {
            return Err(parse_error(line, format!("expected `i j [c]`, found {} fields", tok.len())));
        }
        let w = match tok.get(2) {
            Some(s) => s.parse::<f64>().map_err(|_| parse_error(line, format!("bad weight `{s}`")))?,
            None => 1.0,
        };
        if !(w > 0.0 && w.is_finite()) {
            return Err(parse_error(line, format!("weight must be positive and finite, got {w}")));
        }
        rows.push((line, tok[0], tok[1], w));
    }

    let numeric = rows.iter().all(|r| r.1.parse::<usize>().is_ok() && r.2.parse::<usize>().is_ok());
    let mut edges = Vec::with_capacity(rows.len());
    let labels = if numeric {
        for &(_, a, b, w) in &rows {
            edges.push((a.parse().unwrap(), b.parse().unwrap(), w));
        }
        None
    } else {
        let mut ids: HashMap<&str, usize> = HashMap::new();
        let mut names = Vec::new();
        for &(_, a, b, w) in &rows {
            let mut id = |s| {
                *ids.entry(s).or_insert_with(|| {
                    names.push(s.to_string());
                    names.len() - 1
                })
            };
            let (x, y) = (id(a), id(b));
            edges.push((x, y, w));
        }
        Some(names)
    };
    for (&(line, ..), &(a, b, _)) in rows.iter().zip(&edges) {
        if a == b {
            return Err(parse_error(line, format!("self-loop at node {a}")));
        }
    }
    let graph = WeightedGraph::from_edges(&edges)?;
    Ok(GraphFile { graph, labels, geometry: None })
}

pub fn parse_json_graph(text: &str) -> Result<GraphFile> {
    let j: JsonGraph = serde_json::from_str(text).map_err(|e| parse_error(e.line(), e.to_string()))?;
    let graph = WeightedGraph::new(j.n, &j.links)?;
    if let Some(geo) = &j.geometry {
        if geo.positions.len() != j.n || geo.boundary_distances.len() != j.n {
            return Err(parse_error(0, "geometry must have one entry per node"));
        }
    }
    Ok(GraphFile { graph, labels: None, geometry: j.geometry })
}

/// Reads a `.json` graph or an edge list, chosen by extension.
pub fn read_graph(path: &Path) -> Result<GraphFile> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        parse_json_graph(&text)
    } else {
        parse_edge_list(&text)
    }
}

pub fn edge_list_string(g: &WeightedGraph) -> String {
    g.links().iter().map(|l| format!("{} {} {}\n", l.i, l.j, l.weight)).collect()
}

pub fn json_graph_string(g: &WeightedGraph, geometry: Option<&Geometry>) -> String {
    let j = JsonGraph { n: g.n(), links: g.edge_list(), geometry: geometry.cloned() };
    serde_json::to_string_pretty(&j).expect("graph serializes")
}

impl From<&ErgSample> for Geometry {
    fn from(s: &ErgSample) -> Self {
        Self { positions: s.positions.clone(), boundary_distances: s.boundary_distances.clone() }
    }
}

//! Exact optimal transport between two small discrete distributions.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Optimal plan `P` (rows follow `mu`, columns follow `nu`) and its cost.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    pub entries: DMatrix<f64>,
    pub cost: f64,
}

const EPS: f64 = 1e-14;

struct Arc {
    to: usize,
    cap: f64,
    cost: f64,
}

struct Network {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl Network {
    fn new(n: usize) -> Self {
        Self { arcs: Vec::new(), out: vec![Vec::new(); n] }
    }

    fn add(&mut self, from: usize, to: usize, cap: f64, cost: f64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, cost });
        self.out[from].push(id);
        self.arcs.push(Arc { to: from, cap: 0.0, cost: -cost });
        self.out[to].push(id + 1);
        id
    }
}

/// Minimum-cost transport from `mu` to `nu` under `cost`, solved exactly by
/// successive shortest augmenting paths on the bipartite network.
pub fn wasserstein1(mu: &[f64], nu: &[f64], cost: &DMatrix<f64>) -> Result<TransportPlan> {
    let (a, b) = (mu.len(), nu.len());
    if cost.nrows() != a || cost.ncols() != b {
        return Err(Error::InfeasibleMarginals {
            reason: format!("cost is {}x{} for marginals of length {a} and {b}", cost.nrows(), cost.ncols()),
        });
    }
    if mu.iter().chain(nu).any(|x| !(*x >= 0.0)) {
        return Err(Error::InfeasibleMarginals { reason: "negative mass".into() });
    }
    if cost.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
        return Err(Error::InfeasibleMarginals { reason: "cost must be finite and nonnegative".into() });
    }
    let (sa, sb): (f64, f64) = (mu.iter().sum(), nu.iter().sum());
    if (sa - sb).abs() > 1e-9 * sa.max(sb).max(1.0) {
        return Err(Error::InfeasibleMarginals { reason: format!("masses differ: {sa} vs {sb}") });
    }

    let source = 0;
    let sink = a + b + 1;
    let nodes = a + b + 2;
    let mut net = Network::new(nodes);
    for (x, &m) in mu.iter().enumerate() {
        net.add(source, 1 + x, m, 0.0);
    }
    for (y, &m) in nu.iter().enumerate() {
        net.add(1 + a + y, sink, m, 0.0);
    }
    let big = sa.max(sb) * 2.0 + 1.0;
    let mut middle = vec![vec![0usize; b]; a];
    for x in 0..a {
        for y in 0..b {
            middle[x][y] = net.add(1 + x, 1 + a + y, big, cost[(x, y)]);
        }
    }

    let mut potential = vec![0.0; nodes];
    let mut remaining = sa.min(sb);
    let tol = EPS * sa.max(1.0);
    let mut rounds = 0;
    while remaining > tol {
        rounds += 1;
        if rounds > 4 * (a + b + 2) * (a + b + 2) {
            return Err(Error::InfeasibleMarginals { reason: "augmentation did not terminate".into() });
        }
        // Dense Dijkstra on reduced costs.
        let mut dist = vec![f64::INFINITY; nodes];
        let mut prev = vec![usize::MAX; nodes];
        let mut done = vec![false; nodes];
        dist[source] = 0.0;
        loop {
            let mut u = usize::MAX;
            for v in 0..nodes {
                if !done[v] && dist[v].is_finite() && (u == usize::MAX || dist[v] < dist[u]) {
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            for &id in &net.out[u] {
                let arc = &net.arcs[id];
                if arc.cap <= tol {
                    continue;
                }
                let reduced = (arc.cost + potential[u] - potential[arc.to]).max(0.0);
                let nd = dist[u] + reduced;
                if nd < dist[arc.to] {
                    dist[arc.to] = nd;
                    prev[arc.to] = id;
                }
            }
        }
        if !dist[sink].is_finite() {
            return Err(Error::InfeasibleMarginals { reason: "no augmenting path".into() });
        }
        for v in 0..nodes {
            if dist[v].is_finite() {
                potential[v] += dist[v];
            }
        }
        let mut push = remaining;
        let mut v = sink;
        while v != source {
            let id = prev[v];
            push = push.min(net.arcs[id].cap);
            v = net.arcs[id ^ 1].to;
        }
        let mut v = sink;
        while v != source {
            let id = prev[v];
            net.arcs[id].cap -= push;
            net.arcs[id ^ 1].cap += push;
            v = net.arcs[id ^ 1].to;
        }
        remaining -= push;
    }

    let entries = DMatrix::from_fn(a, b, |x, y| net.arcs[middle[x][y] ^ 1].cap);
    let total = entries.iter().zip(cost.iter()).map(|(p, c)| p * c).sum();
    Ok(TransportPlan { entries, cost: total })
}

//! Node and link resistance curvature and the `σ²` invariant.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Link, WeightedGraph};
use crate::linalg;
use crate::resistance::ResistanceProfile;

/// `p_i = 1 - ½ Σ_{j~i} c_ij ω_ij`; isolated nodes get 1.
pub fn node_curvature(g: &WeightedGraph, profile: &ResistanceProfile) -> Vec<f64> {
    let mut p = vec![1.0; g.n()];
    for (l, rel) in g.links().iter().zip(&profile.relative) {
        p[l.i] -= 0.5 * rel;
        p[l.j] -= 0.5 * rel;
    }
    p
}

/// `κ_ij = 2 (p_i + p_j) / ω_ij` per link.
pub fn link_curvature(g: &WeightedGraph, profile: &ResistanceProfile, p: &[f64]) -> Vec<f64> {
    g.links()
        .iter()
        .zip(&profile.link_omega)
        .map(|(l, w)| 2.0 * (p[l.i] + p[l.j]) / w)
        .collect()
}

/// `2 (p_i / k_i + p_j / k_j) / ω_ij` per link.
pub fn normalized_link_curvature(g: &WeightedGraph, profile: &ResistanceProfile, p: &[f64]) -> Vec<f64> {
    let k: Vec<f64> = (0..g.n()).map(|i| g.weighted_degree(i)).collect();
    g.links()
        .iter()
        .zip(&profile.link_omega)
        .map(|(l, w)| {
            debug_assert!(k[l.i] > 0.0 && k[l.j] > 0.0, "link endpoints have positive degree");
            2.0 * (p[l.i] / k[l.i] + p[l.j] / k[l.j]) / w
        })
        .collect()
}

fn component_vector(v: &[f64], members: &[usize]) -> DVector<f64> {
    DVector::from_iterator(members.len(), members.iter().map(|&i| v[i]))
}

/// `σ² = ½ pᵀ Ω p` for each component.
pub fn sigma_squared(profile: &ResistanceProfile, p: &[f64]) -> Vec<f64> {
    let omega = profile.omega_matrix();
    profile
        .members()
        .iter()
        .map(|m| {
            let pc = component_vector(p, m);
            0.5 * pc.dot(&(linalg::gather(omega, m) * &pc))
        })
        .collect()
}

/// `σ² = 1 / (2 uᵀ Ω⁻¹ u)` for each component (0 for single nodes).
pub fn sigma_squared_inverse(profile: &ResistanceProfile) -> Result<Vec<f64>> {
    let omega = profile.omega_matrix();
    profile
        .members()
        .iter()
        .map(|m| {
            if m.len() == 1 {
                return Ok(0.0);
            }
            let x = solve_ones(&linalg::gather(omega, m))?;
            Ok(1.0 / (2.0 * x.sum()))
        })
        .collect()
}

fn solve_ones(omega: &DMatrix<f64>) -> Result<DVector<f64>> {
    let n = omega.nrows();
    let x = omega
        .clone()
        .lu()
        .solve(&DVector::from_element(n, 1.0))
        .ok_or(Error::SingularOmega { size: n })?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularOmega { size: n });
    }
    Ok(x)
}

/// `p = Ω⁻¹u / (uᵀΩ⁻¹u)` per component.
pub fn equilibrium_curvature(profile: &ResistanceProfile) -> Result<Vec<f64>> {
    let omega = profile.omega_matrix();
    let mut p = vec![1.0; profile.n];
    for m in profile.members() {
        if m.len() == 1 {
            continue;
        }
        let x = solve_ones(&linalg::gather(omega, &m))?;
        let s = x.sum();
        for (a, &i) in m.iter().enumerate() {
            p[i] = x[a] / s;
        }
    }
    Ok(p)
}

/// `½ fᵀ Ω f` for a probability vector `f`. Mass split across components
/// gives an infinite value.
pub fn variance(profile: &ResistanceProfile, f: &[f64]) -> Result<f64> {
    if f.len() != profile.n {
        return Err(Error::NotADistribution { reason: format!("length {} for {} nodes", f.len(), profile.n) });
    }
    if let Some(x) = f.iter().find(|x| !(**x >= 0.0)) {
        return Err(Error::NotADistribution { reason: format!("entry {x} is negative") });
    }
    let total: f64 = f.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotADistribution { reason: format!("entries sum to {total}") });
    }
    let omega = profile.omega_matrix();
    let support: Vec<usize> = (0..f.len()).filter(|&i| f[i] > 0.0).collect();
    let mut s = 0.0;
    for &i in &support {
        for &j in &support {
            if i != j {
                s += f[i] * f[j] * omega[(i, j)];
            }
        }
    }
    Ok(0.5 * s)
}

/// Node and link curvatures of one graph.
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureReport {
    pub links: Vec<Link>,
    pub p: Vec<f64>,
    pub kappa: Vec<f64>,
    pub kappa_norm: Vec<f64>,
    /// Per component; only available from exact resistances.
    pub sigma2: Option<Vec<f64>>,
    pub beta: usize,
    pub epsilon: Option<f64>,
}

impl CurvatureReport {
    pub fn new(g: &WeightedGraph, profile: &ResistanceProfile) -> Self {
        let p = node_curvature(g, profile);
        let kappa = link_curvature(g, profile, &p);
        let kappa_norm = normalized_link_curvature(g, profile, &p);
        let sigma2 = profile.is_exact().then(|| sigma_squared(profile, &p));
        Self {
            links: g.links().to_vec(),
            p,
            kappa,
            kappa_norm,
            sigma2,
            beta: profile.beta,
            epsilon: profile.epsilon,
        }
    }

    pub fn mean_kappa(&self) -> Option<f64> {
        (!self.kappa.is_empty()).then(|| self.kappa.iter().sum::<f64>() / self.kappa.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, path, star};
    use crate::resistance::effective_resistance;

    fn report(g: &WeightedGraph) -> CurvatureReport {
        CurvatureReport::new(g, &effective_resistance(g).unwrap())
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn path_three() {
        let r = report(&path(3, 1.0).unwrap());
        assert!(close(r.p[0], 0.5) && close(r.p[1], 0.0) && close(r.p[2], 0.5));
    }

    #[test]
    fn cycles() {
        for n in [3, 5, 8] {
            let r = report(&cycle(n, 1.0).unwrap());
            assert!(r.p.iter().all(|&x| close(x, 1.0 / n as f64)));
            assert!(r.kappa.iter().all(|&k| close(k, 4.0 / (n - 1) as f64)));
        }
        let r = report(&cycle(3, 1.0).unwrap());
        assert!(r.kappa_norm.iter().all(|&k| close(k, 1.0)));
    }

    #[test]
    fn star_three() {
        let r = report(&star(3, 1.0).unwrap());
        assert!(close(r.p[0], -0.5));
        assert!(r.p[1..].iter().all(|&x| close(x, 0.5)));
        assert!(r.kappa.iter().all(|&k| close(k, 0.0)));
        assert!(r.kappa_norm.iter().all(|&k| close(k, 2.0 / 3.0)));
    }

    #[test]
    fn single_edge() {
        let g = path(2, 1.0).unwrap();
        let prof = effective_resistance(&g).unwrap();
        let r = CurvatureReport::new(&g, &prof);
        assert!(close(r.kappa[0], 2.0) && close(r.kappa_norm[0], 2.0));
        assert!(close(r.sigma2.as_ref().unwrap()[0], 0.25));
        assert!(close(sigma_squared_inverse(&prof).unwrap()[0], 0.25));
        let eq = equilibrium_curvature(&prof).unwrap();
        assert!(close(eq[0], 0.5) && close(eq[1], 0.5));
        assert!(close(variance(&prof, &[0.5, 0.5]).unwrap(), 0.25));
        assert_eq!(variance(&prof, &[1.0, 0.0]).unwrap(), 0.0);
        assert!(variance(&prof, &[0.7, 0.7]).is_err());
        assert!(variance(&prof, &[1.5, -0.5]).is_err());
    }

    #[test]
    fn triangle_sigma() {
        let prof = effective_resistance(&cycle(3, 1.0).unwrap()).unwrap();
        let p = vec![1.0 / 3.0; 3];
        let want = 0.5 * (1.0 / 9.0) * 6.0 * (2.0 / 3.0);
        assert!(close(sigma_squared(&prof, &p)[0], want));
        assert!(close(sigma_squared_inverse(&prof).unwrap()[0], want));
    }

    #[test]
    fn isolated_nodes() {
        let g = WeightedGraph::new(3, &[(0, 1, 2.0)]).unwrap();
        let prof = effective_resistance(&g).unwrap();
        let p = node_curvature(&g, &prof);
        assert_eq!(p[2], 1.0);
        assert!(close(p.iter().sum::<f64>(), 2.0));
        assert_eq!(equilibrium_curvature(&prof).unwrap()[2], 1.0);
    }
}

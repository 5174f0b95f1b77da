//! Dense helpers shared by the exact resistance code and the flow.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::{ComponentInfo, Laplacian};

/// Moore-Penrose pseudoinverse of a graph Laplacian, one connected block
/// at a time: `(Q_c + J/n_c)^-1 - J/n_c`.
pub fn pseudoinverse(q: &Laplacian) -> Result<DMatrix<f64>> {
    block_pseudoinverse(q.matrix())
}

/// Same construction for any symmetric zero-row-sum matrix whose blocks have
/// a one-dimensional kernel. Blocks follow the nonzero off-diagonal pattern.
pub fn block_pseudoinverse(q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let comps = ComponentInfo::of_matrix(q);
    let mut out = DMatrix::zeros(q.nrows(), q.ncols());
    for members in comps.members() {
        let inv = component_pseudoinverse(q, &members)?;
        scatter(&mut out, &members, &inv);
    }
    Ok(out)
}

/// Pseudoinverse of the principal block of `q` on `members`.
pub fn component_pseudoinverse(q: &DMatrix<f64>, members: &[usize]) -> Result<DMatrix<f64>> {
    let nc = members.len();
    let shift = 1.0 / nc as f64;
    let block = DMatrix::from_fn(nc, nc, |a, b| q[(members[a], members[b])] + shift);
    let inv = match block.clone().cholesky() {
        Some(ch) => ch.inverse(),
        None => block.try_inverse().ok_or(Error::SingularBlock { size: nc })?,
    };
    if inv.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularBlock { size: nc });
    }
    Ok(inv.map(|x| x - shift))
}

pub fn gather(m: &DMatrix<f64>, members: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(members.len(), members.len(), |a, b| m[(members[a], members[b])])
}

pub fn scatter(dst: &mut DMatrix<f64>, members: &[usize], block: &DMatrix<f64>) {
    for (a, &i) in members.iter().enumerate() {
        for (b, &j) in members.iter().enumerate() {
            dst[(i, j)] = block[(a, b)];
        }
    }
}

/// Resistance matrix from a pseudoinverse: `ω_ij = P_ii + P_jj - 2 P_ij`.
pub fn omega_from_pinv(p: &DMatrix<f64>) -> DMatrix<f64> {
    let n = p.nrows();
    DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { p[(i, i)] + p[(j, j)] - 2.0 * p[(i, j)] })
}

/// Node curvature of a generalized Laplacian block: `p_i = 1 + ½ Σ_j Q_ij ω_ij`.
pub fn curvature_from_q(q: &DMatrix<f64>, omega: &DMatrix<f64>) -> DVector<f64> {
    let n = q.nrows();
    DVector::from_fn(n, |i, _| {
        let mut s = 0.0;
        for j in 0..n {
            if j != i {
                s += q[(i, j)] * omega[(i, j)];
            }
        }
        1.0 + 0.5 * s
    })
}

pub fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let a = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = a;
            m[(j, i)] = a;
        }
    }
}

/// Resets each diagonal entry so that rows sum to zero.
pub fn project_row_sums(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            if j != i {
                s += m[(i, j)];
            }
        }
        m[(i, i)] = -s;
    }
}

/// Largest absolute eigenvalue of a symmetric matrix.
pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &x| acc.max(x.abs()))
}

/// Maximum entrywise absolute value.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    #[test]
    fn single_edge_pinv() {
        let g = WeightedGraph::new(2, &[(0, 1, 1.0)]).unwrap();
        let p = pseudoinverse(&g.laplacian()).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[0.25, -0.25, -0.25, 0.25]);
        assert!((p - want).abs().max() < 1e-14);
    }

    #[test]
    fn zero_matrix_pinv() {
        let g = WeightedGraph::new(3, &[]).unwrap();
        let p = pseudoinverse(&g.laplacian()).unwrap();
        assert!(p.abs().max() < 1e-15);
    }

    #[test]
    fn triangle_projection() {
        let g = WeightedGraph::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        let q = g.laplacian().0;
        let p = pseudoinverse(&g.laplacian()).unwrap();
        let proj = DMatrix::from_fn(3, 3, |i, j| if i == j { 2.0 / 3.0 } else { -1.0 / 3.0 });
        assert!((&p * &q - &proj).abs().max() < 1e-10);
        assert!((&q * &p - &proj).abs().max() < 1e-10);
    }

    #[test]
    fn two_blocks() {
        let g = WeightedGraph::new(4, &[(0, 2, 2.0), (1, 3, 0.5)]).unwrap();
        let p = pseudoinverse(&g.laplacian()).unwrap();
        assert!((p[(0, 0)] - 0.125).abs() < 1e-14);
        assert!((p[(1, 1)] - 0.5).abs() < 1e-14);
        assert_eq!(p[(0, 1)], 0.0);
    }
}

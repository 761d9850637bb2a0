//! Dense linear-algebra helpers shared by the metric modules.
//!
//! Everything here works on `nalgebra::DMatrix<f64>`. Inverses go through a
//! Cholesky factorization when the matrix is symmetric positive definite and
//! fall back to LU otherwise; every inverse is guarded by a 1-norm condition
//! estimate.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Condition-number ceiling beyond which a solve is reported as a numerical failure.
pub const CONDITION_LIMIT: f64 = 1e14;

/// A square matrix whose rows and columns stay attached to vertex identities.
///
/// Removing a vertex keeps the remaining vertex ids in order, so `row_of(v)`
/// still finds the row belonging to vertex `v` after extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexMatrix {
    ids: Vec<usize>,
    entries: DMatrix<f64>,
}

impl VertexMatrix {
    pub fn new(entries: DMatrix<f64>) -> Self {
        assert!(entries.is_square(), "vertex matrix must be square");
        let ids = (0..entries.nrows()).collect();
        Self { ids, entries }
    }

    pub fn order(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    /// Position of vertex `v` among the remaining rows, if present.
    pub fn row_of(&self, v: usize) -> Option<usize> {
        self.ids.iter().position(|&id| id == v)
    }

    /// Entry indexed by vertex ids.
    pub fn get(&self, u: usize, v: usize) -> Option<f64> {
        Some(self.entries[(self.row_of(u)?, self.row_of(v)?)])
    }

    /// Principal submatrix with vertex `v` removed.
    pub fn without(&self, v: usize) -> Option<VertexMatrix> {
        let pos = self.row_of(v)?;
        let mut ids = self.ids.clone();
        ids.remove(pos);
        Some(VertexMatrix {
            ids,
            entries: remove_vertex(&self.entries, pos),
        })
    }
}

/// Removes row `row` and column `col`.
pub fn remove_row_col(m: &DMatrix<f64>, row: usize, col: usize) -> DMatrix<f64> {
    m.clone().remove_row(row).remove_column(col)
}

/// Principal submatrix with row and column `j` removed.
pub fn remove_vertex(m: &DMatrix<f64>, j: usize) -> DMatrix<f64> {
    remove_row_col(m, j, j)
}

/// Vector with entry `j` removed.
pub fn remove_entry(v: &DVector<f64>, j: usize) -> DVector<f64> {
    v.clone().remove_row(j)
}

/// Index of vertex `i` in a vector or matrix from which vertex `j` was removed.
pub fn reduced_index(i: usize, j: usize) -> usize {
    debug_assert_ne!(i, j);
    if i < j {
        i
    } else {
        i - 1
    }
}

pub fn norm_one(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn norm_inf(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Largest absolute entrywise difference.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

/// `max|a - b| / max|b|`, falling back to the absolute difference when `b` is zero.
pub fn relative_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let scale = max_abs(b);
    let diff = max_abs_diff(a, b);
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

pub fn is_symmetric(m: &DMatrix<f64>, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let scale = max_abs(m).max(1.0);
    (0..m.nrows()).all(|i| (0..i).all(|j| (m[(i, j)] - m[(j, i)]).abs() <= tol * scale))
}

/// Inverse of a square matrix with a condition guard.
///
/// Cholesky is tried first; the LU path handles indefinite or nonsymmetric input.
pub fn inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    assert!(m.is_square());
    let inv = if is_symmetric(m, 0.0) {
        match m.clone().cholesky() {
            Some(ch) => ch.inverse(),
            None => lu_inverse(m)?,
        }
    } else {
        lu_inverse(m)?
    };
    let cond = norm_one(m) * norm_one(&inv);
    if !cond.is_finite() {
        return Err(Error::Singular);
    }
    if cond > CONDITION_LIMIT {
        return Err(Error::IllConditioned(cond));
    }
    Ok(inv)
}

fn lu_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    m.clone().lu().try_inverse().ok_or(Error::Singular)
}

/// Solves `m x = b` through the guarded inverse.
pub fn solve(m: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    Ok(inverse(m)? * b)
}

/// Sign and log-magnitude of the determinant, from an LU factorization.
///
/// Returns `(0.0, -inf)` for an exactly singular matrix.
pub fn log_det(m: &DMatrix<f64>) -> (f64, f64) {
    assert!(m.is_square());
    if m.nrows() == 0 {
        return (1.0, 0.0);
    }
    let lu = m.clone().lu();
    let mut sign: f64 = lu.p().determinant();
    let mut log_abs = 0.0;
    for d in lu.u().diagonal().iter() {
        if *d == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        sign *= d.signum();
        log_abs += d.abs().ln();
    }
    (sign, log_abs)
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Spectral radius of a symmetric matrix; zero for the empty matrix.
pub fn symmetric_spectral_radius(m: &DMatrix<f64>) -> f64 {
    symmetric_eigenvalues(m)
        .iter()
        .fold(0.0, |acc: f64, x| acc.max(x.abs()))
}

/// Centering operator `I - 11ᵀ/n`.
pub fn centering(n: usize) -> DMatrix<f64> {
    DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn submatrix_keeps_vertex_ids() {
        let m = DMatrix::from_fn(4, 4, |i, j| (10 * i + j) as f64);
        let vm = VertexMatrix::new(m);
        let sub = vm.without(1).unwrap();
        assert_eq!(sub.ids(), &[0, 2, 3]);
        assert_eq!(sub.get(2, 3), Some(23.0));
        assert_eq!(sub.get(1, 3), None);
        let sub2 = sub.without(3).unwrap();
        assert_eq!(sub2.get(2, 0), Some(20.0));
        assert_eq!(sub2.order(), 2);
    }

    #[test]
    fn inverse_of_two_by_two() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]);
        let inv = inverse(&m).unwrap();
        assert_relative_eq!(inv[(0, 0)], 2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(inv[(0, 1)], 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        assert!(matches!(
            inverse(&m),
            Err(Error::Singular) | Err(Error::IllConditioned(_))
        ));
    }

    #[test]
    fn log_det_tracks_sign() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 3.0, 0.0]);
        let (sign, log_abs) = log_det(&m);
        assert_eq!(sign, -1.0);
        assert_relative_eq!(log_abs, 6f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn reduced_index_skips_removed() {
        assert_eq!(reduced_index(0, 2), 0);
        assert_eq!(reduced_index(3, 2), 2);
    }
}

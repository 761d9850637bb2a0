//! Perron root and Perron vector of symmetric nonnegative irreducible matrices.
//!
//! Small matrices (n <= 64) use a full symmetric eigendecomposition; larger
//! ones use shifted power iteration. Irreducibility is not checked
//! spectrally: callers pass adjacency matrices of connected graphs.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;

/// Largest order handled by the dense eigensolver.
pub const EIGEN_CUTOFF: usize = 64;
const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    /// Perron root ρ.
    pub rho: f64,
    /// Perron vector, positive with unit 1-norm.
    pub p: DVector<f64>,
    /// `p / ‖p‖₂`.
    pub p_tilde: DVector<f64>,
    /// `√n · p / ‖p‖₂`; its squared 2-norm is `n`.
    pub p_prime: DVector<f64>,
}

impl SpectralData {
    fn from_root_and_vector(rho: f64, v: DVector<f64>) -> Self {
        let n = v.len() as f64;
        let p = &v / v.sum();
        let p_tilde = &p / p.norm();
        let p_prime = &p_tilde * n.sqrt();
        Self {
            rho,
            p,
            p_tilde,
            p_prime,
        }
    }

    pub fn order(&self) -> usize {
        self.p.len()
    }

    /// `diag(p)`.
    pub fn p_diag(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.p)
    }

    /// `diag(p′)`.
    pub fn p_prime_diag(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.p_prime)
    }

    /// Eigenprojection `p̃p̃ᵀ` onto the Perron direction.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.p_tilde * self.p_tilde.transpose()
    }
}

/// Perron root and vector of a symmetric nonnegative irreducible matrix.
pub fn perron(a: &DMatrix<f64>) -> Result<SpectralData> {
    if a.nrows() <= EIGEN_CUTOFF {
        perron_eigen(a)
    } else {
        perron_power(a)
    }
}

/// Perron data from a full symmetric eigendecomposition.
pub fn perron_eigen(a: &DMatrix<f64>) -> Result<SpectralData> {
    check_input(a)?;
    let eig = a.clone().symmetric_eigen();
    let (idx, rho) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .ok_or(Error::TooFewVertices(0))?;
    let mut v: DVector<f64> = eig.eigenvectors.column(idx).into_owned();
    if v[0] < 0.0 {
        v = -v;
    }
    finish(a, rho, v)
}

/// Perron data by power iteration on `A + sI`, stopping on the relative
/// Rayleigh-quotient residual.
///
/// The shift keeps `ρ + s` strictly dominant even for bipartite graphs, whose
/// spectrum is symmetric about zero.
pub fn perron_power(a: &DMatrix<f64>) -> Result<SpectralData> {
    check_input(a)?;
    let n = a.nrows();
    let shift = 0.5 * linalg::norm_inf(a);
    let mut x = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    for _ in 0..POWER_MAX_ITER {
        let ax = a * &x;
        let rq = x.dot(&ax);
        let residual = (&ax - &x * rq).norm();
        if residual <= POWER_TOL * rq.abs().max(f64::MIN_POSITIVE) {
            return finish(a, rq, x);
        }
        let y = ax + &x * shift;
        x = &y / y.norm();
    }
    Err(Error::NoConvergence(POWER_MAX_ITER))
}

fn check_input(a: &DMatrix<f64>) -> Result<()> {
    if a.nrows() < 1 || !a.is_square() {
        return Err(Error::InvalidParameter("matrix must be square and nonempty".into()));
    }
    if !linalg::is_symmetric(a, 1e-12) {
        return Err(Error::NotSymmetric);
    }
    if a.iter().any(|x| *x < 0.0) {
        return Err(Error::InvalidParameter("matrix has negative entries".into()));
    }
    Ok(())
}

fn finish(a: &DMatrix<f64>, rho: f64, v: DVector<f64>) -> Result<SpectralData> {
    let data = SpectralData::from_root_and_vector(rho, v);
    if data.p.iter().any(|x| *x <= 0.0) {
        return Err(Error::Disconnected);
    }
    let residual = (a * &data.p - &data.p * rho).amax();
    if residual > 1e-10 * rho.abs().max(1.0) {
        return Err(Error::NotPerronRoot(residual));
    }
    Ok(data)
}

/// Spectral radius of the principal submatrix with vertex `j` removed.
pub fn submatrix_spectral_radius(a: &DMatrix<f64>, j: usize) -> Result<f64> {
    if j >= a.nrows() {
        return Err(Error::UnknownVertex(j));
    }
    Ok(linalg::symmetric_spectral_radius(&linalg::remove_vertex(a, j)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenprojectionCheck {
    pub ts: Vec<f64>,
    /// `max|(t⁻¹ - ρ)R_t - ρ p̃p̃ᵀ|` for each `t`.
    pub deviations: Vec<f64>,
}

impl EigenprojectionCheck {
    pub fn last(&self) -> f64 {
        *self.deviations.last().unwrap_or(&f64::NAN)
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.deviations.windows(2).all(|w| w[1] < w[0])
    }
}

/// Deviation of the scaled resolvent `(t⁻¹ - ρ)(I - tA)⁻¹` from its limit
/// `ρ p̃p̃ᵀ` along an increasing sequence of `t` below `ρ⁻¹`.
pub fn eigenprojection_limit_check(a: &DMatrix<f64>, ts: &[f64]) -> Result<EigenprojectionCheck> {
    let spec = perron(a)?;
    let limit = 1.0 / spec.rho;
    let target = spec.projector() * spec.rho;
    let n = a.nrows();
    let mut deviations = Vec::with_capacity(ts.len());
    for &t in ts {
        if !(t > 0.0) || t >= limit {
            return Err(Error::Divergent { t, limit });
        }
        let resolvent = linalg::inverse(&(DMatrix::identity(n, n) - a * t))?;
        let scaled = resolvent * (1.0 / t - spec.rho);
        deviations.push(linalg::max_abs_diff(&scaled, &target));
    }
    Ok(EigenprojectionCheck {
        ts: ts.to_vec(),
        deviations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedMultigraph;
    use approx::assert_relative_eq;

    fn path(n: usize) -> DMatrix<f64> {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
        WeightedMultigraph::from_edges(n, &edges).unwrap().adjacency()
    }

    #[test]
    fn k2_perron() {
        let s = perron(&path(2)).unwrap();
        assert_relative_eq!(s.rho, 1.0, epsilon = 1e-14);
        assert_relative_eq!(s.p[0], 0.5, epsilon = 1e-14);
        assert_relative_eq!(s.p[1], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn p4_root_is_golden_ratio() {
        // Characteristic polynomial of P4: λ⁴ - 3λ² + 1, largest root (1+√5)/2.
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let s = perron(&path(4)).unwrap();
        assert_relative_eq!(s.rho, golden, epsilon = 1e-13);
        assert_relative_eq!(s.p.sum(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(s.p_prime.norm_squared(), 4.0, epsilon = 1e-13);
    }

    #[test]
    fn power_iteration_agrees_with_eigen_on_bipartite_graph() {
        let a = path(7);
        let e = perron_eigen(&a).unwrap();
        let p = perron_power(&a).unwrap();
        assert_relative_eq!(e.rho, p.rho, epsilon = 1e-10);
        assert!((e.p - p.p).amax() < 1e-10);
    }

    #[test]
    fn constant_row_sums() {
        // K3 with a loop of weight 1 at every vertex: row sums 3.
        let g = WeightedMultigraph::from_edges(
            3,
            &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)],
        )
        .unwrap();
        let s = perron(&g.adjacency()).unwrap();
        assert_relative_eq!(s.rho, 3.0, epsilon = 1e-12);
        for x in s.p.iter() {
            assert_relative_eq!(*x, 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_nonsymmetric() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(matches!(perron(&a), Err(Error::NotSymmetric)));
    }

    #[test]
    fn submatrix_radii() {
        assert_eq!(submatrix_spectral_radius(&path(2), 1).unwrap(), 0.0);
        assert_relative_eq!(
            submatrix_spectral_radius(&path(4), 3).unwrap(),
            2f64.sqrt(),
            epsilon = 1e-14
        );
        // Removing vertex 2 of P4 leaves {1} and the edge 3-4.
        assert_relative_eq!(submatrix_spectral_radius(&path(4), 1).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eigenprojection_converges() {
        for n in [2, 4] {
            let a = path(n);
            let rho = perron(&a).unwrap().rho;
            let ts: Vec<f64> = (2..=6).map(|k| (1.0 - 10f64.powi(-k)) / rho).collect();
            let check = eigenprojection_limit_check(&a, &ts).unwrap();
            assert!(check.strictly_decreasing(), "{:?}", check.deviations);
            assert!(check.last() <= 1e-4);
        }
    }

    #[test]
    fn eigenprojection_single_point_and_divergence() {
        let a = path(4);
        let rho = perron(&a).unwrap().rho;
        let check = eigenprojection_limit_check(&a, &[0.5 / rho]).unwrap();
        assert!(check.last().is_finite());
        assert!(matches!(
            eigenprojection_limit_check(&a, &[1.0 / rho]),
            Err(Error::Divergent { .. })
        ));
    }
}

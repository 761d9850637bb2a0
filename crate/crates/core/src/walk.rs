//! Walk-type proximities and the distances built from them.
//!
//! A proximity matrix `S` is turned into a distance by `H = θ·ln∘S` followed
//! by `D = ½(h1ᵀ + 1hᵀ) - H`, with `h` the diagonal of `H`. Applied to the
//! walk weights `R_t = (I - tA)⁻¹` this gives the walk distances; applied to
//! `(I + L_α)⁻¹` it gives the logarithmic forest distances. The "plain"
//! variants skip the logarithm.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::distance::{DistanceMatrix, MetricFamily};
use crate::error::{Error, Result};
use crate::graph::WeightedMultigraph;
use crate::linalg;
use crate::spectral;
use crate::transforms::WeightTransform;

/// Scaling factor `θ = ln(e + α^{2/n})·(α - 1)/ln α`, extended by continuity
/// to `ln(e + 1)` at `α = 1`.
pub fn theta_scaling(alpha: f64, n: usize) -> f64 {
    let x = alpha - 1.0;
    let ratio = if x.abs() < 1e-4 {
        // (α-1)/ln α around α = 1
        1.0 + x / 2.0 - x * x / 12.0 + x * x * x / 24.0
    } else {
        x / alpha.ln()
    };
    (std::f64::consts::E + alpha.powf(2.0 / n as f64)).ln() * ratio
}

/// `t = (ρ + α⁻¹)⁻¹`.
pub fn t_from_alpha(alpha: f64, rho: f64) -> f64 {
    1.0 / (rho + 1.0 / alpha)
}

/// `α = (t⁻¹ - ρ)⁻¹`.
pub fn alpha_from_t(t: f64, rho: f64) -> f64 {
    1.0 / (1.0 / t - rho)
}

/// The linked parameters of one metric evaluation.
///
/// For walk distances `t` and `rho` are set and `α = (t⁻¹ - ρ)⁻¹`. Families
/// that have no walk parameter (the forest distances) leave them unset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub alpha: f64,
    pub theta: f64,
    pub t: Option<f64>,
    pub rho: Option<f64>,
}

impl ParamPoint {
    pub fn from_alpha(alpha: f64, rho: f64, n: usize) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        Ok(Self {
            alpha,
            theta: theta_scaling(alpha, n),
            t: Some(t_from_alpha(alpha, rho)),
            rho: Some(rho),
        })
    }

    pub fn from_t(t: f64, rho: f64, n: usize) -> Result<Self> {
        let limit = 1.0 / rho;
        if !(t > 0.0) || t >= limit {
            return Err(Error::Divergent { t, limit });
        }
        let mut point = Self::from_alpha(alpha_from_t(t, rho), rho, n)?;
        point.t = Some(t);
        Ok(point)
    }

    pub fn bare(alpha: f64, theta: f64) -> Self {
        Self {
            alpha,
            theta,
            t: None,
            rho: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProximityKind {
    /// `R_t = (I - tA)⁻¹`.
    Walk,
    /// `(I + αL)⁻¹`.
    Forest,
    /// `Q_α = (I + L_α)⁻¹`.
    LogForest,
    /// `R̃_α = (I - A(α))⁻¹`.
    EWalk,
}

/// Strictly positive matrix of proximities.
#[derive(Debug, Clone, PartialEq)]
pub struct ProximityMatrix {
    entries: DMatrix<f64>,
    kind: ProximityKind,
}

impl ProximityMatrix {
    pub fn new(entries: DMatrix<f64>, kind: ProximityKind) -> Result<Self> {
        check_positive(&entries)?;
        Ok(Self { entries, kind })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn kind(&self) -> ProximityKind {
        self.kind
    }
}

fn check_positive(s: &DMatrix<f64>) -> Result<()> {
    for i in 0..s.nrows() {
        for j in 0..s.ncols() {
            if !(s[(i, j)] > 0.0) {
                return Err(Error::NonPositiveProximity(i, j));
            }
        }
    }
    Ok(())
}

/// Matrix of walk weights `R_t = Σ(tA)^k = (I - tA)⁻¹`, defined for `0 < t < ρ⁻¹`.
pub fn walk_weight_matrix(a: &DMatrix<f64>, t: f64) -> Result<ProximityMatrix> {
    let rho = linalg::symmetric_spectral_radius(a);
    let limit = 1.0 / rho;
    if !(t > 0.0) || t >= limit {
        return Err(Error::Divergent { t, limit });
    }
    let n = a.nrows();
    let r = linalg::inverse(&(DMatrix::identity(n, n) - a * t))?;
    ProximityMatrix::new(r, ProximityKind::Walk)
}

/// `½(h1ᵀ + 1hᵀ) - H` for `H = scale·L`, where `L` holds log-proximities.
pub(crate) fn log_proximity_to_raw_distance(log_s: &DMatrix<f64>, scale: f64) -> DMatrix<f64> {
    let n = log_s.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        scale * (0.5 * (log_s[(i, i)] + log_s[(j, j)]) - log_s[(i, j)])
    })
}

/// `½(s1ᵀ + 1sᵀ) - S` without a logarithm.
pub(crate) fn plain_raw_distance(s: &DMatrix<f64>) -> DMatrix<f64> {
    let n = s.nrows();
    DMatrix::from_fn(n, n, |i, j| 0.5 * (s[(i, i)] + s[(j, j)]) - s[(i, j)])
}

/// Logarithmic conversion of a proximity matrix into distances, scaled by `theta`.
pub fn proximity_to_distance(s: &ProximityMatrix, theta: f64) -> DistanceMatrix {
    let family = match s.kind {
        ProximityKind::Walk => MetricFamily::Walk,
        ProximityKind::Forest | ProximityKind::LogForest => MetricFamily::LogForest,
        ProximityKind::EWalk => MetricFamily::EWalk,
    };
    let log_s = s.entries.map(f64::ln);
    DistanceMatrix::new(log_proximity_to_raw_distance(&log_s, theta), family, None)
}

/// Walk distance `d^W_α = θ·d_t` with `t = (ρ + α⁻¹)⁻¹` and `θ` from [`theta_scaling`].
pub fn walk_distance(a: &DMatrix<f64>, alpha: f64) -> Result<DistanceMatrix> {
    let spec = spectral::perron(a)?;
    let param = ParamPoint::from_alpha(alpha, spec.rho, a.nrows())?;
    walk_distance_at(a, param)
}

/// Walk distance at an explicit parameter point.
pub fn walk_distance_at(a: &DMatrix<f64>, param: ParamPoint) -> Result<DistanceMatrix> {
    let t = param
        .t
        .ok_or_else(|| Error::InvalidParameter("walk distance needs t".into()))?;
    let r = walk_weight_matrix(a, t)?;
    let d = proximity_to_distance(&r, param.theta);
    Ok(DistanceMatrix::new(
        d.entries().clone(),
        MetricFamily::Walk,
        Some(param),
    ))
}

/// "Plain" walk distance: the conversion applied to `R_t` without the
/// logarithm. A metric, but not graph-geodetic.
pub fn plain_walk_distance(a: &DMatrix<f64>, alpha: f64) -> Result<DistanceMatrix> {
    let spec = spectral::perron(a)?;
    let param = ParamPoint::from_alpha(alpha, spec.rho, a.nrows())?;
    let r = walk_weight_matrix(a, param.t.expect("set by from_alpha"))?;
    Ok(DistanceMatrix::new(
        plain_raw_distance(r.entries()),
        MetricFamily::PlainWalk,
        Some(param),
    ))
}

/// Forest distance: the conversion applied to `(I + αL)⁻¹` without the logarithm.
pub fn forest_distance(g: &WeightedMultigraph, alpha: f64) -> Result<DistanceMatrix> {
    g.ensure_connected()?;
    check_alpha(alpha)?;
    let n = g.order();
    let q = linalg::inverse(&(DMatrix::identity(n, n) + g.laplacian() * alpha))?;
    Ok(DistanceMatrix::new(
        plain_raw_distance(&q),
        MetricFamily::Forest,
        Some(ParamPoint::bare(alpha, 1.0)),
    ))
}

/// `Q_α = (I + L_α)⁻¹`, where `L_α` is the Laplacian of `g` with weights
/// passed through `transform`.
pub fn log_forest_proximity(
    g: &WeightedMultigraph,
    transform: &dyn WeightTransform,
    alpha: f64,
) -> Result<ProximityMatrix> {
    g.ensure_connected()?;
    check_alpha(alpha)?;
    let transformed = g.map_weights(|e| transform.apply(e.weight, alpha))?;
    let n = g.order();
    let q = linalg::inverse(&(DMatrix::identity(n, n) + transformed.laplacian()))?;
    ProximityMatrix::new(q, ProximityKind::LogForest)
}

/// Logarithmic forest distance with weight transform `φ_α` and scale `θ`.
pub fn log_forest_distance(
    g: &WeightedMultigraph,
    transform: &dyn WeightTransform,
    alpha: f64,
    theta: f64,
) -> Result<DistanceMatrix> {
    let q = log_forest_proximity(g, transform, alpha)?;
    let d = proximity_to_distance(&q, theta);
    Ok(DistanceMatrix::new(
        d.entries().clone(),
        MetricFamily::LogForest,
        Some(ParamPoint::bare(alpha, theta)),
    ))
}

/// Proximity `(I - A_α)⁻¹` of an already transformed adjacency matrix with
/// `ρ(A_α) < 1`.
pub fn modified_walk_proximity(a_alpha: &DMatrix<f64>) -> Result<ProximityMatrix> {
    let n = a_alpha.nrows();
    let rho = linalg::symmetric_spectral_radius(a_alpha);
    if rho >= 1.0 {
        return Err(Error::Divergent { t: 1.0, limit: 1.0 / rho });
    }
    let r = linalg::inverse(&(DMatrix::identity(n, n) - a_alpha))?;
    ProximityMatrix::new(r, ProximityKind::EWalk)
}

/// Logarithmic conversion of `(I - A_α)⁻¹` with scale `scale`.
pub fn modified_walk_distance(a_alpha: &DMatrix<f64>, scale: f64) -> Result<DistanceMatrix> {
    let r = modified_walk_proximity(a_alpha)?;
    Ok(proximity_to_distance(&r, scale))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")))
    }
}

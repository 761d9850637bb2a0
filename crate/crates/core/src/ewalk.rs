//! ε-walk distances.
//!
//! Every edge weight is transformed as `w(α) = (w/ρ)·e^{-1/(αw)}`, parallel
//! edges separately, and the walk-weight matrix `R̃_α = (I - A(α))⁻¹` of the
//! result is converted with scale `θ_α·α`.
//!
//! For small α the transformed weights underflow, so `ln R̃_α` is computed
//! directly in the log domain with an algebraic-path closure of `A(α)`
//! (sums of nonnegative terms only).

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::distance::{DistanceMatrix, MetricFamily};
use crate::error::{Error, Result};
use crate::graph::{para_laplacian, WeightedMultigraph};
use crate::limit::{self, SweepResult};
use crate::linalg::{self, reduced_index, remove_vertex};
use crate::spectral;
use crate::walk::{log_proximity_to_raw_distance, ParamPoint};

pub const DEFAULT_BETA: f64 = 1.0;

/// `θ_α = (θ_∞·α + β)/(α + β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaSchedule {
    pub theta_infinity: f64,
    pub beta: f64,
}

impl ThetaSchedule {
    pub fn new(theta_infinity: f64, beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !(theta_infinity > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "schedule needs positive θ∞ and β, got {theta_infinity} and {beta}"
            )));
        }
        Ok(Self {
            theta_infinity,
            beta,
        })
    }

    /// Schedule with `θ_∞` from [`theta_infinity`].
    pub fn for_adjacency(a: &DMatrix<f64>, beta: f64) -> Result<Self> {
        Self::new(theta_infinity(a)?, beta)
    }

    pub fn eval(&self, alpha: f64) -> f64 {
        if alpha.is_infinite() {
            return self.theta_infinity;
        }
        (self.theta_infinity * alpha + self.beta) / (alpha + self.beta)
    }
}

/// Support of `A`: `Ǎ_ij = 1` iff `a_ij ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorMatrix(pub DMatrix<f64>);

impl IndicatorMatrix {
    pub fn of(a: &DMatrix<f64>) -> Self {
        Self(a.map(|x| if x != 0.0 { 1.0 } else { 0.0 }))
    }
}

/// `θ_∞ = (2/n)·(pᵀ(A/ρ)p)/(pᵀǍp)`.
pub fn theta_infinity(a: &DMatrix<f64>) -> Result<f64> {
    let spec = spectral::perron(a)?;
    let p = &spec.p;
    let check = IndicatorMatrix::of(a).0;
    let num = p.dot(&(a * p)) / spec.rho;
    let den = p.dot(&(check * p));
    Ok(2.0 / a.nrows() as f64 * num / den)
}

fn edge_log_weight(w: f64, rho: f64, alpha: f64) -> f64 {
    w.ln() - rho.ln() - 1.0 / (alpha * w)
}

/// The transformed graph with weights `(w/ρ)·e^{-1/(αw)}`. Fails once a
/// weight underflows to zero; [`log_epsilon_adjacency`] has no such limit.
pub fn epsilon_transform(g: &WeightedMultigraph, alpha: f64) -> Result<WeightedMultigraph> {
    check_alpha(alpha)?;
    let rho = spectral::perron(&g.adjacency())?.rho;
    g.map_weights(|e| edge_log_weight(e.weight, rho, alpha).exp())
}

/// `ln A(α)`, with `-∞` where there is no edge.
pub fn log_epsilon_adjacency(g: &WeightedMultigraph, alpha: f64) -> Result<DMatrix<f64>> {
    check_alpha(alpha)?;
    let rho = spectral::perron(&g.adjacency())?.rho;
    let n = g.order();
    let mut la = DMatrix::from_element(n, n, f64::NEG_INFINITY);
    for e in g.edges() {
        let lw = edge_log_weight(e.weight, rho, alpha);
        la[(e.a, e.b)] = log_add(la[(e.a, e.b)], lw);
        if !e.is_loop() {
            la[(e.b, e.a)] = la[(e.a, e.b)];
        }
    }
    Ok(la)
}

fn log_add(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln (I - A)⁻¹` from `ln A`, for nonnegative `A` with `ρ(A) < 1`.
///
/// Runs the closure `a_ij ← a_ij + a_ik·(1 - a_kk)⁻¹·a_kj` over all `k`,
/// which leaves `A + A² + …`; every update adds nonnegative terms.
pub fn log_walk_closure(log_a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = log_a.nrows();
    let mut la = log_a.clone();
    for k in 0..n {
        let akk = la[(k, k)].exp();
        if !(akk < 1.0) {
            return Err(Error::Divergent { t: 1.0, limit: 1.0 / akk });
        }
        let log_star = -(-akk).ln_1p();
        let row: Vec<f64> = (0..n).map(|j| la[(k, j)]).collect();
        let col: Vec<f64> = (0..n).map(|i| la[(i, k)]).collect();
        for i in 0..n {
            if col[i] == f64::NEG_INFINITY {
                continue;
            }
            for j in 0..n {
                if row[j] == f64::NEG_INFINITY {
                    continue;
                }
                la[(i, j)] = log_add(la[(i, j)], col[i] + log_star + row[j]);
            }
        }
    }
    for i in 0..n {
        // diagonal of I + A⁺
        la[(i, i)] = log_add(0.0, la[(i, i)]);
    }
    Ok(la)
}

/// `ln R̃_α` for the ε-walk transform of `g`. Checks `ρ(A(α)) < 1`.
pub fn ewalk_log_proximity(g: &WeightedMultigraph, alpha: f64) -> Result<DMatrix<f64>> {
    g.ensure_connected()?;
    let la = log_epsilon_adjacency(g, alpha)?;
    let rho_alpha = linalg::symmetric_spectral_radius(&la.map(f64::exp));
    if !(rho_alpha < 1.0) {
        return Err(Error::Divergent {
            t: 1.0,
            limit: 1.0 / rho_alpha,
        });
    }
    let lr = log_walk_closure(&la)?;
    if lr.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonPositiveProximity(0, 0));
    }
    Ok(lr)
}

/// ε-walk distance `d = -θ_α·α·ln(r̃_ij/√(r̃_ii·r̃_jj))`.
pub fn ewalk_distance(g: &WeightedMultigraph, alpha: f64, schedule: &ThetaSchedule) -> Result<DistanceMatrix> {
    let lr = ewalk_log_proximity(g, alpha)?;
    let theta = schedule.eval(alpha);
    let rho = spectral::perron(&g.adjacency())?.rho;
    let param = ParamPoint {
        rho: Some(rho),
        ..ParamPoint::bare(alpha, theta)
    };
    Ok(DistanceMatrix::new(
        log_proximity_to_raw_distance(&lr, theta * alpha),
        MetricFamily::EWalk,
        Some(param),
    ))
}

/// Long ε-walk distance
/// `d(i,j) = (θ_∞/2)(p_i⁻¹((Λ_ĵĵ)⁻¹Ǎ_ĵ)_i + p_j⁻¹((Λ_îî)⁻¹Ǎ_î)_j)·p`,
/// where `Ǎ_ĵ` is the support of `A` without row `j`.
pub fn long_ewalk_distance(a: &DMatrix<f64>, theta_inf: f64) -> Result<DistanceMatrix> {
    let spec = spectral::perron(a)?;
    let lambda = para_laplacian(a, spec.rho)?;
    let check = IndicatorMatrix::of(a).0;
    let n = a.nrows();
    let p = &spec.p;
    let cp = check * p;
    let mut t = DMatrix::zeros(n, n);
    for j in 0..n {
        let x = linalg::solve(&remove_vertex(&lambda, j), &linalg::remove_entry(&cp, j))?;
        for i in (0..n).filter(|&i| i != j) {
            t[(i, j)] = x[reduced_index(i, j)] / p[i];
        }
    }
    let d = (&t + t.transpose()) * (theta_inf / 2.0);
    Ok(DistanceMatrix::new(
        d,
        MetricFamily::LongEWalk,
        Some(ParamPoint {
            rho: Some(spec.rho),
            ..ParamPoint::bare(f64::INFINITY, theta_inf)
        }),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepDirection {
    /// α → 0⁺, against the weighted shortest path distance.
    ToZero,
    /// α → ∞, against the long ε-walk distance with the schedule's `θ_∞`.
    ToInfinity,
}

/// ε-walk deviations along `alphas` from the limit in `direction`.
pub fn ewalk_limit_sweep(
    g: &WeightedMultigraph,
    schedule: &ThetaSchedule,
    direction: SweepDirection,
    alphas: &[f64],
) -> Result<SweepResult> {
    let reference = match direction {
        SweepDirection::ToZero => limit::weighted_shortest_path_matrix(g)?,
        SweepDirection::ToInfinity => long_ewalk_distance(&g.adjacency(), schedule.theta_infinity)?,
    };
    Ok(limit::sweep(MetricFamily::EWalk, alphas, &reference, |alpha| {
        ewalk_distance(g, alpha, schedule)
    }))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")))
    }
}

/// `A(α)` as a plain matrix; entries may underflow to zero.
pub fn epsilon_adjacency(g: &WeightedMultigraph, alpha: f64) -> Result<DMatrix<f64>> {
    Ok(log_epsilon_adjacency(g, alpha)?.map(f64::exp))
}

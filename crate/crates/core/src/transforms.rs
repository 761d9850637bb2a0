//! Graph transformations: balance-graphs, the general balancing of a
//! transformed Laplacian, and the similarity transform `P′AP′`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{EdgeRecord, WeightedMultigraph};
use crate::spectral;

/// A family of edge-weight transforms `w ↦ φ_α(w)`.
pub trait WeightTransform {
    fn apply(&self, w: f64, alpha: f64) -> f64;

    fn name(&self) -> &'static str;
}

/// `φ_α(w) = αw`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Scaled;

impl WeightTransform for Scaled {
    fn apply(&self, w: f64, alpha: f64) -> f64 {
        alpha * w
    }

    fn name(&self) -> &'static str {
        "scaled"
    }
}

/// `φ_α(w) = w·e^α`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExpScaled;

impl WeightTransform for ExpScaled {
    fn apply(&self, w: f64, alpha: f64) -> f64 {
        w * alpha.exp()
    }

    fn name(&self) -> &'static str {
        "exp-scaled"
    }
}

/// A graph made degree-regular by attaching loops.
#[derive(Debug, Clone)]
pub struct BalanceGraph {
    pub base: WeightedMultigraph,
    pub m: f64,
    pub result: WeightedMultigraph,
}

impl BalanceGraph {
    /// Loop weights that were added, per vertex (zero where none was needed).
    pub fn added_loops(&self) -> Vec<f64> {
        let mut loops = vec![0.0; self.base.order()];
        for e in &self.result.edges()[self.base.edges().len()..] {
            loops[e.a] += e.weight;
        }
        loops
    }
}

fn max_degree(g: &WeightedMultigraph) -> f64 {
    g.weighted_degrees().into_iter().fold(0.0, f64::max)
}

/// `Ã = mI - diag(A·1) + A`, realized by a loop of weight `m - deg(i)` at
/// each vertex whose weighted degree is below `m`. Defaults to the maximum
/// weighted degree.
pub fn balance_graph(g: &WeightedMultigraph, m: Option<f64>) -> Result<BalanceGraph> {
    let required = max_degree(g);
    let m = m.unwrap_or(required);
    if !m.is_finite() || m < required {
        return Err(Error::BalanceTooSmall { m, required });
    }
    let loops: Vec<EdgeRecord> = g
        .weighted_degrees()
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d < m)
        .map(|(i, d)| EdgeRecord::new(i, i, m - d))
        .collect();
    Ok(BalanceGraph {
        base: g.clone(),
        m,
        result: g.with_edges(loops)?,
    })
}

/// `A(α) = (m_α + 1)⁻¹(m_α·I - L_α)` for the transformed graph `g_alpha`.
/// Requires `m_α` at least the largest diagonal entry of `L_α`.
pub fn general_balance(g_alpha: &WeightedMultigraph, m_alpha: f64) -> Result<DMatrix<f64>> {
    let l = g_alpha.laplacian();
    let n = l.nrows();
    let required = (0..n).map(|i| l[(i, i)]).fold(0.0, f64::max);
    if !m_alpha.is_finite() || m_alpha < required {
        return Err(Error::BalanceTooSmall {
            m: m_alpha,
            required,
        });
    }
    Ok((DMatrix::identity(n, n) * m_alpha - l) / (m_alpha + 1.0))
}

/// Graph `G′` with adjacency `P′AP′`, where `p′ = √n·p/‖p‖₂`. Each edge
/// weight `w` between `i` and `j` becomes `p′_i·p′_j·w`.
pub fn similarity_transform(g: &WeightedMultigraph) -> Result<WeightedMultigraph> {
    g.ensure_connected()?;
    let spec = spectral::perron(&g.adjacency())?;
    let pp = &spec.p_prime;
    g.map_weights(|e| e.weight * pp[e.a] * pp[e.b])
}

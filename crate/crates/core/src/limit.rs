//! Limiting distances and the quantities around them: shortest paths, hitting
//! and commute weights, the long walk distance (several closed forms),
//! resistance distance and convergence sweeps.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::distance::{DistanceMatrix, MetricFamily};
use crate::error::{Error, Result};
use crate::graph::{para_laplacian, WeightedMultigraph};
use crate::linalg::{self, reduced_index, remove_entry, remove_row_col, remove_vertex};
use crate::spectral::{self, SpectralData};

/// Hop counts between all pairs.
pub fn shortest_path_matrix(g: &WeightedMultigraph) -> Result<DistanceMatrix> {
    g.ensure_connected()?;
    let n = g.order();
    let adj = g.neighbour_lists();
    let mut d = DMatrix::from_element(n, n, f64::INFINITY);
    for s in 0..n {
        d[(s, s)] = 0.0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if d[(s, v)].is_infinite() {
                    d[(s, v)] = d[(s, u)] + 1.0;
                    queue.push_back(v);
                }
            }
        }
    }
    Ok(DistanceMatrix::new(d, MetricFamily::ShortestPath, None))
}

/// Minimum total weighted length `Σ 1/w_e` over all paths. Loops are ignored.
pub fn weighted_shortest_path_matrix(g: &WeightedMultigraph) -> Result<DistanceMatrix> {
    g.ensure_connected()?;
    let n = g.order();
    // shortest single-edge length per pair, then dense Dijkstra from each source
    let mut len = DMatrix::from_element(n, n, f64::INFINITY);
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        let l = e.length();
        if l < len[(e.a, e.b)] {
            len[(e.a, e.b)] = l;
            len[(e.b, e.a)] = l;
        }
    }
    let mut d = DMatrix::from_element(n, n, f64::INFINITY);
    for s in 0..n {
        let mut done = vec![false; n];
        d[(s, s)] = 0.0;
        for _ in 0..n {
            let u = match (0..n)
                .filter(|&v| !done[v])
                .min_by(|&a, &b| d[(s, a)].total_cmp(&d[(s, b)]))
            {
                Some(u) => u,
                None => break,
            };
            done[u] = true;
            for v in 0..n {
                let cand = d[(s, u)] + len[(u, v)];
                if cand < d[(s, v)] {
                    d[(s, v)] = cand;
                }
            }
        }
    }
    Ok(DistanceMatrix::new(d, MetricFamily::WeightedShortestPath, None))
}

/// Weights `r_{ij(1)}(t)` of the hitting walks `i → j`.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingWeights {
    pub entries: DMatrix<f64>,
    pub t: f64,
    pub at_spectral_radius: bool,
}

impl HittingWeights {
    /// Hitting weights at a given `t`, which may reach or exceed `ρ⁻¹` as
    /// long as `t < ρ(A_ĵĵ)⁻¹` for every `j`.
    pub fn at(a: &DMatrix<f64>, t: f64) -> Result<Self> {
        let n = a.nrows();
        let mut entries = DMatrix::zeros(n, n);
        for j in 0..n {
            entries.set_column(j, &hitting_column(a, t, j)?);
        }
        Ok(Self {
            entries,
            t,
            at_spectral_radius: false,
        })
    }

    /// Hitting weights at `t = ρ⁻¹`.
    pub fn at_spectral_radius(a: &DMatrix<f64>) -> Result<Self> {
        let rho = spectral::perron(a)?.rho;
        let mut h = Self::at(a, 1.0 / rho)?;
        h.at_spectral_radius = true;
        Ok(h)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// `c°_ij = r_{ij(1)}·r_{ji(1)}`.
    pub fn commute(&self, i: usize, j: usize) -> f64 {
        self.get(i, j) * self.get(j, i)
    }
}

/// Column `j` of the hitting-weight matrix: `(t⁻¹I - A_ĵĵ)⁻¹·a_ĵ,j`, with 1 at `j`.
fn hitting_column(a: &DMatrix<f64>, t: f64, j: usize) -> Result<DVector<f64>> {
    let n = a.nrows();
    let sub = remove_vertex(a, j);
    let limit = 1.0 / linalg::symmetric_spectral_radius(&sub);
    if !(t > 0.0) || t >= limit {
        return Err(Error::Divergent { t, limit });
    }
    let m = DMatrix::identity(n - 1, n - 1) / t - &sub;
    let rhs = remove_entry(&a.column(j).into_owned(), j);
    let x = linalg::solve(&m, &rhs)?;
    Ok(DVector::from_fn(n, |i, _| {
        if i == j {
            1.0
        } else {
            x[reduced_index(i, j)]
        }
    }))
}

/// `r_{ij(1)}(t)`, the total weight of walks from `i` that end at their only visit to `j`.
pub fn hitting_weight(a: &DMatrix<f64>, t: f64, i: usize, j: usize) -> Result<f64> {
    Ok(hitting_column(a, t, j)?[i])
}

/// Total weight of the commute cycles `i ⇄ j`: `c°_ij(t) = r_{ij(1)}(t)·r_{ji(1)}(t)`.
pub fn commute_cycle_weight(a: &DMatrix<f64>, t: f64, i: usize, j: usize) -> Result<f64> {
    Ok(hitting_weight(a, t, i, j)? * hitting_weight(a, t, j, i)?)
}

/// `(Λ_ĵĵ)⁻¹_i·a_ĵ,j` for all `i ≠ j`, which should equal `p_i/p_j`.
pub fn para_laplacian_hitting(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let spec = spectral::perron(a)?;
    let lambda = para_laplacian(a, spec.rho)?;
    let n = a.nrows();
    let mut out = DMatrix::from_element(n, n, 1.0);
    for j in 0..n {
        let rhs = remove_entry(&a.column(j).into_owned(), j);
        let x = linalg::solve(&remove_vertex(&lambda, j), &rhs)?;
        for i in (0..n).filter(|&i| i != j) {
            out[(i, j)] = x[reduced_index(i, j)];
        }
    }
    Ok(out)
}

fn perron_and_lambda(a: &DMatrix<f64>) -> Result<(SpectralData, DMatrix<f64>)> {
    let spec = spectral::perron(a)?;
    let lambda = para_laplacian(a, spec.rho)?;
    Ok((spec, lambda))
}

/// Assembles `d(i,j) = c·(T_ij + T_ji)` from one-sided terms, where column `j`
/// of `T` comes from `column(j)`.
fn from_one_sided(
    n: usize,
    c: f64,
    mut column: impl FnMut(usize) -> Result<DVector<f64>>,
) -> Result<DistanceMatrix> {
    let mut t = DMatrix::zeros(n, n);
    for j in 0..n {
        t.set_column(j, &column(j)?);
    }
    t.fill_diagonal(0.0);
    let d = (&t + t.transpose()) * c;
    Ok(DistanceMatrix::new(d, MetricFamily::LongWalk, None))
}

/// Spreads a reduced vector (vertex `j` removed) back to length `n` with 0 at `j`.
fn expand(x: &DVector<f64>, j: usize) -> DVector<f64> {
    x.clone().insert_row(j, 0.0)
}

/// Long walk distance
/// `d(i,j) = n⁻¹(p_i⁻¹(Λ_ĵĵ)⁻¹_i p_ĵ + p_j⁻¹(Λ_îî)⁻¹_j p_î)` with `Λ = ρI - A`.
pub fn long_walk_distance(a: &DMatrix<f64>) -> Result<DistanceMatrix> {
    let (spec, lambda) = perron_and_lambda(a)?;
    let n = a.nrows();
    let p = &spec.p;
    from_one_sided(n, 1.0 / n as f64, |j| {
        let x = linalg::solve(&remove_vertex(&lambda, j), &remove_entry(p, j))?;
        Ok(expand(&x, j).component_div(p))
    })
}

/// `Q = (ρP)⁻¹AP`, a row-stochastic matrix.
pub fn stochastic_matrix(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let spec = spectral::perron(a)?;
    let p = &spec.p;
    Ok(DMatrix::from_fn(a.nrows(), a.ncols(), |i, k| {
        a[(i, k)] * p[k] / (spec.rho * p[i])
    }))
}

/// Long walk distance through `B = P⁻¹AP`:
/// `d(i,j) = n⁻¹[(ρI - B_ĵĵ)⁻¹_i + (ρI - B_îî)⁻¹_j]·1`.
pub fn long_walk_via_stochastic(a: &DMatrix<f64>) -> Result<DistanceMatrix> {
    let spec = spectral::perron(a)?;
    let n = a.nrows();
    let p = &spec.p;
    let b = DMatrix::from_fn(n, n, |i, k| a[(i, k)] * p[k] / p[i]);
    let m = DMatrix::identity(n, n) * spec.rho - b;
    from_one_sided(n, 1.0 / n as f64, |j| {
        let x = linalg::solve(&remove_vertex(&m, j), &DVector::from_element(n - 1, 1.0))?;
        Ok(expand(&x, j))
    })
}

/// Same as [`long_walk_via_stochastic`] written with `Q = (ρP)⁻¹AP`:
/// `d(i,j) = (nρ)⁻¹[(I - Q_ĵĵ)⁻¹_i + (I - Q_îî)⁻¹_j]·1`.
pub fn long_walk_via_transition(a: &DMatrix<f64>) -> Result<DistanceMatrix> {
    let rho = spectral::perron(a)?.rho;
    let q = stochastic_matrix(a)?;
    let n = a.nrows();
    let m = DMatrix::identity(n, n) - q;
    from_one_sided(n, 1.0 / (n as f64 * rho), |j| {
        let x = linalg::solve(&remove_vertex(&m, j), &DVector::from_element(n - 1, 1.0))?;
        Ok(expand(&x, j))
    })
}

/// Long walk distance with full-size matrices:
/// `d(i,j) = (‖p‖₂²/n)[((ρI - A_j̃j̃)P)⁻¹_i + ((ρI - A_ĩĩ)P)⁻¹_j]·1`,
/// where `A_j̃j̃` is `A` with row and column `j` set to zero.
///
/// `ρI - A_j̃j̃` is block diagonal (the `Λ_ĵĵ` block and `ρ` at `(j,j)`), so
/// row `i ≠ j` of the inverse is zero in column `j`. The one-sided terms are
/// not those of [`long_walk_distance`]; only their sums agree.
pub fn long_walk_via_row_scaled(a: &DMatrix<f64>) -> Result<DistanceMatrix> {
    let spec = spectral::perron(a)?;
    let n = a.nrows();
    let p = &spec.p;
    let pdiag = spec.p_diag();
    let c = p.norm_squared() / n as f64;
    from_one_sided(n, c, |j| {
        let mut m = DMatrix::identity(n, n) * spec.rho - a;
        for k in 0..n {
            if k != j {
                m[(j, k)] = 0.0;
                m[(k, j)] = 0.0;
            }
        }
        m[(j, j)] = spec.rho;
        let inv = linalg::inverse(&(m * &pdiag))?;
        Ok(DVector::from_fn(n, |i, _| inv.row(i).sum()))
    })
}

/// Long walk distance as a ratio of determinants:
/// `d(i,j) = det((Λ_îî)_ĵĵ)/(p′_j²·det Λ_îî)`, evaluated in log space.
pub fn long_walk_via_determinant(a: &DMatrix<f64>) -> Result<DistanceMatrix> {
    let (spec, lambda) = perron_and_lambda(a)?;
    let n = a.nrows();
    let pp = &spec.p_prime;
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        let li = remove_vertex(&lambda, i);
        let (s_den, ld_den) = linalg::log_det(&li);
        for j in (0..n).filter(|&j| j != i) {
            let (s_num, ld_num) = linalg::log_det(&remove_vertex(&li, reduced_index(j, i)));
            if s_num * s_den <= 0.0 {
                return Err(Error::Singular);
            }
            d[(i, j)] = (ld_num - ld_den).exp() / (pp[j] * pp[j]);
        }
    }
    Ok(DistanceMatrix::new(d, MetricFamily::LongWalk, None))
}

/// Cofactor form on `L′ = P′ΛP′`:
/// `d(i,j) = (-1)^{u+v}·det((L′_îî)_ĵĵ)/det L′_ûv̂` for a fixed pair `(u, v)`.
pub fn long_walk_via_cofactor(a: &DMatrix<f64>, u: usize, v: usize) -> Result<DistanceMatrix> {
    let (spec, lambda) = perron_and_lambda(a)?;
    let pp = spec.p_prime_diag();
    let mut d = cofactor_distance(&(&pp * lambda * &pp), u, v)?;
    d = DistanceMatrix::new(d.entries().clone(), MetricFamily::LongWalk, None);
    Ok(d)
}

fn cofactor_distance(l: &DMatrix<f64>, u: usize, v: usize) -> Result<DistanceMatrix> {
    let n = l.nrows();
    if u >= n || v >= n {
        return Err(Error::UnknownVertex(u.max(v)));
    }
    let (s_den, ld_den) = linalg::log_det(&remove_row_col(l, u, v));
    let sign_uv = if (u + v).is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        let li = remove_vertex(l, i);
        for j in (0..n).filter(|&j| j != i) {
            let (s_num, ld_num) = linalg::log_det(&remove_vertex(&li, reduced_index(j, i)));
            if sign_uv * s_num * s_den <= 0.0 {
                return Err(Error::Singular);
            }
            d[(i, j)] = (ld_num - ld_den).exp();
        }
    }
    Ok(DistanceMatrix::new(d, MetricFamily::Resistance, None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GInverseKind {
    /// `(X + vvᵀ)⁻¹ - vvᵀ`.
    Group,
    /// `(X + vvᵀ)⁻¹`.
    PlusProjector,
    /// `X# + avᵀ + vbᵀ`.
    Shifted,
}

/// A g-inverse `Z` of a symmetric matrix `X` whose kernel is spanned by the
/// unit vector `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct GInverse {
    pub matrix: DMatrix<f64>,
    pub kind: GInverseKind,
}

impl GInverse {
    pub fn plus_projector(x: &DMatrix<f64>, v: &DVector<f64>) -> Result<Self> {
        Ok(Self {
            matrix: linalg::inverse(&(x + v * v.transpose()))?,
            kind: GInverseKind::PlusProjector,
        })
    }

    pub fn group(x: &DMatrix<f64>, v: &DVector<f64>) -> Result<Self> {
        let plus = Self::plus_projector(x, v)?;
        Ok(Self {
            matrix: plus.matrix - v * v.transpose(),
            kind: GInverseKind::Group,
        })
    }

    pub fn shifted(x: &DMatrix<f64>, v: &DVector<f64>, a: &DVector<f64>, b: &DVector<f64>) -> Result<Self> {
        let group = Self::group(x, v)?;
        Ok(Self {
            matrix: group.matrix + a * v.transpose() + v * b.transpose(),
            kind: GInverseKind::Shifted,
        })
    }

    /// `‖XZX - X‖∞/‖X‖∞`.
    pub fn verify(&self, x: &DMatrix<f64>) -> f64 {
        linalg::relative_diff(&(x * &self.matrix * x), x)
    }

    /// `zᵀZz` for every pair, with `z = e_i/s_i - e_j/s_j`.
    fn quadratic_distance(&self, s: &DVector<f64>) -> DMatrix<f64> {
        let z = &self.matrix;
        let n = z.nrows();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                return 0.0;
            }
            let (a, b) = (1.0 / s[i], 1.0 / s[j]);
            a * a * z[(i, i)] + b * b * z[(j, j)] - a * b * (z[(i, j)] + z[(j, i)])
        })
    }
}

/// Which g-inverse of `Λ` or `L` to use.
#[derive(Debug, Clone, PartialEq)]
pub enum GInverseChoice {
    Group,
    PlusProjector,
    Shifted { a: DVector<f64>, b: DVector<f64> },
}

impl GInverseChoice {
    fn build(&self, x: &DMatrix<f64>, v: &DVector<f64>) -> Result<GInverse> {
        match self {
            GInverseChoice::Group => GInverse::group(x, v),
            GInverseChoice::PlusProjector => GInverse::plus_projector(x, v),
            GInverseChoice::Shifted { a, b } => GInverse::shifted(x, v, a, b),
        }
    }
}

/// `d(i,j) = zᵀΛ⁻z` with `z_i = 1/p′_i`, `z_j = -1/p′_j`.
pub fn long_walk_via_ginverse(a: &DMatrix<f64>, choice: &GInverseChoice) -> Result<DistanceMatrix> {
    let (spec, lambda) = perron_and_lambda(a)?;
    let z = choice.build(&lambda, &spec.p_tilde)?;
    Ok(DistanceMatrix::new(
        z.quadratic_distance(&spec.p_prime),
        MetricFamily::LongWalk,
        None,
    ))
}

/// `d(i,j) = z_ûᵀ(Λ_v̂û)⁻¹z_v̂`, where `Λ_v̂û` is `Λ` without row `v` and column `u`.
pub fn long_walk_via_reduced(a: &DMatrix<f64>, u: usize, v: usize) -> Result<DistanceMatrix> {
    let (spec, lambda) = perron_and_lambda(a)?;
    let d = reduced_distance(&lambda, &spec.p_prime, u, v)?;
    Ok(DistanceMatrix::new(d, MetricFamily::LongWalk, None))
}

fn reduced_distance(x: &DMatrix<f64>, s: &DVector<f64>, u: usize, v: usize) -> Result<DMatrix<f64>> {
    let n = x.nrows();
    if u >= n || v >= n {
        return Err(Error::UnknownVertex(u.max(v)));
    }
    // rows of the inverse are indexed by V∖u, columns by V∖v
    let inv = linalg::inverse(&remove_row_col(x, v, u))?;
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let mut z = DVector::zeros(n);
            z[i] = 1.0 / s[i];
            z[j] = -1.0 / s[j];
            let zu = remove_entry(&z, u);
            let zv = remove_entry(&z, v);
            d[(i, j)] = zu.dot(&(&inv * zv));
        }
    }
    Ok(d)
}

/// Resistance distance `d(i,j) = n⁻¹((L_ĵĵ)⁻¹_i + (L_îî)⁻¹_j)·1`.
pub fn resistance_distance(g: &WeightedMultigraph) -> Result<DistanceMatrix> {
    g.ensure_connected()?;
    let l = g.laplacian();
    let n = g.order();
    let mut d = from_one_sided(n, 1.0 / n as f64, |j| {
        let x = linalg::solve(&remove_vertex(&l, j), &DVector::from_element(n - 1, 1.0))?;
        Ok(expand(&x, j))
    })?;
    d = DistanceMatrix::new(d.entries().clone(), MetricFamily::Resistance, None);
    Ok(d)
}

fn unit_ones(n: usize) -> DVector<f64> {
    DVector::from_element(n, 1.0 / (n as f64).sqrt())
}

/// `d(i,j) = l⁻_ii + l⁻_jj - 2l⁻_ij` for a g-inverse `L⁻`.
pub fn resistance_via_ginverse(g: &WeightedMultigraph, choice: &GInverseChoice) -> Result<DistanceMatrix> {
    g.ensure_connected()?;
    let n = g.order();
    let z = choice.build(&g.laplacian(), &unit_ones(n))?;
    Ok(DistanceMatrix::new(
        z.quadratic_distance(&DVector::from_element(n, 1.0)),
        MetricFamily::Resistance,
        None,
    ))
}

/// `d(i,j) = (-1)^{u+v}·det((L_îî)_ĵĵ)/det L_ûv̂`.
pub fn resistance_via_cofactor(g: &WeightedMultigraph, u: usize, v: usize) -> Result<DistanceMatrix> {
    g.ensure_connected()?;
    cofactor_distance(&g.laplacian(), u, v)
}

/// `d(i,j) = x_ûᵀ(L_v̂û)⁻¹x_v̂` with `x = e_i - e_j`.
pub fn resistance_via_reduced(g: &WeightedMultigraph, u: usize, v: usize) -> Result<DistanceMatrix> {
    g.ensure_connected()?;
    let n = g.order();
    let d = reduced_distance(&g.laplacian(), &DVector::from_element(n, 1.0), u, v)?;
    Ok(DistanceMatrix::new(d, MetricFamily::Resistance, None))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub alpha: f64,
    /// `‖D_α - reference‖∞`, absent if the evaluation failed.
    pub deviation: Option<f64>,
    /// Deviation divided by the largest reference entry.
    pub relative: Option<f64>,
    /// Scale factor used at this α, where the family has one.
    pub theta: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub family: MetricFamily,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    fn deviations(&self) -> Vec<f64> {
        self.points.iter().filter_map(|p| p.deviation).collect()
    }

    /// Strict decrease over all successfully evaluated points, from index `burn_in`.
    pub fn is_decreasing(&self, burn_in: usize) -> bool {
        let devs = self.deviations();
        devs.iter().skip(burn_in).collect::<Vec<_>>().windows(2).all(|w| w[1] < w[0])
    }

    pub fn final_deviation(&self) -> Option<f64> {
        self.points.last().and_then(|p| p.deviation)
    }

    pub fn final_relative(&self) -> Option<f64> {
        self.points.last().and_then(|p| p.relative)
    }

    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.error.is_some()).count()
    }
}

/// Evaluates `eval` along `alphas` and records the deviation from `reference`.
/// A failed evaluation is recorded at its point and the sweep continues.
pub fn sweep(
    family: MetricFamily,
    alphas: &[f64],
    reference: &DistanceMatrix,
    mut eval: impl FnMut(f64) -> Result<DistanceMatrix>,
) -> SweepResult {
    let scale = linalg::max_abs(reference.entries());
    let points = alphas
        .iter()
        .map(|&alpha| match eval(alpha) {
            Ok(d) => {
                let dev = linalg::max_abs_diff(d.entries(), reference.entries());
                SweepPoint {
                    alpha,
                    deviation: Some(dev),
                    relative: Some(dev / scale),
                    theta: d.param().map(|p| p.theta),
                    error: None,
                }
            }
            Err(e) => SweepPoint {
                alpha,
                deviation: None,
                relative: None,
                theta: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    SweepResult { family, points }
}

/// Sweep of a parametric family on `g` against `reference`.
pub fn limit_sweep(
    family: MetricFamily,
    g: &WeightedMultigraph,
    alphas: &[f64],
    reference: &DistanceMatrix,
) -> Result<SweepResult> {
    if !family.is_parametric() {
        return Err(Error::InvalidParameter(format!("{family} has no parameter to sweep")));
    }
    let params = crate::metrics::MetricParams::default();
    Ok(sweep(family, alphas, reference, |alpha| {
        crate::metrics::compute(
            family,
            g,
            &crate::metrics::MetricParams {
                alpha: Some(alpha),
                ..params.clone()
            },
        )
    }))
}

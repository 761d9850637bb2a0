//! Verification suites run against one input graph. Each produces a
//! serializable report listing every check with its measured value.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::distance::{DistanceMatrix, MetricFamily};
use crate::error::{Error, Result};
use crate::ewalk::{self, SweepDirection, ThetaSchedule, DEFAULT_BETA};
use crate::graph::WeightedMultigraph;
use crate::limit::{self, GInverseChoice, HittingWeights, SweepResult};
use crate::linalg;
use crate::metrics::{compute, MetricParams};
use crate::oracle;
use crate::spectral;
use crate::transforms::{self, ExpScaled, Scaled, WeightTransform};
use crate::walk;

pub const AGREEMENT_TOL: f64 = 1e-9;
pub const SPECTRAL_IDENTITY_TOL: f64 = 1e-10;
pub const GEODETIC_EPS: f64 = 1e-9;
pub const GEODETIC_DELTA: f64 = 1e-6;
pub const WALK_SWEEP_CAP: f64 = 1e-2;
pub const EWALK_SWEEP_CAP_ZERO: f64 = 5e-2;
pub const EWALK_SWEEP_CAP_INFINITY: f64 = 1e-2;
pub const SMALL_ALPHAS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];
pub const LARGE_ALPHAS: [f64; 4] = [1e1, 1e2, 1e3, 1e4];
/// Walk-count budget per enumeration.
pub const ENUMERATION_BUDGET: f64 = 2e5;
pub const ENUMERATION_MAX_LEN: usize = 12;
pub const POWER_SERIES_LEN: usize = 60;
pub const LEG_CAP: usize = 400;
/// Allowance for rounding, relative to the largest entry compared.
pub const ROUNDING_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Oracles,
    Equivalences,
    Limits,
    Properties,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Oracles, Suite::Equivalences, Suite::Limits, Suite::Properties];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracles => "oracles",
            Suite::Equivalences => "equivalences",
            Suite::Limits => "limits",
            Suite::Properties => "properties",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `measured ≤ threshold`.
    pub fn at_most(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            threshold,
            passed: measured <= threshold,
            detail: None,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool, detail: Option<String>) -> Self {
        Self {
            name: name.into(),
            measured: if ok { 0.0 } else { 1.0 },
            threshold: 0.0,
            passed: ok,
            detail,
        }
    }

    fn failed(name: impl Into<String>, err: &Error) -> Self {
        Self::flag(name, false, Some(err.to_string()))
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, c: Check) {
        self.0.push(c);
    }

    /// Runs `f`; an error becomes a failed check named `name`.
    fn attempt(&mut self, name: &str, f: impl FnOnce(&mut Vec<Check>) -> Result<()>) {
        let mut out = Vec::new();
        if let Err(e) = f(&mut out) {
            out.push(Check::failed(name, &e));
        }
        self.0.extend(out);
    }
}

pub fn run_suite(suite: Suite, g: &WeightedMultigraph) -> Result<SuiteReport> {
    g.ensure_connected()?;
    let checks = match suite {
        Suite::Oracles => oracle_checks(g),
        Suite::Equivalences => equivalence_checks(g),
        Suite::Limits => limit_checks(g),
        Suite::Properties => property_checks(g),
    };
    Ok(SuiteReport {
        suite,
        n: g.order(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn rel(a: &DistanceMatrix, b: &DistanceMatrix) -> f64 {
    linalg::relative_diff(a.entries(), b.entries())
}

/// Every closed form of the long walk distance, labelled.
pub fn long_walk_forms(a: &nalgebra::DMatrix<f64>) -> Result<Vec<(&'static str, DistanceMatrix)>> {
    Ok(vec![
        ("principal-submatrix", limit::long_walk_distance(a)?),
        ("stochastic", limit::long_walk_via_stochastic(a)?),
        ("row-scaled", limit::long_walk_via_row_scaled(a)?),
        ("determinant", limit::long_walk_via_determinant(a)?),
        ("g-inverse", limit::long_walk_via_ginverse(a, &GInverseChoice::Group)?),
    ])
}

/// Largest pairwise relative deviation among the given matrices.
pub fn max_pairwise_deviation(forms: &[(&str, DistanceMatrix)]) -> f64 {
    let mut worst: f64 = 0.0;
    for (x, (_, a)) in forms.iter().enumerate() {
        for (_, b) in &forms[x + 1..] {
            worst = worst.max(rel(a, b)).max(rel(b, a));
        }
    }
    worst
}

/// Closed forms against truncated walk sums.
pub fn oracle_checks(g: &WeightedMultigraph) -> Vec<Check> {
    let mut checks = Checks(Vec::new());
    let n = g.order();
    let a = g.adjacency();
    let rho = match spectral::perron(&a) {
        Ok(s) => s.rho,
        Err(e) => return vec![Check::failed("perron", &e)],
    };
    let enum_len = oracle::enumerable_length(g, ENUMERATION_MAX_LEN, ENUMERATION_BUDGET);
    for frac in [0.3, 0.7] {
        let t = frac / rho;
        checks.attempt(&format!("oracle t={frac}/rho"), |out| {
            let r = walk::walk_weight_matrix(&a, t)?;
            let h = HittingWeights::at(&a, t)?;
            let series = oracle::walk_weight_by_powers(&a, t, POWER_SERIES_LEN);
            let slack = ROUNDING_SLACK * linalg::max_abs(r.entries()).max(1.0);
            let bound = oracle::TruncationBound::geometric(t, rho, POWER_SERIES_LEN, n).tail + slack;
            out.push(Check::at_most(
                format!("R_t vs series K={POWER_SERIES_LEN}, t={frac}/rho"),
                linalg::max_abs_diff(r.entries(), &series),
                bound,
            ));
            let mut hit_dev: f64 = 0.0;
            let mut com_dev: f64 = 0.0;
            for j in 0..n {
                let hp = oracle::hitting_by_powers(&a, t, j, POWER_SERIES_LEN);
                for i in 0..n {
                    hit_dev = hit_dev.max((hp[i] - h.get(i, j)).abs());
                    if i != j {
                        let c = oracle::commute_by_powers(&a, t, i, j, POWER_SERIES_LEN);
                        com_dev = com_dev.max((c - h.commute(i, j)).abs());
                    }
                }
            }
            out.push(Check::at_most(
                format!("hitting vs series K={POWER_SERIES_LEN}, t={frac}/rho"),
                hit_dev,
                bound,
            ));
            out.push(Check::at_most(
                format!("commute vs series K={POWER_SERIES_LEN}, t={frac}/rho"),
                com_dev,
                bound,
            ));

            if n <= 5 {
                let ebound = oracle::TruncationBound::geometric(t, rho, enum_len, n).tail + slack;
                let eseries = oracle::walk_weight_by_powers(&a, t, enum_len);
                let (mut dev_r, mut dev_h, mut dev_c) = (0.0f64, 0.0f64, 0.0f64);
                let mut exact: f64 = 0.0;
                let mut sandwich = true;
                for i in 0..n {
                    for j in 0..n {
                        let (w, _) = oracle::enumerate_walk_weight(g, t, i, j, enum_len)?;
                        dev_r = dev_r.max((w - r.entries()[(i, j)]).abs());
                        exact = exact.max((w - eseries[(i, j)]).abs() / eseries[(i, j)].max(f64::MIN_POSITIVE));
                        let (hw, _) = oracle::enumerate_hitting_weight(g, t, i, j, enum_len)?;
                        dev_h = dev_h.max((hw - h.get(i, j)).abs());
                        if i != j {
                            let (cw, _) = oracle::enumerate_commute_cycle_weight(g, t, i, j, enum_len)?;
                            dev_c = dev_c.max((cw - h.commute(i, j)).abs());
                            let half = enum_len / 2;
                            let lo = oracle::hitting_by_powers(&a, t, j, half)[i]
                                * oracle::hitting_by_powers(&a, t, i, half)[j];
                            let hi = oracle::hitting_by_powers(&a, t, j, enum_len)[i]
                                * oracle::hitting_by_powers(&a, t, i, enum_len)[j];
                            let slack = 1e-12 * hi;
                            sandwich &= lo <= cw + slack && cw <= hi + slack;
                        }
                    }
                }
                out.push(Check::at_most(format!("R_t vs enumeration K={enum_len}, t={frac}/rho"), dev_r, ebound));
                out.push(Check::at_most(
                    format!("hitting vs enumeration K={enum_len}, t={frac}/rho"),
                    dev_h,
                    ebound,
                ));
                out.push(Check::at_most(
                    format!("commute vs enumeration K={enum_len}, t={frac}/rho"),
                    dev_c,
                    ebound,
                ));
                out.push(Check::at_most(
                    format!("enumeration vs matrix powers K={enum_len}, t={frac}/rho"),
                    exact,
                    1e-12,
                ));
                out.push(Check::flag(
                    format!("commute sandwich K={enum_len}, t={frac}/rho"),
                    sandwich,
                    None,
                ));
            }
            Ok(())
        });
    }

    checks.attempt("avoiding cycles", |out| {
        let lw = limit::long_walk_distance(&a)?;
        let theta = ewalk::theta_infinity(&a)?;
        let (mut dev, mut bound, mut dev_j, mut bound_j) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for i in 0..n {
            for j in (i + 1)..n {
                let x = oracle::avoiding_cycles(&a, i, j, LEG_CAP)?;
                let y = oracle::avoiding_cycles(&a, j, i, LEG_CAP)?;
                let scale = 1.0 / (n as f64 * rho);
                dev = dev.max(((x.c + y.c) * scale - lw.get(i, j)).abs() - (x.c_bound + y.c_bound) * scale);
                bound = bound.max((x.c_bound + y.c_bound) * scale);
                let jscale = theta / (2.0 * rho);
                dev_j = dev_j
                    .max(((x.c_jump + y.c_jump) * jscale - lw.get(i, j)).abs() - (x.c_jump_bound + y.c_jump_bound) * jscale);
                bound_j = bound_j.max((x.c_jump_bound + y.c_jump_bound) * jscale);
            }
        }
        // excess over the truncation bound, with rounding slack
        out.push(
            Check::at_most(format!("long walk vs avoiding cycles, legs <= {LEG_CAP}"), dev, 1e-12)
                .with_detail(format!("largest truncation bound {bound:e}")),
        );
        out.push(
            Check::at_most(format!("long e-walk vs cycles with a jump, legs <= {LEG_CAP}"), dev_j, 1e-12)
                .with_detail(format!("largest truncation bound {bound_j:e}")),
        );
        Ok(())
    });
    checks.0
}

/// Long-walk formula agreement and the equivalence identities.
pub fn equivalence_checks(g: &WeightedMultigraph) -> Vec<Check> {
    let mut checks = Checks(Vec::new());
    let a = g.adjacency();
    let n = g.order();

    checks.attempt("long walk formulas", |out| {
        let forms = long_walk_forms(&a)?;
        out.push(Check::at_most("long walk: five formulas agree", max_pairwise_deviation(&forms), AGREEMENT_TOL));
        let base = &forms[0].1;
        let extra = [
            limit::long_walk_via_ginverse(&a, &GInverseChoice::PlusProjector)?,
            limit::long_walk_via_reduced(&a, 0, 0)?,
            limit::long_walk_via_reduced(&a, 0, n - 1)?,
            limit::long_walk_via_cofactor(&a, 0, n - 1)?,
            limit::long_walk_via_transition(&a)?,
        ];
        let worst = extra.iter().map(|d| rel(d, base)).fold(0.0, f64::max);
        out.push(Check::at_most("long walk: g-inverse, (u,v) and cofactor variants", worst, AGREEMENT_TOL));
        Ok(())
    });

    checks.attempt("equivalence A", |out| {
        let m_min = g.weighted_degrees().into_iter().fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        for alpha in [0.5, 1.0, 2.0, 5.0] {
            let lf = walk::log_forest_distance(g, &Scaled, alpha, walk::theta_scaling(alpha, n))?;
            for m in [m_min, m_min + 3.0] {
                let b = transforms::balance_graph(g, Some(m))?;
                let w = walk::walk_distance(&b.result.adjacency(), alpha)?;
                worst = worst.max(rel(&lf, &w));
            }
        }
        out.push(Check::at_most("A: log-forest = walk on balance-graph", worst, AGREEMENT_TOL));
        Ok(())
    });

    checks.attempt("balance invariance", |out| {
        let m_min = g.weighted_degrees().into_iter().fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        for alpha in [0.5, 2.0] {
            let d1 = walk::walk_distance(&transforms::balance_graph(g, Some(m_min))?.result.adjacency(), alpha)?;
            let d2 = walk::walk_distance(&transforms::balance_graph(g, Some(m_min + 3.0))?.result.adjacency(), alpha)?;
            worst = worst.max(rel(&d1, &d2));
        }
        out.push(Check::at_most("walk distance independent of balance degree", worst, AGREEMENT_TOL));
        Ok(())
    });

    checks.attempt("equivalence B", |out| {
        let r = limit::resistance_distance(g)?;
        let lw = limit::long_walk_distance(&transforms::balance_graph(g, None)?.result.adjacency())?;
        out.push(Check::at_most("B: resistance = long walk on balance-graph", rel(&r, &lw), AGREEMENT_TOL));
        Ok(())
    });

    checks.attempt("equivalence C", |out| {
        let lw = limit::long_walk_distance(&a)?;
        let r = limit::resistance_distance(&transforms::similarity_transform(g)?)?;
        out.push(Check::at_most("C: long walk = resistance of P'AP'", rel(&lw, &r), AGREEMENT_TOL));
        Ok(())
    });

    checks.attempt("general balancing", |out| {
        let mut worst: f64 = 0.0;
        let mut ident: f64 = 0.0;
        let transforms: [&dyn WeightTransform; 2] = [&Scaled, &ExpScaled];
        for phi in transforms {
            for alpha in [0.5, 1.0, 2.0] {
                let g_alpha = g.map_weights(|e| phi.apply(e.weight, alpha))?;
                let l = g_alpha.laplacian();
                let m_alpha = (0..n).map(|i| l[(i, i)]).fold(0.0, f64::max);
                let a_alpha = transforms::general_balance(&g_alpha, m_alpha)?;
                let r = walk::modified_walk_proximity(&a_alpha)?;
                let q = walk::log_forest_proximity(g, phi, alpha)?;
                ident = ident.max(linalg::relative_diff(&(r.entries() / (m_alpha + 1.0)), q.entries()));
                let theta = walk::theta_scaling(alpha, n);
                let via_walk = walk::modified_walk_distance(&a_alpha, theta)?;
                let direct = walk::log_forest_distance(g, phi, alpha, theta)?;
                worst = worst.max(rel(&via_walk, &direct));
            }
        }
        out.push(Check::at_most("(I - A(alpha))^-1 = (m+1) Q_alpha", ident, 1e-12));
        out.push(Check::at_most("log-forest = modified walk on balanced A(alpha)", worst, AGREEMENT_TOL));
        Ok(())
    });

    checks.attempt("long e-walk", |out| {
        let lw = limit::long_walk_distance(&a)?;
        let le = ewalk::long_ewalk_distance(&a, ewalk::theta_infinity(&a)?)?;
        out.push(Check::at_most("long e-walk = long walk with theta_inf", rel(&le, &lw), AGREEMENT_TOL));
        Ok(())
    });
    checks.0
}

fn sweep_checks(out: &mut Vec<Check>, label: &str, sweep: &SweepResult, cap: f64) {
    let devs: Vec<String> = sweep
        .points
        .iter()
        .map(|p| match (p.deviation, &p.error) {
            (Some(d), _) => format!("{:e}:{d:.4e}", p.alpha),
            (None, Some(e)) => format!("{:e}:error({e})", p.alpha),
            _ => format!("{:e}:?", p.alpha),
        })
        .collect();
    out.push(Check::flag(
        format!("{label}: monotone decrease"),
        sweep.failures() == 0 && sweep.is_decreasing(0),
        Some(devs.join(", ")),
    ));
    out.push(
        Check::at_most(format!("{label}: final deviation"), sweep.final_deviation().unwrap_or(f64::NAN), cap)
            .with_detail(format!(
                "relative to largest reference entry: {:.4e}",
                sweep.final_relative().unwrap_or(f64::NAN)
            )),
    );
}

/// Convergence of the parametric families to their limits.
pub fn limit_checks(g: &WeightedMultigraph) -> Vec<Check> {
    let mut checks = Checks(Vec::new());
    let a = g.adjacency();

    checks.attempt("walk sweeps", |out| {
        let sp = limit::shortest_path_matrix(g)?;
        let s = limit::limit_sweep(MetricFamily::Walk, g, &SMALL_ALPHAS, &sp)?;
        sweep_checks(out, "walk -> shortest path", &s, WALK_SWEEP_CAP);
        let lw = limit::long_walk_distance(&a)?;
        let s = limit::limit_sweep(MetricFamily::Walk, g, &LARGE_ALPHAS, &lw)?;
        sweep_checks(out, "walk -> long walk", &s, WALK_SWEEP_CAP);
        Ok(())
    });

    checks.attempt("e-walk sweeps", |out| {
        let schedule = ThetaSchedule::for_adjacency(&a, DEFAULT_BETA)?;
        let s = ewalk::ewalk_limit_sweep(g, &schedule, SweepDirection::ToZero, &SMALL_ALPHAS)?;
        sweep_checks(out, "e-walk -> weighted shortest path", &s, EWALK_SWEEP_CAP_ZERO);
        let s = ewalk::ewalk_limit_sweep(g, &schedule, SweepDirection::ToInfinity, &LARGE_ALPHAS)?;
        sweep_checks(out, "e-walk -> long e-walk", &s, EWALK_SWEEP_CAP_INFINITY);
        out.push(Check::at_most("theta schedule at alpha=1e-6", (schedule.eval(1e-6) - 1.0).abs(), 1e-5));
        out.push(Check::at_most(
            "theta schedule at alpha=1e6",
            (schedule.eval(1e6) - schedule.theta_infinity).abs(),
            1e-5 * schedule.theta_infinity,
        ));
        Ok(())
    });

    checks.attempt("eigenprojection", |out| {
        let rho = spectral::perron(&a)?.rho;
        let ts: Vec<f64> = (2..=6).map(|k| (1.0 - 10f64.powi(-k)) / rho).collect();
        let e = spectral::eigenprojection_limit_check(&a, &ts)?;
        out.push(Check::flag(
            "scaled resolvent -> eigenprojection, decreasing",
            e.strictly_decreasing(),
            Some(format!("{:?}", e.deviations)),
        ));
        Ok(())
    });
    checks.0
}

/// The families and parameters used by the property suite.
pub fn property_metrics(g: &WeightedMultigraph) -> Result<Vec<(String, DistanceMatrix)>> {
    let mut out = Vec::new();
    for family in MetricFamily::ALL {
        let alphas: &[f64] = if family.is_parametric() { &[0.5, 2.0] } else { &[1.0] };
        for &alpha in alphas {
            let d = compute(family, g, &MetricParams::with_alpha(alpha))?;
            let name = if family.is_parametric() {
                format!("{family} alpha={alpha}")
            } else {
                family.to_string()
            };
            out.push((name, d));
        }
    }
    Ok(out)
}

/// Families expected to be graph-geodetic with the separator characterization.
pub fn geodetic_family(f: MetricFamily) -> bool {
    matches!(
        f,
        MetricFamily::Walk
            | MetricFamily::EWalk
            | MetricFamily::LogForest
            | MetricFamily::LongWalk
            | MetricFamily::LongEWalk
            | MetricFamily::Resistance
    )
}

/// Metric axioms, geodeticity, transition inequality, Euclidean embedding,
/// and the identities at `t = ρ⁻¹`.
pub fn property_checks(g: &WeightedMultigraph) -> Vec<Check> {
    let mut checks = Checks(Vec::new());
    let a = g.adjacency();
    let n = g.order();

    checks.attempt("metric families", |out| {
        for (name, d) in property_metrics(g)? {
            let m = oracle::check_metric(&d);
            out.push(
                Check::flag(format!("{name}: metric axioms"), m.passed, None)
                    .with_detail(format!("triangle excess {:e}", m.max_triangle_excess)),
            );
            if geodetic_family(d.family()) {
                let r = oracle::check_geodetic(&d, g, GEODETIC_EPS, GEODETIC_DELTA);
                out.push(Check::flag(
                    format!("{name}: geodetic iff separator"),
                    r.passed,
                    Some(format!(
                        "{} triples, {} mismatches, {} in dead zone, max separating defect {:e}, min other defect {:e}",
                        r.triples,
                        r.mismatches.len(),
                        r.dead_zone.len(),
                        r.max_separating_defect,
                        r.min_nonseparating_defect
                    )),
                ));
            }
            if matches!(d.family(), MetricFamily::LongWalk | MetricFamily::Resistance) {
                let p = oracle::check_psd_centered(&d);
                out.push(
                    Check::flag(format!("{name}: squared Euclidean"), p.passed, None)
                        .with_detail(format!("min eigenvalue {:e}", p.min_eigenvalue)),
                );
            }
        }
        Ok(())
    });

    checks.attempt("transition inequality", |out| {
        let rho = spectral::perron(&a)?.rho;
        for frac in [0.3, 0.7] {
            let r = walk::walk_weight_matrix(&a, frac / rho)?;
            let rep = oracle::check_transition(r.entries(), Some(g));
            out.push(
                Check::flag(format!("R_t t={frac}/rho: transition and bottleneck"), rep.passed, None)
                    .with_detail(format!(
                        "max violation {:e}, {} mismatches",
                        rep.max_violation,
                        rep.bottleneck_mismatches.len()
                    )),
            );
        }
        for alpha in [0.5, 2.0] {
            let q = walk::log_forest_proximity(g, &Scaled, alpha)?;
            let rep = oracle::check_transition(q.entries(), Some(g));
            out.push(
                Check::flag(format!("Q_alpha alpha={alpha}: transition and bottleneck"), rep.passed, None)
                    .with_detail(format!(
                        "max violation {:e}, {} mismatches",
                        rep.max_violation,
                        rep.bottleneck_mismatches.len()
                    )),
            );
        }
        Ok(())
    });

    checks.attempt("spectral identities", |out| {
        let spec = spectral::perron(&a)?;
        let h = HittingWeights::at_spectral_radius(&a)?;
        let via_lambda = limit::para_laplacian_hitting(&a)?;
        let (mut c_dev, mut r_dev, mut l_dev) = (0.0f64, 0.0f64, 0.0f64);
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                let ratio = spec.p[i] / spec.p[j];
                c_dev = c_dev.max((h.commute(i, j) - 1.0).abs());
                r_dev = r_dev.max((h.get(i, j) / ratio - 1.0).abs());
                l_dev = l_dev.max((via_lambda[(i, j)] / ratio - 1.0).abs());
            }
        }
        out.push(Check::at_most("commute weight at 1/rho equals 1", c_dev, SPECTRAL_IDENTITY_TOL));
        out.push(Check::at_most("hitting weight at 1/rho equals p_i/p_j", r_dev, SPECTRAL_IDENTITY_TOL));
        out.push(Check::at_most("para-Laplacian hitting identity", l_dev, SPECTRAL_IDENTITY_TOL));

        let t = 0.5 / spec.rho;
        let r = walk::walk_weight_matrix(&a, t)?;
        let ht = HittingWeights::at(&a, t)?;
        let mut dec: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let rij = r.entries()[(i, j)];
                dec = dec.max((ht.get(i, j) * r.entries()[(j, j)] - rij).abs() / rij);
            }
        }
        out.push(Check::at_most("r_ij = r_ij(1) r_jj", dec, SPECTRAL_IDENTITY_TOL));
        let below = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .all(|(i, j)| ht.commute(i, j) < 1.0);
        out.push(Check::flag("commute weight below 1 inside the radius", below, None));
        Ok(())
    });

    checks.push({
        let mut agree = true;
        if n <= 8 {
            for j in 0..n {
                for i in 0..n {
                    for k in (0..n).filter(|&k| k != i) {
                        agree &= g.separates(j, i, k) == oracle::separates_by_paths(g, j, i, k);
                    }
                }
            }
        }
        Check::flag("separator query matches path enumeration", agree, None)
    });
    checks.0
}

//! Acceptance criteria. Each prints one PASS/FAIL line; the process exits
//! nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use walkdist::corpus::{self, DEFAULT_SEED};
use walkdist::ewalk::{self, SweepDirection, ThetaSchedule};
use walkdist::graph::WeightedMultigraph;
use walkdist::limit::{self, HittingWeights};
use walkdist::linalg;
use walkdist::metrics::{compute, MetricParams};
use walkdist::spectral;
use walkdist::table;
use walkdist::transforms::{self, Scaled};
use walkdist::verify;
use walkdist::walk;
use walkdist::{DistanceMatrix, MetricFamily};

const TABLE_TOL: f64 = 0.005;
const EXAMPLE_TOL: f64 = 1e-9;
const FORMULA_TOL: f64 = 1e-9;
const EQUIVALENCE_TOL: f64 = 1e-9;
const SPECTRAL_TOL: f64 = 1e-10;
const SWEEP_CAP: f64 = 1e-2;
const EWALK_ZERO_CAP: f64 = 5e-2;
const EWALK_INFINITY_CAP: f64 = 1e-2;
const LONG_EWALK_TOL: f64 = 1e-9;
const GEODETIC_EPS: f64 = 1e-9;
const GEODETIC_DELTA: f64 = 1e-6;
const ROUNDING: f64 = 1e-12;

const TABLE_TIME: Duration = Duration::from_secs(1);
const EXAMPLE_TIME: Duration = Duration::from_millis(100);
const FORMULA_TIME: Duration = Duration::from_secs(10);
const ORACLE_TIME: Duration = Duration::from_secs(60);

const CORPUS_SIZE: usize = 50;
const CORPUS_MAX_N: usize = 8;
const SMALL_RANDOM: usize = 20;

struct Outcome {
    passed: bool,
    summary: String,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>) -> Self {
        Self { passed, summary: summary.into() }
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn rel(a: &DistanceMatrix, b: &DistanceMatrix) -> f64 {
    linalg::relative_diff(a.entries(), b.entries())
}

fn random_corpus() -> Vec<WeightedMultigraph> {
    corpus::random_corpus(CORPUS_SIZE, 2, CORPUS_MAX_N, DEFAULT_SEED)
}

fn timed(limit: Duration, run: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = run();
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    Outcome::new(
        out.passed && in_time,
        format!("{}; {:.3}s (limit {:.3}s)", out.summary, elapsed.as_secs_f64(), limit.as_secs_f64()),
    )
}

fn table_reproduction() -> Outcome {
    timed(TABLE_TIME, || match table::p4_table() {
        Ok(rows) => {
            let mut ok = 0;
            let mut total = 0;
            let mut worst: f64 = 0.0;
            for row in &rows {
                for comp in &row.computed {
                    for col in 0..3 {
                        total += 1;
                        let dev = (comp[col] - row.expected[col]).abs();
                        worst = worst.max(dev);
                        if dev <= TABLE_TOL {
                            ok += 1;
                        }
                    }
                }
            }
            Outcome::new(ok == total && total >= 21, format!("{ok}/{total} cells within {TABLE_TOL}, worst {worst:.2e}"))
        }
        Err(e) => Outcome::new(false, e.to_string()),
    })
}

fn long_walk_ratio() -> Outcome {
    timed(EXAMPLE_TIME, || {
        let ratio = |n: usize| -> f64 {
            let d = limit::long_walk_distance(&corpus::path(n).adjacency()).unwrap();
            d.get(0, 1) / d.get(1, 2)
        };
        let r4 = ratio(4);
        let r5 = ratio(5);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let e4 = (r4 / phi - 1.0).abs();
        let e5 = (r5 / 2.0 - 1.0).abs();
        Outcome::new(
            e4 <= EXAMPLE_TOL && e5 <= EXAMPLE_TOL,
            format!("P4 ratio {r4:.12} (rel err {e4:.1e}), P5 ratio {r5:.12} (rel err {e5:.1e})"),
        )
    })
}

fn weighted_path_example() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 3..=10 {
        let d = limit::long_walk_distance(&corpus::root2_path(n).adjacency()).unwrap();
        let expected = (n as f64 - 1.0) / n as f64;
        for i in 0..n - 1 {
            worst = worst.max((d.get(i, i + 1) - expected).abs());
        }
    }
    Outcome::new(worst <= EXAMPLE_TOL, format!("n = 3..10, max |d - (n-1)/n| = {worst:.2e}"))
}

fn formula_agreement() -> Outcome {
    timed(FORMULA_TIME, || {
        let graphs = random_corpus();
        let mut worst: f64 = 0.0;
        let mut loops = 0;
        let mut parallel = 0;
        for g in &graphs {
            loops += usize::from(g.edges().iter().any(|e| e.is_loop()));
            parallel += usize::from(has_parallel(g));
            match verify::long_walk_forms(&g.adjacency()) {
                Ok(forms) => worst = worst.max(verify::max_pairwise_deviation(&forms)),
                Err(e) => return Outcome::new(false, e.to_string()),
            }
        }
        Outcome::new(
            worst <= FORMULA_TOL,
            format!(
                "{} graphs ({loops} with loops, {parallel} with parallel edges), max pairwise deviation {worst:.2e}",
                graphs.len()
            ),
        )
    })
}

fn equivalences() -> Outcome {
    let run = || -> walkdist::Result<(f64, f64, f64)> {
        let (mut a_dev, mut b_dev, mut c_dev) = (0.0f64, 0.0f64, 0.0f64);
        for g in &random_corpus() {
            let n = g.order();
            let m_min = g.weighted_degrees().into_iter().fold(0.0, f64::max);
            for alpha in [0.5, 1.0, 2.0, 5.0] {
                let lf = walk::log_forest_distance(g, &Scaled, alpha, walk::theta_scaling(alpha, n))?;
                for m in [m_min, m_min + 3.0] {
                    let b = transforms::balance_graph(g, Some(m))?;
                    a_dev = a_dev.max(rel(&lf, &walk::walk_distance(&b.result.adjacency(), alpha)?));
                }
            }
            let balanced = transforms::balance_graph(g, None)?.result;
            b_dev = b_dev.max(rel(
                &limit::resistance_distance(g)?,
                &limit::long_walk_distance(&balanced.adjacency())?,
            ));
            c_dev = c_dev.max(rel(
                &limit::long_walk_distance(&g.adjacency())?,
                &limit::resistance_distance(&transforms::similarity_transform(g)?)?,
            ));
        }
        Ok((a_dev, b_dev, c_dev))
    };
    match run() {
        Ok((a, b, c)) => Outcome::new(
            a <= EQUIVALENCE_TOL && b <= EQUIVALENCE_TOL && c <= EQUIVALENCE_TOL,
            format!("A {a:.2e}, B {b:.2e}, C {c:.2e}"),
        ),
        Err(e) => Outcome::new(false, e.to_string()),
    }
}

fn spectral_identities() -> Outcome {
    let run = || -> walkdist::Result<(f64, f64, f64)> {
        let (mut c_dev, mut r_dev, mut l_dev) = (0.0f64, 0.0f64, 0.0f64);
        for g in &random_corpus() {
            let a = g.adjacency();
            let spec = spectral::perron(&a)?;
            let h = HittingWeights::at_spectral_radius(&a)?;
            let lam = limit::para_laplacian_hitting(&a)?;
            let n = g.order();
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    let ratio = spec.p[i] / spec.p[j];
                    c_dev = c_dev.max((h.commute(i, j) - 1.0).abs());
                    r_dev = r_dev.max((h.get(i, j) / ratio - 1.0).abs());
                    l_dev = l_dev.max((lam[(i, j)] / ratio - 1.0).abs());
                }
            }
        }
        Ok((c_dev, r_dev, l_dev))
    };
    match run() {
        Ok((c, r, l)) => Outcome::new(
            c <= SPECTRAL_TOL && r <= SPECTRAL_TOL && l <= SPECTRAL_TOL,
            format!("commute {c:.2e}, hitting {r:.2e}, para-Laplacian {l:.2e}"),
        ),
        Err(e) => Outcome::new(false, e.to_string()),
    }
}

fn limit_convergence() -> Outcome {
    let small = [1e-1, 1e-2, 1e-3, 1e-4];
    let large = [1e1, 1e2, 1e3, 1e4];
    let run = || -> walkdist::Result<(bool, String)> {
        let p4 = corpus::path(4);
        let a = p4.adjacency();
        let mut ok = true;
        let mut notes = Vec::new();
        let mut judge = |label: &str, s: &limit::SweepResult, cap: f64| {
            let last = s.final_deviation().unwrap_or(f64::NAN);
            let pass = s.failures() == 0 && s.is_decreasing(0) && last <= cap;
            ok &= pass;
            notes.push(format!("{label} {last:.4e}{}", if pass { "" } else { " FAIL" }));
        };
        let sp = limit::shortest_path_matrix(&p4)?;
        judge("W->s", &limit::limit_sweep(MetricFamily::Walk, &p4, &small, &sp)?, SWEEP_CAP);
        let lw = limit::long_walk_distance(&a)?;
        judge("W->LW", &limit::limit_sweep(MetricFamily::Walk, &p4, &large, &lw)?, SWEEP_CAP);
        for g in [p4.clone(), corpus::weighted_path(&[1.0, 2.0, 0.5])] {
            let sched = ThetaSchedule::for_adjacency(&g.adjacency(), ewalk::DEFAULT_BETA)?;
            judge(
                "eW->ws",
                &ewalk::ewalk_limit_sweep(&g, &sched, SweepDirection::ToZero, &small)?,
                EWALK_ZERO_CAP,
            );
            judge(
                "eW->LeW",
                &ewalk::ewalk_limit_sweep(&g, &sched, SweepDirection::ToInfinity, &large)?,
                EWALK_INFINITY_CAP,
            );
        }
        let mut le_dev: f64 = 0.0;
        for g in &random_corpus() {
            let a = g.adjacency();
            let le = ewalk::long_ewalk_distance(&a, ewalk::theta_infinity(&a)?)?;
            le_dev = le_dev.max(rel(&le, &limit::long_walk_distance(&a)?));
        }
        let pass = le_dev <= LONG_EWALK_TOL;
        ok &= pass;
        notes.push(format!("LeW=LW {le_dev:.2e}{}", if pass { "" } else { " FAIL" }));
        Ok((ok, notes.join(", ")))
    };
    match run() {
        Ok((ok, s)) => Outcome::new(ok, s),
        Err(e) => Outcome::new(false, e.to_string()),
    }
}

fn oracle_equivalence() -> Outcome {
    timed(ORACLE_TIME, || {
        let mut graphs = corpus::small_connected_graphs();
        graphs.extend(corpus::random_corpus(SMALL_RANDOM, 2, 4, DEFAULT_SEED ^ 0x5eed));
        let mut checks = 0;
        let mut failed = Vec::new();
        for (idx, g) in graphs.iter().enumerate() {
            for c in verify::oracle_checks(g) {
                checks += 1;
                // pinned here so the suite cannot drift
                let pinned = c.name.contains("avoiding") || c.name.contains("jump") || c.name.contains("matrix powers");
                if !c.passed || (pinned && c.threshold > ROUNDING) {
                    failed.push(format!("graph {idx}: {} ({:e} > {:e})", c.name, c.measured, c.threshold));
                }
            }
        }
        Outcome::new(
            failed.is_empty(),
            format!("{} graphs, {checks} checks, {} failed{}", graphs.len(), failed.len(), failed.first().map(|f| format!("; first: {f}")).unwrap_or_default()),
        )
    })
}

fn property_suites() -> Outcome {
    let mut graphs = corpus::small_connected_graphs();
    graphs.extend(corpus::random_corpus(SMALL_RANDOM, 3, 6, DEFAULT_SEED));
    let mut checks = 0;
    let mut failed = Vec::new();
    for (idx, g) in graphs.iter().enumerate() {
        for c in verify::property_checks(g) {
            checks += 1;
            if !c.passed {
                failed.push(format!("graph {idx}: {} {}", c.name, c.detail.unwrap_or_default()));
            }
        }
    }
    // non-geodetic families on the P4 triple (1,2,3)
    let p4 = corpus::path(4);
    for (family, alpha) in [(MetricFamily::PlainWalk, 1.0), (MetricFamily::PlainWalk, 4.5), (MetricFamily::Forest, 1.0)] {
        checks += 1;
        match compute(family, &p4, &MetricParams::with_alpha(alpha)) {
            Ok(d) => {
                let defect = (d.get(0, 1) + d.get(1, 2) - d.get(0, 2)) / d.get(0, 2);
                if defect <= GEODETIC_DELTA {
                    failed.push(format!("{family} alpha={alpha}: P4 defect {defect:e}"));
                }
            }
            Err(e) => failed.push(format!("{family}: {e}")),
        }
    }
    assert_eq!((verify::GEODETIC_EPS, verify::GEODETIC_DELTA), (GEODETIC_EPS, GEODETIC_DELTA));
    Outcome::new(
        failed.is_empty(),
        format!("{} graphs, {checks} checks, {} failed{}", graphs.len(), failed.len(), failed.first().map(|f| format!("; first: {f}")).unwrap_or_default()),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("table reproduction", table_reproduction),
        ("long walk ratios on P4 and P5", long_walk_ratio),
        ("weighted path adjacent distances", weighted_path_example),
        ("five-way long walk agreement", formula_agreement),
        ("equivalence identities", equivalences),
        ("spectral radius identities", spectral_identities),
        ("limit convergence", limit_convergence),
        ("oracle equivalence", oracle_equivalence),
        ("property suites", property_suites),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        all &= out.passed;
        println!("{} criterion {}: {name}: {}", if out.passed { "PASS" } else { "FAIL" }, k + 1, out.summary);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn has_parallel(g: &WeightedMultigraph) -> bool {
    let edges = g.edges();
    edges.iter().enumerate().any(|(x, e)| {
        edges[x + 1..]
            .iter()
            .any(|f| (e.a, e.b) == (f.a, f.b) || (e.a, e.b) == (f.b, f.a))
    })
}

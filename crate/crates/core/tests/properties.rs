use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use walkdist::corpus;
use walkdist::ewalk;
use walkdist::graph::WeightedMultigraph;
use walkdist::limit;
use walkdist::linalg;
use walkdist::metrics::{compute, MetricParams};
use walkdist::oracle;
use walkdist::spectral;
use walkdist::transforms;
use walkdist::verify;
use walkdist::walk::{self, ProximityKind, ProximityMatrix};
use walkdist::MetricFamily;

fn multigraph(max_n: usize) -> impl Strategy<Value = WeightedMultigraph> {
    (any::<u64>(), 2..=max_n).prop_map(|(seed, n)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        corpus::random_multigraph(&mut rng, n)
    })
}

fn relabelled(g: &WeightedMultigraph, perm: &[usize]) -> WeightedMultigraph {
    let edges: Vec<_> = g.edges().iter().map(|e| (perm[e.a], perm[e.b], e.weight)).collect();
    WeightedMultigraph::from_edges(g.order(), &edges).unwrap()
}

fn permutation(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_is_symmetric_and_laplacian_kills_ones(g in multigraph(8)) {
        let a = g.adjacency();
        prop_assert!(linalg::is_symmetric(&a, 0.0));
        let l = g.laplacian();
        let ones = DVector::from_element(g.order(), 1.0);
        prop_assert!((l * ones).amax() <= 1e-12 * linalg::max_abs(&a).max(1.0));
    }

    #[test]
    fn para_laplacian_is_psd_with_perron_kernel(g in multigraph(8)) {
        let a = g.adjacency();
        let spec = spectral::perron(&a).unwrap();
        let lam = walkdist::graph::para_laplacian(&a, spec.rho).unwrap();
        let eig = linalg::symmetric_eigenvalues(&lam);
        let floor = -1e-10 * spec.rho;
        prop_assert!(eig.iter().all(|&x| x >= floor));
        prop_assert!((lam * &spec.p).amax() <= 1e-10 * spec.rho);
        prop_assert!(spec.p.iter().all(|&x| x > 0.0));
        prop_assert!((spec.p.sum() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn perron_data_follows_relabelling(g in multigraph(7), seed in any::<u64>()) {
        let perm = permutation(g.order(), seed);
        let h = relabelled(&g, &perm);
        let s = spectral::perron(&g.adjacency()).unwrap();
        let t = spectral::perron(&h.adjacency()).unwrap();
        prop_assert!((s.rho - t.rho).abs() <= 1e-12 * s.rho);
        for (i, &pi) in perm.iter().enumerate() {
            prop_assert!((s.p[i] - t.p[pi]).abs() <= 1e-10);
        }
    }

    #[test]
    fn walk_distance_follows_relabelling(g in multigraph(7), seed in any::<u64>(), alpha in 0.1f64..10.0) {
        let perm = permutation(g.order(), seed);
        let d = walk::walk_distance(&g.adjacency(), alpha).unwrap();
        let e = walk::walk_distance(&relabelled(&g, &perm).adjacency(), alpha).unwrap();
        let scale = linalg::max_abs(d.entries());
        for i in 0..g.order() {
            for j in 0..g.order() {
                prop_assert!((d.get(i, j) - e.get(perm[i], perm[j])).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn constant_row_sums_give_uniform_perron_vector(g in multigraph(7)) {
        let b = transforms::balance_graph(&g, None).unwrap();
        let m = b.m;
        let spec = spectral::perron(&b.result.adjacency()).unwrap();
        let n = g.order() as f64;
        prop_assert!((spec.rho - m).abs() <= 1e-10 * m);
        prop_assert!(spec.p.iter().all(|&x| (x - 1.0 / n).abs() <= 1e-10));
        prop_assert!(linalg::relative_diff(&b.result.laplacian(), &g.laplacian()) <= 1e-12);
    }

    #[test]
    fn distance_is_linear_in_theta(g in multigraph(7), alpha in 0.1f64..10.0, c in 0.1f64..10.0) {
        let rho = spectral::perron(&g.adjacency()).unwrap().rho;
        let t = walk::t_from_alpha(alpha, rho);
        let r = walk::walk_weight_matrix(&g.adjacency(), t).unwrap();
        let d1 = walk::proximity_to_distance(&r, 1.0);
        let dc = walk::proximity_to_distance(&r, c);
        prop_assert!(linalg::relative_diff(dc.entries(), &(d1.entries() * c)) <= 1e-13);
    }

    #[test]
    fn walk_weights_are_transitional(g in multigraph(7), frac in 0.05f64..0.95) {
        let a = g.adjacency();
        let rho = spectral::perron(&a).unwrap().rho;
        let r = walk::walk_weight_matrix(&a, frac / rho).unwrap();
        let report = oracle::check_transition(r.entries(), Some(&g));
        prop_assert!(report.passed, "{:?}", report);
    }

    #[test]
    fn geodetic_families_are_metrics(g in multigraph(7), alpha in 0.2f64..5.0) {
        for family in [MetricFamily::Walk, MetricFamily::LogForest, MetricFamily::EWalk,
                       MetricFamily::LongWalk, MetricFamily::Resistance, MetricFamily::Forest] {
            let d = compute(family, &g, &MetricParams::with_alpha(alpha)).unwrap();
            let m = oracle::check_metric(&d);
            prop_assert!(m.passed, "{family}: {:?}", m);
        }
    }

    #[test]
    fn long_walk_forms_agree(g in multigraph(8)) {
        let forms = verify::long_walk_forms(&g.adjacency()).unwrap();
        prop_assert!(verify::max_pairwise_deviation(&forms) <= 1e-9);
    }

    #[test]
    fn cofactor_form_is_independent_of_the_pair(g in multigraph(7), u in 0usize..7, v in 0usize..7) {
        let n = g.order();
        let (u, v) = (u % n, v % n);
        let a = g.adjacency();
        let base = limit::long_walk_distance(&a).unwrap();
        let cof = limit::long_walk_via_cofactor(&a, u, v).unwrap();
        prop_assert!(linalg::relative_diff(cof.entries(), base.entries()) <= 1e-9);
        let r = limit::resistance_distance(&g).unwrap();
        let rc = limit::resistance_via_cofactor(&g, u, v).unwrap();
        prop_assert!(linalg::relative_diff(rc.entries(), r.entries()) <= 1e-9);
    }

    #[test]
    fn resistance_is_long_walk_on_balance_graph(g in multigraph(8), extra in 0.0f64..5.0) {
        let m = g.weighted_degrees().into_iter().fold(0.0, f64::max) + extra;
        let b = transforms::balance_graph(&g, Some(m)).unwrap();
        let lw = limit::long_walk_distance(&b.result.adjacency()).unwrap();
        let r = limit::resistance_distance(&g).unwrap();
        prop_assert!(linalg::relative_diff(lw.entries(), r.entries()) <= 1e-9);
    }

    #[test]
    fn long_walk_and_resistance_are_squared_euclidean(g in multigraph(8)) {
        for d in [limit::long_walk_distance(&g.adjacency()).unwrap(), limit::resistance_distance(&g).unwrap()] {
            prop_assert!(oracle::check_psd_centered(&d).passed);
        }
    }

    #[test]
    fn separator_query_matches_paths(g in multigraph(6)) {
        let n = g.order();
        for j in 0..n {
            for i in 0..n {
                for k in (0..n).filter(|&k| k != i) {
                    prop_assert_eq!(g.separates(j, i, k), oracle::separates_by_paths(&g, j, i, k));
                }
            }
        }
    }

    #[test]
    fn log_closure_matches_direct_inverse(g in multigraph(7), alpha in 0.3f64..5.0) {
        let a = ewalk::epsilon_adjacency(&g, alpha).unwrap();
        let n = g.order();
        let direct = linalg::inverse(&(DMatrix::identity(n, n) - &a)).unwrap();
        let via_log = ewalk::ewalk_log_proximity(&g, alpha).unwrap().map(f64::exp);
        prop_assert!(linalg::relative_diff(&via_log, &direct) <= 1e-10);
    }

    #[test]
    fn proximity_rejects_nonpositive_entries(x in -1.0f64..=0.0) {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, x, x, 1.0]);
        prop_assert!(ProximityMatrix::new(m, ProximityKind::Walk).is_err());
    }
}

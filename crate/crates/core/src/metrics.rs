//! One entry point for every distance family.

use serde::{Deserialize, Serialize};

use crate::distance::{DistanceMatrix, MetricFamily};
use crate::error::{Error, Result};
use crate::ewalk::{self, ThetaSchedule, DEFAULT_BETA};
use crate::graph::WeightedMultigraph;
use crate::limit;
use crate::spectral;
use crate::transforms::{self, Scaled};
use crate::walk::{self, ParamPoint};

/// Parameters for [`compute`]. `alpha` and `t` are mutually exclusive; with
/// neither, α = 1. When `m` is set the metric is evaluated on the
/// balance-graph of degree `m`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    pub alpha: Option<f64>,
    pub t: Option<f64>,
    pub m: Option<f64>,
    pub beta: Option<f64>,
}

impl MetricParams {
    pub fn with_alpha(alpha: f64) -> Self {
        Self {
            alpha: Some(alpha),
            ..Self::default()
        }
    }

    fn alpha(&self) -> Result<f64> {
        match (self.alpha, self.t) {
            (Some(_), Some(_)) => Err(Error::InvalidParameter("alpha and t are mutually exclusive".into())),
            (Some(a), None) => Ok(a),
            (None, Some(_)) => Err(Error::InvalidParameter("t applies only to walk metrics".into())),
            (None, None) => Ok(1.0),
        }
    }

    fn walk_point(&self, rho: f64, n: usize) -> Result<ParamPoint> {
        match (self.alpha, self.t) {
            (Some(_), Some(_)) => Err(Error::InvalidParameter("alpha and t are mutually exclusive".into())),
            (None, Some(t)) => ParamPoint::from_t(t, rho, n),
            (alpha, None) => ParamPoint::from_alpha(alpha.unwrap_or(1.0), rho, n),
        }
    }
}

/// Distance matrix of `family` on `g`.
pub fn compute(family: MetricFamily, g: &WeightedMultigraph, params: &MetricParams) -> Result<DistanceMatrix> {
    g.ensure_connected()?;
    let balanced;
    let g = match params.m {
        Some(m) => {
            balanced = transforms::balance_graph(g, Some(m))?.result;
            &balanced
        }
        None => g,
    };
    let n = g.order();
    let a = g.adjacency();
    match family {
        MetricFamily::ShortestPath => limit::shortest_path_matrix(g),
        MetricFamily::WeightedShortestPath => limit::weighted_shortest_path_matrix(g),
        MetricFamily::Resistance => limit::resistance_distance(g),
        MetricFamily::LongWalk => {
            let rho = spectral::perron(&a)?.rho;
            let d = limit::long_walk_distance(&a)?;
            Ok(with_param(d, ParamPoint {
                rho: Some(rho),
                ..ParamPoint::bare(f64::INFINITY, 1.0)
            }))
        }
        MetricFamily::LongEWalk => ewalk::long_ewalk_distance(&a, ewalk::theta_infinity(&a)?),
        MetricFamily::Walk => {
            let rho = spectral::perron(&a)?.rho;
            walk::walk_distance_at(&a, params.walk_point(rho, n)?)
        }
        MetricFamily::PlainWalk => {
            let rho = spectral::perron(&a)?.rho;
            let point = params.walk_point(rho, n)?;
            let d = walk::plain_walk_distance(&a, point.alpha)?;
            Ok(with_param(d, point))
        }
        MetricFamily::Forest => walk::forest_distance(g, params.alpha()?),
        MetricFamily::LogForest => {
            let alpha = params.alpha()?;
            walk::log_forest_distance(g, &Scaled, alpha, walk::theta_scaling(alpha, n))
        }
        MetricFamily::EWalk => {
            let schedule = ThetaSchedule::for_adjacency(&a, params.beta.unwrap_or(DEFAULT_BETA))?;
            ewalk::ewalk_distance(g, params.alpha()?, &schedule)
        }
    }
}

fn with_param(d: DistanceMatrix, p: ParamPoint) -> DistanceMatrix {
    DistanceMatrix::new(d.entries().clone(), d.family(), Some(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> WeightedMultigraph {
        WeightedMultigraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap()
    }

    #[test]
    fn every_family_evaluates() {
        for family in MetricFamily::ALL {
            let d = compute(family, &p4(), &MetricParams::default()).unwrap();
            assert_eq!(d.family(), family);
            assert!(d.get(0, 3) > 0.0);
        }
    }

    #[test]
    fn alpha_and_t_conflict() {
        let params = MetricParams {
            alpha: Some(1.0),
            t: Some(0.1),
            ..MetricParams::default()
        };
        assert!(compute(MetricFamily::Walk, &p4(), &params).is_err());
    }

    #[test]
    fn t_gives_same_walk_distance_as_alpha() {
        let rho = (1.0 + 5f64.sqrt()) / 2.0;
        let by_alpha = compute(MetricFamily::Walk, &p4(), &MetricParams::with_alpha(2.0)).unwrap();
        let by_t = compute(
            MetricFamily::Walk,
            &p4(),
            &MetricParams {
                t: Some(walk::t_from_alpha(2.0, rho)),
                ..MetricParams::default()
            },
        )
        .unwrap();
        assert!(crate::linalg::max_abs_diff(by_alpha.entries(), by_t.entries()) < 1e-12);
    }
}

//! Distance matrices and the family tags attached to them.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::walk::ParamPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricFamily {
    ShortestPath,
    WeightedShortestPath,
    Walk,
    PlainWalk,
    Forest,
    LogForest,
    EWalk,
    LongWalk,
    LongEWalk,
    Resistance,
}

impl MetricFamily {
    pub const ALL: [MetricFamily; 10] = [
        MetricFamily::ShortestPath,
        MetricFamily::WeightedShortestPath,
        MetricFamily::Walk,
        MetricFamily::PlainWalk,
        MetricFamily::Forest,
        MetricFamily::LogForest,
        MetricFamily::EWalk,
        MetricFamily::LongWalk,
        MetricFamily::LongEWalk,
        MetricFamily::Resistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricFamily::ShortestPath => "shortest-path",
            MetricFamily::WeightedShortestPath => "weighted-shortest-path",
            MetricFamily::Walk => "walk",
            MetricFamily::PlainWalk => "plain-walk",
            MetricFamily::Forest => "forest",
            MetricFamily::LogForest => "log-forest",
            MetricFamily::EWalk => "e-walk",
            MetricFamily::LongWalk => "long-walk",
            MetricFamily::LongEWalk => "long-ewalk",
            MetricFamily::Resistance => "resistance",
        }
    }

    /// Whether the family takes the parameter α.
    pub fn is_parametric(self) -> bool {
        matches!(
            self,
            MetricFamily::Walk
                | MetricFamily::PlainWalk
                | MetricFamily::Forest
                | MetricFamily::LogForest
                | MetricFamily::EWalk
        )
    }

    /// Families whose distances are graph-geodetic.
    pub fn is_geodetic(self) -> bool {
        !matches!(self, MetricFamily::PlainWalk | MetricFamily::Forest)
    }
}

impl fmt::Display for MetricFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        MetricFamily::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown metric `{s}`")))
    }
}

/// Symmetric, zero-diagonal matrix of pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    entries: DMatrix<f64>,
    family: MetricFamily,
    param: Option<ParamPoint>,
}

impl DistanceMatrix {
    /// Symmetrizes as `(D + Dᵀ)/2` and zeroes the diagonal.
    pub fn new(entries: DMatrix<f64>, family: MetricFamily, param: Option<ParamPoint>) -> Self {
        let mut entries = (&entries + entries.transpose()) * 0.5;
        entries.fill_diagonal(0.0);
        Self {
            entries,
            family,
            param,
        }
    }

    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn family(&self) -> MetricFamily {
        self.family
    }

    pub fn param(&self) -> Option<&ParamPoint> {
        self.param.as_ref()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// Every entry multiplied by `c`.
    pub fn scaled(&self, c: f64) -> DistanceMatrix {
        DistanceMatrix {
            entries: &self.entries * c,
            family: self.family,
            param: self.param,
        }
    }

    /// The three ratios used to compare metrics on a path `1-2-3-4`:
    /// `d(1,2)/d(2,3)`, `(d(1,2)+d(2,3))/d(1,3)` and `d(1,4)/d(1,3)`.
    pub fn path_ratios(&self) -> [f64; 3] {
        let d = |i: usize, j: usize| self.get(i, j);
        [
            d(0, 1) / d(1, 2),
            (d(0, 1) + d(1, 2)) / d(0, 2),
            d(0, 3) / d(0, 2),
        ]
    }
}

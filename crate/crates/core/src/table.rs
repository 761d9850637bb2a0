//! Ratio table of several metrics on the unit path `1-2-3-4`.

use serde::Serialize;

use crate::corpus;
use crate::distance::MetricFamily;
use crate::error::Result;
use crate::metrics::{compute, MetricParams};

/// Allowed absolute deviation of a computed ratio from its reference value.
pub const TABLE_TOLERANCE: f64 = 0.005;

pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub label: String,
    pub families: Vec<MetricFamily>,
    pub alpha: Option<f64>,
    pub expected: [f64; 3],
    /// Ratios `d(1,2)/d(2,3)`, `(d(1,2)+d(2,3))/d(1,3)`, `d(1,4)/d(1,3)`,
    /// one triple per family in `families`.
    pub computed: Vec<[f64; 3]>,
    pub note: Option<String>,
}

impl TableRow {
    pub fn cell_passes(&self, col: usize) -> bool {
        self.computed
            .iter()
            .all(|c| (c[col] - self.expected[col]).abs() <= TABLE_TOLERANCE)
    }

    pub fn passed(&self) -> bool {
        (0..3).all(|c| self.cell_passes(c))
    }
}

struct Spec {
    label: &'static str,
    families: &'static [MetricFamily],
    alpha: Option<f64>,
    expected: [f64; 3],
    note: Option<&'static str>,
}

const ROWS: [Spec; 7] = [
    Spec {
        label: "shortest path / resistance",
        families: &[MetricFamily::ShortestPath, MetricFamily::Resistance],
        alpha: None,
        expected: [1.0, 1.0, 1.5],
        note: None,
    },
    Spec {
        label: "walk, alpha=1",
        families: &[MetricFamily::Walk],
        alpha: Some(1.0),
        expected: [1.08, 1.0, 1.52],
        note: None,
    },
    Spec {
        label: "long walk",
        families: &[MetricFamily::LongWalk],
        alpha: None,
        expected: [GOLDEN_RATIO, 1.0, GOLDEN_RATIO],
        note: Some("(1+sqrt 5)/2"),
    },
    Spec {
        label: "log-forest, alpha=2",
        families: &[MetricFamily::LogForest],
        alpha: Some(2.0),
        expected: [0.89, 1.0, 1.47],
        note: None,
    },
    Spec {
        label: "forest, alpha=1",
        families: &[MetricFamily::Forest],
        alpha: Some(1.0),
        expected: [1.08, 1.32, 1.26],
        note: None,
    },
    Spec {
        label: "plain walk, alpha=4.5",
        families: &[MetricFamily::PlainWalk],
        alpha: Some(4.5),
        expected: [1.08, 1.28, 0.95],
        note: None,
    },
    Spec {
        label: "plain walk, alpha=1",
        families: &[MetricFamily::PlainWalk],
        alpha: Some(1.0),
        expected: [0.96, 1.46, 1.03],
        note: None,
    },
];

/// All rows, computed on the unit path `P4`.
pub fn p4_table() -> Result<Vec<TableRow>> {
    let g = corpus::path(4);
    ROWS.iter()
        .map(|spec| {
            let params = MetricParams {
                alpha: spec.alpha,
                ..MetricParams::default()
            };
            let computed = spec
                .families
                .iter()
                .map(|&f| compute(f, &g, &params).map(|d| d.path_ratios()))
                .collect::<Result<Vec<_>>>()?;
            Ok(TableRow {
                label: spec.label.to_string(),
                families: spec.families.to_vec(),
                alpha: spec.alpha,
                expected: spec.expected,
                computed,
                note: spec.note.map(str::to_string),
            })
        })
        .collect()
}

/// Text rendering: two decimals per cell as in the reference table, the
/// reference value, a pass/fail mark, and the full-precision values.
pub fn render(rows: &[TableRow]) -> String {
    let mut out = format!("{:<44}{:<18}{:<18}{}\n", "metric", "d12/d23", "(d12+d23)/d13", "d14/d13");
    for row in rows {
        for (idx, c) in row.computed.iter().enumerate() {
            let label = if row.families.len() > 1 {
                format!("{} [{}]", row.label, row.families[idx])
            } else {
                row.label.clone()
            };
            out.push_str(&format!("{label:<44}"));
            for col in 0..3 {
                let ok = (c[col] - row.expected[col]).abs() <= TABLE_TOLERANCE;
                out.push_str(&format!(
                    "{:>5.2} ({:.2}) {:<4} ",
                    c[col],
                    row.expected[col],
                    if ok { "ok" } else { "FAIL" }
                ));
            }
            out.push('\n');
        }
    }
    out.push_str("\nfull precision\n");
    for row in rows {
        for c in &row.computed {
            out.push_str(&format!(
                "{:<44}{:.17} {:.17} {:.17}{}\n",
                row.label,
                c[0],
                c[1],
                c[2],
                row.note.as_deref().map(|n| format!("  exact {n}")).unwrap_or_default()
            ));
        }
    }
    out
}

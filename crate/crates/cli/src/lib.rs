//! Output formatting and file handling for the `walkdist` binary.

use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Map, Value};
use walkdist::graph::WeightedMultigraph;
use walkdist::nalgebra::DMatrix;

/// Run metadata written alongside every matrix.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Meta {
    pub metric: String,
    pub n: usize,
    pub rho: Option<f64>,
    pub alpha: Option<f64>,
    pub t: Option<f64>,
    pub theta: Option<f64>,
    pub m: Option<f64>,
    pub beta: Option<f64>,
}

impl Meta {
    fn numeric(&self) -> [(&'static str, Option<f64>); 6] {
        [
            ("rho", self.rho),
            ("alpha", self.alpha),
            ("t", self.t),
            ("theta", self.theta),
            ("m", self.m),
            ("beta", self.beta),
        ]
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("metric".into(), json!(self.metric));
        map.insert("n".into(), json!(self.n));
        for (key, value) in self.numeric() {
            if let Some(x) = value {
                map.insert(key.into(), number(x));
            }
        }
        Value::Object(map)
    }

    fn csv_header(&self) -> String {
        let mut out = format!("# metric={}\n# n={}\n", self.metric, self.n);
        for (key, value) in self.numeric() {
            if let Some(x) = value {
                out.push_str(&format!("# {key}={}\n", fmt_value(x)));
            }
        }
        out
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_value(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(x.to_string()))
}

pub fn csv_matrix(labels: &[String], d: &DMatrix<f64>, meta: &Meta) -> String {
    let mut out = meta.csv_header();
    out.push_str("vertex");
    for l in labels {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for (i, l) in labels.iter().enumerate() {
        out.push_str(l);
        for j in 0..labels.len() {
            out.push(',');
            out.push_str(&fmt_value(d[(i, j)]));
        }
        out.push('\n');
    }
    out
}

pub fn json_matrix(labels: &[String], d: &DMatrix<f64>, meta: &Meta) -> Value {
    let rows: Vec<Value> = (0..d.nrows())
        .map(|i| Value::Array((0..d.ncols()).map(|j| number(d[(i, j)])).collect()))
        .collect();
    json!({ "labels": labels, "matrix": rows, "meta": meta.to_json() })
}

pub fn csv_pairs(labels: &[String], d: &DMatrix<f64>, pairs: &[(usize, usize)], meta: &Meta) -> String {
    let mut out = meta.csv_header();
    out.push_str("a,b,distance\n");
    for &(i, j) in pairs {
        out.push_str(&format!("{},{},{}\n", labels[i], labels[j], fmt_value(d[(i, j)])));
    }
    out
}

pub fn json_pairs(labels: &[String], d: &DMatrix<f64>, pairs: &[(usize, usize)], meta: &Meta) -> Value {
    let rows: Vec<Value> = pairs
        .iter()
        .map(|&(i, j)| json!({ "a": labels[i], "b": labels[j], "distance": number(d[(i, j)]) }))
        .collect();
    json!({ "pairs": rows, "meta": meta.to_json() })
}

/// Reads a matrix written by [`csv_matrix`], skipping `#` lines.
pub fn parse_csv_matrix(text: &str) -> Result<(Vec<String>, DMatrix<f64>), String> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header = lines.next().ok_or("empty matrix")?;
    let labels: Vec<String> = header.split(',').skip(1).map(str::to_owned).collect();
    let n = labels.len();
    let mut d = DMatrix::zeros(n, n);
    let mut rows = 0;
    for (i, line) in lines.enumerate() {
        if i >= n {
            return Err("more rows than labels".into());
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != n + 1 || cells[0] != labels[i] {
            return Err(format!("malformed row {}", i + 1));
        }
        for (j, cell) in cells[1..].iter().enumerate() {
            d[(i, j)] = cell.parse().map_err(|_| format!("bad number `{cell}`"))?;
        }
        rows += 1;
    }
    if rows != n {
        return Err(format!("expected {n} rows, found {rows}"));
    }
    Ok((labels, d))
}

/// Parses `a:b,c:d` into vertex index pairs using the graph's labels.
pub fn parse_pairs(spec: &str, g: &WeightedMultigraph) -> Result<Vec<(usize, usize)>, String> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (a, b) = item
                .split_once(':')
                .ok_or_else(|| format!("pair `{item}` is not of the form a:b"))?;
            let find = |l: &str| g.vertex_of(l.trim()).ok_or_else(|| format!("unknown vertex `{}`", l.trim()));
            Ok((find(a)?, find(b)?))
        })
        .collect()
}

/// Writes to `path` through a temporary file in the same directory, or to
/// stdout when no path is given.
pub fn write_output(path: Option<&Path>, content: &str) -> io::Result<()> {
    match path {
        None => {
            let mut out = io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(content.as_bytes())?;
            tmp.flush()?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let d = DMatrix::from_row_slice(3, 3, &[0.0, 0.1, 1.0 / 3.0, 0.1, 0.0, 2f64.sqrt(), 1.0 / 3.0, 2f64.sqrt(), 0.0]);
        let meta = Meta { metric: "walk".into(), n: 3, rho: Some(1.5), ..Meta::default() };
        let text = csv_matrix(&labels, &d, &meta);
        let (l2, d2) = parse_csv_matrix(&text).unwrap();
        assert_eq!(l2, labels);
        assert_eq!(d2, d);
    }

    #[test]
    fn infinite_alpha_survives_json() {
        let meta = Meta { metric: "long-walk".into(), n: 2, alpha: Some(f64::INFINITY), ..Meta::default() };
        assert_eq!(meta.to_json()["alpha"], json!("inf"));
    }
}

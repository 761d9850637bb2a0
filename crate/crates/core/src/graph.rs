//! Weighted multigraph model and the matrices derived from it.
//!
//! Vertices are identified by their position in declaration order; labels are
//! carried along for reporting only. Parallel edges and loops are kept as
//! separate [`EdgeRecord`]s and only merged when a matrix is built.

use std::collections::VecDeque;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeRecord {
    pub a: usize,
    pub b: usize,
    /// Conductance `w > 0`; the weighted length of the edge is `1 / w`.
    pub weight: f64,
}

impl EdgeRecord {
    pub fn new(a: usize, b: usize, weight: f64) -> Self {
        Self { a, b, weight }
    }

    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    pub fn length(&self) -> f64 {
        1.0 / self.weight
    }

    /// The endpoint opposite to `v`, if `v` is incident.
    pub fn other(&self, v: usize) -> Option<usize> {
        if self.a == v {
            Some(self.b)
        } else if self.b == v {
            Some(self.a)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMultigraph {
    labels: Vec<String>,
    edges: Vec<EdgeRecord>,
}

impl WeightedMultigraph {
    /// Builds a graph, checking `n >= 2`, positive weights and valid endpoints.
    ///
    /// Connectivity is not required here; metric operations check it.
    pub fn new(labels: Vec<String>, edges: Vec<EdgeRecord>) -> Result<Self> {
        let n = labels.len();
        if n < 2 {
            return Err(Error::TooFewVertices(n));
        }
        for e in &edges {
            if !(e.weight > 0.0) || !e.weight.is_finite() {
                return Err(Error::NonPositiveWeight(e.weight));
            }
            for v in [e.a, e.b] {
                if v >= n {
                    return Err(Error::UnknownVertex(v));
                }
            }
        }
        Ok(Self { labels, edges })
    }

    /// Graph on vertices labelled `1..=n` from `(a, b, weight)` triples with
    /// zero-based endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let labels = (1..=n).map(|i| i.to_string()).collect();
        let edges = edges
            .iter()
            .map(|&(a, b, w)| EdgeRecord::new(a, b, w))
            .collect();
        Self::new(labels, edges)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn vertex_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Same vertices and edge structure with every weight passed through `f`.
    pub fn map_weights(&self, mut f: impl FnMut(&EdgeRecord) -> f64) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| EdgeRecord::new(e.a, e.b, f(e)))
            .collect();
        Self::new(self.labels.clone(), edges)
    }

    /// Copy with extra edges appended.
    pub fn with_edges(&self, extra: impl IntoIterator<Item = EdgeRecord>) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.extend(extra);
        Self::new(self.labels.clone(), edges)
    }

    /// Symmetric weighted adjacency matrix: `a_ij` is the total weight of the
    /// `(i, j)` edges and `a_ii` the total loop weight at `i`.
    pub fn adjacency(&self) -> DMatrix<f64> {
        let n = self.order();
        let mut a = DMatrix::zeros(n, n);
        for e in &self.edges {
            if e.is_loop() {
                a[(e.a, e.a)] += e.weight;
            } else {
                a[(e.a, e.b)] += e.weight;
                a[(e.b, e.a)] += e.weight;
            }
        }
        a
    }

    /// Weighted degrees `A·1`; a loop counts once.
    pub fn weighted_degrees(&self) -> Vec<f64> {
        self.adjacency().row_iter().map(|r| r.sum()).collect()
    }

    /// Laplacian `diag(A·1) - A`. Loops add the same amount to both terms and
    /// therefore vanish.
    pub fn laplacian(&self) -> DMatrix<f64> {
        laplacian_of(&self.adjacency())
    }

    /// Vertex lists of the connected components, ignoring `removed` if given.
    pub fn components(&self, removed: Option<usize>) -> Vec<Vec<usize>> {
        let n = self.order();
        let adj = self.neighbour_lists();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if Some(start) == removed || comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &u in &adj[v] {
                    if Some(u) != removed && comp[u] == usize::MAX {
                        comp[u] = id;
                        members.push(u);
                        queue.push_back(u);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components(None).len() == 1
    }

    pub fn ensure_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// True iff every `i`–`k` path passes through `j`: either `j` is one of the
    /// endpoints or `i` and `k` fall into different components of `G - j`.
    pub fn separates(&self, j: usize, i: usize, k: usize) -> bool {
        if j == i || j == k {
            return true;
        }
        let n = self.order();
        let adj = self.neighbour_lists();
        let mut seen = vec![false; n];
        seen[j] = true;
        seen[i] = true;
        let mut queue = VecDeque::from([i]);
        while let Some(v) = queue.pop_front() {
            if v == k {
                return false;
            }
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        true
    }

    /// Distinct neighbours of each vertex, loops excluded.
    pub fn neighbour_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.order()];
        for e in &self.edges {
            if !e.is_loop() {
                adj[e.a].push(e.b);
                adj[e.b].push(e.a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// `(edge index, far endpoint)` pairs for every edge at `v`; a loop appears once.
    pub fn incidences(&self, v: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(idx, e)| e.other(v).map(|u| (idx, u)))
            .collect()
    }
}

/// Laplacian `diag(A·1) - A` of an arbitrary symmetric adjacency matrix.
pub fn laplacian_of(a: &DMatrix<f64>) -> DMatrix<f64> {
    let degrees: Vec<f64> = a.row_iter().map(|r| r.sum()).collect();
    let mut l = -a.clone();
    for (i, d) in degrees.into_iter().enumerate() {
        l[(i, i)] += d;
    }
    l
}

/// Para-Laplacian `ρI - A`.
///
/// `rho` must be the Perron root of `A`: the result must be positive
/// semidefinite with a zero eigenvalue, up to `1e-9·max(1, ρ)`.
pub fn para_laplacian(a: &DMatrix<f64>, rho: f64) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let lambda = DMatrix::identity(n, n) * rho - a;
    let ev = linalg::symmetric_eigenvalues(&lambda);
    let tol = 1e-9 * rho.abs().max(1.0);
    let smallest = ev[0];
    if smallest.abs() > tol {
        return Err(Error::NotPerronRoot(smallest.abs()));
    }
    Ok(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> WeightedMultigraph {
        WeightedMultigraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap()
    }

    #[test]
    fn k2_adjacency_and_laplacian() {
        let g = WeightedMultigraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(g.adjacency(), DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        assert_eq!(g.laplacian(), DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn parallel_edges_add_up() {
        let g = WeightedMultigraph::from_edges(2, &[(0, 1, 0.5), (0, 1, 0.5)]).unwrap();
        assert_eq!(g.adjacency()[(0, 1)], 1.0);
        assert_eq!(g.adjacency()[(1, 0)], 1.0);
    }

    #[test]
    fn p4_matrices() {
        let g = p4();
        let a = g.adjacency();
        for i in 0..4usize {
            for j in 0..4 {
                let expected = if i.abs_diff(j) == 1 { 1.0 } else { 0.0 };
                assert_eq!(a[(i, j)], expected);
            }
        }
        let l = g.laplacian();
        let diag: Vec<f64> = l.diagonal().iter().copied().collect();
        assert_eq!(diag, vec![1.0, 2.0, 2.0, 1.0]);
        assert_eq!(l + a, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)));
    }

    #[test]
    fn loop_cancels_in_laplacian() {
        let k2 = WeightedMultigraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let looped = WeightedMultigraph::from_edges(2, &[(0, 1, 1.0), (0, 0, 5.0)]).unwrap();
        assert_eq!(looped.adjacency()[(0, 0)], 5.0);
        assert_eq!(looped.laplacian(), k2.laplacian());
    }

    #[test]
    fn para_laplacian_of_k2_matches_laplacian() {
        let g = WeightedMultigraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let lambda = para_laplacian(&g.adjacency(), 1.0).unwrap();
        assert_eq!(lambda, g.laplacian());
    }

    #[test]
    fn para_laplacian_rejects_wrong_root() {
        let g = p4();
        assert!(matches!(
            para_laplacian(&g.adjacency(), 1.5),
            Err(Error::NotPerronRoot(_))
        ));
    }

    #[test]
    fn p4_para_laplacian_uses_golden_ratio() {
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let a = p4().adjacency();
        let lambda = para_laplacian(&a, golden).unwrap();
        for i in 0..4 {
            assert!((lambda[(i, i)] - golden).abs() < 1e-15);
        }
    }

    #[test]
    fn separators_on_path_and_cycle() {
        let g = p4();
        assert!(g.separates(1, 0, 2));
        assert!(!g.separates(2, 0, 1));
        assert!(g.separates(0, 0, 3));
        let c4 =
            WeightedMultigraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)])
                .unwrap();
        for j in 0..4 {
            for i in 0..4 {
                for k in 0..4 {
                    if i != k && j != i && j != k {
                        assert!(!c4.separates(j, i, k));
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            WeightedMultigraph::from_edges(2, &[(0, 1, 0.0)]),
            Err(Error::NonPositiveWeight(_))
        ));
        assert!(matches!(
            WeightedMultigraph::from_edges(1, &[(0, 0, 2.5)]),
            Err(Error::TooFewVertices(1))
        ));
        assert!(matches!(
            WeightedMultigraph::from_edges(2, &[(0, 2, 1.0)]),
            Err(Error::UnknownVertex(2))
        ));
    }

    #[test]
    fn disconnected_detected() {
        let g = WeightedMultigraph::from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(!g.is_connected());
        assert!(matches!(g.ensure_connected(), Err(Error::Disconnected)));
        assert_eq!(g.components(None), vec![vec![0, 1], vec![2, 3]]);
    }
}

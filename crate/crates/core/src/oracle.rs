//! Brute-force references.
//!
//! Walks are enumerated edge by edge, so parallel edges and loops count
//! separately (a loop is one incidence of its vertex). Each enumerated sum
//! also has a length-stratified matrix-power counterpart, and every truncated
//! sum carries a geometric bound on the part left out.
//!
//! The property checks return reports instead of failing.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::graph::WeightedMultigraph;
use crate::linalg::{self, reduced_index, remove_entry, remove_vertex};
use crate::spectral;

/// Largest number of walks a single enumeration may visit.
pub const ENUMERATION_CAP: usize = 10_000_000;

/// One walk: `vertices[k]` and `vertices[k+1]` are joined by edge `edges[k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkRecord {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// Product of the edge weights.
    pub weight: f64,
    /// Sum of `1/w` over the edges.
    pub weighted_length: f64,
}

impl WalkRecord {
    pub fn length(&self) -> usize {
        self.edges.len()
    }
}

/// Bound on the total weight left out by stopping at length `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationBound {
    pub cap: usize,
    pub tail: f64,
}

impl TruncationBound {
    /// `(tρ)^{K+1}·n/(1 - tρ)`.
    pub fn geometric(t: f64, rho: f64, cap: usize, n: usize) -> Self {
        let q = t * rho;
        Self {
            cap,
            tail: q.powi(cap as i32 + 1) * n as f64 / (1.0 - q),
        }
    }
}

#[derive(Clone, Copy)]
enum Move<S> {
    Continue(S),
    Finish(S),
    Blocked,
}

struct Walker<'a> {
    g: &'a WeightedMultigraph,
    incidences: Vec<Vec<(usize, usize)>>,
    max_len: usize,
    visited: usize,
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl<'a> Walker<'a> {
    fn new(g: &'a WeightedMultigraph, max_len: usize) -> Self {
        Self {
            g,
            incidences: (0..g.order()).map(|v| g.incidences(v)).collect(),
            max_len,
            visited: 0,
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Visits every walk from `start` up to `max_len` edges. `step` decides
    /// whether a walk may enter a vertex and whether it must stop there;
    /// `visit` sees each walk with its weight and final state.
    fn run<S: Copy>(
        &mut self,
        start: usize,
        state: S,
        step: &impl Fn(S, usize) -> Move<S>,
        visit: &mut impl FnMut(&[usize], &[usize], f64, S),
    ) -> Result<()> {
        self.vertices.clear();
        self.edges.clear();
        self.vertices.push(start);
        self.descend(state, 1.0, false, step, visit)
    }

    fn descend<S: Copy>(
        &mut self,
        state: S,
        weight: f64,
        finished: bool,
        step: &impl Fn(S, usize) -> Move<S>,
        visit: &mut impl FnMut(&[usize], &[usize], f64, S),
    ) -> Result<()> {
        self.visited += 1;
        if self.visited > ENUMERATION_CAP {
            return Err(Error::EnumerationBlowup(ENUMERATION_CAP));
        }
        visit(&self.vertices, &self.edges, weight, state);
        if finished || self.edges.len() == self.max_len {
            return Ok(());
        }
        let here = *self.vertices.last().expect("walk is never empty");
        for k in 0..self.incidences[here].len() {
            let (edge, next) = self.incidences[here][k];
            let (next_state, stop) = match step(state, next) {
                Move::Continue(s) => (s, false),
                Move::Finish(s) => (s, true),
                Move::Blocked => continue,
            };
            let w = self.g.edges()[edge].weight;
            self.vertices.push(next);
            self.edges.push(edge);
            self.descend(next_state, weight * w, stop, step, visit)?;
            self.vertices.pop();
            self.edges.pop();
        }
        Ok(())
    }
}

/// All walks from `i` to `j` with at most `max_len` edges.
pub fn enumerate_walks(g: &WeightedMultigraph, i: usize, j: usize, max_len: usize) -> Result<Vec<WalkRecord>> {
    let mut out = Vec::new();
    let mut walker = Walker::new(g, max_len);
    walker.run(i, (), &|_, _| Move::Continue(()), &mut |vs: &[usize], es: &[usize], w, _| {
        if *vs.last().unwrap() == j {
            out.push(WalkRecord {
                vertices: vs.to_vec(),
                edges: es.to_vec(),
                weight: w,
                weighted_length: es.iter().map(|&e| g.edges()[e].length()).sum(),
            });
        }
    })?;
    Ok(out)
}

fn rho_of(g: &WeightedMultigraph) -> Result<f64> {
    Ok(spectral::perron(&g.adjacency())?.rho)
}

fn check_t(t: f64, rho: f64) -> Result<()> {
    let limit = 1.0 / rho;
    if t > 0.0 && t < limit {
        Ok(())
    } else {
        Err(Error::Divergent { t, limit })
    }
}

/// `Σ t^{len}·w` over walks `i → j` of length at most `K`, by enumeration.
pub fn enumerate_walk_weight(
    g: &WeightedMultigraph,
    t: f64,
    i: usize,
    j: usize,
    max_len: usize,
) -> Result<(f64, TruncationBound)> {
    let rho = rho_of(g)?;
    check_t(t, rho)?;
    let mut total = 0.0;
    let mut walker = Walker::new(g, max_len);
    walker.run(i, (), &|_, _| Move::Continue(()), &mut |vs: &[usize], es: &[usize], w, _| {
        if *vs.last().unwrap() == j {
            total += t.powi(es.len() as i32) * w;
        }
    })?;
    Ok((total, TruncationBound::geometric(t, rho, max_len, g.order())))
}

/// `Σ_{k≤K} (tA)^k` by repeated multiplication.
pub fn walk_weight_by_powers(a: &DMatrix<f64>, t: f64, max_len: usize) -> DMatrix<f64> {
    let n = a.nrows();
    let ta = a * t;
    let mut term = DMatrix::identity(n, n);
    let mut sum = term.clone();
    for _ in 0..max_len {
        term = &term * &ta;
        sum += &term;
    }
    sum
}

/// Weight of hitting walks `i → j` of length at most `K` (1 when `i = j`).
pub fn enumerate_hitting_weight(
    g: &WeightedMultigraph,
    t: f64,
    i: usize,
    j: usize,
    max_len: usize,
) -> Result<(f64, TruncationBound)> {
    let rho = rho_of(g)?;
    check_t(t, rho)?;
    let bound = TruncationBound::geometric(t, rho, max_len, g.order());
    if i == j {
        return Ok((1.0, bound));
    }
    let mut total = 0.0;
    let mut walker = Walker::new(g, max_len);
    let step = |_: (), v: usize| if v == j { Move::Finish(()) } else { Move::Continue(()) };
    walker.run(i, (), &step, &mut |vs: &[usize], es: &[usize], w, _| {
        if *vs.last().unwrap() == j {
            total += t.powi(es.len() as i32) * w;
        }
    })?;
    Ok((total, bound))
}

/// Hitting weights `i → j` split by length: entry `k` holds the walks of
/// exactly `k` edges, for `k = 0..=K`.
pub fn hitting_by_length(a: &DMatrix<f64>, t: f64, j: usize, max_len: usize) -> Vec<DVector<f64>> {
    let n = a.nrows();
    let sub = remove_vertex(a, j);
    let mut u = remove_entry(&a.column(j).into_owned(), j) * t;
    let mut out = Vec::with_capacity(max_len + 1);
    let mut first = DVector::zeros(n);
    first[j] = 1.0;
    out.push(first);
    for _ in 1..=max_len {
        out.push(u.clone().insert_row(j, 0.0));
        u = &sub * u * t;
    }
    out
}

/// Hitting weights `· → j` of length at most `K`, through matrix powers.
pub fn hitting_by_powers(a: &DMatrix<f64>, t: f64, j: usize, max_len: usize) -> DVector<f64> {
    hitting_by_length(a, t, j, max_len)
        .into_iter()
        .fold(DVector::zeros(a.nrows()), |acc, v| acc + v)
}

/// Weight of commute cycles `i ⇄ j` of length at most `K`: closed walks at
/// `i` that reach `j` and do not return to `i` between the first `j` and the end.
pub fn enumerate_commute_cycle_weight(
    g: &WeightedMultigraph,
    t: f64,
    i: usize,
    j: usize,
    max_len: usize,
) -> Result<(f64, TruncationBound)> {
    if i == j {
        return Err(Error::InvalidParameter("commute cycles need i ≠ j".into()));
    }
    let rho = rho_of(g)?;
    check_t(t, rho)?;
    // state 0: j not reached yet, 1: j reached, 2: back at i
    let step = |s: u8, v: usize| match s {
        0 if v == j => Move::Continue(1),
        0 => Move::Continue(0),
        1 if v == i => Move::Finish(2),
        _ => Move::Continue(1),
    };
    let mut total = 0.0;
    let mut walker = Walker::new(g, max_len);
    walker.run(i, 0u8, &step, &mut |_: &[usize], es: &[usize], w, s| {
        if s == 2 {
            total += t.powi(es.len() as i32) * w;
        }
    })?;
    Ok((total, TruncationBound::geometric(t, rho, max_len, g.order())))
}

/// Commute-cycle weight of length at most `K` from length-split hitting
/// weights: `Σ_{a+b≤K} h_a(i→j)·h_b(j→i)`.
pub fn commute_by_powers(a: &DMatrix<f64>, t: f64, i: usize, j: usize, max_len: usize) -> f64 {
    let to_j = hitting_by_length(a, t, j, max_len);
    let to_i = hitting_by_length(a, t, i, max_len);
    let mut total = 0.0;
    for la in 0..=max_len {
        for lb in 0..=(max_len - la) {
            total += to_j[la][i] * to_i[lb][j];
        }
    }
    total
}

/// Largest `K ≤ limit` for which the number of walks of length at most `K`
/// from any vertex stays below `budget`.
pub fn enumerable_length(g: &WeightedMultigraph, limit: usize, budget: f64) -> usize {
    let n = g.order();
    let mut counts = DMatrix::<f64>::zeros(n, n);
    for e in g.edges() {
        counts[(e.a, e.b)] += 1.0;
        if !e.is_loop() {
            counts[(e.b, e.a)] += 1.0;
        }
    }
    let mut per_len = DVector::from_element(n, 1.0);
    let mut total = per_len.clone();
    for k in 1..=limit {
        per_len = &counts * per_len;
        total += &per_len;
        if total.max() > budget {
            return k - 1;
        }
    }
    limit
}

/// Weights at `t = ρ⁻¹` of the cycles at `i` made of a walk `i → k` avoiding
/// `j` followed by a hitting walk `k → i`, and of the same cycles with the
/// edge leaving `k` replaced by a jump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AvoidingCycles {
    pub c: f64,
    pub c_bound: f64,
    pub c_jump: f64,
    pub c_jump_bound: f64,
    pub leg_cap: usize,
}

/// Leg weights truncated at `K` through matrix powers, with bounds on what
/// the truncation leaves out.
pub fn avoiding_cycles(a: &DMatrix<f64>, i: usize, j: usize, leg_cap: usize) -> Result<AvoidingCycles> {
    if i == j {
        return Err(Error::InvalidParameter("avoiding cycles need i ≠ j".into()));
    }
    let spec = spectral::perron(a)?;
    let rho = spec.rho;
    let n = a.nrows();
    let t = 1.0 / rho;

    // first leg: walks i → k inside G - j
    let sub_j = remove_vertex(a, j);
    let q_j = linalg::symmetric_spectral_radius(&sub_j) / rho;
    let ri = reduced_index(i, j);
    let mut row = DVector::zeros(n - 1);
    row[ri] = 1.0;
    let mut first = row.clone();
    for _ in 0..leg_cap {
        row = &sub_j * row * t;
        first += &row;
    }
    let first = first.insert_row(j, 0.0);
    let e1 = q_j.powi(leg_cap as i32 + 1) / (1.0 - q_j);

    // second leg: hitting walks k → i
    let second = hitting_by_powers(a, t, i, leg_cap);
    let q_i = linalg::symmetric_spectral_radius(&remove_vertex(a, i)) / rho;
    let e2 = q_i.powi(leg_cap as i32) / (1.0 - q_i);

    let check = a.map(|x| if x != 0.0 { 1.0 } else { 0.0 });
    let mut c = 0.0;
    let mut c_bound = 0.0;
    let mut c_jump = 0.0;
    let mut c_jump_bound = 0.0;
    for k in (0..n).filter(|&k| k != j) {
        let w1 = first[k];
        let h = second[k];
        let h_err = if k == i { 0.0 } else { e2 };
        c += w1 * h;
        c_bound += e1 * (h + h_err) + w1 * h_err;
        for q in 0..n {
            if check[(k, q)] == 0.0 {
                continue;
            }
            let hq = second[q];
            let hq_err = if q == i { 0.0 } else { e2 };
            c_jump += w1 * hq;
            c_jump_bound += e1 * (hq + hq_err) + w1 * hq_err;
        }
    }
    Ok(AvoidingCycles {
        c,
        c_bound,
        c_jump,
        c_jump_bound,
        leg_cap,
    })
}

/// The same cycle weights by explicit enumeration of both legs, each capped
/// at `leg_cap` edges. Agrees with [`avoiding_cycles`] at the same cap.
pub fn enumerate_avoiding_cycles(
    g: &WeightedMultigraph,
    i: usize,
    j: usize,
    leg_cap: usize,
) -> Result<(f64, f64)> {
    if i == j {
        return Err(Error::InvalidParameter("avoiding cycles need i ≠ j".into()));
    }
    let a = g.adjacency();
    let n = g.order();
    let t = 1.0 / rho_of(g)?;

    let mut first = vec![0.0; n];
    let mut walker = Walker::new(g, leg_cap);
    let avoid = |_: (), v: usize| if v == j { Move::Blocked } else { Move::Continue(()) };
    walker.run(i, (), &avoid, &mut |vs: &[usize], es: &[usize], w, _| {
        first[*vs.last().unwrap()] += t.powi(es.len() as i32) * w;
    })?;

    let mut second = vec![0.0; n];
    for (k, slot) in second.iter_mut().enumerate() {
        if k == i {
            *slot = 1.0;
            continue;
        }
        let mut walker = Walker::new(g, leg_cap);
        let hit = |_: (), v: usize| if v == i { Move::Finish(()) } else { Move::Continue(()) };
        walker.run(k, (), &hit, &mut |vs: &[usize], es: &[usize], w, _| {
            if *vs.last().unwrap() == i {
                *slot += t.powi(es.len() as i32) * w;
            }
        })?;
    }

    let mut c = 0.0;
    let mut c_jump = 0.0;
    for k in (0..n).filter(|&k| k != j) {
        c += first[k] * second[k];
        for q in (0..n).filter(|&q| a[(k, q)] != 0.0) {
            c_jump += first[k] * second[q];
        }
    }
    Ok((c, c_jump))
}

/// Exhaustive test of whether every simple `i`–`k` path passes through `j`.
pub fn separates_by_paths(g: &WeightedMultigraph, j: usize, i: usize, k: usize) -> bool {
    if j == i || j == k {
        return true;
    }
    let adj = g.neighbour_lists();
    let mut on_path = vec![false; g.order()];
    fn avoiding_path(adj: &[Vec<usize>], v: usize, k: usize, j: usize, on_path: &mut [bool]) -> bool {
        if v == k {
            return true;
        }
        on_path[v] = true;
        let found = adj[v]
            .iter()
            .any(|&u| u != j && !on_path[u] && avoiding_path(adj, u, k, j, on_path));
        on_path[v] = false;
        found
    }
    !avoiding_path(&adj, i, k, j, &mut on_path)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub symmetric: bool,
    pub zero_diagonal: bool,
    pub positive_off_diagonal: bool,
    /// Largest `d(i,k) - d(i,j) - d(j,k)`.
    pub max_triangle_excess: f64,
    pub passed: bool,
}

/// Metric axioms with triangle slack `1e-10·max(1, max d)`.
pub fn check_metric(d: &DistanceMatrix) -> MetricReport {
    let m = d.entries();
    let n = m.nrows();
    let symmetric = linalg::is_symmetric(m, 0.0);
    let zero_diagonal = (0..n).all(|i| m[(i, i)] == 0.0);
    let positive_off_diagonal = (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] > 0.0));
    let mut excess = f64::NEG_INFINITY;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                excess = excess.max(m[(i, k)] - m[(i, j)] - m[(j, k)]);
            }
        }
    }
    let slack = 1e-10 * linalg::max_abs(m).max(1.0);
    MetricReport {
        symmetric,
        zero_diagonal,
        positive_off_diagonal,
        max_triangle_excess: excess,
        passed: symmetric && zero_diagonal && positive_off_diagonal && excess <= slack,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleDefect {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// `(d(i,j) + d(j,k) - d(i,k))/d(i,k)`.
    pub defect: f64,
    pub separates: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodeticReport {
    pub triples: usize,
    /// Triples where the equality test and the separator disagree.
    pub mismatches: Vec<TripleDefect>,
    /// Triples with a defect between `eps` and `delta`.
    pub dead_zone: Vec<TripleDefect>,
    pub max_separating_defect: f64,
    pub min_nonseparating_defect: f64,
    pub passed: bool,
}

/// Two-sided graph-geodetic test over triples of distinct vertices: a
/// separating `j` needs relative defect at most `eps`, any other `j` more
/// than `delta`. Defects in between are reported as dead zone and fail.
pub fn check_geodetic(d: &DistanceMatrix, g: &WeightedMultigraph, eps: f64, delta: f64) -> GeodeticReport {
    let n = d.order();
    let mut triples = 0;
    let mut mismatches = Vec::new();
    let mut dead_zone = Vec::new();
    let mut max_sep: f64 = 0.0;
    let mut min_non = f64::INFINITY;
    for i in 0..n {
        for k in (i + 1)..n {
            for j in (0..n).filter(|&j| j != i && j != k) {
                triples += 1;
                let defect = (d.get(i, j) + d.get(j, k) - d.get(i, k)) / d.get(i, k);
                let separates = g.separates(j, i, k);
                let rec = TripleDefect {
                    i,
                    j,
                    k,
                    defect,
                    separates,
                };
                if separates {
                    max_sep = max_sep.max(defect.abs());
                } else {
                    min_non = min_non.min(defect);
                }
                if defect.abs() <= eps {
                    if !separates {
                        mismatches.push(rec);
                    }
                } else if defect > delta {
                    if separates {
                        mismatches.push(rec);
                    }
                } else {
                    dead_zone.push(rec);
                }
            }
        }
    }
    let passed = mismatches.is_empty() && dead_zone.is_empty();
    GeodeticReport {
        triples,
        mismatches,
        dead_zone,
        max_separating_defect: max_sep,
        min_nonseparating_defect: min_non,
        passed,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionReport {
    /// Largest `(s_ij·s_jk - s_ik·s_jj)/(s_ik·s_jj)`.
    pub max_violation: f64,
    /// Triples whose equality status disagrees with the separator.
    pub bottleneck_mismatches: Vec<(usize, usize, usize)>,
    pub passed: bool,
}

/// Transition inequality `s_ij·s_jk ≤ s_ik·s_jj` (relative slack `1e-12`) and,
/// when `g` is given, equality within `1e-9` relative exactly for separating `j`.
pub fn check_transition(s: &DMatrix<f64>, g: Option<&WeightedMultigraph>) -> TransitionReport {
    let n = s.nrows();
    let mut worst = f64::NEG_INFINITY;
    let mut mismatches = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let rhs = s[(i, k)] * s[(j, j)];
                let rel = (s[(i, j)] * s[(j, k)] - rhs) / rhs;
                worst = worst.max(rel);
                if let Some(g) = g {
                    if i != k && i != j && j != k {
                        let equal = rel.abs() <= 1e-9;
                        if equal != g.separates(j, i, k) {
                            mismatches.push((i, j, k));
                        }
                    }
                }
            }
        }
    }
    TransitionReport {
        max_violation: worst,
        passed: worst <= 1e-12 && mismatches.is_empty(),
        bottleneck_mismatches: mismatches,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsdReport {
    pub min_eigenvalue: f64,
    pub passed: bool,
}

/// Squared-Euclidean test: eigenvalues of `-½·J·D·J` at least `-1e-9·max(1, max d)`.
pub fn check_psd_centered(d: &DistanceMatrix) -> PsdReport {
    let n = d.order();
    let j = linalg::centering(n);
    let b = &j * d.entries() * &j * -0.5;
    let b = (&b + b.transpose()) * 0.5;
    let min = linalg::symmetric_eigenvalues(&b)[0];
    PsdReport {
        min_eigenvalue: min,
        passed: min >= -1e-9 * linalg::max_abs(d.entries()).max(1.0),
    }
}

//! Empirical checkers for the degree, diameter-two and coverage properties
//! that the routing constructions rely on.

use rayon::prelude::*;
use serde::Serialize;

use super::{LabeledGraph, NodeSet};

/// Default multiplier on `sqrt((c+1) n log n)` in the degree check.
pub const DEFAULT_DEGREE_K: f64 = 2.0;

/// `⌈(c+3) · log2 n⌉`, the coverage-set size used by every construction.
pub fn coverage_size(n: usize, c: u32) -> usize {
    let exact = f64::from(c + 3) * (n as f64).log2();
    let rounded = exact.round();
    if (exact - rounded).abs() < 1e-9 {
        rounded as usize
    } else {
        exact.ceil() as usize
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeReport {
    pub c: u32,
    pub k: f64,
    /// Allowed deviation `K · sqrt((c+1) · n · log n)`.
    pub threshold: f64,
    /// `|d(v) − (n−1)/2|` per node, index `v − 1`.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
}

impl DegreeReport {
    pub fn node_passes(&self, v: usize) -> bool {
        self.deviations[v - 1] <= self.threshold
    }

    pub fn failing_nodes(&self) -> Vec<usize> {
        (1..=self.deviations.len())
            .filter(|&v| !self.node_passes(v))
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.max_deviation <= self.threshold
    }
}

pub fn check_degree_lemma(g: &LabeledGraph, c: u32) -> DegreeReport {
    check_degree_lemma_with(g, c, DEFAULT_DEGREE_K)
}

pub fn check_degree_lemma_with(g: &LabeledGraph, c: u32, k: f64) -> DegreeReport {
    let n = g.n() as f64;
    let threshold = k * (f64::from(c + 1) * n * n.log2()).sqrt();
    let mid = (n - 1.0) / 2.0;
    let deviations: Vec<f64> = g
        .nodes()
        .map(|v| (g.degree(v) as f64 - mid).abs())
        .collect();
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    DegreeReport {
        c,
        k,
        threshold,
        deviations,
        max_deviation,
    }
}

/// True iff the graph is connected and its largest pairwise distance is
/// exactly two.
pub fn check_diameter_two(g: &LabeledGraph) -> bool {
    let n = g.n();
    if n < 3 {
        return false;
    }
    let mut saw_distance_two = false;
    for u in 1..=n {
        for w in u + 1..=n {
            if g.has_edge(u, w) {
                continue;
            }
            if !g.neighbor_set(u).intersects(g.neighbor_set(w)) {
                return false;
            }
            saw_distance_two = true;
        }
    }
    saw_distance_two
}

/// The least-labeled neighbors of a node, at most `⌈(c+3) log n⌉` of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageSet {
    pub center: usize,
    pub c: u32,
    pub members: Vec<usize>,
}

impl CoverageSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn coverage_set(g: &LabeledGraph, u: usize, c: u32) -> CoverageSet {
    let size = coverage_size(g.n(), c).min(g.degree(u));
    CoverageSet {
        center: u,
        c,
        members: g.neighbors(u)[..size].to_vec(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub c: u32,
    /// Ordered pairs `(u, w)` where `w` is neither `u`, a neighbor of `u`,
    /// nor adjacent to a member of `u`'s coverage set.
    pub violations: Vec<(usize, usize)>,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_coverage_lemma(g: &LabeledGraph, c: u32) -> CoverageReport {
    let violations = g
        .nodes()
        .into_par_iter()
        .flat_map_iter(|u| {
            let mut reached: NodeSet = g.neighbor_set(u).to_set();
            reached.insert(u);
            for v in coverage_set(g, u, c).members {
                reached.union_with(g.neighbor_set(v));
            }
            g.nodes()
                .filter(move |&w| !reached.contains(w))
                .map(move |w| (u, w))
        })
        .collect();
    CoverageReport { c, violations }
}

//! Labeled undirected graphs on nodes `1..=n`, the uniform random sampler,
//! BFS distances, structural lemma checkers and the three-layer family `G_k`.

mod gk;
mod lemmas;
mod nodeset;
mod ports;

pub use gk::{build_gk, relabel_gk_top_row};
pub use lemmas::{
    check_coverage_lemma, check_degree_lemma, check_degree_lemma_with, check_diameter_two,
    coverage_set, coverage_size, CoverageReport, CoverageSet, DegreeReport, DEFAULT_DEGREE_K,
};
pub use nodeset::{NodeRow, NodeSet};
pub use ports::PortAssignment;

use std::collections::VecDeque;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {node} is outside 1..={n}")]
    InvalidNode { node: usize, n: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("graph needs at least {min} nodes, got {n}")]
    TooFewNodes { n: usize, min: usize },
    #[error("port assignment at node {node}: {reason}")]
    BadPortAssignment { node: usize, reason: String },
    #[error("not a permutation of 1..={n}")]
    BadPermutation { n: usize },
}

/// An undirected simple graph on nodes `1..=n`.
///
/// Adjacency is held as one bit row per node plus neighbor lists sorted by
/// label, both in flat buffers; the canonical edge string is produced by
/// [`encode_graph`](crate::bitcodec::encode_graph).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LabeledGraph {
    n: usize,
    /// Words per adjacency row.
    stride: usize,
    rows: Vec<u64>,
    /// Neighbors of `u` are `adjacency[offsets[u-1]..offsets[u]]`.
    offsets: Vec<usize>,
    adjacency: Vec<usize>,
}

impl LabeledGraph {
    /// The graph on `n` nodes without edges.
    pub fn empty(n: usize) -> Self {
        let stride = n.div_ceil(64);
        LabeledGraph {
            n,
            stride,
            rows: vec![0; n * stride],
            offsets: vec![0; n + 1],
            adjacency: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = LabeledGraph::empty(n);
        for u in 1..=n {
            for v in u + 1..=n {
                g.insert_edge(u, v);
            }
        }
        g.finish();
        g
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = LabeledGraph::empty(n);
        for (u, v) in edges {
            for node in [u, v] {
                if node == 0 || node > n {
                    return Err(GraphError::InvalidNode { node, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.insert_edge(u, v);
        }
        g.finish();
        Ok(g)
    }

    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) {
        self.rows[(u - 1) * self.stride + (v - 1) / 64] |= 1 << ((v - 1) % 64);
        self.rows[(v - 1) * self.stride + (u - 1) / 64] |= 1 << ((u - 1) % 64);
    }

    /// Rebuilds the sorted neighbor lists from the bit rows.
    pub(crate) fn finish(&mut self) {
        let ones = self.rows.iter().map(|w| w.count_ones() as usize).sum();
        let mut adjacency = Vec::with_capacity(ones);
        for u in 1..=self.n {
            adjacency.extend(self.neighbor_set(u).iter());
            self.offsets[u] = adjacency.len();
        }
        self.adjacency = adjacency;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbor_set(u).contains(v)
    }

    /// Neighbors of `u` in ascending label order.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[self.offsets[u - 1]..self.offsets[u]]
    }

    #[inline]
    pub fn neighbor_set(&self, u: usize) -> NodeRow<'_> {
        NodeRow::new(&self.rows[(u - 1) * self.stride..u * self.stride], self.n)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u] - self.offsets[u - 1]
    }

    /// Position of `v` in `u`'s sorted neighbor list.
    pub fn neighbor_rank(&self, u: usize, v: usize) -> Option<usize> {
        self.neighbors(u).binary_search(&v).ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.len() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    /// The isomorphic graph in which node `v` carries label `new_label[v - 1]`.
    pub fn relabel(&self, new_label: &[usize]) -> Result<LabeledGraph, GraphError> {
        if !is_permutation(new_label) || new_label.len() != self.n {
            return Err(GraphError::BadPermutation { n: self.n });
        }
        LabeledGraph::from_edges(
            self.n,
            self.edges()
                .map(|(u, v)| (new_label[u - 1], new_label[v - 1])),
        )
    }
}

/// True when `values` is a permutation of `1..=values.len()`.
pub fn is_permutation(values: &[usize]) -> bool {
    let mut seen = vec![false; values.len()];
    values.iter().all(|&v| {
        if v == 0 || v > values.len() || seen[v - 1] {
            return false;
        }
        seen[v - 1] = true;
        true
    })
}

/// Samples each of the `n(n-1)/2` possible edges independently with
/// probability 1/2. Deterministic in `seed`.
pub fn generate_uniform(n: usize, seed: u64) -> Result<LabeledGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::TooFewNodes { n, min: 2 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = LabeledGraph::empty(n);
    let mut word = 0u64;
    let mut left = 0;
    for u in 1..=n {
        for v in u + 1..=n {
            if left == 0 {
                word = rng.next_u64();
                left = 64;
            }
            if word & 1 == 1 {
                g.insert_edge(u, v);
            }
            word >>= 1;
            left -= 1;
        }
    }
    g.finish();
    Ok(g)
}

/// Hop distances from one source; `None` marks unreachable nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distances {
    dist: Vec<Option<u32>>,
}

impl Distances {
    pub fn get(&self, v: usize) -> Option<u32> {
        self.dist[v - 1]
    }

    pub fn as_slice(&self) -> &[Option<u32>] {
        &self.dist
    }

    pub fn eccentricity(&self) -> Option<u32> {
        self.dist.iter().try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }
}

pub fn bfs_distances(g: &LabeledGraph, src: usize) -> Distances {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::new();
    dist[src - 1] = Some(0);
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let du = dist[u - 1].unwrap();
        for &v in g.neighbors(u) {
            if dist[v - 1].is_none() {
                dist[v - 1] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    Distances { dist }
}

/// All-pairs hop distances by one BFS per source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    rows: Vec<Distances>,
}

impl DistanceMatrix {
    pub fn new(g: &LabeledGraph) -> Self {
        let rows = g
            .nodes()
            .into_par_iter()
            .map(|s| bfs_distances(g, s))
            .collect();
        DistanceMatrix { n: g.n(), rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        self.rows[u - 1].get(v)
    }

    pub fn from_source(&self, u: usize) -> &Distances {
        &self.rows[u - 1]
    }

    /// Largest finite distance, or `None` if some pair is disconnected.
    pub fn diameter(&self) -> Option<u32> {
        self.rows
            .iter()
            .try_fold(0, |acc, row| row.eccentricity().map(|e| acc.max(e)))
    }
}

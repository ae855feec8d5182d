//! Hop-by-hop execution of routing schemes, with stretch measurement and
//! BFS-oracle verification.

mod verify;

pub use verify::{
    verify_full_info, verify_shortest, verify_shortest_with, FullInfoMismatch, FullInfoReport,
    ShortestReport, ShortestViolation,
};

use std::fmt;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graphs::{bfs_distances, DistanceMatrix, LabeledGraph};
use crate::schemes::{Action, EvalError, Header, InfoModel, RoutingScheme};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("node {node}: action {action:?} is not allowed under model {info:?}")]
    IllegalAction {
        node: usize,
        action: Action,
        info: InfoModel,
    },
    #[error("node {node}: {target} is not a neighbor")]
    NotANeighbor { node: usize, target: usize },
    #[error("node {node}: no port {port}")]
    BadPort { node: usize, port: usize },
    #[error("node {node}: bounce with no sender")]
    NoSender { node: usize },
    #[error("invalid endpoints {src} -> {dst}")]
    InvalidEndpoints { src: usize, dst: usize },
    #[error("{src} cannot reach {dst}")]
    Unreachable { src: usize, dst: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// One routing decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Hop {
    pub node: usize,
    pub action: Action,
    pub header: Option<Header>,
}

impl fmt::Display for Hop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let action = match self.action {
            Action::Deliver => "deliver".to_string(),
            Action::ForwardPort(p) => format!("port:{p}"),
            Action::ForwardNeighbor(v) => format!("neighbor:{v}"),
            Action::ProbeNext => "bounce".to_string(),
        };
        let header = match self.header {
            None => "-".to_string(),
            Some(h) => format!("probe:{}{}", h.probe, if h.failed { ",failed" } else { "" }),
        };
        write!(f, "node={} action={action} header={header}", self.node)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteResult {
    /// Every node the message visited, bounces included.
    pub walk: Vec<usize>,
    /// The walk with bounce excursions removed.
    pub path: Vec<usize>,
    pub hops: Vec<Hop>,
    /// Edges crossed, counting both directions of a bounce.
    pub edge_traversals: usize,
    pub delivered: bool,
    pub shortest: u32,
    /// `(path.len() - 1) / shortest`.
    pub stretch: Ratio<u32>,
}

impl RouteResult {
    pub fn path_len(&self) -> usize {
        self.path.len() - 1
    }

    /// `edge_traversals / shortest`.
    pub fn traversal_stretch(&self) -> Ratio<u32> {
        Ratio::new(self.edge_traversals as u32, self.shortest)
    }
}

/// Removes cycles from a walk, keeping the last visit of each repeated node.
fn loop_erase(walk: &[usize]) -> Vec<usize> {
    let mut path: Vec<usize> = Vec::with_capacity(walk.len());
    for &v in walk {
        if let Some(i) = path.iter().position(|&x| x == v) {
            path.truncate(i);
        }
        path.push(v);
    }
    path
}

/// Route cap after which a message is declared undeliverable.
pub fn hop_cap(n: usize) -> usize {
    4 * n
}

/// Routes one message from `src` to `dst`.
pub fn route(
    g: &LabeledGraph,
    s: &RoutingScheme,
    src: usize,
    dst: usize,
) -> Result<RouteResult, SimError> {
    let valid = 1..=g.n();
    if !valid.contains(&src) || !valid.contains(&dst) {
        return Err(SimError::InvalidEndpoints { src, dst });
    }
    let shortest = bfs_distances(g, src).get(dst);
    route_known(g, s, src, dst, shortest)
}

pub(crate) fn route_known(
    g: &LabeledGraph,
    s: &RoutingScheme,
    src: usize,
    dst: usize,
    shortest: Option<u32>,
) -> Result<RouteResult, SimError> {
    let n = g.n();
    if src == dst || !(1..=n).contains(&src) || !(1..=n).contains(&dst) || s.n() != n {
        return Err(SimError::InvalidEndpoints { src, dst });
    }
    let shortest = shortest.ok_or(SimError::Unreachable { src, dst })?;
    let info = s.model().info;
    let address = s.address_of(dst);

    let mut walk = vec![src];
    let mut hops = Vec::new();
    let mut senders: Vec<usize> = Vec::new();
    let mut at = src;
    let mut header = None;
    let mut delivered = false;
    while hops.len() <= hop_cap(n) {
        let step = s.function(at).evaluate(&address, header)?;
        hops.push(Hop {
            node: at,
            action: step.action,
            header: step.header,
        });
        let next = match step.action {
            Action::Deliver => {
                delivered = true;
                break;
            }
            Action::ForwardNeighbor(v) => {
                if info != InfoModel::II {
                    return Err(SimError::IllegalAction {
                        node: at,
                        action: step.action,
                        info,
                    });
                }
                if !g.has_edge(at, v) {
                    return Err(SimError::NotANeighbor {
                        node: at,
                        target: v,
                    });
                }
                v
            }
            Action::ForwardPort(p) => {
                let ports = match (info, s.ports()) {
                    (InfoModel::II, _) | (_, None) => {
                        return Err(SimError::IllegalAction {
                            node: at,
                            action: step.action,
                            info,
                        })
                    }
                    (_, Some(ports)) => ports,
                };
                ports
                    .neighbor_at(at, p)
                    .ok_or(SimError::BadPort { node: at, port: p })?
            }
            Action::ProbeNext => senders
                .last()
                .copied()
                .ok_or(SimError::NoSender { node: at })?,
        };
        if step.action == Action::ProbeNext {
            senders.pop();
        } else {
            senders.push(at);
        }
        header = step.header;
        walk.push(next);
        at = next;
    }
    let path = loop_erase(&walk);
    let stretch = Ratio::new((path.len() - 1) as u32, shortest);
    Ok(RouteResult {
        edge_traversals: walk.len() - 1,
        walk,
        path,
        hops,
        delivered,
        shortest,
        stretch,
    })
}

/// Which ordered pairs to route.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "policy")]
pub enum PairSampler {
    All,
    /// `count` pairs drawn uniformly with replacement.
    Sample {
        count: usize,
        seed: u64,
    },
}

impl PairSampler {
    /// All pairs up to 256 nodes, otherwise `10^5` sampled pairs.
    pub fn default_for(n: usize, seed: u64) -> Self {
        if n <= 256 {
            PairSampler::All
        } else {
            PairSampler::Sample {
                count: 100_000,
                seed,
            }
        }
    }

    pub fn pairs(&self, n: usize) -> Vec<(usize, usize)> {
        match *self {
            PairSampler::All => (1..=n)
                .flat_map(|u| (1..=n).filter(move |&v| v != u).map(move |v| (u, v)))
                .collect(),
            PairSampler::Sample { count, seed } => {
                if n < 2 {
                    return Vec::new();
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..count)
                    .map(|_| {
                        let u = rng.gen_range(1..=n);
                        let mut v = rng.gen_range(1..n);
                        if v >= u {
                            v += 1;
                        }
                        (u, v)
                    })
                    .collect()
            }
        }
    }
}

/// Aggregates over a set of routed pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RouteStats {
    pub pairs: usize,
    pub delivered: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub max_stretch: Ratio<u32>,
    #[serde(serialize_with = "serialize_ratio")]
    pub max_traversal_stretch: Ratio<u32>,
    pub max_traversals: usize,
    pub max_path_hops: usize,
}

impl RouteStats {
    pub fn all_delivered(&self) -> bool {
        self.delivered == self.pairs
    }
}

fn serialize_ratio<S: serde::Serializer>(r: &Ratio<u32>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}

/// `p/q` in lowest terms; integers print as `p/1`.
pub fn format_ratio(r: &Ratio<u32>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Routes every sampled pair against a precomputed BFS oracle.
pub fn route_stats(
    g: &LabeledGraph,
    s: &RoutingScheme,
    dist: &DistanceMatrix,
    sampler: PairSampler,
) -> Result<RouteStats, SimError> {
    let pairs = sampler.pairs(g.n());
    let results: Vec<RouteResult> = pairs
        .par_iter()
        .map(|&(u, v)| route_known(g, s, u, v, dist.get(u, v)))
        .collect::<Result<_, _>>()?;
    let mut stats = RouteStats {
        pairs: results.len(),
        delivered: 0,
        max_stretch: Ratio::from_integer(0),
        max_traversal_stretch: Ratio::from_integer(0),
        max_traversals: 0,
        max_path_hops: 0,
    };
    for r in &results {
        stats.delivered += usize::from(r.delivered);
        stats.max_stretch = stats.max_stretch.max(r.stretch);
        stats.max_traversal_stretch = stats.max_traversal_stretch.max(r.traversal_stretch());
        stats.max_traversals = stats.max_traversals.max(r.edge_traversals);
        stats.max_path_hops = stats.max_path_hops.max(r.path_len());
    }
    Ok(stats)
}

/// Maximum path stretch over the sampled pairs.
pub fn max_stretch(
    g: &LabeledGraph,
    s: &RoutingScheme,
    sampler: PairSampler,
) -> Result<Ratio<u32>, SimError> {
    Ok(route_stats(g, s, &DistanceMatrix::new(g), sampler)?.max_stretch)
}

/// Maximum edge traversals over the sampled pairs.
pub fn max_traversals(
    g: &LabeledGraph,
    s: &RoutingScheme,
    sampler: PairSampler,
) -> Result<usize, SimError> {
    Ok(route_stats(g, s, &DistanceMatrix::new(g), sampler)?.max_traversals)
}

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GraphError, LabeledGraph};

/// Per-node bijection between ports `1..=deg(v)` and incident edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortAssignment {
    /// `wiring[v-1][p-1]` is the neighbor behind port `p` of `v`.
    wiring: Vec<Vec<usize>>,
    /// `port_of_rank[v-1][r]` is the port leading to `v`'s `r`-th smallest neighbor.
    port_of_rank: Vec<Vec<usize>>,
    /// `rank_of_port[v-1][p-1]` is the neighbor rank behind port `p`.
    rank_of_port: Vec<Vec<usize>>,
}

impl PortAssignment {
    /// Port `i` leads to the `i`-th smallest-labeled neighbor.
    pub fn rank_order(g: &LabeledGraph) -> Self {
        let wiring = g.nodes().map(|v| g.neighbors(v).to_vec()).collect();
        Self::from_lists(g, wiring).expect("rank order is always a bijection")
    }

    /// Independent uniformly shuffled port order at every node.
    pub fn random(g: &LabeledGraph, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let wiring = g
            .nodes()
            .map(|v| {
                let mut ports = g.neighbors(v).to_vec();
                ports.shuffle(&mut rng);
                ports
            })
            .collect();
        Self::from_lists(g, wiring).expect("a shuffle is always a bijection")
    }

    /// Validates that each list is a permutation of the node's neighbors.
    pub fn from_lists(g: &LabeledGraph, wiring: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        if wiring.len() != g.n() {
            return Err(GraphError::BadPortAssignment {
                node: 0,
                reason: format!("expected {} port lists, got {}", g.n(), wiring.len()),
            });
        }
        let mut port_of_rank = Vec::with_capacity(g.n());
        let mut rank_of_port = Vec::with_capacity(g.n());
        for (v, ports) in g.nodes().zip(&wiring) {
            let degree = g.degree(v);
            if ports.len() != degree {
                return Err(GraphError::BadPortAssignment {
                    node: v,
                    reason: format!("{} ports for degree {degree}", ports.len()),
                });
            }
            let mut by_rank = vec![usize::MAX; degree];
            let mut ranks = Vec::with_capacity(degree);
            for (p, &w) in ports.iter().enumerate() {
                let rank = g
                    .neighbor_rank(v, w)
                    .ok_or_else(|| GraphError::BadPortAssignment {
                        node: v,
                        reason: format!("port {} leads to non-neighbor {w}", p + 1),
                    })?;
                if by_rank[rank] != usize::MAX {
                    return Err(GraphError::BadPortAssignment {
                        node: v,
                        reason: format!("neighbor {w} appears on two ports"),
                    });
                }
                by_rank[rank] = p + 1;
                ranks.push(rank);
            }
            port_of_rank.push(by_rank);
            rank_of_port.push(ranks);
        }
        Ok(PortAssignment {
            wiring,
            port_of_rank,
            rank_of_port,
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.wiring[v - 1].len()
    }

    /// The neighbor behind `port` (1-based), if the port exists.
    pub fn neighbor_at(&self, v: usize, port: usize) -> Option<usize> {
        port.checked_sub(1)
            .and_then(|p| self.wiring[v - 1].get(p).copied())
    }

    pub fn port_of_rank(&self, v: usize, rank: usize) -> usize {
        self.port_of_rank[v - 1][rank]
    }

    /// Neighbor ranks in port order: entry `p` is the rank behind port `p + 1`.
    pub fn ranks_by_port(&self, v: usize) -> &[usize] {
        &self.rank_of_port[v - 1]
    }

    pub fn ports(&self, v: usize) -> &[usize] {
        &self.wiring[v - 1]
    }
}

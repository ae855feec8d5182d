//! The two-table shortest-path function for diameter-two graphs.
//!
//! For a node `u` with coverage set `v_1..v_m` (its least-labeled
//! neighbors), every non-neighbor `w` is assigned the least stage `t` with
//! `(v_t, w) ∈ E`. Stage sets `A_t` shrink the remaining count `m_t`; the
//! cutoff `l` is the first stage with `m_t < n / log n`.
//!
//! * The unary table has one entry per non-neighbor in ascending label order:
//!   `1^t 0` when `w` lies in a stage `t ≤ l`, otherwise a lone `0`.
//! * The index table lists, for the deferred nodes in ascending order, the index
//!   `t - 1` of the least covering neighbor in `index_width(min(m, d))` bits.

use serde::Serialize;

use super::{BuildError, DecodeError};
use crate::bitcodec::{index_width, BitReader, BitString};
use crate::graphs::LabeledGraph;

/// A stage `t ≤ l` where `|A_t| > m_{t-1} / 3` failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimViolation {
    pub node: usize,
    pub stage: usize,
    pub covered: usize,
    pub remaining_before: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct EncodedTables {
    pub bits: BitString,
    pub cutoff: usize,
    pub deferred: usize,
    pub violations: Vec<ClaimViolation>,
}

pub(crate) fn cutoff_threshold(n: usize) -> f64 {
    let n = n as f64;
    n / n.log2()
}

/// Non-neighbors of `owner` other than itself, ascending.
fn non_neighbors<'a>(
    n: usize,
    owner: usize,
    neighbors: &'a [usize],
) -> impl Iterator<Item = usize> + 'a {
    let mut next = 0;
    (1..=n).filter(move |&w| {
        while next < neighbors.len() && neighbors[next] < w {
            next += 1;
        }
        w != owner && !(next < neighbors.len() && neighbors[next] == w)
    })
}

pub(crate) fn encode_tables(
    g: &LabeledGraph,
    u: usize,
    coverage: usize,
) -> Result<EncodedTables, BuildError> {
    let n = g.n();
    let cover = &g.neighbors(u)[..coverage.min(g.degree(u))];
    let targets: Vec<usize> = non_neighbors(n, u, g.neighbors(u)).collect();

    // stage[i] is the 1-based index of the least covering neighbor of targets[i].
    let mut stage = Vec::with_capacity(targets.len());
    for &w in &targets {
        let t = cover
            .iter()
            .position(|&v| g.has_edge(v, w))
            .ok_or(BuildError::Uncovered {
                node: u,
                destination: w,
            })?;
        stage.push(t + 1);
    }

    let mut per_stage = vec![0usize; cover.len() + 1];
    for &t in &stage {
        per_stage[t] += 1;
    }
    let threshold = cutoff_threshold(n);
    let mut remaining = targets.len();
    let mut cutoff = 0;
    let mut violations = Vec::new();
    while (remaining as f64) >= threshold && cutoff < cover.len() {
        cutoff += 1;
        let covered = per_stage[cutoff];
        if 3 * covered <= remaining {
            violations.push(ClaimViolation {
                node: u,
                stage: cutoff,
                covered,
                remaining_before: remaining,
            });
        }
        remaining -= covered;
    }

    let width = if cover.is_empty() {
        0
    } else {
        index_width(cover.len())
    };
    let mut bits = BitString::new();
    let mut deferred = Vec::new();
    for &t in &stage {
        if t <= cutoff {
            bits.push_unary(t);
        } else {
            bits.push(false);
            deferred.push(t);
        }
    }
    for &t in &deferred {
        bits.push_bits((t - 1) as u64, width);
    }
    Ok(EncodedTables {
        bits,
        cutoff,
        deferred: deferred.len(),
        violations,
    })
}

/// Bits consumed by each table.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct TableSizes {
    pub unary: usize,
    pub explicit: usize,
}

/// Reads both tables and records, for every non-neighbor `w`, the rank of
/// the chosen intermediate neighbor in `rank_of[w - 1]`.
pub(crate) fn decode_tables(
    reader: &mut BitReader<'_>,
    n: usize,
    owner: usize,
    neighbors: &[usize],
    coverage: usize,
    rank_of: &mut [Option<usize>],
) -> Result<TableSizes, DecodeError> {
    let cover_len = coverage.min(neighbors.len());
    let start = reader.position();
    let mut deferred = Vec::new();
    for w in non_neighbors(n, owner, neighbors) {
        let t = reader.read_unary()?;
        if t == 0 {
            deferred.push(w);
        } else if t > cover_len {
            return Err(DecodeError::EntryOutOfRange {
                node: owner,
                value: t,
                limit: cover_len,
            });
        } else {
            rank_of[w - 1] = Some(t - 1);
        }
    }
    let unary = reader.position() - start;
    if !deferred.is_empty() && cover_len == 0 {
        return Err(DecodeError::EntryOutOfRange {
            node: owner,
            value: 0,
            limit: 0,
        });
    }
    let width = if cover_len == 0 {
        0
    } else {
        index_width(cover_len)
    };
    for w in deferred {
        let idx = reader.read_bits(width)? as usize;
        if idx >= cover_len {
            return Err(DecodeError::EntryOutOfRange {
                node: owner,
                value: idx,
                limit: cover_len,
            });
        }
        rank_of[w - 1] = Some(idx);
    }
    Ok(TableSizes {
        unary,
        explicit: reader.position() - start - unary,
    })
}

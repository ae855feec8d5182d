//! Local routing functions and their decoders.
//!
//! A [`LocalRoutingFunction`] is always produced by decoding its charged bit
//! encoding together with what the node knows for free under the model
//! (its own label, the global parameters `n` and `c`, its port count, and
//! under model II its sorted neighbor list). Evaluation never looks at the
//! graph, so whatever the encoding omits cannot be used for routing.

use serde::Serialize;

use super::lehmer::read_permutation;
use super::table::decode_tables;
use super::{DecodeError, EvalError, InfoModel, SchemeKind};
use crate::bitcodec::{bit_width, index_width, BitReader, BitString};
use crate::graphs::{coverage_size, NodeSet};

/// Width of the fixed program tag charged for table-free functions.
pub const PROGRAM_TAG_BITS: usize = 8;
pub const TAG_RELABEL: u64 = 0x52;
pub const TAG_PROBE: u64 = 0x50;
pub const TAG_HUB_NEIGHBOR: u64 = 0x48;

/// The hub of the stretch-2 scheme and the center of the stretch-1.5 scheme.
pub const HUB: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Action {
    Deliver,
    /// Send over the given port (1-based). Models IA and IB only.
    ForwardPort(usize),
    /// Send to the neighbor with this label. Model II only.
    ForwardNeighbor(usize),
    /// Return the message to the node it came from, marked as failed.
    ProbeNext,
}

/// Extra message header used by probe routing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Header {
    /// 1-based index of the coverage neighbor currently being probed.
    pub probe: u32,
    pub failed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub action: Action,
    pub header: Option<Header>,
}

impl Step {
    fn plain(action: Action) -> Self {
        Step {
            action,
            header: None,
        }
    }
}

/// A destination as written in a message header.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Address {
    Label(usize),
    /// A self-contained label assigned by relabeling.
    Bits(BitString),
}

/// Named parts of an encoding, for size breakdowns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    ProgramTag,
    KindFlag,
    UnaryTable,
    ExplicitTable,
    NextHopTable,
    CenterPointer,
    HubIndex,
    NeighborBitmap,
    PortPermutation,
    FirstHopBitmaps,
    Label,
}

impl Component {
    pub fn name(self) -> &'static str {
        match self {
            Component::ProgramTag => "program_tag",
            Component::KindFlag => "kind_flag",
            Component::UnaryTable => "unary_table",
            Component::ExplicitTable => "explicit_table",
            Component::NextHopTable => "next_hop_table",
            Component::CenterPointer => "center_pointer",
            Component::HubIndex => "hub_index",
            Component::NeighborBitmap => "neighbor_bitmap",
            Component::PortPermutation => "port_permutation",
            Component::FirstHopBitmaps => "first_hop_bitmaps",
            Component::Label => "label",
        }
    }
}

/// What a node knows without paying for it.
#[derive(Clone, Debug)]
pub struct NodeContext<'a> {
    pub owner: usize,
    pub n: usize,
    pub c: u32,
    pub info: InfoModel,
    /// Port count, known under every model.
    pub degree: usize,
    /// Sorted neighbor labels; present only under model II.
    pub neighbors: Option<&'a [usize]>,
}

impl NodeContext<'_> {
    fn known_neighbors(&self) -> Result<&[usize], DecodeError> {
        self.neighbors
            .ok_or(DecodeError::MissingKnowledge { node: self.owner })
    }

    fn coverage(&self) -> usize {
        coverage_size(self.n, self.c)
    }
}

#[derive(Clone, Debug)]
enum Program {
    /// `hops[d - 1]` is the neighbor label (or port) toward `d`; 0 for the owner.
    NextHop { hops: Vec<u32>, by_port: bool },
    Relabel {
        neighbors: NodeSet,
        label_width: usize,
        entries: usize,
    },
    Probe {
        neighbors: NodeSet,
        coverage: Vec<usize>,
    },
    FullInfo {
        /// First hop (least port-rank) per destination, as a port.
        first: Vec<u32>,
        neighbors: Vec<usize>,
        port_of_rank: Vec<usize>,
        /// Index among non-neighbors per destination, `u32::MAX` otherwise.
        slot: Vec<u32>,
        bitmaps_start: usize,
    },
}

#[derive(Clone, Debug)]
pub struct LocalRoutingFunction {
    owner: usize,
    encoding: BitString,
    components: Vec<(Component, usize)>,
    program: Program,
}

impl LocalRoutingFunction {
    pub fn owner(&self) -> usize {
        self.owner
    }

    /// The charged representation of this function.
    pub fn encoding(&self) -> &BitString {
        &self.encoding
    }

    /// Bit counts per component; they sum to `encoding().len()`.
    pub fn components(&self) -> &[(Component, usize)] {
        &self.components
    }

    pub fn decode(
        kind: SchemeKind,
        ctx: &NodeContext<'_>,
        encoding: BitString,
    ) -> Result<Self, DecodeError> {
        let mut parts = Parts::default();
        let mut reader = encoding.reader();
        let program = match kind {
            SchemeKind::NeighborKnown => decode_neighbor_known(ctx, &mut reader, &mut parts)?,
            SchemeKind::Canonical => decode_canonical(ctx, &mut reader, &mut parts)?,
            SchemeKind::Relabel => decode_relabel(ctx, &mut reader, &mut parts)?,
            SchemeKind::Stretch15 => decode_stretch15(ctx, &mut reader, &mut parts)?,
            SchemeKind::Stretch2Hub => decode_stretch2(ctx, &mut reader, &mut parts)?,
            SchemeKind::StretchLogN => decode_probe(ctx, &mut reader, &mut parts)?,
            SchemeKind::FixedPort => decode_fixed_port(ctx, &mut reader, &mut parts)?,
            SchemeKind::FullInfo => decode_full_info(ctx, &mut reader, &mut parts)?,
        };
        if !reader.is_exhausted() {
            return Err(DecodeError::TrailingBits {
                node: ctx.owner,
                count: reader.remaining(),
            });
        }
        Ok(LocalRoutingFunction {
            owner: ctx.owner,
            encoding,
            components: parts.0,
            program,
        })
    }

    /// Decides what to do with a message for `dest` arriving with `header`.
    pub fn evaluate(&self, dest: &Address, header: Option<Header>) -> Result<Step, EvalError> {
        match &self.program {
            Program::NextHop { hops, by_port } => {
                let d = self.plain_label(dest, hops.len())?;
                if d == self.owner {
                    return Ok(Step::plain(Action::Deliver));
                }
                match hops[d - 1] {
                    0 => Err(EvalError::NoRoute {
                        node: self.owner,
                        destination: d,
                    }),
                    h if *by_port => Ok(Step::plain(Action::ForwardPort(h as usize))),
                    h => Ok(Step::plain(Action::ForwardNeighbor(h as usize))),
                }
            }
            Program::Relabel {
                neighbors,
                label_width,
                entries,
            } => {
                let Address::Bits(label) = dest else {
                    return Err(EvalError::InvalidLabel { node: self.owner });
                };
                if label.len() != (1 + entries) * label_width {
                    return Err(EvalError::InvalidLabel { node: self.owner });
                }
                let mut reader = label.reader();
                let mut next_label = || reader.read_bits(*label_width).map(|v| v as usize + 1);
                let d = next_label().map_err(|_| EvalError::InvalidLabel { node: self.owner })?;
                if d > neighbors.capacity() {
                    return Err(EvalError::InvalidLabel { node: self.owner });
                }
                if d == self.owner {
                    return Ok(Step::plain(Action::Deliver));
                }
                if neighbors.contains(d) {
                    return Ok(Step::plain(Action::ForwardNeighbor(d)));
                }
                for _ in 0..*entries {
                    let x =
                        next_label().map_err(|_| EvalError::InvalidLabel { node: self.owner })?;
                    if neighbors.contains(x) {
                        return Ok(Step::plain(Action::ForwardNeighbor(x)));
                    }
                }
                Err(EvalError::NoRoute {
                    node: self.owner,
                    destination: d,
                })
            }
            Program::Probe {
                neighbors,
                coverage,
            } => {
                let d = self.plain_label(dest, neighbors.capacity())?;
                if d == self.owner {
                    return Ok(Step::plain(Action::Deliver));
                }
                match header {
                    // Being probed: deliver if possible, otherwise bounce.
                    Some(h) if !h.failed => {
                        if neighbors.contains(d) {
                            Ok(Step::plain(Action::ForwardNeighbor(d)))
                        } else {
                            Ok(Step {
                                action: Action::ProbeNext,
                                header: Some(Header {
                                    probe: h.probe,
                                    failed: true,
                                }),
                            })
                        }
                    }
                    _ if header.is_none() && neighbors.contains(d) => {
                        Ok(Step::plain(Action::ForwardNeighbor(d)))
                    }
                    _ => {
                        let next = header.map_or(1, |h| h.probe + 1);
                        let Some(&v) = coverage.get(next as usize - 1) else {
                            return Err(EvalError::ProbeExhausted {
                                node: self.owner,
                                destination: d,
                            });
                        };
                        Ok(Step {
                            action: Action::ForwardNeighbor(v),
                            header: Some(Header {
                                probe: next,
                                failed: false,
                            }),
                        })
                    }
                }
            }
            Program::FullInfo { first, .. } => {
                let d = self.plain_label(dest, first.len())?;
                if d == self.owner {
                    return Ok(Step::plain(Action::Deliver));
                }
                match first[d - 1] {
                    0 => Err(EvalError::NoRoute {
                        node: self.owner,
                        destination: d,
                    }),
                    p => Ok(Step::plain(Action::ForwardPort(p as usize))),
                }
            }
        }
    }

    /// All ports on shortest paths toward `dest`, ascending. Only
    /// full-information functions answer this.
    pub fn port_set(&self, dest: usize) -> Result<Vec<usize>, EvalError> {
        let Program::FullInfo {
            neighbors,
            port_of_rank,
            slot,
            bitmaps_start,
            ..
        } = &self.program
        else {
            return Err(EvalError::NotFullInformation { node: self.owner });
        };
        let d = self.plain_label(&Address::Label(dest), slot.len())?;
        if d == self.owner {
            return Ok(Vec::new());
        }
        if let Ok(rank) = neighbors.binary_search(&d) {
            return Ok(vec![port_of_rank[rank]]);
        }
        let start = bitmaps_start + slot[d - 1] as usize * neighbors.len();
        let mut ports: Vec<usize> = (0..neighbors.len())
            .filter(|&r| self.encoding.get(start + r))
            .map(|r| port_of_rank[r])
            .collect();
        ports.sort_unstable();
        Ok(ports)
    }

    fn plain_label(&self, dest: &Address, n: usize) -> Result<usize, EvalError> {
        match dest {
            Address::Label(d) if (1..=n).contains(d) => Ok(*d),
            _ => Err(EvalError::InvalidLabel { node: self.owner }),
        }
    }
}

#[derive(Default)]
struct Parts(Vec<(Component, usize)>);

impl Parts {
    fn add(&mut self, component: Component, bits: usize) {
        self.0.push((component, bits));
    }
}

fn read_tag(
    ctx: &NodeContext<'_>,
    reader: &mut BitReader<'_>,
    parts: &mut Parts,
    expected: u64,
) -> Result<(), DecodeError> {
    let tag = reader.read_bits(PROGRAM_TAG_BITS)?;
    if tag != expected {
        return Err(DecodeError::BadTag {
            node: ctx.owner,
            tag,
        });
    }
    parts.add(Component::ProgramTag, PROGRAM_TAG_BITS);
    Ok(())
}

/// `n − 1` bits, one per other node in ascending order.
fn read_neighbor_bitmap(
    ctx: &NodeContext<'_>,
    reader: &mut BitReader<'_>,
    parts: &mut Parts,
) -> Result<Vec<usize>, DecodeError> {
    let mut neighbors = Vec::new();
    for v in (1..=ctx.n).filter(|&v| v != ctx.owner) {
        if reader.read_bit()? {
            neighbors.push(v);
        }
    }
    parts.add(Component::NeighborBitmap, ctx.n - 1);
    if neighbors.len() != ctx.degree {
        return Err(DecodeError::DegreeMismatch {
            node: ctx.owner,
            bitmap: neighbors.len(),
            ports: ctx.degree,
        });
    }
    Ok(neighbors)
}

/// Reads the port permutation and returns the port behind each neighbor rank.
fn read_port_permutation(
    reader: &mut BitReader<'_>,
    parts: &mut Parts,
    degree: usize,
) -> Result<Vec<usize>, DecodeError> {
    let start = reader.position();
    let rank_by_port = read_permutation(reader, degree)?;
    parts.add(Component::PortPermutation, reader.position() - start);
    let mut port_of_rank = vec![0; degree];
    for (p, &r) in rank_by_port.iter().enumerate() {
        port_of_rank[r] = p + 1;
    }
    Ok(port_of_rank)
}

/// Decodes the two shortest-path tables into next-hop ranks.
fn read_tables(
    ctx: &NodeContext<'_>,
    reader: &mut BitReader<'_>,
    parts: &mut Parts,
    neighbors: &[usize],
) -> Result<Vec<Option<usize>>, DecodeError> {
    let mut rank_of = vec![None; ctx.n];
    for (r, &v) in neighbors.iter().enumerate() {
        rank_of[v - 1] = Some(r);
    }
    let sizes = decode_tables(
        reader,
        ctx.n,
        ctx.owner,
        neighbors,
        ctx.coverage(),
        &mut rank_of,
    )?;
    parts.add(Component::UnaryTable, sizes.unary);
    parts.add(Component::ExplicitTable, sizes.explicit);
    Ok(rank_of)
}

fn hops_by_neighbor(neighbors: &[usize], rank_of: &[Option<usize>]) -> Vec<u32> {
    rank_of
        .iter()
        .map(|r| r.map_or(0, |r| neighbors[r] as u32))
        .collect()
}

fn hops_by_port(port_of_rank: &[usize], rank_of: &[Option<usize>]) -> Vec<u32> {
    rank_of
        .iter()
        .map(|r| r.map_or(0, |r| port_of_rank[r] as u32))
        .collect()
}

/// Every destination that is not a neighbor is sent to `target`.
fn hops_via(ctx: &NodeContext<'_>, neighbors: &[usize], target: usize) -> Vec<u32> {
    let mut hops = vec![target as u32; ctx.n];
    hops[ctx.owner - 1] = 0;
    for &v in neighbors {
        hops[v - 1] = v as u32;
    }
    hops
}

fn decode_neighbor_known(
    ctx: &NodeContext<'_>,
    reader: &mut BitReader<'_>,
    parts: &mut Parts,
) -> Result<Program, DecodeError> {
    match ctx.info {
        InfoModel::II => {
            let neighbors = ctx.known_neighbors()?;
            let rank_of = read_tables(ctx, reader, parts, neighbors)?;
            Ok(Program::NextHop {
                hops: hops_by_neighbor(neighbors, &rank_of),
                by_port: false,
            })
        }
        InfoModel::IB => {
            // Ports were rewritten so that port i leads to the i-th smallest neighbor.
            let neighbors = read_neighbor_bitmap(ctx, reader, parts)?;
            let rank_of = read_tables(ctx, reader, parts, &neighbors)?;
            let rank_order: Vec<usize> = (1..=neighbors.len()).collect();
            Ok(Program::NextHop {
                hops: hops_by_port(&rank_order, &rank_of),
                by_port: true,
            })
        }
        InfoModel::IA => Err(DecodeError::UnsupportedModel {
            kind: SchemeKind::NeighborKnown,
        }),
    }
}

fn decode_fixed_port(
    ctx: &NodeContext<'_>,
    reader: &mut BitReader<'_>,
    parts: &mut Parts,
) -> Result<Program, DecodeError> {
    let neighbors = read_neighbor_bitmap(ctx, reader, parts)?;
    let port_of_rank = read_port_permutation(reader, parts, neighbors.len())?;
    let rank_of = read_tables(ctx, reader, parts, &neighbors)?;
    Ok(Program::NextHop {
        hops: hops_by_port(&port_of_rank, &rank_of),
        by_port: true,
    })
}

/// Explicit next-hop ranks for every non-neighbor, `⌈log d⌉` bits each.
fn decode_canonical(
    ctx: &NodeContext<'_>,
    reader: &mut BitReader<'_>,
    parts: &mut Parts,
) -> Result<Program, DecodeError> {
    let neighbors = ctx.known_neighbors()?;
    let mut hops = hops_via(ctx, neighbors, 0);
    let start = reader.position();
    let targets: Vec<usize> = (1..=ctx.n)
        .filter(|&w| w != ctx.owner && hops[w - 1] == 0)
        .collect();
    if !targets.is_empty() {
        if neighbors.is_empty() {
            return Err(DecodeError::MissingKnowledge { node: ctx.owner });
        }
        let width = index_width(neighbors.len());
        for w in targets {
            let rank = reader.read_bits(width)? as usize;
            let &v = neighbors.get(rank).ok_or(DecodeError::EntryOutOfRange {
                node: ctx.owner,
                value: rank,
                limit: neighbors.len(),
            })?;
            hops[w - 1] = v as u32;
        }
    }
    parts.add(Component::NextHopTable, reader.position() - start);
    Ok(Program::NextHop {
        hops,
        by_port: false,
    })
}

fn decode_relabel(
    ctx: &NodeContext<'_>,
    reader: &mut BitReader<'_>,
    parts: &mut Parts,
) -> Result<Program, DecodeError> {
    read_tag(ctx, reader, parts, TAG_RELABEL)?;
    let mut set = NodeSet::new(ctx.n);
    for &v in ctx.known_neighbors()? {
        set.insert(v);
    }
    Ok(Program::Relabel {
        neighbors: set,
        label_width: index_width(ctx.n),
        entries: ctx.coverage(),
    })
}

fn decode_probe(
    ctx: &NodeContext<'_>,
    reader: &mut BitReader<'_>,
    parts: &mut Parts,
) -> Result<Program, DecodeError> {
    read_tag(ctx, reader, parts, TAG_PROBE)?;
    let neighbors = ctx.known_neighbors()?;
    let mut set = NodeSet::new(ctx.n);
    for &v in neighbors {
        set.insert(v);
    }
    let coverage = neighbors[..ctx.coverage().min(neighbors.len())].to_vec();
    Ok(Program::Probe {
        neighbors: set,
        coverage,
    })
}

/// Leading kind bit: `1` for routing centers (full tables), `0` for nodes
/// that only store the label of one adjacent center.
fn decode_stretch15(
    ctx: &NodeContext<'_>,
    reader: &mut BitReader<'_>,
    parts: &mut Parts,
) -> Result<Program, DecodeError> {
    let neighbors = ctx.known_neighbors()?;
    let is_center = reader.read_bit()?;
    parts.add(Component::KindFlag, 1);
    if is_center {
        let rank_of = read_tables(ctx, reader, parts, neighbors)?;
        return Ok(Program::NextHop {
            hops: hops_by_neighbor(neighbors, &rank_of),
            by_port: false,
        });
    }
    let width = bit_width(ctx.n as u64);
    let center = reader.read_bits(width)? as usize;
    parts.add(Component::CenterPointer, width);
    if neighbors.binary_search(&center).is_err() {
        return Err(DecodeError::NotANeighbor {
            node: ctx.owner,
            label: center,
        });
    }
    Ok(Program::NextHop {
        hops: hops_via(ctx, neighbors, center),
        by_port: false,
    })
}

/// The hub stores full tables, its neighbors a program tag, and every other
/// node the coverage index of an edge toward a hub neighbor.
fn decode_stretch2(
    ctx: &NodeContext<'_>,
    reader: &mut BitReader<'_>,
    parts: &mut Parts,
) -> Result<Program, DecodeError> {
    let neighbors = ctx.known_neighbors()?;
    if ctx.owner == HUB {
        let rank_of = read_tables(ctx, reader, parts, neighbors)?;
        return Ok(Program::NextHop {
            hops: hops_by_neighbor(neighbors, &rank_of),
            by_port: false,
        });
    }
    if neighbors.binary_search(&HUB).is_ok() {
        read_tag(ctx, reader, parts, TAG_HUB_NEIGHBOR)?;
        return Ok(Program::NextHop {
            hops: hops_via(ctx, neighbors, HUB),
            by_port: false,
        });
    }
    let cover_len = ctx.coverage().min(neighbors.len());
    if cover_len == 0 {
        return Err(DecodeError::MissingKnowledge { node: ctx.owner });
    }
    let width = index_width(cover_len);
    let index = reader.read_bits(width)? as usize;
    parts.add(Component::HubIndex, width);
    if index >= cover_len {
        return Err(DecodeError::EntryOutOfRange {
            node: ctx.owner,
            value: index,
            limit: cover_len,
        });
    }
    Ok(Program::NextHop {
        hops: hops_via(ctx, neighbors, neighbors[index]),
        by_port: false,
    })
}

/// Neighbor bitmap, port permutation, then one `d`-bit first-hop bitmap per
/// non-neighbor in ascending label order.
fn decode_full_info(
    ctx: &NodeContext<'_>,
    reader: &mut BitReader<'_>,
    parts: &mut Parts,
) -> Result<Program, DecodeError> {
    let neighbors = read_neighbor_bitmap(ctx, reader, parts)?;
    let port_of_rank = read_port_permutation(reader, parts, neighbors.len())?;
    let d = neighbors.len();
    let mut first = vec![0u32; ctx.n];
    let mut slot = vec![u32::MAX; ctx.n];
    for (r, &v) in neighbors.iter().enumerate() {
        first[v - 1] = port_of_rank[r] as u32;
    }
    let bitmaps_start = reader.position();
    let others = (1..=ctx.n).filter(|&w| w != ctx.owner && neighbors.binary_search(&w).is_err());
    for (index, w) in others.enumerate() {
        let mut chosen = None;
        for r in 0..d {
            if reader.read_bit()? && chosen.is_none() {
                chosen = Some(r);
            }
        }
        first[w - 1] = chosen.map_or(0, |r| port_of_rank[r] as u32);
        slot[w - 1] = index as u32;
    }
    parts.add(
        Component::FirstHopBitmaps,
        reader.position() - bitmaps_start,
    );
    Ok(Program::FullInfo {
        first,
        neighbors,
        port_of_rank,
        slot,
        bitmaps_start,
    })
}

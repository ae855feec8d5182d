//! Builders for the shortest-path and bounded-stretch schemes.
//!
//! Every builder produces per-node bit encodings and then obtains the
//! routing function by decoding them, so the scheme can only route with what
//! it was charged for.

use rayon::prelude::*;

use super::lehmer::encode_permutation;
use super::table::{encode_tables, EncodedTables};
use super::{
    node_context, BuildError, Diagnostics, InfoModel, Lemma, LocalRoutingFunction, ModelSpec,
    Relabeling, RoutingScheme, SchemeKind, TableStats, HUB, PROGRAM_TAG_BITS, TAG_HUB_NEIGHBOR,
    TAG_PROBE, TAG_RELABEL,
};
use crate::bitcodec::{bit_width, index_width, BitString};
use crate::graphs::{
    check_coverage_lemma, check_diameter_two, coverage_size, DistanceMatrix, LabeledGraph,
    PortAssignment,
};

pub(crate) fn require_diameter_two(g: &LabeledGraph) -> Result<(), BuildError> {
    if check_diameter_two(g) {
        Ok(())
    } else {
        Err(BuildError::PreconditionViolated(Lemma::DiameterTwo))
    }
}

fn require_lemmas(g: &LabeledGraph, c: u32) -> Result<(), BuildError> {
    require_diameter_two(g)?;
    if !check_coverage_lemma(g, c).passed() {
        return Err(BuildError::PreconditionViolated(Lemma::Coverage));
    }
    Ok(())
}

/// Decodes every node's encoding under the given model.
pub(crate) fn decode_all(
    g: &LabeledGraph,
    kind: SchemeKind,
    model: ModelSpec,
    c: u32,
    encodings: Vec<BitString>,
) -> Result<Vec<LocalRoutingFunction>, BuildError> {
    encodings
        .into_par_iter()
        .enumerate()
        .map(|(i, enc)| {
            let ctx = node_context(g, model, c, i + 1);
            LocalRoutingFunction::decode(kind, &ctx, enc).map_err(BuildError::from)
        })
        .collect()
}

/// Shortest-path tables for the given nodes, in order.
fn all_tables(g: &LabeledGraph, nodes: &[usize], c: u32) -> Result<Vec<EncodedTables>, BuildError> {
    let m = coverage_size(g.n(), c);
    nodes.par_iter().map(|&u| encode_tables(g, u, m)).collect()
}

fn record_tables(diagnostics: &mut Diagnostics, nodes: &[usize], tables: &[EncodedTables]) {
    for (&u, t) in nodes.iter().zip(tables) {
        diagnostics
            .claim_violations
            .extend(t.violations.iter().cloned());
        diagnostics.tables.push(TableStats {
            node: u,
            cutoff: t.cutoff,
            deferred: t.deferred,
        });
    }
}

fn neighbor_bitmap(g: &LabeledGraph, u: usize) -> BitString {
    let row = g.neighbor_set(u);
    g.nodes()
        .filter(|&v| v != u)
        .map(|v| row.contains(v))
        .collect()
}

fn tag(value: u64) -> BitString {
    let mut bits = BitString::new();
    bits.push_bits(value, PROGRAM_TAG_BITS);
    bits
}

/// Shortest-path routing with the two-table encoding under model II.
pub fn build_sp_neighbor_known(g: &LabeledGraph, c: u32) -> Result<RoutingScheme, BuildError> {
    build_sp_neighbor_known_in(g, c, ModelSpec::new(InfoModel::II, Relabeling::Alpha))
}

/// As [`build_sp_neighbor_known`], also under model IB: ports are rewritten
/// so port `i` reaches the `i`-th smallest neighbor, and each node pays an
/// `n − 1` bit neighbor bitmap in front of its tables.
pub fn build_sp_neighbor_known_in(
    g: &LabeledGraph,
    c: u32,
    model: ModelSpec,
) -> Result<RoutingScheme, BuildError> {
    let kind = SchemeKind::NeighborKnown;
    if !kind.legal_models().contains(&model) {
        return Err(BuildError::IllegalModel { kind, model });
    }
    let rewrites_ports = model.info == InfoModel::IB;
    model.check_port_rewrite(rewrites_ports)?;
    require_lemmas(g, c)?;

    let nodes: Vec<usize> = g.nodes().collect();
    let tables = all_tables(g, &nodes, c)?;
    let mut diagnostics = Diagnostics::default();
    record_tables(&mut diagnostics, &nodes, &tables);
    let encodings = nodes
        .iter()
        .zip(tables)
        .map(|(&u, t)| {
            if rewrites_ports {
                neighbor_bitmap(g, u).concat(&t.bits)
            } else {
                t.bits
            }
        })
        .collect();
    let functions = decode_all(g, kind, model, c, encodings)?;
    let ports = rewrites_ports.then(|| PortAssignment::rank_order(g));
    RoutingScheme::assemble(kind, model, g.n(), c, functions, None, ports, diagnostics)
}

/// The label of `u` under the relabeling scheme: `u` followed by its
/// coverage neighbors, each as `label − 1` in `⌈log n⌉` bits. Returns whether
/// the coverage list had to be padded.
pub fn relabel_label(g: &LabeledGraph, u: usize, c: u32) -> (BitString, bool) {
    let n = g.n();
    let m = coverage_size(n, c);
    let width = index_width(n);
    let cover = &g.neighbors(u)[..m.min(g.degree(u))];
    let mut label = BitString::with_capacity((1 + m) * width);
    label.push_bits((u - 1) as u64, width);
    let pad = cover.last().copied().unwrap_or(u);
    for i in 0..m {
        label.push_bits((cover.get(i).copied().unwrap_or(pad) - 1) as u64, width);
    }
    (label, cover.len() < m)
}

/// Shortest-path routing with self-describing labels and a constant program.
pub fn build_sp_relabel(g: &LabeledGraph, c: u32) -> Result<RoutingScheme, BuildError> {
    let kind = SchemeKind::Relabel;
    let model = kind.default_model();
    require_lemmas(g, c)?;
    let mut diagnostics = Diagnostics::default();
    let mut labels = Vec::with_capacity(g.n());
    for u in g.nodes() {
        let (label, padded) = relabel_label(g, u, c);
        if padded {
            diagnostics.padded_labels.push(u);
        }
        labels.push(label);
    }
    let encodings = g.nodes().map(|_| tag(TAG_RELABEL)).collect();
    let functions = decode_all(g, kind, model, c, encodings)?;
    RoutingScheme::assemble(
        kind,
        model,
        g.n(),
        c,
        functions,
        Some(labels),
        None,
        diagnostics,
    )
}

/// Node 1 and its coverage set act as routing centers with full tables;
/// every other node forwards non-neighbor traffic to its least adjacent center.
pub fn build_stretch15(g: &LabeledGraph, c: u32) -> Result<RoutingScheme, BuildError> {
    let kind = SchemeKind::Stretch15;
    let model = kind.default_model();
    require_lemmas(g, c)?;
    let m = coverage_size(g.n(), c);
    let mut centers = vec![HUB];
    centers.extend(g.neighbors(HUB).iter().take(m));
    centers.sort_unstable();

    let tables = all_tables(g, &centers, c)?;
    let mut diagnostics = Diagnostics::default();
    record_tables(&mut diagnostics, &centers, &tables);
    let mut tables = tables.into_iter();
    let width = bit_width(g.n() as u64);
    let mut encodings = Vec::with_capacity(g.n());
    for u in g.nodes() {
        let mut bits = BitString::new();
        if centers.binary_search(&u).is_ok() {
            bits.push(true);
            bits.extend_from(&tables.next().expect("one table per center").bits);
        } else {
            let &center = g
                .neighbors(u)
                .iter()
                .find(|v| centers.binary_search(v).is_ok())
                .ok_or(BuildError::CenterUncovered { node: u })?;
            bits.push(false);
            bits.push_bits(center as u64, width);
        }
        encodings.push(bits);
    }
    let functions = decode_all(g, kind, model, c, encodings)?;
    RoutingScheme::assemble(kind, model, g.n(), c, functions, None, None, diagnostics)
}

/// Node 1 stores full tables; its neighbors relay everything through it and
/// the remaining nodes store which coverage neighbor leads to it.
pub fn build_stretch2_hub(g: &LabeledGraph, c: u32) -> Result<RoutingScheme, BuildError> {
    let kind = SchemeKind::Stretch2Hub;
    let model = kind.default_model();
    require_lemmas(g, c)?;
    let m = coverage_size(g.n(), c);
    let hub_tables = all_tables(g, &[HUB], c)?;
    let mut diagnostics = Diagnostics::default();
    record_tables(&mut diagnostics, &[HUB], &hub_tables);
    let mut hub_tables = hub_tables.into_iter();

    let mut encodings = Vec::with_capacity(g.n());
    for u in g.nodes() {
        if u == HUB {
            encodings.push(hub_tables.next().expect("hub table").bits);
        } else if g.has_edge(u, HUB) {
            encodings.push(tag(TAG_HUB_NEIGHBOR));
        } else {
            let cover = &g.neighbors(u)[..m.min(g.degree(u))];
            let index =
                cover
                    .iter()
                    .position(|&v| g.has_edge(v, HUB))
                    .ok_or(BuildError::Uncovered {
                        node: u,
                        destination: HUB,
                    })?;
            let mut bits = BitString::new();
            bits.push_bits(index as u64, index_width(cover.len()));
            encodings.push(bits);
        }
    }
    let functions = decode_all(g, kind, model, c, encodings)?;
    RoutingScheme::assemble(kind, model, g.n(), c, functions, None, None, diagnostics)
}

/// Constant program at every node; messages probe the coverage neighbors in
/// turn and bounce back on failure.
pub fn build_stretch_logn(g: &LabeledGraph, c: u32) -> Result<RoutingScheme, BuildError> {
    let kind = SchemeKind::StretchLogN;
    let model = kind.default_model();
    require_lemmas(g, c)?;
    let encodings = g.nodes().map(|_| tag(TAG_PROBE)).collect();
    let functions = decode_all(g, kind, model, c, encodings)?;
    RoutingScheme::assemble(
        kind,
        model,
        g.n(),
        c,
        functions,
        None,
        None,
        Diagnostics::default(),
    )
}

/// Shortest-path routing under fixed, arbitrary ports: neighbor bitmap, the
/// port permutation, then the two tables.
pub fn build_sp_fixed_port(
    g: &LabeledGraph,
    ports: &PortAssignment,
    c: u32,
) -> Result<RoutingScheme, BuildError> {
    let kind = SchemeKind::FixedPort;
    let model = kind.default_model();
    require_lemmas(g, c)?;
    let nodes: Vec<usize> = g.nodes().collect();
    let tables = all_tables(g, &nodes, c)?;
    let mut diagnostics = Diagnostics::default();
    record_tables(&mut diagnostics, &nodes, &tables);
    let encodings = nodes
        .par_iter()
        .zip(tables)
        .map(|(&u, t)| {
            let mut bits = neighbor_bitmap(g, u);
            bits.extend_from(&encode_permutation(ports.ranks_by_port(u)));
            bits.extend_from(&t.bits);
            bits
        })
        .collect();
    let functions = decode_all(g, kind, model, c, encodings)?;
    RoutingScheme::assemble(
        kind,
        model,
        g.n(),
        c,
        functions,
        None,
        Some(ports.clone()),
        diagnostics,
    )
}

/// Explicit next hop toward every non-neighbor on any connected graph: the
/// least-labeled neighbor one step closer, as a `⌈log d⌉`-bit rank.
pub fn build_canonical_sp(g: &LabeledGraph) -> Result<RoutingScheme, BuildError> {
    let kind = SchemeKind::Canonical;
    let model = kind.default_model();
    let dist = DistanceMatrix::new(g);
    let encodings = g
        .nodes()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&u| {
            let neighbors = g.neighbors(u);
            let mut bits = BitString::new();
            for w in g.nodes().filter(|&w| w != u && !g.has_edge(u, w)) {
                let d = dist.get(u, w).ok_or(BuildError::Disconnected {
                    node: u,
                    destination: w,
                })?;
                let rank = neighbors
                    .iter()
                    .position(|&v| dist.get(v, w) == Some(d - 1))
                    .expect("a finite distance has a predecessor step");
                bits.push_bits(rank as u64, index_width(neighbors.len()));
            }
            Ok(bits)
        })
        .collect::<Result<Vec<_>, BuildError>>()?;
    let functions = decode_all(g, kind, model, 0, encodings)?;
    RoutingScheme::assemble(
        kind,
        model,
        g.n(),
        0,
        functions,
        None,
        None,
        Diagnostics::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_gk, generate_uniform};
    use crate::schemes::{Action, Address};

    fn next(s: &RoutingScheme, u: usize, d: usize) -> Action {
        s.function(u)
            .evaluate(&s.address_of(d), None)
            .unwrap()
            .action
    }

    #[test]
    fn canonical_on_gk_goes_through_the_middle() {
        let g = build_gk(2);
        let s = build_canonical_sp(&g).unwrap();
        assert_eq!(next(&s, 1, 5), Action::ForwardNeighbor(3));
        assert_eq!(next(&s, 3, 5), Action::ForwardNeighbor(5));
        assert_eq!(next(&s, 5, 5), Action::Deliver);
        assert_eq!(next(&s, 5, 2), Action::ForwardNeighbor(3));
    }

    #[test]
    fn canonical_rejects_disconnected_graphs() {
        let g = LabeledGraph::from_edges(4, [(1, 2), (3, 4)]).unwrap();
        assert!(matches!(
            build_canonical_sp(&g),
            Err(BuildError::Disconnected { .. })
        ));
    }

    #[test]
    fn lemma_failures_are_named() {
        let path = LabeledGraph::from_edges(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(
            build_sp_neighbor_known(&path, 3).unwrap_err(),
            BuildError::PreconditionViolated(Lemma::DiameterTwo)
        );
        // Node 13 is universal, so the diameter is two, but node 16 only sees
        // 15 through 13, which lies outside its 12 least neighbors.
        let mut edges: Vec<_> = (1..=16).filter(|&v| v != 13).map(|v| (13, v)).collect();
        edges.extend((1..=12).map(|v| (16, v)));
        let g = LabeledGraph::from_edges(16, edges).unwrap();
        assert_eq!(coverage_size(16, 0), 12);
        assert_eq!(
            build_stretch_logn(&g, 0).unwrap_err(),
            BuildError::PreconditionViolated(Lemma::Coverage)
        );
    }

    #[test]
    fn relabel_label_layout() {
        let g = generate_uniform(256, 7).unwrap();
        let (label, padded) = relabel_label(&g, 5, 3);
        assert!(!padded);
        assert_eq!(label.len(), 49 * 8);
        let mut r = label.reader();
        assert_eq!(r.read_bits(8).unwrap(), 4);
        assert_eq!(r.read_bits(8).unwrap() as usize + 1, g.neighbors(5)[0]);
    }

    #[test]
    fn small_stretch_schemes_route_neighbors_directly() {
        let g = generate_uniform(128, 3).unwrap();
        for s in [
            build_stretch15(&g, 3).unwrap(),
            build_stretch2_hub(&g, 3).unwrap(),
            build_stretch_logn(&g, 3).unwrap(),
            build_sp_relabel(&g, 3).unwrap(),
        ] {
            let u = 10;
            let v = g.neighbors(u)[3];
            assert_eq!(next(&s, u, v), Action::ForwardNeighbor(v), "{}", s.kind());
        }
    }

    #[test]
    fn ib_variant_charges_bitmap_and_routes_by_port() {
        let g = generate_uniform(128, 3).unwrap();
        let ii = build_sp_neighbor_known(&g, 3).unwrap();
        let ib =
            build_sp_neighbor_known_in(&g, 3, ModelSpec::new(InfoModel::IB, Relabeling::Alpha))
                .unwrap();
        for u in [1, 77] {
            assert_eq!(
                ib.function(u).encoding().len(),
                ii.function(u).encoding().len() + 127
            );
        }
        let u = 1;
        let w = g.nodes().find(|&w| w != u && !g.has_edge(u, w)).unwrap();
        let Action::ForwardNeighbor(v) = next(&ii, u, w) else {
            panic!()
        };
        let Action::ForwardPort(p) = ib
            .function(u)
            .evaluate(&Address::Label(w), None)
            .unwrap()
            .action
        else {
            panic!()
        };
        assert_eq!(ib.ports().unwrap().neighbor_at(u, p), Some(v));
    }

    #[test]
    fn illegal_models_are_rejected() {
        let g = generate_uniform(64, 1).unwrap();
        let ia = ModelSpec::new(InfoModel::IA, Relabeling::Alpha);
        assert!(matches!(
            build_sp_neighbor_known_in(&g, 3, ia),
            Err(BuildError::IllegalModel { .. })
        ));
    }
}

use rayon::prelude::*;

use super::builders::{decode_all, require_diameter_two};
use super::lehmer::encode_permutation;
use super::{BuildError, Diagnostics, Lemma, RoutingScheme, SchemeKind};
use crate::bitcodec::BitString;
use crate::graphs::{check_degree_lemma, LabeledGraph, PortAssignment};

/// Full-information routing: per node the neighbor bitmap, the port
/// permutation, and for every non-neighbor `w` a bitmap over the node's
/// neighbors (in label order) marking those adjacent to `w`.
pub fn build_full_info(
    g: &LabeledGraph,
    ports: &PortAssignment,
) -> Result<RoutingScheme, BuildError> {
    let kind = SchemeKind::FullInfo;
    let model = kind.default_model();
    const C: u32 = 3;
    require_diameter_two(g)?;
    if !check_degree_lemma(g, C).passed() {
        return Err(BuildError::PreconditionViolated(Lemma::Degree));
    }
    let encodings: Vec<BitString> = g
        .nodes()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&u| {
            let neighbors = g.neighbors(u);
            let row = g.neighbor_set(u);
            let mut bits: BitString = g
                .nodes()
                .filter(|&v| v != u)
                .map(|v| row.contains(v))
                .collect();
            bits.extend_from(&encode_permutation(ports.ranks_by_port(u)));
            for w in g.nodes().filter(|&w| w != u && !row.contains(w)) {
                for &v in neighbors {
                    bits.push(g.has_edge(v, w));
                }
            }
            bits
        })
        .collect();
    let functions = decode_all(g, kind, model, C, encodings)?;
    RoutingScheme::assemble(
        kind,
        model,
        g.n(),
        C,
        functions,
        None,
        Some(ports.clone()),
        Diagnostics::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::generate_uniform;

    #[test]
    fn adjacent_destination_has_a_single_port() {
        let g = generate_uniform(64, 2).unwrap();
        let ports = PortAssignment::random(&g, 9);
        let s = build_full_info(&g, &ports).unwrap();
        let u = 5;
        for &v in g.neighbors(u) {
            let got = s.function(u).port_set(v).unwrap();
            assert_eq!(got.len(), 1);
            assert_eq!(ports.neighbor_at(u, got[0]), Some(v));
        }
    }

    #[test]
    fn distance_two_sets_are_common_neighbors() {
        let g = generate_uniform(64, 2).unwrap();
        let ports = PortAssignment::random(&g, 1);
        let s = build_full_info(&g, &ports).unwrap();
        let u = 9;
        for w in g.nodes().filter(|&w| w != u && !g.has_edge(u, w)) {
            let mut via: Vec<usize> = s
                .function(u)
                .port_set(w)
                .unwrap()
                .into_iter()
                .map(|p| ports.neighbor_at(u, p).unwrap())
                .collect();
            via.sort_unstable();
            let expected: Vec<usize> = g
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&v| g.has_edge(v, w))
                .collect();
            assert_eq!(via, expected);
        }
    }
}

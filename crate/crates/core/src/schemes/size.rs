use std::collections::BTreeMap;

use serde::Serialize;

use super::RoutingScheme;

/// Charged bits of a scheme, per node and per named component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub per_node_bits: Vec<u64>,
    /// Label length per node under model gamma, zero otherwise.
    pub label_bits: Vec<u64>,
    pub total_bits: u64,
    /// Component name to total bits across all nodes.
    pub breakdown: BTreeMap<String, u64>,
}

impl SizeReport {
    pub fn max_per_node_bits(&self) -> u64 {
        self.per_node_bits.iter().copied().max().unwrap_or(0)
    }

    pub fn total_function_bits(&self) -> u64 {
        self.per_node_bits.iter().sum()
    }

    pub fn total_label_bits(&self) -> u64 {
        self.label_bits.iter().sum()
    }
}

pub fn measure_size(s: &RoutingScheme) -> SizeReport {
    let per_node_bits: Vec<u64> = s
        .functions()
        .iter()
        .map(|f| f.encoding().len() as u64)
        .collect();
    let label_bits: Vec<u64> = match s.labels() {
        Some(labels) => labels.iter().map(|l| l.len() as u64).collect(),
        None => vec![0; s.n()],
    };
    let mut breakdown = BTreeMap::new();
    for f in s.functions() {
        for &(component, bits) in f.components() {
            *breakdown.entry(component.name().to_string()).or_insert(0) += bits as u64;
        }
    }
    if s.labels().is_some() {
        breakdown.insert("label".to_string(), label_bits.iter().sum());
    }
    let total_bits = per_node_bits.iter().sum::<u64>() + label_bits.iter().sum::<u64>();
    SizeReport {
        per_node_bits,
        label_bits,
        total_bits,
        breakdown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{generate_uniform, LabeledGraph};
    use crate::schemes::{build_canonical_sp, build_sp_neighbor_known, build_sp_relabel};

    #[test]
    fn complete_graph_costs_nothing() {
        let s = build_canonical_sp(&LabeledGraph::complete(5)).unwrap();
        let r = measure_size(&s);
        assert_eq!(r.total_bits, 0);
        assert_eq!(r.per_node_bits, vec![0; 5]);
    }

    #[test]
    fn breakdown_sums_to_total() {
        let g = generate_uniform(128, 4).unwrap();
        for s in [
            build_sp_neighbor_known(&g, 3).unwrap(),
            build_sp_relabel(&g, 3).unwrap(),
        ] {
            let r = measure_size(&s);
            assert_eq!(r.breakdown.values().sum::<u64>(), r.total_bits);
            assert_eq!(r.total_bits, r.total_function_bits() + r.total_label_bits());
        }
    }
}

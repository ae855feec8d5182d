use super::{GraphError, LabeledGraph};

/// The three-layer graph `G_k` on `3k` nodes: every middle node
/// `v_i` (`k < i ≤ 2k`) is joined to all bottom nodes `v_1..v_k` and to the
/// top node `v_{i+k}`. Node `v_i` carries label `i`.
pub fn build_gk(k: usize) -> LabeledGraph {
    assert!(k >= 1, "G_k needs k >= 1");
    let n = 3 * k;
    let mut g = LabeledGraph::empty(n);
    for i in k + 1..=2 * k {
        g.insert_edge(i, i + k);
        for j in 1..=k {
            g.insert_edge(i, j);
        }
    }
    g.finish();
    g
}

/// `G_k` with the top row relabeled: node `v_{2k+i}` gets label
/// `top_labels[i - 1]`, which must be a permutation of `2k+1..=3k`. Bottom
/// and middle nodes keep their labels.
pub fn relabel_gk_top_row(k: usize, top_labels: &[usize]) -> Result<LabeledGraph, GraphError> {
    let n = 3 * k;
    if top_labels.len() != k {
        return Err(GraphError::BadPermutation { n });
    }
    let mut new_label: Vec<usize> = (1..=2 * k).collect();
    new_label.extend_from_slice(top_labels);
    build_gk(k).relabel(&new_label)
}

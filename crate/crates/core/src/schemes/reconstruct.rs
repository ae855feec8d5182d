//! Recovering the top-row labeling of `G_k` from one bottom-row function.
//!
//! From a bottom node, the unique shortest route to a top node leaves over
//! the edge to the middle node the top node hangs off. Querying the function
//! for every middle and top label and grouping labels by outgoing edge
//! pairs each middle node with its top node.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{build_canonical_sp, Action, Address, BuildError, EvalError, LocalRoutingFunction};
use crate::graphs::LabeledGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("expected {expected} functions, got {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("functions disagree on the labeling")]
    Inconsistent,
    #[error("function at node {node} does not group the labels into middle/top pairs")]
    Malformed { node: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Canonical shortest-path functions of the bottom row `v_1..v_k`.
pub fn build_gk_functions(
    g: &LabeledGraph,
    k: usize,
) -> Result<Vec<LocalRoutingFunction>, BuildError> {
    let s = build_canonical_sp(g)?;
    Ok((1..=k).map(|v| s.function(v).clone()).collect())
}

/// `result[i - 1]` is the label carried by top node `v_{2k+i}`.
fn reconstruct_one(f: &LocalRoutingFunction, k: usize) -> Result<Vec<usize>, ReconstructError> {
    let node = f.owner();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for label in k + 1..=3 * k {
        let edge = match f.evaluate(&Address::Label(label), None)?.action {
            Action::ForwardNeighbor(v) => v,
            _ => return Err(ReconstructError::Malformed { node }),
        };
        groups.entry(edge).or_default().push(label);
    }
    let mut top = vec![0; k];
    for (edge, labels) in groups {
        match labels[..] {
            [middle, top_label]
                if middle == edge && (k + 1..=2 * k).contains(&middle) && top_label > 2 * k =>
            {
                top[middle - k - 1] = top_label;
            }
            _ => return Err(ReconstructError::Malformed { node }),
        }
    }
    if top.contains(&0) {
        return Err(ReconstructError::Malformed { node });
    }
    Ok(top)
}

/// Reads the top-row labeling from each of the `k` bottom-row functions and
/// checks that they agree.
pub fn reconstruct_permutation(
    fs: &[LocalRoutingFunction],
    k: usize,
) -> Result<Vec<usize>, ReconstructError> {
    if fs.len() != k || k == 0 {
        return Err(ReconstructError::WrongCount {
            expected: k,
            found: fs.len(),
        });
    }
    let first = reconstruct_one(&fs[0], k)?;
    for f in &fs[1..] {
        if reconstruct_one(f, k)? != first {
            return Err(ReconstructError::Inconsistent);
        }
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_gk, relabel_gk_top_row};

    #[test]
    fn identity_for_k2() {
        let fs = build_gk_functions(&build_gk(2), 2).unwrap();
        assert_eq!(reconstruct_permutation(&fs, 2).unwrap(), vec![5, 6]);
    }

    #[test]
    fn swap_for_k2() {
        let g = relabel_gk_top_row(2, &[6, 5]).unwrap();
        let fs = build_gk_functions(&g, 2).unwrap();
        assert_eq!(reconstruct_permutation(&fs, 2).unwrap(), vec![6, 5]);
    }

    #[test]
    fn disagreeing_functions_are_rejected() {
        let a = build_gk_functions(&build_gk(2), 2).unwrap();
        let b = build_gk_functions(&relabel_gk_top_row(2, &[6, 5]).unwrap(), 2).unwrap();
        let mixed = vec![a[0].clone(), b[1].clone()];
        assert_eq!(
            reconstruct_permutation(&mixed, 2),
            Err(ReconstructError::Inconsistent)
        );
        assert!(matches!(
            reconstruct_permutation(&a[..1], 2),
            Err(ReconstructError::WrongCount { .. })
        ));
    }
}

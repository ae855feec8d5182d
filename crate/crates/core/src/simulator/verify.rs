use rayon::prelude::*;
use serde::Serialize;

use super::route_known;
use crate::graphs::{DistanceMatrix, LabeledGraph};
use crate::schemes::RoutingScheme;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortestViolation {
    pub src: usize,
    pub dst: usize,
    pub expected: u32,
    /// Route length, absent when the message was not delivered.
    pub got: Option<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ShortestReport {
    pub pairs_checked: usize,
    pub violations: Vec<ShortestViolation>,
}

impl ShortestReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Routes every ordered pair and compares the route length to the BFS distance.
pub fn verify_shortest(g: &LabeledGraph, s: &RoutingScheme) -> ShortestReport {
    verify_shortest_with(g, s, &DistanceMatrix::new(g))
}

pub fn verify_shortest_with(
    g: &LabeledGraph,
    s: &RoutingScheme,
    dist: &DistanceMatrix,
) -> ShortestReport {
    let n = g.n();
    let violations: Vec<ShortestViolation> = (1..=n)
        .into_par_iter()
        .flat_map_iter(|u| {
            (1..=n).filter(move |&w| w != u).filter_map(move |w| {
                let expected = dist.get(u, w).unwrap_or(u32::MAX);
                let violation = |got, reason: String| ShortestViolation {
                    src: u,
                    dst: w,
                    expected,
                    got,
                    reason,
                };
                match route_known(g, s, u, w, dist.get(u, w)) {
                    Ok(r)
                        if r.delivered
                            && r.path_len() == expected as usize
                            && r.edge_traversals == r.path_len() =>
                    {
                        None
                    }
                    Ok(r) if r.delivered => Some(violation(
                        Some(r.edge_traversals),
                        "longer than shortest".into(),
                    )),
                    Ok(_) => Some(violation(None, "hop cap exceeded".into())),
                    Err(e) => Some(violation(None, e.to_string())),
                }
            })
        })
        .collect();
    ShortestReport {
        pairs_checked: n * n.saturating_sub(1),
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FullInfoMismatch {
    pub src: usize,
    pub dst: usize,
    /// Neighbors behind the returned ports, ascending.
    pub returned: Vec<usize>,
    pub expected: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FullInfoReport {
    pub pairs_checked: usize,
    pub mismatches: Vec<FullInfoMismatch>,
    /// Pairs whose function failed to answer.
    pub errors: Vec<(usize, usize, String)>,
}

impl FullInfoReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.errors.is_empty()
    }
}

/// Compares every returned port set to `{v ∈ N(u) : d(v, w) + 1 = d(u, w)}`.
pub fn verify_full_info(g: &LabeledGraph, s: &RoutingScheme) -> FullInfoReport {
    let dist = DistanceMatrix::new(g);
    let n = g.n();
    let outcomes: Vec<Result<Option<FullInfoMismatch>, (usize, usize, String)>> = (1..=n)
        .into_par_iter()
        .flat_map_iter(|u| {
            let dist = &dist;
            (1..=n).filter(move |&w| w != u).map(move |w| {
                let ports = s
                    .function(u)
                    .port_set(w)
                    .map_err(|e| (u, w, e.to_string()))?;
                let wiring = s
                    .ports()
                    .ok_or_else(|| (u, w, "scheme has no port assignment".to_string()))?;
                let mut returned = ports
                    .iter()
                    .map(|&p| {
                        wiring
                            .neighbor_at(u, p)
                            .ok_or_else(|| (u, w, format!("no port {p}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                returned.sort_unstable();
                let target = dist.get(u, w).map(|d| d - 1);
                let expected: Vec<usize> = g
                    .neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&v| target.is_some() && dist.get(v, w) == target)
                    .collect();
                Ok((returned != expected).then_some(FullInfoMismatch {
                    src: u,
                    dst: w,
                    returned,
                    expected,
                }))
            })
        })
        .collect();
    let mut report = FullInfoReport {
        pairs_checked: outcomes.len(),
        ..Default::default()
    };
    for outcome in outcomes {
        match outcome {
            Ok(Some(m)) => report.mismatches.push(m),
            Ok(None) => {}
            Err(e) => report.errors.push(e),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::generate_uniform;
    use crate::schemes::{build_canonical_sp, build_stretch2_hub};

    #[test]
    fn canonical_on_k4_passes() {
        let g = LabeledGraph::complete(4);
        let report = verify_shortest(&g, &build_canonical_sp(&g).unwrap());
        assert!(report.passed());
        assert_eq!(report.pairs_checked, 12);
    }

    #[test]
    fn stretch_schemes_are_flagged() {
        let g = generate_uniform(64, 5).unwrap();
        let report = verify_shortest(&g, &build_stretch2_hub(&g, 3).unwrap());
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .all(|v| v.got.unwrap() > v.expected as usize));
    }

    #[test]
    fn full_info_check_rejects_other_schemes() {
        let g = LabeledGraph::complete(4);
        let report = verify_full_info(&g, &build_canonical_sp(&g).unwrap());
        assert_eq!(report.errors.len(), 12);
    }
}

//! Experiment runner, report emission and the lemma pass-rate suite.

mod config;
mod report;

pub use config::{ConfigError, ExperimentConfig, SchemeSpec};
pub(crate) use report::parse_ratio;
pub use report::{
    emit_report, emit_summary, parse_report_csv, ReportFormat, ReportRow, SummaryRow,
};

use num_rational::Ratio;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::graphs::{
    check_coverage_lemma, check_degree_lemma, check_diameter_two, coverage_size, generate_uniform,
    DistanceMatrix, LabeledGraph, PortAssignment,
};
use crate::schemes::{
    build_canonical_sp, build_full_info, build_sp_fixed_port, build_sp_neighbor_known_in,
    build_sp_relabel, build_stretch15, build_stretch2_hub, build_stretch_logn, measure_size,
    BuildError, RoutingScheme, SchemeKind,
};
use crate::simulator::{format_ratio, route_stats, verify_full_info, PairSampler, RouteStats};

/// Seed of the `attempt`-th graph drawn for a seed slot; attempt 0 is the
/// slot seed itself.
pub fn attempt_seed(seed: u64, attempt: u32) -> u64 {
    if attempt == 0 {
        seed
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(attempt));
        rng.next_u64()
    }
}

/// Seed of the port assignment used with the graph drawn from `graph_seed`.
pub fn port_seed(graph_seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(graph_seed);
    rng.set_stream(u64::MAX);
    rng.next_u64()
}

/// Outcome of the three structural checks on one graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LemmaOutcome {
    pub diameter_two: bool,
    pub degree: bool,
    pub coverage: bool,
}

impl LemmaOutcome {
    pub fn check(g: &LabeledGraph, c: u32) -> Self {
        LemmaOutcome {
            diameter_two: check_diameter_two(g),
            degree: check_degree_lemma(g, c).passed(),
            coverage: check_coverage_lemma(g, c).passed(),
        }
    }

    pub fn all(&self) -> bool {
        self.diameter_two && self.degree && self.coverage
    }
}

/// Lemma pass counts over a batch of graphs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaSuite {
    pub n: usize,
    pub c: u32,
    pub graphs: usize,
    pub diameter_two: usize,
    pub degree: usize,
    pub coverage: usize,
}

impl LemmaSuite {
    pub fn rate(count: usize, total: usize) -> f64 {
        count as f64 / total as f64
    }
}

pub fn lemma_suite(
    n: usize,
    seeds: &[u64],
    c: u32,
) -> Result<LemmaSuite, crate::graphs::GraphError> {
    let outcomes = seeds
        .par_iter()
        .map(|&seed| Ok(LemmaOutcome::check(&generate_uniform(n, seed)?, c)))
        .collect::<Result<Vec<_>, crate::graphs::GraphError>>()?;
    Ok(LemmaSuite {
        n,
        c,
        graphs: outcomes.len(),
        diameter_two: outcomes.iter().filter(|o| o.diameter_two).count(),
        degree: outcomes.iter().filter(|o| o.degree).count(),
        coverage: outcomes.iter().filter(|o| o.coverage).count(),
    })
}

/// Draws graphs for a seed slot until one passes every lemma check.
/// Returns the graph, its seed and the number of rejected draws.
pub fn draw_graph(
    n: usize,
    seed: u64,
    c: u32,
    max_attempts: u32,
) -> Option<(LabeledGraph, u64, u32)> {
    (0..max_attempts).find_map(|attempt| {
        let graph_seed = attempt_seed(seed, attempt);
        let g = generate_uniform(n, graph_seed).ok()?;
        LemmaOutcome::check(&g, c)
            .all()
            .then_some((g, graph_seed, attempt))
    })
}

/// Builds one scheme; port-based schemes use `ports`.
pub fn build_scheme(
    spec: SchemeSpec,
    g: &LabeledGraph,
    ports: &PortAssignment,
    c: u32,
) -> Result<RoutingScheme, BuildError> {
    match spec.kind {
        SchemeKind::Canonical => build_canonical_sp(g),
        SchemeKind::NeighborKnown => build_sp_neighbor_known_in(g, c, spec.model),
        SchemeKind::Relabel => build_sp_relabel(g, c),
        SchemeKind::Stretch15 => build_stretch15(g, c),
        SchemeKind::Stretch2Hub => build_stretch2_hub(g, c),
        SchemeKind::StretchLogN => build_stretch_logn(g, c),
        SchemeKind::FixedPort => build_sp_fixed_port(g, ports, c),
        SchemeKind::FullInfo => build_full_info(g, ports),
    }
}

/// Whether the routes meet the scheme's guarantee: every route as short as
/// BFS for shortest-path schemes (plus the port-set oracle for full
/// information), stretch 3/2 and 2 for the center and hub schemes, and
/// `2⌈(c+3) log n⌉` edge traversals for probe routing.
fn guarantee_met(
    kind: SchemeKind,
    g: &LabeledGraph,
    s: &RoutingScheme,
    stats: &RouteStats,
    c: u32,
) -> bool {
    let one = Ratio::from_integer(1);
    stats.all_delivered()
        && match kind {
            SchemeKind::FullInfo => {
                stats.max_traversal_stretch <= one && verify_full_info(g, s).passed()
            }
            k if k.is_shortest_path() => stats.max_traversal_stretch <= one,
            SchemeKind::Stretch15 => stats.max_stretch <= Ratio::new(3, 2),
            SchemeKind::Stretch2Hub => stats.max_stretch <= Ratio::from_integer(2),
            SchemeKind::StretchLogN => stats.max_traversals <= 2 * coverage_size(g.n(), c),
            _ => unreachable!("every scheme kind is covered"),
        }
}

fn run_one(
    spec: SchemeSpec,
    g: &LabeledGraph,
    ports: &PortAssignment,
    dist: &DistanceMatrix,
    pairs: PairSampler,
    c: u32,
    row: &mut ReportRow,
) -> Result<(), String> {
    let s = build_scheme(spec, g, ports, c).map_err(|e| format!("build: {e}"))?;
    let size = measure_size(&s);
    row.total_bits = size.total_bits;
    row.function_bits = size.total_function_bits();
    row.label_bits = size.total_label_bits();
    row.max_node_bits = size.max_per_node_bits();
    row.claim_violations = s.diagnostics().claim_violations.len();
    let stats = route_stats(g, &s, dist, pairs).map_err(|e| format!("route: {e}"))?;
    row.pairs = stats.pairs;
    row.delivered = stats.delivered;
    row.max_stretch = format_ratio(&stats.max_stretch);
    row.max_traversals = stats.max_traversals;
    row.guarantee_met = guarantee_met(spec.kind, g, &s, &stats, c);
    Ok(())
}

/// Runs every scheme on every `(n, seed)` graph. Rows come back sorted by
/// `(n, seed, scheme, model)` regardless of scheduling.
pub fn run_experiments(cfg: &ExperimentConfig) -> Vec<ReportRow> {
    let jobs: Vec<(usize, u64)> = cfg
        .n_values
        .iter()
        .flat_map(|&n| cfg.seeds.iter().map(move |&seed| (n, seed)))
        .collect();
    let mut rows: Vec<ReportRow> = jobs
        .par_iter()
        .flat_map_iter(|&(n, seed)| {
            let pairs = cfg
                .pairs
                .unwrap_or_else(|| PairSampler::default_for(n, seed));
            let base = |spec: SchemeSpec| ReportRow::new(spec, n, seed);
            let Some((g, graph_seed, retries)) = draw_graph(n, seed, cfg.c, cfg.max_attempts)
            else {
                return cfg
                    .schemes
                    .iter()
                    .map(|&spec| {
                        let mut row = base(spec);
                        row.retries = cfg.max_attempts;
                        row.status = "retry_exhausted".into();
                        row
                    })
                    .collect::<Vec<_>>();
            };
            let ports = PortAssignment::random(&g, port_seed(graph_seed));
            let dist = DistanceMatrix::new(&g);
            cfg.schemes
                .iter()
                .map(|&spec| {
                    let mut row = base(spec);
                    row.graph_seed = graph_seed;
                    row.retries = retries;
                    row.diameter_two = true;
                    row.degree_lemma = true;
                    row.coverage_lemma = true;
                    if let Err(e) = run_one(spec, &g, &ports, &dist, pairs, cfg.c, &mut row) {
                        row.status = e;
                    }
                    row
                })
                .collect::<Vec<_>>()
        })
        .collect();
    rows.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    rows
}

/// Seed-averaged rows, one per `(scheme, model, n)`.
pub fn summarize(rows: &[ReportRow]) -> Vec<SummaryRow> {
    let mut keys: Vec<(String, String, usize)> = rows
        .iter()
        .map(|r| (r.scheme.clone(), r.model.clone(), r.n))
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(scheme, model, n)| {
            let group: Vec<&ReportRow> = rows
                .iter()
                .filter(|r| r.scheme == scheme && r.model == model && r.n == n)
                .collect();
            let ok: Vec<&&ReportRow> = group.iter().filter(|r| r.status == "ok").collect();
            let mean = |f: fn(&ReportRow) -> u64| {
                if ok.is_empty() {
                    0.0
                } else {
                    ok.iter().map(|r| f(r) as f64).sum::<f64>() / ok.len() as f64
                }
            };
            let max_stretch = ok
                .iter()
                .filter_map(|r| parse_ratio(&r.max_stretch))
                .max()
                .unwrap_or_else(|| Ratio::from_integer(0));
            SummaryRow {
                mean_total_bits: mean(|r| r.total_bits),
                mean_max_node_bits: mean(|r| r.max_node_bits),
                mean_label_bits: mean(|r| r.label_bits),
                seeds: group.len(),
                ok_seeds: ok.len(),
                max_stretch: format_ratio(&max_stretch),
                max_traversals: ok.iter().map(|r| r.max_traversals).max().unwrap_or(0),
                all_guarantees_met: !ok.is_empty()
                    && ok.len() == group.len()
                    && ok.iter().all(|r| r.guarantee_met),
                scheme,
                model,
                n,
            }
        })
        .collect()
}

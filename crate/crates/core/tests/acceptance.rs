//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use compact_routing::bitcodec::{
    decode_graph, encode_graph, sd_decode_bar, sd_encode_bar, BitString,
};
use compact_routing::graphs::{coverage_size, relabel_gk_top_row, DistanceMatrix, PortAssignment};
use compact_routing::harness::{
    draw_graph, emit_report, emit_summary, lemma_suite, port_seed, run_experiments, summarize,
    ExperimentConfig, ReportFormat, ReportRow,
};
use compact_routing::schemes::{
    build_full_info, build_gk_functions, build_sp_fixed_port, build_sp_neighbor_known,
    build_sp_relabel, lehmer::permutation_bits, reconstruct_permutation,
};
use compact_routing::simulator::{verify_full_info, verify_shortest_with};

const C: u32 = 3;
const ATTEMPTS: u32 = 5;

struct Check {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: impl Into<String>) -> Check {
    Check {
        passed,
        detail: detail.into(),
    }
}

fn log2(n: usize) -> f64 {
    (n as f64).log2()
}

fn lemma_rates() -> Check {
    let seeds: Vec<u64> = (1..=100).collect();
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [128, 256] {
        let s = lemma_suite(n, &seeds, C).expect("n is large enough");
        ok &= s.diameter_two * 100 >= 99 * s.graphs
            && s.degree == s.graphs
            && s.coverage * 100 >= 95 * s.graphs;
        detail.push(format!(
            "n={n}: diameter-two {}/{}, degree {}/{}, coverage {}/{}",
            s.diameter_two, s.graphs, s.degree, s.graphs, s.coverage, s.graphs
        ));
    }
    check(ok, detail.join("; "))
}

fn shortest_path_correctness() -> Check {
    let n = 256;
    let mut violations = 0;
    let mut pairs = 0;
    let mut retries = 0;
    for seed in 1..=20 {
        let Some((g, graph_seed, r)) = draw_graph(n, seed, C, ATTEMPTS) else {
            return check(
                false,
                format!("seed {seed}: no lemma-passing graph in {ATTEMPTS} draws"),
            );
        };
        retries += r;
        let ports = PortAssignment::random(&g, port_seed(graph_seed));
        let dist = DistanceMatrix::new(&g);
        for s in [
            build_sp_neighbor_known(&g, C).expect("lemma-passing graph"),
            build_sp_relabel(&g, C).expect("lemma-passing graph"),
            build_sp_fixed_port(&g, &ports, C).expect("lemma-passing graph"),
        ] {
            let report = verify_shortest_with(&g, &s, &dist);
            pairs += report.pairs_checked;
            violations += report.violations.len();
        }
    }
    check(
        violations == 0,
        format!("3 schemes x 20 seeds at n={n}: {pairs} routes, {violations} violations, {retries} redrawn graphs"),
    )
}

fn rows_for<'a>(
    rows: &'a [ReportRow],
    scheme: &'a str,
    model: &'a str,
) -> impl Iterator<Item = &'a ReportRow> {
    rows.iter()
        .filter(move |r| r.scheme == scheme && r.model == model)
}

fn size_budgets(rows: &[ReportRow]) -> Check {
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [128usize, 256] {
        let (nf, lg) = (n as f64, log2(n));
        let m = coverage_size(n, C) as f64;
        let at_n = |scheme, model| rows_for(rows, scheme, model).filter(move |r| r.n == n);
        let sp_max = at_n("sp_neighbor_known", "II-alpha")
            .map(|r| r.max_node_bits)
            .max()
            .unwrap_or(u64::MAX);
        let relabel_max = at_n("sp_relabel", "II-gamma")
            .map(|r| r.total_bits)
            .max()
            .unwrap_or(u64::MAX);
        let fixed_max = at_n("sp_fixed_port", "IA-alpha")
            .map(|r| r.max_node_bits)
            .max()
            .unwrap_or(u64::MAX);
        let full_max = at_n("full_info", "IA-alpha")
            .map(|r| r.max_node_bits)
            .max()
            .unwrap_or(u64::MAX);
        let seeds_ok = [
            ("sp_neighbor_known", "II-alpha"),
            ("sp_relabel", "II-gamma"),
            ("sp_fixed_port", "IA-alpha"),
            ("full_info", "IA-alpha"),
        ]
        .iter()
        .all(|&(s, m)| at_n(s, m).filter(|r| r.status == "ok").count() == 20);

        let sp_bound = 6.0 * nf;
        let relabel_bound = (m / lg) * nf * lg * lg + nf * lg + 64.0 * nf;
        let fixed_bound = (nf / 2.0) * lg * 1.2 + 7.0 * nf;
        let full_bound = nf * nf / 4.0 + nf * lg + 2.0 * nf;
        let pass = seeds_ok
            && (sp_max as f64) <= sp_bound
            && (relabel_max as f64) <= relabel_bound
            && (fixed_max as f64) <= fixed_bound
            && (full_max as f64) <= full_bound;
        ok &= pass;
        detail.push(format!(
            "n={n}: sp {sp_max}<={sp_bound:.0}, relabel total {relabel_max}<={relabel_bound:.0}, \
             fixed-port {fixed_max}<={fixed_bound:.0}, full-info {full_max}<={full_bound:.0}"
        ));
    }
    check(ok, detail.join("; "))
}

fn stretch_budgets(rows: &[ReportRow]) -> Check {
    let n = 256;
    let traversal_bound = 2 * coverage_size(n, C);
    let ratio = |s: &str| {
        let (p, q) = s.split_once('/').expect("p/q");
        Ratio::new(
            p.parse::<u32>().expect("numerator"),
            q.parse::<u32>().expect("denominator"),
        )
    };
    let at_n = |scheme| {
        rows_for(rows, scheme, "II-alpha")
            .filter(move |r| r.n == n)
            .collect::<Vec<_>>()
    };
    let all_pairs = |rs: &[&ReportRow]| {
        rs.len() == 20
            && rs
                .iter()
                .all(|r| r.status == "ok" && r.delivered == r.pairs && r.pairs == n * (n - 1))
    };
    let s15 = at_n("stretch15");
    let s2 = at_n("stretch2_hub");
    let slog = at_n("stretch_logn");
    let max15 = s15
        .iter()
        .map(|r| ratio(&r.max_stretch))
        .max()
        .unwrap_or(Ratio::from_integer(99));
    let max2 = s2
        .iter()
        .map(|r| ratio(&r.max_stretch))
        .max()
        .unwrap_or(Ratio::from_integer(99));
    let maxlog = slog
        .iter()
        .map(|r| r.max_traversals)
        .max()
        .unwrap_or(usize::MAX);
    let ok = all_pairs(&s15)
        && all_pairs(&s2)
        && all_pairs(&slog)
        && max15 <= Ratio::new(3, 2)
        && max2 <= Ratio::from_integer(2)
        && maxlog <= traversal_bound;
    check(
        ok,
        format!(
            "n={n}, 20 seeds, all pairs: stretch-1.5 max {max15}, stretch-2 max {max2}, \
             probe traversals max {maxlog}<={traversal_bound}"
        ),
    )
}

fn full_information_oracle() -> Check {
    let n = 128;
    let mut mismatches = 0;
    let mut pairs = 0;
    let mut first = None;
    for seed in 1..=10 {
        let Some((g, graph_seed, _)) = draw_graph(n, seed, C, ATTEMPTS) else {
            return check(false, format!("seed {seed}: no lemma-passing graph"));
        };
        let ports = PortAssignment::random(&g, port_seed(graph_seed));
        let s = build_full_info(&g, &ports).expect("lemma-passing graph");
        let report = verify_full_info(&g, &s);
        pairs += report.pairs_checked;
        mismatches += report.mismatches.len() + report.errors.len();
        first.get_or_insert((g, s));
    }
    let (g, mut s) = first.expect("ten seeds");
    let u = 17;
    let non_neighbors: Vec<usize> = g.nodes().filter(|&w| w != u && !g.has_edge(u, w)).collect();
    let (slot, w) = (3, non_neighbors[3]);
    let d = g.degree(u);
    let bit = (n - 1) + permutation_bits(d) + slot * d + 2;
    let mut encoding: BitString = s.function(u).encoding().clone();
    encoding.flip(bit);
    s.replace_encoding(&g, u, encoding)
        .expect("flipped bitmap still decodes");
    let flagged: Vec<(usize, usize)> = verify_full_info(&g, &s)
        .mismatches
        .iter()
        .map(|m| (m.src, m.dst))
        .collect();
    let ok = mismatches == 0 && flagged == vec![(u, w)];
    check(
        ok,
        format!("n={n}, 10 seeds: {pairs} pairs, {mismatches} mismatches; one flipped bit flags {flagged:?}"),
    )
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn gk_reconstruction() -> Check {
    let recovers = |k: usize, perm: &[usize]| {
        let g = relabel_gk_top_row(k, perm).expect("valid permutation");
        let fs = build_gk_functions(&g, k).expect("G_k is connected");
        reconstruct_permutation(&fs, k).as_deref() == Ok(perm)
    };
    let mut tried = 0;
    let mut failed = 0;
    for k in 1..=4 {
        let mut perm: Vec<usize> = (2 * k + 1..=3 * k).collect();
        loop {
            tried += 1;
            failed += usize::from(!recovers(k, &perm));
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..100 {
        let mut perm: Vec<usize> = (65..=96).collect();
        perm.shuffle(&mut rng);
        tried += 1;
        failed += usize::from(!recovers(32, &perm));
    }
    check(
        failed == 0,
        format!("{tried} labelings (all for k<=4, 100 random for k=32), {failed} not recovered"),
    )
}

fn codec() -> Check {
    let mut graphs = 0u64;
    let mut bad = 0u64;
    for n in 1..=8usize {
        let len = n * (n - 1) / 2;
        for value in 0..(1u64 << len) {
            let mut bits = BitString::with_capacity(len);
            bits.push_bits(value, len);
            graphs += 1;
            match decode_graph(&bits, n) {
                Ok(g)
                    if encode_graph(&g) == bits
                        && g.edge_count() == value.count_ones() as usize => {}
                _ => bad += 1,
            }
        }
    }

    let mut codes: Vec<BitString> = Vec::new();
    for len in 0..=12usize {
        for value in 0..(1u64 << len) {
            let mut x = BitString::new();
            x.push_bits(value, len);
            codes.push(sd_encode_bar(&x));
        }
    }
    let mut sorted: Vec<String> = codes.iter().map(|c| c.to_string()).collect();
    sorted.sort();
    let prefix_clashes = sorted
        .windows(2)
        .filter(|w| w[1].starts_with(w[0].as_str()))
        .count();

    let parse = |s: &str| s.parse::<BitString>().expect("binary literal");
    let (x, y) = sd_decode_bar(&parse("111011011")).expect("decodes");
    let first = x.to_string() == "110" && y.to_string() == "11";
    let (x, rest) = sd_decode_bar(&parse("1110110101")).expect("decodes");
    let (y, tail) = sd_decode_bar(&rest).expect("decodes");
    let second = x.to_string() == "110" && y.to_string() == "1" && tail.is_empty();

    check(
        bad == 0 && prefix_clashes == 0 && first && second,
        format!(
            "{graphs} graphs on n<=8 round-trip with {bad} failures; {} bar codes with {prefix_clashes} prefix clashes; \
             worked decodes {}",
            codes.len(),
            if first && second { "match" } else { "differ" }
        ),
    )
}

fn size_ordering(rows: &[ReportRow]) -> Check {
    let n = 256;
    let summary = summarize(rows);
    let mean = |scheme: &str, model: &str| {
        summary
            .iter()
            .find(|s| s.scheme == scheme && s.model == model && s.n == n)
            .map_or(f64::NAN, |s| s.mean_total_bits)
    };
    let order = [
        ("full_info", "IA-alpha"),
        ("sp_fixed_port", "IA-alpha"),
        ("sp_neighbor_known", "II-alpha"),
        ("sp_relabel", "II-gamma"),
        ("stretch15", "II-alpha"),
        ("stretch2_hub", "II-alpha"),
        ("stretch_logn", "II-alpha"),
    ];
    let totals: Vec<f64> = order.iter().map(|&(s, m)| mean(s, m)).collect();
    let descending = totals.windows(2).all(|w| w[0] > w[1]);
    let floor = 0.3 * (n * n) as f64 * log2(n);
    let fixed = totals[1];
    let listing: Vec<String> = order
        .iter()
        .zip(&totals)
        .map(|((s, _), t)| format!("{s} {t:.1}"))
        .collect();
    check(
        descending && fixed >= floor,
        format!(
            "n={n} mean totals: {}; fixed-port {fixed:.0} >= {floor:.0}",
            listing.join(" > ")
        ),
    )
}

fn determinism(first: &[ReportRow], cfg: &ExperimentConfig) -> Check {
    let second = run_experiments(cfg);
    let same = [ReportFormat::Csv, ReportFormat::Json].iter().all(|&f| {
        emit_report(first, f) == emit_report(&second, f)
            && emit_summary(&summarize(first), f) == emit_summary(&summarize(&second), f)
    });
    check(
        same,
        format!(
            "two runs of {} rows: CSV and JSON reports byte-identical: {same}",
            first.len()
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn main() -> ExitCode {
    let config_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/acceptance.toml");
    let cfg = ExperimentConfig::from_toml(
        &std::fs::read_to_string(&config_path).expect("acceptance config"),
    )
    .expect("valid acceptance config");
    let rows = run_experiments(&cfg);
    let out_dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    std::fs::write(
        out_dir.join("acceptance_report.csv"),
        emit_report(&rows, ReportFormat::Csv),
    )
    .ok();
    std::fs::write(
        out_dir.join("acceptance_summary.csv"),
        emit_summary(&summarize(&rows), ReportFormat::Csv),
    )
    .ok();

    let criteria: Vec<Criterion<'_>> = vec![
        ("lemma pass rates", Box::new(lemma_rates)),
        (
            "shortest-path correctness",
            Box::new(shortest_path_correctness),
        ),
        ("size budgets", Box::new(|| size_budgets(&rows))),
        ("stretch budgets", Box::new(|| stretch_budgets(&rows))),
        ("full-information oracle", Box::new(full_information_oracle)),
        (
            "G_k permutation reconstruction",
            Box::new(gk_reconstruction),
        ),
        ("codec", Box::new(codec)),
        ("size ordering", Box::new(|| size_ordering(&rows))),
        ("determinism", Box::new(|| determinism(&rows, &cfg))),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        failures += usize::from(!result.passed);
        println!(
            "{} [{}] {name}: {} ({:.1}s)",
            if result.passed { "PASS" } else { "FAIL" },
            i + 1,
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

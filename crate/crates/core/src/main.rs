use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use compact_routing::bitcodec::{read_graph_file, write_graph_file};
use compact_routing::graphs::{
    check_coverage_lemma, check_degree_lemma, check_diameter_two, generate_uniform, LabeledGraph,
    PortAssignment,
};
use compact_routing::harness::{
    build_scheme, emit_report, emit_summary, port_seed, run_experiments, summarize,
    ExperimentConfig, ReportFormat, SchemeSpec,
};
use compact_routing::schemes::{
    measure_size, read_scheme, write_scheme, ModelSpec, RoutingScheme, SchemeKind,
};
use compact_routing::simulator::{
    format_ratio, route, route_stats, verify_full_info, verify_shortest, PairSampler,
};

#[derive(Parser)]
#[command(
    name = "compact-routing",
    version,
    about = "Compact routing tables on random graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a uniform random graph and write it as a graph file.
    Generate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the degree, diameter-two and coverage checks.
    Check {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 3)]
        c: u32,
    },
    /// Build a scheme and write it as a scheme file.
    Build {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Route one message and print a per-hop trace.
    Route {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        src: usize,
        #[arg(long)]
        dst: usize,
    },
    /// Route every pair and check the scheme's guarantee against BFS.
    Verify {
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Run an experiment grid and emit per-seed rows or seed averages.
    Report {
        /// TOML experiment config; flags below override or replace it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "n", num_args = 1..)]
        n: Vec<usize>,
        #[arg(long = "seed", num_args = 1..)]
        seed: Vec<u64>,
        #[arg(long)]
        c: Option<u32>,
        /// `name` or `name:model`, repeatable.
        #[arg(long = "scheme", num_args = 1..)]
        scheme: Vec<SchemeSpec>,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
        /// Emit seed-averaged rows instead of per-seed rows.
        #[arg(long)]
        summary: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Read the graph from a file instead of sampling it.
    #[arg(long)]
    graph: Option<PathBuf>,
}

impl GraphArgs {
    fn load(&self) -> Result<LabeledGraph, String> {
        match &self.graph {
            Some(path) => {
                let text =
                    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                read_graph_file(&text).map_err(|e| e.to_string())
            }
            None => generate_uniform(self.n, self.seed).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Args)]
struct SchemeArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value = "sp_neighbor_known")]
    scheme: SchemeKind,
    /// Defaults to the scheme's first supported model.
    #[arg(long)]
    model: Option<ModelSpec>,
    #[arg(long, default_value_t = 3)]
    c: u32,
    /// Load a scheme file instead of building.
    #[arg(long)]
    scheme_file: Option<PathBuf>,
}

impl SchemeArgs {
    fn load(&self) -> Result<(LabeledGraph, RoutingScheme), String> {
        let g = self.graph.load()?;
        let ports = PortAssignment::random(&g, port_seed(self.graph.seed));
        let scheme = match &self.scheme_file {
            Some(path) => {
                let text =
                    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                read_scheme(&text, &g, Some(&ports))
                    .or_else(|_| read_scheme(&text, &g, None))
                    .map_err(|e| e.to_string())?
            }
            None => {
                let spec = match self.model {
                    Some(model) => {
                        SchemeSpec::new(self.scheme, model).map_err(|e| e.to_string())?
                    }
                    None => SchemeSpec::default_for(self.scheme),
                };
                build_scheme(spec, &g, &ports, self.c).map_err(|e| e.to_string())?
            }
        };
        Ok((g, scheme))
    }
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: serde_json::Value) -> String {
    serde_json::to_string_pretty(&value).expect("JSON values serialize") + "\n"
}

/// Returns whether every check passed.
fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Generate { graph, out } => {
            write_out(&out, &write_graph_file(&graph.load()?))?;
            Ok(true)
        }
        Command::Check { graph, c } => {
            let g = graph.load()?;
            let degree = check_degree_lemma(&g, c);
            let coverage = check_coverage_lemma(&g, c);
            let diameter_two = check_diameter_two(&g);
            print!(
                "{}",
                pretty(json!({
                    "n": g.n(),
                    "c": c,
                    "diameter_two": diameter_two,
                    "degree": { "passed": degree.passed(), "max_deviation": degree.max_deviation, "threshold": degree.threshold },
                    "coverage": { "passed": coverage.passed(), "violations": coverage.violations.len() },
                }))
            );
            Ok(diameter_two && degree.passed() && coverage.passed())
        }
        Command::Build { scheme, out } => {
            let (_, s) = scheme.load()?;
            let size = measure_size(&s);
            write_out(&out, &write_scheme(&s))?;
            eprint!(
                "{}",
                pretty(json!({
                    "scheme": s.kind().name(),
                    "model": s.model().to_string(),
                    "total_bits": size.total_bits,
                    "max_node_bits": size.max_per_node_bits(),
                    "breakdown": size.breakdown,
                }))
            );
            Ok(true)
        }
        Command::Route { scheme, src, dst } => {
            let (g, s) = scheme.load()?;
            let r = route(&g, &s, src, dst).map_err(|e| e.to_string())?;
            for hop in &r.hops {
                println!("{hop}");
            }
            print!(
                "{}",
                pretty(json!({
                    "delivered": r.delivered,
                    "path": r.path,
                    "edge_traversals": r.edge_traversals,
                    "shortest": r.shortest,
                    "stretch": format_ratio(&r.stretch),
                }))
            );
            Ok(r.delivered)
        }
        Command::Verify { scheme } => {
            let (g, s) = scheme.load()?;
            let dist = compact_routing::graphs::DistanceMatrix::new(&g);
            let stats = route_stats(
                &g,
                &s,
                &dist,
                PairSampler::default_for(g.n(), scheme.graph.seed),
            )
            .map_err(|e| e.to_string())?;
            let mut report = json!({
                "scheme": s.kind().name(),
                "model": s.model().to_string(),
                "pairs": stats.pairs,
                "delivered": stats.delivered,
                "max_stretch": format_ratio(&stats.max_stretch),
                "max_traversals": stats.max_traversals,
            });
            let mut passed = stats.all_delivered();
            if s.kind().is_shortest_path() {
                let shortest = verify_shortest(&g, &s);
                passed &= shortest.passed();
                report["shortest_violations"] = json!(shortest.violations.len());
            }
            if s.kind() == SchemeKind::FullInfo {
                let full = verify_full_info(&g, &s);
                passed &= full.passed();
                report["full_info_mismatches"] = json!(full.mismatches.len());
            }
            report["passed"] = json!(passed);
            print!("{}", pretty(report));
            Ok(passed)
        }
        Command::Report {
            config,
            n,
            seed,
            c,
            scheme,
            format,
            summary,
            out,
        } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    ExperimentConfig::from_toml(&text).map_err(|e| e.to_string())?
                }
                None => ExperimentConfig::from_toml("n_values = []\nseeds = []")
                    .expect("empty config parses"),
            };
            if !n.is_empty() {
                cfg.n_values = n;
            }
            if !seed.is_empty() {
                cfg.seeds = seed;
            }
            if let Some(c) = c {
                cfg.c = c;
            }
            if !scheme.is_empty() {
                cfg.schemes = scheme;
            }
            cfg.validate().map_err(|e| e.to_string())?;
            let rows = run_experiments(&cfg);
            let text = if summary {
                emit_summary(&summarize(&rows), format)
            } else {
                emit_report(&rows, format)
            };
            write_out(&out, &text)?;
            Ok(rows.iter().all(|r| r.status == "ok" && r.guarantee_met))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use walkdist::edgelist::{self, ParseWarning};
use walkdist::ewalk::{self, SweepDirection, ThetaSchedule, DEFAULT_BETA};
use walkdist::graph::WeightedMultigraph;
use walkdist::limit::{self, SweepResult};
use walkdist::spectral;
use walkdist::table;
use walkdist::verify::{self, Suite};
use walkdist::{compute, Error, MetricFamily, MetricParams};
use walkdist_cli::{csv_matrix, csv_pairs, fmt_value, json_matrix, json_pairs, parse_pairs, write_output, Meta};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "walkdist", version, about = "Walk-based distances on weighted multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance matrix of one metric family.
    Dist(DistArgs),
    /// Ratio table for the unit path on four vertices.
    Table,
    /// Run a verification suite and print a JSON report.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Deviation from both limits over a log-spaced grid of α.
    Sweep(SweepArgs),
}

#[derive(clap::Args)]
struct DistArgs {
    #[arg(long)]
    metric: MetricFamily,
    #[arg(long, conflicts_with = "t")]
    alpha: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Evaluate on the balance-graph with this weighted degree.
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Comma-separated vertex pairs `a:b`.
    #[arg(long)]
    pairs: Option<String>,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value_t = SweepMetric::Walk)]
    metric: SweepMetric,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1e-4)]
    from: f64,
    #[arg(long, default_value_t = 1e4)]
    to: f64,
    #[arg(long, default_value_t = 1)]
    per_decade: usize,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepMetric {
    Walk,
    EWalk,
}

enum Failure {
    Input(String),
    Numeric(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

fn load(path: &Path) -> Result<WeightedMultigraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let parsed = edgelist::parse_edge_list(&text)?;
    if let Some(ParseWarning::Disconnected { components }) = parsed.warnings.first() {
        return Err(Failure::Input(format!("graph has {components} components")));
    }
    Ok(parsed.graph)
}

fn write(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    write_output(path, content).map_err(|e| Failure::Input(format!("cannot write output: {e}")))
}

fn cmd_dist(args: DistArgs) -> Result<(), Failure> {
    let g = load(&args.input)?;
    let pairs = match &args.pairs {
        Some(spec) => Some(parse_pairs(spec, &g).map_err(Failure::Input)?),
        None => None,
    };
    let params = MetricParams {
        alpha: args.alpha,
        t: args.t,
        m: args.m,
        beta: args.beta,
    };
    let d = compute(args.metric, &g, &params)?;
    let param = d.param();
    let rho = match param.and_then(|p| p.rho) {
        Some(r) => r,
        None => {
            let used = match args.m {
                Some(m) => walkdist::transforms::balance_graph(&g, Some(m))?.result,
                None => g.clone(),
            };
            spectral::perron(&used.adjacency())?.rho
        }
    };
    let meta = Meta {
        metric: args.metric.to_string(),
        n: g.order(),
        rho: Some(rho),
        alpha: param.map(|p| p.alpha),
        t: param.and_then(|p| p.t),
        theta: param.map(|p| p.theta),
        m: args.m,
        beta: match args.metric {
            MetricFamily::EWalk => Some(args.beta.unwrap_or(DEFAULT_BETA)),
            _ => None,
        },
    };
    let labels = g.labels();
    let out = match (args.format, &pairs) {
        (Format::Csv, None) => csv_matrix(labels, d.entries(), &meta),
        (Format::Csv, Some(p)) => csv_pairs(labels, d.entries(), p, &meta),
        (Format::Json, None) => pretty(&json_matrix(labels, d.entries(), &meta)),
        (Format::Json, Some(p)) => pretty(&json_pairs(labels, d.entries(), p, &meta)),
    };
    write(args.output.as_deref(), &out)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serializable");
    s.push('\n');
    s
}

fn cmd_table() -> Result<(), Failure> {
    let rows = table::p4_table()?;
    print!("{}", table::render(&rows));
    Ok(())
}

fn cmd_verify(suite: Suite, input: &Path, output: Option<&Path>) -> Result<(), Failure> {
    let g = load(input)?;
    let report = verify::run_suite(suite, &g)?;
    let json = serde_json::to_value(&report).expect("report is serializable");
    write(output, &pretty(&json))?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn log_grid(from: f64, to: f64, per_decade: usize) -> Result<Vec<f64>, Failure> {
    if !(from > 0.0 && to > from && per_decade > 0) {
        return Err(Failure::Input("sweep needs 0 < from < to and per-decade > 0".into()));
    }
    let steps = ((to / from).log10() * per_decade as f64).round() as usize;
    Ok((0..=steps)
        .map(|k| from * 10f64.powf(k as f64 / per_decade as f64))
        .collect())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let g = load(&args.input)?;
    let alphas = log_grid(args.from, args.to, args.per_decade)?;
    let a = g.adjacency();
    let (small, large, refs): (SweepResult, SweepResult, [&str; 2]) = match args.metric {
        SweepMetric::Walk => {
            let sp = limit::shortest_path_matrix(&g)?;
            let lw = limit::long_walk_distance(&a)?;
            (
                limit::limit_sweep(MetricFamily::Walk, &g, &alphas, &sp)?,
                limit::limit_sweep(MetricFamily::Walk, &g, &alphas, &lw)?,
                ["shortest-path", "long-walk"],
            )
        }
        SweepMetric::EWalk => {
            let schedule = ThetaSchedule::for_adjacency(&a, args.beta.unwrap_or(DEFAULT_BETA))?;
            (
                ewalk::ewalk_limit_sweep(&g, &schedule, SweepDirection::ToZero, &alphas)?,
                ewalk::ewalk_limit_sweep(&g, &schedule, SweepDirection::ToInfinity, &alphas)?,
                ["weighted-shortest-path", "long-ewalk"],
            )
        }
    };
    if let Some(p) = small.points.iter().chain(&large.points).find(|p| p.error.is_some()) {
        return Err(Failure::Numeric(format!(
            "alpha={}: {}",
            p.alpha,
            p.error.as_deref().unwrap_or_default()
        )));
    }
    let mut out = format!(
        "# metric={}\n# n={}\n# small-alpha reference={}\n# large-alpha reference={}\n",
        small.family,
        g.order(),
        refs[0],
        refs[1]
    );
    out.push_str("alpha,theta,deviation_small_limit,deviation_large_limit\n");
    for (p, q) in small.points.iter().zip(&large.points) {
        let cell = |x: Option<f64>| x.map(fmt_value).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_value(p.alpha),
            cell(p.theta),
            cell(p.deviation),
            cell(q.deviation)
        ));
    }
    write(args.output.as_deref(), &out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dist(args) => cmd_dist(args),
        Command::Table => cmd_table(),
        Command::Verify { suite, input, output } => cmd_verify(suite, &input, output.as_deref()),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY_FAILED),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("numerical error: {msg}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}

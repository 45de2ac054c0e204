//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 usage or I/O error.

use std::collections::HashSet;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::clique::RoutingMode;
use crate::graph::{self, gen_graph, kruskal, read_graph, render_graph, Graph, GraphError, Model};
use crate::sparsify::{self, IterationMetrics, SparsifyError, SparsifyResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "clique-msf",
    version,
    about = "Congested-clique MST sparsification experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Complete,
    Gnp,
    Gnm,
    Path,
    Forest,
}

#[derive(Debug, Clone, Copy, ValueEnum, Default)]
enum ModeArg {
    #[default]
    Charged,
    Explicit,
}

impl From<ModeArg> for RoutingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Charged => RoutingMode::Charged,
            ModeArg::Explicit => RoutingMode::Explicit,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random weighted graph in edge-list format.
    Gen {
        /// Vertex count.
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Edge probability for gnp.
        #[arg(long)]
        p: Option<f64>,
        /// Edge count for gnm.
        #[arg(long)]
        m: Option<usize>,
        /// Tree count for forest.
        #[arg(long, default_value_t = 1)]
        trees: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run k amplification steps and write the surviving edges.
    Sparsify {
        /// Input graph in edge-list format.
        #[arg(long = "in")]
        input: PathBuf,
        /// Amplification steps; the result is sparse at eps = 1/2^k.
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check the sparsity certificate and minimum spanning forest preservation.
        #[arg(long)]
        verify: bool,
        /// Write per-iteration metrics as CSV.
        #[arg(long)]
        metrics: Option<PathBuf>,
    },
    /// Compute the minimum spanning forest on the simulated clique.
    Mst {
        /// Input graph in edge-list format.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        /// Output file for the forest; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare against the sequential oracle.
        #[arg(long)]
        verify: bool,
        /// Write per-iteration metrics as CSV.
        #[arg(long)]
        metrics: Option<PathBuf>,
    },
    /// Check that an edge subset has the same minimum spanning forest as a graph.
    Verify {
        /// Full graph.
        #[arg(long = "in")]
        input: PathBuf,
        /// Edge subset to compare against it.
        #[arg(long)]
        edges: PathBuf,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: GraphError },
    #[error("{path}: {source}")]
    Output { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Run(#[from] SparsifyError),
    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => EXIT_VERIFY,
            _ => EXIT_USAGE,
        }
    }
}

/// One line of the metrics CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricsRow {
    pub iter: u32,
    pub eps_exp: u32,
    pub edges_before: usize,
    pub edges_after: usize,
    pub rounds_charged: u64,
    pub rounds_explicit: Option<u64>,
    pub cert_ok: bool,
}

impl From<&IterationMetrics> for MetricsRow {
    fn from(it: &IterationMetrics) -> Self {
        Self {
            iter: it.iter,
            eps_exp: it.eps_exp,
            edges_before: it.edges_before,
            edges_after: it.edges_after,
            rounds_charged: it.rounds_charged,
            rounds_explicit: it.rounds_explicit,
            cert_ok: it.cert_ok,
        }
    }
}

/// Per-iteration rows followed by a summary row (`iter = 0`) covering the
/// whole run.
pub fn metrics_rows(
    iterations: &[IterationMetrics],
    edges_before: usize,
    edges_after: usize,
    eps_exp: u32,
    rounds_charged: u64,
    rounds_explicit: Option<u64>,
    cert_ok: bool,
) -> Vec<MetricsRow> {
    let mut rows: Vec<MetricsRow> = iterations.iter().map(MetricsRow::from).collect();
    rows.push(MetricsRow {
        iter: 0,
        eps_exp,
        edges_before,
        edges_after,
        rounds_charged,
        rounds_explicit,
        cert_ok,
    });
    rows
}

pub fn render_metrics(rows: &[MetricsRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("serializing to memory");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

fn load(path: &Path) -> Result<Graph, CliError> {
    read_graph(path).map_err(|source| CliError::Input {
        path: path.to_owned(),
        source,
    })
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Output {
            path: p.to_owned(),
            source,
        }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Output {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn cmd_gen(
    n: usize,
    model: ModelArg,
    p: Option<f64>,
    m: Option<usize>,
    trees: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let model = match model {
        ModelArg::Complete => Model::Complete,
        ModelArg::Gnp => {
            Model::Gnp(p.ok_or_else(|| CliError::Usage("--model gnp needs --p".into()))?)
        }
        ModelArg::Gnm => {
            Model::Gnm(m.ok_or_else(|| CliError::Usage("--model gnm needs --m".into()))?)
        }
        ModelArg::Path => Model::Path,
        ModelArg::Forest => Model::Forest(trees),
    };
    let g = gen_graph(n, model, seed).map_err(|e| CliError::Usage(e.to_string()))?;
    emit(out, &render_graph(&g))
}

fn write_metrics(path: Option<&Path>, rows: &[MetricsRow]) -> Result<(), CliError> {
    match path {
        Some(p) => emit(Some(p), &render_metrics(rows)),
        None => Ok(()),
    }
}

fn sparsify_rows(g: &Graph, r: &SparsifyResult) -> Vec<MetricsRow> {
    metrics_rows(
        &r.iterations,
        g.m(),
        r.edges.len(),
        r.scheme.eps_exp(),
        r.metrics.rounds_charged,
        r.metrics.rounds_explicit,
        r.cert.passed(),
    )
}

fn cmd_sparsify(
    input: &Path,
    k: u32,
    mode: RoutingMode,
    out: Option<&Path>,
    verify: bool,
    metrics: Option<&Path>,
) -> Result<(), CliError> {
    let g = load(input)?;
    let r = sparsify::sparsify(&g, k, mode)?;
    let kept = Graph::new(g.n(), r.edges.iter().copied()).expect("subset of a valid graph");
    emit(out, &render_graph(&kept))?;
    write_metrics(metrics, &sparsify_rows(&g, &r))?;
    eprintln!(
        "k={k} eps=1/2^{} edges {} -> {} (bound {}) rounds_charged={}{}",
        r.scheme.eps_exp(),
        g.m(),
        r.edges.len(),
        r.edge_bound(),
        r.metrics.rounds_charged,
        r.metrics
            .rounds_explicit
            .map(|x| format!(" rounds_explicit={x}"))
            .unwrap_or_default()
    );
    if r.cert.slack > 1 {
        eprintln!(
            "note: n^eps is not integral; bounds include a slack factor of {}",
            r.cert.slack
        );
    }
    if verify {
        if !r.cert.passed() {
            return Err(CliError::Verify(format!(
                "certificate violations: {:?}",
                r.cert.violations
            )));
        }
        if !r.preserves_msf(&g) {
            return Err(CliError::Verify(
                "minimum spanning forest not preserved".into(),
            ));
        }
        eprintln!("verified: certificate passes and minimum spanning forest preserved");
    }
    Ok(())
}

fn cmd_mst(
    input: &Path,
    mode: RoutingMode,
    out: Option<&Path>,
    verify: bool,
    metrics: Option<&Path>,
) -> Result<(), CliError> {
    let g = load(input)?;
    let r = sparsify::mst(&g, mode)?;
    let forest =
        Graph::new(g.n(), r.forest.edges().iter().copied()).expect("subset of a valid graph");
    emit(out, &render_graph(&forest))?;
    let cert_ok = r.iterations.iter().all(|it| it.cert_ok);
    let rows = metrics_rows(
        &r.iterations,
        g.m(),
        r.forest.len(),
        r.k,
        r.metrics.rounds_charged,
        r.metrics.rounds_explicit,
        cert_ok,
    );
    write_metrics(metrics, &rows)?;
    eprintln!(
        "k={} rounds_charged={} finale_rounds={} forest_edges={} weight={}",
        r.k,
        r.metrics.rounds_charged,
        r.finale_rounds,
        r.forest.len(),
        r.forest.total_weight()
    );
    if verify {
        if r.forest != graph::msf_oracle(&g) {
            return Err(CliError::Verify(
                "forest differs from the sequential oracle".into(),
            ));
        }
        eprintln!("verified: forest equals the sequential oracle");
    }
    Ok(())
}

fn cmd_verify(input: &Path, edges: &Path) -> Result<(), CliError> {
    let g = load(input)?;
    let sub = load(edges)?;
    if sub.n() != g.n() {
        return Err(CliError::Verify(format!(
            "vertex counts differ: {} vs {}",
            g.n(),
            sub.n()
        )));
    }
    let all: HashSet<_> = g.edges().iter().collect();
    if let Some(extra) = sub.edges().iter().find(|e| !all.contains(e)) {
        return Err(CliError::Verify(format!(
            "edge {extra} is not in the graph"
        )));
    }
    if kruskal(sub.edges()) != kruskal(g.edges()) {
        return Err(CliError::Verify("minimum spanning forests differ".into()));
    }
    eprintln!("verified: minimum spanning forests are identical");
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Gen {
            n,
            model,
            p,
            m,
            trees,
            seed,
            out,
        } => cmd_gen(n, model, p, m, trees, seed, out.as_deref()),
        Command::Sparsify {
            input,
            k,
            mode,
            out,
            verify,
            metrics,
        } => cmd_sparsify(
            &input,
            k,
            mode.into(),
            out.as_deref(),
            verify,
            metrics.as_deref(),
        ),
        Command::Mst {
            input,
            mode,
            out,
            verify,
            metrics,
        } => cmd_mst(
            &input,
            mode.into(),
            out.as_deref(),
            verify,
            metrics.as_deref(),
        ),
        Command::Verify { input, edges } => cmd_verify(&input, &edges),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

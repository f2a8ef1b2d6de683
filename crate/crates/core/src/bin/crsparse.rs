use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crsparse::{
    effective_resistances, gen_barbell, gen_random, read_graph, records_to_csv, run_sweep,
    sparsify, write_atomic, write_graph, ErrorReport, IsotropicMetric, Method, ParsedGraph,
    SweepConfig, WeightedGraph,
};

#[derive(Parser)]
#[command(
    name = "crsparse",
    version,
    about = "Graph sparsification by CR matrix multiplication"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Barbell,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Cr,
    Er,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Cr => Method::Cr,
            MethodArg::Er => Method::Er,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a barbell or random graph as an edge list.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Clique size (barbell).
        #[arg(long, default_value_t = 30)]
        k: usize,
        /// Number of path edges between the cliques (barbell).
        #[arg(long, default_value_t = 41)]
        path_edges: usize,
        /// Vertex count (random).
        #[arg(long, default_value_t = 50)]
        n: usize,
        /// Edge probability (random).
        #[arg(long, default_value_t = 0.2)]
        edge_prob: f64,
        #[arg(long, default_value_t = 100)]
        weight_max: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sparsify a graph by sampling edges with replacement.
    Sparsify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "cr")]
        method: MethodArg,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_graph: PathBuf,
        /// Summary report; printed to stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Exact effective resistance of every edge.
    Resistances {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a sketch against its source graph.
    Metrics {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sketch: PathBuf,
        /// CR accuracy parameter; adds the additive bound 2·W·eps to the report.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Sweep trial counts and methods, writing one CSV row per run.
    Sweep {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        r_list: Vec<usize>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "cr,er")]
        methods: Vec<MethodArg>,
        #[arg(long, default_value_t = 20)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Record wall time per run (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
}

fn load(path: &Path) -> crsparse::Result<WeightedGraph> {
    let ParsedGraph {
        graph,
        merged_duplicates,
    } = read_graph(path)?;
    if merged_duplicates > 0 {
        eprintln!(
            "warning: {}: merged {merged_duplicates} duplicate edge line(s)",
            path.display()
        );
    }
    Ok(graph)
}

fn emit(path: Option<&Path>, text: &str) -> crsparse::Result<()> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Command) -> crsparse::Result<()> {
    match cmd {
        Command::Generate {
            kind,
            k,
            path_edges,
            n,
            edge_prob,
            weight_max,
            seed,
            out,
        } => {
            let g = match kind {
                Kind::Barbell => gen_barbell(k, path_edges, weight_max, seed)?,
                Kind::Random => gen_random(n, edge_prob, weight_max, seed)?,
            };
            write_graph(&g, out)
        }
        Command::Sparsify {
            input,
            method,
            r,
            seed,
            out_graph,
            report,
        } => {
            let g = load(&input)?;
            let method = Method::from(method);
            let out = sparsify(&g, method, r, seed)?;
            let mut text = String::new();
            let _ = writeln!(text, "method={method}");
            let _ = writeln!(text, "r={r}");
            let _ = writeln!(text, "seed={seed}");
            let _ = writeln!(text, "n={}", g.n());
            let _ = writeln!(text, "source_edges={}", g.m());
            let _ = writeln!(text, "sketch_edges={}", out.sketch.m());
            let _ = writeln!(text, "retained_fraction={}", out.retained_fraction());
            let _ = writeln!(text, "source_total_weight={}", out.source_w);
            let _ = writeln!(text, "sketch_total_weight={}", out.sketch.total_weight());
            write_graph(&out.sketch, &out_graph)?;
            emit(report.as_deref(), &text)
        }
        Command::Resistances { input, out } => {
            let g = load(&input)?;
            let table = effective_resistances(&g)?;
            let mut text = String::from("# u v w resistance\n");
            for (e, r) in g.edges().iter().zip(table.values()) {
                let _ = writeln!(text, "{} {} {} {}", e.u, e.v, e.w, r);
            }
            emit(out.as_deref(), &text)
        }
        Command::Metrics {
            input,
            sketch,
            eps,
            report,
        } => {
            let g = load(&input)?;
            let h = load(&sketch)?;
            if g.n() != h.n() {
                return Err(crsparse::Error::Shape(format!(
                    "graph has {} vertices, sketch has {}",
                    g.n(),
                    h.n()
                )));
            }
            if let Some(e) = eps {
                if !(e.is_finite() && e > 0.0) {
                    return Err(crsparse::Error::InvalidParameter(format!(
                        "eps must be positive, got {e}"
                    )));
                }
            }
            let metric = IsotropicMetric::with_default_tol(&g.laplacian())?;
            let rep = ErrorReport::with_metric(
                &metric,
                &h.laplacian(),
                eps.map(|e| (g.total_weight(), e)),
            )?;
            let mut text = String::new();
            let _ = writeln!(text, "delta_frobenius={}", rep.delta_frobenius);
            let _ = writeln!(text, "delta_spectral={}", rep.delta_spectral);
            let _ = writeln!(text, "isotropic_error={}", rep.isotropic_error);
            if let Some(b) = rep.additive_bound_frobenius {
                let _ = writeln!(text, "additive_bound_frobenius={b}");
                let _ = writeln!(text, "additive_certificate={}", rep.delta_spectral <= b);
            }
            let _ = writeln!(text, "null_space_mismatch={}", rep.null_space_mismatch);
            emit(report.as_deref(), &text)
        }
        Command::Sweep {
            input,
            r_list,
            methods,
            repeats,
            seed,
            csv,
            timing,
        } => {
            let g = load(&input)?;
            let cfg = SweepConfig {
                r_values: r_list,
                methods: methods.into_iter().map(Method::from).collect(),
                repeats,
                seed,
                timing,
            };
            let records = run_sweep(&g, &cfg)?;
            for rec in records.iter().filter(|r| !r.is_ok()) {
                eprintln!(
                    "warning: r={} method={} repeat={} failed: {}",
                    rec.r,
                    rec.method,
                    rec.repeat,
                    rec.failure.as_deref().unwrap_or("")
                );
            }
            emit(csv.as_deref(), &records_to_csv(&records))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

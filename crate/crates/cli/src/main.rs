use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rpartite_core::bounds::{alpha_of, bound_report, brouwer_threshold};
use rpartite_core::constructions::{
    c5_blowup, conjecture_family, random_near_extremal, sharpness_graph, turan_graph,
};
use rpartite_core::exact::{min_deletions_exact, min_deletions_parallel, SolveOptions};
use rpartite_core::io::{read_edge_list_file, write_edge_list_with_comments};
use rpartite_core::pipeline::{run_pipeline, PipelineParams};
use rpartite_core::rational::Exact;
use rpartite_core::sweep::{run_sweep, write_csv, SweepConfig};
use rpartite_core::verify::run_suite;
use rpartite_core::{Graph, PipelineError};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "rpartite",
    version,
    about = "Edge deletion to r-partiteness for K_{r+1}-free graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list with a JSON sidecar.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Output edge-list path; the sidecar goes to `<out>.json`. Stdout if omitted.
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
    },
    /// Parse an edge list and report basic statistics.
    Check {
        file: PathBuf,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Compute D_r(G) exactly, with the stability pipeline, or both.
    Solve {
        file: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        /// Seconds; 0 means no limit.
        #[arg(long, default_value_t = 0.0)]
        time_limit: f64,
        /// Search nodes; 0 means no limit.
        #[arg(long, default_value_t = 0)]
        node_limit: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Return the lexicographically least optimal partition.
        #[arg(long)]
        canonical: bool,
        #[arg(long)]
        no_strong_bound: bool,
    },
    /// Evaluate the closed-form bounds at (n, r, alpha).
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Exact rational such as `1/12` or a decimal.
        #[arg(long)]
        alpha: Exact,
    },
    /// Run a JSON-configured parameter sweep and write CSV.
    Sweep {
        config: PathBuf,
        /// Overrides the config's `output`; stdout if neither is set.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run a named acceptance suite (or `all`) and print a JSON report.
    Verify { suite: String },
}

#[derive(Subcommand)]
enum GenKind {
    /// Balanced complete r-partite graph T(n, r).
    Turan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Blow-up of the 5-cycle with the given class sizes.
    C5blowup {
        /// Five class sizes, comma separated.
        #[arg(long, value_parser = parse_five)]
        sizes: [usize; 5],
    },
    /// Extremal construction for the deletion lower bound at (n, r, alpha).
    Sharpness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        alpha: Exact,
    },
    /// Blow-up of C5 joined with K_{r-2}.
    Conjecture {
        #[arg(long)]
        r: usize,
        #[arg(long, value_parser = parse_five)]
        cycle_sizes: [usize; 5],
        #[arg(long, value_delimiter = ',')]
        join_sizes: Vec<usize>,
    },
    /// T(n, r) minus t uniformly random edges.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Pipeline,
    Both,
}

fn parse_five(s: &str) -> Result<[usize; 5], String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| format!("bad size {x:?}")))
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|v: Vec<usize>| format!("expected 5 comma-separated sizes, got {}", v.len()))
}

fn generate(kind: &GenKind) -> Result<(Graph, Value)> {
    let out = match kind {
        GenKind::Turan { n, r } => (
            turan_graph(*n, *r),
            json!({"kind": "turan", "n": n, "r": r}),
        ),
        GenKind::C5blowup { sizes } => (
            c5_blowup(*sizes)?,
            json!({"kind": "c5blowup", "sizes": sizes}),
        ),
        GenKind::Sharpness { n, r, alpha } => {
            let (g, spec) = sharpness_graph(*n, *r, alpha.to_f64())?;
            (
                g,
                json!({"kind": "sharpness", "n": n, "r": r, "alpha": alpha, "spec": spec}),
            )
        }
        GenKind::Conjecture {
            r,
            cycle_sizes,
            join_sizes,
        } => (
            conjecture_family(*r, *cycle_sizes, join_sizes)?,
            json!({"kind": "conjecture", "r": r, "cycle_sizes": cycle_sizes, "join_sizes": join_sizes}),
        ),
        GenKind::Random { n, r, t, seed } => (
            random_near_extremal(*n, *r, *t, *seed)?,
            json!({"kind": "random", "n": n, "r": r, "t": t, "seed": seed}),
        ),
    };
    Ok(out)
}

fn cmd_gen(kind: &GenKind, out: Option<&Path>) -> Result<()> {
    let (g, mut sidecar) = generate(kind)?;
    sidecar["vertices"] = json!(g.n());
    sidecar["edges"] = json!(g.m());
    let comments = vec![format!("rpartite gen {}", sidecar_params(&sidecar))];
    match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            write_edge_list_with_comments(&g, &comments, &mut w)?;
            w.flush()?;
            let side = sidecar_path(path);
            std::fs::write(&side, serde_json::to_string_pretty(&sidecar)? + "\n")
                .with_context(|| format!("writing {}", side.display()))?;
            log::info!(
                "wrote {} ({} vertices, {} edges)",
                path.display(),
                g.n(),
                g.m()
            );
        }
        None => write_edge_list_with_comments(&g, &comments, std::io::stdout().lock())?,
    }
    Ok(())
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn sidecar_params(v: &Value) -> String {
    let Value::Object(map) = v else {
        return String::new();
    };
    map.iter()
        .filter(|(k, _)| !matches!(k.as_str(), "spec" | "vertices" | "edges"))
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_check(file: &Path, r: Option<usize>) -> Result<Value> {
    let g = read_edge_list_file(file).with_context(|| format!("reading {}", file.display()))?;
    let mut report = json!({
        "n": g.n(),
        "m": g.m(),
        "max_degree": g.max_degree(),
    });
    if let Some(r) = r {
        let (t, alpha) = alpha_of(&g, r);
        report["r"] = json!(r);
        report["clique_witness"] = json!(g.clique_witness(r + 1));
        report["t"] = json!(t);
        report["alpha"] = json!(alpha);
        report["brouwer_threshold"] = json!(brouwer_threshold(g.n(), r));
    }
    Ok(report)
}

struct SolveArgs {
    r: usize,
    mode: Mode,
    time_limit: f64,
    node_limit: u64,
    workers: usize,
    canonical: bool,
    strong_bound: bool,
}

/// Returns the report and whether the pipeline rejected the input.
fn cmd_solve(file: &Path, a: &SolveArgs) -> Result<(Value, bool)> {
    let g = read_edge_list_file(file).with_context(|| format!("reading {}", file.display()))?;
    let (t, alpha) = alpha_of(&g, a.r);
    let mut report = json!({"n": g.n(), "m": g.m(), "r": a.r, "t": t, "alpha": alpha});
    if a.mode != Mode::Pipeline {
        let opts = SolveOptions {
            time_limit: a.time_limit,
            node_limit: a.node_limit,
            canonical_tiebreak: a.canonical,
            strong_bound: a.strong_bound,
            ..SolveOptions::new(a.r)
        };
        let res = if a.workers > 1 && !a.canonical {
            min_deletions_parallel(&g, &opts, a.workers)?
        } else {
            min_deletions_exact(&g, &opts)?
        };
        report["exact"] = json!({
            "status": res.status,
            "deletions": res.best_value,
            "nodes_explored": res.nodes_explored,
            "partition": res.best_partition.as_ref().map(|p| p.part_of()),
        });
    }
    let mut rejected = false;
    if a.mode != Mode::Exact {
        report["pipeline"] = match run_pipeline(&g, a.r, &PipelineParams::default()) {
            Ok(res) => json!({
                "deletions": res.deletions,
                "used_fallback": res.used_fallback,
                "stage_reached": res.stage_reached,
                "partition": res.partition.part_of(),
                "trace": res.trace,
            }),
            Err(e) => {
                rejected = true;
                let witness = match &e {
                    PipelineError::ContainsClique { witness, .. } => json!(witness),
                    _ => Value::Null,
                };
                json!({"error": e.to_string(), "witness": witness})
            }
        };
    }
    Ok((report, rejected))
}

fn cmd_sweep(config: &Path, output: Option<PathBuf>, workers: Option<usize>) -> Result<()> {
    let text =
        std::fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
    let mut cfg: SweepConfig =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", config.display()))?;
    if let Some(w) = workers {
        cfg.workers = w;
    }
    let records = run_sweep(&cfg);
    let target = output.or_else(|| cfg.output.as_ref().map(PathBuf::from));
    match target {
        Some(path) => {
            let file =
                File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&records, BufWriter::new(file))?;
            log::info!("wrote {} rows to {}", records.len(), path.display());
        }
        None => write_csv(&records, std::io::stdout().lock())?,
    }
    Ok(())
}

fn print_json(v: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Gen { kind, out } => cmd_gen(&kind, out.as_deref())?,
        Command::Check { file, r } => print_json(&cmd_check(&file, r)?)?,
        Command::Solve {
            file,
            r,
            mode,
            time_limit,
            node_limit,
            workers,
            canonical,
            no_strong_bound,
        } => {
            if time_limit.is_nan() || time_limit < 0.0 {
                bail!("--time-limit must be nonnegative");
            }
            let args = SolveArgs {
                r,
                mode,
                time_limit,
                node_limit,
                workers,
                canonical,
                strong_bound: !no_strong_bound,
            };
            let (report, rejected) = cmd_solve(&file, &args)?;
            print_json(&report)?;
            if rejected && mode == Mode::Pipeline {
                return Ok(EXIT_INPUT);
            }
        }
        Command::Bounds { n, r, alpha } => {
            if r == 0 {
                bail!("r must be at least 1");
            }
            if alpha.value() < 0.into() {
                bail!("alpha must be nonnegative");
            }
            let mut report = serde_json::to_value(bound_report(n, r, alpha))?;
            report["alpha_exact"] = json!(alpha);
            print_json(&report)?;
        }
        Command::Sweep {
            config,
            output,
            workers,
        } => cmd_sweep(&config, output, workers)?,
        Command::Verify { suite } => {
            let reports = run_suite(&suite)?;
            let pass = reports.iter().all(|s| s.pass);
            print_json(&json!({"pass": pass, "suites": reports}))?;
            if !pass {
                return Ok(EXIT_VERIFY);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e)
            if e.chain().any(|c| {
                c.downcast_ref::<std::io::Error>()
                    .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
            }) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            // Library errors already embed their source in the message.
            let mut msg = String::new();
            for cause in e.chain() {
                let text = cause.to_string();
                if !msg.contains(&text) {
                    if !msg.is_empty() {
                        msg.push_str(": ");
                    }
                    msg.push_str(&text);
                }
            }
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

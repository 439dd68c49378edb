//! `tight-euler` command-line front end.
//!
//! Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 verification or divisibility failure, 2 inconclusive search,
//! 3 I/O, format or flag error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tight_euler::decomposer::{decompose, DecomposeError};
use tight_euler::divisibility::{is_divisible, ucycle_divisible};
use tight_euler::hypergraph::{connectedness, is_typical, parse_hypergraph, write_hypergraph, CheckMode};
use tight_euler::pipeline::{
    brute_force_euler_tour_with_limit, euler_trail, euler_tour, universal_cycle, verify_trail, verify_tour,
    verify_ucycle, PipelineConfig, PipelineError,
};
use tight_euler::randwalk::{default_steps, find_spanning_walk, SpanningError, DEFAULT_RETRIES};
use tight_euler::{Hypergraph, Vertex, Walk};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "tight-euler", version, about = "Tight Euler tours and universal cycles")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a hypergraph in the text format.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Universal cycle for the k-subsets of 1..=n.
    Ucycle {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Tight Euler tour of a hypergraph.
    Tour {
        file: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Tight Euler trail with prescribed first and last (k-1)-tuples.
    Trail {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        start: Vec<Vertex>,
        /// Read backwards from the last vertex.
        #[arg(long, value_delimiter = ',', required = true)]
        end: Vec<Vertex>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Partition the edges into tight 2k-cycles.
    Decompose {
        file: PathBuf,
        #[arg(long, default_value_t = tight_euler::decomposer::DEFAULT_BUDGET)]
        budget: u64,
    },
    #[command(subcommand)]
    Walk(WalkCommand),
    #[command(subcommand)]
    Check(CheckCommand),
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Exhaustive search for a tight Euler tour.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = tight_euler::pipeline::DEFAULT_BRUTE_FORCE_CAP)]
        cap: usize,
        #[arg(long, default_value_t = tight_euler::pipeline::DEFAULT_NODE_LIMIT)]
        nodes: u64,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    Complete {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Each k-set is an edge independently with probability p.
    Random {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        p: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum WalkCommand {
    /// Run the self-avoiding random walk until a spanning history appears.
    Sim {
        file: PathBuf,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_RETRIES)]
        retries: usize,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Divisibility by the tight cycle of the given length (default 2k).
    Divisibility {
        file: PathBuf,
        #[arg(long)]
        cycle_length: Option<usize>,
    },
    /// (c, h, p)-typicality.
    Typicality {
        file: PathBuf,
        #[arg(long = "c")]
        c: f64,
        #[arg(long = "h")]
        h: usize,
        /// Defaults to the edge density.
        #[arg(long = "p")]
        p: Option<f64>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Largest alpha for which the graph is alpha-connected.
    Connectedness {
        file: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Whether k divides binom(n-1, k-1).
    Ucycle { n: usize, k: usize },
}

#[derive(Subcommand)]
enum VerifyCommand {
    Tour {
        file: PathBuf,
        #[arg(long)]
        tour: PathBuf,
    },
    Trail {
        file: PathBuf,
        #[arg(long)]
        walk: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        start: Vec<Vertex>,
        #[arg(long, value_delimiter = ',', required = true)]
        end: Vec<Vertex>,
    },
    Ucycle {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        seq: PathBuf,
    },
}

#[derive(Args)]
struct ConfigArgs {
    /// Full pipeline attempts before falling back to exhaustive search.
    #[arg(long, default_value_t = 3)]
    attempts: usize,
    /// Largest edge count handed to exhaustive search; 0 disables it.
    #[arg(long, default_value_t = tight_euler::pipeline::DEFAULT_BRUTE_FORCE_CAP)]
    brute_force_cap: usize,
    /// Random walk length in vertices.
    #[arg(long)]
    walk_steps: Option<usize>,
}

impl ConfigArgs {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            attempts: self.attempts,
            brute_force_cap: self.brute_force_cap,
            walk_steps: self.walk_steps,
            ..PipelineConfig::default()
        }
    }
}

#[derive(Args)]
struct ModeArgs {
    /// Sample this many cases instead of enumerating.
    #[arg(long)]
    samples: Option<u64>,
}

impl ModeArgs {
    fn mode(&self, seed: u64) -> CheckMode {
        match self.samples {
            Some(samples) => CheckMode::Sampled { samples, seed },
            None => CheckMode::default(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Status {
    Ok = 0,
    Failed = 1,
    Inconclusive = 2,
    Usage = 3,
}

/// An error that ends the command with a message on stderr.
struct Fatal {
    status: Status,
    message: String,
}

fn usage(message: impl ToString) -> Fatal {
    Fatal {
        status: Status::Usage,
        message: message.to_string(),
    }
}

struct Output {
    format: Format,
}

impl Output {
    /// Prints `text` lines or the JSON value, depending on the format.
    fn emit(&self, text: &str, value: Value) {
        match self.format {
            Format::Text if text.is_empty() => {}
            Format::Text => println!("{text}"),
            Format::Json => println!("{}", serde_json::to_string(&value).expect("serializable")),
        }
    }
}

fn read(path: &Path) -> Result<String, Fatal> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Hypergraph, Fatal> {
    parse_hypergraph(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_sequence(path: &Path) -> Result<Vec<Vertex>, Fatal> {
    let text = read(path)?;
    text.split_whitespace()
        .map(|t| t.parse::<Vertex>().map_err(|_| usage(format!("{}: `{t}` is not a vertex", path.display()))))
        .collect()
}

fn write_or_print(out: &Output, g: &Hypergraph, path: Option<&Path>) -> Result<Status, Fatal> {
    let text = write_hypergraph(g);
    match path {
        Some(p) => {
            fs::write(p, &text).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            eprintln!("wrote {} edges to {}", g.edge_count(), p.display());
        }
        None => {
            let edges: Vec<&[Vertex]> = g.edges().map(|e| e.vertices()).collect();
            out.emit(
                text.trim_end(),
                json!({"k": g.k(), "n": g.n(), "edges": edges}),
            );
        }
    }
    Ok(Status::Ok)
}

fn pipeline_failure(out: &Output, e: PipelineError) -> Result<Status, Fatal> {
    let status = match &e {
        PipelineError::DegreeCondition(_) | PipelineError::UcycleNotDivisible { .. } | PipelineError::NoneExists => {
            Status::Failed
        }
        PipelineError::Endpoints(_) | PipelineError::Parameters { .. } => return Err(usage(&e)),
        PipelineError::Inconclusive(failures) => {
            for f in failures {
                let attempt = f.attempt.map_or("fallback".to_string(), |a| format!("attempt {a}"));
                eprintln!("{attempt}: {:?}: {}", f.stage, f.message);
            }
            Status::Inconclusive
        }
        PipelineError::Internal(_) => Status::Inconclusive,
    };
    eprintln!("{e}");
    let failures = match &e {
        PipelineError::Inconclusive(f) => serde_json::to_value(f).expect("serializable"),
        _ => Value::Null,
    };
    if out.format == Format::Json {
        out.emit("", json!({"ok": false, "error": e.to_string(), "failures": failures}));
    }
    Ok(status)
}

fn run(cli: Cli) -> Result<Status, Fatal> {
    let out = Output { format: cli.format };
    let seed = cli.seed;
    match cli.command {
        Command::Gen(GenCommand::Complete { n, k, output }) => {
            let g = Hypergraph::complete(n, k).map_err(usage)?;
            write_or_print(&out, &g, output.as_deref())
        }
        Command::Gen(GenCommand::Random { n, k, p, output }) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(usage(format!("p = {p} must lie in [0, 1]")));
            }
            let g = Hypergraph::random(n, k, p, seed).map_err(usage)?;
            write_or_print(&out, &g, output.as_deref())
        }
        Command::Ucycle { n, k, config } => match universal_cycle(n, k, seed, &config.config()) {
            Ok(seq) => {
                let text = seq.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
                out.emit(&text, json!({"ok": true, "n": n, "k": k, "cycle": seq}));
                Ok(Status::Ok)
            }
            Err(e) => pipeline_failure(&out, e),
        },
        Command::Tour { file, config } => {
            let g = load_graph(&file)?;
            match euler_tour(&g, seed, &config.config()) {
                Ok(c) => {
                    for f in &c.failures {
                        eprintln!("retried after {:?}: {}", f.stage, f.message);
                    }
                    out.emit(
                        &c.walk.to_string(),
                        json!({"ok": true, "method": c.method, "tour": c.walk, "failures": c.failures}),
                    );
                    Ok(Status::Ok)
                }
                Err(e) => pipeline_failure(&out, e),
            }
        }
        Command::Trail {
            file,
            start,
            end,
            config,
        } => {
            let g = load_graph(&file)?;
            match euler_trail(&g, &start, &end, seed, &config.config()) {
                Ok(c) => {
                    out.emit(
                        &c.walk.to_string(),
                        json!({"ok": true, "method": c.method, "trail": c.walk, "failures": c.failures}),
                    );
                    Ok(Status::Ok)
                }
                Err(e) => pipeline_failure(&out, e),
            }
        }
        Command::Decompose { file, budget } => {
            let g = load_graph(&file)?;
            match decompose(&g, seed, budget) {
                Ok(d) => {
                    let text = d.copies.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("\n");
                    let copies: Vec<&[Vertex]> = d.copies.iter().map(|c| c.vertices()).collect();
                    out.emit(&text, json!({"ok": true, "copies": copies}));
                    Ok(Status::Ok)
                }
                Err(e) => {
                    eprintln!("{e}");
                    out.emit("", json!({"ok": false, "error": e.to_string()}));
                    let status = match e {
                        DecomposeError::Inconclusive { .. } => Status::Inconclusive,
                        _ => Status::Failed,
                    };
                    Ok(status)
                }
            }
        }
        Command::Walk(WalkCommand::Sim { file, steps, retries }) => {
            let g = load_graph(&file)?;
            let log3 = (g.n() as f64).ln().powi(3);
            let steps = steps.unwrap_or_else(|| default_steps(g.n(), g.k()));
            match find_spanning_walk(&g, seed, retries, Some(steps)) {
                Ok(s) => {
                    let text = format!(
                        "{}\nspanning: true\nsteps: {}\nattempt: {}\nmax_codegree: {}\nlog^3 n: {log3:.3}",
                        s.walk, s.steps, s.attempt, s.max_codegree
                    );
                    out.emit(
                        &text,
                        json!({"spanning": true, "walk": s.walk, "steps": s.steps, "attempt": s.attempt,
                               "seed": s.seed, "max_codegree": s.max_codegree, "log3_n": log3}),
                    );
                    Ok(Status::Ok)
                }
                Err(SpanningError::NotFound { attempts }) => {
                    let lines: Vec<String> = attempts
                        .iter()
                        .map(|a| format!("seed {} length {} missing {}", a.seed, a.length, a.missing_tuples))
                        .collect();
                    out.emit(
                        &format!("spanning: false\n{}\nlog^3 n: {log3:.3}", lines.join("\n")),
                        json!({"spanning": false, "attempts": attempts, "log3_n": log3}),
                    );
                    Ok(Status::Inconclusive)
                }
                Err(e) => Err(usage(e)),
            }
        }
        Command::Check(CheckCommand::Divisibility { file, cycle_length }) => {
            let g = load_graph(&file)?;
            let len = cycle_length.unwrap_or(2 * g.k());
            let pattern = Hypergraph::tight_cycle(g.k(), len).map_err(usage)?;
            let violation = is_divisible(&g, &pattern).map_err(usage)?;
            let text = match &violation {
                None => "true".to_string(),
                Some(v) => format!(
                    "false\n{}-set {:?} has degree {}, not divisible by {}",
                    v.i, v.set, v.degree, v.divisor
                ),
            };
            out.emit(&text, json!({"divisible": violation.is_none(), "violation": violation}));
            Ok(if violation.is_none() { Status::Ok } else { Status::Failed })
        }
        Command::Check(CheckCommand::Typicality { file, c, h, p, mode }) => {
            let g = load_graph(&file)?;
            let p = p.unwrap_or_else(|| {
                let total = tight_euler::divisibility::binomial(g.n(), g.k());
                g.edge_count() as f64 / total.to_string().parse::<f64>().unwrap_or(f64::INFINITY)
            });
            let r = is_typical(&g, c, h, p, mode.mode(seed)).map_err(usage)?;
            let text = format!(
                "{}\np: {p}\nrelative_deviation: {:.6}\nwitness: {:?}\nfamilies_checked: {}\nexhaustive: {}",
                r.typical, r.relative_deviation, r.witness, r.families_checked, r.exhaustive
            );
            let typical = r.typical;
            out.emit(&text, json!({"p": p, "report": r}));
            Ok(if typical { Status::Ok } else { Status::Failed })
        }
        Command::Check(CheckCommand::Connectedness { file, mode }) => {
            let g = load_graph(&file)?;
            let r = connectedness(&g, mode.mode(seed)).map_err(usage)?;
            let text = format!(
                "{:.6}\nmin_count: {}\nwitness: {:?} {:?}\ntuples_checked: {}\nexhaustive: {}",
                r.alpha, r.min_count, r.witness.0, r.witness.1, r.tuples_checked, r.exhaustive
            );
            out.emit(&text, json!(r));
            Ok(Status::Ok)
        }
        Command::Check(CheckCommand::Ucycle { n, k }) => {
            if k == 0 || n < k {
                return Err(usage(format!("need n >= k >= 1, got n = {n}, k = {k}")));
            }
            let ok = ucycle_divisible(n, k);
            out.emit(&ok.to_string(), json!({"divisible": ok, "n": n, "k": k}));
            Ok(if ok { Status::Ok } else { Status::Failed })
        }
        Command::Verify(VerifyCommand::Tour { file, tour }) => {
            let g = load_graph(&file)?;
            let w = Walk::closed(g.k(), load_sequence(&tour)?);
            report_verdict(&out, verify_tour(&g, &w).map_err(|e| e.to_string()))
        }
        Command::Verify(VerifyCommand::Trail { file, walk, start, end }) => {
            let g = load_graph(&file)?;
            let w = Walk::open(g.k(), load_sequence(&walk)?);
            report_verdict(&out, verify_trail(&g, &w, &start, &end).map_err(|e| e.to_string()))
        }
        Command::Verify(VerifyCommand::Ucycle { n, k, seq }) => {
            if k == 0 || n < k {
                return Err(usage(format!("need n >= k >= 1, got n = {n}, k = {k}")));
            }
            let seq = load_sequence(&seq)?;
            report_verdict(&out, verify_ucycle(&seq, n, k).map_err(|e| e.to_string()))
        }
        Command::Oracle { file, cap, nodes } => {
            let g = load_graph(&file)?;
            match brute_force_euler_tour_with_limit(&g, cap, nodes) {
                Ok(Some(w)) => {
                    out.emit(&w.to_string(), json!({"exists": true, "tour": w}));
                    Ok(Status::Ok)
                }
                Ok(None) => {
                    out.emit("none", json!({"exists": false}));
                    Ok(Status::Failed)
                }
                Err(e) => {
                    eprintln!("{e}");
                    out.emit("inconclusive", json!({"exists": null, "error": e.to_string()}));
                    Ok(Status::Inconclusive)
                }
            }
        }
    }
}

fn report_verdict(out: &Output, verdict: Result<(), String>) -> Result<Status, Fatal> {
    match verdict {
        Ok(()) => {
            out.emit("valid", json!({"valid": true}));
            Ok(Status::Ok)
        }
        Err(defect) => {
            out.emit(&format!("invalid: {defect}"), json!({"valid": false, "defect": defect}));
            Ok(Status::Failed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { Status::Usage } else { Status::Ok };
            let _ = e.print();
            return ExitCode::from(status as u8);
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.status as u8)
        }
    }
}

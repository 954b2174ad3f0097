//! Command-line front end: generate graphs, color them, check colorings,
//! compute exact indices, replay traces and run benchmark corpora.

pub mod bench;
pub mod io;

use std::ffi::OsString;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use strongcolor::coloring::verify_strong;
use strongcolor::genlab::{generate, GenModel, GenSpec, NamedKind, Regime};
use strongcolor::oracle::{exact_strong_index, OracleLimits};
use strongcolor::params::{Params, Ratio};
use strongcolor::reducer::{read_trace, replay_trace, strong_color, write_trace};
use strongcolor::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;

/// Default worker count for `bench` when `--workers` is absent.
pub const WORKERS_ENV: &str = "STRONGCOLOR_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "strongcolor", version, about = "Strong edge-coloring of 2-degenerate graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    Gen(GenArgs),
    /// Color a graph and print a JSON report.
    Color(ColorArgs),
    /// Check a coloring file against a graph.
    Verify(VerifyArgs),
    /// Exact strong chromatic index of a small graph.
    Exact(ExactArgs),
    /// Re-execute a trace written by `color --trace`.
    Replay(ReplayArgs),
    /// Color a corpus of generated or stored graphs.
    Bench(bench::BenchArgs),
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long = "D")]
    d: u32,
    /// Decimal or fraction, e.g. 0.25 or 1/4.
    #[arg(long)]
    eps: Ratio,
}

impl ParamArgs {
    fn params(&self) -> anyhow::Result<Params> {
        Ok(Params::new(self.d, self.eps)?)
    }
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    model: GenModel,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    kind: Option<NamedKind>,
    #[arg(long = "D")]
    d: Option<u32>,
    #[arg(long)]
    eps: Option<Ratio>,
    #[arg(long)]
    regime: Option<Regime>,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ColorArgs {
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also write the coloring in `u v color` form.
    #[arg(long)]
    coloring: Option<PathBuf>,
    /// Leave runtimeMs null so reports are byte-identical across runs.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    #[arg(short = 'c', long = "coloring")]
    coloring: PathBuf,
}

#[derive(Debug, Args)]
struct ExactArgs {
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    #[arg(long, default_value_t = 16)]
    max_edges: usize,
    /// Seconds.
    #[arg(long)]
    time_budget: Option<f64>,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    #[arg(long)]
    trace: PathBuf,
}

/// Failure carrying the exit code it maps to.
#[derive(Debug)]
pub struct Exit {
    pub code: i32,
    pub error: anyhow::Error,
}

fn input_err(e: anyhow::Error) -> Exit {
    Exit {
        code: EXIT_INPUT,
        error: e,
    }
}

trait OrInput<T> {
    fn or_input(self) -> Result<T, Exit>;
}

impl<T, E: Into<anyhow::Error>> OrInput<T> for Result<T, E> {
    fn or_input(self) -> Result<T, Exit> {
        self.map_err(|e| input_err(e.into()))
    }
}

pub(crate) fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub(crate) fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_graph(path: &Path) -> Result<io::EdgeList, Exit> {
    let text = read_text(path).or_input()?;
    io::parse_edge_list(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .or_input()
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match cli.cmd {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Color(a) => cmd_color(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Exact(a) => cmd_exact(a, out),
        Command::Replay(a) => cmd_replay(a, out),
        Command::Bench(a) => bench::cmd_bench(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Exit { code, error }) => {
            let _ = writeln!(err, "error: {error:#}");
            code
        }
    }
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let params = match (a.d, a.eps) {
        (Some(d), Some(eps)) => Some(Params::new(d, eps).or_input()?),
        (None, None) => None,
        _ => return Err(input_err(anyhow!("--D and --eps go together"))),
    };
    let spec = GenSpec {
        model: a.model,
        n: a.n,
        m: a.m,
        seed: a.seed,
        kind: a.kind,
        regime: a.regime,
        params,
    };
    let g = generate(&spec).or_input()?;
    let text = io::write_edge_list(&g);
    match a.output {
        Some(path) => write_text(&path, &text).or_input()?,
        None => out.write_all(text.as_bytes()).or_input()?,
    }
    Ok(EXIT_OK)
}

fn cmd_color(a: ColorArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let el = load_graph(&a.input)?;
    let p = a.params.params().or_input()?;
    let start = Instant::now();
    let r = strong_color(&el.graph, &p).or_input()?;
    let elapsed = start.elapsed().as_millis() as u64;
    if let Some(path) = &a.trace {
        let mut buf = Vec::new();
        write_trace(&mut buf, &p, &r.trace).or_input()?;
        fs::write(path, buf)
            .with_context(|| format!("writing {}", path.display()))
            .or_input()?;
    }
    if let Some(path) = &a.coloring {
        write_text(path, &io::write_coloring(&r.coloring, &el)).or_input()?;
    }
    let runtime = (!a.no_timing).then_some(elapsed);
    let trace_path = a.trace.as_ref().map(|t| t.display().to_string());
    let report = Report::new(&el.graph, &p, &r, runtime, trace_path);
    let json = report.to_json();
    if let Some(path) = &a.report {
        write_text(path, &format!("{json}\n")).or_input()?;
    }
    writeln!(out, "{json}").or_input()?;
    Ok(if !report.valid || !report.budget_met {
        EXIT_VERIFY
    } else if report.diagnostics.is_some() {
        EXIT_CERTIFICATE
    } else {
        EXIT_OK
    })
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let el = load_graph(&a.input)?;
    let text = read_text(&a.coloring).or_input()?;
    let c = io::parse_coloring(&text, &el)
        .with_context(|| format!("parsing {}", a.coloring.display()))
        .or_input()?;
    let line = match verify_strong(&el.graph, &c) {
        Ok(Ok(())) => {
            writeln!(out, "ok: {} edges, {} colors", c.len(), c.distinct_colors()).or_input()?;
            return Ok(EXIT_OK);
        }
        Ok(Err(v)) => format!(
            "violation: {} {} and {} {} share color {} ({})",
            el.label(v.first.lo()),
            el.label(v.first.hi()),
            el.label(v.second.lo()),
            el.label(v.second.hi()),
            v.color,
            match v.witness {
                strongcolor::coloring::Witness::SharedEndpoint(x) =>
                    format!("common endpoint {}", el.label(x)),
                strongcolor::coloring::Witness::AdjacentEndpoints(x, y) =>
                    format!("{} is adjacent to {}", el.label(x), el.label(y)),
            }
        ),
        Err(e) => match e {
            strongcolor::coloring::ColoringError::Uncolored(e) => {
                format!("violation: edge {} {} has no color", el.label(e.lo()), el.label(e.hi()))
            }
            other => format!("violation: {other}"),
        },
    };
    writeln!(out, "{line}").or_input()?;
    Ok(EXIT_VERIFY)
}

fn cmd_exact(a: ExactArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let el = load_graph(&a.input)?;
    let time_budget = match a.time_budget {
        Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
        Some(s) => return Err(input_err(anyhow!("bad time budget {s}"))),
        None => None,
    };
    let limits = OracleLimits {
        max_edges: a.max_edges,
        time_budget,
    };
    let r = exact_strong_index(&el.graph, limits).or_input()?;
    writeln!(out, "{}", r.index).or_input()?;
    Ok(EXIT_OK)
}

fn cmd_replay(a: ReplayArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let el = load_graph(&a.input)?;
    let file = fs::File::open(&a.trace)
        .with_context(|| format!("opening {}", a.trace.display()))
        .or_input()?;
    let (header, steps) = read_trace(BufReader::new(file)).or_input()?;
    let p = header.params().or_input()?;
    if header.steps != steps.len() {
        return Err(input_err(anyhow!(
            "trace header announces {} steps, file has {}",
            header.steps,
            steps.len()
        )));
    }
    match replay_trace(&el.graph, &steps, &p) {
        Ok((summary, _)) => {
            let json = serde_json::to_string_pretty(&summary).or_input()?;
            writeln!(out, "ok\n{json}").or_input()?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(out, "replay failed at {e}").or_input()?;
            Ok(EXIT_VERIFY)
        }
    }
}

//! `bench`: color a corpus in parallel and aggregate the results.

use std::collections::BTreeMap;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use strongcolor::genlab::{corpus_size, gen_class_instance, Regime};
use strongcolor::graph::Graph;
use strongcolor::params::{Params, Ratio};
use strongcolor::reducer::{replay_run, strong_color, StepKind};

use crate::{io, read_text, write_text, Exit, OrInput, EXIT_CERTIFICATE, EXIT_INPUT, EXIT_OK, EXIT_VERIFY, WORKERS_ENV};

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of `.el` files to color; with `--seeds`, generated graphs are saved here.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long = "D-list", value_delimiter = ',', required = true)]
    d_list: Vec<u32>,
    #[arg(long)]
    eps: Ratio,
    /// Inclusive seed range `a..b`.
    #[arg(long, value_parser = parse_seeds)]
    seeds: Option<RangeInclusive<u64>>,
    #[arg(long, default_value = "case2")]
    regime: Regime,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    no_timing: bool,
}

pub fn parse_seeds(s: &str) -> Result<RangeInclusive<u64>, String> {
    let bad = || format!("expected a..b or a single seed, got {s:?}");
    match s.split_once("..") {
        Some((a, b)) => {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => {
            let a: u64 = s.trim().parse().map_err(|_| bad())?;
            Ok(a..=a)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InstanceResult {
    pub name: String,
    #[serde(rename = "D")]
    pub d: u32,
    pub n: usize,
    pub m: usize,
    pub colors_used: u32,
    #[serde(rename = "K")]
    pub k: u32,
    pub budget_met: bool,
    pub replay_ok: bool,
    pub case1_steps: usize,
    pub case2_steps: usize,
    pub certificates: BTreeMap<String, usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchReport {
    pub eps: String,
    pub instances: usize,
    pub errors: usize,
    pub budget_met: usize,
    pub replay_ok: usize,
    pub max_colors_by_d: BTreeMap<u32, u32>,
    pub case1_steps: usize,
    pub case2_steps: usize,
    pub certificates: BTreeMap<String, usize>,
    pub runtime_ms: Option<u64>,
    pub results: Vec<InstanceResult>,
}

enum Source {
    Generated(u64),
    File(PathBuf),
}

struct Job {
    name: String,
    p: Params,
    source: Source,
}

fn run_job(job: &Job, regime: Regime, save: Option<&Path>) -> InstanceResult {
    let mut res = InstanceResult {
        name: job.name.clone(),
        d: job.p.d(),
        n: 0,
        m: 0,
        colors_used: 0,
        k: job.p.palette(),
        budget_met: false,
        replay_ok: false,
        case1_steps: 0,
        case2_steps: 0,
        certificates: BTreeMap::new(),
        error: None,
    };
    let graph: anyhow::Result<Graph> = match &job.source {
        Source::Generated(seed) => {
            let n = corpus_size(*seed, job.p.d());
            gen_class_instance(&job.p, regime, n, *seed)
                .map_err(anyhow::Error::from)
                .and_then(|g| {
                    if let Some(dir) = save {
                        write_text(&dir.join(format!("{}.el", job.name)), &io::write_edge_list(&g))?;
                    }
                    Ok(g)
                })
        }
        Source::File(path) => read_text(path)
            .and_then(|t| io::parse_edge_list(&t).map_err(anyhow::Error::from))
            .map(|el| el.graph),
    };
    let g = match graph {
        Ok(g) => g,
        Err(e) => {
            res.error = Some(format!("{e:#}"));
            return res;
        }
    };
    res.n = g.vertex_count();
    res.m = g.edge_count();
    let r = match strong_color(&g, &job.p) {
        Ok(r) => r,
        Err(e) => {
            res.error = Some(e.to_string());
            return res;
        }
    };
    res.colors_used = r.colors_used;
    res.budget_met = r.budget_met;
    res.case1_steps = r.steps_of(StepKind::Case1);
    res.case2_steps = r.steps_of(StepKind::Case2);
    for c in &r.diagnostics {
        *res.certificates.entry(format!("{:?}", c.kind)).or_default() += 1;
    }
    match replay_run(&g, &r, &job.p) {
        Ok(_) => res.replay_ok = true,
        Err(e) => res.error = Some(format!("replay: {e}")),
    }
    res
}

fn worker_count(flag: Option<usize>) -> anyhow::Result<usize> {
    if let Some(w) = flag {
        return Ok(w);
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| anyhow!("{WORKERS_ENV}={v:?} is not a number")),
        // 0 lets rayon pick one worker per core.
        Err(_) => Ok(0),
    }
}

fn jobs(a: &BenchArgs) -> anyhow::Result<Vec<Job>> {
    let mut params = Vec::new();
    for &d in &a.d_list {
        params.push(Params::new(d, a.eps).with_context(|| format!("D = {d}"))?);
    }
    let mut out = Vec::new();
    if let Some(seeds) = &a.seeds {
        for p in &params {
            for seed in seeds.clone() {
                out.push(Job {
                    name: format!("D{}_s{seed}", p.d()),
                    p: p.clone(),
                    source: Source::Generated(seed),
                });
            }
        }
        return Ok(out);
    }
    let Some(dir) = &a.corpus else {
        bail!("give --seeds to generate a corpus or --corpus to read one");
    };
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "el"))
        .collect();
    files.sort();
    for p in &params {
        for f in &files {
            let stem = f.file_stem().unwrap_or_default().to_string_lossy();
            out.push(Job {
                name: format!("{stem}@D{}", p.d()),
                p: p.clone(),
                source: Source::File(f.clone()),
            });
        }
    }
    Ok(out)
}

pub fn bench(a: &BenchArgs) -> anyhow::Result<BenchReport> {
    let jobs = jobs(a)?;
    let save = match (&a.seeds, &a.corpus) {
        (Some(_), Some(dir)) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            Some(dir.as_path())
        }
        _ => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(a.workers)?)
        .build()?;
    let start = Instant::now();
    let results: Vec<InstanceResult> =
        pool.install(|| jobs.par_iter().map(|j| run_job(j, a.regime, save)).collect());
    let elapsed = start.elapsed().as_millis() as u64;

    let mut report = BenchReport {
        eps: a.eps.to_string(),
        instances: results.len(),
        errors: 0,
        budget_met: 0,
        replay_ok: 0,
        max_colors_by_d: BTreeMap::new(),
        case1_steps: 0,
        case2_steps: 0,
        certificates: BTreeMap::new(),
        runtime_ms: (!a.no_timing).then_some(elapsed),
        results: Vec::new(),
    };
    for r in &results {
        report.errors += usize::from(r.error.is_some());
        report.budget_met += usize::from(r.budget_met);
        report.replay_ok += usize::from(r.replay_ok);
        let best = report.max_colors_by_d.entry(r.d).or_default();
        *best = (*best).max(r.colors_used);
        report.case1_steps += r.case1_steps;
        report.case2_steps += r.case2_steps;
        for (k, n) in &r.certificates {
            *report.certificates.entry(k.clone()).or_default() += n;
        }
    }
    report.results = results;
    Ok(report)
}

pub(crate) fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let report = bench(&a).or_input()?;
    let json = serde_json::to_string_pretty(&report).or_input()?;
    if let Some(path) = &a.report {
        write_text(path, &format!("{json}\n")).or_input()?;
    }
    writeln!(
        out,
        "{} instances, {} errors, budget met {}, replay ok {}, max colors by D {:?}, certificates {:?}",
        report.instances,
        report.errors,
        report.budget_met,
        report.replay_ok,
        report.max_colors_by_d,
        report.certificates
    )
    .or_input()?;
    let clean = report.instances - report.errors;
    Ok(if report.errors > 0 && report.results.iter().any(|r| r.n == 0 && r.error.is_some()) {
        EXIT_INPUT
    } else if report.errors > 0 || report.budget_met < clean || report.replay_ok < clean {
        EXIT_VERIFY
    } else if !report.certificates.is_empty() {
        EXIT_CERTIFICATE
    } else {
        EXIT_OK
    })
}

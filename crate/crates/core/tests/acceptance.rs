//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_index, brute_valid, from_candidates, graph};
use strongcolor::class::class_check;
use strongcolor::coloring::{greedy_bound, greedy_color_default, verify_strong};
use strongcolor::digest::Fnv64;
use strongcolor::genlab::{corpus_size, gen_class_instance, gen_random_2deg, Regime};
use strongcolor::oracle::{conflict_clique_lower_bound, exact_strong_index, OracleLimits};
use strongcolor::reducer::{replay_run, strong_color, write_trace, CertificateKind, ReplaySummary, RunResult};
use strongcolor::report::Report;
use strongcolor::{Coloring, Graph, Params, Ratio};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn params(d: u32, num: u32, den: u32) -> Params {
    Params::new(d, Ratio::new(num, den).unwrap()).unwrap()
}

struct Run {
    label: String,
    g: Graph,
    p: Params,
    r: RunResult,
}

fn corpus_run(p: &Params, regime: Regime, seed: u64) -> Result<Run, String> {
    let n = corpus_size(seed, p.d());
    let label = format!("D={} eps={} {regime:?} seed={seed}", p.d(), p.eps());
    let g = gen_class_instance(p, regime, n, seed).map_err(|e| format!("{label}: {e}"))?;
    let r = strong_color(&g, p).map_err(|e| format!("{label}: {e}"))?;
    Ok(Run {
        label,
        g,
        p: p.clone(),
        r,
    })
}

fn criterion1() -> Outcome {
    let cycle = |n: u32| graph(&(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>());
    let star = |n: u32| graph(&(1..=n).map(|i| (0, i)).collect::<Vec<_>>());
    let mut cases: Vec<(String, Graph, usize, bool)> = vec![
        ("P4".into(), graph(&[(0, 1), (1, 2), (2, 3)]), 3, false),
        ("C5".into(), cycle(5), 5, false),
        ("K23".into(), graph(&[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]), 6, false),
        ("C6".into(), cycle(6), 3, true),
        ("C7".into(), cycle(7), 4, true),
    ];
    for n in 1..=8 {
        cases.push((format!("K1,{n}"), star(n), n as usize, false));
    }
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for (name, g, want, enumerate) in &cases {
        let start = Instant::now();
        let got = exact_strong_index(g, OracleLimits::default());
        let took = start.elapsed();
        slowest = slowest.max(took);
        match got {
            Ok(r) if r.index == *want && brute_valid(g, &r.witness) && took < Duration::from_secs(1) => {}
            Ok(r) => bad.push(format!("{name}: got {} in {took:?}", r.index)),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
        if *enumerate && brute_index(g) != *want {
            bad.push(format!("{name}: enumeration disagrees"));
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} fixtures, slowest {slowest:?}{}", cases.len(), failures(&bad)),
    )
}

fn failures(bad: &[String]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        format!("; failures: {}", bad.iter().take(5).cloned().collect::<Vec<_>>().join(", "))
    }
}

fn criterion2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_000);
    let (mut agree, mut valid) = (0, 0);
    let mut bad = Vec::new();
    for i in 0..10_000 {
        let n: u32 = rng.gen_range(2..=12);
        let m: usize = rng.gen_range(0..=20);
        let cands: Vec<(u32, u32)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        let g = from_candidates(n, &cands);
        let k: u32 = rng.gen_range(1..=g.edge_count().max(1) as u32 + 2);
        let c: Coloring = g.edges().map(|e| (e, rng.gen_range(1..=k))).collect();
        let ours = matches!(verify_strong(&g, &c), Ok(Ok(())));
        let truth = brute_valid(&g, &c);
        valid += usize::from(truth);
        if ours == truth {
            agree += 1;
        } else {
            bad.push(format!("pair {i}"));
        }
    }
    outcome(
        agree == 10_000,
        format!("{agree}/10000 agree ({valid} valid colorings){}", failures(&bad)),
    )
}

fn criterion3(runs: &mut Vec<Run>) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut worst: BTreeMap<u32, u32> = BTreeMap::new();
    for d in [4, 9, 16] {
        let p = params(d, 1, 2);
        for seed in 1..=500 {
            match corpus_run(&p, Regime::Case2Rich, seed) {
                Ok(run) => runs.push(run),
                Err(e) => bad.push(e),
            }
        }
    }
    let took = start.elapsed();
    let mut ok = 0;
    for run in runs.iter() {
        let valid = matches!(verify_strong(&run.g, &run.r.coloring), Ok(Ok(())));
        let within = run.r.colors_used <= 5 * run.p.d() + 1 && run.r.budget_met;
        let w = worst.entry(run.p.d()).or_default();
        *w = (*w).max(run.r.colors_used);
        if valid && within {
            ok += 1;
        } else {
            bad.push(format!("{}: {} colors, valid {valid}", run.label, run.r.colors_used));
        }
    }
    let fast = took < Duration::from_secs(60);
    outcome(
        bad.is_empty() && ok == 1500 && fast,
        format!(
            "{ok}/1500 valid within 5D+1, max colors by D {worst:?}, runtime {:.1}s{}",
            took.as_secs_f64(),
            failures(&bad)
        ),
    )
}

fn criterion4(runs: &mut Vec<Run>) -> (Outcome, Vec<ReplaySummary>) {
    let mut bad = Vec::new();
    let mut summaries = Vec::new();
    let (mut case1, mut case2, mut ok, mut total) = (0, 0, 0, 0);
    let mut worst: BTreeMap<u32, (u32, u32)> = BTreeMap::new();
    for d in [16, 25, 36] {
        let p = params(d, 1, 4);
        for regime in [Regime::Case1Rich, Regime::Case2Rich] {
            for seed in 1..=200 {
                total += 1;
                let run = match corpus_run(&p, regime, seed) {
                    Ok(run) => run,
                    Err(e) => {
                        bad.push(e);
                        continue;
                    }
                };
                match replay_run(&run.g, &run.r, &run.p) {
                    Ok(s) => {
                        case1 += s.case1;
                        case2 += s.case2;
                        summaries.push(s);
                    }
                    Err(e) => bad.push(format!("{}: replay {e}", run.label)),
                }
                let valid = matches!(verify_strong(&run.g, &run.r.coloring), Ok(Ok(())));
                if valid && run.r.budget_met && run.r.colors_used <= p.palette() {
                    ok += 1;
                } else {
                    bad.push(format!("{}: {} colors of {}", run.label, run.r.colors_used, p.palette()));
                }
                let w = worst.entry(d).or_insert((0, p.palette()));
                w.0 = w.0.max(run.r.colors_used);
                runs.push(run);
            }
        }
    }
    let pass = bad.is_empty() && ok == total && case1 >= 50 && case2 >= 50;
    (
        outcome(
            pass,
            format!(
                "{ok}/{total} within budget, (max colors, K) by D {worst:?}, replayed Case1 steps {case1}, Case2 steps {case2}{}",
                failures(&bad)
            ),
        ),
        summaries,
    )
}

/// Small graphs for the sandwich check: every criterion 3/4 graph with at
/// most 14 edges, plus random 2-degenerate graphs in the class for
/// D = 4, eps = 1/2.
fn small_corpus(runs: &[Run]) -> Vec<(String, Graph, Params)> {
    let mut out: Vec<(String, Graph, Params)> = runs
        .iter()
        .filter(|r| r.g.edge_count() <= 14)
        .map(|r| (r.label.clone(), r.g.clone(), r.p.clone()))
        .collect();
    let p = params(4, 1, 2);
    for seed in 1..=2000u64 {
        let n = 4 + (seed % 7) as usize;
        let m = (6 + (seed % 9) as usize).min(2 * n - 3);
        let g = gen_random_2deg(n, m, seed).expect("m within range");
        if class_check(&g, &p).in_class {
            out.push((format!("random n={n} m={m} seed={seed}"), g, p.clone()));
        }
    }
    out
}

fn criterion5(runs: &[Run]) -> Outcome {
    let corpus = small_corpus(runs);
    let links = [
        "clique <= exact",
        "exact <= colorsUsed",
        "colorsUsed <= greedy",
        "greedy <= 2D(D-1)+1",
    ];
    let mut violations = [0usize; 4];
    let mut examples: Vec<String> = Vec::new();
    for (label, g, p) in &corpus {
        let lb = conflict_clique_lower_bound(g);
        let exact = exact_strong_index(g, OracleLimits::default()).expect("at most 14 edges").index;
        let ours = strong_color(g, p).expect("in class").colors_used as usize;
        let greedy = greedy_color_default(g).max_color() as usize;
        let cap = greedy_bound(g.max_degree());
        let holds = [lb <= exact, exact <= ours, ours <= greedy, greedy <= cap];
        for (i, &h) in holds.iter().enumerate() {
            if !h {
                violations[i] += 1;
                if examples.len() < 3 {
                    examples.push(format!(
                        "{label}: clique {lb}, exact {exact}, ours {ours}, greedy {greedy}, cap {cap}"
                    ));
                }
            }
        }
    }
    let per_link: Vec<String> = links
        .iter()
        .zip(violations)
        .map(|(l, v)| format!("{l}: {v}"))
        .collect();
    let total: usize = violations.iter().sum();
    outcome(
        total == 0,
        format!(
            "{} graphs, violations [{}]{}",
            corpus.len(),
            per_link.join(", "),
            if examples.is_empty() { String::new() } else { format!("; e.g. {}", examples.join(" | ")) }
        ),
    )
}

fn criterion6(runs: &[Run], c4: &[ReplaySummary]) -> (Outcome, usize, usize) {
    let mut bad = Vec::new();
    let mut summaries: Vec<ReplaySummary> = c4.to_vec();
    for run in runs.iter().take(1500) {
        match replay_run(&run.g, &run.r, &run.p) {
            Ok(s) => summaries.push(s),
            Err(e) => bad.push(format!("{}: {e}", run.label)),
        }
    }
    let replayed = summaries.len();
    let class_certs: usize = runs.iter().map(|r| r.r.certificates_of(CertificateKind::ClassClosure)).sum();
    let flat_certs: usize = runs
        .iter()
        .map(|r| r.r.certificates_of(CertificateKind::MeasureNotDecreasing))
        .sum();
    let class_steps: usize = summaries.iter().map(|s| s.class_violations).sum();
    let flat_steps: usize = summaries.iter().map(|s| s.flat_measure).sum();
    let mut by_kind: BTreeMap<String, usize> = BTreeMap::new();
    for run in runs {
        for c in &run.r.diagnostics {
            *by_kind.entry(format!("{:?}", c.kind)).or_default() += 1;
        }
    }
    let mut by_regime: BTreeMap<String, usize> = BTreeMap::new();
    for run in runs {
        let n = run.r.certificates_of(CertificateKind::ClassClosure);
        if n > 0 {
            *by_regime
                .entry(format!("D={} eps={}", run.p.d(), run.p.eps()))
                .or_default() += n;
        }
    }
    // Replay enforces that every out-of-class step carries its certificate,
    // so the two counts have to agree. A nonzero class-closure count is
    // reported, not hidden; the measure must drop at every step.
    let audited = class_steps == class_certs && flat_steps == flat_certs;
    let valid = runs
        .iter()
        .all(|r| matches!(verify_strong(&r.g, &r.r.coloring), Ok(Ok(()))));
    let pass = bad.is_empty() && replayed == runs.len() && audited && flat_steps == 0 && valid;
    (
        outcome(
            pass,
            format!(
                "replayed {replayed}/{} runs; non-decreasing steps {flat_steps}; class-closure certificates {class_certs} (steps {class_steps}) {by_regime:?}; all certificates {by_kind:?}{}",
                runs.len(),
                failures(&bad)
            ),
        ),
        class_certs,
        flat_certs,
    )
}

fn criterion7(runs: &[Run]) -> Outcome {
    let mut checks = 0;
    let mut violations = Vec::new();
    for run in runs {
        for step in &run.r.trace {
            for x in &step.n2_bound {
                checks += 1;
                if !x.holds {
                    violations.push(format!("{} step {}: {} > {}", run.label, step.index, x.n2, x.bound));
                }
            }
        }
    }
    outcome(
        violations.is_empty() && checks > 0,
        format!("{checks} Case 2 assignments checked, {} violations{}", violations.len(), failures(&violations)),
    )
}

fn digest(bytes: &[u8]) -> (usize, u64) {
    let mut h = Fnv64::new();
    h.write(bytes);
    (bytes.len(), h.finish())
}

fn artifacts(run: &Run) -> (Vec<u8>, Vec<u8>) {
    let mut trace = Vec::new();
    write_trace(&mut trace, &run.p, &run.r.trace).unwrap();
    let report = Report::new(&run.g, &run.p, &run.r, None, None).to_json().into_bytes();
    (trace, report)
}

fn criterion8(runs: &[Run]) -> Outcome {
    let first: Vec<((usize, u64), (usize, u64))> = runs
        .iter()
        .take(1500)
        .map(|r| {
            let (t, rep) = artifacts(r);
            (digest(&t), digest(&rep))
        })
        .collect();
    let mut again = Vec::new();
    let mut i = 0;
    let mut bad = Vec::new();
    for d in [4, 9, 16] {
        let p = params(d, 1, 2);
        for seed in 1..=500 {
            match corpus_run(&p, Regime::Case2Rich, seed) {
                Ok(run) => {
                    let (t, rep) = artifacts(&run);
                    // Full byte comparison on a sample, digests on the rest.
                    if seed <= 20 {
                        let (t0, rep0) = artifacts(&runs[i]);
                        if t0 != t || rep0 != rep {
                            bad.push(run.label.clone());
                        }
                    }
                    again.push((digest(&t), digest(&rep)));
                }
                Err(e) => bad.push(e),
            }
            i += 1;
        }
    }
    let differing = first.iter().zip(&again).filter(|(a, b)| a != b).count();
    outcome(
        bad.is_empty() && differing == 0 && again.len() == first.len(),
        format!(
            "{} reruns, {differing} differing trace/report digests, {} byte-compared{}",
            again.len(),
            60,
            failures(&bad)
        ),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut report = |n: usize, name: &'static str, o: Outcome| {
        println!("criterion {n} [{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, name, o));
    };
    report(1, "exact oracle fixtures", criterion1());
    report(2, "checker soundness", criterion2());
    let mut runs = Vec::new();
    report(3, "budget at eps = 1/2", criterion3(&mut runs));
    let (o4, summaries) = criterion4(&mut runs);
    report(4, "budget at eps = 1/4", o4);
    report(5, "sandwich", criterion5(&runs));
    let (o6, class_certs, flat_certs) = criterion6(&runs, &summaries);
    report(6, "induction audit", o6);
    report(7, "Case 2 neighborhood bound", criterion7(&runs));
    report(8, "determinism", criterion8(&runs));
    if class_certs > 0 || flat_certs > 0 {
        println!(
            "note: {class_certs} class-closure and {flat_certs} non-decreasing-measure certificates; every affected run still verified"
        );
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {}/{} criteria passed{}",
        results.len() - failed.len(),
        results.len(),
        if failed.is_empty() { String::new() } else { format!("; failed {failed:?}") }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! One line per acceptance criterion. Runs every check through the library
//! entry point of the `ssx` binary and exits nonzero if any line fails.

use std::time::{Duration, Instant};

use clap::Parser;
use ssx_cli::report::Report;
use ssx_cli::{run, Cli, Format};

fn report(args: &[&str]) -> Result<Report, String> {
    let cli = Cli::try_parse_from(std::iter::once("ssx").chain(args.iter().copied())).map_err(|e| e.to_string())?;
    run(&cli).map_err(|e| format!("{} failed: {e}", args.join(" ")))
}

/// Runs each argument list and collects the failed claims along with the reports.
fn run_all(runs: &[Vec<&str>]) -> Result<(Vec<String>, Vec<Report>), String> {
    let mut failed = Vec::new();
    let mut reports = Vec::new();
    for args in runs {
        let r = report(args)?;
        for c in r.claims.iter().filter(|c| !c.passed) {
            failed.push(format!("{} [{}]: {}", c.id, args.join(" "), c.detail));
        }
        reports.push(r);
    }
    Ok((failed, reports))
}

fn failures(runs: &[Vec<&str>]) -> Result<Vec<String>, String> {
    Ok(run_all(runs)?.0)
}

fn quadric_runs<'a>(sub: &'a str, extra: &[&'a str], dims: &[(&'a str, &'a str)]) -> Vec<Vec<&'a str>> {
    dims.iter()
        .map(|(p, q)| {
            let mut v = vec![sub, "--p", p, "--q", q];
            v.extend_from_slice(extra);
            v
        })
        .collect()
}

fn criterion_f_chain() -> Result<Vec<String>, String> {
    failures(&quadric_runs("f-table", &["--translates", "20"], &[("3", "3"), ("4", "3"), ("3", "4")]))
}

fn criterion_levi() -> Result<Vec<String>, String> {
    failures(&quadric_runs("levi-table", &["--translates", "10"], &[("3", "3"), ("4", "3"), ("3", "4")]))
}

fn criterion_regularity() -> Result<Vec<String>, String> {
    let common = ["--samples", "1000", "--nilpotent-samples", "200", "--jordan-samples", "200"];
    let mut runs = Vec::new();
    for model in [&["--p", "3", "--q", "2"][..], &["--p", "2", "--q", "2"], &["--p", "2", "--q", "2", "--tau", "-1,1,-1,1"]] {
        let mut v = vec!["regularity"];
        v.extend_from_slice(model);
        v.extend_from_slice(&common);
        runs.push(v);
    }
    failures(&runs)
}

fn criterion_injectivity() -> Result<Vec<String>, String> {
    let mut runs = Vec::new();
    for (p, q) in [("3", "2"), ("2", "2"), ("3", "1"), ("4", "3")] {
        runs.push(vec!["injectivity", "--p", p, "--q", q, "--domain", "omega", "--samples", "10000"]);
    }
    runs.push(vec!["injectivity", "--p", "2", "--q", "2", "--tau", "-1,1,-1,1", "--domain", "omega-prime", "--samples", "10000"]);
    runs.push(vec!["injectivity", "--p", "3", "--q", "1", "--tau", "1,1,-1,-1", "--domain", "omega-prime", "--samples", "10000"]);
    let (mut failed, reports) = run_all(&runs)?;
    // Every run must contain at least 100 constructed equivalent pairs.
    for (args, r) in runs.iter().zip(&reports) {
        let n = r.data["constructed_equivalent"].as_u64().unwrap_or(0);
        if n < 100 {
            failed.push(format!("only {n} constructed equivalent pairs [{}]", args.join(" ")));
        }
    }
    Ok(failed)
}

fn criterion_witness() -> Result<Vec<String>, String> {
    let mut failed = failures(&[vec!["collision-witness"]])?;
    match report(&["collision-witness", "--p", "2", "--q", "2", "--tau", "-1,1,-1,1"]) {
        Err(_) => {}
        Ok(_) => failed.push("so(2,2) with τ = (−1,1,−1,1) unexpectedly produced a witness".into()),
    }
    Ok(failed)
}

fn criterion_lattices() -> Result<Vec<String>, String> {
    let mut runs = Vec::new();
    let ns = ["1", "2", "3", "4", "5"];
    for n in ns {
        runs.push(vec!["lattice-verify", "--type", "a", "--n", n]);
        if n != "1" {
            runs.push(vec!["lattice-verify", "--type", "b", "--n", n]);
        }
    }
    for n in ["3", "4", "5"] {
        runs.push(vec!["lattice-verify", "--type", "d", "--n", n]);
    }
    for (p, q) in [("3", "2"), ("4", "2"), ("3", "3"), ("4", "4")] {
        runs.push(vec!["lattice-verify", "--type", "a", "--n", "2", "--model-p", p, "--model-q", q]);
    }
    failures(&runs)
}

fn criterion_kahler() -> Result<Vec<String>, String> {
    let dims = [("3", "3"), ("4", "3")];
    let mut runs = quadric_runs("kahler-signature", &["--points", "20"], &dims);
    runs.extend(quadric_runs("ma-residual", &["--points", "20"], &dims));
    failures(&runs)
}

const DETERMINISM_RUNS: &[&[&str]] = &[
    &["omega-check", "--samples", "100"],
    &["regularity", "--samples", "100", "--nilpotent-samples", "20", "--jordan-samples", "20"],
    &["orbit-classify", "--translates", "10"],
    &["f-table", "--translates", "5"],
    &["levi-table", "--translates", "3"],
    &["kahler-signature", "--points", "5"],
    &["ma-residual", "--points", "5"],
    &["injectivity", "--domain", "omega", "--samples", "400"],
    &["injectivity", "--p", "3", "--q", "1", "--tau", "1,1,-1,-1", "--domain", "omega-prime", "--samples", "200", "--inject-witness"],
    &["lattice-verify", "--type", "e", "--n", "6"],
    &["rank1-catalog"],
    &["collision-witness"],
];

/// Same seed, different thread counts and output formats: the rendered bytes must match.
fn criterion_determinism() -> Result<Vec<String>, String> {
    let mut failed = Vec::new();
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    for args in DETERMINISM_RUNS {
        for format in [Format::Json, Format::Csv] {
            let render = |threads| -> Result<String, String> {
                pool(threads).install(|| {
                    let r = report(args)?;
                    ssx_cli::render(&r, format).map_err(|e| e.to_string())
                })
            };
            if render(1)? != render(4)? {
                failed.push(format!("{format:?} output differs [{}]", args.join(" ")));
            }
        }
    }
    Ok(failed)
}

type Check = fn() -> Result<Vec<String>, String>;

fn main() {
    let criteria: [(&str, Check, u64); 8] = [
        ("f-chain closed forms and ordering", criterion_f_chain, 10),
        ("levi signature table", criterion_levi, 30),
        ("regularity route agreement", criterion_regularity, 60),
        ("injectivity on Ω and Ω′", criterion_injectivity, 120),
        ("non-injectivity witness", criterion_witness, 5),
        ("lattice lemmas", criterion_lattices, 10),
        ("pseudo-Kähler signature and Monge–Ampère", criterion_kahler, 60),
        ("deterministic reports", criterion_determinism, 120),
    ];
    let mut all_ok = true;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (ok, notes) = match outcome {
            Ok(f) => (f.is_empty(), f),
            Err(e) => (false, vec![e]),
        };
        let in_time = elapsed <= Duration::from_secs(*limit);
        let pass = ok && in_time;
        all_ok &= pass;
        println!(
            "{} criterion {}: {name} ({:.2}s, limit {limit}s{})",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over time" },
        );
        for n in notes {
            println!("    {n}");
        }
    }
    if !all_ok {
        std::process::exit(1);
    }
}

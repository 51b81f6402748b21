//! Runs every acceptance criterion from the shipped configurations and
//! prints one line per criterion. Exits nonzero if any criterion fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use curvelab_cli::{parse_config, run_to_dir, Experiment};

fn config_text(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(format!("{name}.conf"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let first = tempfile::tempdir().expect("temp dir");
    let second = tempfile::tempdir().expect("temp dir");
    let mut all_pass = true;
    let mut identical = Vec::new();
    for exp in Experiment::ALL {
        let start = Instant::now();
        let mut cfg = parse_config(&config_text(exp.name())).expect("shipped config parses");
        cfg.out = Some(first.path().to_path_buf());
        let (report, out1) = match run_to_dir(&cfg) {
            Ok(r) => r,
            Err(e) => {
                println!("{} FAIL: {} errored: {e}", exp.criterion(), exp.name());
                all_pass = false;
                continue;
            }
        };
        let pass = report.passed() && !report.verdicts.is_empty();
        let details: Vec<String> = report.verdicts.iter().map(|v| v.detail.clone()).collect();
        println!(
            "{} {}: {} [{:.1} s]",
            exp.criterion(),
            if pass { "PASS" } else { "FAIL" },
            details.join(" | "),
            start.elapsed().as_secs_f64()
        );
        all_pass &= pass;

        cfg.out = Some(second.path().to_path_buf());
        let same = match run_to_dir(&cfg) {
            Ok((_, out2)) => std::fs::read(&out1.csv).ok() == std::fs::read(&out2.csv).ok(),
            Err(_) => false,
        };
        identical.push((exp.name(), same));
    }
    let differing: Vec<&str> = identical.iter().filter(|x| !x.1).map(|x| x.0).collect();
    let a10 = differing.is_empty();
    println!(
        "A10 {}: same-seed reruns give byte-identical CSV for {}/{} experiments{}",
        if a10 { "PASS" } else { "FAIL" },
        identical.len() - differing.len(),
        identical.len(),
        if a10 { String::new() } else { format!(" (differ: {})", differing.join(", ")) }
    );
    all_pass &= a10;
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

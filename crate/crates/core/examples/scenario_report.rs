//! Scenario file in, JSON report and per-path CSV out, the same flow as the
//! `ftd` binary.
//!
//! cargo run --example scenario_report -- [output directory]

use std::path::PathBuf;

use ftd_basket::cli::{parse_scenario, render_summary, run_scenario, write_paths_dump, RunReport};

const SCENARIO: &str = include_str!("../scenarios/paper_scenario.toml");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map_or_else(std::env::temp_dir, PathBuf::from);
    let mut scenario = parse_scenario(SCENARIO)?;
    scenario.config.n_paths = 50_000;

    let run = run_scenario(&scenario, &[5_000, 50_000]).map_err(|e| e.to_string())?;
    print!("{}", render_summary(&run));

    let report = dir.join("ftd_report.json");
    let dump = dir.join("ftd_paths.csv");
    std::fs::write(&report, run.to_json())?;
    write_paths_dump(&scenario, &dump).map_err(|e| e.to_string())?;
    let reread = RunReport::from_json(&std::fs::read_to_string(&report)?)?;
    assert_eq!(reread.report, run.report);
    println!("wrote {} and {}", report.display(), dump.display());
    Ok(())
}

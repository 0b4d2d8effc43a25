//! The five-name reference basket: both estimators at the reference sample
//! size and at one million paths, compared with the published 0.272.
//!
//! cargo run --release --example replicate_reference

use ftd_basket::cli::{compare_to_reference, parse_scenario};
use ftd_basket::engine::{run_simulation, SimulationConfig};

const SCENARIO: &str = include_str!("../scenarios/paper_scenario.toml");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = parse_scenario(SCENARIO)?;
    let reference = s.reference.clone().ok_or("scenario has no reference value")?;
    for n_paths in [10_000, 1_000_000] {
        let config = SimulationConfig::new(n_paths, s.config.master_seed);
        let run = run_simulation(&s.basket, &s.correlation, &s.curve, &config)?;
        let r = &run.report;
        println!("N = {n_paths} ({:.2} s)", run.wall_time);
        println!("  mean of ratios  {:.5} (se {:.5})", r.spread_paper, r.se_paper);
        println!(
            "  ratio of means  {:.5} (se {})",
            r.spread_standard,
            r.se_standard.map_or("n/a".into(), |v| format!("{v:.5}"))
        );
        println!("  {}", compare_to_reference(r, &reference).explanation);
    }
    Ok(())
}

//! Convergence of both estimators as the path count grows.
//!
//! cargo run --release --example convergence

use ftd_basket::engine::{run_with_checkpoints, SimulationConfig};
use ftd_basket::numerics::CorrelationMatrix;
use ftd_basket::pricing::{default_schedule, BasketSpec, DiscountCurve};
use ftd_basket::survival::CreditName;

fn main() -> ftd_basket::Result<()> {
    let names = (1..=5).map(|i| CreditName::new(format!("N{i}"), 0.2, 0.2)).collect::<Result<_, _>>()?;
    let basket = BasketSpec::new(names, 5.0, default_schedule(5.0, 0.5)?)?;
    let sigma = CorrelationMatrix::uniform(5, 0.1)?;
    let curve = DiscountCurve::flat(0.05)?;

    let checkpoints = [1_000, 10_000, 100_000, 1_000_000];
    let config = SimulationConfig::new(1_000_000, 1200);
    let (run, rows) = run_with_checkpoints(&basket, &sigma, &curve, &config, &checkpoints)?;
    println!("{:>9} {:>9} {:>9} {:>9} {:>9}", "N", "paper", "se", "standard", "se");
    for row in rows {
        println!(
            "{:>9} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            row.n_paths,
            row.spread_paper,
            row.se_paper,
            row.spread_standard,
            row.se_standard.unwrap_or(f64::NAN)
        );
    }
    println!("{:.0} paths per second", run.paths_per_second);
    Ok(())
}

//! Joint default probabilities from asset-value thresholds and from the
//! Gaussian copula, and correlations implied by a factor model.
//!
//! cargo run --example creditmetrics_equivalence

use ftd_basket::creditmetrics::{
    horizon_default_prob, implied_asset_correlation, threshold_from_prob, verify_copula_equivalence, FactorModel,
};

fn main() -> ftd_basket::Result<()> {
    let q = horizon_default_prob(0.2)?;
    let z = threshold_from_prob(q)?;
    println!("one-year default probability {q:.7}, asset threshold {:.7}", z.z);

    println!("\n{:>6} {:>6} {:>5} {:>14} {:>14} {:>9}", "qa", "qb", "rho", "threshold", "copula", "gap");
    for (qa, qb, rho) in [(q, q, 0.1), (0.5, 0.5, 0.0), (0.01, 0.99, -0.5), (0.05, 0.9, 0.9)] {
        let r = verify_copula_equivalence(qa, qb, rho)?;
        println!(
            "{qa:>6.4} {qb:>6.4} {rho:>5.1} {:>14.10} {:>14.10} {:>9.1e}",
            r.threshold_route, r.copula_route, r.gap
        );
    }

    // loading sqrt(0.1) on one unit factor: pairwise asset correlation 0.1
    let model = FactorModel::one_factor(5, 0.1f64.sqrt(), 0.9f64.sqrt())?;
    let corr = implied_asset_correlation(&model)?;
    println!("\nimplied correlation of the one-factor model:");
    for row in corr.matrix().rows() {
        println!("  {}", row.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join(" "));
    }
    Ok(())
}

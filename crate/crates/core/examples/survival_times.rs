//! Constant-hazard survival curves and inverse-transform default times.
//!
//! cargo run --example survival_times

use ftd_basket::engine::substream_normals;
use ftd_basket::numerics::std_normal_cdf;
use ftd_basket::survival::{default_cdf, invert_default_time, survival_prob, CreditName};

fn main() -> ftd_basket::Result<()> {
    let name = CreditName::new("A", 0.2, 0.4)?;
    println!("name {} with hazard {} and recovery {}", name.id, name.hazard_rate, name.recovery);
    println!("{:>4} {:>10} {:>10}", "t", "S(t)", "F(t)");
    for t in [0.5, 1.0, 2.0, 5.0, 10.0] {
        println!("{t:>4} {:>10.6} {:>10.6}", survival_prob(name.hazard_rate, t)?, default_cdf(name.hazard_rate, t)?);
    }

    // median default time is ln 2 / h
    println!("\nF^-1(0.5) = {:.7}", invert_default_time(0.5, name.hazard_rate)?);

    let n = 100_000u64;
    let mean = (0..n)
        .map(|i| {
            let u = std_normal_cdf(substream_normals(7, i, 1)[0]);
            invert_default_time(u, name.hazard_rate).expect("u < 1")
        })
        .sum::<f64>()
        / n as f64;
    println!("mean of {n} simulated default times: {mean:.4} (1/h = {})", 1.0 / name.hazard_rate);
    Ok(())
}

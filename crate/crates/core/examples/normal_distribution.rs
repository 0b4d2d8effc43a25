//! Univariate and bivariate normal distribution functions and Cholesky.
//!
//! cargo run --example normal_distribution

use ftd_basket::numerics::{bivariate_normal_cdf, std_normal_cdf, std_normal_inv, CorrelationMatrix};

fn main() -> ftd_basket::Result<()> {
    for u in [1e-12, 0.025, 0.5, 0.975, 1.0 - 1e-12] {
        let x = std_normal_inv(u)?;
        println!("Phi^-1({u:e}) = {x:+.10}   Phi(x) - u = {:+.1e}", std_normal_cdf(x) - u);
    }

    println!();
    for rho in [-0.9, -0.5, 0.0, 0.1, 0.5, 0.9] {
        let p = bivariate_normal_cdf(0.0, 0.0, rho)?;
        let arcsine = 0.25 + rho.asin() / (2.0 * std::f64::consts::PI);
        println!("Phi2(0, 0, {rho:+.1}) = {p:.12}  (arcsine form {arcsine:.12})");
    }

    let sigma = CorrelationMatrix::uniform(4, 0.3)?;
    let l = sigma.cholesky();
    println!("\nCholesky factor of the uniform 0.3 matrix:");
    for row in l.matrix().rows() {
        println!("  {}", row.iter().map(|v| format!("{v:8.5}")).collect::<Vec<_>>().join(" "));
    }
    println!("max |L L^T - Sigma| = {:e}", l.reconstruct().max_abs_diff(sigma.matrix()));
    Ok(())
}

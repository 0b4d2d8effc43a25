//! Correlated default times from the Gaussian copula.
//!
//! cargo run --example copula_sampling

use ftd_basket::copula::{gaussian_copula_2d, latent_to_default_times, sample_latent};
use ftd_basket::engine::substream_normals;
use ftd_basket::numerics::CorrelationMatrix;
use ftd_basket::survival::{default_cdf, CreditName};

fn main() -> ftd_basket::Result<()> {
    let names: Vec<CreditName> = [0.1, 0.2, 0.3]
        .iter()
        .enumerate()
        .map(|(i, &h)| CreditName::new(format!("N{}", i + 1), h, 0.4))
        .collect::<Result<_, _>>()?;
    let sigma = CorrelationMatrix::uniform(names.len(), 0.5)?;

    for path in 0..5 {
        let z = substream_normals(2024, path, names.len());
        let y = sample_latent(sigma.cholesky(), &z)?;
        let t = latent_to_default_times(&y, &names)?;
        let (first, who) = t.first_default().expect("non-empty basket");
        println!(
            "path {path}: T = [{}]  first default {} at {first:.3}",
            t.as_slice().iter().map(|v| format!("{v:7.3}")).collect::<Vec<_>>().join(", "),
            names[who].id
        );
    }

    // P(T_1 <= 2, T_2 <= 2): copula formula against simulation
    let n = 200_000u64;
    let hits = (0..n)
        .filter(|&i| {
            let y = sample_latent(sigma.cholesky(), &substream_normals(2024, i, 3)).unwrap();
            let t = latent_to_default_times(&y, &names).unwrap();
            t.as_slice()[0] <= 2.0 && t.as_slice()[1] <= 2.0
        })
        .count();
    let exact = gaussian_copula_2d(default_cdf(0.1, 2.0)?, default_cdf(0.2, 2.0)?, 0.5)?;
    println!("\nP(T_1 <= 2, T_2 <= 2): copula {exact:.5}, simulated {:.5}", hits as f64 / n as f64);
    Ok(())
}

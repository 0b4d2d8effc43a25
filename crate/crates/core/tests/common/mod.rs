#![allow(dead_code)]

use ftd_basket::numerics::CorrelationMatrix;
use ftd_basket::pricing::{default_schedule, BasketSpec, DiscountCurve};
use ftd_basket::survival::CreditName;

/// Two-sided 99% Kolmogorov-Smirnov critical value, asymptotic form.
pub const KS_99: f64 = 1.6276;

pub fn ks_band(n: usize) -> f64 {
    KS_99 / (n as f64).sqrt()
}

pub fn homogeneous_basket(n: usize, hazard: f64, recovery: f64, maturity: f64, step: f64) -> BasketSpec {
    let names = (0..n)
        .map(|i| CreditName::new(format!("N{}", i + 1), hazard, recovery).unwrap())
        .collect();
    BasketSpec::new(names, maturity, default_schedule(maturity, step).unwrap()).unwrap()
}

/// Five names, h = 0.2, R = 0.2, five years, semiannual premium.
pub fn reference_basket() -> BasketSpec {
    homogeneous_basket(5, 0.2, 0.2, 5.0, 0.5)
}

pub fn reference_curve() -> DiscountCurve {
    DiscountCurve::flat(0.05).unwrap()
}

pub fn uniform(n: usize, rho: f64) -> CorrelationMatrix {
    CorrelationMatrix::uniform(n, rho).unwrap()
}

/// Fraction of `samples` that are `<= x`.
pub fn ecdf(samples: &[f64], x: f64) -> f64 {
    samples.iter().filter(|&&s| s <= x).count() as f64 / samples.len() as f64
}

/// Sup distance between the empirical CDF of `samples` and `cdf`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

pub fn sample_correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

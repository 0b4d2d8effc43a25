//! Gaussian copula over exponential default times.
//!
//! A path starts from independent standard normals `z`, correlates them as
//! `y = L z` with `L L^T = Sigma`, and maps each coordinate through
//! `t_j = F_j^{-1}(Phi(y_j))`. This module owns no randomness.

use crate::error::{Error, Result};
use crate::numerics::{
    bivariate_normal_cdf, std_normal_cdf, std_normal_inv, std_normal_sf, CholeskyFactor,
};
use crate::survival::{invert_default_time, CreditName};

/// Above this latent value the upper tail is evaluated as `Phi(-y)` directly.
const TAIL_SWITCH: f64 = 7.0;

/// Correlated standard normal draws, one per name.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentVector(pub Vec<f64>);

/// Default times in years, one per name. Every entry is positive and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DefaultTimeVector(pub Vec<f64>);

impl DefaultTimeVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// First default time and the index of the name that defaults first.
    /// Ties go to the lowest index.
    pub fn first_default(&self) -> Option<(f64, usize)> {
        first_default(&self.0)
    }
}

pub(crate) fn first_default(times: &[f64]) -> Option<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    for (j, &t) in times.iter().enumerate() {
        match best {
            Some((b, _)) if t >= b => {}
            _ => best = Some((t, j)),
        }
    }
    best
}

/// `L * z`: turns independent standard normals into draws with correlation
/// `L L^T`.
pub fn sample_latent(factor: &CholeskyFactor, z: &[f64]) -> Result<LatentVector> {
    if z.len() != factor.dim() {
        return Err(Error::DimensionMismatch {
            expected: factor.dim(),
            found: z.len(),
        });
    }
    let mut y = vec![0.0; z.len()];
    factor.apply_into(z, &mut y);
    Ok(LatentVector(y))
}

/// Default time for one name from its latent normal value.
///
/// Computes `-ln(1 - Phi(y)) / h`; for `y > 7` it switches to
/// `-ln(Phi(-y)) / h`. Both tails are clamped so the result is always
/// strictly positive and finite.
pub fn default_time_from_latent(y: f64, hazard_rate: f64) -> f64 {
    if y > TAIL_SWITCH {
        let upper = std_normal_sf(y).max(f64::MIN_POSITIVE);
        -upper.ln() / hazard_rate
    } else {
        let u = std_normal_cdf(y).max(f64::MIN_POSITIVE);
        -(-u).ln_1p() / hazard_rate
    }
}

/// Maps correlated latents to per-name default times.
pub fn latent_to_default_times(
    y: &LatentVector,
    names: &[CreditName],
) -> Result<DefaultTimeVector> {
    if y.0.len() != names.len() {
        return Err(Error::DimensionMismatch {
            expected: names.len(),
            found: y.0.len(),
        });
    }
    let mut times = Vec::with_capacity(names.len());
    for (&yj, name) in y.0.iter().zip(names) {
        name.validate()?;
        let t = if yj > TAIL_SWITCH {
            default_time_from_latent(yj, name.hazard_rate)
        } else {
            invert_default_time(std_normal_cdf(yj).max(f64::MIN_POSITIVE), name.hazard_rate)?
        };
        times.push(t);
    }
    Ok(DefaultTimeVector(times))
}

/// Bivariate Gaussian copula `C(u, v; rho) = Phi2(Phi^-1(u), Phi^-1(v); rho)`.
pub fn gaussian_copula_2d(u: f64, v: f64, rho: f64) -> Result<f64> {
    let x = std_normal_inv(u)?;
    let y = std_normal_inv(v)?;
    bivariate_normal_cdf(x, y, rho)
}

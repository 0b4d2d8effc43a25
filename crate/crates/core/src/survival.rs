//! Constant-hazard survival times for a single credit name.
//!
//! Time is measured in years. With hazard `h` the default time `T` is
//! exponential: `S(t) = Pr[T >= t] = exp(-h t)` and `F(t) = 1 - S(t)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// One name in the basket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreditName {
    pub id: String,
    /// Default intensity per year, strictly positive.
    pub hazard_rate: f64,
    /// Fraction of face value recovered at default, in `[0, 1)`.
    pub recovery: f64,
}

impl CreditName {
    pub fn new(id: impl Into<String>, hazard_rate: f64, recovery: f64) -> Result<Self> {
        let name = Self {
            id: id.into(),
            hazard_rate,
            recovery,
        };
        name.validate()?;
        Ok(name)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hazard_rate > 0.0 && self.hazard_rate.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "name {:?}: hazard_rate must be positive, got {}",
                self.id, self.hazard_rate
            )));
        }
        if !(0.0..1.0).contains(&self.recovery) {
            return Err(Error::InvalidInput(format!(
                "name {:?}: recovery must lie in [0, 1), got {}",
                self.id, self.recovery
            )));
        }
        Ok(())
    }

    /// Loss given default, `1 - recovery`.
    pub fn loss_given_default(&self) -> f64 {
        1.0 - self.recovery
    }
}

fn check(function: &'static str, h: f64, t: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(domain(function, h, "hazard > 0"));
    }
    if !(t >= 0.0) {
        return Err(domain(function, t, "t >= 0"));
    }
    Ok(())
}

/// `S(t) = exp(-h t)`.
pub fn survival_prob(h: f64, t: f64) -> Result<f64> {
    check("survival_prob", h, t)?;
    Ok((-h * t).exp())
}

/// `F(t) = 1 - exp(-h t)`.
pub fn default_cdf(h: f64, t: f64) -> Result<f64> {
    check("default_cdf", h, t)?;
    Ok(-(-h * t).exp_m1())
}

/// Default time whose CDF value is `u`: `-ln(1 - u) / h`.
///
/// `u = 1` would map to an infinite time and is rejected.
pub fn invert_default_time(u: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(domain("invert_default_time", h, "hazard > 0"));
    }
    if !(0.0..1.0).contains(&u) {
        return Err(domain("invert_default_time", u, "[0, 1)"));
    }
    Ok(-(-u).ln_1p() / h)
}

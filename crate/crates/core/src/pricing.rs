//! Cash-flow valuation of the first-to-default swap and spread estimators.
//!
//! Conventions (face value 1, times in years):
//! - the premium leg pays one unit of spread at every schedule date strictly
//!   before the first default time; no accrued premium is paid at default;
//! - the protection leg pays `1 - R_j` of the first name to default, at the
//!   default time, if that time is strictly before maturity.

use serde::{Deserialize, Serialize};

use crate::copula::{first_default, DefaultTimeVector};
use crate::error::{Error, Result};
use crate::survival::CreditName;

/// Flat continuously compounded discount curve, `B(t) = exp(-r t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscountCurve {
    pub rate: f64,
}

impl DiscountCurve {
    pub fn flat(rate: f64) -> Result<Self> {
        if !rate.is_finite() {
            return Err(Error::InvalidInput(format!("discount rate must be finite, got {rate}")));
        }
        Ok(Self { rate })
    }

    pub fn discount(&self, t: f64) -> f64 {
        (-self.rate * t).exp()
    }
}

/// Premium payment dates, strictly increasing and positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaymentSchedule {
    times: Vec<f64>,
}

impl PaymentSchedule {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidInput("payment schedule is empty".into()));
        }
        if !(times[0] > 0.0) {
            return Err(Error::InvalidInput("payment dates must be positive".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("payment dates must be strictly increasing".into()));
        }
        Ok(Self { times })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> f64 {
        self.times[self.times.len() - 1]
    }
}

/// Regular schedule `step, 2 step, ...` up to and including `maturity`.
///
/// Dates are computed as `k * step`; a date within `1e-9` of maturity is
/// snapped to it.
pub fn default_schedule(maturity: f64, step: f64) -> Result<PaymentSchedule> {
    if !(maturity > 0.0 && maturity.is_finite()) {
        return Err(Error::InvalidInput(format!("maturity must be positive, got {maturity}")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidInput(format!("payment step must be positive, got {step}")));
    }
    let mut times = Vec::new();
    for k in 1.. {
        let t = f64::from(k) * step;
        if (t - maturity).abs() <= 1e-9 {
            times.push(maturity);
            break;
        }
        if t > maturity {
            break;
        }
        times.push(t);
    }
    PaymentSchedule::new(times)
}

/// Names, maturity and premium schedule of a first-to-default basket.
#[derive(Debug, Clone, PartialEq)]
pub struct BasketSpec {
    names: Vec<CreditName>,
    maturity: f64,
    schedule: PaymentSchedule,
}

impl BasketSpec {
    pub fn new(names: Vec<CreditName>, maturity: f64, schedule: PaymentSchedule) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidInput("basket needs at least one name".into()));
        }
        for name in &names {
            name.validate()?;
        }
        if !(maturity > 0.0 && maturity.is_finite()) {
            return Err(Error::InvalidInput(format!("maturity must be positive, got {maturity}")));
        }
        if schedule.last() > maturity {
            return Err(Error::InvalidInput(format!(
                "last payment date {} is after maturity {maturity}",
                schedule.last()
            )));
        }
        Ok(Self {
            names,
            maturity,
            schedule,
        })
    }

    pub fn names(&self) -> &[CreditName] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn maturity(&self) -> f64 {
        self.maturity
    }

    pub fn schedule(&self) -> &PaymentSchedule {
        &self.schedule
    }
}

/// PV per unit spread of the premium dates strictly before `first_time`.
pub fn premium_leg_pv(first_time: f64, schedule: &PaymentSchedule, curve: &DiscountCurve) -> f64 {
    schedule
        .times()
        .iter()
        .take_while(|&&t| t < first_time)
        .map(|&t| curve.discount(t))
        .fold(0.0, |acc, d| acc + d)
}

/// PV of the protection payment triggered by name `first_index` at
/// `first_time`; zero unless `first_time < maturity`.
///
/// Panics if `first_index` is not a valid name index.
pub fn protection_leg_pv(
    first_time: f64,
    first_index: usize,
    basket: &BasketSpec,
    curve: &DiscountCurve,
) -> f64 {
    let name = &basket.names[first_index];
    if first_time < basket.maturity {
        name.loss_given_default() * curve.discount(first_time)
    } else {
        0.0
    }
}

/// Both leg values of one path.
pub trait LegValues {
    /// Premium leg PV per unit spread.
    fn premium_pv(&self) -> f64;
    fn protection_pv(&self) -> f64;
}

/// Leg values without the per-name default times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLegs {
    pub premium_pv: f64,
    pub protection_pv: f64,
}

impl LegValues for PathLegs {
    fn premium_pv(&self) -> f64 {
        self.premium_pv
    }
    fn protection_pv(&self) -> f64 {
        self.protection_pv
    }
}

/// Full record of one simulated path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathOutcome {
    pub times: DefaultTimeVector,
    pub first_time: f64,
    /// Zero-based index of the first name to default.
    pub first_index: usize,
    pub premium_pv: f64,
    pub protection_pv: f64,
}

impl PathOutcome {
    pub fn legs(&self) -> PathLegs {
        PathLegs {
            premium_pv: self.premium_pv,
            protection_pv: self.protection_pv,
        }
    }
}

impl LegValues for PathOutcome {
    fn premium_pv(&self) -> f64 {
        self.premium_pv
    }
    fn protection_pv(&self) -> f64 {
        self.protection_pv
    }
}

/// Values both legs of a path given its default times.
pub fn value_path(times: DefaultTimeVector, basket: &BasketSpec, curve: &DiscountCurve) -> Result<PathOutcome> {
    if times.len() != basket.len() {
        return Err(Error::DimensionMismatch {
            expected: basket.len(),
            found: times.len(),
        });
    }
    let (first_time, first_index) = first_default(times.as_slice()).expect("non-empty basket");
    Ok(PathOutcome {
        premium_pv: premium_leg_pv(first_time, &basket.schedule, curve),
        protection_pv: protection_leg_pv(first_time, first_index, basket, curve),
        times,
        first_time,
        first_index,
    })
}

pub(crate) fn value_legs(times: &[f64], basket: &BasketSpec, curve: &DiscountCurve) -> PathLegs {
    let (first_time, first_index) = first_default(times).expect("non-empty basket");
    PathLegs {
        premium_pv: premium_leg_pv(first_time, &basket.schedule, curve),
        protection_pv: protection_leg_pv(first_time, first_index, basket, curve),
    }
}

/// A spread estimate with its standard error, when one is available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub spread: f64,
    pub standard_error: Option<f64>,
}

/// Mean of per-path ratios `VR_i / VL_i`, counting paths with no premium
/// date before default (`VL_i = 0`) as zero.
///
/// This is the reference simulation's estimator. It is biased low relative to
/// the break-even spread because the zero-premium paths still carry
/// protection value.
pub fn spread_estimator_paper<P: LegValues>(outcomes: &[P]) -> Result<Estimate> {
    if outcomes.is_empty() {
        return Err(Error::NoOutcomes);
    }
    let n = outcomes.len() as f64;
    let ratio = |p: &P| {
        if p.premium_pv() != 0.0 {
            p.protection_pv() / p.premium_pv()
        } else {
            0.0
        }
    };
    let mean = outcomes.iter().map(ratio).sum::<f64>() / n;
    let se = if outcomes.len() > 1 {
        let ss: f64 = outcomes.iter().map(|p| (ratio(p) - mean).powi(2)).sum();
        (ss / (n - 1.0)).sqrt() / n.sqrt()
    } else {
        0.0
    };
    Ok(Estimate {
        spread: mean,
        standard_error: Some(se),
    })
}

/// Ratio of summed legs `sum VR_i / sum VL_i`: the spread that sets the
/// expected legs equal.
///
/// The standard error comes from `batch_count` contiguous batches (sizes
/// differing by at most one): the standard deviation of the batch ratios
/// over `sqrt(batch_count)`. It is `None` when there are fewer paths than
/// batches, fewer than two batches, or a batch without premium.
pub fn spread_estimator_standard<P: LegValues>(outcomes: &[P], batch_count: usize) -> Result<Estimate> {
    if outcomes.is_empty() {
        return Err(Error::NoOutcomes);
    }
    let (premium, protection) = sum_legs(outcomes);
    if premium <= 0.0 {
        return Err(Error::ZeroPremium);
    }
    Ok(Estimate {
        spread: protection / premium,
        standard_error: batch_means_se(outcomes, batch_count),
    })
}

fn sum_legs<P: LegValues>(outcomes: &[P]) -> (f64, f64) {
    outcomes.iter().fold((0.0, 0.0), |(vl, vr), p| {
        (vl + p.premium_pv(), vr + p.protection_pv())
    })
}

fn batch_means_se<P: LegValues>(outcomes: &[P], batch_count: usize) -> Option<f64> {
    let n = outcomes.len();
    if batch_count < 2 || n < batch_count {
        return None;
    }
    let base = n / batch_count;
    let extra = n % batch_count;
    let mut ratios = Vec::with_capacity(batch_count);
    let mut start = 0;
    for b in 0..batch_count {
        let len = base + usize::from(b < extra);
        let (vl, vr) = sum_legs(&outcomes[start..start + len]);
        if vl <= 0.0 {
            return None;
        }
        ratios.push(vr / vl);
        start += len;
    }
    let b = batch_count as f64;
    let mean = ratios.iter().sum::<f64>() / b;
    let var = ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (b - 1.0);
    Some(var.sqrt() / b.sqrt())
}

/// Aggregate results of a pricing run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricingReport {
    /// Mean-of-ratios spread (reference-simulation convention).
    pub spread_paper: f64,
    pub se_paper: f64,
    /// Ratio-of-means (break-even) spread.
    pub spread_standard: f64,
    /// Batch-means standard error; absent when it cannot be formed.
    pub se_standard: Option<f64>,
    pub mean_premium_pv: f64,
    pub mean_protection_pv: f64,
    pub n_paths: u64,
    pub seed: u64,
    pub batch_count: usize,
    /// Paths on which no premium date precedes the first default.
    pub zero_premium_paths: u64,
    /// `spread_standard - spread_paper`.
    pub estimator_gap: f64,
}

impl PricingReport {
    pub fn from_outcomes<P: LegValues>(outcomes: &[P], seed: u64, batch_count: usize) -> Result<Self> {
        let paper = spread_estimator_paper(outcomes)?;
        let standard = spread_estimator_standard(outcomes, batch_count)?;
        let n = outcomes.len() as f64;
        let (premium, protection) = sum_legs(outcomes);
        Ok(Self {
            spread_paper: paper.spread,
            se_paper: paper.standard_error.unwrap_or(0.0),
            spread_standard: standard.spread,
            se_standard: standard.standard_error,
            mean_premium_pv: premium / n,
            mean_protection_pv: protection / n,
            n_paths: outcomes.len() as u64,
            seed,
            batch_count,
            zero_premium_paths: outcomes.iter().filter(|p| p.premium_pv() == 0.0).count() as u64,
            estimator_gap: standard.spread - paper.spread,
        })
    }
}

/// Break-even spread for `n` independent names with a common hazard `h` and
/// recovery: the first default time is then `Exp(n h)` and both expected
/// legs have closed forms. With `lambda = n h`:
///
/// `(1 - R) lambda / (lambda + r) (1 - exp(-(lambda + r) M)) / sum_k exp(-(lambda + r) t_k)`.
pub fn analytic_independent_spread(
    n: usize,
    hazard_rate: f64,
    recovery: f64,
    rate: f64,
    schedule: &PaymentSchedule,
    maturity: f64,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("basket needs at least one name".into()));
    }
    let lambda = n as f64 * hazard_rate;
    let decay = lambda + rate;
    if !(decay > 0.0) {
        return Err(Error::InvalidInput(format!(
            "lambda + r must be positive, got {decay}"
        )));
    }
    let protection = (1.0 - recovery) * lambda / decay * -(-decay * maturity).exp_m1();
    let premium: f64 = schedule
        .times()
        .iter()
        .filter(|&&t| t <= maturity)
        .map(|&t| (-decay * t).exp())
        .sum();
    if premium <= 0.0 {
        return Err(Error::ZeroPremium);
    }
    Ok(protection / premium)
}

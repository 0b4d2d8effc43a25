//! Monte-Carlo pricing of first-to-default basket credit default swaps.
//!
//! Default times are exponential per name (constant hazard) and coupled by a
//! Gaussian copula. Each simulated path values the premium leg (unit spread
//! paid at schedule dates before the first default) and the protection leg
//! (loss given default of the first defaulter, paid at default if before
//! maturity). Two spread estimators are reported side by side:
//!
//! - [`pricing::spread_estimator_paper`]: the mean of per-path leg ratios,
//!   with paths that pay no premium counted as zero;
//! - [`pricing::spread_estimator_standard`]: the ratio of the mean legs,
//!   i.e. the spread that equates expected premium and protection.
//!
//! Module map:
//!
//! | module | contents |
//! |---|---|
//! | [`numerics`] | normal CDF and inverse, bivariate normal CDF, Cholesky |
//! | [`survival`] | constant-hazard survival and default-time inversion |
//! | [`copula`] | correlated latents to default times, bivariate copula |
//! | [`creditmetrics`] | latent-threshold model and its copula equivalence |
//! | [`pricing`] | leg valuation, estimators, closed-form independent oracle |
//! | [`engine`] | seeded per-path streams, parallel deterministic runs |
//! | [`cli`] | scenario files, reports, per-path dumps, the `ftd` binary |

pub mod cli;
pub mod copula;
pub mod creditmetrics;
pub mod engine;
pub mod error;
pub mod numerics;
pub mod pricing;
pub mod survival;

pub use error::{Error, Result};

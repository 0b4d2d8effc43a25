//! Scenario files.
//!
//! A scenario is a TOML document:
//!
//! ```toml
//! rate = 0.05          # flat continuously compounded discount rate
//! maturity = 5.0       # years
//! payment_step = 0.5   # years between premium dates
//! paths = 10000
//! seed = 1200
//! estimator = "both"   # "paper" | "standard" | "both"
//! correlation = { uniform = 0.1 }   # or { matrix = [[1.0, 0.1], [0.1, 1.0]] }
//!
//! [[names]]
//! id = "A"
//! hazard_rate = 0.2
//! recovery = 0.2
//! ```
//!
//! Optional keys: `batch_count` (default 100) and a `[reference]` table
//! (`spread`, `paths`, optional `estimator`) holding a published value to
//! compare against.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::{default_workers, SimulationConfig, DEFAULT_BATCH_COUNT};
use crate::error::Error;
use crate::numerics::{CorrelationMatrix, Matrix};
use crate::pricing::{default_schedule, BasketSpec, DiscountCurve};
use crate::survival::CreditName;

/// Which spread estimator(s) a run reports.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorChoice {
    /// Mean of per-path ratios.
    Paper,
    /// Ratio of mean legs.
    Standard,
    #[default]
    Both,
}

impl EstimatorChoice {
    pub fn shows_paper(self) -> bool {
        matches!(self, Self::Paper | Self::Both)
    }

    pub fn shows_standard(self) -> bool {
        matches!(self, Self::Standard | Self::Both)
    }
}

impl fmt::Display for EstimatorChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Paper => "paper",
            Self::Standard => "standard",
            Self::Both => "both",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationSpec {
    /// Same correlation for every pair of names.
    Uniform(f64),
    /// Full matrix, one row per name.
    Matrix(Vec<Vec<f64>>),
}

/// Which estimator a reference value was produced with.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceEstimator {
    #[default]
    Paper,
    Standard,
}

/// An externally reported spread, with the sample size it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceValue {
    pub spread: f64,
    pub paths: u64,
    #[serde(default)]
    pub estimator: ReferenceEstimator,
}

/// On-disk scenario, exactly as written. Reports echo this structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub names: Vec<CreditName>,
    pub correlation: CorrelationSpec,
    pub rate: f64,
    pub maturity: f64,
    pub payment_step: f64,
    pub paths: u64,
    pub seed: u64,
    #[serde(default)]
    pub estimator: EstimatorChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceValue>,
}

/// Why a scenario was rejected.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioError {
    /// The text is not a well-formed scenario document.
    Syntax(String),
    /// A field holds an invalid value.
    Field { field: String, message: String },
}

impl ScenarioError {
    fn field(field: impl Into<String>, message: impl fmt::Display) -> Self {
        Self::Field {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Syntax(msg) => write!(f, "scenario syntax error: {msg}"),
            Self::Field { field, message } => write!(f, "invalid field `{field}`: {message}"),
        }
    }
}

impl std::error::Error for ScenarioError {}

/// A validated scenario: everything a run needs.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub basket: BasketSpec,
    pub correlation: CorrelationMatrix,
    pub curve: DiscountCurve,
    pub config: SimulationConfig,
    pub estimator: EstimatorChoice,
    pub reference: Option<ReferenceValue>,
    /// The source document, for echoing into reports.
    pub file: ScenarioFile,
}

/// Parses and validates TOML scenario text.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| ScenarioError::Syntax(e.to_string()))?;
    Scenario::from_file(file)
}

impl Scenario {
    pub fn from_file(file: ScenarioFile) -> Result<Self, ScenarioError> {
        if file.names.is_empty() {
            return Err(ScenarioError::field("names", "at least one name is required"));
        }
        for (i, name) in file.names.iter().enumerate() {
            if !(name.hazard_rate > 0.0 && name.hazard_rate.is_finite()) {
                return Err(ScenarioError::field(
                    format!("names[{i}].hazard_rate"),
                    format!("must be positive, got {}", name.hazard_rate),
                ));
            }
            if !(0.0..1.0).contains(&name.recovery) {
                return Err(ScenarioError::field(
                    format!("names[{i}].recovery"),
                    format!("must lie in [0, 1), got {}", name.recovery),
                ));
            }
        }
        let n = file.names.len();
        let correlation = build_correlation(&file.correlation, n)
            .map_err(|e| ScenarioError::field("correlation", e))?;

        if !file.rate.is_finite() {
            return Err(ScenarioError::field("rate", "must be finite"));
        }
        if !(file.maturity > 0.0 && file.maturity.is_finite()) {
            return Err(ScenarioError::field("maturity", format!("must be positive, got {}", file.maturity)));
        }
        if !(file.payment_step > 0.0 && file.payment_step <= file.maturity) {
            return Err(ScenarioError::field(
                "payment_step",
                format!("must lie in (0, maturity], got {}", file.payment_step),
            ));
        }
        if file.paths == 0 {
            return Err(ScenarioError::field("paths", "must be at least 1"));
        }
        let batch_count = file.batch_count.unwrap_or(DEFAULT_BATCH_COUNT);
        if batch_count == 0 {
            return Err(ScenarioError::field("batch_count", "must be at least 1"));
        }
        if let Some(r) = &file.reference {
            if !(r.spread.is_finite() && r.spread >= 0.0) {
                return Err(ScenarioError::field("reference.spread", "must be a non-negative number"));
            }
            if r.paths == 0 {
                return Err(ScenarioError::field("reference.paths", "must be at least 1"));
            }
        }

        let schedule = default_schedule(file.maturity, file.payment_step)
            .map_err(|e| ScenarioError::field("payment_step", e))?;
        let basket = BasketSpec::new(file.names.clone(), file.maturity, schedule)
            .map_err(|e| ScenarioError::field("names", e))?;
        let curve = DiscountCurve::flat(file.rate).map_err(|e| ScenarioError::field("rate", e))?;
        let config = SimulationConfig {
            n_paths: file.paths,
            master_seed: file.seed,
            workers: default_workers(),
            batch_count,
        };
        Ok(Self {
            basket,
            correlation,
            curve,
            config,
            estimator: file.estimator,
            reference: file.reference.clone(),
            file,
        })
    }
}

fn build_correlation(spec: &CorrelationSpec, n: usize) -> Result<CorrelationMatrix, Error> {
    match spec {
        CorrelationSpec::Uniform(rho) => {
            if !(-1.0..=1.0).contains(rho) {
                return Err(Error::InvalidCorrelation(format!("uniform correlation {rho} outside [-1, 1]")));
            }
            CorrelationMatrix::uniform(n, *rho)
        }
        CorrelationSpec::Matrix(rows) => {
            if rows.len() != n {
                return Err(Error::InvalidCorrelation(format!(
                    "matrix has {} rows but the basket has {n} names",
                    rows.len()
                )));
            }
            CorrelationMatrix::new(Matrix::from_rows(rows)?)
        }
    }
}

//! Report files and per-path dumps.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use super::scenario::{EstimatorChoice, ReferenceEstimator, ReferenceValue, ScenarioFile};
use crate::engine::ConvergenceRow;
use crate::pricing::{PathLegs, PathOutcome, PricingReport};

/// Cash-flow and estimator conventions a run used, recorded with its results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub premium: String,
    pub protection: String,
    pub spread_paper: String,
    pub spread_standard: String,
}

impl Conventions {
    pub fn current(payment_step: f64, batch_count: usize) -> Self {
        Self {
            premium: format!(
                "unit spread paid every {payment_step} years at dates strictly before the first default; no accrued premium"
            ),
            protection: "1 - R of the first defaulter, paid at the default time if strictly before maturity"
                .into(),
            spread_paper: "mean over paths of protection/premium, paths with zero premium PV count as 0; \
                 SE = sample sd / sqrt(N)"
                .into(),
            spread_standard: format!(
                "sum of protection PVs / sum of premium PVs; SE from {batch_count} contiguous batch ratios"
            ),
        }
    }
}

/// How a run's estimate relates to an externally reported value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceComparison {
    pub reference_spread: f64,
    pub reference_paths: u64,
    pub estimator: ReferenceEstimator,
    pub estimate: f64,
    pub deviation: f64,
    pub standard_error: Option<f64>,
    /// Deviation in units of this run's standard error.
    pub z_score: Option<f64>,
    /// This run's standard error rescaled to the reference sample size.
    pub se_at_reference_paths: Option<f64>,
    pub z_score_at_reference_paths: Option<f64>,
    /// `|deviation| <= 3 SE` for this run.
    pub within_three_se: bool,
    /// `|deviation| <= 3 SE` at the reference sample size, i.e. the gap is
    /// explained by the sampling noise of a run that small.
    pub within_reference_noise: bool,
    pub explanation: String,
}

pub fn compare_to_reference(report: &PricingReport, reference: &ReferenceValue) -> ReferenceComparison {
    let (estimate, se, label) = match reference.estimator {
        ReferenceEstimator::Paper => (report.spread_paper, Some(report.se_paper), "mean-of-ratios"),
        ReferenceEstimator::Standard => (report.spread_standard, report.se_standard, "ratio-of-means"),
    };
    let deviation = estimate - reference.spread;
    let usable_se = se.filter(|s| *s > 0.0);
    let z_score = usable_se.map(|s| deviation / s);
    let se_ref = usable_se.map(|s| s * (report.n_paths as f64 / reference.paths as f64).sqrt());
    let z_ref = se_ref.map(|s| deviation / s);
    let within_three_se = z_score.is_some_and(|z| z.abs() <= 3.0);
    let within_reference_noise = z_ref.is_some_and(|z| z.abs() <= 3.0);

    let mut explanation = format!(
        "{label} estimate {estimate:.5} vs reference {:.5}: deviation {deviation:+.5}",
        reference.spread
    );
    match (z_score, se_ref, z_ref) {
        (Some(z), Some(s_ref), Some(zr)) => {
            explanation.push_str(&format!(
                " = {z:+.2} SE at N = {}; a {}-path run has SE {s_ref:.5}, so the deviation is {zr:+.2} of those SE. ",
                report.n_paths, reference.paths
            ));
            explanation.push_str(if within_three_se {
                "The reference lies within 3 SE of this run."
            } else if within_reference_noise {
                "The gap is within the Monte-Carlo noise of a single run at the reference sample size; \
                 the cash-flow and estimator conventions are those of the reference simulation."
            } else {
                "The gap exceeds 3 SE at both sample sizes."
            });
        }
        _ => explanation.push_str("; no standard error available for a comparison."),
    }

    ReferenceComparison {
        reference_spread: reference.spread,
        reference_paths: reference.paths,
        estimator: reference.estimator,
        estimate,
        deviation,
        standard_error: se,
        z_score,
        se_at_reference_paths: se_ref,
        z_score_at_reference_paths: z_ref,
        within_three_se,
        within_reference_noise,
        explanation,
    }
}

/// The structured report written by `--output`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// Effective scenario, with command-line overrides applied.
    pub scenario: ScenarioFile,
    pub estimator: EstimatorChoice,
    pub report: PricingReport,
    pub conventions: Conventions,
    pub workers: usize,
    pub wall_time: f64,
    pub paths_per_second: f64,
    #[serde(default)]
    pub convergence: Vec<ConvergenceRow>,
    #[serde(default)]
    pub reference: Option<ReferenceComparison>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Header row of the per-path dump for `n` names.
pub fn dump_header(n: usize) -> String {
    let mut cols = vec!["path".to_string()];
    cols.extend((1..=n).map(|j| format!("T_{j}")));
    cols.extend(["first_time", "first_index", "premium_pv", "protection_pv"].map(String::from));
    cols.join(",")
}

/// Writes one CSV row per outcome. `first_index` is one-based so that it
/// names the matching `T_j` column. Floats use the shortest representation
/// that parses back to the same value.
pub fn write_dump_rows<W: Write>(out: &mut W, first_path: u64, outcomes: &[PathOutcome]) -> io::Result<()> {
    for (offset, o) in outcomes.iter().enumerate() {
        write!(out, "{}", first_path + offset as u64)?;
        for t in o.times.as_slice() {
            write!(out, ",{t}")?;
        }
        writeln!(
            out,
            ",{},{},{},{}",
            o.first_time,
            o.first_index + 1,
            o.premium_pv,
            o.protection_pv
        )?;
    }
    Ok(())
}

/// Reads leg values back from a per-path dump, in row order.
pub fn read_dump_legs<R: BufRead>(input: R) -> io::Result<Vec<PathLegs>> {
    let invalid = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| invalid("empty dump".into()))??;
    let cols: Vec<&str> = header.split(',').collect();
    let find = |name: &str| {
        cols.iter()
            .position(|c| *c == name)
            .ok_or_else(|| invalid(format!("missing column {name}")))
    };
    let (premium_col, protection_col) = (find("premium_pv")?, find("protection_pv")?);
    let mut legs = Vec::new();
    for (row, line) in lines.enumerate() {
        let line = line?;
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |col: usize| {
            fields
                .get(col)
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| invalid(format!("row {}: bad column {col}", row + 1)))
        };
        legs.push(PathLegs {
            premium_pv: parse(premium_col)?,
            protection_pv: parse(protection_col)?,
        });
    }
    Ok(legs)
}

//! Monte-Carlo driver.
//!
//! Every path draws its normals from its own ChaCha8 stream, selected by the
//! path index under a key derived from the master seed. A path's outcome is
//! therefore a pure function of `(master_seed, path_index)`. Workers take
//! contiguous index ranges and the results are merged back in index order
//! before any summation, so reports are bit-identical for any worker count.

use std::ops::Range;
use std::time::Instant;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::copula::{default_time_from_latent, DefaultTimeVector, LatentVector};
use crate::error::{Error, Result};
use crate::numerics::{std_normal_inv, CholeskyFactor, CorrelationMatrix};
use crate::pricing::{value_legs, value_path, BasketSpec, DiscountCurve, PathLegs, PathOutcome, PricingReport};

pub const DEFAULT_BATCH_COUNT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n_paths: u64,
    pub master_seed: u64,
    pub workers: usize,
    /// Batches for the ratio estimator's standard error.
    pub batch_count: usize,
}

impl SimulationConfig {
    /// `workers` defaults to the available parallelism.
    pub fn new(n_paths: u64, master_seed: u64) -> Self {
        Self {
            n_paths,
            master_seed,
            workers: default_workers(),
            batch_count: DEFAULT_BATCH_COUNT,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_batch_count(mut self, batch_count: usize) -> Self {
        self.batch_count = batch_count;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::InvalidInput("n_paths must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidInput("workers must be at least 1".into()));
        }
        if self.batch_count == 0 {
            return Err(Error::InvalidInput("batch_count must be at least 1".into()));
        }
        Ok(())
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub report: PricingReport,
    /// Seconds.
    pub wall_time: f64,
    pub paths_per_second: f64,
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n_paths: u64,
    pub spread_paper: f64,
    pub se_paper: f64,
    pub spread_standard: f64,
    pub se_standard: Option<f64>,
}

impl From<&PricingReport> for ConvergenceRow {
    fn from(r: &PricingReport) -> Self {
        Self {
            n_paths: r.n_paths,
            spread_paper: r.spread_paper,
            se_paper: r.se_paper,
            spread_standard: r.spread_standard,
            se_standard: r.se_standard,
        }
    }
}

fn stream_key(master_seed: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    ChaCha8Rng::seed_from_u64(master_seed).fill_bytes(&mut key);
    key
}

/// Uniform in the open interval `(0, 1)` from the top 52 bits, on the grid
/// `(k + 1/2) / 2^52`.
fn open_uniform(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

fn fill_normals(key: &[u8; 32], path_index: u64, out: &mut [f64]) {
    let mut rng = ChaCha8Rng::from_seed(*key);
    rng.set_stream(path_index);
    for slot in out {
        let u = open_uniform(rng.next_u64());
        *slot = std_normal_inv(u).expect("open uniform lies in (0, 1)");
    }
}

/// `n` independent standard normals for path `path_index`.
///
/// Normals are inverse-CDF transforms of uniforms from the path's own
/// stream, so the result depends only on `(master_seed, path_index, n)`.
pub fn substream_normals(master_seed: u64, path_index: u64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    fill_normals(&stream_key(master_seed), path_index, &mut out);
    out
}

/// Maps path indices to latents, default times and leg values for one
/// scenario. Cheap to share across threads.
#[derive(Debug, Clone)]
pub struct PathGenerator {
    basket: BasketSpec,
    factor: CholeskyFactor,
    curve: DiscountCurve,
    key: [u8; 32],
    master_seed: u64,
}

struct Scratch {
    z: Vec<f64>,
    y: Vec<f64>,
    times: Vec<f64>,
}

impl PathGenerator {
    pub fn new(basket: &BasketSpec, sigma: &CorrelationMatrix, curve: DiscountCurve, master_seed: u64) -> Result<Self> {
        if sigma.dim() != basket.len() {
            return Err(Error::DimensionMismatch {
                expected: basket.len(),
                found: sigma.dim(),
            });
        }
        Ok(Self {
            basket: basket.clone(),
            factor: sigma.cholesky().clone(),
            curve,
            key: stream_key(master_seed),
            master_seed,
        })
    }

    pub fn basket(&self) -> &BasketSpec {
        &self.basket
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    fn scratch(&self) -> Scratch {
        let n = self.basket.len();
        Scratch {
            z: vec![0.0; n],
            y: vec![0.0; n],
            times: vec![0.0; n],
        }
    }

    fn fill_times(&self, path_index: u64, s: &mut Scratch) {
        fill_normals(&self.key, path_index, &mut s.z);
        self.factor.apply_into(&s.z, &mut s.y);
        for ((t, &y), name) in s.times.iter_mut().zip(&s.y).zip(self.basket.names()) {
            *t = default_time_from_latent(y, name.hazard_rate);
        }
    }

    pub fn latent(&self, path_index: u64) -> LatentVector {
        let mut s = self.scratch();
        fill_normals(&self.key, path_index, &mut s.z);
        self.factor.apply_into(&s.z, &mut s.y);
        LatentVector(s.y)
    }

    pub fn default_times(&self, path_index: u64) -> DefaultTimeVector {
        let mut s = self.scratch();
        self.fill_times(path_index, &mut s);
        DefaultTimeVector(s.times)
    }

    pub fn outcome(&self, path_index: u64) -> PathOutcome {
        value_path(self.default_times(path_index), &self.basket, &self.curve)
            .expect("generator dimensions match the basket")
    }

    fn legs(&self, path_index: u64, s: &mut Scratch) -> PathLegs {
        self.fill_times(path_index, s);
        value_legs(&s.times, &self.basket, &self.curve)
    }

    /// Leg values of paths `0..n_paths`, in index order.
    pub fn legs_for(&self, n_paths: u64, workers: usize) -> Vec<PathLegs> {
        map_paths_with(0..n_paths, workers, || self.scratch(), |s, i| self.legs(i, s))
    }

    /// Full outcomes of the paths in `range`, in index order.
    pub fn outcomes_for(&self, range: Range<u64>, workers: usize) -> Vec<PathOutcome> {
        map_paths_with(range, workers, || (), |_, i| self.outcome(i))
    }
}

/// Evaluates `f` on every index in `range` using up to `workers` threads on
/// contiguous sub-ranges and returns results in index order.
fn map_paths_with<S, T, I, F>(range: Range<u64>, workers: usize, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Sync,
    F: Fn(&mut S, u64) -> T + Sync,
{
    let len = range.end.saturating_sub(range.start);
    let workers = (workers.max(1) as u64).min(len.max(1));
    let run = |r: Range<u64>| {
        let mut state = init();
        r.map(|i| f(&mut state, i)).collect::<Vec<T>>()
    };
    if workers == 1 {
        return run(range);
    }
    let chunk = len.div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let start = range.start + (w * chunk).min(len);
                let end = range.start + ((w + 1) * chunk).min(len);
                let run = &run;
                scope.spawn(move || run(start..end))
            })
            .collect();
        let mut out = Vec::with_capacity(len as usize);
        for h in handles {
            out.extend(h.join().expect("path worker panicked"));
        }
        out
    })
}

/// Prices the basket by simulation.
pub fn run_simulation(
    basket: &BasketSpec,
    sigma: &CorrelationMatrix,
    curve: &DiscountCurve,
    config: &SimulationConfig,
) -> Result<RunResult> {
    Ok(run_with_checkpoints(basket, sigma, curve, config, &[])?.0)
}

/// Runs the simulation and also reports convergence rows at `checkpoints`.
pub fn run_with_checkpoints(
    basket: &BasketSpec,
    sigma: &CorrelationMatrix,
    curve: &DiscountCurve,
    config: &SimulationConfig,
    checkpoints: &[u64],
) -> Result<(RunResult, Vec<ConvergenceRow>)> {
    config.validate()?;
    if let Some(&last) = checkpoints.last() {
        if last > config.n_paths {
            return Err(Error::InvalidInput(format!(
                "checkpoint {last} exceeds n_paths {}",
                config.n_paths
            )));
        }
    }
    let generator = PathGenerator::new(basket, sigma, *curve, config.master_seed)?;
    let start = Instant::now();
    let legs = generator.legs_for(config.n_paths, config.workers);
    let report = PricingReport::from_outcomes(&legs, config.master_seed, config.batch_count)?;
    let wall_time = start.elapsed().as_secs_f64();
    let rows = convergence_report(&legs, checkpoints, config.master_seed, config.batch_count)?;
    Ok((
        RunResult {
            paths_per_second: config.n_paths as f64 / wall_time.max(f64::MIN_POSITIVE),
            report,
            wall_time,
        },
        rows,
    ))
}

/// Estimates over each prefix `legs[..k]` for `k` in `checkpoints`.
///
/// Paths depend only on their index, so each row equals the report of a
/// fresh run with `k` paths and the same seed.
pub fn convergence_report(
    legs: &[PathLegs],
    checkpoints: &[u64],
    seed: u64,
    batch_count: usize,
) -> Result<Vec<ConvergenceRow>> {
    if checkpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("checkpoints must be strictly increasing".into()));
    }
    checkpoints
        .iter()
        .map(|&k| {
            if k == 0 || k as usize > legs.len() {
                return Err(Error::InvalidInput(format!(
                    "checkpoint {k} outside 1..={}",
                    legs.len()
                )));
            }
            let report = PricingReport::from_outcomes(&legs[..k as usize], seed, batch_count)?;
            Ok(ConvergenceRow::from(&report))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_uniform_is_interior() {
        assert!(open_uniform(0) > 0.0);
        assert!(open_uniform(u64::MAX) < 1.0);
        assert_eq!(open_uniform(u64::MAX), 1.0 - 0.5 / (1u64 << 52) as f64);
        assert_eq!(open_uniform(1u64 << 63), 0.5 + 0.5 / (1u64 << 52) as f64);
    }

    #[test]
    fn substreams_are_deterministic_and_distinct() {
        let a = substream_normals(1200, 7, 5);
        assert_eq!(a, substream_normals(1200, 7, 5));
        assert_ne!(a, substream_normals(1200, 8, 5));
        assert_ne!(a, substream_normals(1201, 7, 5));
        // a longer draw extends the shorter one
        assert_eq!(&substream_normals(1200, 7, 9)[..5], a.as_slice());
    }

    #[test]
    fn map_paths_preserves_order_for_any_worker_count() {
        let expected: Vec<u64> = (0..1003).map(|i| i * i).collect();
        for workers in [1, 2, 3, 8, 2000] {
            let got = map_paths_with(0..1003, workers, || (), |_, i| i * i);
            assert_eq!(got, expected, "workers = {workers}");
        }
        assert!(map_paths_with(0..0, 4, || (), |_, i| i).is_empty());
        let tail = map_paths_with(1000..1003, 2, || (), |_, i| i);
        assert_eq!(tail, vec![1000, 1001, 1002]);
    }

    #[test]
    fn config_validation() {
        assert!(SimulationConfig::new(0, 1).validate().is_err());
        assert!(SimulationConfig::new(1, 1).with_workers(0).validate().is_err());
        assert!(SimulationConfig::new(1, 1).with_batch_count(0).validate().is_err());
        assert!(SimulationConfig::new(1, 1).validate().is_ok());
    }

    #[test]
    fn checkpoints_must_increase() {
        let legs = vec![
            PathLegs {
                premium_pv: 1.0,
                protection_pv: 0.5
            };
            10
        ];
        assert!(convergence_report(&legs, &[5, 5], 0, 2).is_err());
        assert!(convergence_report(&legs, &[0], 0, 2).is_err());
        assert!(convergence_report(&legs, &[11], 0, 2).is_err());
        assert_eq!(convergence_report(&legs, &[2, 10], 0, 2).unwrap().len(), 2);
    }
}

//! Latent-variable (CreditMetrics-style) default model.
//!
//! Name `i` defaults within the horizon when its standardized asset value
//! `X_i = sum_j w_ij theta_j + sigma_i eps_i` falls below the threshold
//! `z_i = Phi^-1(q_i)`. Joint default probabilities computed this way are
//! the bivariate Gaussian copula evaluated at the marginal default
//! probabilities; [`verify_copula_equivalence`] checks that numerically with
//! two independent algorithms.

#![allow(clippy::excessive_precision)]

use serde::{Deserialize, Serialize};

use crate::copula::gaussian_copula_2d;
use crate::error::{domain, Error, Result};
use crate::numerics::{
    cholesky, std_normal_cdf, std_normal_inv, std_normal_pdf, CholeskyFactor, CorrelationMatrix,
    Matrix,
};
use crate::survival::default_cdf;

/// Horizon, in years, of the one-period default probability.
pub const HORIZON_YEARS: f64 = 1.0;

/// Default probability `q` and the matching latent threshold `z = Phi^-1(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefaultThreshold {
    pub probability: f64,
    pub z: f64,
}

pub fn threshold_from_prob(q: f64) -> Result<DefaultThreshold> {
    if !(q > 0.0 && q < 1.0) {
        return Err(domain("threshold_from_prob", q, "(0, 1)"));
    }
    Ok(DefaultThreshold {
        probability: q,
        z: std_normal_inv(q)?,
    })
}

/// One-year default probability `F(1)` of a constant-hazard name.
pub fn horizon_default_prob(hazard_rate: f64) -> Result<f64> {
    default_cdf(hazard_rate, HORIZON_YEARS)
}

/// Probability that both latents fall below their thresholds.
///
/// Integrates the conditional form
/// `int_{-inf}^{z_a} phi(s) Phi((z_b - rho s) / sqrt(1 - rho^2)) ds`
/// with adaptive Gauss-Kronrod quadrature. This deliberately does not go
/// through [`crate::numerics::bivariate_normal_cdf`].
pub fn joint_default_prob(qa: f64, qb: f64, rho: f64) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return Err(domain("joint_default_prob", rho, "(-1, 1)"));
    }
    let a = threshold_from_prob(qa)?;
    let b = threshold_from_prob(qb)?;
    // The integral runs over the lower threshold's axis.
    let (za, zb) = if a.z <= b.z { (a.z, b.z) } else { (b.z, a.z) };
    let scale = (1.0 - rho * rho).sqrt();
    let integrand = |s: f64| std_normal_pdf(s) * std_normal_cdf((zb - rho * s) / scale);
    let lower = (za - 1.0).min(-9.0);
    Ok(adaptive_gauss_kronrod(&integrand, lower, za, 1e-14, 40).clamp(0.0, 1.0))
}

/// Both routes to the joint default probability and their absolute gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// Latent-threshold route.
    pub threshold_route: f64,
    /// Copula route.
    pub copula_route: f64,
    pub gap: f64,
}

pub fn verify_copula_equivalence(qa: f64, qb: f64, rho: f64) -> Result<EquivalenceReport> {
    let threshold_route = joint_default_prob(qa, qb, rho)?;
    let copula_route = gaussian_copula_2d(qa, qb, rho)?;
    Ok(EquivalenceReport {
        threshold_route,
        copula_route,
        gap: (threshold_route - copula_route).abs(),
    })
}

/// Linear factor model for asset values.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorModel {
    loadings: Vec<Vec<f64>>,
    factor_cov: Matrix,
    idiosyncratic: Vec<f64>,
    factor_root: CholeskyFactor,
}

impl FactorModel {
    /// `loadings` is `n x p`, `factor_cov` is `p x p` and `idiosyncratic`
    /// holds the `n` residual volatilities.
    pub fn new(loadings: Vec<Vec<f64>>, factor_cov: Matrix, idiosyncratic: Vec<f64>) -> Result<Self> {
        let p = factor_cov.dim();
        if loadings.len() != idiosyncratic.len() {
            return Err(Error::DimensionMismatch {
                expected: loadings.len(),
                found: idiosyncratic.len(),
            });
        }
        if let Some(row) = loadings.iter().find(|row| row.len() != p) {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: row.len(),
            });
        }
        if let Some(s) = idiosyncratic.iter().find(|s| !(**s >= 0.0)) {
            return Err(Error::InvalidInput(format!(
                "idiosyncratic volatility must be non-negative, got {s}"
            )));
        }
        let factor_root = cholesky(&factor_cov)?;
        let model = Self {
            loadings,
            factor_cov,
            idiosyncratic,
            factor_root,
        };
        for i in 0..model.names() {
            if !(model.total_variance(i) > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "name {i} has zero total variance"
                )));
            }
        }
        Ok(model)
    }

    /// One factor with unit variance and identical loading for every name.
    pub fn one_factor(n: usize, loading: f64, idiosyncratic: f64) -> Result<Self> {
        Self::new(
            vec![vec![loading]; n],
            Matrix::identity(1),
            vec![idiosyncratic; n],
        )
    }

    pub fn names(&self) -> usize {
        self.loadings.len()
    }

    pub fn factors(&self) -> usize {
        self.factor_cov.dim()
    }

    /// Systematic covariance `w_i^T Omega w_k`.
    pub fn systematic_cov(&self, i: usize, k: usize) -> f64 {
        let (wi, wk) = (&self.loadings[i], &self.loadings[k]);
        let p = self.factors();
        let mut acc = 0.0;
        for a in 0..p {
            for b in 0..p {
                acc += wi[a] * self.factor_cov[(a, b)] * wk[b];
            }
        }
        acc
    }

    pub fn total_variance(&self, i: usize) -> f64 {
        self.systematic_cov(i, i) + self.idiosyncratic[i] * self.idiosyncratic[i]
    }

    /// Raw (unstandardized) asset values from `p` independent factor normals
    /// and `n` independent idiosyncratic normals.
    pub fn sample_asset_values(&self, factor_normals: &[f64], idio_normals: &[f64]) -> Result<Vec<f64>> {
        if factor_normals.len() != self.factors() {
            return Err(Error::DimensionMismatch {
                expected: self.factors(),
                found: factor_normals.len(),
            });
        }
        if idio_normals.len() != self.names() {
            return Err(Error::DimensionMismatch {
                expected: self.names(),
                found: idio_normals.len(),
            });
        }
        let mut theta = vec![0.0; self.factors()];
        self.factor_root.apply_into(factor_normals, &mut theta);
        Ok(self
            .loadings
            .iter()
            .zip(&self.idiosyncratic)
            .zip(idio_normals)
            .map(|((w, s), e)| w.iter().zip(&theta).map(|(a, b)| a * b).sum::<f64>() + s * e)
            .collect())
    }
}

/// Correlation matrix of the standardized asset values.
pub fn implied_asset_correlation(model: &FactorModel) -> Result<CorrelationMatrix> {
    let n = model.names();
    let sd: Vec<f64> = (0..n)
        .map(|i| {
            let v = model.total_variance(i);
            if v > 0.0 {
                Ok(v.sqrt())
            } else {
                Err(Error::InvalidInput(format!("name {i} has zero total variance")))
            }
        })
        .collect::<Result<_>>()?;
    let mut corr = Matrix::identity(n);
    for i in 0..n {
        for k in 0..i {
            let c = (model.systematic_cov(i, k) / (sd[i] * sd[k])).clamp(-1.0, 1.0);
            corr[(i, k)] = c;
            corr[(k, i)] = c;
        }
    }
    CorrelationMatrix::new(corr)
}

// Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gauss_kronrod_15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

fn adaptive_gauss_kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = gauss_kronrod_15(f, a, b);
    if err <= tol || depth == 0 {
        return value;
    }
    let mid = 0.5 * (a + b);
    adaptive_gauss_kronrod(f, a, mid, 0.5 * tol, depth - 1)
        + adaptive_gauss_kronrod(f, mid, b, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_kronrod_integrates_polynomials_and_gaussian() {
        let cubic = |x: f64| 3.0 * x * x * x - x + 2.0;
        let (v, _) = gauss_kronrod_15(&cubic, -1.0, 2.0);
        assert!((v - (3.0 * 15.0 / 4.0 - 1.5 + 6.0)).abs() < 1e-13);
        let total = adaptive_gauss_kronrod(&std_normal_pdf, -12.0, 12.0, 1e-14, 30);
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn thresholds() {
        assert_eq!(threshold_from_prob(0.5).unwrap().z, 0.0);
        // Phi^-1 values from mpmath.
        let t = threshold_from_prob(0.022_750_1).unwrap();
        assert!((t.z + 2.000_000_591_732_287).abs() < 1e-9);
        let q = horizon_default_prob(0.2).unwrap();
        assert!((q - 0.181_269_246_922_018_14).abs() < 1e-15);
        let t = threshold_from_prob(q).unwrap();
        assert!((t.z + 0.910_538_677_386_551_3).abs() < 1e-10);
        assert!(threshold_from_prob(0.0).is_err());
        assert!(threshold_from_prob(1.0).is_err());
    }

    #[test]
    fn joint_probabilities() {
        assert!((joint_default_prob(0.5, 0.5, 0.0).unwrap() - 0.25).abs() < 1e-13);
        let arcsine = 0.25 + 0.1f64.asin() / (2.0 * PI);
        assert!((joint_default_prob(0.5, 0.5, 0.1).unwrap() - arcsine).abs() < 1e-12);
        // Near-comonotonic: mpmath gives 0.19500501047936391 at rho = 0.999;
        // the gap to q closes like sqrt(1 - rho).
        let near = joint_default_prob(0.2, 0.2, 0.999).unwrap();
        assert!((near - 0.195_005_010_479_363_9).abs() < 1e-10);
        assert!((joint_default_prob(0.2, 0.2, 0.99999).unwrap() - 0.2).abs() < 1e-3);
        // mpmath reference at h = 0.2 margins
        let q = 0.181_269_246_922_018_14;
        let got = joint_default_prob(q, q, 0.1).unwrap();
        assert!((got - 0.040_094_299_178_100_94).abs() < 1e-12);
        assert!(joint_default_prob(0.5, 0.5, 1.0).is_err());
        assert!(joint_default_prob(0.0, 0.5, 0.1).is_err());
    }

    #[test]
    fn equivalence_examples() {
        let q = 0.181_269_2;
        assert!(verify_copula_equivalence(q, q, 0.1).unwrap().gap <= 1e-10);
        let r = verify_copula_equivalence(0.5, 0.5, 0.0).unwrap();
        assert!((r.threshold_route - 0.25).abs() < 1e-14);
        assert_eq!(r.copula_route, 0.25);
        assert!(r.gap < 1e-14);
        assert!(verify_copula_equivalence(0.01, 0.99, -0.5).unwrap().gap <= 1e-10);
    }

    #[test]
    fn one_factor_reproduces_uniform_correlation() {
        let model = FactorModel::one_factor(5, 0.1f64.sqrt(), 0.9f64.sqrt()).unwrap();
        let corr = implied_asset_correlation(&model).unwrap();
        for i in 0..5 {
            for k in 0..5 {
                let expected = if i == k { 1.0 } else { 0.1 };
                assert!((corr.get(i, k) - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_loadings_give_identity() {
        let model = FactorModel::new(vec![vec![0.0, 0.0]; 3], Matrix::identity(2), vec![0.7; 3]).unwrap();
        let corr = implied_asset_correlation(&model).unwrap();
        assert_eq!(corr.matrix(), &Matrix::identity(3));
    }

    #[test]
    fn rescaled_name_matches_formula() {
        let cov = Matrix::from_rows(&[vec![1.0, 0.3], vec![0.3, 2.0]]).unwrap();
        let loadings = vec![vec![0.5, 0.2], vec![0.1, 0.6], vec![0.4, -0.3]];
        let idio = vec![0.8, 0.5, 1.1];
        let base = FactorModel::new(loadings.clone(), cov.clone(), idio.clone()).unwrap();
        let base_corr = implied_asset_correlation(&base).unwrap();

        // Scale name 0's loadings by c and pick sigma so total variance is unchanged.
        let c = 1.3;
        let systematic = base.systematic_cov(0, 0);
        let total = base.total_variance(0);
        let sigma = (total - c * c * systematic).sqrt();
        let mut scaled_loadings = loadings;
        scaled_loadings[0] = scaled_loadings[0].iter().map(|w| w * c).collect();
        let mut scaled_idio = idio;
        scaled_idio[0] = sigma;
        let scaled = FactorModel::new(scaled_loadings, cov, scaled_idio).unwrap();
        let scaled_corr = implied_asset_correlation(&scaled).unwrap();

        for k in 1..3 {
            assert!((scaled_corr.get(0, k) - c * base_corr.get(0, k)).abs() < 1e-14);
        }
        assert!((scaled_corr.get(1, 2) - base_corr.get(1, 2)).abs() < 1e-15);
    }

    #[test]
    fn model_validation() {
        assert!(FactorModel::new(vec![vec![0.0]], Matrix::identity(1), vec![0.0]).is_err());
        assert!(FactorModel::new(vec![vec![1.0, 0.0]], Matrix::identity(1), vec![1.0]).is_err());
        assert!(FactorModel::new(vec![vec![1.0]], Matrix::identity(1), vec![1.0, 1.0]).is_err());
        let bad_cov = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(
            FactorModel::new(vec![vec![1.0, 1.0]], bad_cov, vec![1.0]),
            Err(Error::NotPsd { .. })
        ));
    }
}

#![allow(clippy::excessive_precision)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{domain, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_677_94;

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal CDF `Pr[Z <= x]`.
///
/// Evaluated through `erfc`, so the lower tail keeps full relative precision
/// (`std_normal_cdf(-8.0)` is about `6.22e-16`, not zero).
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal survival function `Pr[Z > x] = std_normal_cdf(-x)`.
pub fn std_normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Inverse of the standard normal CDF.
///
/// Wichura's AS241 rational approximation followed by one Halley step against
/// [`std_normal_cdf`]. Returns a domain error unless `0 < u < 1`.
pub fn std_normal_inv(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(domain("std_normal_inv", u, "(0, 1)"));
    }
    let x = as241(u);
    Ok(halley_refine(x, u))
}

fn halley_refine(x: f64, u: f64) -> f64 {
    // Work in the tail the point lives in to avoid cancellation near u = 1.
    let err = if x <= 0.0 {
        std_normal_cdf(x) - u
    } else {
        (1.0 - u) - std_normal_sf(x)
    };
    let t = err * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    if !t.is_finite() {
        return x;
    }
    x - t / (1.0 + 0.5 * x * t)
}

/// AS241 `PPND16`: relative accuracy about 1e-16 on its own.
pub(crate) fn as241(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q
            * (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r
                + 6.7265770927008700853e4)
                * r
                + 4.5921953931549871457e4)
                * r
                + 1.3731693765509461125e4)
                * r
                + 1.9715909503065514427e3)
                * r
                + 1.3314166789178437745e2)
                * r
                + 3.3871328727963666080e0)
            / (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r
                + 3.9307895800092710610e4)
                * r
                + 2.1213794301586595867e4)
                * r
                + 5.3941960214247511077e3)
                * r
                + 6.8718700749205790830e2)
                * r
                + 4.2313330701600911252e1)
                * r
                + 1.0);
    }

    let tail = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-tail.ln()).sqrt();
    let value = if r <= 5.0 {
        r -= 1.6;
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r
            + 2.41780725177450611770e-1)
            * r
            + 1.27045825245236838258e0)
            * r
            + 3.64784832476320460504e0)
            * r
            + 5.76949722146069140550e0)
            * r
            + 4.63033784615654529590e0)
            * r
            + 1.42343711074968357734e0)
            / (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r
                + 1.51986665636164571966e-2)
                * r
                + 1.48103976427480074590e-1)
                * r
                + 6.89767334985100004550e-1)
                * r
                + 1.67638483018380384940e0)
                * r
                + 2.05319162663775882187e0)
                * r
                + 1.0)
    } else {
        r -= 5.0;
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r
            + 1.24266094738807843860e-3)
            * r
            + 2.65321895265761230930e-2)
            * r
            + 2.96560571828504891230e-1)
            * r
            + 1.78482653991729133580e0)
            * r
            + 5.46378491116411436990e0)
            * r
            + 6.65790464350110377720e0)
            / (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r
                + 1.84631831751005468180e-5)
                * r
                + 7.86869131145613259100e-4)
                * r
                + 1.48753612908506148525e-2)
                * r
                + 1.36929880922735805310e-1)
                * r
                + 5.99832206555887937690e-1)
                * r
                + 1.0)
    };
    if q < 0.0 {
        -value
    } else {
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    // Reference values computed with mpmath at 40 digits.
    const PHI_1_959964: f64 = 0.975_000_000_903_557_6;
    const PHI_MINUS_8: f64 = 6.220_960_574_271_784e-16;
    const INV_0_975: f64 = 1.959_963_984_540_054_2;

    #[test]
    fn cdf_at_zero_is_half() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
    }

    #[test]
    fn cdf_reference_points() {
        assert!((std_normal_cdf(1.959964) - PHI_1_959964).abs() <= 1e-12);
        assert!((std_normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() <= 1e-12);
        let lower = std_normal_cdf(-8.0);
        assert!(lower > 0.0);
        assert!((lower - PHI_MINUS_8).abs() / PHI_MINUS_8 < 1e-12);
    }

    #[test]
    fn sf_is_reflected_cdf() {
        for &x in &[-5.0, -1.3, 0.0, 0.7, 8.0] {
            assert_eq!(std_normal_sf(x), std_normal_cdf(-x));
        }
    }

    #[test]
    fn inverse_reference_points() {
        assert_eq!(std_normal_inv(0.5).unwrap(), 0.0);
        assert!((std_normal_inv(0.975).unwrap() - INV_0_975).abs() <= 1e-12);
        assert!((std_normal_inv(PHI_MINUS_8).unwrap() + 8.0).abs() <= 1e-9);
    }

    #[test]
    fn raw_rational_approximation_is_already_accurate() {
        assert!((as241(0.975) - INV_0_975).abs() <= 1e-13);
        assert!((as241(0.025) + INV_0_975).abs() <= 1e-13);
        assert!((as241(PHI_MINUS_8) + 8.0).abs() <= 1e-12);
        assert!((as241(1e-300) + 37.047_096_299_361_2).abs() <= 1e-9);
    }

    #[test]
    fn inverse_rejects_boundaries() {
        for &u in &[0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(std_normal_inv(u), Err(Error::Domain { .. })));
        }
    }

    #[test]
    fn round_trip_on_log_grid() {
        let mut u = 1e-12;
        while u < 0.5 {
            for p in [u, 1.0 - u] {
                let x = std_normal_inv(p).unwrap();
                assert!((std_normal_cdf(x) - p).abs() <= 1e-9, "p = {p}");
            }
            u *= 1.7;
        }
    }
}

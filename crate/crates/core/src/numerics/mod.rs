//! Scalar numerical primitives: the univariate and bivariate standard normal
//! distribution functions, the inverse normal CDF and Cholesky factorization.

mod bivariate;
mod matrix;
mod normal;

pub use bivariate::bivariate_normal_cdf;
pub use matrix::{cholesky, CholeskyFactor, CorrelationMatrix, Matrix};
pub use normal::{std_normal_cdf, std_normal_inv, std_normal_pdf, std_normal_sf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pivots in `(-PIVOT_TOL, PIVOT_TOL)` are treated as zero.
const PIVOT_TOL: f64 = 1e-12;
/// Off-diagonal residual allowed below a zero pivot.
const RANK_TOL: f64 = 1e-10;
const SYMMETRY_TOL: f64 = 1e-12;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    /// `self * self^T`.
    pub fn mul_transpose(&self) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b).sum();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Lower-triangular `L` with `L * L^T` equal to the factored matrix.
///
/// Correlated draws are produced as `L * z` for a column vector `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    lower: Matrix,
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.lower
    }

    /// Writes `L * z` into `out`. Lengths are not checked.
    pub(crate) fn apply_into(&self, z: &[f64], out: &mut [f64]) {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.lower.row(i)[..=i]
                .iter()
                .zip(z)
                .map(|(l, zj)| l * zj)
                .sum();
        }
    }

    pub fn reconstruct(&self) -> Matrix {
        self.lower.mul_transpose()
    }
}

/// Cholesky factorization of a symmetric positive semi-definite matrix.
///
/// Pivots within `1e-12` of zero are clamped to zero, which admits singular
/// correlation structures. A pivot below `-1e-12` fails with
/// [`Error::NotPsd`] naming its (zero-based) index.
pub fn cholesky(m: &Matrix) -> Result<CholeskyFactor> {
    let n = m.dim();
    if !m.is_symmetric(SYMMETRY_TOL) {
        return Err(Error::InvalidCorrelation("matrix is not symmetric".into()));
    }
    let mut l = Matrix::zeros(n);
    for j in 0..n {
        let partial: f64 = l.row(j)[..j].iter().map(|v| v * v).sum();
        let pivot = m[(j, j)] - partial;
        if pivot < -PIVOT_TOL || pivot.is_nan() {
            return Err(Error::NotPsd { pivot: j, value: pivot });
        }
        let diag = if pivot < PIVOT_TOL { 0.0 } else { pivot.sqrt() };
        l[(j, j)] = diag;
        for i in j + 1..n {
            let dot: f64 = l.row(i)[..j].iter().zip(&l.row(j)[..j]).map(|(a, b)| a * b).sum();
            let residual = m[(i, j)] - dot;
            l[(i, j)] = if diag > 0.0 {
                residual / diag
            } else if residual.abs() <= RANK_TOL {
                0.0
            } else {
                return Err(Error::NotPsd { pivot: j, value: pivot });
            };
        }
    }
    Ok(CholeskyFactor { lower: l })
}

/// Validated asset correlation matrix: symmetric, unit diagonal, entries in
/// `[-1, 1]` and positive semi-definite.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    matrix: Matrix,
    factor: CholeskyFactor,
}

impl CorrelationMatrix {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let n = matrix.dim();
        if n == 0 {
            return Err(Error::InvalidCorrelation("empty matrix".into()));
        }
        for i in 0..n {
            if matrix[(i, i)] != 1.0 {
                return Err(Error::InvalidCorrelation(format!(
                    "diagonal entry ({i}, {i}) is {} (must be 1)",
                    matrix[(i, i)]
                )));
            }
            for j in 0..n {
                let v = matrix[(i, j)];
                if !(-1.0..=1.0).contains(&v) {
                    return Err(Error::InvalidCorrelation(format!(
                        "entry ({i}, {j}) = {v} outside [-1, 1]"
                    )));
                }
            }
        }
        if !matrix.is_symmetric(SYMMETRY_TOL) {
            return Err(Error::InvalidCorrelation("matrix is not symmetric".into()));
        }
        let factor = cholesky(&matrix)?;
        Ok(Self { matrix, factor })
    }

    /// `n` names with pairwise correlation `rho`.
    pub fn uniform(n: usize, rho: f64) -> Result<Self> {
        let mut m = Matrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m[(i, j)] = rho;
                }
            }
        }
        Self::new(m)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(Matrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn cholesky(&self) -> &CholeskyFactor {
        &self.factor
    }
}

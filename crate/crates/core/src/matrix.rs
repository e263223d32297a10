//! Dense complex matrices, tolerance bands and Hermitian validation.
//!
//! Every matrix entering the library passes through [`validate_hermitian`],
//! which rejects non-finite input, checks the Hermitian defect against
//! `eps_herm` and stores the symmetrized result so that
//! `a[(i, j)] == a[(j, i)].conj()` holds bit-for-bit afterwards.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry ({i}, {j}) is not finite")]
    NonFinite { i: usize, j: usize },
    #[error("entries ({i}, {j}) and ({j}, {i}) are not conjugate: deviation {deviation:e}")]
    NotHermitian { i: usize, j: usize, deviation: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
}

/// Tolerance bands used for entry classification, symmetry, rank and
/// factorization residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub eps_mod: f64,
    pub eps_herm: f64,
    pub eps_rank: f64,
    pub eps_residual: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eps_mod: 1e-8,
            eps_herm: 1e-10,
            eps_rank: 1e-10,
            eps_residual: 1e-10,
        }
    }
}

impl ToleranceConfig {
    pub fn new(
        eps_mod: f64,
        eps_herm: f64,
        eps_rank: f64,
        eps_residual: f64,
    ) -> Result<Self, MatrixError> {
        let tol = Self {
            eps_mod,
            eps_herm,
            eps_rank,
            eps_residual,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<(), MatrixError> {
        let fields = [
            ("eps_mod", self.eps_mod),
            ("eps_herm", self.eps_herm),
            ("eps_rank", self.eps_rank),
            ("eps_residual", self.eps_residual),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(MatrixError::InvalidTolerance(format!(
                    "{name} must be finite and strictly positive, got {value}"
                )));
            }
        }
        // The Zero and Unit bands would overlap at |z| = 0.5.
        if self.eps_mod >= 0.5 {
            return Err(MatrixError::InvalidTolerance(format!(
                "eps_mod must be below 0.5, got {}",
                self.eps_mod
            )));
        }
        Ok(())
    }

    pub fn with_eps_mod(mut self, eps_mod: f64) -> Result<Self, MatrixError> {
        self.eps_mod = eps_mod;
        self.validate().map(|_| self)
    }

    pub fn with_eps_herm(mut self, eps_herm: f64) -> Result<Self, MatrixError> {
        self.eps_herm = eps_herm;
        self.validate().map(|_| self)
    }
}

/// Modulus band of a single entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntryClass {
    Zero,
    Unit,
    OutOfClass,
}

pub fn classify_entry(z: Complex64, tol: &ToleranceConfig) -> EntryClass {
    let modulus = z.norm();
    if modulus <= tol.eps_mod {
        EntryClass::Zero
    } else if (modulus - 1.0).abs() <= tol.eps_mod {
        EntryClass::Unit
    } else {
        EntryClass::OutOfClass
    }
}

/// Row-major dense complex matrix. Not necessarily square or Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from equally long rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend_from_slice(row);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, rhs: &CMatrix) -> Result<CMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>, MatrixError> {
        if x.len() != self.cols {
            return Err(MatrixError::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Submatrix with the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> CMatrix {
        CMatrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> Result<f64, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|z| format_complex(*z)).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn format_complex(z: Complex64) -> String {
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => format!("{}", z.re + 0.0),
        (true, false) => format!("{}i", z.im),
        _ => format!("{}{:+}i", z.re, z.im),
    }
}

/// A validated, exactly Hermitian square matrix together with the
/// tolerances every downstream decision is made against.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: CMatrix,
    tol: ToleranceConfig,
}

impl HermitianMatrix {
    pub fn n(&self) -> usize {
        self.data.rows
    }

    pub fn tol(&self) -> &ToleranceConfig {
        &self.tol
    }

    pub fn with_tol(mut self, tol: ToleranceConfig) -> Self {
        self.tol = tol;
        self
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: CMatrix::identity(n),
            tol: ToleranceConfig::default(),
        }
    }

    /// The all-ones matrix.
    pub fn ones(n: usize) -> Self {
        Self {
            data: CMatrix::from_fn(n, n, |_, _| ONE),
            tol: ToleranceConfig::default(),
        }
    }

    /// Builds `v v*` for a vector `v`; exactly Hermitian when the diagonal is
    /// computed as `|v_i|^2`.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let data = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(v[i].norm_sqr(), 0.0)
            } else {
                v[i] * v[j].conj()
            }
        });
        Self {
            data,
            tol: ToleranceConfig::default(),
        }
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        validate_hermitian(CMatrix::from_real_rows(rows), ToleranceConfig::default())
    }

    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        validate_hermitian(CMatrix::from_rows(rows), ToleranceConfig::default())
    }

    /// Wraps a matrix that is Hermitian by construction. The caller must
    /// guarantee exact conjugate symmetry and a real diagonal.
    pub(crate) fn from_exact(data: CMatrix, tol: ToleranceConfig) -> Self {
        debug_assert!(data.is_square());
        debug_assert!((0..data.rows).all(|i| (0..data.rows)
            .all(|j| data[(i, j)] == data[(j, i)].conj())));
        Self { data, tol }
    }

    /// Principal submatrix on `idx`; Hermitian again.
    pub fn principal(&self, idx: &[usize]) -> HermitianMatrix {
        Self {
            data: self.data.select(idx, idx),
            tol: self.tol,
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.data[(i, i)].re).sum()
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.data[idx]
    }
}

impl fmt::Display for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.data.fmt(f)
    }
}

/// Accepts `raw` if `max |raw[i][j] - conj(raw[j][i])| <= eps_herm` and
/// returns the symmetrized matrix `(raw + raw*) / 2`.
///
/// On failure the pair with the largest deviation is reported (first in
/// row-major order on ties).
pub fn validate_hermitian(raw: CMatrix, tol: ToleranceConfig) -> Result<HermitianMatrix, MatrixError> {
    tol.validate()?;
    if !raw.is_square() {
        return Err(MatrixError::NotSquare {
            rows: raw.rows,
            cols: raw.cols,
        });
    }
    let n = raw.rows;
    for i in 0..n {
        for j in 0..n {
            let z = raw[(i, j)];
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(MatrixError::NonFinite { i, j });
            }
        }
    }

    let mut worst: Option<(usize, usize, f64)> = None;
    for i in 0..n {
        for j in i..n {
            let deviation = (raw[(i, j)] - raw[(j, i)].conj()).norm();
            if deviation > tol.eps_herm && worst.is_none_or(|(_, _, d)| deviation > d) {
                worst = Some((i, j, deviation));
            }
        }
    }
    if let Some((i, j, deviation)) = worst {
        return Err(MatrixError::NotHermitian { i, j, deviation });
    }

    let mut data = raw;
    for i in 0..n {
        data[(i, i)] = Complex64::new(data[(i, i)].re, 0.0);
        for j in i + 1..n {
            let upper = (data[(i, j)] + data[(j, i)].conj()) * 0.5;
            data[(i, j)] = upper;
            data[(j, i)] = upper.conj();
        }
    }
    Ok(HermitianMatrix { data, tol })
}

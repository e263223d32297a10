//! Structured LU and Cholesky factors read off a canonical certificate.
//!
//! For a block with root `r` (its smallest member) and phases `d`, the LU
//! factor keeps a unit diagonal in `L` and puts `d_i conj(d_r)` in the root
//! column, while `U` carries the root row `d_r conj(d_j)`. Cholesky keeps only
//! the root column. Because roots are block minima, both factors are
//! triangular in the original index order; no elimination is performed.

use num_complex::Complex64;

use crate::certificate::{Certificate, CertificateError};
use crate::matrix::{classify_entry, CMatrix, EntryClass, HermitianMatrix, MatrixError, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    /// `A = L U`.
    Lu,
    /// `A = L L*`.
    Cholesky,
}

impl FactorKind {
    pub fn name(self) -> &'static str {
        match self {
            FactorKind::Lu => "lu",
            FactorKind::Cholesky => "cholesky",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair {
    pub kind: FactorKind,
    pub l: CMatrix,
    /// Absent for Cholesky, where the cofactor is `L*`.
    pub u: Option<CMatrix>,
}

impl FactorPair {
    pub fn n(&self) -> usize {
        self.l.rows()
    }

    /// `L U` or `L L*`.
    pub fn product(&self) -> CMatrix {
        let right = match &self.u {
            Some(u) => u.clone(),
            None => self.l.adjoint(),
        };
        self.l.mul(&right).expect("factors are square of equal size")
    }
}

pub fn lu_structured(cert: &Certificate) -> Result<FactorPair, CertificateError> {
    cert.require_canonical()?;
    let n = cert.n();
    let d = cert.phases();
    let mut l = CMatrix::identity(n);
    let mut u = CMatrix::zeros(n, n);
    for block in cert.blocks() {
        let r = block[0];
        for &i in block {
            if i != r {
                l[(i, r)] = d[i] * d[r].conj();
            }
            u[(r, i)] = d[r] * d[i].conj();
        }
    }
    Ok(FactorPair {
        kind: FactorKind::Lu,
        l,
        u: Some(u),
    })
}

pub fn cholesky_structured(cert: &Certificate) -> Result<FactorPair, CertificateError> {
    cert.require_canonical()?;
    let n = cert.n();
    let d = cert.phases();
    let mut l = CMatrix::zeros(n, n);
    for block in cert.blocks() {
        let r = block[0];
        for &i in block {
            l[(i, r)] = d[i] * d[r].conj();
        }
    }
    Ok(FactorPair {
        kind: FactorKind::Cholesky,
        l,
        u: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorReport {
    /// `‖L U − A‖_max` or `‖L L* − A‖_max`.
    pub residual: f64,
    pub residual_bound: f64,
    /// Nonzero entries above the diagonal of `L` or below that of `U`.
    pub pattern_violations: usize,
    /// Factor entries whose modulus is in neither the 0 nor the 1 band.
    pub out_of_class_entries: usize,
    pub passed: bool,
}

fn count_pattern_violations(m: &CMatrix, lower: bool) -> usize {
    let n = m.rows();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| if lower { j > i } else { j < i })
        .filter(|&(i, j)| m[(i, j)] != ZERO)
        .count()
}

/// Passes iff the residual is at most `eps_residual · n` and both factors
/// have exact triangular patterns.
pub fn verify_factorization(a: &HermitianMatrix, f: &FactorPair) -> Result<FactorReport, MatrixError> {
    let n = a.n();
    let shapes_ok = f.l.rows() == n
        && f.l.is_square()
        && f.u.as_ref().is_none_or(|u| u.rows() == n && u.is_square());
    if !shapes_ok {
        return Err(MatrixError::DimensionMismatch {
            expected: n,
            found: f.l.rows(),
        });
    }
    let tol = a.tol();
    let residual = f.product().max_abs_diff(a.as_matrix())?;
    let mut pattern_violations = count_pattern_violations(&f.l, true);
    let mut factors = vec![&f.l];
    if let Some(u) = &f.u {
        pattern_violations += count_pattern_violations(u, false);
        factors.push(u);
    }
    let out_of_class_entries = factors
        .iter()
        .flat_map(|m| m.as_slice())
        .filter(|&&z| classify_entry(z, tol) == EntryClass::OutOfClass)
        .count();
    let residual_bound = tol.eps_residual * n as f64;
    Ok(FactorReport {
        residual,
        residual_bound,
        pattern_violations,
        out_of_class_entries,
        passed: residual <= residual_bound && pattern_violations == 0,
    })
}

/// `conj(d_i) · M_ij · d_j`: removes the unitary diagonal similarity. For
/// structured factors the result is a (0,1) matrix up to rounding.
pub fn strip_phases(m: &CMatrix, phases: &[Complex64]) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |i, j| phases[i].conj() * m[(i, j)] * phases[j])
}

/// Every nonzero entry replaced by 1.
pub fn erase_phases(m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |i, j| if m[(i, j)] == ZERO { ZERO } else { ONE })
}

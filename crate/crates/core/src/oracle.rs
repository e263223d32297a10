//! Numerical ground truth: PSD verdicts from the full spectrum, numerical
//! rank, and the principal submatrix rank property.
//!
//! Nothing here looks at entry moduli; the oracle is meant to be checked
//! against the combinatorial recognizer, not to share code paths with it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{hermitian_eigen, singular_values};
use crate::matrix::{CMatrix, HermitianMatrix, ToleranceConfig, ZERO};

/// Largest dimension accepted by exhaustive PSRP checking.
pub const MAX_EXHAUSTIVE_N: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("subset is empty")]
    EmptySubset,
    #[error("index {index} is out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("exhaustive checking is limited to n <= {MAX_EXHAUSTIVE_N}, got n = {0}")]
    TooLargeForExhaustive(usize),
    #[error("sampled checking needs at least one sample")]
    NoSamples,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleVerdict {
    pub psd: bool,
    pub min_eigenvalue: f64,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues at or above `-threshold` count as nonnegative.
    pub threshold: f64,
    /// Unit eigenvector of the most negative eigenvalue; present iff not PSD.
    pub witness: Option<Vec<Complex64>>,
}

/// PSD iff `λ_min >= -eps_rank · n · max|λ|`.
pub fn psd_oracle(a: &HermitianMatrix) -> OracleVerdict {
    let n = a.n();
    let eig = hermitian_eigen(a.as_matrix());
    let spectral_radius = eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let threshold = a.tol().eps_rank * n as f64 * spectral_radius;
    let min_eigenvalue = eig.values.first().copied().unwrap_or(0.0);
    let psd = min_eigenvalue >= -threshold;
    let witness = (!psd).then(|| eig.vector(0));
    OracleVerdict {
        psd,
        min_eigenvalue,
        eigenvalues: eig.values,
        threshold,
        witness,
    }
}

/// Singular values above `eps_rank · max(rows, cols) · σ_max`.
pub fn numerical_rank(m: &CMatrix, tol: &ToleranceConfig) -> usize {
    let sv = singular_values(m);
    let Some(&largest) = sv.first() else {
        return 0;
    };
    if largest == 0.0 {
        return 0;
    }
    let cutoff = tol.eps_rank * m.rows().max(m.cols()) as f64 * largest;
    sv.iter().filter(|&&s| s > cutoff).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetOutcome {
    /// Row strip `A[α, :]` has the rank of `A[α, α]`.
    pub cond_i: bool,
    /// Column strip `A[:, α]` has the rank of `A[α, α]`.
    pub cond_ii: bool,
    pub rank_principal: usize,
    pub rank_row_strip: usize,
    pub rank_col_strip: usize,
}

fn check_subset(a: &CMatrix, alpha: &[usize]) -> Result<(), OracleError> {
    if !a.is_square() {
        return Err(OracleError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if alpha.is_empty() {
        return Err(OracleError::EmptySubset);
    }
    let n = a.rows();
    if let Some(&index) = alpha.iter().find(|&&i| i >= n) {
        return Err(OracleError::IndexOutOfRange { index, n });
    }
    Ok(())
}

/// Rank comparison for one index set. The principal submatrix's columns are
/// among the strip's columns, so equal ranks mean equal column spaces.
pub fn psrp_subset(a: &CMatrix, alpha: &[usize], tol: &ToleranceConfig) -> Result<SubsetOutcome, OracleError> {
    check_subset(a, alpha)?;
    let all: Vec<usize> = (0..a.rows()).collect();
    let rank_principal = numerical_rank(&a.select(alpha, alpha), tol);
    let rank_row_strip = numerical_rank(&a.select(alpha, &all), tol);
    let rank_col_strip = numerical_rank(&a.select(&all, alpha), tol);
    Ok(SubsetOutcome {
        cond_i: rank_principal == rank_row_strip,
        cond_ii: rank_principal == rank_col_strip,
        rank_principal,
        rank_row_strip,
        rank_col_strip,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsrpMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

impl PsrpMode {
    pub fn name(&self) -> &'static str {
        match self {
            PsrpMode::Exhaustive => "exhaustive",
            PsrpMode::Sampled { .. } => "sampled",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsrpCondition {
    /// Condition (i): rows of `α` against the principal submatrix.
    RowStrip,
    /// Condition (ii): columns of `α` against the principal submatrix.
    ColumnStrip,
}

impl PsrpCondition {
    pub fn label(self) -> &'static str {
        match self {
            PsrpCondition::RowStrip => "i",
            PsrpCondition::ColumnStrip => "ii",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsrpFailure {
    pub subset: Vec<usize>,
    pub rank_principal: usize,
    pub rank_strip: usize,
    pub condition: PsrpCondition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsrpReport {
    pub mode: PsrpMode,
    pub subsets_checked: usize,
    pub failures: Vec<PsrpFailure>,
    pub passed: bool,
}

fn subsets_for(n: usize, mode: PsrpMode) -> Result<Vec<Vec<usize>>, OracleError> {
    match mode {
        PsrpMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_N {
                return Err(OracleError::TooLargeForExhaustive(n));
            }
            Ok((1u32..1 << n)
                .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
                .collect())
        }
        PsrpMode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(OracleError::NoSamples);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..samples)
                .map(|_| loop {
                    let subset: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
                    if !subset.is_empty() {
                        break subset;
                    }
                })
                .collect())
        }
    }
}

/// Checks both PSRP conditions over every nonempty subset (exhaustive) or
/// over seeded random subsets. Failures are reported in enumeration order.
pub fn psrp_check(a: &CMatrix, mode: PsrpMode, tol: &ToleranceConfig) -> Result<PsrpReport, OracleError> {
    if !a.is_square() {
        return Err(OracleError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() == 0 {
        return Err(OracleError::EmptySubset);
    }
    let subsets = subsets_for(a.rows(), mode)?;
    let outcomes: Vec<SubsetOutcome> = subsets
        .par_iter()
        .map(|alpha| psrp_subset(a, alpha, tol))
        .collect::<Result<_, _>>()?;

    let mut failures = Vec::new();
    for (alpha, outcome) in subsets.iter().zip(&outcomes) {
        if !outcome.cond_i {
            failures.push(PsrpFailure {
                subset: alpha.clone(),
                rank_principal: outcome.rank_principal,
                rank_strip: outcome.rank_row_strip,
                condition: PsrpCondition::RowStrip,
            });
        }
        if !outcome.cond_ii {
            failures.push(PsrpFailure {
                subset: alpha.clone(),
                rank_principal: outcome.rank_principal,
                rank_strip: outcome.rank_col_strip,
                condition: PsrpCondition::ColumnStrip,
            });
        }
    }
    Ok(PsrpReport {
        mode,
        subsets_checked: subsets.len(),
        passed: failures.is_empty(),
        failures,
    })
}

/// For PSD `A` and `B = A[α, α]`: every null vector `w` of `B`, extended by
/// zeros to `v`, satisfies `A v = 0`. Returns whether that holds numerically
/// (`‖A v‖_max <= eps_rank · n`). Only meaningful for PSD input.
pub fn null_extension_check(a: &HermitianMatrix, alpha: &[usize]) -> Result<bool, OracleError> {
    check_subset(a.as_matrix(), alpha)?;
    let n = a.n();
    let tol = a.tol();
    let eig = hermitian_eigen(a.principal(alpha).as_matrix());
    let largest = eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let cutoff = tol.eps_rank * alpha.len() as f64 * largest;

    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda.abs() > cutoff {
            continue;
        }
        let mut v = vec![ZERO; n];
        for (&i, w) in alpha.iter().zip(eig.vector(k)) {
            v[i] = w;
        }
        let av = a.as_matrix().mul_vec(&v).expect("v has length n");
        let residual = av.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if residual > tol.eps_rank * n as f64 {
            return Ok(false);
        }
    }
    Ok(true)
}

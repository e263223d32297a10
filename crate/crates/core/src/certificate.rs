//! Block-decomposition certificates and the unitary monomial similarity they
//! encode.
//!
//! A certificate lists disjoint index blocks `B_1..B_m`, a zero set `Z`, and
//! a unit-modulus phase per index. It stands for the matrix
//! `A_ij = d_i * conj(d_j)` when `i` and `j` share a block and `0` otherwise,
//! which is `M S M*` for the monomial matrix `M = Q D` gathering each block
//! into consecutive positions and `S = J_{k_1} ⊕ … ⊕ J_{k_m} ⊕ 0`.

use num_complex::Complex64;
use thiserror::Error;

use crate::matrix::{CMatrix, HermitianMatrix, MatrixError, ToleranceConfig, ONE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertificateError {
    #[error("index {index} is out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index {0} appears more than once")]
    Overlap(usize),
    #[error("index {0} is covered by neither a block nor the zero set")]
    Uncovered(usize),
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("expected {expected} phases, found {found}")]
    PhaseCount { expected: usize, found: usize },
    #[error("phase at index {index} has modulus {modulus}, not 1")]
    NonUnitPhase { index: usize, modulus: f64 },
    #[error("certificate is not in canonical form")]
    NotCanonical,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    n: usize,
    blocks: Vec<Vec<usize>>,
    zero_set: Vec<usize>,
    phases: Vec<Complex64>,
    tolerance_used: ToleranceConfig,
}

impl Certificate {
    /// Checks the structural invariants: blocks and zero set partition
    /// `0..n`, no block is empty, and every phase is unit modulus within
    /// `eps_mod`. Canonical order is not required here.
    pub fn new(
        n: usize,
        blocks: Vec<Vec<usize>>,
        zero_set: Vec<usize>,
        phases: Vec<Complex64>,
        tolerance_used: ToleranceConfig,
    ) -> Result<Self, CertificateError> {
        tolerance_used.validate()?;
        if phases.len() != n {
            return Err(CertificateError::PhaseCount {
                expected: n,
                found: phases.len(),
            });
        }
        let mut seen = vec![false; n];
        for (k, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(CertificateError::EmptyBlock(k));
            }
        }
        for &index in blocks.iter().flatten().chain(&zero_set) {
            if index >= n {
                return Err(CertificateError::IndexOutOfRange { index, n });
            }
            if std::mem::replace(&mut seen[index], true) {
                return Err(CertificateError::Overlap(index));
            }
        }
        if let Some(index) = seen.iter().position(|s| !s) {
            return Err(CertificateError::Uncovered(index));
        }
        for (index, phase) in phases.iter().enumerate() {
            let modulus = phase.norm();
            if !modulus.is_finite() || (modulus - 1.0).abs() > tolerance_used.eps_mod {
                return Err(CertificateError::NonUnitPhase { index, modulus });
            }
        }
        Ok(Self {
            n,
            blocks,
            zero_set,
            phases,
            tolerance_used,
        })
    }

    /// Certificate of the all-ones matrix with phases `d` (one block).
    pub fn single_block(phases: Vec<Complex64>) -> Result<Self, CertificateError> {
        let n = phases.len();
        Self::new(n, vec![(0..n).collect()], Vec::new(), phases, ToleranceConfig::default())
    }

    /// Certificate of the identity: `n` singleton blocks.
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            blocks: (0..n).map(|i| vec![i]).collect(),
            zero_set: Vec::new(),
            phases: vec![ONE; n],
            tolerance_used: ToleranceConfig::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn zero_set(&self) -> &[usize] {
        &self.zero_set
    }

    /// One phase per index; indices in the zero set carry a phase too
    /// (exactly 1 after canonicalization).
    pub fn phases(&self) -> &[Complex64] {
        &self.phases
    }

    pub fn tolerance_used(&self) -> &ToleranceConfig {
        &self.tolerance_used
    }

    pub fn with_tolerance(mut self, tol: ToleranceConfig) -> Self {
        self.tolerance_used = tol;
        self
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Rank of the reconstructed matrix: one per block.
    pub fn rank(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of every position, `None` for the zero set.
    pub fn block_of(&self) -> Vec<Option<usize>> {
        let mut owner = vec![None; self.n];
        for (k, block) in self.blocks.iter().enumerate() {
            for &i in block {
                owner[i] = Some(k);
            }
        }
        owner
    }

    /// Smallest member of each index's block, `None` for the zero set.
    pub fn roots(&self) -> Vec<Option<usize>> {
        let mut root = vec![None; self.n];
        for block in &self.blocks {
            let r = *block.iter().min().expect("blocks are nonempty");
            for &i in block {
                root[i] = Some(r);
            }
        }
        root
    }

    pub fn is_canonical(&self) -> bool {
        let blocks_sorted = self.blocks.iter().all(|b| b.windows(2).all(|w| w[0] < w[1]));
        let order_sorted = self.blocks.windows(2).all(|w| w[0][0] < w[1][0]);
        let zero_sorted = self.zero_set.windows(2).all(|w| w[0] < w[1]);
        let roots_gauged = self.blocks.iter().all(|b| self.phases[b[0]] == ONE);
        let zeros_gauged = self.zero_set.iter().all(|&i| self.phases[i] == ONE);
        blocks_sorted && order_sorted && zero_sorted && roots_gauged && zeros_gauged
    }

    pub(crate) fn require_canonical(&self) -> Result<(), CertificateError> {
        if self.is_canonical() {
            Ok(())
        } else {
            Err(CertificateError::NotCanonical)
        }
    }
}

/// `A_ij = d_i conj(d_j)` on shared blocks, zero elsewhere; the diagonal of
/// every block is exactly 1.
pub fn reconstruct(cert: &Certificate) -> HermitianMatrix {
    let n = cert.n;
    let mut a = CMatrix::zeros(n, n);
    let d = &cert.phases;
    for block in &cert.blocks {
        for (x, &i) in block.iter().enumerate() {
            a[(i, i)] = ONE;
            for &j in &block[x + 1..] {
                let v = d[i] * d[j].conj();
                a[(i, j)] = v;
                a[(j, i)] = v.conj();
            }
        }
    }
    HermitianMatrix::from_exact(a, cert.tolerance_used)
}

/// Blocks sorted internally and by smallest member, zero set sorted, each
/// block's phases multiplied by the conjugate of its root phase so that the
/// root carries exactly 1. Idempotent.
pub fn canonicalize(cert: &Certificate) -> Certificate {
    let mut blocks = cert.blocks.clone();
    for block in &mut blocks {
        block.sort_unstable();
    }
    blocks.sort_by_key(|b| b[0]);
    let mut zero_set = cert.zero_set.clone();
    zero_set.sort_unstable();

    let mut phases = cert.phases.clone();
    for block in &blocks {
        let gauge = cert.phases[block[0]].conj();
        for &i in &block[1..] {
            phases[i] = cert.phases[i] * gauge;
        }
        phases[block[0]] = ONE;
    }
    for &i in &zero_set {
        phases[i] = ONE;
    }
    Certificate {
        n: cert.n,
        blocks,
        zero_set,
        phases,
        tolerance_used: cert.tolerance_used,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares `a` with the matrix the certificate stands for, against the
/// certificate's `eps_mod`.
pub fn verify(cert: &Certificate, a: &HermitianMatrix) -> Result<VerifyReport, CertificateError> {
    if a.n() != cert.n {
        return Err(MatrixError::DimensionMismatch {
            expected: cert.n,
            found: a.n(),
        }
        .into());
    }
    let max_deviation = reconstruct(cert).as_matrix().max_abs_diff(a.as_matrix())?;
    let tolerance = cert.tolerance_used.eps_mod;
    Ok(VerifyReport {
        max_deviation,
        tolerance,
        passed: max_deviation <= tolerance,
    })
}

/// Unitary monomial matrix `M = Q D`: `perm[p]` is the original index placed
/// at gathered position `p` (so `M[perm[p], p] = diag[p]`), and `diag[p]` is
/// the unit-modulus scale of that column.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialSimilarity {
    pub perm: Vec<usize>,
    pub diag: Vec<Complex64>,
}

impl MonomialSimilarity {
    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn to_matrix(&self) -> CMatrix {
        let n = self.n();
        let mut m = CMatrix::zeros(n, n);
        for (p, (&row, &scale)) in self.perm.iter().zip(&self.diag).enumerate() {
            m[(row, p)] = scale;
        }
        m
    }

    pub fn is_identity_permutation(&self) -> bool {
        self.perm.iter().enumerate().all(|(p, &i)| p == i)
    }

    /// `M S M*`, computed entrywise without forming `M`.
    pub fn conjugate(&self, s: &CMatrix) -> Result<CMatrix, MatrixError> {
        let n = self.n();
        if s.rows() != n || !s.is_square() {
            return Err(MatrixError::DimensionMismatch {
                expected: n,
                found: s.rows(),
            });
        }
        let mut out = CMatrix::zeros(n, n);
        for p in 0..n {
            for q in 0..n {
                out[(self.perm[p], self.perm[q])] = self.diag[p] * s[(p, q)] * self.diag[q].conj();
            }
        }
        Ok(out)
    }
}

/// `J_{k_1} ⊕ … ⊕ J_{k_m} ⊕ 0` of total dimension `n`.
pub fn gathered_form(block_sizes: &[usize], n: usize) -> CMatrix {
    let mut s = CMatrix::zeros(n, n);
    let mut start = 0;
    for &k in block_sizes {
        for i in start..start + k {
            for j in start..start + k {
                s[(i, j)] = ONE;
            }
        }
        start += k;
    }
    debug_assert!(start <= n);
    s
}

/// The monomial similarity and block sizes with `reconstruct(cert) = M S M*`.
/// Blocks are gathered in canonical order, members keep their relative
/// order, and the zero set goes last.
pub fn materialize_similarity(
    cert: &Certificate,
) -> Result<(MonomialSimilarity, Vec<usize>), CertificateError> {
    cert.require_canonical()?;
    let perm: Vec<usize> = cert
        .blocks
        .iter()
        .flatten()
        .chain(&cert.zero_set)
        .copied()
        .collect();
    let diag = perm.iter().map(|&i| cert.phases[i]).collect();
    Ok((MonomialSimilarity { perm, diag }, cert.block_sizes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cert(n: usize, blocks: Vec<Vec<usize>>, zero_set: Vec<usize>, phases: Vec<Complex64>) -> Certificate {
        Certificate::new(n, blocks, zero_set, phases, ToleranceConfig::default()).unwrap()
    }

    #[test]
    fn reconstruct_identity_and_ones() {
        assert_eq!(reconstruct(&Certificate::identity(3)), HermitianMatrix::identity(3));
        let j3 = cert(3, vec![vec![0, 1, 2]], vec![], vec![ONE; 3]);
        assert_eq!(reconstruct(&j3), HermitianMatrix::ones(3));
    }

    #[test]
    fn reconstruct_phased_block() {
        let d = vec![ONE, c(0.0, 1.0), c(-1.0, 0.0)];
        let a = reconstruct(&Certificate::single_block(d).unwrap());
        let expected = CMatrix::from_rows(&[
            [c(1.0, 0.0), c(0.0, -1.0), c(-1.0, 0.0)],
            [c(0.0, 1.0), c(1.0, 0.0), c(0.0, -1.0)],
            [c(-1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)],
        ]);
        assert_eq!(a.as_matrix().max_abs_diff(&expected).unwrap(), 0.0);
    }

    #[test]
    fn malformed_certificates_rejected() {
        let tol = ToleranceConfig::default();
        assert_eq!(
            Certificate::new(3, vec![vec![0, 1], vec![1, 2]], vec![], vec![ONE; 3], tol),
            Err(CertificateError::Overlap(1))
        );
        assert_eq!(
            Certificate::new(3, vec![vec![0, 1]], vec![], vec![ONE; 3], tol),
            Err(CertificateError::Uncovered(2))
        );
        assert_eq!(
            Certificate::new(2, vec![vec![0, 2]], vec![], vec![ONE; 2], tol),
            Err(CertificateError::IndexOutOfRange { index: 2, n: 2 })
        );
        assert_eq!(
            Certificate::new(1, vec![vec![]], vec![0], vec![ONE], tol),
            Err(CertificateError::EmptyBlock(0))
        );
        assert!(matches!(
            Certificate::new(1, vec![vec![0]], vec![], vec![c(0.5, 0.0)], tol),
            Err(CertificateError::NonUnitPhase { index: 0, .. })
        ));
        assert!(matches!(
            Certificate::new(2, vec![vec![0, 1]], vec![], vec![ONE], tol),
            Err(CertificateError::PhaseCount { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn canonical_block_order() {
        let raw = cert(3, vec![vec![1], vec![2, 0]], vec![], vec![ONE; 3]);
        let canon = canonicalize(&raw);
        assert_eq!(canon.blocks(), &[vec![0, 2], vec![1]]);
        assert!(canon.is_canonical());
        assert!(!raw.is_canonical());
    }

    #[test]
    fn canonical_gauge_moves_root_phase_to_one() {
        let raw = cert(2, vec![vec![0, 1]], vec![], vec![c(0.0, 1.0), c(-1.0, 0.0)]);
        let canon = canonicalize(&raw);
        assert_eq!(canon.phases(), &[ONE, c(0.0, 1.0)]);
        assert_eq!(reconstruct(&raw), reconstruct(&canon));
    }

    #[test]
    fn verify_reports_deviation() {
        let j3 = cert(3, vec![vec![0, 1, 2]], vec![], vec![ONE; 3]);
        let report = verify(&j3, &HermitianMatrix::ones(3)).unwrap();
        assert!(report.passed);
        assert_eq!(report.max_deviation, 0.0);
        let report = verify(&j3, &HermitianMatrix::identity(3)).unwrap();
        assert!(!report.passed);
        assert_eq!(report.max_deviation, 1.0);
        assert!(verify(&j3, &HermitianMatrix::identity(2)).is_err());
    }

    #[test]
    fn materialize_identity() {
        let (m, sizes) = materialize_similarity(&Certificate::identity(3)).unwrap();
        assert!(m.is_identity_permutation());
        assert_eq!(m.diag, vec![ONE; 3]);
        assert_eq!(sizes, vec![1, 1, 1]);
        assert_eq!(gathered_form(&sizes, 3), CMatrix::identity(3));
    }

    #[test]
    fn materialize_gathers_split_block() {
        let c13 = cert(3, vec![vec![0, 2], vec![1]], vec![], vec![ONE; 3]);
        let (m, sizes) = materialize_similarity(&c13).unwrap();
        assert_eq!(m.perm, vec![0, 2, 1]);
        assert_eq!(sizes, vec![2, 1]);
        let s = gathered_form(&sizes, 3);
        let via_matrix = m.to_matrix().mul(&s).unwrap().mul(&m.to_matrix().adjoint()).unwrap();
        let target = reconstruct(&c13);
        assert_eq!(via_matrix.max_abs_diff(target.as_matrix()).unwrap(), 0.0);
        assert_eq!(m.conjugate(&s).unwrap(), via_matrix);
    }

    #[test]
    fn materialize_phased_single_block() {
        let d = vec![ONE, c(0.0, 1.0), c(-1.0, 0.0)];
        let cert = Certificate::single_block(d.clone()).unwrap();
        let (m, sizes) = materialize_similarity(&cert).unwrap();
        assert!(m.is_identity_permutation());
        assert_eq!(m.diag, d);
        let back = m.conjugate(&gathered_form(&sizes, 3)).unwrap();
        assert_eq!(back.max_abs_diff(reconstruct(&cert).as_matrix()).unwrap(), 0.0);
    }

    #[test]
    fn materialize_requires_canonical() {
        let raw = cert(2, vec![vec![1], vec![0]], vec![], vec![ONE; 2]);
        assert_eq!(materialize_similarity(&raw), Err(CertificateError::NotCanonical));
    }

    #[test]
    fn zero_set_is_gathered_last() {
        let with_zero = cert(3, vec![vec![1, 2]], vec![0], vec![ONE; 3]);
        let (m, sizes) = materialize_similarity(&with_zero).unwrap();
        assert_eq!(m.perm, vec![1, 2, 0]);
        let back = m.conjugate(&gathered_form(&sizes, 3)).unwrap();
        assert_eq!(back, reconstruct(&with_zero).into_matrix());
    }
}

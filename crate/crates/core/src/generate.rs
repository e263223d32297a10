//! Seeded generators: in-class certificates and single-defect mutations of
//! accepted matrices.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::certificate::{canonicalize, Certificate};
use crate::matrix::{CMatrix, HermitianMatrix, ToleranceConfig, ONE, ZERO};
use crate::recognize::recognize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("invalid block sizes: min {min}, max {max}, n {n}")]
    BlockSizes { min: usize, max: usize, n: usize },
    #[error("zero probability must lie in [0, 1]")]
    ZeroProbability,
    #[error("matrix is not accepted by the recognizer")]
    NotAccepted,
    #[error("{kind} needs {requirement}")]
    Inapplicable { kind: MutationKind, requirement: &'static str },
    #[error("site {0:?} does not fit this mutation")]
    BadSite(Vec<usize>),
}

/// Distribution of phases attached to block members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseAlphabet {
    /// Uniform angle on the circle.
    #[default]
    Uniform,
    /// `{1, i, -1, -i}`, exact in floating point.
    FourthRoots,
    /// Eighth roots of unity.
    EighthRoots,
    /// All phases 1; reconstructions are (0,1) matrices.
    Ones,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    /// Smallest block size drawn.
    pub min_block: usize,
    /// Largest block size drawn; `None` means `n`.
    pub max_block: Option<usize>,
    /// Chance that an index lands in the zero set.
    pub zero_probability: f64,
    pub alphabet: PhaseAlphabet,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            min_block: 1,
            max_block: None,
            zero_probability: 0.1,
            alphabet: PhaseAlphabet::Uniform,
        }
    }
}

fn draw_phase(rng: &mut ChaCha8Rng, alphabet: PhaseAlphabet) -> Complex64 {
    match alphabet {
        PhaseAlphabet::Uniform => Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)),
        PhaseAlphabet::FourthRoots => {
            [ONE, Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)][rng.gen_range(0..4)]
        }
        PhaseAlphabet::EighthRoots => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            [
                ONE,
                Complex64::new(h, h),
                Complex64::new(0.0, 1.0),
                Complex64::new(-h, h),
                Complex64::new(-1.0, 0.0),
                Complex64::new(-h, -h),
                Complex64::new(0.0, -1.0),
                Complex64::new(h, -h),
            ][rng.gen_range(0..8)]
        }
        PhaseAlphabet::Ones => ONE,
    }
}

/// Deterministic in `(n, seed, params)`. Indices are shuffled, each goes
/// to the zero set with `zero_probability`, and the rest are cut into blocks
/// with sizes uniform in `[min_block, max_block]`. A remainder smaller than
/// `min_block` joins the zero set. The result is canonical.
pub fn random_certificate(n: usize, seed: u64, params: &GenParams) -> Result<Certificate, GenerateError> {
    if n == 0 {
        return Err(GenerateError::EmptyDimension);
    }
    let max = params.max_block.unwrap_or(n).min(n);
    if params.min_block == 0 || params.min_block > max {
        return Err(GenerateError::BlockSizes {
            min: params.min_block,
            max: params.max_block.unwrap_or(n),
            n,
        });
    }
    if !(0.0..=1.0).contains(&params.zero_probability) {
        return Err(GenerateError::ZeroProbability);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut zero_set = Vec::new();
    let mut pool = Vec::new();
    for i in order {
        if rng.gen_bool(params.zero_probability) {
            zero_set.push(i);
        } else {
            pool.push(i);
        }
    }

    let mut blocks = Vec::new();
    let mut rest = pool.as_slice();
    while rest.len() >= params.min_block {
        let size = rng.gen_range(params.min_block..=max).min(rest.len());
        let (block, tail) = rest.split_at(size);
        blocks.push(block.to_vec());
        rest = tail;
    }
    zero_set.extend_from_slice(rest);

    let mut phases = vec![ONE; n];
    for &i in blocks.iter().flatten() {
        phases[i] = draw_phase(&mut rng, params.alphabet);
    }
    let cert = Certificate::new(n, blocks, zero_set, phases, ToleranceConfig::default())
        .expect("generated blocks partition the index set");
    Ok(canonicalize(&cert))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MutationKind {
    /// Negate one off-diagonal pair inside a block of size >= 3.
    PhaseFlip,
    /// Zero one off-diagonal pair inside a block of size >= 3.
    EdgeDelete,
    /// Set one diagonal entry to -1.
    DiagNegate,
    /// Zero the diagonal entry of a member of a block of size >= 2.
    DiagZero,
}

impl MutationKind {
    pub const ALL: [MutationKind; 4] = [
        MutationKind::PhaseFlip,
        MutationKind::EdgeDelete,
        MutationKind::DiagNegate,
        MutationKind::DiagZero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MutationKind::PhaseFlip => "phase_flip",
            MutationKind::EdgeDelete => "edge_delete",
            MutationKind::DiagNegate => "diag_negate",
            MutationKind::DiagZero => "diag_zero",
        }
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MutationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s || k.name().replace('_', "-") == s)
            .ok_or_else(|| format!("unknown mutation kind '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mutation {
    pub kind: MutationKind,
    /// `[i, j]` with `i < j` for off-diagonal kinds, `[i]` for diagonal ones.
    pub site: Vec<usize>,
    pub matrix: HermitianMatrix,
}

/// Applies one mutation at an explicit site, keeping exact Hermitian
/// symmetry. Every site allowed here creates a principal minor of negative
/// determinant, provided the input is in the class and the site matches its
/// block structure; only the shape of the site is checked.
pub fn apply_mutation(a: &HermitianMatrix, kind: MutationKind, site: &[usize]) -> Result<HermitianMatrix, GenerateError> {
    let n = a.n();
    let mut m: CMatrix = a.as_matrix().clone();
    match (kind, site) {
        (MutationKind::PhaseFlip | MutationKind::EdgeDelete, &[i, j]) if i < j && j < n => {
            let v = if kind == MutationKind::PhaseFlip { -m[(i, j)] } else { ZERO };
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
        (MutationKind::DiagNegate, &[i]) if i < n => m[(i, i)] = -ONE,
        (MutationKind::DiagZero, &[i]) if i < n => m[(i, i)] = ZERO,
        _ => return Err(GenerateError::BadSite(site.to_vec())),
    }
    Ok(HermitianMatrix::from_exact(m, *a.tol()))
}

/// Seeded mutation of an accepted matrix. The site is drawn among those
/// that leave the matrix not PSD for the given kind.
pub fn mutate(a: &HermitianMatrix, seed: u64, kind: MutationKind) -> Result<Mutation, GenerateError> {
    if a.n() == 0 {
        return Err(GenerateError::Inapplicable {
            kind,
            requirement: "a nonempty matrix",
        });
    }
    let cert = recognize(a).map_err(|_| GenerateError::NotAccepted)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let site = match kind {
        MutationKind::PhaseFlip | MutationKind::EdgeDelete => {
            let big: Vec<&Vec<usize>> = cert.blocks().iter().filter(|b| b.len() >= 3).collect();
            let block = big.choose(&mut rng).ok_or(GenerateError::Inapplicable {
                kind,
                requirement: "a block of size at least 3",
            })?;
            let mut pair: Vec<usize> = block.choose_multiple(&mut rng, 2).copied().collect();
            pair.sort_unstable();
            pair
        }
        MutationKind::DiagNegate => vec![rng.gen_range(0..a.n())],
        MutationKind::DiagZero => {
            let members: Vec<usize> = cert.blocks().iter().filter(|b| b.len() >= 2).flatten().copied().collect();
            let i = members.choose(&mut rng).ok_or(GenerateError::Inapplicable {
                kind,
                requirement: "a block of size at least 2",
            })?;
            vec![*i]
        }
    };
    let matrix = apply_mutation(a, kind, &site)?;
    Ok(Mutation { kind, site, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::reconstruct;
    use crate::recognize::{quadratic_form, RejectionReason};

    #[test]
    fn single_index_shapes() {
        for seed in 0..20 {
            let cert = random_certificate(1, seed, &GenParams::default()).unwrap();
            let shape = (cert.blocks().to_vec(), cert.zero_set().to_vec());
            assert!(shape == (vec![vec![0]], vec![]) || shape == (vec![], vec![0]));
        }
    }

    #[test]
    fn deterministic_and_canonical() {
        let params = GenParams::default();
        let a = random_certificate(30, 42, &params).unwrap();
        assert_eq!(a, random_certificate(30, 42, &params).unwrap());
        assert!(a.is_canonical());
        assert_ne!(a, random_certificate(30, 43, &params).unwrap());
    }

    #[test]
    fn generated_matrix_is_recognized() {
        let cert = random_certificate(50, 7, &GenParams::default()).unwrap();
        let back = recognize(&reconstruct(&cert)).unwrap();
        assert_eq!(back.blocks(), cert.blocks());
        assert_eq!(back.zero_set(), cert.zero_set());
    }

    #[test]
    fn impossible_params() {
        let params = GenParams {
            min_block: 5,
            ..GenParams::default()
        };
        assert!(matches!(random_certificate(4, 0, &params), Err(GenerateError::BlockSizes { .. })));
        assert_eq!(random_certificate(0, 0, &GenParams::default()), Err(GenerateError::EmptyDimension));
        let params = GenParams {
            zero_probability: 1.5,
            ..GenParams::default()
        };
        assert_eq!(random_certificate(3, 0, &params), Err(GenerateError::ZeroProbability));
    }

    #[test]
    fn block_size_bounds_respected() {
        let params = GenParams {
            min_block: 3,
            max_block: Some(5),
            zero_probability: 0.0,
            alphabet: PhaseAlphabet::FourthRoots,
        };
        for seed in 0..50 {
            let cert = random_certificate(23, seed, &params).unwrap();
            assert!(cert.block_sizes().iter().all(|&k| (3..=5).contains(&k)));
            assert!(cert.zero_set().len() < 3);
        }
    }

    #[test]
    fn explicit_mutations() {
        let j3 = HermitianMatrix::ones(3);
        let cut = apply_mutation(&j3, MutationKind::EdgeDelete, &[0, 2]).unwrap();
        assert_eq!(cut, HermitianMatrix::from_real_rows(&[[1.0, 1.0, 0.0], [1.0, 1.0, 1.0], [0.0, 1.0, 1.0]]).unwrap());
        assert_eq!(recognize(&cut).unwrap_err().reason, RejectionReason::NotPsd);

        let flip = apply_mutation(&j3, MutationKind::PhaseFlip, &[1, 2]).unwrap();
        assert_eq!(flip, HermitianMatrix::from_real_rows(&[[1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [1.0, -1.0, 1.0]]).unwrap());
        assert_eq!(recognize(&flip).unwrap_err().reason, RejectionReason::NotPsd);

        let neg = apply_mutation(&HermitianMatrix::identity(2), MutationKind::DiagNegate, &[0]).unwrap();
        let r = recognize(&neg).unwrap_err();
        assert_eq!(r.witness, Some(vec![ONE, ZERO]));

        assert_eq!(
            apply_mutation(&j3, MutationKind::PhaseFlip, &[2, 1]),
            Err(GenerateError::BadSite(vec![2, 1]))
        );
    }

    #[test]
    fn seeded_mutations_are_rejected() {
        let params = GenParams {
            min_block: 3,
            zero_probability: 0.0,
            ..GenParams::default()
        };
        for seed in 0..40 {
            let a = reconstruct(&random_certificate(12, seed, &params).unwrap());
            for kind in MutationKind::ALL {
                let m = mutate(&a, seed, kind).unwrap();
                let r = recognize(&m.matrix).unwrap_err();
                assert_eq!(r.reason, RejectionReason::NotPsd);
                assert!(quadratic_form(&m.matrix, r.witness.as_ref().unwrap()).unwrap() < -1e-6);
            }
        }
    }

    #[test]
    fn inapplicable_mutations() {
        let id = HermitianMatrix::identity(4);
        assert!(matches!(
            mutate(&id, 0, MutationKind::PhaseFlip),
            Err(GenerateError::Inapplicable { .. })
        ));
        assert!(matches!(
            mutate(&id, 0, MutationKind::DiagZero),
            Err(GenerateError::Inapplicable { .. })
        ));
        let bad = HermitianMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(mutate(&bad, 0, MutationKind::DiagNegate), Err(GenerateError::NotAccepted));
    }

    #[test]
    fn kind_names_parse() {
        for kind in MutationKind::ALL {
            assert_eq!(kind.name().parse::<MutationKind>().unwrap(), kind);
        }
        assert_eq!("edge-delete".parse::<MutationKind>().unwrap(), MutationKind::EdgeDelete);
        assert!("swap".parse::<MutationKind>().is_err());
    }
}

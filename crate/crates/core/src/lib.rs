//! Recognition, certificates and structured factorizations for Hermitian
//! positive semidefinite matrices whose entries have modulus 0 or 1.
//!
//! A Hermitian matrix with entries of modulus 0 or 1 is PSD exactly when a
//! unitary monomial similarity (a permutation times a unitary diagonal)
//! turns it into a direct sum of all-ones blocks and a zero block. The
//! [`recognize`](recognize::recognize) function decides membership in
//! `O(n²)` and returns either a [`Certificate`](certificate::Certificate)
//! describing that similarity or a [`Rejection`](recognize::Rejection)
//! carrying a vector `x` with `x* A x < 0`.
//!
//! ```
//! use unitpsd::prelude::*;
//!
//! let a = HermitianMatrix::ones(3);
//! let cert = recognize(&a).unwrap();
//! assert_eq!(cert.blocks(), &[vec![0, 1, 2]]);
//!
//! let lu = lu_structured(&cert).unwrap();
//! assert!(verify_factorization(&a, &lu).unwrap().passed);
//! assert!(psd_oracle(&a).psd);
//! ```

pub mod certificate;
pub mod cli;
pub mod factor;
pub mod generate;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod recognize;

pub use num_complex::Complex64;

pub mod prelude {
    pub use crate::certificate::{
        canonicalize, gathered_form, materialize_similarity, reconstruct, verify, Certificate,
        CertificateError, MonomialSimilarity, VerifyReport,
    };
    pub use crate::factor::{
        cholesky_structured, lu_structured, verify_factorization, FactorKind, FactorPair, FactorReport,
    };
    pub use crate::generate::{
        apply_mutation, mutate, random_certificate, GenParams, MutationKind, PhaseAlphabet,
    };
    pub use crate::matrix::{
        classify_entry, validate_hermitian, CMatrix, EntryClass, HermitianMatrix, MatrixError,
        ToleranceConfig,
    };
    pub use crate::oracle::{
        null_extension_check, numerical_rank, psd_oracle, psrp_check, psrp_subset, OracleVerdict,
        PsrpMode, PsrpReport,
    };
    pub use crate::recognize::{
        quadratic_form, recognize, recognize_binary, recognize_raw, Rejection, RejectionReason,
        SupportGraph,
    };
    pub use num_complex::Complex64;
}

//! The eigenvalue oracle and the principal submatrix rank check, on an
//! in-class matrix and on a generic Gram matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unitpsd::prelude::*;

fn report(name: &str, a: &HermitianMatrix) {
    let tol = a.tol();
    let verdict = psd_oracle(a);
    println!("{name}: n = {}, psd {}, min eigenvalue {:.3e}", a.n(), verdict.psd, verdict.min_eigenvalue);
    println!("  numerical rank {}", numerical_rank(a.as_matrix(), tol));
    let exhaustive = psrp_check(a.as_matrix(), PsrpMode::Exhaustive, tol).unwrap();
    println!("  exhaustive rank check: {} subsets, passed {}", exhaustive.subsets_checked, exhaustive.passed);
    let sampled = psrp_check(a.as_matrix(), PsrpMode::Sampled { samples: 32, seed: 3 }, tol).unwrap();
    println!("  sampled rank check: {} subsets, passed {}", sampled.subsets_checked, sampled.passed);
    println!("  null extension on {{0, 1}}: {}", null_extension_check(a, &[0, 1]).unwrap());
}

fn main() {
    let cert = random_certificate(8, 4, &GenParams::default()).unwrap();
    report("in class", &reconstruct(&cert));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = CMatrix::from_fn(3, 7, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let gram = validate_hermitian(g.adjoint().mul(&g).unwrap(), ToleranceConfig::default()).unwrap();
    report("rank 3 Gram", &gram);

    let path = HermitianMatrix::from_real_rows(&[[1.0, 1.0, 0.0], [1.0, 1.0, 1.0], [0.0, 1.0, 1.0]]).unwrap();
    let v = psd_oracle(&path);
    println!("path graph: psd {}, eigenvalues {:.4?}", v.psd, v.eigenvalues);
}

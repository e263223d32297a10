//! Structured LU and Cholesky factors straight from a certificate.

use unitpsd::factor::strip_phases;
use unitpsd::prelude::*;

fn main() {
    let params = GenParams {
        zero_probability: 0.2,
        alphabet: PhaseAlphabet::FourthRoots,
        ..GenParams::default()
    };
    let cert = random_certificate(6, 11, &params).unwrap();
    let a = reconstruct(&cert);
    println!("blocks {:?}, zero set {:?}\nA =\n{a}", cert.blocks(), cert.zero_set());

    let lu = lu_structured(&cert).unwrap();
    let u = lu.u.as_ref().unwrap();
    println!("L =\n{}\nU =\n{u}", lu.l);
    let report = verify_factorization(&a, &lu).unwrap();
    println!("LU residual {:e} (bound {:e}), passed {}", report.residual, report.residual_bound, report.passed);

    let chol = cholesky_structured(&cert).unwrap();
    println!("Cholesky L =\n{}", chol.l);
    println!("passed {}", verify_factorization(&a, &chol).unwrap().passed);

    // removing the phases leaves a 0/1 pattern
    println!("L with phases stripped =\n{}", strip_phases(&chol.l, cert.phases()));
}

//! Build a certificate by hand, materialize the monomial similarity and
//! check that it carries the gathered block form back to the matrix.

use unitpsd::prelude::*;

fn main() {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let tol = ToleranceConfig::default();

    // blocks {0, 3} and {1, 4}, index 2 in the zero set
    let phases = vec![one, i, one, -one, -i];
    let cert = Certificate::new(5, vec![vec![3, 0], vec![4, 1]], vec![2], phases, tol).unwrap();
    println!("as given, canonical: {}", cert.is_canonical());
    let cert = canonicalize(&cert);
    println!("canonical blocks {:?}", cert.blocks());
    for (i, d) in cert.phases().iter().enumerate() {
        println!("  d[{i}] = {:+.0} {:+.0}i", d.re + 0.0, d.im + 0.0);
    }

    let a = reconstruct(&cert);
    println!("A =\n{a}");

    let (m, sizes) = materialize_similarity(&cert).unwrap();
    let s = gathered_form(&sizes, cert.n());
    println!("gathered form (sizes {sizes:?}) =\n{s}");
    println!("perm {:?}", m.perm);
    let back = m.conjugate(&s).unwrap();
    println!("max |M S M* - A| = {:e}", back.max_abs_diff(a.as_matrix()).unwrap());

    let report = verify(&cert, &a).unwrap();
    println!("verify: deviation {:e}, passed {}", report.max_deviation, report.passed);
}

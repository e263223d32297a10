//! Recognize a few small matrices and print the certificate or the witness.
//!
//!     cargo run --example recognize

use unitpsd::prelude::*;

fn show(name: &str, a: &HermitianMatrix) {
    println!("{name}:\n{a}");
    match recognize(a) {
        Ok(cert) => {
            println!("  accepted, blocks {:?}, zero set {:?}", cert.blocks(), cert.zero_set());
            for (i, d) in cert.phases().iter().enumerate() {
                println!("  d[{i}] = {:.3} {:+.3}i", d.re + 0.0, d.im + 0.0);
            }
        }
        Err(r) => {
            println!("  rejected ({}): {}", r.reason.as_str(), r.detail);
            if let Some(x) = &r.witness {
                println!("  x*Ax = {:.6} on indices {:?}", quadratic_form(a, x).unwrap(), r.offending_indices);
            }
        }
    }
    println!();
}

fn main() {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);

    // d d* with d = (1, i, -1)
    let phased = HermitianMatrix::from_rows(&[[one, -i, -one], [i, one, -i], [-one, i, one]]).unwrap();
    show("rank one with phases", &phased);

    show("two blocks", &HermitianMatrix::from_real_rows(&[
        [1.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ]).unwrap());

    show("path graph", &HermitianMatrix::from_real_rows(&[[1.0, 1.0, 0.0], [1.0, 1.0, 1.0], [0.0, 1.0, 1.0]]).unwrap());

    // a frustrated triangle: every edge is unimodular but the phases cannot agree
    let flipped = HermitianMatrix::from_rows(&[[one, one, one], [one, one, -one], [one, -one, one]]).unwrap();
    show("phase-flipped triangle", &flipped);

    show("half entry", &HermitianMatrix::from_real_rows(&[[1.0, 0.5], [0.5, 1.0]]).unwrap());

}

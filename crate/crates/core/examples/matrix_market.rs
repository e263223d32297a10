//! Read a Matrix Market file, decompose it, and write the JSON report.
//!
//!     cargo run --example matrix_market [path.mtx]

use std::env;

use unitpsd::io::{emit, parse_matrix_str, read_matrix_file, write_matrix_market, CertificateDoc, RunReport};
use unitpsd::prelude::*;

const SAMPLE: &str = "\
%%MatrixMarket matrix coordinate complex hermitian
% rank one, phases (1, i, -1)
3 3 6
1 1 1 0
2 1 0 1
3 1 -1 0
2 2 1 0
3 2 0 1
3 3 1 0
";

fn main() {
    let tol = ToleranceConfig::default();
    let a = match env::args_os().nth(1) {
        Some(path) => read_matrix_file(path.as_ref(), tol),
        None => parse_matrix_str(SAMPLE, tol),
    };
    let a = match a {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(4);
        }
    };
    let outcome = recognize(&a);
    print!("{}", emit(&RunReport::from_outcome(&outcome, tol)));
    if let Ok(cert) = &outcome {
        print!("{}", emit(&CertificateDoc::from(cert)));
    }
    println!("written back:\n{}", write_matrix_market(&a));
}

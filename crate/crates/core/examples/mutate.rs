//! Generate seeded in-class matrices, break them in each of the four ways
//! and watch the recognizer reject them.

use unitpsd::prelude::*;

fn main() {
    let params = GenParams {
        min_block: 3,
        zero_probability: 0.0,
        ..GenParams::default()
    };
    let cert = random_certificate(9, 2024, &params).unwrap();
    let a = reconstruct(&cert);
    println!("generated n = 9, block sizes {:?}", cert.block_sizes());

    for kind in MutationKind::ALL {
        let m = mutate(&a, 7, kind).unwrap();
        match recognize(&m.matrix) {
            Ok(_) => println!("{kind:>12} at {:?}: accepted (unexpected)", m.site),
            Err(r) => {
                let value = r.witness_value.map_or(String::from("-"), |v| format!("{v:.4}"));
                println!("{kind:>12} at {:?}: {}, witness value {value}", m.site, r.reason.as_str());
            }
        }
    }

    // a targeted mutation at an explicit site
    let b = apply_mutation(&a, MutationKind::DiagNegate, &[0]).unwrap();
    println!("negating a[0][0]: oracle says psd = {}", psd_oracle(&b).psd);
}

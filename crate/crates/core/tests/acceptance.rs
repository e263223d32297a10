//! Acceptance suite. Runs every criterion at its pinned tolerance, prints one
//! PASS/FAIL line per criterion, and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use unitpsd::prelude::*;

const MACHINE_EPS: f64 = f64::EPSILON;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// All 1000 Hermitian 3x3 matrices with diagonal in {0, 1} and
/// off-diagonal entries in {0, ±1, ±i}.
fn exhaustive_3x3() -> Vec<HermitianMatrix> {
    let off = [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
    let mut out = Vec::with_capacity(1000);
    for diag in 0..8u32 {
        for a in off {
            for b in off {
                for e in off {
                    let d = |k: u32| c(f64::from(diag >> k & 1), 0.0);
                    let rows = [[d(0), a, b], [a.conj(), d(1), e], [b.conj(), e.conj(), d(2)]];
                    out.push(HermitianMatrix::from_rows(&rows).unwrap());
                }
            }
        }
    }
    out
}

/// The 1000 seeded certificates with n in [4, 64] shared by criteria 2-4.
fn sweep_certificates(base_seed: u64) -> Vec<Certificate> {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    (0..1000)
        .map(|k| {
            let n = rng.gen_range(4..=64);
            let params = GenParams {
                min_block: 1,
                max_block: Some(rng.gen_range(1..=n)),
                zero_probability: [0.0, 0.1, 0.3][k % 3],
                alphabet: PhaseAlphabet::Uniform,
            };
            random_certificate(n, base_seed * 10_000 + k as u64, &params).unwrap()
        })
        .collect()
}

fn is_identity(a: &HermitianMatrix, tol: f64) -> bool {
    a.as_matrix().max_abs_diff(&CMatrix::identity(a.n())).unwrap() <= tol
}

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let matrices = exhaustive_3x3();
    let mut disagreements = 0;
    let mut accepted = 0;
    for a in &matrices {
        let ours = recognize(a).is_ok();
        let oracle = psd_oracle(a).psd;
        accepted += usize::from(ours);
        disagreements += usize::from(ours != oracle);
    }
    let elapsed = start.elapsed();
    let summary = format!(
        "{} matrices, {accepted} accepted, {disagreements} disagreements, {:.3}s",
        matrices.len(),
        elapsed.as_secs_f64()
    );
    if matrices.len() == 1000 && disagreements == 0 && elapsed < Duration::from_secs(1) {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn criterion_2() -> Outcome {
    let certs = sweep_certificates(2);
    let mut failures = 0;
    let mut worst_phase = 0.0f64;
    for cert in &certs {
        let Ok(back) = recognize(&reconstruct(cert)) else {
            failures += 1;
            continue;
        };
        let back = canonicalize(&back);
        let phase_dev = back
            .phases()
            .iter()
            .zip(cert.phases())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        worst_phase = worst_phase.max(phase_dev);
        if back.blocks() != cert.blocks() || back.zero_set() != cert.zero_set() || phase_dev > 1e-8 {
            failures += 1;
        }
    }
    let summary = format!("{} certificates, {failures} failures, max phase deviation {worst_phase:.2e}", certs.len());
    if failures == 0 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn criterion_3() -> Outcome {
    let certs = sweep_certificates(2);
    let mut failures = Vec::new();
    for (k, cert) in certs.iter().enumerate() {
        let a = reconstruct(cert);
        let n = cert.n();
        let mut expected: Vec<f64> = cert.block_sizes().iter().map(|&s| s as f64).collect();
        expected.resize(n, 0.0);
        expected.sort_by(f64::total_cmp);
        let spectrum = psd_oracle(&a).eigenvalues;
        let spec_dev = spectrum.iter().zip(&expected).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let rank = numerical_rank(a.as_matrix(), a.tol());
        let trace_dev = (a.trace() - (n - cert.zero_set().len()) as f64).abs();
        if spec_dev > 1e-8 * n as f64 || rank != cert.rank() || trace_dev > 1e-10 * n as f64 {
            failures.push(format!("#{k}: spectrum {spec_dev:.2e}, rank {rank}/{}, trace {trace_dev:.2e}", cert.rank()));
        }
    }
    let summary = format!("{} matrices, {} failures", certs.len(), failures.len());
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; first: {}", failures[0]))
    }
}

fn criterion_4() -> Outcome {
    let mut accepted: Vec<HermitianMatrix> = exhaustive_3x3().into_iter().filter(|a| recognize(a).is_ok()).collect();
    accepted.extend(sweep_certificates(2).iter().map(reconstruct));
    let mut mismatches = 0;
    let mut full_rank = 0;
    for a in &accepted {
        let full = numerical_rank(a.as_matrix(), a.tol()) == a.n();
        full_rank += usize::from(full);
        if full != is_identity(a, 1e-10) {
            mismatches += 1;
        }
    }
    let mut identity_failures = 0;
    for n in 1..=64 {
        match recognize(&HermitianMatrix::identity(n)) {
            Ok(cert) if cert.rank() == n && cert.blocks().iter().all(|b| b.len() == 1) && cert.zero_set().is_empty() => {}
            _ => identity_failures += 1,
        }
    }
    let summary = format!(
        "{} accepted matrices, {full_rank} full rank, {mismatches} rank/identity mismatches, {identity_failures} identity failures",
        accepted.len()
    );
    if mismatches == 0 && identity_failures == 0 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn criterion_5() -> Outcome {
    let mut accepted: Vec<HermitianMatrix> = exhaustive_3x3().into_iter().filter(|a| recognize(a).is_ok()).collect();
    accepted.extend(sweep_certificates(2).iter().map(reconstruct));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..100 {
        let n = rng.gen_range(1..=64);
        let params = GenParams {
            min_block: n,
            zero_probability: 0.0,
            ..GenParams::default()
        };
        accepted.push(reconstruct(&random_certificate(n, 5_000 + k, &params).unwrap()));
    }

    let mut connected = 0;
    let mut failures = 0;
    for a in &accepted {
        if !SupportGraph::build(a).is_connected_full() {
            continue;
        }
        connected += 1;
        let cert = recognize(a).unwrap();
        let n = a.n();
        let d = cert.phases();
        let gauged = CMatrix::from_fn(n, n, |i, j| d[i].conj() * a[(i, j)] * d[j]);
        let ones = HermitianMatrix::ones(n).into_matrix();
        let single = cert.rank() == 1 && cert.blocks()[0].len() == n;
        let (m, _) = materialize_similarity(&cert).unwrap();
        if !single || gauged.max_abs_diff(&ones).unwrap() > 1e-10 || !m.is_identity_permutation() {
            failures += 1;
        }
    }
    let summary = format!("{connected} connected accepted matrices, {failures} failures");
    if failures == 0 && connected > 100 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn criterion_6() -> Outcome {
    let certs = sweep_certificates(6);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (k, cert) in certs.iter().enumerate() {
        let a = reconstruct(cert);
        let n = cert.n();
        let bound = 8.0 * MACHINE_EPS * n as f64;
        let lu = lu_structured(cert).unwrap();
        let chol = cholesky_structured(cert).unwrap();
        let u = lu.u.as_ref().unwrap();

        let lu_res = lu.product().max_abs_diff(a.as_matrix()).unwrap();
        let chol_res = chol.product().max_abs_diff(a.as_matrix()).unwrap();
        worst = worst.max(lu_res).max(chol_res);
        let unit_diag = (0..n).all(|i| lu.l[(i, i)] == Complex64::new(1.0, 0.0));
        let moduli_ok = [&lu.l, u, &chol.l]
            .iter()
            .flat_map(|m| m.as_slice())
            .all(|z| z.norm() <= 1e-12 || (z.norm() - 1.0).abs() <= 1e-12);
        let lu_report = verify_factorization(&a, &lu).unwrap();
        let chol_report = verify_factorization(&a, &chol).unwrap();
        let patterns_ok = lu_report.pattern_violations == 0 && chol_report.pattern_violations == 0;
        if lu_res > bound || chol_res > bound || !unit_diag || !moduli_ok || !patterns_ok {
            failures.push(k);
        }
    }
    let summary = format!("{} certificates, {} failures, worst residual {worst:.2e}", certs.len(), failures.len());
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; first failing #{}", failures[0]))
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    let mut seed = 70_000u64;
    for k in 0..500 {
        let kind = MutationKind::ALL[k % 4];
        let n = rng.gen_range(3..=32);
        let params = GenParams {
            min_block: 3,
            zero_probability: 0.1,
            ..GenParams::default()
        };
        let cert = loop {
            seed += 1;
            let cert = random_certificate(n, seed, &params).unwrap();
            if cert.block_sizes().iter().any(|&s| s >= 3) {
                break cert;
            }
        };
        let a = reconstruct(&cert);
        let m = mutate(&a, seed, kind).unwrap();
        match recognize(&m.matrix) {
            Ok(_) => failures.push(format!("#{k} {kind} accepted")),
            Err(r) if r.reason == RejectionReason::NotPsd => {
                let value = quadratic_form(&m.matrix, r.witness.as_ref().unwrap()).unwrap();
                worst = worst.max(value);
                if value >= -1e-6 {
                    failures.push(format!("#{k} {kind} weak witness {value:e}"));
                }
                if psd_oracle(&m.matrix).psd {
                    failures.push(format!("#{k} {kind} oracle says PSD"));
                }
            }
            Err(r) if r.reason == RejectionReason::OutOfClass => {}
            Err(r) => failures.push(format!("#{k} {kind} rejected as {}", r.reason)),
        }
    }
    let summary = format!("500 mutations, {} failures, largest x*Ax {worst:.3}", failures.len());
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; first: {}", failures[0]))
    }
}

fn criterion_8() -> Outcome {
    let tol = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut in_class = Vec::new();
    for k in 0..200 {
        let n = rng.gen_range(1..=10);
        let params = GenParams {
            zero_probability: 0.15,
            alphabet: PhaseAlphabet::FourthRoots,
            ..GenParams::default()
        };
        in_class.push(reconstruct(&random_certificate(n, 8_000 + k, &params).unwrap()));
    }
    let mut failures = Vec::new();
    for (k, a) in in_class.iter().enumerate() {
        if recognize(a).is_err() {
            failures.push(format!("in-class #{k} not accepted"));
        }
        if !psrp_check(a.as_matrix(), PsrpMode::Exhaustive, &tol).unwrap().passed {
            failures.push(format!("in-class #{k} fails PSRP"));
        }
    }

    for k in 0..200 {
        let n = rng.gen_range(1..=8);
        let rows = rng.gen_range(1..=n + 2);
        let g = CMatrix::from_fn(rows, n, |_, _| {
            c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        });
        let gram = validate_hermitian(g.adjoint().mul(&g).unwrap(), tol).unwrap();
        if !psd_oracle(&gram).psd {
            failures.push(format!("gram #{k} not PSD per oracle"));
        }
        if !psrp_check(gram.as_matrix(), PsrpMode::Exhaustive, &tol).unwrap().passed {
            failures.push(format!("gram #{k} (n={n}, rank<={rows}) fails PSRP"));
        }
    }

    for k in 0..100 {
        let a = &in_class[rng.gen_range(0..in_class.len())];
        let alpha = loop {
            let s: Vec<usize> = (0..a.n()).filter(|_| rng.gen_bool(0.5)).collect();
            if !s.is_empty() {
                break s;
            }
        };
        if !null_extension_check(a, &alpha).unwrap() {
            failures.push(format!("null extension #{k} on {alpha:?}"));
        }
    }

    let summary = format!("200 in-class + 200 Gram exhaustive checks, 100 null extensions, {} failures", failures.len());
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; first: {}", failures[0]))
    }
}

fn criterion_9() -> Outcome {
    let n = 2000;
    let params = GenParams {
        min_block: n,
        zero_probability: 0.0,
        ..GenParams::default()
    };
    let a = reconstruct(&random_certificate(n, 9, &params).unwrap());
    let start = Instant::now();
    let outcome = recognize(&a);
    let elapsed = start.elapsed();
    let summary = format!("n = {n}, recognize took {:.3}s", elapsed.as_secs_f64());
    match outcome {
        Ok(cert) if cert.rank() == 1 && elapsed < Duration::from_secs(5) => Ok(summary),
        Ok(_) => Err(summary),
        Err(r) => Err(format!("{summary}, rejected: {r}")),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 9] = [
        ("1 exhaustive 3x3 oracle agreement", criterion_1),
        ("2 randomized certificate round-trip", criterion_2),
        ("3 spectrum, rank and trace laws", criterion_3),
        ("4 full rank iff identity", criterion_4),
        ("5 connected support gives one gauged all-ones block", criterion_5),
        ("6 structured LU and Cholesky residuals", criterion_6),
        ("7 mutation rejection with witnesses", criterion_7),
        ("8 principal submatrix rank property", criterion_8),
        ("9 recognition of a 2000x2000 block", criterion_9),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(summary) => println!("PASS  criterion {name}: {summary}"),
            Err(summary) => {
                failed += 1;
                println!("FAIL  criterion {name}: {summary}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

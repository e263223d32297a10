//! Command-line front end. `run` never panics on bad input; every failure
//! maps to an exit code:
//!
//! | code | meaning                    |
//! |------|----------------------------|
//! | 0    | accepted / pass            |
//! | 1    | not PSD / fail             |
//! | 2    | entry modulus out of class |
//! | 3    | not Hermitian              |
//! | 4    | I/O or usage error         |

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use crate::certificate::{canonicalize, reconstruct, verify};
use crate::factor::{cholesky_structured, lu_structured};
use crate::generate::{mutate, random_certificate, GenParams, GenerateError, MutationKind, PhaseAlphabet};
use crate::io::{
    emit, read_certificate_file, read_matrix_file, write_matrix_market, CertificateDoc, FactorDoc, IoError,
    OracleDoc, PsrpDoc, RunReport, Verdict, VerifyDoc,
};
use crate::matrix::{HermitianMatrix, MatrixError, ToleranceConfig};
use crate::oracle::{psd_oracle, psrp_check, PsrpMode};
use crate::recognize::recognize;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "unitpsd",
    version,
    about = "Recognize Hermitian PSD matrices whose entries have modulus 0 or 1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Band half-width for classifying entry moduli as 0 or 1.
    #[arg(long, global = true, value_name = "EPS")]
    tol_mod: Option<f64>,
    /// Largest accepted |a_ij - conj(a_ji)|.
    #[arg(long, global = true, value_name = "EPS")]
    tol_herm: Option<f64>,
    /// Write the output document here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Print nothing on stdout.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the verdict only.
    Check { matrix: PathBuf },
    /// Print the certificate, or the rejection with its witness.
    Decompose { matrix: PathBuf },
    /// Print the structured LU factors.
    FactorLu { matrix: PathBuf },
    /// Print the structured Cholesky factor.
    FactorCholesky { matrix: PathBuf },
    /// Check the principal submatrix rank property.
    Psrp {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Numerical PSD verdict from the full spectrum.
    Oracle { matrix: PathBuf },
    /// Write a matrix file generated from a seeded certificate.
    Gen {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Block sizes as `MIN..MAX` or a single `K`.
        #[arg(long, value_name = "SIZES")]
        blocks: Option<BlockRange>,
        #[arg(long, default_value_t = 0.1)]
        zero_prob: f64,
        #[arg(long, value_enum, default_value_t = PhaseArg::Uniform)]
        phases: PhaseArg,
        /// Also write the generating certificate document here.
        #[arg(long, value_name = "PATH")]
        certificate_output: Option<PathBuf>,
    },
    /// Write a mutated copy of an accepted matrix.
    Mutate {
        matrix: PathBuf,
        #[arg(long)]
        kind: MutationKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check a certificate document against a matrix file.
    Verify { certificate: PathBuf, matrix: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PhaseArg {
    Uniform,
    Fourth,
    Eighth,
    Ones,
}

impl From<PhaseArg> for PhaseAlphabet {
    fn from(p: PhaseArg) -> Self {
        match p {
            PhaseArg::Uniform => PhaseAlphabet::Uniform,
            PhaseArg::Fourth => PhaseAlphabet::FourthRoots,
            PhaseArg::Eighth => PhaseAlphabet::EighthRoots,
            PhaseArg::Ones => PhaseAlphabet::Ones,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct BlockRange {
    min: usize,
    max: usize,
}

impl FromStr for BlockRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("'{t}' is not a block size"));
        let (min, max) = match s.split_once("..") {
            Some((lo, hi)) => (parse(lo)?, parse(hi)?),
            None => {
                let k = parse(s)?;
                (k, k)
            }
        };
        if min == 0 || min > max {
            return Err(format!("invalid block size range '{s}'"));
        }
        Ok(Self { min, max })
    }
}

struct Output<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    path: Option<PathBuf>,
    quiet: bool,
}

impl Output<'_> {
    fn document(&mut self, text: &str) -> Result<(), i32> {
        match &self.path {
            Some(path) => write_file(path, text).map_err(|e| self.fail(&e)),
            None => {
                if !self.quiet {
                    let _ = self.stdout.write_all(text.as_bytes());
                }
                Ok(())
            }
        }
    }

    fn line(&mut self, text: &str) {
        if !self.quiet {
            let _ = writeln!(self.stdout, "{text}");
        }
    }

    fn fail(&mut self, err: &dyn std::fmt::Display) -> i32 {
        let _ = writeln!(self.stderr, "error: {err}");
        EXIT_USAGE
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

fn io_exit(err: &IoError) -> i32 {
    match err {
        IoError::Matrix(MatrixError::NotHermitian { .. }) => Verdict::NotHermitian.exit_code(),
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and executes one subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{err}");
                    EXIT_PASS
                }
                _ => {
                    let _ = write!(stderr, "{err}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut out = Output {
        stdout,
        stderr,
        path: cli.output.clone(),
        quiet: cli.quiet,
    };
    let tol = match tolerances(&cli) {
        Ok(tol) => tol,
        Err(e) => return out.fail(&e),
    };
    match execute(cli.command, tol, &mut out) {
        Ok(code) | Err(code) => code,
    }
}

fn tolerances(cli: &Cli) -> Result<ToleranceConfig, MatrixError> {
    let mut tol = ToleranceConfig::default();
    if let Some(eps) = cli.tol_mod {
        tol = tol.with_eps_mod(eps)?;
    }
    if let Some(eps) = cli.tol_herm {
        tol = tol.with_eps_herm(eps)?;
    }
    Ok(tol)
}

/// Reads a matrix, reporting failures the way `decompose` would.
fn load(path: &Path, tol: ToleranceConfig, out: &mut Output<'_>) -> Result<HermitianMatrix, i32> {
    read_matrix_file(path, tol).map_err(|err| {
        let code = io_exit(&err);
        let _ = writeln!(out.stderr, "error: {err}");
        code
    })
}

fn execute(command: Command, tol: ToleranceConfig, out: &mut Output<'_>) -> Result<i32, i32> {
    match command {
        Command::Check { matrix } => {
            let verdict = match read_matrix_file(&matrix, tol) {
                Ok(a) => match recognize(&a) {
                    Ok(_) => Verdict::Accepted,
                    Err(r) => r.reason.into(),
                },
                Err(err) => {
                    let _ = writeln!(out.stderr, "error: {err}");
                    match err {
                        IoError::Matrix(MatrixError::NotHermitian { .. }) => Verdict::NotHermitian,
                        _ => Verdict::IoError,
                    }
                }
            };
            out.line(verdict.as_str());
            Ok(verdict.exit_code())
        }
        Command::Decompose { matrix } => {
            let report = match read_matrix_file(&matrix, tol) {
                Ok(a) => RunReport::from_outcome(&recognize(&a), tol),
                Err(IoError::Matrix(err @ MatrixError::NotHermitian { .. })) => {
                    RunReport::from_outcome(&Err(err.into()), tol)
                }
                Err(err) => RunReport::io_error(err.to_string()),
            };
            out.document(&emit(&report))?;
            Ok(report.verdict.exit_code())
        }
        Command::FactorLu { matrix } => factor(&matrix, tol, out, true),
        Command::FactorCholesky { matrix } => factor(&matrix, tol, out, false),
        Command::Psrp {
            matrix,
            mode,
            samples,
            seed,
        } => {
            let a = load(&matrix, tol, out)?;
            let mode = match mode {
                ModeArg::Exhaustive => PsrpMode::Exhaustive,
                ModeArg::Sampled => PsrpMode::Sampled { samples, seed },
            };
            let report = psrp_check(a.as_matrix(), mode, &tol).map_err(|e| out.fail(&e))?;
            out.document(&emit(&PsrpDoc::from(&report)))?;
            Ok(if report.passed { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Oracle { matrix } => {
            let a = load(&matrix, tol, out)?;
            let verdict = psd_oracle(&a);
            out.document(&emit(&OracleDoc::from(&verdict)))?;
            Ok(if verdict.psd { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Gen {
            n,
            seed,
            blocks,
            zero_prob,
            phases,
            certificate_output,
        } => {
            let params = GenParams {
                min_block: blocks.map_or(1, |b| b.min),
                max_block: blocks.map(|b| b.max),
                zero_probability: zero_prob,
                alphabet: phases.into(),
            };
            let cert = random_certificate(n, seed, &params)
                .map_err(|e| out.fail(&e))?
                .with_tolerance(tol);
            if let Some(path) = certificate_output {
                write_file(&path, &emit(&CertificateDoc::from(&cert))).map_err(|e| out.fail(&e))?;
            }
            out.document(&write_matrix_market(&reconstruct(&cert)))?;
            Ok(EXIT_PASS)
        }
        Command::Mutate { matrix, kind, seed } => {
            let a = load(&matrix, tol, out)?;
            match mutate(&a, seed, kind) {
                Ok(m) => {
                    out.document(&write_matrix_market(&m.matrix))?;
                    Ok(EXIT_PASS)
                }
                Err(GenerateError::NotAccepted) => {
                    let rejection = recognize(&a).expect_err("mutate only refuses rejected input");
                    let _ = writeln!(out.stderr, "error: input is not accepted: {rejection}");
                    Ok(Verdict::from(rejection.reason).exit_code())
                }
                Err(e) => Err(out.fail(&e)),
            }
        }
        Command::Verify { certificate, matrix } => {
            let cert = read_certificate_file(&certificate).map_err(|e| out.fail(&e))?;
            let a = load(&matrix, tol, out)?;
            let report = verify(&cert, &a).map_err(|e| out.fail(&e))?;
            out.document(&emit(&VerifyDoc::from(&report)))?;
            Ok(if report.passed { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

fn factor(path: &Path, tol: ToleranceConfig, out: &mut Output<'_>, lu: bool) -> Result<i32, i32> {
    let a = load(path, tol, out)?;
    match recognize(&a) {
        Ok(cert) => {
            let cert = canonicalize(&cert);
            let f = if lu { lu_structured(&cert) } else { cholesky_structured(&cert) }
                .expect("canonical certificates always factor");
            out.document(&emit(&FactorDoc::from(&f)))?;
            Ok(EXIT_PASS)
        }
        Err(rejection) => {
            let report = RunReport::from_outcome(&Err(rejection), tol);
            out.document(&emit(&report))?;
            Ok(report.verdict.exit_code())
        }
    }
}

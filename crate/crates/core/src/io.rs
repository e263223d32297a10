//! Matrix Market coordinate files and JSON report documents.
//!
//! Indices are 1-based on both sides of this boundary and 0-based
//! everywhere else in the crate. Documents are emitted with sorted keys and
//! shortest round-trip float formatting, so identical inputs always produce
//! byte-identical output.

use std::fs;
use std::io::BufRead;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{Certificate, CertificateError, VerifyReport};
use crate::factor::FactorPair;
use crate::matrix::{validate_hermitian, CMatrix, HermitianMatrix, MatrixError, ToleranceConfig, ZERO};
use crate::oracle::{OracleVerdict, PsrpReport};
use crate::recognize::{Rejection, RejectionReason};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("malformed document: {0}")]
    Document(String),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

impl IoError {
    fn syntax(line: usize, message: impl Into<String>) -> Self {
        IoError::Syntax {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Complex,
    Real,
    Integer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Symmetric,
    Hermitian,
}

/// Parsed coordinate file before densification. Indices are 1-based as in
/// the file.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDocument {
    pub field: Field,
    pub symmetry: Symmetry,
    pub n: usize,
    pub entries: Vec<(usize, usize, Complex64)>,
}

impl MatrixDocument {
    /// Dense matrix with the stored triangle mirrored (transpose for
    /// symmetric files, conjugate transpose for hermitian ones).
    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.n, self.n);
        for &(i, j, z) in &self.entries {
            let (i, j) = (i - 1, j - 1);
            m[(i, j)] = z;
            if i != j {
                match self.symmetry {
                    Symmetry::General => {}
                    Symmetry::Symmetric => m[(j, i)] = z,
                    Symmetry::Hermitian => m[(j, i)] = z.conj(),
                }
            }
        }
        m
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<(Field, Symmetry), IoError> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(IoError::syntax(
            lineno,
            "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'",
        ));
    }
    if tokens[1] != "matrix" {
        return Err(IoError::syntax(lineno, format!("unsupported object '{}'", tokens[1])));
    }
    if tokens[2] != "coordinate" {
        return Err(IoError::syntax(lineno, format!("unsupported format '{}'", tokens[2])));
    }
    let field = match tokens[3].as_str() {
        "complex" => Field::Complex,
        "real" => Field::Real,
        "integer" => Field::Integer,
        other => return Err(IoError::syntax(lineno, format!("unsupported field '{other}'"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(IoError::syntax(lineno, format!("unsupported symmetry '{other}'"))),
    };
    Ok((field, symmetry))
}

fn parse_index(token: &str, lineno: usize) -> Result<usize, IoError> {
    token
        .parse()
        .map_err(|_| IoError::syntax(lineno, format!("'{token}' is not an index")))
}

fn parse_value(token: &str, field: Field, lineno: usize) -> Result<f64, IoError> {
    let value = if field == Field::Integer {
        token.parse::<i64>().map(|v| v as f64).ok()
    } else {
        token.parse::<f64>().ok()
    };
    match value {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(IoError::syntax(lineno, format!("'{token}' is not a finite number"))),
    }
}

/// Reads a coordinate file without interpreting symmetry beyond the storage
/// rules (one triangle for symmetric/hermitian files, no duplicates).
pub fn parse_document<R: BufRead>(reader: R) -> Result<MatrixDocument, IoError> {
    let mut lines = reader.lines().enumerate().map(|(k, l)| (k + 1, l));
    let read_err = |source| IoError::File {
        path: "<input>".into(),
        source,
    };

    let (lineno, header) = match lines.next() {
        Some((k, l)) => (k, l.map_err(read_err)?),
        None => return Err(IoError::syntax(1, "empty input")),
    };
    let (field, symmetry) = parse_header(&header, lineno)?;

    let mut size: Option<(usize, usize)> = None;
    let mut entries = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut last_line = lineno;

    for (lineno, line) in lines {
        let line = line.map_err(read_err)?;
        last_line = lineno;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let Some((n, nnz)) = size else {
            if tokens.len() != 3 {
                return Err(IoError::syntax(lineno, "expected size line '<rows> <cols> <entries>'"));
            }
            let rows = parse_index(tokens[0], lineno)?;
            let cols = parse_index(tokens[1], lineno)?;
            let nnz = parse_index(tokens[2], lineno)?;
            if rows != cols {
                return Err(IoError::syntax(lineno, format!("matrix is not square ({rows}x{cols})")));
            }
            size = Some((rows, nnz));
            continue;
        };

        let expected = if field == Field::Complex { 4 } else { 3 };
        if tokens.len() != expected {
            return Err(IoError::syntax(
                lineno,
                format!("expected {expected} tokens, found {}", tokens.len()),
            ));
        }
        if entries.len() == nnz {
            return Err(IoError::syntax(lineno, format!("more than the declared {nnz} entries")));
        }
        let i = parse_index(tokens[0], lineno)?;
        let j = parse_index(tokens[1], lineno)?;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(IoError::syntax(lineno, format!("index ({i}, {j}) out of range for n = {n}")));
        }
        if symmetry != Symmetry::General && i < j {
            return Err(IoError::syntax(
                lineno,
                format!("entry ({i}, {j}) lies above the diagonal of a lower-triangle file"),
            ));
        }
        if !seen.insert((i, j)) {
            return Err(IoError::syntax(lineno, format!("duplicate entry ({i}, {j})")));
        }
        let re = parse_value(tokens[2], field, lineno)?;
        let im = if field == Field::Complex {
            parse_value(tokens[3], field, lineno)?
        } else {
            0.0
        };
        entries.push((i, j, Complex64::new(re, im)));
    }

    let Some((n, nnz)) = size else {
        return Err(IoError::syntax(last_line, "missing size line"));
    };
    if entries.len() != nnz {
        return Err(IoError::syntax(
            last_line,
            format!("declared {nnz} entries, found {}", entries.len()),
        ));
    }
    Ok(MatrixDocument {
        field,
        symmetry,
        n,
        entries,
    })
}

/// Parses a coordinate file and validates the result as Hermitian.
pub fn parse_matrix<R: BufRead>(reader: R, tol: ToleranceConfig) -> Result<HermitianMatrix, IoError> {
    let doc = parse_document(reader)?;
    Ok(validate_hermitian(doc.to_dense(), tol)?)
}

pub fn parse_matrix_str(text: &str, tol: ToleranceConfig) -> Result<HermitianMatrix, IoError> {
    parse_matrix(text.as_bytes(), tol)
}

pub fn read_matrix_file(path: &Path, tol: ToleranceConfig) -> Result<HermitianMatrix, IoError> {
    let text = read_text(path)?;
    parse_matrix_str(&text, tol)
}

fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

fn fmt_f64(x: f64) -> String {
    // Prints -0 as 0.
    format!("{}", x + 0.0)
}

/// `complex hermitian` coordinate text holding the nonzero lower triangle
/// in column-major order.
pub fn write_matrix_market(a: &HermitianMatrix) -> String {
    let n = a.n();
    let mut body = String::new();
    let mut nnz = 0;
    for j in 0..n {
        for i in j..n {
            let z = a[(i, j)];
            if z != ZERO {
                nnz += 1;
                body.push_str(&format!("{} {} {} {}\n", i + 1, j + 1, fmt_f64(z.re), fmt_f64(z.im)));
            }
        }
    }
    format!("%%MatrixMarket matrix coordinate complex hermitian\n{n} {n} {nnz}\n{body}")
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().copied().map(pair).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn dense_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows()).map(|i| pairs(m.row(i))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
    pub zero_set: Vec<usize>,
    pub phases: Vec<[f64; 2]>,
    pub tolerance_used: ToleranceConfig,
    pub canonical: bool,
}

impl From<&Certificate> for CertificateDoc {
    fn from(cert: &Certificate) -> Self {
        Self {
            n: cert.n(),
            blocks: cert.blocks().iter().map(|b| one_based(b)).collect(),
            zero_set: one_based(cert.zero_set()),
            phases: pairs(cert.phases()),
            tolerance_used: *cert.tolerance_used(),
            canonical: cert.is_canonical(),
        }
    }
}

impl CertificateDoc {
    pub fn to_certificate(&self) -> Result<Certificate, IoError> {
        let zero_based = |v: &[usize]| -> Result<Vec<usize>, IoError> {
            v.iter()
                .map(|&i| {
                    i.checked_sub(1)
                        .ok_or_else(|| IoError::Document("indices are 1-based; found 0".into()))
                })
                .collect()
        };
        let blocks = self.blocks.iter().map(|b| zero_based(b)).collect::<Result<_, _>>()?;
        let zero_set = zero_based(&self.zero_set)?;
        let phases = self.phases.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Ok(Certificate::new(self.n, blocks, zero_set, phases, self.tolerance_used)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accepted,
    NotPsd,
    OutOfClass,
    NotHermitian,
    IoError,
}

impl Verdict {
    /// 0 accepted, 1 not PSD, 2 out of class, 3 not Hermitian, 4 I/O or usage.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Accepted => 0,
            Verdict::NotPsd => 1,
            Verdict::OutOfClass => 2,
            Verdict::NotHermitian => 3,
            Verdict::IoError => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Accepted => "accepted",
            Verdict::NotPsd => "not_psd",
            Verdict::OutOfClass => "out_of_class",
            Verdict::NotHermitian => "not_hermitian",
            Verdict::IoError => "io_error",
        }
    }
}

impl From<RejectionReason> for Verdict {
    fn from(reason: RejectionReason) -> Self {
        match reason {
            RejectionReason::NotPsd => Verdict::NotPsd,
            RejectionReason::OutOfClass => Verdict::OutOfClass,
            RejectionReason::NotHermitian => Verdict::NotHermitian,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub offending_indices: Vec<usize>,
    pub diagnostics: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance_used: Option<ToleranceConfig>,
}

impl RunReport {
    pub fn from_outcome(outcome: &Result<Certificate, Rejection>, tol: ToleranceConfig) -> Self {
        match outcome {
            Ok(cert) => Self {
                verdict: Verdict::Accepted,
                certificate: Some(CertificateDoc::from(cert)),
                witness: None,
                witness_value: None,
                offending_indices: Vec::new(),
                diagnostics: format!("{} block(s), zero set of size {}", cert.rank(), cert.zero_set().len()),
                tolerance_used: Some(tol),
            },
            Err(rejection) => Self {
                verdict: rejection.reason.into(),
                certificate: None,
                witness: rejection.witness.as_deref().map(pairs),
                witness_value: rejection.witness_value,
                offending_indices: one_based(&rejection.offending_indices),
                diagnostics: rejection.detail.clone(),
                tolerance_used: Some(tol),
            },
        }
    }

    pub fn io_error(message: impl Into<String>) -> Self {
        Self {
            verdict: Verdict::IoError,
            certificate: None,
            witness: None,
            witness_value: None,
            offending_indices: Vec::new(),
            diagnostics: message.into(),
            tolerance_used: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorDoc {
    pub kind: String,
    pub n: usize,
    pub l: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<Vec<[f64; 2]>>>,
}

impl From<&FactorPair> for FactorDoc {
    fn from(f: &FactorPair) -> Self {
        Self {
            kind: f.kind.name().to_string(),
            n: f.n(),
            l: dense_rows(&f.l),
            u: f.u.as_ref().map(dense_rows),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsrpFailureDoc {
    pub subset: Vec<usize>,
    pub rank_principal: usize,
    pub rank_strip: usize,
    pub condition: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsrpDoc {
    pub mode: String,
    pub subsets_checked: usize,
    pub failures: Vec<PsrpFailureDoc>,
    pub passed: bool,
}

impl From<&PsrpReport> for PsrpDoc {
    fn from(r: &PsrpReport) -> Self {
        Self {
            mode: r.mode.name().to_string(),
            subsets_checked: r.subsets_checked,
            failures: r
                .failures
                .iter()
                .map(|f| PsrpFailureDoc {
                    subset: one_based(&f.subset),
                    rank_principal: f.rank_principal,
                    rank_strip: f.rank_strip,
                    condition: f.condition.label().to_string(),
                })
                .collect(),
            passed: r.passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleDoc {
    pub psd: bool,
    pub min_eigenvalue: f64,
    pub eigenvalues: Vec<f64>,
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<[f64; 2]>>,
}

impl From<&OracleVerdict> for OracleDoc {
    fn from(v: &OracleVerdict) -> Self {
        Self {
            psd: v.psd,
            min_eigenvalue: v.min_eigenvalue,
            eigenvalues: v.eigenvalues.clone(),
            threshold: v.threshold,
            witness: v.witness.as_deref().map(pairs),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl From<&VerifyReport> for VerifyDoc {
    fn from(r: &VerifyReport) -> Self {
        Self {
            max_deviation: r.max_deviation,
            tolerance: r.tolerance,
            passed: r.passed,
        }
    }
}

/// Pretty JSON with keys in sorted order and a trailing newline.
pub fn emit<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("documents contain only finite numbers and string keys");
    let mut text = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
    text.push('\n');
    text
}

pub fn parse_certificate_doc(text: &str) -> Result<CertificateDoc, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Document(e.to_string()))
}

pub fn read_certificate_file(path: &Path) -> Result<Certificate, IoError> {
    parse_certificate_doc(&read_text(path)?)?.to_certificate()
}

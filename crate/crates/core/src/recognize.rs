//! Combinatorial membership test for Hermitian PSD matrices with entries of
//! modulus 0 or 1.
//!
//! Such a matrix is PSD exactly when, after dropping zero rows, its support
//! graph is a disjoint union of cliques and on every clique the entries
//! factor as `a_ij = d_i conj(d_j)` for unit-modulus `d`. The check runs in
//! one pass over the entries:
//!
//! 1. any entry outside the two modulus bands rejects as out of class;
//! 2. a diagonal entry near `-1`, or a zero diagonal entry whose row is not
//!    zero, yields a 1x1 or 2x2 principal submatrix with a negative
//!    eigenvalue;
//! 3. from each unvisited root `r` (smallest index first) the component must
//!    be the star `{r} ∪ N(r)`; a vertex two steps away gives a 3x3 principal
//!    submatrix with determinant `-1`;
//! 4. with `d_i = a_ir / |a_ir|`, every pair in the component must satisfy
//!    `a_ij ≈ d_i conj(d_j)`; otherwise the 3x3 submatrix on `{r, i, j}` has
//!    negative determinant.
//!
//! Rejections carry a witness `x` with `x* A x < 0`, built from the offending
//! principal submatrix (at most 3x3) and zero-padded to length `n`.

use std::fmt;

use num_complex::Complex64;

use crate::certificate::Certificate;
use crate::linalg::hermitian_eigen;
use crate::matrix::{
    classify_entry, validate_hermitian, CMatrix, EntryClass, HermitianMatrix, MatrixError,
    ToleranceConfig, ONE, ZERO,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RejectionReason {
    NotPsd,
    OutOfClass,
    NotHermitian,
}

impl RejectionReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectionReason::NotPsd => "not_psd",
            RejectionReason::OutOfClass => "out_of_class",
            RejectionReason::NotHermitian => "not_hermitian",
        }
    }
}

impl fmt::Display for RejectionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why a matrix is not in the class. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct Rejection {
    pub reason: RejectionReason,
    /// Present iff `reason == NotPsd`.
    pub witness: Option<Vec<Complex64>>,
    /// `x* A x` for the witness.
    pub witness_value: Option<f64>,
    /// At most three indices for `NotPsd`; the `(i, j)` pair otherwise.
    pub offending_indices: Vec<usize>,
    pub detail: String,
}

impl Rejection {
    fn out_of_class(i: usize, j: usize, z: Complex64) -> Self {
        Self {
            reason: RejectionReason::OutOfClass,
            witness: None,
            witness_value: None,
            offending_indices: vec![i, j],
            detail: format!("entry ({i}, {j}) has modulus {} outside both bands", z.norm()),
        }
    }

    fn not_psd(a: &HermitianMatrix, indices: Vec<usize>, detail: String) -> Self {
        let witness = local_witness(a, &indices);
        let value = quadratic_form(a, &witness).expect("witness has length n");
        Self {
            reason: RejectionReason::NotPsd,
            witness: Some(witness),
            witness_value: Some(value),
            offending_indices: indices,
            detail,
        }
    }
}

impl From<MatrixError> for Rejection {
    fn from(err: MatrixError) -> Self {
        let offending_indices = match err {
            MatrixError::NotHermitian { i, j, .. } => vec![i, j],
            _ => Vec::new(),
        };
        Self {
            reason: RejectionReason::NotHermitian,
            witness: None,
            witness_value: None,
            offending_indices,
            detail: err.to_string(),
        }
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.reason, self.detail)
    }
}

impl std::error::Error for Rejection {}

/// Graph on the unit-diagonal indices with an edge wherever the
/// off-diagonal entry is unit modulus.
#[derive(Debug, Clone)]
pub struct SupportGraph {
    n: usize,
    vertices: Vec<usize>,
    zero_set: Vec<usize>,
    adjacency: Vec<bool>,
}

impl SupportGraph {
    /// Builds the graph from entry classes. Diagonal entries that are out of
    /// class are treated like zero ones.
    pub fn build(a: &HermitianMatrix) -> Self {
        let n = a.n();
        let tol = a.tol();
        let mut vertices = Vec::new();
        let mut zero_set = Vec::new();
        for i in 0..n {
            if classify_entry(a[(i, i)], tol) == EntryClass::Unit {
                vertices.push(i);
            } else {
                zero_set.push(i);
            }
        }
        let mut adjacency = vec![false; n * n];
        for &i in &vertices {
            for &j in &vertices {
                if i != j && classify_entry(a[(i, j)], tol) == EntryClass::Unit {
                    adjacency[i * n + j] = true;
                }
            }
        }
        Self {
            n,
            vertices,
            zero_set,
            adjacency,
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn zero_set(&self) -> &[usize] {
        &self.zero_set
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.n + j]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.has_edge(i, j))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for &root in &self.vertices {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut members = vec![root];
            let mut head = 0;
            while head < members.len() {
                let v = members[head];
                head += 1;
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// True when the graph spans every index and is connected.
    pub fn is_connected_full(&self) -> bool {
        self.zero_set.is_empty() && self.components().len() == 1
    }
}

/// `Re(x* A x)`.
pub fn quadratic_form(a: &HermitianMatrix, x: &[Complex64]) -> Result<f64, MatrixError> {
    let ax = a.as_matrix().mul_vec(x)?;
    let value: Complex64 = x.iter().zip(&ax).map(|(xi, yi)| xi.conj() * yi).sum();
    let scale = 1.0 + a.as_matrix().max_abs() * x.iter().map(|z| z.norm_sqr()).sum::<f64>();
    debug_assert!(value.im.abs() <= a.tol().eps_herm * a.n().max(1) as f64 * scale);
    Ok(value.re)
}

/// Unit eigenvector for the smallest eigenvalue of the principal submatrix
/// on `indices`, zero-padded to length `n`.
fn local_witness(a: &HermitianMatrix, indices: &[usize]) -> Vec<Complex64> {
    let local = match indices.len() {
        1 => vec![ONE],
        2 => {
            let (i, j) = (indices[0], indices[1]);
            min_eigvec_2x2(a[(i, i)].re, a[(i, j)], a[(j, j)].re)
        }
        _ => hermitian_eigen(a.principal(indices).as_matrix()).vector(0),
    };
    let mut x = vec![ZERO; a.n()];
    for (&i, v) in indices.iter().zip(local) {
        x[i] = v;
    }
    x
}

/// Closed form for `[[p, b], [conj(b), q]]`.
fn min_eigvec_2x2(p: f64, b: Complex64, q: f64) -> Vec<Complex64> {
    if b.norm() == 0.0 {
        return if p <= q { vec![ONE, ZERO] } else { vec![ZERO, ONE] };
    }
    let half_gap = 0.5 * (p - q);
    let lambda = 0.5 * (p + q) - (half_gap * half_gap + b.norm_sqr()).sqrt();
    let v = [b, Complex64::new(lambda - p, 0.0)];
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    vec![v[0] / norm, v[1] / norm]
}

fn lex_min(best: &mut Option<Vec<usize>>, candidate: Vec<usize>) {
    if best.as_ref().is_none_or(|b| candidate < *b) {
        *best = Some(candidate);
    }
}

/// Decides membership and returns either the canonical certificate or a
/// rejection. Out-of-class entries are reported before PSD defects; among
/// diagonal defects the lexicographically smallest index set wins, and
/// component defects are reported for the first failing component.
pub fn recognize(a: &HermitianMatrix) -> Result<Certificate, Rejection> {
    let n = a.n();
    let tol = *a.tol();

    let mut classes = vec![EntryClass::Zero; n * n];
    for i in 0..n {
        for j in i..n {
            let class = classify_entry(a[(i, j)], &tol);
            if class == EntryClass::OutOfClass {
                return Err(Rejection::out_of_class(i, j, a[(i, j)]));
            }
            classes[i * n + j] = class;
            classes[j * n + i] = class;
        }
    }
    let unit = |i: usize, j: usize| classes[i * n + j] == EntryClass::Unit;

    let mut diagonal_defect: Option<Vec<usize>> = None;
    for i in 0..n {
        if unit(i, i) {
            if a[(i, i)].re < 0.0 {
                lex_min(&mut diagonal_defect, vec![i]);
            }
        } else if let Some(j) = (0..n).find(|&j| j != i && unit(i, j)) {
            lex_min(&mut diagonal_defect, vec![i.min(j), i.max(j)]);
        }
    }
    if let Some(indices) = diagonal_defect {
        let detail = if indices.len() == 1 {
            format!("diagonal entry ({0}, {0}) is -1", indices[0])
        } else {
            format!(
                "zero diagonal with unit off-diagonal entry ({}, {})",
                indices[0], indices[1]
            )
        };
        return Err(Rejection::not_psd(a, indices, detail));
    }

    let mut visited = vec![false; n];
    let mut in_component = vec![false; n];
    let mut phases = vec![ONE; n];
    let mut blocks = Vec::new();
    let mut zero_set = Vec::new();

    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        if !unit(root, root) {
            zero_set.push(root);
            continue;
        }
        let mut members = vec![root];
        for j in root + 1..n {
            if unit(root, j) {
                members.push(j);
            }
        }
        for &m in &members {
            visited[m] = true;
            in_component[m] = true;
        }

        // A neighbour of a neighbour outside the star is at distance two.
        let mut far: Option<Vec<usize>> = None;
        for &j in &members[1..] {
            for (i, &inside) in in_component.iter().enumerate() {
                if i != j && !inside && unit(j, i) {
                    lex_min(&mut far, vec![root, i.min(j), i.max(j)]);
                }
            }
        }
        if let Some(indices) = far {
            let (j, i) = if in_component[indices[1]] {
                (indices[1], indices[2])
            } else {
                (indices[2], indices[1])
            };
            let detail = format!("index {i} is two steps from root {root} through {j}");
            return Err(Rejection::not_psd(a, indices, detail));
        }

        for &i in &members[1..] {
            let z = a[(i, root)];
            phases[i] = z / z.norm();
        }
        for (x, &i) in members.iter().enumerate().skip(1) {
            for &j in &members[x + 1..] {
                let expected = phases[i] * phases[j].conj();
                if (a[(i, j)] - expected).norm() > tol.eps_mod {
                    let detail = format!(
                        "entry ({i}, {j}) is inconsistent with the phases fixed through root {root}"
                    );
                    return Err(Rejection::not_psd(a, vec![root, i, j], detail));
                }
            }
        }
        for &m in &members {
            in_component[m] = false;
        }
        blocks.push(members);
    }

    Ok(Certificate::new(n, blocks, zero_set, phases, tol)
        .expect("recognizer emits a structurally valid certificate"))
}

/// Recognition restricted to real `{0, 1}` input: entries must be within
/// `eps_mod` of 0 or of 1. Accepted certificates carry phases exactly 1,
/// so the similarity is a pure permutation.
pub fn recognize_binary(a: &HermitianMatrix) -> Result<Certificate, Rejection> {
    let n = a.n();
    let tol = a.tol();
    for i in 0..n {
        for j in i..n {
            let z = a[(i, j)];
            let ok = match classify_entry(z, tol) {
                EntryClass::Zero => true,
                EntryClass::Unit => (z - ONE).norm() <= tol.eps_mod,
                EntryClass::OutOfClass => false,
            };
            if !ok {
                return Err(Rejection {
                    reason: RejectionReason::OutOfClass,
                    witness: None,
                    witness_value: None,
                    offending_indices: vec![i, j],
                    detail: format!("entry ({i}, {j}) = {z} is neither 0 nor 1"),
                });
            }
        }
    }
    let cert = recognize(a)?;
    let cert = Certificate::new(
        n,
        cert.blocks().to_vec(),
        cert.zero_set().to_vec(),
        vec![ONE; n],
        *cert.tolerance_used(),
    )
    .expect("binary certificate keeps the recognized structure");
    Ok(cert)
}

/// Validates a raw matrix and recognizes it; Hermitian failures become
/// `NotHermitian` rejections.
pub fn recognize_raw(raw: CMatrix, tol: ToleranceConfig) -> Result<Certificate, Rejection> {
    let a = validate_hermitian(raw, tol)?;
    recognize(&a)
}

//! Self-contained dense kernels: cyclic Jacobi for Hermitian eigenproblems
//! and one-sided (Hestenes) Jacobi for singular values.

use num_complex::Complex64;

use crate::matrix::{CMatrix, ZERO};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order; `vectors` holds the matching unit
/// eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }
}

/// Unitary 2x2 rotation `[[pp, pq], [qp, qq]]` acting on coordinates p, q.
#[derive(Debug, Clone, Copy)]
struct Rotation {
    pp: Complex64,
    pq: Complex64,
    qp: Complex64,
    qq: Complex64,
    /// Shift applied to the diagonal: new a_pp = a_pp - shift, a_qq + shift.
    shift: f64,
}

/// Rotation diagonalizing the Hermitian 2x2 block `[[app, apq], [conj(apq), aqq]]`.
///
/// The off-diagonal is first made real by the phase `conj(apq / |apq|)` on
/// coordinate q, then a real Jacobi rotation finishes the job.
fn rotation(app: f64, aqq: f64, apq: Complex64) -> Rotation {
    let r = apq.norm();
    let u = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    Rotation {
        pp: Complex64::new(c, 0.0),
        pq: Complex64::new(s, 0.0),
        qp: -u.conj() * s,
        qq: u.conj() * c,
        shift: t * r,
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Only the upper triangle is trusted to be consistent with the lower one.
pub fn hermitian_eigen(a: &CMatrix) -> HermitianEigen {
    assert!(a.is_square(), "eigen-decomposition needs a square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut v = CMatrix::identity(n);

    let scale = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return HermitianEigen {
            values: vec![0.0; n],
            vectors: v,
        };
    }

    for sweep in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)].norm_sqr())
            .sum();
        if off.sqrt() <= f64::EPSILON * 0.25 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // After a few sweeps, drop entries that no longer perturb the diagonal.
                if sweep > 3 && app.abs() + 100.0 * r == app.abs() && aqq.abs() + 100.0 * r == aqq.abs() {
                    m[(p, q)] = ZERO;
                    m[(q, p)] = ZERO;
                    continue;
                }
                let rot = rotation(app, aqq, apq);
                for k in 0..n {
                    let (akp, akq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = akp * rot.pp + akq * rot.qp;
                    m[(k, q)] = akp * rot.pq + akq * rot.qq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = rot.pp.conj() * apk + rot.qp.conj() * aqk;
                    m[(q, k)] = rot.pq.conj() * apk + rot.qq.conj() * aqk;
                }
                m[(p, p)] = Complex64::new(app - rot.shift, 0.0);
                m[(q, q)] = Complex64::new(aqq + rot.shift, 0.0);
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * rot.pp + vkq * rot.qp;
                    v[(k, q)] = vkp * rot.pq + vkq * rot.qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].re.total_cmp(&m[(y, y)].re));
    let values = order.iter().map(|&k| m[(k, k)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    HermitianEigen { values, vectors }
}

pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    hermitian_eigen(a).values
}

/// Singular values in descending order, by one-sided Jacobi applied to the
/// orientation with fewer columns.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let mut w = if a.cols() > a.rows() { a.adjoint() } else { a.clone() };
    let (rows, cols) = (w.rows(), w.cols());
    if cols == 0 {
        return Vec::new();
    }

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for k in 0..rows {
                    let (x, y) = (w[(k, p)], w[(k, q)]);
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let rot = rotation(alpha, beta, gamma);
                for k in 0..rows {
                    let (x, y) = (w[(k, p)], w[(k, q)]);
                    w[(k, p)] = x * rot.pp + y * rot.qp;
                    w[(k, q)] = x * rot.pq + y * rot.qq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|k| w[(k, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

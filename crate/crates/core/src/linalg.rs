//! Complex linear algebra aliases and small helpers shared across the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

pub const C_ZERO: C64 = C64::new(0.0, 0.0);
pub const C_ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Largest absolute entry, used for closeness checks against exact matrices.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-norm deviation of `u` from unitarity, ‖U†U − I‖_max.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let gram = u.adjoint() * u;
    let eye = CMatrix::identity(u.ncols(), u.ncols());
    max_abs(&(gram - eye))
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns eigenvalues ascending and the matching eigenvector columns.
/// Jacobi handles exactly degenerate spectra (rank-deficient density
/// matrices) where shifted QL iterations can fail to converge.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = CMatrix::identity(n, n);
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = a[(p, q)];
                let b = beta.norm();
                if b == 0.0 {
                    continue;
                }
                // unitary U = [[c, s w], [-s conj(w), c]] on (p, q) with
                // w the phase of a_pq zeroes the off-diagonal entry
                let w = beta / cr(b);
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c_rot = 1.0 / (1.0 + t * t).sqrt();
                let s_rot = t * c_rot;
                let sw = cr(s_rot) * w;

                // A <- A U (columns p, q)
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = cr(c_rot) * aip - sw.conj() * aiq;
                    a[(i, q)] = sw * aip + cr(c_rot) * aiq;
                }
                // A <- U† A (rows p, q)
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = cr(c_rot) * apj - sw * aqj;
                    a[(q, j)] = sw.conj() * apj + cr(c_rot) * aqj;
                }
                // V <- V U
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = cr(c_rot) * vip - sw.conj() * viq;
                    v[(i, q)] = sw * vip + cr(c_rot) * viq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, new)] = v[(i, old)];
        }
    }
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Apply a real function to the spectrum of a Hermitian matrix:
/// f(M) = V diag(f(λ)) V†.
pub fn hermitian_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (k, lambda) in values.iter().enumerate() {
        let v = vectors.column(k);
        let fk = cr(f(*lambda));
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += fk * v[i] * v[j].conj();
            }
        }
    }
    out
}

/// Principal square root of a Hermitian PSD matrix; small negative
/// eigenvalues from rounding are clamped to zero.
pub fn hermitian_sqrt(m: &CMatrix) -> CMatrix {
    hermitian_map(m, |lambda| lambda.max(0.0).sqrt())
}

//! Small dense complex Hermitian helpers for the interior-point engine.

use crate::num::ComplexMatrix;
use num_complex::Complex64;

/// Attempt a Cholesky factorization; returns the lower factor if the matrix
/// is numerically positive definite.
pub fn cholesky(h: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = h.rows();
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = h[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let dj = d.sqrt();
        l[(j, j)] = Complex64::new(dj, 0.0);
        for i in j + 1..n {
            let mut acc = h[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = acc / dj;
        }
    }
    Some(l)
}

pub fn is_positive_definite(h: &ComplexMatrix) -> bool {
    cholesky(h).is_some()
}

/// Inverse of a Hermitian positive definite matrix through its Cholesky
/// factor. Returns None if the factorization fails.
pub fn pd_inverse(h: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = h.rows();
    let l = cholesky(h)?;
    // Forward-substitute L Y = I, then L* Z = Y; Z = H^{-1}.
    let mut y = ComplexMatrix::zeros(n, n);
    for col in 0..n {
        for i in 0..n {
            let mut acc = if i == col { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            for k in 0..i {
                acc -= l[(i, k)] * y[(k, col)];
            }
            y[(i, col)] = acc / l[(i, i)].re;
        }
    }
    let mut z = ComplexMatrix::zeros(n, n);
    for col in 0..n {
        for i in (0..n).rev() {
            let mut acc = y[(i, col)];
            for k in i + 1..n {
                acc -= l[(k, i)].conj() * z[(k, col)];
            }
            z[(i, col)] = acc / l[(i, i)].re;
        }
    }
    Some(z.hermitian_part())
}

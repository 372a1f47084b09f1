//! Hermitian eigendecomposition by cyclic Jacobi, and what it carries:
//! spectral norms and Gram-vector extraction.

use super::{ComplexMatrix, NumError};
use num_complex::Complex64;

const ASYMMETRY_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 64;

/// Eigendecomposition M = U diag(λ) U* of a Hermitian matrix.
/// Eigenvalues come back ascending, eigenvectors as the columns of U.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix), NumError> {
    if !m.is_square() {
        return Err(NumError::DimensionMismatch("hermitian_eig needs a square matrix".into()));
    }
    let asym = m.hermitian_asymmetry();
    if asym > ASYMMETRY_TOL {
        return Err(NumError::NotHermitian(asym));
    }
    let (vals, vecs, converged) = jacobi(&m.hermitian_part());
    if !converged {
        return Err(NumError::NoConvergence);
    }
    Ok((vals, vecs))
}

/// Cyclic Jacobi on an exactly Hermitian matrix. Returns (ascending values,
/// eigenvector columns, converged flag).
pub(crate) fn jacobi(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix, bool) {
    let n = m.rows();
    let mut a = m.clone();
    let mut u = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(1e-300);
    let stop = 1e-15 * scale;
    let mut converged = n < 2;

    for _ in 0..MAX_SWEEPS {
        if n < 2 {
            break;
        }
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[(i, j)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= stop {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut u, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vecs = ComplexMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    (vals, vecs, converged)
}

/// One complex Jacobi rotation annihilating a[p][q]: phase-align the pivot,
/// then the classical symmetric rotation.
fn rotate(a: &mut ComplexMatrix, u: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Column transform J = [[c, s],[−s e^{−iφ}, c e^{−iφ}]] on columns (p,q),
    // applied as A ← J* A J, U ← U J.
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -s * phase.conj();
    let jqq = c * phase.conj();

    let n = a.rows();
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * jpp + aiq * jqp;
        a[(i, q)] = aip * jpq + aiq * jqq;
    }
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = jpp.conj() * apj + jqp.conj() * aqj;
        a[(q, j)] = jpq.conj() * apj + jqq.conj() * aqj;
    }
    // Clean up what the rotation targets.
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for i in 0..n {
        let uip = u[(i, p)];
        let uiq = u[(i, q)];
        u[(i, p)] = uip * jpp + uiq * jqp;
        u[(i, q)] = uip * jpq + uiq * jqq;
    }
}

/// Largest singular value, via the Hermitian eigenproblem for M*M.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    let h = m.adjoint().matmul(m);
    let (vals, _, _) = jacobi(&h.hermitian_part());
    vals.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Vectors g_i with (g_i | g_j) = G[i][j], from the eigendecomposition square
/// root. Rank is decided by the eigenvalue threshold tol·‖G‖; eigenvalues in
/// [−tol, 0) are clamped to zero.
pub fn gram_vectors(g: &ComplexMatrix, tol: f64) -> Result<Vec<Vec<Complex64>>, NumError> {
    let (vals, vecs) = hermitian_eig(g)?;
    let lambda_min = vals.first().copied().unwrap_or(0.0);
    if lambda_min < -tol {
        return Err(NumError::NotPsd(lambda_min));
    }
    let norm = vals.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let kept: Vec<usize> = (0..vals.len()).filter(|&j| vals[j] > tol * norm).collect();
    let n = g.rows();
    let out = (0..n)
        .map(|i| kept.iter().map(|&j| vecs[(i, j)] * vals[j].max(0.0).sqrt()).collect())
        .collect();
    Ok(out)
}

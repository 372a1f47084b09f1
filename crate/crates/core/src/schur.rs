//! ν₂ norms of finite kernels with explicit factorization certificates, and
//! the Schur multiplier action.
//!
//! A kernel φ on S×T has ν₂(φ) = inf ‖a₁‖∞‖a₂‖∞ over factorizations
//! φ(s,t) = (a₂(t) | a₁(s)) through a Hilbert space. The inner product is
//! linear in the first argument; the Gram matrix handed to the semidefinite
//! solver carries the a₂ block first, so its upper-right block is φᵀ and the
//! extracted vectors reproduce φ without any conjugation fix-up.

use crate::num::{gram_vectors, inner, spectral_norm, vec_norm, ComplexMatrix, GaussianStream};
use crate::sdp::{solve_gram_completion, GramCompletionProblem, SdpError};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct SchurKernel {
    pub values: ComplexMatrix,
}

impl SchurKernel {
    pub fn new(values: ComplexMatrix) -> Self {
        assert!(values.rows() >= 1 && values.cols() >= 1, "kernel must be nonempty");
        Self { values }
    }
}

/// Certified two-sided enclosure of ν₂ together with a witnessing
/// factorization φ(s,t) = (a2[t] | a1[s]) in ℂ^K.
#[derive(Debug, Clone)]
pub struct Nu2Certificate {
    pub value: f64,
    pub a1: Vec<Vec<Complex64>>,
    pub a2: Vec<Vec<Complex64>>,
    pub k: usize,
    pub dual_lower: f64,
    pub reconstruction_residual: f64,
}

pub fn nu2(kernel: &SchurKernel, eps: f64) -> Result<Nu2Certificate, SdpError> {
    let phi = &kernel.values;
    let (m, n) = (phi.rows(), phi.cols());
    if !(1e-10..=1e-2).contains(&eps) {
        return Err(SdpError::InvalidEps(eps));
    }

    if m == 1 && n == 1 {
        // Scalar kernel: ν₂ = |φ| with a one-dimensional factorization.
        let z = phi[(0, 0)];
        let r = z.norm();
        if r == 0.0 {
            return Ok(Nu2Certificate {
                value: 0.0,
                a1: vec![Vec::new()],
                a2: vec![Vec::new()],
                k: 0,
                dual_lower: 0.0,
                reconstruction_residual: 0.0,
            });
        }
        let s = r.sqrt();
        // (a2 | a1) = (z/s)·conj(s) = z.
        return Ok(Nu2Certificate {
            value: r,
            a1: vec![vec![Complex64::new(s, 0.0)]],
            a2: vec![vec![z / s]],
            k: 1,
            dual_lower: r,
            reconstruction_residual: 0.0,
        });
    }

    // a₂ block first: solve on φᵀ so the completion is [[Gram(a₂), φᵀ],[φ̄, Gram(a₁)]].
    let sol = solve_gram_completion(&GramCompletionProblem::new(phi.transpose()), eps)?;
    let vectors = gram_vectors(&sol.gram.hermitian_part(), 1e-10)
        .expect("solver returned a PSD completion");
    let a2: Vec<Vec<Complex64>> = vectors[..n].to_vec();
    let a1: Vec<Vec<Complex64>> = vectors[n..].to_vec();
    let k = a1.first().map_or(0, Vec::len);

    let mut residual = 0.0f64;
    for s in 0..m {
        for t in 0..n {
            residual = residual.max((inner(&a2[t], &a1[s]) - phi[(s, t)]).norm());
        }
    }

    Ok(Nu2Certificate {
        value: sol.t_star,
        a1,
        a2,
        k,
        dual_lower: sol.dual_lower,
        reconstruction_residual: residual,
    })
}

/// Entrywise action C ↦ [φ(k,l)·c_{kl}].
pub fn schur_apply(kernel: &SchurKernel, c: &ComplexMatrix) -> ComplexMatrix {
    let phi = &kernel.values;
    assert_eq!(
        (phi.rows(), phi.cols()),
        (c.rows(), c.cols()),
        "kernel and matrix dimensions must match"
    );
    ComplexMatrix::from_fn(c.rows(), c.cols(), |i, j| phi[(i, j)] * c[(i, j)])
}

/// Operator-norm lower bound for ν₂ by random probing: the Schur multiplier
/// norm on B(ℓ²) never exceeds ν₂, so every observed ratio is a valid lower
/// bound.
pub fn multiplier_norm_lower(kernel: &SchurKernel, trials: usize, stream: &mut GaussianStream) -> f64 {
    let phi = &kernel.values;
    assert!(phi.is_square(), "multiplier_norm_lower needs a square kernel");
    let n = phi.rows();
    let mut best = 0.0f64;
    for _ in 0..trials {
        let c = ComplexMatrix::from_fn(n, n, |_, _| stream.next_complex());
        let denom = spectral_norm(&c);
        if denom < 1e-12 {
            continue;
        }
        best = best.max(spectral_norm(&schur_apply(kernel, &c)) / denom);
    }
    best
}

/// Machine-check of a certificate's invariants against its kernel.
pub fn check_certificate(cert: &Nu2Certificate, kernel: &SchurKernel, gap: f64) -> bool {
    let a1_max = cert.a1.iter().map(|v| vec_norm(v)).fold(0.0, f64::max);
    let a2_max = cert.a2.iter().map(|v| vec_norm(v)).fold(0.0, f64::max);
    if a1_max * a2_max > cert.value * (1.0 + 1e-6) + 1e-12 {
        return false;
    }
    let phi = &kernel.values;
    for s in 0..phi.rows() {
        for t in 0..phi.cols() {
            if (inner(&cert.a2[t], &cert.a1[s]) - phi[(s, t)]).norm() > 1e-6 * cert.value.max(1.0) {
                return false;
            }
        }
    }
    cert.dual_lower <= cert.value && cert.value <= cert.dual_lower + gap
}

//! Gram-completion semidefinite program behind the ν₂ norm.
//!
//! For a fixed m×n block Φ the program is
//!
//! ```text
//! minimize t   subject to   [[P, Φ],[Φ*, Q]] ⪰ 0,  P_ii ≤ t,  Q_jj ≤ t,
//! ```
//!
//! whose optimum is ν₂(Φ) after balancing ‖a₁‖∞ = ‖a₂‖∞ = √t. The solver
//! returns certified two-sided bounds: the primal iterate is feasible by
//! construction and the dual bound comes from a feasibility-projected dual
//! iterate, so `t_star − dual_lower` is a rigorous enclosure width.
//!
//! [`feasibility_oracle`] is an independent alternating-projection check used
//! to cross-validate the optimizer.

mod herm;
mod ipm;
mod spd;

pub use herm::{cholesky, is_positive_definite, pd_inverse};

use crate::num::eig::jacobi;
use crate::num::ComplexMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone)]
pub struct GramCompletionProblem {
    pub phi: ComplexMatrix,
}

impl GramCompletionProblem {
    pub fn new(phi: ComplexMatrix) -> Self {
        assert!(phi.rows() >= 1 && phi.cols() >= 1, "phi must be nonempty");
        Self { phi }
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    /// Certified upper bound on the optimum (the primal objective).
    pub t_star: f64,
    /// Feasible completion [[P, Φ],[Φ*, Q]] of size (m+n).
    pub gram: ComplexMatrix,
    /// Certified lower bound from the projected dual iterate.
    pub dual_lower: f64,
    pub gap: f64,
    pub iterations: usize,
}

#[derive(Debug, Error)]
pub enum SdpError {
    #[error("iteration cap reached with certified gap {}", .0.gap)]
    NoConvergence(Box<SdpSolution>),
    #[error("Newton system unsolvable (ill-conditioned Schur complement)")]
    IllConditioned,
    #[error("eps {0} outside [1e-10, 1e-2]")]
    InvalidEps(f64),
}

pub fn solve_gram_completion(
    problem: &GramCompletionProblem,
    eps: f64,
) -> Result<SdpSolution, SdpError> {
    if !(1e-10..=1e-2).contains(&eps) {
        return Err(SdpError::InvalidEps(eps));
    }
    let phi = &problem.phi;
    if phi.max_abs() == 0.0 {
        let nb = phi.rows() + phi.cols();
        return Ok(SdpSolution {
            t_star: 0.0,
            gram: ComplexMatrix::zeros(nb, nb),
            dual_lower: 0.0,
            gap: 0.0,
            iterations: 0,
        });
    }
    ipm::Engine::new(phi).solve(eps)
}

#[derive(Debug, Clone, Copy)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub residual: f64,
}

/// Alternating projections between the PSD cone and the affine/convex set
/// {Hermitian, off-diagonal block = Φ, diagonal entries ≤ t}. The returned
/// residual is the final distance between the two projections, relative to
/// max(1, ‖Φ‖_F); the sets intersect iff it can be driven to zero.
pub fn feasibility_oracle(phi: &ComplexMatrix, t: f64, iters: usize) -> FeasibilityReport {
    assert!(t > 0.0, "feasibility_oracle needs t > 0");
    let (m, n) = (phi.rows(), phi.cols());
    let nb = m + n;
    let scale = phi.frobenius_norm().max(1.0);

    let project_affine = |w: &ComplexMatrix| -> ComplexMatrix {
        let mut a = w.hermitian_part();
        for s in 0..m {
            for u in 0..n {
                a[(s, m + u)] = phi[(s, u)];
                a[(m + u, s)] = phi[(s, u)].conj();
            }
        }
        for i in 0..nb {
            a[(i, i)] = Complex64::new(a[(i, i)].re.min(t), 0.0);
        }
        a
    };
    let project_psd = |w: &ComplexMatrix| -> ComplexMatrix {
        let (vals, vecs, _) = jacobi(&w.hermitian_part());
        let mut out = ComplexMatrix::zeros(nb, nb);
        for (j, &v) in vals.iter().enumerate() {
            if v <= 0.0 {
                continue;
            }
            for r in 0..nb {
                let ur = vecs[(r, j)] * v;
                for c in 0..nb {
                    out[(r, c)] += ur * vecs[(c, j)].conj();
                }
            }
        }
        out.hermitian_part()
    };

    let mut w = ComplexMatrix::zeros(nb, nb);
    for i in 0..nb {
        w[(i, i)] = Complex64::new(t, 0.0);
    }
    for s in 0..m {
        for u in 0..n {
            w[(s, m + u)] = phi[(s, u)];
            w[(m + u, s)] = phi[(s, u)].conj();
        }
    }

    let mut residual = f64::INFINITY;
    for _ in 0..iters.max(1) {
        let a = project_affine(&w);
        let p = project_psd(&a);
        residual = p.sub(&a).frobenius_norm() / scale;
        w = p;
        if residual < 1e-9 {
            break;
        }
    }
    FeasibilityReport { feasible: residual < 1e-7, residual }
}

//! The kernel Θ_{x,x*}(s,t) = ⟨B(t)A(s)x, x*⟩ for finite operator families,
//! and verification of the factorization inequality
//! ν₂(Θ_{x,x*}) ≤ γ(A)γ(B)‖x‖‖x*‖.
//!
//! The duality pairing is bilinear, ⟨y, x*⟩ = Σ_i y_i x*_i, and the dual norm
//! of ℓ^p is ℓ^{p′}. Finite sampling grids are exact instances of the
//! inequality (any subfamily of a γ-bounded family is γ-bounded with the same
//! constant under counting measure), not approximations.

use crate::gamma::{BanachSpaceDesc, OperatorFamily};
use crate::num::{expm, ComplexMatrix, NumError};
use crate::schur::{nu2, Nu2Certificate, SchurKernel};
use crate::sdp::SdpError;
use num_complex::Complex64;

/// Bilinear duality pairing ⟨y, x*⟩ = Σ_i y_i x*_i.
pub fn pair(y: &[Complex64], xstar: &[Complex64]) -> Complex64 {
    assert_eq!(y.len(), xstar.len(), "pairing dimensions must match");
    y.iter().zip(xstar).map(|(a, b)| a * b).sum()
}

/// Dual exponent p′ with 1/p + 1/p′ = 1.
pub fn dual_exponent(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

#[derive(Debug, Clone)]
pub struct ThetaKernel {
    pub kernel: SchurKernel,
    pub x: Vec<Complex64>,
    pub xstar: Vec<Complex64>,
    pub a: OperatorFamily,
    pub b: OperatorFamily,
}

pub fn theta_kernel(
    a: &OperatorFamily,
    b: &OperatorFamily,
    x: &[Complex64],
    xstar: &[Complex64],
) -> ThetaKernel {
    let d = a.space.d;
    assert_eq!(b.space.d, d, "families must act on the same space");
    assert_eq!(x.len(), d);
    assert_eq!(xstar.len(), d);
    let values = ComplexMatrix::from_fn(a.ops.len(), b.ops.len(), |s, t| {
        pair(&b.ops[t].apply(&a.ops[s].apply(x)), xstar)
    });
    ThetaKernel {
        kernel: SchurKernel::new(values),
        x: x.to_vec(),
        xstar: xstar.to_vec(),
        a: a.clone(),
        b: b.clone(),
    }
}

/// [T⁰, T¹, …, T^{N−1}] on ℓ²_d.
pub fn orbit_family(t: &ComplexMatrix, n: usize) -> OperatorFamily {
    assert!(t.is_square());
    assert!(n >= 1);
    let d = t.rows();
    let mut ops = Vec::with_capacity(n);
    ops.push(ComplexMatrix::identity(d));
    for j in 1..n {
        ops.push(ops[j - 1].matmul(t));
    }
    OperatorFamily::new(BanachSpaceDesc::new(2.0, d), ops)
}

/// [T₀, T_δ, …, T_{(N−1)δ}] with T_t = exp(−t·generator), each sample
/// computed directly from the exponential.
pub fn semigroup_family(
    generator: &ComplexMatrix,
    delta: f64,
    n: usize,
) -> Result<OperatorFamily, NumError> {
    assert!(generator.is_square());
    assert!(delta > 0.0, "delta must be positive");
    assert!(n >= 1);
    let d = generator.rows();
    let mut ops = Vec::with_capacity(n);
    for j in 0..n {
        let a = generator.scale(Complex64::new(-(j as f64) * delta, 0.0));
        ops.push(expm(&a)?);
    }
    Ok(OperatorFamily::new(BanachSpaceDesc::new(2.0, d), ops))
}

#[derive(Debug, Clone)]
pub struct MainReport {
    pub nu2: f64,
    pub bound: f64,
    pub pass: bool,
    pub certificate: Nu2Certificate,
}

/// Checks ν₂(Θ_{x,x*}) ≤ γ(A)γ(B)‖x‖_p‖x*‖_{p′}. The γ inputs are
/// caller-supplied; they are exact for p = 2 (sup of operator norms) and
/// otherwise the verdict is conditional on the supplied upper bounds.
pub fn verify_main(
    a: &OperatorFamily,
    b: &OperatorFamily,
    x: &[Complex64],
    xstar: &[Complex64],
    gamma_a: f64,
    gamma_b: f64,
    eps: f64,
) -> Result<MainReport, SdpError> {
    let theta = theta_kernel(a, b, x, xstar);
    let certificate = nu2(&theta.kernel, eps)?;
    let xnorm = a.space.norm(x);
    let dual_space = BanachSpaceDesc::new(dual_exponent(a.space.p), a.space.d);
    let xstar_norm = dual_space.norm(xstar);
    let bound = gamma_a * gamma_b * xnorm * xstar_norm;
    let pass = certificate.value <= bound * (1.0 + 1e-6) + eps.max(1e-6);
    Ok(MainReport { nu2: certificate.value, bound, pass, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{spectral_norm, vec_norm, GaussianStream};

    fn hilbert(d: usize) -> BanachSpaceDesc {
        BanachSpaceDesc::new(2.0, d)
    }

    fn gamma_exact(f: &OperatorFamily) -> f64 {
        f.ops.iter().map(spectral_norm).fold(0.0, f64::max)
    }

    #[test]
    fn identity_families_scalar_kernel() {
        let mut stream = GaussianStream::new(70);
        let x = stream.draw(3);
        let xstar = stream.draw(3);
        let fam = OperatorFamily::new(hilbert(3), vec![ComplexMatrix::identity(3)]);
        let theta = theta_kernel(&fam, &fam, &x, &xstar);
        assert_eq!(theta.kernel.values.rows(), 1);
        assert!((theta.kernel.values[(0, 0)] - pair(&x, &xstar)).norm() < 1e-14);
    }

    #[test]
    fn nilpotent_powers_kernel() {
        // T = [[0,1],[0,0]], A = B = {I, T}, x = e₂, x* = e₁ → [[0,1],[1,0]].
        let t = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let fam = orbit_family(&t, 2);
        let e2 = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let e1 = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let theta = theta_kernel(&fam, &fam, &e2, &e1);
        let k = &theta.kernel.values;
        assert!((k[(0, 0)].norm()) < 1e-14);
        assert!((k[(0, 1)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((k[(1, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((k[(1, 1)].norm()) < 1e-14);
    }

    #[test]
    fn single_column_reduction() {
        let mut stream = GaussianStream::new(71);
        let ops: Vec<ComplexMatrix> =
            (0..3).map(|_| ComplexMatrix::from_fn(2, 2, |_, _| stream.next_complex())).collect();
        let a = OperatorFamily::new(hilbert(2), ops.clone());
        let b = OperatorFamily::new(hilbert(2), vec![ComplexMatrix::identity(2)]);
        let x = stream.draw(2);
        let xstar = stream.draw(2);
        let theta = theta_kernel(&a, &b, &x, &xstar);
        for s in 0..3 {
            let expect = pair(&ops[s].apply(&x), &xstar);
            assert!((theta.kernel.values[(s, 0)] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn recomputation_invariant() {
        let mut stream = GaussianStream::new(72);
        let t = ComplexMatrix::from_fn(3, 3, |_, _| stream.next_complex() * 0.4);
        let fam = orbit_family(&t, 5);
        let x = stream.draw(3);
        let xstar = stream.draw(3);
        let theta = theta_kernel(&fam, &fam, &x, &xstar);
        for s in 0..5 {
            for u in 0..5 {
                let fresh = pair(&fam.ops[u].apply(&fam.ops[s].apply(&x)), &xstar);
                assert!((theta.kernel.values[(s, u)] - fresh).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn bilinearity_in_x() {
        let mut stream = GaussianStream::new(73);
        let t = ComplexMatrix::from_fn(2, 2, |_, _| stream.next_complex());
        let fam = orbit_family(&t, 3);
        let x = stream.draw(2);
        let xstar = stream.draw(2);
        let alpha = Complex64::new(1.3, -0.7);
        let ax: Vec<Complex64> = x.iter().map(|z| z * alpha).collect();
        let base = theta_kernel(&fam, &fam, &x, &xstar);
        let scaled = theta_kernel(&fam, &fam, &ax, &xstar);
        for s in 0..3 {
            for u in 0..3 {
                let expect = base.kernel.values[(s, u)] * alpha;
                assert!((scaled.kernel.values[(s, u)] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn orbit_family_examples() {
        let id = orbit_family(&ComplexMatrix::identity(2), 4);
        for op in &id.ops {
            assert_eq!(*op, ComplexMatrix::identity(2));
        }
        let t = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let nil = orbit_family(&t, 4);
        assert_eq!(nil.ops[1], t);
        assert!(nil.ops[2].frobenius_norm() < 1e-15);
        assert!(nil.ops[3].frobenius_norm() < 1e-15);
        let d = ComplexMatrix::diag(&[Complex64::new(0.5, 0.0), Complex64::new(-0.25, 0.0)]);
        let pw = orbit_family(&d, 3);
        assert!((pw.ops[2][(0, 0)].re - 0.25).abs() < 1e-15);
        assert!((pw.ops[2][(1, 1)].re - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn semigroup_family_law_and_examples() {
        let zero = ComplexMatrix::zeros(2, 2);
        let f = semigroup_family(&zero, 0.5, 4).unwrap();
        for op in &f.ops {
            assert!(op.sub(&ComplexMatrix::identity(2)).frobenius_norm() < 1e-14);
        }

        let one = ComplexMatrix::identity(1);
        let g = semigroup_family(&one, 0.3, 5).unwrap();
        for j in 0..5 {
            let expect = (-(j as f64) * 0.3).exp();
            assert!((g.ops[j][(0, 0)].re - expect).abs() < 1e-12);
        }

        let mut stream = GaussianStream::new(74);
        let gen = ComplexMatrix::from_fn(3, 3, |_, _| stream.next_complex());
        let sg = semigroup_family(&gen, 0.2, 6).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                let prod = sg.ops[j].matmul(&sg.ops[k]);
                let err = prod.sub(&sg.ops[j + k]).frobenius_norm();
                assert!(err < 1e-8 * (1.0 + sg.ops[j + k].frobenius_norm()), "law broke: {err}");
            }
        }
    }

    #[test]
    fn main_theorem_identity_case() {
        let fam = OperatorFamily::new(hilbert(2), vec![ComplexMatrix::identity(2)]);
        let x = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let report = verify_main(&fam, &fam, &x, &x, 1.0, 1.0, 1e-8).unwrap();
        assert!(report.pass);
        assert!((report.nu2 - 1.0).abs() < 1e-6);
        assert!((report.bound - 1.0).abs() < 1e-12);
    }

    #[test]
    fn main_theorem_random_contractions() {
        let mut stream = GaussianStream::new(75);
        for _ in 0..10 {
            let raw = ComplexMatrix::from_fn(3, 3, |_, _| stream.next_complex());
            let t = raw.scale(Complex64::new(0.9 / spectral_norm(&raw).max(1e-9), 0.0));
            let fam = orbit_family(&t, 8);
            let gamma = gamma_exact(&fam);
            let x = stream.draw(3);
            let xstar = stream.draw(3);
            let report = verify_main(&fam, &fam, &x, &xstar, gamma, gamma, 1e-7).unwrap();
            assert!(
                report.pass,
                "theorem instance failed: nu2 {} bound {}",
                report.nu2, report.bound
            );
        }
    }

    #[test]
    fn unitary_orbit_bound_one() {
        // Unitary T: all powers isometric, γ = 1, so ν₂(Θ) ≤ ‖x‖‖x*‖.
        let theta = 0.9f64;
        let t = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(theta.cos(), 0.0),
                Complex64::new(-theta.sin(), 0.0),
                Complex64::new(theta.sin(), 0.0),
                Complex64::new(theta.cos(), 0.0),
            ],
        )
        .unwrap();
        let fam = orbit_family(&t, 8);
        let mut stream = GaussianStream::new(76);
        let x = stream.draw(2);
        let xstar = stream.draw(2);
        let report = verify_main(&fam, &fam, &x, &xstar, 1.0, 1.0, 1e-7).unwrap();
        assert!(report.pass, "nu2 {} vs {}", report.nu2, report.bound);
        assert!(report.nu2 <= vec_norm(&x) * vec_norm(&xstar) * (1.0 + 1e-6) + 1e-6);
    }
}

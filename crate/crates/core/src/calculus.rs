//! Hankel kernels and truncation bounds for the H¹(S¹) multiplier norm,
//! A_{0,S¹} norm bounds for analytic polynomials, the polynomial functional
//! calculus ρ_T, and Hille–Phillips quadrature for sampled semigroups.
//!
//! For a sequence m the kernel φ_m(k,l) = m(k+l) has ν₂(φ_m) = ‖m‖_{M_{S¹}};
//! finite truncations give a nondecreasing sequence of certified lower
//! bounds. Convolution on the circle is normalized, (f⋆h)^(n) = f̂(n)ĥ(n),
//! so e_n ⋆ e_n = e_n serves as a calibration identity.

use crate::factor::pair;
use crate::num::{expm, spectral_norm, vec_norm, ComplexMatrix, NumError};
use crate::schur::{nu2, Nu2Certificate, SchurKernel};
use crate::sdp::SdpError;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CalculusError {
    #[error("sequence of length {got} cannot fill a {n}×{n} Hankel kernel (need {need})")]
    LengthMismatch { got: usize, n: usize, need: usize },
    #[error("decomposition does not reproduce the polynomial: grid error {0:.3e}")]
    DecompositionMismatch(f64),
    #[error("grid sizes differ: semigroup has {expected}, function has {got}")]
    GridMismatch { expected: usize, got: usize },
}

/// m(0), …, m(2N−2) feeding an N×N Hankel kernel.
#[derive(Debug, Clone)]
pub struct HankelSequence {
    pub values: Vec<Complex64>,
    pub n: usize,
}

impl HankelSequence {
    pub fn new(values: Vec<Complex64>, n: usize) -> Result<Self, CalculusError> {
        let need = 2 * n - 1;
        if n == 0 || values.len() < need {
            return Err(CalculusError::LengthMismatch { got: values.len(), n, need });
        }
        Ok(Self { values, n })
    }
}

/// φ_m(k,l) = m(k+l).
pub fn hankel_kernel(m: &HankelSequence) -> SchurKernel {
    SchurKernel::new(ComplexMatrix::from_fn(m.n, m.n, |k, l| m.values[k + l]))
}

/// ν₂ of the N×N truncation: a certified lower bound for ‖m‖_{M_{S¹}},
/// nondecreasing in N.
pub fn ms1_lower(m: &HankelSequence, eps: f64) -> Result<Nu2Certificate, SdpError> {
    nu2(&hankel_kernel(m), eps)
}

/// m(n) = ⟨Tⁿx, x*⟩ for n < 2N−1.
pub fn coeff_sequence(t: &ComplexMatrix, x: &[Complex64], xstar: &[Complex64], n: usize) -> HankelSequence {
    assert!(t.is_square());
    assert!(n >= 1);
    let mut values = Vec::with_capacity(2 * n - 1);
    let mut power = x.to_vec();
    values.push(pair(&power, xstar));
    for _ in 1..2 * n - 1 {
        power = t.apply(&power);
        values.push(pair(&power, xstar));
    }
    HankelSequence { values, n }
}

#[derive(Debug, Clone)]
pub struct CalculusReport {
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
    pub certificate: Nu2Certificate,
}

/// Theorem-style check ‖m‖_{M_{S¹}} ≥ ν₂(truncation) with
/// ν₂ ≤ γ(T•)²‖x‖‖x*‖ for m(n) = ⟨Tⁿx, x*⟩.
pub fn verify_power(
    t: &ComplexMatrix,
    x: &[Complex64],
    xstar: &[Complex64],
    n: usize,
    gamma_t: f64,
    eps: f64,
) -> Result<CalculusReport, SdpError> {
    let m = coeff_sequence(t, x, xstar, n);
    let certificate = ms1_lower(&m, eps)?;
    let bound = gamma_t * gamma_t * vec_norm(x) * vec_norm(xstar);
    let pass = certificate.value <= bound * (1.0 + 1e-6) + eps.max(1e-6);
    Ok(CalculusReport { value: certificate.value, bound, pass, certificate })
}

/// F = Σ_{n=0}^{deg} F̂(n) e_n.
#[derive(Debug, Clone)]
pub struct AnalyticPolynomial {
    pub coefficients: Vec<Complex64>,
}

impl AnalyticPolynomial {
    pub fn monomial(n: usize) -> Self {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); n + 1];
        coefficients[n] = Complex64::new(1.0, 0.0);
        Self { coefficients }
    }

    pub fn coef(&self, n: i64) -> Complex64 {
        if n >= 0 && (n as usize) < self.coefficients.len() {
            self.coefficients[n as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(n, c)| c * Complex64::from_polar(1.0, n as f64 * theta))
            .sum()
    }
}

/// Trigonometric polynomial with finite support: coefficient k corresponds to
/// frequency offset + k.
#[derive(Debug, Clone)]
pub struct TrigPolynomial {
    pub offset: i64,
    pub coefficients: Vec<Complex64>,
}

impl TrigPolynomial {
    pub fn from_analytic(f: &AnalyticPolynomial) -> Self {
        Self { offset: 0, coefficients: f.coefficients.clone() }
    }

    pub fn coef(&self, n: i64) -> Complex64 {
        let k = n - self.offset;
        if k >= 0 && (k as usize) < self.coefficients.len() {
            self.coefficients[k as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn span(&self) -> usize {
        self.coefficients.len()
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::from_polar(1.0, (self.offset + k as i64) as f64 * theta))
            .sum()
    }
}

/// Candidate decomposition F = Σ_k f_k ⋆ h_k witnessing an A_{0,S¹} upper
/// bound.
#[derive(Debug, Clone)]
pub struct A0Decomposition {
    pub pairs: Vec<(TrigPolynomial, AnalyticPolynomial)>,
    pub grid_size: usize,
}

/// Grid maximum of |g| over M = 1024·(deg+1) equispaced points. This is a
/// lower-biased estimate of the sup norm; downstream tolerances absorb the
/// bias at the degrees used here.
fn grid_sup<F: Fn(f64) -> Complex64>(g: F, degree: usize) -> f64 {
    let m = 1024 * (degree + 1);
    (0..m)
        .map(|j| g(2.0 * PI * j as f64 / m as f64).norm())
        .fold(0.0, f64::max)
}

/// Normalized L¹ norm (1/2π)∫|g| by the periodic trapezoid rule on the same
/// oversampled grid.
fn grid_l1<F: Fn(f64) -> Complex64>(g: F, degree: usize) -> f64 {
    let m = 1024 * (degree + 1);
    (0..m).map(|j| g(2.0 * PI * j as f64 / m as f64).norm()).sum::<f64>() / m as f64
}

/// Σ_k (sup|f_k|)·‖h_k‖₁ after checking that Σ_k f_k ⋆ h_k reproduces F on
/// the evaluation grid. Valid upper bound on ‖F‖_{A_{0,S¹}} (scalar blocks).
pub fn a0_upper(f: &AnalyticPolynomial, dec: &A0Decomposition) -> Result<f64, CalculusError> {
    let grid = dec.grid_size.max(8);
    let scale = (0..grid)
        .map(|j| f.eval(2.0 * PI * j as f64 / grid as f64).norm())
        .fold(1.0f64, f64::max);
    let mut worst = 0.0f64;
    for j in 0..grid {
        let theta = 2.0 * PI * j as f64 / grid as f64;
        // (f⋆h)(θ) = Σ_n f̂(n)ĥ(n)e^{inθ} under normalized convolution.
        let mut recon = Complex64::new(0.0, 0.0);
        for (fk, hk) in &dec.pairs {
            for n in 0..=hk.degree() as i64 {
                let c = fk.coef(n) * hk.coef(n);
                if c.norm_sqr() > 0.0 {
                    recon += c * Complex64::from_polar(1.0, n as f64 * theta);
                }
            }
        }
        worst = worst.max((recon - f.eval(theta)).norm());
    }
    if worst > 1e-8 * scale {
        return Err(CalculusError::DecompositionMismatch(worst));
    }
    Ok(dec
        .pairs
        .iter()
        .map(|(fk, hk)| {
            grid_sup(|t| fk.eval(t), fk.span()) * grid_l1(|t| hk.eval(t), hk.degree())
        })
        .sum())
}

/// Completely monotone test: real entries with alternating finite differences.
fn completely_monotone(values: &[Complex64]) -> bool {
    if values.iter().any(|z| z.im.abs() > 1e-12) {
        return false;
    }
    let mut d: Vec<f64> = values.iter().map(|z| z.re).collect();
    let mut sign = 1.0;
    loop {
        if d.iter().any(|&v| sign * v < -1e-10) {
            return false;
        }
        if d.len() <= 1 {
            return true;
        }
        d = d.windows(2).map(|w| w[1] - w[0]).collect();
        sign = -sign;
    }
}

#[derive(Debug, Clone, Copy)]
pub struct A0LowerBound {
    pub value: f64,
    /// |⟨F, m⟩|/‖m‖_{M_{S¹}}-upper-bound via the duality pairing.
    pub pairing_bound: f64,
    /// ‖F‖∞ ≤ ‖F‖_{A_{0,S¹}} (grid estimate).
    pub sup_bound: f64,
}

/// Lower bound on ‖F‖_{A_{0,S¹}} through the duality pairing
/// ⟨F, m⟩ = Σ F̂(n)m(n) against a finitely supported multiplier symbol. The
/// symbol's norm is bounded above by min(Σ|m(n)|, m(0) for completely
/// monotone m): each antidiagonal δ-pattern has ν₂ = 1 (permutation
/// factorization), giving the ℓ¹ bound; completely monotone sequences factor
/// through their moment representation with vectors of norm ≤ √m(0).
pub fn a0_lower(f: &AnalyticPolynomial, m: &[Complex64]) -> A0LowerBound {
    let l1: f64 = m.iter().map(|z| z.norm()).sum();
    let mut ub = l1;
    if completely_monotone(m) && !m.is_empty() {
        ub = ub.min(m[0].re);
    }
    let pairing: Complex64 = m
        .iter()
        .enumerate()
        .map(|(n, c)| f.coef(n as i64) * c)
        .sum();
    let pairing_bound = if ub > 1e-300 { pairing.norm() / ub } else { 0.0 };
    let sup_bound = grid_sup(|t| f.eval(t), f.degree());
    A0LowerBound { value: pairing_bound.max(sup_bound), pairing_bound, sup_bound }
}

/// ρ_T(F) = Σ_n F̂(n)Tⁿ.
pub fn rho_eval(t: &ComplexMatrix, f: &AnalyticPolynomial) -> ComplexMatrix {
    assert!(t.is_square());
    let d = t.rows();
    let mut out = ComplexMatrix::zeros(d, d);
    let mut power = ComplexMatrix::identity(d);
    for (n, c) in f.coefficients.iter().enumerate() {
        if n > 0 {
            power = power.matmul(t);
        }
        if c.norm_sqr() > 0.0 {
            out = out.add(&power.scale(*c));
        }
    }
    out
}

/// Semigroup sampled on the uniform grid jδ, j < N.
#[derive(Debug, Clone)]
pub struct SemigroupSample {
    pub generator: ComplexMatrix,
    pub delta: f64,
    pub n: usize,
    pub samples: Vec<ComplexMatrix>,
}

impl SemigroupSample {
    pub fn new(generator: ComplexMatrix, delta: f64, n: usize) -> Result<Self, NumError> {
        assert!(generator.is_square());
        assert!(delta > 0.0 && n >= 1);
        let mut samples = Vec::with_capacity(n);
        for j in 0..n {
            let a = generator.scale(Complex64::new(-(j as f64) * delta, 0.0));
            samples.push(expm(&a)?);
        }
        Ok(Self { generator, delta, n, samples })
    }
}

#[derive(Debug, Clone)]
pub struct HillePhillips {
    pub gamma: ComplexMatrix,
    pub norm: f64,
    /// (sup_j ‖T_{jδ}‖)·‖b‖₁, the (3Rough)-style domination.
    pub rough_bound: f64,
    pub rough_ok: bool,
}

/// Trapezoidal quadrature of ∫ b(t)T_t dt on the sample grid.
pub fn hille_phillips(sg: &SemigroupSample, b: &[Complex64]) -> Result<HillePhillips, CalculusError> {
    if b.len() != sg.n {
        return Err(CalculusError::GridMismatch { expected: sg.n, got: b.len() });
    }
    let d = sg.generator.rows();
    let mut gamma = ComplexMatrix::zeros(d, d);
    let mut b_l1 = 0.0;
    let mut sup_t = 0.0f64;
    for j in 0..sg.n {
        let w = if j == 0 || j == sg.n - 1 { 0.5 * sg.delta } else { sg.delta };
        gamma = gamma.add(&sg.samples[j].scale(b[j] * w));
        b_l1 += w * b[j].norm();
        sup_t = sup_t.max(spectral_norm(&sg.samples[j]));
    }
    let norm = spectral_norm(&gamma);
    let rough_bound = sup_t * b_l1;
    Ok(HillePhillips { gamma, norm, rough_bound, rough_ok: norm <= rough_bound * (1.0 + 1e-9) + 1e-12 })
}

/// Theorem-style semigroup check: m(jδ) = ⟨T_{jδ}x, x*⟩, kernel
/// m((j+k)δ) of size ⌊(N+1)/2⌋ — an exact counting-measure instance — with
/// ν₂ ≤ γ(𝒯)²‖x‖‖x*‖.
pub fn verify_semigroup(
    sg: &SemigroupSample,
    x: &[Complex64],
    xstar: &[Complex64],
    gamma_t: f64,
    eps: f64,
) -> Result<CalculusReport, SdpError> {
    let kernel_n = (sg.n + 1) / 2;
    let values: Vec<Complex64> = (0..2 * kernel_n - 1)
        .map(|j| pair(&sg.samples[j].apply(x), xstar))
        .collect();
    let m = HankelSequence { values, n: kernel_n };
    let certificate = ms1_lower(&m, eps)?;
    let bound = gamma_t * gamma_t * vec_norm(x) * vec_norm(xstar);
    let pass = certificate.value <= bound * (1.0 + 1e-6) + eps.max(1e-6);
    Ok(CalculusReport { value: certificate.value, bound, pass, certificate })
}

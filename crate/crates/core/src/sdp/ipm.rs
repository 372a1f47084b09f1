//! Primal-dual path-following engine for the Gram-completion program
//!
//! ```text
//! minimize t   s.t.  [[P, Φ],[Φ*, Q]] ⪰ 0,  P_ii ≤ t,  Q_jj ≤ t.
//! ```
//!
//! The Hermitian cone is handled through the real symmetric embedding
//! X ↦ [[Re X, −Im X],[Im X, Re X]]; since every iterate is the embedding of a
//! Hermitian matrix, the embedded arithmetic collapses to complex Hermitian
//! arithmetic with the inner product ⟨A,B⟩ = 2 Re tr(AB) and barrier
//! dimension 2(m+n). Directions are HKM with a Mehrotra predictor-corrector;
//! the Schur complement is dense and solved by Cholesky.
//!
//! The reported bounds are certified: the primal iterate is feasible by
//! construction (slacks stay strictly positive), and the dual bound is
//! extracted from the dual iterate after projecting it to exact feasibility,
//! with the projection slack charged to the gap.

use super::herm::{is_positive_definite, pd_inverse};
use super::spd::SpdFactor;
use super::{SdpError, SdpSolution};
use crate::num::eig::jacobi;
use crate::num::ComplexMatrix;
use num_complex::Complex64;

const MAX_ITER: usize = 200;
const STEP_FRACTION: f64 = 0.98;

/// One Hermitian basis element: entries in the (m+n) block.
struct Var {
    big: Vec<(usize, usize, Complex64)>,
}

pub(super) struct Engine {
    m: usize,
    n: usize,
    nb: usize,
    phi: ComplexMatrix, // normalized so max |φ| = 1
    scale: f64,
    vars: Vec<Var>,
    /// (variable index, slack index) for the diagonal caps P_ii ≤ t, Q_jj ≤ t.
    diag_vars: Vec<(usize, usize)>,
    f0: ComplexMatrix,
}

impl Engine {
    pub(super) fn new(phi: &ComplexMatrix) -> Self {
        let (m, n) = (phi.rows(), phi.cols());
        let nb = m + n;
        let scale = phi.max_abs();
        let phin = phi.scale(Complex64::new(1.0 / scale, 0.0));

        let one = Complex64::new(1.0, 0.0);
        let i_unit = Complex64::new(0.0, 1.0);
        let mut vars = vec![Var { big: Vec::new() }]; // index 0: t
        let mut diag_vars = Vec::new();
        for (off, dim) in [(0usize, m), (m, n)] {
            for i in 0..dim {
                diag_vars.push((vars.len(), off + i));
                vars.push(Var { big: vec![(off + i, off + i, one)] });
            }
            for i in 0..dim {
                for j in i + 1..dim {
                    vars.push(Var { big: vec![(off + i, off + j, one), (off + j, off + i, one)] });
                    vars.push(Var {
                        big: vec![(off + i, off + j, i_unit), (off + j, off + i, -i_unit)],
                    });
                }
            }
        }

        let mut f0 = ComplexMatrix::zeros(nb, nb);
        for s in 0..m {
            for t in 0..n {
                f0[(s, m + t)] = phin[(s, t)];
                f0[(m + t, s)] = phin[(s, t)].conj();
            }
        }

        Self { m, n, nb, phi: phin, scale, vars, diag_vars, f0 }
    }

    fn num_vars(&self) -> usize {
        self.vars.len()
    }

    fn assemble_big(&self, y: &[f64]) -> ComplexMatrix {
        let mut z = self.f0.clone();
        for (var, &yk) in self.vars.iter().zip(y) {
            for &(a, b, h) in &var.big {
                z[(a, b)] += h * yk;
            }
        }
        z
    }

    fn slacks(&self, y: &[f64]) -> Vec<f64> {
        let mut zs = vec![y[0]; self.nb];
        for &(v, s) in &self.diag_vars {
            zs[s] -= y[v];
        }
        zs
    }

    fn direction_big(&self, dy: &[f64]) -> ComplexMatrix {
        let mut dz = ComplexMatrix::zeros(self.nb, self.nb);
        for (var, &dk) in self.vars.iter().zip(dy) {
            for &(a, b, h) in &var.big {
                dz[(a, b)] += h * dk;
            }
        }
        dz
    }

    fn direction_slacks(&self, dy: &[f64]) -> Vec<f64> {
        let mut dzs = vec![dy[0]; self.nb];
        for &(v, s) in &self.diag_vars {
            dzs[s] -= dy[v];
        }
        dzs
    }

    /// ⟨F_k, (G, g)⟩ in the embedded inner product: 2 Re tr(H_k G) plus the
    /// scalar-block pairing.
    fn pair_var(&self, k: usize, g: &ComplexMatrix, gs: &[f64]) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(a, b, h) in &self.vars[k].big {
            acc += h * g[(b, a)];
        }
        let mut out = 2.0 * acc.re;
        if k == 0 {
            out += gs.iter().sum::<f64>();
        }
        out
    }

    /// Certified dual lower bound from a dual iterate: force the diagonal
    /// blocks diagonal, restore positivity by a shift, normalize the trace
    /// constraint, then evaluate the dual objective.
    fn certify(&self, xb: &ComplexMatrix) -> Option<f64> {
        let nb = self.nb;
        let mut e = ComplexMatrix::zeros(nb, nb);
        for i in 0..nb {
            e[(i, i)] = Complex64::new(xb[(i, i)].re, 0.0);
        }
        for s in 0..self.m {
            for t in 0..self.n {
                e[(s, self.m + t)] = xb[(s, self.m + t)];
                e[(self.m + t, s)] = xb[(s, self.m + t)].conj();
            }
        }
        let (vals, _, _) = jacobi(&e);
        let lambda_min = vals.first().copied().unwrap_or(0.0);
        let shift = (-lambda_min).max(0.0) * (1.0 + 1e-9) + 1e-306;
        let s_total: f64 = (0..nb).map(|i| e[(i, i)].re + shift).sum();
        if !(s_total > 1e-300) {
            return None;
        }
        let mut pairing = 0.0;
        for s in 0..self.m {
            for t in 0..self.n {
                pairing += (self.phi[(s, t)].conj() * e[(s, self.m + t)]).re;
            }
        }
        Some(-2.0 * pairing / s_total)
    }

    pub(super) fn solve(&self, eps: f64) -> Result<SdpSolution, SdpError> {
        let nb = self.nb;
        let nv = self.num_vars();
        let barrier_dim = (2 * nb + nb) as f64;

        // Strictly feasible primal start: P = Q = βI with β > ‖Φ‖.
        let beta = self.phi.frobenius_norm() + 1.0;
        let mut y = vec![0.0; nv];
        y[0] = 2.0 * beta;
        for &(v, _) in &self.diag_vars {
            y[v] = beta;
        }
        // Exactly feasible dual start.
        let mut xb = ComplexMatrix::identity(nb).scale(Complex64::new(1.0 / (2.0 * nb as f64), 0.0));
        let mut xs = vec![1.0 / nb as f64; nb];

        let mut zb = self.assemble_big(&y);
        let mut zs = self.slacks(&y);

        let mut best_t = y[0];
        let mut best_y = y.clone();
        let mut best_dual = f64::NEG_INFINITY;
        let mut iterations = 0;

        for iter in 0..MAX_ITER {
            iterations = iter;
            if y[0] < best_t {
                best_t = y[0];
                best_y = y.clone();
            }
            if let Some(d) = self.certify(&xb) {
                best_dual = best_dual.max(d);
            }
            let gap_certified = (best_t - best_dual) * self.scale;
            if best_dual.is_finite() && gap_certified <= eps * (best_t * self.scale).max(1.0) {
                return Ok(self.finish(best_t, &best_y, best_dual, iterations));
            }

            let sinv = match pd_inverse(&zb) {
                Some(s) => s,
                None => break,
            };
            let duality = ip(&xb, &zb, &xs, &zs);
            let mu = duality / barrier_dim;
            if mu < 1e-16 {
                break;
            }

            // Schur complement, symmetrized.
            let mut bmat = vec![0.0f64; nv * nv];
            for k in 0..nv {
                let kb = &self.vars[k].big;
                for l in k..nv {
                    let lb = &self.vars[l].big;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for &(a, b, h) in kb {
                        for &(c, d, g) in lb {
                            acc += h * g * (sinv[(b, c)] * xb[(d, a)] + sinv[(d, a)] * xb[(b, c)]);
                        }
                    }
                    bmat[k * nv + l] = acc.re;
                    bmat[l * nv + k] = acc.re;
                }
            }
            // Scalar-block contributions: only t and the diagonal caps touch it.
            let w: Vec<f64> = (0..nb).map(|s| xs[s] / zs[s]).collect();
            bmat[0] += w.iter().sum::<f64>();
            for &(v, s) in &self.diag_vars {
                bmat[v] -= w[s];
                bmat[v * nv] -= w[s];
                bmat[v * nv + v] += w[s];
            }

            let factor = match factor_with_ridge(&mut bmat, nv) {
                Some(f) => f,
                None => return Err(SdpError::IllConditioned),
            };

            // w_k = ⟨F_k, Z^{-1}⟩ for the collapsed right-hand sides.
            let zinv_scal: Vec<f64> = zs.iter().map(|&z| 1.0 / z).collect();
            let wvec: Vec<f64> = (0..nv).map(|k| self.pair_var_diag(k, &sinv, &zinv_scal)).collect();

            // Predictor: σ = 0, rhs_k = −c_k.
            let mut rhs: Vec<f64> = vec![0.0; nv];
            rhs[0] = -1.0;
            let dy_aff = factor.solve(&rhs);
            let dz_aff = self.direction_big(&dy_aff);
            let dzs_aff = self.direction_slacks(&dy_aff);
            let dx_aff = dx_from(&sinv, &xb, &dz_aff, 0.0);
            let dxs_aff: Vec<f64> = (0..nb)
                .map(|s| -xs[s] - dzs_aff[s] * xs[s] / zs[s])
                .collect();
            let az_aff = step_length(&zb, &dz_aff, &zs, &dzs_aff);
            let ax_aff = step_length(&xb, &dx_aff, &xs, &dxs_aff);

            let gap_aff = ip_stepped(&xb, &dx_aff, ax_aff, &zb, &dz_aff, az_aff, &xs, &dxs_aff, &zs, &dzs_aff);
            let sigma = ((gap_aff / duality).max(0.0).powi(3)).clamp(1e-8, 1.0);

            // Corrector.
            let mcorr = sinv.matmul(&dz_aff).matmul(&dx_aff);
            let corr_scal: Vec<f64> =
                (0..nb).map(|s| dzs_aff[s] * dxs_aff[s] / zs[s]).collect();
            for k in 0..nv {
                rhs[k] = sigma * mu * wvec[k] - self.pair_var(k, &mcorr, &corr_scal);
            }
            rhs[0] -= 1.0;
            let dy = factor.solve(&rhs);
            let dz = self.direction_big(&dy);
            let dzs = self.direction_slacks(&dy);
            let dx = dx_from(&sinv, &xb, &dz, sigma * mu).sub(&sinv.matmul(&dz_aff).matmul(&dx_aff).hermitian_part());
            let dxs: Vec<f64> = (0..nb)
                .map(|s| (sigma * mu - zs[s] * xs[s] - dzs[s] * xs[s] - dzs_aff[s] * dxs_aff[s]) / zs[s])
                .collect();

            let az = step_length(&zb, &dz, &zs, &dzs);
            let ax = step_length(&xb, &dx, &xs, &dxs);
            if az < 1e-12 && ax < 1e-12 {
                break;
            }

            for k in 0..nv {
                y[k] += az * dy[k];
            }
            zb = self.assemble_big(&y);
            zs = self.slacks(&y);
            xb = xb.add(&dx.scale(Complex64::new(ax, 0.0))).hermitian_part();
            for s in 0..nb {
                xs[s] += ax * dxs[s];
            }
        }

        // Ran out of iterations or stalled: report the best certified bounds.
        let sol = self.finish(best_t, &best_y, best_dual, iterations);
        let target = eps * sol.t_star.max(1.0);
        if sol.gap <= target {
            Ok(sol)
        } else {
            Err(SdpError::NoConvergence(Box::new(sol)))
        }
    }

    /// ⟨F_k, Z^{-1}⟩ where the big block is a dense Hermitian inverse and the
    /// scalar block is the vector of reciprocal slacks.
    fn pair_var_diag(&self, k: usize, sinv: &ComplexMatrix, zinv_scal: &[f64]) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(a, b, h) in &self.vars[k].big {
            acc += h * sinv[(b, a)];
        }
        let mut out = 2.0 * acc.re;
        if k == 0 {
            out += zinv_scal.iter().sum::<f64>();
        } else if let Some(&(_, s)) = self.diag_vars.iter().find(|&&(v, _)| v == k) {
            out -= zinv_scal[s];
        }
        out
    }

    fn finish(&self, t: f64, y: &[f64], dual: f64, iterations: usize) -> SdpSolution {
        let nb = self.nb;
        let mut gram = self.assemble_big(y).scale(Complex64::new(self.scale, 0.0));
        // Keep the off-diagonal block bit-exact.
        for s in 0..self.m {
            for u in 0..self.n {
                let v = self.phi[(s, u)] * self.scale;
                gram[(s, self.m + u)] = v;
                gram[(self.m + u, s)] = v.conj();
            }
        }
        let _ = nb;
        let t_star = t * self.scale;
        let dual_lower = if dual.is_finite() { dual * self.scale } else { 0.0 };
        SdpSolution { t_star, gram, dual_lower, gap: t_star - dual_lower, iterations }
    }
}

fn factor_with_ridge(bmat: &mut [f64], nv: usize) -> Option<SpdFactor> {
    let max_diag = (0..nv).map(|k| bmat[k * nv + k]).fold(0.0f64, f64::max).max(1e-300);
    let mut ridge = 0.0;
    for _ in 0..4 {
        if ridge > 0.0 {
            for k in 0..nv {
                bmat[k * nv + k] += ridge;
            }
        }
        if let Some(f) = SpdFactor::new(bmat, nv) {
            return Some(f);
        }
        ridge = if ridge == 0.0 { 1e-13 * max_diag } else { ridge * 100.0 };
    }
    None
}

/// HKM direction for the big block: ΔX = σμ Z^{-1} − X − Z^{-1} ΔZ X,
/// symmetrized.
fn dx_from(sinv: &ComplexMatrix, xb: &ComplexMatrix, dz: &ComplexMatrix, sigma_mu: f64) -> ComplexMatrix {
    let mut out = sinv.scale(Complex64::new(sigma_mu, 0.0)).sub(xb);
    out = out.sub(&sinv.matmul(dz).matmul(xb));
    out.hermitian_part()
}

/// Embedded duality product ⟨X, Z⟩ = 2 Re tr(X Z) + xs·zs.
fn ip(xb: &ComplexMatrix, zb: &ComplexMatrix, xs: &[f64], zs: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, z) in xb.entries().iter().zip(zb.entries()) {
        acc += (x * z.conj()).re;
    }
    2.0 * acc + xs.iter().zip(zs).map(|(a, b)| a * b).sum::<f64>()
}

#[allow(clippy::too_many_arguments)]
fn ip_stepped(
    xb: &ComplexMatrix,
    dx: &ComplexMatrix,
    ax: f64,
    zb: &ComplexMatrix,
    dz: &ComplexMatrix,
    az: f64,
    xs: &[f64],
    dxs: &[f64],
    zs: &[f64],
    dzs: &[f64],
) -> f64 {
    let xn = xb.add(&dx.scale(Complex64::new(ax, 0.0)));
    let zn = zb.add(&dz.scale(Complex64::new(az, 0.0)));
    let xsn: Vec<f64> = xs.iter().zip(dxs).map(|(a, d)| a + ax * d).collect();
    let zsn: Vec<f64> = zs.iter().zip(dzs).map(|(a, d)| a + az * d).collect();
    ip(&xn, &zn, &xsn, &zsn)
}

/// Largest step fraction keeping the block PD and the slacks positive.
fn step_length(big: &ComplexMatrix, dbig: &ComplexMatrix, scal: &[f64], dscal: &[f64]) -> f64 {
    let mut cap = 1.0 / STEP_FRACTION;
    for (z, d) in scal.iter().zip(dscal) {
        if *d < 0.0 {
            cap = cap.min(-z / d * 0.99999);
        }
    }
    if cap <= 0.0 {
        return 0.0;
    }
    let test = |alpha: f64| {
        is_positive_definite(&big.add(&dbig.scale(Complex64::new(alpha, 0.0))))
    };
    let alpha_max = if test(cap) {
        cap
    } else {
        let (mut lo, mut hi) = (0.0f64, cap);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if test(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    (STEP_FRACTION * alpha_max).min(1.0)
}

//! Finite groups, the regular representation, σ_π homomorphisms, the Q-norm,
//! and completely bounded Fourier multiplier norms.
//!
//! Haar measure on a finite group is counting measure (not normalized), so
//! σ_λ(δ_s) = λ(s) and f ↦ σ_λ(f) realizes the group algebra acting on ℓ²(G).
//! For finite (hence amenable) groups ‖f‖_Q = ‖σ_λ(f)‖, and the multiplier
//! norm ‖ψ‖₀ equals ν₂ of the kernel φ(s,t) = ψ(ts) over the whole group.

use crate::num::{spectral_norm, ComplexMatrix};
use crate::schur::{nu2, Nu2Certificate, SchurKernel};
use crate::sdp::SdpError;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}

/// Multiplication table group: `table[a][b]` is the index of a·b.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    pub identity: usize,
}

impl FiniteGroup {
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

#[derive(Debug, Clone)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Explicit(Vec<Vec<usize>>),
}

pub fn make_group(spec: &GroupSpec) -> Result<FiniteGroup, GroupError> {
    let table = match spec {
        GroupSpec::Cyclic(n) => {
            if *n == 0 {
                return Err(GroupError::InvalidSpec("cyclic group needs n ≥ 1".into()));
            }
            (0..*n).map(|i| (0..*n).map(|j| (i + j) % n).collect()).collect()
        }
        GroupSpec::Dihedral(n) => {
            if *n < 1 {
                return Err(GroupError::InvalidSpec("dihedral group needs n ≥ 1".into()));
            }
            // Element r^i s^e at index i + e·n; s r^j = r^{−j} s gives
            // (r^i s^e)(r^j s^f) = r^{i + (−1)^e j} s^{e⊕f}.
            let n = *n;
            let idx = |i: usize, e: usize| i + e * n;
            let mut t = vec![vec![0; 2 * n]; 2 * n];
            for i in 0..n {
                for e in 0..2 {
                    for j in 0..n {
                        for f in 0..2 {
                            let rot = if e == 0 { (i + j) % n } else { (i + n - j % n) % n };
                            t[idx(i, e)][idx(j, f)] = idx(rot, e ^ f);
                        }
                    }
                }
            }
            t
        }
        GroupSpec::Symmetric(n) => {
            if *n == 0 || *n > 4 {
                return Err(GroupError::InvalidSpec("symmetric group supported for 1 ≤ n ≤ 4".into()));
            }
            let perms = permutations(*n);
            let find = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
            perms
                .iter()
                .map(|a| {
                    perms
                        .iter()
                        .map(|b| {
                            // (a∘b)(x) = a(b(x))
                            let comp: Vec<usize> = (0..*n).map(|x| a[b[x]]).collect();
                            find(&comp)
                        })
                        .collect()
                })
                .collect()
        }
        GroupSpec::Explicit(t) => t.clone(),
    };
    validate(table)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for v in 0..n {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

fn validate(table: Vec<Vec<usize>>) -> Result<FiniteGroup, GroupError> {
    let n = table.len();
    if n == 0 {
        return Err(GroupError::NotAGroup("empty table".into()));
    }
    for row in &table {
        if row.len() != n || row.iter().any(|&v| v >= n) {
            return Err(GroupError::NotAGroup("table is not n×n over 0..n".into()));
        }
    }
    // Latin square.
    for i in 0..n {
        let mut row = vec![false; n];
        let mut col = vec![false; n];
        for j in 0..n {
            if row[table[i][j]] {
                return Err(GroupError::NotAGroup(format!("row {i} repeats an element")));
            }
            row[table[i][j]] = true;
            if col[table[j][i]] {
                return Err(GroupError::NotAGroup(format!("column {i} repeats an element")));
            }
            col[table[j][i]] = true;
        }
    }
    // Associativity (orders here stay ≤ 64).
    if n <= 64 {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
    }
    // Identity and inverses.
    let identity = (0..n)
        .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
        .ok_or_else(|| GroupError::NotAGroup("no identity element".into()))?;
    let mut inverse = vec![0; n];
    for a in 0..n {
        inverse[a] = (0..n)
            .find(|&b| table[a][b] == identity && table[b][a] == identity)
            .ok_or_else(|| GroupError::NotAGroup(format!("element {a} has no inverse")))?;
    }
    Ok(FiniteGroup { order: n, table, inverse, identity })
}

#[derive(Debug, Clone)]
pub struct Representation {
    pub matrices: Vec<ComplexMatrix>,
}

impl Representation {
    /// Check π(ts) = π(t)π(s) within 1e-10 and π(e) = I.
    pub fn validate(&self, g: &FiniteGroup) -> bool {
        if self.matrices.len() != g.order {
            return false;
        }
        let d = self.matrices[0].rows();
        let id_err = self.matrices[g.identity].sub(&ComplexMatrix::identity(d)).frobenius_norm();
        if id_err > 1e-10 {
            return false;
        }
        for t in 0..g.order {
            for s in 0..g.order {
                let prod = self.matrices[t].matmul(&self.matrices[s]);
                if prod.sub(&self.matrices[g.mul(t, s)]).frobenius_norm() > 1e-10 {
                    return false;
                }
            }
        }
        true
    }
}

/// Left regular representation: λ(s) maps e_u to e_{su}.
pub fn left_regular(g: &FiniteGroup) -> Representation {
    let n = g.order;
    let matrices = (0..n)
        .map(|s| {
            let mut m = ComplexMatrix::zeros(n, n);
            for u in 0..n {
                m[(g.mul(s, u), u)] = Complex64::new(1.0, 0.0);
            }
            m
        })
        .collect();
    Representation { matrices }
}

#[derive(Debug, Clone)]
pub struct GroupFunction {
    pub values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn delta(g: &FiniteGroup, s: usize) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); g.order];
        values[s] = Complex64::new(1.0, 0.0);
        Self { values }
    }
}

/// σ_π(f) = Σ_t f(t)π(t) under counting measure.
pub fn sigma_hom(pi: &Representation, f: &GroupFunction) -> ComplexMatrix {
    assert_eq!(pi.matrices.len(), f.values.len(), "function and representation must share the group");
    let d = pi.matrices[0].rows();
    let mut out = ComplexMatrix::zeros(d, d);
    for (m, &c) in pi.matrices.iter().zip(&f.values) {
        if c.norm_sqr() > 0.0 {
            out = out.add(&m.scale(c));
        }
    }
    out
}

/// Convolution (f⋆g)(x) = Σ_y f(y)g(y⁻¹x).
pub fn convolve(g: &FiniteGroup, f1: &GroupFunction, f2: &GroupFunction) -> GroupFunction {
    let n = g.order;
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    for y in 0..n {
        let fy = f1.values[y];
        if fy.norm_sqr() == 0.0 {
            continue;
        }
        let yinv = g.inv(y);
        for x in 0..n {
            values[x] += fy * f2.values[g.mul(yinv, x)];
        }
    }
    GroupFunction { values }
}

/// ‖f‖_Q = ‖σ_λ(f)‖ (finite groups are amenable).
pub fn q_norm(g: &FiniteGroup, f: &GroupFunction) -> f64 {
    spectral_norm(&sigma_hom(&left_regular(g), f))
}

/// ν₂ of the kernel φ(s,t) = ψ(ts), row s, column t; with J = G this is the
/// completely bounded multiplier norm ‖ψ‖₀.
pub fn fourier_cb_norm(
    g: &FiniteGroup,
    psi: &GroupFunction,
    eps: f64,
) -> Result<Nu2Certificate, SdpError> {
    assert_eq!(psi.values.len(), g.order);
    let kernel = SchurKernel::new(ComplexMatrix::from_fn(g.order, g.order, |s, t| {
        psi.values[g.mul(t, s)]
    }));
    nu2(&kernel, eps)
}

#[derive(Debug, Clone)]
pub struct GroupReport {
    pub sigma_norm: f64,
    pub q_norm: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Theorem-style check ‖σ_π(f)‖ ≤ γ(π)²‖f‖_Q.
pub fn verify_group(
    g: &FiniteGroup,
    pi: &Representation,
    f: &GroupFunction,
    gamma_pi: f64,
    eps: f64,
) -> GroupReport {
    let sigma_norm = spectral_norm(&sigma_hom(pi, f));
    let qn = q_norm(g, f);
    let bound = gamma_pi * gamma_pi * qn;
    GroupReport { sigma_norm, q_norm: qn, bound, pass: sigma_norm <= bound * (1.0 + 1e-6) + eps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::GaussianStream;

    fn random_function(g: &FiniteGroup, stream: &mut GaussianStream) -> GroupFunction {
        GroupFunction { values: stream.draw(g.order) }
    }

    #[test]
    fn cyclic_two() {
        let g = make_group(&GroupSpec::Cyclic(2)).unwrap();
        assert_eq!(g.order, 2);
        assert_eq!(g.table, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(g.identity, 0);
        assert_eq!(g.inverse, vec![0, 1]);
    }

    #[test]
    fn symmetric_three_nonabelian() {
        let g = make_group(&GroupSpec::Symmetric(3)).unwrap();
        assert_eq!(g.order, 6);
        let abelian = (0..6).all(|a| (0..6).all(|b| g.mul(a, b) == g.mul(b, a)));
        assert!(!abelian);
    }

    #[test]
    fn dihedral_four() {
        let g = make_group(&GroupSpec::Dihedral(4)).unwrap();
        assert_eq!(g.order, 8);
        let abelian = (0..8).all(|a| (0..8).all(|b| g.mul(a, b) == g.mul(b, a)));
        assert!(!abelian);
    }

    #[test]
    fn invalid_table_rejected() {
        // Latin square that is not associative (no group of this shape).
        let t = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]];
        assert!(matches!(make_group(&GroupSpec::Explicit(t)), Err(GroupError::NotAGroup(_))));
        let bad = vec![vec![0, 0], vec![1, 1]];
        assert!(matches!(make_group(&GroupSpec::Explicit(bad)), Err(GroupError::NotAGroup(_))));
    }

    #[test]
    fn left_regular_z2() {
        let g = make_group(&GroupSpec::Cyclic(2)).unwrap();
        let rep = left_regular(&g);
        assert_eq!(rep.matrices[0], ComplexMatrix::identity(2));
        let swap = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(rep.matrices[1], swap);
    }

    #[test]
    fn left_regular_multiplicative_on_s3() {
        let g = make_group(&GroupSpec::Symmetric(3)).unwrap();
        let rep = left_regular(&g);
        assert!(rep.validate(&g));
    }

    #[test]
    fn sigma_hom_deltas() {
        let g = make_group(&GroupSpec::Symmetric(3)).unwrap();
        let rep = left_regular(&g);
        let de = GroupFunction::delta(&g, g.identity);
        assert_eq!(sigma_hom(&rep, &de), ComplexMatrix::identity(6));
        for s in 0..6 {
            let ds = GroupFunction::delta(&g, s);
            assert_eq!(sigma_hom(&rep, &ds), rep.matrices[s]);
        }
    }

    #[test]
    fn sigma_intertwines_convolution() {
        let mut stream = GaussianStream::new(80);
        for spec in [GroupSpec::Symmetric(3), GroupSpec::Cyclic(8), GroupSpec::Dihedral(4)] {
            let g = make_group(&spec).unwrap();
            let rep = left_regular(&g);
            for _ in 0..5 {
                let f1 = random_function(&g, &mut stream);
                let f2 = random_function(&g, &mut stream);
                let lhs = sigma_hom(&rep, &convolve(&g, &f1, &f2));
                let rhs = sigma_hom(&rep, &f1).matmul(&sigma_hom(&rep, &f2));
                assert!(lhs.sub(&rhs).frobenius_norm() <= 1e-10, "homomorphism failed");
            }
        }
    }

    #[test]
    fn q_norm_examples() {
        let g = make_group(&GroupSpec::Cyclic(2)).unwrap();
        let de = GroupFunction::delta(&g, 0);
        assert!((q_norm(&g, &de) - 1.0).abs() < 1e-12);
        let ds = GroupFunction::delta(&g, 1);
        assert!((q_norm(&g, &ds) - 1.0).abs() < 1e-12);
        let avg = GroupFunction {
            values: vec![Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)],
        };
        assert!((q_norm(&g, &avg) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fourier_cb_norm_constant_and_character() {
        let g = make_group(&GroupSpec::Cyclic(4)).unwrap();
        let one = GroupFunction { values: vec![Complex64::new(1.0, 0.0); 4] };
        let cert = fourier_cb_norm(&g, &one, 1e-8).unwrap();
        assert!((cert.value - 1.0).abs() < 1e-6, "constant symbol: {}", cert.value);

        // Character χ(k) = i^k of ℤ₄.
        let chi = GroupFunction {
            values: (0..4)
                .map(|k| Complex64::new(0.0, 1.0).powu(k as u32))
                .collect(),
        };
        let cert = fourier_cb_norm(&g, &chi, 1e-8).unwrap();
        assert!((cert.value - 1.0).abs() < 1e-6, "character symbol: {}", cert.value);
    }

    #[test]
    fn fourier_cb_norm_delta() {
        let g = make_group(&GroupSpec::Cyclic(4)).unwrap();
        let de = GroupFunction::delta(&g, g.identity);
        let cert = fourier_cb_norm(&g, &de, 1e-8).unwrap();
        assert!((cert.value - 1.0).abs() < 1e-6, "delta symbol: {}", cert.value);
    }

    #[test]
    fn cb_norm_dominates_sup() {
        let mut stream = GaussianStream::new(81);
        let g = make_group(&GroupSpec::Symmetric(3)).unwrap();
        let psi = random_function(&g, &mut stream);
        let cert = fourier_cb_norm(&g, &psi, 1e-7).unwrap();
        let sup = psi.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(cert.value >= sup - 1e-6);
    }

    #[test]
    fn kernel_orientation_guard() {
        // Non-abelian group, asymmetric ψ: the kernel entry at (s,t) must be
        // ψ(ts), not ψ(st).
        let g = make_group(&GroupSpec::Symmetric(3)).unwrap();
        let (s, t) = (1usize, 2usize);
        assert_ne!(g.mul(s, t), g.mul(t, s), "need a witness pair");
        let psi = GroupFunction::delta(&g, g.mul(t, s));
        let kernel = ComplexMatrix::from_fn(g.order, g.order, |a, b| psi.values[g.mul(b, a)]);
        assert!((kernel[(s, t)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(kernel[(t, s)].norm() < 1e-15 || g.mul(s, t) == g.mul(t, s));
    }

    #[test]
    fn verify_group_regular_rep_equality() {
        let mut stream = GaussianStream::new(82);
        let g = make_group(&GroupSpec::Symmetric(3)).unwrap();
        let lambda = left_regular(&g);
        for _ in 0..5 {
            let f = random_function(&g, &mut stream);
            let rep = verify_group(&g, &lambda, &f, 1.0, 1e-10);
            assert!(rep.pass);
            assert!((rep.sigma_norm - rep.q_norm).abs() < 1e-10);
        }
    }

    #[test]
    fn verify_group_conjugated_representation() {
        let g = make_group(&GroupSpec::Cyclic(8)).unwrap();
        let lambda = left_regular(&g);
        // Conjugate a 2-dimensional unitary subrepresentation by D = diag(1,2):
        // here use the character pair (χ₁, χ₇) as a diagonal unitary rep.
        let omega = std::f64::consts::PI / 4.0;
        let matrices: Vec<ComplexMatrix> = (0..8)
            .map(|k| {
                let z1 = Complex64::from_polar(1.0, omega * k as f64);
                let z2 = Complex64::from_polar(1.0, -omega * k as f64);
                // D diag(z1,z2) D⁻¹ stays diagonal; mix with a rotation to
                // make the conjugation nontrivial.
                let u = ComplexMatrix::new(
                    2,
                    2,
                    vec![
                        z1 * 0.5 + z2 * 0.5,
                        (z1 - z2) * 0.5,
                        (z1 - z2) * 0.5,
                        z1 * 0.5 + z2 * 0.5,
                    ],
                )
                .unwrap();
                let d = ComplexMatrix::diag(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]);
                let dinv = ComplexMatrix::diag(&[Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)]);
                d.matmul(&u).matmul(&dinv)
            })
            .collect();
        let pi = Representation { matrices };
        assert!(pi.validate(&g));
        let mut stream = GaussianStream::new(83);
        let _ = lambda;
        for _ in 0..5 {
            let f = random_function(&g, &mut stream);
            // γ(π) ≤ ‖D‖‖D⁻¹‖ = 2 by similarity (Hilbert case).
            let rep = verify_group(&g, &pi, &f, 2.0, 1e-9);
            assert!(rep.pass, "σ {} bound {}", rep.sigma_norm, rep.bound);
        }
    }
}

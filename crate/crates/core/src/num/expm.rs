//! Matrix exponential by Padé [13/13] with scaling and squaring.

use super::{ComplexMatrix, NumError};
use num_complex::Complex64;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix, NumError> {
    if !m.is_square() {
        return Err(NumError::DimensionMismatch("expm needs a square matrix".into()));
    }
    let n = m.rows();
    let norm1 = one_norm(m);
    let s = if norm1 > THETA13 { (norm1 / THETA13).log2().ceil() as i32 } else { 0 };
    let a = m.scale(Complex64::new(0.5f64.powi(s), 0.0));

    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);
    let id = ComplexMatrix::identity(n);

    let c = |k: usize| Complex64::new(PADE13[k], 0.0);
    let u_inner = a6
        .scale(c(13))
        .add(&a4.scale(c(11)))
        .add(&a2.scale(c(9)));
    let u_low = a6.scale(c(7)).add(&a4.scale(c(5))).add(&a2.scale(c(3))).add(&id.scale(c(1)));
    let u = a.matmul(&a6.matmul(&u_inner).add(&u_low));
    let v_inner = a6.scale(c(12)).add(&a4.scale(c(10))).add(&a2.scale(c(8)));
    let v = a6.matmul(&v_inner).add(&a6.scale(c(6))).add(&a4.scale(c(4))).add(&a2.scale(c(2))).add(&id.scale(c(0)));

    // (V − U) R = (V + U)
    let mut r = solve(&v.sub(&u), &v.add(&u))?;
    for _ in 0..s {
        r = r.matmul(&r);
    }
    if r.entries().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(NumError::Overflow);
    }
    Ok(r)
}

fn one_norm(m: &ComplexMatrix) -> f64 {
    (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solve A X = B by partial-pivoted LU.
fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, NumError> {
    let n = a.rows();
    let mut lu = a.clone();
    let mut x = b.clone();
    for k in 0..n {
        let (piv, mag) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .fold((k, -1.0), |acc, it| if it.1 > acc.1 { it } else { acc });
        if mag < 1e-300 {
            return Err(NumError::Overflow);
        }
        if piv != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = t;
                let t = x[(k, j)];
                x[(k, j)] = x[(piv, j)];
                x[(piv, j)] = t;
            }
        }
        let d = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / d;
            lu[(i, k)] = f;
            for j in k + 1..n {
                let v = lu[(k, j)];
                lu[(i, j)] = lu[(i, j)] - f * v;
            }
            for j in 0..n {
                let v = x[(k, j)];
                x[(i, j)] = x[(i, j)] - f * v;
            }
        }
    }
    for k in (0..n).rev() {
        let d = lu[(k, k)];
        for j in 0..n {
            let mut acc = x[(k, j)];
            for i in k + 1..n {
                acc -= lu[(k, i)] * x[(i, j)];
            }
            x[(k, j)] = acc / d;
        }
    }
    Ok(x)
}

//! Dense real SPD factor/solve via LAPACK (dpotrf/dpotrs).

use std::os::raw::c_char;

extern "C" {
    fn dpotrf_(uplo: *const c_char, n: *const i32, a: *mut f64, lda: *const i32, info: *mut i32);
    fn dpotrs_(
        uplo: *const c_char,
        n: *const i32,
        nrhs: *const i32,
        a: *const f64,
        lda: *const i32,
        b: *mut f64,
        ldb: *const i32,
        info: *mut i32,
    );
}

pub struct SpdFactor {
    n: usize,
    fac: Vec<f64>,
}

impl SpdFactor {
    /// Cholesky-factor a symmetric matrix given in dense row-major order.
    /// Returns None if the matrix is not numerically positive definite.
    pub fn new(a: &[f64], n: usize) -> Option<Self> {
        assert_eq!(a.len(), n * n);
        let mut fac = a.to_vec();
        let nn = n as i32;
        let mut info = 0i32;
        unsafe { dpotrf_(&(b'L' as c_char), &nn, fac.as_mut_ptr(), &nn, &mut info) };
        if info == 0 {
            Some(Self { n, fac })
        } else {
            None
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        assert_eq!(rhs.len(), self.n);
        let mut x = rhs.to_vec();
        let nn = self.n as i32;
        let one = 1i32;
        let mut info = 0i32;
        unsafe {
            dpotrs_(
                &(b'L' as c_char),
                &nn,
                &one,
                self.fac.as_ptr(),
                &nn,
                x.as_mut_ptr(),
                &nn,
                &mut info,
            )
        };
        assert_eq!(info, 0, "dpotrs failed");
        x
    }
}

//! Complex polynomials of degree at most two in `(ell, m, n)`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

/// Coefficients in the basis `1, l, m, n, l^2, m^2, n^2, lm, ln, mn`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LmnPoly(pub [Complex64; 10]);

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl LmnPoly {
    pub const BASIS: [&'static str; 10] = ["1", "l", "m", "n", "l^2", "m^2", "n^2", "lm", "ln", "mn"];

    pub fn zero() -> Self {
        LmnPoly([ZERO; 10])
    }

    pub fn constant(c: Complex64) -> Self {
        let mut p = Self::zero();
        p.0[0] = c;
        p
    }

    pub fn real(c: f64) -> Self {
        Self::constant(Complex64::new(c, 0.0))
    }

    /// `c0 + cl l + cm m + cn n` with real coefficients.
    pub fn affine(c0: f64, cl: f64, cm: f64, cn: f64) -> Self {
        let mut p = Self::zero();
        p.0[0] = c0.into();
        p.0[1] = cl.into();
        p.0[2] = cm.into();
        p.0[3] = cn.into();
        p
    }

    pub fn eval(&self, l: f64, m: f64, n: f64) -> Complex64 {
        let basis = [1.0, l, m, n, l * l, m * m, n * n, l * m, l * n, m * n];
        self.0.iter().zip(basis).map(|(c, b)| c * b).sum()
    }

    pub fn degree(&self) -> usize {
        if self.0[4..].iter().any(|c| *c != ZERO) {
            2
        } else if self.0[1..4].iter().any(|c| *c != ZERO) {
            1
        } else {
            0
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    pub fn scale(self, s: Complex64) -> Self {
        LmnPoly(self.0.map(|c| c * s))
    }
}

impl Add for LmnPoly {
    type Output = LmnPoly;
    fn add(self, o: LmnPoly) -> LmnPoly {
        let mut r = self;
        for (a, b) in r.0.iter_mut().zip(o.0) {
            *a += b;
        }
        r
    }
}

impl Sub for LmnPoly {
    type Output = LmnPoly;
    fn sub(self, o: LmnPoly) -> LmnPoly {
        self + (-o)
    }
}

impl Neg for LmnPoly {
    type Output = LmnPoly;
    fn neg(self) -> LmnPoly {
        LmnPoly(self.0.map(|c| -c))
    }
}

impl Mul<Complex64> for LmnPoly {
    type Output = LmnPoly;
    fn mul(self, s: Complex64) -> LmnPoly {
        self.scale(s)
    }
}

/// Product of two affine polynomials. Panics in debug builds if either
/// factor has degree two.
impl Mul for LmnPoly {
    type Output = LmnPoly;
    fn mul(self, o: LmnPoly) -> LmnPoly {
        debug_assert!(self.degree() <= 1 && o.degree() <= 1);
        let a = self.0;
        let b = o.0;
        let mut r = [ZERO; 10];
        r[0] = a[0] * b[0];
        for k in 1..4 {
            r[k] = a[0] * b[k] + a[k] * b[0];
            r[k + 3] = a[k] * b[k];
        }
        r[7] = a[1] * b[2] + a[2] * b[1];
        r[8] = a[1] * b[3] + a[3] * b[1];
        r[9] = a[2] * b[3] + a[3] * b[2];
        LmnPoly(r)
    }
}

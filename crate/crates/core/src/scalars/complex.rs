use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;

use super::rational::big_rational_to_f64;
use super::{Field, Ring, ToComplex};

/// Default absolute zero-test tolerance for complex floats.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Complex float compared against an absolute tolerance.
///
/// `is_zero` is `|z| <= tol` and equality is `|a - b| <= tol`; the
/// tolerance travels with the value and the left operand's wins.
#[derive(Clone, Copy, Debug)]
pub struct C64 {
    pub z: Complex64,
    pub tol: f64,
}

impl C64 {
    pub fn new(z: Complex64, tol: f64) -> Self {
        C64 { z, tol }
    }

    pub fn real(x: f64) -> Self {
        C64 {
            z: Complex64::new(x, 0.0),
            tol: DEFAULT_TOLERANCE,
        }
    }

    pub fn norm(&self) -> f64 {
        self.z.norm()
    }
}

impl PartialEq for C64 {
    fn eq(&self, other: &Self) -> bool {
        (self.z - other.z).norm() <= self.tol
    }
}

impl fmt::Display for C64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.z.im == 0.0 {
            write!(f, "{:e}", self.z.re)
        } else if self.z.im < 0.0 {
            write!(f, "({:e} - {:e}*i)", self.z.re, -self.z.im)
        } else {
            write!(f, "({:e} + {:e}*i)", self.z.re, self.z.im)
        }
    }
}

impl Ring for C64 {
    type Ctx = f64;

    fn ctx(&self) -> f64 {
        self.tol
    }
    fn zero(tol: &f64) -> Self {
        C64::new(Complex64::new(0.0, 0.0), *tol)
    }
    fn one(tol: &f64) -> Self {
        C64::new(Complex64::new(1.0, 0.0), *tol)
    }
    fn from_i64(tol: &f64, n: i64) -> Self {
        C64::new(Complex64::new(n as f64, 0.0), *tol)
    }
    fn is_zero(&self) -> bool {
        self.z.norm() <= self.tol
    }
    fn add(&self, rhs: &Self) -> Self {
        C64::new(self.z + rhs.z, self.tol)
    }
    fn sub(&self, rhs: &Self) -> Self {
        C64::new(self.z - rhs.z, self.tol)
    }
    fn mul(&self, rhs: &Self) -> Self {
        C64::new(self.z * rhs.z, self.tol)
    }
    fn neg(&self) -> Self {
        C64::new(-self.z, self.tol)
    }
}

impl Field for C64 {
    const EXACT: bool = false;

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(C64::new(self.z.inv(), self.tol))
        }
    }

    fn from_rational(tol: &f64, q: &BigRational) -> Option<Self> {
        Some(C64::new(Complex64::new(big_rational_to_f64(q), 0.0), *tol))
    }
}

impl ToComplex for C64 {
    fn to_c64(&self) -> Complex64 {
        self.z
    }
}

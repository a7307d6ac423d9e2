use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::rational::big_rational_to_f64;
use super::{Field, Fp, Ring, ToComplex, Q};

/// Gaussian rational `re + i*im` with `re, im ∈ ℚ`.
///
/// Used to carry exact complex perturbations through the Gröbner pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QI {
    pub re: BigRational,
    pub im: BigRational,
}

impl QI {
    pub fn new(re: Q, im: Q) -> Self {
        QI { re: re.0, im: im.0 }
    }

    pub fn real(re: Q) -> Self {
        QI {
            re: re.0,
            im: BigRational::zero(),
        }
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl From<Q> for QI {
    fn from(q: Q) -> Self {
        QI::real(q)
    }
}

impl fmt::Display for QI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = Q(self.re.clone());
        let im = Q(self.im.clone());
        if self.im.is_zero() {
            write!(f, "{re}")
        } else if self.re.is_zero() {
            write!(f, "{im}*i")
        } else if self.im.is_negative() {
            write!(f, "({re} - {}*i)", im.abs())
        } else {
            write!(f, "({re} + {im}*i)")
        }
    }
}

impl Ring for QI {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        QI {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn one(_: &()) -> Self {
        QI::real(Q::int(1))
    }
    fn from_i64(_: &(), n: i64) -> Self {
        QI::real(Q::int(n))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        QI {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        QI {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return QI {
                re: &self.re * &rhs.re,
                im: BigRational::zero(),
            };
        }
        QI {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
    fn neg(&self) -> Self {
        QI {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Field for QI {
    const EXACT: bool = true;

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(QI {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    fn from_rational(_: &(), q: &BigRational) -> Option<Self> {
        Some(QI {
            re: q.clone(),
            im: BigRational::zero(),
        })
    }
}

impl ToComplex for QI {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(big_rational_to_f64(&self.re), big_rational_to_f64(&self.im))
    }

    fn reduce_split(&self, p: u32, sqrt_m1: &Fp) -> Option<Fp> {
        let re = Fp::from_rational(&p, &self.re)?;
        let im = Fp::from_rational(&p, &self.im)?;
        Some(re.add(&im.mul(sqrt_m1)))
    }
}

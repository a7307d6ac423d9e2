//! Coefficient towers.
//!
//! Every coefficient type implements [`Ring`]; the exact fields (rationals,
//! Gaussian rationals, prime fields) and the tolerance-compared complex
//! floats also implement [`Field`]. [`Series`] models the local ring
//! `k[[v_1..v_m]] / (v)^{N+1}` over an exact field `k`.
//!
//! Elements carry their own context (modulus, tolerance, series shape), so
//! values are self-describing and can be freely sent between threads.

mod complex;
mod gaussian;
mod prime;
mod rational;
mod series;

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

pub use complex::{C64, DEFAULT_TOLERANCE};
pub use gaussian::QI;
pub use prime::{is_prime, Fp, MAX_PRIME};
pub use rational::Q;
pub use series::{Series, SeriesCtx, Valuation, DEFAULT_PRECISION};

/// Commutative ring with identity.
pub trait Ring: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    /// Data needed to build constants (modulus, tolerance, series shape, ...).
    type Ctx: Clone + fmt::Debug + PartialEq + Send + Sync + 'static;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self;

    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_one(&self) -> bool {
        self.sub(&Self::one(&self.ctx())).is_zero()
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// A field: a ring where nonzero elements invert.
pub trait Field: Ring {
    /// Exact kinds have decidable equality; float kinds compare with a tolerance.
    const EXACT: bool;

    fn inv(&self) -> Option<Self>;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    /// Image of a rational number, if it exists in this field
    /// (fails in `F_p` when `p` divides the denominator).
    fn from_rational(ctx: &Self::Ctx, q: &BigRational) -> Option<Self>;

    fn from_bigint(ctx: &Self::Ctx, n: &BigInt) -> Self {
        Self::from_rational(ctx, &BigRational::from_integer(n.clone())).expect("integers embed in every field")
    }
}

/// Fields that embed into the complex numbers.
pub trait ToComplex {
    fn to_c64(&self) -> Complex64;

    /// Image in `F_p` for a prime `p ≡ 1 (mod 4)`, sending `i` to `sqrt_m1`.
    /// `None` when a denominator vanishes mod `p` or no such map exists.
    fn reduce_split(&self, _p: u32, _sqrt_m1: &Fp) -> Option<Fp> {
        None
    }
}

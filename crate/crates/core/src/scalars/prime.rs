use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{Field, Ring};

/// Largest admissible modulus (exclusive): products fit in `u64`.
pub const MAX_PRIME: u32 = 1 << 31;

/// Element of the prime field `F_p`, `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    /// Panics if `modulus` is not a prime below `2^31`.
    pub fn new(value: i64, modulus: u32) -> Self {
        assert!(
            is_prime(modulus) && modulus < MAX_PRIME,
            "modulus {modulus} must be a prime < 2^31"
        );
        Fp {
            value: value.rem_euclid(modulus as i64) as u32,
            modulus,
        }
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n as u64 {
        if (n as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Ring for Fp {
    type Ctx = u32;

    fn ctx(&self) -> u32 {
        self.modulus
    }
    fn zero(p: &u32) -> Self {
        Fp { value: 0, modulus: *p }
    }
    fn one(p: &u32) -> Self {
        Fp {
            value: 1 % *p,
            modulus: *p,
        }
    }
    fn from_i64(p: &u32, n: i64) -> Self {
        Fp {
            value: n.rem_euclid(*p as i64) as u32,
            modulus: *p,
        }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value as u64 + rhs.value as u64;
        Fp {
            value: (s % self.modulus as u64) as u32,
            modulus: self.modulus,
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value as u64 + self.modulus as u64 - rhs.value as u64;
        Fp {
            value: (s % self.modulus as u64) as u32,
            modulus: self.modulus,
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp {
            value: ((self.value as u64 * rhs.value as u64) % self.modulus as u64) as u32,
            modulus: self.modulus,
        }
    }
    fn neg(&self) -> Self {
        Fp {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Field for Fp {
    const EXACT: bool = true;

    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        let g = (self.value as i64).extended_gcd(&(self.modulus as i64));
        Some(Fp::from_i64(&self.modulus, g.x))
    }

    fn from_rational(p: &u32, q: &BigRational) -> Option<Self> {
        let m = BigInt::from(*p);
        let reduce = |n: &BigInt| -> i64 {
            let r = n.mod_floor(&m);
            if r.is_negative() || r.is_zero() {
                0
            } else {
                r.to_i64().unwrap()
            }
        };
        let num = Fp::from_i64(p, reduce(q.numer()));
        let den = Fp::from_i64(p, reduce(q.denom()));
        den.inv().map(|d| num.mul(&d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let p = 101;
        for v in 1..101 {
            let a = Fp::new(v, p);
            assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn rational_embedding() {
        let h = Fp::from_rational(&7, &BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(h.value(), 4);
        assert!(Fp::from_rational(&7, &BigRational::new(1.into(), 14.into())).is_none());
        let neg = Fp::from_rational(&7, &BigRational::new((-3).into(), 1.into())).unwrap();
        assert_eq!(neg.value(), 4);
    }

    #[test]
    fn large_prime_products() {
        let p = 2_147_483_647;
        let a = Fp::new(p as i64 - 1, p);
        assert!(a.mul(&a).is_one());
    }
}

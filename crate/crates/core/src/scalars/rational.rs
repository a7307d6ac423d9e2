use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Field, Fp, Ring, ToComplex};

/// Arbitrary-precision rational number.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Q(pub BigRational);

impl Q {
    pub fn new(num: i64, den: i64) -> Self {
        Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Self {
        Q(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Q {
        Q(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        big_rational_to_f64(&self.0)
    }

    /// Closest small-denominator rational to `x` (continued fractions).
    pub fn approximate_f64(x: f64) -> Option<Q> {
        let r = num_rational::Ratio::<i64>::approximate_float(x)?;
        Some(Q::new(*r.numer(), *r.denom()))
    }
}

pub(crate) fn big_rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Very large numerator or denominator: shift both to a common scale.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = (nb.max(db) - 900).max(0) as usize;
    let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
    if d == 0.0 {
        return if n >= 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    n / d
}

impl fmt::Display for Q {
    /// Canonical `p/q` printing; integers print without a denominator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Q {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator `{n}`"))?;
            let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator `{d}`"))?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            return Ok(Q(BigRational::new(n, d)));
        }
        if let Some((ip, fp)) = s.split_once('.') {
            let neg = ip.trim_start().starts_with('-');
            let ip_abs = ip.trim().trim_start_matches(['-', '+']);
            let digits = format!("{}{}", if ip_abs.is_empty() { "0" } else { ip_abs }, fp);
            let n: BigInt = digits.parse().map_err(|_| format!("bad decimal `{s}`"))?;
            let d = num_traits::pow(BigInt::from(10), fp.len());
            let q = BigRational::new(n, d);
            return Ok(Q(if neg { -q } else { q }));
        }
        let n: BigInt = s.parse().map_err(|_| format!("bad integer `{s}`"))?;
        Ok(Q(BigRational::from_integer(n)))
    }
}

impl Ring for Q {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        Q(BigRational::zero())
    }
    fn one(_: &()) -> Self {
        Q(BigRational::one())
    }
    fn from_i64(_: &(), n: i64) -> Self {
        Q::int(n)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
    fn add(&self, rhs: &Self) -> Self {
        Q(&self.0 + &rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Q(&self.0 - &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Q(&self.0 * &rhs.0)
    }
    fn neg(&self) -> Self {
        Q(-&self.0)
    }
}

impl Field for Q {
    const EXACT: bool = true;

    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Q(self.0.recip()))
        }
    }

    fn from_rational(_: &(), q: &BigRational) -> Option<Self> {
        Some(Q(q.clone()))
    }
}

impl ToComplex for Q {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }

    fn reduce_split(&self, p: u32, _sqrt_m1: &Fp) -> Option<Fp> {
        Fp::from_rational(&p, &self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!("3/6".parse::<Q>().unwrap().to_string(), "1/2");
        assert_eq!("-4".parse::<Q>().unwrap().to_string(), "-4");
        assert_eq!("0.25".parse::<Q>().unwrap(), Q::new(1, 4));
        assert_eq!("-1.5".parse::<Q>().unwrap(), Q::new(-3, 2));
        assert!("1/0".parse::<Q>().is_err());
    }

    #[test]
    fn huge_to_f64() {
        let big = Q(BigRational::new(
            num_traits::pow(BigInt::from(10), 400) + 1,
            num_traits::pow(BigInt::from(10), 399),
        ));
        assert!((big.to_f64() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn approximate_float_is_small() {
        assert_eq!(Q::approximate_f64(1e-4).unwrap(), Q::new(1, 10000));
        assert_eq!(Q::approximate_f64(0.3).unwrap(), Q::new(3, 10));
    }
}

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::polynomials::{deformation_names, signed_term, Monomial};

use super::{Field, Ring};

/// Default truncation degree `N`.
pub const DEFAULT_PRECISION: u32 = 8;

/// Shape of a truncated series ring: `m` deformation variables, arithmetic
/// modulo `(v)^{N+1}`, coefficients in `field`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesCtx<K: Field> {
    pub nvars: usize,
    pub precision: u32,
    pub field: K::Ctx,
}

impl<K: Field> SeriesCtx<K> {
    pub fn new(nvars: usize, precision: u32, field: K::Ctx) -> Self {
        SeriesCtx {
            nvars,
            precision,
            field,
        }
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        SeriesCtx {
            nvars: self.nvars,
            precision,
            field: self.field.clone(),
        }
    }
}

/// m-adic order of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(u32),
    /// All retained coefficients vanish; the true order is at least this.
    AtLeast(u32),
}

impl Valuation {
    /// Lower bound usable in comparisons.
    pub fn lower_bound(&self) -> u32 {
        match *self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }

    pub fn is_at_least(&self, d: u32) -> bool {
        self.lower_bound() >= d
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// Element of `k[[v_1..v_m]]` modulo `(v)^{N+1}` (truncation by total degree).
#[derive(Clone, Debug, PartialEq)]
pub struct Series<K: Field> {
    ctx: SeriesCtx<K>,
    coeffs: BTreeMap<Monomial, K>,
}

impl<K: Field> Series<K> {
    pub fn constant(ctx: &SeriesCtx<K>, c: K) -> Self {
        let mut s = Series {
            ctx: ctx.clone(),
            coeffs: BTreeMap::new(),
        };
        if !c.is_zero() {
            s.coeffs.insert(Monomial::one(ctx.nvars), c);
        }
        s
    }

    /// `c * v^e`; dropped when `deg e > N`.
    pub fn term(ctx: &SeriesCtx<K>, exponent: Monomial, c: K) -> Self {
        assert_eq!(exponent.nvars(), ctx.nvars, "exponent arity");
        let mut s = Series {
            ctx: ctx.clone(),
            coeffs: BTreeMap::new(),
        };
        if !c.is_zero() && exponent.degree() <= ctx.precision {
            s.coeffs.insert(exponent, c);
        }
        s
    }

    /// The deformation variable `v_i`.
    pub fn var(ctx: &SeriesCtx<K>, i: usize) -> Self {
        Series::term(ctx, Monomial::var(ctx.nvars, i), K::one(&ctx.field))
    }

    pub fn from_terms(ctx: &SeriesCtx<K>, terms: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut s = Series {
            ctx: ctx.clone(),
            coeffs: BTreeMap::new(),
        };
        for (e, c) in terms {
            s.add_term(e, &c);
        }
        s
    }

    fn add_term(&mut self, e: Monomial, c: &K) {
        if e.degree() > self.ctx.precision || c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&e) {
            Some(slot) => {
                let v = slot.add(c);
                if v.is_zero() {
                    self.coeffs.remove(&e);
                } else {
                    *slot = v;
                }
            }
            None => {
                self.coeffs.insert(e, c.clone());
            }
        }
    }

    pub fn series_ctx(&self) -> &SeriesCtx<K> {
        &self.ctx
    }

    pub fn precision(&self) -> u32 {
        self.ctx.precision
    }

    pub fn nvars(&self) -> usize {
        self.ctx.nvars
    }

    /// Nonzero coefficients in graded-lex ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &K)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, e: &Monomial) -> K {
        self.coeffs.get(e).cloned().unwrap_or_else(|| K::zero(&self.ctx.field))
    }

    pub fn constant_term(&self) -> K {
        self.coeff(&Monomial::one(self.ctx.nvars))
    }

    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    fn check_shape(&self, rhs: &Self) -> Result<()> {
        if self.ctx.nvars != rhs.ctx.nvars || self.ctx.precision != rhs.ctx.precision {
            return Err(Error::ShapeMismatch(format!(
                "series with (m={}, N={}) vs (m={}, N={})",
                self.ctx.nvars, self.ctx.precision, rhs.ctx.nvars, rhs.ctx.precision
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_shape(rhs)?;
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_shape(rhs)?;
        let n = self.ctx.precision;
        let mut out = Series {
            ctx: self.ctx.clone(),
            coeffs: BTreeMap::new(),
        };
        for (ea, ca) in &self.coeffs {
            let da = ea.degree();
            for (eb, cb) in &rhs.coeffs {
                // Terms are visited by ascending degree, so everything after
                // the first overflow overflows too.
                if da + eb.degree() > n {
                    break;
                }
                out.add_term(ea.mul(eb), &ca.mul(cb));
            }
        }
        Ok(out)
    }

    /// Inverse modulo `(v)^{N+1}` via the geometric series of the
    /// non-constant part.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let c0_inv = c0.inv().ok_or(Error::NotAUnit)?;
        // self = c0 (1 + t), t in m
        let mut t = self.scale(&c0_inv);
        t.coeffs.remove(&Monomial::one(self.ctx.nvars));
        let minus_t = t.neg();
        let mut acc = Series::constant(&self.ctx, K::one(&self.ctx.field));
        let mut power = acc.clone();
        for _ in 0..self.ctx.precision {
            power = power.mul(&minus_t);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.scale(&c0_inv))
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Series::constant(&self.ctx, K::zero(&self.ctx.field));
        }
        Series {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, a)| (e.clone(), a.mul(c)))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    /// Smallest total degree carrying a nonzero coefficient.
    pub fn valuation(&self) -> Valuation {
        match self.coeffs.keys().next() {
            Some(e) => Valuation::Finite(e.degree()),
            None => Valuation::AtLeast(self.ctx.precision + 1),
        }
    }

    /// The homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Vec<(Monomial, K)> {
        self.coeffs
            .iter()
            .filter(|(e, _)| e.degree() == d)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect()
    }

    /// Re-truncate to a different precision (coefficients above it drop).
    pub fn with_precision(&self, precision: u32) -> Self {
        Series {
            ctx: self.ctx.with_precision(precision),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| e.degree() <= precision)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Apply a coefficient map (e.g. base change `ℚ → F_p`).
    pub fn map_coeffs<L: Field>(&self, ctx: &SeriesCtx<L>, f: impl Fn(&K) -> L) -> Series<L> {
        Series::from_terms(ctx, self.coeffs.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Text form `c*v1^a1*...` in ascending graded-lex order, `0` when empty.
    pub fn to_text(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let names = deformation_names(self.ctx.nvars.max(1));
        let mut out = String::new();
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let (neg, body) = signed_term(c, &e.format_with(&names), e.is_one());
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl<K: Field> fmt::Display for Series<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() > 1 {
            write!(f, "({})", self.to_text())
        } else {
            write!(f, "{}", self.to_text())
        }
    }
}

impl<K: Field> Ring for Series<K> {
    type Ctx = SeriesCtx<K>;

    fn ctx(&self) -> SeriesCtx<K> {
        self.ctx.clone()
    }
    fn zero(ctx: &SeriesCtx<K>) -> Self {
        Series {
            ctx: ctx.clone(),
            coeffs: BTreeMap::new(),
        }
    }
    fn one(ctx: &SeriesCtx<K>) -> Self {
        Series::constant(ctx, K::one(&ctx.field))
    }
    fn from_i64(ctx: &SeriesCtx<K>, n: i64) -> Self {
        Series::constant(ctx, K::from_i64(&ctx.field, n))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("series shapes agree")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.try_add(&rhs.neg()).expect("series shapes agree")
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("series shapes agree")
    }
    fn neg(&self) -> Self {
        Series {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Q;

    fn ctx(m: usize, n: u32) -> SeriesCtx<Q> {
        SeriesCtx::new(m, n, ())
    }

    fn v(c: &SeriesCtx<Q>) -> Series<Q> {
        Series::var(c, 0)
    }

    fn one(c: &SeriesCtx<Q>) -> Series<Q> {
        Series::one(c)
    }

    #[test]
    fn truncation_kills_square() {
        let c = ctx(1, 1);
        let p = one(&c).add(&v(&c)).mul(&one(&c).sub(&v(&c)));
        assert_eq!(p, one(&c));
    }

    #[test]
    fn difference_of_squares() {
        let c = ctx(1, 2);
        let p = one(&c).add(&v(&c)).mul(&one(&c).sub(&v(&c)));
        assert_eq!(p, one(&c).sub(&v(&c).mul(&v(&c))));
    }

    #[test]
    fn overflow_truncates() {
        let n = 5;
        let c = ctx(1, n);
        let vn = v(&c).pow(n);
        assert!(!vn.is_zero());
        assert!(v(&c).mul(&vn).is_zero());
    }

    #[test]
    fn shape_mismatch() {
        let a = one(&ctx(1, 2));
        let b = one(&ctx(1, 3));
        assert!(matches!(a.try_mul(&b), Err(Error::ShapeMismatch(_))));
        let d = one(&ctx(2, 2));
        assert!(matches!(a.try_add(&d), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn invert_examples() {
        let c = ctx(1, 3);
        assert_eq!(one(&c).invert().unwrap(), one(&c));
        let geo = one(&c).sub(&v(&c)).invert().unwrap();
        let expected = Series::from_terms(&c, (0..=3).map(|k| (Monomial::new(vec![k]), Q::int(1))));
        assert_eq!(geo, expected);

        let c2 = ctx(1, 2);
        let a = Series::constant(&c2, Q::int(2)).add(&v(&c2));
        let inv = a.invert().unwrap();
        let expected = Series::from_terms(
            &c2,
            [
                (Monomial::new(vec![0]), Q::new(1, 2)),
                (Monomial::new(vec![1]), Q::new(-1, 4)),
                (Monomial::new(vec![2]), Q::new(1, 8)),
            ],
        );
        assert_eq!(inv, expected);
        assert_eq!(inv.mul(&a), one(&c2));
    }

    #[test]
    fn invert_non_unit() {
        let c = ctx(2, 4);
        assert_eq!(Series::var(&c, 1).invert(), Err(Error::NotAUnit));
    }

    #[test]
    fn valuations() {
        let c = ctx(2, 4);
        assert_eq!(Series::<Q>::zero(&c).valuation(), Valuation::AtLeast(5));
        let v1 = Series::var(&c, 0);
        let v2 = Series::var(&c, 1);
        let s = v1.mul(&v2).add(&v1.pow(3));
        assert_eq!(s.valuation(), Valuation::Finite(2));
        let t = Series::constant(&c, Q::int(3)).add(&v1);
        assert_eq!(t.valuation(), Valuation::Finite(0));
    }

    #[test]
    fn text_form() {
        let c = ctx(2, 3);
        let s = Series::constant(&c, Q::new(1, 2))
            .sub(&Series::var(&c, 0).scale(&Q::int(3)))
            .add(&Series::var(&c, 1).pow(2));
        assert_eq!(s.to_text(), "1/2 - 3*v1 + v2^2");
    }
}

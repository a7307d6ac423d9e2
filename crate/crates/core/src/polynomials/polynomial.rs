use std::collections::BTreeMap;
use std::fmt;

use crate::scalars::{Field, Ring};

use super::monomial::{variable_names, Monomial, MonomialOrder};

/// Ambient data of a polynomial ring: variable count plus the coefficient context.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCtx<R: Ring> {
    pub nvars: usize,
    pub coeff: R::Ctx,
}

impl<R: Ring> PolyCtx<R> {
    pub fn new(nvars: usize, coeff: R::Ctx) -> Self {
        PolyCtx { nvars, coeff }
    }
}

/// Sparse multivariate polynomial; terms are kept in graded-lex order and
/// zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<R: Ring> {
    nvars: usize,
    ctx: R::Ctx,
    terms: BTreeMap<Monomial, R>,
}

impl<R: Ring> Polynomial<R> {
    pub fn zero(nvars: usize, ctx: &R::Ctx) -> Self {
        Polynomial {
            nvars,
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: R) -> Self {
        Polynomial::monomial(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize, ctx: &R::Ctx) -> Self {
        Polynomial::constant(nvars, R::one(ctx))
    }

    pub fn var(nvars: usize, i: usize, ctx: &R::Ctx) -> Self {
        Polynomial::monomial(Monomial::var(nvars, i), R::one(ctx))
    }

    pub fn monomial(m: Monomial, c: R) -> Self {
        let mut p = Polynomial {
            nvars: m.nvars(),
            ctx: c.ctx(),
            terms: BTreeMap::new(),
        };
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, ctx: &R::Ctx, terms: impl IntoIterator<Item = (Monomial, R)>) -> Self {
        let mut p = Polynomial::zero(nvars, ctx);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    /// Add `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: &R) {
        debug_assert_eq!(m.nvars(), self.nvars, "monomial arity");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                let v = slot.add(c);
                if v.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *slot = v;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeff_ctx(&self) -> &R::Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex ascending order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(|| R::zero(&self.ctx))
    }

    pub fn constant_term(&self) -> R {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &R)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<&Monomial> {
        self.leading_term(order).map(|(m, _)| m)
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &c.neg());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity");
        let mut out = Polynomial::zero(self.nvars, &self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        Polynomial::from_terms(
            self.nvars,
            &self.ctx,
            self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))),
        )
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: &R) -> Self {
        Polynomial::from_terms(
            self.nvars,
            &self.ctx,
            self.terms.iter().map(|(t, a)| (t.mul(m), a.mul(c))),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Polynomial::one(self.nvars, &self.ctx);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Standard evaluation at `point` (length `n`).
    pub fn evaluate(&self, point: &[R]) -> R {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut acc = R::zero(&self.ctx);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = t.mul(&x.pow(e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitute a polynomial for every variable (all in a common ring).
    pub fn substitute(&self, images: &[Polynomial<R>]) -> Polynomial<R> {
        assert_eq!(images.len(), self.nvars, "substitution arity");
        let target = images.first().map_or(self.nvars, |p| p.nvars);
        let mut acc = Polynomial::zero(target, &self.ctx);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (img, &e) in images.iter().zip(m.exponents()) {
                if e > 0 {
                    t = t.mul(&img.pow(e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// `p(X + point)`: moves `point` to the origin.
    pub fn translate(&self, point: &[R]) -> Polynomial<R> {
        let images: Vec<_> = (0..self.nvars)
            .map(|i| Polynomial::var(self.nvars, i, &self.ctx).add(&Polynomial::constant(self.nvars, point[i].clone())))
            .collect();
        self.substitute(&images)
    }

    /// Embed into `nvars + extra` variables (new variables appended).
    pub fn extend(&self, extra: usize) -> Polynomial<R> {
        Polynomial {
            nvars: self.nvars + extra,
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.extend(extra), c.clone())).collect(),
        }
    }

    /// Drop the variables past the first `keep`; panics if any of them occurs.
    pub fn restrict(&self, keep: usize) -> Polynomial<R> {
        Polynomial {
            nvars: keep,
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    assert!(
                        m.exponents()[keep..].iter().all(|&e| e == 0),
                        "restricted variable occurs"
                    );
                    (Monomial::new(m.exponents()[..keep].to_vec()), c.clone())
                })
                .collect(),
        }
    }

    pub fn map_coeffs<S: Ring>(&self, ctx: &S::Ctx, f: impl Fn(&R) -> S) -> Polynomial<S> {
        Polynomial::from_terms(self.nvars, ctx, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Terms whose monomial satisfies `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Polynomial<R> {
        Polynomial {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Text form with explicit variable names, highest graded-lex term first.
    pub fn to_text_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, body) = signed_term(c, &m.format_with(names), m.is_one());
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

impl<K: Field> Polynomial<K> {
    /// Divide through by the leading coefficient.
    pub fn make_monic(&self, order: MonomialOrder) -> Polynomial<K> {
        match self.leading_term(order) {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }
}

/// Split a coefficient into sign and magnitude text for term printing.
pub(crate) fn signed_term<R: Ring>(c: &R, monomial: &str, is_one: bool) -> (bool, String) {
    let text = c.to_string();
    let (neg, mag) = match text.strip_prefix('-') {
        Some(rest) if !rest.starts_with('(') => (true, rest.to_string()),
        _ => (false, text),
    };
    let body = if is_one {
        mag
    } else if mag == "1" {
        monomial.to_string()
    } else {
        format!("{mag}*{monomial}")
    };
    (neg, body)
}

impl<R: Ring> fmt::Display for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text_with(&variable_names(self.nvars)))
    }
}

impl<R: Ring> Ring for Polynomial<R> {
    type Ctx = PolyCtx<R>;

    fn ctx(&self) -> PolyCtx<R> {
        PolyCtx::new(self.nvars, self.ctx.clone())
    }
    fn zero(ctx: &PolyCtx<R>) -> Self {
        Polynomial::zero(ctx.nvars, &ctx.coeff)
    }
    fn one(ctx: &PolyCtx<R>) -> Self {
        Polynomial::one(ctx.nvars, &ctx.coeff)
    }
    fn from_i64(ctx: &PolyCtx<R>, n: i64) -> Self {
        Polynomial::constant(ctx.nvars, R::from_i64(&ctx.coeff, n))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        Polynomial::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Polynomial::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Polynomial::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        Polynomial::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Q;

    fn x(n: usize, i: usize) -> Polynomial<Q> {
        Polynomial::var(n, i, &())
    }

    fn c(n: usize, v: i64) -> Polynomial<Q> {
        Polynomial::constant(n, Q::int(v))
    }

    #[test]
    fn evaluate_examples() {
        let p = x(2, 0).pow(2).add(&x(2, 1));
        assert!(p.evaluate(&[Q::int(0), Q::int(0)]).is_zero());
        let q = x(1, 0).pow(2).sub(&c(1, 1));
        assert!(q.evaluate(&[Q::int(1)]).is_zero());
        let r = x(2, 0).pow(2).mul(&x(2, 1)).sub(&c(2, 2));
        assert!(r.evaluate(&[Q::int(1), Q::int(2)]).is_zero());
    }

    #[test]
    fn printing_is_descending() {
        let p = x(2, 0)
            .pow(2)
            .mul(&x(2, 1))
            .scale(&Q::new(3, 2))
            .sub(&x(2, 1))
            .add(&c(2, 1));
        assert_eq!(p.to_string(), "3/2*x^2*y - y + 1");
        assert_eq!(Polynomial::<Q>::zero(2, &()).to_string(), "0");
        assert_eq!(c(1, -4).to_string(), "-4");
    }

    #[test]
    fn translate_moves_root() {
        // (x - 2)^2 translated by 2 is x^2.
        let p = x(1, 0).sub(&c(1, 2)).pow(2);
        assert_eq!(p.translate(&[Q::int(2)]), x(1, 0).pow(2));
    }

    #[test]
    fn leading_terms_per_order() {
        let p = x(3, 1).pow(3).add(&x(3, 0).mul(&x(3, 2).pow(2)));
        assert_eq!(
            p.leading_monomial(MonomialOrder::GRevLex).unwrap(),
            &Monomial::new(vec![0, 3, 0])
        );
        assert_eq!(
            p.leading_monomial(MonomialOrder::GrLex).unwrap(),
            &Monomial::new(vec![1, 0, 2])
        );
        assert_eq!(
            p.leading_monomial(MonomialOrder::Lex).unwrap(),
            &Monomial::new(vec![1, 0, 2])
        );
    }
}

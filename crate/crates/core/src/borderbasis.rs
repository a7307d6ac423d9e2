//! Border bases: one rewriting rule `x^β = Σ u_{β,α} x^α` per border
//! monomial, the induced multiplication matrices, and the commutation test
//! that certifies them.

use std::collections::HashMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::groebner::{quotient_staircase, GroebnerBasis};
use crate::json::ToJson;
use crate::matrix::Matrix;
use crate::polynomials::{Monomial, OrderIdeal, Polynomial};
use crate::scalars::{Field, Ring};

/// Order ideal plus rewriting rules. `rules[k]` is the coefficient row of
/// the `k`-th border monomial on `B` (both in graded-lex order).
#[derive(Clone, Debug, PartialEq)]
pub struct BorderBasis<R: Ring> {
    order_ideal: OrderIdeal,
    ctx: R::Ctx,
    rules: Vec<Vec<R>>,
    certified: bool,
}

/// `Λ_1..Λ_n` on a fixed enumeration of `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicationMatrices<R: Ring> {
    pub matrices: Vec<Matrix<R>>,
}

/// Outcome of [`commutation_check`].
#[derive(Clone, Debug, PartialEq)]
pub enum Commutation<R: Ring> {
    Certified,
    /// First non-commuting pair and one nonzero entry of `Λ_iΛ_j − Λ_jΛ_i`.
    Witness {
        i: usize,
        j: usize,
        row: usize,
        col: usize,
        entry: R,
    },
}

impl<R: Ring> Commutation<R> {
    pub fn is_certified(&self) -> bool {
        matches!(self, Commutation::Certified)
    }
}

impl<R: Ring> MultiplicationMatrices<R> {
    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, Matrix::rows)
    }

    pub fn nvars(&self) -> usize {
        self.matrices.len()
    }
}

pub fn commutation_check<R: Ring>(m: &MultiplicationMatrices<R>) -> Commutation<R> {
    let n = m.matrices.len();
    for i in 0..n {
        for j in i + 1..n {
            let c = m.matrices[i]
                .mul(&m.matrices[j])
                .sub(&m.matrices[j].mul(&m.matrices[i]));
            for row in 0..c.rows() {
                for col in 0..c.cols() {
                    if !c.get(row, col).is_zero() {
                        return Commutation::Witness {
                            i,
                            j,
                            row,
                            col,
                            entry: c.get(row, col).clone(),
                        };
                    }
                }
            }
        }
    }
    Commutation::Certified
}

impl<R: Ring> BorderBasis<R> {
    /// An uncertified candidate; only the shape is validated.
    pub fn candidate(order_ideal: OrderIdeal, rules: Vec<Vec<R>>, ctx: &R::Ctx) -> Result<Self> {
        if rules.len() != order_ideal.border().len() {
            return Err(Error::ShapeMismatch(format!(
                "{} rules for {} border monomials",
                rules.len(),
                order_ideal.border().len()
            )));
        }
        if let Some(row) = rules.iter().find(|r| r.len() != order_ideal.len()) {
            return Err(Error::ShapeMismatch(format!(
                "rule row of length {} on a basis of size {}",
                row.len(),
                order_ideal.len()
            )));
        }
        Ok(BorderBasis {
            order_ideal,
            ctx: ctx.clone(),
            rules,
            certified: false,
        })
    }

    /// A certified border basis; fails with the commutator witness otherwise.
    pub fn new(order_ideal: OrderIdeal, rules: Vec<Vec<R>>, ctx: &R::Ctx) -> Result<Self> {
        let mut bb = BorderBasis::candidate(order_ideal, rules, ctx)?;
        match bb.certify() {
            Commutation::Certified => Ok(bb),
            Commutation::Witness { i, j, row, col, entry } => Err(Error::InvalidInput(format!(
                "multiplication matrices {i} and {j} do not commute (entry ({row}, {col}) = {entry})"
            ))),
        }
    }

    /// Run the commutation test and record the outcome.
    pub fn certify(&mut self) -> Commutation<R> {
        let c = commutation_check(&self.multiplication_matrices());
        self.certified = c.is_certified();
        c
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn order_ideal(&self) -> &OrderIdeal {
        &self.order_ideal
    }

    pub fn nvars(&self) -> usize {
        self.order_ideal.nvars()
    }

    pub fn dim(&self) -> usize {
        self.order_ideal.len()
    }

    pub fn ctx(&self) -> &R::Ctx {
        &self.ctx
    }

    pub fn rules(&self) -> &[Vec<R>] {
        &self.rules
    }

    pub fn rule(&self, beta: &Monomial) -> Option<&[R]> {
        self.order_ideal.border_position(beta).map(|k| self.rules[k].as_slice())
    }

    /// Replace one coefficient; the result is an uncertified candidate.
    pub fn with_coefficient(&self, border_index: usize, basis_index: usize, value: R) -> Self {
        let mut out = self.clone();
        out.rules[border_index][basis_index] = value;
        out.certified = false;
        out
    }

    /// Rule polynomial `h_β = x^β − Σ u_{β,α} x^α`.
    pub fn rule_polynomial(&self, k: usize) -> Polynomial<R> {
        let n = self.nvars();
        let mut p = Polynomial::monomial(self.order_ideal.border()[k].clone(), R::one(&self.ctx));
        for (alpha, u) in self.order_ideal.monomials().iter().zip(&self.rules[k]) {
            p.add_term(alpha.clone(), &u.neg());
        }
        debug_assert_eq!(p.nvars(), n);
        p
    }

    pub fn rule_polynomials(&self) -> Vec<Polynomial<R>> {
        (0..self.rules.len()).map(|k| self.rule_polynomial(k)).collect()
    }

    /// Column of `Λ_i` at `x^α`: the coordinates of `x_i x^α` on `B`.
    fn column(&self, i: usize, alpha: &Monomial) -> Vec<R> {
        let t = alpha.mul_var(i);
        if let Some(p) = self.order_ideal.position(&t) {
            let mut col = vec![R::zero(&self.ctx); self.dim()];
            col[p] = R::one(&self.ctx);
            col
        } else {
            let k = self
                .order_ideal
                .border_position(&t)
                .expect("x_i * B lies in B or its border");
            self.rules[k].clone()
        }
    }

    pub fn multiplication_matrices(&self) -> MultiplicationMatrices<R> {
        let d = self.dim();
        let matrices = (0..self.nvars())
            .map(|i| {
                let cols: Vec<Vec<R>> = self
                    .order_ideal
                    .monomials()
                    .iter()
                    .map(|alpha| self.column(i, alpha))
                    .collect();
                Matrix::from_columns(&cols, d, &self.ctx)
            })
            .collect();
        MultiplicationMatrices { matrices }
    }

    /// Coordinates of `p` on `B`, computed as `p(Λ)·e_1`.
    pub fn normal_form(&self, p: &Polynomial<R>) -> Result<Vec<R>> {
        Ok(self.normal_former()?.normal_form(p))
    }

    /// A reusable evaluator that memoizes monomial coordinates.
    pub fn normal_former(&self) -> Result<NormalFormer<R>> {
        if !self.certified {
            return Err(Error::RequiresCertifiedBasis);
        }
        Ok(NormalFormer::new(self))
    }

    /// Apply a coefficient map (base change); certification is re-run.
    pub fn map<S: Ring>(&self, ctx: &S::Ctx, f: impl Fn(&R) -> S) -> BorderBasis<S> {
        let rules = self.rules.iter().map(|row| row.iter().map(&f).collect()).collect();
        let mut out = BorderBasis::candidate(self.order_ideal.clone(), rules, ctx).expect("same shape");
        out.certify();
        out
    }
}

impl<R: Ring + ToJson> BorderBasis<R> {
    /// `{orderIdeal: [exponents], rules: {border monomial: row on B}}`.
    pub fn to_json(&self) -> Value {
        let oi: Vec<Value> = self
            .order_ideal
            .monomials()
            .iter()
            .map(|m| json!(m.exponents()))
            .collect();
        let mut rules = Map::new();
        for (beta, row) in self.order_ideal.border().iter().zip(&self.rules) {
            rules.insert(
                beta.to_string(),
                Value::Array(row.iter().map(ToJson::to_json).collect()),
            );
        }
        json!({
            "orderIdeal": oi,
            "basis": self.order_ideal.monomials().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "rules": rules,
            "certified": self.certified,
        })
    }
}

/// Evaluates `p(Λ)·e_1`, caching the coordinates of every monomial seen.
pub struct NormalFormer<R: Ring> {
    matrices: MultiplicationMatrices<R>,
    ctx: R::Ctx,
    memo: HashMap<Monomial, Vec<R>>,
}

impl<R: Ring> NormalFormer<R> {
    fn new(bb: &BorderBasis<R>) -> Self {
        let mut memo = HashMap::new();
        let mut e1 = vec![R::zero(&bb.ctx); bb.dim()];
        e1[0] = R::one(&bb.ctx);
        memo.insert(Monomial::one(bb.nvars()), e1);
        NormalFormer {
            matrices: bb.multiplication_matrices(),
            ctx: bb.ctx.clone(),
            memo,
        }
    }

    pub fn monomial(&mut self, m: &Monomial) -> Vec<R> {
        if let Some(v) = self.memo.get(m) {
            return v.clone();
        }
        let i = m.exponents().iter().position(|&e| e > 0).expect("non-unit monomial");
        let prev = m
            .predecessors()
            .find(|p| p.exponents()[i] + 1 == m.exponents()[i])
            .expect("predecessor");
        let base = self.monomial(&prev);
        let v = self.matrices.matrices[i].mul_vec(&base);
        self.memo.insert(m.clone(), v.clone());
        v
    }

    pub fn normal_form(&mut self, p: &Polynomial<R>) -> Vec<R> {
        let d = self.matrices.dim();
        let mut acc = vec![R::zero(&self.ctx); d];
        for (m, c) in p.terms() {
            let v = self.monomial(m);
            for (a, x) in acc.iter_mut().zip(&v) {
                if !x.is_zero() {
                    *a = a.add(&c.mul(x));
                }
            }
        }
        acc
    }
}

/// Border basis of a zero-dimensional ideal read off its Gröbner basis:
/// `B` is the staircase and each rule is the normal form of `x^β`.
pub fn from_groebner<K: Field>(g: &GroebnerBasis<K>) -> Result<BorderBasis<K>> {
    let staircase = quotient_staircase(g)?;
    let oi = staircase.order_ideal;
    let ctx = g.generators()[0].coeff_ctx().clone();
    let mut rules = Vec::with_capacity(oi.border().len());
    for beta in oi.border() {
        let nf = g.normal_form(&Polynomial::monomial(beta.clone(), K::one(&ctx)));
        let mut row = vec![K::zero(&ctx); oi.len()];
        for (m, c) in nf.terms() {
            let p = oi
                .position(m)
                .ok_or_else(|| Error::InternalInvariant(format!("normal form term {m} is not standard")))?;
            row[p] = c.clone();
        }
        rules.push(row);
    }
    let mut bb = BorderBasis::candidate(oi, rules, &ctx)?;
    match bb.certify() {
        Commutation::Certified => Ok(bb),
        Commutation::Witness { i, j, .. } => Err(Error::InternalInvariant(format!(
            "Gröbner-derived border basis fails commutation for ({i}, {j})"
        ))),
    }
}

/// Coordinates on `B` of a polynomial supported on `B`.
pub fn coordinates<R: Ring>(oi: &OrderIdeal, p: &Polynomial<R>, ctx: &R::Ctx) -> Option<Vec<R>> {
    let mut row = vec![R::zero(ctx); oi.len()];
    for (m, c) in p.terms() {
        row[oi.position(m)?] = c.clone();
    }
    Some(row)
}

/// Polynomial with the given coordinates on `B`.
pub fn from_coordinates<R: Ring>(oi: &OrderIdeal, row: &[R], ctx: &R::Ctx) -> Polynomial<R> {
    Polynomial::from_terms(oi.nvars(), ctx, oi.monomials().iter().cloned().zip(row.iter().cloned()))
}

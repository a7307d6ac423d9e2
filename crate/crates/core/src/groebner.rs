//! Buchberger's algorithm with cofactor tracking over exact fields, plus the
//! quotient staircase and the truncation-based local multiplicity.
//!
//! This is the reference implementation the border-basis and lifting code
//! is checked against, so it favours plainness over speed.

use crate::error::{Error, Result};
use crate::polynomials::{Monomial, MonomialOrder, OrderIdeal, Polynomial};
use crate::scalars::Field;

/// Default truncation budget for [`local_multiplicity_truncation`].
pub const DEFAULT_NMAX: u32 = 12;

/// Reduced, monic Gröbner basis with optional cofactors.
///
/// When tracked, `cofactors[j][i]` is the coefficient of input `i` in the
/// expression of `generators[j]`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<K: Field> {
    order: MonomialOrder,
    nvars: usize,
    ctx: K::Ctx,
    inputs: Vec<Polynomial<K>>,
    generators: Vec<Polynomial<K>>,
    cofactors: Option<Vec<Vec<Polynomial<K>>>>,
}

/// Quotient basis read off a Gröbner basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StaircaseBasis {
    pub order_ideal: OrderIdeal,
    pub dimension: usize,
}

struct Tracked<K: Field> {
    poly: Polynomial<K>,
    cof: Option<Vec<Polynomial<K>>>,
}

impl<K: Field> Tracked<K> {
    fn combine(&self, m: &Monomial, c: &K, other: &Tracked<K>) -> Tracked<K> {
        // self - c*m*other
        let poly = self.poly.sub(&other.poly.mul_term(m, c));
        let cof = match (&self.cof, &other.cof) {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(x, y)| x.sub(&y.mul_term(m, c))).collect()),
            _ => None,
        };
        Tracked { poly, cof }
    }

    fn scale(&self, c: &K) -> Tracked<K> {
        Tracked {
            poly: self.poly.scale(c),
            cof: self.cof.as_ref().map(|v| v.iter().map(|p| p.scale(c)).collect()),
        }
    }
}

/// Fully reduce `p` by `basis`; returns the remainder and, if tracking, the
/// cofactor vector of the remainder (starting from `p`'s own).
fn reduce_full<K: Field>(p: Tracked<K>, basis: &[Tracked<K>], order: MonomialOrder) -> Tracked<K> {
    let nvars = p.poly.nvars();
    let ctx = p.poly.coeff_ctx().clone();
    let mut work = p;
    let mut rem = Polynomial::zero(nvars, &ctx);
    let leads: Vec<(Monomial, K)> = basis
        .iter()
        .map(|g| {
            let (m, c) = g.poly.leading_term(order).expect("nonzero basis element");
            (m.clone(), c.clone())
        })
        .collect();
    while let Some((lm, lc)) = work.poly.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(m, _)| m.divides(&lm)) {
            Some(j) => {
                let q = lm.div(&leads[j].0).expect("divisor");
                let c = lc.div(&leads[j].1).expect("nonzero leading coefficient");
                work = work.combine(&q, &c, &basis[j]);
            }
            None => {
                rem.add_term(lm.clone(), &lc);
                let t = Polynomial::monomial(lm, lc);
                work.poly = work.poly.sub(&t);
            }
        }
    }
    Tracked {
        poly: rem,
        cof: work.cof,
    }
}

fn check_exact<K: Field>() -> Result<()> {
    if K::EXACT {
        Ok(())
    } else {
        Err(Error::UnsupportedScalar)
    }
}

impl<K: Field> GroebnerBasis<K> {
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial<K>] {
        &self.generators
    }

    pub fn inputs(&self) -> &[Polynomial<K>] {
        &self.inputs
    }

    pub fn cofactors(&self) -> Option<&[Vec<Polynomial<K>>]> {
        self.cofactors.as_deref()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].total_degree() == Some(0)
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .map(|g| g.leading_monomial(self.order).expect("nonzero generator").clone())
            .collect()
    }

    fn tracked(&self) -> Vec<Tracked<K>> {
        self.generators
            .iter()
            .enumerate()
            .map(|(j, g)| Tracked {
                poly: g.clone(),
                cof: self.cofactors.as_ref().map(|c| c[j].clone()),
            })
            .collect()
    }

    /// Remainder of `p` modulo the basis (the canonical normal form).
    pub fn normal_form(&self, p: &Polynomial<K>) -> Polynomial<K> {
        let basis: Vec<Tracked<K>> = self
            .generators
            .iter()
            .map(|g| Tracked {
                poly: g.clone(),
                cof: None,
            })
            .collect();
        reduce_full(
            Tracked {
                poly: p.clone(),
                cof: None,
            },
            &basis,
            self.order,
        )
        .poly
    }

    pub fn contains(&self, p: &Polynomial<K>) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Cofactors `c` with `p = sum c_i F_i` over the inputs, or `None` when
    /// `p` is not in the ideal. Requires a tracked basis.
    pub fn certificate(&self, p: &Polynomial<K>) -> Option<Vec<Polynomial<K>>> {
        assert!(self.cofactors.is_some(), "certificate needs a tracked basis");
        let zero = Polynomial::zero(self.nvars, &self.ctx);
        let start = Tracked {
            poly: p.clone(),
            cof: Some(vec![zero; self.inputs.len()]),
        };
        let r = reduce_full(start, &self.tracked(), self.order);
        // p - sum(q_j g_j) = rem and the tracked cofactor holds -sum(q_j cof_j).
        r.poly
            .is_zero()
            .then(|| r.cof.expect("tracked").into_iter().map(|c| c.neg()).collect())
    }

    /// Verify every stored cofactor identity by expansion.
    pub fn cofactors_valid(&self) -> bool {
        let Some(cofs) = &self.cofactors else {
            return true;
        };
        self.generators.iter().zip(cofs).all(|(g, cof)| {
            let mut acc = Polynomial::zero(self.nvars, &self.ctx);
            for (c, f) in cof.iter().zip(&self.inputs) {
                acc = acc.add(&c.mul(f));
            }
            &acc == g
        })
    }

    /// `true` iff every S-polynomial reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let basis: Vec<Tracked<K>> = self
            .generators
            .iter()
            .map(|g| Tracked {
                poly: g.clone(),
                cof: None,
            })
            .collect();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let s = s_polynomial(&basis[i], &basis[j], self.order);
                if !reduce_full(s, &basis, self.order).poly.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

fn s_polynomial<K: Field>(a: &Tracked<K>, b: &Tracked<K>, order: MonomialOrder) -> Tracked<K> {
    let (ma, ca) = a.poly.leading_term(order).expect("nonzero");
    let (mb, cb) = b.poly.leading_term(order).expect("nonzero");
    let l = ma.lcm(mb);
    let ta = l.div(ma).expect("lcm");
    let tb = l.div(mb).expect("lcm");
    let ctx = a.poly.coeff_ctx();
    let left = Tracked {
        poly: Polynomial::zero(a.poly.nvars(), ctx),
        cof: a
            .cof
            .as_ref()
            .map(|v| v.iter().map(|p| Polynomial::zero(p.nvars(), ctx)).collect()),
    };
    let ia = ca.inv().expect("nonzero");
    let ib = cb.inv().expect("nonzero");
    left.combine(&ta, &ia.neg(), a).combine(&tb, &ib, b)
}

/// Reduced Gröbner basis of `⟨F⟩` with cofactors.
pub fn buchberger<K: Field>(f: &[Polynomial<K>], order: MonomialOrder) -> Result<GroebnerBasis<K>> {
    groebner_impl(f, order, true)
}

/// Reduced Gröbner basis without cofactor bookkeeping.
pub fn groebner_untracked<K: Field>(f: &[Polynomial<K>], order: MonomialOrder) -> Result<GroebnerBasis<K>> {
    groebner_impl(f, order, false)
}

fn groebner_impl<K: Field>(f: &[Polynomial<K>], order: MonomialOrder, track: bool) -> Result<GroebnerBasis<K>> {
    check_exact::<K>()?;
    let first = f
        .first()
        .ok_or_else(|| Error::InvalidInput("empty generator list".into()))?;
    let nvars = first.nvars();
    let ctx = first.coeff_ctx().clone();
    if f.iter().any(|p| p.nvars() != nvars) {
        return Err(Error::ShapeMismatch("generators in different ambient rings".into()));
    }
    let m = f.len();
    let unit_cof = |i: usize| -> Vec<Polynomial<K>> {
        (0..m)
            .map(|k| {
                if k == i {
                    Polynomial::one(nvars, &ctx)
                } else {
                    Polynomial::zero(nvars, &ctx)
                }
            })
            .collect()
    };

    let mut basis: Vec<Tracked<K>> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let push = |basis: &mut Vec<Tracked<K>>, pairs: &mut Vec<(usize, usize)>, t: Tracked<K>| {
        let lc = t.poly.leading_term(order).expect("nonzero").1.clone();
        let t = t.scale(&lc.inv().expect("nonzero"));
        let k = basis.len();
        for i in 0..k {
            pairs.push((i, k));
        }
        basis.push(t);
    };

    for (i, p) in f.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let t = Tracked {
            poly: p.clone(),
            cof: track.then(|| unit_cof(i)),
        };
        push(&mut basis, &mut pairs, t);
    }

    let mut unit: Option<Tracked<K>> = basis
        .iter()
        .find(|t| t.poly.total_degree() == Some(0))
        .map(|t| Tracked {
            poly: t.poly.clone(),
            cof: t.cof.clone(),
        });

    while unit.is_none() && !pairs.is_empty() {
        // Normal selection strategy: smallest lcm first.
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let la = pair_lcm(&basis, pairs[a], order);
                let lb = pair_lcm(&basis, pairs[b], order);
                order.cmp(&la, &lb).then(pairs[a].cmp(&pairs[b]))
            })
            .expect("nonempty");
        let (i, j) = pairs.swap_remove(best);
        let li = basis[i].poly.leading_monomial(order).expect("nonzero");
        let lj = basis[j].poly.leading_monomial(order).expect("nonzero");
        if li.is_coprime(lj) {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = reduce_full(s, &basis, order);
        if r.poly.is_zero() {
            continue;
        }
        if r.poly.total_degree() == Some(0) {
            unit = Some(r);
            break;
        }
        push(&mut basis, &mut pairs, r);
    }

    let reduced: Vec<Tracked<K>> = match unit {
        Some(u) => {
            let c = u.poly.constant_term().inv().expect("nonzero constant");
            vec![u.scale(&c)]
        }
        None => interreduce(basis, order),
    };

    let mut reduced = reduced;
    reduced.sort_by(|a, b| {
        order.cmp(
            a.poly.leading_monomial(order).expect("nonzero"),
            b.poly.leading_monomial(order).expect("nonzero"),
        )
    });
    let cofactors = track.then(|| reduced.iter().map(|t| t.cof.clone().expect("tracked")).collect());
    Ok(GroebnerBasis {
        order,
        nvars,
        ctx,
        inputs: f.to_vec(),
        generators: reduced.into_iter().map(|t| t.poly).collect(),
        cofactors,
    })
}

fn pair_lcm<K: Field>(basis: &[Tracked<K>], (i, j): (usize, usize), order: MonomialOrder) -> Monomial {
    let a = basis[i].poly.leading_monomial(order).expect("nonzero");
    let b = basis[j].poly.leading_monomial(order).expect("nonzero");
    a.lcm(b)
}

/// Minimalize, then reduce every element by the others and make it monic.
fn interreduce<K: Field>(basis: Vec<Tracked<K>>, order: MonomialOrder) -> Vec<Tracked<K>> {
    let lms: Vec<Monomial> = basis
        .iter()
        .map(|t| t.poly.leading_monomial(order).expect("nonzero").clone())
        .collect();
    let mut keep = Vec::new();
    for (i, m) in lms.iter().enumerate() {
        let redundant = lms
            .iter()
            .enumerate()
            .any(|(j, other)| j != i && other.divides(m) && (other != m || j < i));
        if !redundant {
            keep.push(i);
        }
    }
    let mut minimal: Vec<Tracked<K>> = Vec::new();
    let mut basis = basis;
    for (i, t) in basis.drain(..).enumerate() {
        if keep.contains(&i) {
            minimal.push(t);
        }
    }
    for k in 0..minimal.len() {
        let others: Vec<Tracked<K>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, t)| Tracked {
                poly: t.poly.clone(),
                cof: t.cof.clone(),
            })
            .collect();
        let (lm, lc) = {
            let (m, c) = minimal[k].poly.leading_term(order).expect("nonzero");
            (m.clone(), c.clone())
        };
        // The leading term is irreducible by the others; reduce the tail only.
        let tail = Tracked {
            poly: minimal[k].poly.sub(&Polynomial::monomial(lm.clone(), lc.clone())),
            cof: minimal[k].cof.clone(),
        };
        let r = reduce_full(tail, &others, order);
        let mut poly = r.poly;
        poly.add_term(lm, &lc);
        let t = Tracked { poly, cof: r.cof };
        minimal[k] = t.scale(&lc.inv().expect("nonzero"));
    }
    minimal
}

/// Standard monomials of a zero-dimensional Gröbner basis.
pub fn quotient_staircase<K: Field>(g: &GroebnerBasis<K>) -> Result<StaircaseBasis> {
    let n = g.nvars();
    let lms = g.leading_monomials();
    if g.is_unit_ideal() {
        return Err(Error::InvalidInput(
            "the ideal is the whole ring (empty quotient)".into(),
        ));
    }
    let mut bound = vec![0u32; n];
    for (i, b) in bound.iter_mut().enumerate() {
        *b = lms
            .iter()
            .filter(|m| m.exponents().iter().enumerate().all(|(k, &e)| (k == i) == (e > 0)))
            .map(|m| m.exponents()[i])
            .min()
            .ok_or(Error::NotZeroDimensional)?;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    loop {
        let m = Monomial::new(cur.clone());
        if !lms.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        let mut k = 0;
        loop {
            if k == n {
                let order_ideal = OrderIdeal::new(n, out)?;
                let dimension = order_ideal.len();
                return Ok(StaircaseBasis { order_ideal, dimension });
            }
            cur[k] += 1;
            if cur[k] < bound[k] {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}

/// Cofactors expressing `p` in terms of `F`, or `None` if `p ∉ ⟨F⟩`.
pub fn membership_certificate<K: Field>(
    p: &Polynomial<K>,
    f: &[Polynomial<K>],
    order: MonomialOrder,
) -> Result<Option<Vec<Polynomial<K>>>> {
    let g = buchberger(f, order)?;
    Ok(g.certificate(p))
}

/// `dim_k k[X] / (I + ⟨X⟩^N)`.
pub fn truncated_dimension<K: Field>(f: &[Polynomial<K>], n: u32) -> Result<usize> {
    let first = f
        .first()
        .ok_or_else(|| Error::InvalidInput("empty generator list".into()))?;
    let nvars = first.nvars();
    let ctx = first.coeff_ctx().clone();
    let mut gens: Vec<Polynomial<K>> = f.to_vec();
    gens.extend(
        Monomial::all_of_degree(nvars, n)
            .into_iter()
            .map(|m| Polynomial::monomial(m, K::one(&ctx))),
    );
    let g = groebner_untracked(&gens, MonomialOrder::GRevLex)?;
    if g.is_unit_ideal() {
        return Ok(0);
    }
    Ok(quotient_staircase(&g)?.dimension)
}

/// Local multiplicity at the origin by stabilization of truncated quotients.
///
/// Returns `(r, N)` where `N` is the smallest truncation with
/// `dim(I + m^N) = dim(I + m^{N+1}) = r`.
pub fn local_multiplicity_truncation<K: Field>(f: &[Polynomial<K>], nmax: u32) -> Result<(usize, u32)> {
    check_exact::<K>()?;
    for (index, p) in f.iter().enumerate() {
        if !p.constant_term().is_zero() {
            return Err(Error::OriginNotAZero { index });
        }
    }
    let mut prev = truncated_dimension(f, 1)?;
    for n in 1..nmax {
        let next = truncated_dimension(f, n + 1)?;
        if next == prev {
            return Ok((prev, n));
        }
        prev = next;
    }
    Err(Error::NotIsolated { nmax })
}

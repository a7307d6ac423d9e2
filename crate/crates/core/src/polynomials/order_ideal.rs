use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

use super::monomial::Monomial;

/// `true` iff every divisor of every member of `s` is a member.
///
/// Checking immediate predecessors suffices.
pub fn is_closed_by_division<'a>(s: impl IntoIterator<Item = &'a Monomial> + Clone) -> bool {
    let set: BTreeSet<&Monomial> = s.clone().into_iter().collect();
    set.iter().all(|m| m.predecessors().all(|p| set.contains(&p)))
}

/// A finite, nonempty, division-closed set of monomials together with its border.
///
/// Members and border are enumerated in graded-lex ascending order; that
/// enumeration fixes the coordinate order of every matrix built on `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderIdeal {
    nvars: usize,
    monomials: Vec<Monomial>,
    border: Vec<Monomial>,
    position: HashMap<Monomial, usize>,
    border_position: HashMap<Monomial, usize>,
}

impl OrderIdeal {
    pub fn new(nvars: usize, monomials: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let set: BTreeSet<Monomial> = monomials.into_iter().collect();
        if let Some(bad) = set.iter().find(|m| m.nvars() != nvars) {
            return Err(Error::InvalidInput(format!(
                "monomial with {} exponents in a {nvars}-variable order ideal",
                bad.nvars()
            )));
        }
        if !set.contains(&Monomial::one(nvars)) {
            return Err(Error::InvalidInput("order ideal must contain 1".into()));
        }
        if !is_closed_by_division(&set) {
            return Err(Error::InvalidInput("monomial set is not closed by division".into()));
        }
        let mut border = BTreeSet::new();
        for m in &set {
            for i in 0..nvars {
                let t = m.mul_var(i);
                if !set.contains(&t) {
                    border.insert(t);
                }
            }
        }
        let monomials: Vec<Monomial> = set.into_iter().collect();
        let border: Vec<Monomial> = border.into_iter().collect();
        let position = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let border_position = border.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(OrderIdeal {
            nvars,
            monomials,
            border,
            position,
            border_position,
        })
    }

    /// The order ideal `{1}`.
    pub fn unit(nvars: usize) -> Self {
        OrderIdeal::new(nvars, [Monomial::one(nvars)]).expect("{1} is an order ideal")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn border(&self) -> &[Monomial] {
        &self.border
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.position.contains_key(m)
    }

    pub fn in_border(&self, m: &Monomial) -> bool {
        self.border_position.contains_key(m)
    }

    /// Coordinate of `m` in the basis enumeration.
    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.position.get(m).copied()
    }

    pub fn border_position(&self, m: &Monomial) -> Option<usize> {
        self.border_position.get(m).copied()
    }

    /// Index of `t` w.r.t. `B`: `deg t - max{deg b : b in B, b | t}`.
    ///
    /// Zero on `B`, one on the border, and it drops by one when a border
    /// factor is split off the right way.
    pub fn index_of(&self, t: &Monomial) -> u32 {
        let best = self
            .monomials
            .iter()
            .filter(|b| b.divides(t))
            .map(Monomial::degree)
            .max()
            .expect("1 divides everything");
        t.degree() - best
    }

    /// Factorizations `t = t'' * beta` with `beta` in the border and
    /// `deg t'' = index(t) - 1`, in graded-lex order of `beta`.
    pub fn border_factorizations(&self, t: &Monomial) -> Vec<(Monomial, Monomial)> {
        let idx = self.index_of(t);
        if idx == 0 {
            return Vec::new();
        }
        self.border
            .iter()
            .filter_map(|beta| {
                let q = t.div(beta)?;
                (q.degree() + 1 == idx).then_some((q, beta.clone()))
            })
            .collect()
    }

    /// Largest total degree of a member.
    pub fn max_degree(&self) -> u32 {
        self.monomials.iter().map(Monomial::degree).max().unwrap_or(0)
    }
}

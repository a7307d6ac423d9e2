mod common;

use common::random_zero_dim;
use henselbez::borderbasis::from_groebner;
use henselbez::groebner::{buchberger, quotient_staircase};
use henselbez::polynomials::{Monomial, MonomialOrder, OrderIdeal, Polynomial};
use henselbez::scalars::{Ring, Series, SeriesCtx, Valuation, Q};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const NVARS: usize = 2;
const PREC: u32 = 4;

fn ctx() -> SeriesCtx<Q> {
    SeriesCtx::new(NVARS, PREC, ())
}

/// Series from `(i, j, c)` triples: `c·v1^i·v2^j`.
fn series(terms: &[(u32, u32, i64)]) -> Series<Q> {
    Series::from_terms(
        &ctx(),
        terms.iter().map(|&(i, j, c)| (Monomial::new(vec![i, j]), Q::int(c))),
    )
}

fn series_strategy() -> impl Strategy<Value = Series<Q>> {
    prop::collection::vec((0u32..5, 0u32..5, -6i64..=6), 0..6).prop_map(|t| series(&t))
}

fn poly_strategy() -> impl Strategy<Value = Polynomial<Q>> {
    prop::collection::vec((0u32..4, 0u32..4, -6i64..=6), 0..6).prop_map(|t| {
        Polynomial::from_terms(
            NVARS,
            &(),
            t.into_iter().map(|(i, j, c)| (Monomial::new(vec![i, j]), Q::int(c))),
        )
    })
}

fn lower(v: Valuation) -> u32 {
    match v {
        Valuation::Finite(k) | Valuation::AtLeast(k) => k,
    }
}

proptest! {
    #[test]
    fn series_ring_axioms(a in series_strategy(), b in series_strategy(), c in series_strategy()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), Series::zero(&ctx()));
        prop_assert_eq!(a.mul(&Series::one(&ctx())), a.clone());
    }

    #[test]
    fn series_valuation_is_additive(a in series_strategy(), b in series_strategy()) {
        let (va, vb, vab) = (a.valuation(), b.valuation(), a.mul(&b).valuation());
        prop_assert!(lower(vab) >= (lower(va) + lower(vb)).min(PREC + 1));
        if let (Valuation::Finite(x), Valuation::Finite(y)) = (va, vb) {
            if x + y <= PREC {
                prop_assert_eq!(vab, Valuation::Finite(x + y));
            }
        }
    }

    #[test]
    fn units_invert(a in series_strategy(), c in 1i64..9) {
        let u = a.add(&Series::constant(&ctx(), Q::int(c))).sub(&Series::constant(&ctx(), a.constant_term()));
        let inv = u.invert().unwrap();
        prop_assert_eq!(u.mul(&inv), Series::one(&ctx()));
    }

    #[test]
    fn evaluation_is_a_ring_map(p in poly_strategy(), q in poly_strategy(), x in -5i64..5, y in -5i64..5) {
        let pt = [Q::int(x), Q::new(y, 3)];
        prop_assert_eq!(p.mul(&q).evaluate(&pt), p.evaluate(&pt).mul(&q.evaluate(&pt)));
        prop_assert_eq!(p.add(&q).evaluate(&pt), p.evaluate(&pt).add(&q.evaluate(&pt)));
    }

    #[test]
    fn border_of_an_order_ideal(gens in prop::collection::vec((0u32..4, 0u32..4, 0u32..3), 1..5)) {
        let mut set = Vec::new();
        for (a, b, c) in gens {
            for i in 0..=a {
                for j in 0..=b {
                    for k in 0..=c {
                        set.push(Monomial::new(vec![i, j, k]));
                    }
                }
            }
        }
        let oi = OrderIdeal::new(3, set).unwrap();
        for beta in oi.border() {
            prop_assert!(!oi.contains(beta));
            let has_parent = (0..3).any(|i| {
                let mut e = beta.exponents().to_vec();
                e[i] > 0 && {
                    e[i] -= 1;
                    oi.contains(&Monomial::new(e))
                }
            });
            prop_assert!(has_parent);
        }
        for m in oi.monomials() {
            for i in 0..3 {
                let t = m.mul_var(i);
                prop_assert!(oi.contains(&t) || oi.in_border(&t));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quotient_does_not_depend_on_the_order(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_zero_dim(&mut rng, n, 8);
        let grevlex = buchberger(&f, MonomialOrder::GRevLex).unwrap();
        let lex = buchberger(&f, MonomialOrder::Lex).unwrap();
        prop_assert_eq!(
            quotient_staircase(&grevlex).unwrap().dimension,
            quotient_staircase(&lex).unwrap().dimension
        );
        for g in lex.generators() {
            prop_assert!(grevlex.contains(g));
        }
        for g in grevlex.generators() {
            prop_assert!(lex.contains(g));
        }
        prop_assert!(grevlex.cofactors_valid());
        let mut bb = from_groebner(&lex).unwrap();
        prop_assert!(bb.certify().is_certified());
    }
}

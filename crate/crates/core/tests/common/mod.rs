#![allow(dead_code)]

use henselbez::groebner::{buchberger, quotient_staircase};
use henselbez::hensel::DeformedSystem;
use henselbez::polynomials::{parse_polynomial, Monomial, MonomialOrder, Polynomial, VarTable};
use henselbez::scalars::Q;
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn sys(n: usize, lines: &[&str]) -> Vec<Polynomial<Q>> {
    let vars = VarTable::new(n, 0);
    lines.iter().map(|l| parse_polynomial(l, &vars, 1).unwrap()).collect()
}

pub fn deformed(n: usize, m: usize, prec: u32, lines: &[&str]) -> DeformedSystem<Q> {
    let vars = VarTable::new(n, m);
    let flat: Vec<Polynomial<Q>> = lines.iter().map(|l| parse_polynomial(l, &vars, 1).unwrap()).collect();
    DeformedSystem::from_flat(&flat, n, m, prec, ()).unwrap()
}

fn nonzero_coeff(rng: &mut impl Rng, bound: i64) -> Q {
    loop {
        let c = rng.random_range(-bound..=bound);
        if c != 0 {
            return Q::int(c);
        }
    }
}

/// Random polynomial with up to `nterms` terms whose degrees lie in `min_deg..=max_deg`.
pub fn random_poly(rng: &mut impl Rng, n: usize, min_deg: u32, max_deg: u32, nterms: usize) -> Polynomial<Q> {
    let pool: Vec<Monomial> = Monomial::all_up_to_degree(n, max_deg)
        .into_iter()
        .filter(|m| m.degree() >= min_deg)
        .collect();
    let terms: Vec<(Monomial, Q)> = (0..nterms)
        .map(|_| (pool.choose(rng).unwrap().clone(), nonzero_coeff(rng, 5)))
        .collect();
    Polynomial::from_terms(n, &(), terms)
}

/// Random system of `n` polynomials in `n` variables whose quotient is
/// finite and nonzero, with total degrees at most 3 and Bézout number at most `max_bezout`.
pub fn random_zero_dim(rng: &mut impl Rng, n: usize, max_bezout: u32) -> Vec<Polynomial<Q>> {
    loop {
        let degs: Vec<u32> = (0..n).map(|_| rng.random_range(1..=3)).collect();
        if degs.iter().product::<u32>() > max_bezout {
            continue;
        }
        let f: Vec<Polynomial<Q>> = degs
            .iter()
            .map(|&d| {
                let top = random_poly(rng, n, d, d, 2);
                top.add(&random_poly(rng, n, 0, d, 3))
            })
            .collect();
        let Ok(gb) = buchberger(&f, MonomialOrder::GRevLex) else {
            continue;
        };
        if gb.is_unit_ideal() {
            continue;
        }
        if quotient_staircase(&gb).is_ok() {
            return f;
        }
    }
}

/// Random system in `n` variables with no constant terms.
pub fn random_at_origin(rng: &mut impl Rng, n: usize) -> Vec<Polynomial<Q>> {
    (0..n)
        .map(|_| {
            let low = rng.random_range(1..=2);
            loop {
                let p = random_poly(rng, n, low, 3, 3);
                if !p.is_zero() {
                    break p;
                }
            }
        })
        .collect()
}

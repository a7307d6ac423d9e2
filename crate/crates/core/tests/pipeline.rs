mod common;

use common::{deformed, random_zero_dim, sys};
use henselbez::borderbasis::from_groebner;
use henselbez::continuity::{local_bezout_count, PerturbationExperiment, Verdict};
use henselbez::groebner::buchberger;
use henselbez::hensel::{assemble_lift, lift, localize_residual, verify_lift, DivisionStrategy};
use henselbez::io::{parse_system, FieldKind};
use henselbez::localzero::{stickelberger_decompose, StickelbergerOptions};
use henselbez::polynomials::{MonomialOrder, Polynomial};
use henselbez::scalars::{Field, Fp, Ring, Series, Q};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn reassembled_lift_matches() {
    for (n, m, prec, lines) in [
        (1, 1, 6, vec!["x^2 - x^3 - v"]),
        (2, 2, 4, vec!["x^2 - y^3 + v1", "y^2 + v2*x"]),
        (2, 1, 4, vec!["x^2 + v*y", "y^2 - v*x"]),
    ] {
        let f = deformed(n, m, prec, &lines);
        let lifted = lift(&f).unwrap();
        let local = localize_residual(&f.residual()).unwrap();
        let again = assemble_lift(&f, &local, lifted.working.rules().to_vec(), DivisionStrategy::default()).unwrap();
        assert_eq!(again.base.rules(), lifted.base.rules(), "{lines:?}");
        assert_eq!(again.det_s, lifted.det_s, "{lines:?}");
        assert!(verify_lift(&again, &f).all_pass(), "{lines:?}");
    }
}

#[test]
fn tampered_working_rules_fail_verification() {
    let f = deformed(2, 2, 3, &["x^2 + v1", "y^2 + v2"]);
    let lifted = lift(&f).unwrap();
    let local = localize_residual(&f.residual()).unwrap();
    let mut rules = lifted.working.rules().to_vec();
    rules[0][1] = rules[0][1].add(&Series::var(&f.series_ctx, 1));
    let bad = assemble_lift(&f, &local, rules, DivisionStrategy::default()).unwrap();
    let report = verify_lift(&bad, &f);
    assert!(!report.all_pass());
    assert!(!report.generators_reduce || !report.commutation);
}

#[test]
fn system_text_round_trips() {
    for text in [
        "QQ 2 0\nx^2 - 1/3*y\ny^2 + 7\n",
        "QQ[[v]] 1 1 8\nx^2 - x^3 - v\n",
        "QQ[[v1,v2]] 2 2 4\nx^2 - y^3 + v1\ny^2 + v2*x\n",
        "GF(101) 3 0\nx*y*z - 4\nx^2 + y\nz^3 - 1/2\n",
    ] {
        let parsed = parse_system(text).unwrap();
        let canonical = parsed.to_text();
        let reparsed = parse_system(&canonical).unwrap();
        assert_eq!(reparsed, parsed);
        assert_eq!(reparsed.to_text(), canonical);
    }
    assert_eq!(parse_system("GF(101) 1 0\nx").unwrap().field, FieldKind::Prime(101));
}

#[test]
fn border_basis_commutes_with_reduction_mod_p() {
    let p = 10007u32;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for s in 0..12 {
        let f = random_zero_dim(&mut rng, 1 + s % 3, 8);
        let over_q = from_groebner(&buchberger(&f, MonomialOrder::GRevLex).unwrap()).unwrap();
        let fp: Vec<Polynomial<Fp>> = f
            .iter()
            .map(|g| g.map_coeffs(&p, |c| Fp::from_rational(&p, c.as_big()).unwrap()))
            .collect();
        let mut over_p = from_groebner(&buchberger(&fp, MonomialOrder::GRevLex).unwrap()).unwrap();
        assert!(over_p.certify().is_certified());
        if over_p.order_ideal() != over_q.order_ideal() {
            // p is unlucky for this system; the staircase can only shrink.
            assert!(over_p.dim() <= over_q.dim());
            continue;
        }
        let Some(reduced) = over_q
            .rules()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| Fp::from_rational(&p, c.as_big()))
                    .collect::<Option<Vec<Fp>>>()
            })
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        assert_eq!(reduced, over_p.rules());
    }
}

fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
}

#[test]
fn unperturbed_count_matches_exact_decomposition() {
    let system = sys(2, &["x^2 - x^3", "y^2 - x*y"]);
    let e = PerturbationExperiment::new(system.clone(), vec![Q::int(0), Q::int(0)], 0.1, 0.0, 3, 4).unwrap();
    let report = local_bezout_count(&e).unwrap();
    let mut bb = from_groebner(&buchberger(&system, MonomialOrder::GRevLex).unwrap()).unwrap();
    bb.certify();
    let exact = stickelberger_decompose(&bb, &StickelbergerOptions::default()).unwrap();
    for t in &report.trials {
        assert_eq!(t.zeros.len(), exact.len());
        for (a, b) in t.zeros.iter().zip(&exact) {
            assert_eq!(a.multiplicity, b.multiplicity);
            assert!(close(&a.point, &b.point, 1e-8), "{a:?} vs {b:?}");
        }
    }
    assert_eq!(report.verdict, Verdict::Pass);
}

#[test]
fn rational_perturbation_has_closed_form_zeros() {
    let g = sys(2, &["x^2 - 1/10000", "y^2 - 1/10000"]);
    let mut bb = from_groebner(&buchberger(&g, MonomialOrder::GRevLex).unwrap()).unwrap();
    bb.certify();
    let zeros = stickelberger_decompose(&bb, &StickelbergerOptions::default()).unwrap();
    assert_eq!(zeros.len(), 4);
    for z in &zeros {
        assert_eq!(z.multiplicity, 1);
        assert!(z
            .point
            .iter()
            .all(|c| (c.norm() - 1e-2).abs() < 1e-12 && c.im.abs() < 1e-12));
    }
}

#[test]
fn count_reports_are_reproducible() {
    let e = PerturbationExperiment::new(sys(2, &["x^2", "y^2"]), vec![Q::int(0), Q::int(0)], 0.1, 1e-4, 8, 99).unwrap();
    let a = local_bezout_count(&e).unwrap();
    let b = local_bezout_count(&e).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.verdict, Verdict::Pass);
}

#[test]
fn count_at_a_translated_point() {
    // Double zero at (1, 0) and a simple one at (0, 0).
    let g = sys(2, &["(x - 1)^2*x", "y - x^2 + x"]);
    let e = PerturbationExperiment::new(g, vec![Q::int(1), Q::int(0)], 0.1, 1e-6, 10, 3).unwrap();
    assert_eq!(e.r, 2);
    let report = local_bezout_count(&e).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
    assert!(report.trials.iter().all(|t| t.sum_inside == 2 && t.conserved()));
}

#[test]
fn halving_delta_keeps_the_pass_rate() {
    let g = sys(2, &["x^2", "y^2"]);
    let mut previous = 0;
    for delta in [4e-3, 2e-3, 1e-3, 5e-4] {
        let e = PerturbationExperiment::new(g.clone(), vec![Q::int(0), Q::int(0)], 0.1, delta, 40, 17).unwrap();
        let counted = local_bezout_count(&e).unwrap().counted_r();
        assert!(counted >= previous, "δ = {delta}: {counted} < {previous}");
        previous = counted;
    }
    assert_eq!(previous, 40);
}

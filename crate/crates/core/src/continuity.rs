//! Root continuity under coefficient perturbation, univariate and
//! multivariate, checked by seeded trials.
//!
//! Multivariate trials perturb with exact Gaussian rationals: every
//! coefficient moves by `δ·(a + bi)/K` with integers `a² + b² ≤ K²`, so the
//! quotient and its multiplication matrices are exact and only the final
//! eigen-decomposition runs in floating point.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::borderbasis::from_groebner;
use crate::error::{Error, Result};
use crate::groebner::{groebner_untracked, quotient_staircase};
use crate::localzero::{
    decompose_complex, multiplicity_at_origin, stickelberger_decompose, StickelbergerOptions, ZeroWithMultiplicity,
    DEFAULT_GAP, DEFAULT_RANK_TOL,
};
use crate::polynomials::{Monomial, MonomialOrder, Polynomial};
use crate::scalars::{Field, Ring, ToComplex, Q, QI};

/// Scale of the integer lattice used to sample the perturbation disc.
pub const LATTICE: i64 = 1 << 16;

/// Resample budget per requested trial.
pub const RESAMPLE_FACTOR: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform sample of the closed unit disc.
fn unit_disc(rng: &mut impl Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
        if z.norm_sqr() <= 1.0 {
            return z;
        }
    }
}

/// Lattice point `(a, b)` with `a² + b² ≤ K²`.
fn lattice_disc(rng: &mut impl Rng) -> (i64, i64) {
    loop {
        let a = rng.random_range(-LATTICE..=LATTICE);
        let b = rng.random_range(-LATTICE..=LATTICE);
        if a * a + b * b <= LATTICE * LATTICE {
            return (a, b);
        }
    }
}

fn companion(monic_high_first: &[Complex64]) -> DMatrix<Complex64> {
    let d = monic_high_first.len() - 1;
    let mut m = DMatrix::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for (k, c) in monic_high_first[1..].iter().enumerate() {
        // coefficient of y^{d-1-k} goes to row d-1-k
        m[(d - 1 - k, d - 1)] = -c;
    }
    m
}

fn fmt_point(p: &[Complex64]) -> String {
    let parts: Vec<String> = p.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
    format!("({})", parts.join(", "))
}

/// Per-disc root counts of one perturbed polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct UnivariateTrial {
    pub roots: Vec<Complex64>,
    pub counts: Vec<usize>,
    pub preserved: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnivariateReport {
    /// Distinct roots of the unperturbed polynomial with multiplicities.
    pub centers: Vec<ZeroWithMultiplicity>,
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
    pub trials: Vec<UnivariateTrial>,
    pub preserved: usize,
    pub verdict: Verdict,
}

/// Perturb the non-leading coefficients of a monic polynomial (highest
/// degree first) within the `δ`-disc and count roots in each `ε`-disc
/// around the unperturbed roots.
pub fn univariate_continuity(
    coeffs: &[Complex64],
    eps: f64,
    delta: f64,
    trials: usize,
    seed: u64,
) -> Result<UnivariateReport> {
    if coeffs.len() < 2 {
        return Err(Error::InvalidInput("polynomial must have degree at least 1".into()));
    }
    if coeffs[0] != Complex64::new(1.0, 0.0) {
        return Err(Error::InvalidInput("polynomial must be monic".into()));
    }
    if eps.is_nan() || eps <= 0.0 || delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidInput(
            "eps must be positive and delta non-negative".into(),
        ));
    }
    let opts = StickelbergerOptions {
        seed,
        ..StickelbergerOptions::default()
    };
    let centers = decompose_complex(&[companion(coeffs)], &opts)?;
    for (a, ca) in centers.iter().enumerate() {
        for cb in &centers[a + 1..] {
            if (ca.point[0] - cb.point[0]).norm() < 2.0 * eps {
                return Err(Error::DiscsOverlap {
                    eps,
                    first: fmt_point(&ca.point),
                    second: fmt_point(&cb.point),
                });
            }
        }
    }
    let expected: Vec<usize> = centers.iter().map(|c| c.multiplicity).collect();
    let results: Vec<Result<UnivariateTrial>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(seed, t as u64);
            let mut p = coeffs.to_vec();
            for c in &mut p[1..] {
                *c += unit_disc(&mut rng) * delta;
            }
            let m = companion(&p);
            let schur = nalgebra::Schur::try_new(m, f64::EPSILON, 100_000).ok_or(Error::EigenFailure)?;
            let roots: Vec<Complex64> = schur
                .eigenvalues()
                .ok_or(Error::EigenFailure)?
                .iter()
                .copied()
                .collect();
            let mut counts = vec![0; centers.len()];
            let mut assigned = 0;
            for z in &roots {
                if let Some(k) = centers.iter().position(|c| (z - c.point[0]).norm() < eps) {
                    counts[k] += 1;
                    assigned += 1;
                }
            }
            let preserved = assigned == roots.len() && counts == expected;
            Ok(UnivariateTrial {
                roots,
                counts,
                preserved,
            })
        })
        .collect();
    let trials: Vec<UnivariateTrial> = results.into_iter().collect::<Result<_>>()?;
    let preserved = trials.iter().filter(|t| t.preserved).count();
    Ok(UnivariateReport {
        centers,
        eps,
        delta,
        seed,
        verdict: if preserved == trials.len() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        preserved,
        trials,
    })
}

/// Base system, point, and perturbation parameters of a local count.
#[derive(Clone, Debug)]
pub struct PerturbationExperiment {
    pub system: Vec<Polynomial<Q>>,
    pub point: Vec<Q>,
    /// Multiplicity of `point` in the base system.
    pub r: usize,
    pub eps: f64,
    pub delta: f64,
    pub trials: usize,
    pub seed: u64,
    /// Cluster separation and rank tolerance of the eigen-decomposition.
    pub gap: f64,
    pub rank_tol: f64,
}

impl PerturbationExperiment {
    /// Validates the parameters and computes `r` from the base system.
    pub fn new(
        system: Vec<Polynomial<Q>>,
        point: Vec<Q>,
        eps: f64,
        delta: f64,
        trials: usize,
        seed: u64,
    ) -> Result<Self> {
        let n = system.first().map_or(0, Polynomial::nvars);
        if system.is_empty() || point.len() != n {
            return Err(Error::InvalidInput(format!(
                "point has {} coordinates for a system in {n} variables",
                point.len()
            )));
        }
        if eps.is_nan() || eps <= 0.0 || delta.is_nan() || delta < 0.0 {
            return Err(Error::InvalidInput(
                "eps must be positive and delta non-negative".into(),
            ));
        }
        let translated: Vec<Polynomial<Q>> = system.iter().map(|g| g.translate(&point)).collect();
        let r = multiplicity_at_origin(&translated)?;
        Ok(PerturbationExperiment {
            system,
            point,
            r,
            eps,
            delta,
            trials,
            seed,
            gap: DEFAULT_GAP,
            rank_tol: DEFAULT_RANK_TOL,
        })
    }

    pub fn nvars(&self) -> usize {
        self.point.len()
    }
}

/// Outcome of one perturbed system.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub index: usize,
    /// Degenerate samples discarded before this one.
    pub resamples: usize,
    /// All zeros, in the original coordinates.
    pub zeros: Vec<ZeroWithMultiplicity>,
    /// Indices into `zeros` lying in the polydisc around the point.
    pub inside: Vec<usize>,
    pub sum_inside: usize,
    pub global_sum: usize,
    pub dimension: usize,
}

impl TrialResult {
    pub fn conserved(&self) -> bool {
        self.global_sum == self.dimension
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountReport {
    pub point: Vec<Complex64>,
    pub r: usize,
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
    pub trials: Vec<TrialResult>,
    pub resamples: usize,
    pub verdict: Verdict,
}

impl CountReport {
    pub fn conserved(&self) -> usize {
        self.trials.iter().filter(|t| t.conserved()).count()
    }

    pub fn counted_r(&self) -> usize {
        self.trials.iter().filter(|t| t.sum_inside == self.r).count()
    }
}

fn perturb(g: &[Polynomial<QI>], delta: &Q, rng: &mut impl Rng) -> Vec<Polynomial<QI>> {
    let k = Q::int(LATTICE);
    g.iter()
        .map(|p| {
            let mut out = p.clone();
            for m in Monomial::all_up_to_degree(p.nvars(), p.total_degree().unwrap_or(0)) {
                let (a, b) = lattice_disc(rng);
                let c = QI::new(
                    Q::int(a).mul(delta).div(&k).expect("nonzero"),
                    Q::int(b).mul(delta).div(&k).expect("nonzero"),
                );
                out.add_term(m, &c);
            }
            out
        })
        .collect()
}

/// Zeros and quotient dimension of an exact zero-dimensional system;
/// `None` when the system is not zero-dimensional.
fn solve_exact(
    g: &[Polynomial<QI>],
    opts: &StickelbergerOptions,
) -> Result<Option<(Vec<ZeroWithMultiplicity>, usize)>> {
    let gb = groebner_untracked(g, MonomialOrder::GRevLex)?;
    if gb.is_unit_ideal() {
        return Ok(None);
    }
    match quotient_staircase(&gb) {
        Err(Error::NotZeroDimensional) => return Ok(None),
        Err(e) => return Err(e),
        Ok(_) => {}
    }
    let bb = from_groebner(&gb)?;
    let zeros = stickelberger_decompose(&bb, opts)?;
    Ok(Some((zeros, bb.dim())))
}

fn in_polydisc(z: &[Complex64], eps: f64) -> bool {
    z.iter().all(|c| c.norm() < eps)
}

/// Seeded perturbation trials counting zeros near `E.point`; PASS when
/// every trial finds multiplicity `r` in the polydisc and the global
/// multiplicities add up to the quotient dimension.
pub fn local_bezout_count(e: &PerturbationExperiment) -> Result<CountReport> {
    let translated: Vec<Polynomial<QI>> = e
        .system
        .iter()
        .map(|g| g.translate(&e.point).map_coeffs(&(), |c| QI::real(c.clone())))
        .collect();
    let point: Vec<Complex64> = e.point.iter().map(ToComplex::to_c64).collect();
    let delta = if e.delta == 0.0 {
        Q::int(0)
    } else {
        Q::approximate_f64(e.delta)
            .ok_or_else(|| Error::InvalidInput(format!("delta {} is not representable", e.delta)))?
    };
    let budget = RESAMPLE_FACTOR * e.trials.max(1);

    let results: Vec<Result<TrialResult>> = (0..e.trials)
        .into_par_iter()
        .map(|index| {
            let mut rng = rng_for(e.seed, index as u64);
            let mut resamples = 0;
            loop {
                let g = perturb(&translated, &delta, &mut rng);
                let opts = StickelbergerOptions {
                    seed: rng.next_u64(),
                    gap: e.gap,
                    rank_tol: e.rank_tol,
                    ..StickelbergerOptions::default()
                };
                if let Some((local, dimension)) = solve_exact(&g, &opts)? {
                    let inside: Vec<usize> = (0..local.len())
                        .filter(|&k| in_polydisc(&local[k].point, e.eps))
                        .collect();
                    let sum_inside = inside.iter().map(|&k| local[k].multiplicity).sum();
                    let global_sum = local.iter().map(|z| z.multiplicity).sum();
                    let zeros = local
                        .into_iter()
                        .map(|z| ZeroWithMultiplicity {
                            point: z.point.iter().zip(&point).map(|(a, b)| a + b).collect(),
                            multiplicity: z.multiplicity,
                        })
                        .collect();
                    return Ok(TrialResult {
                        index,
                        resamples,
                        zeros,
                        inside,
                        sum_inside,
                        global_sum,
                        dimension,
                    });
                }
                resamples += 1;
                if resamples > budget {
                    return Err(Error::DegenerateSystem {
                        failures: resamples,
                        budget,
                    });
                }
            }
        })
        .collect();
    let trials: Vec<TrialResult> = results.into_iter().collect::<Result<_>>()?;
    let resamples: usize = trials.iter().map(|t| t.resamples).sum();
    if resamples > budget {
        return Err(Error::DegenerateSystem {
            failures: resamples,
            budget,
        });
    }
    let pass = trials.iter().all(|t| t.sum_inside == e.r && t.conserved());
    Ok(CountReport {
        point,
        r: e.r,
        eps: e.eps,
        delta: e.delta,
        seed: e.seed,
        trials,
        resamples,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
    })
}

/// Coefficients `μ_1..μ_k` of `∏ (T − ξ_i)` over the cluster, with multiplicity.
pub fn cluster_charpoly(values: &[(Complex64, usize)]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &(z, mult) in values {
        for _ in 0..mult {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (j, cj) in c.iter().enumerate() {
                next[j] += cj;
                next[j + 1] -= cj * z;
            }
            c = next;
        }
    }
    c.split_off(1)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `|μ_j| ≤ C(r, j)·ε^j` for the in-disc cluster of one trial, coordinate `i`
/// taken relative to the point.
pub fn cluster_charpoly_bound(report: &CountReport, trial: usize, i: usize) -> bool {
    let t = &report.trials[trial];
    let values: Vec<(Complex64, usize)> = t
        .inside
        .iter()
        .map(|&k| (t.zeros[k].point[i] - report.point[i], t.zeros[k].multiplicity))
        .collect();
    let r = t.sum_inside;
    cluster_charpoly(&values)
        .iter()
        .enumerate()
        .all(|(j, mu)| mu.norm() <= binomial(r, j + 1) * report.eps.powi(j as i32 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{parse_polynomial, VarTable};

    fn sys(n: usize, lines: &[&str]) -> Vec<Polynomial<Q>> {
        let vars = VarTable::new(n, 0);
        lines.iter().map(|l| parse_polynomial(l, &vars, 1).unwrap()).collect()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn univariate_cubic() {
        let rep = univariate_continuity(&[c(1.0), c(-1.0), c(0.0), c(0.0)], 0.3, 1e-6, 50, 7).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        let mut mults: Vec<usize> = rep.centers.iter().map(|z| z.multiplicity).collect();
        mults.sort_unstable();
        assert_eq!(mults, vec![1, 2]);
    }

    #[test]
    fn univariate_linear_and_square() {
        let rep = univariate_continuity(&[c(1.0), c(-0.5)], 0.1, 1e-3, 10, 1).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        let rep = univariate_continuity(&[c(1.0), c(0.0), c(0.0)], 0.05, 1e-4, 20, 2).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        for t in &rep.trials {
            assert!(t.roots.iter().all(|z| z.norm() < 1e-2));
        }
    }

    #[test]
    fn univariate_overlap() {
        let r = univariate_continuity(&[c(1.0), c(-1.0), c(0.0)], 0.6, 1e-6, 1, 0);
        assert!(matches!(r, Err(Error::DiscsOverlap { .. })));
    }

    #[test]
    fn bezout_two_squares() {
        let e = PerturbationExperiment::new(sys(2, &["x^2", "y^2"]), vec![Q::int(0); 2], 0.1, 1e-4, 10, 3).unwrap();
        assert_eq!(e.r, 4);
        let rep = local_bezout_count(&e).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        for t in 0..rep.trials.len() {
            assert!(cluster_charpoly_bound(&rep, t, 0) && cluster_charpoly_bound(&rep, t, 1));
        }
    }

    #[test]
    fn bezout_excludes_far_root() {
        let e = PerturbationExperiment::new(sys(1, &["x^2 - x^3"]), vec![Q::int(0)], 0.1, 1e-6, 10, 4).unwrap();
        assert_eq!(e.r, 2);
        let rep = local_bezout_count(&e).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.trials.iter().all(|t| t.global_sum == 3));
    }

    #[test]
    fn bezout_unperturbed_and_shifted() {
        let e = PerturbationExperiment::new(sys(2, &["x^2 - y^3", "y^2"]), vec![Q::int(0); 2], 0.2, 0.0, 1, 0).unwrap();
        let rep = local_bezout_count(&e).unwrap();
        assert_eq!(rep.trials[0].zeros.len(), 1);
        assert_eq!(rep.trials[0].sum_inside, 4);

        let e = PerturbationExperiment::new(sys(1, &["x^2 - x^3"]), vec![Q::int(1)], 0.1, 1e-6, 5, 0).unwrap();
        assert_eq!(e.r, 1);
        assert_eq!(local_bezout_count(&e).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn split_square_roots_are_simple() {
        let e = PerturbationExperiment::new(
            sys(2, &["x^2 - 1/10000", "y^2 - 1/10000"]),
            vec![Q::int(0); 2],
            0.1,
            0.0,
            1,
            0,
        );
        // The origin is not a zero here; count around it through the shifted cusp instead.
        assert!(e.is_err());
        let e = PerturbationExperiment::new(sys(2, &["x^2", "y^2"]), vec![Q::int(0); 2], 0.1, 1e-4, 20, 5).unwrap();
        let rep = local_bezout_count(&e).unwrap();
        for t in &rep.trials {
            assert_eq!(t.zeros.len(), 4);
            assert!(t.zeros.iter().all(|z| z.multiplicity == 1));
        }

        let e = PerturbationExperiment::new(sys(1, &["x^2 - x^3"]), vec![Q::int(0)], 0.1, 1e-6, 5, 6).unwrap();
        let rep = local_bezout_count(&e).unwrap();
        for t in &rep.trials {
            assert_eq!(t.inside.len(), 2);
            let far: Vec<_> = (0..t.zeros.len()).filter(|k| !t.inside.contains(k)).collect();
            assert_eq!(far.len(), 1);
            assert!((t.zeros[far[0]].point[0] - c(1.0)).norm() < 1e-3);
        }
    }

    #[test]
    fn bad_point() {
        let r = PerturbationExperiment::new(sys(1, &["x^2 - x^3"]), vec![Q::int(2)], 0.1, 1e-6, 5, 0);
        assert!(matches!(r, Err(Error::OriginNotAZero { .. })));
    }

    #[test]
    fn charpoly_examples() {
        let mu = cluster_charpoly(&[(c(1e-2), 1), (c(-1e-2), 1)]);
        assert!(mu[0].norm() < 1e-18);
        assert!((mu[1] - c(-1e-4)).norm() < 1e-18);
        assert_eq!(cluster_charpoly(&[(c(0.0), 3)]), vec![c(0.0); 3]);
    }

    #[test]
    fn deterministic_across_runs() {
        let e = PerturbationExperiment::new(sys(2, &["x^2", "y^2"]), vec![Q::int(0); 2], 0.1, 1e-4, 4, 11).unwrap();
        assert_eq!(local_bezout_count(&e).unwrap(), local_bezout_count(&e).unwrap());
    }
}

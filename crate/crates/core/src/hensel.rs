//! Lifting a residual border basis along a deformation with coefficients in
//! truncated power series, order by order in the maximal ideal.
//!
//! When the residual quotient has points away from the origin, the system is
//! augmented with `E(X)(T + 1) − 1`, `E` the idempotent of the local factor,
//! and the lift runs in `n + 1` variables; the `X` rules are read off at the end.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::borderbasis::{commutation_check, from_groebner, BorderBasis, Commutation};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, quotient_staircase};
use crate::localzero::{split_idempotent, LocalFactorReport};
use crate::matrix::Matrix;
use crate::polynomials::{Monomial, MonomialOrder, OrderIdeal, PolyCtx, Polynomial};
use crate::scalars::{Field, Ring, Series, SeriesCtx, Valuation};

/// Polynomial system over `k[[v]] / (v)^{N+1}`.
#[derive(Clone, Debug)]
pub struct DeformedSystem<K: Field> {
    pub generators: Vec<Polynomial<Series<K>>>,
    pub nvars: usize,
    pub series_ctx: SeriesCtx<K>,
}

impl<K: Field> DeformedSystem<K> {
    /// Split polynomials in `n + m` variables (deformation variables last).
    pub fn from_flat(
        flat: &[Polynomial<K>],
        nvars: usize,
        ndeform: usize,
        precision: u32,
        field: K::Ctx,
    ) -> Result<Self> {
        let sctx = SeriesCtx::new(ndeform, precision, field);
        let mut generators = Vec::with_capacity(flat.len());
        for p in flat {
            if p.nvars() != nvars + ndeform {
                return Err(Error::ShapeMismatch(format!(
                    "polynomial in {} variables, expected {}",
                    p.nvars(),
                    nvars + ndeform
                )));
            }
            let mut split: BTreeMap<Monomial, Vec<(Monomial, K)>> = BTreeMap::new();
            for (m, c) in p.terms() {
                let (x, v) = m.exponents().split_at(nvars);
                split
                    .entry(Monomial::new(x.to_vec()))
                    .or_default()
                    .push((Monomial::new(v.to_vec()), c.clone()));
            }
            let g = Polynomial::from_terms(
                nvars,
                &sctx,
                split
                    .into_iter()
                    .map(|(x, terms)| (x, Series::from_terms(&sctx, terms))),
            );
            generators.push(g);
        }
        let sys = DeformedSystem {
            generators,
            nvars,
            series_ctx: sctx,
        };
        sys.check_origin()?;
        Ok(sys)
    }

    /// System without deformation (all coefficients constant).
    pub fn constant(f: &[Polynomial<K>], ndeform: usize, precision: u32) -> Result<Self> {
        let nvars = f.first().map_or(0, Polynomial::nvars);
        let field = f
            .first()
            .map(|p| p.coeff_ctx().clone())
            .ok_or_else(|| Error::InvalidInput("empty system".into()))?;
        let flat: Vec<Polynomial<K>> = f.iter().map(|p| p.extend(ndeform)).collect();
        DeformedSystem::from_flat(&flat, nvars, ndeform, precision, field)
    }

    fn check_origin(&self) -> Result<()> {
        for (index, g) in self.generators.iter().enumerate() {
            if !g.constant_term().constant_term().is_zero() {
                return Err(Error::OriginNotAZero { index });
            }
        }
        Ok(())
    }

    pub fn precision(&self) -> u32 {
        self.series_ctx.precision
    }

    pub fn ndeform(&self) -> usize {
        self.series_ctx.nvars
    }

    /// Constant terms in the deformation variables.
    pub fn residual(&self) -> Vec<Polynomial<K>> {
        let f = self.series_ctx.field.clone();
        self.generators.iter().map(|g| residual_poly(g, &f)).collect()
    }
}

fn residual_poly<K: Field>(p: &Polynomial<Series<K>>, field: &K::Ctx) -> Polynomial<K> {
    p.map_coeffs(field, Series::constant_term)
}

fn lift_poly<K: Field>(p: &Polynomial<K>, sctx: &SeriesCtx<K>) -> Polynomial<Series<K>> {
    p.map_coeffs(sctx, |c| Series::constant(sctx, c.clone()))
}

fn truncate_poly<K: Field>(p: &Polynomial<Series<K>>, sctx: &SeriesCtx<K>) -> Polynomial<Series<K>> {
    p.map_coeffs(sctx, |c| c.with_precision(sctx.precision))
}

/// Residual border basis of the local factor at the origin.
#[derive(Clone, Debug)]
pub struct LocalResidual<K: Field> {
    /// Certified border basis of `k[X] / (F̄ + m^N)`, `N` the nil index.
    pub basis: BorderBasis<K>,
    pub report: LocalFactorReport<K>,
}

impl<K: Field> LocalResidual<K> {
    pub fn is_local(&self) -> bool {
        self.report.r == self.report.basis.dim()
    }
}

/// Border basis of the local factor, read off the projected multiplication
/// maps and cross-checked against the truncated Gröbner basis.
pub fn localize_residual<K: Field>(fbar: &[Polynomial<K>]) -> Result<LocalResidual<K>> {
    let report = split_idempotent(fbar)?;
    let nvars = report.basis.nvars();
    let ctx = report.basis.ctx().clone();
    let mut gens = fbar.to_vec();
    gens.extend(
        Monomial::all_of_degree(nvars, report.nil_index)
            .into_iter()
            .map(|m| Polynomial::monomial(m, K::one(&ctx))),
    );
    let truncated = from_groebner(&buchberger(&gens, MonomialOrder::GRevLex)?)?;
    let oi = truncated.order_ideal().clone();
    if oi.len() != report.r {
        return Err(Error::InternalInvariant(format!(
            "truncated quotient has dimension {} but the local factor has {}",
            oi.len(),
            report.r
        )));
    }

    // e·x^α for α in the local order ideal form a basis of the image of e.
    let mut nf = report.basis.normal_former()?;
    let project = |v: Vec<K>| report.projector.mul_vec(&v);
    let cols: Vec<Vec<K>> = oi.monomials().iter().map(|a| project(nf.monomial(a))).collect();
    let frame = Matrix::from_columns(&cols, report.basis.dim(), &ctx);
    let mut rules = Vec::with_capacity(oi.border().len());
    for beta in oi.border() {
        let target = project(nf.monomial(beta));
        let row = frame
            .solve(&target)
            .ok_or_else(|| Error::InternalInvariant(format!("e*{beta} is outside the local factor")))?;
        rules.push(row);
    }
    let basis = BorderBasis::new(oi, rules, &ctx)?;
    if basis.rules() != truncated.rules() {
        return Err(Error::InternalInvariant(
            "projected rules disagree with the truncated Gröbner basis".into(),
        ));
    }
    Ok(LocalResidual { basis, report })
}

/// Tie-break for the border factor when several split off a term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DivisionStrategy {
    #[default]
    LexSmallest,
    LexLargest,
}

/// `H = Σ Q_{β'} h_{β'} + R` with `R` supported on `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisionResult<R: Ring> {
    /// Quotient per border monomial (border enumeration order).
    pub quotients: Vec<Polynomial<R>>,
    /// Remainder coordinates on `B`.
    pub remainder: Vec<R>,
}

/// Divide `h` by the rewriting rules `x^β → Σ u_{β,α} x^α`.
///
/// The term of largest index (ties: graded-lex largest) is rewritten as
/// `t'' · x^{β'}` with `deg t'' = index − 1`; border terms use their own
/// rule. Each step strictly lowers the index of what it introduces, so the
/// process terminates and the remainder is linear in `h`.
pub fn divide_by_candidate<R: Ring>(
    h: &Polynomial<R>,
    oi: &OrderIdeal,
    rules: &[Vec<R>],
    strategy: DivisionStrategy,
) -> DivisionResult<R> {
    let ctx = h.coeff_ctx().clone();
    let n = oi.nvars();
    let mut quotients = vec![Polynomial::zero(n, &ctx); oi.border().len()];
    let mut remainder = vec![R::zero(&ctx); oi.len()];
    let mut work = h.clone();
    loop {
        let mut pick: Option<(u32, Monomial)> = None;
        for m in work.monomials() {
            let idx = oi.index_of(m);
            if idx == 0 {
                continue;
            }
            // Terms iterate in graded-lex ascending order, so `>=` keeps the largest.
            if pick.as_ref().is_none_or(|(best, _)| idx >= *best) {
                pick = Some((idx, m.clone()));
            }
        }
        let Some((_, t)) = pick else { break };
        let c = work.coeff(&t);
        let mut facs = oi.border_factorizations(&t);
        let (t2, beta) = match strategy {
            DivisionStrategy::LexSmallest => facs.swap_remove(0),
            DivisionStrategy::LexLargest => facs.pop().expect("nonempty"),
        };
        let k = oi.border_position(&beta).expect("border");
        quotients[k].add_term(t2.clone(), &c);
        work.add_term(t.clone(), &c.neg());
        for (alpha, u) in oi.monomials().iter().zip(&rules[k]) {
            if !u.is_zero() {
                work.add_term(alpha.mul(&t2), &c.mul(u));
            }
        }
    }
    for (m, c) in work.terms() {
        remainder[oi.position(m).expect("index zero means in B")] = c.clone();
    }
    DivisionResult { quotients, remainder }
}

/// `H_β = Σ_i p_{i,β} F_i` with cofactors certifying `h⁰_β ∈ ⟨F̄⟩`.
pub fn build_h<K: Field>(
    generators: &[Polynomial<Series<K>>],
    bb0: &BorderBasis<K>,
    sctx: &SeriesCtx<K>,
) -> Result<Vec<Polynomial<Series<K>>>> {
    let residual: Vec<Polynomial<K>> = generators.iter().map(|g| residual_poly(g, &sctx.field)).collect();
    let gb = buchberger(&residual, MonomialOrder::GRevLex)?;
    let n = bb0.nvars();
    let mut out = Vec::with_capacity(bb0.order_ideal().border().len());
    for (k, beta) in bb0.order_ideal().border().iter().enumerate() {
        let h0 = bb0.rule_polynomial(k);
        let cert = gb.certificate(&h0).ok_or_else(|| Error::ResidualMismatch {
            monomial: beta.to_string(),
        })?;
        let mut h = Polynomial::zero(n, sctx);
        for (c, g) in cert.iter().zip(generators) {
            h = h.add(&lift_poly(c, sctx).mul(g));
        }
        out.push(h);
    }
    Ok(out)
}

/// Lifted border basis and the data of the division identity.
#[derive(Clone, Debug)]
pub struct LiftedBorderBasis<K: Field> {
    /// Lifted rules in the original variables.
    pub base: BorderBasis<Series<K>>,
    /// Residual border basis of the local factor.
    pub residual: BorderBasis<K>,
    /// Basis that was actually lifted (augmented by `T` when non-local).
    pub working: BorderBasis<Series<K>>,
    /// `Q_{β,β'}` of `H_β = Σ Q_{β,β'} h_{β'}`.
    pub quotients: Matrix<Polynomial<Series<K>>>,
    /// `det Q`.
    pub det_s: Polynomial<Series<K>>,
    pub precision: u32,
    pub r: usize,
    /// Idempotent used for the augmentation, if any.
    pub idempotent: Option<Polynomial<K>>,
    /// Valuation of the residual before each order's correction.
    pub valuation_trace: Vec<Valuation>,
    /// Every `H_β` divides with zero remainder.
    pub quotient_remainders_vanish: bool,
}

impl<K: Field> LiftedBorderBasis<K> {
    pub fn is_augmented(&self) -> bool {
        self.idempotent.is_some()
    }

    /// The lifted system in which `working` lives.
    pub fn nvars(&self) -> usize {
        self.base.nvars()
    }
}

/// Order ideal `B × {T^0}` in `n + 1` variables.
fn augment_order_ideal(oi: &OrderIdeal) -> OrderIdeal {
    OrderIdeal::new(oi.nvars() + 1, oi.monomials().iter().map(|m| m.extend(1))).expect("extension of an order ideal")
}

/// Residual basis with `T · x^α → 0` added.
fn augment_basis<K: Field>(bb0: &BorderBasis<K>) -> BorderBasis<K> {
    let oi = augment_order_ideal(bb0.order_ideal());
    let ctx = bb0.ctx().clone();
    let n = bb0.nvars();
    let rules = oi
        .border()
        .iter()
        .map(|beta| {
            if beta.exponents()[n] == 0 {
                let orig = Monomial::new(beta.exponents()[..n].to_vec());
                bb0.rule(&orig).expect("border of the extension").to_vec()
            } else {
                vec![K::zero(&ctx); oi.len()]
            }
        })
        .collect();
    BorderBasis::new(oi, rules, &ctx).expect("Λ_T = 0 commutes")
}

/// System and residual basis the lift runs on: the original ones when the
/// residual is local, otherwise both augmented by `T`.
struct WorkingSystem<K: Field> {
    generators: Vec<Polynomial<Series<K>>>,
    bb0: BorderBasis<K>,
    idempotent: Option<Polynomial<K>>,
}

fn working_system<K: Field>(f: &DeformedSystem<K>, local: &LocalResidual<K>) -> Result<WorkingSystem<K>> {
    if local.is_local() {
        return Ok(WorkingSystem {
            generators: f.generators.clone(),
            bb0: local.basis.clone(),
            idempotent: None,
        });
    }
    let n = f.nvars;
    let gb = buchberger(&f.residual(), MonomialOrder::GRevLex)?;
    quotient_staircase(&gb)?;
    let e = local.report.idempotent();
    let ctx = e.coeff_ctx().clone();
    let t = Polynomial::var(n + 1, n, &ctx);
    let w = e
        .extend(1)
        .mul(&t.add(&Polynomial::one(n + 1, &ctx)))
        .sub(&Polynomial::one(n + 1, &ctx));
    let mut generators: Vec<Polynomial<Series<K>>> = f.generators.iter().map(|g| g.extend(1)).collect();
    generators.push(lift_poly(&w, &f.series_ctx));
    Ok(WorkingSystem {
        generators,
        bb0: augment_basis(&local.basis),
        idempotent: Some(e),
    })
}

/// Lift `local` along `f` to precision `f.precision()`.
pub fn lift_border_basis<K: Field>(
    f: &DeformedSystem<K>,
    local: &LocalResidual<K>,
    strategy: DivisionStrategy,
) -> Result<LiftedBorderBasis<K>> {
    let sctx = f.series_ctx.clone();
    let ws = working_system(f, local)?;
    let (generators, bb0) = (&ws.generators, &ws.bb0);

    let hs = build_h(generators, bb0, &sctx)?;
    let oi = bb0.order_ideal().clone();
    let nb = oi.len();
    let nd = oi.border().len();
    let size = nb * nd;

    let jac = residual_jacobian(&hs, bb0, &sctx, strategy);
    let rank = jac.rank();
    if rank < size {
        return Err(Error::NotSimpleZero { rank, size });
    }
    let jinv = jac.inverse().expect("full rank");

    let mut u: Vec<Vec<Series<K>>> = bb0
        .rules()
        .iter()
        .map(|row| row.iter().map(|c| Series::constant(&sctx, c.clone())).collect())
        .collect();
    let precision = sctx.precision;
    let mut trace = Vec::with_capacity(precision as usize);
    for d in 1..=precision {
        let cd = sctx.with_precision(d);
        let rem = remainders(&hs, &oi, &u, &cd, strategy);
        let val = rem
            .iter()
            .flatten()
            .map(Series::valuation)
            .min_by_key(Valuation::lower_bound)
            .unwrap_or(Valuation::AtLeast(d + 1));
        trace.push(val);
        if !val.is_at_least(d) {
            return Err(Error::InternalInvariant(format!(
                "residual at order {d} has valuation {val}"
            )));
        }
        // Group the degree-d parts by deformation monomial.
        let mut parts: BTreeMap<Monomial, Vec<K>> = BTreeMap::new();
        for (idx, s) in rem.iter().flatten().enumerate() {
            for (mono, c) in s.homogeneous_part(d) {
                parts.entry(mono).or_insert_with(|| vec![K::zero(&sctx.field); size])[idx] = c;
            }
        }
        for (mono, rvec) in parts {
            let delta = jinv.mul_vec(&rvec);
            for (idx, dv) in delta.iter().enumerate() {
                if dv.is_zero() {
                    continue;
                }
                let (b, a) = (idx / nb, idx % nb);
                u[b][a] = u[b][a].sub(&Series::term(&sctx, mono.clone(), dv.clone()));
            }
        }
    }

    let lifted = assemble(f, local, ws.idempotent, &hs, u, trace, strategy)?;
    if lifted.quotient_remainders_vanish {
        Ok(lifted)
    } else {
        Err(Error::InternalInvariant("lift did not close at full precision".into()))
    }
}

/// Rebuild the division data of a lift from given working rules (as
/// produced by [`lift_border_basis`] or read back from a report).
pub fn assemble_lift<K: Field>(
    f: &DeformedSystem<K>,
    local: &LocalResidual<K>,
    working_rules: Vec<Vec<Series<K>>>,
    strategy: DivisionStrategy,
) -> Result<LiftedBorderBasis<K>> {
    let ws = working_system(f, local)?;
    let oi = ws.bb0.order_ideal();
    if working_rules.len() != oi.border().len() || working_rules.iter().any(|r| r.len() != oi.len()) {
        return Err(Error::ShapeMismatch(format!(
            "expected {} rules of length {}",
            oi.border().len(),
            oi.len()
        )));
    }
    let hs = build_h(&ws.generators, &ws.bb0, &f.series_ctx)?;
    assemble(f, local, ws.idempotent, &hs, working_rules, Vec::new(), strategy)
}

fn assemble<K: Field>(
    f: &DeformedSystem<K>,
    local: &LocalResidual<K>,
    idempotent: Option<Polynomial<K>>,
    hs: &[Polynomial<Series<K>>],
    u: Vec<Vec<Series<K>>>,
    valuation_trace: Vec<Valuation>,
    strategy: DivisionStrategy,
) -> Result<LiftedBorderBasis<K>> {
    let sctx = &f.series_ctx;
    let oi = if idempotent.is_some() {
        augment_order_ideal(local.basis.order_ideal())
    } else {
        local.basis.order_ideal().clone()
    };
    let finals: Vec<DivisionResult<Series<K>>> = hs
        .par_iter()
        .map(|h| divide_by_candidate(h, &oi, &u, strategy))
        .collect();
    let quotient_remainders_vanish = finals.iter().all(|r| r.remainder.iter().all(Ring::is_zero));
    let pctx = PolyCtx::new(oi.nvars(), sctx.clone());
    let qrows: Vec<Vec<Polynomial<Series<K>>>> = finals.into_iter().map(|r| r.quotients).collect();
    let quotients = Matrix::from_rows(qrows, &pctx);
    let det_s = quotients.det();

    let mut working = BorderBasis::candidate(oi, u, sctx)?;
    working.certify();
    let base = if idempotent.is_some() {
        project_rules(&working, f.nvars, sctx)?
    } else {
        working.clone()
    };
    Ok(LiftedBorderBasis {
        base,
        residual: local.basis.clone(),
        working,
        quotients,
        det_s,
        precision: sctx.precision,
        r: local.report.r,
        idempotent,
        valuation_trace,
        quotient_remainders_vanish,
    })
}

/// Rules of the `X` border from a basis in `(X, T)`.
fn project_rules<K: Field>(
    working: &BorderBasis<Series<K>>,
    n: usize,
    sctx: &SeriesCtx<K>,
) -> Result<BorderBasis<Series<K>>> {
    let oi = OrderIdeal::new(
        n,
        working
            .order_ideal()
            .monomials()
            .iter()
            .map(|m| Monomial::new(m.exponents()[..n].to_vec())),
    )?;
    let rules = oi
        .border()
        .iter()
        .map(|beta| {
            working
                .rule(&beta.extend(1))
                .expect("X border is part of the extended border")
                .to_vec()
        })
        .collect();
    let mut bb = BorderBasis::candidate(oi, rules, sctx)?;
    bb.certify();
    Ok(bb)
}

fn remainders<K: Field>(
    hs: &[Polynomial<Series<K>>],
    oi: &OrderIdeal,
    u: &[Vec<Series<K>>],
    cd: &SeriesCtx<K>,
    strategy: DivisionStrategy,
) -> Vec<Vec<Series<K>>> {
    let ud: Vec<Vec<Series<K>>> = u
        .iter()
        .map(|row| row.iter().map(|c| c.with_precision(cd.precision)).collect())
        .collect();
    hs.par_iter()
        .map(|h| divide_by_candidate(&truncate_poly(h, cd), oi, &ud, strategy).remainder)
        .collect()
}

/// Exact Jacobian of the residual remainder map at `u⁰`, one dual-number
/// division pass per unknown `u_{β,α}`.
fn residual_jacobian<K: Field>(
    hs: &[Polynomial<Series<K>>],
    bb0: &BorderBasis<K>,
    sctx: &SeriesCtx<K>,
    strategy: DivisionStrategy,
) -> Matrix<K> {
    let oi = bb0.order_ideal();
    let nb = oi.len();
    let nd = oi.border().len();
    let dual = SeriesCtx::new(1, 1, sctx.field.clone());
    let eps = Monomial::new(vec![1]);
    let hbar: Vec<Polynomial<Series<K>>> = hs
        .iter()
        .map(|h| lift_poly(&residual_poly(h, &sctx.field), &dual))
        .collect();
    let base: Vec<Vec<Series<K>>> = bb0
        .rules()
        .iter()
        .map(|row| row.iter().map(|c| Series::constant(&dual, c.clone())).collect())
        .collect();
    let columns: Vec<Vec<K>> = (0..nb * nd)
        .into_par_iter()
        .map(|idx| {
            let mut u = base.clone();
            let (b, a) = (idx / nb, idx % nb);
            u[b][a] = u[b][a].add(&Series::var(&dual, 0));
            hbar.iter()
                .flat_map(|h| divide_by_candidate(h, oi, &u, strategy).remainder)
                .map(|s| s.coeff(&eps))
                .collect()
        })
        .collect();
    Matrix::from_columns(&columns, nb * nd, &sctx.field)
}

/// Pass/fail of the five lift checks.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    /// Every deformed generator has normal form zero.
    pub generators_reduce: bool,
    /// Lifted multiplication matrices commute.
    pub commutation: bool,
    pub commutation_witness: Option<String>,
    /// Residual of the lifted rules equals the residual basis.
    pub residual_matches: bool,
    /// Every `H_β` divides exactly and `det Q ∈ 1 + m[X]`.
    pub det_unit: bool,
    /// `B` maps onto a free basis of rank `r`.
    pub rank: bool,
    pub precision: u32,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.generators_reduce && self.commutation && self.residual_matches && self.det_unit && self.rank
    }
}

pub fn verify_lift<K: Field>(l: &LiftedBorderBasis<K>, f: &DeformedSystem<K>) -> VerificationReport {
    let sctx = f.series_ctx.clone();
    let mm = l.base.multiplication_matrices();
    let (commutation, commutation_witness) = match commutation_check(&mm) {
        Commutation::Certified => (true, None),
        Commutation::Witness { i, j, row, col, entry } => (
            false,
            Some(format!("[Λ_{i}, Λ_{j}] has entry ({row}, {col}) = {entry}")),
        ),
    };
    let mut certified = l.base.clone();
    certified.certify();
    let generators_reduce = match certified.normal_former() {
        Ok(mut nf) => f.generators.iter().all(|g| nf.normal_form(g).iter().all(Ring::is_zero)),
        Err(_) => false,
    };
    let residual = l.base.map(&sctx.field, Series::constant_term);
    let residual_matches = residual.order_ideal() == l.residual.order_ideal() && residual.rules() == l.residual.rules();
    let det_unit = l.quotient_remainders_vanish && {
        let one = Monomial::one(l.det_s.nvars());
        l.det_s.terms().all(|(m, c)| {
            let c0 = c.constant_term();
            if *m == one {
                c0.is_one()
            } else {
                c0.is_zero()
            }
        }) && l.det_s.coeff(&one).is_unit()
    };
    let rank = match certified.normal_former() {
        Ok(mut nf) => {
            l.base.dim() == l.r
                && l.base.order_ideal().monomials().iter().enumerate().all(|(k, a)| {
                    nf.monomial(a)
                        .iter()
                        .enumerate()
                        .all(|(j, c)| if j == k { c.is_one() } else { c.is_zero() })
                })
        }
        Err(_) => false,
    };
    VerificationReport {
        generators_reduce,
        commutation,
        commutation_witness,
        residual_matches,
        det_unit,
        rank,
        precision: l.precision,
    }
}

/// Characteristic polynomial of one lifted multiplication matrix.
#[derive(Clone, Debug)]
pub struct CharPolyReport<K: Field> {
    pub variable: usize,
    /// `μ_1..μ_r` of `T^r + Σ μ_j T^{r−j}`.
    pub coefficients: Vec<Series<K>>,
    /// Residual form is exactly `T^r`.
    pub residual_is_power: bool,
    pub valuations: Vec<Valuation>,
    /// Every `μ_j` lies in `m`.
    pub in_maximal_ideal: bool,
    /// Informational: `μ_j ∈ m^j` for all `j`.
    pub graded_bound: bool,
}

pub fn char_poly_diagnostics<K: Field>(l: &LiftedBorderBasis<K>) -> Vec<CharPolyReport<K>> {
    l.base
        .multiplication_matrices()
        .matrices
        .iter()
        .enumerate()
        .map(|(variable, m)| {
            let cp = m.charpoly();
            let coefficients: Vec<Series<K>> = cp[1..].to_vec();
            let valuations: Vec<Valuation> = coefficients.iter().map(Series::valuation).collect();
            CharPolyReport {
                variable,
                residual_is_power: coefficients.iter().all(|c| c.constant_term().is_zero()),
                in_maximal_ideal: valuations.iter().all(|v| v.is_at_least(1)),
                graded_bound: valuations.iter().enumerate().all(|(j, v)| v.is_at_least(j as u32 + 1)),
                coefficients,
                valuations,
            }
        })
        .collect()
}

/// Localize, then lift with the default division strategy.
pub fn lift<K: Field>(f: &DeformedSystem<K>) -> Result<LiftedBorderBasis<K>> {
    let local = localize_residual(&f.residual())?;
    lift_border_basis(f, &local, DivisionStrategy::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{parse_polynomial, VarTable};
    use crate::scalars::Q;

    fn deformed(n: usize, m: usize, prec: u32, lines: &[&str]) -> DeformedSystem<Q> {
        let vars = VarTable::new(n, m);
        let flat: Vec<Polynomial<Q>> = lines.iter().map(|l| parse_polynomial(l, &vars, 1).unwrap()).collect();
        DeformedSystem::from_flat(&flat, n, m, prec, ()).unwrap()
    }

    fn sys(n: usize, lines: &[&str]) -> Vec<Polynomial<Q>> {
        let vars = VarTable::new(n, 0);
        lines.iter().map(|l| parse_polynomial(l, &vars, 1).unwrap()).collect()
    }

    fn series(c: &SeriesCtx<Q>, coeffs: &[i64]) -> Series<Q> {
        Series::from_terms(
            c,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &a)| (Monomial::new(vec![k as u32]), Q::int(a))),
        )
    }

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn localize_examples() {
        let l = localize_residual(&sys(1, &["x^2 - x^3"])).unwrap();
        assert_eq!(l.basis.dim(), 2);
        assert!(l.basis.rules()[0].iter().all(Ring::is_zero));
        assert!(!l.is_local());

        let l = localize_residual(&sys(2, &["x^2", "y^2"])).unwrap();
        assert!(l.is_local());
        assert_eq!(l.basis.dim(), 4);

        let l = localize_residual(&sys(1, &["x*(x - 1)"])).unwrap();
        assert_eq!(l.basis.dim(), 1);
        assert!(l.basis.rules()[0][0].is_zero());
    }

    #[test]
    fn divide_examples() {
        let c = SeriesCtx::<Q>::new(2, 3, ());
        let (u0, u1) = (Series::var(&c, 0), Series::var(&c, 1));
        let oi = OrderIdeal::new(1, [m(&[0]), m(&[1])]).unwrap();
        let rules = vec![vec![u0.clone(), u1.clone()]];
        let x2 = Polynomial::monomial(m(&[2]), Series::one(&c));
        let r = divide_by_candidate(&x2, &oi, &rules, DivisionStrategy::default());
        assert_eq!(r.remainder, vec![u0.clone(), u1.clone()]);
        assert_eq!(r.quotients[0], Polynomial::one(1, &c));

        let x3 = Polynomial::monomial(m(&[3]), Series::one(&c));
        let r = divide_by_candidate(&x3, &oi, &rules, DivisionStrategy::default());
        assert_eq!(r.remainder, vec![u1.mul(&u0), u0.add(&u1.mul(&u1))]);
        let q = Polynomial::monomial(m(&[1]), Series::one(&c)).add(&Polynomial::constant(1, u1.clone()));
        assert_eq!(r.quotients[0], q);

        let inside = Polynomial::monomial(m(&[1]), u0.clone());
        let r = divide_by_candidate(&inside, &oi, &rules, DivisionStrategy::default());
        assert!(r.quotients[0].is_zero());
        assert_eq!(r.remainder, vec![Series::zero(&c), u0]);
    }

    #[test]
    fn reassembly_identity() {
        let f = deformed(2, 2, 4, &["x^2 - y^3 + v1", "y^2 + v2"]);
        let local = localize_residual(&f.residual()).unwrap();
        let lifted = lift_border_basis(&f, &local, DivisionStrategy::default()).unwrap();
        let hs = build_h(&f.generators, &local.basis, &f.series_ctx).unwrap();
        let oi = lifted.working.order_ideal();
        for h in &hs {
            for strategy in [DivisionStrategy::LexSmallest, DivisionStrategy::LexLargest] {
                let d = divide_by_candidate(h, oi, lifted.working.rules(), strategy);
                let mut acc = crate::borderbasis::from_coordinates(oi, &d.remainder, &f.series_ctx);
                for (k, q) in d.quotients.iter().enumerate() {
                    acc = acc.add(&q.mul(&lifted.working.rule_polynomial(k)));
                }
                assert_eq!(&acc, h);
            }
        }
    }

    #[test]
    fn build_h_certificate() {
        let f = deformed(2, 2, 3, &["x^2 - y^3 + v1", "y^2 + v2"]);
        let local = localize_residual(&f.residual()).unwrap();
        let hs = build_h(&f.generators, &local.basis, &f.series_ctx).unwrap();
        let k = local.basis.order_ideal().border_position(&m(&[2, 0])).unwrap();
        let y = Polynomial::var(2, 1, &f.series_ctx);
        assert_eq!(hs[k], f.generators[0].add(&y.mul(&f.generators[1])));

        let g = deformed(1, 1, 3, &["x^2 - v*x"]);
        let local = localize_residual(&g.residual()).unwrap();
        assert_eq!(
            build_h(&g.generators, &local.basis, &g.series_ctx).unwrap()[0],
            g.generators[0]
        );
    }

    #[test]
    fn residual_mismatch() {
        let f = deformed(1, 1, 3, &["x^2 + v"]);
        let oi = OrderIdeal::new(1, [m(&[0])]).unwrap();
        let bogus = BorderBasis::new(oi, vec![vec![Q::int(0)]], &()).unwrap();
        assert_eq!(
            build_h(&f.generators, &bogus, &f.series_ctx),
            Err(Error::ResidualMismatch { monomial: "x".into() })
        );
    }

    /// Fixed point of `u1 = u1² + u0`, `u0 = u1·u0 + v`, the rule
    /// `x² → u1·x + u0` that makes `x² − x³ − v` vanish. An error of degree
    /// `k` moves up one degree every two passes.
    fn cubic_oracle(c: &SeriesCtx<Q>) -> (Series<Q>, Series<Q>) {
        let v = Series::var(c, 0);
        let (mut u0, mut u1) = (Series::zero(c), Series::zero(c));
        for _ in 0..2 * (c.precision + 1) {
            let n1 = u1.mul(&u1).add(&u0);
            let n0 = u1.mul(&u0).add(&v);
            u0 = n0;
            u1 = n1;
        }
        (u0, u1)
    }

    #[test]
    fn golden_cubic_lift() {
        let f = deformed(1, 1, 8, &["x^2 - x^3 - v"]);
        let lifted = lift(&f).unwrap();
        assert!(lifted.is_augmented());
        let (u0, u1) = cubic_oracle(&f.series_ctx);
        let rule = lifted.base.rule(&m(&[2])).unwrap();
        assert_eq!(rule, &[u0.clone(), u1.clone()]);
        assert_eq!(u1, series(&f.series_ctx, &[0, 1, 2, 7, 30, 143, 728, 3876, 21318]));
        assert_eq!(u0, series(&f.series_ctx, &[0, 1, 1, 3, 12, 55, 273, 1428, 7752]));
        assert!(verify_lift(&lifted, &f).all_pass());
    }

    #[test]
    fn finite_lift() {
        let f = deformed(1, 1, 6, &["x^2 - v*x"]);
        let lifted = lift(&f).unwrap();
        let v = Series::var(&f.series_ctx, 0);
        assert_eq!(lifted.base.rule(&m(&[2])).unwrap(), &[Series::zero(&f.series_ctx), v]);
        assert!(verify_lift(&lifted, &f).all_pass());
        let cp = char_poly_diagnostics(&lifted);
        assert_eq!(cp[0].valuations, vec![Valuation::Finite(1), Valuation::AtLeast(7)]);
    }

    #[test]
    fn two_square_roots() {
        let f = deformed(2, 2, 5, &["x^2 + v1", "y^2 + v2"]);
        let lifted = lift(&f).unwrap();
        let c = &f.series_ctx;
        let (v1, v2) = (Series::var(c, 0), Series::var(c, 1));
        let z = Series::zero(c);
        let b = &lifted.base;
        let row = |e: &[u32]| b.rule(&m(e)).unwrap().to_vec();
        // basis order 1, y, x, xy
        assert_eq!(row(&[2, 0]), vec![v1.neg(), z.clone(), z.clone(), z.clone()]);
        assert_eq!(row(&[0, 2]), vec![v2.neg(), z.clone(), z.clone(), z.clone()]);
        assert_eq!(row(&[2, 1]), vec![z.clone(), v1.neg(), z.clone(), z.clone()]);
        assert_eq!(row(&[1, 2]), vec![z.clone(), z.clone(), v2.neg(), z.clone()]);
        assert!(verify_lift(&lifted, &f).all_pass());
    }

    #[test]
    fn quadratic_charpoly() {
        let f = deformed(1, 1, 4, &["x^2 + v"]);
        let lifted = lift(&f).unwrap();
        let cp = &char_poly_diagnostics(&lifted)[0];
        let v = Series::var(&f.series_ctx, 0);
        assert_eq!(cp.coefficients, vec![Series::zero(&f.series_ctx), v]);
        assert!(cp.residual_is_power && cp.in_maximal_ideal);
        assert_eq!(cp.valuations[1], Valuation::Finite(1));
    }

    #[test]
    fn undeformed_lift_is_nilpotent() {
        let f = DeformedSystem::constant(&sys(2, &["x^2 - y^3", "y^2"]), 1, 3).unwrap();
        let lifted = lift(&f).unwrap();
        for cp in char_poly_diagnostics(&lifted) {
            assert!(cp.coefficients.iter().all(Ring::is_zero));
        }
        assert!(verify_lift(&lifted, &f).all_pass());
    }

    #[test]
    fn tie_break_and_truncation_invariance() {
        let f = deformed(2, 2, 4, &["x^2 - y^3 + v1", "y^2 + v2*x"]);
        let local = localize_residual(&f.residual()).unwrap();
        let a = lift_border_basis(&f, &local, DivisionStrategy::LexSmallest).unwrap();
        let b = lift_border_basis(&f, &local, DivisionStrategy::LexLargest).unwrap();
        assert_eq!(a.base.rules(), b.base.rules());
        let f3 = deformed(2, 2, 3, &["x^2 - y^3 + v1", "y^2 + v2*x"]);
        let c = lift_border_basis(&f3, &local, DivisionStrategy::LexSmallest).unwrap();
        let truncated: Vec<Vec<Series<Q>>> = a
            .base
            .rules()
            .iter()
            .map(|row| row.iter().map(|s| s.with_precision(3)).collect())
            .collect();
        assert_eq!(truncated, c.base.rules());
    }

    #[test]
    fn corrupted_lift_fails_commutation() {
        let f = deformed(2, 2, 3, &["x^2 + v1", "y^2 + v2"]);
        let mut lifted = lift(&f).unwrap();
        let v1 = Series::var(&f.series_ctx, 0);
        lifted.base = lifted.base.with_coefficient(0, 1, v1);
        let rep = verify_lift(&lifted, &f);
        assert!(!rep.commutation);
        assert!(rep.commutation_witness.is_some());
    }
}

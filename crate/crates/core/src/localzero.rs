//! The residual algebra at the origin: local multiplicity, the idempotent
//! cutting out the local factor, and the numeric joint-eigenvalue
//! decomposition of a quotient algebra into its points.

use nalgebra::linalg::balancing::balance_parlett_reinsch;
use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::borderbasis::{from_groebner, BorderBasis};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, local_multiplicity_truncation, quotient_staircase, DEFAULT_NMAX};
use crate::matrix::{span_rank, Matrix};
use crate::polynomials::{Monomial, MonomialOrder, Polynomial};
use crate::scalars::{Field, Fp, Ring, ToComplex};

/// Default relative gap below which two clusters are ambiguous.
pub const DEFAULT_GAP: f64 = 1e-6;
/// Default relative tolerance for the cluster rank test.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;
/// Maximum number of random combinations tried.
pub const DEFAULT_ATTEMPTS: usize = 5;

/// Idempotent splitting of the residual algebra at the origin.
#[derive(Clone, Debug)]
pub struct LocalFactorReport<K: Field> {
    /// Local multiplicity.
    pub r: usize,
    /// Coordinates of `e` on the quotient basis.
    pub idempotent_coords: Vec<K>,
    /// Smallest `N` with `⟨1 − e⟩ = ⟨x⟩^N`.
    pub nil_index: u32,
    /// Basis of the image of `e`.
    pub local_basis_rows: Vec<Vec<K>>,
    /// Matrix of multiplication by `e`.
    pub projector: Matrix<K>,
    /// Border basis of the whole residual quotient.
    pub basis: BorderBasis<K>,
}

impl<K: Field> LocalFactorReport<K> {
    pub fn idempotent(&self) -> Polynomial<K> {
        crate::borderbasis::from_coordinates(self.basis.order_ideal(), &self.idempotent_coords, self.basis.ctx())
    }
}

/// A numeric zero with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroWithMultiplicity {
    pub point: Vec<Complex64>,
    pub multiplicity: usize,
}

fn check_origin<K: Field>(f: &[Polynomial<K>]) -> Result<()> {
    for (index, p) in f.iter().enumerate() {
        if !p.constant_term().is_zero() {
            return Err(Error::OriginNotAZero { index });
        }
    }
    Ok(())
}

/// Border basis of the residual quotient, or of its truncation `I + m^N` when
/// the ideal is not zero-dimensional but the origin is isolated.
fn residual_basis<K: Field>(f: &[Polynomial<K>]) -> Result<BorderBasis<K>> {
    check_origin(f)?;
    let g = buchberger(f, MonomialOrder::GRevLex)?;
    match quotient_staircase(&g) {
        Ok(_) => from_groebner(&g),
        Err(Error::NotZeroDimensional) => {
            let (_, n) = local_multiplicity_truncation(f, DEFAULT_NMAX)?;
            let nvars = f[0].nvars();
            let ctx = f[0].coeff_ctx().clone();
            let mut gens = f.to_vec();
            gens.extend(
                Monomial::all_of_degree(nvars, n)
                    .into_iter()
                    .map(|m| Polynomial::monomial(m, K::one(&ctx))),
            );
            from_groebner(&buchberger(&gens, MonomialOrder::GRevLex)?)
        }
        Err(e) => Err(e),
    }
}

/// `Λ_i^D` for every variable, `D = #B`.
fn powered<K: Field>(bb: &BorderBasis<K>) -> Vec<Matrix<K>> {
    let d = bb.dim() as u32;
    bb.multiplication_matrices().matrices.iter().map(|m| m.pow(d)).collect()
}

/// Basis of `∩ ker Λ_i^D`, the joint generalized eigenspace at the origin.
fn joint_kernel<K: Field>(bb: &BorderBasis<K>, pows: &[Matrix<K>]) -> Vec<Vec<K>> {
    let d = bb.dim();
    let mut stacked = Vec::with_capacity(pows.len() * d);
    for p in pows {
        for i in 0..d {
            stacked.push(p.row(i).to_vec());
        }
    }
    Matrix::from_rows(stacked, bb.ctx()).kernel()
}

/// Dimension of the joint generalized 0-eigenspace of the multiplication matrices.
pub fn multiplicity_at_origin<K: Field>(fbar: &[Polynomial<K>]) -> Result<usize> {
    let bb = residual_basis(fbar)?;
    Ok(joint_kernel(&bb, &powered(&bb)).len())
}

/// Spectral projector onto the local factor at the origin and its data.
pub fn split_idempotent<K: Field>(fbar: &[Polynomial<K>]) -> Result<LocalFactorReport<K>> {
    let bb = residual_basis(fbar)?;
    let ctx = bb.ctx().clone();
    let d = bb.dim();
    let pows = powered(&bb);
    let v0 = joint_kernel(&bb, &pows);
    let r = v0.len();

    // Σ im Λ_i^D, the complement on which some coordinate is invertible.
    let mut image: Vec<Vec<K>> = Vec::new();
    for p in &pows {
        for j in 0..d {
            let col = p.column(j);
            let mut cand = image.clone();
            cand.push(col.clone());
            if span_rank(&cand, d, &ctx) > image.len() {
                image.push(col);
            }
        }
    }
    if r + image.len() != d {
        return Err(Error::InternalInvariant(format!(
            "local factor ({r}) and complement ({}) do not fill the quotient ({d})",
            image.len()
        )));
    }
    let mut cols = v0.clone();
    cols.extend(image.iter().cloned());
    let change = Matrix::from_columns(&cols, d, &ctx);
    let inv = change
        .inverse()
        .ok_or_else(|| Error::InternalInvariant("local factor and complement intersect".into()))?;
    let mut diag = Matrix::zeros(d, d, &ctx);
    for i in 0..r {
        diag.set(i, i, K::one(&ctx));
    }
    let projector = change.mul(&diag).mul(&inv);
    let idempotent_coords = projector.column(0);

    let nil_index = nil_index(&bb, &image)?;
    Ok(LocalFactorReport {
        r,
        idempotent_coords,
        nil_index,
        local_basis_rows: v0,
        projector,
        basis: bb,
    })
}

/// Smallest `N ≥ 1` for which the ideal `⟨x⟩^N` of the quotient equals the
/// complement `⟨1 − e⟩` (spanned by `complement`).
fn nil_index<K: Field>(bb: &BorderBasis<K>, complement: &[Vec<K>]) -> Result<u32> {
    let d = bb.dim();
    let ctx = bb.ctx().clone();
    let mut nf = bb.normal_former()?;
    let target = complement.len();
    for n in 1..=(d as u32 + 1) {
        let mut span: Vec<Vec<K>> = Vec::new();
        for a in Monomial::all_of_degree(bb.nvars(), n) {
            for b in bb.order_ideal().monomials() {
                span.push(nf.monomial(&a.mul(b)));
            }
        }
        let rank = span_rank(&span, d, &ctx);
        if rank == target {
            let mut both = span;
            both.extend(complement.iter().cloned());
            if span_rank(&both, d, &ctx) == target {
                return Ok(n);
            }
        }
    }
    Err(Error::InternalInvariant(
        "maximal ideal of the local factor is not nilpotent".into(),
    ))
}

/// Parameters of [`stickelberger_decompose`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StickelbergerOptions {
    pub seed: u64,
    /// Relative distance below which two cluster centers are ambiguous.
    pub gap: f64,
    /// Relative singular-value threshold of the cluster rank test.
    pub rank_tol: f64,
    pub attempts: usize,
}

impl Default for StickelbergerOptions {
    fn default() -> Self {
        StickelbergerOptions {
            seed: 0,
            gap: DEFAULT_GAP,
            rank_tol: DEFAULT_RANK_TOL,
            attempts: DEFAULT_ATTEMPTS,
        }
    }
}

fn schur_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let schur = Schur::try_new(m.clone(), f64::EPSILON, 100_000).ok_or(Error::EigenFailure)?;
    let ev = schur.eigenvalues().ok_or(Error::EigenFailure)?;
    Ok(ev.iter().copied().collect())
}

/// Sorted-descending singular values and the right singular vectors
/// belonging to the `k` smallest.
fn small_singular_space(m: DMatrix<Complex64>, k: usize) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let d = m.ncols();
    let svd = m
        .try_svd(false, true, f64::EPSILON, 100_000)
        .ok_or(Error::EigenFailure)?;
    let vt = svd.v_t.as_ref().ok_or(Error::EigenFailure)?;
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv: Vec<f64> = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let mut v = DMatrix::zeros(d, k);
    for (c, &i) in idx[d - k..].iter().enumerate() {
        for r in 0..d {
            v[(r, c)] = vt[(i, r)].conj();
        }
    }
    Ok((sv, v))
}

struct Dendrogram {
    /// Members of each node; leaves first, then merges in order.
    members: Vec<Vec<usize>>,
    children: Vec<Option<(usize, usize)>>,
}

/// Single-linkage agglomeration of points in the plane.
fn single_linkage(points: &[Complex64]) -> Dendrogram {
    let n = points.len();
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut children = vec![None; n];
    let mut active: Vec<usize> = (0..n).collect();
    while active.len() > 1 {
        let mut best = (f64::INFINITY, 0, 1);
        for a in 0..active.len() {
            for b in a + 1..active.len() {
                let mut dist = f64::INFINITY;
                for &p in &members[active[a]] {
                    for &q in &members[active[b]] {
                        dist = dist.min((points[p] - points[q]).norm());
                    }
                }
                if dist < best.0 {
                    best = (dist, a, b);
                }
            }
        }
        let (_, a, b) = best;
        let (na, nb) = (active[a], active[b]);
        let mut merged = members[na].clone();
        merged.extend(members[nb].iter().copied());
        merged.sort_unstable();
        members.push(merged);
        children.push(Some((na, nb)));
        let id = members.len() - 1;
        active.remove(b);
        active[a] = id;
    }
    Dendrogram { members, children }
}

/// `(l − cI)^k` with `c` the centroid of the member eigenvalues.
fn cluster_power(l: &DMatrix<Complex64>, eig: &[Complex64], mem: &[usize]) -> DMatrix<Complex64> {
    let d = l.nrows();
    let k = mem.len();
    let c = mem.iter().map(|&i| eig[i]).sum::<Complex64>() / k as f64;
    let shifted = l - DMatrix::<Complex64>::identity(d, d) * c;
    let mut p = shifted.clone();
    for _ in 1..k {
        p = &p * &shifted;
    }
    p
}

/// Cluster eigenvalues of `l` (already normalized). With a known number of
/// distinct points the dendrogram is cut at that many clusters; otherwise it
/// is walked top-down, accepting a node when `(l − cI)^k` has `k` singular
/// values below `tol`.
fn cluster(
    l: &DMatrix<Complex64>,
    eig: &[Complex64],
    tol: f64,
    count: Option<usize>,
) -> Result<Vec<(Vec<usize>, DMatrix<Complex64>)>> {
    let d = l.nrows();
    let tree = single_linkage(eig);
    let root = tree.members.len() - 1;
    let nodes = match count {
        Some(c) => {
            // Merges are created in order of increasing distance, so undoing
            // the newest ones first cuts at the largest gaps.
            let mut nodes = vec![root];
            while nodes.len() < c.min(eig.len()) {
                let (pos, _) = nodes.iter().enumerate().max_by_key(|(_, &n)| n).expect("nonempty");
                let (a, b) = tree.children[nodes[pos]].expect("internal node");
                nodes.swap_remove(pos);
                nodes.extend([a, b]);
            }
            nodes
        }
        None => {
            let mut nodes = Vec::new();
            let mut stack = vec![root];
            while let Some(node) = stack.pop() {
                let mem = &tree.members[node];
                let (sv, _) = small_singular_space(cluster_power(l, eig, mem), mem.len())?;
                match (sv[d - mem.len()] <= tol, tree.children[node]) {
                    (false, Some((a, b))) => {
                        stack.push(b);
                        stack.push(a);
                    }
                    _ => nodes.push(node),
                }
            }
            nodes
        }
    };
    nodes
        .into_iter()
        .map(|node| {
            let mem = tree.members[node].clone();
            let (_, v) = small_singular_space(cluster_power(l, eig, &mem), mem.len())?;
            Ok((mem, v))
        })
        .collect()
}

/// Number of distinct zeros of a quotient over a field of characteristic
/// zero: the rank of the trace form `(b_i, b_j) ↦ tr(M_{b_i b_j})`.
pub fn distinct_zero_count<K: Field>(bb: &BorderBasis<K>) -> usize {
    let mm = bb.multiplication_matrices();
    let ctx = bb.ctx().clone();
    let d = bb.dim();
    let reps: Vec<Matrix<K>> = bb
        .order_ideal()
        .monomials()
        .iter()
        .map(|b| {
            b.exponents()
                .iter()
                .zip(&mm.matrices)
                .fold(Matrix::identity(d, &ctx), |acc, (&e, m)| acc.mul(&m.pow(e)))
        })
        .collect();
    let mut form = Matrix::zeros(d, d, &ctx);
    for i in 0..d {
        for j in i..d {
            let mut t = K::zero(&ctx);
            for a in 0..d {
                for b in 0..d {
                    t = t.add(&reps[i].get(a, b).mul(reps[j].get(b, a)));
                }
            }
            form.set(i, j, t.clone());
            form.set(j, i, t);
        }
    }
    form.rank()
}

/// Common diagonal similarity `D⁻¹ Λ_i D` balancing the entrywise sum of
/// `|Λ_i|`. Quotient bases from Gröbner staircases can carry entries of
/// wildly different magnitude, which would otherwise swamp the scale of the
/// eigenvalues.
fn balance(mats: &[DMatrix<Complex64>]) -> Vec<DMatrix<Complex64>> {
    let d = mats[0].nrows();
    let mut abs = DMatrix::<f64>::zeros(d, d);
    for m in mats {
        abs += m.map(|z| z.norm());
    }
    let scale = balance_parlett_reinsch(&mut abs);
    mats.iter()
        .map(|m| DMatrix::from_fn(d, d, |i, j| m[(i, j)] * (scale[j] / scale[i])))
        .collect()
}

/// Joint eigenstructure of a certified quotient: points with multiplicities
/// summing to its dimension. Over exact fields the number of distinct
/// points is fixed exactly by [`distinct_zero_count`] and only the
/// coordinates are computed in floating point.
pub fn stickelberger_decompose<K: Field + ToComplex>(
    bb: &BorderBasis<K>,
    opts: &StickelbergerOptions,
) -> Result<Vec<ZeroWithMultiplicity>> {
    if !bb.is_certified() {
        return Err(Error::RequiresCertifiedBasis);
    }
    if K::EXACT {
        return decompose_exact(bb, opts);
    }
    let mats: Vec<DMatrix<Complex64>> = bb
        .multiplication_matrices()
        .matrices
        .iter()
        .map(Matrix::to_complex)
        .collect();
    decompose(&mats, opts)
}

/// Exact shift-and-invert: with `L = Σ c_i Λ_i` for random integers `c_i`,
/// `A = (L − σI)⁻¹` and `B_i = Λ_i A` are formed exactly. Zeros near the
/// origin become the large, well separated eigenvalues of `A`, so far-away
/// zeros no longer set the scale of the rounding error. A zero `ξ` has
/// eigenvalue `1/(ℓ(ξ) − σ)` on `A` and `ξ_i/(ℓ(ξ) − σ)` on `B_i`.
fn decompose_exact<K: Field + ToComplex>(
    bb: &BorderBasis<K>,
    opts: &StickelbergerOptions,
) -> Result<Vec<ZeroWithMultiplicity>> {
    let d = bb.dim();
    if d == 0 {
        return Ok(Vec::new());
    }
    let ctx = bb.ctx().clone();
    let mm = bb.multiplication_matrices().matrices;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut l = Matrix::zeros(d, d, &ctx);
    for m in &mm {
        let c = loop {
            let c: i64 = rng.random_range(-50..=50);
            if c != 0 {
                break c;
            }
        };
        l = l.add(&m.scale(&K::from_i64(&ctx, c)));
    }
    // A squarefree characteristic polynomial of `L` certifies `d` distinct
    // zeros without the trace form.
    let count = if squarefree_mod_split_prime(&l) {
        d
    } else {
        distinct_zero_count(bb)
    };
    let inverse = (0..)
        .find_map(|j| {
            let sigma = K::from_rational(&ctx, &BigRational::new(j.into(), 1024.into())).expect("1024 is invertible");
            l.sub(&Matrix::identity(d, &ctx).scale(&sigma)).inverse()
        })
        .expect("finitely many eigenvalues");
    let mut mats = vec![inverse.to_complex()];
    mats.extend(mm.iter().map(|m| m.mul(&inverse).to_complex()));
    let balanced = balance(&mats);
    let a = &balanced[0];
    let scale = a.norm().max(f64::MIN_POSITIVE);
    let a = a / Complex64::new(scale, 0.0);
    let eig = schur_eigenvalues(&a)?;
    let zeros = cluster(&a, &eig, opts.rank_tol, Some(count))?
        .into_iter()
        .map(|(mem, v)| {
            let vh = v.adjoint();
            let alpha = (&vh * &balanced[0] * &v).trace();
            let point = balanced[1..].iter().map(|b| (&vh * b * &v).trace() / alpha).collect();
            ZeroWithMultiplicity {
                point,
                multiplicity: mem.len(),
            }
        })
        .collect();
    Ok(sort_zeros(zeros))
}

/// Prime `≡ 1 (mod 4)` and a square root of `−1` modulo it.
const SPLIT_PRIME: u32 = 2_147_483_629;
const SPLIT_SQRT_M1: i64 = 1_518_275_076;

/// `χ_L` squarefree modulo a prime above [`SPLIT_PRIME`], hence over the
/// field of `L`: a nonzero discriminant stays nonzero before reduction.
fn squarefree_mod_split_prime<K: Field + ToComplex>(l: &Matrix<K>) -> bool {
    let p = SPLIT_PRIME;
    let i = Fp::from_i64(&p, SPLIT_SQRT_M1);
    let d = l.rows();
    let mut rows = Vec::with_capacity(d);
    for r in 0..d {
        let Some(row) = l
            .row(r)
            .iter()
            .map(|c| c.reduce_split(p, &i))
            .collect::<Option<Vec<Fp>>>()
        else {
            return false;
        };
        rows.push(row);
    }
    is_squarefree(&Matrix::from_rows(rows, &p).charpoly())
}

/// `a mod b` for coefficient vectors, highest degree first, `b[0] ≠ 0`.
fn poly_rem<K: Field>(a: &[K], b: &[K]) -> Vec<K> {
    let mut r = a.to_vec();
    let lead = b[0].inv().expect("nonzero leading coefficient");
    while r.len() >= b.len() {
        let q = r[0].mul(&lead);
        for (k, bk) in b.iter().enumerate() {
            r[k] = r[k].sub(&q.mul(bk));
        }
        r.remove(0);
    }
    let first = r.iter().position(|c| !c.is_zero()).unwrap_or(r.len());
    r.split_off(first)
}

/// `gcd(p, p') = 1` for `p` of degree at least one, highest degree first.
fn is_squarefree<K: Field>(p: &[K]) -> bool {
    let deg = p.len() - 1;
    let ctx = p[0].ctx();
    let mut a = p.to_vec();
    let mut b: Vec<K> = p[..deg]
        .iter()
        .enumerate()
        .map(|(k, c)| c.mul(&K::from_i64(&ctx, (deg - k) as i64)))
        .collect();
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a.len() == 1
}

/// Coarse keys keep the order stable under rounding noise.
fn sort_zeros(mut zeros: Vec<ZeroWithMultiplicity>) -> Vec<ZeroWithMultiplicity> {
    zeros.sort_by_key(|z| {
        let key: Vec<(i64, i64)> = z
            .point
            .iter()
            .map(|c| ((c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64))
            .collect();
        (key, std::cmp::Reverse(z.multiplicity))
    });
    zeros
}

/// [`stickelberger_decompose`] on floating-point matrices, with multiplicities
/// decided by the cluster rank test.
pub fn decompose_complex(
    mats: &[DMatrix<Complex64>],
    opts: &StickelbergerOptions,
) -> Result<Vec<ZeroWithMultiplicity>> {
    decompose(mats, opts)
}

fn decompose(mats: &[DMatrix<Complex64>], opts: &StickelbergerOptions) -> Result<Vec<ZeroWithMultiplicity>> {
    let n = mats.len();
    let d = mats.first().map_or(0, DMatrix::nrows);
    if d == 0 {
        return Ok(Vec::new());
    }
    let balanced = balance(mats);
    let mats = &balanced[..];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut closest = (f64::INFINITY, 0);
    for attempt in 0..opts.attempts.max(1) {
        let coeffs: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut l = DMatrix::<Complex64>::zeros(d, d);
        for (c, mi) in coeffs.iter().zip(mats) {
            l += mi * Complex64::new(*c, 0.0);
        }
        let scale = l.norm().max(1.0);
        let l = l / Complex64::new(scale, 0.0);
        let eig = schur_eigenvalues(&l)?;
        let clusters = cluster(&l, &eig, opts.rank_tol, None)?;

        let centers: Vec<Complex64> = clusters
            .iter()
            .map(|(mem, _)| mem.iter().map(|&i| eig[i]).sum::<Complex64>() / mem.len() as f64)
            .collect();
        let mut min_dist = f64::INFINITY;
        for a in 0..centers.len() {
            for b in a + 1..centers.len() {
                min_dist = min_dist.min((centers[a] - centers[b]).norm());
            }
        }
        if min_dist < opts.gap {
            if min_dist < closest.0 || closest.1 == 0 {
                closest = (min_dist, attempt + 1);
            }
            continue;
        }

        let zeros = clusters
            .into_iter()
            .map(|(mem, v)| {
                let k = mem.len();
                let vh = v.adjoint();
                let point = mats.iter().map(|mi| (&vh * mi * &v).trace() / k as f64).collect();
                ZeroWithMultiplicity { point, multiplicity: k }
            })
            .collect();
        return Ok(sort_zeros(zeros));
    }
    Err(Error::AmbiguousClusters {
        attempts: opts.attempts.max(1),
        distance: closest.0,
        gap: opts.gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{parse_polynomial, VarTable};
    use crate::scalars::Q;

    fn sys(n: usize, lines: &[&str]) -> Vec<Polynomial<Q>> {
        let vars = VarTable::new(n, 0);
        lines.iter().map(|l| parse_polynomial(l, &vars, 1).unwrap()).collect()
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(multiplicity_at_origin(&sys(2, &["x^2", "y^2"])).unwrap(), 4);
        assert_eq!(multiplicity_at_origin(&sys(1, &["x^2 - x^3"])).unwrap(), 2);
        assert_eq!(multiplicity_at_origin(&sys(1, &["x"])).unwrap(), 1);
        assert_eq!(
            multiplicity_at_origin(&sys(1, &["x - 1"])),
            Err(Error::OriginNotAZero { index: 0 })
        );
        assert!(matches!(
            multiplicity_at_origin(&sys(2, &["x*y"])),
            Err(Error::NotIsolated { .. })
        ));
    }

    #[test]
    fn isolated_origin_on_non_finite_variety() {
        // origin plus the line y = 1
        let f = sys(2, &["x*(y - 1)", "y*(y - 1)"]);
        assert_eq!(multiplicity_at_origin(&f).unwrap(), 1);
    }

    #[test]
    fn idempotent_of_cubic() {
        let rep = split_idempotent(&sys(1, &["x^2 - x^3"])).unwrap();
        assert_eq!(rep.r, 2);
        assert_eq!(rep.idempotent().to_string(), "-x^2 + 1");
        assert_eq!(rep.nil_index, 2);
        let e = &rep.projector;
        assert_eq!(e.mul(e), *e);
    }

    #[test]
    fn idempotent_local_quotient() {
        let rep = split_idempotent(&sys(2, &["x^2", "y^2"])).unwrap();
        assert_eq!(rep.r, 4);
        assert_eq!(rep.idempotent().to_string(), "1");
        assert_eq!(rep.nil_index, 3);
    }

    #[test]
    fn idempotent_three_points() {
        let rep = split_idempotent(&sys(1, &["x*(x - 1)*(x - 2)"])).unwrap();
        assert_eq!(rep.r, 1);
        assert_eq!(rep.nil_index, 1);
        assert_eq!(rep.projector.rank(), 1);
        // image invariant under multiplication
        for lm in rep.basis.multiplication_matrices().matrices {
            assert_eq!(lm.mul(&rep.projector), rep.projector.mul(&lm));
        }
    }

    fn decompose(n: usize, lines: &[&str]) -> Vec<ZeroWithMultiplicity> {
        let g = buchberger(&sys(n, lines), MonomialOrder::GRevLex).unwrap();
        let bb = from_groebner(&g).unwrap();
        stickelberger_decompose(&bb, &StickelbergerOptions::default()).unwrap()
    }

    fn close(a: Complex64, re: f64) -> bool {
        (a - Complex64::new(re, 0.0)).norm() < 1e-6
    }

    #[test]
    fn four_simple_points() {
        let z = decompose(2, &["x^2 - 1", "y^2 - y"]);
        assert_eq!(z.len(), 4);
        assert!(z.iter().all(|p| p.multiplicity == 1));
        let expected = [(-1.0, 0.0), (-1.0, 1.0), (1.0, 0.0), (1.0, 1.0)];
        for (p, (a, b)) in z.iter().zip(expected) {
            assert!(close(p.point[0], a) && close(p.point[1], b), "{p:?}");
        }
    }

    #[test]
    fn fat_point() {
        let z = decompose(2, &["x^2", "y^2"]);
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].multiplicity, 4);
        assert!(close(z[0].point[0], 0.0) && close(z[0].point[1], 0.0));
    }

    #[test]
    fn double_and_simple() {
        let z = decompose(1, &["x^2 - x^3"]);
        assert_eq!(z.len(), 2);
        assert_eq!((z[0].multiplicity, z[1].multiplicity), (2, 1));
        assert!(close(z[0].point[0], 0.0) && close(z[1].point[0], 1.0));
    }

    #[test]
    fn ambiguous_gap() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1e-3, 0.0),
        ]));
        let opts = StickelbergerOptions {
            gap: 1e-2,
            ..Default::default()
        };
        assert!(matches!(
            decompose_complex(std::slice::from_ref(&m), &opts),
            Err(Error::AmbiguousClusters { attempts: 5, .. })
        ));
        // Over an exact field the distinct-zero count settles the cut.
        let g = buchberger(&sys(1, &["x*(x - 1/1000)"]), MonomialOrder::GRevLex).unwrap();
        let bb = from_groebner(&g).unwrap();
        let z = stickelberger_decompose(&bb, &opts).unwrap();
        assert_eq!(z.len(), 2);
    }
}

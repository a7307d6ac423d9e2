//! Dense matrices over any [`Ring`], with exact elimination over fields and
//! division-free characteristic polynomials (Berkowitz) over rings.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::scalars::{Field, Ring, ToComplex};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R: Ring> {
    rows: usize,
    cols: usize,
    ctx: R::Ctx,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize, ctx: &R::Ctx) -> Self {
        Matrix {
            rows,
            cols,
            ctx: ctx.clone(),
            data: vec![R::zero(ctx); rows * cols],
        }
    }

    pub fn identity(n: usize, ctx: &R::Ctx) -> Self {
        let mut m = Matrix::zeros(n, n, ctx);
        for i in 0..n {
            m.set(i, i, R::one(ctx));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>, ctx: &R::Ctx) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            ctx: ctx.clone(),
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(cols: &[Vec<R>], nrows: usize, ctx: &R::Ctx) -> Self {
        let mut m = Matrix::zeros(nrows, cols.len(), ctx);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows, "column length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &R::Ctx {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn map<S: Ring>(&self, ctx: &S::Ctx, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            ctx: ctx.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows, &self.ctx);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix shapes");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix shapes");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(&self.ctx, |a| a.mul(c))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shapes");
        let mut out = Matrix::<R>::zeros(self.rows, rhs.cols, &self.ctx);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len(), "matrix-vector shapes");
        (0..self.rows)
            .map(|i| {
                let mut acc = R::zero(&self.ctx);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = Matrix::identity(self.rows, &self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Evaluate a univariate polynomial (coefficients lowest degree first) at this matrix.
    pub fn eval_poly(&self, coeffs: &[R]) -> Self {
        let n = self.rows;
        let mut acc = Matrix::zeros(n, n, &self.ctx);
        for c in coeffs.iter().rev() {
            acc = acc.mul(self).add(&Matrix::identity(n, &self.ctx).scale(c));
        }
        acc
    }

    /// Coefficients of `det(T*I - A)`, highest degree first (leading 1),
    /// by Berkowitz's division-free algorithm.
    pub fn charpoly(&self) -> Vec<R> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let one = R::one(&self.ctx);
        let mut c = vec![one.clone()];
        for k in 0..n {
            // Leading principal block of size k+1: S = A[..k, ..k],
            // row r = A[k, ..k], column col = A[..k, k], a = A[k, k].
            let mut t = Vec::with_capacity(k + 2);
            t.push(one.clone());
            t.push(self.get(k, k).neg());
            let mut v: Vec<R> = (0..k).map(|i| self.get(i, k).clone()).collect();
            for _ in 0..k {
                let mut rv = R::zero(&self.ctx);
                for (j, x) in v.iter().enumerate() {
                    rv = rv.add(&self.get(k, j).mul(x));
                }
                t.push(rv.neg());
                v = (0..k)
                    .map(|i| {
                        let mut acc = R::zero(&self.ctx);
                        for (j, x) in v.iter().enumerate() {
                            acc = acc.add(&self.get(i, j).mul(x));
                        }
                        acc
                    })
                    .collect();
            }
            let mut next = vec![R::zero(&self.ctx); k + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, cj) in c.iter().enumerate() {
                    if i >= j {
                        *slot = slot.add(&t[i - j].mul(cj));
                    }
                }
            }
            c = next;
        }
        c
    }

    pub fn det(&self) -> R {
        let c = self.charpoly();
        let last = c.last().cloned().expect("charpoly is nonempty");
        if self.rows.is_multiple_of(2) {
            last
        } else {
            last.neg()
        }
    }
}

impl<K: Field> Matrix<K> {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix<K>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<K>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![K::zero(&self.ctx); self.cols];
                v[f] = K::one(&self.ctx);
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = r.get(row, f).neg();
                }
                v
            })
            .collect()
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[K]) -> Option<Vec<K>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1, &self.ctx);
        for (i, bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, bi.clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![K::zero(&self.ctx); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<K>> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n, &self.ctx);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, K::one(&self.ctx));
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n, &self.ctx);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// Rank of the span of `vectors` (each of the same length).
pub fn span_rank<K: Field>(vectors: &[Vec<K>], len: usize, ctx: &K::Ctx) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(vectors, len, ctx).rank()
}

impl<R: Ring + ToComplex> Matrix<R> {
    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_c64())
    }
}

impl<R: Ring> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Series, SeriesCtx, Q};

    fn q(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Q::int(v)).collect()).collect(),
            &(),
        )
    }

    #[test]
    fn berkowitz_matches_expansion() {
        let a = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        // det(T I - A) = T^3 - 9T^2 + 24T - 18
        let c: Vec<Q> = a.charpoly();
        assert_eq!(c, vec![Q::int(1), Q::int(-9), Q::int(24), Q::int(-18)]);
        assert_eq!(a.det(), Q::int(18));
        assert_eq!(q(&[&[0, 1], &[1, 0]]).det(), Q::int(-1));
    }

    #[test]
    fn cayley_hamilton() {
        let a = q(&[&[1, 2, 0, -1], &[0, 1, 3, 2], &[5, 0, 1, 1], &[2, 2, 0, -3]]);
        let mut c = a.charpoly();
        c.reverse();
        assert!(a.eval_poly(&c).is_zero());
    }

    #[test]
    fn kernel_solve_inverse() {
        let a = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Ring::is_zero));
        let x = a.solve(&[Q::int(6), Q::int(12), Q::int(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![Q::int(6), Q::int(12), Q::int(2)]);
        assert!(a.solve(&[Q::int(1), Q::int(0), Q::int(0)]).is_none());
        assert!(a.inverse().is_none());
        let b = q(&[&[2, 1], &[1, 1]]);
        assert_eq!(b.mul(&b.inverse().unwrap()), Matrix::identity(2, &()));
    }

    #[test]
    fn det_over_series() {
        let ctx = SeriesCtx::<Q>::new(1, 3, ());
        let v = Series::var(&ctx, 0);
        let one = Series::one(&ctx);
        let m = Matrix::from_rows(vec![vec![one.add(&v), v.clone()], vec![v.clone(), one.clone()]], &ctx);
        // (1+v) - v^2
        assert_eq!(m.det(), one.add(&v).sub(&v.mul(&v)));
    }
}

//! Small dense vectors and matrices over a [`Scalar`] backend.
//!
//! Vectors are plain `Vec<S>`; helpers below take the backend context
//! explicitly. Dimensions are checked at call time.

use thiserror::Error;

use crate::scalar::{Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Backend(#[from] ScalarError),
}

fn mismatch(what: &str, a: usize, b: usize) -> LinalgError {
    LinalgError::DimensionMismatch(format!("{what}: {a} vs {b}"))
}

pub fn zero_vec<S: Scalar>(n: usize, ctx: &S::Ctx) -> Vec<S> {
    vec![S::zero(ctx); n]
}

pub fn unit_vec<S: Scalar>(n: usize, i: usize, ctx: &S::Ctx) -> Vec<S> {
    let mut v = zero_vec(n, ctx);
    v[i] = S::one(ctx);
    v
}

pub fn int_vec<S: Scalar>(entries: &[i64], ctx: &S::Ctx) -> Vec<S> {
    entries.iter().map(|&e| S::from_int(e, ctx)).collect()
}

pub fn vec_add<S: Scalar>(x: &[S], y: &[S]) -> Vec<S> {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a.clone() + b.clone()).collect()
}

pub fn vec_sub<S: Scalar>(x: &[S], y: &[S]) -> Vec<S> {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect()
}

pub fn vec_neg<S: Scalar>(x: &[S]) -> Vec<S> {
    x.iter().map(|a| -a.clone()).collect()
}

pub fn vec_scale<S: Scalar>(c: &S, x: &[S]) -> Vec<S> {
    x.iter().map(|a| c.clone() * a.clone()).collect()
}

/// `acc += c * x`
pub fn axpy<S: Scalar>(acc: &mut [S], c: &S, x: &[S]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a = a.clone() + c.clone() * b.clone();
    }
}

pub fn vec_is_zero<S: Scalar>(x: &[S], ctx: &S::Ctx) -> bool {
    x.iter().all(|a| a.is_zero_in(ctx))
}

pub fn dot<S: Scalar>(x: &[S], y: &[S], ctx: &S::Ctx) -> S {
    x.iter().zip(y).fold(S::zero(ctx), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
    ctx: S::Ctx,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize, ctx: &S::Ctx) -> Self {
        Matrix { rows, cols, data: vec![S::zero(ctx); rows * cols], ctx: ctx.clone() }
    }

    pub fn identity(n: usize, ctx: &S::Ctx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.data[i * n + i] = S::one(ctx);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>, ctx: &S::Ctx) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(mismatch("ragged rows", row.len(), c));
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols: c, data, ctx: ctx.clone() })
    }

    pub fn from_int_rows(rows: &[&[i64]], ctx: &S::Ctx) -> Result<Self, LinalgError> {
        Self::from_rows(rows.iter().map(|r| int_vec(r, ctx)).collect(), ctx)
    }

    pub fn from_columns(cols: &[Vec<S>], ctx: &S::Ctx) -> Result<Self, LinalgError> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c, ctx);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != r {
                return Err(mismatch("ragged columns", col.len(), r));
            }
            for (i, v) in col.iter().enumerate() {
                m.data[i * c + j] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn diagonal(entries: Vec<S>, ctx: &S::Ctx) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n, ctx);
        for (i, e) in entries.into_iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &S::Ctx {
        &self.ctx
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, &self.ctx);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(mismatch("matrix product inner dimension", self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols, &self.ctx);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero_in(&self.ctx) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero_in(&self.ctx) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[S]) -> Result<Vec<S>, LinalgError> {
        if self.cols != x.len() {
            return Err(mismatch("matrix-vector product", self.cols, x.len()));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x, &self.ctx)).collect())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(S, S) -> S) -> Result<Self, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a.clone(), b.clone())).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data, ctx: self.ctx.clone() })
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &S) -> Self {
        let data = self.data.iter().map(|a| c.clone() * a.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data, ctx: self.ctx.clone() }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| -a.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data, ctx: self.ctx.clone() }
    }

    pub fn is_zero(&self) -> bool {
        vec_is_zero(&self.data, &self.ctx)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self.sub(&Self::identity(self.rows, &self.ctx)).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Exact (or tolerance) equality.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Determinant by Gaussian elimination with first-nonzero pivoting.
    pub fn det(&self) -> Result<S, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let ctx = &self.ctx;
        let mut a = self.data.clone();
        let mut det = S::one(ctx);
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r * n + col].is_zero_in(ctx)) else {
                return Ok(S::zero(ctx));
            };
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let pivot = a[col * n + col].clone();
            let inv = pivot.try_inv(ctx)?;
            det = det * pivot;
            for r in col + 1..n {
                let factor = a[r * n + col].clone() * inv.clone();
                if factor.is_zero_in(ctx) {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] = a[r * n + j].clone() - factor.clone() * a[col * n + j].clone();
                }
            }
        }
        Ok(det)
    }

    /// Gauss-Jordan inverse with first-nonzero pivoting.
    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let ctx = &self.ctx;
        let mut a = self.clone();
        let mut inv = Self::identity(n, ctx);
        for col in 0..n {
            let p = (col..n).find(|&r| !a.get(r, col).is_zero_in(ctx)).ok_or(LinalgError::Singular)?;
            if p != col {
                for j in 0..n {
                    a.data.swap(p * n + j, col * n + j);
                    inv.data.swap(p * n + j, col * n + j);
                }
            }
            let pinv = a.get(col, col).try_inv(ctx)?;
            for j in 0..n {
                a.data[col * n + j] = a.data[col * n + j].clone() * pinv.clone();
                inv.data[col * n + j] = inv.data[col * n + j].clone() * pinv.clone();
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero_in(ctx) {
                    continue;
                }
                for j in 0..n {
                    a.data[r * n + j] = a.data[r * n + j].clone() - factor.clone() * a.data[col * n + j].clone();
                    inv.data[r * n + j] =
                        inv.data[r * n + j].clone() - factor.clone() * inv.data[col * n + j].clone();
                }
            }
        }
        Ok(inv)
    }

    /// Integer power; negative exponents go through one inverse.
    pub fn pow(&self, e: i64) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut out = Self::identity(self.rows, &self.ctx);
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }
}

pub fn mat_mul<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>, LinalgError> {
    a.mul(b)
}

pub fn mat_inv<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>, LinalgError> {
    a.inverse()
}

pub fn det<S: Scalar>(a: &Matrix<S>) -> Result<S, LinalgError> {
    a.det()
}

/// Sign row of the formal 4x4 determinant: `(e1, -e2, e3, e4)`.
pub const WEDGE_SIGN_ROW: [i64; 4] = [1, -1, 1, 1];

/// Ternary product on 4-vectors: the formal determinant whose first row is
/// `(e1, -e2, e3, e4)` and whose remaining rows are `u`, `v`, `w`.
///
/// Coordinate `i` is `σ_i · (-1)^i · M_i` with `M_i` the 3x3 minor obtained
/// by deleting column `i`. This is not the Euclidean 4D cross product.
pub fn wedge3<S: Scalar>(u: &[S], v: &[S], w: &[S], ctx: &S::Ctx) -> Result<Vec<S>, LinalgError> {
    for x in [u, v, w] {
        if x.len() != 4 {
            return Err(mismatch("wedge3 needs 4-vectors", x.len(), 4));
        }
    }
    let minor = |skip: usize| {
        let c: Vec<usize> = (0..4).filter(|&j| j != skip).collect();
        let m3 = |r0: &[S], r1: &[S], r2: &[S]| {
            r0[c[0]].clone() * (r1[c[1]].clone() * r2[c[2]].clone() - r1[c[2]].clone() * r2[c[1]].clone())
                - r0[c[1]].clone() * (r1[c[0]].clone() * r2[c[2]].clone() - r1[c[2]].clone() * r2[c[0]].clone())
                + r0[c[2]].clone() * (r1[c[0]].clone() * r2[c[1]].clone() - r1[c[1]].clone() * r2[c[0]].clone())
        };
        m3(u, v, w)
    };
    Ok((0..4)
        .map(|i| {
            let sign = WEDGE_SIGN_ROW[i] * if i % 2 == 0 { 1 } else { -1 };
            S::from_int(sign, ctx) * minor(i)
        })
        .collect())
}

/// Euclidean cross product in R³.
pub fn cross3<S: Scalar>(x: &[S], y: &[S]) -> Result<Vec<S>, LinalgError> {
    if x.len() != 3 || y.len() != 3 {
        return Err(mismatch("cross product needs 3-vectors", x.len().max(y.len()), 3));
    }
    let c = |a: usize, b: usize| x[a].clone() * y[b].clone() - x[b].clone() * y[a].clone();
    Ok(vec![c(1, 2), c(2, 0), c(0, 1)])
}

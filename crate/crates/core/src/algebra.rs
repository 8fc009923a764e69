//! Hom-Lie and skew-Hom-Lie algebras given by structure constants, with
//! witness-producing checkers for the twisted axioms.
//!
//! An algebra is a bracket table `[e_i, e_j]` (antisymmetric, zero diagonal)
//! plus a twist matrix `β`. The twist is *multiplicative* with sign `ε` when
//! `β[x, y] = ε[βx, βy]`; `ε = +1` is the Hom-Lie case and `ε = -1` the
//! skew-Hom-Lie case. Both share the Hom-Jacobi identity
//!
//! ```text
//! [[y, z], βx] + [[z, x], βy] + [[x, y], βz] = 0
//! ```
//!
//! Every check is evaluated on basis tuples in lexicographic order and the
//! first failure is reported, regardless of execution strategy.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{axpy, unit_vec, vec_add, vec_is_zero, vec_neg, vec_scale, vec_sub, zero_vec, LinalgError, Matrix};
use crate::parallel::{find_first, Strategy};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("bracket is not antisymmetric at ({i}, {j})")]
    NotAntisymmetric { i: usize, j: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A failing input tuple and the nonzero residual it produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<S: Scalar> {
    /// Which identity failed, e.g. `"hom-jacobi"` or `"eq3"`.
    pub label: String,
    pub tuple: Vec<usize>,
    pub residual: Vec<S>,
}

impl<S: Scalar> Witness<S> {
    pub fn new(label: impl Into<String>, tuple: Vec<usize>, residual: Vec<S>) -> Self {
        Witness { label: label.into(), tuple, residual }
    }

    pub fn describe(&self) -> String {
        let res: Vec<String> = self.residual.iter().map(ToString::to_string).collect();
        format!("{} at {:?}: residual [{}]", self.label, self.tuple, res.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport<S: Scalar> {
    pub passed: bool,
    pub witness: Option<Witness<S>>,
    pub note: Option<String>,
}

impl<S: Scalar> CheckReport<S> {
    pub fn pass() -> Self {
        CheckReport { passed: true, witness: None, note: None }
    }

    pub fn fail(witness: Witness<S>) -> Self {
        CheckReport { passed: false, witness: Some(witness), note: None }
    }

    pub fn from_witness(w: Option<Witness<S>>) -> Self {
        match w {
            Some(w) => Self::fail(w),
            None => Self::pass(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Combines reports in order; the first failure wins.
    pub fn and(self, other: Self) -> Self {
        if self.passed {
            other
        } else {
            self
        }
    }
}

/// Outcome of twist-sign detection.
#[derive(Clone, Debug, PartialEq)]
pub enum TwistSign<S: Scalar> {
    /// `β[x,y] = [βx,βy]`. `abelian` marks the all-zero bracket, for which
    /// every sign is consistent.
    Plus { abelian: bool },
    Minus,
    Neither(Witness<S>),
}

impl<S: Scalar> TwistSign<S> {
    pub fn value(&self) -> Option<i64> {
        match self {
            TwistSign::Plus { .. } => Some(1),
            TwistSign::Minus => Some(-1),
            TwistSign::Neither(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Lie,
    HomLie,
    SkewHomLie,
    Neither,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification<S: Scalar> {
    pub verdict: Verdict,
    pub regular: bool,
    pub twist_sign: Option<i64>,
    pub witness: Option<Witness<S>>,
}

impl<S: Scalar> Classification<S> {
    /// Lie algebras are Hom-Lie algebras with identity twist.
    pub fn is_hom_lie(&self) -> bool {
        matches!(self.verdict, Verdict::Lie | Verdict::HomLie)
    }
}

/// Finite-dimensional algebra with structure constants and a twist map.
#[derive(Clone, Debug, PartialEq)]
pub struct HomAlgebra<S: Scalar> {
    n: usize,
    /// `table[i * n + j] = [e_i, e_j]`
    table: Vec<Vec<S>>,
    twist: Matrix<S>,
    ctx: S::Ctx,
}

impl<S: Scalar> HomAlgebra<S> {
    /// Builds from a full table `bracket(i, j)`, validating antisymmetry.
    pub fn from_fn(
        n: usize,
        twist: Matrix<S>,
        mut bracket: impl FnMut(usize, usize) -> Vec<S>,
    ) -> Result<Self, AlgebraError> {
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(bracket(i, j));
            }
        }
        Self::from_table(n, table, twist)
    }

    pub fn from_table(n: usize, table: Vec<Vec<S>>, twist: Matrix<S>) -> Result<Self, AlgebraError> {
        if twist.rows() != n || twist.cols() != n {
            return Err(AlgebraError::DimensionMismatch(format!(
                "twist is {}x{}, algebra has dimension {n}",
                twist.rows(),
                twist.cols()
            )));
        }
        if table.len() != n * n || table.iter().any(|v| v.len() != n) {
            return Err(AlgebraError::DimensionMismatch(format!("bracket table must be {n}x{n} of length-{n} vectors")));
        }
        let ctx = twist.ctx().clone();
        for i in 0..n {
            for j in i..n {
                let sum = vec_add(&table[i * n + j], &table[j * n + i]);
                if !vec_is_zero(&sum, &ctx) {
                    return Err(AlgebraError::NotAntisymmetric { i, j });
                }
            }
        }
        Ok(HomAlgebra { n, table, twist, ctx })
    }

    /// Builds from the `i < j` entries only; missing entries are zero.
    pub fn from_upper(
        n: usize,
        entries: impl IntoIterator<Item = (usize, usize, Vec<S>)>,
        twist: Matrix<S>,
    ) -> Result<Self, AlgebraError> {
        let ctx = twist.ctx().clone();
        let mut table = vec![zero_vec(n, &ctx); n * n];
        for (i, j, v) in entries {
            if i >= n || j >= n || v.len() != n {
                return Err(AlgebraError::DimensionMismatch(format!("entry ({i}, {j}) out of range")));
            }
            if i == j {
                if !vec_is_zero(&v, &ctx) {
                    return Err(AlgebraError::NotAntisymmetric { i, j });
                }
                continue;
            }
            table[j * n + i] = vec_neg(&v);
            table[i * n + j] = v;
        }
        Self::from_table(n, table, twist)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn ctx(&self) -> &S::Ctx {
        &self.ctx
    }

    pub fn twist(&self) -> &Matrix<S> {
        &self.twist
    }

    /// `[e_i, e_j]`
    pub fn bracket(&self, i: usize, j: usize) -> &[S] {
        &self.table[i * self.n + j]
    }

    pub fn basis(&self, i: usize) -> Vec<S> {
        unit_vec(self.n, i, &self.ctx)
    }

    pub fn with_twist(&self, twist: Matrix<S>) -> Result<Self, AlgebraError> {
        Self::from_table(self.n, self.table.clone(), twist)
    }

    /// Replaces the structure constant `[e_i, e_j]_k` (and `[e_j, e_i]_k`
    /// accordingly), keeping the table antisymmetric.
    pub fn with_structure_constant(&self, i: usize, j: usize, k: usize, value: S) -> Result<Self, AlgebraError> {
        if i == j || i >= self.n || j >= self.n || k >= self.n {
            return Err(AlgebraError::DimensionMismatch(format!("cannot set [e{i}, e{j}]_{k}")));
        }
        let mut table = self.table.clone();
        table[i * self.n + j][k] = value.clone();
        table[j * self.n + i][k] = -value;
        Self::from_table(self.n, table, self.twist.clone())
    }

    /// Relabels the basis: new basis vector `a` is old basis vector `perm[a]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, AlgebraError> {
        let n = self.n;
        if perm.len() != n {
            return Err(AlgebraError::DimensionMismatch("permutation length".into()));
        }
        let relabel = |v: &[S]| (0..n).map(|a| v[perm[a]].clone()).collect::<Vec<_>>();
        let mut twist = Matrix::zeros(n, n, &self.ctx);
        for a in 0..n {
            for b in 0..n {
                twist.set(a, b, self.twist.get(perm[a], perm[b]).clone());
            }
        }
        Self::from_fn(n, twist, |a, b| relabel(self.bracket(perm[a], perm[b])))
    }

    fn check_len(&self, x: &[S]) -> Result<(), AlgebraError> {
        if x.len() != self.n {
            return Err(AlgebraError::DimensionMismatch(format!("vector of length {} in dimension {}", x.len(), self.n)));
        }
        Ok(())
    }

    /// Bilinear extension of the bracket table.
    pub fn bracket_eval(&self, x: &[S], y: &[S]) -> Result<Vec<S>, AlgebraError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = zero_vec(self.n, &self.ctx);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero_in(&self.ctx) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if i == j || yj.is_zero_in(&self.ctx) {
                    continue;
                }
                axpy(&mut out, &(xi.clone() * yj.clone()), self.bracket(i, j));
            }
        }
        out
    }

    pub fn twist_apply(&self, x: &[S]) -> Result<Vec<S>, AlgebraError> {
        Ok(self.twist.mul_vec(x)?)
    }

    /// `J(x,y,z) = [[y,z],βx] + [[z,x],βy] + [[x,y],βz]`
    pub fn jacobi_residual(&self, x: &[S], y: &[S], z: &[S]) -> Result<Vec<S>, AlgebraError> {
        for v in [x, y, z] {
            self.check_len(v)?;
        }
        let (bx, by, bz) = (self.twist_apply(x)?, self.twist_apply(y)?, self.twist_apply(z)?);
        let t1 = self.bracket_unchecked(&self.bracket_unchecked(y, z), &bx);
        let t2 = self.bracket_unchecked(&self.bracket_unchecked(z, x), &by);
        let t3 = self.bracket_unchecked(&self.bracket_unchecked(x, y), &bz);
        Ok(vec_add(&vec_add(&t1, &t2), &t3))
    }

    fn basis_jacobi_residual(&self, twist_cols: &[Vec<S>], i: usize, j: usize, k: usize) -> Vec<S> {
        let t1 = self.bracket_unchecked(self.bracket(j, k), &twist_cols[i]);
        let t2 = self.bracket_unchecked(self.bracket(k, i), &twist_cols[j]);
        let t3 = self.bracket_unchecked(self.bracket(i, j), &twist_cols[k]);
        vec_add(&vec_add(&t1, &t2), &t3)
    }

    /// Hom-Jacobi on all ordered basis triples.
    pub fn check_hom_jacobi(&self) -> CheckReport<S> {
        self.check_hom_jacobi_with(Strategy::default())
    }

    pub fn check_hom_jacobi_with(&self, strategy: Strategy) -> CheckReport<S> {
        let n = self.n;
        let cols: Vec<Vec<S>> = (0..n).map(|i| self.twist.column(i)).collect();
        let hit = find_first(n * n * n, strategy, |t| {
            let (i, j, k) = (t / (n * n), (t / n) % n, t % n);
            let r = self.basis_jacobi_residual(&cols, i, j, k);
            (!vec_is_zero(&r, &self.ctx)).then(|| Witness::new("hom-jacobi", vec![i, j, k], r))
        });
        CheckReport::from_witness(hit.map(|(_, w)| w))
    }

    /// Sign `ε` with `β[e_i,e_j] = ε[βe_i, βe_j]` on all basis pairs.
    pub fn check_twist_sign(&self) -> TwistSign<S> {
        let n = self.n;
        let cols: Vec<Vec<S>> = (0..n).map(|i| self.twist.column(i)).collect();
        // candidate signs still consistent: (plus, minus)
        let mut plus = true;
        let mut minus = true;
        let mut any_nonzero = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let lhs = self.twist.mul_vec(self.bracket(i, j)).expect("square twist");
                let rhs = self.bracket_unchecked(&cols[i], &cols[j]);
                if vec_is_zero(&lhs, &self.ctx) && vec_is_zero(&rhs, &self.ctx) {
                    continue;
                }
                any_nonzero = true;
                let p_ok = vec_is_zero(&vec_sub(&lhs, &rhs), &self.ctx);
                let m_ok = vec_is_zero(&vec_add(&lhs, &rhs), &self.ctx);
                let (np, nm) = (plus && p_ok, minus && m_ok);
                if !np && !nm {
                    // residual against the sign that survived so far
                    let residual = if minus && !plus { vec_add(&lhs, &rhs) } else { vec_sub(&lhs, &rhs) };
                    return TwistSign::Neither(Witness::new("twist-sign", vec![i, j], residual));
                }
                plus = np;
                minus = nm;
            }
        }
        if !any_nonzero || plus {
            TwistSign::Plus { abelian: !any_nonzero }
        } else {
            TwistSign::Minus
        }
    }

    pub fn is_regular(&self) -> bool {
        self.twist.det().map(|d| !d.is_zero_in(&self.ctx)).unwrap_or(false)
    }

    pub fn classify(&self) -> Classification<S> {
        let regular = self.is_regular();
        let sign = self.check_twist_sign();
        let jacobi = self.check_hom_jacobi();
        let verdict_of = |sign: i64| match (sign, jacobi.passed) {
            (_, false) => Verdict::Neither,
            (1, true) if self.twist.is_identity() => Verdict::Lie,
            (1, true) => Verdict::HomLie,
            _ => Verdict::SkewHomLie,
        };
        match sign {
            TwistSign::Neither(w) => Classification { verdict: Verdict::Neither, regular, twist_sign: None, witness: Some(w) },
            s => {
                let e = s.value().expect("sign present");
                Classification { verdict: verdict_of(e), regular, twist_sign: Some(e), witness: jacobi.witness }
            }
        }
    }

    /// `β^m[e_i,e_j] = (-1)^m [β^m e_i, β^m e_j]` on all basis pairs.
    pub fn check_power_sign_law(&self, m: u32) -> CheckReport<S> {
        let bm = self.twist.pow(i64::from(m)).expect("square twist");
        let sign = S::from_int(if m.is_multiple_of(2) { 1 } else { -1 }, &self.ctx);
        let cols: Vec<Vec<S>> = (0..self.n).map(|i| bm.column(i)).collect();
        for i in 0..self.n {
            for j in 0..self.n {
                let lhs = bm.mul_vec(self.bracket(i, j)).expect("square twist");
                let rhs = vec_scale(&sign, &self.bracket_unchecked(&cols[i], &cols[j]));
                let r = vec_sub(&lhs, &rhs);
                if !vec_is_zero(&r, &self.ctx) {
                    return CheckReport::fail(Witness::new(format!("power-sign m={m}"), vec![i, j], r));
                }
            }
        }
        CheckReport::pass()
    }
}

/// Checks that the linear map `f: g → h` (an `dim h × dim g` matrix) satisfies
/// `f[x,y]_g = sign·[fx, fy]_h` and `f∘β_g = β_h∘f`.
pub fn check_morphism<S: Scalar>(
    f: &Matrix<S>,
    g: &HomAlgebra<S>,
    h: &HomAlgebra<S>,
    sign: i64,
) -> Result<CheckReport<S>, AlgebraError> {
    if f.cols() != g.dim() || f.rows() != h.dim() {
        return Err(AlgebraError::DimensionMismatch(format!(
            "map is {}x{}, algebras have dimensions {} -> {}",
            f.rows(),
            f.cols(),
            g.dim(),
            h.dim()
        )));
    }
    let ctx = g.ctx();
    let sign = S::from_int(sign, ctx);
    let images: Vec<Vec<S>> = (0..g.dim()).map(|i| f.column(i)).collect();
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            let lhs = f.mul_vec(g.bracket(i, j))?;
            let rhs = vec_scale(&sign, &h.bracket_unchecked(&images[i], &images[j]));
            let r = vec_sub(&lhs, &rhs);
            if !vec_is_zero(&r, ctx) {
                return Ok(CheckReport::fail(Witness::new("morphism-bracket", vec![i, j], r)));
            }
        }
    }
    let twist_residual = f.mul(g.twist())?.sub(&h.twist().mul(f)?)?;
    for j in 0..g.dim() {
        let col = twist_residual.column(j);
        if !vec_is_zero(&col, ctx) {
            return Ok(CheckReport::fail(Witness::new("morphism-twist", vec![j], col)));
        }
    }
    Ok(CheckReport::pass())
}

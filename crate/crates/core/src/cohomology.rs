//! Alternating cochains `C^k(g; V)` and the coboundary family
//!
//! ```text
//! d^s η(x_1,…,x_{k+1}) = Σ_i (−1)^{i+1} φ^{k+1+s} ρ(x_i) φ^{−k−2−s} η(βx_1,…,x̂_i,…,βx_{k+1})
//!                      + Σ_{i<j} (−1)^{i+j} η([x_i,x_j], βx_1,…,x̂_i,…,x̂_j,…,βx_{k+1})
//! ```
//!
//! Cochains are stored by their values on strictly increasing tuples of
//! basis indices.

use std::collections::BTreeMap;
use std::sync::Mutex;

use itertools::Itertools;
use thiserror::Error;

use crate::algebra::{CheckReport, Witness};
use crate::linalg::{axpy, vec_add, vec_is_zero, vec_scale, zero_vec, LinalgError, Matrix};
use crate::parallel::{find_first, map_indexed, Strategy};
use crate::representation::Representation;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CohomologyError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid cochain entry: {0}")]
    InvalidEntry(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Strictly increasing `k`-tuples of `0..n` in lexicographic order.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<S: Scalar> {
    k: usize,
    n: usize,
    m: usize,
    table: BTreeMap<Vec<usize>, Vec<S>>,
    ctx: S::Ctx,
}

impl<S: Scalar> Cochain<S> {
    pub fn zero(k: usize, n: usize, m: usize, ctx: &S::Ctx) -> Self {
        let table = increasing_tuples(n, k).into_iter().map(|t| (t, zero_vec(m, ctx))).collect();
        Cochain { k, n, m, table, ctx: ctx.clone() }
    }

    /// Missing tuples default to zero.
    pub fn from_entries(
        k: usize,
        n: usize,
        m: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, Vec<S>)>,
        ctx: &S::Ctx,
    ) -> Result<Self, CohomologyError> {
        let mut out = Self::zero(k, n, m, ctx);
        for (t, v) in entries {
            if t.len() != k || t.windows(2).any(|w| w[0] >= w[1]) || t.iter().any(|&i| i >= n) {
                return Err(CohomologyError::InvalidEntry(format!(
                    "indices {t:?} are not a strictly increasing {k}-tuple below {n}"
                )));
            }
            if v.len() != m {
                return Err(CohomologyError::InvalidEntry(format!("value for {t:?} has length {}, expected {m}", v.len())));
            }
            out.table.insert(t, v);
        }
        Ok(out)
    }

    /// One entry set to the basis vector `e_c` of `V`, the rest zero.
    pub fn basis(k: usize, n: usize, m: usize, tuple: Vec<usize>, c: usize, ctx: &S::Ctx) -> Result<Self, CohomologyError> {
        let mut v = zero_vec(m, ctx);
        if c >= m {
            return Err(CohomologyError::InvalidEntry(format!("component {c} out of range")));
        }
        v[c] = S::one(ctx);
        Self::from_entries(k, n, m, [(tuple, v)], ctx)
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    pub fn module_dim(&self) -> usize {
        self.m
    }

    pub fn ctx(&self) -> &S::Ctx {
        &self.ctx
    }

    pub fn get(&self, tuple: &[usize]) -> Option<&Vec<S>> {
        self.table.get(tuple)
    }

    /// Entries in lexicographic tuple order.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vec<S>)> {
        self.table.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.table.values().all(|v| vec_is_zero(v, &self.ctx))
    }

    pub fn add(&self, other: &Self) -> Result<Self, CohomologyError> {
        self.same_shape(other)?;
        let table = self.table.iter().map(|(t, v)| (t.clone(), vec_add(v, &other.table[t]))).collect();
        Ok(Cochain { table, ..self.clone() })
    }

    pub fn scale(&self, c: &S) -> Self {
        let table = self.table.iter().map(|(t, v)| (t.clone(), vec_scale(c, v))).collect();
        Cochain { table, ..self.clone() }
    }

    fn same_shape(&self, other: &Self) -> Result<(), CohomologyError> {
        if (self.k, self.n, self.m) != (other.k, other.n, other.m) {
            return Err(CohomologyError::DimensionMismatch(format!(
                "cochain shapes ({}, {}, {}) and ({}, {}, {})",
                self.k, self.n, self.m, other.k, other.n, other.m
            )));
        }
        Ok(())
    }

    /// Alternating multilinear extension: `Σ_T det(args restricted to T) η(T)`.
    pub fn eval(&self, args: &[Vec<S>]) -> Result<Vec<S>, CohomologyError> {
        if args.len() != self.k {
            return Err(CohomologyError::DimensionMismatch(format!("{} arguments for degree {}", args.len(), self.k)));
        }
        if let Some(a) = args.iter().find(|a| a.len() != self.n) {
            return Err(CohomologyError::DimensionMismatch(format!("argument of length {} in dimension {}", a.len(), self.n)));
        }
        let mut out = zero_vec(self.m, &self.ctx);
        for (t, v) in &self.table {
            if vec_is_zero(v, &self.ctx) {
                continue;
            }
            let minor: Vec<Vec<S>> = args.iter().map(|a| t.iter().map(|&i| a[i].clone()).collect()).collect();
            let coeff = if self.k == 0 { S::one(&self.ctx) } else { Matrix::from_rows(minor, &self.ctx)?.det()? };
            if !coeff.is_zero_in(&self.ctx) {
                axpy(&mut out, &coeff, v);
            }
        }
        Ok(out)
    }
}

/// `d^s` for a fixed representation, with memoised powers of `φ`.
pub struct Coboundary<'a, S: Scalar> {
    rep: &'a Representation<S>,
    s: usize,
    strategy: Strategy,
    powers: Mutex<BTreeMap<i64, Matrix<S>>>,
}

impl<'a, S: Scalar> Coboundary<'a, S> {
    pub fn new(rep: &'a Representation<S>, s: usize) -> Self {
        Self::with_strategy(rep, s, Strategy::default())
    }

    pub fn with_strategy(rep: &'a Representation<S>, s: usize, strategy: Strategy) -> Self {
        Coboundary { rep, s, strategy, powers: Mutex::new(BTreeMap::new()) }
    }

    fn phi_power(&self, e: i64) -> Result<Matrix<S>, CohomologyError> {
        if let Some(p) = self.powers.lock().expect("poisoned").get(&e) {
            return Ok(p.clone());
        }
        let p = self.rep.phi().pow(e)?;
        self.powers.lock().expect("poisoned").insert(e, p.clone());
        Ok(p)
    }

    /// `φ^{k+1+s} ρ(e_b) φ^{−k−2−s}` for every basis index `b`.
    pub fn conjugators(&self, k: usize) -> Result<Vec<Matrix<S>>, CohomologyError> {
        let e = (k + 1 + self.s) as i64;
        let (left, right) = (self.phi_power(e)?, self.phi_power(-e - 1)?);
        (0..self.rep.algebra().dim())
            .map(|b| Ok(left.mul(self.rep.rho_basis(b))?.mul(&right)?))
            .collect()
    }

    pub fn apply(&self, eta: &Cochain<S>) -> Result<Cochain<S>, CohomologyError> {
        let g = self.rep.algebra();
        let (n, m, k) = (g.dim(), self.rep.m(), eta.k);
        if eta.n != n || eta.m != m {
            return Err(CohomologyError::DimensionMismatch(format!(
                "cochain on ({}, {}) for a representation on ({n}, {m})",
                eta.n, eta.m
            )));
        }
        let ctx = g.ctx();
        if k + 1 > n {
            return Ok(Cochain::zero(k + 1, n, m, ctx));
        }
        let conj = self.conjugators(k)?;
        let twisted: Vec<Vec<S>> = (0..n).map(|b| g.twist().column(b)).collect();
        let tuples = increasing_tuples(n, k + 1);
        let values = map_indexed(tuples.len(), self.strategy, |idx| -> Result<Vec<S>, CohomologyError> {
            let t = &tuples[idx];
            let mut out = zero_vec(m, ctx);
            for i in 0..=k {
                let args: Vec<Vec<S>> =
                    t.iter().enumerate().filter(|&(l, _)| l != i).map(|(_, &b)| twisted[b].clone()).collect();
                let v = conj[t[i]].mul_vec(&eta.eval(&args)?)?;
                let sign = if i % 2 == 0 { S::one(ctx) } else { -S::one(ctx) };
                axpy(&mut out, &sign, &v);
            }
            for i in 0..=k {
                for j in i + 1..=k {
                    let mut args = vec![g.bracket(t[i], t[j]).to_vec()];
                    args.extend(
                        t.iter().enumerate().filter(|&(l, _)| l != i && l != j).map(|(_, &b)| twisted[b].clone()),
                    );
                    let sign = if (i + j) % 2 == 0 { S::one(ctx) } else { -S::one(ctx) };
                    axpy(&mut out, &sign, &eta.eval(&args)?);
                }
            }
            Ok(out)
        });
        let table = tuples.into_iter().zip(values).map(|(t, v)| Ok((t, v?))).collect::<Result<_, CohomologyError>>()?;
        Ok(Cochain { k: k + 1, n, m, table, ctx: ctx.clone() })
    }
}

pub fn coboundary<S: Scalar>(eta: &Cochain<S>, rep: &Representation<S>, s: usize) -> Result<Cochain<S>, CohomologyError> {
    Coboundary::new(rep, s).apply(eta)
}

/// `d^s(d^s η)`; zero whenever the operator squares to zero.
pub fn d_squared<S: Scalar>(eta: &Cochain<S>, rep: &Representation<S>, s: usize) -> Result<Cochain<S>, CohomologyError> {
    let d = Coboundary::new(rep, s);
    d.apply(&d.apply(eta)?)
}

/// Verifies `d^s∘d^s = 0` on every basis cochain of degree `k`. The
/// representation and algebra axioms are not enforced here, so the check
/// also serves as a probe on inputs that violate them.
pub fn check_d_squared<S: Scalar>(rep: &Representation<S>, k: usize, s: usize) -> CheckReport<S> {
    check_d_squared_with(rep, k, s, Strategy::default())
}

pub fn check_d_squared_with<S: Scalar>(rep: &Representation<S>, k: usize, s: usize, strategy: Strategy) -> CheckReport<S> {
    let (n, m) = (rep.algebra().dim(), rep.m());
    let ctx = rep.ctx();
    let d = Coboundary::with_strategy(rep, s, Strategy::Sequential);
    let inputs: Vec<(Vec<usize>, usize)> =
        increasing_tuples(n, k).into_iter().flat_map(|t| (0..m).map(move |c| (t.clone(), c))).collect();
    let hit = find_first(inputs.len(), strategy, |idx| {
        let (t, c) = &inputs[idx];
        let eta = Cochain::basis(k, n, m, t.clone(), *c, ctx).expect("valid basis cochain");
        let dd = match d.apply(&eta).and_then(|x| d.apply(&x)) {
            Ok(dd) => dd,
            Err(e) => return Some(Witness::new(format!("d2 error: {e}"), t.clone(), Vec::new())),
        };
        let bad = dd.entries().find(|(_, v)| !vec_is_zero(v, ctx)).map(|(out, v)| {
            Witness::new(format!("d2 eta{t:?}=e{c} at {out:?}"), out.clone(), v.clone())
        });
        bad
    });
    CheckReport::from_witness(hit.map(|(_, w)| w))
}

//! Representations `(ρ, φ)` of skew-Hom-Lie algebras:
//!
//! ```text
//! ρ(βx)∘φ = −φ∘ρ(x)
//! ρ([x,y])∘φ = ρ(βx)∘ρ(y) − ρ(βy)∘ρ(x)
//! ```
//!
//! When `φ² = −id` these are exactly the morphisms into
//! `(gl(V), [·,·]_φ, Ad_φ)`, which [`Representation::theorem_equivalence`]
//! checks side by side.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{check_morphism, AlgebraError, CheckReport, HomAlgebra, Witness};
use crate::constructions::{block_diagonal, build_gl_alpha, flatten, ConstructionError, GlContext};
use crate::linalg::{LinalgError, Matrix};
use crate::parallel::{find_first, Strategy};
use crate::scalar::{int, rat, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepresentationError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("phi is not invertible")]
    SingularPhi,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Representation<S: Scalar> {
    algebra: HomAlgebra<S>,
    m: usize,
    rho: Vec<Matrix<S>>,
    phi: Matrix<S>,
}

impl<S: Scalar> Representation<S> {
    pub fn new(algebra: HomAlgebra<S>, rho: Vec<Matrix<S>>, phi: Matrix<S>) -> Result<Self, RepresentationError> {
        let m = phi.rows();
        if !phi.is_square() {
            return Err(RepresentationError::DimensionMismatch("phi must be square".into()));
        }
        if rho.len() != algebra.dim() {
            return Err(RepresentationError::DimensionMismatch(format!(
                "{} matrices for an algebra of dimension {}",
                rho.len(),
                algebra.dim()
            )));
        }
        if rho.iter().any(|r| r.rows() != m || r.cols() != m) {
            return Err(RepresentationError::DimensionMismatch(format!("every rho(e_i) must be {m}x{m}")));
        }
        match phi.det() {
            Ok(d) if !d.is_zero_in(phi.ctx()) => {}
            _ => return Err(RepresentationError::SingularPhi),
        }
        Ok(Representation { algebra, m, rho, phi })
    }

    /// `ρ = 0` on `V = k^m`.
    pub fn zero(algebra: HomAlgebra<S>, phi: Matrix<S>) -> Result<Self, RepresentationError> {
        let m = phi.rows();
        let rho = vec![Matrix::zeros(m, m, algebra.ctx()); algebra.dim()];
        Self::new(algebra, rho, phi)
    }

    /// `ρ(B) = −B` on `(gl(V), [·,·]_α, Ad_α)` with `φ = α`.
    pub fn negated_identity(ctx: &GlContext<S>) -> Result<Self, RepresentationError> {
        let g = build_gl_alpha(ctx)?;
        let rho = ctx.basis().iter().map(Matrix::neg).collect();
        Self::new(g, rho, ctx.alpha().clone())
    }

    pub fn algebra(&self) -> &HomAlgebra<S> {
        &self.algebra
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn phi(&self) -> &Matrix<S> {
        &self.phi
    }

    pub fn rho_basis(&self, i: usize) -> &Matrix<S> {
        &self.rho[i]
    }

    pub fn ctx(&self) -> &S::Ctx {
        self.algebra.ctx()
    }

    /// `ρ(x) = Σ x_i ρ(e_i)`
    pub fn rho_eval(&self, x: &[S]) -> Result<Matrix<S>, RepresentationError> {
        if x.len() != self.algebra.dim() {
            return Err(RepresentationError::DimensionMismatch(format!(
                "vector of length {} in dimension {}",
                x.len(),
                self.algebra.dim()
            )));
        }
        let mut out = Matrix::zeros(self.m, self.m, self.ctx());
        for (xi, r) in x.iter().zip(&self.rho) {
            if !xi.is_zero_in(self.ctx()) {
                out = out.add(&r.scale(xi))?;
            }
        }
        Ok(out)
    }

    /// Simultaneous conjugation `ρ ↦ SρS⁻¹`, `φ ↦ SφS⁻¹`.
    pub fn conjugated(&self, s: &Matrix<S>) -> Result<Self, RepresentationError> {
        let s_inv = s.inverse()?;
        let conj = |a: &Matrix<S>| s.mul(a).and_then(|x| x.mul(&s_inv));
        let rho = self.rho.iter().map(conj).collect::<Result<_, _>>()?;
        Self::new(self.algebra.clone(), rho, conj(&self.phi)?)
    }

    /// Copy with `ρ(e_i)[r][c]` replaced.
    pub fn with_rho_entry(&self, i: usize, r: usize, c: usize, value: S) -> Self {
        let mut out = self.clone();
        out.rho[i].set(r, c, value);
        out
    }

    /// Both defining identities on basis vectors and basis pairs.
    pub fn check_representation(&self) -> CheckReport<S> {
        let n = self.algebra.dim();
        let beta = self.algebra.twist();
        let rho_beta: Vec<Matrix<S>> =
            (0..n).map(|i| self.rho_eval(&beta.column(i)).expect("dimension n")).collect();
        for (i, (rb, r)) in rho_beta.iter().zip(&self.rho).enumerate() {
            let lhs = rb.mul(&self.phi).expect("m x m");
            let rhs = self.phi.mul(r).expect("m x m");
            let r = lhs.add(&rhs).expect("m x m");
            if !r.is_zero() {
                return CheckReport::fail(Witness::new("eq2", vec![i], flatten(&r)));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.rho_eval(self.algebra.bracket(i, j)).expect("dimension n").mul(&self.phi).expect("m x m");
                let rhs = rho_beta[i]
                    .mul(&self.rho[j])
                    .and_then(|a| a.sub(&rho_beta[j].mul(&self.rho[i])?))
                    .expect("m x m");
                let r = lhs.sub(&rhs).expect("m x m");
                if !r.is_zero() {
                    return CheckReport::fail(Witness::new("eq3", vec![i, j], flatten(&r)));
                }
            }
        }
        CheckReport::pass()
    }

    /// `ρ` as an `m² × n` matrix into the matrix-unit basis of `gl(V)`.
    pub fn as_linear_map(&self) -> Matrix<S> {
        let cols: Vec<Vec<S>> = self.rho.iter().map(flatten).collect();
        Matrix::from_columns(&cols, self.ctx()).expect("equal column lengths")
    }

    /// Runs the representation check and the morphism check into
    /// `(gl(V), [·,·]_φ, Ad_φ)` with sign `−1`. Requires `φ² = −id`.
    pub fn theorem_equivalence(&self) -> Result<(CheckReport<S>, CheckReport<S>), RepresentationError> {
        let gl = GlContext::new(self.phi.clone())
            .map_err(|_| RepresentationError::Precondition("phi^2 != -id".into()))?;
        let target = build_gl_alpha(&gl)?;
        let morphism = check_morphism(&self.as_linear_map(), &self.algebra, &target, -1)?;
        Ok((self.check_representation(), morphism))
    }
}

/// Options for [`search_representation`].
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub budget: usize,
    pub seed: u64,
    /// Skip candidates with `ρ = 0`.
    pub nonzero: bool,
    pub strategy: Strategy,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: 10_000, seed: 0, nonzero: true, strategy: Strategy::default() }
    }
}

/// Values of `θ` for which `√(1+θ²)` is rational, so `α(θ)` lives in every
/// backend.
pub fn rational_alpha_thetas() -> Vec<Rational> {
    vec![int(0), rat(3, 4), rat(4, 3), rat(5, 12), rat(12, 5)]
}

fn rational_alpha<S: Scalar>(theta: &Rational, ctx: &S::Ctx) -> Matrix<S> {
    let s = crate::scalar::rational_is_square(&(int(1) + theta * theta))
        .ok()
        .flatten()
        .expect("rational member of the alpha family");
    let q = |v: Rational| S::from_rational(&v, ctx);
    Matrix::from_rows(vec![vec![q(-theta.clone()), q(s.clone())], vec![q(-s), q(theta.clone())]], ctx).expect("2x2")
}

fn pad_identity<S: Scalar>(a: &Matrix<S>, m: usize) -> Matrix<S> {
    let mut out = Matrix::identity(m, a.ctx());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j).clone());
        }
    }
    out
}

/// Candidate `φ` matrices built from `±α(θ)` blocks: `⌊m/2⌋` blocks padded
/// with `[1]` when `m` is odd, and for `m ≥ 4` a single block padded with
/// the identity. The latter have non-central `φ²`, which a nonzero `ρ`
/// needs whenever `β² = −id`.
pub fn phi_candidates<S: Scalar>(m: usize, ctx: &S::Ctx) -> Vec<Matrix<S>> {
    let mut out = Vec::new();
    if m < 2 {
        out.push(Matrix::identity(m, ctx));
        return out;
    }
    for theta in rational_alpha_thetas() {
        for sign in [1, -1] {
            let block = rational_alpha::<S>(&theta, ctx).scale(&S::from_int(sign, ctx));
            out.push(pad_identity(&block_diagonal(&block, m / 2), m));
            if m >= 4 {
                out.push(pad_identity(&block, m));
            }
        }
    }
    out
}

/// Deterministic candidate number `index` for the given seed.
pub fn representation_candidate<S: Scalar>(
    g: &HomAlgebra<S>,
    m: usize,
    seed: u64,
    index: usize,
) -> Option<Representation<S>> {
    let ctx = g.ctx();
    let phis = phi_candidates::<S>(m, ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let phi = phis[rng.gen_range(0..phis.len())].clone();
    if index == 0 {
        return Representation::zero(g.clone(), phi).ok();
    }
    let density = [0.15, 0.3, 0.5][rng.gen_range(0..3)];
    let rho = (0..g.dim())
        .map(|_| {
            let mut r = Matrix::zeros(m, m, ctx);
            for i in 0..m {
                for j in 0..m {
                    if rng.gen_bool(density) {
                        r.set(i, j, S::from_int(if rng.gen_bool(0.5) { 1 } else { -1 }, ctx));
                    }
                }
            }
            r
        })
        .collect();
    Representation::new(g.clone(), rho, phi).ok()
}

/// Randomised search over sparse `{−1, 0, 1}` candidates; returns the
/// lowest-index candidate passing [`Representation::check_representation`].
pub fn search_representation<S: Scalar>(
    g: &HomAlgebra<S>,
    m: usize,
    config: &SearchConfig,
) -> Option<Representation<S>> {
    if m == 0 {
        return None;
    }
    find_first(config.budget, config.strategy, |i| {
        let rep = representation_candidate(g, m, config.seed, i)?;
        if config.nonzero && rep.rho.iter().all(Matrix::is_zero) {
            return None;
        }
        rep.check_representation().passed.then_some(rep)
    })
    .map(|(_, rep)| rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{alpha_theta, alpha_zero, build_semi_euclidean};
    use crate::linalg::int_vec;
    use crate::scalar::QuadExt;

    fn gl0() -> GlContext<Rational> {
        GlContext::new(alpha_zero(&())).unwrap()
    }

    #[test]
    fn rho_eval_is_linear() {
        let rep = Representation::negated_identity(&gl0()).unwrap();
        assert_eq!(&rep.rho_eval(&rep.algebra().basis(2)).unwrap(), rep.rho_basis(2));
        assert!(rep.rho_eval(&int_vec(&[0, 0, 0, 0], &())).unwrap().is_zero());
        let sum = rep.rho_eval(&int_vec(&[1, 1, 0, 0], &())).unwrap();
        assert_eq!(sum, rep.rho_basis(0).add(rep.rho_basis(1)).unwrap());
        assert!(rep.rho_eval(&int_vec(&[1], &())).is_err());
    }

    #[test]
    fn zero_representation_passes() {
        let (g, _) = build_semi_euclidean(&int(1)).unwrap();
        let phi = alpha_theta(&int(1));
        let rep = Representation::zero(g, phi).unwrap();
        assert!(rep.check_representation().passed);
        let (r, m) = rep.theorem_equivalence().unwrap();
        assert!(r.passed && m.passed);
    }

    #[test]
    fn negated_identity_is_a_representation() {
        for theta in [int(0), int(1), rat(1, 2)] {
            let ctx = GlContext::new(alpha_theta(&theta)).unwrap();
            let rep = Representation::<QuadExt>::negated_identity(&ctx).unwrap();
            let (r, m) = rep.theorem_equivalence().unwrap();
            assert!(r.passed && m.passed, "theta = {theta}");
        }
    }

    #[test]
    fn mutation_breaks_both_sides() {
        let rep = Representation::negated_identity(&gl0()).unwrap();
        let bad = rep.with_rho_entry(0, 0, 1, int(5));
        let (r, m) = bad.theorem_equivalence().unwrap();
        assert!(!r.passed && !m.passed);
        let w = r.witness.unwrap();
        assert!(w.label == "eq2" || w.label == "eq3");
    }

    #[test]
    fn theorem_requires_complex_structure() {
        let g = build_gl_alpha(&gl0()).unwrap();
        let rep = Representation::zero(g, Matrix::identity(2, &())).unwrap();
        assert!(matches!(rep.theorem_equivalence(), Err(RepresentationError::Precondition(_))));
    }

    #[test]
    fn singular_phi_rejected() {
        let g = build_gl_alpha(&gl0()).unwrap();
        assert_eq!(Representation::zero(g, Matrix::zeros(2, 2, &())), Err(RepresentationError::SingularPhi));
    }

    #[test]
    fn rho_intertwines_twist() {
        // rho∘beta = Ad_phi∘rho for a passing representation with phi^2 = -id
        let rep = Representation::negated_identity(&gl0()).unwrap();
        let g = rep.algebra();
        for i in 0..g.dim() {
            let lhs = rep.rho_eval(&g.twist().column(i)).unwrap();
            let phi = rep.phi();
            let rhs = phi.mul(rep.rho_basis(i)).unwrap().mul(phi).unwrap();
            assert_eq!(lhs, rhs);
            // eq2 applied twice: rho(beta^2 x) phi^2 = phi^2 rho(x)
            let b2 = g.twist().mul(g.twist()).unwrap();
            let phi2 = phi.mul(phi).unwrap();
            let l2 = rep.rho_eval(&b2.column(i)).unwrap().mul(&phi2).unwrap();
            assert_eq!(l2, phi2.mul(rep.rho_basis(i)).unwrap());
        }
    }

    #[test]
    fn conjugation_preserves_verdict() {
        let rep = Representation::negated_identity(&gl0()).unwrap();
        let s = Matrix::from_int_rows(&[&[2, 1], &[1, 1]], &()).unwrap();
        let c = rep.conjugated(&s).unwrap();
        assert!(c.check_representation().passed);
        let bad = rep.with_rho_entry(1, 1, 0, int(1));
        assert_eq!(bad.check_representation().passed, bad.conjugated(&s).unwrap().check_representation().passed);
    }

    fn abelian_plane() -> HomAlgebra<Rational> {
        HomAlgebra::from_upper(2, [], alpha_zero::<Rational>(&())).unwrap()
    }

    #[test]
    fn central_phi_square_forces_zero() {
        // beta^2 = -id and phi^2 = -id: eq2 twice gives rho = -rho
        let g = abelian_plane();
        let cfg = SearchConfig { budget: 4_000, seed: 1, nonzero: true, strategy: Strategy::default() };
        assert_eq!(search_representation(&g, 2, &cfg), None);
        let phi = alpha_zero::<Rational>(&());
        for v in itertools::Itertools::multi_cartesian_product(itertools::repeat_n([-1i64, 0, 1], 4)) {
            let a = Matrix::from_int_rows(&[&v[0..2], &v[2..4]], &()).unwrap();
            let b = phi.mul(&a).unwrap().mul(&phi).unwrap();
            let rep = Representation::new(g.clone(), vec![a.clone(), b], phi.clone()).unwrap();
            assert_eq!(rep.check_representation().passed, a.is_zero());
        }
    }

    #[test]
    fn abelian_search_finds_nonzero() {
        let g = abelian_plane();
        let cfg = SearchConfig { budget: 20_000, seed: 7, nonzero: true, strategy: Strategy::default() };
        let rep = search_representation(&g, 3, &cfg).expect("a nonzero representation");
        assert!(rep.check_representation().passed);
        assert!(!rep.rho.iter().all(Matrix::is_zero));
        let phi2 = rep.phi().mul(rep.phi()).unwrap();
        assert!(!phi2.is_identity() && !phi2.neg().is_identity());
        let seq = SearchConfig { strategy: Strategy::Sequential, ..cfg };
        assert_eq!(search_representation(&g, 3, &seq), Some(rep));
    }

    #[test]
    fn zero_candidate_is_always_a_hit() {
        let (g, _) = build_semi_euclidean(&int(1)).unwrap();
        let cfg = SearchConfig { budget: 1, seed: 3, nonzero: false, strategy: Strategy::Sequential };
        let rep = search_representation(&g, 2, &cfg).unwrap();
        assert!(rep.rho.iter().all(Matrix::is_zero));
    }

    #[test]
    fn phi_candidates_are_invertible() {
        for m in 1..=4 {
            for phi in phi_candidates::<Rational>(m, &()) {
                assert!(!phi.det().unwrap().is_zero_in(&()));
            }
        }
    }
}

//! Concrete algebra families: R³ with a twisted cross product, `gl(V)` with
//! the bracket `[A,B]_α = αAαBα − αBαAα` and twist `Ad_α(B) = αBα`, and the
//! semi-Euclidean 4-space with bracket `[x,y]_θ = Px∧r∧y − Py∧r∧x`.
//! Also the pseudo-adjoint map `ad*_x y = −[x,y]`.

use itertools::iproduct;
use thiserror::Error;

use crate::algebra::{check_morphism, AlgebraError, CheckReport, HomAlgebra, Witness};
use crate::linalg::{cross3, unit_vec, vec_is_zero, vec_sub, wedge3, LinalgError, Matrix};
use crate::parallel::{find_first, Strategy};
use crate::scalar::{int, QuadExt, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no Hom-Jacobi counterexample among the basis triples of gl({m}) with twist Ad_alpha^2")]
    NoCounterexample { m: usize },
    #[error("transcribed matrix disagrees with its derivation: {0}")]
    Transcription(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `1 + θ²`
pub fn theta_discriminant(theta: &Rational) -> Rational {
    int(1) + theta * theta
}

/// `α(θ) = [[−θ, √(1+θ²)], [−√(1+θ²), θ]]` over `Q(√(1+θ²))`.
pub fn alpha_theta(theta: &Rational) -> Matrix<QuadExt> {
    let d = theta_discriminant(theta);
    let s = QuadExt::sqrt_d(&d);
    let t = QuadExt::rational(theta.clone(), &d);
    Matrix::from_rows(vec![vec![-t.clone(), s.clone()], vec![-s, t]], &d).expect("2x2")
}

/// `α(0) = [[0, 1], [−1, 0]]` in any backend.
pub fn alpha_zero<S: Scalar>(ctx: &S::Ctx) -> Matrix<S> {
    Matrix::from_int_rows(&[&[0, 1], &[-1, 0]], ctx).expect("2x2")
}

/// Block-diagonal `α ⊕ … ⊕ α` with `blocks` copies.
pub fn block_diagonal<S: Scalar>(block: &Matrix<S>, blocks: usize) -> Matrix<S> {
    let b = block.rows();
    let mut m = Matrix::zeros(b * blocks, b * blocks, block.ctx());
    for k in 0..blocks {
        for i in 0..b {
            for j in 0..b {
                m.set(k * b + i, k * b + j, block.get(i, j).clone());
            }
        }
    }
    m
}

/// Matrix unit `e_pq` of size `m`.
pub fn matrix_unit<S: Scalar>(m: usize, p: usize, q: usize, ctx: &S::Ctx) -> Matrix<S> {
    let mut e = Matrix::zeros(m, m, ctx);
    e.set(p, q, S::one(ctx));
    e
}

/// Coordinates of a matrix in the row-major matrix-unit basis.
pub fn flatten<S: Scalar>(a: &Matrix<S>) -> Vec<S> {
    a.entries().to_vec()
}

pub fn unflatten<S: Scalar>(v: &[S], m: usize, ctx: &S::Ctx) -> Matrix<S> {
    Matrix::from_rows(v.chunks(m).map(<[S]>::to_vec).collect(), ctx).expect("square")
}

/// `α` with `α² = −id`, together with the matrix-unit basis of `gl(V)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlContext<S: Scalar> {
    m: usize,
    alpha: Matrix<S>,
}

impl<S: Scalar> GlContext<S> {
    pub fn new(alpha: Matrix<S>) -> Result<Self, ConstructionError> {
        if !alpha.is_square() {
            return Err(ConstructionError::Precondition("alpha must be square".into()));
        }
        if !alpha.mul(&alpha)?.add(&Matrix::identity(alpha.rows(), alpha.ctx()))?.is_zero() {
            return Err(ConstructionError::Precondition("alpha^2 != -id".into()));
        }
        Ok(GlContext { m: alpha.rows(), alpha })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn alpha(&self) -> &Matrix<S> {
        &self.alpha
    }

    pub fn ctx(&self) -> &S::Ctx {
        self.alpha.ctx()
    }

    /// Basis element `k` is `e_pq` with `k = p·m + q`.
    pub fn basis(&self) -> Vec<Matrix<S>> {
        iproduct!(0..self.m, 0..self.m).map(|(p, q)| matrix_unit(self.m, p, q, self.ctx())).collect()
    }

    /// `αAαBα − αBαAα`
    pub fn bracket(&self, a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
        let al = &self.alpha;
        let aab = al.mul(a).and_then(|x| x.mul(al)).and_then(|x| x.mul(b)).and_then(|x| x.mul(al));
        let aba = al.mul(b).and_then(|x| x.mul(al)).and_then(|x| x.mul(a)).and_then(|x| x.mul(al));
        aab.and_then(|x| x.sub(&aba?)).expect("matching dimensions")
    }

    /// `Ad_α(B) = αBα`
    pub fn ad(&self, b: &Matrix<S>) -> Matrix<S> {
        self.alpha.mul(b).and_then(|x| x.mul(&self.alpha)).expect("matching dimensions")
    }

    /// Matrix of `Ad_α` in the matrix-unit basis: column `k` holds the
    /// coordinates of `Ad_α(e_k)`.
    pub fn ad_matrix(&self) -> Matrix<S> {
        let cols: Vec<Vec<S>> = self.basis().iter().map(|e| flatten(&self.ad(e))).collect();
        Matrix::from_columns(&cols, self.ctx()).expect("square")
    }

    /// Cyclic sum of `AαBCα − αCAαB − BαACα + αCBαA`, the Hom-Jacobi
    /// residual of `(gl(V), [·,·]_α, Ad_α²)` expanded by hand.
    pub fn ad_squared_residual_direct(&self, a: &Matrix<S>, b: &Matrix<S>, c: &Matrix<S>) -> Matrix<S> {
        let al = &self.alpha;
        let prod = |ms: &[&Matrix<S>]| {
            ms[1..].iter().fold(ms[0].clone(), |acc, m| acc.mul(m).expect("matching dimensions"))
        };
        let term = |a: &Matrix<S>, b: &Matrix<S>, c: &Matrix<S>| {
            let t1 = prod(&[a, al, b, c, al]);
            let t2 = prod(&[al, c, a, al, b]);
            let t3 = prod(&[b, al, a, c, al]);
            let t4 = prod(&[al, c, b, al, a]);
            t1.sub(&t2).and_then(|x| x.sub(&t3)).and_then(|x| x.add(&t4)).expect("matching dimensions")
        };
        let s = term(a, b, c).add(&term(b, c, a)).and_then(|x| x.add(&term(c, a, b)));
        s.expect("matching dimensions")
    }
}

/// The `m²`-dimensional algebra `(gl(V), [·,·]_α, Ad_α)`.
pub fn build_gl_alpha<S: Scalar>(ctx: &GlContext<S>) -> Result<HomAlgebra<S>, ConstructionError> {
    let basis = ctx.basis();
    let n = basis.len();
    Ok(HomAlgebra::from_fn(n, ctx.ad_matrix(), |i, j| flatten(&ctx.bracket(&basis[i], &basis[j])))?)
}

/// First basis triple (pairwise distinct indices, lexicographic) whose
/// Hom-Jacobi residual with twist `Ad_α²` is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct GlCounterexample<S: Scalar> {
    pub triple: [usize; 3],
    pub residual: Vec<S>,
}

pub fn ad_alpha_squared_counterexample<S: Scalar>(ctx: &GlContext<S>) -> Result<GlCounterexample<S>, ConstructionError> {
    ad_alpha_squared_counterexample_with(ctx, Strategy::default())
}

pub fn ad_alpha_squared_counterexample_with<S: Scalar>(
    ctx: &GlContext<S>,
    strategy: Strategy,
) -> Result<GlCounterexample<S>, ConstructionError> {
    let ad = ctx.ad_matrix();
    let g = build_gl_alpha(ctx)?.with_twist(ad.mul(&ad)?)?;
    let n = g.dim();
    let basis: Vec<Vec<S>> = (0..n).map(|i| g.basis(i)).collect();
    let hit = find_first(n * n * n, strategy, |t| {
        let (i, j, k) = (t / (n * n), (t / n) % n, t % n);
        if i == j || j == k || i == k {
            return None;
        }
        let r = g.jacobi_residual(&basis[i], &basis[j], &basis[k]).expect("basis vectors");
        (!vec_is_zero(&r, g.ctx())).then_some(GlCounterexample { triple: [i, j, k], residual: r })
    });
    hit.map(|(_, c)| c).ok_or(ConstructionError::NoCounterexample { m: ctx.m() })
}

/// Data of the semi-Euclidean family at a rational `θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiEuclideanContext {
    pub theta: Rational,
    /// `1 + θ²`
    pub d: Rational,
    /// `√(1+θ²)`
    pub s: QuadExt,
    pub p: Matrix<QuadExt>,
    /// `(−θ, s, −s, θ)`
    pub r: Vec<QuadExt>,
}

impl SemiEuclideanContext {
    pub fn new(theta: &Rational) -> Self {
        let d = theta_discriminant(theta);
        let s = QuadExt::sqrt_d(&d);
        let t = QuadExt::rational(theta.clone(), &d);
        let r = vec![-t.clone(), s.clone(), -s.clone(), t];
        SemiEuclideanContext { theta: theta.clone(), p: p_matrix(theta), d, s, r }
    }

    pub fn scalar(&self, q: &Rational) -> QuadExt {
        QuadExt::rational(q.clone(), &self.d)
    }

    pub fn int_vec(&self, v: &[i64]) -> Vec<QuadExt> {
        crate::linalg::int_vec(v, &self.d)
    }

    pub fn apply_p(&self, x: &[QuadExt]) -> Result<Vec<QuadExt>, LinalgError> {
        self.p.mul_vec(x)
    }

    /// Determinant path: `Px∧r∧y − Py∧r∧x`.
    pub fn bracket_determinant(&self, x: &[QuadExt], y: &[QuadExt]) -> Result<Vec<QuadExt>, LinalgError> {
        let lhs = wedge3(&self.apply_p(x)?, &self.r, y, &self.d)?;
        let rhs = wedge3(&self.apply_p(y)?, &self.r, x, &self.d)?;
        Ok(vec_sub(&lhs, &rhs))
    }

    /// `(a, 0, 0, a)` with `a = −√(1+θ²)[(x₁−x₄)(y₂+y₃) − (x₂+x₃)(y₁−y₄)]`,
    /// the closed form as usually quoted. It omits the `θ` term and only
    /// matches the determinant path when `θ = 0` or `x₂y₃ = x₃y₂`.
    pub fn bracket_closed_form_quoted(&self, x: &[QuadExt], y: &[QuadExt]) -> Vec<QuadExt> {
        let a = self.quoted_coefficient(x, y);
        let z = QuadExt::zero(&self.d);
        vec![a.clone(), z.clone(), z, a]
    }

    fn quoted_coefficient(&self, x: &[QuadExt], y: &[QuadExt]) -> QuadExt {
        let c = |i: usize| x[i].clone();
        let e = |i: usize| y[i].clone();
        let inner = (c(0) - c(3)) * (e(1) + e(2)) - (c(1) + c(2)) * (e(0) - e(3));
        -(self.s.clone() * inner)
    }

    /// `(a, 0, 0, a)` with the full coefficient
    /// `a = −√(1+θ²)[(x₁−x₄)(y₂+y₃) − (x₂+x₃)(y₁−y₄)] + 2θ(x₃y₂ − x₂y₃)`.
    pub fn bracket_closed_form(&self, x: &[QuadExt], y: &[QuadExt]) -> Vec<QuadExt> {
        let two_theta = self.scalar(&(int(2) * &self.theta));
        let extra = two_theta * (x[2].clone() * y[1].clone() - x[1].clone() * y[2].clone());
        let a = self.quoted_coefficient(x, y) + extra;
        let z = QuadExt::zero(&self.d);
        vec![a.clone(), z.clone(), z, a]
    }
}

/// `P(θ)` entered entry by entry from its closed form.
pub fn p_matrix(theta: &Rational) -> Matrix<QuadExt> {
    let d = theta_discriminant(theta);
    let s = QuadExt::sqrt_d(&d);
    let q = |v: &Rational| QuadExt::rational(v.clone(), &d);
    let t2 = q(&(theta * theta));
    let ts = q(theta) * s.clone();
    let one_t2 = q(&d);
    Matrix::from_rows(
        vec![
            vec![t2.clone(), ts.clone(), -ts.clone(), -one_t2.clone()],
            vec![-ts.clone(), -t2.clone(), one_t2.clone(), ts.clone()],
            vec![ts.clone(), one_t2.clone(), -t2.clone(), -ts.clone()],
            vec![-one_t2, -ts.clone(), ts, t2],
        ],
        &d,
    )
    .expect("4x4")
}

/// The algebra `(R⁴₂, [·,·]_θ, P)`. Fails if `P(θ)` disagrees with the
/// matrix of `Ad_{α(θ)}` in the basis `(e11, e12, e21, e22)`.
pub fn build_semi_euclidean(theta: &Rational) -> Result<(HomAlgebra<QuadExt>, SemiEuclideanContext), ConstructionError> {
    let se = SemiEuclideanContext::new(theta);
    let derived = GlContext::new(alpha_theta(theta))?.ad_matrix();
    if derived != se.p {
        return Err(ConstructionError::Transcription(format!(
            "P({}) differs from the matrix of Ad_alpha",
            crate::scalar::format_rational(theta)
        )));
    }
    let g = HomAlgebra::from_fn(4, se.p.clone(), |i, j| {
        let (ei, ej) = (unit_vec(4, i, &se.d), unit_vec(4, j, &se.d));
        se.bracket_determinant(&ei, &ej).expect("4-vectors")
    })?;
    Ok((g, se))
}

/// `(R³, A∘×, A)` for orthogonal `A`.
pub fn build_r3_cross<S: Scalar>(a: &Matrix<S>) -> Result<HomAlgebra<S>, ConstructionError> {
    if a.rows() != 3 || a.cols() != 3 {
        return Err(ConstructionError::Precondition("A must be 3x3".into()));
    }
    if !a.mul(&a.transpose())?.is_identity() {
        return Err(ConstructionError::Precondition("A A^T != id".into()));
    }
    let ctx = a.ctx().clone();
    Ok(HomAlgebra::from_fn(3, a.clone(), |i, j| {
        let c = cross3(&unit_vec(3, i, &ctx), &unit_vec(3, j, &ctx)).expect("3-vectors");
        a.mul_vec(&c).expect("3x3")
    })?)
}

/// Rotation by 90° about `e3`.
pub fn rotation_e3<S: Scalar>(ctx: &S::Ctx) -> Matrix<S> {
    Matrix::from_int_rows(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1]], ctx).expect("3x3")
}

/// Matrix of `y ↦ ad*_x y = −[x, y]`.
pub fn pseudo_adjoint<S: Scalar>(g: &HomAlgebra<S>, x: &[S]) -> Result<Matrix<S>, ConstructionError> {
    let cols: Vec<Vec<S>> = (0..g.dim())
        .map(|j| g.bracket_eval(x, &g.basis(j)).map(|v| crate::linalg::vec_neg(&v)))
        .collect::<Result<_, _>>()?;
    Ok(Matrix::from_columns(&cols, g.ctx())?)
}

/// `ad*_{[x,y]}∘β = −ad*_{βx}∘ad*_y + ad*_{βy}∘ad*_x` on basis pairs.
pub fn check_pseudo_adjoint_identity<S: Scalar>(g: &HomAlgebra<S>) -> Result<CheckReport<S>, ConstructionError> {
    let n = g.dim();
    let beta = g.twist();
    let ad: Vec<Matrix<S>> = (0..n).map(|i| pseudo_adjoint(g, &g.basis(i))).collect::<Result<_, _>>()?;
    let ad_beta: Vec<Matrix<S>> = (0..n).map(|i| pseudo_adjoint(g, &beta.column(i))).collect::<Result<_, _>>()?;
    for (i, j) in iproduct!(0..n, 0..n) {
        let lhs = pseudo_adjoint(g, g.bracket(i, j))?.mul(beta)?;
        let rhs = ad_beta[j].mul(&ad[i])?.sub(&ad_beta[i].mul(&ad[j])?)?;
        let r = lhs.sub(&rhs)?;
        if !r.is_zero() {
            return Ok(CheckReport::fail(Witness::new("pseudo-adjoint", vec![i, j], flatten(&r))));
        }
    }
    Ok(CheckReport::pass())
}

/// For `β² = −id`: `ad*` is a morphism into `(gl(g), [·,·]_β, Ad_β)`, i.e.
/// `ad*_{βx} = Ad_β∘ad*_x` and `ad*_{[x,y]} = −[ad*_x, ad*_y]_β`.
pub fn check_pseudo_adjoint_morphism<S: Scalar>(g: &HomAlgebra<S>) -> Result<CheckReport<S>, ConstructionError> {
    let gl = GlContext::new(g.twist().clone()).map_err(|_| {
        ConstructionError::Precondition("pseudo-adjoint morphism needs twist^2 = -id".into())
    })?;
    let target = build_gl_alpha(&gl)?;
    let cols: Vec<Vec<S>> =
        (0..g.dim()).map(|i| pseudo_adjoint(g, &g.basis(i)).map(|m| flatten(&m))).collect::<Result<_, _>>()?;
    let f = Matrix::from_columns(&cols, g.ctx())?;
    Ok(check_morphism(&f, g, &target, -1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Verdict;
    use crate::linalg::{int_vec, vec_add};
    use crate::scalar::rat;
    use crate::parallel::Strategy as Exec;
    use proptest::prelude::*;

    fn gl0() -> GlContext<Rational> {
        GlContext::new(alpha_zero(&())).unwrap()
    }

    #[test]
    fn ad_alpha_of_e11() {
        let ctx = gl0();
        let e = ctx.basis();
        assert_eq!(ctx.ad(&e[0]), e[3].neg());
        let g = build_gl_alpha(&ctx).unwrap();
        assert_eq!(g.twist_apply(&g.basis(0)).unwrap(), int_vec(&[0, 0, 0, -1], &()));
    }

    #[test]
    fn bracket_e11_e22() {
        let ctx = gl0();
        let e = ctx.basis();
        // oracle: explicit products
        let al = ctx.alpha();
        let direct = al.mul(&e[0]).unwrap().mul(al).unwrap().mul(&e[3]).unwrap().mul(al).unwrap().sub(
            &al.mul(&e[3]).unwrap().mul(al).unwrap().mul(&e[0]).unwrap().mul(al).unwrap(),
        );
        assert_eq!(direct.unwrap(), e[1].add(&e[2]).unwrap());
        let g = build_gl_alpha(&ctx).unwrap();
        assert_eq!(g.bracket(0, 3), int_vec::<Rational>(&[0, 1, 1, 0], &()).as_slice());
    }

    #[test]
    fn gl_alpha_is_skew() {
        assert_eq!(build_gl_alpha(&gl0()).unwrap().classify().verdict, Verdict::SkewHomLie);
        let g1 = build_gl_alpha(&GlContext::new(alpha_theta(&int(1))).unwrap()).unwrap();
        assert_eq!(g1.classify().verdict, Verdict::SkewHomLie);
    }

    #[test]
    fn gl_rejects_bad_alpha() {
        assert!(matches!(
            GlContext::new(Matrix::<Rational>::identity(2, &())),
            Err(ConstructionError::Precondition(_))
        ));
    }

    #[test]
    fn ad_squared_is_identity() {
        for theta in [int(0), int(1), rat(1, 2)] {
            let ad = GlContext::new(alpha_theta(&theta)).unwrap().ad_matrix();
            assert!(ad.mul(&ad).unwrap().is_identity());
        }
    }

    #[test]
    fn gl2_has_no_ad_squared_counterexample() {
        for theta in [int(0), int(1)] {
            let ctx = GlContext::new(alpha_theta(&theta)).unwrap();
            assert_eq!(ad_alpha_squared_counterexample(&ctx), Err(ConstructionError::NoCounterexample { m: 2 }));
        }
    }

    #[test]
    fn gl4_has_ad_squared_counterexample() {
        let ctx = GlContext::new(block_diagonal(&alpha_zero::<Rational>(&()), 2)).unwrap();
        let c = ad_alpha_squared_counterexample(&ctx).unwrap();
        assert!(!vec_is_zero(&c.residual, &()));
        let e = ctx.basis();
        let direct = ctx.ad_squared_residual_direct(&e[c.triple[0]], &e[c.triple[1]], &e[c.triple[2]]);
        assert_eq!(flatten(&direct), c.residual);
        assert_eq!(
            ad_alpha_squared_counterexample_with(&ctx, Exec::Sequential).unwrap(),
            ad_alpha_squared_counterexample_with(&ctx, Exec::Parallel).unwrap()
        );
    }

    #[test]
    fn repeated_argument_residual_vanishes() {
        let ctx = gl0();
        let e = ctx.basis();
        assert!(ctx.ad_squared_residual_direct(&e[0], &e[0], &e[1]).is_zero());
    }

    #[test]
    fn semi_euclidean_theta_zero() {
        let se = SemiEuclideanContext::new(&int(0));
        let p0 = Matrix::<QuadExt>::from_int_rows(&[&[0, 0, 0, -1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[-1, 0, 0, 0]], &int(1)).unwrap();
        assert_eq!(se.p, p0);
        assert_eq!(se.r, se.int_vec(&[0, 1, -1, 0]));
    }

    #[test]
    fn p_fixes_minus_r() {
        for theta in [int(0), int(1), rat(1, 2)] {
            let se = SemiEuclideanContext::new(&theta);
            assert_eq!(se.apply_p(&se.r).unwrap(), crate::linalg::vec_neg(&se.r));
            assert!(se.p.mul(&se.p).unwrap().is_identity());
        }
    }

    #[test]
    fn semi_euclidean_is_skew() {
        for theta in [int(0), int(1), rat(1, 2), rat(3, 4)] {
            let (g, _) = build_semi_euclidean(&theta).unwrap();
            let c = g.classify();
            assert_eq!(c.verdict, Verdict::SkewHomLie, "theta = {theta}");
            assert!(c.regular);
        }
    }

    #[test]
    fn semi_euclidean_e1_e2() {
        let (g, se) = build_semi_euclidean(&int(0)).unwrap();
        assert_eq!(g.bracket(0, 1), se.int_vec(&[-1, 0, 0, -1]).as_slice());
    }

    #[test]
    fn p_not_orthogonal_off_zero() {
        let se = SemiEuclideanContext::new(&int(1));
        let ptp = se.p.transpose().mul(&se.p).unwrap();
        assert!(!ptp.is_identity());
        let se0 = SemiEuclideanContext::new(&int(0));
        assert!(se0.p.transpose().mul(&se0.p).unwrap().is_identity());
        // alpha(1) alpha(1)^T has off-diagonal 2 theta sqrt(1+theta^2)
        let a = alpha_theta(&int(1));
        let aat = a.mul(&a.transpose()).unwrap();
        assert_eq!(aat.get(0, 1), &(QuadExt::sqrt_d(&int(2)) * QuadExt::from_int(2, &int(2))));
        assert_eq!(aat.get(0, 0), &QuadExt::from_int(3, &int(2)));
    }

    #[test]
    fn r3_family() {
        let diag = Matrix::<Rational>::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]], &()).unwrap();
        assert_eq!(build_r3_cross::<Rational>(&diag).unwrap().classify().verdict, Verdict::SkewHomLie);
        assert!(build_r3_cross::<Rational>(&Matrix::<Rational>::identity(3, &())).unwrap().classify().is_hom_lie());
        assert_eq!(build_r3_cross::<Rational>(&rotation_e3(&())).unwrap().classify().verdict, Verdict::HomLie);
        let bad = Matrix::<Rational>::identity(3, &()).scale(&int(2));
        assert!(matches!(build_r3_cross(&bad), Err(ConstructionError::Precondition(_))));
    }

    #[test]
    fn pseudo_adjoint_of_e1() {
        let g = build_r3_cross::<Rational>(&Matrix::<Rational>::identity(3, &())).unwrap();
        let ad = pseudo_adjoint(&g, &g.basis(0)).unwrap();
        assert_eq!(ad.column(1), int_vec(&[0, 0, -1], &()));
        assert_eq!(ad.column(2), int_vec(&[0, 1, 0], &()));
        let x = int_vec(&[2, -1, 5], &());
        assert!(vec_is_zero(&ad_apply(&g, &x, &x), &()));
    }

    fn ad_apply(g: &HomAlgebra<Rational>, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        pseudo_adjoint(g, x).unwrap().mul_vec(y).unwrap()
    }

    #[test]
    fn pseudo_adjoint_identity_holds() {
        let (se, _) = build_semi_euclidean(&int(0)).unwrap();
        assert!(check_pseudo_adjoint_identity(&se).unwrap().passed);
        assert!(check_pseudo_adjoint_identity(&build_gl_alpha(&gl0()).unwrap()).unwrap().passed);
        let abelian = HomAlgebra::from_upper(2, [], alpha_zero::<Rational>(&())).unwrap();
        assert!(check_pseudo_adjoint_identity(&abelian).unwrap().passed);
    }

    #[test]
    fn pseudo_adjoint_morphism() {
        let abelian = HomAlgebra::from_upper(2, [], alpha_zero::<Rational>(&())).unwrap();
        assert!(check_pseudo_adjoint_morphism(&abelian).unwrap().passed);
        let (se, _) = build_semi_euclidean(&int(1)).unwrap();
        assert!(matches!(check_pseudo_adjoint_morphism(&se), Err(ConstructionError::Precondition(_))));
        let gl = build_gl_alpha(&gl0()).unwrap();
        assert!(matches!(check_pseudo_adjoint_morphism(&gl), Err(ConstructionError::Precondition(_))));
    }

    #[test]
    fn twist_search_on_abelian_plane() {
        // every 2x2 matrix with entries in {-1,0,1} squaring to -id
        let mut found = 0;
        for v in itertools::Itertools::multi_cartesian_product(itertools::repeat_n([-1i64, 0, 1], 4)) {
            let b = Matrix::<Rational>::from_int_rows(&[&v[0..2], &v[2..4]], &()).unwrap();
            if GlContext::new(b.clone()).is_err() {
                continue;
            }
            found += 1;
            let g = HomAlgebra::from_upper(2, [], b).unwrap();
            assert!(check_pseudo_adjoint_morphism(&g).unwrap().passed);
        }
        assert!(found >= 2);
    }

    proptest! {
        #[test]
        fn determinant_path_matches_full_closed_form(
            v in prop::collection::vec(-9i64..=9, 8),
            theta in prop::sample::select(vec![(0i64, 1i64), (1, 1), (1, 2), (-7, 3), (3, 4)]),
        ) {
            let se = SemiEuclideanContext::new(&rat(theta.0, theta.1));
            let (x, y) = (se.int_vec(&v[0..4]), se.int_vec(&v[4..8]));
            let det = se.bracket_determinant(&x, &y).unwrap();
            prop_assert_eq!(&det, &se.bracket_closed_form(&x, &y));
            prop_assert!(det[1].is_zero_in(&se.d) && det[2].is_zero_in(&se.d));
        }

        #[test]
        fn r3_sign_on_random_vectors(v in prop::collection::vec(-9i64..=9, 6), flip in any::<bool>()) {
            // signed permutation matrices are orthogonal; pick det by flip
            let a = if flip {
                Matrix::<Rational>::from_int_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]], &()).unwrap()
            } else {
                rotation_e3(&())
            };
            let g = build_r3_cross::<Rational>(&a).unwrap();
            let (x, y) = (int_vec(&v[0..3], &()), int_vec(&v[3..6], &()));
            let lhs = a.mul_vec(&g.bracket_eval(&x, &y).unwrap()).unwrap();
            let rhs = g.bracket_eval(&a.mul_vec(&x).unwrap(), &a.mul_vec(&y).unwrap()).unwrap();
            if flip {
                prop_assert!(vec_is_zero(&vec_add(&lhs, &rhs), &()));
            } else {
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn ad_squared_two_paths_agree(v in prop::collection::vec(-3i64..=3, 48)) {
            let ctx = GlContext::new(block_diagonal(&alpha_zero::<Rational>(&()), 2)).unwrap();
            let ad = ctx.ad_matrix();
            let g = build_gl_alpha(&ctx).unwrap().with_twist(ad.mul(&ad).unwrap()).unwrap();
            let (a, b, c) = (int_vec(&v[0..16], &()), int_vec(&v[16..32], &()), int_vec(&v[32..48], &()));
            let via_table = g.jacobi_residual(&a, &b, &c).unwrap();
            let direct = ctx.ad_squared_residual_direct(&unflatten(&a, 4, &()), &unflatten(&b, 4, &()), &unflatten(&c, 4, &()));
            prop_assert_eq!(via_table, flatten(&direct));
        }
    }
}

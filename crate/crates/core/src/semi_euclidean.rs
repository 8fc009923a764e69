//! Geometry of `R⁴₂`: the pseudo-scalar product of signature `(−,−,+,+)`,
//! causal types, and the subset
//!
//! ```text
//! V* = { x null : x₁x₂ = x₃x₄ }
//! ```
//!
//! which contains every bracket `[x,y]_θ` and is mapped into itself by `P(θ)`.
//! Over the reals `V*` is the union of the four planes `(p,q,±p,±q)` and
//! `(p,q,±q,±p)` with matching signs, which the sample generator uses.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{CheckReport, Witness};
use crate::constructions::{build_semi_euclidean, ConstructionError, SemiEuclideanContext};
use crate::linalg::{vec_scale, LinalgError};
use crate::parallel::{find_first, map_indexed, Strategy};
use crate::scalar::{format_rational, rat, QuadExt, Rational, Scalar};

/// `⟨x,y⟩ = −x₁y₁ − x₂y₂ + x₃y₃ + x₄y₄`
pub fn pseudo_inner<S: Scalar>(x: &[S], y: &[S], ctx: &S::Ctx) -> Result<S, LinalgError> {
    if x.len() != 4 || y.len() != 4 {
        return Err(LinalgError::DimensionMismatch(format!("pseudo-inner product of lengths {} and {}", x.len(), y.len())));
    }
    let mut acc = S::zero(ctx);
    for i in 0..4 {
        let t = x[i].clone() * y[i].clone();
        acc = if i < 2 { acc - t } else { acc + t };
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalType {
    Spacelike,
    Null,
    Timelike,
    Zero,
}

/// Float backends report `Null` when `|⟨x,x⟩|` is within the tolerance.
pub fn causal_type<S: Scalar>(x: &[S], ctx: &S::Ctx) -> Result<CausalType, LinalgError> {
    if x.iter().all(|v| v.is_zero_in(ctx)) {
        return Ok(CausalType::Zero);
    }
    Ok(match pseudo_inner(x, x, ctx)?.sign(ctx) {
        Some(Ordering::Greater) => CausalType::Spacelike,
        Some(Ordering::Less) => CausalType::Timelike,
        _ => CausalType::Null,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VStarMembership {
    pub in_null_space: bool,
    /// `x₁x₂ = x₃x₄`
    pub cross_condition: bool,
}

impl VStarMembership {
    pub fn member(&self) -> bool {
        self.in_null_space && self.cross_condition
    }
}

pub fn cross_defect<S: Scalar>(x: &[S]) -> S {
    x[0].clone() * x[1].clone() - x[2].clone() * x[3].clone()
}

pub fn in_v_star<S: Scalar>(x: &[S], ctx: &S::Ctx) -> Result<VStarMembership, LinalgError> {
    let inner = pseudo_inner(x, x, ctx)?;
    Ok(VStarMembership { in_null_space: inner.is_zero_in(ctx), cross_condition: cross_defect(x).is_zero_in(ctx) })
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

fn nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let q = small_rational(rng);
        if q != rat(0, 1) {
            return q;
        }
    }
}

/// Sound generator of `V*` members: multiples of `r`, the diagonal
/// `(a,0,0,a)`, the four planes, and rejection-sampled integer vectors.
pub fn v_star_member(ctx: &SemiEuclideanContext, rng: &mut ChaCha8Rng) -> Vec<QuadExt> {
    let d = &ctx.d;
    let q = |v: Rational| QuadExt::rational(v, d);
    match rng.gen_range(0..4) {
        0 => {
            let lambda = QuadExt::new(small_rational(rng), small_rational(rng), d.clone());
            vec_scale(&lambda, &ctx.r)
        }
        1 => {
            let a = q(small_rational(rng));
            vec![a.clone(), q(rat(0, 1)), q(rat(0, 1)), a]
        }
        2 => {
            let (p, r) = (small_rational(rng), small_rational(rng));
            let sign = if rng.gen_bool(0.5) { rat(1, 1) } else { rat(-1, 1) };
            let (x3, x4) = if rng.gen_bool(0.5) { (p.clone(), r.clone()) } else { (r.clone(), p.clone()) };
            let lambda = QuadExt::new(nonzero_rational(rng), small_rational(rng), d.clone());
            let z = vec![q(p), q(r), q(sign.clone() * x3), q(sign * x4)];
            vec_scale(&lambda, &z)
        }
        _ => loop {
            let z: Vec<QuadExt> = (0..4).map(|_| q(rat(rng.gen_range(-4..=4), 1))).collect();
            if in_v_star(&z, d).expect("length 4").member() {
                return z;
            }
        },
    }
}

fn random_vector(ctx: &SemiEuclideanContext, rng: &mut ChaCha8Rng) -> Vec<QuadExt> {
    (0..4).map(|_| ctx.scalar(&small_rational(rng))).collect()
}

/// Closure of `V*` under the bracket (for arbitrary arguments) and under
/// `P(θ)`, on `samples` deterministic draws of each kind.
pub fn check_vstar_closure(
    theta: &Rational,
    samples: usize,
    seed: u64,
    strategy: Strategy,
) -> Result<CheckReport<QuadExt>, ConstructionError> {
    let (g, ctx) = build_semi_euclidean(theta)?;
    let d = ctx.d.clone();
    let hit = find_first(2 * samples, strategy, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let (label, input, image) = if i < samples {
            let (x, y) = (random_vector(&ctx, &mut rng), random_vector(&ctx, &mut rng));
            let z = g.bracket_eval(&x, &y).expect("dimension 4");
            ("bracket", x.into_iter().chain(y).collect::<Vec<_>>(), z)
        } else {
            let z = v_star_member(&ctx, &mut rng);
            let pz = ctx.apply_p(&z).expect("dimension 4");
            ("p-image", z, pz)
        };
        let m = in_v_star(&image, &d).expect("length 4");
        (!m.member()).then(|| {
            let residual = vec![pseudo_inner(&image, &image, &d).expect("length 4"), cross_defect(&image)];
            Witness::new(format!("{label} of {}", format_vec(&input)), vec![i], residual)
        })
    });
    Ok(CheckReport::from_witness(hit.map(|(_, w)| w)))
}

pub fn format_vec<S: Scalar>(x: &[S]) -> String {
    let parts: Vec<String> = x.iter().map(ToString::to_string).collect();
    format!("({})", parts.join("; "))
}

/// One line of the membership table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NullspaceRow {
    pub theta: String,
    pub z: String,
    pub inner: String,
    pub cross: String,
    pub pz: String,
    pub causal: CausalType,
    pub z_in_v_star: bool,
    pub pz_in_v_star: bool,
}

pub fn nullspace_row(ctx: &SemiEuclideanContext, z: &[QuadExt]) -> Result<NullspaceRow, LinalgError> {
    let d = &ctx.d;
    let pz = ctx.apply_p(z)?;
    Ok(NullspaceRow {
        theta: format_rational(&ctx.theta),
        z: format_vec(z),
        inner: pseudo_inner(z, z, d)?.to_string(),
        cross: cross_defect(z).to_string(),
        pz: format_vec(&pz),
        causal: causal_type(z, d)?,
        z_in_v_star: in_v_star(z, d)?.member(),
        pz_in_v_star: in_v_star(&pz, d)?.member(),
    })
}

/// `r`, the fixed probes `(2,1,2,1)` and `(3,4,5,0)`, then `samples`
/// generated members.
pub fn nullspace_table(theta: &Rational, samples: usize, seed: u64, strategy: Strategy) -> Vec<NullspaceRow> {
    let ctx = SemiEuclideanContext::new(theta);
    let mut points = vec![ctx.r.clone(), ctx.int_vec(&[2, 1, 2, 1]), ctx.int_vec(&[3, 4, 5, 0])];
    points.extend(map_indexed(samples, strategy, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        v_star_member(&ctx, &mut rng)
    }));
    points.iter().map(|z| nullspace_row(&ctx, z).expect("length 4")).collect()
}

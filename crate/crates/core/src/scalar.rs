//! Scalar backends: exact rationals, the quadratic extension `Q(s)` with
//! `s² = d`, and tolerance-compared floats.
//!
//! All linear algebra in the crate is generic over [`Scalar`]. Constants
//! (zero, one, embedded rationals) are produced from a per-backend context,
//! which for [`QuadExt`] carries the discriminant and for [`Float`] the
//! zero-test tolerance.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("zero divisor: {0} has no inverse")]
    ZeroDivisor(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(text: &str) -> Result<Rational, ScalarError> {
    let t = text.trim();
    let bad = || ScalarError::Parse(text.to_string());
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact square root of a nonnegative rational, if numerator and denominator
/// are both perfect squares.
pub fn rational_is_square(q: &Rational) -> Result<Option<Rational>, ScalarError> {
    if q.is_negative() {
        return Err(ScalarError::Domain(format!(
            "square root of negative rational {}",
            format_rational(q)
        )));
    }
    let exact = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Ok(match (exact(q.numer()), exact(q.denom())) {
        (Some(a), Some(b)) => Some(Rational::new(a, b)),
        _ => None,
    })
}

/// An element of a commutative ring/field backend.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Ctx: Clone + fmt::Debug + PartialEq + Send + Sync + 'static;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_rational(q: &Rational, ctx: &Self::Ctx) -> Self;

    fn from_int(n: i64, ctx: &Self::Ctx) -> Self {
        Self::from_rational(&int(n), ctx)
    }

    /// Exact zero test in exact backends, `|x| <= tol` for floats.
    fn is_zero_in(&self, ctx: &Self::Ctx) -> bool;

    fn try_inv(&self, ctx: &Self::Ctx) -> Result<Self, ScalarError>;

    /// Sign under the real embedding; `None` when the backend has no order.
    fn sign(&self, ctx: &Self::Ctx) -> Option<Ordering>;
}

impl Scalar for Rational {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        <Rational as Zero>::zero()
    }
    fn one(_: &()) -> Self {
        <Rational as One>::one()
    }
    fn from_rational(q: &Rational, _: &()) -> Self {
        q.clone()
    }
    fn is_zero_in(&self, _: &()) -> bool {
        self.is_zero()
    }
    fn try_inv(&self, _: &()) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::ZeroDivisor("0".into()));
        }
        Ok(self.recip())
    }
    fn sign(&self, _: &()) -> Option<Ordering> {
        Some(self.cmp(&<Rational as Zero>::zero()))
    }
}

/// `a + b·s` with `s² = d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: Rational,
    pub b: Rational,
    pub d: Rational,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: Rational) -> Self {
        QuadExt { a, b, d }
    }

    pub fn rational(a: Rational, d: &Rational) -> Self {
        QuadExt { a, b: <Rational as Zero>::zero(), d: d.clone() }
    }

    /// The element representing `√d`. When `d` is a perfect rational square
    /// the root itself is returned with `b = 0`, so arithmetic stays rational.
    pub fn sqrt_d(d: &Rational) -> Self {
        match rational_is_square(d) {
            Ok(Some(root)) => QuadExt::rational(root, d),
            _ => QuadExt { a: <Rational as Zero>::zero(), b: <Rational as One>::one(), d: d.clone() },
        }
    }

    pub fn conj(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }

    /// `a² − b²d`
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * &self.d
    }

    fn same_ring(&self, other: &Self) -> Result<(), ScalarError> {
        if self.d != other.d {
            return Err(ScalarError::BackendMismatch(format!(
                "discriminants {} and {}",
                format_rational(&self.d),
                format_rational(&other.d)
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.same_ring(other)?;
        Ok(QuadExt { a: &self.a + &other.a, b: &self.b + &other.b, d: self.d.clone() })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.same_ring(other)?;
        Ok(QuadExt {
            a: &self.a * &other.a + &self.b * &other.b * &self.d,
            b: &self.a * &other.b + &other.a * &self.b,
            d: self.d.clone(),
        })
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ScalarError::ZeroDivisor(self.to_string()));
        }
        Ok(QuadExt { a: &self.a / &n, b: -(&self.b / &n), d: self.d.clone() })
    }

    pub fn to_f64(&self) -> f64 {
        let f = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
        f(&self.a) + f(&self.b) * f(&self.d).sqrt()
    }
}

pub fn quad_mul(x: &QuadExt, y: &QuadExt) -> Result<QuadExt, ScalarError> {
    x.checked_mul(y)
}

pub fn quad_inv(x: &QuadExt) -> Result<QuadExt, ScalarError> {
    x.inv()
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", format_rational(&self.a));
        }
        let s = format!("sqrt({})", format_rational(&self.d));
        let b = if self.b.is_one() {
            s
        } else if (-self.b.clone()).is_one() {
            format!("-{s}")
        } else {
            format!("{}*{s}", format_rational(&self.b))
        };
        if self.a.is_zero() {
            write!(f, "{b}")
        } else if b.starts_with('-') {
            write!(f, "{}{b}", format_rational(&self.a))
        } else {
            write!(f, "{}+{b}", format_rational(&self.a))
        }
    }
}

macro_rules! quad_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                self.$checked(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}
quad_op!(Add, add, checked_add);
quad_op!(Mul, mul, checked_mul);

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: QuadExt) -> QuadExt {
        self + (-rhs)
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Scalar for QuadExt {
    type Ctx = Rational;

    fn zero(d: &Rational) -> Self {
        QuadExt::rational(<Rational as Zero>::zero(), d)
    }
    fn one(d: &Rational) -> Self {
        QuadExt::rational(<Rational as One>::one(), d)
    }
    fn from_rational(q: &Rational, d: &Rational) -> Self {
        QuadExt::rational(q.clone(), d)
    }
    fn is_zero_in(&self, _: &Rational) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn try_inv(&self, _: &Rational) -> Result<Self, ScalarError> {
        self.inv()
    }
    fn sign(&self, _: &Rational) -> Option<Ordering> {
        let zero = <Rational as Zero>::zero();
        let sa = self.a.cmp(&zero);
        let sb = self.b.cmp(&zero);
        if sb == Ordering::Equal {
            return Some(sa);
        }
        if self.d.is_negative() {
            return None;
        }
        if sa == Ordering::Equal || sa == sb {
            return Some(sb);
        }
        // opposite signs: the larger magnitude wins
        Some(match (&self.a * &self.a).cmp(&(&self.b * &self.b * &self.d)) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        })
    }
}

/// Zero-test tolerance of the float backend.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance(pub f64);

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(1e-9)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Float(pub f64);

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Float {
    type Output = Float;
    fn add(self, rhs: Float) -> Float {
        Float(self.0 + rhs.0)
    }
}
impl Sub for Float {
    type Output = Float;
    fn sub(self, rhs: Float) -> Float {
        Float(self.0 - rhs.0)
    }
}
impl Mul for Float {
    type Output = Float;
    fn mul(self, rhs: Float) -> Float {
        Float(self.0 * rhs.0)
    }
}
impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float(-self.0)
    }
}

impl Scalar for Float {
    type Ctx = Tolerance;

    fn zero(_: &Tolerance) -> Self {
        Float(0.0)
    }
    fn one(_: &Tolerance) -> Self {
        Float(1.0)
    }
    fn from_rational(q: &Rational, _: &Tolerance) -> Self {
        Float(q.to_f64().unwrap_or(f64::NAN))
    }
    fn is_zero_in(&self, tol: &Tolerance) -> bool {
        self.0.abs() <= tol.0
    }
    fn try_inv(&self, tol: &Tolerance) -> Result<Self, ScalarError> {
        if self.is_zero_in(tol) {
            return Err(ScalarError::ZeroDivisor(self.to_string()));
        }
        Ok(Float(1.0 / self.0))
    }
    fn sign(&self, tol: &Tolerance) -> Option<Ordering> {
        if self.is_zero_in(tol) {
            Some(Ordering::Equal)
        } else {
            self.0.partial_cmp(&0.0)
        }
    }
}

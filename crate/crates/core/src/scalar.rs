//! Number backends.
//!
//! Coordinates live either in the quadratic field `Q(√3)` ([`QSqrt3`], exact)
//! or in plain `f64` (compared through a per-patch [`Tolerance`]). Both sit
//! behind the [`Scalar`] trait so that every predicate and construction is
//! written once.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use alloc::string::{String, ToString};

use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Which numeric backend a patch uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

/// Sign of a quantity, as used by the orientation predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative = -1,
    Zero = 0,
    Positive = 1,
}

impl Sign {
    pub fn from_ordering(ord: Ordering) -> Sign {
        match ord {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn as_i8(self) -> i8 {
        self as i8
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Arithmetic contract shared by both backends.
pub trait Scalar:
    Clone + fmt::Debug + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// `numer / denom`; panics when `denom == 0`.
    fn from_ratio(numer: i64, denom: i64) -> Self;
    fn sqrt3() -> Self;
    fn to_f64(&self) -> f64;
    /// Sign without any tolerance.
    fn raw_sign(&self) -> Sign;
    /// Total order without any tolerance (exact order, or `f64::total_cmp`).
    fn raw_cmp(&self, other: &Self) -> Ordering;
    fn checked_div(&self, rhs: &Self) -> Option<Self>;
    /// Square root inside the backend, `None` when negative or not representable.
    fn checked_sqrt(&self) -> Option<Self>;
    /// The integer equal to `self` (exactly, or within `tol` for floats).
    fn to_integer(&self, tol: &Tolerance) -> Option<i64>;

    fn is_exact() -> bool {
        Self::BACKEND == Backend::Exact
    }

    fn abs(&self) -> Self {
        if self.raw_sign() == Sign::Negative {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn half(&self) -> Self {
        self.clone() * Self::from_ratio(1, 2)
    }
}

/// Comparison tolerance of the float backend. Exact values ignore it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance { eps: 1e-9 };

    /// Panics unless `eps` is finite and non-negative.
    pub fn new(eps: f64) -> Self {
        assert!(
            eps.is_finite() && eps >= 0.0,
            "tolerance must be finite and non-negative"
        );
        Tolerance { eps }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Absolute slack for values of the given magnitude: `eps * max(1, |m|)`.
    pub fn slack(&self, magnitude: f64) -> f64 {
        self.eps * fmax(1.0, libm::fabs(magnitude))
    }

    pub fn eq<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.cmp(a, b) == Ordering::Equal
    }

    pub fn cmp<S: Scalar>(&self, a: &S, b: &S) -> Ordering {
        if S::is_exact() {
            return a.raw_cmp(b);
        }
        let (x, y) = (a.to_f64(), b.to_f64());
        let bound = self.eps * fmax(1.0, fmax(libm::fabs(x), libm::fabs(y)));
        if libm::fabs(x - y) <= bound {
            Ordering::Equal
        } else if x < y {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn sign<S: Scalar>(&self, a: &S) -> Sign {
        Sign::from_ordering(self.cmp(a, &S::zero()))
    }
}

pub(crate) fn fmax(a: f64, b: f64) -> f64 {
    if a >= b {
        a
    } else {
        b
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        numer as f64 / denom as f64
    }
    fn sqrt3() -> Self {
        SQRT_3
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn raw_sign(&self) -> Sign {
        Sign::from_ordering(self.partial_cmp(&0.0).unwrap_or(Ordering::Equal))
    }
    fn raw_cmp(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if *rhs == 0.0 {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn checked_sqrt(&self) -> Option<Self> {
        if *self < 0.0 {
            None
        } else {
            Some(libm::sqrt(*self))
        }
    }
    fn to_integer(&self, tol: &Tolerance) -> Option<i64> {
        let r = libm::round(*self);
        if r.abs() < 9.0e18 && tol.eq(self, &r) {
            Some(r as i64)
        } else {
            None
        }
    }
}

/// An element `u + v·√3` of `Q(√3)` with arbitrary-precision rational parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSqrt3 {
    u: BigRational,
    v: BigRational,
}

impl QSqrt3 {
    pub fn new(u: BigRational, v: BigRational) -> Self {
        QSqrt3 { u, v }
    }

    pub fn rational(u: BigRational) -> Self {
        QSqrt3 {
            u,
            v: BigRational::zero(),
        }
    }

    pub fn from_parts(un: i64, ud: i64, vn: i64, vd: i64) -> Self {
        QSqrt3 {
            u: ratio(un, ud),
            v: ratio(vn, vd),
        }
    }

    /// Rational part.
    pub fn u(&self) -> &BigRational {
        &self.u
    }

    /// Coefficient of √3.
    pub fn v(&self) -> &BigRational {
        &self.v
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    /// Field norm `u² − 3v²`.
    pub fn norm(&self) -> BigRational {
        &self.u * &self.u - BigRational::from_integer(3.into()) * &self.v * &self.v
    }

    pub fn conjugate(&self) -> Self {
        QSqrt3 {
            u: self.u.clone(),
            v: -self.v.clone(),
        }
    }

    pub fn sign(&self) -> Sign {
        let su = rat_sign(&self.u);
        let sv = rat_sign(&self.v);
        match (su, sv) {
            (Sign::Zero, s) | (s, Sign::Zero) => s,
            (Sign::Positive, Sign::Positive) => Sign::Positive,
            (Sign::Negative, Sign::Negative) => Sign::Negative,
            // Mixed signs: |u| versus √3|v|.
            (Sign::Positive, Sign::Negative) => rat_sign(&self.norm()),
            (Sign::Negative, Sign::Positive) => -rat_sign(&self.norm()),
        }
    }

    fn sqrt_rational(q: &BigRational) -> Option<BigRational> {
        if q.is_negative() {
            return None;
        }
        let n = q.numer();
        let d = q.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            Some(BigRational::new(rn, rd))
        } else {
            None
        }
    }
}

fn rat_sign(q: &BigRational) -> Sign {
    match q.numer().sign() {
        BigSign::Minus => Sign::Negative,
        BigSign::NoSign => Sign::Zero,
        BigSign::Plus => Sign::Positive,
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Ord for QSqrt3 {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.v == other.v {
            return self.u.cmp(&other.u);
        }
        match (self.clone() - other.clone()).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

impl PartialOrd for QSqrt3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for QSqrt3 {
    type Output = QSqrt3;
    fn add(self, rhs: QSqrt3) -> QSqrt3 {
        QSqrt3 {
            u: self.u + rhs.u,
            v: self.v + rhs.v,
        }
    }
}

impl Sub for QSqrt3 {
    type Output = QSqrt3;
    fn sub(self, rhs: QSqrt3) -> QSqrt3 {
        QSqrt3 {
            u: self.u - rhs.u,
            v: self.v - rhs.v,
        }
    }
}

impl Mul for QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, rhs: QSqrt3) -> QSqrt3 {
        if self.v.is_zero() && rhs.v.is_zero() {
            return QSqrt3::rational(self.u * rhs.u);
        }
        let three = BigRational::from_integer(3.into());
        QSqrt3 {
            u: &self.u * &rhs.u + three * &self.v * &rhs.v,
            v: &self.u * &rhs.v + &self.v * &rhs.u,
        }
    }
}

impl Neg for QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        QSqrt3 { u: -self.u, v: -self.v }
    }
}

impl Scalar for QSqrt3 {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        QSqrt3::rational(BigRational::zero())
    }
    fn one() -> Self {
        QSqrt3::rational(BigRational::one())
    }
    fn from_i64(n: i64) -> Self {
        QSqrt3::rational(BigRational::from_integer(n.into()))
    }
    fn from_ratio(numer: i64, denom: i64) -> Self {
        QSqrt3::rational(ratio(numer, denom))
    }
    fn sqrt3() -> Self {
        QSqrt3 {
            u: BigRational::zero(),
            v: BigRational::one(),
        }
    }
    fn to_f64(&self) -> f64 {
        let u = self.u.to_f64().unwrap_or(f64::NAN);
        let v = self.v.to_f64().unwrap_or(f64::NAN);
        u + v * SQRT_3
    }
    fn raw_sign(&self) -> Sign {
        self.sign()
    }
    fn raw_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        // x / y = x·conj(y) / norm(y); norm(y) = 0 only for y = 0.
        let n = rhs.norm();
        if n.is_zero() {
            return None;
        }
        let num = self.clone() * rhs.conjugate();
        Some(QSqrt3 {
            u: num.u / &n,
            v: num.v / n,
        })
    }
    fn to_integer(&self, _tol: &Tolerance) -> Option<i64> {
        if self.v.is_zero() && self.u.is_integer() {
            self.u.to_integer().to_i64()
        } else {
            None
        }
    }
    fn checked_sqrt(&self) -> Option<Self> {
        match self.sign() {
            Sign::Negative => return None,
            Sign::Zero => return Some(Self::zero()),
            Sign::Positive => {}
        }
        // (p + q√3)² = p² + 3q² + 2pq√3.
        if self.v.is_zero() {
            if let Some(p) = Self::sqrt_rational(&self.u) {
                return Some(QSqrt3::rational(p));
            }
            let third = &self.u / BigRational::from_integer(3.into());
            return Self::sqrt_rational(&third).map(|q| QSqrt3::new(BigRational::zero(), q));
        }
        // 4p⁴ − 4u·p² + 3v² = 0  ⇒  p² = (u ± √(u² − 3v²)) / 2.
        let disc = Self::sqrt_rational(&self.norm())?;
        let two = BigRational::from_integer(2.into());
        for p2 in [(&self.u + &disc) / &two, (&self.u - &disc) / &two] {
            if let Some(p) = Self::sqrt_rational(&p2) {
                if p.is_zero() {
                    continue;
                }
                let q = &self.v / (&two * &p);
                let root = QSqrt3::new(p, q);
                let root = if root.sign() == Sign::Negative { -root } else { root };
                if root.clone() * root.clone() == *self {
                    return Some(root);
                }
            }
        }
        None
    }
}

impl fmt::Debug for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Renders the canonical `p/q:r/s` token (lowest terms, positive denominators).
impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}:{}/{}",
            self.u.numer(),
            self.u.denom(),
            self.v.numer(),
            self.v.denom()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid Q(sqrt 3) token {token:?}: {reason}")]
pub struct ParseQSqrt3Error {
    pub token: String,
    pub reason: &'static str,
}

/// Parses a rational `p`, `p/q`, or decimal-free `-p/q`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n.trim()).ok()?;
    let d = BigInt::from_str(d.trim()).ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

impl FromStr for QSqrt3 {
    type Err = ParseQSqrt3Error;

    /// Accepts `p/q:r/s` (meaning `p/q + (r/s)√3`) or a bare rational.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseQSqrt3Error {
            token: s.to_string(),
            reason,
        };
        match s.split_once(':') {
            Some((u, v)) => {
                let u = parse_rational(u).ok_or_else(|| err("bad rational part"))?;
                let v = parse_rational(v).ok_or_else(|| err("bad sqrt(3) coefficient"))?;
                Ok(QSqrt3::new(u, v))
            }
            None => parse_rational(s)
                .map(QSqrt3::rational)
                .ok_or_else(|| err("bad rational")),
        }
    }
}

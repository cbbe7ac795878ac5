//! Scalar coefficients: exact rationals, exact elements of a real quadratic
//! field `Q(sqrt D)`, or binary big floats.
//!
//! Rationals form a common exact subfield: a quadratic number whose
//! irrational part vanishes is stored as a rational, and rationals combine
//! freely with either of the other representations. Combining two quadratic
//! numbers over different fields, or a quadratic number with a float, is a
//! mode mix. The checked operations report it as [`Error::MixedModes`]; the
//! operator impls panic, so validated constructors check modes up front via
//! [`ScalarMode::join`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};

/// Number system a value (or a whole document) lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarMode {
    ExactRational,
    /// `Q(sqrt D)` with the positive real embedding of `sqrt D`.
    ExactQuadratic(u64),
    /// Binary floats with the given mantissa precision in bits.
    BigFloat(u32),
}

impl ScalarMode {
    pub fn is_exact(self) -> bool {
        !matches!(self, ScalarMode::BigFloat(_))
    }

    /// Smallest mode containing both, or a mode-mix error.
    pub fn join(self, other: ScalarMode) -> Result<ScalarMode> {
        use ScalarMode::*;
        match (self, other) {
            (ExactRational, m) | (m, ExactRational) => Ok(m),
            (ExactQuadratic(a), ExactQuadratic(b)) if a == b => Ok(self),
            (BigFloat(a), BigFloat(b)) => Ok(BigFloat(a.max(b))),
            _ => Err(Error::MixedModes(self.to_string(), other.to_string())),
        }
    }

    pub fn join_all<'a>(values: impl IntoIterator<Item = &'a Scalar>) -> Result<ScalarMode> {
        values.into_iter().try_fold(ScalarMode::ExactRational, |m, s| m.join(s.mode()))
    }
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::ExactRational => write!(f, "rational"),
            ScalarMode::ExactQuadratic(d) => write!(f, "quadratic(sqrt {d})"),
            ScalarMode::BigFloat(p) => write!(f, "bigfloat({p} bits)"),
        }
    }
}

pub fn is_squarefree(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// `a + b sqrt(d)` with `b != 0` whenever it is stored inside a [`Scalar`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    pub a: BigRational,
    pub b: BigRational,
    pub d: u64,
}

impl QuadraticNumber {
    /// Sign of the positive real embedding, decided exactly.
    pub fn signum(&self) -> i8 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sa >= 0 && sb >= 0 {
            return (sa + sb).signum();
        }
        if sa <= 0 && sb <= 0 {
            return (sa + sb).signum();
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        let cmp = a2.cmp(&b2d) as i8;
        if sa > 0 {
            cmp
        } else {
            -cmp
        }
    }

    pub fn conjugate(&self) -> Self {
        QuadraticNumber { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    /// Field norm `a^2 - d b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d))
    }
}

fn rat_sign(r: &BigRational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Quadratic(Box<QuadraticNumber>),
    Float(BigFloat),
}

impl Scalar {
    pub fn int(v: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// `a + b sqrt(d)`; collapses to a rational when `b = 0`.
    pub fn quadratic(a: BigRational, b: BigRational, d: u64) -> Result<Self> {
        if !is_squarefree(d) {
            return Err(Error::invalid(format!("D = {d} must be squarefree and > 1")));
        }
        Ok(Self::quadratic_unchecked(a, b, d))
    }

    fn quadratic_unchecked(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() {
            Scalar::Rational(a)
        } else {
            Scalar::Quadratic(Box::new(QuadraticNumber { a, b, d }))
        }
    }

    pub fn mode(&self) -> ScalarMode {
        match self {
            Scalar::Rational(_) => ScalarMode::ExactRational,
            Scalar::Quadratic(q) => ScalarMode::ExactQuadratic(q.d),
            Scalar::Float(f) => ScalarMode::BigFloat(f.precision()),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Float(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quadratic(_) => false,
            Scalar::Float(f) => f.is_zero(),
        }
    }

    pub fn signum(&self) -> i8 {
        match self {
            Scalar::Rational(r) => rat_sign(r),
            Scalar::Quadratic(q) => q.signum(),
            Scalar::Float(f) => f.signum(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Rational(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    /// Rational and irrational parts `(a, b)` of an exact value.
    pub fn parts(&self) -> Option<(BigRational, BigRational)> {
        match self {
            Scalar::Rational(r) => Some((r.clone(), BigRational::zero())),
            Scalar::Quadratic(q) => Some((q.a.clone(), q.b.clone())),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_bigfloat(&self, precision: u32) -> BigFloat {
        match self {
            Scalar::Rational(r) => BigFloat::from_rational(r, precision),
            Scalar::Quadratic(q) => {
                let root = BigFloat::from_int(&BigInt::from(q.d), precision + 8).sqrt().expect("d > 0");
                let a = BigFloat::from_rational(&q.a, precision + 8);
                let b = BigFloat::from_rational(&q.b, precision + 8);
                let v = a.add(&b.mul(&root));
                BigFloat::from_rational(&v.to_rational(), precision)
            }
            Scalar::Float(f) => BigFloat::from_rational(&f.to_rational(), precision),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Quadratic(q) => {
                q.a.to_f64().unwrap_or(f64::NAN) + q.b.to_f64().unwrap_or(f64::NAN) * (q.d as f64).sqrt()
            }
            Scalar::Float(f) => f.to_f64(),
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.mode().join(other.mode())?;
        Ok(add(self, other))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.mode().join(other.mode())?;
        Ok(mul(self, other))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Quadratic(q) => {
                let n = q.norm();
                Scalar::quadratic_unchecked(&q.a / &n, -&q.b / &n, q.d)
            }
            Scalar::Float(f) => Scalar::Float(BigFloat::from_int(&BigInt::one(), f.precision()).div(f)?),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        let inv = other.inv().ok_or_else(|| Error::invalid("division by zero"))?;
        self.checked_mul(&inv)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn mixed(a: &Scalar, b: &Scalar) -> ! {
    panic!("mixed scalar modes: {} and {}", a.mode(), b.mode())
}

fn add(x: &Scalar, y: &Scalar) -> Scalar {
    use Scalar::*;
    match (x, y) {
        (Rational(a), Rational(b)) => Rational(a + b),
        (Rational(r), Quadratic(q)) | (Quadratic(q), Rational(r)) => {
            Scalar::Quadratic(Box::new(QuadraticNumber { a: &q.a + r, b: q.b.clone(), d: q.d }))
        }
        (Quadratic(p), Quadratic(q)) => {
            if p.d != q.d {
                mixed(x, y)
            }
            Scalar::quadratic_unchecked(&p.a + &q.a, &p.b + &q.b, p.d)
        }
        (Float(a), Float(b)) => Float(a.add(b)),
        (Float(f), Rational(r)) | (Rational(r), Float(f)) => Float(f.add(&BigFloat::from_rational(r, f.precision()))),
        _ => mixed(x, y),
    }
}

fn mul(x: &Scalar, y: &Scalar) -> Scalar {
    use Scalar::*;
    match (x, y) {
        (Rational(a), Rational(b)) => Rational(a * b),
        (Rational(r), Quadratic(q)) | (Quadratic(q), Rational(r)) => {
            if r.is_zero() {
                return Scalar::zero();
            }
            Scalar::Quadratic(Box::new(QuadraticNumber { a: &q.a * r, b: &q.b * r, d: q.d }))
        }
        (Quadratic(p), Quadratic(q)) => {
            if p.d != q.d {
                mixed(x, y)
            }
            let d = BigRational::from_integer(BigInt::from(p.d));
            let a = &p.a * &q.a + &p.b * &q.b * d;
            let b = &p.a * &q.b + &p.b * &q.a;
            Scalar::quadratic_unchecked(a, b, p.d)
        }
        (Float(a), Float(b)) => Float(a.mul(b)),
        (Float(f), Rational(r)) | (Rational(r), Float(f)) => Float(f.mul(&BigFloat::from_rational(r, f.precision()))),
        _ => mixed(x, y),
    }
}

fn neg(x: &Scalar) -> Scalar {
    match x {
        Scalar::Rational(r) => Scalar::Rational(-r),
        Scalar::Quadratic(q) => Scalar::Quadratic(Box::new(QuadraticNumber { a: -&q.a, b: -&q.b, d: q.d })),
        Scalar::Float(f) => Scalar::Float(f.neg()),
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $f:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $f(&self, &rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $f(&self, rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $f(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Mul, mul, mul);
forward_binop!(Sub, sub, |a: &Scalar, b: &Scalar| add(a, &neg(b)));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        neg(&self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        neg(self)
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        use Scalar::*;
        match (self, other) {
            (Rational(a), Rational(b)) => a == b,
            (Quadratic(a), Quadratic(b)) => a == b,
            (Float(a), Float(b)) => a == b,
            (Float(f), Rational(r)) | (Rational(r), Float(f)) => &f.to_rational() == r,
            _ => false,
        }
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<BigInt> for Scalar {
    fn from(v: BigInt) -> Self {
        Scalar::Rational(BigRational::from_integer(v))
    }
}

impl From<&BigInt> for Scalar {
    fn from(v: &BigInt) -> Self {
        Scalar::Rational(BigRational::from_integer(v.clone()))
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::Rational(v)
    }
}

impl From<BigFloat> for Scalar {
    fn from(v: BigFloat) -> Self {
        Scalar::Float(v)
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::invalid("zero denominator"));
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", format_rational(r)),
            Scalar::Quadratic(q) => {
                write!(f, "{}+{}*sqrt({})", format_rational(&q.a), format_rational(&q.b), q.d)
            }
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Exact dot product over the scalars.
pub fn dot(v: &[Scalar], w: &[Scalar]) -> Scalar {
    v.iter().zip(w).fold(Scalar::zero(), |acc, (a, b)| if a.is_zero() || b.is_zero() { acc } else { acc + a * b })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: (i64, i64), b: (i64, i64), d: u64) -> Scalar {
        Scalar::quadratic(BigRational::new(a.0.into(), a.1.into()), BigRational::new(b.0.into(), b.1.into()), d)
            .unwrap()
    }

    #[test]
    fn quadratic_sign_is_exact() {
        // 1 - sqrt(2) < 0, 3/2 - sqrt(2) > 0, -7/5 + sqrt(2) > 0
        assert_eq!(q((1, 1), (-1, 1), 2).signum(), -1);
        assert_eq!(q((3, 2), (-1, 1), 2).signum(), 1);
        assert_eq!(q((-7, 5), (1, 1), 2).signum(), 1);
        assert_eq!(q((-3, 2), (1, 1), 2).signum(), -1);
    }

    #[test]
    fn quadratic_arithmetic_collapses_to_rational() {
        let r2 = q((0, 1), (1, 1), 2);
        let two = &r2 * &r2;
        assert_eq!(two, Scalar::int(2));
        assert!(matches!(two, Scalar::Rational(_)));
        let x = q((1, 1), (1, 1), 2);
        let inv = x.inv().unwrap();
        assert_eq!(&x * &inv, Scalar::one());
    }

    #[test]
    fn mixing_fields_is_rejected() {
        let a = q((0, 1), (1, 1), 2);
        let b = q((0, 1), (1, 1), 3);
        assert!(matches!(a.checked_add(&b), Err(Error::MixedModes(_, _))));
        let f = Scalar::Float(BigFloat::from_int(&BigInt::from(1), 64));
        assert!(a.checked_mul(&f).is_err());
        assert!(Scalar::int(3).checked_mul(&f).is_ok());
    }

    #[test]
    fn squarefree_check() {
        assert!(is_squarefree(2));
        assert!(is_squarefree(30));
        assert!(!is_squarefree(12));
        assert!(!is_squarefree(1));
        assert!(Scalar::quadratic(BigRational::zero(), BigRational::one(), 4).is_err());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("-6/4").unwrap(), BigRational::new((-3).into(), 2.into()));
        assert_eq!(format_rational(&parse_rational("10/5").unwrap()), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn float_embedding_of_quadratic() {
        let x = q((1, 2), (3, 1), 5);
        let f = x.to_bigfloat(128);
        assert!((f.to_f64() - (0.5 + 3.0 * 5f64.sqrt())).abs() < 1e-12);
    }
}

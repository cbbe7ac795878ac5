//! Binary floating point numbers with an arbitrary-precision mantissa.
//!
//! A value is `mantissa * 2^exponent` with the mantissa rounded to at most
//! `precision` bits after every operation. Nothing here is certified; callers
//! that need guarantees compare against an explicit tolerance and flag the
//! result as unverified.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub struct BigFloat {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

fn bit_len(x: &BigInt) -> i64 {
    x.bits() as i64
}

impl BigFloat {
    pub fn zero(precision: u32) -> Self {
        BigFloat { mantissa: BigInt::zero(), exponent: 0, precision: precision.max(8) }
    }

    pub fn from_parts(mantissa: BigInt, exponent: i64, precision: u32) -> Self {
        let mut x = BigFloat { mantissa, exponent, precision: precision.max(8) };
        x.normalize();
        x
    }

    pub fn from_int(v: &BigInt, precision: u32) -> Self {
        Self::from_parts(v.clone(), 0, precision)
    }

    pub fn from_rational(r: &BigRational, precision: u32) -> Self {
        let precision = precision.max(8);
        if r.is_zero() {
            return Self::zero(precision);
        }
        let num = r.numer();
        let den = r.denom();
        let shift = precision as i64 + bit_len(den) - bit_len(num) + 2;
        let q = if shift >= 0 {
            (num << shift as usize).div_floor(den)
        } else {
            num.div_floor(&(den << (-shift) as usize))
        };
        Self::from_parts(q, -shift, precision)
    }

    /// Parses a decimal literal such as `-1.25e-3` exactly, then rounds.
    pub fn parse_decimal(s: &str, precision: u32) -> Option<Self> {
        parse_decimal_rational(s).map(|r| Self::from_rational(&r, precision))
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i8 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mantissa: self.mantissa.abs(), ..self.clone() }
    }

    /// Exact rational value of the stored binary number.
    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            BigRational::new(self.mantissa.clone(), BigInt::one() << (-self.exponent) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = bit_len(&self.mantissa);
        let drop = (bits - 60).max(0);
        let top = (&self.mantissa >> drop as usize).to_f64().unwrap_or(0.0);
        top * 2f64.powi((self.exponent + drop).clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    /// Position of the leading bit, `floor(log2|x|) + 1`.
    fn top(&self) -> i64 {
        self.exponent + bit_len(&self.mantissa)
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let excess = bit_len(&self.mantissa) - self.precision as i64;
        if excess > 0 {
            let negative = self.mantissa.is_negative();
            let half = BigInt::one() << (excess - 1) as usize;
            let mut m = (self.mantissa.abs() + half) >> excess as usize;
            let mut e = self.exponent + excess;
            if bit_len(&m) > self.precision as i64 {
                m >>= 1;
                e += 1;
            }
            self.mantissa = if negative { -m } else { m };
            self.exponent = e;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let precision = self.precision.max(other.precision);
        if self.is_zero() {
            return Self::from_parts(other.mantissa.clone(), other.exponent, precision);
        }
        if other.is_zero() {
            return Self::from_parts(self.mantissa.clone(), self.exponent, precision);
        }
        let guard = precision as i64 + 4;
        if other.top() < self.top() - guard {
            return Self::from_parts(self.mantissa.clone(), self.exponent, precision);
        }
        if self.top() < other.top() - guard {
            return Self::from_parts(other.mantissa.clone(), other.exponent, precision);
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        Self::from_parts(a + b, e, precision)
    }

    pub fn neg(&self) -> Self {
        BigFloat { mantissa: -&self.mantissa, ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let precision = self.precision.max(other.precision);
        Self::from_parts(&self.mantissa * &other.mantissa, self.exponent + other.exponent, precision)
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let precision = self.precision.max(other.precision);
        let shift = (precision as i64 + bit_len(&other.mantissa) - bit_len(&self.mantissa) + 2).max(0);
        let q = (&self.mantissa << shift as usize) / &other.mantissa;
        Some(Self::from_parts(q, self.exponent - other.exponent - shift, precision))
    }

    pub fn sqrt(&self) -> Option<Self> {
        match self.signum() {
            -1 => None,
            0 => Some(self.clone()),
            _ => {
                let mut shift = (2 * self.precision as i64 + 4 - bit_len(&self.mantissa)).max(0);
                if (self.exponent - shift).rem_euclid(2) != 0 {
                    shift += 1;
                }
                let root = (&self.mantissa << shift as usize).sqrt();
                Some(Self::from_parts(root, (self.exponent - shift) / 2, self.precision))
            }
        }
    }

    /// Scientific notation with `digits` significant decimal digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let r = self.to_rational();
        let negative = r.is_negative();
        let r = r.abs();
        // Estimate the decimal exponent, then correct it exactly.
        let mut k = ((self.top() as f64 - 1.0) * std::f64::consts::LOG10_2).floor() as i64;
        let pow10 = |e: i64| -> BigRational {
            if e >= 0 {
                BigRational::from_integer(num_traits::pow(BigInt::from(10), e as usize))
            } else {
                BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), (-e) as usize))
            }
        };
        while r >= pow10(k + 1) {
            k += 1;
        }
        while r < pow10(k) {
            k -= 1;
        }
        let digits = digits.max(1);
        let scaled = &r / pow10(k) * pow10(digits as i64 - 1);
        let mut int = (scaled + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
        if int >= num_traits::pow(BigInt::from(10), digits) {
            int /= 10;
            k += 1;
        }
        let s = int.to_string();
        let (head, tail) = s.split_at(1);
        let tail = tail.trim_end_matches('0');
        let sign = if negative { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{k}")
        } else {
            format!("{sign}{head}.{tail}e{k}")
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl BigFloat {
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        if self.exponent == other.exponent {
            return self.mantissa.cmp(&other.mantissa);
        }
        self.to_rational().cmp(&other.to_rational())
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.precision as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize;
        write!(f, "{}", self.to_decimal_string(digits))
    }
}

/// Exact value of a decimal literal (`[-]digits[.digits][e[-]digits]`).
pub fn parse_decimal_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().ok()? / 10;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        r = -r;
    }
    Some(r)
}

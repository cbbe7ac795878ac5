//! Exact signs of leading principal minors by multi-modular computation.
//!
//! Entries live in `Q` or `Q(sqrt D)`. After clearing denominators every
//! minor is `A + B sqrt(D)` with integers `A`, `B` bounded by Hadamard's
//! inequality. Each prime `p` with `D` a square mod `p` gives two ring maps
//! `sqrt(D) -> +-r`; elimination without pivoting mod `p` yields all leading
//! minors at once, and CRT over enough primes recovers `A` and `B` exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::ScalarMatrix;
use crate::numtheory::{invmod, is_prime_u64, legendre, mulmod, sqrt_mod};
use crate::scalar::{Scalar, ScalarMode};

/// Integral form of a matrix over `Z[sqrt D]`: entry `(a[i][j], b[i][j])`.
struct IntegralPair {
    n: usize,
    d: u64,
    a: Vec<BigInt>,
    b: Vec<BigInt>,
}

fn integral_form(m: &ScalarMatrix) -> Result<IntegralPair> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let d = match ScalarMode::join_all(m.entries())? {
        ScalarMode::ExactRational => 1,
        ScalarMode::ExactQuadratic(d) => d,
        ScalarMode::BigFloat(_) => return Err(Error::invalid("exact minors need exact entries")),
    };
    let parts: Vec<(BigRational, BigRational)> = m.entries().iter().map(|s| s.parts().expect("exact entry")).collect();
    let l = parts.iter().fold(BigInt::one(), |acc, (x, y)| acc.lcm(x.denom()).lcm(y.denom()));
    let lr = BigRational::from_integer(l);
    let mut a: Vec<BigInt> = parts.iter().map(|(x, _)| (x * &lr).to_integer()).collect();
    let mut b: Vec<BigInt> = parts.iter().map(|(_, y)| (y * &lr).to_integer()).collect();
    let g = a.iter().chain(&b).fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        a.iter_mut().for_each(|x| *x /= &g);
        b.iter_mut().for_each(|x| *x /= &g);
    }
    Ok(IntegralPair { n: m.nrows(), d, a, b })
}

/// log2 of a bound on `|A|` and `|B|` for every leading minor.
fn hadamard_bits(p: &IntegralPair) -> f64 {
    let sqrt_d = (p.d as f64).sqrt() * 1.000_001;
    let mut bits = 0.0;
    for i in 0..p.n {
        let mut s = 0.0f64;
        for j in 0..p.n {
            let k = i * p.n + j;
            let e = big_abs_f64(&p.a[k]) + big_abs_f64(&p.b[k]) * sqrt_d;
            s += e * e;
        }
        bits += (0.5 * s.max(1.0).log2() + 1e-6) * 1.000_001;
    }
    bits
}

fn big_abs_f64(x: &BigInt) -> f64 {
    // rounded up slightly so the bound stays an upper bound
    x.abs().to_f64().unwrap_or(f64::MAX) * 1.000_001
}

/// Leading minors mod `p` under `sqrt D -> r`, or `None` on a zero pivot.
fn minors_mod(p: &IntegralPair, prime: u64, r: u64) -> Option<Vec<u64>> {
    let n = p.n;
    let red = |x: &BigInt| -> u64 {
        let m = x.mod_floor(&BigInt::from(prime));
        m.to_u64().expect("reduced")
    };
    let mut m: Vec<u64> = (0..n * n)
        .map(|k| {
            let a = red(&p.a[k]);
            if p.b[k].is_zero() {
                a
            } else {
                (a + mulmod(red(&p.b[k]), r, prime)) % prime
            }
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    let mut det = 1u64;
    for k in 0..n {
        let piv = m[k * n + k];
        if piv == 0 {
            return None;
        }
        det = mulmod(det, piv, prime);
        out.push(det);
        let inv = invmod(piv, prime)?;
        for i in k + 1..n {
            let f = mulmod(m[i * n + k], inv, prime);
            if f == 0 {
                continue;
            }
            let nf = prime - f;
            for j in k + 1..n {
                let x = m[k * n + j];
                if x != 0 {
                    m[i * n + j] = (m[i * n + j] + mulmod(nf, x, prime)) % prime;
                }
            }
        }
    }
    Some(out)
}

/// `A + B sqrt(D)` images per prime: `(p, [(A mod p, B mod p)])`.
fn residues_for_prime(p: &IntegralPair, prime: u64) -> Option<Vec<(u64, u64)>> {
    if p.d == 1 {
        return minors_mod(p, prime, 0).map(|v| v.into_iter().map(|a| (a, 0)).collect());
    }
    let r = sqrt_mod(p.d, prime)?;
    let plus = minors_mod(p, prime, r)?;
    let minus = minors_mod(p, prime, prime - r)?;
    let inv2 = invmod(2, prime)?;
    let inv2r = invmod(mulmod(2, r, prime), prime)?;
    Some(
        plus.iter()
            .zip(&minus)
            .map(|(&x, &y)| {
                let a = mulmod((x + y) % prime, inv2, prime);
                let b = mulmod((x + prime - y) % prime, inv2r, prime);
                (a, b)
            })
            .collect(),
    )
}

fn usable_primes(d: u64) -> impl Iterator<Item = u64> {
    let mut p = (1u64 << 62) + 1;
    std::iter::from_fn(move || loop {
        p -= 2;
        if p < 1 << 40 {
            return None;
        }
        if !is_prime_u64(p) {
            continue;
        }
        if d == 1 || (!p.is_multiple_of(d) && legendre(d, p) == 1) {
            return Some(p);
        }
    })
}

fn symmetric(x: &BigInt, m: &BigInt) -> BigInt {
    let x = x.mod_floor(m);
    if &x * 2 > *m {
        x - m
    } else {
        x
    }
}

/// Exact leading principal minors `Delta_1, ..., Delta_n`, each up to one
/// common positive factor (so signs are exact).
pub fn leading_minors(m: &ScalarMatrix) -> Result<Vec<Scalar>> {
    let p = integral_form(m)?;
    if p.n == 0 {
        return Ok(Vec::new());
    }
    let bits = hadamard_bits(&p) + 2.0;
    let mut moduli: Vec<(u64, Vec<(u64, u64)>)> = Vec::new();
    let mut logm = 0.0f64;
    let mut primes = usable_primes(p.d);
    let mut failures = 0usize;
    while logm <= bits {
        let need = ((bits - logm) / 61.0).ceil().max(1.0) as usize;
        let batch: Vec<u64> = primes.by_ref().take(need).collect();
        if batch.is_empty() {
            return Err(Error::invariant("ran out of moduli for exact minors"));
        }
        let results: Vec<(u64, Option<Vec<(u64, u64)>>)> =
            batch.par_iter().map(|&q| (q, residues_for_prime(&p, q))).collect();
        for (q, r) in results {
            match r {
                Some(v) => {
                    logm += (q as f64).log2();
                    moduli.push((q, v));
                }
                None => failures += 1,
            }
        }
        if failures > 64 {
            return Err(Error::RankDeficient("a leading minor vanishes".into()));
        }
    }
    let mut out = Vec::with_capacity(p.n);
    for k in 0..p.n {
        let mut ma = BigInt::zero();
        let mut mb = BigInt::zero();
        let mut modulus = BigInt::one();
        for (q, v) in &moduli {
            let bq = BigInt::from(*q);
            let (ra, rb) = v[k];
            for (acc, r) in [(&mut ma, ra), (&mut mb, rb)] {
                // acc + modulus * t = r (mod q)
                let cur = acc.mod_floor(&bq).to_u64().expect("reduced");
                let mi = invmod((&modulus % &bq).to_u64().expect("reduced"), *q).expect("coprime moduli");
                let t = mulmod((r + q - cur) % q, mi, *q);
                *acc += &modulus * BigInt::from(t);
            }
            modulus *= bq;
        }
        let a = BigRational::from_integer(symmetric(&ma, &modulus));
        let b = BigRational::from_integer(symmetric(&mb, &modulus));
        out.push(if p.d == 1 { Scalar::from(a) } else { Scalar::quadratic(a, b, p.d)? });
    }
    Ok(out)
}

/// Definiteness of a symmetric exact matrix read off the minor signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definiteness {
    Positive,
    Negative,
    Neither,
}

pub fn definiteness(m: &ScalarMatrix) -> Result<Definiteness> {
    if !m.is_symmetric() {
        return Err(Error::invalid("definiteness needs a symmetric matrix"));
    }
    let minors = match leading_minors(m) {
        Ok(v) => v,
        Err(Error::RankDeficient(_)) => return Ok(Definiteness::Neither),
        Err(e) => return Err(e),
    };
    let signs: Vec<i8> = minors.iter().map(Scalar::signum).collect();
    if signs.iter().all(|&s| s > 0) {
        Ok(Definiteness::Positive)
    } else if signs.iter().enumerate().all(|(k, &s)| s == if k % 2 == 0 { -1 } else { 1 }) {
        Ok(Definiteness::Negative)
    } else {
        Ok(Definiteness::Neither)
    }
}

/// Rational `L D L^T` pivots; the slow oracle for small matrices.
pub fn ldl_pivots(m: &ScalarMatrix) -> Result<Option<Vec<Scalar>>> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut piv = Vec::with_capacity(n);
    for k in 0..n {
        let p = a[(k, k)].clone();
        if p.is_zero() {
            return Ok(None);
        }
        let inv = p.inv().ok_or(Error::Degenerate)?;
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = a[(i, k)].checked_mul(&inv)?;
            for j in k + 1..n {
                if a[(k, j)].is_zero() {
                    continue;
                }
                let v = &a[(i, j)] - &(&f * &a[(k, j)]);
                a[(i, j)] = v;
            }
        }
        piv.push(p);
    }
    Ok(Some(piv))
}

/// Float check: every pivot of `L D L^T` exceeds `eps`. Never a proof.
pub fn float_positive_definite(m: &ScalarMatrix, precision: u32, eps: &BigRational) -> bool {
    use crate::bigfloat::BigFloat;
    let n = m.nrows();
    let mut a: Vec<BigFloat> = m.entries().iter().map(|s| s.to_bigfloat(precision)).collect();
    let eps = BigFloat::from_rational(eps, precision);
    for k in 0..n {
        let p = a[k * n + k].clone();
        if p.sub(&eps).signum() <= 0 {
            return false;
        }
        for i in k + 1..n {
            let Some(f) = a[i * n + k].div(&p) else { return false };
            if f.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let v = a[i * n + j].sub(&f.mul(&a[k * n + j]));
                a[i * n + j] = v;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IntMatrix;

    fn q2(a: i64, b: i64) -> Scalar {
        Scalar::quadratic(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()), 2).unwrap()
    }

    #[test]
    fn rational_minors_match_bareiss() {
        let m = IntMatrix::from_i64(&[vec![4, 2, 1], vec![2, 5, 3], vec![1, 3, 6]]);
        let minors = leading_minors(&m.to_scalar()).unwrap();
        assert_eq!(minors, vec![Scalar::int(4), Scalar::int(16), Scalar::int(67)]);
        assert_eq!(definiteness(&m.to_scalar()).unwrap(), Definiteness::Positive);
        assert_eq!(definiteness(&m.to_scalar().neg()).unwrap(), Definiteness::Negative);
        let ind = IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]).to_scalar();
        assert_eq!(definiteness(&ind).unwrap(), Definiteness::Neither);
    }

    #[test]
    fn quadratic_minors() {
        // [[1+sqrt2, 1], [1, 1]]: minors 1+sqrt2 and sqrt2
        let m = ScalarMatrix::from_rows(vec![vec![q2(1, 1), Scalar::int(1)], vec![Scalar::int(1), Scalar::int(1)]])
            .unwrap();
        let minors = leading_minors(&m).unwrap();
        assert_eq!(minors, vec![q2(1, 1), q2(0, 1)]);
        // [[sqrt2 - 1, 1], [1, 1]]: det sqrt2 - 2 < 0
        let m = ScalarMatrix::from_rows(vec![vec![q2(-1, 1), Scalar::int(1)], vec![Scalar::int(1), Scalar::int(1)]])
            .unwrap();
        assert_eq!(definiteness(&m).unwrap(), Definiteness::Neither);
    }

    #[test]
    fn ldl_oracle_agrees() {
        let m = IntMatrix::from_i64(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).to_scalar();
        let piv = ldl_pivots(&m).unwrap().unwrap();
        assert!(piv.iter().all(|p| p.signum() > 0));
        assert!(float_positive_definite(&m, 64, &BigRational::new(1.into(), 1000.into())));
    }
}

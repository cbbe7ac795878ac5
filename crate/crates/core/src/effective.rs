//! Effectivity calculators: a certified neat congruence level, finite-order
//! certificates for integer matrices, and the Fujino separation sum.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::numtheory::{next_prime, Primality};

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Level `l` whose principal congruence subgroup in `GL_n(Z)` is neat.
///
/// Eigenvalues of `g = I mod l` lie in `1 + m` of an extension of `Q_l` of
/// degree at most `n!`; that group has no torsion once the ramification
/// index is below `l - 1`. The level is certified, not minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeatCertificate {
    pub n: u32,
    pub prime: BigInt,
    pub factorial: BigInt,
    /// `ProbablePrime` above the deterministic Miller-Rabin range.
    pub primality: Primality,
}

pub fn neat_congruence_level(n: u32) -> Result<NeatCertificate> {
    if n == 0 {
        return Err(Error::invalid("matrix size must be at least 1"));
    }
    let f = factorial(n);
    let (prime, primality) = next_prime(&(&f + 2));
    if &prime - 1 <= f {
        return Err(Error::invariant("neat level violates l - 1 > n!"));
    }
    Ok(NeatCertificate { n, prime, factorial: f, primality })
}

pub fn congruence_membership(g: &IntMatrix, l: &BigInt) -> Result<bool> {
    if !g.is_square() {
        return Err(Error::DimensionMismatch { expected: g.nrows(), found: g.ncols() });
    }
    if *l < BigInt::one() {
        return Err(Error::invalid("modulus must be positive"));
    }
    let n = g.nrows();
    Ok((0..n).all(|i| (0..n).all(|j| (&g[(i, j)] - BigInt::from((i == j) as i64)).is_multiple_of(l))))
}

/// Integer polynomial, coefficients from the constant term up.
type Poly = Vec<BigInt>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Division by a monic polynomial: `(quotient, remainder)`.
fn poly_divmod(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = b.len() - 1;
    let mut r = a.clone();
    if r.len() <= db {
        return (vec![BigInt::zero()], trim(r));
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[k + j] -= &c * y;
        }
        q[k] = c;
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

/// `Phi_d` for `d >= 1`.
pub fn cyclotomic(d: usize) -> Vec<BigInt> {
    let mut p: Poly = vec![BigInt::zero(); d + 1];
    p[0] = BigInt::from(-1);
    p[d] = BigInt::one();
    for e in 1..d {
        if d.is_multiple_of(e) {
            p = poly_divmod(&p, &cyclotomic(e)).0;
        }
    }
    p
}

fn totient(mut n: usize) -> usize {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// Characteristic polynomial `det(xI - g)` by Faddeev-LeVerrier.
pub fn characteristic_polynomial(g: &IntMatrix) -> Result<Vec<BigInt>> {
    let n = g.nrows();
    if !g.is_square() {
        return Err(Error::DimensionMismatch { expected: n, found: g.ncols() });
    }
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = g M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(g M_k) / k
        let mut next = g.matmul(&m)?;
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        m = next;
        let t = g.matmul(&m)?.trace();
        let (q, r) = t.div_rem(&BigInt::from(k));
        if !r.is_zero() {
            return Err(Error::invariant("Faddeev-LeVerrier division was inexact"));
        }
        coeffs[n - k] = -q;
    }
    Ok(coeffs)
}

fn eval_at_matrix(p: &Poly, g: &IntMatrix) -> Result<IntMatrix> {
    let n = g.nrows();
    let mut acc = IntMatrix::zeros(n, n);
    for c in p.iter().rev() {
        acc = g.matmul(&acc)?;
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteOrder {
    pub finite: bool,
    /// `lcm` of the cyclotomic indices when `finite`.
    pub order: Option<BigInt>,
    /// Cyclotomic indices with multiplicity, when the characteristic
    /// polynomial factors completely into cyclotomics.
    pub factors: Vec<usize>,
}

/// Finite order iff the characteristic polynomial is a product of
/// cyclotomic polynomials and the product of the distinct ones kills `g`.
pub fn has_finite_order(g: &IntMatrix) -> Result<FiniteOrder> {
    let n = g.nrows();
    let mut p = trim(characteristic_polynomial(g)?);
    let mut factors = Vec::new();
    let max_d = (2 * n * n).max(2);
    for d in 1..=max_d {
        if totient(d) > n {
            continue;
        }
        let phi = cyclotomic(d);
        loop {
            let (q, r) = poly_divmod(&p, &phi);
            if r.iter().all(Zero::is_zero) && p.len() > 1 {
                p = q;
                factors.push(d);
            } else {
                break;
            }
        }
    }
    let none = FiniteOrder { finite: false, order: None, factors: factors.clone() };
    if p != vec![BigInt::one()] {
        return Ok(none);
    }
    let mut distinct = factors.clone();
    distinct.dedup();
    let radical = distinct.iter().fold(vec![BigInt::one()], |acc, &d| poly_mul(&acc, &cyclotomic(d)));
    if !eval_at_matrix(&radical, g)?.is_zero() {
        return Ok(none);
    }
    let order = distinct.iter().fold(BigInt::one(), |acc, &d| acc.lcm(&BigInt::from(d)));
    Ok(FiniteOrder { finite: true, order: Some(order), factors })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separation {
    Holds,
    Fails,
    /// The enclosing interval still straddles 1 at the largest precision.
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FujinoCheck {
    pub outcome: Separation,
    pub lower: BigRational,
    pub upper: BigRational,
    pub precision: u32,
}

/// Rational enclosure `[lo, hi]` of `2^(1/k)` with `p` fractional bits.
fn root_two_enclosure(k: u32, p: u32) -> (BigRational, BigRational) {
    let target = BigInt::one() << (1 + k as usize * p as usize);
    let r = target.nth_root(k);
    let den = BigInt::one() << p as usize;
    let lo = BigRational::new(r.clone(), den.clone());
    let hi = if num_traits::pow(r.clone(), k as usize) == target { lo.clone() } else { BigRational::new(r + 1, den) };
    (lo, hi)
}

/// Evaluates `sum_k 2^(1/k) k / c(k) <= 1` with outward-rounded roots,
/// doubling the precision until the interval decides.
pub fn fujino_separation_check(dim: usize, c: &[BigRational]) -> Result<FujinoCheck> {
    if dim == 0 || c.len() != dim {
        return Err(Error::invalid("need dim >= 1 and one value c(k) per k"));
    }
    if c.iter().any(|x| !x.is_positive()) {
        return Err(Error::invalid("the values c(k) must be positive"));
    }
    let one = BigRational::one();
    let mut p = 64;
    loop {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (i, ck) in c.iter().enumerate() {
            let k = i as u32 + 1;
            let (a, b) = root_two_enclosure(k, p);
            let w = BigRational::from_integer(k.into()) / ck;
            lo += a * &w;
            hi += b * &w;
        }
        let outcome = if hi <= one {
            Some(Separation::Holds)
        } else if lo > one {
            Some(Separation::Fails)
        } else if p >= 4096 {
            Some(Separation::Indeterminate)
        } else {
            None
        };
        if let Some(outcome) = outcome {
            return Ok(FujinoCheck { outcome, lower: lo, upper: hi, precision: p });
        }
        p *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn neat_levels() {
        let got: Vec<BigInt> = (1..=3).map(|n| neat_congruence_level(n).unwrap().prime).collect();
        assert_eq!(got, vec![BigInt::from(3), BigInt::from(5), BigInt::from(11)]);
        assert_eq!(neat_congruence_level(4).unwrap().prime, BigInt::from(29));
        assert!(neat_congruence_level(0).is_err());
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), vec![BigInt::from(-1), BigInt::one()]);
        assert_eq!(cyclotomic(4), crate::matrix::int_vec(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), crate::matrix::int_vec(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), crate::matrix::int_vec(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn finite_orders() {
        let id = has_finite_order(&IntMatrix::identity(3)).unwrap();
        assert!(id.finite);
        assert_eq!(id.order, Some(BigInt::one()));
        let rot = has_finite_order(&IntMatrix::from_i64(&[vec![0, -1], vec![1, 0]])).unwrap();
        assert_eq!(rot.order, Some(BigInt::from(4)));
        assert_eq!(rot.factors, vec![4]);
        assert!(!has_finite_order(&IntMatrix::from_i64(&[vec![1, 1], vec![0, 1]])).unwrap().finite);
        assert!(!has_finite_order(&IntMatrix::from_i64(&[vec![2, 1], vec![1, 1]])).unwrap().finite);
        let c6 = IntMatrix::from_i64(&[vec![1, -1], vec![1, 0]]);
        assert_eq!(has_finite_order(&c6).unwrap().order, Some(BigInt::from(6)));
    }

    #[test]
    fn char_poly() {
        let g = IntMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(characteristic_polynomial(&g).unwrap(), crate::matrix::int_vec(&[1, -3, 1]));
    }

    #[test]
    fn congruences() {
        let l = BigInt::from(3);
        assert!(congruence_membership(&IntMatrix::identity(3), &BigInt::from(7)).unwrap());
        assert!(congruence_membership(&IntMatrix::from_i64(&[vec![1, 3], vec![0, 1]]), &l).unwrap());
        assert!(!congruence_membership(&IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]), &l).unwrap());
    }

    #[test]
    fn fujino_examples() {
        let r = fujino_separation_check(1, &[q(2, 1)]).unwrap();
        assert_eq!(r.outcome, Separation::Holds);
        assert_eq!(r.upper, q(1, 1));
        assert_eq!(fujino_separation_check(2, &[q(4, 1), q(4, 1)]).unwrap().outcome, Separation::Fails);
        assert_eq!(fujino_separation_check(1, &[q(19, 10)]).unwrap().outcome, Separation::Fails);
        assert!(fujino_separation_check(2, &[q(1, 1)]).is_err());
        assert!(fujino_separation_check(1, &[q(-1, 1)]).is_err());
    }
}

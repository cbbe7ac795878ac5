//! Howell normal form over the chain ring `Z/l^n`.
//!
//! Over a chain ring every nonzero element is `l^v` times a unit, so the
//! pivot step only needs minimal valuations. Rows `l^(n-v) r` of each pivot
//! row `r` are fed back into the elimination; the resulting echelon form
//! spans a module of order `prod l^(n - v_i)`, which is what kernels and
//! invariants are read off from.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::numtheory::invmod;

/// Modulus `l^n` with `l` prime; kept below `2^63` so products fit in `u128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
    pub modulus: u64,
}

impl PrimePower {
    pub fn new(prime: u64, exponent: u32) -> Result<Self> {
        if !crate::numtheory::is_prime_u64(prime) {
            return Err(Error::invalid(format!("{prime} is not prime")));
        }
        if exponent == 0 {
            return Err(Error::invalid("exponent must be at least 1"));
        }
        let modulus = (prime as u128)
            .checked_pow(exponent)
            .filter(|&m| m < 1u128 << 63)
            .ok_or_else(|| Error::guard(format!("{prime}^{exponent} exceeds 63 bits")))?;
        Ok(PrimePower { prime, exponent, modulus: modulus as u64 })
    }

    pub fn reduce(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.modulus)).to_u64().expect("reduced")
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.modulus - (b - a)
        }
    }

    /// `l`-adic valuation, capped at `n` (so `0` has valuation `n`).
    pub fn valuation(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.exponent;
        }
        let mut v = 0;
        while a.is_multiple_of(self.prime) {
            a /= self.prime;
            v += 1;
        }
        v
    }

    fn pow_l(&self, v: u32) -> u64 {
        self.prime.pow(v)
    }

    /// Order of `(Z/l^n)^k` as an integer.
    pub fn order_of_free(&self, k: usize) -> BigInt {
        num_traits::pow(BigInt::from(self.prime), self.exponent as usize * k)
    }
}

/// Row Howell form: rows in echelon shape, pivot entries `l^v` with
/// `v < n`, entries above a pivot reduced below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HowellForm {
    pub ring: PrimePower,
    pub ncols: usize,
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
}

impl HowellForm {
    pub fn new(m: &IntMatrix, ring: PrimePower) -> Self {
        let rows: Vec<Vec<u64>> = m.rows_iter().map(|r| r.iter().map(|x| ring.reduce(x)).collect()).collect();
        Self::from_reduced(rows, m.ncols(), ring)
    }

    pub fn from_reduced(mut work: Vec<Vec<u64>>, ncols: usize, ring: PrimePower) -> Self {
        let mut out: Vec<Vec<u64>> = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..ncols {
            work.retain(|r| r.iter().any(|&x| x != 0));
            let best = work
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col] != 0)
                .min_by_key(|(_, r)| ring.valuation(r[col]))
                .map(|(i, _)| i);
            let Some(bi) = best else { continue };
            let mut piv = work.swap_remove(bi);
            let v = ring.valuation(piv[col]);
            let unit = piv[col] / ring.pow_l(v);
            let inv = invmod(unit % ring.modulus, ring.modulus).expect("unit");
            for x in piv.iter_mut() {
                *x = ring.mul(*x, inv);
            }
            let p = piv[col];
            for r in work.iter_mut() {
                if r[col] != 0 {
                    let q = r[col] / p;
                    for (x, y) in r.iter_mut().zip(&piv) {
                        *x = ring.sub(*x, ring.mul(q, *y));
                    }
                }
            }
            for r in out.iter_mut() {
                let q = r[col] / p;
                if q != 0 {
                    for (x, y) in r.iter_mut().zip(&piv) {
                        *x = ring.sub(*x, ring.mul(q, *y));
                    }
                }
            }
            if v > 0 {
                let ann = ring.pow_l(ring.exponent - v);
                let extra: Vec<u64> = piv.iter().map(|&x| ring.mul(x, ann)).collect();
                work.push(extra);
            }
            out.push(piv);
            pivots.push(col);
        }
        HowellForm { ring, ncols, rows: out, pivots }
    }

    /// Order of the row span.
    pub fn span_order(&self) -> BigInt {
        let l = BigInt::from(self.ring.prime);
        self.rows
            .iter()
            .zip(&self.pivots)
            .map(|(r, &c)| num_traits::pow(l.clone(), (self.ring.exponent - self.ring.valuation(r[c])) as usize))
            .product()
    }

    /// Whether `v` lies in the row span.
    pub fn contains(&self, v: &[u64]) -> bool {
        let ring = self.ring;
        let mut v = v.to_vec();
        for (r, &c) in self.rows.iter().zip(&self.pivots) {
            let p = r[c];
            if !v[c].is_multiple_of(p) {
                return false;
            }
            let q = v[c] / p;
            for (x, y) in v.iter_mut().zip(r) {
                *x = ring.sub(*x, ring.mul(q, *y));
            }
        }
        v.iter().all(|x| x.is_zero())
    }
}

/// Order of `{x in (Z/l^n)^p : x M = 0}` for a `p x q` integer matrix.
pub fn left_kernel_order(m: &IntMatrix, ring: PrimePower) -> BigInt {
    let span = HowellForm::new(m, ring).span_order();
    ring.order_of_free(m.nrows()) / span
}

/// Order of `{x : M x = 0}` over `Z/l^n`.
pub fn right_kernel_order(m: &IntMatrix, ring: PrimePower) -> BigInt {
    left_kernel_order(&m.transpose(), ring)
}

/// The same kernel order read off the integer Smith form: each elementary
/// divisor `d` contributes `gcd(d, l^n)`, each missing one `l^n`.
pub fn right_kernel_order_snf(m: &IntMatrix, ring: PrimePower) -> BigInt {
    let divs = crate::intlin::elementary_divisors(m);
    let nmod = BigInt::from(ring.modulus);
    let free = m.ncols() - divs.len();
    divs.iter().map(|d| d.gcd(&nmod)).product::<BigInt>() * ring.order_of_free(free)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(l: u64, n: u32) -> PrimePower {
        PrimePower::new(l, n).unwrap()
    }

    #[test]
    fn howell_property_example() {
        // over Z/4 the row (2, 1) also spans (0, 2)
        let m = IntMatrix::from_i64(&[vec![2, 1]]);
        let h = HowellForm::new(&m, pp(2, 2));
        assert_eq!(h.rows, vec![vec![2, 1], vec![0, 2]]);
        assert_eq!(h.span_order(), BigInt::from(4));
        assert!(h.contains(&[0, 2]));
        assert!(!h.contains(&[0, 1]));
    }

    #[test]
    fn kernel_orders() {
        let neg = IntMatrix::from_i64(&[vec![-2]]);
        assert_eq!(right_kernel_order(&neg, pp(3, 4)), BigInt::from(1));
        assert_eq!(right_kernel_order(&neg, pp(2, 4)), BigInt::from(2));
        assert_eq!(right_kernel_order(&IntMatrix::zeros(2, 2), pp(5, 2)), BigInt::from(625));
        let rot = IntMatrix::from_i64(&[vec![-1, -1], vec![1, -1]]);
        for n in 1..6 {
            assert_eq!(right_kernel_order(&rot, pp(2, n)), BigInt::from(2));
        }
    }

    #[test]
    fn agrees_with_smith_form() {
        let m = IntMatrix::from_i64(&[vec![4, 6, 2], vec![2, 0, 8], vec![6, 6, 10], vec![0, 12, 4]]);
        for n in 1..5 {
            for l in [2, 3, 5] {
                assert_eq!(right_kernel_order(&m, pp(l, n)), right_kernel_order_snf(&m, pp(l, n)));
            }
        }
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(PrimePower::new(4, 1).is_err());
        assert!(PrimePower::new(2, 0).is_err());
        assert!(PrimePower::new(2, 64).is_err());
    }
}

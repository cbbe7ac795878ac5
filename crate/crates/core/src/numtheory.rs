//! Primality, modular square roots and integer factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo `m` when `gcd(a, m) = 1`.
pub fn invmod(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

const SMALL_PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn witness_u64(n: u64, a: u64) -> bool {
    // true when `a` proves `n` composite
    let d0 = n - 1;
    let s = d0.trailing_zeros();
    let d = d0 >> s;
    let mut x = powmod(a, d, n);
    if x == 1 || x == n - 1 {
        return false;
    }
    for _ in 1..s {
        x = mulmod(x, x, n);
        if x == n - 1 {
            return false;
        }
    }
    true
}

/// Deterministic for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES[..12] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    SMALL_PRIMES[..12].iter().all(|&a| !witness_u64(n, a))
}

/// Outcome of a primality test on an arbitrary integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Primality {
    Composite,
    /// Proven (Miller-Rabin with the first 13 prime bases is deterministic
    /// below 3.317e24).
    Prime,
    /// Passed strong tests to many bases but above the proven range.
    ProbablePrime,
}

fn witness_big(n: &BigInt, a: &BigInt) -> bool {
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    let mut x = a.modpow(&d, n);
    if x == one || x == nm1 {
        return false;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == nm1 {
            return false;
        }
    }
    true
}

pub fn primality(n: &BigInt) -> Primality {
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) { Primality::Prime } else { Primality::Composite };
    }
    if n.is_negative() {
        return Primality::Composite;
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    if SMALL_PRIMES.iter().any(|&a| witness_big(n, &BigInt::from(a))) {
        return Primality::Composite;
    }
    let bound: BigInt = "3317044064679887385961981".parse().expect("literal");
    if n < &bound {
        return Primality::Prime;
    }
    // extra fixed bases above the proven range
    for a in [43u64, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97] {
        if witness_big(n, &BigInt::from(a)) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

/// Smallest prime `>= n`, with its primality status.
pub fn next_prime(n: &BigInt) -> (BigInt, Primality) {
    let mut c = if n < &BigInt::from(2) { BigInt::from(2) } else { n.clone() };
    loop {
        match primality(&c) {
            Primality::Composite => c += 1,
            status => return (c, status),
        }
    }
}

/// Largest prime `< n`.
pub fn prev_prime_u64(mut n: u64) -> Option<u64> {
    while n > 2 {
        n -= 1;
        if is_prime_u64(n) {
            return Some(n);
        }
    }
    None
}

/// Legendre symbol `(a/p)` for an odd prime `p`, as `-1`, `0` or `1`.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if powmod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A square root of `a` modulo the odd prime `p` (Tonelli-Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(powmod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre(z, p) == -1)?;
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

/// Largest `k` with `l^k | n` (`n` nonzero).
pub fn valuation(n: &BigInt, l: &BigInt) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let mut n = n.abs();
    let mut k = 0;
    while n.is_multiple_of(l) {
        n /= l;
        k += 1;
    }
    k
}

fn pollard_brent(n: &BigInt, c: u64) -> Option<BigInt> {
    let one = BigInt::one();
    let c = BigInt::from(c);
    let f = |x: &BigInt| (x * x + &c) % n;
    let mut y = BigInt::from(2);
    let mut r: u64 = 1;
    let mut q = BigInt::one();
    let mut g = BigInt::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let m = 128u64;
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = q * (&x - &y).abs() % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = (&x - &ys).abs().gcd(n);
            if g > one {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// Prime factorization of `|n|` for `n != 0`, sorted by prime.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = 2u64;
    while p < 10_000 {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut k = 0;
        while n.is_multiple_of(&bp) {
            n /= &bp;
            k += 1;
        }
        if k > 0 {
            out.push((bp, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if primality(&m) != Primality::Composite {
            match out.iter_mut().find(|(q, _)| *q == m) {
                Some(e) => e.1 += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let d = (1..).find_map(|c| pollard_brent(&m, c)).expect("composite has a factor");
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort();
    out
}

pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

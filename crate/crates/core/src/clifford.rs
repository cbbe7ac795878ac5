//! Sparse arithmetic in the even Clifford algebra of a diagonal form.
//!
//! Basis monomials `e_{i1} ... e_{ik}` with `i1 < ... < ik` are stored as
//! bitmasks (bit `i-1` stands for `e_i`). Multiplying two monomials is the
//! symmetric difference of the masks; the sign counts the transpositions
//! needed to sort the concatenation and each shared generator contributes
//! its norm `q_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::QuadLattice;
use crate::matrix::{IntMatrix, ScalarMatrix};
use crate::scalar::{Scalar, ScalarMode};

/// Default rank above which dense `2^(n-1)`-square matrices are refused.
pub const DEFAULT_GUARD_RANK: usize = 13;

/// Dense guard, overridable through `KS_GUARD_RANK`.
pub fn guard_rank_from_env() -> usize {
    std::env::var("KS_GUARD_RANK")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&g| g >= 2)
        .unwrap_or(DEFAULT_GUARD_RANK)
}

/// Diagonal norms of an orthogonal basis, plus where the basis came from.
#[derive(Debug)]
pub struct CliffordContext {
    q: Vec<Scalar>,
    q_small: Option<Vec<i64>>,
    ambient: Option<(Arc<QuadLattice>, IntMatrix)>,
    index: Option<BigInt>,
    guard: usize,
}

impl CliffordContext {
    pub fn new(q: Vec<Scalar>) -> Result<Arc<Self>> {
        if q.is_empty() || q.len() > 63 {
            return Err(Error::invalid(format!("clifford rank {} outside 1..=63", q.len())));
        }
        if q.iter().any(Scalar::is_zero) {
            return Err(Error::invalid("diagonal norms must be nonzero"));
        }
        ScalarMode::join_all(&q)?;
        let q_small =
            q.iter().map(|s| s.to_integer().and_then(|i| i64::try_from(i).ok())).collect::<Option<Vec<i64>>>();
        Ok(Arc::new(CliffordContext { q, q_small, ambient: None, index: None, guard: guard_rank_from_env() }))
    }

    pub fn from_ints(q: &[i64]) -> Result<Arc<Self>> {
        Self::new(q.iter().map(|&x| Scalar::int(x)).collect())
    }

    /// Built on an orthogonal basis of `lattice` (negative norms first). The
    /// chosen vectors span a sublattice whose index is recorded.
    pub fn from_lattice(lattice: Arc<QuadLattice>) -> Result<Arc<Self>> {
        let ob = lattice.orthogonal_basis()?;
        let q = ob.norms.iter().map(Scalar::from).collect();
        let mut ctx = Arc::try_unwrap(Self::new(q)?).expect("fresh context");
        ctx.ambient = Some((lattice, ob.vectors));
        ctx.index = Some(ob.index);
        Ok(Arc::new(ctx))
    }

    /// Same norms with a different dense guard.
    pub fn with_guard(&self, guard: usize) -> Arc<Self> {
        Arc::new(CliffordContext {
            q: self.q.clone(),
            q_small: self.q_small.clone(),
            ambient: self.ambient.clone(),
            index: self.index.clone(),
            guard: guard.max(2),
        })
    }

    pub fn rank(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[Scalar] {
        &self.q
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    /// Lattice and the orthogonal vectors (rows) the generators stand for.
    pub fn ambient(&self) -> Option<(&Arc<QuadLattice>, &IntMatrix)> {
        self.ambient.as_ref().map(|(l, v)| (l, v))
    }

    /// Index of the span of the orthogonal vectors in the ambient lattice.
    pub fn sublattice_index(&self) -> Option<&BigInt> {
        self.index.as_ref()
    }

    /// `2^(n-1)`, the dimension of the even subalgebra.
    pub fn even_dim(&self) -> u128 {
        1u128 << (self.rank() - 1)
    }

    pub fn check_dense(&self) -> Result<usize> {
        if self.rank() > self.guard {
            return Err(Error::guard(format!(
                "dense matrices need rank <= {}, context has rank {}",
                self.guard,
                self.rank()
            )));
        }
        Ok(1usize << (self.rank() - 1))
    }

    pub fn same_as(&self, other: &CliffordContext) -> bool {
        std::ptr::eq(self, other) || self.q == other.q
    }

    /// `(mask, sign * metric)` with `e_a e_b = sign * metric * e_(a xor b)`.
    pub fn blade_product(&self, a: u64, b: u64) -> (u64, Scalar) {
        let negative = reorder_sign(a, b);
        let shared = a & b;
        let mut coeff = match &self.q_small {
            Some(qs) => small_metric(qs, shared).map(|m| Scalar::from(BigInt::from(m))),
            None => None,
        }
        .unwrap_or_else(|| self.metric(shared));
        if negative {
            coeff = -coeff;
        }
        (a ^ b, coeff)
    }

    fn metric(&self, mut shared: u64) -> Scalar {
        let mut m = Scalar::one();
        while shared != 0 {
            let i = shared.trailing_zeros() as usize;
            m = &m * &self.q[i];
            shared &= shared - 1;
        }
        m
    }
}

/// True when sorting the word `a b` into increasing order takes an odd
/// number of transpositions.
#[inline]
pub fn reorder_sign(a: u64, b: u64) -> bool {
    let mut x = a >> 1;
    let mut swaps = 0u32;
    while x != 0 {
        swaps += (x & b).count_ones();
        x >>= 1;
    }
    swaps & 1 == 1
}

#[inline]
fn small_metric(qs: &[i64], mut shared: u64) -> Option<i128> {
    let mut m: i128 = 1;
    while shared != 0 {
        let i = shared.trailing_zeros() as usize;
        m = m.checked_mul(qs[i] as i128)?;
        shared &= shared - 1;
    }
    Some(m)
}

/// Position of an even mask in the canonical basis of `C+`: drop bit 0,
/// which is determined by parity.
#[inline]
pub fn even_index(mask: u64) -> usize {
    (mask >> 1) as usize
}

#[inline]
pub fn even_mask(index: usize) -> u64 {
    let hi = (index as u64) << 1;
    hi | (hi.count_ones() as u64 & 1)
}

pub fn mask_to_subset(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn subset_to_mask(subset: &[usize], n: usize) -> Result<u64> {
    let mut mask = 0u64;
    for &i in subset {
        if i == 0 || i > n {
            return Err(Error::invalid(format!("generator index {i} outside 1..={n}")));
        }
        let bit = 1u64 << (i - 1);
        if mask & bit != 0 {
            return Err(Error::invalid(format!("generator {i} repeated in subset")));
        }
        mask |= bit;
    }
    Ok(mask)
}

#[derive(Clone)]
pub struct CliffordElement {
    ctx: Arc<CliffordContext>,
    terms: BTreeMap<u64, Scalar>,
}

impl CliffordElement {
    pub fn zero(ctx: &Arc<CliffordContext>) -> Self {
        CliffordElement { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(ctx: &Arc<CliffordContext>, s: Scalar) -> Self {
        let mut e = Self::zero(ctx);
        if !s.is_zero() {
            e.terms.insert(0, s);
        }
        e
    }

    pub fn one(ctx: &Arc<CliffordContext>) -> Self {
        Self::scalar(ctx, Scalar::one())
    }

    /// Monomial for a subset of `1..=n` given in any order; the coefficient
    /// absorbs the sign of sorting it.
    pub fn monomial(ctx: &Arc<CliffordContext>, subset: &[usize], coeff: Scalar) -> Result<Self> {
        if subset.len() % 2 == 1 {
            return Err(Error::invalid("odd subsets do not lie in the even subalgebra"));
        }
        subset_to_mask(subset, ctx.rank())?;
        // sort the word one generator at a time
        let mut mask = 0u64;
        let mut sign = false;
        for &i in subset {
            let bit = 1u64 << (i - 1);
            sign ^= reorder_sign(mask, bit);
            mask |= bit;
        }
        let c = if sign { -coeff } else { coeff };
        Self::from_terms(ctx, [(mask, c)])
    }

    /// From `(mask, coefficient)` pairs; repeated masks are summed.
    pub fn from_terms(ctx: &Arc<CliffordContext>, terms: impl IntoIterator<Item = (u64, Scalar)>) -> Result<Self> {
        let n = ctx.rank();
        let mut e = Self::zero(ctx);
        for (mask, c) in terms {
            if mask.count_ones() % 2 == 1 {
                return Err(Error::invalid("odd subsets do not lie in the even subalgebra"));
            }
            if n < 64 && mask >> n != 0 {
                return Err(Error::invalid(format!("mask {mask:#b} uses generators beyond rank {n}")));
            }
            e.accumulate(mask, c)?;
        }
        Ok(e)
    }

    fn accumulate(&mut self, mask: u64, c: Scalar) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&mask) {
            Some(old) => {
                let s = old.checked_add(&c)?;
                if !s.is_zero() {
                    self.terms.insert(mask, s);
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
        Ok(())
    }

    pub fn context(&self) -> &Arc<CliffordContext> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Scalar)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, mask: u64) -> Scalar {
        self.terms.get(&mask).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mode(&self) -> Result<ScalarMode> {
        ScalarMode::join_all(self.terms.values())
    }

    fn check_ctx(&self, other: &CliffordElement) -> Result<()> {
        if !self.ctx.same_as(&other.ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &CliffordElement) -> Result<CliffordElement> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.accumulate(m, c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CliffordElement) -> Result<CliffordElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CliffordElement {
        CliffordElement { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Result<CliffordElement> {
        let mut out = Self::zero(&self.ctx);
        for (m, c) in self.terms() {
            let v = c.checked_mul(s)?;
            if !v.is_zero() {
                out.terms.insert(m, v);
            }
        }
        Ok(out)
    }

    pub fn multiply(&self, other: &CliffordElement) -> Result<CliffordElement> {
        self.check_ctx(other)?;
        self.mode()?.join(other.mode()?)?;
        match self.multiply_small(other) {
            Some(out) => Ok(out),
            None => Ok(self.multiply_general(other)),
        }
    }

    fn multiply_general(&self, other: &CliffordElement) -> CliffordElement {
        let mut acc: BTreeMap<u64, Scalar> = BTreeMap::new();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                let (m, s) = self.ctx.blade_product(a, b);
                let v = &(ca * cb) * &s;
                match acc.get_mut(&m) {
                    Some(slot) => *slot = &*slot + &v,
                    None => {
                        acc.insert(m, v);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        CliffordElement { ctx: self.ctx.clone(), terms: acc }
    }

    /// Rational coefficients as `numerators / denominator` when every
    /// numerator fits in an `i64`.
    fn small_numerators(&self) -> Option<(Vec<(u64, i64)>, BigInt)> {
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = num_integer::Integer::lcm(&den, c.as_rational()?.denom());
        }
        let nums = self
            .terms
            .iter()
            .map(|(&m, c)| {
                let r = c.as_rational()?;
                i64::try_from(r.numer() * (&den / r.denom())).ok().map(|v| (m, v))
            })
            .collect::<Option<Vec<_>>>()?;
        Some((nums, den))
    }

    /// Exact product in machine integers; `None` on non-rational input or
    /// on any overflow, in which case the general path runs.
    fn multiply_small(&self, other: &CliffordElement) -> Option<CliffordElement> {
        let qs = self.ctx.q_small.as_ref()?;
        let (xa, da) = self.small_numerators()?;
        let (xb, db) = other.small_numerators()?;
        let mut acc: BTreeMap<u64, i128> = BTreeMap::new();
        for &(a, ca) in &xa {
            for &(b, cb) in &xb {
                let mut v = (ca as i128 * cb as i128).checked_mul(small_metric(qs, a & b)?)?;
                if reorder_sign(a, b) {
                    v = -v;
                }
                let slot = acc.entry(a ^ b).or_insert(0);
                *slot = slot.checked_add(v)?;
            }
        }
        let den = da * db;
        let terms = acc
            .into_iter()
            .filter(|&(_, v)| v != 0)
            .map(|(m, v)| {
                let r = num_rational::BigRational::new(BigInt::from(v), den.clone());
                (m, Scalar::from(r))
            })
            .collect();
        Some(CliffordElement { ctx: self.ctx.clone(), terms })
    }

    /// Reversal: a monomial of degree `2m` picks up `(-1)^m`.
    pub fn iota(&self) -> CliffordElement {
        let terms = self
            .terms
            .iter()
            .map(|(&m, c)| {
                let half = m.count_ones() / 2;
                (m, if half % 2 == 1 { -c } else { c.clone() })
            })
            .collect();
        CliffordElement { ctx: self.ctx.clone(), terms }
    }

    /// Trace of `x -> a x` on `C+`. Left multiplication by a nonscalar
    /// monomial moves every basis monomial, so only the scalar term counts.
    pub fn trace(&self) -> Scalar {
        let c = self.coeff(0);
        if c.is_zero() {
            return c;
        }
        let dim = BigInt::one() << (self.ctx.rank() - 1);
        &c * &Scalar::from(dim)
    }

    /// Columns of `x -> a x` as sparse `(row, value)` lists; no guard.
    pub fn left_mult_columns(&self, dim: usize) -> Vec<Vec<(usize, Scalar)>> {
        (0..dim)
            .map(|j| {
                let mj = even_mask(j);
                let mut col: Vec<(usize, Scalar)> = self
                    .terms
                    .iter()
                    .map(|(&a, c)| {
                        let (m, s) = self.ctx.blade_product(a, mj);
                        (even_index(m), c * &s)
                    })
                    .collect();
                col.sort_by_key(|(i, _)| *i);
                col
            })
            .collect()
    }

    /// Matrix of `x -> a x` in the canonical basis (column `j` is the
    /// image of basis element `j`).
    pub fn left_mult_matrix(&self) -> Result<ScalarMatrix> {
        let dim = self.ctx.check_dense()?;
        self.mode()?;
        let mut out = ScalarMatrix::zeros(dim, dim);
        for (j, col) in self.left_mult_columns(dim).into_iter().enumerate() {
            for (i, v) in col {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }

    /// Matrix of `x -> x a`.
    pub fn right_mult_matrix(&self) -> Result<ScalarMatrix> {
        let dim = self.ctx.check_dense()?;
        self.mode()?;
        let mut out = ScalarMatrix::zeros(dim, dim);
        for j in 0..dim {
            let mj = even_mask(j);
            for (&a, c) in &self.terms {
                let (m, s) = self.ctx.blade_product(mj, a);
                out[(even_index(m), j)] = c * &s;
            }
        }
        Ok(out)
    }

    /// Coefficient vector in the canonical basis.
    pub fn to_dense(&self) -> Result<Vec<Scalar>> {
        let dim = self.ctx.check_dense()?;
        let mut v = vec![Scalar::zero(); dim];
        for (&m, c) in &self.terms {
            v[even_index(m)] = c.clone();
        }
        Ok(v)
    }

    pub fn from_dense(ctx: &Arc<CliffordContext>, v: &[Scalar]) -> Result<Self> {
        let dim = ctx.check_dense()?;
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
        }
        Self::from_terms(ctx, v.iter().enumerate().map(|(i, c)| (even_mask(i), c.clone())))
    }
}

impl PartialEq for CliffordElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_as(&other.ctx) && self.terms == other.terms
    }
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&m, c)| {
                if m == 0 {
                    format!("{c}")
                } else {
                    let idx: Vec<String> = mask_to_subset(m).iter().map(|i| i.to_string()).collect();
                    format!("({c})*e{}", idx.join("_"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn check_vector(ctx: &CliffordContext, v: &[Scalar]) -> Result<()> {
    if v.len() != ctx.rank() {
        return Err(Error::DimensionMismatch { expected: ctx.rank(), found: v.len() });
    }
    ScalarMode::join_all(v)?;
    Ok(())
}

/// `v w = sum v_i w_j e_i e_j` with `e_i e_i = q_i`.
pub fn embed_vector_product(ctx: &Arc<CliffordContext>, v: &[Scalar], w: &[Scalar]) -> Result<CliffordElement> {
    check_vector(ctx, v)?;
    check_vector(ctx, w)?;
    let mut terms = Vec::new();
    for (i, vi) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, wj) in w.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let (m, s) = ctx.blade_product(1 << i, 1 << j);
            terms.push((m, &(vi * wj) * &s));
        }
    }
    CliffordElement::from_terms(ctx, terms)
}

/// `(v w - w v) / 2 = sum_{i<j} (v_i w_j - v_j w_i) e_i e_j`.
pub fn wedge(ctx: &Arc<CliffordContext>, v: &[Scalar], w: &[Scalar]) -> Result<CliffordElement> {
    check_vector(ctx, v)?;
    check_vector(ctx, w)?;
    let n = ctx.rank();
    let mut terms = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let c = &(&v[i] * &w[j]) - &(&v[j] * &w[i]);
            if !c.is_zero() {
                terms.push(((1u64 << i) | (1u64 << j), c));
            }
        }
    }
    CliffordElement::from_terms(ctx, terms)
}

/// `v y w` for degree-one `v`, `w` and even `y`.
pub fn vector_sandwich(v: &[Scalar], y: &CliffordElement, w: &[Scalar]) -> Result<CliffordElement> {
    let ctx = y.context().clone();
    check_vector(&ctx, v)?;
    check_vector(&ctx, w)?;
    let mut terms = Vec::new();
    for (i, vi) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (b, c) in y.terms() {
            let (m1, s1) = ctx.blade_product(1 << i, b);
            let left = &(vi * c) * &s1;
            for (j, wj) in w.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let (m2, s2) = ctx.blade_product(m1, 1 << j);
                terms.push((m2, &(&left * wj) * &s2));
            }
        }
    }
    CliffordElement::from_terms(&ctx, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: &[i64]) -> Arc<CliffordContext> {
        CliffordContext::from_ints(q).unwrap()
    }

    fn mono(c: &Arc<CliffordContext>, s: &[usize], k: i64) -> CliffordElement {
        CliffordElement::monomial(c, s, Scalar::int(k)).unwrap()
    }

    #[test]
    fn products() {
        let c = ctx(&[-1, -1]);
        let e12 = mono(&c, &[1, 2], 1);
        assert_eq!(e12.multiply(&e12).unwrap(), CliffordElement::scalar(&c, Scalar::int(-1)));

        let c = ctx(&[-1, -1, 1]);
        let p = mono(&c, &[1, 2], 1).multiply(&mono(&c, &[2, 3], 1)).unwrap();
        assert_eq!(p, mono(&c, &[1, 3], -1));
        // e2 e1 = -e1 e2
        assert_eq!(mono(&c, &[2, 1], 1), mono(&c, &[1, 2], -1));
    }

    #[test]
    fn vector_products() {
        let c = ctx(&[-1, -1, 1]);
        let e = |i: usize| -> Vec<Scalar> { (0..3).map(|j| Scalar::int((i == j) as i64)).collect() };
        assert_eq!(embed_vector_product(&c, &e(0), &e(1)).unwrap(), mono(&c, &[1, 2], 1));
        assert_eq!(embed_vector_product(&c, &e(0), &e(0)).unwrap(), CliffordElement::scalar(&c, Scalar::int(-1)));
        let v = vec![Scalar::ratio(5, 4), Scalar::zero(), Scalar::ratio(3, 4)];
        let expected = CliffordElement::monomial(&c, &[1, 2], Scalar::ratio(5, 4))
            .unwrap()
            .add(&CliffordElement::monomial(&c, &[2, 3], Scalar::ratio(-3, 4)).unwrap())
            .unwrap();
        assert_eq!(embed_vector_product(&c, &v, &e(1)).unwrap(), expected);
    }

    #[test]
    fn reversal() {
        let c = ctx(&[-1, -1, 1, 1]);
        assert_eq!(CliffordElement::one(&c).iota(), CliffordElement::one(&c));
        assert_eq!(mono(&c, &[1, 2], 1).iota(), mono(&c, &[1, 2], -1));
        assert_eq!(mono(&c, &[1, 2, 3, 4], 1).iota(), mono(&c, &[1, 2, 3, 4], 1));
    }

    #[test]
    fn traces() {
        let c = ctx(&[-1, -1, 1, 1, 2]);
        assert_eq!(CliffordElement::one(&c).trace(), Scalar::int(16));
        assert_eq!(mono(&c, &[1, 2], 1).trace(), Scalar::zero());
        assert_eq!(mono(&c, &[1, 2, 3, 4], 1).trace(), Scalar::zero());
        let c2 = ctx(&[-1, -1]);
        assert_eq!(mono(&c2, &[1, 2], 1).trace(), Scalar::zero());
    }

    #[test]
    fn left_multiplication() {
        let c = ctx(&[-1, -1]);
        let m = mono(&c, &[1, 2], 1).left_mult_matrix().unwrap();
        assert_eq!(m.to_integer().unwrap(), IntMatrix::from_i64(&[vec![0, -1], vec![1, 0]]));
        assert_eq!(CliffordElement::one(&ctx(&[1, 2, 3])).left_mult_matrix().unwrap(), ScalarMatrix::identity(4));
        let c3 = ctx(&[-1, -1, 1]);
        let j = embed_vector_product(
            &c3,
            &[Scalar::ratio(5, 4), Scalar::zero(), Scalar::ratio(3, 4)],
            &[Scalar::zero(), Scalar::one(), Scalar::zero()],
        )
        .unwrap();
        let m = j.left_mult_matrix().unwrap();
        assert_eq!(m.nrows(), 4);
        assert_eq!(m.matmul(&m).unwrap(), ScalarMatrix::identity(4).neg());
    }

    #[test]
    fn wedges() {
        let c = ctx(&[-1, -1, 1]);
        let e1 = [Scalar::one(), Scalar::zero(), Scalar::zero()];
        let e2 = [Scalar::zero(), Scalar::one(), Scalar::zero()];
        let s = [Scalar::one(), Scalar::one(), Scalar::zero()];
        assert_eq!(wedge(&c, &e1, &e2).unwrap(), mono(&c, &[1, 2], 1));
        assert!(wedge(&c, &s, &s).unwrap().is_zero());
        assert_eq!(wedge(&c, &s, &e2).unwrap(), mono(&c, &[1, 2], 1));
    }

    #[test]
    fn guard_and_masks() {
        let c = CliffordContext::from_ints(&[1; 15]).unwrap().with_guard(13);
        assert!(matches!(CliffordElement::one(&c).left_mult_matrix(), Err(Error::GuardExceeded(_))));
        for i in 0..64 {
            assert_eq!(even_index(even_mask(i)), i);
            assert_eq!(even_mask(i).count_ones() % 2, 0);
        }
        assert!(CliffordElement::monomial(&c, &[1], Scalar::one()).is_err());
        assert!(CliffordElement::monomial(&c, &[1, 1], Scalar::one()).is_err());
    }

    #[test]
    fn context_mismatch() {
        let a = CliffordElement::one(&ctx(&[1, 1]));
        let b = CliffordElement::one(&ctx(&[1, -1]));
        assert!(matches!(a.multiply(&b), Err(Error::ContextMismatch)));
    }

    #[test]
    fn machine_path_matches_bignum_path() {
        let c = ctx(&[-1, -1, 2, 3, -5]);
        let big = Scalar::from(BigInt::from(i64::MAX) * 4);
        let x = CliffordElement::from_terms(
            &c,
            [(0b00011, Scalar::ratio(3, 4)), (0b01100, Scalar::int(-7)), (0b11110, Scalar::ratio(-5, 6))],
        )
        .unwrap();
        let y = CliffordElement::from_terms(&c, [(0b00110, Scalar::ratio(2, 9)), (0b11000, Scalar::int(11))]).unwrap();
        let fast = x.multiply_small(&y).expect("small coefficients");
        assert_eq!(fast, x.multiply_general(&y));
        // an oversized coefficient forces the general path
        let z = CliffordElement::from_terms(&c, [(0b00110, big)]).unwrap();
        assert!(x.multiply_small(&z).is_none());
        assert_eq!(x.multiply(&z).unwrap(), x.multiply_general(&z));
    }
}

//! Maps from the period lattice into endomorphisms of `C+`, Hodge type
//! tests, and recovery of the Picard lattice from a period.
//!
//! `tu(c)` is left multiplication by `c` on `C+` (the lattice of the
//! torus), `u(c)` its transpose. A vector `v` acts by `y -> v y e1`; this
//! endomorphism commutes with the complex structure exactly when `v` is
//! orthogonal to `f1` and `f2`, which gives two independent Picard
//! computations that are cross-checked in exact mode.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::bigfloat::BigFloat;
use crate::clifford::{even_index, even_mask, wedge, CliffordContext, CliffordElement};
use crate::error::{Error, Result};
use crate::intlin;
use crate::kuga_satake::{i_action, K3Period, PolarizedTorus};
use crate::lattice::{QuadLattice, SubLattice};
use crate::lll::integer_relations;
use crate::matrix::{IntMatrix, ScalarMatrix};
use crate::numtheory::prime_divisors;
use crate::scalar::Scalar;

/// Left multiplication `x -> c x` on `C+`.
pub fn tu_map(c: &CliffordElement) -> Result<ScalarMatrix> {
    c.left_mult_matrix()
}

/// Transpose of [`tu_map`], the action on the dual lattice.
pub fn u_map(c: &CliffordElement) -> Result<ScalarMatrix> {
    Ok(tu_map(c)?.transpose())
}

/// Matrix of `y -> v y e1` on `C+`.
pub fn p_embedding(ctx: &Arc<CliffordContext>, v: &[Scalar]) -> Result<ScalarMatrix> {
    let dim = ctx.check_dense()?;
    if v.len() != ctx.rank() {
        return Err(Error::DimensionMismatch { expected: ctx.rank(), found: v.len() });
    }
    crate::scalar::ScalarMode::join_all(v)?;
    let mut out = ScalarMatrix::zeros(dim, dim);
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for j in 0..dim {
            let (m1, s1) = ctx.blade_product(1 << i, even_mask(j));
            let (m2, s2) = ctx.blade_product(m1, 1);
            let r = even_index(m2);
            out[(r, j)] = &out[(r, j)] + &(&(vi * &s1) * &s2);
        }
    }
    Ok(out)
}

/// Outcome of a test that may only hold numerically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Check {
    pub holds: bool,
    pub verified: bool,
}

/// Type `(0,0)` means commuting with the complex structure.
pub fn hodge_type_00(m: &ScalarMatrix, t: &PolarizedTorus) -> Result<Check> {
    let c = &t.complex_structure;
    if m.nrows() != c.nrows() || !m.is_square() {
        return Err(Error::DimensionMismatch { expected: c.nrows(), found: m.nrows() });
    }
    crate::scalar::ScalarMode::join_all(m.entries())?;
    let comm = m.matmul(c)?.sub(&c.matmul(m)?)?;
    if t.period.is_exact() && m.entries().iter().all(Scalar::is_exact) {
        return Ok(Check { holds: comm.is_zero(), verified: true });
    }
    let tol = t.period.tolerance().cloned().unwrap_or_else(|| BigRational::new(1.into(), BigInt::from(1u64 << 32)));
    let prec = t.period.precision().unwrap_or(128);
    let holds = comm.entries().iter().all(|x| x.to_bigfloat(prec).abs().to_rational() <= tol);
    Ok(Check { holds, verified: false })
}

/// Splits scalar columns into rational columns (`a` and, when present,
/// the `sqrt D` coefficient `b`), dropping columns that vanish.
fn rational_columns(cols: impl IntoIterator<Item = Vec<Scalar>>) -> Result<Vec<Vec<BigRational>>> {
    let mut out = Vec::new();
    for col in cols {
        let parts: Vec<(BigRational, BigRational)> = col
            .iter()
            .map(|s| s.parts().ok_or_else(|| Error::invalid("exact arithmetic needed")))
            .collect::<Result<_>>()?;
        for pick in [0, 1] {
            let c: Vec<BigRational> =
                parts.iter().map(|(a, b)| if pick == 0 { a.clone() } else { b.clone() }).collect();
            if c.iter().any(|x| !x.is_zero()) && !out.contains(&c) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Saturated integer left kernel of a family of rational columns, for
/// `nrows` unknowns.
fn integer_kernel(nrows: usize, cols: &[Vec<BigRational>]) -> IntMatrix {
    if cols.is_empty() {
        return IntMatrix::identity(nrows);
    }
    let rows: Vec<Vec<BigRational>> = (0..nrows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    intlin::left_kernel(&intlin::clear_column_denominators(&rows))
}

/// Picard lattice as the integer kernel of `v -> (Q(v, f1), Q(v, f2))`,
/// in coordinates of the orthogonal basis.
pub fn picard_via_kernel(p: &K3Period) -> Result<IntMatrix> {
    if !p.is_exact() {
        return Err(Error::invalid("direct kernel needs an exact period"));
    }
    let q = p.context().q();
    let col = |f: &[Scalar]| q.iter().zip(f).map(|(a, b)| a * b).collect::<Vec<Scalar>>();
    let cols = rational_columns([col(p.f1()), col(p.f2())])?;
    Ok(integer_kernel(q.len(), &cols))
}

/// Picard lattice as `{v : p_embedding(v) has type (0,0)}`.
pub fn picard_via_commutant(p: &K3Period) -> Result<IntMatrix> {
    if !p.is_exact() {
        return Err(Error::invalid("commutant test needs an exact period"));
    }
    let ctx = p.context();
    let n = ctx.rank();
    let c = i_action(p)?.left_mult_matrix()?;
    // column per matrix entry of [p_embedding(e_i), c], rows indexed by i
    let mut comms = Vec::with_capacity(n);
    for i in 0..n {
        let e: Vec<Scalar> = (0..n).map(|k| Scalar::int((k == i) as i64)).collect();
        let m = p_embedding(ctx, &e)?;
        comms.push(m.matmul(&c)?.sub(&c.matmul(&m)?)?);
    }
    let entries = comms[0].entries().len();
    let cols = rational_columns((0..entries).map(|k| comms.iter().map(|m| m.entries()[k].clone()).collect()))?;
    Ok(integer_kernel(n, &cols))
}

#[derive(Clone, Debug)]
pub struct PicardLattice {
    /// Canonical saturated basis, orthogonal-basis coordinates.
    pub basis: IntMatrix,
    pub verified: bool,
    /// True when both exact computations ran and agreed.
    pub cross_checked: bool,
}

/// Default acceptance bound for relations found by lattice reduction.
pub const RELATION_QUALITY_BITS: u32 = 20;

pub fn picard_from_period(p: &K3Period) -> Result<PicardLattice> {
    if !p.is_exact() {
        return picard_float_candidates(p, &(BigInt::from(1) << RELATION_QUALITY_BITS as usize));
    }
    let direct = picard_via_kernel(p)?;
    let dense_ok = p.context().check_dense().is_ok();
    if dense_ok {
        let via_comm = picard_via_commutant(p)?;
        if intlin::canonical_basis(&via_comm) != intlin::canonical_basis(&direct) {
            return Err(Error::invariant("commutant and direct Picard computations disagree"));
        }
    }
    Ok(PicardLattice { basis: intlin::canonical_basis(&direct), verified: true, cross_checked: dense_ok })
}

/// Candidate Picard generators from a float period by integer relation
/// search; always unverified.
pub fn picard_float_candidates(p: &K3Period, quality: &BigInt) -> Result<PicardLattice> {
    let prec = p.precision().unwrap_or(128);
    let q = p.context().q();
    let w: Vec<Vec<BigFloat>> = (0..q.len())
        .map(|i| vec![(&q[i] * &p.f1()[i]).to_bigfloat(prec), (&q[i] * &p.f2()[i]).to_bigfloat(prec)])
        .collect();
    let cand = integer_relations(&w, prec, quality)?;
    let basis = if cand.nrows() == 0 { IntMatrix::empty(q.len()) } else { intlin::saturate(&cand) };
    Ok(PicardLattice { basis, verified: false, cross_checked: false })
}

/// Picard lattice inside the full lattice `H`: saturation of `Z h` plus the
/// Picard part of `P = h^perp`. The period's Clifford context must be built
/// on an orthogonal basis of `P` (see `CliffordContext::from_lattice`).
#[derive(Clone, Debug)]
pub struct PicardFull {
    pub lattice: SubLattice,
    pub verified: bool,
}

pub fn picard_full(h_lattice: &Arc<QuadLattice>, h: &[BigInt], p_sub: &SubLattice, p: &K3Period) -> Result<PicardFull> {
    let (plat, vecs) =
        p.context().ambient().ok_or_else(|| Error::invalid("period context carries no lattice embedding"))?;
    if plat.gram() != &p_sub.gram() {
        return Err(Error::invalid("period context is not built on the given primitive lattice"));
    }
    if h.len() != h_lattice.rank() {
        return Err(Error::DimensionMismatch { expected: h_lattice.rank(), found: h.len() });
    }
    let pic = picard_from_period(p)?;
    let mut rows = IntMatrix::from_fn(1, h.len(), |_, j| h[j].clone());
    if pic.basis.nrows() > 0 {
        let in_h = pic.basis.matmul(vecs)?.matmul(p_sub.basis())?;
        rows = rows.vstack(&in_h)?;
    }
    Ok(PicardFull { lattice: SubLattice::saturated_span(h_lattice.clone(), &rows)?, verified: pic.verified })
}

/// Sublattice of `End(Z^dim)`, matrices flattened row-major into rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoLattice {
    pub dim: usize,
    pub basis: IntMatrix,
}

impl EndoLattice {
    pub fn from_matrices(dim: usize, mats: &[IntMatrix]) -> Result<Self> {
        let mut rows = IntMatrix::empty(dim * dim);
        for m in mats {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.nrows() });
            }
            rows.push_row(m.entries().to_vec())?;
        }
        Ok(EndoLattice { dim, basis: intlin::canonical_basis(&rows) })
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn matrices(&self) -> Vec<IntMatrix> {
        (0..self.rank())
            .map(|k| IntMatrix::from_fn(self.dim, self.dim, |i, j| self.basis[(k, i * self.dim + j)].clone()))
            .collect()
    }

    /// Rank of the intersection of the rational spans.
    pub fn rational_intersection_rank(&self, other: &EndoLattice) -> Result<usize> {
        let both = self.basis.vstack(&other.basis)?;
        Ok(self.rank() + other.rank() - intlin::rank(&both))
    }
}

/// Integral endomorphisms commuting with `c`.
pub fn commutant(c: &ScalarMatrix) -> Result<EndoLattice> {
    let dim = c.nrows();
    if !c.is_square() {
        return Err(Error::DimensionMismatch { expected: dim, found: c.ncols() });
    }
    if dim > 16 {
        return Err(Error::guard(format!("commutant needs dim <= 16, got {dim}")));
    }
    // (Xc - cX)_{ab} as a column over the unknowns X_{ij}
    let mut cols = Vec::with_capacity(dim * dim);
    for a in 0..dim {
        for b in 0..dim {
            let col: Vec<Scalar> = (0..dim * dim)
                .map(|u| {
                    let (i, j) = (u / dim, u % dim);
                    let mut v = Scalar::zero();
                    if i == a {
                        v = &v + &c[(j, b)];
                    }
                    if j == b {
                        v = &v - &c[(a, i)];
                    }
                    v
                })
                .collect();
            cols.push(col);
        }
    }
    let cols = rational_columns(cols)?;
    Ok(EndoLattice { dim, basis: integer_kernel(dim * dim, &cols) })
}

/// Left multiplications by `m ^ t_i` for the rows `t_i` of `t`.
pub fn wedge_family(ctx: &Arc<CliffordContext>, m: &[Scalar], t: &IntMatrix) -> Result<EndoLattice> {
    let dim = ctx.check_dense()?;
    let mut mats = Vec::with_capacity(t.nrows());
    for row in t.rows_iter() {
        let tv: Vec<Scalar> = row.iter().map(Scalar::from).collect();
        let w = wedge(ctx, m, &tv)?;
        let lm = w
            .left_mult_matrix()?
            .to_integer()
            .ok_or_else(|| Error::invalid("wedge family needs integral coefficients"))?;
        mats.push(lm);
    }
    EndoLattice::from_matrices(dim, &mats)
}

/// Primes `l` at which `A/l + B/l -> ambient/l` fails to be injective:
/// prime divisors of the torsion of `ambient / (A + B)` restricted to the
/// span. Inputs are row bases of vectors of one length.
pub fn disjointness_exclusion_primes(a: &IntMatrix, b: &IntMatrix) -> Result<Vec<BigInt>> {
    let both = a.vstack(b)?;
    let ra = intlin::rank(a);
    let rb = intlin::rank(b);
    if ra != a.nrows() || rb != b.nrows() {
        return Err(Error::RankDeficient("lattice bases must be independent".into()));
    }
    if intlin::rank(&both) < ra + rb {
        return Err(Error::invalid("the two lattices meet over Q"));
    }
    let mut primes: Vec<BigInt> = intlin::elementary_divisors(&both)
        .into_iter()
        .filter(|d| *d > BigInt::from(1))
        .flat_map(|d| prime_divisors(&d))
        .collect();
    primes.sort();
    primes.dedup();
    Ok(primes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kuga_satake::kuga_satake_torus;

    fn ctx(q: &[i64]) -> Arc<CliffordContext> {
        CliffordContext::from_ints(q).unwrap()
    }

    fn unit(n: usize, k: usize) -> Vec<Scalar> {
        (0..n).map(|i| Scalar::int((i == k) as i64)).collect()
    }

    #[test]
    fn u_maps() {
        let c = ctx(&[-1, -1]);
        assert_eq!(tu_map(&CliffordElement::one(&c)).unwrap(), ScalarMatrix::identity(2));
        let j = CliffordElement::monomial(&c, &[1, 2], Scalar::int(1)).unwrap();
        assert_eq!(tu_map(&j).unwrap().to_integer().unwrap(), IntMatrix::from_i64(&[vec![0, -1], vec![1, 0]]));
        assert_eq!(u_map(&j).unwrap().to_integer().unwrap(), IntMatrix::from_i64(&[vec![0, 1], vec![-1, 0]]));
    }

    #[test]
    fn p_embeddings() {
        let c = ctx(&[-1, -1]);
        let m = p_embedding(&c, &unit(2, 0)).unwrap();
        assert_eq!(m.to_integer().unwrap(), IntMatrix::from_i64(&[vec![-1, 0], vec![0, 1]]));
        assert!(p_embedding(&c, &[Scalar::zero(), Scalar::zero()]).unwrap().is_zero());

        let c3 = ctx(&[-1, -1, 1]);
        let m3 = p_embedding(&c3, &unit(3, 2)).unwrap();
        let j = CliffordElement::monomial(&c3, &[1, 2], Scalar::int(1)).unwrap().left_mult_matrix().unwrap();
        assert_eq!(m3.matmul(&j).unwrap(), j.matmul(&m3).unwrap());
    }

    #[test]
    fn hodge_types() {
        let c3 = ctx(&[-1, -1, 1]);
        let t = kuga_satake_torus(&K3Period::standard(&c3).unwrap()).unwrap();
        assert!(hodge_type_00(&ScalarMatrix::identity(4), &t).unwrap().holds);
        assert!(hodge_type_00(&p_embedding(&c3, &unit(3, 2)).unwrap(), &t).unwrap().holds);
        assert!(!hodge_type_00(&p_embedding(&c3, &unit(3, 0)).unwrap(), &t).unwrap().holds);
    }

    #[test]
    fn worked_picard_cases() {
        let c3 = ctx(&[-1, -1, 1]);
        let p = K3Period::standard(&c3).unwrap();
        let pic = picard_from_period(&p).unwrap();
        assert_eq!(pic.basis, IntMatrix::from_i64(&[vec![0, 0, 1]]));
        assert!(pic.cross_checked);

        let f1 = vec![Scalar::ratio(5, 4), Scalar::zero(), Scalar::ratio(3, 4)];
        let p = K3Period::new(&c3, f1, unit(3, 1)).unwrap();
        let pic = picard_from_period(&p).unwrap();
        assert_eq!(pic.basis, IntMatrix::from_i64(&[vec![3, 0, 5]]));
        let l = QuadLattice::diagonal(&[-1, -1, 1]).unwrap();
        assert_eq!(l.gram_of(&pic.basis).unwrap()[(0, 0)], BigInt::from(16));

        let s2 = Scalar::quadratic(BigRational::zero(), BigRational::from_integer(1.into()), 2).unwrap();
        let f1 = vec![s2, Scalar::zero(), Scalar::int(1)];
        let p = K3Period::new(&c3, f1, unit(3, 1)).unwrap();
        assert_eq!(picard_from_period(&p).unwrap().basis.nrows(), 0);
    }

    #[test]
    fn cm_at_rank_two() {
        let c = ctx(&[-1, -1]);
        let t = kuga_satake_torus(&K3Period::standard(&c).unwrap()).unwrap();
        let com = commutant(&t.complex_structure).unwrap();
        assert_eq!(com.rank(), 2);
        let cm = com.matrices().into_iter().any(|m| m.matmul(&m).unwrap() == IntMatrix::identity(2).neg());
        assert!(cm);
    }

    #[test]
    fn wedge_families() {
        let c3 = ctx(&[-1, -1, 1]);
        let t = IntMatrix::from_i64(&[vec![1, 0, 0], vec![0, 1, 0]]);
        let w = wedge_family(&c3, &unit(3, 2), &t).unwrap();
        assert_eq!(w.rank(), 2);
        let zero = wedge_family(&c3, &[Scalar::zero(), Scalar::zero(), Scalar::zero()], &t).unwrap();
        assert_eq!(zero.rank(), 0);
        let torus = kuga_satake_torus(&K3Period::standard(&c3).unwrap()).unwrap();
        let com = commutant(&torus.complex_structure).unwrap();
        assert_eq!(w.rational_intersection_rank(&com).unwrap(), 0);
        assert!(disjointness_exclusion_primes(&w.basis, &com.basis).is_ok());
    }

    #[test]
    fn exclusion_primes() {
        let a = IntMatrix::from_i64(&[vec![1, 0]]);
        let b = IntMatrix::from_i64(&[vec![0, 1]]);
        assert!(disjointness_exclusion_primes(&a, &b).unwrap().is_empty());
        let a2 = IntMatrix::from_i64(&[vec![2, 0]]);
        assert_eq!(disjointness_exclusion_primes(&a2, &b).unwrap(), vec![BigInt::from(2)]);
        let p = IntMatrix::from_i64(&[vec![1, 1]]);
        let m = IntMatrix::from_i64(&[vec![1, -1]]);
        assert_eq!(disjointness_exclusion_primes(&p, &m).unwrap(), vec![BigInt::from(2)]);
        assert!(disjointness_exclusion_primes(&p, &p).is_err());
    }

    #[test]
    fn full_picard_small_model() {
        // H = <-2> + diag(-1,-1,1), h = first basis vector, P = h^perp
        let h_lat = Arc::new(QuadLattice::diagonal(&[-2, -1, -1, 1]).unwrap());
        let h = vec![BigInt::from(1), BigInt::zero(), BigInt::zero(), BigInt::zero()];
        let hsub = SubLattice::new(h_lat.clone(), IntMatrix::from_fn(1, 4, |_, j| h[j].clone())).unwrap();
        let p_sub = hsub.orthogonal_complement().unwrap();
        let ctx = CliffordContext::from_lattice(Arc::new(p_sub.as_lattice().unwrap())).unwrap();
        let s2 = Scalar::quadratic(BigRational::zero(), BigRational::from_integer(1.into()), 2).unwrap();
        let p = K3Period::new(&ctx, vec![s2, Scalar::zero(), Scalar::int(1)], unit(3, 1)).unwrap();
        let full = picard_full(&h_lat, &h, &p_sub, &p).unwrap();
        assert_eq!(full.lattice.rank(), 1);
        assert_eq!(full.lattice.discriminant().unwrap(), BigInt::from(2));

        let p = K3Period::standard(&ctx).unwrap();
        let full = picard_full(&h_lat, &h, &p_sub, &p).unwrap();
        assert_eq!(full.lattice.rank(), 2);
    }
}

//! Integral quadratic lattices, sublattices and finite quotients.
//!
//! Sign convention: the form `Q` used everywhere is minus the intersection
//! form. The K3 lattice is therefore `U(-1)^3 + E8^2` with `E8` positive
//! definite, a polarization `h` has `Q(h) = -2d`, and the primitive part
//! `h^perp` has signature `(19, 2)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intlin;
use crate::matrix::IntMatrix;
use crate::scalar::{Scalar, ScalarMode};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadLattice {
    gram: IntMatrix,
    degenerate: bool,
}

impl QuadLattice {
    /// Symmetric, nondegenerate Gram matrix.
    pub fn new(gram: IntMatrix) -> Result<Self> {
        let l = Self::new_degenerate(gram)?;
        if intlin::determinant(&l.gram)?.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(QuadLattice { degenerate: false, ..l })
    }

    /// Accepts a singular Gram matrix; such lattices are refused by
    /// everything downstream that needs a discriminant or a signature.
    pub fn new_degenerate(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch { expected: gram.nrows(), found: gram.ncols() });
        }
        if !gram.is_symmetric() {
            return Err(Error::invalid("gram matrix is not symmetric"));
        }
        let degenerate = intlin::determinant(&gram)?.is_zero();
        Ok(QuadLattice { gram, degenerate })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    pub fn diagonal(entries: &[i64]) -> Result<Self> {
        let n = entries.len();
        Self::new(IntMatrix::from_fn(n, n, |i, j| if i == j { BigInt::from(entries[i]) } else { BigInt::zero() }))
    }

    /// The hyperbolic plane with the sign flipped, `[[0,-1],[-1,0]]`.
    pub fn u_minus() -> Self {
        Self::from_i64(&[vec![0, -1], vec![-1, 0]]).expect("unimodular")
    }

    /// Positive definite `E8` (Cartan matrix, Bourbaki numbering).
    pub fn e8() -> Self {
        let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
        let mut g = IntMatrix::zeros(8, 8);
        for i in 0..8 {
            g[(i, i)] = BigInt::from(2);
        }
        for (a, b) in edges {
            g[(a, b)] = BigInt::from(-1);
            g[(b, a)] = BigInt::from(-1);
        }
        Self::new(g).expect("E8 is unimodular")
    }

    pub fn direct_sum(parts: &[QuadLattice]) -> Result<Self> {
        let n: usize = parts.iter().map(QuadLattice::rank).sum();
        let mut g = IntMatrix::zeros(n, n);
        let mut off = 0;
        for p in parts {
            for i in 0..p.rank() {
                for j in 0..p.rank() {
                    g[(off + i, off + j)] = p.gram[(i, j)].clone();
                }
            }
            off += p.rank();
        }
        if parts.iter().any(|p| p.degenerate) {
            Self::new_degenerate(g)
        } else {
            Self::new(g)
        }
    }

    /// `U(-1)^3 + E8^2`, rank 22, signature (19, 3).
    pub fn k3() -> Self {
        let u = Self::u_minus();
        let e = Self::e8();
        Self::direct_sum(&[u.clone(), u.clone(), u, e.clone(), e]).expect("unimodular")
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: n });
        }
        Ok(())
    }

    /// `Q(v, w) = v^T G w` for integer vectors.
    pub fn bilinear_int(&self, v: &[BigInt], w: &[BigInt]) -> Result<BigInt> {
        self.check_len(v.len())?;
        self.check_len(w.len())?;
        let gw = self.gram.mul_vec(w)?;
        Ok(v.iter().zip(&gw).map(|(a, b)| a * b).sum())
    }

    pub fn norm_int(&self, v: &[BigInt]) -> Result<BigInt> {
        self.bilinear_int(v, v)
    }

    /// `Q(v, w)` for scalar vectors; all coefficients must share a mode.
    pub fn bilinear(&self, v: &[Scalar], w: &[Scalar]) -> Result<Scalar> {
        self.check_len(v.len())?;
        self.check_len(w.len())?;
        ScalarMode::join_all(v.iter().chain(w))?;
        let mut acc = Scalar::zero();
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            let mut row = Scalar::zero();
            for (j, wj) in w.iter().enumerate() {
                let g = &self.gram[(i, j)];
                if g.is_zero() || wj.is_zero() {
                    continue;
                }
                row = row + wj * &Scalar::from(g);
            }
            acc = acc + vi * &row;
        }
        Ok(acc)
    }

    /// `|det G|`.
    pub fn discriminant(&self) -> Result<BigInt> {
        if self.degenerate {
            return Err(Error::Degenerate);
        }
        Ok(intlin::determinant(&self.gram)?.abs())
    }

    pub fn is_unimodular(&self) -> bool {
        self.discriminant().is_ok_and(|d| d.is_one())
    }

    /// `(positive, negative)` counts of an exact rational diagonalization.
    pub fn signature(&self) -> Result<(usize, usize)> {
        if self.degenerate {
            return Err(Error::Degenerate);
        }
        let (_, diag) = rational_diagonalization(&self.gram);
        let p = diag.iter().filter(|x| x.is_positive()).count();
        let q = diag.iter().filter(|x| x.is_negative()).count();
        Ok((p, q))
    }

    /// Gram matrix `B G B^T` of the rows of `basis`.
    pub fn gram_of(&self, basis: &IntMatrix) -> Result<IntMatrix> {
        self.check_len(basis.ncols())?;
        basis.matmul(&self.gram)?.matmul(&basis.transpose())
    }

    /// Pairwise orthogonal integer vectors spanning a finite-index sublattice,
    /// negative norms first.
    pub fn orthogonal_basis(&self) -> Result<OrthogonalBasis> {
        if self.degenerate {
            return Err(Error::Degenerate);
        }
        let (vecs, _) = rational_diagonalization(&self.gram);
        let mut rows: Vec<(Vec<BigInt>, BigInt)> = Vec::with_capacity(vecs.len());
        for v in vecs {
            let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            let ints: Vec<BigInt> = ints.into_iter().map(|x| x / &g).collect();
            let q = self.norm_int(&ints)?;
            rows.push((ints, q));
        }
        // stable: negative norms first, original order otherwise
        rows.sort_by_key(|(_, q)| !q.is_negative());
        let vectors = IntMatrix::from_fn(rows.len(), self.rank(), |i, j| rows[i].0[j].clone());
        let norms = rows.into_iter().map(|(_, q)| q).collect();
        let index = intlin::determinant(&vectors)?.abs();
        Ok(OrthogonalBasis { vectors, norms, index })
    }
}

/// Orthogonal vectors as rows, their norms, and the index of their span.
#[derive(Clone, Debug)]
pub struct OrthogonalBasis {
    pub vectors: IntMatrix,
    pub norms: Vec<BigInt>,
    pub index: BigInt,
}

/// Congruence diagonalization over the rationals. Returns the new basis
/// vectors (as rational rows) and the diagonal values `Q(b_i)`.
pub fn rational_diagonalization(gram: &IntMatrix) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = gram.nrows();
    let mut b: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))).collect()).collect();
    let mut g: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(gram[(i, j)].clone())).collect()).collect();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if g[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !g[j][j].is_zero()) {
                swap_sym(&mut g, &mut b, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !g[k][j].is_zero()) {
                // b_k += b_j makes Q(b_k) = 2 Q(b_k, b_j) nonzero
                add_sym(&mut g, &mut b, k, j);
            }
        }
        let p = g[k][k].clone();
        if !p.is_zero() {
            for j in k + 1..n {
                if g[j][k].is_zero() {
                    continue;
                }
                let c = &g[j][k] / &p;
                // b_j -= c b_k
                for t in 0..n {
                    let x = &c * &b[k][t];
                    b[j][t] -= x;
                }
                for t in 0..n {
                    let x = &c * &g[k][t];
                    g[j][t] -= x;
                }
                for t in 0..n {
                    let x = &c * &g[t][k];
                    g[t][j] -= x;
                }
            }
        }
        diag.push(p);
    }
    (b, diag)
}

fn swap_sym(g: &mut [Vec<BigRational>], b: &mut [Vec<BigRational>], i: usize, j: usize) {
    g.swap(i, j);
    for row in g.iter_mut() {
        row.swap(i, j);
    }
    b.swap(i, j);
}

fn add_sym(g: &mut [Vec<BigRational>], b: &mut [Vec<BigRational>], k: usize, j: usize) {
    let n = g.len();
    for t in 0..n {
        let x = b[j][t].clone();
        b[k][t] += x;
    }
    for t in 0..n {
        let x = g[j][t].clone();
        g[k][t] += x;
    }
    for t in 0..n {
        let x = g[t][j].clone();
        g[t][k] += x;
    }
}

/// Row basis of a sublattice of a fixed ambient lattice.
#[derive(Clone, Debug)]
pub struct SubLattice {
    ambient: Arc<QuadLattice>,
    basis: IntMatrix,
    saturated: bool,
}

impl SubLattice {
    pub fn new(ambient: Arc<QuadLattice>, basis: IntMatrix) -> Result<Self> {
        if basis.nrows() > 0 && basis.ncols() != ambient.rank() {
            return Err(Error::DimensionMismatch { expected: ambient.rank(), found: basis.ncols() });
        }
        let basis = if basis.nrows() == 0 { IntMatrix::empty(ambient.rank()) } else { basis };
        if intlin::rank(&basis) != basis.nrows() {
            return Err(Error::RankDeficient("sublattice rows are dependent".into()));
        }
        let saturated = intlin::saturation_index(&basis).is_one();
        Ok(SubLattice { ambient, basis, saturated })
    }

    /// Saturation of the span of arbitrary (possibly dependent) rows.
    pub fn saturated_span(ambient: Arc<QuadLattice>, rows: &IntMatrix) -> Result<Self> {
        let n = ambient.rank();
        if rows.nrows() > 0 && rows.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rows.ncols() });
        }
        let rows = if rows.nrows() == 0 { IntMatrix::empty(n) } else { rows.clone() };
        let basis = intlin::saturate(&intlin::canonical_basis(&rows));
        Ok(SubLattice { ambient, basis, saturated: true })
    }

    pub fn whole(ambient: Arc<QuadLattice>) -> Self {
        let n = ambient.rank();
        SubLattice { ambient, basis: IntMatrix::identity(n), saturated: true }
    }

    pub fn ambient(&self) -> &Arc<QuadLattice> {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// Induced Gram matrix on the basis rows.
    pub fn gram(&self) -> IntMatrix {
        self.ambient.gram_of(&self.basis).expect("sizes checked at construction")
    }

    /// The sublattice as an abstract lattice with its induced form.
    pub fn as_lattice(&self) -> Result<QuadLattice> {
        QuadLattice::new(self.gram())
    }

    pub fn discriminant(&self) -> Result<BigInt> {
        if self.rank() == 0 {
            return Ok(BigInt::one());
        }
        let d = intlin::determinant(&self.gram())?.abs();
        if d.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(d)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        if self.rank() == 0 {
            return v.iter().all(Zero::is_zero);
        }
        intlin::lattice_coordinates(&self.basis, v).is_some()
    }

    /// Same set of vectors, independent of the chosen basis.
    pub fn same_lattice(&self, other: &SubLattice) -> bool {
        self.basis.ncols() == other.basis.ncols()
            && intlin::canonical_basis(&self.basis) == intlin::canonical_basis(&other.basis)
    }

    /// Canonical (Hermite) basis of the same lattice.
    pub fn canonical(&self) -> SubLattice {
        SubLattice { basis: intlin::canonical_basis(&self.basis), ..self.clone() }
    }

    /// Saturated kernel of `v -> (Q(v, s_i))_i`.
    pub fn orthogonal_complement(&self) -> Result<SubLattice> {
        let n = self.ambient.rank();
        if self.rank() == 0 {
            return Ok(SubLattice::whole(self.ambient.clone()));
        }
        // rows v with v G S^T = 0
        let m = self.ambient.gram().matmul(&self.basis.transpose())?;
        let k = intlin::left_kernel(&m);
        let basis = if k.nrows() == 0 { IntMatrix::empty(n) } else { k };
        Ok(SubLattice { ambient: self.ambient.clone(), basis, saturated: true })
    }
}

pub fn orthogonal_complement(l: &Arc<QuadLattice>, s: &SubLattice) -> Result<SubLattice> {
    if !Arc::ptr_eq(l, s.ambient()) && **l != **s.ambient() {
        return Err(Error::invalid("sublattice lives in a different lattice"));
    }
    s.orthogonal_complement()
}

/// `L / (S + T)` for a full-rank sum.
pub fn cokernel_of_sum(s: &SubLattice, t: &SubLattice) -> Result<FiniteAbelianGroup> {
    if **s.ambient() != **t.ambient() {
        return Err(Error::invalid("sublattices live in different lattices"));
    }
    let n = s.ambient().rank();
    let stacked = s.basis().vstack(t.basis())?;
    let divisors = intlin::elementary_divisors(&stacked);
    if divisors.len() < n {
        return Err(Error::RankDeficient(format!("S + T has rank {} < {n}", divisors.len())));
    }
    Ok(FiniteAbelianGroup::from_divisors(&divisors))
}

/// `Z/d_1 + ... + Z/d_k` with `d_1 | d_2 | ...` and every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<BigInt>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { invariant_factors: Vec::new() }
    }

    /// From any list of nonzero elementary divisors; units are dropped and
    /// the rest is brought into divisibility order.
    pub fn from_divisors(divisors: &[BigInt]) -> Self {
        // Smith form of a diagonal matrix gives the canonical factors.
        let n = divisors.len();
        let d = IntMatrix::from_fn(n, n, |i, j| if i == j { divisors[i].abs() } else { BigInt::zero() });
        let mut f: Vec<BigInt> = intlin::elementary_divisors(&d).into_iter().filter(|x| !x.is_one()).collect();
        f.sort();
        FiniteAbelianGroup { invariant_factors: f }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// The `l`-primary part.
    pub fn primary_part(&self, l: &BigInt) -> FiniteAbelianGroup {
        let parts: Vec<BigInt> = self
            .invariant_factors
            .iter()
            .map(|d| {
                let mut d = d.clone();
                let mut out = BigInt::one();
                while d.is_multiple_of(l) {
                    d /= l;
                    out *= l;
                }
                out
            })
            .collect();
        Self::from_divisors(&parts)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// K3 lattice `H`, polarization `h` with `Q(h) = -2d`, and `P = h^perp`.
#[derive(Clone, Debug)]
pub struct K3PeriodLattice {
    pub h_lattice: Arc<QuadLattice>,
    pub h: Vec<BigInt>,
    pub p: SubLattice,
}

pub fn k3_period_lattice(d: u64) -> Result<K3PeriodLattice> {
    if d == 0 {
        return Err(Error::invalid("degree parameter d must be positive"));
    }
    let h_lattice = Arc::new(QuadLattice::k3());
    let mut h = vec![BigInt::zero(); 22];
    h[0] = BigInt::one();
    h[1] = BigInt::from(d);
    let p =
        SubLattice::new(h_lattice.clone(), IntMatrix::from_fn(1, 22, |_, j| h[j].clone()))?.orthogonal_complement()?;
    let out = K3PeriodLattice { h_lattice, h, p };
    debug_assert_eq!(out.h_lattice.norm_int(&out.h).ok(), Some(BigInt::from(-2 * d as i64)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::int_vec;

    fn arc(l: QuadLattice) -> Arc<QuadLattice> {
        Arc::new(l)
    }

    fn sub(l: &Arc<QuadLattice>, rows: &[Vec<i64>]) -> SubLattice {
        SubLattice::new(l.clone(), IntMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn bilinear_examples() {
        let l = QuadLattice::diagonal(&[-1, -1, 1]).unwrap();
        let e3 = int_vec(&[0, 0, 1]);
        assert_eq!(l.bilinear_int(&e3, &e3).unwrap(), BigInt::one());
        let u = QuadLattice::u_minus();
        assert_eq!(u.norm_int(&int_vec(&[1, 1])).unwrap(), BigInt::from(-2));
        let v = vec![Scalar::ratio(5, 4), Scalar::zero(), Scalar::ratio(3, 4)];
        assert_eq!(l.bilinear(&v, &v).unwrap(), Scalar::int(-1));
        assert!(l.bilinear(&v[..2], &v).is_err());
    }

    #[test]
    fn discriminants_and_signatures() {
        assert_eq!(QuadLattice::u_minus().discriminant().unwrap(), BigInt::one());
        assert_eq!(QuadLattice::diagonal(&[2]).unwrap().discriminant().unwrap(), BigInt::from(2));
        assert_eq!(QuadLattice::e8().discriminant().unwrap(), BigInt::one());
        assert_eq!(QuadLattice::e8().signature().unwrap(), (8, 0));
        assert_eq!(QuadLattice::diagonal(&[-1, -1, 1]).unwrap().signature().unwrap(), (1, 2));
        assert_eq!(QuadLattice::u_minus().signature().unwrap(), (1, 1));
        assert_eq!(QuadLattice::k3().signature().unwrap(), (19, 3));
    }

    #[test]
    fn rejects_bad_gram() {
        assert!(QuadLattice::from_i64(&[vec![0, 1], vec![2, 0]]).is_err());
        assert!(matches!(QuadLattice::from_i64(&[vec![1, 1], vec![1, 1]]), Err(Error::Degenerate)));
        let d = QuadLattice::new_degenerate(IntMatrix::from_i64(&[vec![1, 1], vec![1, 1]])).unwrap();
        assert!(d.signature().is_err());
    }

    #[test]
    fn complements() {
        let l = arc(QuadLattice::diagonal(&[-1, -1, 1]).unwrap());
        let c = sub(&l, &[vec![0, 0, 1]]).orthogonal_complement().unwrap();
        assert!(c.same_lattice(&sub(&l, &[vec![1, 0, 0], vec![0, 1, 0]])));

        let u = arc(QuadLattice::u_minus());
        let c = sub(&u, &[vec![1, 1]]).orthogonal_complement().unwrap();
        assert_eq!(c.basis(), &IntMatrix::from_i64(&[vec![1, -1]]));

        let l4 = arc(QuadLattice::diagonal(&[1, 1, 1, -1]).unwrap());
        let c = sub(&l4, &[vec![2, 1, 0, 0]]).orthogonal_complement().unwrap();
        assert_eq!(c.basis(), &IntMatrix::from_i64(&[vec![1, -2, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]));
    }

    #[test]
    fn cokernels() {
        let l = arc(QuadLattice::diagonal(&[-1, -1, 1]).unwrap());
        let k = cokernel_of_sum(&sub(&l, &[vec![0, 0, 1]]), &sub(&l, &[vec![1, 0, 0], vec![0, 1, 0]])).unwrap();
        assert!(k.is_trivial());

        let u = arc(QuadLattice::u_minus());
        let k = cokernel_of_sum(&sub(&u, &[vec![1, 1]]), &sub(&u, &[vec![1, -1]])).unwrap();
        assert_eq!(k.invariant_factors(), &int_vec(&[2])[..]);

        let l4 = arc(QuadLattice::diagonal(&[1, 1, 1, -1]).unwrap());
        let s = sub(&l4, &[vec![2, 1, 0, 0]]);
        let t = s.orthogonal_complement().unwrap();
        let k = cokernel_of_sum(&s, &t).unwrap();
        assert_eq!(k.order(), BigInt::from(5));
        assert_eq!(s.discriminant().unwrap(), BigInt::from(5));
        assert_eq!(t.discriminant().unwrap(), BigInt::from(5));

        assert!(cokernel_of_sum(&s, &sub(&l4, &[vec![0, 0, 1, 0]])).is_err());
    }

    #[test]
    fn k3_lattices() {
        for d in 1..=3u64 {
            let k = k3_period_lattice(d).unwrap();
            assert_eq!(k.h_lattice.discriminant().unwrap(), BigInt::one());
            assert_eq!(k.h_lattice.norm_int(&k.h).unwrap(), BigInt::from(-2 * d as i64));
            assert_eq!(k.p.rank(), 21);
            assert!(k.p.is_saturated());
            assert_eq!(k.p.discriminant().unwrap(), BigInt::from(2 * d));
            assert_eq!(k.p.as_lattice().unwrap().signature().unwrap(), (19, 2));
        }
    }

    #[test]
    fn orthogonal_bases() {
        let l = QuadLattice::u_minus();
        let ob = l.orthogonal_basis().unwrap();
        let g = l.gram_of(&ob.vectors).unwrap();
        assert_eq!(g[(0, 1)], BigInt::zero());
        assert!(ob.norms[0].is_negative() && ob.norms[1].is_positive());
        assert_eq!(ob.index, BigInt::from(2));

        let e8 = QuadLattice::e8();
        let ob = e8.orthogonal_basis().unwrap();
        let g = e8.gram_of(&ob.vectors).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(g[(i, j)].is_zero(), i != j);
            }
        }
    }

    #[test]
    fn group_display_and_parts() {
        let g = FiniteAbelianGroup::from_divisors(&int_vec(&[6, 4, 1]));
        assert_eq!(g.invariant_factors(), &int_vec(&[2, 12])[..]);
        assert_eq!(g.to_string(), "Z/2 + Z/12");
        assert_eq!(g.primary_part(&BigInt::from(2)).order(), BigInt::from(8));
        assert_eq!(FiniteAbelianGroup::trivial().to_string(), "0");
    }
}

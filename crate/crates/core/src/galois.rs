//! Finite Galois modules: closure, invariants, `H^1`, torsion reductions
//! and the Brauer-group bookkeeping at good and bad primes.
//!
//! Groups are concrete finite matrix groups acting on column vectors,
//! `g . x = g x`. Sublattices are given by row bases.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::howell::{left_kernel_order, right_kernel_order, PrimePower};
use crate::intlin;
use crate::lattice::{cokernel_of_sum, FiniteAbelianGroup, QuadLattice, SubLattice};
use crate::matrix::IntMatrix;
use crate::numtheory::{is_prime_u64, prime_divisors, valuation};

pub const DEFAULT_CLOSURE_BOUND: usize = 10_000;

/// All elements of the group generated by `gens` (identity first).
pub fn group_closure(rank: usize, gens: &[IntMatrix], bound: usize) -> Result<Vec<IntMatrix>> {
    let id = IntMatrix::identity(rank);
    let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    seen.insert(id.entries().to_vec());
    let mut out = vec![id];
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for g in gens {
            let y = g.matmul(&out[k])?;
            if seen.insert(y.entries().to_vec()) {
                if out.len() >= bound {
                    return Err(Error::ClosureBound(bound));
                }
                out.push(y);
                queue.push_back(out.len() - 1);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisModule {
    rank: usize,
    generators: Vec<IntMatrix>,
    gram: Option<IntMatrix>,
    order: usize,
}

impl GaloisModule {
    pub fn new(rank: usize, generators: Vec<IntMatrix>, gram: Option<IntMatrix>) -> Result<Self> {
        Self::with_bound(rank, generators, gram, DEFAULT_CLOSURE_BOUND)
    }

    pub fn with_bound(rank: usize, generators: Vec<IntMatrix>, gram: Option<IntMatrix>, bound: usize) -> Result<Self> {
        for g in &generators {
            if g.nrows() != rank || g.ncols() != rank {
                return Err(Error::DimensionMismatch { expected: rank, found: g.nrows() });
            }
            if !intlin::determinant(g)?.abs().is_one() {
                return Err(Error::invalid("generator is not invertible over Z"));
            }
            if let Some(q) = &gram {
                if g.transpose().matmul(q)?.matmul(g)? != *q {
                    return Err(Error::invalid("generator does not preserve the form"));
                }
            }
        }
        if let Some(q) = &gram {
            if q.nrows() != rank || !q.is_symmetric() {
                return Err(Error::invalid("gram must be symmetric of the module rank"));
            }
        }
        let order = group_closure(rank, &generators, bound)?.len();
        Ok(GaloisModule { rank, generators, gram, order })
    }

    pub fn trivial(rank: usize) -> Self {
        GaloisModule { rank, generators: Vec::new(), gram: None, order: 1 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn gram(&self) -> Option<&IntMatrix> {
        self.gram.as_ref()
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> Result<Vec<IntMatrix>> {
        group_closure(self.rank, &self.generators, self.order.max(1))
    }

    /// `g - I` for all generators, stacked vertically.
    pub fn stacked_minus_identity(&self) -> IntMatrix {
        let id = IntMatrix::identity(self.rank);
        let mut out = IntMatrix::empty(self.rank);
        for g in &self.generators {
            out = out.vstack(&g.sub(&id).expect("square")).expect("same width");
        }
        out
    }

    /// Saturated basis (rows) of `M^G`.
    pub fn invariants(&self) -> IntMatrix {
        let m = self.stacked_minus_identity();
        if m.nrows() == 0 {
            return IntMatrix::identity(self.rank);
        }
        intlin::right_kernel(&m)
    }

    /// Action on a stable sublattice, in coordinates of its basis rows.
    pub fn restrict(&self, basis: &IntMatrix) -> Result<GaloisModule> {
        let k = basis.nrows();
        let mut gens = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let mut a = IntMatrix::zeros(k, k);
            for j in 0..k {
                let img = g.mul_vec(basis.row(j))?;
                let c = intlin::lattice_coordinates(basis, &img)
                    .ok_or_else(|| Error::invalid("sublattice is not stable under the group"))?;
                for (i, x) in c.into_iter().enumerate() {
                    a[(i, j)] = x;
                }
            }
            gens.push(a);
        }
        let gram = match &self.gram {
            Some(q) => Some(basis.matmul(q)?.matmul(&basis.transpose())?),
            None => None,
        };
        Ok(GaloisModule { rank: k, generators: gens, gram, order: self.order })
    }

    /// Action on `M / S` for a saturated stable `S`, in a basis completing
    /// a basis of `S` to one of `M`.
    pub fn quotient(&self, basis: &IntMatrix) -> Result<GaloisModule> {
        let k = basis.nrows();
        let r = self.rank;
        if k == 0 {
            return Ok(GaloisModule { gram: None, ..self.clone() });
        }
        let snf = intlin::smith_normal_form(basis);
        if snf.diagonal().iter().any(|d| !d.is_one()) {
            return Err(Error::invalid("quotient needs a saturated sublattice"));
        }
        // rows of V^{-1}: the first k span S
        let w = intlin::unimodular_inverse(&snf.v)?;
        let wt = w.transpose();
        let wt_inv = intlin::unimodular_inverse(&wt)?;
        let mut gens = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let c = wt_inv.matmul(g)?.matmul(&wt)?;
            if (k..r).any(|i| (0..k).any(|j| !c[(i, j)].is_zero())) {
                return Err(Error::invalid("sublattice is not stable under the group"));
            }
            gens.push(c.submatrix(k..r, k..r));
        }
        Ok(GaloisModule { rank: r - k, generators: gens, gram: None, order: self.order })
    }

    pub fn reduce_mod(&self, ring: PrimePower) -> TorsionModule {
        let n = BigInt::from(ring.modulus);
        let actions = self.generators.iter().map(|g| g.map(|x| x.mod_floor(&n))).collect();
        TorsionModule { ring, rank: self.rank, actions }
    }
}

/// A free `Z/l^n`-module with a group acting through `actions`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionModule {
    pub ring: PrimePower,
    pub rank: usize,
    pub actions: Vec<IntMatrix>,
}

impl TorsionModule {
    /// Order of the simultaneous kernel of the `g - I`.
    pub fn invariant_order(&self) -> BigInt {
        let id = IntMatrix::identity(self.rank);
        let mut m = IntMatrix::empty(self.rank);
        for a in &self.actions {
            m = m.vstack(&a.sub(&id).expect("square")).expect("same width");
        }
        right_kernel_order(&m, self.ring)
    }
}

/// `H^1(G, M)` from the full cocycle system on all group elements.
pub fn h1(m: &GaloisModule) -> Result<FiniteAbelianGroup> {
    let elems = m.elements()?;
    let r = m.rank;
    let s = elems.len();
    if r == 0 {
        return Ok(FiniteAbelianGroup::trivial());
    }
    let index: BTreeMap<Vec<BigInt>, usize> =
        elems.iter().enumerate().map(|(i, g)| (g.entries().to_vec(), i)).collect();
    let unknowns = s * r;
    // columns: c(e) = 0 (elems[0] is the identity), then
    // c(gh) - c(g) - g c(h) = 0 for generators g and all h
    let ncols = r + m.generators.len() * s * r;
    let mut eq = IntMatrix::zeros(unknowns, ncols);
    for a in 0..r {
        eq[(a, a)] = BigInt::one();
    }
    let mut col = r;
    for g in &m.generators {
        let gi = index[g.entries()];
        for (hi, h) in elems.iter().enumerate() {
            let ghi = index[g.matmul(h)?.entries()];
            for a in 0..r {
                eq[(ghi * r + a, col)] += 1;
                eq[(gi * r + a, col)] -= 1;
                for b in 0..r {
                    eq[(hi * r + b, col)] -= &g[(a, b)];
                }
                col += 1;
            }
        }
    }
    let z1 = intlin::left_kernel(&eq);
    if z1.nrows() == 0 {
        return Ok(FiniteAbelianGroup::trivial());
    }
    // coboundaries c(g) = g e_b - e_b in cocycle coordinates
    let mut cob = IntMatrix::empty(z1.nrows());
    for b in 0..r {
        let mut v = vec![BigInt::zero(); unknowns];
        for (k, g) in elems.iter().enumerate() {
            for a in 0..r {
                v[k * r + a] = &g[(a, b)] - BigInt::from((a == b) as i64);
            }
        }
        let c = intlin::lattice_coordinates(&z1, &v).ok_or_else(|| Error::invariant("coboundary is not a cocycle"))?;
        cob.push_row(c)?;
    }
    quotient_group(&cob, z1.nrows())
}

/// `Z^k / rowspan(rel)`, which must be finite.
fn quotient_group(rel: &IntMatrix, k: usize) -> Result<FiniteAbelianGroup> {
    let divs = intlin::elementary_divisors(rel);
    if divs.len() < k {
        return Err(Error::invariant("cohomology group came out infinite"));
    }
    Ok(FiniteAbelianGroup::from_divisors(&divs))
}

/// `H^1` of a cyclic group with generator `sigma`: `ker N / im(sigma - 1)`.
pub fn h1_cyclic(m: &GaloisModule) -> Result<FiniteAbelianGroup> {
    if m.generators.len() > 1 {
        return Err(Error::invalid("cyclic formula needs a single generator"));
    }
    let r = m.rank;
    let Some(sigma) = m.generators.first() else {
        return Ok(FiniteAbelianGroup::trivial());
    };
    let mut norm = IntMatrix::zeros(r, r);
    let mut p = IntMatrix::identity(r);
    for _ in 0..m.order {
        norm = norm.add(&p)?;
        p = sigma.matmul(&p)?;
    }
    let ker = intlin::right_kernel(&norm);
    if ker.nrows() == 0 {
        return Ok(FiniteAbelianGroup::trivial());
    }
    let dm = sigma.sub(&IntMatrix::identity(r))?;
    let mut rel = IntMatrix::empty(ker.nrows());
    for b in 0..r {
        let c = intlin::lattice_coordinates(&ker, &dm.column(b))
            .ok_or_else(|| Error::invariant("image of sigma - 1 outside ker N"))?;
        rel.push_row(c)?;
    }
    quotient_group(&rel, ker.nrows())
}

/// Ambient module with a Gram form, a saturated stable Picard lattice and
/// its orthogonal complement `T`.
#[derive(Clone, Debug)]
pub struct BrauerSetup {
    pub h: GaloisModule,
    pub pic: SubLattice,
    pub t: SubLattice,
}

impl BrauerSetup {
    pub fn new(h: GaloisModule, pic_basis: IntMatrix) -> Result<Self> {
        let gram = h.gram().ok_or_else(|| Error::invalid("setup needs a Gram matrix"))?.clone();
        let lattice = Arc::new(QuadLattice::new(gram)?);
        let pic = SubLattice::new(lattice, pic_basis)?;
        if !pic.is_saturated() {
            return Err(Error::invalid("Picard basis must be saturated"));
        }
        pic.discriminant()?;
        let t = pic.orthogonal_complement()?;
        h.restrict(pic.basis())?;
        h.restrict(t.basis())?;
        Ok(BrauerSetup { h, pic, t })
    }

    /// `|disc(Pic)|`.
    pub fn delta(&self) -> BigInt {
        self.pic.discriminant().expect("checked at construction")
    }

    /// `K = H / (Pic + T)`.
    pub fn k_group(&self) -> Result<FiniteAbelianGroup> {
        cokernel_of_sum(&self.pic, &self.t)
    }

    pub fn pic_module(&self) -> GaloisModule {
        self.h.restrict(self.pic.basis()).expect("checked at construction")
    }

    pub fn t_module(&self) -> GaloisModule {
        self.h.restrict(self.t.basis()).expect("checked at construction")
    }

    fn sum_basis(&self) -> IntMatrix {
        self.pic.basis().vstack(self.t.basis()).expect("same width")
    }

    /// Whether the group acts trivially on `K (x) Z_l`.
    pub fn acts_trivially_on_k(&self, l: u64) -> Result<bool> {
        let snf = intlin::smith_normal_form(&self.sum_basis());
        let d = snf.diagonal();
        let lb = BigInt::from(l);
        let id = IntMatrix::identity(self.h.rank);
        for g in &self.h.generators {
            let w = g.transpose().sub(&id)?.matmul(&snf.v)?;
            for (i, di) in d.iter().enumerate() {
                let v = valuation(di, &lb);
                if v == 0 {
                    continue;
                }
                let q = num_traits::pow(lb.clone(), v as usize);
                if (0..w.nrows()).any(|j| !w[(j, i)].is_multiple_of(&q)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `(H / Pic) / l^n` with the induced action.
pub fn brauer_model(setup: &BrauerSetup, ring: PrimePower) -> Result<TorsionModule> {
    Ok(setup.h.quotient(setup.pic.basis())?.reduce_mod(ring))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeCheck {
    pub prime: u64,
    pub t_invariant_order: BigInt,
    pub brauer_invariant_order: BigInt,
    /// `(T/l)^G = 0`, which forces the `l`-part of the invariants to vanish.
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveReport {
    pub excluded: Vec<BigInt>,
    /// Largest excluded prime, or 1 when nothing is excluded.
    pub l0: BigInt,
    pub checks: Vec<PrimeCheck>,
}

pub fn prime_check(setup: &BrauerSetup, l: u64, n: u32) -> Result<PrimeCheck> {
    let ring = PrimePower::new(l, n)?;
    let t_inv = setup.t_module().reduce_mod(ring).invariant_order();
    let br_inv = brauer_model(setup, ring)?.invariant_order();
    Ok(PrimeCheck { prime: l, vanishes: t_inv.is_one(), t_invariant_order: t_inv, brauer_invariant_order: br_inv })
}

/// Excluded primes and checks at every good prime up to `check_limit`.
pub fn good_prime_sieve(
    setup: &BrauerSetup,
    exclusions: &[BigInt],
    mw: &BigInt,
    check_limit: u64,
) -> Result<SieveReport> {
    if *mw < BigInt::one() {
        return Err(Error::invalid("the annihilation constant must be at least 1"));
    }
    let mut excluded: BTreeSet<BigInt> = prime_divisors(&setup.delta()).into_iter().collect();
    for p in exclusions {
        if crate::numtheory::primality(p) == crate::numtheory::Primality::Composite || *p < BigInt::from(2) {
            return Err(Error::invalid(format!("excluded value {p} is not prime")));
        }
        excluded.insert(p.clone());
    }
    excluded.extend(prime_divisors(mw));
    let l0 = excluded.iter().next_back().cloned().unwrap_or_else(BigInt::one);
    let good: Vec<u64> =
        (2..=check_limit).filter(|&p| is_prime_u64(p) && !excluded.contains(&BigInt::from(p))).collect();
    let checks = good.par_iter().map(|&l| prime_check(setup, l, 1)).collect::<Result<Vec<_>>>()?;
    Ok(SieveReport { excluded: excluded.into_iter().collect(), l0, checks })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceReport {
    pub prime: u64,
    pub n: u32,
    pub k_order: BigInt,
    pub c_invariant_order: BigInt,
    pub h2_invariant_order: BigInt,
    pub pic_quotient_order: BigInt,
    pub t_invariant_order: BigInt,
    pub bound: BigInt,
    /// `|(H/l^n)^G| <= |Pic/l^n| * bound`.
    pub inequality_holds: bool,
    /// `K_l -> Pic/l^n` is injective.
    pub injective: bool,
}

/// Exponent `m` with `K_l` killed by `l^m`.
fn k_exponent(k_l: &FiniteAbelianGroup, l: &BigInt) -> u32 {
    k_l.invariant_factors().iter().map(|d| valuation(d, l)).max().unwrap_or(0)
}

pub fn four_term_check(setup: &BrauerSetup, l: u64, n: u32) -> Result<SequenceReport> {
    let ring = PrimePower::new(l, n)?;
    let lb = BigInt::from(l);
    let k_l = setup.k_group()?.primary_part(&lb);
    let m = k_exponent(&k_l, &lb);
    if n < m {
        return Err(Error::invalid(format!("need n >= {m} so that K_l is l^n-torsion")));
    }
    if !setup.acts_trivially_on_k(l)? {
        return Err(Error::invalid("the group acts nontrivially on K_l"));
    }
    let r = setup.h.rank;
    let k = setup.pic.rank();
    let s = setup.sum_basis();
    let k_order = k_l.order();

    // Tor term: kernel of (Pic + T)/l^n -> H/l^n
    let tor = left_kernel_order(&s, ring);
    let span = crate::howell::HowellForm::new(&s, ring).span_order();
    let coker = ring.order_of_free(r) / &span;
    if tor != k_order || coker != k_order {
        return Err(Error::invariant("four-term sequence orders disagree with K_l"));
    }
    if &tor * ring.order_of_free(r) != ring.order_of_free(k) * ring.order_of_free(r - k) * &coker {
        return Err(Error::invariant("four-term sequence is not exact"));
    }
    let injective = left_kernel_order(setup.t.basis(), ring).is_one();

    let h2_inv = right_kernel_order(&setup.h.stacked_minus_identity(), ring);
    let t_inv = setup.t_module().reduce_mod(ring).invariant_order();
    let pic_q = ring.order_of_free(k);

    // C = image of (Pic + T)/l^n; C^G = {a S : a S (g^T - I) = 0} / Tor
    let id = IntMatrix::identity(r);
    let mut fixed = IntMatrix::zeros(r, 0);
    for g in setup.h.generators() {
        fixed = fixed.hstack(&s.matmul(&g.transpose().sub(&id)?)?)?;
    }
    let c_inv = left_kernel_order(&fixed, ring) / &tor;

    let pic_trivial = setup.pic_module().generators().iter().all(|g| *g == IntMatrix::identity(k));
    if pic_trivial && injective && &k_order * &c_inv != &pic_q * &t_inv {
        return Err(Error::invariant("split sequence K -> Pic + T^G -> C^G does not count"));
    }
    let inequality_holds = h2_inv <= &pic_q * &t_inv;
    Ok(SequenceReport {
        prime: l,
        n,
        k_order,
        c_invariant_order: c_inv,
        h2_invariant_order: h2_inv,
        pic_quotient_order: pic_q,
        bound: t_inv.clone(),
        t_invariant_order: t_inv,
        inequality_holds,
        injective,
    })
}

/// `sup_n |(M/l^n)^G|`, with the exponent past which it is constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorsionSup {
    Bounded {
        bound: BigInt,
        exponent: u32,
    },
    /// `M^G` has positive rank, so the orders grow without bound.
    Unbounded,
}

impl TorsionSup {
    pub fn value(&self) -> Option<&BigInt> {
        match self {
            TorsionSup::Bounded { bound, .. } => Some(bound),
            TorsionSup::Unbounded => None,
        }
    }
}

/// Supremum read off the elementary divisors of the stacked `g - I`, then
/// re-checked with Howell forms at the certified exponent and one past it.
pub fn torsion_sup(m: &GaloisModule, l: u64) -> Result<TorsionSup> {
    let stacked = m.stacked_minus_identity();
    let divs = if stacked.nrows() == 0 { Vec::new() } else { intlin::elementary_divisors(&stacked) };
    if divs.len() < m.rank {
        return Ok(TorsionSup::Unbounded);
    }
    let lb = BigInt::from(l);
    let vals: Vec<u32> = divs.iter().map(|d| valuation(d, &lb)).collect();
    let e = vals.iter().copied().max().unwrap_or(0).max(1);
    let bound: BigInt = vals.iter().map(|&v| num_traits::pow(lb.clone(), v as usize)).product();
    for n in [e, e + 1] {
        let got = m.reduce_mod(PrimePower::new(l, n)?).invariant_order();
        if got != bound {
            return Err(Error::invariant(format!("invariant order at n = {n} is {got}, expected {bound}")));
        }
    }
    Ok(TorsionSup::Bounded { bound, exponent: e })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundRow {
    pub n: u32,
    pub h2_invariant_order: BigInt,
    pub pic_quotient_order: BigInt,
    pub t_invariant_order: BigInt,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadPrimeBound {
    pub prime: u64,
    pub sup: TorsionSup,
    /// Exponent of `K_l`; rows start there.
    pub k_exponent: u32,
    pub rows: Vec<BoundRow>,
}

impl BadPrimeBound {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

/// Bound on `|(H/l^n)^G| / |Pic/l^n|` independent of `n`, checked for
/// `n` from the exponent of `K_l` up to `n_max`.
pub fn bad_prime_bound(setup: &BrauerSetup, l: u64, n_max: u32) -> Result<BadPrimeBound> {
    let lb = BigInt::from(l);
    let k_l = setup.k_group()?.primary_part(&lb);
    let m = k_exponent(&k_l, &lb).max(1);
    if !setup.acts_trivially_on_k(l)? {
        return Err(Error::invalid("the group acts nontrivially on K_l"));
    }
    let t_mod = setup.t_module();
    let sup = torsion_sup(&t_mod, l)?;
    let mut rows = Vec::new();
    if let TorsionSup::Bounded { bound, .. } = &sup {
        for n in m..=n_max.max(m) {
            let ring = PrimePower::new(l, n)?;
            let h2 = right_kernel_order(&setup.h.stacked_minus_identity(), ring);
            let pic_q = ring.order_of_free(setup.pic.rank());
            let t_inv = t_mod.reduce_mod(ring).invariant_order();
            if t_inv > *bound {
                return Err(Error::invariant("invariant order exceeds its certified supremum"));
            }
            rows.push(BoundRow {
                n,
                holds: h2 <= &pic_q * bound,
                h2_invariant_order: h2,
                pic_quotient_order: pic_q,
                t_invariant_order: t_inv,
            });
        }
    }
    Ok(BadPrimeBound { prime: l, sup, k_exponent: m, rows })
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub const WEDGE_GUARD: u128 = 4096;

/// `k`-th exterior power in the lexicographic basis of `k`-subsets.
pub fn exterior_power(g: &IntMatrix, k: usize) -> Result<IntMatrix> {
    let n = g.nrows();
    if !g.is_square() || k > n {
        return Err(Error::invalid("exterior power needs a square matrix and k <= n"));
    }
    if binomial(n, k) > WEDGE_GUARD {
        return Err(Error::guard(format!("binomial({n}, {k}) exceeds {WEDGE_GUARD}")));
    }
    let subs = subsets(n, k);
    let mut out = IntMatrix::zeros(subs.len(), subs.len());
    for (a, rows) in subs.iter().enumerate() {
        for (b, cols) in subs.iter().enumerate() {
            let minor = IntMatrix::from_fn(k, k, |i, j| g[(rows[i], cols[j])].clone());
            out[(a, b)] = if k == 0 { BigInt::one() } else { intlin::determinant(&minor)? };
        }
    }
    Ok(out)
}

/// `det(g) (wedge^{r-1} g)^{-T}`, the action on `wedge^{r-1} M` twisted so
/// that it matches `M` through the pairing into `wedge^r M = Z(det)`.
pub fn top_wedge_twist(g: &IntMatrix) -> Result<IntMatrix> {
    let r = g.nrows();
    if r == 0 {
        return Err(Error::invalid("rank must be positive"));
    }
    let det = intlin::determinant(g)?;
    let w = exterior_power(g, r - 1)?;
    Ok(intlin::unimodular_inverse(&w)?.transpose().scale(&det))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneBound {
    pub direct: TorsionSup,
    pub via_wedge: TorsionSup,
}

impl RankOneBound {
    pub fn agree(&self) -> bool {
        self.direct == self.via_wedge
    }
}

/// Both routes on a module `T`: directly, and through the twisted
/// `wedge^{r-1} T`.
pub fn rank_one_bound_for(t: &GaloisModule, l: u64) -> Result<RankOneBound> {
    let direct = torsion_sup(t, l)?;
    let gens = t.generators().iter().map(top_wedge_twist).collect::<Result<Vec<_>>>()?;
    let twisted = GaloisModule::new(t.rank(), gens, None)?;
    let via_wedge = torsion_sup(&twisted, l)?;
    Ok(RankOneBound { direct, via_wedge })
}

pub fn rank_one_bound(setup: &BrauerSetup, l: u64) -> Result<RankOneBound> {
    if setup.pic.rank() != 1 {
        return Err(Error::invalid("the rank-one route needs Pic of rank 1"));
    }
    rank_one_bound_for(&setup.t_module(), l)
}

/// U(-1) with the swap action and Picard lattice spanned by `(1, 1)`.
pub fn u_swap_setup() -> BrauerSetup {
    let gram = IntMatrix::from_i64(&[vec![0, -1], vec![-1, 0]]);
    let swap = IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
    let h = GaloisModule::new(2, vec![swap], Some(gram)).expect("valid fixture");
    BrauerSetup::new(h, IntMatrix::from_i64(&[vec![1, 1]])).expect("valid fixture")
}

/// Small helper for callers holding primes as big integers.
pub fn small_prime(p: &BigInt) -> Result<u64> {
    p.to_u64().filter(|&x| is_prime_u64(x)).ok_or_else(|| Error::invalid(format!("{p} is not a small prime")))
}

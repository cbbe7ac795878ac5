//! Seeded random inputs shared by tests, the self-test and benchmarks.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::clifford::CliffordContext;
use crate::error::Result;
use crate::galois::{BrauerSetup, GaloisModule};
use crate::intlin;
use crate::kuga_satake::K3Period;
use crate::matrix::IntMatrix;
use crate::scalar::Scalar;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Reflection `x -> x - 2 Q(x, r) / Q(r) r` for the diagonal form `q`.
pub fn reflect(q: &[Scalar], r: &[Scalar], x: &[Scalar]) -> Vec<Scalar> {
    let form = |a: &[Scalar], b: &[Scalar]| {
        q.iter().zip(a).zip(b).fold(Scalar::zero(), |acc, ((qi, ai), bi)| acc + &(qi * ai) * bi)
    };
    let qr = form(r, r);
    let coef = (&form(x, r) * &Scalar::int(2)).checked_div(&qr).expect("anisotropic mirror");
    x.iter().zip(r).map(|(xi, ri)| xi - &(&coef * ri)).collect()
}

/// Random exact period at rank `n >= 3`: norms `(-1, -1, positive...)`, a
/// base period (rational, or in `Q(sqrt 2)` when `quadratic`), then one or
/// two random reflections and possibly a rational rotation of the plane.
pub fn random_period(rng: &mut Rng64, n: usize, quadratic: bool) -> Result<K3Period> {
    let mut q = vec![-1i64, -1];
    for i in 2..n {
        q.push(if quadratic && i == 2 { 1 } else { *[1i64, 1, 2, 3].choose(rng).expect("nonempty") });
    }
    let ctx = CliffordContext::from_ints(&q)?;
    let qs: Vec<Scalar> = ctx.q().to_vec();
    let unit = |k: usize| (0..n).map(|i| Scalar::int((i == k) as i64)).collect::<Vec<_>>();
    let (mut f1, mut f2) = if quadratic {
        let s2 = Scalar::quadratic(BigRational::zero(), BigRational::one(), 2)?;
        let mut f1 = unit(2);
        f1[0] = s2;
        (f1, unit(1))
    } else {
        (unit(0), unit(1))
    };
    let reflections = rng.gen_range(1..=2);
    for _ in 0..reflections {
        let r = loop {
            let r: Vec<Scalar> = (0..n).map(|_| Scalar::int(rng.gen_range(-2..=2))).collect();
            let qr = qs.iter().zip(&r).fold(Scalar::zero(), |acc, (a, b)| acc + &(a * b) * b);
            if !qr.is_zero() {
                break r;
            }
        };
        f1 = reflect(&qs, &r, &f1);
        f2 = reflect(&qs, &r, &f2);
    }
    let p = K3Period::new(&ctx, f1, f2)?;
    if rng.gen_bool(0.5) {
        let (a, b) = *[(3, 4), (5, 12), (8, 15)].choose(rng).expect("nonempty");
        let c = ((a * a + b * b) as f64).sqrt() as i64;
        return p.rotate(&Scalar::ratio(a, c), &Scalar::ratio(b, c));
    }
    Ok(p)
}

/// Random element of the even algebra with `terms` distinct monomials and
/// small integer coefficients.
pub fn random_even_element(
    rng: &mut Rng64,
    ctx: &Arc<CliffordContext>,
    terms: usize,
) -> Result<crate::clifford::CliffordElement> {
    let n = ctx.rank();
    let mut out = Vec::with_capacity(terms);
    let mut seen = std::collections::BTreeSet::new();
    while out.len() < terms {
        let mut mask: u64 = rng.gen::<u64>() & ((1u64 << n) - 1);
        if mask.count_ones() % 2 == 1 {
            mask ^= 1;
        }
        if seen.insert(mask) {
            let c = loop {
                let c = rng.gen_range(-5i64..=5);
                if c != 0 {
                    break c;
                }
            };
            out.push((mask, Scalar::from(BigInt::from(c))));
        }
    }
    crate::clifford::CliffordElement::from_terms(ctx, out)
}

/// Blocks of finite order used to build random cyclic actions.
fn finite_order_block(rng: &mut Rng64) -> IntMatrix {
    let blocks: [&[Vec<i64>]; 7] = [
        &[vec![1]],
        &[vec![-1]],
        &[vec![0, 1], vec![1, 0]],
        &[vec![0, -1], vec![1, 0]],
        &[vec![0, -1], vec![1, -1]],
        &[vec![1, -1], vec![1, 0]],
        &[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]],
    ];
    IntMatrix::from_i64(blocks.choose(rng).expect("nonempty"))
}

fn random_unimodular(rng: &mut Rng64, n: usize, steps: usize) -> IntMatrix {
    let mut p = IntMatrix::identity(n);
    if n < 2 {
        return p;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        for k in 0..n {
            let v = &p[(j, k)] * &c;
            p[(i, k)] += v;
        }
    }
    p
}

/// Random cyclic action of rank at most `max_rank`: a block sum of small
/// finite-order blocks, conjugated by a random unimodular matrix.
pub fn random_cyclic_module(rng: &mut Rng64, max_rank: usize) -> Result<GaloisModule> {
    let target = rng.gen_range(1..=max_rank);
    let mut blocks = Vec::new();
    let mut size = 0;
    while size < target {
        let b = finite_order_block(rng);
        if size + b.nrows() > max_rank {
            continue;
        }
        size += b.nrows();
        blocks.push(b);
    }
    let mut g = IntMatrix::zeros(size, size);
    let mut off = 0;
    for b in &blocks {
        for i in 0..b.nrows() {
            for j in 0..b.ncols() {
                g[(off + i, off + j)] = b[(i, j)].clone();
            }
        }
        off += b.nrows();
    }
    let p = random_unimodular(rng, size, 2 * size);
    let pinv = intlin::unimodular_inverse(&p)?;
    GaloisModule::new(size, vec![p.matmul(&g)?.matmul(&pinv)?], None)
}

/// Random setup with a diagonal form, a signed permutation group
/// preserving it, and a Picard lattice spanned by invariant vectors.
pub fn random_stable_setup(rng: &mut Rng64, rank: usize) -> Result<BrauerSetup> {
    loop {
        let diag: Vec<i64> = (0..rank).map(|_| *[-1i64, 1, 2].choose(rng).expect("nonempty")).collect();
        // signed permutation within classes of equal diagonal entries
        let mut perm: Vec<usize> = (0..rank).collect();
        for v in [-1i64, 1, 2] {
            let mut idx: Vec<usize> = (0..rank).filter(|&i| diag[i] == v).collect();
            let orig = idx.clone();
            idx.shuffle(rng);
            for (a, b) in orig.iter().zip(&idx) {
                perm[*a] = *b;
            }
        }
        let g = IntMatrix::from_fn(rank, rank, |i, j| {
            if perm[j] == i {
                BigInt::from(if rng.gen_bool(0.25) { -1 } else { 1 })
            } else {
                BigInt::zero()
            }
        });
        let gram = IntMatrix::from_fn(rank, rank, |i, j| BigInt::from(if i == j { diag[i] } else { 0 }));
        let h = GaloisModule::new(rank, vec![g], Some(gram))?;
        let elems = h.elements()?;
        let mut rows = IntMatrix::empty(rank);
        for i in 0..rank {
            if rng.gen_bool(0.5) {
                let mut s = vec![BigInt::zero(); rank];
                for e in &elems {
                    for (k, x) in s.iter_mut().enumerate() {
                        *x += &e[(k, i)];
                    }
                }
                if s.iter().any(|x| !x.is_zero()) {
                    rows.push_row(s)?;
                }
            }
        }
        let pic = intlin::saturate(&intlin::canonical_basis(&rows));
        if pic.nrows() == 0 || pic.nrows() == rank {
            continue;
        }
        return BrauerSetup::new(h, pic);
    }
}

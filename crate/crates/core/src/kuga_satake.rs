//! The polarized complex torus attached to a K3-type period.
//!
//! For a period `f1 + i f2` (with `Q(f1) = Q(f2) = -1`, `Q(f1, f2) = 0`)
//! the element `J = f1 f2` of the even Clifford algebra squares to `-1`.
//! Multiplication by `i` on `C+` is `x -> -J x`, and the polarization is
//! `E(v, w) = tr(alpha iota(v) w)` with `alpha = +-e1 e2`. The sign is
//! picked so that `E(x, i y)` is positive definite.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::clifford::{embed_vector_product, even_index, even_mask, CliffordContext, CliffordElement};
use crate::error::{Error, Result};
use crate::intlin;
use crate::matrix::{IntMatrix, ScalarMatrix};
use crate::modular::{definiteness, float_positive_definite, Definiteness};
use crate::scalar::{Scalar, ScalarMode};

#[derive(Clone, Debug)]
pub struct K3Period {
    ctx: Arc<CliffordContext>,
    f1: Vec<Scalar>,
    f2: Vec<Scalar>,
    mode: ScalarMode,
    tolerance: Option<BigRational>,
}

impl K3Period {
    /// Exact period; the relations are checked exactly.
    pub fn new(ctx: &Arc<CliffordContext>, f1: Vec<Scalar>, f2: Vec<Scalar>) -> Result<Self> {
        Self::build(ctx, f1, f2, None)
    }

    /// Period with big-float coefficients; relations hold up to `tolerance`
    /// and nothing derived from it is certified.
    pub fn with_tolerance(
        ctx: &Arc<CliffordContext>,
        f1: Vec<Scalar>,
        f2: Vec<Scalar>,
        tolerance: BigRational,
    ) -> Result<Self> {
        if !tolerance.is_positive() {
            return Err(Error::invalid("tolerance must be positive"));
        }
        Self::build(ctx, f1, f2, Some(tolerance))
    }

    fn build(ctx: &Arc<CliffordContext>, f1: Vec<Scalar>, f2: Vec<Scalar>, tol: Option<BigRational>) -> Result<Self> {
        let n = ctx.rank();
        if n < 2 {
            return Err(Error::invalid("a period needs rank at least 2"));
        }
        for f in [&f1, &f2] {
            if f.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: f.len() });
            }
        }
        let mode = ScalarMode::join_all(f1.iter().chain(&f2))?;
        if !mode.is_exact() && tol.is_none() {
            return Err(Error::invalid("float periods need a tolerance"));
        }
        let p = K3Period { ctx: ctx.clone(), f1, f2, mode, tolerance: tol };
        let minus_one = Scalar::int(-1);
        let checks = [
            ("Q(f1) = -1", p.form(&p.f1, &p.f1)?, &minus_one),
            ("Q(f2) = -1", p.form(&p.f2, &p.f2)?, &minus_one),
            ("Q(f1, f2) = 0", p.form(&p.f1, &p.f2)?, &Scalar::zero()),
        ];
        for (name, got, want) in checks {
            if !p.close(&got, want) {
                return Err(Error::invalid(format!("period violates {name} (got {got})")));
            }
        }
        Ok(p)
    }

    /// `f1 = e1`, `f2 = e2`; needs `q1 = q2 = -1`.
    pub fn standard(ctx: &Arc<CliffordContext>) -> Result<Self> {
        let n = ctx.rank();
        let unit = |k: usize| (0..n).map(|i| Scalar::int((i == k) as i64)).collect::<Vec<_>>();
        Self::new(ctx, unit(0), unit(1))
    }

    /// `Q(v, w) = sum q_i v_i w_i` in the orthogonal basis.
    pub fn form(&self, v: &[Scalar], w: &[Scalar]) -> Result<Scalar> {
        ScalarMode::join_all(v.iter().chain(w))?;
        let mut acc = Scalar::zero();
        for ((q, a), b) in self.ctx.q().iter().zip(v).zip(w) {
            if !a.is_zero() && !b.is_zero() {
                acc = acc + &(q * a) * b;
            }
        }
        Ok(acc)
    }

    fn close(&self, a: &Scalar, b: &Scalar) -> bool {
        match &self.tolerance {
            None => a == b,
            Some(t) => {
                let diff = (a - b).to_bigfloat(self.precision().unwrap_or(64)).abs().to_rational();
                &diff <= t
            }
        }
    }

    pub fn context(&self) -> &Arc<CliffordContext> {
        &self.ctx
    }

    pub fn f1(&self) -> &[Scalar] {
        &self.f1
    }

    pub fn f2(&self) -> &[Scalar] {
        &self.f2
    }

    pub fn mode(&self) -> ScalarMode {
        self.mode
    }

    pub fn is_exact(&self) -> bool {
        self.mode.is_exact()
    }

    pub fn tolerance(&self) -> Option<&BigRational> {
        self.tolerance.as_ref()
    }

    pub fn precision(&self) -> Option<u32> {
        match self.mode {
            ScalarMode::BigFloat(p) => Some(p),
            _ => None,
        }
    }

    /// `(a f1 + b f2, -b f1 + a f2)` for `a^2 + b^2 = 1`.
    pub fn rotate(&self, a: &Scalar, b: &Scalar) -> Result<Self> {
        let g1: Vec<Scalar> = self.f1.iter().zip(&self.f2).map(|(x, y)| &(a * x) + &(b * y)).collect();
        let g2: Vec<Scalar> = self.f1.iter().zip(&self.f2).map(|(x, y)| &(a * y) - &(b * x)).collect();
        Self::build(&self.ctx, g1, g2, self.tolerance.clone())
    }

    /// Swaps the orientation of the period plane (`f2 -> -f2`).
    pub fn conjugate(&self) -> Self {
        K3Period { f2: self.f2.iter().map(|x| -x).collect(), ..self.clone() }
    }
}

/// `J = f1 f2`, checked to square to `-1`.
pub fn complex_structure(p: &K3Period) -> Result<CliffordElement> {
    let j = embed_vector_product(&p.ctx, &p.f1, &p.f2)?;
    let sq = j.multiply(&j)?;
    let minus_one = CliffordElement::scalar(&p.ctx, Scalar::int(-1));
    let ok = if p.is_exact() {
        sq == minus_one
    } else {
        let err = sq.add(&CliffordElement::one(&p.ctx))?;
        let all_small = err.terms().all(|(_, c)| p.close(c, &Scalar::zero()));
        all_small
    };
    if !ok {
        return Err(Error::invariant("J^2 != -1"));
    }
    Ok(j)
}

/// Multiplication by `i`, `x -> -J x`, as a Clifford element.
pub fn i_action(p: &K3Period) -> Result<CliffordElement> {
    Ok(complex_structure(p)?.neg())
}

/// Nonzero entries `(row, col, value)` of `E` with `alpha = sign * e1 e2`.
/// `E(a, b)` vanishes unless `b = a xor e1e2`.
pub fn polarization_entries(ctx: &CliffordContext, sign: i8) -> Result<Vec<(usize, usize, BigInt)>> {
    let q = ctx.q();
    if q.len() < 2 || q[0].signum() >= 0 || q[1].signum() >= 0 {
        return Err(Error::invalid("e1, e2 must span a negative definite plane"));
    }
    if q.iter().any(|x| x.to_integer().is_none()) {
        return Err(Error::invalid("polarization needs integral norms"));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::invalid("alpha sign must be +1 or -1"));
    }
    let dim = ctx.even_dim();
    if dim > 1 << 40 {
        return Err(Error::guard("even subalgebra too large to enumerate"));
    }
    let scale = BigInt::from(dim) * BigInt::from(sign);
    let mut out = Vec::with_capacity(dim as usize);
    for i in 0..dim as usize {
        let a = even_mask(i);
        let b = a ^ 0b11;
        // tr(alpha iota(a) b) = dim * scalar part of (sign * eps_a * e12 a b)
        let eps = if (a.count_ones() / 2) % 2 == 1 { -1 } else { 1 };
        let (m1, s1) = ctx.blade_product(0b11, a);
        let (m2, s2) = ctx.blade_product(m1, b);
        debug_assert_eq!(m2, 0);
        let v = (&s1 * &s2).to_integer().expect("integral norms") * &scale * eps;
        out.push((i, even_index(b), v));
    }
    Ok(out)
}

/// `E` as a dense integral alternating matrix.
pub fn polarization_form(ctx: &CliffordContext, sign: i8) -> Result<IntMatrix> {
    let dim = ctx.check_dense()?;
    let mut e = IntMatrix::zeros(dim, dim);
    for (i, j, v) in polarization_entries(ctx, sign)? {
        e[(i, j)] = v;
    }
    Ok(e)
}

/// Which `alpha` sign makes `E(x, i y)` positive, and whether that was
/// decided exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphaSign {
    pub sign: i8,
    pub verified: bool,
}

fn symmetric_form(e: &IntMatrix, c: &ScalarMatrix) -> Result<ScalarMatrix> {
    e.to_scalar().matmul(c)
}

/// Sign choice from the definiteness of `E_+(x, c y)`: exactly one of
/// `E_+ c` and `-E_+ c` can be positive definite.
fn decide_sign(p: &K3Period, s_plus: &ScalarMatrix) -> Result<AlphaSign> {
    if p.is_exact() {
        return match definiteness(s_plus)? {
            Definiteness::Positive => Ok(AlphaSign { sign: 1, verified: true }),
            Definiteness::Negative => Ok(AlphaSign { sign: -1, verified: true }),
            Definiteness::Neither => Err(Error::invariant("E(x, iy) is indefinite for both signs of alpha")),
        };
    }
    let prec = p.precision().unwrap_or(64);
    let eps = p.tolerance().cloned().unwrap_or_else(|| BigRational::new(BigInt::one(), BigInt::from(1u64 << 32)));
    if float_positive_definite(s_plus, prec, &eps) {
        Ok(AlphaSign { sign: 1, verified: false })
    } else if float_positive_definite(&s_plus.neg(), prec, &eps) {
        Ok(AlphaSign { sign: -1, verified: false })
    } else {
        Err(Error::invariant("E(x, iy) is not definite within tolerance for either sign"))
    }
}

pub fn choose_alpha_sign(p: &K3Period) -> Result<AlphaSign> {
    let c = i_action(p)?.left_mult_matrix()?;
    let e = polarization_form(&p.ctx, 1)?;
    decide_sign(p, &symmetric_form(&e, &c)?)
}

/// Lattice `C+` with complex structure `c` and polarization `E`.
#[derive(Clone, Debug)]
pub struct PolarizedTorus {
    pub lattice_rank: usize,
    pub complex_structure: ScalarMatrix,
    pub polarization: IntMatrix,
    pub alpha_sign: i8,
    /// False when positivity was only checked in floating point.
    pub verified: bool,
    pub period: K3Period,
}

impl PolarizedTorus {
    pub fn complex_dim(&self) -> usize {
        self.lattice_rank / 2
    }

    /// Re-runs every Riemann relation check.
    pub fn check(&self) -> Result<()> {
        let n = self.lattice_rank;
        let c = &self.complex_structure;
        let e = &self.polarization;
        let exact = self.period.is_exact();
        let minus_id = ScalarMatrix::identity(n).neg();
        let c2 = c.matmul(c)?;
        if exact && c2 != minus_id {
            return Err(Error::invariant("c^2 != -I"));
        }
        if !exact && !approx_eq(&c2, &minus_id, &self.period) {
            return Err(Error::invariant("c^2 != -I within tolerance"));
        }
        if e.transpose() != e.neg() {
            return Err(Error::invariant("E is not alternating"));
        }
        let ec = symmetric_form(e, c)?;
        let ctec = c.transpose().matmul(&ec)?;
        let es = e.to_scalar();
        if exact && ctec != es {
            return Err(Error::invariant("E(cx, cy) != E(x, y)"));
        }
        if !exact && !approx_eq(&ctec, &es, &self.period) {
            return Err(Error::invariant("E(cx, cy) != E(x, y) within tolerance"));
        }
        if exact && !ec.is_symmetric() {
            return Err(Error::invariant("E(x, cy) is not symmetric"));
        }
        let got = decide_sign(&self.period, &ec)?;
        if got.sign != 1 {
            return Err(Error::invariant("E(x, cy) is not positive definite"));
        }
        Ok(())
    }
}

fn approx_eq(a: &ScalarMatrix, b: &ScalarMatrix, p: &K3Period) -> bool {
    a.entries().iter().zip(b.entries()).all(|(x, y)| p.close(x, y))
}

/// Builds the torus and verifies every invariant before returning it.
pub fn kuga_satake_torus(p: &K3Period) -> Result<PolarizedTorus> {
    let dim = p.ctx.check_dense()?;
    let c = i_action(p)?.left_mult_matrix()?;
    let e_plus = polarization_form(&p.ctx, 1)?;
    let s_plus = symmetric_form(&e_plus, &c)?;
    let choice = decide_sign(p, &s_plus)?;
    let polarization = if choice.sign == 1 { e_plus } else { e_plus.neg() };
    let torus = PolarizedTorus {
        lattice_rank: dim,
        complex_structure: c,
        polarization,
        alpha_sign: choice.sign,
        verified: choice.verified,
        period: p.clone(),
    };
    torus.check()?;
    Ok(torus)
}

/// Polarization type `(d_1 | d_2 | ...)` of an alternating form: its
/// elementary divisors come in equal pairs, one of each pair is reported.
pub fn polarization_type(e: &IntMatrix) -> Result<Vec<BigInt>> {
    if !e.is_square() || e.transpose() != e.neg() {
        return Err(Error::invalid("polarization must be a square alternating matrix"));
    }
    let d = intlin::elementary_divisors(e);
    if d.len() < e.nrows() {
        return Err(Error::Degenerate);
    }
    let mut d: Vec<BigInt> = d.into_iter().map(|x| x.abs()).collect();
    d.sort();
    Ok(d.into_iter().step_by(2).collect())
}

/// `(2^(n-1), 2^(n-2))`: real rank of `C+` and complex dimension of the torus.
pub fn dimension_report(n: usize) -> Result<(BigInt, BigInt)> {
    if n < 2 {
        return Err(Error::invalid("dimension report needs n >= 2"));
    }
    Ok((BigInt::one() << (n - 1), BigInt::one() << (n - 2)))
}

/// Data available without dense matrices (ranks above the guard).
#[derive(Clone, Debug)]
pub struct TorusMetadata {
    pub rank: usize,
    pub real_dim: BigInt,
    pub complex_dim: BigInt,
    pub j: CliffordElement,
}

pub fn torus_metadata(p: &K3Period) -> Result<TorusMetadata> {
    let (real_dim, complex_dim) = dimension_report(p.ctx.rank())?;
    Ok(TorusMetadata { rank: p.ctx.rank(), real_dim, complex_dim, j: complex_structure(p)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: &[i64]) -> Arc<CliffordContext> {
        CliffordContext::from_ints(q).unwrap()
    }

    fn v(x: &[Scalar]) -> Vec<Scalar> {
        x.to_vec()
    }

    #[test]
    fn j_squares_to_minus_one() {
        let c = ctx(&[-1, -1]);
        let p = K3Period::standard(&c).unwrap();
        let j = complex_structure(&p).unwrap();
        assert_eq!(j, CliffordElement::monomial(&c, &[1, 2], Scalar::one()).unwrap());

        let c3 = ctx(&[-1, -1, 1]);
        let f1 = v(&[Scalar::ratio(5, 4), Scalar::zero(), Scalar::ratio(3, 4)]);
        let f2 = v(&[Scalar::zero(), Scalar::one(), Scalar::zero()]);
        let p = K3Period::new(&c3, f1, f2).unwrap();
        let j = complex_structure(&p).unwrap();
        let expected =
            CliffordElement::from_terms(&c3, [(0b011, Scalar::ratio(5, 4)), (0b110, Scalar::ratio(-3, 4))]).unwrap();
        assert_eq!(j, expected);
        let r = p.rotate(&Scalar::ratio(3, 5), &Scalar::ratio(4, 5)).unwrap();
        assert_eq!(complex_structure(&r).unwrap(), j);
    }

    #[test]
    fn invalid_periods_rejected() {
        let c = ctx(&[-1, -1, 1]);
        let e = |k: usize| (0..3).map(|i| Scalar::int((i == k) as i64)).collect::<Vec<_>>();
        assert!(K3Period::new(&c, e(0), e(0)).is_err());
        assert!(K3Period::new(&c, e(0), e(2)).is_err());
        assert!(K3Period::new(&c, e(0), e(1)[..2].to_vec()).is_err());
    }

    #[test]
    fn rank_two_polarization() {
        let c = ctx(&[-1, -1]);
        let e = polarization_form(&c, 1).unwrap();
        assert_eq!(e, IntMatrix::from_i64(&[vec![0, -2], vec![2, 0]]));
        let p = K3Period::standard(&c).unwrap();
        assert_eq!(choose_alpha_sign(&p).unwrap(), AlphaSign { sign: 1, verified: true });
        let t = kuga_satake_torus(&p).unwrap();
        assert_eq!(t.complex_structure.to_integer().unwrap(), IntMatrix::from_i64(&[vec![0, 1], vec![-1, 0]]));
        // E(1, c(1)) = 2
        let c1 = t.complex_structure.column(0);
        let e_row: Vec<Scalar> = t.polarization.row(0).iter().map(Scalar::from).collect();
        let val = e_row.iter().zip(&c1).fold(Scalar::zero(), |acc, (a, b)| acc + a * b);
        assert_eq!(val, Scalar::int(2));
        assert_eq!(polarization_type(&t.polarization).unwrap(), vec![BigInt::from(2)]);
        assert_eq!(t.complex_dim(), 1);
    }

    #[test]
    fn sign_flips_with_orientation() {
        for q in [vec![-1, -1], vec![-1, -1, 1], vec![-1, -1, 1, 2]] {
            let c = ctx(&q);
            let p = K3Period::standard(&c).unwrap();
            let s = choose_alpha_sign(&p).unwrap().sign;
            assert_eq!(s, 1);
            assert_eq!(choose_alpha_sign(&p.conjugate()).unwrap().sign, -s);
        }
    }

    #[test]
    fn rank_three_torus() {
        let c = ctx(&[-1, -1, 1]);
        let p = K3Period::standard(&c).unwrap();
        let t = kuga_satake_torus(&p).unwrap();
        assert_eq!(t.lattice_rank, 4);
        assert_eq!(t.complex_dim(), 2);
        let ty = polarization_type(&t.polarization).unwrap();
        assert_eq!(ty.len(), 2);
        // oracle: SNF of E directly
        let d = intlin::elementary_divisors(&t.polarization);
        assert_eq!(d.len(), 4);
        assert_eq!(ty[0], d[0]);
    }

    #[test]
    fn principal_type_and_dimensions() {
        let e = IntMatrix::from_i64(&[vec![0, 1], vec![-1, 0]]);
        assert_eq!(polarization_type(&e).unwrap(), vec![BigInt::one()]);
        assert_eq!(dimension_report(2).unwrap(), (BigInt::from(2), BigInt::from(1)));
        assert_eq!(dimension_report(3).unwrap(), (BigInt::from(4), BigInt::from(2)));
        assert_eq!(dimension_report(21).unwrap().1, BigInt::from(524288));
    }

    #[test]
    fn guard_blocks_dense_torus() {
        let c = CliffordContext::from_ints(&[-1; 15]).unwrap().with_guard(13);
        let p = K3Period::standard(&c).unwrap();
        assert!(matches!(kuga_satake_torus(&p), Err(Error::GuardExceeded(_))));
        let m = torus_metadata(&p).unwrap();
        assert_eq!(m.complex_dim, BigInt::from(1 << 13));
    }
}

//! Integral LLL reduction (all Gram-Schmidt data kept as exact integers)
//! and integer relation search on real vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `a / b` for `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let num: BigInt = a * 2 + b;
    let den: BigInt = b * 2;
    num.div_floor(&den)
}

/// LLL-reduces the rows of `basis` (which must be linearly independent)
/// with parameter 3/4.
pub fn lll_reduce(basis: &IntMatrix) -> Result<IntMatrix> {
    let n = basis.nrows();
    let mut b = basis.to_rows();
    if n <= 1 {
        return Ok(basis.clone());
    }
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[0] = BigInt::from(1);
    d[1] = dot(&b[0], &b[0]);
    if d[1].is_zero() {
        return Err(Error::RankDeficient("zero vector in LLL input".into()));
    }
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::RankDeficient("LLL input rows are dependent".into()));
                    }
                    d[k + 1] = u;
                }
            }
        }
        reduce(&mut b, &mut lam, &d, k, k - 1);
        let l = lam[k][k - 1].clone();
        if &d[k + 1] * &d[k - 1] * 4 < &d[k] * &d[k] * 3 - &l * &l * 4 {
            // swap k and k-1
            b.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = std::mem::take(&mut lam[k][j]);
                lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
            }
            let bb = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
                lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k + 1];
            }
            d[k] = bb;
            k = (k - 1).max(1);
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                reduce(&mut b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    Ok(IntMatrix::from_fn(n, basis.ncols(), |i, j| b[i][j].clone()))
}

fn reduce(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let twice: BigInt = &lam[k][l] * 2;
    if twice.abs() <= d[l + 1] {
        return;
    }
    let q = round_div(&lam[k][l], &d[l + 1]);
    let bl = b[l].clone();
    for (x, y) in b[k].iter_mut().zip(&bl) {
        *x -= &q * y;
    }
    lam[k][l] -= &q * &d[l + 1];
    for i in 0..l {
        let t = &q * &lam[l][i];
        lam[k][i] -= t;
    }
}

/// Integer vectors `x` with `sum_i x_i w[i][j] ~ 0` for every column `j`.
///
/// Rows `[e_i | round(N w_i)]` with `N = 2^(precision - 16)` are reduced; a
/// reduced row is accepted when its coefficient part has max-norm at most
/// `quality` and its residual part is at most `quality` as well. The result
/// is a heuristic candidate set, never a proof.
pub fn integer_relations(w: &[Vec<BigFloat>], precision: u32, quality: &BigInt) -> Result<IntMatrix> {
    let n = w.len();
    let m = w.first().map_or(0, Vec::len);
    let shift = precision.saturating_sub(16) as i64;
    let scale = BigFloat::from_parts(BigInt::from(1), shift, precision + 8);
    let basis = IntMatrix::from_fn(n, n + m, |i, j| {
        if j < n {
            BigInt::from((i == j) as i64)
        } else {
            let v = w[i][j - n].mul(&scale).to_rational();
            v.round().to_integer()
        }
    });
    let reduced = lll_reduce(&basis)?;
    let mut out = IntMatrix::empty(n);
    for row in reduced.rows_iter() {
        let coeffs = &row[..n];
        let resid = &row[n..];
        if coeffs.iter().all(|x| x.abs() <= *quality) && resid.iter().all(|x| x.abs() <= *quality) {
            out.push_row(coeffs.to_vec())?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_textbook_basis() {
        let b = IntMatrix::from_i64(&[vec![1, 1, 1], vec![-1, 0, 2], vec![3, 5, 6]]);
        let r = lll_reduce(&b).unwrap();
        assert_eq!(r, IntMatrix::from_i64(&[vec![0, 1, 0], vec![1, 0, 1], vec![-1, 0, 2]]));
        assert_eq!(crate::intlin::determinant(&r).unwrap().abs(), crate::intlin::determinant(&b).unwrap().abs());
    }

    #[test]
    fn finds_relation_with_sqrt2() {
        // x0 + sqrt2 x1 + x2 = 0 has the single primitive solution (1, 0, -1)
        let prec = 200;
        let s2 = BigFloat::from_int(&BigInt::from(2), prec).sqrt().unwrap();
        let one = BigFloat::from_int(&BigInt::from(1), prec);
        let w = vec![vec![one.clone()], vec![s2], vec![one]];
        let rel = integer_relations(&w, prec, &BigInt::from(1 << 20)).unwrap();
        assert_eq!(rel.nrows(), 1);
        let r = rel.row(0);
        assert!(r[1].is_zero() && (&r[0] + &r[2]).is_zero());
    }
}

//! Exact linear algebra over the integers: Hermite and Smith normal forms,
//! integer kernels, saturation and determinants.
//!
//! Everything works on arbitrary-precision integers; no modular shortcuts.
//! Lattices are always given by row bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// `(g, s, t)` with `g = gcd(a, b) >= 0` and `s a + t b = g`.
pub fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
        let nt = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

type Rows = Vec<Vec<BigInt>>;

fn from_rows(rows: Rows, ncols: usize) -> IntMatrix {
    let nrows = rows.len();
    IntMatrix::from_fn(nrows, ncols, |i, j| rows[i][j].clone())
}

fn axpy(target: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    // target -= q * src
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

/// Replaces `(x, y)` by `(s x + t y, u x + v y)`.
fn combine(rows: &mut Rows, i: usize, k: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
    let n = rows[i].len();
    for c in 0..n {
        let x = &rows[i][c];
        let y = &rows[k][c];
        if x.is_zero() && y.is_zero() {
            continue;
        }
        let nx = s * x + t * y;
        let ny = u * x + v * y;
        rows[i][c] = nx;
        rows[k][c] = ny;
    }
}

/// Row-style Hermite normal form `H = U M` with `U` unimodular.
#[derive(Clone, Debug)]
pub struct Hermite {
    pub h: IntMatrix,
    /// Present when requested.
    pub u: Option<IntMatrix>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn hermite(m: &IntMatrix, track: bool) -> Hermite {
    let nrows = m.nrows();
    let ncols = m.ncols();
    let mut a: Rows = m.to_rows();
    let mut u: Rows = if track { IntMatrix::identity(nrows).to_rows() } else { Vec::new() };
    let mut r = 0;
    let mut pivots = Vec::new();
    for j in 0..ncols {
        if r == nrows {
            break;
        }
        for i in r + 1..nrows {
            if a[i][j].is_zero() {
                continue;
            }
            if a[r][j].is_zero() {
                a.swap(r, i);
                if track {
                    u.swap(r, i);
                }
                continue;
            }
            let (p, b) = (a[r][j].clone(), a[i][j].clone());
            if b.is_multiple_of(&p) {
                let q = &b / &p;
                let (top, bottom) = a.split_at_mut(i);
                axpy(&mut bottom[0], &q, &top[r]);
                if track {
                    let (top, bottom) = u.split_at_mut(i);
                    axpy(&mut bottom[0], &q, &top[r]);
                }
            } else {
                let (g, s, t) = xgcd(&p, &b);
                let uu = -(&b / &g);
                let vv = &p / &g;
                combine(&mut a, r, i, &s, &t, &uu, &vv);
                if track {
                    combine(&mut u, r, i, &s, &t, &uu, &vv);
                }
            }
        }
        if a[r][j].is_zero() {
            continue;
        }
        if a[r][j].is_negative() {
            a[r].iter_mut().for_each(|x| *x = -&*x);
            if track {
                u[r].iter_mut().for_each(|x| *x = -&*x);
            }
        }
        let p = a[r][j].clone();
        for k in 0..r {
            let q = a[k][j].div_floor(&p);
            if q.is_zero() {
                continue;
            }
            let (top, bottom) = a.split_at_mut(r);
            axpy(&mut top[k], &q, &bottom[0]);
            if track {
                let (top, bottom) = u.split_at_mut(r);
                axpy(&mut top[k], &q, &bottom[0]);
            }
        }
        pivots.push(j);
        r += 1;
    }
    Hermite { h: from_rows(a, ncols), u: track.then(|| from_rows(u, nrows)), rank: r, pivots }
}

/// Canonical basis (nonzero HNF rows) of the lattice spanned by the rows.
pub fn canonical_basis(m: &IntMatrix) -> IntMatrix {
    let h = hermite(m, false);
    let idx: Vec<usize> = (0..h.rank).collect();
    h.h.select_rows(&idx)
}

pub fn rank(m: &IntMatrix) -> usize {
    hermite(m, false).rank
}

/// Saturated basis of `{x : x M = 0}`, in Hermite normal form.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let h = hermite(m, true);
    let u = h.u.expect("tracked");
    let idx: Vec<usize> = (h.rank..m.nrows()).collect();
    canonical_basis(&u.select_rows(&idx))
}

/// Saturated basis of `{x : M x = 0}` as rows.
pub fn right_kernel(m: &IntMatrix) -> IntMatrix {
    left_kernel(&m.transpose())
}

/// Saturation `span_Q(B) ∩ Z^n` of the row lattice, in Hermite normal form.
pub fn saturate(basis: &IntMatrix) -> IntMatrix {
    let n = basis.ncols();
    if basis.nrows() == 0 {
        return IntMatrix::empty(n);
    }
    let k = right_kernel(basis);
    if k.nrows() == 0 {
        return IntMatrix::identity(n);
    }
    right_kernel(&k)
}

/// Integer coordinates of `v` in the row basis, if `v` lies in the lattice.
pub fn lattice_coordinates(basis: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    rational_coordinates(basis, v).and_then(|c| c.into_iter().map(|x| x.is_integer().then(|| x.to_integer())).collect())
}

/// Rational coordinates of `v` in the span of the rows (rows independent).
pub fn rational_coordinates(basis: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigRational>> {
    if v.len() != basis.ncols() {
        return None;
    }
    let h = hermite(basis, true);
    let u = h.u.expect("tracked");
    let mut residual: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let mut y = vec![BigRational::zero(); h.rank];
    for (i, &c) in h.pivots.iter().enumerate() {
        let coef = &residual[c] / BigRational::from_integer(h.h[(i, c)].clone());
        for (j, r) in residual.iter_mut().enumerate() {
            let e = &h.h[(i, j)];
            if !e.is_zero() {
                *r -= &coef * BigRational::from_integer(e.clone());
            }
        }
        y[i] = coef;
    }
    if residual.iter().any(|r| !r.is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); basis.nrows()];
    for (i, yi) in y.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        for (k, xk) in x.iter_mut().enumerate() {
            let e = &u[(i, k)];
            if !e.is_zero() {
                *xk += yi * BigRational::from_integer(e.clone());
            }
        }
    }
    Some(x)
}

/// Smith normal form `U M V = D`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Diagonal entries of `D` (including trailing zeros up to `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.nrows().min(self.d.ncols())).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct SnfWork {
    a: Rows,
    u: Option<Rows>,
    v: Option<Rows>,
}

impl SnfWork {
    fn row_combine(&mut self, i: usize, k: usize, s: &BigInt, t: &BigInt, uu: &BigInt, vv: &BigInt) {
        combine(&mut self.a, i, k, s, t, uu, vv);
        if let Some(u) = self.u.as_mut() {
            combine(u, i, k, s, t, uu, vv);
        }
    }

    fn col_combine(&mut self, i: usize, k: usize, s: &BigInt, t: &BigInt, uu: &BigInt, vv: &BigInt) {
        // columns: (c_i, c_k) <- (s c_i + t c_k, uu c_i + vv c_k)
        for row in self.a.iter_mut() {
            let (x, y) = (row[i].clone(), row[k].clone());
            if x.is_zero() && y.is_zero() {
                continue;
            }
            row[i] = s * &x + t * &y;
            row[k] = uu * &x + vv * &y;
        }
        if let Some(v) = self.v.as_mut() {
            for row in v.iter_mut() {
                let (x, y) = (row[i].clone(), row[k].clone());
                if x.is_zero() && y.is_zero() {
                    continue;
                }
                row[i] = s * &x + t * &y;
                row[k] = uu * &x + vv * &y;
            }
        }
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        self.a.swap(i, k);
        if let Some(u) = self.u.as_mut() {
            u.swap(i, k);
        }
    }

    fn swap_cols(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, k);
        }
        if let Some(v) = self.v.as_mut() {
            for row in v.iter_mut() {
                row.swap(i, k);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a[i].iter_mut().for_each(|x| *x = -&*x);
        if let Some(u) = self.u.as_mut() {
            u[i].iter_mut().for_each(|x| *x = -&*x);
        }
    }
}

/// Nearest integer to `a / b`.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    let twice: BigInt = &r * 2;
    // r has the sign of b, so moving to the other side is always q + 1
    if twice.magnitude() > b.magnitude() {
        q + 1
    } else {
        q
    }
}

/// Row index in `t..nr` whose entry in column `t` is nonzero of least size.
fn min_row_below(a: &Rows, t: usize, nr: usize) -> usize {
    (t..nr)
        .filter(|&i| !a[i][t].is_zero())
        .min_by(|&x, &y| a[x][t].magnitude().cmp(a[y][t].magnitude()))
        .expect("nonzero entry")
}

fn snf_core(m: &IntMatrix, track: bool) -> SnfWork {
    let nr = m.nrows();
    let nc = m.ncols();
    let mut w = SnfWork {
        a: m.to_rows(),
        u: track.then(|| IntMatrix::identity(nr).to_rows()),
        v: track.then(|| IntMatrix::identity(nc).to_rows()),
    };
    let one = BigInt::one();
    let zero = BigInt::zero();
    for t in 0..nr.min(nc) {
        // pivot: smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                let x = &w.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.magnitude() < w.a[bi][bj].magnitude()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            // Euclidean steps with nearest quotients keep entries small
            loop {
                let mut done = true;
                for i in t + 1..nr {
                    if w.a[i][t].is_zero() {
                        continue;
                    }
                    let q = nearest_quotient(&w.a[i][t], &w.a[t][t]);
                    w.row_combine(t, i, &one, &zero, &-q, &one);
                    if !w.a[i][t].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
                let i = min_row_below(&w.a, t, nr);
                w.swap_rows(t, i);
            }
            loop {
                let mut done = true;
                for j in t + 1..nc {
                    if w.a[t][j].is_zero() {
                        continue;
                    }
                    let q = nearest_quotient(&w.a[t][j], &w.a[t][t]);
                    w.col_combine(t, j, &one, &zero, &-q, &one);
                    if !w.a[t][j].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
                let j = (t..nc)
                    .filter(|&j| !w.a[t][j].is_zero())
                    .min_by(|&x, &y| w.a[t][x].magnitude().cmp(w.a[t][y].magnitude()))
                    .expect("nonzero");
                w.swap_cols(t, j);
            }
            if (t + 1..nr).any(|i| !w.a[i][t].is_zero()) {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = w.a[t][t].clone();
            let bad = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| !w.a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    // row t += row i, then continue reducing
                    w.row_combine(t, i, &one, &one, &zero, &one);
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    w
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let w = snf_core(m, true);
    let nr = m.nrows();
    let nc = m.ncols();
    Snf { d: from_rows(w.a, nc), u: from_rows(w.u.expect("tracked"), nr), v: from_rows(w.v.expect("tracked"), nc) }
}

/// Nonzero diagonal entries of the Smith form, in divisibility order.
pub fn elementary_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let w = snf_core(m, false);
    (0..m.nrows().min(m.ncols())).map(|i| w.a[i][i].clone()).filter(|x| !x.is_zero()).collect()
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let n = m.nrows();
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: n, found: m.ncols() });
    }
    let aug = m.hstack(&IntMatrix::identity(n))?;
    let h = hermite(&aug, false);
    if h.rank < n || (0..n).any(|i| !h.h[(i, i)].is_one()) || h.pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
        return Err(Error::invalid("matrix is not unimodular"));
    }
    Ok(h.h.submatrix(0..n, n..2 * n))
}

/// Multiplies every column of a rational matrix by the lcm of its
/// denominators. The integer left kernel is unchanged.
pub fn clear_column_denominators(rows: &[Vec<BigRational>]) -> IntMatrix {
    let nr = rows.len();
    let nc = rows.first().map_or(0, Vec::len);
    let mut out = IntMatrix::zeros(nr, nc);
    for j in 0..nc {
        let l = rows.iter().fold(BigInt::one(), |acc, r| acc.lcm(r[j].denom()));
        for i in 0..nr {
            out[(i, j)] = (&rows[i][j] * BigRational::from_integer(l.clone())).to_integer();
        }
    }
    out
}

/// Index `[sat(L) : L]` of a lattice in its saturation.
pub fn saturation_index(basis: &IntMatrix) -> BigInt {
    elementary_divisors(basis).iter().fold(BigInt::one(), |acc, d| acc * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::int_vec;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), int_vec(&[1, 6]));
        let s = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        let s = smith_normal_form(&m(&[vec![-1, 1], vec![1, -1]]));
        assert_eq!(s.diagonal(), int_vec(&[1, 0]));
    }

    #[test]
    fn snf_transform_identity() {
        let a = m(&[vec![4, 6, 2], vec![8, -2, 0], vec![3, 3, 9]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.u.matmul(&a).unwrap().matmul(&s.v).unwrap(), s.d);
        assert_eq!(determinant(&s.u).unwrap().magnitude(), &BigInt::one().magnitude().clone());
    }

    #[test]
    fn kernels() {
        // {x : x M = 0} for M = [[1],[1]] is span (1,-1)
        let k = left_kernel(&m(&[vec![1], vec![1]]));
        assert_eq!(k, m(&[vec![1, -1]]));
        // right kernel of [[2, 4]] is saturated: span (2, -1)
        let k = right_kernel(&m(&[vec![2, 4]]));
        assert_eq!(k, m(&[vec![2, -1]]));
        // nothing to kill
        assert_eq!(right_kernel(&IntMatrix::identity(2)).nrows(), 0);
    }

    #[test]
    fn saturation() {
        let s = saturate(&m(&[vec![2, 4, 6]]));
        assert_eq!(s, m(&[vec![1, 2, 3]]));
        assert_eq!(saturation_index(&m(&[vec![2, 4, 6]])), BigInt::from(2));
        let s = saturate(&m(&[vec![1, 1], vec![1, -1]]));
        assert_eq!(s, IntMatrix::identity(2));
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&m(&[vec![0, -1], vec![-1, 0]])).unwrap(), BigInt::from(-1));
        assert_eq!(determinant(&m(&[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]])).unwrap(), BigInt::from(4));
        assert_eq!(determinant(&m(&[vec![1, 2], vec![2, 4]])).unwrap(), BigInt::zero());
    }

    #[test]
    fn coordinates() {
        let b = m(&[vec![1, 1], vec![1, -1]]);
        assert_eq!(lattice_coordinates(&b, &int_vec(&[2, 0])), Some(int_vec(&[1, 1])));
        assert_eq!(lattice_coordinates(&b, &int_vec(&[1, 0])), None);
        let inv = unimodular_inverse(&m(&[vec![2, 1], vec![1, 1]])).unwrap();
        assert_eq!(inv, m(&[vec![1, -1], vec![-1, 2]]));
        assert!(unimodular_inverse(&m(&[vec![2, 0], vec![0, 1]])).is_err());
    }
}

//! Exact linear algebra over a field, and determinants over polynomial rings.

use std::collections::HashMap;

use crate::arith::Field;
use crate::poly::{MultiPoly, UniPoly};

pub type Matrix<E> = Vec<Vec<E>>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else { continue };
        m.swap(r, p);
        let inv = f.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(x, &f.mul(&factor, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut a = m.clone();
    rref(f, &mut a).len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<F: Field>(f: &F, m: &Matrix<F::Elem>, cols: usize) -> Vec<Vec<F::Elem>> {
    let mut a = m.clone();
    let pivots = rref(f, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&a[r][fc]);
            }
            v
        })
        .collect()
}

pub fn det<F: Field>(f: &F, m: &Matrix<F::Elem>) -> F::Elem {
    let n = m.len();
    let mut a = m.clone();
    let mut d = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !f.is_zero(&a[i][c])) else { return f.zero() };
        if p != c {
            a.swap(p, c);
            d = f.neg(&d);
        }
        d = f.mul(&d, &a[c][c]);
        let inv = f.inv(&a[c][c]).expect("nonzero pivot");
        for i in c + 1..n {
            if f.is_zero(&a[i][c]) {
                continue;
            }
            let factor = f.mul(&a[i][c], &inv);
            for j in c..n {
                let t = f.mul(&factor, &a[c][j]);
                a[i][j] = f.sub(&a[i][j], &t);
            }
        }
    }
    d
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = m.len();
    let mut a: Matrix<F::Elem> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            r
        })
        .collect();
    let piv = rref(f, &mut a);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec<F: Field>(f: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    m.iter().map(|row| row.iter().zip(v).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))).collect()
}

pub fn mat_mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols).map(|j| row.iter().zip(b).fold(f.zero(), |acc, (x, br)| f.add(&acc, &f.mul(x, &br[j])))).collect()
        })
        .collect()
}

/// Sylvester matrix of two coefficient lists (low degree first, leading entries last).
pub fn sylvester<T: Clone>(a: &[T], b: &[T], zero: &T) -> Matrix<T> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut out = vec![vec![zero.clone(); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            out[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            out[n + i][i + j] = c.clone();
        }
    }
    out
}

/// Fraction-free (Bareiss) determinant over `F[x]`.
pub fn det_uni<F: Field>(f: &F, m: &Matrix<UniPoly<F>>) -> UniPoly<F> {
    let n = m.len();
    if n == 0 {
        return UniPoly::one(f);
    }
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = UniPoly::one(f);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return UniPoly::zero(f) };
            a.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

/// Determinant over a multivariate ring by Laplace expansion along rows,
/// memoized on the set of remaining columns. Sizes here stay below ~12.
pub fn det_multi<F: Field>(m: &Matrix<MultiPoly<F>>) -> MultiPoly<F> {
    let n = m.len();
    assert!(n < 64);
    let ring = m[0][0].ring().clone();
    let mut memo: HashMap<u64, MultiPoly<F>> = HashMap::new();
    fn rec<F: Field>(
        m: &Matrix<MultiPoly<F>>,
        row: usize,
        cols: u64,
        memo: &mut HashMap<u64, MultiPoly<F>>,
        ring: &std::sync::Arc<crate::poly::PolyRing<F>>,
    ) -> MultiPoly<F> {
        let n = m.len();
        if row == n {
            return MultiPoly::one(ring);
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = MultiPoly::zero(ring);
        let mut parity = false;
        for c in 0..n {
            if cols & (1 << c) == 0 {
                continue;
            }
            if !m[row][c].is_zero() {
                let minor = rec(m, row + 1, cols & !(1 << c), memo, ring);
                let t = m[row][c].mul(&minor);
                acc = if parity { acc.sub(&t) } else { acc.add(&t) };
            }
            parity = !parity;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    rec(m, 0, (1u64 << n) - 1, &mut memo, &ring)
}

/// `Res_y(a, b)` for `a, b` given as coefficient lists in `y` over `F[x]`.
pub fn resultant_uni<F: Field>(f: &F, a: &[UniPoly<F>], b: &[UniPoly<F>]) -> UniPoly<F> {
    if a.len() < 2 && b.len() < 2 {
        return UniPoly::one(f);
    }
    let s = sylvester(a, b, &UniPoly::zero(f));
    det_uni(f, &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{PrimeField, Rational, Rationals};

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&Rationals, &m), 2);
        let ns = nullspace(&Rationals, &m, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&Rationals, &m, &ns[0]).iter().all(|x| x.is_zero()));
        assert!(det(&Rationals, &m).is_zero());
        assert_eq!(det(&Rationals, &qm(&[&[2, 1], &[7, 4]])), Rational::from_int(1));
    }

    #[test]
    fn inverse_round_trip() {
        let f = PrimeField::new(11).unwrap();
        let m = vec![vec![1, 2, 0], vec![0, 1, 5], vec![3, 0, 1]];
        let inv = inverse(&f, &m).unwrap();
        let id = mat_mul(&f, &m, &inv);
        assert_eq!(id, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(inverse(&f, &vec![vec![1, 2], vec![2, 4]]).is_none());
    }

    #[test]
    fn resultant_detects_common_root() {
        let f = Rationals;
        // a = y^2 - x, b = y - x  => Res = x^2 - x
        let a = vec![UniPoly::from_i64(&f, &[0, -1]), UniPoly::zero(&f), UniPoly::one(&f)];
        let b = vec![UniPoly::from_i64(&f, &[0, -1]), UniPoly::one(&f)];
        let r = resultant_uni(&f, &a, &b);
        assert_eq!(r, UniPoly::from_i64(&f, &[0, -1, 1]));
    }

    #[test]
    fn bareiss_matches_laplace() {
        let f = PrimeField::new(13).unwrap();
        let ring = crate::poly::PolyRing::new(&f, &["x"]);
        let entries = [[3i64, 1, 4], [1, 5, 9], [2, 6, 5]];
        let mu: Matrix<UniPoly<PrimeField>> =
            entries.iter().map(|r| r.iter().map(|&c| UniPoly::from_i64(&f, &[c, 1])).collect()).collect();
        let mm: Matrix<MultiPoly<PrimeField>> = mu
            .iter()
            .map(|r| r.iter().map(|p| MultiPoly::from_uni(&ring, 0, p)).collect())
            .collect();
        let a = det_uni(&f, &mu);
        let b = det_multi(&mm).to_uni(0).unwrap();
        assert_eq!(a, b);
    }
}

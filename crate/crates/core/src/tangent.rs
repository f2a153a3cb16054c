//! Cotangent-rank smoothness criteria at a point of the aligned Hilbert
//! scheme given by a normalized system, a profile and distinct marked points.
//!
//! Rows of `M/M^2` (Grassmann chart) for generator `t`, point `a_j` and
//! order `s` have `u_i` entry `D^(s-1) q_{t,i}(a_j) + a_j D^(s) q_{t,i}(a_j)`
//! and `v_i` entry `D^(s) q_{t,i}(a_j)`, `D^(s)` the Hasse derivative.

use crate::arith::Field;
use crate::chart::{LinearizedEquation, NormalizedSystem};
use crate::hilbert::Profile;
use crate::linalg;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TangentError {
    #[error("point not on Hilbert scheme: d vanishes to order {e} < {k} at marked point {index}")]
    NotOnScheme { index: usize, e: usize, k: usize },
    #[error("marked points {0} and {1} coincide; merge the profile first")]
    Coincident(usize, usize),
    #[error("base point b equals marked point {0}")]
    BaseOnMarked(usize),
    #[error("{points} marked points for a profile of length {parts}")]
    Shape { points: usize, parts: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultFlags {
    /// Order of vanishing of `d` at each marked point.
    pub e: Vec<usize>,
    pub h: Vec<usize>,
}

impl MultFlags {
    pub fn total(&self) -> usize {
        self.h.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    Grassmann,
    Star,
}

/// Coordinates in `(u_1.., v_1..)` (Grassmann) or `(u_1..)` (star).
#[derive(Debug, Clone, PartialEq)]
pub struct CotangentVector<F: Field> {
    pub kind: ChartKind,
    pub coords: Vec<F::Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothnessVerdict {
    pub kind: ChartKind,
    pub smooth_of_expected_dim: bool,
    pub rank: usize,
    pub columns_expected: usize,
    pub expected_dim: i64,
}

/// `h_j = k_j - 1` when `e_j = k_j` and the marked point can move, i.e.
/// `k_j` is a unit in the field; `h_j = k_j` otherwise.
pub fn mult_flags<F: Field>(norm: &NormalizedSystem<F>, profile: &Profile, points: &[F::Elem]) -> Result<MultFlags, TangentError> {
    check_points(profile, points)?;
    let f = norm.d.field();
    let p = f.characteristic();
    let mut e = Vec::with_capacity(points.len());
    let mut h = Vec::with_capacity(points.len());
    for (index, (a, &k)) in points.iter().zip(profile.parts()).enumerate() {
        let ej = norm.d.order_at(a).expect("d is nonzero");
        if ej < k {
            return Err(TangentError::NotOnScheme { index, e: ej, k });
        }
        let unit = p == 0 || k as u64 % p != 0;
        e.push(ej);
        h.push(if ej == k && unit { k - 1 } else { k });
    }
    Ok(MultFlags { e, h })
}

fn check_points<E: PartialEq>(profile: &Profile, points: &[E]) -> Result<(), TangentError> {
    if points.len() != profile.r() {
        return Err(TangentError::Shape { points: points.len(), parts: profile.r() });
    }
    for s in 0..points.len() {
        for t in s + 1..points.len() {
            if points[s] == points[t] {
                return Err(TangentError::Coincident(s, t));
            }
        }
    }
    Ok(())
}

/// `(t, j, s)` triples contributing rows, in emission order.
fn row_index(c: usize, flags: &MultFlags, profile: &Profile) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for t in 0..c {
        for (j, &k) in profile.parts().iter().enumerate() {
            let top = if t == 0 { flags.h[j] } else { k };
            out.extend((0..top).map(|s| (t, j, s)));
        }
    }
    out
}

pub fn grassmann_rows<F: Field>(
    lin: &[LinearizedEquation<F>],
    flags: &MultFlags,
    profile: &Profile,
    points: &[F::Elem],
) -> Result<Vec<CotangentVector<F>>, TangentError> {
    check_points(profile, points)?;
    let f = lin[0].p.field().clone();
    let m = lin[0].q.len();
    Ok(row_index(lin.len(), flags, profile)
        .into_iter()
        .map(|(t, j, s)| {
            let a = &points[j];
            let q = &lin[t].q;
            let mut coords = Vec::with_capacity(2 * m);
            for qi in q {
                let lower = qi.hasse(s as i64 - 1).eval(a);
                coords.push(f.add(&lower, &f.mul(a, &qi.hasse(s as i64).eval(a))));
            }
            coords.extend(q.iter().map(|qi| qi.hasse(s as i64).eval(a)));
            CotangentVector { kind: ChartKind::Grassmann, coords }
        })
        .collect())
}

fn verdict(kind: ChartKind, rank: usize, columns_expected: usize, expected_dim: i64) -> SmoothnessVerdict {
    SmoothnessVerdict { kind, smooth_of_expected_dim: rank == columns_expected, rank, columns_expected, expected_dim }
}

fn counts<F: Field>(norm: &NormalizedSystem<F>, profile: &Profile, flags: &MultFlags) -> (usize, usize) {
    let c = norm.generators.len();
    (c, flags.total() + (c - 1) * profile.k())
}

/// Grassmann-chart verdict together with the rows it was computed from.
pub fn smooth_at_with_rows<F: Field>(
    norm: &NormalizedSystem<F>,
    profile: &Profile,
    points: &[F::Elem],
) -> Result<(SmoothnessVerdict, Vec<CotangentVector<F>>), TangentError> {
    let flags = mult_flags(norm, profile, points)?;
    let lin = norm.linearized();
    let rows = grassmann_rows(&lin, &flags, profile, points)?;
    let f = norm.d.field();
    let mat: Vec<Vec<F::Elem>> = rows.iter().map(|r| r.coords.clone()).collect();
    let rank = linalg::rank(f, &mat);
    let (c, cols) = counts(norm, profile, &flags);
    let n_minus_1 = lin[0].q.len() as i64;
    let dim = 2 * n_minus_1 + profile.r() as i64 - (c * profile.k()) as i64;
    Ok((verdict(ChartKind::Grassmann, rank, cols, dim), rows))
}

pub fn smooth_at<F: Field>(norm: &NormalizedSystem<F>, profile: &Profile, points: &[F::Elem]) -> Result<SmoothnessVerdict, TangentError> {
    smooth_at_with_rows(norm, profile, points).map(|(v, _)| v)
}

/// Star-chart rows: `u_i` entry `(a_j - b) D^(s) q_{t,i}(a_j) + D^(s-1) q_{t,i}(a_j)`.
pub fn grassloc_rows<F: Field>(
    lin: &[LinearizedEquation<F>],
    flags: &MultFlags,
    profile: &Profile,
    points: &[F::Elem],
    b: &F::Elem,
) -> Result<Vec<CotangentVector<F>>, TangentError> {
    check_points(profile, points)?;
    let f = lin[0].p.field().clone();
    Ok(row_index(lin.len(), flags, profile)
        .into_iter()
        .map(|(t, j, s)| {
            let a = &points[j];
            let amb = f.sub(a, b);
            let coords = lin[t]
                .q
                .iter()
                .map(|qi| f.add(&f.mul(&amb, &qi.hasse(s as i64).eval(a)), &qi.hasse(s as i64 - 1).eval(a)))
                .collect();
            CotangentVector { kind: ChartKind::Star, coords }
        })
        .collect())
}

/// The `(N-1) x ((c-1)k + sum h_j)` matrix of values `D^(s) q_{t,i}(a_j)`.
pub fn fiber_matrix<F: Field>(
    lin: &[LinearizedEquation<F>],
    flags: &MultFlags,
    profile: &Profile,
    points: &[F::Elem],
) -> Vec<Vec<F::Elem>> {
    let idx = row_index(lin.len(), flags, profile);
    let m = lin[0].q.len();
    (0..m).map(|i| idx.iter().map(|&(t, j, s)| lin[t].q[i].hasse(s as i64).eval(&points[j])).collect()).collect()
}

/// Star-chart verdict: full column rank of [`fiber_matrix`].
pub fn smooth_fiber_at_with_matrix<F: Field>(
    norm: &NormalizedSystem<F>,
    profile: &Profile,
    points: &[F::Elem],
    b: &F::Elem,
) -> Result<(SmoothnessVerdict, Vec<Vec<F::Elem>>), TangentError> {
    if let Some(j) = points.iter().position(|a| a == b) {
        return Err(TangentError::BaseOnMarked(j));
    }
    let flags = mult_flags(norm, profile, points)?;
    let lin = norm.linearized();
    let mat = fiber_matrix(&lin, &flags, profile, points);
    let f = norm.d.field();
    let (c, cols) = counts(norm, profile, &flags);
    let rank = if cols == 0 { 0 } else { linalg::rank(f, &mat) };
    let dim = lin[0].q.len() as i64 + profile.r() as i64 - (c * profile.k()) as i64;
    Ok((verdict(ChartKind::Star, rank, cols, dim), mat))
}

pub fn smooth_fiber_at<F: Field>(
    norm: &NormalizedSystem<F>,
    profile: &Profile,
    points: &[F::Elem],
    b: &F::Elem,
) -> Result<SmoothnessVerdict, TangentError> {
    smooth_fiber_at_with_matrix(norm, profile, points, b).map(|(v, _)| v)
}

/// Merges coincident marked points (adding their parts) until all are
/// distinct, then runs [`smooth_at`]. Faithful to the unmerged verdict in
/// characteristic 0 or above the merged parts; over F_p with p dividing a
/// merged part the two can differ.
pub fn merge_then_test<F: Field>(
    norm: &NormalizedSystem<F>,
    profile: &Profile,
    points: &[F::Elem],
) -> Result<SmoothnessVerdict, TangentError> {
    let (profile, points) = merge_coincident(profile, points)?;
    smooth_at(norm, &profile, &points)
}

pub fn merge_coincident<E: Clone + PartialEq>(profile: &Profile, points: &[E]) -> Result<(Profile, Vec<E>), TangentError> {
    if points.len() != profile.r() {
        return Err(TangentError::Shape { points: points.len(), parts: profile.r() });
    }
    let mut prof = profile.clone();
    let mut pts = points.to_vec();
    while let Some((s, t)) = (0..pts.len()).flat_map(|s| (s + 1..pts.len()).map(move |t| (s, t))).find(|&(s, t)| pts[s] == pts[t]) {
        prof = prof.merged(s, t);
        pts.remove(t);
    }
    Ok((prof, pts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Rational, Rationals};
    use crate::chart::{ambient_ring, normalize_generators};
    use crate::poly::parse_poly;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn system(n: usize, gens: &[&str], marked: &[i64]) -> NormalizedSystem<Rationals> {
        let r = ambient_ring(&Rationals, n);
        let g: Vec<_> = gens.iter().map(|t| parse_poly(&r, t).unwrap()).collect();
        let m: Vec<Rational> = marked.iter().map(|&a| q(a)).collect();
        normalize_generators(&g, &m, 0).unwrap()
    }

    fn prof(p: &[usize]) -> Profile {
        Profile::new(p.to_vec()).unwrap()
    }

    #[test]
    fn flag_examples() {
        let s = system(2, &["z^2 - x1"], &[0]);
        assert_eq!(mult_flags(&s, &prof(&[2]), &[q(0)]).unwrap(), MultFlags { e: vec![2], h: vec![1] });
        let s = system(2, &["z^3 - x1"], &[0]);
        assert_eq!(mult_flags(&s, &prof(&[2]), &[q(0)]).unwrap().h, vec![2]);
        let s = system(2, &["z^2 - z - x1"], &[0, 1]);
        assert_eq!(mult_flags(&s, &prof(&[1, 1]), &[q(0), q(1)]).unwrap(), MultFlags { e: vec![1, 1], h: vec![0, 0] });
        assert!(matches!(mult_flags(&s, &prof(&[2]), &[q(0)]), Err(TangentError::NotOnScheme { .. })));
    }

    #[test]
    fn twisted_cubic_rows() {
        let s = system(3, &["x1 - z^2", "x2 - z^3"], &[0]);
        let (v, rows) = smooth_at_with_rows(&s, &prof(&[2]), &[q(0)]).unwrap();
        let coords: Vec<Vec<Rational>> = rows.iter().map(|r| r.coords.clone()).collect();
        // basis u1,u2,v1,v2
        assert_eq!(
            coords,
            vec![
                vec![q(0), q(0), q(-1), q(0)],
                vec![q(0), q(0), q(0), q(1)],
                vec![q(0), q(1), q(-1), q(0)],
            ]
        );
        assert_eq!((v.rank, v.columns_expected, v.expected_dim), (3, 3, 1));
        assert!(v.smooth_of_expected_dim);
    }

    #[test]
    fn chord_and_parabola() {
        // twisted cubic moved so that L = {x = 0} is the chord through z = 0, 1
        let s = system(3, &["x1 - z^2 + z", "x2 - z^3 + z"], &[0, 1]);
        let v = smooth_at(&s, &prof(&[1, 1]), &[q(0), q(1)]).unwrap();
        assert!(v.smooth_of_expected_dim);
        assert_eq!(v.expected_dim, 2);
        let p = system(2, &["x1 - z^2"], &[0]);
        let v = smooth_at(&p, &prof(&[2]), &[q(0)]).unwrap();
        assert!(v.smooth_of_expected_dim && v.expected_dim == 1 && v.rank == 1);
    }

    #[test]
    fn star_examples() {
        let p = system(2, &["x1 - z^2"], &[0]);
        let (v, m) = smooth_fiber_at_with_matrix(&p, &prof(&[2]), &[q(0)], &q(1)).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].len(), 1);
        assert!(v.smooth_of_expected_dim);
        assert_eq!(v.expected_dim, 0);
        let s = system(3, &["x1 - z^2", "x2 - z^3"], &[0]);
        let (v, m) = smooth_fiber_at_with_matrix(&s, &prof(&[2]), &[q(0)], &q(1)).unwrap();
        assert_eq!((m.len(), m[0].len()), (2, 3));
        assert!(!v.smooth_of_expected_dim);
        assert_eq!(v.expected_dim, -1);
        assert!(matches!(smooth_fiber_at(&s, &prof(&[2]), &[q(0)], &q(0)), Err(TangentError::BaseOnMarked(0))));
    }

    #[test]
    fn merging() {
        let p = system(2, &["x1 - z^2"], &[0]);
        assert!(matches!(smooth_at(&p, &prof(&[1, 1]), &[q(0), q(0)]), Err(TangentError::Coincident(0, 1))));
        let v = merge_then_test(&p, &prof(&[1, 1]), &[q(0), q(0)]).unwrap();
        assert!(v.smooth_of_expected_dim);
        let (pr, pts) = merge_coincident(&prof(&[1, 1, 1]), &[q(2), q(2), q(3)]).unwrap();
        assert_eq!(pr, prof(&[2, 1]));
        assert_eq!(pts, vec![q(2), q(3)]);
    }
}

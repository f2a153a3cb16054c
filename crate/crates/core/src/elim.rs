//! Zero-dimensional systems of homogeneous equations in the projective plane
//! over a finite field: elimination by resultants, roots in extension fields,
//! local lengths by truncated quotient dimensions.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::arith::{ArithError, ExtElem, ExtField, Field, FiniteField};
use crate::linalg::{self, resultant_uni};
use crate::poly::{
    binary_gcd_all, irreducible_factors, roots, squarefree_decomposition, BinaryForm, Exp, MultiPoly, PolyError,
    PolyRing, UniPoly,
};

/// Truncation degrees tried before giving up on a local length.
pub const LENGTH_CAP: usize = 8;

const ATTEMPTS_PER_FIELD: u64 = 12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ElimError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("multiplicity too large (no stabilization up to truncation degree {LENGTH_CAP})")]
    MultiplicityTooLarge,
    #[error("no coordinate change in general position was found")]
    NoGeneralCoordinates,
    #[error("expected homogeneous equations in 3 variables")]
    BadInput,
}

/// One Galois orbit of solutions: a representative with coordinates in `field`
/// (first nonzero coordinate 1), standing for `orbit` geometric points.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanePoint {
    pub field: ExtField,
    pub coords: [ExtElem; 3],
    pub orbit: usize,
    /// Local length of the scheme at the point, when requested.
    pub multiplicity: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlaneSolution {
    Finite(Vec<PlanePoint>),
    PositiveDimensional,
}

impl PlaneSolution {
    /// Geometric points with multiplicity (each orbit expanded), sorted descending.
    pub fn multiplicities(&self) -> Option<Vec<usize>> {
        match self {
            PlaneSolution::PositiveDimensional => None,
            PlaneSolution::Finite(pts) => {
                let mut v: Vec<usize> =
                    pts.iter().flat_map(|p| std::iter::repeat(p.multiplicity.unwrap_or(1)).take(p.orbit)).collect();
                v.sort_unstable_by(|a, b| b.cmp(a));
                Some(v)
            }
        }
    }
}

/// Solves homogeneous equations in the three variables of their ring.
pub fn solve_plane<F: FiniteField>(
    eqs: &[MultiPoly<F>],
    with_multiplicity: bool,
    seed: u64,
) -> Result<PlaneSolution, ElimError> {
    let Some(first) = eqs.first() else { return Ok(PlaneSolution::PositiveDimensional) };
    let src = first.ring();
    if src.nvars() != 3 || eqs.iter().any(|g| !g.is_homogeneous()) {
        return Err(ElimError::BadInput);
    }
    let e0 = src.field.as_ext();
    let ring = PolyRing::from_names(&e0, src.vars.clone());
    let mut lifted = Vec::with_capacity(eqs.len());
    for g in eqs {
        lifted.push(g.try_map_coeffs(&ring, |c| src.field.lift(c, &e0))?);
    }
    solve_plane_ext(&lifted, with_multiplicity, seed)
}

pub fn solve_plane_ext(
    eqs: &[MultiPoly<ExtField>],
    with_multiplicity: bool,
    seed: u64,
) -> Result<PlaneSolution, ElimError> {
    let eqs: Vec<MultiPoly<ExtField>> = eqs.iter().filter(|g| !g.is_zero()).cloned().collect();
    if eqs.is_empty() {
        return Ok(PlaneSolution::PositiveDimensional);
    }
    if eqs.iter().any(|g| g.total_degree() == Some(0)) {
        return Ok(PlaneSolution::Finite(Vec::new()));
    }
    if eqs.len() == 1 {
        return Ok(PlaneSolution::PositiveDimensional);
    }
    let base = eqs[0].field().clone();
    for level in 1..=3usize {
        let work = if level == 1 { base.clone() } else { base.extend(level)? };
        let lifted = lift_all(&eqs, &work)?;
        for attempt in 0..ATTEMPTS_PER_FIELD {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (attempt << 8) ^ ((level as u64) << 40));
            match try_coordinates(&lifted, &work, &mut rng, with_multiplicity)? {
                Some(sol) => return Ok(sol),
                None => continue,
            }
        }
    }
    Err(ElimError::NoGeneralCoordinates)
}

fn lift_all(eqs: &[MultiPoly<ExtField>], target: &ExtField) -> Result<Vec<MultiPoly<ExtField>>, ElimError> {
    let src = eqs[0].field().clone();
    if src == *target {
        return Ok(eqs.to_vec());
    }
    let ring = PolyRing::from_names(target, eqs[0].ring().vars.clone());
    let mut out = Vec::new();
    for g in eqs {
        out.push(g.try_map_coeffs(&ring, |c| src.lift(c, target))?);
    }
    Ok(out)
}

fn random_invertible<R: Rng>(f: &ExtField, rng: &mut R) -> Vec<Vec<ExtElem>> {
    loop {
        let m: Vec<Vec<ExtElem>> = (0..3).map(|_| (0..3).map(|_| f.random_elem(rng)).collect()).collect();
        if !f.is_zero(&linalg::det(f, &m)) {
            return m;
        }
    }
}

/// Coefficient lists in `y` with entries in `F[x]` for `h(1, x, y)`.
fn affine_lists(h: &MultiPoly<ExtField>) -> Vec<UniPoly<ExtField>> {
    let f = h.field();
    let dy = h.degree_in(2).unwrap_or(0) as usize;
    let mut cols: Vec<Vec<ExtElem>> = vec![Vec::new(); dy + 1];
    for (e, c) in h.terms() {
        let col = &mut cols[e[2] as usize];
        let b = e[1] as usize;
        if col.len() <= b {
            col.resize(b + 1, f.zero());
        }
        col[b] = f.add(&col[b], c);
    }
    cols.into_iter().map(|c| UniPoly::new(f, c)).collect()
}

/// One attempt with a random linear change of coordinates. `None` means the
/// coordinates were not in general position.
fn try_coordinates<R: Rng>(
    eqs: &[MultiPoly<ExtField>],
    work: &ExtField,
    rng: &mut R,
    with_multiplicity: bool,
) -> Result<Option<PlaneSolution>, ElimError> {
    let ring = eqs[0].ring().clone();
    let a = random_invertible(work, rng);
    let images: Vec<MultiPoly<ExtField>> = (0..3)
        .map(|j| {
            (0..3).fold(MultiPoly::zero(&ring), |acc, k| acc.add(&MultiPoly::var(&ring, k).scale(&a[j][k])))
        })
        .collect();
    let hs: Vec<MultiPoly<ExtField>> = eqs.iter().map(|g| g.substitute(&ring, &images)).collect();
    let pt_y = [work.zero(), work.zero(), work.one()];
    if hs.iter().any(|h| work.is_zero(&h.eval(&pt_y))) {
        return Ok(None);
    }
    let lists: Vec<Vec<UniPoly<ExtField>>> = hs.iter().map(affine_lists).collect();
    let mut elim: Option<UniPoly<ExtField>> = None;
    'pairs: for i in 0..lists.len() {
        for j in i + 1..lists.len() {
            let r = resultant_uni(work, &lists[i], &lists[j]);
            if r.is_zero() {
                continue;
            }
            elim = Some(match elim {
                None => r.monic(),
                Some(e) => e.gcd(&r)?,
            });
            if elim.as_ref().is_some_and(|e| e.is_constant()) {
                break 'pairs;
            }
        }
    }
    if elim.is_none() && hs.len() > 2 {
        // every pair shares a component; eliminate two random combinations instead
        let top = hs.iter().filter_map(|h| h.total_degree()).max().unwrap();
        let l = (0..3).fold(MultiPoly::zero(&ring), |acc, k| acc.add(&MultiPoly::var(&ring, k).scale(&work.random_elem(rng))));
        let mut combo = || {
            hs.iter().fold(MultiPoly::zero(&ring), |acc, h| {
                let pad = l.pow(top - h.total_degree().unwrap());
                acc.add(&h.mul(&pad).scale(&work.random_elem(rng)))
            })
        };
        let (p, q) = (combo(), combo());
        if work.is_zero(&p.eval(&pt_y)) || work.is_zero(&q.eval(&pt_y)) {
            return Ok(None);
        }
        let r = resultant_uni(work, &affine_lists(&p), &affine_lists(&q));
        if r.is_zero() {
            return Ok(Some(PlaneSolution::PositiveDimensional));
        }
        elim = Some(r.monic());
    }
    let Some(elim) = elim else { return Ok(Some(PlaneSolution::PositiveDimensional)) };
    // no solutions on X0 = 0
    let forms: Vec<BinaryForm<ExtField>> = hs
        .iter()
        .map(|h| {
            let d = h.total_degree().unwrap() as usize;
            let mut coeffs = vec![work.zero(); d + 1];
            for (e, c) in h.terms() {
                if e[0] == 0 {
                    coeffs[e[2] as usize] = c.clone();
                }
            }
            BinaryForm::from_coeffs(work, coeffs)
        })
        .collect();
    match binary_gcd_all(&forms)? {
        Some(g) if g.degree == 0 => {}
        _ => return Ok(None),
    }
    if elim.is_constant() {
        return Ok(Some(PlaneSolution::Finite(Vec::new())));
    }
    let radical = squarefree_decomposition(&elim)?.into_iter().fold(UniPoly::one(work), |acc, (g, _)| acc.mul(&g));
    let mut points = Vec::new();
    for (rho, _) in irreducible_factors(&radical)? {
        let d = rho.degree().unwrap();
        let k = if d == 1 { work.clone() } else { work.extend(d)? };
        let rho_k = lift_uni(&rho, &k)?;
        let alpha = roots(&rho_k)?.into_iter().next().ok_or(ElimError::NoGeneralCoordinates)?;
        // gcd of h_i(alpha, y)
        let mut g: Option<UniPoly<ExtField>> = None;
        for list in &lists {
            let mut coeffs = Vec::with_capacity(list.len());
            for c in list {
                coeffs.push(lift_uni(c, &k)?.eval(&alpha));
            }
            let hy = UniPoly::new(&k, coeffs);
            if hy.is_zero() {
                continue;
            }
            g = Some(match g {
                None => hy.monic(),
                Some(acc) => acc.gcd(&hy)?,
            });
        }
        let Some(g) = g else { return Ok(None) };
        if g.is_constant() {
            continue;
        }
        let rs = roots(&g)?;
        if rs.len() != 1 {
            return Ok(None);
        }
        let gamma = rs[0].clone();
        let m = g.degree().unwrap() as u32;
        if UniPoly::linear(&k, &gamma).pow(m) != g {
            return Ok(None);
        }
        let mult = if with_multiplicity {
            let kring = PolyRing::new(&k, &["x", "y"]);
            let mut affine = Vec::new();
            for h in &hs {
                affine.push(dehomogenize(h, &kring, work, &k)?);
            }
            Some(local_length(&affine, &[alpha.clone(), gamma.clone()])?)
        } else {
            None
        };
        let local = [k.one(), alpha, gamma];
        let mut coords: Vec<ExtElem> = Vec::with_capacity(3);
        for row in &a {
            let mut acc = k.zero();
            for (c, v) in row.iter().zip(&local) {
                acc = k.add(&acc, &k.mul(&work.lift(c, &k)?, v));
            }
            coords.push(acc);
        }
        let coords = normalize_point(&k, coords);
        points.push(PlanePoint { field: k, coords: [coords[0].clone(), coords[1].clone(), coords[2].clone()], orbit: d, multiplicity: mult });
    }
    points.sort_by(|p, q| (p.orbit, p.field.degree(), &p.coords).cmp(&(q.orbit, q.field.degree(), &q.coords)));
    Ok(Some(PlaneSolution::Finite(points)))
}

pub(crate) fn lift_uni(p: &UniPoly<ExtField>, k: &ExtField) -> Result<UniPoly<ExtField>, ArithError> {
    let f = p.field();
    if f == k {
        return Ok(p.clone());
    }
    let mut coeffs = Vec::with_capacity(p.coeffs().len());
    for c in p.coeffs() {
        coeffs.push(f.lift(c, k)?);
    }
    Ok(UniPoly::new(k, coeffs))
}

fn dehomogenize(
    h: &MultiPoly<ExtField>,
    target: &Arc<PolyRing<ExtField>>,
    from: &ExtField,
    k: &ExtField,
) -> Result<MultiPoly<ExtField>, ArithError> {
    let mut terms = Vec::new();
    for (e, c) in h.terms() {
        let ne: Exp = SmallVec::from_slice(&[e[1], e[2]]);
        terms.push((ne, from.lift(c, k)?));
    }
    Ok(MultiPoly::from_terms(target, terms))
}

/// Scales so the first nonzero coordinate is 1.
pub fn normalize_point<F: Field>(f: &F, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
    if let Some(lead) = v.iter().find(|c| !f.is_zero(c)).cloned() {
        let inv = f.inv(&lead).expect("nonzero");
        for c in v.iter_mut() {
            *c = f.mul(c, &inv);
        }
    }
    v
}

/// Exponent vectors of total degree `< t` in `n` variables, graded order.
fn monomials_below(n: usize, t: u32) -> Vec<Exp> {
    let mut out = Vec::new();
    for deg in 0..t {
        let mut cur: Exp = SmallVec::from_elem(0, n);
        fill(&mut out, &mut cur, 0, deg);
    }
    out
}

fn fill(out: &mut Vec<Exp>, cur: &mut Exp, i: usize, left: u32) {
    let n = cur.len();
    if i == n - 1 {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    for k in (0..=left).rev() {
        cur[i] = k;
        fill(out, cur, i + 1, left - k);
    }
    cur[i] = 0;
}

/// Length of the local ring of `(polys)` at `point`: the stabilized value of
/// `dim K[x]/(I + m^t)` over `t = 1, 2, ..`, stopping when two consecutive
/// truncations agree.
pub fn local_length<F: Field>(polys: &[MultiPoly<F>], point: &[F::Elem]) -> Result<usize, ElimError> {
    let ring = polys[0].ring().clone();
    let f = ring.field.clone();
    let n = ring.nvars();
    let shift: Vec<MultiPoly<F>> = (0..n)
        .map(|i| MultiPoly::var(&ring, i).add(&MultiPoly::constant(&ring, point[i].clone())))
        .collect();
    let moved: Vec<MultiPoly<F>> =
        polys.iter().filter(|p| !p.is_zero()).map(|p| p.substitute(&ring, &shift)).collect();
    let mut prev: Option<usize> = None;
    for t in 1..=(LENGTH_CAP as u32 + 1) {
        let monos = monomials_below(n, t);
        let index: std::collections::HashMap<&Exp, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for g in &moved {
            for mu in &monos {
                let mut row = vec![f.zero(); monos.len()];
                let mut any = false;
                for (e, c) in g.terms() {
                    let s: Exp = e.iter().zip(mu.iter()).map(|(a, b)| a + b).collect();
                    if let Some(&col) = index.get(&s) {
                        row[col] = f.add(&row[col], c);
                        any = true;
                    }
                }
                if any {
                    rows.push(row);
                }
            }
        }
        let dim = monos.len() - linalg::rank(&f, &rows);
        if prev == Some(dim) {
            return Ok(dim);
        }
        prev = Some(dim);
    }
    Err(ElimError::MultiplicityTooLarge)
}

//! Seeded random instances for property tests and the acceptance harness.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::arith::{FiniteField, PrimeField};
use crate::chart::{ambient_ring, normalize_generators, pull_to_chart, LineChart, NormalizedSystem};
use crate::hilbert::{jacobian_oracle, oh_equations, HilbertPoint, OracleVerdict, Profile};
use crate::poly::{Exp, MultiPoly, PolyRing, UniPoly};
use crate::tangent::{smooth_at, smooth_fiber_at, SmoothnessVerdict};

use std::sync::Arc;

/// Generators in `x1..x_{N-1}, z` with `L = {x = 0}` meeting them to
/// prescribed orders at marked points.
#[derive(Debug, Clone)]
pub struct SectionInstance<F: FiniteField> {
    pub n: usize,
    pub generators: Vec<MultiPoly<F>>,
    pub profile: Profile,
    pub points: Vec<F::Elem>,
}

fn random_uni<F: FiniteField, R: Rng>(f: &F, max_deg: usize, density: f64, rng: &mut R) -> UniPoly<F> {
    let coeffs = (0..=max_deg).map(|_| if rng.gen_bool(density) { f.random_elem(rng) } else { f.zero() }).collect();
    UniPoly::new(f, coeffs)
}

/// Random polynomial of degree `<= max_deg` with roughly `density` of the
/// monomials present.
pub fn random_poly<F: FiniteField, R: Rng>(ring: &Arc<PolyRing<F>>, max_deg: u32, density: f64, rng: &mut R) -> MultiPoly<F> {
    let n = ring.nvars();
    let mut terms = Vec::new();
    let mut cur: Exp = Exp::from_elem(0, n);
    fn walk<F: FiniteField, R: Rng>(
        i: usize,
        left: u32,
        cur: &mut Exp,
        f: &F,
        density: f64,
        rng: &mut R,
        out: &mut Vec<(Exp, F::Elem)>,
    ) {
        if i == cur.len() {
            if rng.gen_bool(density) {
                out.push((cur.clone(), f.random_elem(rng)));
            }
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            walk(i + 1, left - k, cur, f, density, rng, out);
        }
        cur[i] = 0;
    }
    walk(0, max_deg, &mut cur, &ring.field, density, rng, &mut terms);
    MultiPoly::from_terms(ring, terms)
}

fn distinct_points<F: FiniteField, R: Rng>(f: &F, r: usize, rng: &mut R) -> Option<Vec<F::Elem>> {
    let mut pool = f.elements();
    if pool.len() < r {
        return None;
    }
    pool.shuffle(rng);
    pool.truncate(r);
    Some(pool)
}

/// A system with `g_s(0, z) = P(z) r_s(z)`, `P = prod (z - a_j)^{k_j}`, sparse
/// linear terms in `x` (so degenerate cotangent ranks are common over small
/// fields) and a few quadratic terms.
pub fn random_section<F: FiniteField, R: Rng>(
    f: &F,
    n: usize,
    c: usize,
    parts: &[usize],
    rng: &mut R,
) -> Option<SectionInstance<F>> {
    let profile = Profile::new(parts.to_vec()).ok()?;
    let points = distinct_points(f, parts.len(), rng)?;
    let ring = ambient_ring(f, n);
    let zi = n - 1;
    let mut base = UniPoly::one(f);
    for (a, &k) in points.iter().zip(parts) {
        base = base.mul(&UniPoly::linear(f, a).pow(k as u32));
    }
    let kmax = *parts.iter().max().unwrap_or(&1);
    let mut gens = Vec::with_capacity(c);
    for s in 0..c {
        let mut r = random_uni(f, 1, 0.7, rng);
        if s == 0 {
            while r.is_zero() {
                r = random_uni(f, 1, 0.7, rng);
            }
            if rng.gen_bool(0.3) {
                let j = rng.gen_range(0..points.len());
                r = r.mul(&UniPoly::linear(f, &points[j]));
            }
        }
        let mut g = MultiPoly::from_uni(&ring, zi, &base.mul(&r));
        for i in 0..n - 1 {
            let l = random_uni(f, kmax + 1, 0.4, rng);
            g = g.add(&MultiPoly::var(&ring, i).mul(&MultiPoly::from_uni(&ring, zi, &l)));
        }
        for i in 0..n - 1 {
            for i2 in i..n - 1 {
                if rng.gen_bool(0.4) {
                    let m = random_uni(f, 1, 0.6, rng);
                    let xx = MultiPoly::var(&ring, i).mul(&MultiPoly::var(&ring, i2));
                    g = g.add(&xx.mul(&MultiPoly::from_uni(&ring, zi, &m)));
                }
            }
        }
        gens.push(g);
    }
    Some(SectionInstance { n, generators: gens, profile, points })
}

impl<F: FiniteField> SectionInstance<F> {
    pub fn normalize(&self, seed: u64) -> Option<NormalizedSystem<F>> {
        normalize_generators(&self.generators, &self.points, seed).ok()
    }

    /// Oracle verdict on the Grassmann-chart presentation at `u = v = 0`.
    pub fn oracle(&self) -> OracleVerdict {
        self.oracle_at(&self.profile, &self.points)
    }

    pub fn oracle_at(&self, profile: &Profile, points: &[F::Elem]) -> OracleVerdict {
        let f = &self.generators[0].ring().field;
        let chart = LineChart::standard(f, self.n);
        let pulled: Vec<MultiPoly<F>> = self.generators.iter().map(|g| pull_to_chart(g, &chart).unwrap()).collect();
        let pres = oh_equations(&pulled, "z", profile).unwrap();
        let pt = HilbertPoint { params: vec![f.zero(); chart.num_params()], marked: points.to_vec() };
        jacobian_oracle(&pres, &pt).expect("constructed point lies on the scheme")
    }

    /// Oracle verdict on the star presentation through `z = b`.
    pub fn star_oracle(&self, b: &F::Elem) -> OracleVerdict {
        let f = &self.generators[0].ring().field;
        let chart = LineChart::star(f, self.n, b.clone());
        let pulled: Vec<MultiPoly<F>> = self.generators.iter().map(|g| pull_to_chart(g, &chart).unwrap()).collect();
        let pres = oh_equations(&pulled, "z", &self.profile).unwrap();
        let pt = HilbertPoint { params: vec![f.zero(); chart.num_params()], marked: self.points.clone() };
        jacobian_oracle(&pres, &pt).expect("constructed point lies on the scheme")
    }

    pub fn grassmann_verdict(&self, norm: &NormalizedSystem<F>) -> SmoothnessVerdict {
        smooth_at(norm, &self.profile, &self.points).expect("valid instance")
    }

    pub fn star_verdict(&self, norm: &NormalizedSystem<F>, b: &F::Elem) -> SmoothnessVerdict {
        smooth_fiber_at(norm, &self.profile, &self.points, b).expect("valid instance")
    }
}

/// Profiles with total `k <= kmax` and at most `rmax` parts.
pub fn random_parts<R: Rng>(kmax: usize, rmax: usize, rng: &mut R) -> Vec<usize> {
    let k = rng.gen_range(1..=kmax);
    let mut parts = Vec::new();
    let mut left = k;
    while left > 0 {
        let take = if parts.len() + 1 == rmax { left } else { rng.gen_range(1..=left) };
        parts.push(take);
        left -= take;
    }
    parts
}

/// Draws `(N, c, profile)` as in the acceptance harness: `N` in 2..=4, `c` in
/// 1..=min(2, N-1), `k <= 4`, over `F_p`, and retries until normalization
/// succeeds.
pub fn random_valid_section<R: Rng>(
    f: &PrimeField,
    rng: &mut R,
) -> (SectionInstance<PrimeField>, NormalizedSystem<PrimeField>) {
    loop {
        let n = rng.gen_range(2..=4);
        let c = rng.gen_range(1..=2.min(n - 1));
        let parts = random_parts(4, 3, rng);
        let Some(inst) = random_section(f, n, c, &parts, rng) else { continue };
        if let Some(norm) = inst.normalize(rng.gen()) {
            return (inst, norm);
        }
    }
}

//! Line charts: the Grassmann chart `x_i = u_i z + v_i` around the line
//! `L = {x = 0}`, the star chart `x_i = u_i (z - b)` of lines through
//! `(0, .., 0, b)`, generator normalization and linearization.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{ArithError, Field};
use crate::hilbert::{jacobian_rank, OHPresentation};
use crate::linalg;
use crate::poly::{MultiPoly, PolyError, PolyRing, UniPoly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChartError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("the line is contained in every generator")]
    LineContained,
    #[error("normalization failed at marked point {0}: no local complete intersection after {1} recombinations")]
    NormalizationFailed(usize, usize),
    #[error("ambient ring must have variables x1..x{0} and z")]
    BadAmbient(usize),
    #[error("could not bring the line into chart position")]
    NoFrame,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChartMode<E> {
    Standard,
    /// Lines through the point `z = b` of `L`.
    Star(E),
}

/// Chart data for lines near `L = {x = 0}` in an affine chart with
/// coordinates `x1..x_{N-1}, z`.
#[derive(Debug, Clone)]
pub struct LineChart<F: Field> {
    pub field: F,
    /// Ambient projective dimension `N`.
    pub n: usize,
    pub mode: ChartMode<F::Elem>,
}

impl<F: Field> LineChart<F> {
    pub fn standard(field: &F, n: usize) -> Self {
        LineChart { field: field.clone(), n, mode: ChartMode::Standard }
    }

    pub fn star(field: &F, n: usize, b: F::Elem) -> Self {
        LineChart { field: field.clone(), n, mode: ChartMode::Star(b) }
    }

    /// `x1..x_{N-1}, z`.
    pub fn ambient_ring(&self) -> Arc<PolyRing<F>> {
        ambient_ring(&self.field, self.n)
    }

    /// `u1..u_{N-1}, v1..v_{N-1}, z`, or `u1..u_{N-1}, z` in star mode.
    pub fn chart_ring(&self) -> Arc<PolyRing<F>> {
        let m = self.n - 1;
        let mut vars: Vec<String> = (1..=m).map(|i| format!("u{i}")).collect();
        if self.mode == ChartMode::Standard {
            vars.extend((1..=m).map(|i| format!("v{i}")));
        }
        vars.push("z".to_string());
        PolyRing::from_names(&self.field, vars)
    }

    pub fn num_params(&self) -> usize {
        match self.mode {
            ChartMode::Standard => 2 * (self.n - 1),
            ChartMode::Star(_) => self.n - 1,
        }
    }
}

pub fn ambient_ring<F: Field>(field: &F, n: usize) -> Arc<PolyRing<F>> {
    let mut vars: Vec<String> = (1..n).map(|i| format!("x{i}")).collect();
    vars.push("z".to_string());
    PolyRing::from_names(field, vars)
}

fn check_ambient<F: Field>(g: &MultiPoly<F>, n: usize) -> Result<(), ChartError> {
    let expect = ambient_ring(&g.ring().field, n);
    if g.ring().vars != expect.vars {
        return Err(ChartError::BadAmbient(n - 1));
    }
    Ok(())
}

/// Literal substitution of the chart parametrization.
pub fn pull_to_chart<F: Field>(g: &MultiPoly<F>, chart: &LineChart<F>) -> Result<MultiPoly<F>, ChartError> {
    check_ambient(g, chart.n)?;
    let target = chart.chart_ring();
    let m = chart.n - 1;
    let z = MultiPoly::var(&target, target.nvars() - 1);
    let mut images = Vec::with_capacity(m + 1);
    for i in 0..m {
        let u = MultiPoly::var(&target, i);
        images.push(match &chart.mode {
            ChartMode::Standard => u.mul(&z).add(&MultiPoly::var(&target, m + i)),
            ChartMode::Star(b) => u.mul(&z.sub(&MultiPoly::constant(&target, b.clone()))),
        });
    }
    images.push(z);
    Ok(g.substitute(&target, &images))
}

/// `g(0, z)`.
pub fn restriction<F: Field>(g: &MultiPoly<F>) -> UniPoly<F> {
    let n = g.ring().nvars();
    let f = g.field();
    let assign: Vec<(usize, F::Elem)> = (0..n - 1).map(|i| (i, f.zero())).collect();
    g.partial_eval(&assign).to_uni(n - 1).expect("only z remains")
}

/// `p = g(0, z)` and `q_i = dg/dx_i (0, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizedEquation<F: Field> {
    pub p: UniPoly<F>,
    pub q: Vec<UniPoly<F>>,
}

pub fn linearize<F: Field>(g: &MultiPoly<F>) -> LinearizedEquation<F> {
    let n = g.ring().nvars();
    let p = restriction(g);
    let q = (0..n - 1).map(|i| restriction(&g.partial(i, 1))).collect();
    LinearizedEquation { p, q }
}

/// Generators with `g_1(0, z) = d` monic and `g_s(0, z) = 0` for `s >= 2`.
#[derive(Debug, Clone)]
pub struct NormalizedSystem<F: Field> {
    pub generators: Vec<MultiPoly<F>>,
    pub d: UniPoly<F>,
    pub marked: Vec<F::Elem>,
    /// Determinant of the recombination, a polynomial in `z`.
    pub transform_det: UniPoly<F>,
    /// Recombination attempts needed (0 if the input order worked).
    pub retries: usize,
}

impl<F: Field> NormalizedSystem<F> {
    pub fn linearized(&self) -> Vec<LinearizedEquation<F>> {
        self.generators.iter().map(linearize).collect()
    }

    pub fn restrictions(&self) -> Vec<UniPoly<F>> {
        self.generators.iter().map(restriction).collect()
    }
}

const NORMALIZE_ATTEMPTS: usize = 16;

/// Recombines generators via Bezout cofactors of the restrictions. Local
/// correctness (ambient Jacobian rank `c` at every marked point) is verified;
/// on failure the generators are recombined by random constant matrices.
pub fn normalize_generators<F: Field>(
    generators: &[MultiPoly<F>],
    marked: &[F::Elem],
    seed: u64,
) -> Result<NormalizedSystem<F>, ChartError> {
    let ring = generators[0].ring().clone();
    let f = ring.field.clone();
    let n = ring.nvars();
    let c = generators.len();
    if generators.iter().all(|g| restriction(g).is_zero()) {
        return Err(ChartError::LineContained);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_bad = 0;
    for attempt in 0..NORMALIZE_ATTEMPTS {
        let gens: Vec<MultiPoly<F>> = if attempt == 0 {
            generators.to_vec()
        } else {
            let m = random_invertible_small(&f, c, &mut rng);
            (0..c)
                .map(|i| (0..c).fold(MultiPoly::zero(&ring), |acc, j| acc.add(&generators[j].scale(&m[i][j]))))
                .collect()
        };
        let phis: Vec<UniPoly<F>> = gens.iter().map(restriction).collect();
        let (d, cof) = multi_ext_gcd(&f, &phis)?;
        let zi = n - 1;
        let g1 = gens
            .iter()
            .zip(&cof)
            .fold(MultiPoly::zero(&ring), |acc, (g, a)| acc.add(&g.mul(&MultiPoly::from_uni(&ring, zi, a))));
        let mut out = vec![g1.clone()];
        for (g, phi) in gens.iter().zip(&phis).skip(1) {
            let ratio = phi.div_exact(&d)?;
            out.push(g.sub(&g1.mul(&MultiPoly::from_uni(&ring, zi, &ratio))));
        }
        let bad = marked.iter().position(|a| {
            let mut pt = vec![f.zero(); n];
            pt[zi] = a.clone();
            jacobian_rank(&out, &pt) < c
        });
        match bad {
            None => {
                return Ok(NormalizedSystem {
                    generators: out,
                    d,
                    marked: marked.to_vec(),
                    transform_det: cof[0].clone(),
                    retries: attempt,
                })
            }
            Some(j) => last_bad = j,
        }
    }
    Err(ChartError::NormalizationFailed(last_bad, NORMALIZE_ATTEMPTS))
}

fn random_invertible_small<F: Field, R: Rng>(f: &F, c: usize, rng: &mut R) -> Vec<Vec<F::Elem>> {
    loop {
        let m: Vec<Vec<F::Elem>> = (0..c).map(|_| (0..c).map(|_| f.from_i64(rng.gen_range(-3..=3))).collect()).collect();
        if !f.is_zero(&linalg::det(f, &m)) {
            return m;
        }
    }
}

/// `d = gcd(phis)` monic and cofactors with `sum a_s phi_s = d`.
pub fn multi_ext_gcd<F: Field>(f: &F, phis: &[UniPoly<F>]) -> Result<(UniPoly<F>, Vec<UniPoly<F>>), ChartError> {
    let mut d = UniPoly::zero(f);
    let mut cof = vec![UniPoly::zero(f); phis.len()];
    for (s, phi) in phis.iter().enumerate() {
        if phi.is_zero() {
            continue;
        }
        if d.is_zero() {
            let inv = f.inv(&phi.lead())?;
            d = phi.scale(&inv);
            cof[s] = UniPoly::constant(f, inv);
            continue;
        }
        if phi.rem(&d)?.is_zero() {
            // keep the earlier cofactors; Euclid would move all weight onto phi
            continue;
        }
        let (g, a, b) = d.ext_gcd(phi)?;
        for c in cof.iter_mut() {
            *c = c.mul(&a);
        }
        cof[s] = b;
        d = g;
    }
    if d.is_zero() {
        return Err(ChartError::LineContained);
    }
    Ok((d, cof))
}

/// Substitutes `v_i = -b u_i` into a standard-chart presentation.
pub fn specialize_to_star<F: Field>(pres: &OHPresentation<F>, b: &F::Elem) -> Result<OHPresentation<F>, ChartError> {
    let src = &pres.ring;
    let m = pres.num_params / 2;
    let f = &src.field;
    let mut vars: Vec<String> = src.vars[..m].to_vec();
    vars.extend(src.vars[pres.num_params..].iter().cloned());
    let target = PolyRing::from_names(f, vars);
    let nb = MultiPoly::constant(&target, f.neg(b));
    let images: Vec<MultiPoly<F>> = (0..src.nvars())
        .map(|i| {
            if i < m {
                MultiPoly::var(&target, i)
            } else if i < 2 * m {
                MultiPoly::var(&target, i - m).mul(&nb)
            } else {
                MultiPoly::var(&target, i - m)
            }
        })
        .collect();
    let equations = pres.equations.iter().map(|e| e.substitute(&target, &images)).collect();
    Ok(OHPresentation {
        ring: target,
        num_params: m,
        profile: pres.profile.clone(),
        num_generators: pres.num_generators,
        equations,
    })
}

/// Projective frame putting a line in chart position: homogeneous
/// `(1, x_1, .., x_{N-1}, z)` maps to `P0 + sum x_i c_i + z P_inf`.
#[derive(Debug, Clone)]
pub struct Frame<F: Field> {
    /// Columns `P0, c_1, .., c_{N-1}, P_inf`, stored as column vectors.
    pub columns: Vec<Vec<F::Elem>>,
    /// Chart coordinate of the base point `beta = P0 + b P_inf`.
    pub b: F::Elem,
}

impl<F: Field> Frame<F> {
    /// `P0 + z P_inf`.
    pub fn line_point(&self, f: &F, z: &F::Elem) -> Vec<F::Elem> {
        let n = self.columns.len();
        (0..self.columns[0].len()).map(|r| f.add(&self.columns[0][r], &f.mul(z, &self.columns[n - 1][r]))).collect()
    }

    /// Chart coordinate `a` with `q ~ P0 + a P_inf`, if `q` is on the line and finite.
    pub fn coordinate_of(&self, f: &F, q: &[F::Elem]) -> Option<F::Elem> {
        let n = self.columns.len();
        let p0 = &self.columns[0];
        let pi = &self.columns[n - 1];
        // q = s P0 + t P_inf with s != 0
        let m: Vec<Vec<F::Elem>> = (0..q.len()).map(|r| vec![p0[r].clone(), pi[r].clone(), q[r].clone()]).collect();
        let ns = linalg::nullspace(f, &m, 3);
        if ns.len() != 1 {
            return None;
        }
        let v = &ns[0];
        if f.is_zero(&v[2]) || f.is_zero(&v[0]) {
            return None;
        }
        Some(f.div(&v[1], &v[0]).ok()?)
    }

    /// Pulls homogeneous generators in `X_0..X_N` back to the affine chart ring.
    pub fn pull_back(&self, g: &MultiPoly<F>, target: &Arc<PolyRing<F>>) -> MultiPoly<F> {
        let f = &target.field;
        let n = self.columns.len();
        let rows = self.columns[0].len();
        let images: Vec<MultiPoly<F>> = (0..rows)
            .map(|r| {
                let mut acc = MultiPoly::constant(target, self.columns[0][r].clone());
                for k in 1..n {
                    let c = &self.columns[k][r];
                    if !f.is_zero(c) {
                        acc = acc.add(&MultiPoly::var(target, k - 1).scale(c));
                    }
                }
                acc
            })
            .collect();
        g.substitute(target, &images)
    }
}

/// Builds a frame for the line through `beta` with second point `other`:
/// `P_inf` is chosen on the line away from `avoid` (typically the variety),
/// `beta = P0 + b P_inf` with the given `b != 0`, complement columns random.
pub fn line_frame<F: Field, R: Rng>(
    f: &F,
    beta: &[F::Elem],
    other: &[F::Elem],
    b: &F::Elem,
    avoid: impl Fn(&[F::Elem]) -> bool,
    random: impl Fn(&mut R) -> F::Elem,
    rng: &mut R,
) -> Result<Frame<F>, ChartError> {
    let dim = beta.len();
    for _ in 0..64 {
        let (s, t) = (random(rng), random(rng));
        if f.is_zero(&t) {
            continue;
        }
        let pinf: Vec<F::Elem> = (0..dim).map(|i| f.add(&f.mul(&s, &beta[i]), &f.mul(&t, &other[i]))).collect();
        if avoid(&pinf) {
            continue;
        }
        let p0: Vec<F::Elem> = (0..dim).map(|i| f.sub(&beta[i], &f.mul(b, &pinf[i]))).collect();
        let mut columns = vec![p0];
        for _ in 1..dim - 1 {
            columns.push((0..dim).map(|_| random(rng)).collect());
        }
        columns.push(pinf);
        let m: Vec<Vec<F::Elem>> = (0..dim).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
        if f.is_zero(&linalg::det(f, &m)) {
            continue;
        }
        return Ok(Frame { columns, b: b.clone() });
    }
    Err(ChartError::NoFrame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Rational, Rationals};
    use crate::hilbert::{oh_equations, Profile};
    use crate::poly::parse_poly;

    fn amb(n: usize) -> Arc<PolyRing<Rationals>> {
        ambient_ring(&Rationals, n)
    }

    #[test]
    fn pullback_examples() {
        let r = amb(2);
        let g = parse_poly(&r, "x1 - z^2").unwrap();
        let std = LineChart::standard(&Rationals, 2);
        let cr = std.chart_ring();
        assert_eq!(pull_to_chart(&g, &std).unwrap(), parse_poly(&cr, "u1*z + v1 - z^2").unwrap());
        let star = LineChart::star(&Rationals, 2, Rational::from_int(1));
        let sr = star.chart_ring();
        assert_eq!(pull_to_chart(&g, &star).unwrap(), parse_poly(&sr, "u1*(z - 1) - z^2").unwrap());
        let r3 = amb(3);
        let g = parse_poly(&r3, "x2 - x1*z").unwrap();
        let s3 = LineChart::standard(&Rationals, 3);
        let cr3 = s3.chart_ring();
        assert_eq!(pull_to_chart(&g, &s3).unwrap(), parse_poly(&cr3, "u2*z + v2 - (u1*z + v1)*z").unwrap());
    }

    #[test]
    fn linearize_examples() {
        let r = amb(3);
        let l = linearize(&parse_poly(&r, "x1 - z^2").unwrap());
        assert_eq!(l.p, UniPoly::from_i64(&Rationals, &[0, 0, -1]));
        assert_eq!(l.q, vec![UniPoly::one(&Rationals), UniPoly::zero(&Rationals)]);
        let l = linearize(&parse_poly(&r, "x2 - z*x1").unwrap());
        assert!(l.p.is_zero());
        assert_eq!(l.q, vec![UniPoly::from_i64(&Rationals, &[0, -1]), UniPoly::one(&Rationals)]);
        let l = linearize(&parse_poly(&r, "x1*x2 + x1*z + z^3").unwrap());
        assert_eq!(l.p, UniPoly::from_i64(&Rationals, &[0, 0, 0, 1]));
        assert_eq!(l.q[0], UniPoly::from_i64(&Rationals, &[0, 1]));
        assert!(l.q[1].is_zero());
    }

    #[test]
    fn twisted_cubic_normalization() {
        let r = amb(3);
        let gens = vec![parse_poly(&r, "x1 - z^2").unwrap(), parse_poly(&r, "x2 - z^3").unwrap()];
        let norm = normalize_generators(&gens, &[Rational::zero()], 0).unwrap();
        assert_eq!(norm.generators[0], parse_poly(&r, "z^2 - x1").unwrap());
        assert_eq!(norm.generators[1], parse_poly(&r, "x2 - z*x1").unwrap());
        assert_eq!(norm.d, UniPoly::from_i64(&Rationals, &[0, 0, 1]));
        assert!(norm.restrictions()[1].is_zero());
    }

    #[test]
    fn normalization_fixed_points() {
        let r = amb(3);
        let gens = vec![parse_poly(&r, "z^2 - x1").unwrap(), parse_poly(&r, "x2 - z*x1").unwrap()];
        let norm = normalize_generators(&gens, &[Rational::zero()], 0).unwrap();
        assert_eq!(norm.generators, gens);
        let single = vec![parse_poly(&r, "3*z^2 - x1 + x2").unwrap()];
        let norm = normalize_generators(&single, &[Rational::zero()], 0).unwrap();
        assert_eq!(norm.generators[0], single[0].scale(&Rational::new(1, 3).unwrap()));
        let contained = vec![parse_poly(&r, "x1").unwrap()];
        assert!(matches!(normalize_generators(&contained, &[], 0), Err(ChartError::LineContained)));
    }

    #[test]
    fn star_specialization_commutes() {
        let r = amb(2);
        let g = parse_poly(&r, "x1 - z^2").unwrap();
        let prof = Profile::new(vec![2]).unwrap();
        let b = Rational::from_int(1);
        let std = LineChart::standard(&Rationals, 2);
        let star = LineChart::star(&Rationals, 2, b.clone());
        let lhs = specialize_to_star(&oh_equations(&[pull_to_chart(&g, &std).unwrap()], "z", &prof).unwrap(), &b).unwrap();
        let rhs = oh_equations(&[pull_to_chart(&g, &star).unwrap()], "z", &prof).unwrap();
        assert_eq!(lhs.equation_texts(), rhs.equation_texts());
        assert_eq!(lhs.ring.vars, rhs.ring.vars);
        let zero = specialize_to_star(&oh_equations(&[pull_to_chart(&g, &std).unwrap()], "z", &prof).unwrap(), &Rational::zero()).unwrap();
        assert!(zero.equation_texts().iter().all(|t| !t.contains('v')));
    }
}

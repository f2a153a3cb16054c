//! Built-in varieties and the parametric line census.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{ExtElem, ExtField, Field, FiniteField, PrimeField, Rational, Rationals};
use crate::census::{
    independent, projective_ring, CensusError, Coverage, GeometricCounts, ImplicitVariety, LineClassifier, LineSection,
};

use crate::elim::{solve_plane, PlaneSolution};
use crate::linalg;
use crate::poly::{binary_gcd_all, binary_profile, parse_poly, BinaryForm, MultiPoly, PolyRing};

pub const BUILTIN_NAMES: &[&str] =
    &["twisted-cubic", "rational-normal-quartic", "parabola", "veronese-p5", "projected-veronese-p4", "random-ci"];

/// Image of `P^m -> P^N`, `s -> (f_0(s) : .. : f_N(s))`.
#[derive(Debug, Clone)]
pub struct ParametricVariety<F: Field> {
    pub name: String,
    pub m: usize,
    pub n: usize,
    pub source: Arc<PolyRing<F>>,
    pub components: Vec<MultiPoly<F>>,
}

pub fn source_ring<F: Field>(field: &F, m: usize) -> Arc<PolyRing<F>> {
    PolyRing::from_names(field, (0..=m).map(|i| format!("S{i}")).collect())
}

impl<F: Field> ParametricVariety<F> {
    pub fn new(name: &str, components: Vec<MultiPoly<F>>) -> Result<Self, GalleryError> {
        let source = components.first().ok_or(GalleryError::BadParametrization("no components".into()))?.ring().clone();
        let m = source.nvars() - 1;
        if !(1..=2).contains(&m) {
            return Err(GalleryError::BadParametrization("source must be P^1 or P^2".into()));
        }
        let deg = components.iter().find_map(|c| c.total_degree());
        if deg.is_none() || components.iter().any(|c| !c.is_zero() && (!c.is_homogeneous() || c.total_degree() != deg)) {
            return Err(GalleryError::BadParametrization("components must be homogeneous of one degree".into()));
        }
        Ok(ParametricVariety { name: name.to_string(), m, n: components.len() - 1, source, components })
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().find_map(|c| c.total_degree()).unwrap_or(0)
    }

    pub fn eval(&self, s: &[F::Elem]) -> Vec<F::Elem> {
        self.components.iter().map(|c| c.eval(s)).collect()
    }

    /// Pullbacks of the linear forms vanishing on the span of `a, b`.
    fn pullbacks(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<MultiPoly<F>> {
        let f = &self.source.field;
        let forms = linalg::nullspace(f, &vec![a.to_vec(), b.to_vec()], self.n + 1);
        forms.iter().map(|l| self.pull_form(l)).collect()
    }

    fn pull_form(&self, l: &[F::Elem]) -> MultiPoly<F> {
        l.iter().zip(&self.components).fold(MultiPoly::zero(&self.source), |acc, (c, g)| acc.add(&g.scale(c)))
    }
}

impl ParametricVariety<Rationals> {
    pub fn reduce(&self, p: u64) -> Result<ParametricVariety<PrimeField>, CensusError> {
        let f = PrimeField::new(p)?;
        let ring = PolyRing::from_names(&f, self.source.vars.clone());
        let mut comps = Vec::new();
        for c in &self.components {
            comps.push(c.try_map_coeffs(&ring, |x| f.from_rational(x)).map_err(|_| CensusError::BadReduction(c.to_text(), p))?);
        }
        if comps.iter().all(|c| c.is_zero()) {
            return Err(CensusError::BadReduction("all components vanish".into(), p));
        }
        Ok(ParametricVariety { name: self.name.clone(), m: self.m, n: self.n, source: ring, components: comps })
    }
}

impl<F: FiniteField> ParametricVariety<F> {
    pub fn lift_to(&self, target: &ExtField) -> Result<ParametricVariety<ExtField>, CensusError> {
        let ring = PolyRing::from_names(target, self.source.vars.clone());
        let src = &self.source.field;
        let mut comps = Vec::new();
        for c in &self.components {
            comps.push(c.try_map_coeffs(&ring, |x| src.lift(x, target))?);
        }
        Ok(ParametricVariety { name: self.name.clone(), m: self.m, n: self.n, source: ring, components: comps })
    }

    /// A source point mapping to a base point of the parametrization, if any
    /// rational one exists.
    pub fn rational_base_point(&self) -> Option<Vec<F::Elem>> {
        let f = &self.source.field;
        let elems = f.elements();
        let mut pts: Vec<Vec<F::Elem>> = Vec::new();
        match self.m {
            1 => {
                pts.push(vec![f.zero(), f.one()]);
                pts.extend(elems.iter().map(|a| vec![f.one(), a.clone()]));
            }
            _ => {
                pts.push(vec![f.zero(), f.zero(), f.one()]);
                pts.extend(elems.iter().map(|a| vec![f.zero(), f.one(), a.clone()]));
                for a in &elems {
                    pts.extend(elems.iter().map(|b| vec![f.one(), a.clone(), b.clone()]));
                }
            }
        }
        pts.into_iter().find(|s| self.eval(s).iter().all(|c| f.is_zero(c)))
    }
}

/// Section of the image by the line through `beta` and `dir`, read off the
/// pullback scheme: factor data of the gcd for curves, orbits and local
/// lengths of the plane solutions for surfaces.
pub fn parametric_line_profile<F: FiniteField>(
    x: &ParametricVariety<F>,
    beta: &[F::Elem],
    dir: &[F::Elem],
    seed: u64,
) -> Result<LineSection, CensusError> {
    let f = &x.source.field;
    if !independent(f, beta, dir) {
        return Err(CensusError::BadDirection);
    }
    let pulls = x.pullbacks(beta, dir);
    match x.m {
        1 => {
            let forms: Vec<BinaryForm<F>> = pulls
                .iter()
                .map(|g| {
                    let d = x.degree() as usize;
                    let coeffs = (0..=d).map(|i| g.coeff(&[(d - i) as u32, i as u32])).collect();
                    BinaryForm::from_coeffs(f, coeffs)
                })
                .collect();
            match binary_gcd_all(&forms)? {
                None => Ok(LineSection::Contained),
                Some(g) => Ok(LineSection::Finite(binary_profile(&g)?)),
            }
        }
        _ => match solve_plane(&pulls, true, seed)? {
            PlaneSolution::PositiveDimensional => Ok(LineSection::Contained),
            PlaneSolution::Finite(pts) => {
                let mut v: Vec<(usize, usize)> = pts.iter().map(|p| (p.orbit, p.multiplicity.unwrap_or(1))).collect();
                v.sort();
                Ok(LineSection::Finite(v))
            }
        },
    }
}

/// Tangency route for surfaces: `beta` lies on the tangent plane at `f(s)`
/// iff the 4x4 minors of `(d_0 f, d_1 f, d_2 f, beta)` vanish at `s`.
pub fn surface_tangent_lines(x: &ParametricVariety<PrimeField>, beta: &[u64], seed: u64) -> Result<GeometricCounts, CensusError> {
    let r = &x.source;
    let cols: Vec<Vec<MultiPoly<PrimeField>>> = (0..3).map(|i| x.components.iter().map(|c| c.partial(i, 1)).collect()).collect();
    let rows = x.n + 1;
    let mut minors = Vec::new();
    for a in 0..rows {
        for b in a + 1..rows {
            for c in b + 1..rows {
                for d in c + 1..rows {
                    let m: Vec<Vec<MultiPoly<PrimeField>>> = [a, b, c, d]
                        .iter()
                        .map(|&i| vec![cols[0][i].clone(), cols[1][i].clone(), cols[2][i].clone(), MultiPoly::constant(r, beta[i])])
                        .collect();
                    let det = linalg::det_multi(&m);
                    if !det.is_zero() {
                        minors.push(det);
                    }
                }
            }
        }
    }
    let mut out = GeometricCounts {
        route: "tangency minors on the source".into(),
        coverage: Coverage::Tangency,
        counts: Default::default(),
        problem: None,
    };
    if minors.is_empty() {
        out.problem = Some("every tangent plane contains the base point".into());
        return Ok(out);
    }
    let pts = match solve_plane(&minors, false, seed)? {
        PlaneSolution::PositiveDimensional => {
            out.problem = Some("tangency locus is positive dimensional".into());
            return Ok(out);
        }
        PlaneSolution::Finite(pts) => pts,
    };
    let mut point_counts: std::collections::BTreeMap<String, u64> = Default::default();
    for (i, pt) in pts.iter().enumerate() {
        let k = pt.field.clone();
        let lifted = x.lift_to(&k)?;
        let image = lifted.eval(&pt.coords);
        let beta_k: Vec<ExtElem> = beta.iter().map(|c| k.from_base(*c)).collect();
        if image.iter().all(|c| k.is_zero(c)) {
            out.problem = Some("tangency point is a base point of the map".into());
            return Ok(out);
        }
        match parametric_line_profile(&lifted, &beta_k, &image, seed ^ (i as u64) << 16) {
            Ok(LineSection::Contained) => {
                out.problem = Some("a tangent line through the base point lies in the variety".into());
                return Ok(out);
            }
            Ok(sec) => {
                let key = sec.key().unwrap();
                *point_counts.entry(key).or_insert(0) += pt.orbit as u64;
            }
            Err(CensusError::BadDirection) => {
                out.problem = Some("base point lies on the variety".into());
                return Ok(out);
            }
            Err(e) => return Err(e),
        }
    }
    for (key, n) in point_counts {
        let tangencies = crate::census::key_parts(&key).iter().filter(|&&m| m >= 2).count() as u64;
        if tangencies == 0 || n % tangencies != 0 {
            out.problem = Some(format!("tangency point count {n} inconsistent with profile {key}"));
            return Ok(out);
        }
        out.counts.insert(key, n / tangencies);
    }
    Ok(out)
}

impl LineClassifier for ParametricVariety<PrimeField> {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn ambient_dim(&self) -> usize {
        self.n
    }
    fn field(&self) -> &PrimeField {
        &self.source.field
    }
    fn classify(&self, beta: &[u64], dir: &[u64]) -> Result<LineSection, CensusError> {
        // fixed seed per line keeps the census independent of scheduling
        let seed = beta.iter().chain(dir).fold(0xcbf2_9ce4_8422_2325u64, |h, &c| (h ^ c).wrapping_mul(0x1000_0000_01b3));
        parametric_line_profile(self, beta, dir, seed)
    }
    fn contains_point(&self, pt: &[u64]) -> Result<bool, CensusError> {
        let f = &self.source.field;
        let forms = linalg::nullspace(f, &vec![pt.to_vec()], self.n + 1);
        let pulls: Vec<MultiPoly<PrimeField>> = forms.iter().map(|l| self.pull_form(l)).collect();
        if self.m == 1 {
            let forms: Vec<BinaryForm<PrimeField>> = pulls
                .iter()
                .map(|g| {
                    let d = self.degree() as usize;
                    BinaryForm::from_coeffs(f, (0..=d).map(|i| g.coeff(&[(d - i) as u32, i as u32])).collect())
                })
                .collect();
            return Ok(match binary_gcd_all(&forms)? {
                None => true,
                Some(g) => g.degree > 0,
            });
        }
        Ok(match solve_plane(&pulls, false, 0x7)? {
            PlaneSolution::PositiveDimensional => true,
            PlaneSolution::Finite(p) => !p.is_empty(),
        })
    }
    fn line_cost(&self) -> u128 {
        (self.source.field.modulus() as u128).pow(self.m as u32)
    }
    fn geometric(&self, beta: &[u64], seed: u64) -> Result<Option<GeometricCounts>, CensusError> {
        if self.m == 2 && self.n >= 3 {
            return surface_tangent_lines(self, beta, seed).map(Some);
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GalleryError {
    #[error("unknown builtin {0:?}; choices: {choices}", choices = BUILTIN_NAMES.join(", "))]
    Unknown(String),
    #[error("bad random-ci spec {0:?}; expected random-ci:N:d1,d2,..:seed")]
    BadRandomCi(String),
    #[error("bad parametrization: {0}")]
    BadParametrization(String),
    #[error("no valid projection found after {0} draws")]
    NoProjection(usize),
}

#[derive(Debug, Clone)]
pub enum Variety {
    Implicit(ImplicitVariety<Rationals>),
    Parametric(ParametricVariety<Rationals>),
}

/// Reduction of a [`Variety`] modulo a prime.
#[derive(Debug, Clone)]
pub enum ReducedVariety {
    Implicit(ImplicitVariety<PrimeField>),
    Parametric(ParametricVariety<PrimeField>),
}

impl ReducedVariety {
    pub fn classifier(&self) -> &dyn LineClassifier {
        match self {
            ReducedVariety::Implicit(x) => x,
            ReducedVariety::Parametric(x) => x,
        }
    }
}

impl Variety {
    pub fn name(&self) -> &str {
        match self {
            Variety::Implicit(x) => &x.name,
            Variety::Parametric(x) => &x.name,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Variety::Implicit(x) => x.n,
            Variety::Parametric(x) => x.n,
        }
    }

    pub fn reduce(&self, p: u64) -> Result<ReducedVariety, CensusError> {
        Ok(match self {
            Variety::Implicit(x) => ReducedVariety::Implicit(x.reduce(p)?),
            Variety::Parametric(x) => {
                let r = x.reduce(p)?;
                if let Some(s) = r.rational_base_point() {
                    return Err(CensusError::Other(format!("parametrization has the base point {s:?} modulo {p}")));
                }
                ReducedVariety::Parametric(r)
            }
        })
    }
}

/// A chart-form presentation around `L = {x = 0}`: generators in `x1..x_{N-1}, z`.
#[derive(Debug, Clone)]
pub struct ChartForm {
    pub n: usize,
    pub generators: Vec<MultiPoly<Rationals>>,
}

#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub name: String,
    pub variety: Variety,
    /// Implicit equations when the main presentation is parametric.
    pub implicit: Option<ImplicitVariety<Rationals>>,
    pub chart: Option<ChartForm>,
    /// Pseudorandom choices made while building the entry.
    pub log: Vec<String>,
}

fn implicit(name: &str, n: usize, gens: &[&str], dim: usize) -> ImplicitVariety<Rationals> {
    let r = projective_ring(&Rationals, n);
    let g = gens.iter().map(|t| parse_poly(&r, t).expect("builtin parses")).collect();
    ImplicitVariety::new(name, n, g, Some(dim)).expect("builtin is homogeneous")
}

fn parametric(name: &str, m: usize, comps: &[&str]) -> ParametricVariety<Rationals> {
    let r = source_ring(&Rationals, m);
    let c = comps.iter().map(|t| parse_poly(&r, t).expect("builtin parses")).collect();
    ParametricVariety::new(name, c).expect("builtin is valid")
}

fn chart(n: usize, gens: &[&str]) -> ChartForm {
    let r = crate::chart::ambient_ring(&Rationals, n);
    ChartForm { n, generators: gens.iter().map(|t| parse_poly(&r, t).expect("builtin parses")).collect() }
}

const VERONESE: [&str; 6] = ["S0^2", "S0*S1", "S0*S2", "S1^2", "S1*S2", "S2^2"];

fn veronese_minors() -> Vec<&'static str> {
    vec![
        "X0*X3 - X1^2",
        "X0*X4 - X1*X2",
        "X0*X5 - X2^2",
        "X1*X4 - X2*X3",
        "X1*X5 - X2*X4",
        "X3*X5 - X4^2",
    ]
}

pub const DEFAULT_PROJECTION_SEED: u64 = 42;

/// `name`, `projected-veronese-p4[:seed]` or `random-ci:N:d1,d2,..:seed`.
pub fn builtin(name: &str) -> Result<GalleryEntry, GalleryError> {
    let mut log = Vec::new();
    let entry = |variety, implicit, chart, log| GalleryEntry { name: name.to_string(), variety, implicit, chart, log };
    Ok(match name {
        "twisted-cubic" => entry(
            Variety::Implicit(implicit(name, 3, &["X0*X2 - X1^2", "X0*X3 - X1*X2", "X1*X3 - X2^2"], 1)),
            None,
            Some(chart(3, &["x1 - z^2", "x2 - z*x1"])),
            log,
        ),
        "rational-normal-quartic" => entry(
            Variety::Implicit(implicit(
                name,
                4,
                &[
                    "X0*X2 - X1^2",
                    "X0*X3 - X1*X2",
                    "X0*X4 - X1*X3",
                    "X1*X3 - X2^2",
                    "X1*X4 - X2*X3",
                    "X2*X4 - X3^2",
                ],
                1,
            )),
            None,
            Some(chart(4, &["x1 - z^2", "x2 - z*x1", "x3 - z*x2"])),
            log,
        ),
        "parabola" => entry(Variety::Implicit(implicit(name, 2, &["X0*X2 - X1^2"], 1)), None, Some(chart(2, &["x1 - z^2"])), log),
        "veronese-p5" => entry(
            Variety::Parametric(parametric(name, 2, &VERONESE)),
            Some(implicit(name, 5, &veronese_minors(), 2)),
            None,
            log,
        ),
        _ => {
            if let Some(rest) = name.strip_prefix("projected-veronese-p4") {
                let seed = match rest.strip_prefix(':') {
                    None if rest.is_empty() => DEFAULT_PROJECTION_SEED,
                    Some(s) => s.parse().map_err(|_| GalleryError::Unknown(name.into()))?,
                    None => return Err(GalleryError::Unknown(name.into())),
                };
                let (x, matrix_log) = projected_veronese(seed)?;
                log.extend(matrix_log);
                entry(Variety::Parametric(x), None, None, log)
            } else if name.starts_with("random-ci") {
                let (x, l) = random_ci(name)?;
                log.push(l);
                entry(Variety::Implicit(x), None, None, log)
            } else {
                return Err(GalleryError::Unknown(name.into()));
            }
        }
    })
}

/// Symmetric matrix of a point of `P^5` in the Veronese coordinates.
fn symmetric(c: &[Rational]) -> Vec<Vec<Rational>> {
    vec![
        vec![c[0].clone(), c[1].clone(), c[2].clone()],
        vec![c[1].clone(), c[3].clone(), c[4].clone()],
        vec![c[2].clone(), c[4].clone(), c[5].clone()],
    ]
}

/// Five seeded combinations of the six quadratic monomials; the projection
/// center must be off the secant cubic (hence off the surface too).
pub fn projected_veronese(seed: u64) -> Result<(ParametricVariety<Rationals>, Vec<String>), GalleryError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = Vec::new();
    let q = Rationals;
    let src = source_ring(&q, 2);
    let monos: Vec<MultiPoly<Rationals>> = VERONESE.iter().map(|t| parse_poly(&src, t).unwrap()).collect();
    for draw in 0..10 {
        let m: Vec<Vec<Rational>> =
            (0..5).map(|_| (0..6).map(|_| Rational::from_int(rng.gen_range(-3..=3))).collect()).collect();
        let text: Vec<String> =
            m.iter().map(|r| format!("[{}]", r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))).collect();
        let kernel = linalg::nullspace(&q, &m, 6);
        if kernel.len() != 1 {
            log.push(format!("draw {draw}: matrix {} rejected (rank < 5)", text.join(",")));
            continue;
        }
        let center = &kernel[0];
        if linalg::det(&q, &symmetric(center)).is_zero() {
            log.push(format!("draw {draw}: matrix {} rejected (center on the secant variety)", text.join(",")));
            continue;
        }
        log.push(format!("draw {draw}: matrix {} accepted", text.join(",")));
        let comps = m
            .iter()
            .map(|row| row.iter().zip(&monos).fold(MultiPoly::zero(&src), |acc, (c, mono)| acc.add(&mono.scale(c))))
            .collect();
        let name = if seed == DEFAULT_PROJECTION_SEED { "projected-veronese-p4".to_string() } else { format!("projected-veronese-p4:{seed}") };
        return Ok((ParametricVariety::new(&name, comps)?, log));
    }
    Err(GalleryError::NoProjection(10))
}

/// `random-ci:N:d1,d2,..:seed`: dense random forms with coefficients in `[-9, 9]`.
pub fn random_ci(spec: &str) -> Result<(ImplicitVariety<Rationals>, String), GalleryError> {
    let bad = || GalleryError::BadRandomCi(spec.to_string());
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 4 || parts[0] != "random-ci" {
        return Err(bad());
    }
    let n: usize = parts[1].parse().map_err(|_| bad())?;
    let degs: Vec<u32> = parts[2].split(',').map(|d| d.parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let seed: u64 = parts[3].parse().map_err(|_| bad())?;
    if n < 2 || degs.is_empty() || degs.len() >= n || degs.contains(&0) {
        return Err(bad());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = projective_ring(&Rationals, n);
    let gens: Vec<MultiPoly<Rationals>> = degs
        .iter()
        .map(|&d| {
            let terms: Vec<_> = homogeneous_exponents(n + 1, d)
                .into_iter()
                .map(|e| (e, Rational::from_int(rng.gen_range(-9..=9))))
                .collect();
            MultiPoly::from_terms(&r, terms)
        })
        .collect();
    let log = gens.iter().map(|g| g.to_text()).collect::<Vec<_>>().join("; ");
    let x = ImplicitVariety::new(spec, n, gens, None).map_err(|_| bad())?;
    Ok((x, format!("generators: {log}")))
}

fn homogeneous_exponents(nvars: usize, d: u32) -> Vec<crate::poly::Exp> {
    let mut out = Vec::new();
    let mut cur: crate::poly::Exp = crate::poly::Exp::from_elem(0, nvars);
    fn rec(i: usize, left: u32, cur: &mut crate::poly::Exp, out: &mut Vec<crate::poly::Exp>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// Names with a one-line description, for `gallery list`.
pub fn list() -> Vec<(&'static str, &'static str)> {
    vec![
        ("twisted-cubic", "rational normal curve of degree 3 in P^3"),
        ("rational-normal-quartic", "rational normal curve of degree 4 in P^4"),
        ("parabola", "smooth conic in P^2"),
        ("veronese-p5", "Veronese surface in P^5, parametric"),
        ("projected-veronese-p4", "seeded projection of the Veronese surface to P^4 (suffix :seed, default 42)"),
        ("random-ci", "random complete intersection, random-ci:N:d1,d2,..:seed"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_name_lists_choices() {
        let e = builtin("klein-quartic").unwrap_err();
        let msg = e.to_string();
        for n in BUILTIN_NAMES {
            assert!(msg.contains(n));
        }
    }

    #[test]
    fn projection_is_reproducible() {
        let a = builtin("projected-veronese-p4").unwrap();
        let b = builtin("projected-veronese-p4").unwrap();
        assert_eq!(a.log, b.log);
        assert!(a.log.last().unwrap().contains("accepted"));
        let Variety::Parametric(x) = &a.variety else { panic!() };
        assert_eq!((x.m, x.n, x.components.len()), (2, 4, 5));
    }

    #[test]
    fn random_ci_spec() {
        let e = builtin("random-ci:3:2,2:7").unwrap();
        let Variety::Implicit(x) = &e.variety else { panic!() };
        assert_eq!((x.n, x.dim, x.generators.len()), (3, 1, 2));
        assert!(builtin("random-ci:3:2,2").is_err());
        assert!(builtin("random-ci:3:2,2,2:1").is_err());
    }

    #[test]
    fn conic_line_profiles() {
        let p = builtin("parabola").unwrap();
        let Variety::Implicit(x) = &p.variety else { panic!() };
        let x = x.reduce(7).unwrap();
        let tangent = crate::census::line_profile(&x, &[1, 0, 0], &[0, 1, 0]).unwrap();
        assert_eq!(tangent.key().unwrap(), "{2}");
        let para = parametric("parabola", 1, &["S0^2", "S0*S1", "S1^2"]).reduce(7).unwrap();
        let t2 = parametric_line_profile(&para, &[1, 0, 0], &[0, 1, 0], 0).unwrap();
        assert_eq!(t2, tangent);
    }

    #[test]
    fn veronese_local_lengths() {
        let v = parametric("v", 2, &VERONESE).reduce(11).unwrap();
        // chord through v(1:0:0) and v(0:1:0)
        let a = v.eval(&[1, 0, 0]);
        let b = v.eval(&[0, 1, 0]);
        assert_eq!(parametric_line_profile(&v, &a, &b, 1).unwrap().key().unwrap(), "{1,1}");
        // tangent line at v(1:0:0) in direction d/dS1
        let t: Vec<u64> = v.components.iter().map(|c| c.partial(1, 1).eval(&[1, 0, 0])).collect();
        assert_eq!(parametric_line_profile(&v, &a, &t, 1).unwrap().key().unwrap(), "{2}");
    }
}

//! Exhaustive censuses of the lines through a base point over `F_p`.

mod cover;
mod dimension;
mod geometric;
mod sample;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{ArithError, ExtField, Field, FiniteField, PrimeField, Rationals};
use crate::elim::ElimError;
use crate::linalg;
use crate::poly::{binary_gcd_all, binary_profile, BinaryForm, MultiPoly, PolyError, PolyRing, UniPoly};

pub use cover::{secant_locus_cover, CoverReport};
pub use dimension::{dimension_estimate, DimensionEstimate, RESIDUAL_THRESHOLD};
pub use geometric::{curve_special_lines, Coverage, GeometricCounts};
pub use sample::{smooth_sample, SampleReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CensusError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Elim(#[from] ElimError),
    #[error("direction is zero or parallel to the base point")]
    BadDirection,
    #[error("base point lies on the variety")]
    BaseOnVariety,
    #[error("generators must be homogeneous in X0..X{0}")]
    NotHomogeneous(usize),
    #[error("instance too large: {needed} evaluations exceed the budget {budget}")]
    TooLarge { needed: u128, budget: u128 },
    #[error("no general base point after {0} draws")]
    NoGeneralBeta(usize),
    #[error("no testable samples")]
    NoTestableSamples,
    #[error("coefficient {0} does not reduce modulo {1}")]
    BadReduction(String, u64),
    #[error("k must be at least 2")]
    BadK,
    #[error(transparent)]
    Chart(#[from] crate::chart::ChartError),
    #[error("{0}")]
    Other(String),
}

/// Projective variety `V(G_1..G_c)` in `P^N`, coordinates `X0..XN`.
#[derive(Debug, Clone)]
pub struct ImplicitVariety<F: Field> {
    pub name: String,
    pub n: usize,
    pub ring: Arc<PolyRing<F>>,
    pub generators: Vec<MultiPoly<F>>,
    /// `N - c` for complete intersections; given explicitly otherwise.
    pub dim: usize,
}

pub fn projective_ring<F: Field>(field: &F, n: usize) -> Arc<PolyRing<F>> {
    PolyRing::from_names(field, (0..=n).map(|i| format!("X{i}")).collect())
}

impl<F: Field> ImplicitVariety<F> {
    pub fn new(name: &str, n: usize, generators: Vec<MultiPoly<F>>, dim: Option<usize>) -> Result<Self, CensusError> {
        let ring = generators.first().ok_or(CensusError::NotHomogeneous(n))?.ring().clone();
        if ring.nvars() != n + 1 || generators.iter().any(|g| g.is_zero() || !g.is_homogeneous()) {
            return Err(CensusError::NotHomogeneous(n));
        }
        let dim = dim.unwrap_or(n.saturating_sub(generators.len()));
        Ok(ImplicitVariety { name: name.to_string(), n, ring, generators, dim })
    }

    pub fn codim(&self) -> usize {
        self.n - self.dim
    }

    pub fn is_complete_intersection(&self) -> bool {
        self.generators.len() == self.codim()
    }

    /// `prod deg G_s`, the degree for complete intersections.
    pub fn degree_bound(&self) -> u32 {
        self.generators.iter().map(|g| g.total_degree().unwrap_or(0)).product()
    }

    pub fn contains(&self, pt: &[F::Elem]) -> bool {
        let f = &self.ring.field;
        self.generators.iter().all(|g| f.is_zero(&g.eval(pt)))
    }

    /// Ambient Jacobian rank at a point.
    pub fn jacobian_rank(&self, pt: &[F::Elem]) -> usize {
        crate::hilbert::jacobian_rank(&self.generators, pt)
    }
}

impl ImplicitVariety<Rationals> {
    pub fn reduce(&self, p: u64) -> Result<ImplicitVariety<PrimeField>, CensusError> {
        let f = PrimeField::new(p)?;
        let ring = PolyRing::from_names(&f, self.ring.vars.clone());
        let mut gens = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            gens.push(
                g.try_map_coeffs(&ring, |c| f.from_rational(c))
                    .map_err(|_| CensusError::BadReduction(g.to_text(), p))?,
            );
        }
        if gens.iter().any(|g| g.is_zero() || !g.is_homogeneous()) {
            return Err(CensusError::BadReduction("a generator vanishes".into(), p));
        }
        Ok(ImplicitVariety { name: self.name.clone(), n: self.n, ring, generators: gens, dim: self.dim })
    }
}

impl<F: FiniteField> ImplicitVariety<F> {
    pub fn lift_to(&self, target: &ExtField) -> Result<ImplicitVariety<ExtField>, CensusError> {
        let ring = PolyRing::from_names(target, self.ring.vars.clone());
        let src = &self.ring.field;
        let mut gens = Vec::new();
        for g in &self.generators {
            gens.push(g.try_map_coeffs(&ring, |c| src.lift(c, target))?);
        }
        Ok(ImplicitVariety { name: self.name.clone(), n: self.n, ring, generators: gens, dim: self.dim })
    }
}

/// Intersection of a line with `X`: irreducible factors of the gcd of the
/// restricted forms as `(degree, multiplicity)`, or containment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineSection {
    Contained,
    Finite(Vec<(usize, usize)>),
}

impl LineSection {
    /// Geometric multiplicities, sorted descending.
    pub fn multiplicities(&self) -> Option<Vec<usize>> {
        match self {
            LineSection::Contained => None,
            LineSection::Finite(f) => {
                let mut v: Vec<usize> = f.iter().flat_map(|&(d, m)| std::iter::repeat(m).take(d)).collect();
                v.sort_unstable_by(|a, b| b.cmp(a));
                Some(v)
            }
        }
    }

    pub fn total(&self) -> Option<usize> {
        self.multiplicities().map(|v| v.iter().sum())
    }

    pub fn key(&self) -> Option<String> {
        self.multiplicities().map(|m| profile_key(&m))
    }

    /// All intersection points are rational.
    pub fn is_rational(&self) -> bool {
        matches!(self, LineSection::Finite(f) if f.iter().all(|&(d, _)| d == 1))
    }
}

/// `{2,1}`-style key of a multiset of multiplicities.
pub fn profile_key(mults: &[usize]) -> String {
    let mut v = mults.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    let parts: Vec<String> = v.iter().map(|m| m.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Restrictions `G_s(t0 beta + t1 d)` as binary forms.
pub fn restricted_forms<F: Field>(x: &ImplicitVariety<F>, beta: &[F::Elem], dir: &[F::Elem]) -> Vec<BinaryForm<F>> {
    let f = &x.ring.field;
    let images: Vec<UniPoly<F>> =
        beta.iter().zip(dir).map(|(b, d)| UniPoly::new(f, vec![b.clone(), d.clone()])).collect();
    x.generators
        .iter()
        .map(|g| BinaryForm::new(g.total_degree().unwrap_or(0) as usize, g.substitute_uni(&images)))
        .collect()
}

pub fn independent<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> bool {
    linalg::rank(f, &vec![a.to_vec(), b.to_vec()]) == 2
}

pub fn line_profile<F: FiniteField>(x: &ImplicitVariety<F>, beta: &[F::Elem], dir: &[F::Elem]) -> Result<LineSection, CensusError> {
    if !independent(&x.ring.field, beta, dir) {
        return Err(CensusError::BadDirection);
    }
    let forms = restricted_forms(x, beta, dir);
    match binary_gcd_all(&forms)? {
        None => Ok(LineSection::Contained),
        Some(g) => Ok(LineSection::Finite(binary_profile(&g)?)),
    }
}

/// Points `[t0 : t1]` of the rational roots of the section, as `t0 beta + t1 d`.
pub fn rational_section_points<F: FiniteField>(
    x: &ImplicitVariety<F>,
    beta: &[F::Elem],
    dir: &[F::Elem],
) -> Result<Vec<(Vec<F::Elem>, usize)>, CensusError> {
    let f = &x.ring.field;
    let forms = restricted_forms(x, beta, dir);
    let Some(g) = binary_gcd_all(&forms)? else { return Ok(Vec::new()) };
    let mut out = Vec::new();
    if !g.affine.is_constant() {
        for t in crate::poly::roots(&g.affine)? {
            let m = g.affine.order_at(&t).unwrap_or(0);
            out.push((beta.iter().zip(dir).map(|(b, d)| f.add(b, &f.mul(&t, d))).collect(), m));
        }
    }
    if g.drop_at_infinity() > 0 {
        out.push((dir.to_vec(), g.drop_at_infinity()));
    }
    Ok(out)
}

/// All points of `P^m(F_p)`, first nonzero coordinate 1, in a fixed order.
pub fn projective_points(p: u64, m: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..=m {
        let free = m - lead;
        let total = p.pow(free as u32);
        for code in 0..total {
            let mut v = vec![0u64; m + 1];
            v[lead] = 1;
            let mut c = code;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = c % p;
                c /= p;
            }
            out.push(v);
        }
    }
    out
}

/// `(p^N - 1)/(p - 1)` directions in the coordinate hyperplane `X_i = 0`,
/// `i` the first nonzero coordinate of `beta`.
pub fn directions(p: u64, beta: &[u64]) -> Vec<Vec<u64>> {
    let n = beta.len() - 1;
    let i = beta.iter().position(|&b| b != 0).expect("nonzero base point");
    projective_points(p, n - 1)
        .into_iter()
        .map(|mut v| {
            v.insert(i, 0);
            v
        })
        .collect()
}

pub fn lines_through_point(p: u64, n: usize) -> u128 {
    (p as u128).pow(n as u32).saturating_sub(1) / (p as u128 - 1)
}

pub fn random_projective_point<R: Rng>(p: u64, n: usize, rng: &mut R) -> Vec<u64> {
    loop {
        let v: Vec<u64> = (0..=n).map(|_| rng.gen_range(0..p)).collect();
        if v.iter().any(|&c| c != 0) {
            return crate::elim::normalize_point(&PrimeField::new(p).unwrap(), v);
        }
    }
}

/// Rational points where the Jacobian rank drops below the codimension.
/// Only meaningful for complete intersections or with an explicit dimension.
pub fn rational_singular_points(x: &ImplicitVariety<PrimeField>) -> Vec<Vec<u64>> {
    let p = x.ring.field.modulus();
    let codim = x.codim();
    projective_points(p, x.n).into_par_iter().filter(|q| x.contains(q) && x.jacobian_rank(q) < codim).collect()
}

/// Anything whose lines through a point can be classified.
pub trait LineClassifier: Sync {
    fn name(&self) -> String;
    fn ambient_dim(&self) -> usize;
    fn field(&self) -> &PrimeField;
    fn classify(&self, beta: &[u64], dir: &[u64]) -> Result<LineSection, CensusError>;
    fn contains_point(&self, pt: &[u64]) -> Result<bool, CensusError>;
    /// Extra genericity requirement on the base point beyond `beta` not in `X`.
    fn beta_problem(&self, _beta: &[u64]) -> Option<String> {
        None
    }
    /// Cost of classifying one line, for the budget guard.
    fn line_cost(&self) -> u128 {
        1
    }
    /// Closure-point counts of the special lines, where a route exists.
    fn geometric(&self, _beta: &[u64], _seed: u64) -> Result<Option<GeometricCounts>, CensusError> {
        Ok(None)
    }
}

impl LineClassifier for ImplicitVariety<PrimeField> {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn ambient_dim(&self) -> usize {
        self.n
    }
    fn field(&self) -> &PrimeField {
        &self.ring.field
    }
    fn classify(&self, beta: &[u64], dir: &[u64]) -> Result<LineSection, CensusError> {
        line_profile(self, beta, dir)
    }
    fn contains_point(&self, pt: &[u64]) -> Result<bool, CensusError> {
        Ok(self.contains(pt))
    }
    fn beta_problem(&self, beta: &[u64]) -> Option<String> {
        if self.n == 3 && self.dim == 1 && self.is_complete_intersection() {
            let f = &self.ring.field;
            if let Some(s) = self.generators.iter().position(|g| f.is_zero(&g.eval(beta))) {
                return Some(format!("generator {s} vanishes at the base point"));
            }
        }
        None
    }
    fn geometric(&self, beta: &[u64], seed: u64) -> Result<Option<GeometricCounts>, CensusError> {
        if self.n == 3 && self.dim == 1 && self.is_complete_intersection() {
            return curve_special_lines(self, beta, seed).map(Some);
        }
        Ok(None)
    }
}

/// Line counts through one base point.
#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    pub variety: String,
    pub prime: u64,
    pub beta: Vec<u64>,
    pub lines: u128,
    /// Lines meeting `X` in nothing.
    pub missing: u64,
    pub contained: u64,
    /// Rational lines per profile key.
    pub rational: BTreeMap<String, u64>,
    pub geometric: Option<GeometricCounts>,
}

impl CensusReport {
    /// Geometric counts where the geometric route covers a profile,
    /// rational counts elsewhere.
    pub fn merged(&self) -> BTreeMap<String, u64> {
        let mut out = self.rational.clone();
        if let Some(g) = &self.geometric {
            out.retain(|k, _| !g.covers(k));
            for (k, v) in &g.counts {
                out.insert(k.clone(), *v);
            }
        }
        out
    }

    /// Merged count for a profile key, 0 if absent.
    pub fn count(&self, key: &str) -> u64 {
        self.merged().get(key).copied().unwrap_or(0)
    }

    /// Merged count of lines with total intersection degree at least `k`.
    pub fn count_total_at_least(&self, k: usize) -> u64 {
        self.merged().iter().filter(|(key, _)| key_total(key) >= k).map(|(_, v)| v).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "variety": self.variety,
            "prime": self.prime,
            "beta": self.beta,
            "lines": self.lines.to_string(),
            "missing": self.missing,
            "contained": self.contained,
            "rational_counts": self.rational,
            "geometric_counts": self.geometric.as_ref().map(|g| g.to_json()),
            "counts": self.merged(),
        })
    }
}

pub fn key_total(key: &str) -> usize {
    key.trim_matches(|c| c == '{' || c == '}').split(',').filter(|s| !s.is_empty()).map(|s| s.parse::<usize>().unwrap_or(0)).sum()
}

pub fn key_parts(key: &str) -> Vec<usize> {
    key.trim_matches(|c| c == '{' || c == '}').split(',').filter(|s| !s.is_empty()).map(|s| s.parse::<usize>().unwrap_or(0)).collect()
}

pub const DEFAULT_BUDGET: u128 = 20_000_000;

/// Classifies every line through `beta`.
pub fn census_through_point<C: LineClassifier + ?Sized>(
    x: &C,
    beta: &[u64],
    budget: u128,
    seed: u64,
) -> Result<CensusReport, CensusError> {
    let p = x.field().modulus();
    let lines = lines_through_point(p, x.ambient_dim());
    let needed = lines.saturating_mul(x.line_cost());
    if needed > budget {
        return Err(CensusError::TooLarge { needed, budget });
    }
    if x.contains_point(beta)? {
        return Err(CensusError::BaseOnVariety);
    }
    let dirs = directions(p, beta);
    let sections: Result<Vec<LineSection>, CensusError> = dirs.par_iter().map(|d| x.classify(beta, d)).collect();
    let mut rational = BTreeMap::new();
    let (mut missing, mut contained) = (0, 0);
    for s in sections? {
        match s.key() {
            None => contained += 1,
            Some(k) if k == "{}" => missing += 1,
            Some(k) => *rational.entry(k).or_insert(0) += 1,
        }
    }
    let geometric = x.geometric(beta, seed)?;
    Ok(CensusReport { variety: x.name(), prime: p, beta: beta.to_vec(), lines, missing, contained, rational, geometric })
}

/// One base-point draw of a general census.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaDraw {
    pub beta: Vec<u64>,
    pub accepted: bool,
    pub reason: String,
}

impl BetaDraw {
    pub fn to_json(&self) -> Value {
        json!({"beta": self.beta, "accepted": self.accepted, "reason": self.reason})
    }
}

pub const MAX_BETA_DRAWS: usize = 10;

/// Census through a pseudorandom base point, redrawn (up to 10 times) until
/// `beta` is off `X`, meets the classifier's genericity requirement, no line
/// through it lies in `X`, and the geometric route (if any) is finite.
pub fn general_census<C: LineClassifier + ?Sized>(
    x: &C,
    seed: u64,
    budget: u128,
) -> Result<(CensusReport, Vec<BetaDraw>), CensusError> {
    let p = x.field().modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut draws = Vec::new();
    for _ in 0..MAX_BETA_DRAWS {
        let beta = random_projective_point(p, x.ambient_dim(), &mut rng);
        let reject = |draws: &mut Vec<BetaDraw>, reason: String| {
            draws.push(BetaDraw { beta: beta.clone(), accepted: false, reason });
        };
        if x.contains_point(&beta)? {
            reject(&mut draws, "base point on the variety".into());
            continue;
        }
        if let Some(problem) = x.beta_problem(&beta) {
            reject(&mut draws, problem);
            continue;
        }
        let report = match census_through_point(x, &beta, budget, rng.gen()) {
            Ok(r) => r,
            Err(CensusError::Elim(e)) => {
                reject(&mut draws, format!("special-line scheme: {e}"));
                continue;
            }
            Err(e) => return Err(e),
        };
        if report.contained > 0 {
            reject(&mut draws, format!("{} lines through the base point lie in the variety", report.contained));
            continue;
        }
        if let Some(g) = &report.geometric {
            if let Some(problem) = &g.problem {
                reject(&mut draws, problem.clone());
                continue;
            }
        }
        draws.push(BetaDraw { beta: beta.clone(), accepted: true, reason: "general".into() });
        return Ok((report, draws));
    }
    Err(CensusError::NoGeneralBeta(MAX_BETA_DRAWS))
}

//! Explicit equations of aligned ordered Hilbert schemes of line sections and
//! the Jacobian rank oracle.

use std::fmt;
use std::sync::Arc;

use crate::arith::Field;
use crate::linalg;
use crate::poly::{rem_mod_product, MultiPoly, PolyError, PolyRing};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HilbertError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("profile parts must be positive and sum to at least 1")]
    BadProfile,
    #[error("generator {0} is identically zero")]
    ZeroGenerator(usize),
    #[error("point is not on the scheme: equation {index} ({text}) does not vanish")]
    NotOnScheme { index: usize, text: String },
    #[error("point has {got} marked points, profile has {want} parts")]
    PointShape { got: usize, want: usize },
    #[error("no two marked points coincide")]
    NoCoincidence,
    #[error("variable name {0:?} collides with a marked-point variable")]
    VariableClash(String),
}

/// Ordered multiplicities `(k_1, .., k_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile(Vec<usize>);

impl Profile {
    pub fn new(parts: Vec<usize>) -> Result<Self, HilbertError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(HilbertError::BadProfile);
        }
        Ok(Profile(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn k(&self) -> usize {
        self.0.iter().sum()
    }

    /// Merge part `t` into part `s` (`s < t`).
    pub fn merged(&self, s: usize, t: usize) -> Profile {
        let mut parts = self.0.clone();
        parts[s] += parts[t];
        parts.remove(t);
        Profile(parts)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl std::str::FromStr for Profile {
    type Err = HilbertError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches(['(', '{']).trim_end_matches([')', '}']);
        let parts: Result<Vec<usize>, _> = s.split(',').map(|p| p.trim().parse::<usize>()).collect();
        Profile::new(parts.map_err(|_| HilbertError::BadProfile)?)
    }
}

/// Equations `h_{s,l}` of `OH_(k_1..k_r)` in the parameter variables plus `z1..zr`.
#[derive(Debug, Clone)]
pub struct OHPresentation<F: Field> {
    pub ring: Arc<PolyRing<F>>,
    pub num_params: usize,
    pub profile: Profile,
    pub num_generators: usize,
    /// `equations[s * k + l]` is `h_l` for generator `s`.
    pub equations: Vec<MultiPoly<F>>,
}

impl<F: Field> OHPresentation<F> {
    pub fn expected_dimension(&self) -> i64 {
        self.num_params as i64 + self.profile.r() as i64 - (self.num_generators * self.profile.k()) as i64
    }

    pub fn expected_codimension(&self) -> usize {
        self.num_generators * self.profile.k()
    }

    pub fn equation_texts(&self) -> Vec<String> {
        self.equations.iter().map(|e| e.to_text()).collect()
    }
}

/// Names `z1..zr` of the marked-point variables.
pub fn point_var_names(r: usize) -> Vec<String> {
    (1..=r).map(|j| format!("z{j}")).collect()
}

/// Builds the presentation from generators in a ring whose variable `z`
/// is the line coordinate; all other variables are parameters.
pub fn oh_equations<F: Field>(
    generators: &[MultiPoly<F>],
    z: &str,
    profile: &Profile,
) -> Result<OHPresentation<F>, HilbertError> {
    let src = generators.first().ok_or(HilbertError::ZeroGenerator(0))?.ring().clone();
    if let Some(i) = generators.iter().position(|g| g.is_zero()) {
        return Err(HilbertError::ZeroGenerator(i));
    }
    let zi = src.index(z)?;
    let params: Vec<String> = src.vars.iter().enumerate().filter(|(i, _)| *i != zi).map(|(_, v)| v.clone()).collect();
    let pnames = point_var_names(profile.r());
    if let Some(clash) = params.iter().find(|p| pnames.contains(p)) {
        return Err(HilbertError::VariableClash(clash.clone()));
    }
    let mut work_vars = params.clone();
    work_vars.push(z.to_string());
    work_vars.extend(pnames.iter().cloned());
    let work = PolyRing::from_names(&src.field, work_vars);
    let mut out_vars = params.clone();
    out_vars.extend(pnames.iter().cloned());
    let out = PolyRing::from_names(&src.field, out_vars);
    let zpos = params.len();
    let zs: Vec<usize> = (0..profile.r()).map(|j| zpos + 1 + j).collect();
    let mut equations = Vec::with_capacity(generators.len() * profile.k());
    for g in generators {
        let gw = g.to_ring(&work)?;
        for h in rem_mod_product(&gw, zpos, &zs, profile.parts())? {
            equations.push(h.to_ring(&out)?);
        }
    }
    Ok(OHPresentation { ring: out, num_params: params.len(), profile: profile.clone(), num_generators: generators.len(), equations })
}

/// A numeric point: parameter values (in ring order) and marked points.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertPoint<F: Field> {
    pub params: Vec<F::Elem>,
    pub marked: Vec<F::Elem>,
}

impl<F: Field> HilbertPoint<F> {
    pub fn coords(&self) -> Vec<F::Elem> {
        let mut v = self.params.clone();
        v.extend(self.marked.iter().cloned());
        v
    }

    /// First pair `s < t` with equal marked points.
    pub fn coincident_pair(&self) -> Option<(usize, usize)> {
        let n = self.marked.len();
        (0..n).flat_map(|s| (s + 1..n).map(move |t| (s, t))).find(|&(s, t)| self.marked[s] == self.marked[t])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub smooth_of_expected_dim: bool,
    pub rank: usize,
    pub expected_codim: usize,
    pub expected_dim: i64,
}

/// Rank of the Jacobian of `eqs` at `point`.
pub fn jacobian_rank<F: Field>(eqs: &[MultiPoly<F>], point: &[F::Elem]) -> usize {
    let Some(first) = eqs.first() else { return 0 };
    let f = first.field().clone();
    let n = first.ring().nvars();
    let m: Vec<Vec<F::Elem>> = eqs.iter().map(|e| (0..n).map(|i| e.partial(i, 1).eval(point)).collect()).collect();
    linalg::rank(&f, &m)
}

/// Smooth of expected dimension iff the Jacobian has rank `c*k` at the point.
pub fn jacobian_oracle<F: Field>(pres: &OHPresentation<F>, point: &HilbertPoint<F>) -> Result<OracleVerdict, HilbertError> {
    if point.marked.len() != pres.profile.r() {
        return Err(HilbertError::PointShape { got: point.marked.len(), want: pres.profile.r() });
    }
    let coords = point.coords();
    let f = &pres.ring.field;
    for (index, e) in pres.equations.iter().enumerate() {
        if !f.is_zero(&e.eval(&coords)) {
            return Err(HilbertError::NotOnScheme { index, text: e.to_text() });
        }
    }
    let rank = jacobian_rank(&pres.equations, &coords);
    let codim = pres.expected_codimension();
    Ok(OracleVerdict { smooth_of_expected_dim: rank == codim, rank, expected_codim: codim, expected_dim: pres.expected_dimension() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeCheck {
    pub split: OracleVerdict,
    pub merged: OracleVerdict,
    pub equal: bool,
}

/// Compares the oracle verdict at a point with two coincident marked points
/// against the verdict for the merged profile.
pub fn merge_profile_check<F: Field>(
    generators: &[MultiPoly<F>],
    z: &str,
    point: &HilbertPoint<F>,
    profile: &Profile,
) -> Result<MergeCheck, HilbertError> {
    let (s, t) = point.coincident_pair().ok_or(HilbertError::NoCoincidence)?;
    let split = jacobian_oracle(&oh_equations(generators, z, profile)?, point)?;
    let merged_profile = profile.merged(s, t);
    let mut marked = point.marked.clone();
    marked.remove(t);
    let merged_point = HilbertPoint { params: point.params.clone(), marked };
    let merged = jacobian_oracle(&oh_equations(generators, z, &merged_profile)?, &merged_point)?;
    let equal = split.smooth_of_expected_dim == merged.smooth_of_expected_dim;
    Ok(MergeCheck { split, merged, equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Rational, Rationals};
    use crate::poly::parse_poly;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn double_root_scheme() {
        let r = PolyRing::new(&Rationals, &["z"]);
        let g = parse_poly(&r, "z^2").unwrap();
        let pres = oh_equations(&[g], "z", &Profile::new(vec![1, 1]).unwrap()).unwrap();
        assert_eq!(pres.equation_texts(), vec!["-z1*z2", "z1 + z2"]);
        let pt = HilbertPoint { params: vec![], marked: vec![q(0), q(0)] };
        assert!(jacobian_oracle(&pres, &pt).is_ok());
        let off = HilbertPoint { params: vec![], marked: vec![q(1), q(-1)] };
        assert!(matches!(jacobian_oracle(&pres, &off), Err(HilbertError::NotOnScheme { index: 0, .. })));
    }

    #[test]
    fn profile_one_recovers_the_section() {
        let r = PolyRing::new(&Rationals, &["u1", "v1", "z"]);
        let g = parse_poly(&r, "u1*z + v1 - z^2").unwrap();
        let pres = oh_equations(&[g], "z", &Profile::new(vec![1]).unwrap()).unwrap();
        assert_eq!(pres.equation_texts(), vec!["u1*z1 - z1^2 + v1"]);
        assert_eq!(pres.expected_dimension(), 2);
    }

    #[test]
    fn parabola_tangent_is_smooth() {
        let r = PolyRing::new(&Rationals, &["u1", "v1", "z"]);
        let g = parse_poly(&r, "u1*z + v1 - z^2").unwrap();
        let pres = oh_equations(&[g], "z", &Profile::new(vec![2]).unwrap()).unwrap();
        let pt = HilbertPoint { params: vec![q(0), q(0)], marked: vec![q(0)] };
        let v = jacobian_oracle(&pres, &pt).unwrap();
        assert_eq!((v.rank, v.smooth_of_expected_dim, v.expected_dim), (2, true, 1));
    }

    #[test]
    fn merge_examples() {
        // alpha_{d-2} a unit, alpha_d outside M^2: g = z^2 + v1 + u1 z
        let r = PolyRing::new(&Rationals, &["u1", "v1", "z"]);
        let good = parse_poly(&r, "z^2 + u1*z + v1").unwrap();
        let pt = HilbertPoint { params: vec![q(0), q(0)], marked: vec![q(0), q(0)] };
        let prof = Profile::new(vec![1, 1]).unwrap();
        let m = merge_profile_check(&[good], "z", &pt, &prof).unwrap();
        assert!(m.equal && m.split.smooth_of_expected_dim);
        // alpha_d in M^2
        let bad = parse_poly(&r, "z^2 + u1*z + v1^2").unwrap();
        let m = merge_profile_check(&[bad], "z", &pt, &prof).unwrap();
        assert!(m.equal && !m.split.smooth_of_expected_dim);
        let distinct = HilbertPoint { params: vec![q(0), q(0)], marked: vec![q(0), q(1)] };
        assert_eq!(merge_profile_check(&[parse_poly(&r, "z").unwrap()], "z", &distinct, &prof), Err(HilbertError::NoCoincidence));
    }

    #[test]
    fn profile_parsing() {
        assert_eq!("2,1".parse::<Profile>().unwrap().parts(), &[2, 1]);
        assert_eq!("{1,1,1}".parse::<Profile>().unwrap().k(), 3);
        assert!("0,1".parse::<Profile>().is_err());
        assert!("".parse::<Profile>().is_err());
    }
}

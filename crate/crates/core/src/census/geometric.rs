//! Closure-point counts of special lines through a base point.
//!
//! Curves in `P^3` (complete intersections of two surfaces): the lines
//! through `beta` meeting the curve twice or more are exactly the singular
//! points of the projected plane curve `F = Res_W(G_1, G_2)`, with
//! `beta = [0:0:0:1]` after a linear change of coordinates.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{key_parts, line_profile, CensusError, ImplicitVariety, LineSection};
use crate::arith::{ExtElem, ExtField, Field, FiniteField, PrimeField};
use crate::elim::{solve_plane, PlaneSolution};
use crate::linalg;
use crate::poly::{MultiPoly, PolyRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    /// Every line with total intersection degree at least 2.
    TotalAtLeastTwo,
    /// Every line tangent somewhere (some multiplicity at least 2).
    Tangency,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricCounts {
    pub route: String,
    pub coverage: Coverage,
    /// Lines over the algebraic closure per profile key.
    pub counts: BTreeMap<String, u64>,
    /// Set when the special-line scheme shows the base point is not general.
    pub problem: Option<String>,
}

impl GeometricCounts {
    pub fn covers(&self, key: &str) -> bool {
        let parts = key_parts(key);
        match self.coverage {
            Coverage::TotalAtLeastTwo => parts.iter().sum::<usize>() >= 2,
            Coverage::Tangency => parts.iter().any(|&m| m >= 2),
        }
    }

    pub fn to_json(&self) -> Value {
        let covers = match self.coverage {
            Coverage::TotalAtLeastTwo => "total>=2",
            Coverage::Tangency => "some multiplicity>=2",
        };
        json!({"route": self.route, "covers": covers, "counts": self.counts, "problem": self.problem})
    }
}

fn random_frame(f: &PrimeField, beta: &[u64], rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    let n = beta.len();
    loop {
        let mut cols: Vec<Vec<u64>> = (0..n - 1).map(|_| (0..n).map(|_| f.random_elem(rng)).collect()).collect();
        cols.push(beta.to_vec());
        let m: Vec<Vec<u64>> = (0..n).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        if !f.is_zero(&linalg::det(f, &m)) {
            return m;
        }
    }
}

/// Singular-point route for complete-intersection curves in `P^3`.
pub fn curve_special_lines(x: &ImplicitVariety<PrimeField>, beta: &[u64], seed: u64) -> Result<GeometricCounts, CensusError> {
    let f = x.ring.field.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_frame(&f, beta, &mut rng);
    let r4 = PolyRing::new(&f, &["Y0", "Y1", "Y2", "W"]);
    let r3 = PolyRing::new(&f, &["Y0", "Y1", "Y2"]);
    let images: Vec<MultiPoly<PrimeField>> = (0..4)
        .map(|i| (0..4).fold(MultiPoly::zero(&r4), |acc, j| acc.add(&MultiPoly::var(&r4, j).scale(&a[i][j]))))
        .collect();
    let coeff_lists: Vec<Vec<MultiPoly<PrimeField>>> = x
        .generators
        .iter()
        .map(|g| g.substitute(&r4, &images).coeffs_in(3).iter().map(|c| c.to_ring(&r3)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let image = linalg::det_multi(&linalg::sylvester(&coeff_lists[0], &coeff_lists[1], &MultiPoly::zero(&r3)));
    let route = "singular points of the projected curve".to_string();
    let mut out = GeometricCounts { route, coverage: Coverage::TotalAtLeastTwo, counts: BTreeMap::new(), problem: None };
    if image.is_zero() || image.total_degree() != Some(x.degree_bound()) {
        out.problem = Some("projected curve has the wrong degree".into());
        return Ok(out);
    }
    let mut eqs = vec![image.clone()];
    eqs.extend((0..3).map(|i| image.partial(i, 1)).filter(|g| !g.is_zero()));
    let pts = match solve_plane(&eqs, true, seed ^ 0x51)? {
        PlaneSolution::PositiveDimensional => {
            out.problem = Some("projected curve is not reduced".into());
            return Ok(out);
        }
        PlaneSolution::Finite(pts) => pts,
    };
    // ordinary nodes have Tjurina number 1; anything else means beta is special
    if let Some(m) = pts.iter().filter_map(|p| p.multiplicity).find(|&m| m > 1) {
        out.problem = Some(format!("projection has a non-ordinary singular point (local length {m})"));
        return Ok(out);
    }
    for pt in pts {
        let k = pt.field.clone();
        let lifted = x.lift_to(&k)?;
        let lift = |c: &u64| k.from_base(*c);
        let beta_k: Vec<ExtElem> = beta.iter().map(lift).collect();
        let dir: Vec<ExtElem> = (0..4)
            .map(|i| (0..3).fold(k.zero(), |acc, j| k.add(&acc, &k.mul(&lift(&a[i][j]), &pt.coords[j]))))
            .collect();
        match line_profile::<ExtField>(&lifted, &beta_k, &dir)? {
            LineSection::Contained => {
                out.problem = Some("a special line lies in the variety".into());
                return Ok(out);
            }
            sec => {
                if sec.total().unwrap_or(0) < 2 {
                    out.problem = Some("singular point of the projection off every secant".into());
                    return Ok(out);
                }
                *out.counts.entry(sec.key().unwrap()).or_insert(0) += pt.orbit as u64;
            }
        }
    }
    Ok(out)
}

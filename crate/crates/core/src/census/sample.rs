//! Fiber smoothness at sampled lines through pseudorandom base points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{directions, LineClassifier, independent, line_profile, random_projective_point, rational_section_points, CensusError, ImplicitVariety};
use crate::arith::{FiniteField, PrimeField, Rational};
use crate::chart::{ambient_ring, line_frame, normalize_generators};
use crate::hilbert::{jacobian_rank, Profile};
use crate::poly::MultiPoly;
use crate::tangent::smooth_fiber_at;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    pub profile: Vec<usize>,
    pub requested: usize,
    pub tested: usize,
    pub smooth: usize,
    pub failures: Vec<String>,
    /// Lines with the profile whose points are not all rational.
    pub skipped_nonrational: usize,
    pub betas: Vec<Vec<u64>>,
    /// Base points dropped as special, with the reason.
    pub rejected_betas: Vec<(Vec<u64>, String)>,
}

impl SampleReport {
    pub fn fraction(&self) -> Rational {
        Rational::new(self.smooth as i64, self.tested.max(1) as i64).expect("nonzero")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "profile": super::profile_key(&self.profile),
            "requested": self.requested,
            "tested": self.tested,
            "smooth": self.smooth,
            "fraction": self.fraction().to_string(),
            "failures": self.failures,
            "skipped_nonrational": self.skipped_nonrational,
            "betas": self.betas,
            "rejected_betas": self.rejected_betas.iter().map(|(b, r)| json!({"beta": b, "reason": r})).collect::<Vec<_>>(),
        })
    }
}

/// Draws base points until `m` lines with the given profile and rational
/// intersection points have been tested (or the draw limit is reached).
pub fn smooth_sample(
    x: &ImplicitVariety<PrimeField>,
    profile: &[usize],
    m: usize,
    seed: u64,
) -> Result<SampleReport, CensusError> {
    let f = x.ring.field.clone();
    let p = f.modulus();
    let mut target = profile.to_vec();
    target.sort_unstable_by(|a, b| b.cmp(a));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SampleReport {
        profile: target.clone(),
        requested: m,
        tested: 0,
        smooth: 0,
        failures: Vec::new(),
        skipped_nonrational: 0,
        betas: Vec::new(),
        rejected_betas: Vec::new(),
    };
    let max_draws = 40 + 10 * m;
    'draws: for _ in 0..max_draws {
        let beta = random_projective_point(p, x.n, &mut rng);
        if x.contains(&beta) {
            continue;
        }
        if let Some(why) = special_beta(x, &beta, rng.gen())? {
            rep.rejected_betas.push((beta, why));
            continue;
        }
        rep.betas.push(beta.clone());
        for d in directions(p, &beta) {
            let sec = line_profile(x, &beta, &d)?;
            if sec.multiplicities().as_deref() != Some(&target[..]) {
                continue;
            }
            if !sec.is_rational() {
                rep.skipped_nonrational += 1;
                continue;
            }
            rep.tested += 1;
            match test_line(x, &beta, &d, &mut rng) {
                Ok(true) => rep.smooth += 1,
                Ok(false) => rep.failures.push(format!("beta {beta:?}, direction {d:?}: not smooth of expected dimension")),
                Err(e) => rep.failures.push(format!("beta {beta:?}, direction {d:?}: {e}")),
            }
            if rep.tested == m {
                break 'draws;
            }
        }
    }
    if rep.tested == 0 {
        return Err(CensusError::NoTestableSamples);
    }
    Ok(rep)
}

/// Same genericity test as a general census, minus the full line sweep.
fn special_beta(x: &ImplicitVariety<PrimeField>, beta: &[u64], seed: u64) -> Result<Option<String>, CensusError> {
    if let Some(why) = x.beta_problem(beta) {
        return Ok(Some(why));
    }
    Ok(match x.geometric(beta, seed) {
        Ok(Some(g)) => g.problem,
        Ok(None) => None,
        Err(CensusError::Elim(e)) => Some(format!("special-line scheme: {e}")),
        Err(e) => return Err(e),
    })
}

fn test_line(x: &ImplicitVariety<PrimeField>, beta: &[u64], dir: &[u64], rng: &mut ChaCha8Rng) -> Result<bool, CensusError> {
    let f = x.ring.field.clone();
    let pts = rational_section_points(x, beta, dir)?;
    let b = loop {
        let b = f.random_elem(rng);
        if b != 0 {
            break b;
        }
    };
    let frame = line_frame(
        &f,
        beta,
        dir,
        &b,
        |q| x.contains(q) || !independent(&f, q, beta),
        |r: &mut ChaCha8Rng| f.random_elem(r),
        rng,
    )?;
    let ring = ambient_ring(&f, x.n);
    let gens: Vec<MultiPoly<PrimeField>> = x.generators.iter().map(|g| frame.pull_back(g, &ring)).collect();
    let mut marked = Vec::with_capacity(pts.len());
    let mut parts = Vec::with_capacity(pts.len());
    for (q, mult) in &pts {
        marked.push(frame.coordinate_of(&f, q).ok_or_else(|| CensusError::Other("point off the chart".into()))?);
        parts.push(*mult);
    }
    let codim = x.codim();
    let at = |a: &u64| {
        let mut v = vec![0u64; x.n];
        v[x.n - 1] = *a;
        v
    };
    if marked.iter().any(|a| jacobian_rank(&gens, &at(a)) < codim) {
        return Err(CensusError::Other("variety singular at a marked point".into()));
    }
    let local = local_complete_intersection(&f, &gens, codim, &marked, rng, &at)?;
    let norm = normalize_generators(&local, &marked, rng.gen()).map_err(|e| CensusError::Other(e.to_string()))?;
    let profile = Profile::new(parts).map_err(|e| CensusError::Other(e.to_string()))?;
    let v = smooth_fiber_at(&norm, &profile, &marked, &b).map_err(|e| CensusError::Other(e.to_string()))?;
    Ok(v.smooth_of_expected_dim)
}

/// `codim` constant combinations of the generators with full Jacobian rank
/// at every marked point.
fn local_complete_intersection(
    f: &PrimeField,
    gens: &[MultiPoly<PrimeField>],
    codim: usize,
    marked: &[u64],
    rng: &mut ChaCha8Rng,
    at: &dyn Fn(&u64) -> Vec<u64>,
) -> Result<Vec<MultiPoly<PrimeField>>, CensusError> {
    if gens.len() == codim {
        return Ok(gens.to_vec());
    }
    for _ in 0..32 {
        let combo: Vec<MultiPoly<PrimeField>> = (0..codim)
            .map(|_| gens.iter().fold(MultiPoly::zero(gens[0].ring()), |acc, g| acc.add(&g.scale(&f.random_elem(rng)))))
            .collect();
        if marked.iter().all(|a| jacobian_rank(&combo, &at(a)) == codim) {
            return Ok(combo);
        }
    }
    Err(CensusError::Other("no local complete intersection found".into()))
}

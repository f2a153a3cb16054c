use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde_json::{json, Value};

use super::input::{ChartInput, FieldSpec, Source};
use super::{parse_rationals, CliError, Outcome, RunConfig, SourceArgs};
use crate::arith::{Field, PrimeField, Rational, Rationals};
use crate::census::{
    dimension_estimate, general_census, lines_through_point, profile_key, rational_singular_points, secant_locus_cover, smooth_sample,
    LineClassifier, DEFAULT_BUDGET,
};
use crate::chart::{ambient_ring, normalize_generators, pull_to_chart, LineChart};
use crate::gallery::{self, ReducedVariety, Variety};
use crate::hilbert::{jacobian_oracle, oh_equations, HilbertError, HilbertPoint, Profile};
use crate::poly::MultiPoly;
use crate::tangent::{mult_flags, smooth_at_with_rows, smooth_fiber_at_with_matrix, SmoothnessVerdict};

fn load(source: &SourceArgs) -> Result<Source, CliError> {
    Source::load(source.builtin.as_deref(), source.input.as_deref())
}

fn elem<F: Field>(f: &F, r: &Rational) -> Result<F::Elem, CliError> {
    f.from_rational(r).map_err(|e| CliError::Input(format!("{r}: {e}")))
}

fn elems<F: Field>(f: &F, s: &str, what: &str) -> Result<Vec<F::Elem>, CliError> {
    parse_rationals(s, what)?.iter().map(|r| elem(f, r)).collect()
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

pub fn oh_eqs(source: &SourceArgs, profile: &Profile, star: Option<&str>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let src = load(source)?;
    let chart = src.chart()?;
    match src.field() {
        FieldSpec::Rationals => oh_eqs_in(&Rationals, &src, &chart, profile, star, cfg),
        FieldSpec::Prime(p) => oh_eqs_in(&PrimeField::new(p).map_err(compute)?, &src, &chart, profile, star, cfg),
    }
}

fn oh_eqs_in<F: Field>(
    f: &F,
    src: &Source,
    chart: &ChartInput,
    profile: &Profile,
    star: Option<&str>,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let (n, gens) = chart.generators(f)?;
    let lc = match star {
        None => LineChart::standard(f, n),
        Some(b) => LineChart::star(f, n, single(f, b, "--star")?),
    };
    let pulled = gens.iter().map(|g| pull_to_chart(g, &lc)).collect::<Result<Vec<_>, _>>().map_err(compute)?;
    let pres = oh_equations(&pulled, "z", profile).map_err(compute)?;
    let report = json!({
        "config": cfg.to_json(),
        "variety": src.name(),
        "field": f.name(),
        "chart": if star.is_some() { "star" } else { "grassmann" },
        "profile": profile.to_string(),
        "variables": pres.ring.vars,
        "equations": pres.equation_texts(),
        "num_equations": pres.equations.len(),
        "expected_dimension": pres.expected_dimension(),
        "expected_codimension": pres.expected_codimension(),
    });
    Ok(Outcome { report, ok: true })
}

fn single<F: Field>(f: &F, s: &str, what: &str) -> Result<F::Elem, CliError> {
    let v = elems(f, s, what)?;
    if v.len() != 1 {
        return Err(CliError::Usage(format!("{what}: expected one value")));
    }
    Ok(v.into_iter().next().unwrap())
}

pub fn smooth_at(
    source: &SourceArgs,
    profile: &Profile,
    points: &str,
    line: Option<&str>,
    star: Option<&str>,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let src = load(source)?;
    let chart = src.chart()?;
    match src.field() {
        FieldSpec::Rationals => smooth_at_in(&Rationals, &src, &chart, profile, points, line, star, cfg),
        FieldSpec::Prime(p) => smooth_at_in(&PrimeField::new(p).map_err(compute)?, &src, &chart, profile, points, line, star, cfg),
    }
}

fn verdict_json(v: &SmoothnessVerdict) -> Value {
    json!({
        "smooth_of_expected_dim": v.smooth_of_expected_dim,
        "rank": v.rank,
        "rank_required": v.columns_expected,
        "expected_dimension": v.expected_dim,
    })
}

fn matrix_json<F: Field>(f: &F, rows: &[Vec<F::Elem>]) -> Value {
    json!(rows.iter().map(|r| r.iter().map(|c| f.format_elem(c)).collect::<Vec<_>>()).collect::<Vec<_>>())
}

#[allow(clippy::too_many_arguments)]
fn smooth_at_in<F: Field>(
    f: &F,
    src: &Source,
    chart: &ChartInput,
    profile: &Profile,
    points: &str,
    line: Option<&str>,
    star: Option<&str>,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let (n, gens) = chart.generators(f)?;
    let m = n - 1;
    let marked = elems(f, points, "--points")?;
    let params = match line {
        None => vec![f.zero(); 2 * m],
        Some(s) => {
            let v = elems(f, s, "--line")?;
            if v.len() != 2 * m {
                return Err(CliError::Usage(format!("--line: expected {} values u1..u{m},v1..v{m}", 2 * m)));
            }
            v
        }
    };
    // move the line to x = 0: x_i -> x_i + u_i z + v_i
    let ring = ambient_ring(f, n);
    let z = MultiPoly::var(&ring, m);
    let images: Vec<MultiPoly<F>> = (0..m)
        .map(|i| {
            MultiPoly::var(&ring, i)
                .add(&z.scale(&params[i]))
                .add(&MultiPoly::constant(&ring, params[m + i].clone()))
        })
        .chain(std::iter::once(z.clone()))
        .collect();
    let moved: Vec<MultiPoly<F>> = gens.iter().map(|g| g.substitute(&ring, &images)).collect();

    let b = star.map(|s| single(f, s, "--star")).transpose()?;
    let (oracle_gens, lc, oracle_params) = match &b {
        None => (&gens, LineChart::standard(f, n), params.clone()),
        Some(b) => (&moved, LineChart::star(f, n, b.clone()), vec![f.zero(); m]),
    };
    let pulled = oracle_gens.iter().map(|g| pull_to_chart(g, &lc)).collect::<Result<Vec<_>, _>>().map_err(compute)?;
    let pres = oh_equations(&pulled, "z", profile).map_err(compute)?;
    let pt = HilbertPoint { params: oracle_params, marked: marked.clone() };
    if let Some((s, t)) = pt.coincident_pair() {
        return Err(CliError::Input(format!("marked points {} and {} coincide; merge them into one part", s + 1, t + 1)));
    }
    if let Some(j) = b.as_ref().and_then(|b| marked.iter().position(|a| a == b)) {
        return Err(CliError::Input(format!("--star b equals marked point {}", j + 1)));
    }
    let oracle = match jacobian_oracle(&pres, &pt) {
        Ok(v) => v,
        Err(HilbertError::NotOnScheme { index, text }) => {
            return Err(CliError::Input(format!("point is not on the scheme: equation {} does not vanish: {text}", index + 1)))
        }
        Err(e) => return Err(compute(e)),
    };
    let norm = normalize_generators(&moved, &marked, cfg.seed).map_err(compute)?;
    let flags = mult_flags(&norm, profile, &marked).map_err(compute)?;
    let mut col_names: Vec<String> = (1..=m).map(|i| format!("u{i}")).collect();
    let (verdict, rows) = match &b {
        None => {
            col_names.extend((1..=m).map(|i| format!("v{i}")));
            let (v, rows) = smooth_at_with_rows(&norm, profile, &marked).map_err(compute)?;
            (v, rows.into_iter().map(|r| r.coords).collect::<Vec<_>>())
        }
        Some(b) => {
            let (v, mat) = smooth_fiber_at_with_matrix(&norm, profile, &marked, b).map_err(compute)?;
            // transpose to one row per cotangent vector in the u coordinates
            let cols = mat.first().map_or(0, |r| r.len());
            let rows: Vec<Vec<F::Elem>> = (0..cols).map(|j| mat.iter().map(|r| r[j].clone()).collect()).collect();
            (v, rows)
        }
    };
    let agree = verdict.smooth_of_expected_dim == oracle.smooth_of_expected_dim;
    let report = json!({
        "config": cfg.to_json(),
        "variety": src.name(),
        "field": f.name(),
        "chart": if b.is_some() { "star" } else { "grassmann" },
        "profile": profile.to_string(),
        "points": marked.iter().map(|a| f.format_elem(a)).collect::<Vec<_>>(),
        "normalized_generators": norm.generators.iter().map(|g| g.to_text()).collect::<Vec<_>>(),
        "normalization_retries": norm.retries,
        "flags": {"e": flags.e, "h": flags.h},
        "columns": col_names,
        "cotangent_rows": matrix_json(f, &rows),
        "verdict": verdict_json(&verdict),
        "oracle": {
            "smooth_of_expected_dim": oracle.smooth_of_expected_dim,
            "rank": oracle.rank,
            "expected_codimension": oracle.expected_codim,
            "expected_dimension": oracle.expected_dim,
        },
        "agree": agree,
    });
    Ok(Outcome { report, ok: agree })
}

fn check_primes(src: &Source, primes: &[u64]) -> Result<(), CliError> {
    if let FieldSpec::Prime(q) = src.field() {
        if primes.iter().any(|&p| p != q) {
            return Err(CliError::Usage(format!("input is defined over F_{q}; use --primes {q}")));
        }
    }
    Ok(())
}

fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

pub fn census(
    source: &SourceArgs,
    cfg: &RunConfig,
    profile: Option<&Profile>,
    draws: usize,
    sample: Option<usize>,
    timing: bool,
) -> Result<Outcome, CliError> {
    let src = load(source)?;
    check_primes(&src, &cfg.primes)?;
    let variety = src.variety()?;
    let budget = cfg.budget.unwrap_or(DEFAULT_BUDGET);
    let filter = profile.map(|p| profile_key(p.parts()));
    let mut per_prime = BTreeMap::new();
    let mut first: BTreeMap<String, BTreeMap<u64, u64>> = BTreeMap::new();
    for &p in &cfg.primes {
        let t0 = Instant::now();
        let reduced = variety.reduce(p)?;
        let cls = reduced.classifier();
        let mut runs = Vec::with_capacity(draws);
        for i in 0..draws {
            let seed = cfg.seed.wrapping_add(i as u64);
            let (rep, betas) = general_census(cls, seed, budget)?;
            if i == 0 {
                for (k, c) in rep.merged() {
                    first.entry(k).or_default().insert(p, c);
                }
            }
            runs.push(json!({
                "seed": seed,
                "beta_draws": betas.iter().map(|d| d.to_json()).collect::<Vec<_>>(),
                "report": rep.to_json(),
            }));
        }
        let mut entry = json!({"draws": runs});
        if let ReducedVariety::Implicit(x) = &reduced {
            if lines_through_point(p, x.n + 1) <= budget {
                let sing = rational_singular_points(x);
                entry["singular_rational_points"] = json!(sing);
            }
        }
        if let (Some(m), Some(prof)) = (sample, profile) {
            let ReducedVariety::Implicit(x) = &reduced else {
                return Err(CliError::Usage("--sample needs an implicit presentation".into()));
            };
            entry["sample"] = smooth_sample(x, prof.parts(), m, cfg.seed)?.to_json();
        }
        if timing {
            entry["timing_ms"] = json!(elapsed_ms(t0));
        }
        per_prime.insert(p.to_string(), entry);
    }
    let keys: BTreeSet<String> = match &filter {
        Some(k) => std::iter::once(k.clone()).collect(),
        None => first.keys().cloned().collect(),
    };
    let mut estimates = BTreeMap::new();
    let mut flagged = Vec::new();
    for key in keys {
        let counts: BTreeMap<u64, u64> =
            cfg.primes.iter().map(|&p| (p, first.get(&key).and_then(|m| m.get(&p)).copied().unwrap_or(0))).collect();
        let est = dimension_estimate(&counts);
        if est.is_flagged() {
            flagged.push(key.clone());
        }
        let counts_json: BTreeMap<String, u64> = counts.iter().map(|(p, c)| (p.to_string(), *c)).collect();
        estimates.insert(key, json!({"counts": counts_json, "estimate": est.to_json()}));
    }
    let report = json!({
        "config": cfg.to_json(),
        "variety": variety.name(),
        "ambient_dimension": variety.ambient_dim(),
        "construction_log": src.log(),
        "per_prime": per_prime,
        "estimates": estimates,
        "flagged": flagged,
    });
    Ok(Outcome { report, ok: flagged.is_empty() })
}

pub fn secant_cover(source: &SourceArgs, cfg: &RunConfig, k: usize, timing: bool) -> Result<Outcome, CliError> {
    let src = load(source)?;
    check_primes(&src, &cfg.primes)?;
    let variety = src.variety()?;
    let t0 = Instant::now();
    let reduced: Vec<ReducedVariety> = cfg.primes.iter().map(|&p| variety.reduce(p)).collect::<Result<_, _>>()?;
    let cls: Vec<&dyn LineClassifier> = reduced.iter().map(|r| r.classifier()).collect();
    let rep = secant_locus_cover(&cls, k, cfg.budget.unwrap_or(DEFAULT_BUDGET))?;
    let mut report = json!({
        "config": cfg.to_json(),
        "variety": variety.name(),
        "ambient_dimension": variety.ambient_dim(),
        "construction_log": src.log(),
        "cover": rep.to_json(),
    });
    if timing {
        report["timing_ms"] = json!(elapsed_ms(t0));
    }
    Ok(Outcome { ok: !rep.estimate.is_flagged(), report })
}

pub fn gallery_list() -> Outcome {
    let items: Vec<Value> = gallery::list().into_iter().map(|(n, d)| json!({"name": n, "description": d})).collect();
    Outcome { report: json!({"builtins": items}), ok: true }
}

pub fn gallery_show(name: &str) -> Result<Outcome, CliError> {
    let e = gallery::builtin(name)?;
    let mut report = match &e.variety {
        Variety::Implicit(x) => json!({
            "kind": "implicit",
            "variables": x.ring.vars,
            "generators": x.generators.iter().map(|g| g.to_text()).collect::<Vec<_>>(),
            "dimension": x.dim,
        }),
        Variety::Parametric(x) => json!({
            "kind": "parametric",
            "variables": x.source.vars,
            "parametrization": x.components.iter().map(|g| g.to_text()).collect::<Vec<_>>(),
            "dimension": x.m,
        }),
    };
    report["name"] = json!(e.name);
    report["ambient_dimension"] = json!(e.variety.ambient_dim());
    report["construction_log"] = json!(e.log);
    if let Some(x) = &e.implicit {
        report["implicit_generators"] = json!(x.generators.iter().map(|g| g.to_text()).collect::<Vec<_>>());
    }
    if let Some(c) = &e.chart {
        report["chart"] = json!({
            "variables": ambient_ring(&Rationals, c.n).vars,
            "generators": c.generators.iter().map(|g| g.to_text()).collect::<Vec<_>>(),
        });
    }
    Ok(Outcome { report, ok: true })
}

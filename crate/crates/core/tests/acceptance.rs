//! End-to-end acceptance checks. Runs as a plain binary so every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use multisecant::arith::{FiniteField, PrimeField};
use multisecant::census::{key_total, smooth_sample};
use multisecant::chart::{pull_to_chart, specialize_to_star, LineChart};
use multisecant::cli::{execute, render, Cli};
use multisecant::gallery::{builtin, ReducedVariety};
use multisecant::hilbert::{merge_profile_check, oh_equations, HilbertPoint, Profile};
use multisecant::instances::{random_parts, random_section, random_valid_section};
use multisecant::poly::MultiPoly;

// pinned limits
const STEINER_PER_PRIME: Duration = Duration::from_secs(120);
const TWISTED_CUBIC_TOTAL: Duration = Duration::from_secs(30);
const ORACLE_TOTAL: Duration = Duration::from_secs(300);
const ORACLE_INSTANCES: usize = 600;
const MERGE_INSTANCES: usize = 500;
const BASE_CHANGE_INSTANCES: usize = 200;
const B_INDEPENDENCE_INSTANCES: usize = 200;
const SAMPLE_SIZE: usize = 20;
/// Complete intersection of two quadrics with good reduction at 11 and 13.
const CI_22: &str = "random-ci:3:2,2:1";

type Check = Result<String, String>;

fn cli(args: &[&str]) -> Result<(Value, bool), String> {
    let mut full = vec!["multisecant"];
    full.extend_from_slice(args);
    let parsed = Cli::try_parse_from(full).map_err(|e| e.to_string())?;
    let (o, _) = execute(parsed).map_err(|e| e.to_string())?;
    Ok((o.report, o.ok))
}

fn counts(report: &Value) -> BTreeMap<String, u64> {
    report["counts"].as_object().map(|m| m.iter().map(|(k, v)| (k.clone(), v.as_u64().unwrap())).collect()).unwrap_or_default()
}

fn census_runs(report: &Value) -> Vec<(String, Value)> {
    let mut out = Vec::new();
    for (p, entry) in report["per_prime"].as_object().unwrap() {
        for run in entry["draws"].as_array().unwrap() {
            out.push((p.clone(), run["report"].clone()));
        }
    }
    out
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn steiner() -> Check {
    let mut seen = Vec::new();
    for p in ["11", "13"] {
        let t = Instant::now();
        let (rep, _) = cli(&["census", "--builtin", "projected-veronese-p4", "--primes", p, "--draws", "3"])?;
        let el = t.elapsed();
        ensure(el < STEINER_PER_PRIME, || format!("p={p} took {el:?}"))?;
        for (p, r) in census_runs(&rep) {
            let c = counts(&r);
            let get = |k: &str| c.get(k).copied().unwrap_or(0);
            ensure(get("{2}") == 6 && get("{1,1,1}") == 1 && get("{2,1}") == 0, || format!("p={p} beta={} counts {c:?}", r["beta"]))?;
            seen.push(format!("p={p} {}/{}/{}", get("{2}"), get("{1,1,1}"), get("{2,1}")));
        }
    }
    Ok(format!("{} draws, {{2}}/{{1,1,1}}/{{2,1}} = 6/1/0 each", seen.len()))
}

fn twisted_cubic() -> Check {
    let t = Instant::now();
    let (rep, _) = cli(&["census", "--builtin", "twisted-cubic", "--primes", "7,11", "--draws", "10", "--seed", "1"])?;
    let runs = census_runs(&rep);
    ensure(runs.len() == 20, || format!("{} runs", runs.len()))?;
    for (p, r) in &runs {
        let c = counts(r);
        let secants: u64 = c.iter().filter(|(k, _)| key_total(k) >= 2).map(|(_, v)| v).sum();
        let bad = ["{1,1,1}", "{2,1}", "{3}"].iter().any(|k| c.contains_key(*k));
        ensure(secants == 1 && !bad, || format!("p={p} beta={} counts {c:?}", r["beta"]))?;
    }
    let el = t.elapsed();
    ensure(el < TWISTED_CUBIC_TOTAL, || format!("took {el:?}"))?;
    Ok(format!("{} base points, one secant each, no trisecants", runs.len()))
}

fn secant_cover() -> Check {
    let dim = |k: &str| -> Result<Value, String> {
        let (rep, _) = cli(&["secant-cover", "--builtin", "twisted-cubic", "--primes", "7,11", "-k", k])?;
        Ok(rep["cover"]["estimate"]["dimension"].clone())
    };
    let (d2, d3) = (dim("2")?, dim("3")?);
    ensure(d2 == Value::from(3) && d3 == Value::from("empty"), || format!("k=2 -> {d2}, k=3 -> {d3}"))?;
    Ok("k=2 dimension 3, k=3 empty".into())
}

fn oracle_equivalence() -> Check {
    let t = Instant::now();
    let primes = [2u64, 3, 5, 7, 11, 101];
    let mut tally = [0usize; 2];
    for (i, &p) in primes.iter().enumerate() {
        let f = PrimeField::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + p);
        for _ in 0..ORACLE_INSTANCES / primes.len() + usize::from(i < ORACLE_INSTANCES % primes.len()) {
            let (inst, norm) = random_valid_section(&f, &mut rng);
            let ours = inst.grassmann_verdict(&norm).smooth_of_expected_dim;
            let oracle = inst.oracle().smooth_of_expected_dim;
            ensure(ours == oracle, || format!("p={p}: {inst:?}"))?;
            tally[ours as usize] += 1;
        }
    }
    let el = t.elapsed();
    ensure(el < ORACLE_TOTAL, || format!("took {el:?}"))?;
    Ok(format!("{} instances agree ({} smooth, {} not)", tally[0] + tally[1], tally[1], tally[0]))
}

fn merge_equivalence() -> Check {
    let mut done = 0;
    let mut tally = [0usize; 2];
    // characteristic above every merged part (k <= 4)
    let primes = [5u64, 7, 11, 101];
    for (i, &p) in primes.iter().enumerate() {
        let f = PrimeField::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + p);
        while done < MERGE_INSTANCES * (i + 1) / primes.len() {
            let n = rng.gen_range(2..=4);
            let c = rng.gen_range(1..=2.min(n - 1));
            let parts = random_parts(4, 3, &mut rng);
            let Some(j) = parts.iter().position(|&k| k >= 2) else { continue };
            let Some(inst) = random_section(&f, n, c, &parts, &mut rng) else { continue };
            if inst.generators.iter().any(|g| g.is_zero()) {
                continue;
            }
            // split part j into two coincident parts
            let a = rng.gen_range(1..parts[j]);
            let mut split = parts.clone();
            split[j] = a;
            split.insert(j + 1, parts[j] - a);
            let mut marked = inst.points.clone();
            marked.insert(j + 1, marked[j]);
            let chart = LineChart::standard(&f, n);
            let pulled: Vec<MultiPoly<PrimeField>> = inst.generators.iter().map(|g| pull_to_chart(g, &chart).unwrap()).collect();
            let pt = HilbertPoint { params: vec![0; chart.num_params()], marked };
            let check = merge_profile_check(&pulled, "z", &pt, &Profile::new(split).unwrap()).map_err(|e| e.to_string())?;
            ensure(check.equal, || format!("p={p}: {inst:?}"))?;
            tally[check.split.smooth_of_expected_dim as usize] += 1;
            done += 1;
        }
    }
    Ok(format!("{done} coincident instances agree ({} smooth, {} not)", tally[1], tally[0]))
}

fn base_change() -> Check {
    let mut done = 0;
    for &p in &[7u64, 11, 101] {
        let f = PrimeField::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + p);
        for _ in 0..(BASE_CHANGE_INSTANCES + 2) / 3 {
            let (inst, _) = random_valid_section(&f, &mut rng);
            let b = f.random_elem(&mut rng);
            let std = LineChart::standard(&f, inst.n);
            let star = LineChart::star(&f, inst.n, b);
            let g_std: Vec<_> = inst.generators.iter().map(|g| pull_to_chart(g, &std).unwrap()).collect();
            let g_star: Vec<_> = inst.generators.iter().map(|g| pull_to_chart(g, &star).unwrap()).collect();
            let lhs = specialize_to_star(&oh_equations(&g_std, "z", &inst.profile).unwrap(), &b).map_err(|e| e.to_string())?;
            let rhs = oh_equations(&g_star, "z", &inst.profile).unwrap();
            ensure(lhs.ring.vars == rhs.ring.vars && lhs.equation_texts() == rhs.equation_texts(), || format!("p={p} b={b}: {inst:?}"))?;
            done += 1;
        }
    }
    Ok(format!("{done} instances, canonical texts identical"))
}

fn fiber_smoothness() -> Check {
    let tc = builtin("twisted-cubic").map_err(|e| e.to_string())?;
    let ci = builtin(CI_22).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for (label, entry) in [("twisted cubic", &tc), ("(2,2) curve", &ci)] {
        for p in [11u64, 13] {
            let ReducedVariety::Implicit(x) = entry.variety.reduce(p).map_err(|e| e.to_string())? else { unreachable!() };
            let s = smooth_sample(&x, &[1, 1], SAMPLE_SIZE, 7).map_err(|e| e.to_string())?;
            ensure(s.tested >= SAMPLE_SIZE && s.smooth == s.tested, || format!("{label} p={p}: {}/{} {:?}", s.smooth, s.tested, s.failures))?;
            notes.push(format!("{label} p={p} {}/{}", s.smooth, s.tested));
        }
    }
    let (rep, _) = cli(&["census", "--builtin", CI_22, "--primes", "11,13", "--draws", "3"])?;
    for (p, entry) in rep["per_prime"].as_object().unwrap() {
        ensure(entry["singular_rational_points"].as_array().is_some_and(|v| v.is_empty()), || format!("{CI_22} singular mod {p}"))?;
    }
    for (p, r) in census_runs(&rep) {
        let c = counts(&r);
        let nodes: u64 = c.iter().filter(|(k, _)| key_total(k) >= 2).map(|(_, v)| v).sum();
        ensure(nodes == 2, || format!("p={p} beta={}: {c:?}", r["beta"]))?;
    }
    notes.push("(2,2) projection has 2 nodes at 6 base points".into());
    Ok(notes.join(", "))
}

fn b_independence() -> Check {
    let mut done = 0;
    let mut tally = [0usize; 2];
    for &p in &[5u64, 7, 13] {
        let f = PrimeField::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + p);
        let mut here = 0;
        while here < (B_INDEPENDENCE_INSTANCES + 2) / 3 {
            let (inst, norm) = random_valid_section(&f, &mut rng);
            let free: Vec<u64> = f.elements().into_iter().filter(|b| !inst.points.contains(b)).collect();
            if free.len() < 2 {
                continue;
            }
            let i = rng.gen_range(0..free.len());
            let j = (i + rng.gen_range(1..free.len())) % free.len();
            let v1 = inst.star_verdict(&norm, &free[i]).smooth_of_expected_dim;
            let v2 = inst.star_verdict(&norm, &free[j]).smooth_of_expected_dim;
            ensure(v1 == v2, || format!("p={p} b={} vs {}: {inst:?}", free[i], free[j]))?;
            tally[v1 as usize] += 1;
            here += 1;
            done += 1;
        }
    }
    Ok(format!("{done} instances, verdicts independent of b ({} smooth, {} not)", tally[1], tally[0]))
}

fn determinism() -> Check {
    let runs: [&[&str]; 5] = [
        &["census", "--builtin", "projected-veronese-p4", "--primes", "11", "--draws", "2"],
        &["census", "--builtin", "twisted-cubic", "--primes", "7,11", "--draws", "3", "--profile", "1,1", "--sample", "5"],
        &["census", "--builtin", CI_22, "--primes", "11"],
        &["secant-cover", "--builtin", "twisted-cubic", "--primes", "7", "-k", "2"],
        &["smooth-at", "--builtin", "twisted-cubic", "--profile", "2", "--points", "0"],
    ];
    for args in runs {
        let a = render(&cli(args)?.0);
        let b = render(&cli(args)?.0);
        ensure(a == b, || format!("{} differs between runs", args.join(" ")))?;
    }
    Ok(format!("{} reports byte-identical on replay", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("1 Steiner counts", steiner),
        ("2 twisted-cubic secants", twisted_cubic),
        ("3 secant cover", secant_cover),
        ("4 oracle equivalence", oracle_equivalence),
        ("5 merge equivalence", merge_equivalence),
        ("6 base change", base_change),
        ("7 fiber smoothness", fiber_smoothness),
        ("8 b-independence", b_independence),
        ("9 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        match check() {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{:.1?}]", t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{:.1?}]", t.elapsed());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

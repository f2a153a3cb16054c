//! Points of `P^N(F_p)` lying on some line of total section degree `>= k`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{dimension_estimate, CensusError, DimensionEstimate, LineClassifier, LineSection};

/// All lines of `P^N(F_p)` as reduced row echelon pairs.
pub fn all_lines(p: u64, n: usize) -> Vec<(Vec<u64>, Vec<u64>)> {
    let mut out = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            let free1: Vec<usize> = (i + 1..=n).filter(|&k| k != j).collect();
            let free2: Vec<usize> = (j + 1..=n).collect();
            let c1 = p.pow(free1.len() as u32);
            let c2 = p.pow(free2.len() as u32);
            for a in 0..c1 {
                let mut r1 = vec![0u64; n + 1];
                r1[i] = 1;
                let mut code = a;
                for &k in &free1 {
                    r1[k] = code % p;
                    code /= p;
                }
                for b in 0..c2 {
                    let mut r2 = vec![0u64; n + 1];
                    r2[j] = 1;
                    let mut code = b;
                    for &k in &free2 {
                        r2[k] = code % p;
                        code /= p;
                    }
                    out.push((r1.clone(), r2));
                }
            }
        }
    }
    out
}

pub fn count_lines(p: u64, n: usize) -> u128 {
    let q = p as u128;
    let mut total = 0u128;
    for i in 0..=n {
        for j in i + 1..=n {
            total += q.pow((n - i - 1) as u32) * q.pow((n - j) as u32);
        }
    }
    total
}

fn index(p: u64, v: &[u64]) -> usize {
    v.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverPrime {
    pub lines: u128,
    pub covering_lines: u64,
    pub marked_points: u64,
    pub total_points: u128,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverReport {
    pub k: usize,
    pub per_prime: BTreeMap<u64, CoverPrime>,
    pub estimate: DimensionEstimate,
}

impl CoverReport {
    pub fn to_json(&self) -> Value {
        let per: BTreeMap<String, Value> = self
            .per_prime
            .iter()
            .map(|(p, c)| {
                (
                    p.to_string(),
                    json!({
                        "lines": c.lines.to_string(),
                        "covering_lines": c.covering_lines,
                        "marked_points": c.marked_points,
                        "total_points": c.total_points.to_string(),
                    }),
                )
            })
            .collect();
        json!({"k": self.k, "per_prime": per, "estimate": self.estimate.to_json()})
    }
}

/// One classifier per prime. Every line of `P^N(F_p)` is classified, so the
/// cost is about `p^(2N-2)` line sections per prime.
pub fn secant_locus_cover(varieties: &[&dyn LineClassifier], k: usize, budget: u128) -> Result<CoverReport, CensusError> {
    if k < 2 {
        return Err(CensusError::BadK);
    }
    let mut per_prime = BTreeMap::new();
    for x in varieties {
        let p = x.field().modulus();
        let n = x.ambient_dim();
        let lines = count_lines(p, n);
        let needed = lines.saturating_mul(x.line_cost());
        if needed > budget {
            return Err(CensusError::TooLarge { needed, budget });
        }
        let all = all_lines(p, n);
        let covering: Result<Vec<bool>, CensusError> = all
            .par_iter()
            .map(|(a, b)| {
                Ok(match x.classify(a, b)? {
                    LineSection::Contained => true,
                    s => s.total().unwrap_or(0) >= k,
                })
            })
            .collect();
        let covering = covering?;
        let mut marked = vec![false; (p as usize).pow(n as u32 + 1)];
        let mut covering_lines = 0;
        for ((a, b), cov) in all.iter().zip(&covering) {
            if !cov {
                continue;
            }
            covering_lines += 1;
            marked[index(p, b)] = true;
            for t in 0..p {
                let v: Vec<u64> = a.iter().zip(b).map(|(x, y)| (x + t * y) % p).collect();
                marked[index(p, &v)] = true;
            }
        }
        let marked_points = marked.iter().filter(|&&m| m).count() as u64;
        let total_points = super::lines_through_point(p, n + 1);
        per_prime.insert(p, CoverPrime { lines, covering_lines, marked_points, total_points });
    }
    let counts: BTreeMap<u64, u64> = per_prime.iter().map(|(&p, c)| (p, c.marked_points)).collect();
    Ok(CoverReport { k, per_prime, estimate: dimension_estimate(&counts) })
}

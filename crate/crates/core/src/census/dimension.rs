//! Dimension from point-count growth: fit `log count ~ slope * log p`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::arith::Rational;

/// Residuals above this are flagged.
pub const RESIDUAL_THRESHOLD: f64 = 0.3;

#[derive(Debug, Clone, PartialEq)]
pub enum DimensionEstimate {
    Empty,
    InsufficientData,
    Estimate {
        dimension: i64,
        /// Fitted slope, rounded to 1/1000.
        slope: Rational,
        /// `|slope - dimension|`, rounded to 1/1000.
        residual: Rational,
        flagged: bool,
    },
}

impl DimensionEstimate {
    pub fn is_flagged(&self) -> bool {
        matches!(self, DimensionEstimate::Estimate { flagged: true, .. })
    }

    pub fn dimension(&self) -> Option<i64> {
        match self {
            DimensionEstimate::Estimate { dimension, .. } => Some(*dimension),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            DimensionEstimate::Empty => json!({"dimension": "empty"}),
            DimensionEstimate::InsufficientData => json!({"dimension": "insufficient data"}),
            DimensionEstimate::Estimate { dimension, slope, residual, flagged } => json!({
                "dimension": dimension,
                "slope": slope.to_string(),
                "residual": residual.to_string(),
                "flagged": flagged,
            }),
        }
    }
}

/// Least-squares slope of `log count` against `log p` over the primes with
/// positive counts.
pub fn dimension_estimate(counts: &BTreeMap<u64, u64>) -> DimensionEstimate {
    if counts.values().all(|&c| c == 0) {
        return DimensionEstimate::Empty;
    }
    let pts: Vec<(f64, f64)> =
        counts.iter().filter(|(_, &c)| c > 0).map(|(&p, &c)| ((p as f64).ln(), (c as f64).ln())).collect();
    if pts.len() < 2 {
        return DimensionEstimate::InsufficientData;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let dimension = slope.round() as i64;
    let residual = (slope - dimension as f64).abs();
    DimensionEstimate::Estimate {
        dimension,
        slope: Rational::approximate(slope, 1000),
        residual: Rational::approximate(residual, 1000),
        flagged: residual > RESIDUAL_THRESHOLD,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[(u64, u64)]) -> BTreeMap<u64, u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn examples() {
        assert_eq!(dimension_estimate(&m(&[(11, 1), (13, 1), (17, 1)])).dimension(), Some(0));
        assert_eq!(dimension_estimate(&m(&[(11, 12), (13, 14), (17, 18)])).dimension(), Some(1));
        assert_eq!(dimension_estimate(&m(&[(11, 0), (13, 0)])), DimensionEstimate::Empty);
        assert_eq!(dimension_estimate(&m(&[(11, 3), (13, 0)])), DimensionEstimate::InsufficientData);
        let e = dimension_estimate(&m(&[(7, 400), (11, 1464)]));
        assert_eq!(e.dimension(), Some(3));
        assert!(!e.is_flagged());
    }
}

//! Aligned ordered Hilbert schemes of line sections, their cotangent-rank
//! smoothness criteria, and exhaustive line censuses over finite fields.

pub mod arith;
pub mod poly;
pub mod elim;
pub mod linalg;
pub mod hilbert;
pub mod chart;
pub mod tangent;
pub mod instances;
pub mod census;
pub mod gallery;
pub mod cli;

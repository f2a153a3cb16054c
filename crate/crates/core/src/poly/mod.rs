//! Exact polynomial arithmetic.

mod binary;
mod factor;
mod multi;
mod parse;
mod remainder;
mod uni;

pub use binary::{binary_gcd, binary_gcd_all, binary_profile, BinaryForm};
pub use factor::{
    distinct_degree, equal_degree, factor_profile, irreducible_factors, is_irreducible, root_multiplicities, roots,
    squarefree_decomposition,
};
pub use multi::{grlex, Exp, MultiPoly, PolyRing};
pub use parse::{parse_poly, ParseError};
pub use remainder::{lagrange_interpolate, rem_mod_product};
pub use uni::{binomial_in, PolyError, UniPoly};

//! Binary forms `F(t0, t1)` stored by their dehomogenization `F(1, t)`.

use super::{factor_profile, PolyError, UniPoly};
use crate::arith::{Field, FiniteField};

#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm<F: Field> {
    pub degree: usize,
    /// `F(1, t)`; coefficient `i` multiplies `t0^(degree - i) t1^i`.
    pub affine: UniPoly<F>,
}

impl<F: Field> BinaryForm<F> {
    pub fn new(degree: usize, affine: UniPoly<F>) -> Self {
        assert!(affine.degree().map_or(true, |d| d <= degree), "form degree too small");
        BinaryForm { degree, affine }
    }

    /// From coefficients of `t0^(D-i) t1^i`, `i = 0..=D`.
    pub fn from_coeffs(field: &F, coeffs: Vec<F::Elem>) -> Self {
        let degree = coeffs.len().saturating_sub(1);
        BinaryForm { degree, affine: UniPoly::new(field, coeffs) }
    }

    pub fn is_zero(&self) -> bool {
        self.affine.is_zero()
    }

    /// Multiplicity of the root `[0 : 1]`.
    pub fn drop_at_infinity(&self) -> usize {
        self.degree - self.affine.degree().unwrap_or(0)
    }

    pub fn eval(&self, t0: &F::Elem, t1: &F::Elem) -> F::Elem {
        let f = self.affine.field();
        let mut acc = f.zero();
        for (i, c) in self.affine.coeffs().iter().enumerate() {
            let m = f.mul(&f.pow(t0, (self.degree - i) as u64), &f.pow(t1, i as u64));
            acc = f.add(&acc, &f.mul(c, &m));
        }
        acc
    }
}

/// Gcd of two binary forms, normalized so the dehomogenized part is monic.
pub fn binary_gcd<F: Field>(a: &BinaryForm<F>, b: &BinaryForm<F>) -> Result<BinaryForm<F>, PolyError> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => Err(PolyError::BothZero),
        (true, false) => Ok(BinaryForm::new(b.degree, b.affine.monic())),
        (false, true) => Ok(BinaryForm::new(a.degree, a.affine.monic())),
        (false, false) => {
            let g = a.affine.gcd(&b.affine)?;
            let drop = a.drop_at_infinity().min(b.drop_at_infinity());
            let degree = g.degree().unwrap() + drop;
            Ok(BinaryForm::new(degree, g))
        }
    }
}

/// Gcd of several forms; zero forms are skipped. `None` if all are zero.
pub fn binary_gcd_all<F: Field>(forms: &[BinaryForm<F>]) -> Result<Option<BinaryForm<F>>, PolyError> {
    let mut acc: Option<BinaryForm<F>> = None;
    for f in forms.iter().filter(|f| !f.is_zero()) {
        acc = Some(match acc {
            None => BinaryForm::new(f.degree, f.affine.monic()),
            Some(g) => binary_gcd(&g, f)?,
        });
        if acc.as_ref().is_some_and(|g| g.degree == 0) {
            break;
        }
    }
    Ok(acc)
}

/// `(degree, multiplicity)` of the irreducible factors of a nonzero form, the
/// root `[0:1]` contributing a degree-one factor.
pub fn binary_profile<F: FiniteField>(g: &BinaryForm<F>) -> Result<Vec<(usize, usize)>, PolyError> {
    if g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut out = if g.affine.is_constant() { Vec::new() } else { factor_profile(&g.affine)? };
    let drop = g.drop_at_infinity();
    if drop > 0 {
        out.push((1, drop));
    }
    out.sort();
    Ok(out)
}

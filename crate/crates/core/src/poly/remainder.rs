use super::{MultiPoly, PolyError, UniPoly};
use crate::arith::Field;

/// Remainder of `g` modulo `prod_i (z - z_i)^{k_i}`, with `z` and the `z_i`
/// variables of `g`'s ring. Returns `h_0..h_{k-1}` with
/// `g = sum h_l z^l mod prod (z - z_i)^{k_i}`; the `h_l` do not involve `z`.
pub fn rem_mod_product<F: Field>(
    g: &MultiPoly<F>,
    z: usize,
    zs: &[usize],
    profile: &[usize],
) -> Result<Vec<MultiPoly<F>>, PolyError> {
    assert_eq!(zs.len(), profile.len());
    let k: usize = profile.iter().sum();
    if k == 0 {
        return Err(PolyError::EmptyProfile);
    }
    let ring = g.ring();
    // monic modulus as coefficient list in z
    let mut modulus = vec![MultiPoly::one(ring)];
    for (&zi, &ki) in zs.iter().zip(profile) {
        let neg_zi = MultiPoly::var(ring, zi).neg();
        for _ in 0..ki {
            let mut next = vec![MultiPoly::zero(ring); modulus.len() + 1];
            for (j, c) in modulus.iter().enumerate() {
                next[j + 1] = next[j + 1].add(c);
                next[j] = next[j].add(&c.mul(&neg_zi));
            }
            modulus = next;
        }
    }
    let mut coeffs = g.coeffs_in(z);
    if coeffs.len() < k {
        coeffs.resize(k, MultiPoly::zero(ring));
    }
    for top in (k..coeffs.len()).rev() {
        let c = std::mem::replace(&mut coeffs[top], MultiPoly::zero(ring));
        if c.is_zero() {
            continue;
        }
        for j in 0..k {
            let t = c.mul(&modulus[j]);
            coeffs[top - k + j] = coeffs[top - k + j].sub(&t);
        }
    }
    coeffs.truncate(k);
    Ok(coeffs)
}

/// Interpolating polynomial of degree `< n` through `(x_i, y_i)`, `x_i` distinct.
pub fn lagrange_interpolate<F: Field>(field: &F, xs: &[F::Elem], ys: &[F::Elem]) -> Result<UniPoly<F>, PolyError> {
    let mut acc = UniPoly::zero(field);
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = UniPoly::one(field);
        let mut denom = field.one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = basis.mul(&UniPoly::linear(field, xj));
                denom = field.mul(&denom, &field.sub(xi, xj));
            }
        }
        acc = acc.add(&basis.scale(&field.div(yi, &denom)?));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rationals;
    use crate::poly::{parse_poly, PolyRing};

    #[test]
    fn division_identities() {
        let r = PolyRing::new(&Rationals, &["z", "z1", "z2"]);
        let g = parse_poly(&r, "z^2").unwrap();
        let h = rem_mod_product(&g, 0, &[1, 2], &[1, 1]).unwrap();
        assert_eq!(h[0], parse_poly(&r, "-z1*z2").unwrap());
        assert_eq!(h[1], parse_poly(&r, "z1 + z2").unwrap());
        let h = rem_mod_product(&g, 0, &[1], &[2]).unwrap();
        assert_eq!(h[0], parse_poly(&r, "-z1^2").unwrap());
        assert_eq!(h[1], parse_poly(&r, "2*z1").unwrap());
        assert_eq!(rem_mod_product(&g, 0, &[1], &[0]), Err(PolyError::EmptyProfile));
    }

    #[test]
    fn low_degree_is_its_own_remainder() {
        let r = PolyRing::new(&Rationals, &["z", "z1"]);
        let g = parse_poly(&r, "3*z - 1").unwrap();
        let h = rem_mod_product(&g, 0, &[1], &[3]).unwrap();
        assert_eq!(h.len(), 3);
        assert_eq!(h[1], MultiPoly::from_i64(&r, 3));
        assert!(h[2].is_zero());
    }
}

//! Factorization over finite fields.

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{PolyError, UniPoly};
use crate::arith::FiniteField;

/// Square-free decomposition: monic pairwise coprime square-free `a_i` with
/// `f = lead * prod a_i^{m_i}`. Sorted by multiplicity.
pub fn squarefree_decomposition<F: FiniteField>(f: &UniPoly<F>) -> Result<Vec<(UniPoly<F>, usize)>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    sqf_rec(&f.monic(), 1, &mut out)?;
    // a factor of multiplicity b + qp shows up once with b and once with qp
    let mut i = 0;
    while i < out.len() {
        let mut j = i + 1;
        while j < out.len() {
            let g = out[i].0.gcd(&out[j].0)?;
            if g.is_constant() {
                j += 1;
                continue;
            }
            let m = out[i].1 + out[j].1;
            out[i].0 = out[i].0.div_exact(&g)?;
            out[j].0 = out[j].0.div_exact(&g)?;
            out.push((g, m));
        }
        i += 1;
    }
    out.retain(|(g, _)| !g.is_constant());
    out.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.sort_key().cmp(&b.0.sort_key())));
    let mut merged: Vec<(UniPoly<F>, usize)> = Vec::new();
    for (g, m) in out {
        match merged.last_mut() {
            Some((h, mm)) if *mm == m => *h = h.mul(&g),
            _ => merged.push((g, m)),
        }
    }
    Ok(merged)
}

fn sqf_rec<F: FiniteField>(f: &UniPoly<F>, scale: usize, out: &mut Vec<(UniPoly<F>, usize)>) -> Result<(), PolyError> {
    if f.is_constant() {
        return Ok(());
    }
    let field = f.field().clone();
    let p = field.prime() as usize;
    let df = f.derivative();
    if df.is_zero() {
        // f = g(z^p)
        let root = pth_root_poly(f);
        return sqf_rec(&root, scale * p, out);
    }
    // Yun-style loop in characteristic p
    let mut c = f.gcd(&df)?;
    let mut w = f.div_exact(&c)?;
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c)?;
        let fac = w.div_exact(&y)?;
        if !fac.is_constant() {
            out.push((fac, i * scale));
        }
        w = y;
        c = c.div_exact(&w)?;
        i += 1;
    }
    if !c.is_constant() {
        let root = pth_root_poly(&c);
        sqf_rec(&root, scale * p, out)?;
    }
    Ok(())
}

/// For `f = g(z^p)` returns `g^{1/p}` coefficientwise, i.e. the `h` with `h^p = f`.
fn pth_root_poly<F: FiniteField>(f: &UniPoly<F>) -> UniPoly<F> {
    let field = f.field();
    let p = field.prime() as usize;
    let coeffs = f.coeffs().iter().step_by(p).map(|c| field.pth_root(c)).collect();
    UniPoly::new(field, coeffs)
}

/// Distinct-degree factorization of a monic square-free polynomial:
/// `(d, product of all irreducible factors of degree d)`.
pub fn distinct_degree<F: FiniteField>(f: &UniPoly<F>) -> Result<Vec<(usize, UniPoly<F>)>, PolyError> {
    let field = f.field();
    let q = field.order();
    let mut out = Vec::new();
    let mut rest = f.monic();
    let x = UniPoly::x(field);
    let mut h = x.rem(&rest)?;
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(&q, &rest)?;
        let g = rest.gcd(&h.sub(&x))?;
        if !g.is_constant() {
            rest = rest.div_exact(&g)?;
            h = h.rem(&rest)?;
            out.push((d, g));
        }
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((deg, rest));
        }
    }
    Ok(out)
}

/// `(degree, multiplicity)` pairs: each entry is one irreducible factor, i.e.
/// `degree` conjugate geometric roots of that multiplicity. Sorted.
pub fn factor_profile<F: FiniteField>(f: &UniPoly<F>) -> Result<Vec<(usize, usize)>, PolyError> {
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f)? {
        for (d, part) in distinct_degree(&g)? {
            let count = part.degree().unwrap() / d;
            for _ in 0..count {
                out.push((d, m));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Geometric multiplicities of the roots, sorted descending.
pub fn root_multiplicities<F: FiniteField>(f: &UniPoly<F>) -> Result<Vec<usize>, PolyError> {
    let mut out: Vec<usize> =
        factor_profile(f)?.into_iter().flat_map(|(d, m)| std::iter::repeat(m).take(d)).collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    Ok(out)
}

/// Splits a monic square-free product of irreducibles of degree `d` into its
/// factors (Cantor-Zassenhaus with a fixed seed). Output sorted.
pub fn equal_degree<F: FiniteField>(f: &UniPoly<F>, d: usize) -> Result<Vec<UniPoly<F>>, PolyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    edf_rec(&f.monic(), d, &mut rng, &mut out)?;
    out.sort_by_key(|g| g.sort_key());
    Ok(out)
}

fn edf_rec<F: FiniteField>(
    f: &UniPoly<F>,
    d: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<UniPoly<F>>,
) -> Result<(), PolyError> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Ok(());
    }
    if n == d {
        out.push(f.clone());
        return Ok(());
    }
    let field = f.field();
    let q = field.order();
    let qd = q.pow(d as u32);
    loop {
        let coeffs = (0..n).map(|_| field.random_elem(rng)).collect();
        let a = UniPoly::new(field, coeffs);
        if a.is_constant() {
            continue;
        }
        let b = if field.prime() == 2 {
            // absolute trace to F_2: a + a^2 + ... + a^(2^(k-1)), q^d = 2^k
            let k = qd.bits() - 1;
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..k {
                t = t.mul_mod(&t, f)?;
                acc = acc.add(&t);
            }
            acc
        } else {
            let e: BigUint = (&qd - BigUint::one()) >> 1;
            a.pow_mod(&e, f)?.sub(&UniPoly::one(field))
        };
        let g = f.gcd(&b)?;
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let h = f.div_exact(&g)?;
            edf_rec(&g, d, rng, out)?;
            edf_rec(&h, d, rng, out)?;
            return Ok(());
        }
    }
}

/// Full factorization into monic irreducibles with multiplicities.
pub fn irreducible_factors<F: FiniteField>(f: &UniPoly<F>) -> Result<Vec<(UniPoly<F>, usize)>, PolyError> {
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f)? {
        for (d, part) in distinct_degree(&g)? {
            for h in equal_degree(&part, d)? {
                out.push((h, m));
            }
        }
    }
    out.sort_by(|a, b| a.0.sort_key().cmp(&b.0.sort_key()).then(a.1.cmp(&b.1)));
    Ok(out)
}

/// Distinct roots in the coefficient field, sorted.
pub fn roots<F: FiniteField>(f: &UniPoly<F>) -> Result<Vec<F::Elem>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let field = f.field();
    let mut g = f.monic();
    let mut out = Vec::new();
    if g.coeff(0) == field.zero() && !g.is_constant() {
        out.push(field.zero());
    }
    // square-free part restricted to linear factors: gcd(f, z^q - z)
    let x = UniPoly::x(field);
    while !g.is_constant() && field.is_zero(&g.coeff(0)) {
        g = g.div_exact(&x)?;
    }
    if !g.is_constant() {
        let xq = x.pow_mod(&field.order(), &g)?;
        let lin = g.gcd(&xq.sub(&x))?;
        for h in equal_degree(&lin, 1)? {
            out.push(field.neg(&h.coeff(0)));
        }
    }
    out.sort();
    Ok(out)
}

/// `g` is irreducible over its field.
pub fn is_irreducible<F: FiniteField>(f: &UniPoly<F>) -> Result<bool, PolyError> {
    let prof = factor_profile(f)?;
    Ok(prof.len() == 1 && prof[0].1 == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_extension, Field, PrimeField};

    fn fp(p: u64, c: &[i64]) -> UniPoly<PrimeField> {
        UniPoly::from_i64(&PrimeField::new(p).unwrap(), c)
    }

    #[test]
    fn profile_examples() {
        // z^2 (z - 1) over F_7
        assert_eq!(factor_profile(&fp(7, &[0, 0, -1, 1])).unwrap(), vec![(1, 1), (1, 2)]);
        assert_eq!(factor_profile(&fp(3, &[1, 0, 1])).unwrap(), vec![(2, 1)]);
        let sq = fp(3, &[1, 0, 1]).pow(2);
        assert_eq!(factor_profile(&sq).unwrap(), vec![(2, 2)]);
        assert!(factor_profile(&fp(3, &[])).is_err());
    }

    #[test]
    fn inseparable_input() {
        // (z^3 - t)... over F_3: z^3 + 1 = (z + 1)^3
        assert_eq!(factor_profile(&fp(3, &[1, 0, 0, 1])).unwrap(), vec![(1, 3)]);
        // (z^2 + 1)^3 (z + 2)^4
        let f = fp(3, &[1, 0, 1]).pow(3).mul(&fp(3, &[2, 1]).pow(4));
        assert_eq!(factor_profile(&f).unwrap(), vec![(1, 4), (2, 3)]);
    }

    #[test]
    fn roots_and_factors_multiply_back() {
        let f = fp(11, &[3, 1]).mul(&fp(11, &[5, 0, 1])).mul(&fp(11, &[-2, 1]).pow(2)).mul(&fp(11, &[1, 1, 0, 1]));
        let facs = irreducible_factors(&f).unwrap();
        let back = facs.iter().fold(UniPoly::one(f.field()), |acc, (g, m)| acc.mul(&g.pow(*m as u32)));
        assert_eq!(back, f.monic());
        let r = roots(&f).unwrap();
        for a in &r {
            assert_eq!(f.eval(a), 0);
        }
        assert!(r.contains(&8) && r.contains(&2));
    }

    #[test]
    fn char_two_splitting() {
        let f4 = make_extension(2, 2).unwrap();
        // z^4 - z splits completely over F_4
        let zero = f4.zero();
        let one = f4.one();
        let poly = UniPoly::new(&f4, vec![zero.clone(), f4.neg(&one), zero.clone(), zero, one]);
        assert_eq!(roots(&poly).unwrap().len(), 4);
        let f2 = PrimeField::new(2).unwrap();
        let g = UniPoly::from_i64(&f2, &[1, 1, 0, 1]).mul(&UniPoly::from_i64(&f2, &[1, 0, 1, 1]));
        assert_eq!(irreducible_factors(&g).unwrap().len(), 2);
    }
}

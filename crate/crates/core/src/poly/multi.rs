use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use super::{binomial_in, PolyError, UniPoly};
use crate::arith::{ArithError, Field};

pub type Exp = SmallVec<[u32; 8]>;

/// A polynomial ring: coefficient field plus ordered variable names.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyRing<F: Field> {
    pub field: F,
    pub vars: Vec<String>,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: &F, vars: &[&str]) -> Arc<Self> {
        Arc::new(PolyRing { field: field.clone(), vars: vars.iter().map(|s| s.to_string()).collect() })
    }

    pub fn from_names(field: &F, vars: Vec<String>) -> Arc<Self> {
        Arc::new(PolyRing { field: field.clone(), vars })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index(&self, name: &str) -> Result<usize, PolyError> {
        self.vars.iter().position(|v| v == name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }
}

/// Graded lexicographic order: total degree, then exponents compared from the first variable.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Sparse polynomial in the variables of `ring`. No zero coefficients are stored.
#[derive(Clone)]
pub struct MultiPoly<F: Field> {
    ring: Arc<PolyRing<F>>,
    terms: BTreeMap<Exp, F::Elem>,
}

impl<F: Field> PartialEq for MultiPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(ring: &Arc<PolyRing<F>>) -> Self {
        MultiPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<PolyRing<F>>, c: F::Elem) -> Self {
        let mut p = Self::zero(ring);
        if !ring.field.is_zero(&c) {
            p.terms.insert(SmallVec::from_elem(0, ring.nvars()), c);
        }
        p
    }

    pub fn one(ring: &Arc<PolyRing<F>>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn from_i64(ring: &Arc<PolyRing<F>>, c: i64) -> Self {
        Self::constant(ring, ring.field.from_i64(c))
    }

    pub fn var(ring: &Arc<PolyRing<F>>, i: usize) -> Self {
        let mut e: Exp = SmallVec::from_elem(0, ring.nvars());
        e[i] = 1;
        Self::monomial(ring, ring.field.one(), e)
    }

    pub fn var_named(ring: &Arc<PolyRing<F>>, name: &str) -> Result<Self, PolyError> {
        Ok(Self::var(ring, ring.index(name)?))
    }

    pub fn monomial(ring: &Arc<PolyRing<F>>, c: F::Elem, e: Exp) -> Self {
        assert_eq!(e.len(), ring.nvars());
        let mut p = Self::zero(ring);
        if !ring.field.is_zero(&c) {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn from_terms(ring: &Arc<PolyRing<F>>, terms: impl IntoIterator<Item = (Exp, F::Elem)>) -> Self {
        let mut p = Self::zero(ring);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exp, c: F::Elem) {
        let f = &self.ring.field;
        if f.is_zero(&c) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(o.get(), &c);
                if f.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing<F>> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        &self.ring.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> F::Elem {
        let zero: Exp = SmallVec::from_elem(0, self.ring.nvars());
        self.terms.get(&zero).cloned().unwrap_or_else(|| self.ring.field.zero())
    }

    pub fn coeff(&self, e: &[u32]) -> F::Elem {
        self.terms.get(e).cloned().unwrap_or_else(|| self.ring.field.zero())
    }

    /// `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Variables actually occurring.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }

    pub fn same_ring(&self, other: &Self) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch(format!("{:?} vs {:?}", self.ring.vars, other.ring.vars)))
        }
    }

    fn assert_ring(&self, other: &Self) {
        if let Err(e) = self.same_ring(other) {
            panic!("{e}");
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        Ok(self.add(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        Ok(self.mul(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let f = &self.ring.field;
        MultiPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), f.neg(c))).collect() }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.ring.field;
        if f.is_zero(c) {
            return Self::zero(&self.ring);
        }
        MultiPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(e, a)| (e.clone(), f.mul(a, c))).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_ring(other);
        let f = &self.ring.field;
        let mut out = Self::zero(&self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exp = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                out.add_term(e, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiply by a monomial `x^e`.
    pub fn shift_exp(&self, e: &[u32]) -> Self {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.iter().zip(e.iter()).map(|(x, y)| x + y).collect(), c.clone()))
                .collect(),
        }
    }

    /// `s`-fold partial derivative in variable `i`; order -1 gives zero.
    pub fn partial(&self, i: usize, order: i64) -> Self {
        let f = &self.ring.field;
        if order < 0 {
            return Self::zero(&self.ring);
        }
        let s = order as u32;
        let mut out = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            if e[i] < s {
                continue;
            }
            let mut fac = f.one();
            for k in 0..s {
                fac = f.mul(&fac, &f.from_u64((e[i] - k) as u64));
            }
            let mut ne = e.clone();
            ne[i] -= s;
            out.add_term(ne, f.mul(c, &fac));
        }
        out
    }

    /// Hasse derivative of order `s` in variable `i` (`x^n -> binom(n, s) x^(n-s)`).
    pub fn hasse(&self, i: usize, order: i64) -> Self {
        let f = &self.ring.field;
        if order < 0 {
            return Self::zero(&self.ring);
        }
        let s = order as u32;
        let p = f.characteristic();
        let mut out = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            if e[i] < s {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= s;
            out.add_term(ne, f.mul(c, &binomial_in(f, e[i] as u64, s as u64, p)));
        }
        out
    }

    /// Derivative by variable name.
    pub fn derivative(&self, var: &str, order: i64) -> Result<Self, PolyError> {
        let i = self.ring.index(var)?;
        Ok(self.partial(i, order))
    }

    pub fn eval(&self, point: &[F::Elem]) -> F::Elem {
        let f = &self.ring.field;
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.iter()) {
                if k > 0 {
                    t = f.mul(&t, &f.pow(x, k as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Ring homomorphism sending variable `i` to `images[i]`.
    pub fn substitute(&self, target: &Arc<PolyRing<F>>, images: &[MultiPoly<F>]) -> Self {
        assert_eq!(images.len(), self.ring.nvars());
        let mut powers: Vec<Vec<MultiPoly<F>>> = images.iter().map(|g| vec![MultiPoly::one(target), g.clone()]).collect();
        for i in 0..images.len() {
            let need = self.degree_in(i).unwrap_or(0) as usize;
            while powers[i].len() <= need {
                let next = powers[i].last().unwrap().mul(&images[i]);
                powers[i].push(next);
            }
        }
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Homomorphism into univariate polynomials.
    pub fn substitute_uni(&self, images: &[UniPoly<F>]) -> UniPoly<F> {
        let f = &self.ring.field;
        let mut powers: Vec<Vec<UniPoly<F>>> = images.iter().map(|g| vec![UniPoly::one(f), g.clone()]).collect();
        let mut out = UniPoly::zero(f);
        for (e, c) in &self.terms {
            let mut t = UniPoly::constant(f, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][k as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    /// Substitutes constants for some variables, keeping the ring.
    pub fn partial_eval(&self, assign: &[(usize, F::Elem)]) -> Self {
        let f = &self.ring.field;
        let mut out = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            let mut c = c.clone();
            let mut ne = e.clone();
            for (i, v) in assign {
                c = f.mul(&c, &f.pow(v, ne[*i] as u64));
                ne[*i] = 0;
            }
            out.add_term(ne, c);
        }
        out
    }

    /// Coefficients as a polynomial in variable `i`: `result[k]` multiplies `x_i^k`.
    pub fn coeffs_in(&self, i: usize) -> Vec<Self> {
        let n = self.degree_in(i).map_or(0, |d| d as usize + 1);
        let mut out = vec![Self::zero(&self.ring); n];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let k = ne[i] as usize;
            ne[i] = 0;
            out[k].add_term(ne, c.clone());
        }
        out
    }

    /// As a univariate polynomial in variable `i`; errors if other variables occur.
    pub fn to_uni(&self, i: usize) -> Result<UniPoly<F>, PolyError> {
        let f = &self.ring.field;
        let n = self.degree_in(i).map_or(0, |d| d as usize + 1);
        let mut coeffs = vec![f.zero(); n];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k > 0) {
                return Err(PolyError::RingMismatch(format!("{} is not univariate in {}", self, self.ring.vars[i])));
            }
            coeffs[e[i] as usize] = c.clone();
        }
        Ok(UniPoly::new(f, coeffs))
    }

    pub fn from_uni(ring: &Arc<PolyRing<F>>, i: usize, g: &UniPoly<F>) -> Self {
        let n = ring.nvars();
        Self::from_terms(
            ring,
            g.coeffs().iter().enumerate().map(|(k, c)| {
                let mut e: Exp = SmallVec::from_elem(0, n);
                e[i] = k as u32;
                (e, c.clone())
            }),
        )
    }

    /// Moves the polynomial into another ring over the same field, matching variables by name.
    pub fn to_ring(&self, target: &Arc<PolyRing<F>>) -> Result<Self, PolyError> {
        let map: Vec<Option<usize>> = self.ring.vars.iter().map(|v| target.index(v).ok()).collect();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut ne: Exp = SmallVec::from_elem(0, target.nvars());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => ne[j] = k,
                    None => return Err(PolyError::UnknownVariable(self.ring.vars[i].clone())),
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Coefficientwise image under a field map into a ring with the same number of variables.
    pub fn map_coeffs<G: Field>(&self, target: &Arc<PolyRing<G>>, f: impl Fn(&F::Elem) -> G::Elem) -> MultiPoly<G> {
        assert_eq!(target.nvars(), self.ring.nvars());
        MultiPoly::from_terms(target, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    pub fn try_map_coeffs<G: Field>(
        &self,
        target: &Arc<PolyRing<G>>,
        f: impl Fn(&F::Elem) -> Result<G::Elem, ArithError>,
    ) -> Result<MultiPoly<G>, ArithError> {
        assert_eq!(target.nvars(), self.ring.nvars());
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            terms.push((e.clone(), f(c)?));
        }
        Ok(MultiPoly::from_terms(target, terms))
    }

    /// Terms sorted descending in graded lex order.
    pub fn sorted_terms(&self) -> Vec<(&Exp, &F::Elem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex(b.0, a.0));
        v
    }

    /// Leading term in graded lex order.
    pub fn lead_term(&self) -> Option<(&Exp, &F::Elem)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    /// Canonical text: terms in descending graded lex order.
    pub fn to_text(&self) -> String {
        let f = &self.ring.field;
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { self.ring.vars[i].clone() } else { format!("{}^{}", self.ring.vars[i], k) })
                    .collect();
                term_text(&f.format_elem(c), &mono.join("*"))
            })
            .collect();
        join_terms(&parts)
    }
}

pub(crate) fn term_text(cs: &str, mono: &str) -> String {
    if mono.is_empty() {
        return cs.to_string();
    }
    match cs {
        "1" => mono.to_string(),
        "-1" => format!("-{mono}"),
        _ if cs.contains('+') || cs.get(1..).is_some_and(|r| r.contains('-')) => format!("({cs})*{mono}"),
        _ => format!("{cs}*{mono}"),
    }
}

pub(crate) fn join_terms(parts: &[String]) -> String {
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rationals;

    #[test]
    fn derivative_examples() {
        let r = PolyRing::new(&Rationals, &["x1", "x2", "z"]);
        let z = MultiPoly::var(&r, 2);
        let x1 = MultiPoly::var(&r, 0);
        let x2 = MultiPoly::var(&r, 1);
        assert_eq!(z.pow(3).derivative("z", 2).unwrap(), z.scale(&Rationals.from_i64(6)));
        assert!(z.pow(2).derivative("z", -1).unwrap().is_zero());
        assert_eq!(x1.mul(&z).add(&x2).derivative("z", 1).unwrap(), x1);
        assert!(z.derivative("w", 1).is_err());
    }

    #[test]
    fn canonical_text() {
        let r = PolyRing::new(&Rationals, &["x1", "x2", "z"]);
        let z = MultiPoly::var(&r, 2);
        let x1 = MultiPoly::var(&r, 0);
        let x2 = MultiPoly::var(&r, 1);
        let half = Rationals.from_rational(&"3/2".parse().unwrap()).unwrap();
        let p = x1.pow(2).mul(&z).sub(&x2.scale(&half));
        assert_eq!(p.to_text(), "x1^2*z - 3/2*x2");
        assert_eq!(x2.sub(&x1).to_text(), "-x1 + x2");
    }

    #[test]
    fn substitution_is_a_homomorphism() {
        let r = PolyRing::new(&Rationals, &["x", "y"]);
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let f = x.pow(2).add(&y);
        let g = x.mul(&y).sub(&MultiPoly::one(&r));
        let images = vec![y.add(&MultiPoly::one(&r)), x.scale(&Rationals.from_i64(2))];
        let lhs = f.mul(&g).substitute(&r, &images);
        let rhs = f.substitute(&r, &images).mul(&g.substitute(&r, &images));
        assert_eq!(lhs, rhs);
    }
}

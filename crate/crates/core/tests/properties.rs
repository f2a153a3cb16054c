use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use multisecant::arith::{Field, FiniteField, PrimeField, Rational, Rationals};
use multisecant::census::{
    census_through_point, directions, independent, line_profile, projective_ring, random_projective_point, ImplicitVariety,
    LineSection, DEFAULT_BUDGET,
};
use multisecant::chart::{ambient_ring, line_frame, linearize, normalize_generators, pull_to_chart, restriction, specialize_to_star, LineChart};
use multisecant::gallery::{builtin, Variety};
use multisecant::hilbert::{oh_equations, Profile};
use multisecant::instances::{random_parts, random_poly, random_valid_section};
use multisecant::poly::{binomial_in, factor_profile, is_irreducible, lagrange_interpolate, parse_poly, rem_mod_product, Exp, MultiPoly, PolyRing, UniPoly};
use multisecant::tangent::smooth_at;

const PRIMES: [u64; 5] = [2, 3, 5, 7, 101];

fn field(i: usize) -> PrimeField {
    PrimeField::new(PRIMES[i % PRIMES.len()]).unwrap()
}

fn cubic_and_quartic(p: u64) -> Vec<ImplicitVariety<PrimeField>> {
    let mut out = Vec::new();
    for name in ["twisted-cubic", "random-ci:3:2,2:1"] {
        let Variety::Implicit(x) = builtin(name).unwrap().variety else { unreachable!() };
        out.push(x.reduce(p).unwrap());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, .. ProptestConfig::default() })]

    #[test]
    fn remainder_agrees_with_pointwise_division(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi + 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let parts = random_parts(4, 3, &mut rng);
        let mut names = vec!["x".to_string(), "z".to_string()];
        names.extend((1..=parts.len()).map(|j| format!("z{j}")));
        let ring = PolyRing::from_names(&f, names);
        let g = random_poly(&ring, 6, 0.3, &mut rng);
        let zs: Vec<usize> = (2..2 + parts.len()).collect();
        let h = rem_mod_product(&g, 1, &zs, &parts).unwrap();
        prop_assert_eq!(h.len(), parts.iter().sum::<usize>());
        prop_assert!(h.iter().all(|c| c.degree_in(1).unwrap_or(0) == 0));
        // specialize x and the z_j; g - sum h_l z^l must vanish to order k_j at a_j
        let mut pool = f.elements();
        if pool.len() <= parts.len() { return Ok(()); }
        use rand::seq::SliceRandom;
        pool.shuffle(&mut rng);
        let x0 = f.random_elem(&mut rng);
        let mut assign = vec![(0, x0)];
        assign.extend(zs.iter().zip(&pool).map(|(&i, a)| (i, *a)));
        let gz = g.partial_eval(&assign).to_uni(1).unwrap();
        let hz = h.iter().enumerate().fold(UniPoly::zero(&f), |acc, (l, c)| {
            acc.add(&UniPoly::monomial(&f, c.partial_eval(&assign).constant_term(), l))
        });
        let diff = gz.sub(&hz);
        for (a, &k) in pool.iter().zip(&parts) {
            prop_assert!(diff.is_zero() || diff.order_at(a).unwrap() >= k);
        }
    }

    #[test]
    fn lagrange_interpolates(seed in any::<u64>(), n in 1usize..7) {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut xs: Vec<u64> = f.elements();
        use rand::seq::SliceRandom;
        xs.shuffle(&mut rng);
        xs.truncate(n);
        let ys: Vec<u64> = (0..n).map(|_| f.random_elem(&mut rng)).collect();
        let l = lagrange_interpolate(&f, &xs, &ys).unwrap();
        prop_assert!(l.degree().map_or(true, |d| d < n));
        for (x, y) in xs.iter().zip(&ys) {
            prop_assert_eq!(l.eval(x), *y);
        }
    }

    #[test]
    fn factor_profile_of_constructed_products(seed in any::<u64>(), fi in 0usize..4) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut product = UniPoly::one(&f);
        let mut expect: Vec<(usize, usize)> = Vec::new();
        let mut used: Vec<UniPoly<PrimeField>> = Vec::new();
        for _ in 0..rng.gen_range(1..4) {
            let d = rng.gen_range(1..4);
            // small fields run out of distinct low-degree irreducibles; skip then
            let found = (0..200).find_map(|_| {
                let mut c: Vec<u64> = (0..d).map(|_| f.random_elem(&mut rng)).collect();
                c.push(1);
                let g = UniPoly::new(&f, c);
                (is_irreducible(&g).unwrap() && !used.contains(&g)).then_some(g)
            });
            let Some(g) = found else { continue };
            let m = rng.gen_range(1..4);
            used.push(g.clone());
            product = product.mul(&g.pow(m as u32));
            expect.push((d, m));
        }
        expect.sort();
        prop_assert_eq!(factor_profile(&product).unwrap(), expect);
    }

    #[test]
    fn hasse_derivative_of_power(n in 0u64..40, s in 0i64..12, fi in 0usize..5) {
        let f = field(fi);
        let ring = PolyRing::new(&f, &["z"]);
        let zn = MultiPoly::var(&ring, 0).pow(n as u32);
        let want = if s as u64 > n {
            MultiPoly::zero(&ring)
        } else {
            MultiPoly::var(&ring, 0).pow((n - s as u64) as u32).scale(&binomial_in(&f, n, s as u64, f.modulus()))
        };
        prop_assert_eq!(zn.hasse(0, s), want);
    }

    #[test]
    fn equation_count_and_expected_dimension(seed in any::<u64>()) {
        let f = PrimeField::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (inst, _) = random_valid_section(&f, &mut rng);
        let chart = LineChart::standard(&f, inst.n);
        let pulled: Vec<_> = inst.generators.iter().map(|g| pull_to_chart(g, &chart).unwrap()).collect();
        let pres = oh_equations(&pulled, "z", &inst.profile).unwrap();
        let (c, k, r) = (inst.generators.len(), inst.profile.k(), inst.profile.r());
        prop_assert_eq!(pres.equations.len(), c * k);
        prop_assert_eq!(pres.expected_dimension(), (2 * (inst.n - 1) + r) as i64 - (c * k) as i64);
    }

    #[test]
    fn verdict_ignores_unimodular_recombination(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (inst, norm) = random_valid_section(&f, &mut rng);
        let c = inst.generators.len();
        let m: Vec<Vec<u64>> = loop {
            let m: Vec<Vec<u64>> = (0..c).map(|_| (0..c).map(|_| f.random_elem(&mut rng)).collect()).collect();
            if multisecant::linalg::det(&f, &m) != 0 { break m; }
        };
        let ring = inst.generators[0].ring().clone();
        let mixed: Vec<_> = (0..c)
            .map(|i| (0..c).fold(MultiPoly::zero(&ring), |acc, j| acc.add(&inst.generators[j].scale(&m[i][j]))))
            .collect();
        let Ok(norm2) = normalize_generators(&mixed, &inst.points, rng.gen()) else { return Ok(()) };
        let a = smooth_at(&norm, &inst.profile, &inst.points).unwrap();
        let b = smooth_at(&norm2, &inst.profile, &inst.points).unwrap();
        prop_assert_eq!(a.smooth_of_expected_dim, b.smooth_of_expected_dim);
        prop_assert_eq!(a.rank, b.rank);
    }

    #[test]
    fn linearization_splits_off_higher_terms(seed in any::<u64>(), n in 2usize..5) {
        let f = PrimeField::new(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = ambient_ring(&f, n);
        let g = random_poly(&ring, 4, 0.4, &mut rng);
        let lin = linearize(&g);
        prop_assert_eq!(&lin.p, &restriction(&g));
        let zi = n - 1;
        let mut rest = g.sub(&MultiPoly::from_uni(&ring, zi, &lin.p));
        for (i, q) in lin.q.iter().enumerate() {
            rest = rest.sub(&MultiPoly::var(&ring, i).mul(&MultiPoly::from_uni(&ring, zi, q)));
        }
        for (e, _) in rest.terms() {
            prop_assert!(e[..zi].iter().sum::<u32>() >= 2);
        }
    }

    #[test]
    fn normalized_restrictions(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (inst, norm) = random_valid_section(&f, &mut rng);
        let phis: Vec<_> = inst.generators.iter().map(restriction).collect();
        let res = norm.restrictions();
        prop_assert!(norm.d.is_monic());
        prop_assert_eq!(&res[0], &norm.d);
        prop_assert!(res[1..].iter().all(|r| r.is_zero()));
        let g = phis.iter().fold(UniPoly::zero(&f), |acc, p| acc.gcd(p).unwrap());
        prop_assert_eq!(g.monic(), norm.d.clone());
    }

    #[test]
    fn star_specialization_commutes(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (inst, _) = random_valid_section(&f, &mut rng);
        let b = f.random_elem(&mut rng);
        let std = LineChart::standard(&f, inst.n);
        let star = LineChart::star(&f, inst.n, b);
        let a: Vec<_> = inst.generators.iter().map(|g| pull_to_chart(g, &std).unwrap()).collect();
        let s: Vec<_> = inst.generators.iter().map(|g| pull_to_chart(g, &star).unwrap()).collect();
        let lhs = specialize_to_star(&oh_equations(&a, "z", &inst.profile).unwrap(), &b).unwrap();
        let rhs = oh_equations(&s, "z", &inst.profile).unwrap();
        prop_assert_eq!(lhs.equation_texts(), rhs.equation_texts());
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let names: Vec<String> = (0..n).map(|i| format!("y{i}")).collect();
        let ring = PolyRing::from_names(&Rationals, names);
        let terms: Vec<(Exp, Rational)> = (0..rng.gen_range(0..6))
            .map(|_| {
                let e: Exp = (0..n).map(|_| rng.gen_range(0..4)).collect();
                (e, Rational::new(rng.gen_range(-30i64..30), rng.gen_range(1i64..9)).unwrap())
            })
            .collect();
        let g = MultiPoly::from_terms(&ring, terms);
        let text = g.to_text();
        prop_assert_eq!(parse_poly(&ring, &text).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, .. ProptestConfig::default() })]

    #[test]
    fn census_totals(seed in any::<u64>(), pi in 0usize..3) {
        let p = [5u64, 7, 11][pi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for x in cubic_and_quartic(p) {
            let beta = loop {
                let b = random_projective_point(p, 3, &mut rng);
                if !x.contains(&b) { break b; }
            };
            let rep = census_through_point(&x, &beta, DEFAULT_BUDGET, 1).unwrap();
            let sum: u64 = rep.rational.values().sum();
            prop_assert_eq!((sum + rep.missing + rep.contained) as u128, rep.lines);
            prop_assert_eq!(rep.lines, (p.pow(3) - 1) as u128 / (p as u128 - 1));
        }
    }
}

/// 100 random lines through rational points: the ambient gcd profile equals
/// the profile of the gcd of the chart restrictions after a frame change.
#[test]
fn chart_and_ambient_profiles_agree() {
    let p = 11;
    let f = PrimeField::new(p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for x in cubic_and_quartic(p) {
        let ring = ambient_ring(&f, 3);
        let mut done = 0;
        while done < 100 {
            let beta = random_projective_point(p, 3, &mut rng);
            let dir = random_projective_point(p, 3, &mut rng);
            if !independent(&f, &beta, &dir) {
                continue;
            }
            let sec = line_profile(&x, &beta, &dir).unwrap();
            let LineSection::Finite(_) = sec else { continue };
            let b = 1;
            let frame = line_frame(&f, &beta, &dir, &b, |q| x.contains(q), |r: &mut ChaCha8Rng| f.random_elem(r), &mut rng).unwrap();
            let d = x
                .generators
                .iter()
                .map(|g| restriction(&frame.pull_back(g, &ring)))
                .fold(UniPoly::zero(&f), |acc, r| acc.gcd(&r).unwrap());
            let mut chart: Vec<usize> = if d.is_constant() {
                Vec::new()
            } else {
                factor_profile(&d).unwrap().iter().flat_map(|&(deg, m)| std::iter::repeat(m).take(deg)).collect()
            };
            chart.sort_unstable_by(|a, b| b.cmp(a));
            assert_eq!(Some(chart), sec.multiplicities(), "beta {beta:?} dir {dir:?}");
            done += 1;
        }
    }
}

#[test]
fn profile_degree_bound() {
    for p in [5u64, 13] {
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let r = projective_ring(&Rationals, 3);
        let gens = vec![parse_poly(&r, "X0*X1 - X2*X3 + X1^2").unwrap(), parse_poly(&r, "X0^3 - X1*X2*X3 + X3^3").unwrap()];
        let x = ImplicitVariety::new("ci23", 3, gens, None).unwrap().reduce(p).unwrap();
        let mut totals = BTreeMap::new();
        for _ in 0..20 {
            let beta = random_projective_point(p, 3, &mut rng);
            for d in directions(p, &beta) {
                if let Some(t) = line_profile(&x, &beta, &d).unwrap().total() {
                    assert!(t as u32 <= x.degree_bound());
                    *totals.entry(t).or_insert(0) += 1;
                }
            }
        }
        assert!(totals.len() > 1);
    }
}

#[test]
fn field_helper_is_consistent() {
    // the primes list above is what the properties sample from
    for (i, &p) in PRIMES.iter().enumerate() {
        assert_eq!(field(i).characteristic(), p);
    }
}

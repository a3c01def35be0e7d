mod common;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{all_generators, random_element, random_homogeneous, sign, specs_up_to};
use conftc::{
    enumerate_basis, poincare_polynomial, straighten, AlgebraSpec, Element, Generator, Monomial,
};

fn gen(spec: &AlgebraSpec, i: u32, j: u32) -> Element {
    Element::generator(spec, i, j).unwrap()
}

fn one() -> BigInt {
    BigInt::one()
}

#[test]
fn defining_relations_hold() {
    for spec in specs_up_to(6, &[1, 2]) {
        let p = spec.points();
        for i in 1..=p {
            for j in i + 1..=p {
                let eij = gen(&spec, i, j);
                assert!(eij.multiply(&eij).unwrap().is_zero(), "{spec} e({i},{j})^2");
                if i > spec.n() {
                    assert!(eij.is_zero(), "{spec} e({i},{j}) survives");
                } else {
                    assert!(!eij.is_zero());
                }
                for k in j + 1..=p {
                    let eik = gen(&spec, i, k);
                    let ejk = gen(&spec, j, k);
                    let lhs = eij.multiply(&eik).unwrap();
                    let rhs = eij.sub(&eik).unwrap().multiply(&ejk).unwrap();
                    assert_eq!(lhs, rhs, "{spec} triple ({i},{j},{k})");
                }
            }
        }
    }
}

#[test]
fn products_of_two_obstacle_links_vanish() {
    for spec in specs_up_to(6, &[1, 2]) {
        let (n, p) = (spec.n(), spec.points());
        for i in 1..=n {
            for j in n + 1..=p {
                for k in j + 1..=p {
                    let prod = gen(&spec, i, j).multiply(&gen(&spec, i, k)).unwrap();
                    assert!(prod.is_zero(), "{spec} e({i},{j})e({i},{k})");
                }
            }
        }
    }
}

#[test]
fn straightening_is_idempotent_on_basis() {
    for spec in specs_up_to(6, &[1, 2]) {
        for mono in enumerate_basis(&spec, None) {
            let again = straighten(&spec, mono.factors(), &one()).unwrap();
            assert_eq!(again.terms().len(), 1, "{spec} {mono}");
            assert_eq!(again.coeff(&mono), one(), "{spec} {mono}");
        }
    }
}

#[test]
fn straightening_outputs_are_basis_monomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for spec in specs_up_to(6, &[1, 2, 3]) {
        for _ in 0..20 {
            let (x, _) = random_homogeneous(&spec, &mut rng);
            for (mono, c) in x.terms() {
                assert!(mono.is_basis(&spec));
                assert!(!c.is_zero());
                let again = straighten(&spec, mono.factors(), &one()).unwrap();
                assert_eq!(again.coeff(mono), one());
            }
        }
    }
}

fn closed_form(spec: &AlgebraSpec) -> Vec<BigUint> {
    // ∏_{k<n} (1 + (m+k) t^r)
    let mut poly = vec![BigUint::one()];
    for k in 0..spec.n() {
        let shift = spec.r() as usize;
        let mut next = vec![BigUint::zero(); poly.len() + shift];
        for (d, c) in poly.iter().enumerate() {
            next[d] += c;
            next[d + shift] += c * BigUint::from(spec.m() + k);
        }
        poly = next;
    }
    while poly.len() > 1 && poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    poly
}

#[test]
fn poincare_matches_product_formula() {
    for r in [1, 2] {
        for n in 1..=4 {
            for m in 0..=3 {
                let spec = AlgebraSpec::new(r, n, m).unwrap();
                let ranks = poincare_polynomial(&spec);
                assert_eq!(ranks, closed_form(&spec), "{spec}");
                for (d, c) in ranks.iter().enumerate() {
                    let count = enumerate_basis(&spec, Some(d as u32)).len();
                    assert_eq!(BigUint::from(count), *c, "{spec} degree {d}");
                }
                let top = enumerate_basis(&spec, None)
                    .iter()
                    .map(|mono| mono.degree(&spec))
                    .max()
                    .unwrap();
                let expected = if m == 0 { r * (n - 1) } else { r * n };
                assert_eq!(top, expected, "{spec}");
                assert_eq!(spec.top_degree(), expected);
            }
        }
    }
}

// Rank oracle over Q. The free algebra has the squarefree words in all
// generators as basis, with the Koszul sign for reordering; the ideal is
// generated by the three-term relations and the killed generators.

type FreeMono = Vec<Generator>;

fn subsets(gens: &[Generator], d: usize) -> Vec<FreeMono> {
    fn go(gens: &[Generator], d: usize, from: usize, cur: &mut FreeMono, out: &mut Vec<FreeMono>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for k in from..gens.len() {
            cur.push(gens[k]);
            go(gens, d, k + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(gens, d, 0, &mut Vec::new(), &mut out);
    out
}

/// Product of two sorted squarefree words in the free algebra.
fn free_product(r: u32, a: &[Generator], b: &[Generator]) -> Option<(FreeMono, i32)> {
    let mut inversions = 0;
    for x in a {
        for y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut word: FreeMono = a.iter().chain(b).copied().collect();
    word.sort();
    let s = if (r * inversions).is_multiple_of(2) {
        1
    } else {
        -1
    };
    Some((word, s))
}

type Vector = BTreeMap<FreeMono, BigRational>;

fn ideal_rows(spec: &AlgebraSpec, d: usize) -> Vec<Vector> {
    let gens = all_generators(spec);
    let r = spec.r();
    let mut relations: Vec<Vec<(FreeMono, i32)>> = Vec::new();
    let p = spec.points();
    for i in 1..=p {
        for j in i + 1..=p {
            for k in j + 1..=p {
                let (ij, ik, jk) = (
                    Generator::new(i, j),
                    Generator::new(i, k),
                    Generator::new(j, k),
                );
                relations.push(vec![
                    (vec![ij, ik], 1),
                    (vec![ij, jk], -1),
                    (vec![ik, jk], 1),
                ]);
            }
            if i > spec.n() {
                relations.push(vec![(vec![Generator::new(i, j)], 1)]);
            }
        }
    }
    let mut rows = Vec::new();
    for rel in &relations {
        let deg = rel[0].0.len();
        if deg > d {
            continue;
        }
        for s in subsets(&gens, d - deg) {
            let mut row = Vector::new();
            for (word, c) in rel {
                if let Some((w, sg)) = free_product(r, &s, word) {
                    *row.entry(w).or_insert_with(BigRational::zero) +=
                        BigRational::from_integer((c * sg).into());
                }
            }
            row.retain(|_, c| !c.is_zero());
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    rows
}

/// Row echelon form keyed by pivot monomial.
#[derive(Default)]
struct Echelon {
    rows: BTreeMap<FreeMono, Vector>,
}

impl Echelon {
    fn reduce(&self, mut v: Vector) -> Vector {
        loop {
            let pivot = v
                .iter()
                .find(|(k, _)| self.rows.contains_key(*k))
                .map(|(k, c)| (k.clone(), c.clone()));
            let Some((k, c)) = pivot else { return v };
            let row = &self.rows[&k];
            for (m, x) in row {
                let e = v.entry(m.clone()).or_insert_with(BigRational::zero);
                *e -= &c * x;
            }
            v.retain(|_, c| !c.is_zero());
        }
    }

    fn insert(&mut self, v: Vector) -> bool {
        let v = self.reduce(v);
        let Some((k, c)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let normalized: Vector = v.into_iter().map(|(m, x)| (m, x / &c)).collect();
        // Keep rows fully reduced against the new pivot.
        for row in self.rows.values_mut() {
            if let Some(f) = row.get(&k).cloned() {
                for (m, x) in &normalized {
                    let e = row.entry(m.clone()).or_insert_with(BigRational::zero);
                    *e -= &f * x;
                }
                row.retain(|_, c| !c.is_zero());
            }
        }
        self.rows.insert(k, normalized);
        true
    }
}

fn ideal(spec: &AlgebraSpec, d: usize) -> Echelon {
    let mut ech = Echelon::default();
    for row in ideal_rows(spec, d) {
        ech.insert(row);
    }
    ech
}

fn lift(x: &Element) -> Vector {
    x.terms()
        .iter()
        .map(|(m, c)| (m.factors().to_vec(), BigRational::from_integer(c.clone())))
        .collect()
}

fn binomial(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    (0..b).fold(1, |acc, k| acc * (a - k) / (k + 1))
}

#[test]
fn basis_rank_matches_quotient_rank() {
    for spec in specs_up_to(4, &[1, 2]) {
        let g = all_generators(&spec).len();
        for d in 0..=g {
            let ech = ideal(&spec, d);
            let quotient = binomial(g, d) - ech.rows.len();
            let basis = enumerate_basis(&spec, Some(spec.r() * d as u32)).len();
            assert_eq!(quotient, basis, "{spec} length {d}");
        }
    }
}

#[test]
fn normal_forms_are_congruent_and_unique() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for spec in specs_up_to(4, &[1, 2]) {
        let gens = all_generators(&spec);
        for d in 0..=gens.len() {
            let ech = ideal(&spec, d);
            let words = subsets(&gens, d);
            for w in &words {
                let nf = straighten(&spec, w, &one()).unwrap();
                let mut diff: Vector = [(w.clone(), BigRational::one())].into();
                for (m, c) in lift(&nf) {
                    *diff.entry(m).or_insert_with(BigRational::zero) -= c;
                }
                diff.retain(|_, c| !c.is_zero());
                assert!(ech.reduce(diff).is_empty(), "{spec} {w:?}");
            }
            // Random combinations: zero after straightening iff in the ideal.
            for _ in 0..30 {
                let mut combo = Vector::new();
                let mut total = Element::zero(&spec);
                for w in &words {
                    let c: i32 = if rng.gen_bool(0.4) {
                        rng.gen_range(-2..=2)
                    } else {
                        0
                    };
                    if c != 0 {
                        combo.insert(w.clone(), BigRational::from_integer(c.into()));
                        total = total
                            .add(&straighten(&spec, w, &BigInt::from(c)).unwrap())
                            .unwrap();
                    }
                }
                let in_ideal = ech.reduce(combo).is_empty();
                assert_eq!(total.is_zero(), in_ideal, "{spec} length {d}");
            }
            // Combinations of ideal rows straighten to zero.
            for row in ideal_rows(&spec, d).iter().take(20) {
                let mut total = Element::zero(&spec);
                for (w, c) in row {
                    total = total
                        .add(&straighten(&spec, w, c.numer()).unwrap())
                        .unwrap();
                }
                assert!(total.is_zero(), "{spec} {row:?}");
            }
        }
    }
}

fn spec_strategy(total: u32) -> impl Strategy<Value = AlgebraSpec> {
    (1u32..=2, 1u32..=total).prop_flat_map(move |(r, n)| {
        (0..=total - n).prop_map(move |m| AlgebraSpec::new(r, n, m).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn multiplication_is_associative(spec in spec_strategy(6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _) = random_homogeneous(&spec, &mut rng);
        let (b, _) = random_homogeneous(&spec, &mut rng);
        let (c, _) = random_homogeneous(&spec, &mut rng);
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn multiplication_is_graded_commutative(spec in spec_strategy(6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, la) = random_homogeneous(&spec, &mut rng);
        let (b, lb) = random_homogeneous(&spec, &mut rng);
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap().scale(&sign(spec.r() * spec.r() * (la * lb) as u32));
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn distributes_over_addition(spec in spec_strategy(5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _) = random_homogeneous(&spec, &mut rng);
        let (b, lb) = random_homogeneous(&spec, &mut rng);
        let c = random_element(&spec, lb, &mut rng);
        let lhs = a.multiply(&b.add(&c).unwrap()).unwrap();
        let rhs = a.multiply(&b).unwrap().add(&a.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn text_and_json_round_trip(spec in spec_strategy(6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _) = random_homogeneous(&spec, &mut rng);
        prop_assert_eq!(&Element::parse(&spec, &a.to_string()).unwrap(), &a);
        prop_assert_eq!(&Element::from_json_terms(&spec, &a.to_json_terms()).unwrap(), &a);
    }

    #[test]
    fn no_zero_coefficients_and_sorted_keys(spec in spec_strategy(6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, la) = random_homogeneous(&spec, &mut rng);
        for (mono, c) in a.terms() {
            prop_assert!(!c.is_zero());
            prop_assert_eq!(mono.len(), la);
            prop_assert!(Monomial::from_factors(mono.factors().to_vec()).is_some());
        }
        if !a.is_zero() {
            prop_assert_eq!(a.homogeneous_degree(), Some(spec.r() * la as u32));
        }
    }
}

#[test]
fn coefficients_do_not_overflow() {
    let spec = AlgebraSpec::new(1, 3, 1).unwrap();
    let big = BigInt::from(u64::MAX) * BigInt::from(u64::MAX);
    let x = gen(&spec, 1, 2).scale(&big);
    let y = gen(&spec, 1, 3).scale(&big);
    let prod = x.multiply(&y).unwrap();
    let expected = &big * &big;
    assert!(prod.terms().values().all(|c| c.abs() == expected));
}

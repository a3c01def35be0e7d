mod common;

use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_tensor, sign, specs_up_to};
use conftc::{tensor, zero_divisor, AlgebraSpec, Element, Generator, Monomial, TensorElement};

fn mono(i: u32, j: u32) -> Monomial {
    Monomial::from_factors(vec![Generator::new(i, j)]).unwrap()
}

#[test]
fn parity_law_for_every_generator() {
    for spec in specs_up_to(5, &[1, 2, 3, 4]) {
        for g in spec.live_generators() {
            let zd = zero_divisor(&spec, g.i, g.j).unwrap();
            let sq = zd.multiply(&zd).unwrap();
            if spec.is_odd() {
                assert!(sq.is_zero(), "{spec} {g}");
            } else {
                assert_eq!(sq.terms().len(), 1, "{spec} {g}");
                assert_eq!(sq.coeff(&mono(g.i, g.j), &mono(g.i, g.j)), BigInt::from(-2));
            }
            assert_eq!(zd.pow(2).unwrap(), sq);
        }
    }
}

#[test]
fn odd_square_matches_four_term_expansion() {
    // (1⊗e - e⊗1)^2 expanded by hand with the Koszul sign for degree r:
    // (1⊗e)(1⊗e) = 0, (e⊗1)(e⊗1) = 0,
    // -(1⊗e)(e⊗1) = -(-1)^{r·r} e⊗e, -(e⊗1)(1⊗e) = -e⊗e.
    for r in 1..=4u32 {
        let spec = AlgebraSpec::new(r, 2, 1).unwrap();
        let e = Element::generator(&spec, 1, 3).unwrap();
        let u = Element::unit(&spec);
        let ee = tensor(&e, &e).unwrap();
        let cross = ee.scale(&-sign(r * r)).sub(&ee).unwrap();
        let zd = tensor(&u, &e)
            .unwrap()
            .sub(&tensor(&e, &u).unwrap())
            .unwrap();
        assert_eq!(zd.multiply(&zd).unwrap(), cross, "r={r}");
    }
}

#[test]
fn zero_divisors_contract_to_zero() {
    for spec in specs_up_to(5, &[1, 2]) {
        let p = spec.points();
        for i in 1..=p {
            for j in i + 1..=p {
                let zd = zero_divisor(&spec, i, j).unwrap();
                assert!(zd.contract().unwrap().is_zero());
                if i > spec.n() {
                    assert!(zd.is_zero(), "{spec} ({i},{j})");
                }
                // A product with any other class still lies in the kernel.
                let e = Element::generator(&spec, i, j).unwrap();
                let u = Element::unit(&spec);
                let diag = tensor(&e, &u)
                    .unwrap()
                    .add(&tensor(&u, &e).unwrap())
                    .unwrap();
                assert!(zd.multiply(&diag).unwrap().contract().unwrap().is_zero());
            }
        }
    }
}

#[test]
fn fast_path_agrees_with_general_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for spec in specs_up_to(5, &[1, 2]) {
        for _ in 0..10 {
            let l = rng.gen_range(0..=spec.max_length() as usize);
            let rr = rng.gen_range(0..=spec.max_length() as usize);
            let x = random_tensor(&spec, l, rr, &mut rng);
            for g in spec.live_generators() {
                let zd = zero_divisor(&spec, g.i, g.j).unwrap();
                assert_eq!(
                    x.mul_zero_divisor(g).unwrap(),
                    x.multiply(&zd).unwrap(),
                    "{spec} {g}"
                );
            }
        }
    }
}

fn spec_strategy(total: u32) -> impl Strategy<Value = AlgebraSpec> {
    (1u32..=2, 1u32..=total).prop_flat_map(move |(r, n)| {
        (0..=total - n).prop_map(move |m| AlgebraSpec::new(r, n, m).unwrap())
    })
}

fn random_bihomogeneous(spec: &AlgebraSpec, rng: &mut ChaCha8Rng) -> (TensorElement, usize) {
    let top = spec.max_length() as usize;
    let l = rng.gen_range(0..=top);
    let r = rng.gen_range(0..=top);
    (random_tensor(spec, l, r, rng), l + r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn tensor_product_is_associative(spec in spec_strategy(5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _) = random_bihomogeneous(&spec, &mut rng);
        let (b, _) = random_bihomogeneous(&spec, &mut rng);
        let (c, _) = random_bihomogeneous(&spec, &mut rng);
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn tensor_product_is_graded_commutative(spec in spec_strategy(5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, la) = random_bihomogeneous(&spec, &mut rng);
        let (b, lb) = random_bihomogeneous(&spec, &mut rng);
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap().scale(&sign(spec.r() * spec.r() * (la * lb) as u32));
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn contraction_is_a_ring_map(spec in spec_strategy(5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _) = random_bihomogeneous(&spec, &mut rng);
        let (b, _) = random_bihomogeneous(&spec, &mut rng);
        let lhs = a.multiply(&b).unwrap().contract().unwrap();
        let rhs = a.contract().unwrap().multiply(&b.contract().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_is_neutral_and_formats_round_trip(spec in spec_strategy(5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _) = random_bihomogeneous(&spec, &mut rng);
        let u = TensorElement::unit(&spec);
        prop_assert_eq!(&u.multiply(&a).unwrap(), &a);
        prop_assert_eq!(&a.multiply(&u).unwrap(), &a);
        prop_assert_eq!(&TensorElement::parse(&spec, &a.to_string()).unwrap(), &a);
        prop_assert_eq!(&TensorElement::from_json_terms(&spec, &a.to_json_terms()).unwrap(), &a);
        for ((l, r), c) in a.terms() {
            prop_assert!(l.is_basis(&spec) && r.is_basis(&spec));
            prop_assert!(c.abs() > BigInt::from(0));
        }
    }
}

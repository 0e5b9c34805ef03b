use bundlecalc::error::Error;
use bundlecalc::field::{Field, Scalar};
use bundlecalc::form::Form;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q() -> Field {
    Field::Rationals
}

fn x(field: Field, nvars: usize, i: usize) -> Form {
    Form::var(field, nvars, i)
}

fn pt(field: Field, v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&c| field.from_i64(c)).collect()
}

#[test]
fn additive_inverse_cancels() {
    let f = x(q(), 3, 0).mul(&x(q(), 3, 1)).unwrap();
    assert!(f.add(&f.neg()).unwrap().is_zero());
}

#[test]
fn disjoint_supports_add() {
    let f = x(q(), 2, 0).pow(2).add(&x(q(), 2, 1).pow(2)).unwrap();
    assert_eq!(f.to_string(), "x0^2 + x1^2");
}

#[test]
fn coefficients_reduce_mod_p() {
    let f5 = Field::prime(5).unwrap();
    let m = x(f5, 3, 0).mul(&x(f5, 3, 2)).unwrap();
    let s = m.scale(&f5.from_i64(3)).add(&m.scale(&f5.from_i64(4))).unwrap();
    assert_eq!(s, m.scale(&f5.from_i64(2)));
}

#[test]
fn difference_of_squares() {
    let (a, b) = (x(q(), 2, 0), x(q(), 2, 1));
    let p = a.add(&b).unwrap().mul(&a.sub(&b).unwrap()).unwrap();
    assert_eq!(p, a.pow(2).sub(&b.pow(2)).unwrap());
}

#[test]
fn linear_binet_cauchy_product() {
    let v = |i| x(q(), 4, i);
    let s13 = v(0).mul(&v(2)).unwrap().add(&v(1).mul(&v(3)).unwrap()).unwrap();
    assert_eq!(s13.to_string(), "x0*x2 + x1*x3");
    assert_eq!(s13.eval(&pt(q(), &[1, 0, 0, 1])).unwrap(), q().zero());
    assert_eq!(s13.eval(&pt(q(), &[1, 1, 1, 1])).unwrap(), q().from_i64(2));
    assert_eq!(Form::zero(q(), 4, 2).eval(&pt(q(), &[3, 1, 4, 1])).unwrap(), q().zero());
}

#[test]
fn mixed_degrees_and_fields_are_rejected() {
    let f5 = Field::prime(5).unwrap();
    assert!(matches!(x(q(), 2, 0).add(&x(q(), 2, 0).pow(2)), Err(Error::DegreeMismatch(1, 2))));
    assert!(matches!(x(q(), 2, 0).add(&x(f5, 2, 0)), Err(Error::FieldMismatch(..))));
    assert!(matches!(x(q(), 2, 0).add(&x(q(), 3, 0)), Err(Error::ArityMismatch { .. })));
    assert!(matches!(Field::prime(6), Err(Error::NotPrime(6))));
}

fn random_form(field: Field, nvars: usize, deg: u32, seed: u64) -> Form {
    Form::random(field, nvars, deg, Some(4), &mut ChaCha8Rng::seed_from_u64(seed))
}

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), Just(Field::prime(5).unwrap()), Just(Field::prime(7).unwrap())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(field in field_strategy(), seeds in any::<[u64; 3]>(), d in 0u32..3) {
        let a = random_form(field, 3, d, seeds[0]);
        let b = random_form(field, 3, d, seeds[1]);
        let c = random_form(field, 3, 1, seeds[2]);
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&c).unwrap(), c.mul(&a).unwrap());
        let lhs = a.add(&b).unwrap().mul(&c).unwrap();
        let rhs = a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        field in field_strategy(),
        seeds in any::<[u64; 2]>(),
        point in prop::collection::vec(-6i64..6, 3),
    ) {
        let a = random_form(field, 3, 2, seeds[0]);
        let b = random_form(field, 3, 2, seeds[1]);
        let p = pt(field, &point);
        let (ea, eb) = (a.eval(&p).unwrap(), b.eval(&p).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().eval(&p).unwrap(), field.add(&ea, &eb));
        prop_assert_eq!(a.mul(&b).unwrap().eval(&p).unwrap(), field.mul(&ea, &eb));
    }

    #[test]
    fn homogeneity_under_scaling(seed in any::<u64>(), d in 0u32..4, t in -4i64..5) {
        let f = random_form(q(), 3, d, seed);
        let p = pt(q(), &[1, -2, 3]);
        let tp: Vec<Scalar> = p.iter().map(|c| q().mul(c, &q().from_i64(t))).collect();
        let want = q().mul(&q().pow(&q().from_i64(t), d), &f.eval(&p).unwrap());
        prop_assert_eq!(f.eval(&tp).unwrap(), want);
    }
}

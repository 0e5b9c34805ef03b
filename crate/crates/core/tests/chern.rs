use bundlecalc::chern::{
    bundle_invariants_report, chern_of_twist_sum, chern_poly_irreducible, chi_polynomial,
    exact_seq_solve, pushforward_chern, pushforward_chern_oracle, pushforward_data, rat,
    series_inv, series_mul, ChernData, Construction, Position,
};
use bundlecalc::error::Error;
use bundlecalc::weights::WeightParams;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn binomial(top: i64, k: i64) -> BigRational {
    // C(top, k) as a polynomial in top, valid for negative top as well.
    (0..k).fold(rat(1), |acc, i| acc * rat(top - i) / rat(i + 1))
}

#[test]
fn twist_sums() {
    assert_eq!(chern_of_twist_sum(&[0, 0, 0, 0], 4).polynomial_string(), "1");
    assert_eq!(chern_of_twist_sum(&[-1], 3).polynomial_string(), "1 - h");
    let c = chern_of_twist_sum(&[5, 4, 2, 1], 5);
    assert_eq!(c.polynomial_string(), "1 + 12h + 49h^2 + 78h^3 + 40h^4");
    // c₁ = Σζ = 4n(2n+1)(α+β) for n = 1, α = 1, β = 0.
    assert_eq!(c.c(1), rat(12));
}

#[test]
fn exact_sequences() {
    let q = exact_seq_solve(&chern_of_twist_sum(&[-1, 1], 3), &chern_of_twist_sum(&[-1], 3), Position::Sub).unwrap();
    assert_eq!(q, chern_of_twist_sum(&[1], 3));
    let mid = chern_of_twist_sum(&[], 4);
    let push = pushforward_data(2, 2, 2, 0, 2, 4).unwrap();
    let g = exact_seq_solve(&mid, &push, Position::Quot).unwrap();
    assert_eq!(&g.total[..4], &[rat(1), rat(-4), rat(8), rat(-8)]);
    assert_eq!(exact_seq_solve(&g, &g, Position::Sub).unwrap().polynomial_string(), "1");
}

#[test]
fn euler_characteristics() {
    let o = chi_polynomial(&ChernData::from_ints(3, 1, &[]));
    for t in -5..6 {
        assert_eq!(o.eval(&rat(t)), binomial(t + 3, 3));
    }
    assert_eq!(chi_polynomial(&ChernData::from_ints(3, 1, &[-1])).eval(&rat(0)), rat(0));
    let plane = chi_polynomial(&ChernData::from_ints(3, 0, &[1, 1, 1]));
    for t in -4..6 {
        assert_eq!(plane.eval(&rat(t)), binomial(t + 2, 2));
    }
}

#[test]
fn pushforward_anchors() {
    assert_eq!(pushforward_chern(1, 0, 0, 0, 1, 4).unwrap(), ints(&[1, 1, 1, 1]));
    assert_eq!(pushforward_chern_oracle(1, 0, 0, 0, 1, 4).unwrap(), ints(&[1, 1, 1, 1]));
    assert_eq!(pushforward_chern(2, 0, 0, 0, 1, 4).unwrap(), ints(&[2, 3, 4, 5]));
    assert_eq!(pushforward_chern_oracle(2, 0, 0, 0, 1, 4).unwrap(), ints(&[2, 3, 4, 5]));
    assert_eq!(&pushforward_chern(2, 2, 2, 0, 2, 4).unwrap()[..3], &ints(&[4, 8, 8])[..]);
    assert_eq!(pushforward_chern(3, 1, 2, 1, 3, 5).unwrap(), pushforward_chern_oracle(3, 1, 2, 1, 3, 5).unwrap());
    assert!(matches!(pushforward_chern(1, 0, 0, 0, 0, 4), Err(Error::InvalidParams(_))));
}

#[test]
fn irreducibility() {
    let c = |c1, c2| ChernData::from_ints(2, 2, &[c1, c2]);
    assert!(chern_poly_irreducible(&c(-2, 4)).unwrap());
    assert!(!chern_poly_irreducible(&c(3, 2)).unwrap());
    assert!(!chern_poly_irreducible(&c(2, 1)).unwrap());
    assert_eq!(chern_poly_irreducible(&ChernData::from_ints(2, 3, &[1])).unwrap_err(), Error::RankNotTwo(3));
}

#[test]
fn diagonal_family_report() {
    for n in 1..=3i64 {
        let r = bundle_invariants_report(&Construction::DiagonalFamily { n }).unwrap();
        let want = format!("1 - {}h + {}h^2", 2 * n, 4 * n * n);
        assert_eq!(r.chern_polynomials["L2"], want);
        assert!(r.all_agree && r.flags["c3(E2) = 0"] && r.flags["c_h(L2) irreducible"]);
    }
}

#[test]
fn binet_cauchy_pair_report() {
    let r = bundle_invariants_report(&Construction::BinetCauchyPair { w1: 1, w2: 1, v2: 1, a1: 0 }).unwrap();
    let get = |name: &str| r.records.iter().find(|x| x.name == name).unwrap().chain.clone();
    assert_eq!(get("c1(B)"), BigInt::from(2));
    assert_eq!(get("c2(B)"), BigInt::from(2));
    assert_eq!(get("c1(A)"), BigInt::from(-2));
    assert_eq!(get("c2(A)"), BigInt::from(2));
    assert!(r.flags["Whitney identity mod h^4"]);
    let outside = Construction::BinetCauchyPair { w1: 5, w2: 1, v2: 1, a1: 0 };
    assert!(matches!(bundle_invariants_report(&outside), Err(Error::DegreeConstraintViolated(_))));
}

#[test]
fn weighted_report_balanced_weights() {
    for n in 1..=3 {
        let params = WeightParams::new(n, 1, -1, 7 * n + 5).unwrap();
        let r = bundle_invariants_report(&Construction::WeightedKpr { params, b: None }).unwrap();
        let g = r.records.iter().find(|x| x.name == "c1(G), epsilon_1").unwrap();
        assert_eq!(g.chain, BigInt::from(-4 * n * params.gamma));
        assert!(g.agree);
        assert!(r.flags["N is self-dual up to twist"]);
    }
}

/// c(i_*(⊕O_{εH}(a_i))) = Π (1 + a_i h)/(1 + (a_i − ε) h), from 0 → O(a−ε) → O(a) → O_{εH}(a) → 0.
fn split_oracle(twists: &[i64], eps: i64, n: usize) -> Vec<BigRational> {
    let mut c = vec![rat(1)];
    for &a in twists {
        c = series_mul(&c, &[rat(1), rat(a)], n);
        c = series_mul(&c, &series_inv(&[rat(1), rat(a - eps)], n), n);
    }
    c.resize(n + 1, rat(0));
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pushforward_matches_split_oracle(
        twists in prop::collection::vec(-3i64..4, 1..=3),
        eps in 1i64..6,
        n in 4usize..7,
    ) {
        let f1 = chern_of_twist_sum(&twists, 3);
        let cs: Vec<i64> = (1..=3).map(|k| f1.c(k).to_integer().try_into().unwrap()).collect();
        let got = pushforward_chern(twists.len() as i64, cs[0], cs[1], cs[2], eps, n).unwrap();
        let want = split_oracle(&twists, eps, n);
        for k in 0..4 {
            prop_assert_eq!(BigRational::from_integer(got[k].clone()), want[k + 1].clone());
        }
    }

    #[test]
    fn whitney_formula_for_direct_sums(
        a in prop::collection::vec(-5i64..6, 0..4),
        b in prop::collection::vec(-5i64..6, 0..4),
        n in 1usize..6,
    ) {
        let joined: Vec<i64> = a.iter().chain(&b).copied().collect();
        let sum = chern_of_twist_sum(&joined, n);
        let product = series_mul(&chern_of_twist_sum(&a, n).total, &chern_of_twist_sum(&b, n).total, n);
        prop_assert_eq!(&sum.total, &product);
        let quot = exact_seq_solve(&sum, &chern_of_twist_sum(&a, n), Position::Sub).unwrap();
        prop_assert_eq!(quot, chern_of_twist_sum(&b, n));
    }

    #[test]
    fn chi_of_line_bundles_is_binomial(a in -6i64..7, t in -6i64..7, n in 1usize..6) {
        let chi = chi_polynomial(&chern_of_twist_sum(&[a], n));
        prop_assert_eq!(chi.eval(&rat(t)), binomial(t + a + n as i64, n as i64));
    }
}

use bundlecalc::error::Error;
use bundlecalc::weights::{build_ledger, dim_w, WeightParams};
use proptest::prelude::*;

fn ledger(n: i64, a: i64, b: i64, g: i64) -> bundlecalc::weights::DegreeLedger {
    build_ledger(WeightParams::new(n, a, b, g).unwrap())
}

#[test]
fn zero_weights() {
    let l = ledger(1, 0, 0, 1);
    assert_eq!(l.zetas, vec![0, 0, 0, 0]);
    assert_eq!((l.hbar1, l.hbar2, l.epsilon1, l.epsilon2), (2, 2, 2, 2));
    assert!(l.homogeneity_check_eps1(1).unwrap());
}

#[test]
fn unit_alpha() {
    let l = ledger(1, 1, 0, 4);
    assert_eq!(l.zetas, vec![5, 4, 2, 1]);
    assert_eq!(l.g_degrees, vec![7, 6, 5, 4]);
    assert!(l.zetas.iter().zip(l.zetas.iter().rev()).all(|(a, b)| a + b == 6));
}

#[test]
fn shifted_epsilon_breaks_homogeneity() {
    let l = ledger(2, 3, 1, 40);
    for b in 1..=l.zetas.len() {
        assert!(!l.homogeneity_eps1_with(b, l.epsilon1 + 1).unwrap());
        assert!(!l.homogeneity_eps2_with(b, l.epsilon2 - 1).unwrap());
    }
}

#[test]
fn opposite_weights_collapse() {
    let l = ledger(2, 1, -1, 11);
    assert!((1..=8).all(|b| l.homogeneity_check_eps2(b).unwrap()));
}

#[test]
fn invalid_parameters() {
    for (n, a, b, g) in [(0, 0, 0, 1), (1, -1, 0, 1), (1, 0, 0, 0), (1, 0, 1, 9), (1, 1, -2, 9), (1, 1, -1, 3)] {
        assert!(matches!(WeightParams::new(n, a, b, g), Err(Error::InvalidParams(_))), "{n} {a} {b} {g}");
    }
    assert!(ledger(2, 0, 0, 1).epsilon_p4(3).is_err());
    assert!(matches!(ledger(1, 0, 0, 1).epsilon_p4(7), Err(Error::IndexOutOfRange { .. })));
}

#[test]
fn hyperplane_dimension() {
    // C(4, 2) − 5 for n = 1.
    assert_eq!(dim_w(1), 1);
    assert_eq!(dim_w(2), 6);
}

fn valid_params() -> impl Strategy<Value = WeightParams> {
    (1i64..=6, 0i64..8, 0i64..8, 1i64..400).prop_filter_map("valid", |(n, a, bmag, g)| {
        let b = bmag - a.min(bmag);
        WeightParams::new(n, a, b.min(a), g).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ledger_identities(p in valid_params()) {
        let l = build_ledger(p);
        let k = l.zetas.len();
        let s = p.alpha + p.beta;
        prop_assert_eq!(k as i64, 4 * p.n);
        for i in 0..k {
            prop_assert_eq!(l.zetas[i] + l.zetas[k - 1 - i], 2 * (2 * p.n + 1) * s);
        }
        prop_assert_eq!(l.zetas.iter().sum::<i64>(), 4 * p.n * (2 * p.n + 1) * s);
        prop_assert!(l.pair_identity() && l.sum_identity());
        if p.strong_bound() {
            prop_assert!(l.hbar1 > 0);
        }
        for b in 1..=k {
            prop_assert!(l.homogeneity_check_eps1(b).unwrap());
            prop_assert!(l.homogeneity_check_eps2(b).unwrap());
        }
    }
}

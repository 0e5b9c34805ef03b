use bundlecalc::error::Error;
use bundlecalc::field::{Field, Scalar};
use bundlecalc::form::Form;
use bundlecalc::kpr::{binet_cauchy_family, BinetCauchy, FamilyDegrees, FamilyForms};
use bundlecalc::pfaffian::{
    check_rank_prereq, expansion_identity, make_psi, make_rank2n_phi, permutation_sign,
    phi_from_sections, psi_row_index, AntisymMatrix,
};
use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Determinant by Gaussian elimination over the rationals.
fn det(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut acc = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            acc = -acc;
        }
        let piv = a[c][c].clone();
        acc *= &piv;
        for r in c + 1..n {
            let f = &a[r][c] / &piv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    acc
}

fn random_linear_antisym(field: Field, size: usize, nvars: usize, seed: u64) -> AntisymMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    AntisymMatrix::from_upper(field, nvars, vec![0; size], vec![1; size], |_, _| {
        Form::random(field, nvars, 1, Some(2), &mut rng)
    })
    .unwrap()
}

/// The 4×4 matrix with S_ij = x_k for the k-th pair (12, 13, 14, 23, 24, 34).
fn symbolic_m() -> AntisymMatrix {
    let q = Field::Rationals;
    let pairs: Vec<(usize, usize)> = (0..4).tuple_combinations().collect();
    AntisymMatrix::from_upper(q, 6, vec![0; 4], vec![1; 4], |i, j| {
        Form::var(q, 6, pairs.iter().position(|&p| p == (i, j)).unwrap())
    })
    .unwrap()
}

fn linear_family() -> BinetCauchy {
    let q = Field::Rationals;
    let x = |i| Form::var(q, 4, i);
    let forms = FamilyForms { t: [x(0), x(1)], w: [x(2), x(3)], u: [x(1), x(0)], v: [x(3), x(2)] };
    binet_cauchy_family(&forms, FamilyDegrees { w1: 1, w2: 1, v2: 1 }, 0).unwrap()
}

#[test]
fn base_case_and_odd_size() {
    let q = Field::Rationals;
    let a = Form::var(q, 2, 0);
    let m = AntisymMatrix::from_upper(q, 2, vec![0, 0], vec![1, 1], |_, _| a.clone()).unwrap();
    assert_eq!(m.pfaffian().unwrap(), a);
    assert!(matches!(random_linear_antisym(q, 3, 2, 0).pfaffian(), Err(Error::OddSize(3))));
}

#[test]
fn four_by_four_pluecker_form() {
    let m = symbolic_m();
    let s = |k| Form::var(Field::Rationals, 6, k);
    let want = s(0).mul(&s(5)).unwrap().sub(&s(1).mul(&s(4)).unwrap()).unwrap().add(&s(2).mul(&s(3)).unwrap()).unwrap();
    assert_eq!(m.pfaffian().unwrap(), want);
    assert_eq!(m.sub_pfaffian(&[0, 1]).unwrap(), s(5));
    assert_eq!(m.sub_pfaffian(&[]).unwrap(), m.pfaffian().unwrap());
}

#[test]
fn binet_cauchy_matrix_has_zero_pfaffian() {
    assert!(linear_family().m.pfaffian().unwrap().is_zero());
}

/// The printed adjugate N, row by row. "S32" is printed where the product M·N = 0
/// requires S23; `corrected` chooses between the literal reading S32 = −S23 and S23.
const PRINTED_N: [[&str; 4]; 4] = [
    ["0", "S34", "-S24", "S32"],
    ["-S34", "0", "S14", "-S13"],
    ["S24", "-S14", "0", "S12"],
    ["-S32", "S13", "-S12", "0"],
];

fn resolve(bc: &BinetCauchy, token: &str, corrected: bool) -> Form {
    let (neg, name) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    let f = match name {
        "0" => Form::zero(Field::Rationals, 4, 2),
        "S12" => bc.s12.clone(),
        "S13" => bc.s13.clone(),
        "S14" => bc.s14.clone(),
        "S23" => bc.s23.clone(),
        "S24" => bc.s24.clone(),
        "S34" => bc.s34.clone(),
        "S32" if corrected => bc.s23.clone(),
        "S32" => bc.s23.neg(),
        other => panic!("unknown token {other}"),
    };
    if neg { f.neg() } else { f }
}

#[test]
fn adjugate_matches_printed_n_after_index_swap() {
    let bc = linear_family();
    let psi = make_psi(&bc.m, 1).unwrap();
    for corrected in [true, false] {
        let same = (0..4).all(|i| (0..4).all(|j| *psi.entry(i, j) == resolve(&bc, PRINTED_N[i][j], corrected)));
        assert_eq!(same, corrected);
    }
    assert!(psi.compose(bc.m.matrix()).unwrap().is_zero());
}

#[test]
fn psi_of_a_constant_rank_two_matrix() {
    let q = Field::Rationals;
    let c = |v| Form::constant(q, 3, q.from_i64(v));
    let sigma = vec![vec![c(1), c(0), c(0), c(0)], vec![c(0), c(1), c(0), c(0)]];
    let phi = phi_from_sections(&sigma, &[0; 4]).unwrap();
    assert!(phi.pfaffian().unwrap().is_zero());
    assert!(make_psi(&phi, 1).unwrap().compose(phi.matrix()).unwrap().is_zero());
}

#[test]
fn n_two_rank_prerequisite_and_expansion() {
    let f7 = Field::prime(7).unwrap();
    let phi = make_rank2n_phi(2, &[1; 8], f7, 5, 21).unwrap();
    check_rank_prereq(&phi, 2, 0).unwrap();
    for removed in (0..8).combinations(2) {
        assert!(phi.sub_pfaffian(&removed).unwrap().is_zero());
    }
    for (l, i) in [(vec![0, 1], 2), (vec![3, 7], 0), (vec![2, 5], 6)] {
        assert!(expansion_identity(&phi, &l, i).unwrap().is_zero());
    }
    assert_eq!(psi_row_index(2).len(), 56);
}

#[test]
fn generic_matrix_violates_rank_prerequisite() {
    let f7 = Field::prime(7).unwrap();
    let m = random_linear_antisym(f7, 4, 4, 5);
    assert!(matches!(make_psi(&m, 1), Err(Error::RankPrereqViolated(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pfaffian_squared_is_determinant(seed in any::<u64>(), half in 1usize..5, point in prop::collection::vec(-9i64..10, 3)) {
        let q = Field::Rationals;
        let m = random_linear_antisym(q, 2 * half, 3, seed);
        let p: Vec<Scalar> = point.iter().map(|&v| q.from_i64(v)).collect();
        let pf = m.pfaffian().unwrap().eval(&p).unwrap().to_rational();
        let vals: Vec<Vec<BigRational>> = m.matrix().eval(&p).unwrap().iter()
            .map(|r| r.iter().map(Scalar::to_rational).collect()).collect();
        prop_assert_eq!(&pf * &pf, det(vals));
    }

    #[test]
    fn simultaneous_permutation_multiplies_by_its_sign(seed in any::<u64>(), half in 1usize..4, perm_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let f7 = Field::prime(7).unwrap();
        let size = 2 * half;
        let m = random_linear_antisym(f7, size, 3, seed);
        let mut perm: Vec<usize> = (0..size).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        let pf = m.pfaffian().unwrap();
        let permuted = m.permuted(&perm).unwrap().pfaffian().unwrap();
        let want = if permutation_sign(&perm) == 1 { pf } else { pf.neg() };
        prop_assert_eq!(permuted, want);
    }

    #[test]
    fn psi_annihilates_phi_for_random_sections(seed in any::<u64>(), degs in prop::collection::vec(0i64..3, 4)) {
        let f5 = Field::prime(5).unwrap();
        let phi = make_rank2n_phi(1, &degs, f5, 4, seed).unwrap();
        let psi = make_psi(&phi, 1).unwrap();
        prop_assert!(psi.validate().is_empty());
        prop_assert!(psi.compose(phi.matrix()).unwrap().is_zero());
    }
}

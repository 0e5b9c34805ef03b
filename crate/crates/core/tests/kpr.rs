use bundlecalc::error::Error;
use bundlecalc::field::Field;
use bundlecalc::form::Form;
use bundlecalc::graded::GradedMatrix;
use bundlecalc::kpr::{
    assemble_delta, binet_cauchy_family, binet_cauchy_family_unchecked, delta_composition_zero,
    extract_mu, extract_mu_bar, find_zero_free_family, p4_epsilon_constructions,
    random_binet_cauchy, weighted_instance, weighted_kpr, BinetCauchy, ColumnRule, FamilyDegrees,
    FamilyForms, InstanceConfig, KprInput, RowRule,
};
use bundlecalc::pfaffian::{make_psi, make_rank2n_phi, AntisymMatrix};
use bundlecalc::weights::{build_ledger, WeightParams};

fn config(p: u64, seed: u64) -> InstanceConfig {
    InstanceConfig { field: Field::prime(p).unwrap(), seed, max_terms: None, primes: vec![2, 3, 5, 7] }
}

/// Resolves a printed token such as "-S24", "z^eps" or "0" against a family whose forms
/// live in the first four of five variables (z last). "S32" is read as S23.
fn printed_entry(bc: &BinetCauchy, token: &str, eps: u32) -> Form {
    let f = bc.s12.field();
    let (neg, name) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    let form = match name {
        "0" => return Form::zero(f, 5, 0),
        "z^eps" => Form::var(f, 5, 4).pow(eps),
        "S12" => bc.s12.adjoin_vars(1),
        "S13" => bc.s13.adjoin_vars(1),
        "S14" => bc.s14.adjoin_vars(1),
        "S23" | "S32" => bc.s23.adjoin_vars(1),
        "S24" => bc.s24.adjoin_vars(1),
        "S34" => bc.s34.adjoin_vars(1),
        other => panic!("unknown token {other}"),
    };
    if neg { form.neg() } else { form }
}

const PRINTED_TAU: [&str; 8] = ["z^eps", "S12", "S13", "S14", "0", "S34", "-S24", "S32"];
const PRINTED_DELTA: [&str; 8] = ["S32", "-S13", "S12", "z^eps", "S14", "S24", "S34", "0"];

#[test]
fn linear_family_satisfies_the_pluecker_relation() {
    let f5 = Field::prime(5).unwrap();
    for seed in 0..50 {
        let bc = random_binet_cauchy(FamilyDegrees { w1: 1, w2: 1, v2: 1 }, 0, f5, 4, seed).unwrap();
        assert!(bc.pfaffian_zero().unwrap());
        assert_eq!(bc.products_zero().unwrap(), (true, true));
    }
}

#[test]
fn swapped_linear_family() {
    let q = Field::Rationals;
    let x = |i| Form::var(q, 4, i);
    let forms = FamilyForms { t: [x(0), x(1)], w: [x(2), x(3)], u: [x(1), x(0)], v: [x(3), x(2)] };
    let bc = binet_cauchy_family(&forms, FamilyDegrees { w1: 1, w2: 1, v2: 1 }, 0).unwrap();
    assert!(bc.pfaffian_zero().unwrap());
    assert!(bc.products_zero().unwrap().0);
}

#[test]
fn constant_family_lies_outside_the_region() {
    let q = Field::Rationals;
    let c = |v| Form::constant(q, 4, q.from_i64(v));
    let forms = FamilyForms { t: [c(1), c(0)], w: [c(1), c(0)], u: [c(0), c(1)], v: [c(0), c(1)] };
    let deg = FamilyDegrees { w1: 0, w2: 0, v2: 0 };
    assert!(matches!(binet_cauchy_family(&forms, deg, 0), Err(Error::DegreeConstraintViolated(_))));
    let bc = binet_cauchy_family_unchecked(&forms, deg, 0).unwrap();
    assert!(bc.pfaffian_zero().unwrap());
}

#[test]
fn zero_blocks_give_a_diagonal() {
    let q = Field::Rationals;
    let phi = AntisymMatrix::new(GradedMatrix::zeros(q, 4, vec![-1; 4], vec![1; 4])).unwrap();
    let psi = GradedMatrix::zeros(q, 4, vec![1; 4], vec![3; 4]);
    let d = assemble_delta(&KprInput { phi, psi, epsilon: 3 }).unwrap();
    let z3 = Form::var(q, 5, 4).pow(3);
    for i in 0..d.matrix.rows() {
        for j in 0..d.matrix.cols() {
            let want = if i == j && i < 4 { z3.clone() } else { Form::zero(q, 5, 0) };
            assert_eq!(d.matrix.entry(i, j), &want);
        }
    }
}

#[test]
fn n_two_assembly_is_degree_valid() {
    let f7 = Field::prime(7).unwrap();
    let phi = make_rank2n_phi(2, &[1; 8], f7, 5, 2).unwrap();
    let psi = make_psi(&phi, 2).unwrap();
    let d = assemble_delta(&KprInput { phi, psi, epsilon: 2 }).unwrap();
    assert_eq!((d.matrix.rows(), d.matrix.cols()), (8 + 56, 16));
    assert!(d.matrix.validate().is_empty());
    assert!(delta_composition_zero(&d).unwrap());
}

#[test]
fn nonzero_composition_is_rejected() {
    let f7 = Field::prime(7).unwrap();
    let phi = make_rank2n_phi(1, &[1; 4], f7, 4, 2).unwrap();
    let other = make_rank2n_phi(1, &[1; 4], f7, 4, 3).unwrap();
    let psi = make_psi(&other, 1).unwrap();
    assert_eq!(assemble_delta(&KprInput { phi, psi, epsilon: 2 }).unwrap_err(), Error::CompositionNonzero);
}

#[test]
fn extracted_column_and_row_match_the_printed_ones() {
    let (seed, bc) = find_zero_free_family(5, 0, 1000).unwrap();
    assert!(seed < 1000);
    let phi = bc.m.neg();
    let psi = make_psi(&phi, 1).unwrap();
    let d = assemble_delta(&KprInput { phi, psi, epsilon: 2 }).unwrap();

    let tau = extract_mu_bar(&d, ColumnRule::Shift, &[1], None, &[5]).unwrap();
    assert_eq!(tau.pairs, vec![(1, 5)]);
    for (i, token) in PRINTED_TAU.iter().enumerate() {
        assert_eq!(tau.matrix.entry(i, 0), &printed_entry(&bc, token, 2), "tau entry {i}");
    }
    assert!(tau.certified);
    assert_eq!(tau.certificates[0].certificates[0].points_checked, 781);

    let delta = extract_mu(&d, RowRule::Shift, &[4], None, &[5]).unwrap();
    assert_eq!(delta.pairs, vec![(4, 8)]);
    for (j, token) in PRINTED_DELTA.iter().enumerate() {
        assert_eq!(delta.matrix.entry(0, j), &printed_entry(&bc, token, 2), "delta entry {j}");
    }
    assert!(delta.certified);
}

#[test]
fn wrong_epsilon_breaks_column_homogeneity() {
    let ledger = build_ledger(WeightParams::new(1, 0, 0, 1).unwrap());
    let (phi, psi) = weighted_instance(&ledger, Field::prime(7).unwrap(), 0, None).unwrap();
    let d = assemble_delta(&KprInput { phi, psi, epsilon: ledger.epsilon1 + 2 }).unwrap();
    let err = extract_mu_bar(&d, ColumnRule::Mirror, &[1], Some(&ledger), &[7]).unwrap_err();
    assert!(matches!(err, Error::HomogeneityViolated(_)));
}

#[test]
fn weighted_rows_for_n_two() {
    let r = weighted_kpr(WeightParams::new(2, 0, 0, 1).unwrap(), 2, None, &config(7, 1)).unwrap();
    assert!(r.verdict.passed);
    assert!(r.degree_violations.is_empty() && r.composition_zero);
    let rows = r.row_extraction.unwrap();
    let (phi, _) = weighted_instance(&r.ledger, Field::prime(7).unwrap(), 1, None).unwrap();
    let mut z = vec![0; 7];
    z[6] = r.epsilon as u32;
    for (k, &(p, _)) in rows.pairs.iter().enumerate() {
        assert_eq!(rows.matrix.entry(k, p - 1).coeff(&z), Field::prime(7).unwrap().one());
        for j in 0..8 {
            assert_eq!(rows.matrix.entry(k, 8 + j), &phi.entry(p - 1, j).adjoin_vars(1));
        }
    }
}

#[test]
fn weighted_columns_for_n_one() {
    let r = weighted_kpr(WeightParams::new(1, 0, 0, 1).unwrap(), 1, None, &config(7, 1)).unwrap();
    assert!(r.verdict.passed);
    assert_eq!(r.column_extraction.unwrap().pairs, vec![(1, 8)]);
    assert!(r.invariants.iter().all(|x| x.agree));
}

#[test]
fn p4_pairs() {
    let params = WeightParams::new(1, 2, 0, 4).unwrap();
    let r3 = p4_epsilon_constructions(params, 3, &config(5, 0)).unwrap();
    assert_eq!(r3.column_extraction.unwrap().pairs, vec![(1, 5)]);
    assert_eq!(r3.row_extraction.unwrap().pairs, vec![(4, 8)]);
    assert!(r3.verdict.passed);
    let r6 = p4_epsilon_constructions(params, 6, &config(5, 0)).unwrap();
    assert_eq!(r6.column_extraction.unwrap().pairs, vec![(4, 8)]);
    assert_eq!(r6.row_extraction.unwrap().pairs, vec![(1, 5)]);
}

#[test]
fn nonpositive_epsilon_is_invalid() {
    let params = WeightParams::new(1, 3, -1, 4).unwrap();
    assert!(build_ledger(params).epsilon_p4(6).unwrap() <= 0);
    let err = p4_epsilon_constructions(params, 6, &config(5, 0)).unwrap_err();
    assert!(matches!(err, Error::InvalidParams(_)));
}

#[test]
fn odd_hbar_is_infeasible() {
    let params = WeightParams::new(1, 1, 0, 4).unwrap();
    assert_eq!(build_ledger(params).hbar1, 5);
    let err = p4_epsilon_constructions(params, 3, &config(5, 0)).unwrap_err();
    assert!(matches!(err, Error::DegreeInfeasible(_)));
}

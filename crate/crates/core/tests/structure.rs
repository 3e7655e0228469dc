//! Structural checks tying the constructions to the verifier: the inserted
//! low-bit element keeps sequences distinct up to the stated support caps,
//! the caps are tight where claimed, and distinctness survives the lift.
//! The acceptance suite re-runs several of these at full desk scale; here
//! the ranges are kept moderate so the suite stays fast in debug builds.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use sumdist::bounds::{pair_count_exact, pigeonhole_exact_min_m, BoundEvaluator};
use sumdist::constructions::{conway_guy_base, lift_to_k, powers_of_two, tilde_sigma};
use sumdist::model::{parse_rational, subset_sum, IndexSet, Sequence};
use sumdist::verifier::{
    binary_weight_property, verify, PairConstraint, VerifyOptions, VerifyStatus,
};

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

#[test]
fn tilde_distinct_under_half_support_cap() {
    for n in 6..=16usize {
        let seq = tilde_sigma(n).unwrap();
        let cap = n.div_ceil(2);
        let report = verify(&seq, &PairConstraint::pair_sum_cap(cap), &opts()).unwrap();
        assert_eq!(report.status, VerifyStatus::Distinct, "n={n}");
    }
}

#[test]
fn tilde_cap_is_tight_for_even_n() {
    for n in (6..=12usize).step_by(2) {
        let seq = tilde_sigma(n).unwrap();
        let report = verify(&seq, &PairConstraint::pair_sum_cap(n / 2 + 1), &opts()).unwrap();
        assert_eq!(report.status, VerifyStatus::Collision, "n={n}");
        let w = report.witness.unwrap();
        assert_eq!(w.a1, IndexSet::new([n]), "n={n}");
        assert_eq!(
            w.a2,
            IndexSet::new((0..n / 2 - 1).map(|i| 2 * i + 1)),
            "n={n}"
        );
        // The witness really is an equal-sum pair.
        assert_eq!(
            subset_sum(&seq, &w.a1).unwrap(),
            subset_sum(&seq, &w.a2).unwrap()
        );
    }
}

#[test]
fn tilde_shifted_distinct() {
    for n in 6..=14usize {
        let seq = tilde_sigma(n).unwrap();
        let offset = vec![BigInt::from(BigUint::one() << (n - 1))];
        let cap = (n - 1).div_ceil(2);
        let report = verify(&seq, &PairConstraint::shifted(offset, cap), &opts()).unwrap();
        assert_eq!(report.status, VerifyStatus::Distinct, "n={n}");
    }
}

#[test]
fn binary_weight_property_exhaustive_small() {
    // All pairs of subsets of [1,6]; sums stay below 2^7.
    for a in 0u32..64 {
        for b in 0u32..64 {
            let a1 = IndexSet::new((0..6).filter(|i| a & (1 << i) != 0).map(|i| i + 1));
            let a2 = IndexSet::new((0..6).filter(|i| b & (1 << i) != 0).map(|i| i + 1));
            let (_, holds) = binary_weight_property(&a1, &a2, 7).unwrap();
            assert!(holds, "a={a:#b} b={b:#b}");
        }
    }
}

#[test]
fn complement_symmetry_at_half() {
    // A sequence distinct on sets of size <= floor(n/2) has no equal-sum
    // pair among the large sets either; checked by hashing all big-set sums.
    use std::collections::HashMap;
    for n in [8usize, 11, 14] {
        let seq = powers_of_two(n).unwrap();
        let report = verify(
            &seq,
            &PairConstraint::family(parse_rational("1/2").unwrap()),
            &opts(),
        )
        .unwrap();
        assert_eq!(report.status, VerifyStatus::Distinct);

        let mut seen: HashMap<Vec<BigUint>, u32> = HashMap::new();
        for mask in 0u32..(1 << n) {
            if (mask.count_ones() as usize) < n.div_ceil(2) {
                continue;
            }
            let set = IndexSet::new((0..n).filter(|i| mask & (1 << i) != 0).map(|i| i + 1));
            let sum = subset_sum(&seq, &set).unwrap();
            if let Some(prev) = seen.insert(sum, mask) {
                panic!("n={n}: masks {prev:#b} and {mask:#b} share a sum");
            }
        }
    }
}

#[test]
fn lift_preserves_distinctness_exhaustively() {
    // Base distinct at lambda' implies the k-block lift is distinct at
    // lambda'/k over k*n' indices.
    let cases: Vec<(Sequence, &str, usize)> = vec![
        (powers_of_two(5).unwrap(), "1", 2),
        (powers_of_two(4).unwrap(), "1", 3),
        (tilde_sigma(8).unwrap(), "1/4", 2),
        (conway_guy_base(6).unwrap().to_sequence(), "1", 2),
    ];
    for (base, lam, k) in cases {
        let lambda = parse_rational(lam).unwrap();
        let base_report = verify(&base, &PairConstraint::family(lambda.clone()), &opts()).unwrap();
        assert_eq!(base_report.status, VerifyStatus::Distinct);

        let lifted = lift_to_k(&base, k).unwrap();
        let lifted_lambda = lambda / BigRational::from_integer(BigInt::from(k as u32));
        let report = verify(&lifted, &PairConstraint::family(lifted_lambda), &opts()).unwrap();
        assert_eq!(report.status, VerifyStatus::Distinct, "lam={lam} k={k}");
    }
}

#[test]
fn single_insertion_margin_at_desk_scale() {
    // With an 8-element certified base and n = 24 the insertion argument
    // covers total support below (n - L - 1)/2 = 7.5. Distinctness in fact
    // holds up to per-set cap 4 (lambda = 0.2) and breaks at cap 5, where
    // the support-9 pair ({1,2,4,24}, {6,7,9,11,13}) collides at 5472.
    use sumdist::constructions::{augment_base, AugmentMode};
    let base = conway_guy_base(8).unwrap();
    let seq = augment_base(&base, 24, AugmentMode::Single).unwrap();
    for lam in ["1/8", "1/6", "0.2"] {
        let lambda = parse_rational(lam).unwrap();
        let report = verify(&seq, &PairConstraint::family(lambda), &opts()).unwrap();
        assert_eq!(report.status, VerifyStatus::Distinct, "lambda={lam}");
    }
    let at_cap5 = verify(
        &seq,
        &PairConstraint::family(parse_rational("0.24").unwrap()),
        &opts(),
    )
    .unwrap();
    assert_eq!(at_cap5.status, VerifyStatus::Collision);
    let w = at_cap5.witness.unwrap();
    assert_eq!(w.a1, IndexSet::new([1, 2, 4, 24]));
    assert_eq!(w.a2, IndexSet::new([6, 7, 9, 11, 13]));
}

#[test]
fn double_insertion_verifies_within_margin() {
    // Two inserted tail elements need roughly twice the reduction room of
    // one, so the verifiable caps sit lower; within them the construction
    // checks out at desk scale.
    use sumdist::constructions::{augment_base, AugmentMode, BaseSequence};
    let unit = BaseSequence::powers_of_two(1).unwrap();
    let seq = augment_base(&unit, 24, AugmentMode::Double).unwrap();
    let report = verify(
        &seq,
        &PairConstraint::family(parse_rational("1/12").unwrap()),
        &opts(),
    )
    .unwrap();
    assert_eq!(report.status, VerifyStatus::Distinct);

    let cg = conway_guy_base(8).unwrap();
    let seq = augment_base(&cg, 30, AugmentMode::Double).unwrap();
    let report = verify(
        &seq,
        &PairConstraint::family(parse_rational("1/12").unwrap()),
        &opts(),
    )
    .unwrap();
    assert_eq!(report.status, VerifyStatus::Distinct);
}

#[test]
fn pair_count_bounds_dominate_exact_counts_smoke() {
    let ev = BoundEvaluator::default();
    for lam in ["1/8", "1/6", "1/4", "0.3"] {
        let lambda = parse_rational(lam).unwrap();
        for n in [6usize, 9, 12] {
            for anchored in [false, true] {
                let exact = pair_count_exact(n, &lambda, anchored).unwrap();
                let bound = ev.pair_count_bound(n as u64, &lambda, anchored).unwrap();
                let exact_f: f64 = exact.to_string().parse().unwrap();
                assert!(
                    exact_f < bound,
                    "lam={lam} n={n} anchored={anchored}: {exact_f} !< {bound}"
                );
            }
        }
    }
}

#[test]
fn constructions_respect_exact_pigeonhole() {
    // Cross-module consistency: each construction's declared bound (its
    // true maximum) dominates the certificate-grade pigeonhole bound at
    // the cap it is distinct for.
    for n in 6..=16usize {
        let seq = tilde_sigma(n).unwrap();
        let lambda = parse_rational("0.24").unwrap();
        let lo = pigeonhole_exact_min_m(n, 1, &lambda).unwrap();
        assert!(seq.declared_bound().unwrap() >= &lo, "tilde n={n}");
    }
    for n in 1..=16usize {
        let seq = powers_of_two(n).unwrap();
        let lambda = parse_rational("1").unwrap();
        let lo = pigeonhole_exact_min_m(n, 1, &lambda).unwrap();
        assert!(seq.declared_bound().unwrap() >= &lo, "powers n={n}");
    }
}

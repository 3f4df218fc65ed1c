mod common;

use common::{random_bits, random_stitched, random_valid_sequence, EXAMPLE_5_2, TABLE};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stitched_polar::codeword::bit_reversal_permutation;
use stitched_polar::construction::transform_count;
use stitched_polar::gf2::BitMatrix;
use stitched_polar::{brs_pattern, CodeSpec, CouplingSequence, Decodability, RateMatchMode, RateMatchedCode};

#[test]
fn example_codeword() {
    let code = EXAMPLE_5_2.code();
    assert_eq!(code.encode(&[1, 0]).unwrap(), vec![1, 0, 1, 1, 0]);
    assert_eq!(EXAMPLE_5_2.sequence().encode(&[0, 0, 0, 1, 0]).unwrap(), vec![1, 0, 1, 1, 0]);
}

#[test]
fn tabled_generator_matrices() {
    let mismatched: Vec<&str> = TABLE
        .iter()
        .filter(|t| t.sequence().generator_matrix() != BitMatrix::from_rows(t.rows).unwrap())
        .map(|t| t.name)
        .collect();
    // these printed matrices are not generated by their printed sequences
    assert_eq!(mismatched, ["C(8,2)", "C(8,5)"]);
}

#[test]
fn tabled_sequences_validate() {
    for t in TABLE {
        assert!(t.sequence().validate().is_valid(), "{}", t.name);
    }
}

#[test]
fn overlapping_observations_rejected() {
    let seq = CouplingSequence::from_one_based(3, &[(1, 2), (1, 3), (2, 3)]).unwrap();
    assert!(matches!(seq.validate(), Decodability::Invalid { .. }));
}

#[test]
fn regular_sequences_validate() {
    for m in 0..=10 {
        assert!(CouplingSequence::regular(m).validate().is_valid(), "m = {m}");
    }
}

#[test]
fn regular_matches_kronecker_power() {
    for m in 0..=6 {
        assert_eq!(CouplingSequence::regular(m).generator_matrix(), BitMatrix::kernel_power(m));
        assert_eq!(transform_count(&CouplingSequence::regular(m)), (m as usize) << m.saturating_sub(1));
    }
}

#[test]
fn bit_reversal_small_cases() {
    assert_eq!(bit_reversal_permutation(2), vec![0, 2, 1, 3]);
    assert_eq!(bit_reversal_permutation(3)[6], 3);
}

#[test]
fn shortening_never_trips_on_brs_patterns() {
    for m in 1..=4u32 {
        let n0 = 1usize << m;
        for s in 0..n0 {
            let pattern = brs_pattern(n0, s).unwrap();
            let info: Vec<usize> = (0..n0).filter(|i| !pattern.contains(i)).collect();
            let mother = CodeSpec::new(CouplingSequence::regular(m), info.clone(), None).unwrap();
            let code = RateMatchedCode::new(mother, RateMatchMode::Shorten, pattern.clone()).unwrap();
            let k = info.len();
            if k > 12 {
                continue;
            }
            for msg in 0..1u32 << k {
                let bits: Vec<u8> = (0..k).map(|j| (msg >> j & 1) as u8).collect();
                let full = code.mother().encode(&bits).unwrap();
                assert!(pattern.iter().all(|&p| full[p] == 0));
                assert_eq!(code.encode(&bits).unwrap().len(), n0 - s);
            }
        }
    }
}

#[test]
fn shortened_outputs_are_mother_prefix() {
    let mother = CodeSpec::new(CouplingSequence::regular(2), vec![0, 1, 2], None).unwrap();
    let code = RateMatchedCode::new(mother.clone(), RateMatchMode::Shorten, vec![3]).unwrap();
    for msg in 0..8u8 {
        let bits = [msg & 1, msg >> 1 & 1, msg >> 2 & 1];
        assert_eq!(code.encode(&bits).unwrap(), mother.encode(&bits).unwrap()[..3].to_vec());
    }
}

fn arb_sequence() -> impl Strategy<Value = CouplingSequence> {
    (1usize..=24, any::<u64>(), any::<bool>()).prop_map(|(n, seed, grown)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if grown {
            random_valid_sequence(&mut rng, n, 3 * n)
        } else {
            random_stitched(&mut rng, n)
        }
    })
}

/// Any sequence at all, decodable or not.
fn arb_raw_sequence() -> impl Strategy<Value = CouplingSequence> {
    (2usize..=40).prop_flat_map(|n| {
        prop::collection::vec((0..n - 1).prop_flat_map(move |a| (Just(a), a + 1..n)), 0..60)
            .prop_map(move |ps| CouplingSequence::from_one_based(n, &ps.iter().map(|&(a, b)| (a + 1, b + 1)).collect::<Vec<_>>()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generator_rows_are_unit_encodings(seq in arb_raw_sequence()) {
        let g = seq.generator_matrix();
        for i in 0..seq.n() {
            let mut e = vec![0u8; seq.n()];
            e[i] = 1;
            prop_assert_eq!(g.row(i), seq.encode(&e).unwrap());
        }
    }

    #[test]
    fn generator_is_invertible(seq in arb_raw_sequence()) {
        prop_assert_eq!(seq.generator_matrix().rank(), seq.n());
    }

    #[test]
    fn encoding_is_linear(seq in arb_raw_sequence(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_bits(&mut rng, seq.n());
        let v = random_bits(&mut rng, seq.n());
        let w: Vec<u8> = u.iter().zip(&v).map(|(a, b)| a ^ b).collect();
        let x: Vec<u8> = seq.encode(&u).unwrap().iter().zip(seq.encode(&v).unwrap()).map(|(a, b)| a ^ b).collect();
        prop_assert_eq!(seq.encode(&w).unwrap(), x);
        prop_assert_eq!(seq.generator_matrix().mul_vec(&u), seq.encode(&u).unwrap());
    }

    #[test]
    fn stitched_sequences_validate(seq in arb_sequence()) {
        prop_assert!(seq.validate().is_valid());
    }

    #[test]
    fn one_based_round_trip(seq in arb_raw_sequence()) {
        let back = CouplingSequence::from_one_based(seq.n(), &seq.to_one_based()).unwrap();
        prop_assert_eq!(back, seq);
    }
}

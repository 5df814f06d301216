use gpz::bench::{make_trial, roundtrip, trial_rng};
use gpz::{bch_code, decode, rs_code, CodeSpec, DecodeConfig, ErrorPattern, Field, RootMethod, SyndromeMethod, Word};
use proptest::prelude::*;
use rand::Rng;

fn bch63() -> CodeSpec {
    bch_code(&Field::binary(6, Some(&[6, 4, 3, 1, 0])).unwrap(), 63, 7).unwrap()
}

fn rs15() -> CodeSpec {
    rs_code(&Field::binary(4, None).unwrap(), 3).unwrap()
}

fn rs255() -> CodeSpec {
    rs_code(&Field::binary(8, None).unwrap(), 33).unwrap()
}

#[test]
fn thousand_trials_per_code() {
    for (code, seed) in [(bch63(), 1), (rs15(), 2), (rs255(), 3)] {
        for root_method in [RootMethod::Chien, RootMethod::CzBsgs] {
            let cfg = DecodeConfig { root_method, ..DecodeConfig::default() };
            let bad = roundtrip(&code, 1000, seed, &cfg);
            assert!(bad.is_empty(), "n={} {root_method}: {:?}", code.n, &bad[..bad.len().min(3)]);
        }
    }
}

#[test]
fn every_single_error_on_bch63() {
    let code = bch63();
    let mut rng = trial_rng(6, 0);
    for pos in 0..code.n {
        let c = make_trial(&code, rng.gen(), pos as u64, 0).codeword;
        let r = code.inject_errors(&c, &ErrorPattern::binary(&code, &[pos])).unwrap();
        let rep = decode(&code, &r, &DecodeConfig::default()).unwrap();
        assert_eq!(rep.corrected, c);
        assert_eq!(rep.pattern.unwrap().positions, vec![pos]);
    }
}

#[test]
fn odd_degree_field_roundtrip() {
    // GF(32): the Cantor-Zassenhaus path runs in GF(1024)
    let code = bch_code(&Field::binary(5, None).unwrap(), 31, 7).unwrap();
    assert!(roundtrip(&code, 300, 8, &DecodeConfig::default()).is_empty());
    let rs = rs_code(&Field::binary(5, None).unwrap(), 7).unwrap();
    assert!(roundtrip(&rs, 300, 9, &DecodeConfig::default()).is_empty());
}

#[test]
fn clean_words_decode_to_themselves() {
    let code = rs15();
    let rep = decode(&code, &Word::zero(&code), &DecodeConfig::default()).unwrap();
    assert!(rep.is_success());
    assert_eq!(rep.counts.total().mul, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn configs_agree(seed in any::<u64>(), weight in 0usize..=3, rs in any::<bool>()) {
        let code = if rs { rs_code(&Field::binary(4, None).unwrap(), 7).unwrap() } else { bch63() };
        let trial = make_trial(&code, seed, 0, weight);
        let mut outs = Vec::new();
        for sm in [SyndromeMethod::Horner, SyndromeMethod::Frobenius] {
            for rm in [RootMethod::Chien, RootMethod::CzBsgs] {
                for conjugacy in [false, true] {
                    let cfg = DecodeConfig { syndrome_method: sm, root_method: rm, seed, conjugacy };
                    let rep = decode(&code, &trial.received, &cfg).unwrap();
                    prop_assert!(rep.is_success());
                    prop_assert_eq!(&rep.corrected, &trial.codeword);
                    outs.push(rep.pattern.unwrap());
                }
            }
        }
        prop_assert!(outs.iter().all(|p| *p == trial.pattern));
    }

    #[test]
    fn overweight_never_miscorrects_silently(seed in any::<u64>(), extra in 1usize..=4) {
        let code = bch63();
        let trial = make_trial(&code, seed, 0, code.t + extra);
        let rep = decode(&code, &trial.received, &DecodeConfig { seed, ..DecodeConfig::default() }).unwrap();
        if rep.is_success() {
            prop_assert!(code.is_codeword(&rep.corrected));
            prop_assert!(rep.corrected.distance(&trial.received) <= code.t);
        }
    }
}

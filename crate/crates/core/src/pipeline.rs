//! The four-step decoder: syndromes, locator, roots, magnitudes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{CodeError, CodeSpec, Word};
use crate::evaluate::{eval_auto, syndromes_with, EvalError, SyndromeMethod, SyndromeVector};
use crate::gf::{FieldElement, OpCount};
use crate::locator::{berlekamp_massey, LocatorPoly};
use crate::poly::Poly;
use crate::roots::{locate_errors, RootMethod, RootSet, RootsError};

/// Error positions and the symbol added at each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorPattern {
    pub positions: Vec<usize>,
    pub magnitudes: Vec<FieldElement>,
}

impl ErrorPattern {
    pub fn new(code: &CodeSpec, positions: Vec<usize>, magnitudes: Vec<FieldElement>) -> Result<Self, CodeError> {
        if positions.len() != magnitudes.len() {
            return Err(CodeError::WrongLength { expected: positions.len(), found: magnitudes.len() });
        }
        let mut seen = std::collections::BTreeSet::new();
        for (&pos, &mag) in positions.iter().zip(&magnitudes) {
            if pos >= code.n {
                return Err(CodeError::PositionOutOfRange { position: pos, n: code.n });
            }
            if !seen.insert(pos) {
                return Err(CodeError::DuplicatePosition(pos));
            }
            if !code.symbol_field.owns(mag) {
                return Err(CodeError::ForeignSymbol(format!("{mag:?}")));
            }
            if mag.is_zero() {
                return Err(CodeError::ZeroMagnitude(pos));
            }
        }
        Ok(ErrorPattern { positions, magnitudes })
    }

    /// Unit magnitudes at the given positions.
    pub fn binary(code: &CodeSpec, positions: &[usize]) -> Self {
        ErrorPattern { positions: positions.to_vec(), magnitudes: vec![code.symbol_field.one(); positions.len()] }
    }

    pub fn weight(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Sorted by position.
    pub fn sorted(&self) -> Self {
        let mut pairs: Vec<_> = self.positions.iter().copied().zip(self.magnitudes.iter().copied()).collect();
        pairs.sort_by_key(|&(p, _)| p);
        ErrorPattern { positions: pairs.iter().map(|&(p, _)| p).collect(), magnitudes: pairs.iter().map(|&(_, m)| m).collect() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("locator degree {0} exceeds t = {1}")]
    TooManyErrors(usize, usize),
    #[error(transparent)]
    Roots(#[from] RootsError),
    #[error("derivative of the locator vanishes at a root")]
    DerivativeVanishes,
    #[error("error magnitude outside the symbol field")]
    MagnitudeOutsideSymbolField,
    #[error("zero error magnitude")]
    ZeroMagnitude,
    #[error("correction does not produce a codeword")]
    NotACodeword,
}

/// `Y_j = -X_j Gamma(X_j^{-1}) / sigma'(X_j^{-1})` with
/// `Gamma(x) = sigma(x) (S(x) + 1) mod x^{2t+1}` and `S(x) = sum S_i x^i`.
/// Magnitudes are returned in the locator field, in the order of `roots`.
pub fn forney_magnitudes(
    sigma: &LocatorPoly,
    s: &SyndromeVector,
    roots: &RootSet,
    ctr: &mut OpCount,
) -> Result<Vec<FieldElement>, DecodeError> {
    let field = sigma.sigma.field().clone();
    let f = &*field;
    let mut sx = Vec::with_capacity(s.len() + 1);
    sx.push(f.one());
    sx.extend_from_slice(&s.values);
    let gamma = sigma.sigma.mul(&Poly::new(&field, sx), ctr).truncate(s.len() + 1);
    let dsigma = sigma.sigma.derivative();
    let mut out = Vec::with_capacity(roots.roots.len());
    for &x in &roots.roots {
        let x_inv = f.inv(x, ctr).map_err(|_| DecodeError::DerivativeVanishes)?;
        let den = eval_auto(&dsigma, &field, x_inv, ctr);
        if den.is_zero() {
            return Err(DecodeError::DerivativeVanishes);
        }
        let num = eval_auto(&gamma, &field, x_inv, ctr);
        let y = f.mul(x, num, ctr);
        let y = f.div(y, den, ctr).expect("nonzero denominator");
        out.push(f.neg(y));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeConfig {
    pub syndrome_method: SyndromeMethod,
    pub root_method: RootMethod,
    pub seed: u64,
    /// `S_{pj} = S_j^p` for codes over the prime field.
    pub conjugacy: bool,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        DecodeConfig { syndrome_method: SyndromeMethod::Frobenius, root_method: RootMethod::CzBsgs, seed: 0, conjugacy: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodeStatus {
    Success,
    DecodeFailure,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub syndromes: OpCount,
    pub bm: OpCount,
    pub roots: OpCount,
    pub forney: OpCount,
}

impl StageCounts {
    pub fn total(&self) -> OpCount {
        self.syndromes + self.bm + self.roots + self.forney
    }
}

#[derive(Debug, Clone)]
pub struct DecodeReport {
    pub status: DecodeStatus,
    /// Present on success, sorted by position.
    pub pattern: Option<ErrorPattern>,
    /// The input word unchanged on failure.
    pub corrected: Word,
    pub counts: StageCounts,
    pub syndromes: SyndromeVector,
    pub locator: Option<LocatorPoly>,
    pub roots: Option<RootSet>,
    pub failure: Option<DecodeError>,
}

impl DecodeReport {
    pub fn is_success(&self) -> bool {
        self.status == DecodeStatus::Success
    }
}

/// Decode one received word.
pub fn decode(code: &CodeSpec, word: &Word, cfg: &DecodeConfig) -> Result<DecodeReport, EvalError> {
    let mut counts = StageCounts::default();
    let run = syndromes_with(code, word, cfg.syndrome_method, cfg.conjugacy)?;
    counts.syndromes = run.total();
    let s = run.syndromes;
    let mut report = DecodeReport {
        status: DecodeStatus::DecodeFailure,
        pattern: None,
        corrected: word.clone(),
        counts,
        syndromes: s.clone(),
        locator: None,
        roots: None,
        failure: None,
    };
    if s.all_zero() {
        report.status = DecodeStatus::Success;
        report.pattern = Some(ErrorPattern { positions: Vec::new(), magnitudes: Vec::new() });
        return Ok(report);
    }

    let sigma = berlekamp_massey(&code.locator_field, &s, &mut report.counts.bm);
    report.locator = Some(sigma.clone());
    if sigma.degree() > code.t {
        report.failure = Some(DecodeError::TooManyErrors(sigma.degree(), code.t));
        return Ok(report);
    }

    let roots = match locate_errors(&sigma, code, cfg.root_method, cfg.seed, &mut report.counts.roots) {
        Ok(r) => r,
        Err(e) => {
            report.failure = Some(e.into());
            return Ok(report);
        }
    };
    report.roots = Some(roots.clone());

    let sf = &code.symbol_field;
    let magnitudes = if code.is_binary() {
        vec![sf.one(); roots.positions.len()]
    } else {
        let ys = match forney_magnitudes(&sigma, &s, &roots, &mut report.counts.forney) {
            Ok(ys) => ys,
            Err(e) => {
                report.failure = Some(e);
                return Ok(report);
            }
        };
        let mut mags = Vec::with_capacity(ys.len());
        for y in ys {
            match sf.coerce(y) {
                Some(m) if !m.is_zero() => mags.push(m),
                Some(_) => {
                    report.failure = Some(DecodeError::ZeroMagnitude);
                    return Ok(report);
                }
                None => {
                    report.failure = Some(DecodeError::MagnitudeOutsideSymbolField);
                    return Ok(report);
                }
            }
        }
        mags
    };

    let pattern = ErrorPattern { positions: roots.positions.clone(), magnitudes };
    let mut corrected = word.clone();
    for (&pos, &mag) in pattern.positions.iter().zip(&pattern.magnitudes) {
        corrected.symbols[pos] = sf.sub(corrected.symbols[pos], mag);
    }
    // consistency check on the output, outside the stage counts
    if !code.is_codeword(&corrected) {
        report.failure = Some(DecodeError::NotACodeword);
        return Ok(report);
    }
    report.status = DecodeStatus::Success;
    report.pattern = Some(pattern.sorted());
    report.corrected = corrected;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{bch_code, rs_code};
    use crate::gf::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fixture_code() -> CodeSpec {
        bch_code(&Field::binary(6, Some(&[6, 4, 3, 1, 0])).unwrap(), 63, 7).unwrap()
    }

    fn random_message(code: &CodeSpec, rng: &mut ChaCha8Rng) -> Vec<FieldElement> {
        let q = code.symbol_field.order();
        (0..code.k).map(|_| code.symbol_field.element(rng.gen_range(0..q)).unwrap()).collect()
    }

    fn random_pattern(code: &CodeSpec, weight: usize, rng: &mut ChaCha8Rng) -> ErrorPattern {
        let q = code.symbol_field.order();
        let mut positions = rand::seq::index::sample(rng, code.n, weight).into_vec();
        positions.sort();
        let magnitudes = (0..weight).map(|_| code.symbol_field.element(rng.gen_range(1..q)).unwrap()).collect();
        ErrorPattern::new(code, positions, magnitudes).unwrap()
    }

    fn all_configs() -> Vec<DecodeConfig> {
        let mut out = Vec::new();
        for syndrome_method in [SyndromeMethod::Horner, SyndromeMethod::Frobenius] {
            for root_method in [RootMethod::Chien, RootMethod::CzBsgs] {
                out.push(DecodeConfig { syndrome_method, root_method, seed: 5, conjugacy: true });
            }
        }
        out
    }

    #[test]
    fn clean_codeword_short_circuits() {
        let code = fixture_code();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = code.encode_systematic(&random_message(&code, &mut rng), &mut OpCount::default()).unwrap();
        let rep = decode(&code, &c, &DecodeConfig::default()).unwrap();
        assert!(rep.is_success());
        assert!(rep.pattern.unwrap().is_empty());
        assert_eq!(rep.corrected, c);
        assert_eq!(rep.counts.roots, OpCount::default());
        assert!(rep.roots.is_none());
    }

    #[test]
    fn pattern_validation() {
        let code = rs_code(&Field::binary(4, None).unwrap(), 3).unwrap();
        let f = &code.symbol_field;
        assert_eq!(ErrorPattern::new(&code, vec![1], vec![f.zero()]), Err(CodeError::ZeroMagnitude(1)));
        assert_eq!(ErrorPattern::new(&code, vec![1, 1], vec![f.one(); 2]), Err(CodeError::DuplicatePosition(1)));
        assert!(matches!(ErrorPattern::new(&code, vec![1], vec![]), Err(CodeError::WrongLength { .. })));
        assert!(matches!(ErrorPattern::new(&code, vec![15], vec![f.one()]), Err(CodeError::PositionOutOfRange { .. })));
    }

    #[test]
    fn rs_single_error_magnitude() {
        let f = Field::binary(4, None).unwrap();
        let code = rs_code(&f, 3).unwrap();
        let c = Word::zero(&code);
        for pos in 0..15 {
            for y in 1..16 {
                let pat = ErrorPattern::new(&code, vec![pos], vec![f.element(y).unwrap()]).unwrap();
                let r = code.inject_errors(&c, &pat).unwrap();
                let rep = decode(&code, &r, &DecodeConfig::default()).unwrap();
                assert_eq!(rep.pattern.as_ref(), Some(&pat));
                assert_eq!(rep.corrected, c);
            }
        }
    }

    #[test]
    fn forney_matches_injection_rs255() {
        let f = Field::binary(8, None).unwrap();
        let code = rs_code(&f, 33).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let c = code.encode_systematic(&random_message(&code, &mut rng), &mut OpCount::default()).unwrap();
        let pat = random_pattern(&code, 16, &mut rng);
        let r = code.inject_errors(&c, &pat).unwrap();
        let rep = decode(&code, &r, &DecodeConfig { seed: 3, ..DecodeConfig::default() }).unwrap();
        assert_eq!(rep.pattern, Some(pat));
        assert_eq!(rep.corrected, c);
    }

    #[test]
    fn config_independence_and_count_additivity() {
        let f = Field::binary(4, None).unwrap();
        for code in [rs_code(&f, 5).unwrap(), fixture_code()] {
            let mut rng = ChaCha8Rng::seed_from_u64(77);
            for _ in 0..40 {
                let c = code.encode_systematic(&random_message(&code, &mut rng), &mut OpCount::default()).unwrap();
                let w = rng.gen_range(0..=code.t);
                let r = code.inject_errors(&c, &random_pattern(&code, w, &mut rng)).unwrap();
                let reps: Vec<_> = all_configs().iter().map(|cfg| decode(&code, &r, cfg).unwrap()).collect();
                for rep in &reps {
                    assert_eq!(rep.corrected, c);
                    assert_eq!(rep.pattern, reps[0].pattern);
                    let c = rep.counts;
                    assert_eq!(rep.counts.total(), c.syndromes + c.bm + c.roots + c.forney);
                }
            }
        }
    }

    #[test]
    fn binary_skips_forney() {
        let code = fixture_code();
        let r = code.inject_errors(&Word::zero(&code), &ErrorPattern::binary(&code, &[3, 30])).unwrap();
        let rep = decode(&code, &r, &DecodeConfig::default()).unwrap();
        assert_eq!(rep.counts.forney, OpCount::default());
        assert_eq!(rep.pattern.unwrap().positions, vec![3, 30]);
    }

    #[test]
    fn overweight_is_bounded_distance() {
        let code = fixture_code();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let c = code.encode_systematic(&random_message(&code, &mut rng), &mut OpCount::default()).unwrap();
            let r = code.inject_errors(&c, &random_pattern(&code, code.t + 1, &mut rng)).unwrap();
            let rep = decode(&code, &r, &DecodeConfig::default()).unwrap();
            if rep.is_success() {
                assert!(code.is_codeword(&rep.corrected));
                assert!(rep.corrected.distance(&r) <= code.t);
            } else {
                assert_eq!(rep.corrected, r);
            }
        }
    }

    #[test]
    fn ternary_bch_uses_forney() {
        let f9 = Field::new(3, 2, None).unwrap();
        let f3 = Field::prime(3).unwrap();
        let code = bch_code(&f9, 8, 5).unwrap();
        assert_eq!(code.symbol_field, f3);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let c = code.encode_systematic(&random_message(&code, &mut rng), &mut OpCount::default()).unwrap();
            let w = rng.gen_range(0..=code.t);
            let pat = random_pattern(&code, w, &mut rng);
            let r = code.inject_errors(&c, &pat).unwrap();
            let rep = decode(&code, &r, &DecodeConfig { root_method: RootMethod::Chien, ..DecodeConfig::default() }).unwrap();
            assert_eq!(rep.corrected, c);
            assert_eq!(rep.pattern, Some(pat));
        }
    }
}

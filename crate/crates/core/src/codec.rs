//! Narrow-sense BCH and Reed-Solomon code construction, encoding, and the
//! hex word format used by the command line tools.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{parse_exponents, Field, FieldElement, FieldRef, GfError, OpCount};
use crate::pipeline::ErrorPattern;
use crate::poly::{exponent_list, minimal_polynomial, Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("block length {n} does not divide {q_minus_1}")]
    LengthDoesNotDivide { n: u64, q_minus_1: u64 },
    #[error("designed distance {0} is out of range")]
    BadDistance(u64),
    #[error("code has no information symbols (k = {0})")]
    EmptyCode(i64),
    #[error("expected {expected} symbols, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("zero error magnitude at position {0}")]
    ZeroMagnitude(usize),
    #[error("error position {0} is repeated")]
    DuplicatePosition(usize),
    #[error("error position {position} is outside [0, {n})")]
    PositionOutOfRange { position: usize, n: usize },
    #[error("symbol {0} does not belong to the code's symbol field")]
    ForeignSymbol(String),
    #[error("malformed word: {0}")]
    Format(String),
    #[error("malformed code descriptor: {0}")]
    Descriptor(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Bch,
    Rs,
}

/// An `[n, k, delta]` cyclic code with zeros `alpha^1 .. alpha^{2t}` (and
/// their conjugates for BCH codes).
#[derive(Debug, Clone)]
pub struct CodeSpec {
    pub kind: CodeKind,
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub t: usize,
    /// Exponents `j` with `g(alpha^j) = 0`, sorted.
    pub zero_exponents: Vec<u64>,
    /// Generator polynomial over the symbol field.
    pub g: Poly,
    pub symbol_field: FieldRef,
    pub locator_field: FieldRef,
    /// Primitive n-th root of unity in the locator field.
    pub alpha: FieldElement,
}

/// Orbit of `j` under multiplication by `p` modulo `n`.
pub fn cyclotomic_coset(j: u64, p: u64, n: u64) -> Vec<u64> {
    let mut coset = vec![j % n];
    let mut k = j * p % n;
    while k != j % n {
        coset.push(k);
        k = k * p % n;
    }
    coset
}

fn adjusted_delta(delta: u64) -> u64 {
    if delta % 2 == 0 {
        delta - 1
    } else {
        delta
    }
}

fn code_alpha(field: &FieldRef, n: u64) -> Result<FieldElement, CodeError> {
    let q1 = field.order() - 1;
    if n < 2 || q1 % n != 0 {
        return Err(CodeError::LengthDoesNotDivide { n, q_minus_1: q1 });
    }
    let mut scratch = OpCount::default();
    Ok(field.pow(field.generator(), q1 / n, &mut scratch))
}

/// Narrow-sense BCH code of length `n` over GF(p) with designed distance
/// `delta` (an even `delta` is lowered by one).
pub fn bch_code(field: &FieldRef, n: u64, delta: u64) -> Result<CodeSpec, CodeError> {
    let alpha = code_alpha(field, n)?;
    if delta < 3 {
        return Err(CodeError::BadDistance(delta));
    }
    let delta = adjusted_delta(delta);
    let t = (delta - 1) / 2;
    if 2 * t >= n {
        return Err(CodeError::BadDistance(delta));
    }
    let p = field.characteristic();
    let mut zeros = BTreeSet::new();
    let mut reps = Vec::new();
    for j in 1..=2 * t {
        if !zeros.contains(&j) {
            reps.push(j);
            zeros.extend(cyclotomic_coset(j, p, n));
        }
    }
    let mut scratch = OpCount::default();
    let mut g = Poly::one(field);
    for &j in &reps {
        let beta = field.pow(alpha, j, &mut scratch);
        g = g.mul(&minimal_polynomial(field, beta, &mut scratch)?, &mut scratch);
    }
    let symbol_field = Field::prime(p)?;
    let g = g.coerce(&symbol_field)?;
    let r = g.degree().expect("generator is nonzero");
    let k = n as i64 - r as i64;
    if k <= 0 {
        return Err(CodeError::EmptyCode(k));
    }
    Ok(CodeSpec {
        kind: CodeKind::Bch,
        n: n as usize,
        k: k as usize,
        delta: delta as usize,
        t: t as usize,
        zero_exponents: zeros.into_iter().collect(),
        g,
        symbol_field,
        locator_field: field.clone(),
        alpha,
    })
}

/// Reed-Solomon code of length `q - 1` over the field itself.
pub fn rs_code(field: &FieldRef, delta: u64) -> Result<CodeSpec, CodeError> {
    let n = field.order() - 1;
    if delta < 3 || delta > n {
        return Err(CodeError::BadDistance(delta));
    }
    let alpha = code_alpha(field, n)?;
    let delta = adjusted_delta(delta);
    let t = (delta - 1) / 2;
    let mut scratch = OpCount::default();
    let mut g = Poly::one(field);
    let mut root = field.one();
    for _ in 1..=2 * t {
        root = field.mul(root, alpha, &mut scratch);
        g = g.mul(&Poly::linear(field, field.neg(root)), &mut scratch);
    }
    Ok(CodeSpec {
        kind: CodeKind::Rs,
        n: n as usize,
        k: (n - 2 * t) as usize,
        delta: delta as usize,
        t: t as usize,
        zero_exponents: (1..=2 * t).collect(),
        g,
        symbol_field: field.clone(),
        locator_field: field.clone(),
        alpha,
    })
}

/// A length-`n` vector of symbols, read as the polynomial
/// `sum symbols[i] x^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub symbols: Vec<FieldElement>,
}

impl Word {
    pub fn zero(code: &CodeSpec) -> Self {
        Word { symbols: vec![code.symbol_field.zero(); code.n] }
    }

    pub fn from_poly(code: &CodeSpec, p: &Poly) -> Result<Self, CodeError> {
        let len = p.coeffs().len();
        if len > code.n {
            return Err(CodeError::WrongLength { expected: code.n, found: len });
        }
        let mut symbols = p.coeffs().to_vec();
        symbols.resize(code.n, code.symbol_field.zero());
        Ok(Word { symbols })
    }

    pub fn to_poly(&self, field: &FieldRef) -> Poly {
        Poly::new(field, self.symbols.clone())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Positions where the two words differ.
    pub fn distance(&self, other: &Word) -> usize {
        self.symbols.iter().zip(&other.symbols).filter(|(a, b)| a != b).count()
    }

    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|s| !s.is_zero()).count()
    }

    /// Cyclic shift by one position (multiplication by `x` mod `x^n - 1`).
    pub fn rotate(&self) -> Word {
        let mut s = self.symbols.clone();
        s.rotate_right(1);
        Word { symbols: s }
    }
}

impl CodeSpec {
    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    fn check_symbols(&self, symbols: &[FieldElement], expected: usize) -> Result<(), CodeError> {
        if symbols.len() != expected {
            return Err(CodeError::WrongLength { expected, found: symbols.len() });
        }
        if let Some(s) = symbols.iter().find(|s| !self.symbol_field.owns(**s)) {
            return Err(CodeError::ForeignSymbol(format!("{:?}", s)));
        }
        Ok(())
    }

    /// Non-systematic encoding `c(x) = g(x) I(x)`.
    pub fn encode(&self, message: &[FieldElement], ctr: &mut OpCount) -> Result<Word, CodeError> {
        self.check_symbols(message, self.k)?;
        let info = Poly::new(&self.symbol_field, message.to_vec());
        Word::from_poly(self, &self.g.mul(&info, ctr))
    }

    /// Systematic encoding: the message occupies the top `k` positions and
    /// the parity is `-(x^{n-k} I(x) mod g(x))`.
    pub fn encode_systematic(&self, message: &[FieldElement], ctr: &mut OpCount) -> Result<Word, CodeError> {
        self.check_symbols(message, self.k)?;
        let shifted = Poly::new(&self.symbol_field, message.to_vec()).shift(self.redundancy());
        let parity = shifted.rem(&self.g, ctr)?;
        Word::from_poly(self, &shifted.sub(&parity))
    }

    /// Add an error pattern to a word.
    pub fn inject_errors(&self, word: &Word, pattern: &ErrorPattern) -> Result<Word, CodeError> {
        self.check_symbols(&word.symbols, self.n)?;
        let mut seen = BTreeSet::new();
        for &pos in &pattern.positions {
            if pos >= self.n {
                return Err(CodeError::PositionOutOfRange { position: pos, n: self.n });
            }
            if !seen.insert(pos) {
                return Err(CodeError::DuplicatePosition(pos));
            }
        }
        let f = &self.symbol_field;
        let mut out = word.clone();
        for (&pos, &mag) in pattern.positions.iter().zip(&pattern.magnitudes) {
            let mag = f.coerce(mag).ok_or_else(|| CodeError::ForeignSymbol(format!("{:?}", mag)))?;
            out.symbols[pos] = f.add(out.symbols[pos], mag);
        }
        Ok(out)
    }

    /// `g(x)` divides `x^n - 1`.
    pub fn generator_divides_xn_minus_1(&self) -> bool {
        let f = &self.symbol_field;
        let xn1 = Poly::monomial(f, f.one(), self.n).sub(&Poly::one(f));
        let mut scratch = OpCount::default();
        xn1.rem(&self.g, &mut scratch).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// The word evaluated at `alpha^j` for every zero exponent (uncounted).
    pub fn is_codeword(&self, word: &Word) -> bool {
        let f = &self.locator_field;
        let poly = word.to_poly(&self.symbol_field);
        let mut scratch = OpCount::default();
        self.zero_exponents.iter().all(|&j| {
            let beta = f.pow(self.alpha, j, &mut scratch);
            poly.eval(f, beta, &mut scratch).is_zero()
        })
    }

    pub fn is_binary(&self) -> bool {
        self.symbol_field.characteristic() == 2 && self.symbol_field.is_prime_field()
    }

    pub fn summary(&self) -> CodeSummary {
        CodeSummary {
            kind: self.kind,
            p: self.locator_field.characteristic(),
            m: self.locator_field.degree(),
            modulus: self.locator_field.modulus_string(),
            n: self.n,
            k: self.k,
            delta: self.delta,
            t: self.t,
            generator: if self.symbol_field.is_prime_field() { exponent_list(&self.g) } else { self.g.notation() },
            zero_set: self.zero_exponents.clone(),
        }
    }
}

/// Structured description printed by `code new`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSummary {
    pub kind: CodeKind,
    pub p: u64,
    pub m: u32,
    pub modulus: String,
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub t: usize,
    pub generator: String,
    pub zero_set: Vec<u64>,
}

impl fmt::Display for CodeSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind: {}", match self.kind { CodeKind::Bch => "bch", CodeKind::Rs => "rs" })?;
        writeln!(f, "field: GF({}^{}) modulus {}", self.p, self.m, self.modulus)?;
        writeln!(f, "n: {}", self.n)?;
        writeln!(f, "k: {}", self.k)?;
        writeln!(f, "delta: {}", self.delta)?;
        writeln!(f, "t: {}", self.t)?;
        writeln!(f, "g: {}", self.generator)?;
        let zs: Vec<String> = self.zero_set.iter().map(u64::to_string).collect();
        writeln!(f, "zeros: {}", zs.join(","))
    }
}

/// Parameters from which a [`CodeSpec`] can be rebuilt; the textual form is
/// `kind=bch/p=2/m=6/n=63/delta=7/modulus=6,4,3,1,0` (p, n and modulus are
/// optional, and `kind=` may be dropped).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub kind: CodeKind,
    #[serde(default = "two")]
    pub p: u64,
    pub m: u32,
    #[serde(default)]
    pub n: Option<u64>,
    pub delta: u64,
    #[serde(default)]
    pub modulus: Option<String>,
}

fn two() -> u64 {
    2
}

impl CodeDescriptor {
    pub fn parse(s: &str) -> Result<Self, CodeError> {
        let bad = |msg: &str| CodeError::Descriptor(format!("{msg} in {s:?}"));
        let (mut kind, mut p, mut m, mut n, mut delta, mut modulus) = (None, 2u64, None, None, None, None);
        for part in s.split('/').filter(|x| !x.is_empty()) {
            let (key, val) = match part {
                "bch" | "rs" => ("kind", part),
                _ => part.split_once('=').ok_or_else(|| bad("expected key=value"))?,
            };
            let num = || val.parse::<u64>().map_err(|_| bad("expected a number"));
            match key {
                "kind" => {
                    kind = Some(match val {
                        "bch" => CodeKind::Bch,
                        "rs" => CodeKind::Rs,
                        _ => return Err(bad("kind must be bch or rs")),
                    })
                }
                "p" => p = num()?,
                "m" => m = Some(num()? as u32),
                "n" => n = Some(num()?),
                "delta" => delta = Some(num()?),
                "modulus" => modulus = Some(val.to_string()),
                _ => return Err(bad("unknown key")),
            }
        }
        Ok(CodeDescriptor {
            kind: kind.ok_or_else(|| bad("missing kind"))?,
            p,
            m: m.ok_or_else(|| bad("missing m"))?,
            n,
            delta: delta.ok_or_else(|| bad("missing delta"))?,
            modulus,
        })
    }

    pub fn build(&self) -> Result<CodeSpec, CodeError> {
        let field = match &self.modulus {
            Some(s) if self.p == 2 => Field::binary(self.m, Some(&parse_exponents(s)?))?,
            Some(s) => {
                // general p: comma separated coefficients, low to high
                let c: Result<Vec<u64>, _> = s.split(',').map(|t| t.trim().parse::<u64>()).collect();
                let c = c.map_err(|_| CodeError::Descriptor(format!("bad modulus {s:?}")))?;
                Field::new(self.p, self.m, Some(&c))?
            }
            None => Field::new(self.p, self.m, None)?,
        };
        match self.kind {
            CodeKind::Bch => bch_code(&field, self.n.unwrap_or(field.order() - 1), self.delta),
            CodeKind::Rs => {
                if let Some(n) = self.n {
                    if n != field.order() - 1 {
                        return Err(CodeError::Descriptor(format!("RS codes have n = {}", field.order() - 1)));
                    }
                }
                rs_code(&field, self.delta)
            }
        }
    }
}

impl fmt::Display for CodeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            CodeKind::Bch => "bch",
            CodeKind::Rs => "rs",
        };
        write!(f, "kind={kind}/p={}/m={}", self.p, self.m)?;
        if let Some(n) = self.n {
            write!(f, "/n={n}")?;
        }
        write!(f, "/delta={}", self.delta)?;
        if let Some(m) = &self.modulus {
            write!(f, "/modulus={m}")?;
        }
        Ok(())
    }
}

pub mod hex {
    //! One word per line. Binary symbols are packed big-endian into exactly
    //! `ceil(len/4)` hex digits (the first digit holds the highest positions);
    //! symbols of larger fields take two hex digits each, highest position
    //! first.

    use super::CodeError;
    use crate::gf::{FieldElement, FieldRef};

    pub fn format_symbols(field: &FieldRef, symbols: &[FieldElement]) -> Result<String, CodeError> {
        if field.characteristic() == 2 && field.is_prime_field() {
            let digits = symbols.len().div_ceil(4);
            let mut out = String::with_capacity(digits);
            for d in (0..digits).rev() {
                let mut nib = 0u32;
                for b in 0..4 {
                    if symbols.get(4 * d + b).is_some_and(|s| s.is_one()) {
                        nib |= 1 << b;
                    }
                }
                out.push(std::char::from_digit(nib, 16).expect("nibble"));
            }
            Ok(out)
        } else if field.order() <= 256 {
            Ok(symbols.iter().rev().map(|s| format!("{:02x}", s.value())).collect())
        } else {
            Err(CodeError::Format(format!("no hex notation for symbols of GF({})", field.order())))
        }
    }

    pub fn parse_symbols(field: &FieldRef, len: usize, line: &str) -> Result<Vec<FieldElement>, CodeError> {
        let line = line.trim();
        let bad = |msg: &str| CodeError::Format(format!("{msg}: {line:?}"));
        if field.characteristic() == 2 && field.is_prime_field() {
            let digits = len.div_ceil(4);
            if line.len() != digits {
                return Err(bad(&format!("expected {digits} hex digits")));
            }
            let mut out = vec![field.zero(); len];
            for (i, ch) in line.chars().enumerate() {
                let nib = ch.to_digit(16).ok_or_else(|| bad("not a hex digit"))?;
                let d = digits - 1 - i;
                for b in 0..4 {
                    if nib >> b & 1 == 1 {
                        let pos = 4 * d + b;
                        if pos >= len {
                            return Err(bad("padding bits must be zero"));
                        }
                        out[pos] = field.one();
                    }
                }
            }
            Ok(out)
        } else {
            if line.len() != 2 * len {
                return Err(bad(&format!("expected {} hex digits", 2 * len)));
            }
            let mut out = Vec::with_capacity(len);
            for i in (0..len).rev() {
                let byte = u64::from_str_radix(&line[2 * i..2 * i + 2], 16).map_err(|_| bad("not a hex byte"))?;
                out.push(field.element(byte).map_err(|_| bad("symbol outside the field"))?);
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fixture_field() -> FieldRef {
        Field::binary(6, Some(&[6, 4, 3, 1, 0])).unwrap()
    }

    fn random_message(code: &CodeSpec, rng: &mut ChaCha8Rng) -> Vec<FieldElement> {
        let q = code.symbol_field.order();
        (0..code.k).map(|_| code.symbol_field.element(rng.gen_range(0..q)).unwrap()).collect()
    }

    #[test]
    fn bch_63_45_7_generator() {
        let code = bch_code(&fixture_field(), 63, 7).unwrap();
        assert_eq!(code.k, 45);
        assert_eq!(code.t, 3);
        assert_eq!(exponent_list(&code.g), "18,17,14,13,9,7,5,3,0");
        let expected: BTreeSet<u64> = [1, 2, 4, 8, 16, 32, 3, 6, 12, 24, 48, 33, 5, 10, 20, 40, 17, 34].into_iter().collect();
        assert_eq!(code.zero_exponents, expected.into_iter().collect::<Vec<_>>());
        assert!(code.generator_divides_xn_minus_1());
    }

    #[test]
    fn hamming_15_11() {
        let f = Field::binary(4, Some(&[4, 1, 0])).unwrap();
        let code = bch_code(&f, 15, 3).unwrap();
        assert_eq!((code.n, code.k), (15, 11));
        assert_eq!(exponent_list(&code.g), "4,1,0");
        // even delta is lowered
        assert_eq!(bch_code(&f, 15, 4).unwrap().delta, 3);
    }

    #[test]
    fn bch_errors() {
        let f = fixture_field();
        assert!(matches!(bch_code(&f, 62, 7), Err(CodeError::LengthDoesNotDivide { .. })));
        assert!(matches!(bch_code(&f, 63, 2), Err(CodeError::BadDistance(2))));
        assert!(matches!(bch_code(&f, 63, 65), Err(CodeError::BadDistance(65))));
        // every nonzero exponent is a zero: the repetition code
        assert_eq!(bch_code(&f, 63, 63).unwrap().k, 1);
    }

    #[test]
    fn bch_shorter_length_uses_nth_root() {
        // n = 21 divides 63
        let code = bch_code(&fixture_field(), 21, 5).unwrap();
        assert_eq!(code.locator_field.element_order(code.alpha), 21);
        assert!(code.generator_divides_xn_minus_1());
    }

    #[test]
    fn rs_codes() {
        let f16 = Field::binary(4, None).unwrap();
        let rs = rs_code(&f16, 3).unwrap();
        assert_eq!((rs.n, rs.k, rs.delta), (15, 13, 3));
        let mut ctr = OpCount::default();
        let a = f16.generator();
        let expected = Poly::linear(&f16, a).mul(&Poly::linear(&f16, f16.mul(a, a, &mut ctr)), &mut ctr);
        assert_eq!(rs.g, expected);
        assert!(rs.g.eval(&f16, f16.one(), &mut ctr) != f16.zero());

        let f256 = Field::binary(8, None).unwrap();
        let big = rs_code(&f256, 33).unwrap();
        assert_eq!((big.n, big.k, big.g.degree()), (255, 223, Some(32)));
        for j in 1..=32 {
            assert!(big.g.eval(&f256, f256.pow(big.alpha, j, &mut ctr), &mut ctr).is_zero());
        }
        assert!(big.generator_divides_xn_minus_1());
        assert!(matches!(rs_code(&f16, 16), Err(CodeError::BadDistance(16))));
    }

    #[test]
    fn encode_examples() {
        let code = bch_code(&fixture_field(), 63, 7).unwrap();
        let f2 = &code.symbol_field;
        let mut ctr = OpCount::default();
        let zero = vec![f2.zero(); code.k];
        assert_eq!(code.encode(&zero, &mut ctr).unwrap(), Word::zero(&code));
        let mut unit = zero.clone();
        unit[0] = f2.one();
        let w = code.encode(&unit, &mut ctr).unwrap();
        assert_eq!(w.to_poly(f2), code.g);
        assert!(matches!(code.encode(&zero[1..], &mut ctr), Err(CodeError::WrongLength { .. })));
    }

    #[test]
    fn random_codewords_have_zero_syndromes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let codes = [bch_code(&fixture_field(), 63, 7).unwrap(), rs_code(&Field::binary(4, None).unwrap(), 3).unwrap()];
        let mut ctr = OpCount::default();
        for code in &codes {
            for _ in 0..20 {
                let msg = random_message(code, &mut rng);
                let c = code.encode(&msg, &mut ctr).unwrap();
                assert!(code.is_codeword(&c));
                assert!(code.is_codeword(&c.rotate()));
                let s = code.encode_systematic(&msg, &mut ctr).unwrap();
                assert!(code.is_codeword(&s));
                assert_eq!(&s.symbols[code.n - code.k..], &msg[..]);
            }
        }
    }

    #[test]
    fn bch_bound_on_samples() {
        let code = bch_code(&fixture_field(), 63, 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut ctr = OpCount::default();
        for _ in 0..300 {
            let msg = random_message(&code, &mut rng);
            let c = code.encode(&msg, &mut ctr).unwrap();
            if c.weight() > 0 {
                assert!(c.weight() >= 7);
            }
        }
    }

    #[test]
    fn inject_errors_cases() {
        let code = bch_code(&fixture_field(), 63, 7).unwrap();
        let w = Word::zero(&code);
        assert_eq!(code.inject_errors(&w, &ErrorPattern::binary(&code, &[])).unwrap(), w);
        let pat = ErrorPattern::binary(&code, &[9, 31, 50]);
        let e = code.inject_errors(&w, &pat).unwrap();
        assert_eq!(e.weight(), 3);
        assert_eq!(code.inject_errors(&e, &pat).unwrap(), w);
        let dup = ErrorPattern { positions: vec![3, 3], magnitudes: vec![code.symbol_field.one(); 2] };
        assert_eq!(code.inject_errors(&w, &dup), Err(CodeError::DuplicatePosition(3)));
        let far = ErrorPattern::binary(&code, &[63]);
        assert!(matches!(code.inject_errors(&w, &far), Err(CodeError::PositionOutOfRange { .. })));
    }

    #[test]
    fn hex_binary_layout() {
        let code = bch_code(&fixture_field(), 63, 7).unwrap();
        let f2 = &code.symbol_field;
        let mut w = Word::zero(&code);
        w.symbols[0] = f2.one();
        w.symbols[62] = f2.one();
        let s = hex::format_symbols(f2, &w.symbols).unwrap();
        assert_eq!(s, "4000000000000001");
        assert_eq!(hex::parse_symbols(f2, 63, &s).unwrap(), w.symbols);
        assert!(hex::parse_symbols(f2, 63, "8000000000000000").is_err());
        assert!(hex::parse_symbols(f2, 63, "400").is_err());
    }

    #[test]
    fn hex_rs_layout() {
        let f = Field::binary(4, None).unwrap();
        let code = rs_code(&f, 3).unwrap();
        let mut w = Word::zero(&code);
        w.symbols[0] = f.element(0xa).unwrap();
        w.symbols[14] = f.element(0x3).unwrap();
        let s = hex::format_symbols(&f, &w.symbols).unwrap();
        assert_eq!(&s[..2], "03");
        assert_eq!(&s[28..], "0a");
        assert_eq!(hex::parse_symbols(&f, 15, &s).unwrap(), w.symbols);
        assert!(hex::parse_symbols(&f, 15, &s.replace("03", "13")).is_err());
    }

    #[test]
    fn descriptor_roundtrip() {
        let d = CodeDescriptor::parse("kind=bch/m=6/n=63/delta=7/modulus=6,4,3,1,0").unwrap();
        assert_eq!(d.to_string(), "kind=bch/p=2/m=6/n=63/delta=7/modulus=6,4,3,1,0");
        let code = d.build().unwrap();
        assert_eq!(code.k, 45);
        assert!(CodeDescriptor::parse("kind=xyz/m=6/delta=7").is_err());
        assert!(CodeDescriptor::parse("m=6/delta=7").is_err());
        let rs = CodeDescriptor::parse("kind=rs/m=8/delta=33").unwrap().build().unwrap();
        assert_eq!(rs.k, 223);
    }
}

//! From the error locator to error positions.
//!
//! The baseline is the Chien search: test `sigma(alpha^{-j})` for every `j`.
//! The faster path factors the reciprocal locator with the characteristic-2
//! Cantor-Zassenhaus split and recovers each position with a baby-step
//! giant-step discrete logarithm to base `alpha`.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::CodeSpec;
use crate::gf::{embed_quadratic, FieldElement, FieldRef, GfError, OpCount};
use crate::locator::{reciprocal_locator, LocatorPoly};
use crate::poly::{Poly, PolyError};

/// Candidate `b(z)` polynomials tried per split before giving up.
pub const CZ_ATTEMPT_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootsError {
    #[error("polynomial has a repeated root")]
    NotSquarefree,
    #[error("polynomial does not split into distinct linear factors over the field")]
    NotSplit,
    #[error("no splitting b(z) found after {0} attempts")]
    AttemptCapExceeded(usize),
    #[error("Cantor-Zassenhaus in characteristic 2 needs an even extension degree (m = {0})")]
    OddDegree(u32),
    #[error("element is not a power of alpha")]
    NotInGroup,
    #[error("found {found} roots for a locator of degree {degree}")]
    RootCountMismatch { found: usize, degree: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootMethod {
    Chien,
    CzBsgs,
}

impl std::str::FromStr for RootMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chien" => Ok(Self::Chien),
            "cz" | "cz_bsgs" => Ok(Self::CzBsgs),
            _ => Err(format!("unknown root method {s:?} (chien|cz)")),
        }
    }
}

impl std::fmt::Display for RootMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Chien => "chien",
            Self::CzBsgs => "cz_bsgs",
        })
    }
}

/// Work done while locating roots, beyond field operations.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Chien positions tested.
    pub position_tests: u64,
    /// Baby-step table lookups over all logarithms.
    pub baby_steps: u64,
    /// Giant-step table entries.
    pub table_size: u64,
    /// `b(z)` candidates tried by the splitter.
    pub cz_attempts: u64,
}

/// Roots `alpha^{l_i}` of the reciprocal locator with their positions,
/// sorted by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSet {
    pub roots: Vec<FieldElement>,
    pub positions: Vec<usize>,
    pub stats: SearchStats,
}

impl RootSet {
    fn from_pairs(mut pairs: Vec<(usize, FieldElement)>, stats: SearchStats) -> Self {
        pairs.sort_by_key(|&(p, _)| p);
        RootSet { positions: pairs.iter().map(|&(p, _)| p).collect(), roots: pairs.iter().map(|&(_, r)| r).collect(), stats }
    }
}

fn alpha_inverse(code: &CodeSpec) -> FieldElement {
    let mut scratch = OpCount::default();
    code.locator_field.pow(code.alpha, code.n as u64 - 1, &mut scratch)
}

/// Test `sigma(alpha^{-j})` for `j = 1 .. n` (position `n` is position 0),
/// updating each term `sigma_k alpha^{-jk}` with one multiplication per step.
pub fn chien_search(sigma: &LocatorPoly, code: &CodeSpec, ctr: &mut OpCount) -> RootSet {
    let f = &*code.locator_field;
    let deg = sigma.degree();
    let a_inv = alpha_inverse(code);
    // alpha^{-k}: code constants
    let mut steps = Vec::with_capacity(deg + 1);
    let mut scratch = OpCount::default();
    let mut s = f.one();
    for _ in 0..=deg {
        steps.push(s);
        s = f.mul(s, a_inv, &mut scratch);
    }
    let mut terms: Vec<FieldElement> = (0..=deg).map(|k| sigma.coeff(k)).collect();
    let mut stats = SearchStats::default();
    let mut found = Vec::new();
    for j in 1..=code.n {
        let mut sum = terms[0];
        for k in 1..=deg {
            terms[k] = f.mul_charged(terms[k], steps[k], ctr);
            sum = f.add(sum, terms[k]);
        }
        stats.position_tests += 1;
        if sum.is_zero() {
            let pos = j % code.n;
            found.push((pos, f.pow(code.alpha, pos as u64, &mut scratch)));
        }
    }
    RootSet::from_pairs(found, stats)
}

/// Outcome of one Cantor-Zassenhaus splitting step.
#[derive(Debug, Clone)]
pub struct SplitStep {
    /// `a(z) = b(z)^{(q-1)/3} mod f(z)`
    pub a: Poly,
    /// `gcd(f, a)`, `gcd(f, a + 1)`, `gcd(f, a + rho)`, `gcd(f, a + rho^2)`
    pub gcds: [Poly; 4],
}

impl SplitStep {
    /// Factors of positive degree.
    pub fn nontrivial(&self) -> impl Iterator<Item = &Poly> {
        self.gcds.iter().filter(|g| g.degree().is_some_and(|d| d > 0))
    }
}

/// Characteristic-2 Cantor-Zassenhaus context for a field of even degree.
#[derive(Debug, Clone)]
pub struct CzSplitter {
    field: FieldRef,
    exponent: u64,
    rho: FieldElement,
}

impl CzSplitter {
    pub fn new(field: &FieldRef) -> Result<Self, RootsError> {
        if field.characteristic() != 2 || field.degree() % 2 != 0 {
            return Err(RootsError::OddDegree(field.degree()));
        }
        let exponent = (field.order() - 1) / 3;
        let mut scratch = OpCount::default();
        let rho = field.pow(field.generator(), exponent, &mut scratch);
        Ok(CzSplitter { field: field.clone(), exponent, rho })
    }

    /// Primitive cube root of unity `alpha^{(q-1)/3}`.
    pub fn rho(&self) -> FieldElement {
        self.rho
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// One split of `f` with the given `b(z)`.
    pub fn split_once(&self, f: &Poly, b: &Poly, ctr: &mut OpCount) -> Result<SplitStep, RootsError> {
        let fld = &*self.field;
        let a = b.mod_exp(self.exponent, f, ctr)?;
        let rho2 = fld.mul(self.rho, self.rho, ctr);
        let shifts = [fld.zero(), fld.one(), self.rho, rho2];
        let mut gcds = Vec::with_capacity(4);
        for c in shifts {
            gcds.push(Poly::gcd(f, &a.add_constant(c), ctr)?);
        }
        let gcds: [Poly; 4] = gcds.try_into().expect("four shifts");
        Ok(SplitStep { a, gcds })
    }

    /// All roots of a monic squarefree `f` that splits over the field.
    /// Candidates are `b = z`, then `z + alpha^e` for distinct seeded `e`.
    pub fn roots(&self, f: &Poly, seed: u64, ctr: &mut OpCount, stats: &mut SearchStats) -> Result<Vec<FieldElement>, RootsError> {
        let Some(deg) = f.degree() else {
            return Err(RootsError::NotSplit);
        };
        if deg == 0 {
            return Ok(Vec::new());
        }
        let g = Poly::gcd(f, &f.derivative(), ctr)?;
        if g.degree() != Some(0) {
            return Err(RootsError::NotSquarefree);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(deg);
        self.split_rec(&f.monic(ctr), &mut rng, ctr, stats, &mut out)?;
        Ok(out)
    }

    fn split_rec(
        &self,
        f: &Poly,
        rng: &mut ChaCha8Rng,
        ctr: &mut OpCount,
        stats: &mut SearchStats,
        out: &mut Vec<FieldElement>,
    ) -> Result<(), RootsError> {
        let fld = &self.field;
        let deg = f.degree().expect("nonzero factor");
        if deg == 1 {
            out.push(fld.neg(f.coeff(0)));
            return Ok(());
        }
        let q1 = fld.order() - 1;
        let mut tried = BTreeSet::new();
        for attempt in 0..CZ_ATTEMPT_CAP {
            let b = if attempt == 0 {
                Poly::x(fld)
            } else {
                let mut e = rng.gen_range(0..q1);
                while tried.len() < q1 as usize && !tried.insert(e) {
                    e = rng.gen_range(0..q1);
                }
                let mut scratch = OpCount::default();
                Poly::linear(fld, fld.pow(fld.generator(), e, &mut scratch))
            };
            stats.cz_attempts += 1;
            let step = self.split_once(f, &b, ctr)?;
            let total: usize = step.gcds.iter().map(|g| g.degree().unwrap_or(0)).sum();
            if total != deg {
                // the four classes partition the roots of a split polynomial
                return Err(RootsError::NotSplit);
            }
            if step.nontrivial().all(|g| g.degree() == Some(deg)) {
                continue;
            }
            for factor in step.nontrivial() {
                self.split_rec(factor, rng, ctr, stats, out)?;
            }
            return Ok(());
        }
        Err(RootsError::AttemptCapExceeded(CZ_ATTEMPT_CAP))
    }
}

/// Roots of `f` over an even-degree binary field.
pub fn cz_factor(f: &Poly, field: &FieldRef, seed: u64, ctr: &mut OpCount) -> Result<Vec<FieldElement>, RootsError> {
    let mut stats = SearchStats::default();
    CzSplitter::new(field)?.roots(f, seed, ctr, &mut stats)
}

/// Giant steps `alpha^{kappa * stride} -> kappa`, `stride = ceil(sqrt(n))`.
#[derive(Debug, Clone)]
pub struct BsgsTable {
    pub stride: u64,
    entries: HashMap<u64, u64>,
    alpha_inv: FieldElement,
    n: u64,
}

impl BsgsTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, e: FieldElement) -> Option<u64> {
        self.entries.get(&e.value()).copied()
    }
}

fn ceil_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

pub fn bsgs_table(code: &CodeSpec) -> BsgsTable {
    let f = &*code.locator_field;
    let n = code.n as u64;
    let stride = ceil_sqrt(n);
    let mut scratch = OpCount::default();
    let giant = f.pow(code.alpha, stride, &mut scratch);
    let mut entries = HashMap::with_capacity(stride as usize);
    let mut e = f.one();
    for kappa in 0..stride {
        entries.insert(e.value(), kappa);
        e = f.mul(e, giant, &mut scratch);
    }
    BsgsTable { stride, entries, alpha_inv: alpha_inverse(code), n }
}

/// Discrete logarithm with the number of table lookups it took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscreteLog {
    pub exponent: u64,
    pub lookups: u64,
}

/// `l` in `[0, n)` with `alpha^l = b`: look up `b alpha^{-j}` for
/// `j = 0, 1, ...` and return `j + kappa * stride` on the first hit.
pub fn bsgs_log(b: FieldElement, table: &BsgsTable, code: &CodeSpec, ctr: &mut OpCount) -> Result<DiscreteLog, RootsError> {
    let f = &*code.locator_field;
    if b.is_zero() {
        return Err(RootsError::NotInGroup);
    }
    let mut a = b;
    for j in 0..table.stride {
        if j > 0 {
            a = f.mul(a, table.alpha_inv, ctr);
        }
        if let Some(kappa) = table.lookup(a) {
            return Ok(DiscreteLog { exponent: (j + kappa * table.stride) % table.n, lookups: j + 1 });
        }
    }
    Err(RootsError::NotInGroup)
}

/// Positions of the errors described by `sigma`, by either method. Fails
/// when the number of distinct roots in the group differs from `deg sigma`.
pub fn locate_errors(
    sigma: &LocatorPoly,
    code: &CodeSpec,
    method: RootMethod,
    seed: u64,
    ctr: &mut OpCount,
) -> Result<RootSet, RootsError> {
    let degree = sigma.degree();
    let set = match method {
        RootMethod::Chien => chien_search(sigma, code, ctr),
        RootMethod::CzBsgs => {
            let mut stats = SearchStats::default();
            let roots = cz_roots(sigma, code, seed, ctr, &mut stats)?;
            let table = bsgs_table(code);
            stats.table_size = table.len() as u64;
            let mut pairs = Vec::with_capacity(roots.len());
            for r in roots {
                let log = bsgs_log(r, &table, code, ctr)?;
                stats.baby_steps += log.lookups;
                pairs.push((log.exponent as usize, r));
            }
            RootSet::from_pairs(pairs, stats)
        }
    };
    let distinct: BTreeSet<usize> = set.positions.iter().copied().collect();
    if set.positions.len() != degree || distinct.len() != degree {
        return Err(RootsError::RootCountMismatch { found: distinct.len(), degree });
    }
    Ok(set)
}

/// Roots of the reciprocal locator in the locator field, going through the
/// quadratic extension when the degree is odd.
fn cz_roots(
    sigma: &LocatorPoly,
    code: &CodeSpec,
    seed: u64,
    ctr: &mut OpCount,
    stats: &mut SearchStats,
) -> Result<Vec<FieldElement>, RootsError> {
    let f = &code.locator_field;
    let recip = reciprocal_locator(sigma);
    if recip.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    if f.degree() % 2 == 0 {
        return CzSplitter::new(f)?.roots(&recip, seed, ctr, stats);
    }
    let emb = embed_quadratic(f)?;
    let lifted = Poly::new(emb.big(), recip.coeffs().iter().map(|&c| emb.apply(c)).collect());
    let roots = CzSplitter::new(emb.big())?.roots(&lifted, seed, ctr, stats)?;
    roots.into_iter().map(|r| emb.preimage(r).ok_or(RootsError::NotSplit)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{bch_code, rs_code};
    use crate::gf::Field;
    use crate::locator::LocatorPoly;

    fn fixture_code() -> CodeSpec {
        bch_code(&Field::binary(6, Some(&[6, 4, 3, 1, 0])).unwrap(), 63, 7).unwrap()
    }

    fn locator_for(code: &CodeSpec, positions: &[u64]) -> LocatorPoly {
        let f = &code.locator_field;
        let mut ctr = OpCount::default();
        let mut sigma = Poly::one(f);
        for &p in positions {
            let x = f.pow(code.alpha, p, &mut ctr);
            sigma = sigma.mul(&Poly::new(f, vec![f.one(), x]), &mut ctr);
        }
        LocatorPoly { sigma }
    }

    #[test]
    fn chien_single_error() {
        let code = fixture_code();
        for j in [0u64, 1, 31, 62] {
            let mut ctr = OpCount::default();
            let set = chien_search(&locator_for(&code, &[j]), &code, &mut ctr);
            assert_eq!(set.positions, vec![j as usize]);
            assert_eq!(set.stats.position_tests, 63);
            assert_eq!(ctr.mul, 63);
        }
    }

    #[test]
    fn chien_finds_nothing_for_irreducible_quadratic() {
        let f = Field::binary(4, Some(&[4, 1, 0])).unwrap();
        let code = rs_code(&f, 5).unwrap();
        let mut ctr = OpCount::default();
        // exhaustive: pick 1 + c1 z + c2 z^2 with no root in GF(16)
        let sigma = f
            .elements()
            .skip(1)
            .flat_map(|c1| f.elements().skip(1).map(move |c2| (c1, c2)))
            .map(|(c1, c2)| Poly::new(&f, vec![f.one(), c1, c2]))
            .find(|p| f.elements().all(|z| !p.eval(&f, z, &mut OpCount::default()).is_zero()))
            .unwrap();
        let set = chien_search(&LocatorPoly { sigma: sigma.clone() }, &code, &mut ctr);
        assert!(set.positions.is_empty());
        let err = locate_errors(&LocatorPoly { sigma }, &code, RootMethod::CzBsgs, 1, &mut ctr).unwrap_err();
        assert!(matches!(err, RootsError::NotSplit | RootsError::AttemptCapExceeded(_)));
    }

    #[test]
    fn cz_degree_one_needs_no_exponentiation() {
        let f = Field::binary(6, None).unwrap();
        let c = f.element(37).unwrap();
        let mut ctr = OpCount::default();
        assert_eq!(cz_factor(&Poly::linear(&f, c), &f, 0, &mut ctr).unwrap(), vec![c]);
        assert_eq!(ctr.mul, 0);
    }

    #[test]
    fn cz_roundtrip_random_products() {
        let f = Field::binary(6, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut ctr = OpCount::default();
        for trial in 0..50 {
            let mut roots = BTreeSet::new();
            while roots.len() < 4 {
                roots.insert(rng.gen_range(1..64u64));
            }
            let mut p = Poly::one(&f);
            for &r in &roots {
                p = p.mul(&Poly::linear(&f, f.element(r).unwrap()), &mut ctr);
            }
            let mut got: Vec<u64> = cz_factor(&p, &f, trial, &mut ctr).unwrap().iter().map(|e| e.value()).collect();
            got.sort();
            assert_eq!(got, roots.iter().copied().collect::<Vec<_>>());
            // product of the factors gives back the input
            let back = got.iter().fold(Poly::one(&f), |acc, &r| acc.mul(&Poly::linear(&f, f.element(r).unwrap()), &mut ctr));
            assert_eq!(back, p);
        }
    }

    #[test]
    fn cz_rejects_repeated_roots_and_odd_degree() {
        let f = Field::binary(6, None).unwrap();
        let mut ctr = OpCount::default();
        let l = Poly::linear(&f, f.element(5).unwrap());
        let sq = l.mul(&l, &mut ctr).mul(&Poly::linear(&f, f.one()), &mut ctr);
        assert_eq!(cz_factor(&sq, &f, 0, &mut ctr), Err(RootsError::NotSquarefree));
        let g8 = Field::binary(3, None).unwrap();
        assert_eq!(cz_factor(&Poly::x(&g8), &g8, 0, &mut ctr), Err(RootsError::OddDegree(3)));
    }

    #[test]
    fn cz_is_deterministic_under_seed() {
        let f = Field::binary(8, None).unwrap();
        let mut base = OpCount::default();
        let mut p = Poly::one(&f);
        for r in [3u64, 90, 101, 200, 17, 44] {
            p = p.mul(&Poly::linear(&f, f.element(r).unwrap()), &mut base);
        }
        let run = |seed| {
            let mut c = OpCount::default();
            let mut s = SearchStats::default();
            let r = CzSplitter::new(&f).unwrap().roots(&p, seed, &mut c, &mut s).unwrap();
            (r, c, s)
        };
        assert_eq!(run(99), run(99));
    }

    #[test]
    fn bsgs_tables() {
        let code = fixture_code();
        let t = bsgs_table(&code);
        assert_eq!((t.stride, t.len()), (8, 8));
        let f15 = Field::binary(4, None).unwrap();
        let rs = rs_code(&f15, 3).unwrap();
        let t15 = bsgs_table(&rs);
        assert_eq!(t15.len(), 4);
        let mut ctr = OpCount::default();
        for k in 0..4u64 {
            let key = f15.pow(rs.alpha, 4 * k, &mut ctr);
            assert_eq!(t15.lookup(key), Some(k));
        }
    }

    #[test]
    fn bsgs_examples_and_exhaustive_gf64() {
        let code = fixture_code();
        let t = bsgs_table(&code);
        let f = &code.locator_field;
        let mut ctr = OpCount::default();
        assert_eq!(bsgs_log(f.one(), &t, &code, &mut ctr).unwrap().exponent, 0);
        assert_eq!(bsgs_log(code.alpha, &t, &code, &mut ctr).unwrap().exponent, 1);
        for l in 0..63u64 {
            let b = f.pow(code.alpha, l, &mut ctr);
            let log = bsgs_log(b, &t, &code, &mut ctr).unwrap();
            assert_eq!(log.exponent, l);
            assert!(log.lookups <= 8);
        }
        assert_eq!(bsgs_log(f.zero(), &t, &code, &mut ctr), Err(RootsError::NotInGroup));
    }

    #[test]
    fn bsgs_detects_elements_outside_subgroup() {
        let f = Field::binary(6, None).unwrap();
        let code = bch_code(&f, 21, 5).unwrap();
        let t = bsgs_table(&code);
        let mut ctr = OpCount::default();
        // the field generator has order 63, not in the order-21 subgroup
        assert_eq!(bsgs_log(f.generator(), &t, &code, &mut ctr), Err(RootsError::NotInGroup));
    }

    #[test]
    fn methods_agree_on_every_single_error() {
        let code = fixture_code();
        for j in 0..63u64 {
            let loc = locator_for(&code, &[j]);
            let mut ctr = OpCount::default();
            let a = locate_errors(&loc, &code, RootMethod::Chien, 0, &mut ctr).unwrap();
            let b = locate_errors(&loc, &code, RootMethod::CzBsgs, 0, &mut ctr).unwrap();
            assert_eq!(a.positions, vec![j as usize]);
            assert_eq!(a.positions, b.positions);
            assert_eq!(a.roots, b.roots);
        }
    }

    #[test]
    fn odd_degree_field_uses_quadratic_extension() {
        let f = Field::binary(5, None).unwrap();
        let code = bch_code(&f, 31, 7).unwrap();
        let loc = locator_for(&code, &[2, 11, 29]);
        let mut ctr = OpCount::default();
        let a = locate_errors(&loc, &code, RootMethod::Chien, 0, &mut ctr).unwrap();
        let b = locate_errors(&loc, &code, RootMethod::CzBsgs, 4, &mut ctr).unwrap();
        assert_eq!(a.positions, vec![2, 11, 29]);
        assert_eq!(a.positions, b.positions);
    }

    #[test]
    fn too_few_roots_signals_failure() {
        let code = fixture_code();
        let f = &code.locator_field;
        let mut ctr = OpCount::default();
        // two roots in the group times an irreducible quadratic factor
        let base = locator_for(&code, &[5, 40]).sigma;
        let quad = f
            .elements()
            .skip(1)
            .map(|c| Poly::new(f, vec![f.one(), f.one(), c]))
            .find(|p| f.elements().all(|z| !p.eval(f, z, &mut OpCount::default()).is_zero()))
            .unwrap();
        let sigma = LocatorPoly { sigma: base.mul(&quad, &mut ctr) };
        for method in [RootMethod::Chien, RootMethod::CzBsgs] {
            assert!(locate_errors(&sigma, &code, method, 3, &mut ctr).is_err(), "{method}");
        }
    }
}

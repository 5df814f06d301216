//! Seeded corrupt-and-decode sweeps with per-stage operation counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{CodeDescriptor, CodeSpec, Word};
use crate::evaluate::{EvalError, SyndromeMethod};
use crate::gf::{FieldElement, OpCount};
use crate::pipeline::{decode, DecodeConfig, DecodeReport, ErrorPattern, StageCounts};
use crate::roots::RootMethod;

pub const CSV_HEADER: &str = "n,k,t,stage,method,mul,sq,inv,trials,mean_mul";

/// Random stream for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_message(code: &CodeSpec, rng: &mut impl Rng) -> Vec<FieldElement> {
    let f = &code.symbol_field;
    (0..code.k).map(|_| f.element(rng.gen_range(0..f.order())).expect("in range")).collect()
}

/// `weight` distinct positions with nonzero magnitudes, sorted by position.
pub fn random_pattern(code: &CodeSpec, weight: usize, rng: &mut impl Rng) -> ErrorPattern {
    let f = &code.symbol_field;
    let mut positions = rand::seq::index::sample(rng, code.n, weight).into_vec();
    positions.sort_unstable();
    let magnitudes = (0..weight).map(|_| f.element(rng.gen_range(1..f.order())).expect("in range")).collect();
    ErrorPattern { positions, magnitudes }
}

/// One transmitted codeword and its corruption.
#[derive(Debug, Clone)]
pub struct Trial {
    pub codeword: Word,
    pub pattern: ErrorPattern,
    pub received: Word,
    /// Seed handed to the decoder.
    pub decode_seed: u64,
}

/// Trial `index`: random message, systematic encoding, `weight` errors.
pub fn make_trial(code: &CodeSpec, seed: u64, index: u64, weight: usize) -> Trial {
    let mut rng = trial_rng(seed, index);
    let msg = random_message(code, &mut rng);
    let codeword = code.encode_systematic(&msg, &mut OpCount::default()).expect("message has length k");
    let pattern = random_pattern(code, weight, &mut rng);
    let received = code.inject_errors(&codeword, &pattern).expect("valid pattern");
    Trial { codeword, pattern, received, decode_seed: rng.gen() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub stage: String,
    pub method: String,
    pub mul: u64,
    pub sq: u64,
    pub inv: u64,
    pub trials: u64,
    /// `mul / trials` as a reduced fraction, or an integer.
    pub mean_mul: String,
}

impl BenchRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.n, self.k, self.t, self.stage, self.method, self.mul, self.sq, self.inv, self.trials, self.mean_mul
        )
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `num / den` in lowest terms.
pub fn exact_mean(num: u64, den: u64) -> String {
    let g = gcd(num, den).max(1);
    if den / g == 1 {
        format!("{}", num / g)
    } else {
        format!("{}/{}", num / g, den / g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchGrid {
    pub codes: Vec<String>,
    pub syndrome_methods: Vec<SyndromeMethod>,
    pub root_methods: Vec<RootMethod>,
    pub trials: u64,
    pub seed: u64,
    /// Errors per trial; `None` means `t`.
    pub weight: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BenchOutput {
    pub rows: Vec<BenchRow>,
    /// Cells that could not run, with the reason.
    pub errors: Vec<String>,
}

impl BenchOutput {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.csv_line());
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialize")
    }
}

/// Stage totals over `trials` corrupt-and-decode runs of one code.
pub fn bench_cell(code: &CodeSpec, cfg: &DecodeConfig, trials: u64, seed: u64, weight: usize) -> Result<StageCounts, EvalError> {
    let per: Vec<StageCounts> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let trial = make_trial(code, seed, i, weight);
            let cfg = DecodeConfig { seed: trial.decode_seed, ..*cfg };
            decode(code, &trial.received, &cfg).map(|r| r.counts)
        })
        .collect::<Result<_, _>>()?;
    let mut sum = StageCounts::default();
    for c in per {
        sum.syndromes += c.syndromes;
        sum.bm += c.bm;
        sum.roots += c.roots;
        sum.forney += c.forney;
    }
    Ok(sum)
}

pub fn run_bench(grid: &BenchGrid) -> BenchOutput {
    let mut out = BenchOutput::default();
    if grid.trials == 0 {
        return out;
    }
    for desc in &grid.codes {
        let code = match CodeDescriptor::parse(desc).and_then(|d| d.build()) {
            Ok(c) => c,
            Err(e) => {
                out.errors.push(format!("{desc}: {e}"));
                continue;
            }
        };
        let weight = grid.weight.unwrap_or(code.t).min(code.n);
        for &sm in &grid.syndrome_methods {
            for &rm in &grid.root_methods {
                let cfg = DecodeConfig { syndrome_method: sm, root_method: rm, seed: 0, conjugacy: true };
                let sum = match bench_cell(&code, &cfg, grid.trials, grid.seed, weight) {
                    Ok(s) => s,
                    Err(e) => {
                        out.errors.push(format!("{desc} {sm}/{rm}: {e}"));
                        continue;
                    }
                };
                let method = format!("{sm}/{rm}");
                for (stage, c) in [
                    ("syndromes", sum.syndromes),
                    ("bm", sum.bm),
                    ("roots", sum.roots),
                    ("forney", sum.forney),
                    ("total", sum.total()),
                ] {
                    out.rows.push(BenchRow {
                        n: code.n,
                        k: code.k,
                        t: code.t,
                        stage: stage.to_string(),
                        method: method.clone(),
                        mul: c.mul,
                        sq: c.sq,
                        inv: c.inv,
                        trials: grid.trials,
                        mean_mul: exact_mean(c.mul, grid.trials),
                    });
                }
            }
        }
    }
    out.rows.sort_by(|a, b| (a.n, a.k, &a.method, stage_rank(&a.stage)).cmp(&(b.n, b.k, &b.method, stage_rank(&b.stage))));
    out
}

fn stage_rank(s: &str) -> usize {
    ["syndromes", "bm", "roots", "forney", "total"].iter().position(|x| *x == s).unwrap_or(usize::MAX)
}

/// A roundtrip trial whose decode did not return the transmitted word and
/// the injected pattern.
#[derive(Debug, Clone)]
pub struct Violation {
    pub trial: u64,
    pub seed: u64,
    pub detail: String,
}

/// Roundtrip over `trials` random patterns of weight `0 ..= t`, with any
/// decoder of the same shape as [`decode`].
pub fn roundtrip_with<D>(code: &CodeSpec, trials: u64, seed: u64, cfg: &DecodeConfig, decoder: D) -> Vec<Violation>
where
    D: Fn(&CodeSpec, &Word, &DecodeConfig) -> Result<DecodeReport, EvalError> + Sync,
{
    let mut found: Vec<Violation> = (0..trials)
        .into_par_iter()
        .filter_map(|i| {
            let weight = trial_rng(seed ^ 0x5eed, i).gen_range(0..=code.t);
            let trial = make_trial(code, seed, i, weight);
            let cfg = DecodeConfig { seed: trial.decode_seed, ..*cfg };
            let detail = match decoder(code, &trial.received, &cfg) {
                Err(e) => Some(format!("decoder error: {e}")),
                Ok(rep) if !rep.is_success() => Some(format!("decode failure on {weight} errors: {:?}", rep.failure)),
                Ok(rep) if rep.corrected != trial.codeword => Some(format!("wrong codeword on {weight} errors")),
                Ok(rep) if rep.pattern.as_ref() != Some(&trial.pattern) => Some("wrong error pattern".to_string()),
                Ok(_) => None,
            };
            detail.map(|detail| Violation { trial: i, seed, detail })
        })
        .collect();
    found.sort_by_key(|v| v.trial);
    found
}

pub fn roundtrip(code: &CodeSpec, trials: u64, seed: u64, cfg: &DecodeConfig) -> Vec<Violation> {
    roundtrip_with(code, trials, seed, cfg, decode)
}

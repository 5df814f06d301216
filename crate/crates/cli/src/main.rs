use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gpz::bench::{self, BenchGrid};
use gpz::codec::hex;
use gpz::evaluate::syndromes_with;
use gpz::roots::{bsgs_table, locate_errors};
use gpz::{
    berlekamp_massey, decode, reciprocal_locator, CodeDescriptor, CodeKind, CodeSpec, DecodeConfig, DecodeReport, OpCount,
    RootMethod, StageCounts, SyndromeMethod, Word,
};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gpz", version, about = "Encode, corrupt and decode cyclic codes with counted field arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Code construction.
    Code {
        #[command(subcommand)]
        action: CodeAction,
    },
    /// Systematically encode messages (k symbols per line).
    Encode(EncodeArgs),
    /// Add random errors to words.
    Corrupt(CorruptArgs),
    /// Compute syndromes and their multiplication counts.
    Syndromes(SyndromeArgs),
    /// Decode words.
    Decode(DecodeArgs),
    /// Locate error positions only, optionally tracing the root finder.
    Locate(LocateArgs),
    /// Corrupt-and-decode sweep emitting count tables.
    Bench(BenchArgs),
    /// Check that decode(encode(m) + e) == encode(m) for random m and e with |e| <= t.
    Roundtrip(RoundtripArgs),
}

#[derive(Subcommand)]
enum CodeAction {
    /// Build a BCH or Reed-Solomon code and print its parameters.
    New(CodeNewArgs),
}

#[derive(Args)]
struct CodeNewArgs {
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long)]
    m: u32,
    /// Block length (defaults to p^m - 1).
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    delta: u64,
    /// Reed-Solomon code over GF(p^m) instead of a BCH code over GF(p).
    #[arg(long)]
    rs: bool,
    /// Field modulus, e.g. "6,4,3,1,0" for x^6+x^4+x^3+x+1.
    #[arg(long)]
    modulus: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CodeArg {
    /// Code descriptor, e.g. "bch/m=6/n=63/delta=7/modulus=6,4,3,1,0".
    #[arg(long)]
    code: String,
}

impl CodeArg {
    fn build(&self) -> Result<CodeSpec> {
        let desc = CodeDescriptor::parse(&self.code)?;
        Ok(desc.build()?)
    }
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    code: CodeArg,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CorruptArgs {
    #[command(flatten)]
    code: CodeArg,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Errors per word (defaults to t).
    #[arg(long)]
    errors: Option<usize>,
    #[arg(long, env = "GPZ_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the injected patterns as JSON.
    #[arg(long)]
    patterns: Option<PathBuf>,
}

#[derive(Args)]
struct SyndromeArgs {
    #[command(flatten)]
    code: CodeArg,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "frobenius")]
    method: SyndromeMethod,
    #[arg(long)]
    counts: Option<PathBuf>,
    /// Evaluate every syndrome instead of squaring lower ones.
    #[arg(long)]
    no_conjugacy: bool,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArg,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value = "frobenius")]
    syndromes: SyndromeMethod,
    #[arg(long, default_value = "cz")]
    roots: RootMethod,
    #[arg(long, env = "GPZ_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    no_conjugacy: bool,
    /// Print syndromes, locator and positions for each word on stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct LocateArgs {
    #[command(flatten)]
    code: CodeArg,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "cz")]
    method: RootMethod,
    #[arg(long, env = "GPZ_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Code descriptor; repeat for several codes.
    #[arg(long = "code")]
    codes: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "horner,frobenius")]
    syndromes: Vec<SyndromeMethod>,
    #[arg(long, value_delimiter = ',', default_value = "chien,cz")]
    roots: Vec<RootMethod>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, env = "GPZ_SEED", default_value_t = 0)]
    seed: u64,
    /// Errors per trial (defaults to t).
    #[arg(long)]
    weight: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct RoundtripArgs {
    #[command(flatten)]
    code: CodeArg,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, env = "GPZ_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "frobenius")]
    syndromes: SyndromeMethod,
    #[arg(long, default_value = "cz")]
    roots: RootMethod,
    /// Corrupt one symbol of every decoder output (negative control).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn read_words(code: &CodeSpec, path: &Path, len: usize) -> Result<Vec<Word>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            let symbols = hex::parse_symbols(&code.symbol_field, len, l).with_context(|| format!("{}:{}", path.display(), i + 1))?;
            Ok(Word { symbols })
        })
        .collect()
}

fn write_words(code: &CodeSpec, words: &[Word], out: Option<&Path>) -> Result<()> {
    let mut text = String::new();
    for w in words {
        text.push_str(&hex::format_symbols(&code.symbol_field, &w.symbols)?);
        text.push('\n');
    }
    write_text(&text, out)
}

fn write_text(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_json(value: &Value, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(&text, Some(path))
}

fn cmd_code_new(a: &CodeNewArgs) -> Result<()> {
    let desc = CodeDescriptor {
        kind: if a.rs { CodeKind::Rs } else { CodeKind::Bch },
        p: a.p,
        m: a.m,
        n: a.n,
        delta: a.delta,
        modulus: a.modulus.clone(),
    };
    let code = desc.build()?;
    let summary = code.summary();
    if a.json {
        let mut v = serde_json::to_value(&summary)?;
        v["descriptor"] = json!(desc.to_string());
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        print!("{summary}");
        println!("descriptor: {desc}");
    }
    Ok(())
}

fn cmd_encode(a: &EncodeArgs) -> Result<()> {
    let code = a.code.build()?;
    let msgs = read_words(&code, &a.input, code.k)?;
    let mut ctr = OpCount::default();
    let words = msgs.iter().map(|m| code.encode_systematic(&m.symbols, &mut ctr)).collect::<Result<Vec<_>, _>>()?;
    write_words(&code, &words, a.out.as_deref())
}

fn cmd_corrupt(a: &CorruptArgs) -> Result<()> {
    let code = a.code.build()?;
    let words = read_words(&code, &a.input, code.n)?;
    let weight = a.errors.unwrap_or(code.t);
    if weight > code.n {
        bail!("cannot place {weight} errors in a word of length {}", code.n);
    }
    let f = &code.symbol_field;
    let mut out = Vec::with_capacity(words.len());
    let mut patterns = Vec::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        let mut rng = bench::trial_rng(a.seed, i as u64);
        let pattern = bench::random_pattern(&code, weight, &mut rng);
        out.push(code.inject_errors(w, &pattern)?);
        patterns.push(json!({
            "positions": pattern.positions,
            "magnitudes": pattern.magnitudes.iter().map(|&m| f.format(m)).collect::<Vec<_>>(),
        }));
    }
    if let Some(p) = &a.patterns {
        write_json(&Value::Array(patterns), p)?;
    }
    write_words(&code, &out, a.out.as_deref())
}

fn cmd_syndromes(a: &SyndromeArgs) -> Result<()> {
    let code = a.code.build()?;
    let words = read_words(&code, &a.input, code.n)?;
    let f = &code.locator_field;
    let mut per = vec![OpCount::default(); 2 * code.t];
    let mut text = String::new();
    for w in &words {
        let run = syndromes_with(&code, w, a.method, !a.no_conjugacy)?;
        let vals: Vec<String> = run.syndromes.values.iter().map(|&s| f.format(s)).collect();
        text.push_str(&vals.join(" "));
        text.push('\n');
        for (acc, c) in per.iter_mut().zip(&run.per_syndrome) {
            *acc += *c;
        }
    }
    write_text(&text, None)?;
    if let Some(p) = &a.counts {
        let total: OpCount = per.iter().copied().sum();
        let v = json!({
            "method": a.method.to_string(),
            "per_syndrome_mul": per.iter().map(|c| c.mul).collect::<Vec<_>>(),
            "total_mul": total.mul,
            "total_sq": total.sq,
        });
        write_json(&v, p)?;
    }
    Ok(())
}

fn counts_json(c: &StageCounts) -> Value {
    json!({
        "syndromes": c.syndromes,
        "bm": c.bm,
        "roots": c.roots,
        "forney": c.forney,
        "total": c.total(),
    })
}

fn report_json(code: &CodeSpec, index: usize, rep: &DecodeReport) -> Value {
    let f = &code.symbol_field;
    let (positions, magnitudes) = match &rep.pattern {
        Some(p) => (json!(p.positions), json!(p.magnitudes.iter().map(|&m| f.format(m)).collect::<Vec<_>>())),
        None => (Value::Null, Value::Null),
    };
    json!({
        "index": index,
        "status": rep.status,
        "positions": positions,
        "magnitudes": magnitudes,
        "failure": rep.failure.as_ref().map(|e| e.to_string()),
        "counts": counts_json(&rep.counts),
    })
}

fn trace_report(code: &CodeSpec, index: usize, rep: &DecodeReport) {
    let f = &code.locator_field;
    let s: Vec<String> = rep.syndromes.values.iter().map(|&v| f.format(v)).collect();
    eprintln!("word {index}: S = [{}]", s.join(", "));
    if let Some(l) = &rep.locator {
        let c: Vec<String> = l.sigma.coeffs().iter().map(|&v| f.format(v)).collect();
        eprintln!("word {index}: sigma (low to high) = [{}]", c.join(", "));
    }
    if let Some(r) = &rep.roots {
        let roots: Vec<String> = r.roots.iter().map(|&v| f.format(v)).collect();
        eprintln!("word {index}: roots [{}] at positions {:?}", roots.join(", "), r.positions);
    }
    match &rep.failure {
        Some(e) => eprintln!("word {index}: failure: {e}"),
        None => eprintln!("word {index}: {:?}", rep.status),
    }
}

fn cmd_decode(a: &DecodeArgs) -> Result<ExitCode> {
    let code = a.code.build()?;
    let words = read_words(&code, &a.input, code.n)?;
    let reports = words
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            let cfg = DecodeConfig {
                syndrome_method: a.syndromes,
                root_method: a.roots,
                seed: a.seed.wrapping_add(i as u64),
                conjugacy: !a.no_conjugacy,
            };
            decode(&code, w, &cfg)
        })
        .collect::<Result<Vec<_>, _>>()?;
    if a.trace {
        for (i, rep) in reports.iter().enumerate() {
            trace_report(&code, i, rep);
        }
    }
    let corrected: Vec<Word> = reports.iter().map(|r| r.corrected.clone()).collect();
    write_words(&code, &corrected, a.out.as_deref())?;
    let failures = reports.iter().filter(|r| !r.is_success()).count();
    if let Some(p) = &a.report {
        let mut totals = StageCounts::default();
        for r in &reports {
            totals.syndromes += r.counts.syndromes;
            totals.bm += r.counts.bm;
            totals.roots += r.counts.roots;
            totals.forney += r.counts.forney;
        }
        let v = json!({
            "code": a.code.code,
            "syndromes": a.syndromes.to_string(),
            "roots": a.roots.to_string(),
            "seed": a.seed,
            "words": reports.iter().enumerate().map(|(i, r)| report_json(&code, i, r)).collect::<Vec<_>>(),
            "successes": reports.len() - failures,
            "failures": failures,
            "totals": counts_json(&totals),
        });
        write_json(&v, p)?;
    }
    if failures > 0 {
        eprintln!("{failures} of {} words could not be decoded", reports.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_locate(a: &LocateArgs) -> Result<()> {
    let code = a.code.build()?;
    let words = read_words(&code, &a.input, code.n)?;
    let f = &code.locator_field;
    for (i, w) in words.iter().enumerate() {
        let s = syndromes_with(&code, w, SyndromeMethod::Horner, true)?.syndromes;
        let mut bm = OpCount::default();
        let sigma = berlekamp_massey(f, &s, &mut bm);
        let mut ctr = OpCount::default();
        let seed = a.seed.wrapping_add(i as u64);
        match locate_errors(&sigma, &code, a.method, seed, &mut ctr) {
            Ok(set) => {
                println!("word {i}: positions {:?}", set.positions);
                if a.trace {
                    println!("  reciprocal locator: {}", reciprocal_locator(&sigma));
                    for r in &set.roots {
                        println!("  factor z + {}", f.format(f.neg(*r)));
                    }
                    if a.method == RootMethod::CzBsgs {
                        let table = bsgs_table(&code);
                        println!("  bsgs stride {} table {}", table.stride, table.len());
                        for (&r, &p) in set.roots.iter().zip(&set.positions) {
                            println!("  log {} = {p}", f.format(r));
                        }
                    }
                    println!(
                        "  counts: mul {} sq {} inv {}; position tests {}, baby steps {}, cz attempts {}",
                        ctr.mul, ctr.sq, ctr.inv, set.stats.position_tests, set.stats.baby_steps, set.stats.cz_attempts
                    );
                }
            }
            Err(e) => println!("word {i}: failure: {e}"),
        }
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs) -> Result<()> {
    let grid = BenchGrid {
        codes: a.codes.clone(),
        syndrome_methods: a.syndromes.clone(),
        root_methods: a.roots.clone(),
        trials: a.trials,
        seed: a.seed,
        weight: a.weight,
    };
    let out = bench::run_bench(&grid);
    for e in &out.errors {
        eprintln!("skipped: {e}");
    }
    if let Some(p) = &a.json {
        write_text(&(out.to_json() + "\n"), Some(p))?;
    }
    match &a.csv {
        Some(p) => write_text(&out.to_csv(), Some(p)),
        None if a.json.is_none() => write_text(&out.to_csv(), None),
        None => Ok(()),
    }
}

fn cmd_roundtrip(a: &RoundtripArgs) -> Result<ExitCode> {
    let code = a.code.build()?;
    if a.trials == 0 {
        eprintln!("warning: zero trials requested, nothing checked");
        return Ok(ExitCode::SUCCESS);
    }
    let cfg = DecodeConfig { syndrome_method: a.syndromes, root_method: a.roots, seed: a.seed, conjugacy: true };
    let violations = if a.inject_fault {
        bench::roundtrip_with(&code, a.trials, a.seed, &cfg, |c, w, cfg| {
            decode(c, w, cfg).map(|mut r| {
                let sf = &c.symbol_field;
                r.corrected.symbols[0] = sf.add(r.corrected.symbols[0], sf.one());
                r
            })
        })
    } else {
        bench::roundtrip(&code, a.trials, a.seed, &cfg)
    };
    if violations.is_empty() {
        println!("{} trials ok", a.trials);
        return Ok(ExitCode::SUCCESS);
    }
    for v in violations.iter().take(20) {
        eprintln!("trial {} (seed {}): {}", v.trial, v.seed, v.detail);
    }
    eprintln!("{} of {} trials violated the roundtrip", violations.len(), a.trials);
    Ok(ExitCode::FAILURE)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Code { action: CodeAction::New(a) } => cmd_code_new(&a)?,
        Command::Encode(a) => cmd_encode(&a)?,
        Command::Corrupt(a) => cmd_corrupt(&a)?,
        Command::Syndromes(a) => cmd_syndromes(&a)?,
        Command::Decode(a) => return cmd_decode(&a),
        Command::Locate(a) => cmd_locate(&a)?,
        Command::Bench(a) => cmd_bench(&a)?,
        Command::Roundtrip(a) => return cmd_roundtrip(&a),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

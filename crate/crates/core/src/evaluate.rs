//! Polynomial evaluation and syndrome computation.
//!
//! Two evaluators are provided. [`horner_eval`] is the textbook baseline and
//! costs exactly `deg` multiplications. [`frobenius_eval`] writes a
//! polynomial with prime-field coefficients as
//!
//! ```text
//! R(x) = R_0(x^p) + x R_1(x^p) + ... + x^{p-1} R_{p-1}(x^p)
//! ```
//!
//! and recurses `L` times. The `p^L` leaves then have degree at most
//! `deg / p^L` and, over GF(2), are plain sums of a shared table of powers of
//! `beta^{p^L}`, so the only products are the chain `beta, beta^p, ...`, the
//! power table and the recombination. Polynomials over GF(p^s) are first
//! split into `s` prime-field components along a basis `1, gamma, ...`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{CodeSpec, Word};
use crate::gf::{Field, FieldElement, FieldRef, GfError, OpCount, PrimeBasis};
use crate::poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("polynomial coefficients cannot be evaluated in this field")]
    FieldMismatch,
    #[error("plan was built for degree {plan_deg}, s = {plan_s}; polynomial has degree {deg}, s = {s}")]
    PlanMismatch { plan_deg: usize, plan_s: u32, deg: usize, s: u32 },
    #[error("basis powers are linearly dependent over the prime field")]
    DependentBasis,
    #[error("word has {found} symbols, code length is {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyndromeMethod {
    Horner,
    Frobenius,
}

impl std::str::FromStr for SyndromeMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "horner" => Ok(Self::Horner),
            "frobenius" => Ok(Self::Frobenius),
            _ => Err(format!("unknown syndrome method {s:?} (horner|frobenius)")),
        }
    }
}

impl std::fmt::Display for SyndromeMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Horner => "horner",
            Self::Frobenius => "frobenius",
        })
    }
}

/// Horner's rule. Charges exactly `deg(r)` multiplications: the running
/// accumulator is multiplied by `beta` at every step regardless of its value.
pub fn horner_eval(r: &Poly, field: &Field, beta: FieldElement, ctr: &mut OpCount) -> FieldElement {
    let coeffs = r.coeffs();
    let Some((&lead, rest)) = coeffs.split_last() else {
        return field.zero();
    };
    let lift = |c: FieldElement| field.coerce(c).expect("coefficient not embeddable in the evaluation field");
    let mut acc = lift(lead);
    for &c in rest.iter().rev() {
        acc = field.mul_charged(acc, beta, ctr);
        if !c.is_zero() {
            acc = field.add(acc, lift(c));
            ctr.add += 1;
        }
    }
    acc
}

/// A GF(p)-basis `1, gamma, ..., gamma^{s-1}` of a field of degree `s`.
#[derive(Debug, Clone)]
pub struct SubfieldBasis {
    field: FieldRef,
    prime: FieldRef,
    gamma: FieldElement,
    powers: Vec<FieldElement>,
    coords: PrimeBasis,
}

impl SubfieldBasis {
    pub fn new(field: &FieldRef, gamma: FieldElement) -> Result<Self, EvalError> {
        let s = field.degree() as usize;
        let mut scratch = OpCount::default();
        let mut powers = Vec::with_capacity(s);
        let mut g = field.one();
        for _ in 0..s {
            powers.push(g);
            g = field.mul(g, gamma, &mut scratch);
        }
        let coords = PrimeBasis::new(field, &powers).map_err(|e| match e {
            GfError::Dependent => EvalError::DependentBasis,
            other => EvalError::Field(other),
        })?;
        Ok(SubfieldBasis { field: field.clone(), prime: Field::prime(field.characteristic())?, gamma, powers, coords })
    }

    /// The polynomial basis `1, x, ..., x^{s-1}`.
    pub fn polynomial(field: &FieldRef) -> Self {
        let x = field.from_coeffs(&[0, 1]);
        Self::new(field, x).expect("the polynomial basis is a basis")
    }

    pub fn degree(&self) -> u32 {
        self.powers.len() as u32
    }

    pub fn gamma(&self) -> FieldElement {
        self.gamma
    }

    pub fn prime_field(&self) -> &FieldRef {
        &self.prime
    }
}

/// Write `r = sum gamma^i r_i` with every `r_i` over GF(p).
pub fn subfield_split(r: &Poly, basis: &SubfieldBasis) -> Result<Vec<Poly>, EvalError> {
    if **r.field() != *basis.field {
        return Err(EvalError::FieldMismatch);
    }
    let s = basis.powers.len();
    let mut parts = vec![Vec::with_capacity(r.coeffs().len()); s];
    for &c in r.coeffs() {
        let d = basis.coords.coordinates(&basis.field, c).expect("basis spans the field");
        for (i, part) in parts.iter_mut().enumerate() {
            part.push(basis.prime.from_prime(d[i]));
        }
    }
    Ok(parts.into_iter().map(|c| Poly::new(&basis.prime, c)).collect())
}

/// `sum gamma^i r_i(beta)` for a subfield split, evaluated with Horner
/// (uncounted); used to cross-check splits.
pub fn recombine_at(parts: &[Poly], basis: &SubfieldBasis, beta: FieldElement) -> FieldElement {
    let f = &basis.field;
    let mut scratch = OpCount::default();
    parts.iter().zip(&basis.powers).fold(f.zero(), |acc, (part, &g)| {
        let v = horner_eval(part, f, beta, &mut scratch);
        f.add(acc, f.mul(g, v, &mut scratch))
    })
}

/// The `p` polynomials `R_i` with `R(x) = sum_i x^i R_i(x^p)`.
pub fn frobenius_split(r: &Poly) -> Vec<Poly> {
    let f = r.field();
    let p = f.characteristic() as usize;
    let mut parts = vec![Vec::new(); p];
    for (e, &c) in r.coeffs().iter().enumerate() {
        parts[e % p].push(c);
    }
    parts.into_iter().map(|c| Poly::new(f, c)).collect()
}

/// Evaluation strategy for one degree: `depth` Frobenius splits, with the
/// modeled multiplication count per evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPlan {
    pub deg: usize,
    pub p: u64,
    /// Number of x -> x^p splits (the `L` of the recursion).
    pub depth: u32,
    /// Degree of the coefficient field over GF(p).
    pub subfield_degree: u32,
    /// Modeled multiplications for one evaluation point.
    pub predicted_cost: u64,
    /// Powers `w^1 .. w^D` of `w = beta^{p^depth}` kept in the table.
    pub power_table_size: usize,
    pub points: usize,
}

impl EvalPlan {
    pub fn predicted_total(&self) -> u64 {
        self.predicted_cost * self.points as u64
    }
}

fn frobenius_step_cost(p: u64) -> u64 {
    // square-and-multiply for beta -> beta^p
    u64::from(63 - p.leading_zeros()) + u64::from(p.count_ones()) - 1
}

/// Modeled multiplications per point for `depth` splits.
pub fn eval_cost(deg: usize, p: u64, s: u32, depth: u32) -> u64 {
    let leaves = p.pow(depth);
    let top = (deg as u64) / leaves;
    let chain = u64::from(depth) * frobenius_step_cost(p);
    let table = top.saturating_sub(1);
    // GF(2) leaves are sums of table entries; otherwise each term may need a
    // scalar product
    let inner = if p == 2 { 0 } else { leaves * u64::from(s) * (top + 1) };
    let recombination = u64::from(s) * (leaves - 1) + u64::from(s) - 1;
    chain + table + inner + recombination
}

/// Pick the split depth minimizing [`eval_cost`]; ties go to the smaller depth.
pub fn plan_eval(deg: usize, p: u64, s: u32, points: usize) -> EvalPlan {
    let mut max_depth = 0u32;
    while p.pow(max_depth + 1) <= deg as u64 + 1 {
        max_depth += 1;
    }
    let (depth, cost) = (0..=max_depth)
        .map(|l| (l, eval_cost(deg, p, s, l)))
        .min_by_key(|&(l, c)| (c, l))
        .expect("depth range is nonempty");
    EvalPlan {
        deg,
        p,
        depth,
        subfield_degree: s,
        predicted_cost: cost,
        power_table_size: (deg as u64 / p.pow(depth)) as usize,
        points,
    }
}

/// A polynomial prepared for repeated Frobenius evaluation in one field:
/// the subfield and Frobenius splits are done once.
#[derive(Debug, Clone)]
pub struct FrobeniusEvaluator {
    field: FieldRef,
    plan: EvalPlan,
    // gamma embedded in the evaluation field (s > 1)
    gamma: FieldElement,
    // [component][leaf] -> prime-field coefficients of the leaf, low to high
    leaves: Vec<Vec<Vec<u64>>>,
    top: usize,
    is_zero: bool,
}

impl FrobeniusEvaluator {
    /// `r` must be over `field` itself or over its prime subfield. With
    /// `basis = None` a polynomial over `field` is split along the polynomial
    /// basis.
    pub fn new(r: &Poly, field: &FieldRef, plan: EvalPlan, basis: Option<&SubfieldBasis>) -> Result<Self, EvalError> {
        if r.field().characteristic() != field.characteristic() {
            return Err(EvalError::FieldMismatch);
        }
        let components: Vec<Poly> = if r.field().is_prime_field() {
            vec![r.clone()]
        } else if **r.field() == **field {
            match basis {
                Some(b) => subfield_split(r, b)?,
                None => subfield_split(r, &SubfieldBasis::polynomial(field))?,
            }
        } else {
            return Err(EvalError::FieldMismatch);
        };
        let s = components.len() as u32;
        let gamma = match basis {
            Some(b) if s > 1 => b.gamma(),
            _ if s > 1 => field.from_coeffs(&[0, 1]),
            _ => field.one(),
        };
        let deg = r.degree().unwrap_or(0);
        if plan.deg != deg || plan.subfield_degree != s || plan.p != field.characteristic() {
            return Err(EvalError::PlanMismatch { plan_deg: plan.deg, plan_s: plan.subfield_degree, deg, s });
        }
        let p = plan.p as usize;
        let nleaves = p.pow(plan.depth);
        let top = deg / nleaves;
        let leaves = components
            .iter()
            .map(|comp| {
                let mut ls = vec![vec![0u64; top + 1]; nleaves];
                for (e, &c) in comp.coeffs().iter().enumerate() {
                    ls[e % nleaves][e / nleaves] = c.value();
                }
                ls
            })
            .collect();
        Ok(FrobeniusEvaluator { field: field.clone(), plan, gamma, leaves, top, is_zero: r.is_zero() })
    }

    pub fn plan(&self) -> &EvalPlan {
        &self.plan
    }

    pub fn eval(&self, beta: FieldElement, ctr: &mut OpCount) -> FieldElement {
        let f = &*self.field;
        if self.is_zero {
            return f.zero();
        }
        let p = self.plan.p;
        let depth = self.plan.depth as usize;

        // beta, beta^p, ..., beta^{p^depth}
        let mut chain = Vec::with_capacity(depth + 1);
        chain.push(beta);
        for j in 0..depth {
            let b = chain[j];
            chain.push(if p == 2 { f.mul_charged(b, b, ctr) } else { f.pow(b, p, ctr) });
        }

        // w^0 .. w^top
        let w = chain[depth];
        let mut table = Vec::with_capacity(self.top + 1);
        table.push(f.one());
        if self.top >= 1 {
            table.push(w);
        }
        for k in 2..=self.top {
            let next = f.mul_charged(table[k - 1], w, ctr);
            table.push(next);
        }

        let mut components = Vec::with_capacity(self.leaves.len());
        for comp in &self.leaves {
            let mut vals: Vec<FieldElement> = comp
                .iter()
                .map(|leaf| {
                    let mut acc = f.zero();
                    for (a, &c) in leaf.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        let term = if c == 1 { table[a] } else { f.mul(f.from_prime(c), table[a], ctr) };
                        acc = f.add(acc, term);
                        ctr.add += 1;
                    }
                    acc
                })
                .collect();
            // fold the deepest split first: leaf index digits d_0 + p d_1 + ...
            for j in (0..depth).rev() {
                let stride = (p as usize).pow(j as u32);
                let point = chain[j];
                let next: Vec<FieldElement> = (0..stride)
                    .map(|k| {
                        let mut acc = vals[k + stride * (p as usize - 1)];
                        for d in (0..p as usize - 1).rev() {
                            acc = f.add(f.mul_charged(acc, point, ctr), vals[k + stride * d]);
                            ctr.add += 1;
                        }
                        acc
                    })
                    .collect();
                vals = next;
            }
            components.push(vals[0]);
        }

        let mut acc = *components.last().expect("at least one component");
        for &c in components.iter().rev().skip(1) {
            acc = f.add(f.mul_charged(acc, self.gamma, ctr), c);
            ctr.add += 1;
        }
        acc
    }
}

/// Evaluate `r` at `beta` following `plan`. The result always equals
/// [`horner_eval`]; the multiplication count never exceeds
/// `plan.predicted_cost`.
pub fn frobenius_eval(
    r: &Poly,
    field: &FieldRef,
    beta: FieldElement,
    plan: &EvalPlan,
    ctr: &mut OpCount,
) -> Result<FieldElement, EvalError> {
    if r.is_zero() {
        return Ok(field.zero());
    }
    Ok(FrobeniusEvaluator::new(r, field, *plan, None)?.eval(beta, ctr))
}

/// Subfield degree `s` of a polynomial evaluated in `field`.
pub fn coefficient_degree(r: &Poly) -> u32 {
    if r.field().is_prime_field() {
        1
    } else {
        r.field().degree()
    }
}

/// Evaluate with whichever of Horner and the Frobenius split is modeled to
/// be cheaper.
pub fn eval_auto(r: &Poly, field: &FieldRef, beta: FieldElement, ctr: &mut OpCount) -> FieldElement {
    let Some(deg) = r.degree() else {
        return field.zero();
    };
    let plan = plan_eval(deg, field.characteristic(), coefficient_degree(r), 1);
    if plan.predicted_cost < deg as u64 {
        if let Ok(ev) = FrobeniusEvaluator::new(r, field, plan, None) {
            return ev.eval(beta, ctr);
        }
    }
    horner_eval(r, field, beta, ctr)
}

/// `S_1 .. S_{2t}`, stored at indices `0 .. 2t-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyndromeVector {
    pub values: Vec<FieldElement>,
}

impl SyndromeVector {
    /// `S_j` for `1 <= j <= 2t`.
    pub fn get(&self, j: usize) -> FieldElement {
        self.values[j - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn all_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// Syndromes with per-syndrome operation counts.
#[derive(Debug, Clone)]
pub struct SyndromeRun {
    pub syndromes: SyndromeVector,
    pub per_syndrome: Vec<OpCount>,
    pub plan: Option<EvalPlan>,
}

impl SyndromeRun {
    pub fn total(&self) -> OpCount {
        self.per_syndrome.iter().copied().sum()
    }
}

/// Compute `S_j = word(alpha^j)`, `j = 1 .. 2t`. For codes over a prime
/// field with `conjugacy` set, `S_{pj}` is taken as `S_j^p`.
pub fn syndromes_with(
    code: &CodeSpec,
    word: &Word,
    method: SyndromeMethod,
    conjugacy: bool,
) -> Result<SyndromeRun, EvalError> {
    if word.len() != code.n {
        return Err(EvalError::WrongLength { expected: code.n, found: word.len() });
    }
    let f = &code.locator_field;
    let r = word.to_poly(&code.symbol_field);
    let count = 2 * code.t;
    let p = f.characteristic() as usize;
    let conjugacy = conjugacy && code.symbol_field.is_prime_field();

    let evaluator = match (method, r.degree()) {
        (SyndromeMethod::Frobenius, Some(deg)) => {
            let plan = plan_eval(deg, f.characteristic(), coefficient_degree(&r), count);
            Some(FrobeniusEvaluator::new(&r, f, plan, None)?)
        }
        _ => None,
    };

    // evaluation points are code constants
    let mut scratch = OpCount::default();
    let mut values = Vec::with_capacity(count);
    let mut per = Vec::with_capacity(count);
    let mut point = code.alpha;
    for j in 1..=count {
        let mut ctr = OpCount::default();
        let v = if conjugacy && j % p == 0 {
            f.frobenius(values[j / p - 1], &mut ctr)
        } else if r.is_zero() {
            f.zero()
        } else {
            match &evaluator {
                Some(ev) => ev.eval(point, &mut ctr),
                None => horner_eval(&r, f, point, &mut ctr),
            }
        };
        values.push(v);
        per.push(ctr);
        point = f.mul(point, code.alpha, &mut scratch);
    }
    Ok(SyndromeRun { syndromes: SyndromeVector { values }, per_syndrome: per, plan: evaluator.map(|e| e.plan) })
}

/// [`syndromes_with`] using the conjugacy shortcut, adding into `ctr`.
pub fn syndromes(
    code: &CodeSpec,
    word: &Word,
    method: SyndromeMethod,
    ctr: &mut OpCount,
) -> Result<SyndromeVector, EvalError> {
    let run = syndromes_with(code, word, method, true)?;
    *ctr += run.total();
    Ok(run.syndromes)
}

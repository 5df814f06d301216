//! Arithmetic in GF(p^m) over a polynomial basis.
//!
//! Elements are packed as base-`p` digit strings into a `u64` (bit vectors in
//! characteristic 2) and carry a tag identifying the field they belong to.
//! Every arithmetic entry point takes an [`OpCount`] so that callers can
//! attribute the cost of a computation to the step that performed it.
//! Multiplying by the constants 0 or 1 is free; p-th powers are tallied as
//! squarings, separately from general multiplications.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order we are willing to build (`p^m` must not exceed this).
pub const MAX_ORDER: u64 = 1 << 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the supported maximum")]
    TooLarge { p: u64, m: u32 },
    #[error("modulus must be monic of degree {expected}, got {found}")]
    BadModulus { expected: u32, found: String },
    #[error("modulus is reducible: it has the factor {factor}")]
    ReducibleModulus { factor: String },
    #[error("no primitive element found; the field construction is inconsistent")]
    NoGenerator,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {0} is not an element of the field")]
    OutOfRange(u64),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
    #[error("quadratic embedding requires p = 2 and odd m (got p = {p}, m = {m})")]
    NotOddBinary { p: u64, m: u32 },
    #[error("vectors are not linearly independent over the prime field")]
    Dependent,
}

/// Operation tallies. `mul` counts general products, `sq` counts p-th powers
/// (squarings in characteristic 2), `inv` inversions. `add` is informational
/// and only the syndrome evaluators tally it.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCount {
    pub mul: u64,
    pub sq: u64,
    pub inv: u64,
    pub add: u64,
}

impl OpCount {
    pub fn new() -> Self {
        Self::default()
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, rhs: Self) {
        self.mul += rhs.mul;
        self.sq += rhs.sq;
        self.inv += rhs.inv;
        self.add += rhs.add;
    }
}

impl Add for OpCount {
    type Output = OpCount;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl std::iter::Sum for OpCount {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(OpCount::default(), |a, b| a + b)
    }
}

/// A field element: base-`p` digits of its coordinates on `1, x, ..., x^{m-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    tag: u32,
}

impl FieldElement {
    /// Packed coordinate value (the bit vector when p = 2).
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_one(self) -> bool {
        self.value == 1
    }
}

/// GF(p^m) defined by a monic irreducible modulus, with a designated
/// primitive element.
pub struct Field {
    p: u64,
    m: u32,
    modulus: Vec<u64>,
    order: u64,
    tag: u32,
    generator: FieldElement,
    // p = 2 only: the modulus without its leading term
    low_bits: u64,
    group_primes: Vec<u64>,
}

pub type FieldRef = Arc<Field>;

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag && self.p == other.p && self.m == other.m && (self.m == 1 || self.modulus == other.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {}", self.p, self.m, format_exponents(&self.modulus))
    }
}

/// Minimal-weight primitive polynomials over GF(2), as exponent lists.
const BINARY_PRIMITIVE: &[&[u32]] = &[
    &[1, 0],
    &[2, 1, 0],
    &[3, 1, 0],
    &[4, 1, 0],
    &[5, 2, 0],
    &[6, 1, 0],
    &[7, 1, 0],
    &[8, 4, 3, 2, 0],
    &[9, 4, 0],
    &[10, 3, 0],
    &[11, 2, 0],
    &[12, 6, 4, 1, 0],
    &[13, 4, 3, 1, 0],
    &[14, 10, 6, 1, 0],
    &[15, 1, 0],
    &[16, 12, 3, 1, 0],
    &[17, 3, 0],
    &[18, 7, 0],
    &[19, 5, 2, 1, 0],
    &[20, 3, 0],
];

/// Exponent list notation, e.g. `"6,1,0"` for x^6 + x + 1 (binary only).
pub fn parse_exponents(s: &str) -> Result<Vec<u32>, GfError> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| GfError::Parse(s.to_string())))
        .collect()
}

fn exponents_to_coeffs(exps: &[u32]) -> Vec<u64> {
    let deg = exps.iter().copied().max().unwrap_or(0) as usize;
    let mut c = vec![0u64; deg + 1];
    for &e in exps {
        c[e as usize] ^= 1;
    }
    c
}

/// Render a coefficient vector (low to high) as an exponent list, with
/// coefficients prefixed when they differ from 1.
pub fn format_exponents(coeffs: &[u64]) -> String {
    let parts: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| if c == 1 { i.to_string() } else { format!("{c}*{i}") })
        .collect();
    if parts.is_empty() {
        "-".to_string()
    } else {
        parts.join(",")
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mod_inv_prime(a: u64, p: u64) -> u64 {
    // a^(p-2) mod p
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Small dense polynomials over GF(p), used to vet moduli.
mod fp {
    use super::mod_inv_prime;

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let df = f.len() - 1;
        let linv = mod_inv_prime(f[df], p);
        while a.len() > df {
            let shift = a.len() - 1 - df;
            let q = a[a.len() - 1] * linv % p;
            for (i, &fc) in f.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - q * fc % p) % p;
            }
            a = trim(a);
        }
        a
    }

    pub fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % p;
            }
        }
        rem(&r, f, p)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if let Some(&l) = a.last() {
            let li = mod_inv_prime(l, p);
            for c in a.iter_mut() {
                *c = *c * li % p;
            }
        }
        a
    }

    /// `None` when irreducible, otherwise a nontrivial monic factor.
    pub fn find_factor(f: &[u64], p: u64) -> Option<Vec<u64>> {
        let m = f.len() - 1;
        let x = rem(&[0, 1], f, p);
        let mut h = x.clone();
        for _ in 1..=m / 2 {
            // h <- h^p mod f
            let mut acc = vec![1u64];
            for _ in 0..p {
                acc = mulmod(&acc, &h, f, p);
            }
            h = acc;
            let mut d = h.clone();
            d.resize(d.len().max(2), 0);
            d[1] = (d[1] + p - 1) % p;
            let g = gcd(f, &d, p);
            if g.len() > 1 {
                return Some(g);
            }
        }
        None
    }
}

fn fingerprint(p: u64, m: u32, modulus: &[u64]) -> u32 {
    let mut h = DefaultHasher::new();
    p.hash(&mut h);
    m.hash(&mut h);
    if m > 1 {
        modulus.hash(&mut h);
    }
    let v = h.finish();
    (v ^ (v >> 32)) as u32
}

impl Field {
    /// Build GF(p^m). Without an explicit modulus (coefficients low to high,
    /// monic) a default primitive polynomial is used.
    pub fn new(p: u64, m: u32, modulus: Option<&[u64]>) -> Result<FieldRef, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        let order = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(GfError::TooLarge { p, m })?;
        let modulus = match modulus {
            Some(c) => {
                let c = fp::trim(c.iter().map(|&v| v % p).collect());
                if c.len() != m as usize + 1 || c[m as usize] != 1 {
                    return Err(GfError::BadModulus { expected: m, found: format_exponents(&c) });
                }
                c
            }
            None => default_modulus(p, m),
        };
        if let Some(f) = fp::find_factor(&modulus, p) {
            return Err(GfError::ReducibleModulus { factor: format_exponents(&f) });
        }
        let low_bits = if p == 2 { modulus[..m as usize].iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (c << i)) } else { 0 };
        let tag = fingerprint(p, m, &modulus);
        let mut field = Field {
            p,
            m,
            modulus,
            order,
            tag,
            generator: FieldElement { value: 1, tag },
            low_bits,
            group_primes: prime_factors(order - 1),
        };
        field.generator = field.find_generator()?;
        Ok(Arc::new(field))
    }

    /// GF(2^m) from an exponent list such as `[6, 4, 3, 1, 0]`.
    pub fn binary(m: u32, exponents: Option<&[u32]>) -> Result<FieldRef, GfError> {
        match exponents {
            Some(e) => Field::new(2, m, Some(&exponents_to_coeffs(e))),
            None => Field::new(2, m, None),
        }
    }

    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<FieldRef, GfError> {
        Field::new(p, 1, None)
    }

    fn find_generator(&self) -> Result<FieldElement, GfError> {
        // the class of x first, then a linear scan
        let x = self.from_coeffs(&[0, 1]);
        if self.is_primitive(x) {
            return Ok(x);
        }
        (1..self.order)
            .map(|v| FieldElement { value: v, tag: self.tag })
            .find(|&e| self.is_primitive(e))
            .ok_or(GfError::NoGenerator)
    }

    /// True when `e` generates the full multiplicative group.
    pub fn is_primitive(&self, e: FieldElement) -> bool {
        if e.is_zero() {
            return false;
        }
        let q1 = self.order - 1;
        self.pow_raw(e, q1).is_one() && self.group_primes.iter().all(|&r| !self.pow_raw(e, q1 / r).is_one())
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, e: FieldElement) -> u64 {
        assert!(!e.is_zero(), "zero has no multiplicative order");
        let mut ord = self.order - 1;
        for &r in &self.group_primes {
            while ord % r == 0 && self.pow_raw(e, ord / r).is_one() {
                ord /= r;
            }
        }
        ord
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Number of elements, p^m.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Modulus coefficients, low to high.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn modulus_string(&self) -> String {
        format_exponents(&self.modulus)
    }

    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { value: 0, tag: self.tag }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { value: 1, tag: self.tag }
    }

    pub fn element(&self, value: u64) -> Result<FieldElement, GfError> {
        if value >= self.order {
            return Err(GfError::OutOfRange(value));
        }
        Ok(FieldElement { value, tag: self.tag })
    }

    /// Element from coordinates (low to high), reduced modulo the modulus.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        let c: Vec<u64> = coeffs.iter().map(|&v| v % self.p).collect();
        let c = if c.len() > self.m as usize { fp::rem(&c, &self.modulus, self.p) } else { c };
        self.pack(&c)
    }

    /// Embed an element of the prime subfield GF(p).
    pub fn from_prime(&self, c: u64) -> FieldElement {
        FieldElement { value: c % self.p, tag: self.tag }
    }

    /// Coordinates of `e` (length m, low to high).
    pub fn coeffs(&self, e: FieldElement) -> Vec<u64> {
        self.unpack(e.value)
    }

    /// Lies in the prime subfield GF(p).
    pub fn in_prime_subfield(&self, e: FieldElement) -> bool {
        e.value < self.p
    }

    /// Move an element of another field into this one, when both fields agree
    /// (same tag) or the element lies in the shared prime subfield.
    pub fn coerce(&self, e: FieldElement) -> Option<FieldElement> {
        if e.tag == self.tag {
            Some(e)
        } else if e.value < self.p {
            Some(FieldElement { value: e.value, tag: self.tag })
        } else {
            None
        }
    }

    pub fn owns(&self, e: FieldElement) -> bool {
        e.tag == self.tag
    }

    /// Big-endian digit string, e.g. `"100110"` for a^5 + a^2 + a in GF(64).
    pub fn format(&self, e: FieldElement) -> String {
        self.unpack(e.value)
            .iter()
            .rev()
            .map(|&d| std::char::from_digit(d as u32, 36).unwrap_or('?'))
            .collect()
    }

    pub fn parse(&self, s: &str) -> Result<FieldElement, GfError> {
        let s = s.trim();
        if s.is_empty() || s.len() > self.m as usize {
            return Err(GfError::Parse(s.to_string()));
        }
        let mut digits = Vec::with_capacity(s.len());
        for ch in s.chars().rev() {
            let d = ch.to_digit(36).map(u64::from).filter(|&d| d < self.p).ok_or_else(|| GfError::Parse(s.to_string()))?;
            digits.push(d);
        }
        Ok(self.pack(&digits))
    }

    fn pack(&self, digits: &[u64]) -> FieldElement {
        let mut v = 0u64;
        for &d in digits.iter().rev() {
            v = v * self.p + d;
        }
        FieldElement { value: v, tag: self.tag }
    }

    fn unpack(&self, mut v: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.m as usize];
        for d in out.iter_mut() {
            *d = v % self.p;
            v /= self.p;
        }
        out
    }

    #[inline]
    fn check(&self, e: FieldElement) {
        assert_eq!(e.tag, self.tag, "field element used with a different field");
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        if self.p == 2 {
            return FieldElement { value: a.value ^ b.value, tag: self.tag };
        }
        let (x, y) = (self.unpack(a.value), self.unpack(b.value));
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.pack(&s)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.check(a);
        if self.p == 2 {
            return a;
        }
        let s: Vec<u64> = self.unpack(a.value).iter().map(|&u| (self.p - u) % self.p).collect();
        self.pack(&s)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// Product of two elements; free when either operand is 0 or 1.
    pub fn mul(&self, a: FieldElement, b: FieldElement, ctr: &mut OpCount) -> FieldElement {
        self.check(a);
        self.check(b);
        if a.value <= 1 || b.value <= 1 {
            return if a.value == 0 || b.value == 0 {
                self.zero()
            } else if a.value == 1 {
                b
            } else {
                a
            };
        }
        ctr.mul += 1;
        self.mul_raw(a, b)
    }

    /// Product that is always charged one multiplication, for running
    /// accumulators whose cost the caller has committed to.
    pub fn mul_charged(&self, a: FieldElement, b: FieldElement, ctr: &mut OpCount) -> FieldElement {
        self.check(a);
        self.check(b);
        ctr.mul += 1;
        self.mul_raw(a, b)
    }

    /// [`Field::mul`] with a field check that reports instead of panicking.
    pub fn try_mul(&self, a: FieldElement, b: FieldElement, ctr: &mut OpCount) -> Result<FieldElement, GfError> {
        if !self.owns(a) || !self.owns(b) {
            return Err(GfError::FieldMismatch);
        }
        Ok(self.mul(a, b, ctr))
    }

    pub(crate) fn mul_raw(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement { value: self.mul2(a.value, b.value), tag: self.tag };
        }
        let (x, y) = (self.unpack(a.value), self.unpack(b.value));
        let mut prod = vec![0u64; 2 * self.m as usize - 1];
        for (i, &u) in x.iter().enumerate() {
            if u == 0 {
                continue;
            }
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % self.p;
            }
        }
        let r = fp::rem(&prod, &self.modulus, self.p);
        self.pack(&r)
    }

    #[inline]
    fn mul2(&self, mut a: u64, mut b: u64) -> u64 {
        let top = 1u64 << (self.m - 1);
        let mask = if self.m == 64 { u64::MAX } else { (1u64 << self.m) - 1 };
        let mut r = 0u64;
        while b != 0 {
            if b & 1 == 1 {
                r ^= a;
            }
            b >>= 1;
            let carry = a & top;
            a = (a << 1) & mask;
            if carry != 0 {
                a ^= self.low_bits;
            }
        }
        r
    }

    fn pow_raw(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut r = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_raw(r, b);
            }
            b = self.mul_raw(b, b);
            e >>= 1;
        }
        r
    }

    /// The Frobenius map a -> a^p, charged as one squaring.
    pub fn frobenius(&self, a: FieldElement, ctr: &mut OpCount) -> FieldElement {
        self.check(a);
        ctr.sq += 1;
        if self.p == 2 {
            self.mul_raw(a, a)
        } else {
            self.pow_raw(a, self.p)
        }
    }

    /// Square-and-multiply power; every product goes through [`Field::mul`].
    pub fn pow(&self, a: FieldElement, mut e: u64, ctr: &mut OpCount) -> FieldElement {
        self.check(a);
        let mut r = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b, ctr);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(b, b, ctr);
            }
        }
        r
    }

    pub fn inv(&self, a: FieldElement, ctr: &mut OpCount) -> Result<FieldElement, GfError> {
        self.check(a);
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        ctr.inv += 1;
        Ok(self.pow_raw(a, self.order - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement, ctr: &mut OpCount) -> Result<FieldElement, GfError> {
        let bi = self.inv(b, ctr)?;
        Ok(self.mul(a, bi, ctr))
    }

    /// Every element, in packed-value order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(move |v| FieldElement { value: v, tag: self.tag })
    }
}

fn default_modulus(p: u64, m: u32) -> Vec<u64> {
    if p == 2 {
        if let Some(e) = BINARY_PRIMITIVE.get(m as usize - 1) {
            return exponents_to_coeffs(e);
        }
    }
    if m == 1 {
        // x - g for the least primitive root g, so that x itself generates
        let q1 = p - 1;
        let primes = prime_factors(q1);
        let pw = |b: u64, e: u64| (0..e).fold(1u64, |acc, _| acc * b % p);
        let g = (1..p).find(|&g| primes.iter().all(|&r| pw(g, q1 / r) != 1)).unwrap_or(1);
        return vec![(p - g) % p, 1];
    }
    // lexicographic search for an irreducible polynomial whose x is primitive
    let total = p.pow(m);
    let q1 = total - 1;
    let primes = prime_factors(q1);
    for low in 1..total {
        let mut c = Vec::with_capacity(m as usize + 1);
        let mut v = low;
        for _ in 0..m {
            c.push(v % p);
            v /= p;
        }
        c.push(1);
        if fp::find_factor(&c, p).is_some() {
            continue;
        }
        let x = vec![0u64, 1];
        let powmod = |e: u64| {
            let mut r = vec![1u64];
            let mut b = fp::rem(&x, &c, p);
            let mut e = e;
            while e > 0 {
                if e & 1 == 1 {
                    r = fp::mulmod(&r, &b, &c, p);
                }
                b = fp::mulmod(&b, &b, &c, p);
                e >>= 1;
            }
            r
        };
        if primes.iter().all(|&r| powmod(q1 / r) != vec![1]) {
            return c;
        }
    }
    unreachable!("a primitive polynomial of every degree exists")
}

/// Coordinates with respect to a set of field elements viewed as vectors over
/// GF(p). Solves `y = sum d_i v_i` by a precomputed elimination.
#[derive(Debug, Clone)]
pub struct PrimeBasis {
    p: u64,
    m: usize,
    k: usize,
    // row operations E (m x m) with E * A in reduced echelon form
    ops: Vec<Vec<u64>>,
    // pivot column of each of the first `k` rows
    pivots: Vec<usize>,
}

impl PrimeBasis {
    /// Fails with [`GfError::Dependent`] unless the vectors are independent.
    pub fn new(field: &Field, vectors: &[FieldElement]) -> Result<Self, GfError> {
        let p = field.p;
        let m = field.m as usize;
        let k = vectors.len();
        // A: m rows, k columns
        let cols: Vec<Vec<u64>> = vectors.iter().map(|&v| field.coeffs(v)).collect();
        let mut a: Vec<Vec<u64>> = (0..m).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let mut e: Vec<Vec<u64>> = (0..m).map(|r| (0..m).map(|c| u64::from(r == c)).collect()).collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..k {
            let Some(pr) = (row..m).find(|&r| a[r][col] != 0) else {
                return Err(GfError::Dependent);
            };
            a.swap(row, pr);
            e.swap(row, pr);
            let inv = mod_inv_prime(a[row][col], p);
            for c in 0..k {
                a[row][c] = a[row][c] * inv % p;
            }
            for c in 0..m {
                e[row][c] = e[row][c] * inv % p;
            }
            for r in 0..m {
                if r != row && a[r][col] != 0 {
                    let f = a[r][col];
                    for c in 0..k {
                        a[r][c] = (a[r][c] + p - f * a[row][c] % p) % p;
                    }
                    for c in 0..m {
                        e[r][c] = (e[r][c] + p - f * e[row][c] % p) % p;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok(PrimeBasis { p, m, k, ops: e, pivots })
    }

    /// Coordinates `d` of `y`, or `None` when `y` is outside the span.
    pub fn coordinates(&self, field: &Field, y: FieldElement) -> Option<Vec<u64>> {
        let yv = field.coeffs(y);
        let ey: Vec<u64> = self
            .ops
            .iter()
            .map(|row| row.iter().zip(&yv).fold(0u64, |acc, (&a, &b)| (acc + a * b) % self.p))
            .collect();
        if ey[self.k..self.m].iter().any(|&v| v != 0) {
            return None;
        }
        let mut d = vec![0u64; self.k];
        for (r, &c) in self.pivots.iter().enumerate() {
            d[c] = ey[r];
        }
        Some(d)
    }
}

/// GF(2^m) (m odd) sitting inside GF(2^{2m}).
#[derive(Debug, Clone)]
pub struct QuadraticEmbedding {
    small: FieldRef,
    big: FieldRef,
    theta_powers: Vec<FieldElement>,
    basis: PrimeBasis,
}

/// Build GF(2^{2m}) and the embedding of GF(2^m) into it. The image of the
/// small field's `x` is a root of its modulus, located by scanning the order
/// 2^m - 1 subgroup of the large field.
pub fn embed_quadratic(small: &FieldRef) -> Result<QuadraticEmbedding, GfError> {
    if small.p != 2 || small.m % 2 == 0 {
        return Err(GfError::NotOddBinary { p: small.p, m: small.m });
    }
    let big = Field::new(2, 2 * small.m, None)?;
    let mut scratch = OpCount::default();
    let cofactor = (big.order - 1) / (small.order - 1);
    let omega = big.pow(big.generator, cofactor, &mut scratch);
    let mut cand = big.one();
    let mut theta = None;
    for _ in 0..small.order - 1 {
        // evaluate the small modulus at the candidate
        let mut acc = big.zero();
        for &c in small.modulus.iter().rev() {
            acc = big.add(big.mul_raw(acc, cand), big.from_prime(c));
        }
        if acc.is_zero() {
            theta = Some(cand);
            break;
        }
        cand = big.mul_raw(cand, omega);
    }
    let theta = theta.ok_or(GfError::NoGenerator)?;
    let mut theta_powers = Vec::with_capacity(small.m as usize);
    let mut t = big.one();
    for _ in 0..small.m {
        theta_powers.push(t);
        t = big.mul_raw(t, theta);
    }
    let basis = PrimeBasis::new(&big, &theta_powers)?;
    Ok(QuadraticEmbedding { small: small.clone(), big, theta_powers, basis })
}

impl QuadraticEmbedding {
    pub fn small(&self) -> &FieldRef {
        &self.small
    }

    pub fn big(&self) -> &FieldRef {
        &self.big
    }

    /// Image of the small field's `x`.
    pub fn theta(&self) -> FieldElement {
        self.theta_powers[1.min(self.theta_powers.len() - 1)]
    }

    pub fn apply(&self, a: FieldElement) -> FieldElement {
        self.small.check(a);
        self.small
            .coeffs(a)
            .iter()
            .zip(&self.theta_powers)
            .filter(|(&c, _)| c != 0)
            .fold(self.big.zero(), |acc, (_, &t)| self.big.add(acc, t))
    }

    /// Inverse of [`QuadraticEmbedding::apply`] on the image; `None` outside it.
    pub fn preimage(&self, y: FieldElement) -> Option<FieldElement> {
        self.big.check(y);
        self.basis.coordinates(&self.big, y).map(|d| self.small.from_coeffs(&d))
    }
}

pub mod tables {
    //! Exponential/logarithm tables built by repeated multiplication by `x`
    //! (shift and reduce). They are independent of [`super::Field::mul`] and
    //! serve as a cross-check of it; decoding paths never consult them.

    use super::{Field, FieldElement};

    pub struct ExpLog {
        exp: Vec<u64>,
        log: Vec<Option<u64>>,
        order: u64,
    }

    impl ExpLog {
        /// Requires the field's `x` to be primitive and p = 2.
        pub fn new(field: &Field) -> Option<Self> {
            if field.characteristic() != 2 || field.order() > 1 << 16 {
                return None;
            }
            let m = field.degree();
            let q = field.order();
            let low = field.modulus()[..m as usize].iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (c << i));
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut log = vec![None; q as usize];
            let mut v = 1u64;
            for i in 0..q - 1 {
                if log[v as usize].is_some() {
                    return None;
                }
                exp.push(v);
                log[v as usize] = Some(i);
                v <<= 1;
                if m == 1 {
                    v = 1;
                } else if v >> m & 1 == 1 {
                    v ^= (1 << m) | low;
                }
            }
            Some(ExpLog { exp, log, order: q - 1 })
        }

        pub fn mul(&self, a: u64, b: u64) -> u64 {
            match (self.log[a as usize], self.log[b as usize]) {
                (Some(x), Some(y)) => self.exp[((x + y) % self.order) as usize],
                _ => 0,
            }
        }

        pub fn log(&self, a: u64) -> Option<u64> {
            self.log[a as usize]
        }

        pub fn exp(&self, k: u64) -> u64 {
            self.exp[(k % self.order) as usize]
        }

        pub fn element(&self, field: &Field, k: u64) -> FieldElement {
            field.element(self.exp(k)).expect("table entries lie in the field")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::tables::ExpLog;
    use super::*;

    fn gf16() -> FieldRef {
        Field::binary(4, Some(&[4, 1, 0])).unwrap()
    }

    #[test]
    fn gf16_generator_is_x_with_order_15() {
        let f = gf16();
        let g = f.generator();
        assert_eq!(f.coeffs(g), vec![0, 1, 0, 0]);
        let mut ctr = OpCount::default();
        let mut y = g;
        for k in 1..15 {
            assert!(!y.is_one(), "x^{k} = 1");
            y = f.mul(y, g, &mut ctr);
        }
        assert!(y.is_one());
    }

    #[test]
    fn gf2_generator_is_one() {
        let f = Field::new(2, 1, None).unwrap();
        assert!(f.generator().is_one());
        assert_eq!(f.order(), 2);
    }

    #[test]
    fn gf64_generator_order_63() {
        let f = Field::binary(6, Some(&[6, 1, 0])).unwrap();
        let g = f.generator();
        assert_eq!(f.format(g), "000010");
        let mut ctr = OpCount::default();
        let mut y = g;
        for _ in 1..63 {
            assert!(!y.is_one());
            y = f.mul(y, g, &mut ctr);
        }
        assert!(y.is_one());
    }

    #[test]
    fn reducible_modulus_names_factor() {
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        let err = Field::binary(4, Some(&[4, 2, 0])).unwrap_err();
        assert_eq!(err, GfError::ReducibleModulus { factor: "2,1,0".into() });
        // x^4 + x^3 = x^3 (x + 1)
        assert!(matches!(Field::binary(4, Some(&[4, 3])), Err(GfError::ReducibleModulus { .. })));
    }

    #[test]
    fn non_primitive_modulus_scans_for_generator() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5
        let f = Field::binary(4, Some(&[4, 3, 2, 1, 0])).unwrap();
        assert_eq!(f.element_order(f.from_coeffs(&[0, 1])), 5);
        assert_eq!(f.element_order(f.generator()), 15);
    }

    #[test]
    fn bad_parameters() {
        assert_eq!(Field::new(4, 2, None).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(Field::new(2, 0, None).unwrap_err(), GfError::ZeroDegree);
        assert!(matches!(Field::new(2, 3, Some(&[1, 1, 0, 0, 1])), Err(GfError::BadModulus { .. })));
    }

    #[test]
    fn mul_examples_gf16() {
        let f = gf16();
        let mut ctr = OpCount::default();
        let x = f.from_coeffs(&[0, 1]);
        assert_eq!(f.mul(x, x, &mut ctr), f.from_coeffs(&[0, 0, 1]));
        let x3 = f.from_coeffs(&[0, 0, 0, 1]);
        assert_eq!(f.mul(x3, x, &mut ctr), f.from_coeffs(&[1, 1]));
        assert_eq!(ctr.mul, 2);
        // (x^3 + 1)(x^2 + x) against the log-table oracle
        let t = ExpLog::new(&f).unwrap();
        let a = f.from_coeffs(&[1, 0, 0, 1]);
        let b = f.from_coeffs(&[0, 1, 1]);
        assert_eq!(f.mul(a, b, &mut ctr).value(), t.mul(a.value(), b.value()));
    }

    #[test]
    fn mul_by_constants_is_free() {
        let f = gf16();
        let mut ctr = OpCount::default();
        let a = f.from_coeffs(&[1, 1, 0, 1]);
        assert_eq!(f.mul(a, f.one(), &mut ctr), a);
        assert_eq!(f.mul(f.zero(), a, &mut ctr), f.zero());
        assert_eq!(ctr, OpCount::default());
        f.mul_charged(a, f.one(), &mut ctr);
        assert_eq!(ctr.mul, 1);
    }

    #[test]
    fn mismatched_fields() {
        let f = gf16();
        let g = Field::binary(4, Some(&[4, 3, 0])).unwrap();
        let mut ctr = OpCount::default();
        assert_eq!(f.try_mul(f.generator(), g.generator(), &mut ctr), Err(GfError::FieldMismatch));
        let r = std::panic::catch_unwind(|| {
            let mut c = OpCount::default();
            f.mul(f.generator(), g.generator(), &mut c)
        });
        assert!(r.is_err());
    }

    #[test]
    fn frobenius_examples() {
        let f = gf16();
        let mut ctr = OpCount::default();
        assert_eq!(f.frobenius(f.zero(), &mut ctr), f.zero());
        let a = f.from_coeffs(&[1, 1]);
        assert_eq!(f.frobenius(a, &mut ctr), f.from_coeffs(&[1, 0, 1]));
        assert_eq!(ctr, OpCount { sq: 2, ..OpCount::default() });

        let g = Field::binary(6, Some(&[6, 1, 0])).unwrap();
        let t = ExpLog::new(&g).unwrap();
        let a5 = t.element(&g, 5);
        assert_eq!(g.frobenius(a5, &mut ctr), t.element(&g, 10));
    }

    #[test]
    fn inverse_examples() {
        let f = gf16();
        let mut ctr = OpCount::default();
        assert_eq!(f.inv(f.one(), &mut ctr).unwrap(), f.one());
        let x = f.from_coeffs(&[0, 1]);
        assert_eq!(f.inv(x, &mut ctr).unwrap(), f.from_coeffs(&[1, 0, 0, 1]));
        assert_eq!(ctr.inv, 2);
        assert_eq!(f.inv(f.zero(), &mut ctr), Err(GfError::DivisionByZero));
        for a in f.elements().skip(1) {
            let b = f.inv(a, &mut ctr).unwrap();
            assert!(f.mul(a, b, &mut ctr).is_one());
        }
    }

    #[test]
    fn odd_characteristic_arithmetic() {
        // GF(9) = GF(3)[x]/(x^2 + 1)
        let f = Field::new(3, 2, Some(&[1, 0, 1])).unwrap();
        let mut ctr = OpCount::default();
        let x = f.from_coeffs(&[0, 1]);
        assert_eq!(f.mul(x, x, &mut ctr), f.from_coeffs(&[2]));
        assert_eq!(f.element_order(f.generator()), 8);
        for a in f.elements().skip(1) {
            let b = f.inv(a, &mut ctr).unwrap();
            assert!(f.mul(a, b, &mut ctr).is_one());
            assert_eq!(f.add(a, f.neg(a)), f.zero());
        }
        assert_eq!(f.frobenius(x, &mut ctr), f.mul(f.mul(x, x, &mut ctr), x, &mut ctr));
        // default GF(7): x - 3 so that x = 3 generates
        let g7 = Field::prime(7).unwrap();
        assert_eq!(g7.generator().value(), 3);
    }

    #[test]
    fn element_notation_roundtrip() {
        let f = Field::binary(6, Some(&[6, 4, 3, 1, 0])).unwrap();
        let e = f.parse("100110").unwrap();
        assert_eq!(f.coeffs(e), vec![0, 1, 1, 0, 0, 1]);
        assert_eq!(f.format(e), "100110");
        assert!(f.parse("1000000").is_err());
        assert!(f.parse("10a").is_err());
        assert_eq!(parse_exponents("6,4,3,1,0").unwrap(), vec![6, 4, 3, 1, 0]);
        assert_eq!(f.modulus_string(), "6,4,3,1,0");
    }

    #[test]
    fn default_table_is_primitive() {
        for m in 1..=20 {
            let f = Field::binary(m, None).unwrap();
            assert_eq!(f.coeffs(f.generator())[..], f.coeffs(f.from_coeffs(&[0, 1]))[..], "m = {m}");
        }
        // no table entry: found by search
        let f = Field::new(2, 21, None).unwrap();
        assert!(f.is_primitive(f.from_coeffs(&[0, 1])));
    }

    #[test]
    fn generator_order_exhaustive_small() {
        for m in 1..=8 {
            let f = Field::binary(m, None).unwrap();
            let mut ctr = OpCount::default();
            let g = f.generator();
            let mut y = f.one();
            for j in 1..f.order() - 1 {
                y = f.mul(y, g, &mut ctr);
                assert!(!y.is_one(), "m = {m}, j = {j}");
            }
            assert!(f.mul(y, g, &mut ctr).is_one());
        }
    }

    #[test]
    fn embedding_gf8_into_gf64() {
        let small = Field::binary(3, None).unwrap();
        let emb = embed_quadratic(&small).unwrap();
        let big = emb.big().clone();
        let mut ctr = OpCount::default();
        assert_eq!(emb.apply(small.zero()), big.zero());
        assert_eq!(emb.apply(small.one()), big.one());
        // theta is a root of x^3 + x + 1
        let th = emb.theta();
        let t3 = big.mul(big.mul(th, th, &mut ctr), th, &mut ctr);
        assert_eq!(big.add(big.add(t3, th), big.one()), big.zero());
        let image: Vec<FieldElement> = small.elements().map(|a| emb.apply(a)).collect();
        let set: std::collections::HashSet<u64> = image.iter().map(|e| e.value()).collect();
        assert_eq!(set.len(), 8);
        for &y in &image {
            assert_eq!(big.pow(y, 8, &mut ctr), y);
        }
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(emb.apply(small.add(a, b)), big.add(emb.apply(a), emb.apply(b)));
                let ab = small.mul(a, b, &mut ctr);
                let (ea, eb) = (emb.apply(a), emb.apply(b));
                let prod = big.mul(ea, eb, &mut ctr);
                assert_eq!(emb.apply(ab), prod);
                assert!(set.contains(&prod.value()));
            }
            assert_eq!(emb.preimage(emb.apply(a)), Some(a));
        }
        let outside = big.elements().find(|y| !set.contains(&y.value())).unwrap();
        assert_eq!(emb.preimage(outside), None);
        assert!(matches!(embed_quadratic(&Field::binary(4, None).unwrap()), Err(GfError::NotOddBinary { .. })));
    }

    #[test]
    fn prime_basis_rejects_dependent_vectors() {
        let f = gf16();
        let x = f.from_coeffs(&[0, 1]);
        assert_eq!(PrimeBasis::new(&f, &[f.one(), x, f.add(f.one(), x)]).unwrap_err(), GfError::Dependent);
        let b = PrimeBasis::new(&f, &[f.one(), x]).unwrap();
        assert_eq!(b.coordinates(&f, f.add(f.one(), x)), Some(vec![1, 1]));
        assert_eq!(b.coordinates(&f, f.from_coeffs(&[0, 0, 1])), None);
    }
}

//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use thiserror::Error;

use crate::gf::{format_exponents, Field, FieldElement, FieldRef, GfError, OpCount};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("coefficient {0} does not lie in the target field")]
    NotInSubfield(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Coefficients are stored low to high with no trailing zeros, so the zero
/// polynomial has an empty coefficient vector and no degree.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldRef,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]", self.notation())
    }
}

impl Poly {
    pub fn zero(field: &FieldRef) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FieldRef) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &FieldRef, c: FieldElement) -> Self {
        Self::new(field, vec![c])
    }

    /// The monomial `x`.
    pub fn x(field: &FieldRef) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    /// `x + c`
    pub fn linear(field: &FieldRef, c: FieldElement) -> Self {
        Self::new(field, vec![c, field.one()])
    }

    pub fn monomial(field: &FieldRef, c: FieldElement, degree: usize) -> Self {
        let mut coeffs = vec![field.zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(field, coeffs)
    }

    pub fn new(field: &FieldRef, coeffs: Vec<FieldElement>) -> Self {
        for &c in &coeffs {
            assert!(field.owns(c), "coefficient from a different field");
        }
        let mut p = Poly { field: field.clone(), coeffs };
        p.trim();
        p
    }

    /// Sum of `x^e` over the given exponents, e.g. a received binary word.
    pub fn from_exponents(field: &FieldRef, exponents: &[usize]) -> Self {
        let deg = exponents.iter().copied().max().map_or(0, |d| d + 1);
        let mut coeffs = vec![field.zero(); deg];
        for &e in exponents {
            coeffs[e] = field.add(coeffs[e], field.one());
        }
        Self::new(field, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_else(|| self.field.zero())
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Exponents with nonzero coefficients, highest first.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).rev().filter(|&i| !self.coeffs[i].is_zero()).collect()
    }

    /// Exponent list notation; coefficients other than 1 are written as
    /// `coeff*exp` using the field's digit notation.
    pub fn notation(&self) -> String {
        if self.is_zero() {
            return "-".into();
        }
        self.support()
            .into_iter()
            .map(|i| {
                let c = self.coeffs[i];
                if c.is_one() {
                    i.to_string()
                } else {
                    format!("{}*{}", self.field.format(c), i)
                }
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    fn same_field(&self, other: &Poly) {
        assert!(*self.field == *other.field, "polynomials over different fields");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.field.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(&self.field, coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|&c| self.field.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn add_constant(&self, c: FieldElement) -> Poly {
        self.add(&Poly::constant(&self.field, c))
    }

    pub fn scale(&self, c: FieldElement, ctr: &mut OpCount) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|&a| self.field.mul(a, c, ctr)).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { field: self.field.clone(), coeffs }
    }

    /// Keep the terms of degree below `k`.
    pub fn truncate(&self, k: usize) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().take(k).copied().collect())
    }

    /// Schoolbook product.
    pub fn mul(&self, other: &Poly, ctr: &mut OpCount) -> Poly {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b, ctr));
            }
        }
        Poly::new(f, out)
    }

    pub fn div_rem(&self, divisor: &Poly, ctr: &mut OpCount) -> Result<(Poly, Poly), PolyError> {
        self.same_field(divisor);
        let d = divisor.degree().ok_or(PolyError::ZeroDivisor)?;
        let f = &self.field;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv(divisor.coeffs[d], ctr)?;
        let mut quot = vec![f.zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let q = f.mul(c, lead_inv, ctr);
            quot[i - d] = q;
            for (j, &dc) in divisor.coeffs.iter().enumerate().take(d) {
                rem[i - d + j] = f.sub(rem[i - d + j], f.mul(q, dc, ctr));
            }
            rem[i] = f.zero();
        }
        rem.truncate(d);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly, ctr: &mut OpCount) -> Result<Poly, PolyError> {
        Ok(self.div_rem(divisor, ctr)?.1)
    }

    pub fn monic(&self, ctr: &mut OpCount) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => {
                let li = self.field.inv(l, ctr).expect("leading coefficient is nonzero");
                self.scale(li, ctr)
            }
        }
    }

    /// `self^exponent mod modulus` by left-to-right square-and-multiply.
    pub fn mod_exp(&self, exponent: u64, modulus: &Poly, ctr: &mut OpCount) -> Result<Poly, PolyError> {
        if modulus.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        let base = self.rem(modulus, ctr)?;
        let mut acc = Poly::one(&self.field).rem(modulus, ctr)?;
        if exponent == 0 {
            return Ok(acc);
        }
        let bits = 64 - exponent.leading_zeros();
        for i in (0..bits).rev() {
            acc = acc.mul(&acc, ctr).rem(modulus, ctr)?;
            if exponent >> i & 1 == 1 {
                acc = acc.mul(&base, ctr).rem(modulus, ctr)?;
            }
        }
        Ok(acc)
    }

    /// Monic gcd by Euclid's algorithm.
    pub fn gcd(a: &Poly, b: &Poly, ctr: &mut OpCount) -> Result<Poly, PolyError> {
        if a.is_zero() && b.is_zero() {
            return Err(PolyError::BothZero);
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.rem(&y, ctr)?;
            x = y;
            y = r;
        }
        Ok(x.monic(ctr))
    }

    /// Formal derivative; integer multiples are reduced mod p.
    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let p = f.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| {
                let k = (i as u64) % p;
                (0..k).fold(f.zero(), |acc, _| f.add(acc, c))
            })
            .collect();
        Poly::new(f, coeffs)
    }

    /// Coefficient reversal `x^deg * self(1/x)`.
    pub fn reversed(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(&self.field, c)
    }

    /// Move coefficients into `target`: either the same field, or a
    /// polynomial whose coefficients all lie in the shared prime subfield.
    pub fn coerce(&self, target: &FieldRef) -> Result<Poly, PolyError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| target.coerce(c).ok_or_else(|| PolyError::NotInSubfield(self.field.format(c))))
            .collect::<Result<Vec<_>, _>>()?;
        if target.characteristic() != self.field.characteristic() {
            return Err(PolyError::Field(GfError::FieldMismatch));
        }
        Ok(Poly::new(target, coeffs))
    }

    /// Plain Horner evaluation for checks and setup work (not the counted
    /// evaluator, see [`crate::evaluate`]).
    pub fn eval(&self, at: &Field, x: FieldElement, ctr: &mut OpCount) -> FieldElement {
        let mut acc = at.zero();
        for &c in self.coeffs.iter().rev() {
            let c = at.coerce(c).expect("coefficient not embeddable in the evaluation field");
            acc = at.add(at.mul(acc, x, ctr), c);
        }
        acc
    }
}

/// Monic GF(p)-polynomial of least degree vanishing at `beta`: the product of
/// `x - beta^{p^i}` over the Frobenius orbit. The result has coefficients in
/// the prime subfield but lives over `field`.
pub fn minimal_polynomial(field: &FieldRef, beta: FieldElement, ctr: &mut OpCount) -> Result<Poly, PolyError> {
    let mut orbit = vec![beta];
    let mut y = field.frobenius(beta, ctr);
    while y != beta {
        orbit.push(y);
        y = field.frobenius(y, ctr);
    }
    let mut acc = Poly::one(field);
    for &r in &orbit {
        acc = acc.mul(&Poly::linear(field, field.neg(r)), ctr);
    }
    if let Some(&c) = acc.coeffs().iter().find(|&&c| !field.in_prime_subfield(c)) {
        return Err(PolyError::NotInSubfield(field.format(c)));
    }
    Ok(acc)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .support()
            .into_iter()
            .map(|i| {
                let c = self.coeffs[i];
                let mono = match i {
                    0 => String::new(),
                    1 => "x".into(),
                    _ => format!("x^{i}"),
                };
                match (c.is_one(), i) {
                    (true, 0) => "1".into(),
                    (true, _) => mono,
                    (false, 0) => format!("({})", self.field.format(c)),
                    (false, _) => format!("({}){}", self.field.format(c), mono),
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Exponent list of a binary-coefficient polynomial, e.g. `"18,17,14,0"`.
pub fn exponent_list(p: &Poly) -> String {
    let coeffs: Vec<u64> = p.coeffs().iter().map(|c| c.value()).collect();
    format_exponents(&coeffs)
}

//! Berlekamp-Massey synthesis of the error-locator polynomial.

use crate::evaluate::SyndromeVector;
use crate::gf::{FieldRef, OpCount};
use crate::poly::Poly;

/// `sigma(z) = 1 + sigma_1 z + ... + sigma_e z^e`, whose roots are
/// `alpha^{-l}` for the error positions `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocatorPoly {
    pub sigma: Poly,
}

impl LocatorPoly {
    pub fn degree(&self) -> usize {
        self.sigma.degree().unwrap_or(0)
    }

    /// `sigma_i`
    pub fn coeff(&self, i: usize) -> crate::gf::FieldElement {
        self.sigma.coeff(i)
    }
}

/// Shortest LFSR generating `S_1 .. S_{2t}` (Massey's formulation). One
/// inversion is charged each time the register length changes.
pub fn berlekamp_massey(field: &FieldRef, s: &SyndromeVector, ctr: &mut OpCount) -> LocatorPoly {
    let f = &**field;
    let n = s.len();
    // connection polynomials as coefficient vectors, index = power of z
    let mut c = vec![f.one()];
    let mut b = vec![f.one()];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut b_inv = f.one();

    for k in 0..n {
        let mut d = s.values[k];
        for i in 1..=len.min(c.len() - 1) {
            d = f.add(d, f.mul(c[i], s.values[k - i], ctr));
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let coef = f.mul(d, b_inv, ctr);
        let mut next = c.clone();
        if next.len() < b.len() + shift {
            next.resize(b.len() + shift, f.zero());
        }
        for (i, &bi) in b.iter().enumerate() {
            next[i + shift] = f.sub(next[i + shift], f.mul(coef, bi, ctr));
        }
        if 2 * len <= k {
            b = std::mem::replace(&mut c, next);
            len = k + 1 - len;
            b_inv = f.inv(d, ctr).expect("discrepancy is nonzero");
            shift = 1;
        } else {
            c = next;
            shift += 1;
        }
    }
    c.truncate(len + 1);
    LocatorPoly { sigma: Poly::new(field, c) }
}

/// `z^e sigma(1/z)`: monic, with roots `alpha^{+l}`.
pub fn reciprocal_locator(sigma: &LocatorPoly) -> Poly {
    sigma.sigma.reversed()
}

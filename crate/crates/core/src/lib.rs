//! Algebraic decoding of cyclic codes up to the BCH bound, with every
//! field multiplication counted.
//!
//! The decoder runs the classical four steps: syndromes, the error
//! locator, its roots, and (for non-binary codes) the error magnitudes.
//! Syndromes can be computed by Horner's rule or by splitting the received
//! polynomial along the Frobenius map; roots can be found by a Chien search
//! or by Cantor-Zassenhaus splitting followed by baby-step giant-step
//! logarithms.

pub mod bench;
pub mod codec;
pub mod evaluate;
pub mod gf;
pub mod locator;
pub mod pipeline;
pub mod poly;
pub mod roots;

pub use codec::{bch_code, rs_code, CodeDescriptor, CodeError, CodeKind, CodeSpec, Word};
pub use evaluate::{frobenius_eval, horner_eval, plan_eval, syndromes, EvalError, EvalPlan, SyndromeMethod, SyndromeVector};
pub use gf::{Field, FieldElement, FieldRef, GfError, OpCount};
pub use locator::{berlekamp_massey, reciprocal_locator, LocatorPoly};
pub use pipeline::{decode, DecodeConfig, DecodeError, DecodeReport, DecodeStatus, ErrorPattern, StageCounts};
pub use poly::{Poly, PolyError};
pub use roots::{bsgs_log, bsgs_table, chien_search, cz_factor, locate_errors, RootMethod, RootSet, RootsError};

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Roots(#[from] RootsError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

use thiserror::Error;

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::dyadic::Dyadic;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum Error {
    #[error("divisor ball contains zero")]
    DivisorContainsZero,
    #[error("argument outside the domain of {0}")]
    DomainViolation(&'static str),
    #[error("height must exceed 2*pi for the asymptotic expansion")]
    HeightTooLow,
    #[error("height {t} is below the validity floor {floor} for {terms} correction terms")]
    BelowValidityFloor { t: f64, floor: f64, terms: usize },
    #[error("no remainder constants configured for {0} correction terms")]
    UnsupportedTermCount(usize),
    #[error("sqrt(t/2pi) straddles an integer; main-sum length is ambiguous")]
    AmbiguousMainSum,
    #[error("enclosure not obtainable within the cost cap (needs {needed} terms, cap {cap})")]
    PrecisionExhausted { needed: u64, cap: u64 },
    #[error("lattice step {step} exceeds the allowed {limit}")]
    StepTooCoarse { step: f64, limit: f64 },
    #[error("invalid lattice: {0}")]
    InvalidLattice(&'static str),
    #[error("evaluators disagree at t = {0}")]
    EvaluatorDisagreement(Dyadic),
    #[error("Turing window spans {gaps:.1} mean gaps, needs at least {required:.1}")]
    WindowTooShort { gaps: f64, required: f64 },
    #[error("{0} indeterminate signs in the Turing window")]
    IndeterminateSigns(usize),
    #[error("Turing constants have not been validated")]
    UnvalidatedConstants,
    #[error("Turing constants fail validation on window [{t1}, {t2}]: |integral S| = {observed} > {allowed}")]
    ConstantsRejected { t1: f64, t2: f64, observed: f64, allowed: f64 },
    #[error("gap between certified chunks: ({0}, {1})")]
    GapDetected(Dyadic, Dyadic),
    #[error("chunk {0} is not certified")]
    StatusNotCertified(u64),
    #[error("invalid parameters: {0}")]
    InvalidParameters(&'static str),
    #[error("refinement budget exhausted with {} unresolved intervals", .0.len())]
    BudgetExhausted(Vec<(Dyadic, Dyadic)>),
    #[error("certification failed: {0}")]
    CertificationFailed(Box<crate::certify::TuringVerdict>),
    #[error("arithmetic overflow in exact dyadic computation")]
    DyadicOverflow,
}

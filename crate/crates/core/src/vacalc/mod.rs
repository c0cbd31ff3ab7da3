//! Free SUSY vertex algebras: canonical states, Λ-brackets, normal ordering, D and ∂.

mod axioms;
mod constructors;
mod engine;
mod lambda;
mod state;
mod text;

pub use axioms::{check_axioms, AxiomFailure, AxiomReport, SampleSpec};
pub use constructors::{free_susy_algebra, Presentation, heisenberg, neutral_fermion, neveu_schwarz, susy_affine, susy_fermion};
pub use engine::{Algebra, Generator, Origin};
pub use lambda::LambdaPoly;
pub use state::{Atom, LPoly, Monomial, State};
pub use text::{atom_text, lambda_text, monomial_text, parse_state, state_text};
pub(crate) use text::{coeff_parts, join_terms};

pub(crate) use engine::{binomial, factorial};

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Quantum,
    Classical,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VaError {
    #[error("skew-symmetry violated by the table entry for ({x}, {y})")]
    SkewSymmetryViolation { x: String, y: String },
    #[error("table entry for ({x}, {y}) is not linear in the generators")]
    NonLinearTable { x: String, y: String },
    #[error("table entry for ({x}, {y}) has the wrong parity")]
    ParityViolation { x: String, y: String },
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("duplicate generator name '{0}'")]
    DuplicateName(String),
    #[error("degenerate pairing form")]
    DegenerateForm,
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[cfg(test)]
mod tests;

//! Obstructions to being a limit of Anosov representations: negative top
//! eigenvalues in SL(2,R), domination sweeps, certificates over exterior
//! indices, and limit-set sampling for tensor products.

pub mod certificate;
pub mod domination;
pub mod limitset;
pub mod sign;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::words::WordError;

pub use certificate::{certify_not_limit, certify_with_assumptions, rep_hash, revalidate, ObstructionCertificate};
pub use domination::{check_domination, DominationReport};
pub use limitset::{sample_limit_set, LimitSetReport};
pub use sign::{find_negative_lambda, limit_formula_check, LimitReport, SearchBudget, SignWitness};

#[derive(Debug, Error)]
pub enum ObstructError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("witness `{0}` is not in the index-two core")]
    NotInCore(String),
    #[error("sign search exhausted its budget after {examined} candidates (smallest trace {min_trace})")]
    SearchFailed { examined: usize, min_trace: f64 },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("only {found} of {requested} sampled words were proximal")]
    Sampling { found: usize, requested: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Word(#[from] WordError),
}

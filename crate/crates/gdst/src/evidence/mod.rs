//! Generalized (complex-valued) Dempster-Shafer calculus.
//!
//! A frame of discernment holds up to 20 labelled events; hypotheses are
//! subsets of the frame encoded as bitmasks. Mass assignments are complex
//! ([`Cbba`]), the classical real-valued theory being the degenerate case
//! with vanishing imaginary parts. The generalized combination rule only
//! requires `|1 - K| > 0` (numerically, [`EPS_SINGULAR`]) instead of the
//! classical `K < 1`.

mod cbba;
mod combine;
mod frame;
mod surface;

pub use cbba::{Cbba, Violation};
pub use combine::{combine, combine_classical, conflict, Combined, ConflictReport, MassWarning};
pub use frame::{Frame, Hypothesis};
pub use surface::{conflict_surface, SurfacePoint};

use thiserror::Error;

/// Default validation tolerance; paper inputs are irrational values printed
/// to 4-8 significant digits.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Singularity guard on `|1 - K|` for the combination rule.
pub const EPS_SINGULAR: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvidenceError {
    #[error("frame must have between 1 and 20 distinct, non-empty labels: {0}")]
    BadFrame(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("operands are defined over different frames")]
    FrameMismatch,
    #[error("total conflict: |1 - K| = {k_dist:.3e} is below {}", EPS_SINGULAR)]
    TotalConflict { k_dist: f64 },
    #[error("classical combination requires real-valued masses")]
    NotRealValued,
    #[error("CBBA violates the admissibility conditions: {0:?}")]
    InvalidCbba(Vec<Violation>),
    #[error("hypothesis must be non-empty")]
    EmptyHypothesis,
    #[error("grid step must lie in (0, 0.5]")]
    BadGridStep,
}

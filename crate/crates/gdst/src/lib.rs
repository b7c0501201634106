//! Generalized (complex-valued) Dempster-Shafer evidence theory and an
//! evidential quantum dynamical model built on top of it.
//!
//! The crate has four layers:
//!
//! - [`scalar`]: Cartesian complex arithmetic shared by everything else.
//! - [`evidence`]: complex mass functions over a frame of discernment,
//!   the generalized combination rule (valid whenever `|1 - K|` is
//!   non-zero, without the classical `K < 1` restriction), complex
//!   belief/plausibility, the complex pignistic transform, and the
//!   conflict surface of the two-event worked example.
//! - [`quantum`]: belief-action amplitude states, block Hamiltonians with
//!   closed-form unitary evolution, measurement, uncertain-belief
//!   redistribution, and the C-then-D / D-alone prediction pipelines for
//!   the categorisation-decision task.
//! - [`fit`]: SSE estimation of the payoff parameters against the
//!   published datasets, plus the comparison-table report.
//!
//! [`io`] defines the JSON document formats and CSV/text emitters used by
//! the `gdst` command-line tool.

pub mod evidence;
pub mod fit;
pub mod io;
pub mod quantum;
pub mod scalar;

pub use scalar::Complex;

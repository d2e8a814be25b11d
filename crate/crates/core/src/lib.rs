//! Exact verification tools for the balanced power-sum equation
//!
//! ```text
//! n^l + (n+1)^l + ... + (n+k)^l = (n+k+1)^l + ... + (n+2k)^l
//! ```
//!
//! For `l = 1, 2` the solutions form explicit families. For `l >= 3` the
//! [`decider`] runs a finite procedure (bound on `k`, integer window for the
//! center `w = n + k`, 2-adic filters, exact evaluation) and emits a
//! certificate that can be re-checked independently.

pub mod arith;
pub mod bounds;
pub mod decider;
pub mod equation;
pub mod error;
pub mod filters;
pub mod lemmas;
pub mod oracle;
pub mod powersum;

pub use error::{Error, Result};

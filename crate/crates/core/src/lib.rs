//! Spiking recurrent networks trained with surrogate-gradient BPTT under
//! activity-ordered curricula, for time-series classification. Includes
//! population and value-regional spike encoders, an experiment harness with
//! k-fold cross-validation and rank-based AUC, and executable checks for
//! the scheduling identities the training order relies on.

pub mod baseline;
pub mod config;
pub mod curriculum;
pub mod data;
pub mod encoding;
pub mod error;
pub mod harness;
pub mod learning;
pub mod linalg;
pub mod metrics;
pub mod rng;
pub mod spiking;
pub mod verification;

pub use error::{Error, Result};

//! Interpolation matrices for fat points at sampled configurations.
//!
//! A point `P` of multiplicity `m` contributes one row per Hasse derivative of
//! order `< m`, evaluated at `P` in an affine chart. Over a sample the rank of
//! the stacked matrix bounds the generic `h^0` from above; a full-rank sample
//! is therefore a proof of nonspeciality in characteristic zero.

mod certify;
mod conditions;
mod config;
mod decimal;

pub use certify::{
    certify, trial_seed, Certificate, Evidence, Method, Sampler, Verdict,
    CERTIFICATE_SCHEMA_VERSION, DEFAULT_TRIALS,
};
pub use conditions::{build_matrix, condition_rows, h0_at_sample, monomial_basis, RankReport};
pub use config::{sample_config, PointConfig, SamplePoint, WeierstrassCubic, SAMPLE_RETRIES};

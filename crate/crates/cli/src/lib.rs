//! Command-line front end for `fatpoint-core`: argument syntax, the
//! newline-delimited JSON certificate store, batch sweeps and report
//! formatting.

pub mod commands;
pub mod config;
pub mod parse;
pub mod store;
pub mod sweep;

/// Stable process exit codes.
pub mod exit {
    /// Nonspecial-certified, special-exact, or a plain report.
    pub const DECIDED: i32 = 0;
    /// Usage or configuration error.
    pub const USAGE: i32 = 1;
    /// Suspected, inconclusive, or no bound available.
    pub const UNDECIDED: i32 = 2;
}

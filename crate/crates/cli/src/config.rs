use std::path::PathBuf;

use anyhow::Result;
use fatpoint_core::gfmat::{PrimeField, DEFAULT_PRIME};
use fatpoint_core::interp::{Sampler, DEFAULT_TRIALS};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_MAX_MATRIX_ENTRIES: u64 = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub field: PrimeField,
    pub seed: u64,
    pub trials: u32,
    /// 0 lets the thread pool pick.
    pub threads: usize,
    pub store: Option<PathBuf>,
    pub max_matrix_entries: u64,
}

impl RunConfig {
    pub fn new(prime: u64, seed: u64, trials: u32) -> Result<Self> {
        if trials == 0 {
            anyhow::bail!("--trials must be at least 1");
        }
        Ok(Self {
            field: PrimeField::new(prime)?,
            seed,
            trials,
            threads: 0,
            store: None,
            max_matrix_entries: DEFAULT_MAX_MATRIX_ENTRIES,
        })
    }

    pub fn sampler(&self) -> Sampler {
        Sampler::new(self.field, self.trials, self.seed)
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::new(DEFAULT_PRIME, DEFAULT_SEED, DEFAULT_TRIALS).expect("defaults are valid")
    }
}

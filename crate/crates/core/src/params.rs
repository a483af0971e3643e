use crate::kcount::check_t;
use crate::kmer::check_k;
use crate::mphf::{DEFAULT_GAMMA, DEFAULT_SEED};
use crate::quasidict::{Fingerprinter, QdParams, DEFAULT_F};
use crate::{Error, Result};

/// Parameters shared by the counting and linking indexes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexParams {
    pub k: usize,
    /// Solidity threshold: minimum occurrences for a k-mer to be indexed.
    pub t: u32,
    pub f: u32,
    pub gamma: f64,
    pub seed: u64,
}

impl Default for IndexParams {
    fn default() -> Self {
        IndexParams {
            k: 31,
            t: 2,
            f: DEFAULT_F,
            gamma: DEFAULT_GAMMA,
            seed: DEFAULT_SEED,
        }
    }
}

impl IndexParams {
    pub fn new(k: usize, t: u32, f: u32) -> Self {
        IndexParams {
            k,
            t,
            f,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_k(self.k)?;
        check_t(self.t)?;
        Fingerprinter::new(self.f, self.k as u32)?;
        if !(self.gamma >= 1.0 && self.gamma.is_finite()) {
            return Err(Error::param(format!("gamma must be >= 1.0, got {}", self.gamma)));
        }
        Ok(())
    }

    pub fn qd_params(&self) -> QdParams {
        QdParams {
            f: self.f,
            k: self.k as u32,
            gamma: self.gamma,
            seed: self.seed,
        }
    }
}

//! Size, false-positive and timing report for a quasi-dictionary.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hash::MixBuildHasher;
use crate::kmer::{canonical_code, check_k};
use crate::quasidict::{QdParams, QuasiDictionary};
use crate::Result;

/// `n` distinct random canonical `k`-mer codes not present in `exclude`,
/// in generation order.
pub fn random_canonical_kmers(n: usize, k: usize, seed: u64, exclude: &[u64]) -> Result<Vec<u64>> {
    check_k(k)?;
    let space = 1u64 << (2 * k);
    let mut seen: HashSet<u64, MixBuildHasher> = HashSet::with_capacity_and_hasher(n, Default::default());
    let excluded: HashSet<u64, MixBuildHasher> = exclude.iter().copied().collect();
    // roughly half the code space is canonical
    if (n + excluded.len()) as u128 > (space as u128) / 4 {
        return Err(crate::Error::param(format!(
            "cannot draw {n} distinct {k}-mers from a space of {space} codes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let code = canonical_code(rng.gen::<u64>() & (space - 1), k);
        if !excluded.contains(&code) && seen.insert(code) {
            out.push(code);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct IndexStats {
    pub n_keys: usize,
    pub f: u32,
    pub k: u32,
    pub mphf_bits_per_key: f64,
    pub total_bits_per_key: f64,
    pub fingerprint_bits: u64,
    pub mphf_levels: usize,
    pub probes: usize,
    pub false_positives: usize,
    pub construction: Duration,
    /// Single-threaded wall time for all probe queries.
    pub query_time: Duration,
}

impl IndexStats {
    pub fn fp_rate(&self) -> f64 {
        if self.probes == 0 {
            0.0
        } else {
            self.false_positives as f64 / self.probes as f64
        }
    }

    pub fn queries_per_sec(&self) -> f64 {
        self.probes as f64 / self.query_time.as_secs_f64().max(1e-9)
    }
}

/// Builds a dictionary over `keys` and queries every probe, which the caller
/// guarantees are not keys.
pub fn index_stats(keys: &[u64], params: &QdParams, probes: &[u64]) -> Result<(QuasiDictionary, IndexStats)> {
    let start = Instant::now();
    let qd = QuasiDictionary::create(keys, params)?;
    let construction = start.elapsed();

    let start = Instant::now();
    let false_positives = probes.iter().filter(|&&p| qd.query(p).is_some()).count();
    let query_time = start.elapsed();

    let stats = IndexStats {
        n_keys: qd.len(),
        f: qd.f(),
        k: qd.k(),
        mphf_bits_per_key: qd.mphf().bits_per_key(),
        total_bits_per_key: qd.bits_per_key(),
        fingerprint_bits: qd.fingerprint_bits(),
        mphf_levels: qd.mphf().level_count(),
        probes: probes.len(),
        false_positives,
        construction,
        query_time,
    };
    Ok((qd, stats))
}

impl fmt::Display for IndexStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "keys\t{}", self.n_keys)?;
        writeln!(f, "k\t{}", self.k)?;
        writeln!(f, "f\t{}", self.f)?;
        writeln!(f, "mphf_levels\t{}", self.mphf_levels)?;
        writeln!(f, "mphf_bits_per_key\t{:.3}", self.mphf_bits_per_key)?;
        writeln!(f, "fingerprint_bits\t{}", self.fingerprint_bits)?;
        writeln!(f, "total_bits_per_key\t{:.3}", self.total_bits_per_key)?;
        writeln!(f, "probes\t{}", self.probes)?;
        writeln!(f, "false_positives\t{}", self.false_positives)?;
        writeln!(f, "fp_rate\t{:.3e}", self.fp_rate())?;
        writeln!(f, "expected_fp_rate\t{:.3e}", 0.5f64.powi(self.f as i32))?;
        writeln!(f, "construction_secs\t{:.3}", self.construction.as_secs_f64())?;
        write!(f, "queries_per_sec\t{:.0}", self.queries_per_sec())
    }
}

//! Workload generators for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdict::inspect::random_canonical_kmers;
use qdict::seqio::records_from_seqs;
use qdict::ReadRecord;

/// Distinct canonical 31-mers to index, plus the same number of absent probes.
pub fn keys_and_probes(n: usize, seed: u64) -> (Vec<u64>, Vec<u64>) {
    let keys = random_canonical_kmers(n, 31, seed, &[]).expect("31-mer space is large enough");
    let probes = random_canonical_kmers(n, 31, seed ^ 1, &keys).expect("31-mer space is large enough");
    (keys, probes)
}

pub fn random_dna(len: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect()
}

/// `n` reads of `len` bases drawn from one random genome of `genome_len`
/// bases, with substitutions at `error_rate`.
pub fn sampled_reads(n: usize, len: usize, genome_len: usize, error_rate: f64, seed: u64) -> Vec<ReadRecord> {
    let genome = random_dna(genome_len, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let seqs: Vec<Vec<u8>> = (0..n)
        .map(|_| {
            let start = rng.gen_range(0..=genome_len - len);
            genome[start..start + len]
                .iter()
                .map(|&b| if rng.gen_bool(error_rate) { b"ACGT"[rng.gen_range(0..4)] } else { b })
                .collect()
        })
        .collect();
    records_from_seqs(&seqs)
}

//! Data generators and brute-force oracles shared by the integration tests.
//! The oracles re-encode every window from its characters and never touch the
//! library's rolling k-mer iterator or the quasi-dictionary.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_dna(len: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    (0..len).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect()
}

pub fn revcomp(seq: &[u8]) -> Vec<u8> {
    seq.iter()
        .rev()
        .map(|&b| match b {
            b'A' => b'T',
            b'C' => b'G',
            b'G' => b'C',
            b'T' => b'A',
            other => other,
        })
        .collect()
}

/// Reads sampled uniformly from a random genome, random strand, with
/// substitution errors at `error_rate`.
pub fn sampled_reads(
    n: usize,
    read_len: usize,
    genome_len: usize,
    error_rate: f64,
    seed: u64,
) -> Vec<Vec<u8>> {
    let mut rng = rng(seed);
    let genome = random_dna(genome_len, &mut rng);
    (0..n)
        .map(|_| {
            let start = rng.gen_range(0..=genome_len - read_len);
            let mut s = genome[start..start + read_len].to_vec();
            for b in s.iter_mut() {
                if rng.gen_bool(error_rate) {
                    *b = b"ACGT"[rng.gen_range(0..4)];
                }
            }
            if rng.gen_bool(0.5) {
                revcomp(&s)
            } else {
                s
            }
        })
        .collect()
}

/// Distinct random codes of `bits` bits, avoiding `exclude`.
pub fn distinct_codes(n: usize, bits: u32, seed: u64, exclude: &HashSet<u64>) -> Vec<u64> {
    let mut rng = rng(seed);
    let mask = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = rng.gen::<u64>() & mask;
        if !exclude.contains(&x) && seen.insert(x) {
            out.push(x);
        }
    }
    out
}

/// Canonical k-mer string of every ACGT window, by position.
pub fn naive_windows(seq: &[u8], k: usize) -> Vec<(usize, String)> {
    if seq.len() < k {
        return vec![];
    }
    (0..=seq.len() - k)
        .filter_map(|i| {
            let w = &seq[i..i + k];
            if !w.iter().all(|b| b"ACGT".contains(b)) {
                return None;
            }
            let fwd = String::from_utf8(w.to_vec()).unwrap();
            let rc = String::from_utf8(revcomp(w)).unwrap();
            Some((i, fwd.min(rc)))
        })
        .collect()
}

/// Solid canonical k-mers and saturated counts.
pub fn naive_solid(reads: &[Vec<u8>], k: usize, t: u32) -> HashMap<String, u8> {
    let mut counts: HashMap<String, u32> = HashMap::new();
    for r in reads {
        for (_, w) in naive_windows(r, k) {
            *counts.entry(w).or_default() += 1;
        }
    }
    counts
        .into_iter()
        .filter(|&(_, c)| c >= t)
        .map(|(w, c)| (w, c.min(255) as u8))
        .collect()
}

/// (n, mean, lower median, min, max) of the solid counts found in `read`.
pub fn naive_count_stats(
    read: &[u8],
    k: usize,
    solid: &HashMap<String, u8>,
) -> Option<(usize, f64, u8, u8, u8)> {
    let mut v: Vec<u8> = naive_windows(read, k)
        .into_iter()
        .filter_map(|(_, w)| solid.get(&w).copied())
        .collect();
    if v.is_empty() {
        return None;
    }
    v.sort();
    let n = v.len();
    let sum: u64 = v.iter().map(|&c| c as u64).sum();
    Some((n, sum as f64 / n as f64, v[(n - 1) / 2], v[0], v[n - 1]))
}

/// Quadratic coverage oracle: for each query and each other read, the number
/// of query positions covered by a k-mer present in that read.
pub fn naive_link_scores(reads: &[Vec<u8>], k: usize) -> Vec<Vec<(u32, usize)>> {
    let kmer_sets: Vec<HashSet<String>> = reads
        .iter()
        .map(|r| naive_windows(r, k).into_iter().map(|(_, w)| w).collect())
        .collect();
    reads
        .iter()
        .enumerate()
        .map(|(qi, q)| {
            let windows = naive_windows(q, k);
            let mut out = Vec::new();
            for (ti, set) in kmer_sets.iter().enumerate() {
                if ti == qi {
                    continue;
                }
                let mut covered = vec![false; q.len()];
                let mut any = false;
                for (p, w) in &windows {
                    if set.contains(w) {
                        any = true;
                        covered[*p..*p + k].iter_mut().for_each(|c| *c = true);
                    }
                }
                if any {
                    out.push((ti as u32, covered.iter().filter(|&&c| c).count()));
                }
            }
            out.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            out
        })
        .collect()
}

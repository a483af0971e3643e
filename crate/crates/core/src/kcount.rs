//! In-memory solid k-mer counting.
//!
//! Canonical k-mers are counted in sharded hash tables with 8-bit saturating
//! counters. Entries seen fewer than `t` times are dropped and the rest are
//! returned sorted by code.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::hash::{fingerprint_mix, MixBuildHasher};
use crate::io::{expect_magic, read_u32, read_u64, read_u8, write_u32, write_u64};
use crate::kmer::{check_k, iter_kmers};
use crate::seqio::{ReadRecord, ReadSource};
use crate::{Error, Result};

pub const MAX_COUNT: u8 = u8::MAX;

const MAGIC: &[u8; 4] = b"SKMT";
const SHARD_BITS: u32 = 4;
const SHARDS: usize = 1 << SHARD_BITS;
pub(crate) const BATCH: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolidKmerTable {
    entries: Vec<(u64, u8)>,
    k: usize,
    t: u8,
}

#[inline]
fn shard_of(code: u64) -> usize {
    (fingerprint_mix(code) >> (64 - SHARD_BITS)) as usize
}

pub(crate) fn check_t(t: u32) -> Result<u8> {
    if (1..=MAX_COUNT as u32).contains(&t) {
        Ok(t as u8)
    } else {
        Err(Error::param(format!("solidity threshold t={t} not in 1..=255")))
    }
}

/// Counts the canonical `k`-mers of every read in `reads` and keeps those seen
/// at least `t` times.
pub fn count_solid<S: ReadSource + ?Sized>(reads: &S, k: usize, t: u32) -> Result<SolidKmerTable> {
    check_k(k)?;
    let t = check_t(t)?;
    let mut shards: Vec<HashMap<u64, u8, MixBuildHasher>> =
        (0..SHARDS).map(|_| HashMap::default()).collect();

    reads.for_each_batch(BATCH, &mut |batch: &[ReadRecord]| {
        let buckets: Vec<Vec<Vec<u64>>> = batch
            .par_chunks(256)
            .map(|chunk| {
                let mut local = vec![Vec::new(); SHARDS];
                for rec in chunk {
                    for (_, kmer) in iter_kmers(&rec.seq, k) {
                        local[shard_of(kmer.code())].push(kmer.code());
                    }
                }
                local
            })
            .collect();
        shards.par_iter_mut().enumerate().for_each(|(s, table)| {
            for local in &buckets {
                for &code in &local[s] {
                    let c = table.entry(code).or_insert(0);
                    *c = c.saturating_add(1);
                }
            }
        });
        Ok(())
    })?;

    let mut entries: Vec<(u64, u8)> = shards
        .into_par_iter()
        .flat_map_iter(|table| table.into_iter().filter(|&(_, c)| c >= t))
        .collect();
    entries.par_sort_unstable();
    Ok(SolidKmerTable { entries, k, t })
}

impl SolidKmerTable {
    /// Sorted, distinct `(code, count)` pairs.
    pub fn entries(&self) -> &[(u64, u8)] {
        &self.entries
    }

    pub fn codes(&self) -> Vec<u64> {
        self.entries.iter().map(|&(c, _)| c).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> u8 {
        self.t
    }

    pub fn count(&self, code: u64) -> Option<u8> {
        self.entries
            .binary_search_by_key(&code, |&(c, _)| c)
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn write_to<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        w.write_all(MAGIC)?;
        write_u32(w, self.k as u32)?;
        write_u32(w, self.t as u32)?;
        write_u64(w, self.entries.len() as u64)?;
        for &(code, count) in &self.entries {
            write_u64(w, code)?;
            w.write_all(&[count])?;
        }
        Ok(())
    }

    pub fn read_from<R: Read + ?Sized>(r: &mut R) -> Result<Self> {
        expect_magic(r, MAGIC)?;
        let k = read_u32(r)? as usize;
        check_k(k).map_err(|e| Error::Format(e.to_string()))?;
        let t = check_t(read_u32(r)?).map_err(|e| Error::Format(e.to_string()))?;
        let n = read_u64(r)?;
        let mut entries = Vec::with_capacity(n.min(1 << 24) as usize);
        for _ in 0..n {
            entries.push((read_u64(r)?, read_u8(r)?));
        }
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Format("k-mer table entries not strictly sorted".into()));
        }
        Ok(SolidKmerTable { entries, k, t })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::file(path, e))?;
        let mut w = BufWriter::new(file);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::file(path, e))?;
        Self::read_from(&mut BufReader::new(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kmer::Kmer;
    use crate::seqio::records_from_seqs;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    /// Window-by-window recount, independent of the rolling iterator.
    fn naive_counts(seqs: &[Vec<u8>], k: usize, t: u32) -> Vec<(u64, u8)> {
        let mut m: BTreeMap<u64, u32> = BTreeMap::new();
        for s in seqs {
            for w in s.windows(k) {
                if let Ok(x) = Kmer::encode(w) {
                    *m.entry(x.canonical().code()).or_default() += 1;
                }
            }
        }
        m.into_iter()
            .filter(|&(_, c)| c >= t)
            .map(|(code, c)| (code, c.min(255) as u8))
            .collect()
    }

    fn enc(s: &str) -> u64 {
        Kmer::encode(s.as_bytes()).unwrap().canonical().code()
    }

    #[test]
    fn single_read() {
        let table = count_solid(&records_from_seqs(&["ACCG"]), 4, 1).unwrap();
        assert_eq!(table.entries(), &[(enc("ACCG"), 1)]);
    }

    #[test]
    fn both_strands_pool() {
        let table = count_solid(&records_from_seqs(&["ACCG", "CGGT"]), 4, 2).unwrap();
        assert_eq!(table.entries(), &[(enc("ACCG"), 2)]);
    }

    #[test]
    fn saturates_at_255() {
        let reads = records_from_seqs(&vec!["ACGTT"; 300]);
        let table = count_solid(&reads, 5, 255).unwrap();
        assert_eq!(table.entries(), &[(enc("ACGTT"), 255)]);
    }

    #[test]
    fn bad_parameters() {
        let reads = records_from_seqs(&["ACGT"]);
        assert!(count_solid(&reads, 0, 1).is_err());
        assert!(count_solid(&reads, 32, 1).is_err());
        assert!(count_solid(&reads, 3, 0).is_err());
        assert!(count_solid(&reads, 3, 256).is_err());
    }

    #[test]
    fn matches_naive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let genome: Vec<u8> = (0..3000).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect();
        let seqs: Vec<Vec<u8>> = (0..3000)
            .map(|_| {
                let start = rng.gen_range(0..genome.len() - 80);
                let mut s = genome[start..start + 80].to_vec();
                if rng.gen_bool(0.2) {
                    let j = rng.gen_range(0..80);
                    s[j] = b"ACGTN"[rng.gen_range(0..5)];
                }
                s
            })
            .collect();
        let reads = records_from_seqs(&seqs);
        for (k, t) in [(15, 2), (21, 1), (31, 3)] {
            let table = count_solid(&reads, k, t).unwrap();
            assert_eq!(table.entries(), naive_counts(&seqs, k, t).as_slice(), "k={k} t={t}");
        }

        let mut reversed = reads.clone();
        reversed.reverse();
        assert_eq!(count_solid(&reads, 21, 2).unwrap(), count_solid(&reversed, 21, 2).unwrap());
    }

    #[test]
    fn dump_round_trip() {
        let reads = records_from_seqs(&["ACGTACGTTGCA", "TTGCAACGT"]);
        let table = count_solid(&reads, 5, 1).unwrap();
        let mut buf = Vec::new();
        table.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"SKMT");
        assert_eq!(buf.len(), 4 + 4 + 4 + 8 + 9 * table.len());
        assert_eq!(SolidKmerTable::read_from(&mut buf.as_slice()).unwrap(), table);
    }
}

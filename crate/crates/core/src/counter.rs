//! Read abundance estimation.
//!
//! The solid k-mers of a bank are indexed with their occurrence counts. A query
//! read is then summarised by the counts of those of its k-mers the index
//! accepts: mean, lower median, min and max.

use std::io::Write;

use rayon::prelude::*;

use crate::kcount::{count_solid, SolidKmerTable, BATCH};
use crate::kmer::iter_kmers;
use crate::params::IndexParams;
use crate::quasidict::{QuasiDictionary, ValueStore};
use crate::seqio::{ReadRecord, ReadSource};
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct CountStats {
    pub n_indexed: usize,
    pub mean: f64,
    /// Lower median for even-length vectors.
    pub median: u8,
    pub min: u8,
    pub max: u8,
}

impl CountStats {
    /// `None` for an empty count vector.
    pub fn from_counts(counts: &mut [u8]) -> Option<CountStats> {
        if counts.is_empty() {
            return None;
        }
        counts.sort_unstable();
        let n = counts.len();
        let sum: u64 = counts.iter().map(|&c| c as u64).sum();
        Some(CountStats {
            n_indexed: n,
            mean: sum as f64 / n as f64,
            median: counts[(n - 1) / 2],
            min: counts[0],
            max: counts[n - 1],
        })
    }
}

pub struct CounterIndex {
    qd: QuasiDictionary,
    counts: ValueStore<u8>,
    k: usize,
}

impl CounterIndex {
    pub fn build<S: ReadSource + ?Sized>(bank: &S, params: &IndexParams) -> Result<Self> {
        params.validate()?;
        let table = count_solid(bank, params.k, params.t)?;
        Self::from_table(&table, params)
    }

    pub fn from_table(table: &SolidKmerTable, params: &IndexParams) -> Result<Self> {
        params.validate()?;
        let qd = QuasiDictionary::create(&table.codes(), &params.qd_params())?;
        let mut counts = ValueStore::new(qd.len());
        for &(code, count) in table.entries() {
            let idx = qd.query(code).expect("indexed k-mer is found");
            counts.set(idx, count);
        }
        Ok(CounterIndex {
            qd,
            counts,
            k: table.k(),
        })
    }

    pub fn qd(&self) -> &QuasiDictionary {
        &self.qd
    }

    pub fn counts(&self) -> &ValueStore<u8> {
        &self.counts
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Counts of the read's accepted k-mers, in read order.
    pub fn retrieved_counts(&self, seq: &[u8]) -> Vec<u8> {
        iter_kmers(seq, self.k)
            .filter_map(|(_, kmer)| self.qd.query(kmer.code()))
            .map(|idx| *self.counts.get(idx))
            .collect()
    }

    /// `None` when no k-mer of the read is indexed (including reads shorter than k).
    pub fn count_read(&self, seq: &[u8]) -> Option<CountStats> {
        CountStats::from_counts(&mut self.retrieved_counts(seq))
    }
}

/// Output line: `id\theader\tn\tmean\tmedian\tmin\tmax`, or `id\theader\t0\tnone`.
pub fn format_count_line(id: usize, header: &str, stats: Option<&CountStats>) -> String {
    match stats {
        Some(s) => format!(
            "{id}\t{header}\t{}\t{:.2}\t{}\t{}\t{}",
            s.n_indexed, s.mean, s.median, s.min, s.max
        ),
        None => format!("{id}\t{header}\t0\tnone"),
    }
}

/// Writes one line per read of every query set, in input order. Read ids run
/// on across consecutive query sets.
pub fn run_counter<S: ReadSource, W: Write + ?Sized>(
    index: &CounterIndex,
    queries: &[S],
    out: &mut W,
) -> Result<usize> {
    let mut base = 0;
    for query in queries {
        let mut seen = 0;
        query.for_each_batch(BATCH, &mut |batch: &[ReadRecord]| {
            let lines: Vec<String> = batch
                .par_iter()
                .map(|r| {
                    let stats = index.count_read(&r.seq);
                    format_count_line(base + r.id, &r.header, stats.as_ref())
                })
                .collect();
            for line in lines {
                writeln!(out, "{line}")?;
            }
            seen += batch.len();
            Ok(())
        })?;
        base += seen;
    }
    Ok(base)
}

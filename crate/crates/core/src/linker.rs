//! Similar-read detection through shared solid k-mers.
//!
//! Each solid k-mer of the bank is attached to the sorted list of bank reads
//! containing it. A query read is scored against every bank read reached
//! through those lists by the number of query positions covered by at least
//! one shared k-mer, either over the whole read or over the best window of a
//! fixed size.

use std::io::Write;

use rayon::prelude::*;

use crate::kcount::{count_solid, BATCH};
use crate::kmer::iter_kmers;
use crate::params::IndexParams;
use crate::quasidict::QuasiDictionary;
use crate::seqio::{ReadRecord, ReadSource};
use crate::{Error, Result};

pub const DEFAULT_THRESHOLD: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Window {
    WholeRead,
    Size(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkParams {
    /// Minimum score for a target to be reported.
    pub threshold: usize,
    pub window: Window,
}

impl Default for LinkParams {
    fn default() -> Self {
        LinkParams {
            threshold: DEFAULT_THRESHOLD,
            window: Window::WholeRead,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchResult {
    pub query_id: usize,
    pub target_id: u32,
    pub score: usize,
    /// Start of the best window; `None` in whole-read mode.
    pub window_start: Option<usize>,
}

/// Quasi-dictionary over solid k-mers with one posting list per k-mer,
/// stored as a single CSR array.
pub struct LinkerIndex {
    qd: QuasiDictionary,
    offsets: Vec<u64>,
    postings: Vec<u32>,
    k: usize,
}

/// Distinct slots hit by the k-mers of `seq`, sorted.
fn read_slots(qd: &QuasiDictionary, seq: &[u8], k: usize) -> Vec<u64> {
    let mut slots: Vec<u64> = iter_kmers(seq, k)
        .filter_map(|(_, kmer)| qd.query(kmer.code()))
        .collect();
    slots.sort_unstable();
    slots.dedup();
    slots
}

impl LinkerIndex {
    /// Counts solid k-mers, builds the dictionary, then fills posting lists in
    /// two passes over the bank (sizes, then ids).
    pub fn build<S: ReadSource + ?Sized>(bank: &S, params: &IndexParams) -> Result<Self> {
        params.validate()?;
        let k = params.k;
        let table = count_solid(bank, k, params.t)?;
        let qd = QuasiDictionary::create(&table.codes(), &params.qd_params())?;
        drop(table);

        let mut sizes = vec![0u64; qd.len() + 1];
        bank.for_each_batch(BATCH, &mut |batch: &[ReadRecord]| {
            if let Some(last) = batch.last() {
                if last.id > u32::MAX as usize {
                    return Err(Error::param("bank holds more than 2^32 reads"));
                }
            }
            let per_read: Vec<Vec<u64>> =
                batch.par_iter().map(|r| read_slots(&qd, &r.seq, k)).collect();
            for slots in per_read {
                for s in slots {
                    sizes[s as usize + 1] += 1;
                }
            }
            Ok(())
        })?;
        for i in 1..sizes.len() {
            sizes[i] += sizes[i - 1];
        }
        let offsets = sizes;

        let mut postings = vec![0u32; *offsets.last().unwrap() as usize];
        let mut cursor = offsets.clone();
        bank.for_each_batch(BATCH, &mut |batch: &[ReadRecord]| {
            let per_read: Vec<Vec<u64>> =
                batch.par_iter().map(|r| read_slots(&qd, &r.seq, k)).collect();
            // Reads arrive in id order, so every list stays sorted.
            for (rec, slots) in batch.iter().zip(per_read) {
                for s in slots {
                    let c = &mut cursor[s as usize];
                    postings[*c as usize] = rec.id as u32;
                    *c += 1;
                }
            }
            Ok(())
        })?;

        Ok(LinkerIndex {
            qd,
            offsets,
            postings,
            k,
        })
    }

    pub fn qd(&self) -> &QuasiDictionary {
        &self.qd
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Bank reads containing the k-mer stored at `slot`.
    pub fn posting(&self, slot: u64) -> &[u32] {
        let i = slot as usize;
        &self.postings[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub fn total_postings(&self) -> usize {
        self.postings.len()
    }

    pub fn mean_posting_len(&self) -> f64 {
        if self.qd.is_empty() {
            return 0.0;
        }
        self.postings.len() as f64 / self.qd.len() as f64
    }

    /// Scores `seq` against every bank read sharing an indexed k-mer with it.
    ///
    /// `exclude` drops one target id (the query itself when a set is compared
    /// with itself). Results are sorted by descending score, then target id.
    pub fn link_read(
        &self,
        query_id: usize,
        seq: &[u8],
        params: &LinkParams,
        exclude: Option<u32>,
    ) -> Vec<MatchResult> {
        let k = self.k;
        let mut hits: Vec<(u32, u32)> = Vec::new();
        for (pos, kmer) in iter_kmers(seq, k) {
            if let Some(slot) = self.qd.query(kmer.code()) {
                for &target in self.posting(slot) {
                    if Some(target) != exclude {
                        hits.push((target, pos as u32));
                    }
                }
            }
        }
        hits.sort_unstable();

        let mut results = Vec::new();
        let mut covered = vec![false; seq.len()];
        for group in hits.chunk_by(|a, b| a.0 == b.0) {
            let target = group[0].0;
            let (score, window_start) = match params.window {
                Window::WholeRead => (union_length(group.iter().map(|&(_, p)| p as usize), k), None),
                Window::Size(w) => {
                    covered.fill(false);
                    for &(_, p) in group {
                        covered[p as usize..p as usize + k].fill(true);
                    }
                    let (score, start) = best_window(&covered, w);
                    (score, Some(start))
                }
            };
            if score >= params.threshold {
                results.push(MatchResult {
                    query_id,
                    target_id: target,
                    score,
                    window_start,
                });
            }
        }
        results.sort_by(|a, b| b.score.cmp(&a.score).then(a.target_id.cmp(&b.target_id)));
        results
    }
}

/// Length of the union of `[p, p + k)` over ascending starts `p`.
fn union_length(starts: impl Iterator<Item = usize>, k: usize) -> usize {
    let mut total = 0;
    let mut end = 0;
    for p in starts {
        let lo = p.max(end);
        let hi = p + k;
        if hi > lo {
            total += hi - lo;
            end = hi;
        }
    }
    total
}

/// Maximum number of covered positions in any window of `w` positions, and
/// the smallest start reaching it. Windows longer than the read cover it all.
fn best_window(covered: &[bool], w: usize) -> (usize, usize) {
    let n = covered.len();
    if w >= n {
        return (covered.iter().filter(|&&c| c).count(), 0);
    }
    let mut cur = covered[..w].iter().filter(|&&c| c).count();
    let (mut best, mut best_start) = (cur, 0);
    for i in 1..=n - w {
        cur = cur + covered[i + w - 1] as usize - covered[i - 1] as usize;
        if cur > best {
            best = cur;
            best_start = i;
        }
    }
    (best, best_start)
}

/// `q:t-s t-s ...`, with `@start` after each score in windowed mode.
pub fn format_link_line(query_id: usize, results: &[MatchResult]) -> String {
    let mut line = format!("{query_id}:");
    for (i, r) in results.iter().enumerate() {
        if i > 0 {
            line.push(' ');
        }
        line.push_str(&format!("{}-{}", r.target_id, r.score));
        if let Some(start) = r.window_start {
            line.push_str(&format!("@{start}"));
        }
    }
    line
}

/// One query set to link, and whether it is the bank itself.
pub struct QuerySet<'a, S: ?Sized> {
    pub reads: &'a S,
    pub is_bank: bool,
}

/// Writes one line per query read across all sets, ids running on from set to
/// set. Reads of a set flagged `is_bank` never report themselves.
pub fn run_linker<S: ReadSource + ?Sized, W: Write + ?Sized>(
    index: &LinkerIndex,
    queries: &[QuerySet<'_, S>],
    params: &LinkParams,
    out: &mut W,
) -> Result<usize> {
    let mut base = 0;
    for query in queries {
        let mut seen = 0;
        query.reads.for_each_batch(BATCH, &mut |batch: &[ReadRecord]| {
            let lines: Vec<String> = batch
                .par_iter()
                .map(|r| {
                    let exclude = query.is_bank.then_some(r.id as u32);
                    let results = index.link_read(base + r.id, &r.seq, params, exclude);
                    format_link_line(base + r.id, &results)
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

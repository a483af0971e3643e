//! Quasi-dictionary: a static probabilistic index for k-mer sets.
//!
//! A [`QuasiDictionary`] pairs a minimal perfect hash function ([`Mphf`]) with
//! a packed array of `f`-bit fingerprints. It answers membership-checked index
//! lookups with no false negatives and a false-positive rate near `2^-f`, in
//! about `f + 3.7` bits per key. Two applications are built on it:
//!
//! * [`counter`]: estimate each query read's abundance in a bank from the
//!   counts of its solid k-mers.
//! * [`linker`]: report bank reads sharing k-mers with each query read, scored
//!   by query positions covered.
//!
//! [`eval`] provides a long-read simulator and recall/precision scoring.

pub mod bitrank;
pub mod counter;
mod error;
pub mod eval;
pub mod hash;
pub mod inspect;
mod io;
pub mod kcount;
pub mod kmer;
pub mod linker;
pub mod mphf;
pub mod packed;
mod params;
pub mod quasidict;
pub mod seqio;

pub use bitrank::RankBitVector;
pub use counter::{CountStats, CounterIndex};
pub use error::{Error, Result};
pub use kcount::{count_solid, SolidKmerTable};
pub use kmer::{iter_kmers, Kmer, MAX_K};
pub use linker::{LinkParams, LinkerIndex, MatchResult, Window};
pub use mphf::Mphf;
pub use params::IndexParams;
pub use quasidict::{fingerprint, Fingerprinter, QdParams, QuasiDictionary, ValueStore};
pub use seqio::{open_reads, read_file_of_files, ReadRecord, ReadSource};

//! 2-bit nucleotide k-mers.
//!
//! Bases are coded A=0, C=1, G=2, T=3 with the first base in the most
//! significant position, so numeric order of codes equals lexicographic order
//! of the strings. k is capped at 31, leaving the top two bits of a code zero.

use std::fmt;

use crate::{Error, Result};

pub const MAX_K: usize = 31;

const INVALID: u8 = 4;

static BASE_CODE: [u8; 256] = {
    let mut t = [INVALID; 256];
    t[b'A' as usize] = 0;
    t[b'C' as usize] = 1;
    t[b'G' as usize] = 2;
    t[b'T' as usize] = 3;
    t[b'a' as usize] = 0;
    t[b'c' as usize] = 1;
    t[b'g' as usize] = 2;
    t[b't' as usize] = 3;
    t
};

const BASES: [u8; 4] = *b"ACGT";

/// 2-bit code of a nucleotide, `None` for anything outside ACGT/acgt.
#[inline]
pub fn base_code(b: u8) -> Option<u8> {
    let c = BASE_CODE[b as usize];
    (c != INVALID).then_some(c)
}

pub(crate) fn check_k(k: usize) -> Result<()> {
    if (1..=MAX_K).contains(&k) {
        Ok(())
    } else {
        Err(Error::param(format!("k={k} not in 1..={MAX_K}")))
    }
}

#[inline]
fn mask(k: usize) -> u64 {
    (1u64 << (2 * k)) - 1
}

/// Reverse complement of a `k`-base code.
#[inline]
pub fn revcomp_code(code: u64, k: usize) -> u64 {
    let mut x = !code;
    x = ((x >> 2) & 0x3333_3333_3333_3333) | ((x & 0x3333_3333_3333_3333) << 2);
    x = ((x >> 4) & 0x0f0f_0f0f_0f0f_0f0f) | ((x & 0x0f0f_0f0f_0f0f_0f0f) << 4);
    x.swap_bytes() >> (64 - 2 * k)
}

#[inline]
pub fn canonical_code(code: u64, k: usize) -> u64 {
    code.min(revcomp_code(code, k))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Kmer {
    code: u64,
    k: u8,
}

impl Kmer {
    /// Encodes a sequence of length `1..=31`. Lowercase is accepted.
    pub fn encode(seq: &[u8]) -> Result<Kmer> {
        check_k(seq.len())?;
        let mut code = 0u64;
        for (position, &b) in seq.iter().enumerate() {
            let c = base_code(b).ok_or(Error::NonNucleotide { position })?;
            code = (code << 2) | c as u64;
        }
        Ok(Kmer {
            code,
            k: seq.len() as u8,
        })
    }

    /// Panics if `k` is out of range or `code` has bits above `2k`.
    pub fn from_code(code: u64, k: usize) -> Kmer {
        assert!((1..=MAX_K).contains(&k), "k={k} not in 1..={MAX_K}");
        assert!(code <= mask(k), "code {code:#x} too wide for k={k}");
        Kmer { code, k: k as u8 }
    }

    pub fn code(self) -> u64 {
        self.code
    }

    pub fn k(self) -> usize {
        self.k as usize
    }

    pub fn decode(self) -> Vec<u8> {
        (0..self.k())
            .rev()
            .map(|i| BASES[(self.code >> (2 * i) & 3) as usize])
            .collect()
    }

    pub fn revcomp(self) -> Kmer {
        Kmer {
            code: revcomp_code(self.code, self.k()),
            k: self.k,
        }
    }

    pub fn canonical(self) -> Kmer {
        Kmer {
            code: canonical_code(self.code, self.k()),
            k: self.k,
        }
    }

    pub fn is_canonical(self) -> bool {
        self.code <= revcomp_code(self.code, self.k())
    }
}

impl fmt::Debug for Kmer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Kmer({})", self)
    }
}

impl fmt::Display for Kmer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(std::str::from_utf8(&self.decode()).unwrap())
    }
}

/// Canonical k-mers of a sequence with their start positions.
///
/// Windows containing a non-ACGT byte are skipped. Updates are O(1) per base.
pub struct KmerIter<'a> {
    seq: &'a [u8],
    k: usize,
    next: usize,
    fwd: u64,
    rev: u64,
    /// Consecutive valid bases ending at `next - 1`.
    run: usize,
}

/// Panics if `k` is not in `1..=31`.
pub fn iter_kmers(seq: &[u8], k: usize) -> KmerIter<'_> {
    assert!((1..=MAX_K).contains(&k), "k={k} not in 1..={MAX_K}");
    KmerIter {
        seq,
        k,
        next: 0,
        fwd: 0,
        rev: 0,
        run: 0,
    }
}

impl Iterator for KmerIter<'_> {
    type Item = (usize, Kmer);

    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        let k = self.k;
        let shift = 2 * (k - 1);
        while self.next < self.seq.len() {
            let b = self.seq[self.next];
            self.next += 1;
            match base_code(b) {
                Some(c) => {
                    let c = c as u64;
                    self.fwd = ((self.fwd << 2) | c) & mask(k);
                    self.rev = (self.rev >> 2) | ((3 - c) << shift);
                    self.run += 1;
                    if self.run >= k {
                        return Some((
                            self.next - k,
                            Kmer {
                                code: self.fwd.min(self.rev),
                                k: k as u8,
                            },
                        ));
                    }
                }
                None => self.run = 0,
            }
        }
        None
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.seq.len() - self.next;
        (0, Some(left + usize::from(self.run >= self.k)))
    }
}

/// Reverse complement of a nucleotide string; non-ACGT bytes map to `N`.
pub fn revcomp_seq(seq: &[u8]) -> Vec<u8> {
    seq.iter()
        .rev()
        .map(|&b| match base_code(b) {
            Some(c) => BASES[3 - c as usize],
            None => b'N',
        })
        .collect()
}

//! Plain bit vector with constant-time `rank1`.
//!
//! Bits are stored LSB-first in 64-bit words. One cumulative popcount is kept
//! per 512-bit block, so the sample array adds 12.5% on top of the raw bits and
//! a rank query touches at most eight words.

use std::io::{Read, Write};

use crate::io::{read_u64, read_words, write_u64, write_words};
use crate::{Error, Result};

const WORDS_PER_BLOCK: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankBitVector {
    words: Vec<u64>,
    len: usize,
    /// `samples[b]` = ones in blocks `0..b`; one extra trailing entry holds the total.
    samples: Vec<u64>,
}

impl RankBitVector {
    /// Builds from packed words holding `len` bits. Bits past `len` are cleared.
    pub fn new(mut words: Vec<u64>, len: usize) -> Self {
        let n_words = len.div_ceil(64);
        assert!(
            words.len() >= n_words,
            "{} words cannot hold {len} bits",
            words.len()
        );
        words.truncate(n_words);
        if len & 63 != 0 {
            words[n_words - 1] &= (1u64 << (len % 64)) - 1;
        }
        let samples = compute_samples(&words);
        RankBitVector {
            words,
            len,
            samples,
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if b {
                words[len / 64] |= 1 << (len % 64);
            }
            len += 1;
        }
        Self::new(words, len)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Number of set bits in `[0, i)`. Panics if `i > len`.
    #[inline]
    pub fn rank1(&self, i: usize) -> u64 {
        assert!(i <= self.len, "rank index {i} out of range for length {}", self.len);
        self.rank1_unchecked(i)
    }

    /// `Some(rank1(i))` if bit `i` is set.
    #[inline]
    pub(crate) fn rank_if_set(&self, i: usize) -> Option<u64> {
        let word = self.words[i / 64];
        let bit = i % 64;
        if word >> bit & 1 == 0 {
            return None;
        }
        Some(self.rank1_unchecked(i))
    }

    #[inline]
    fn rank1_unchecked(&self, i: usize) -> u64 {
        let w = i / 64;
        let block = w / WORDS_PER_BLOCK;
        let mut r = self.samples[block];
        for word in &self.words[block * WORDS_PER_BLOCK..w] {
            r += word.count_ones() as u64;
        }
        let rem = i % 64;
        if rem != 0 {
            r += (self.words[w] & ((1u64 << rem) - 1)).count_ones() as u64;
        }
        r
    }

    pub fn count_ones(&self) -> u64 {
        *self.samples.last().unwrap()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Serialized size in bits: length prefix, words and rank samples.
    pub fn size_in_bits(&self) -> u64 {
        64 * (1 + self.words.len() + self.samples.len()) as u64
    }

    pub fn write_to<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        write_u64(w, self.len as u64)?;
        write_words(w, &self.words)?;
        write_words(w, &self.samples)
    }

    pub fn read_from<R: Read + ?Sized>(r: &mut R) -> Result<Self> {
        let len = read_u64(r)? as usize;
        let n_words = len.div_ceil(64);
        let words = read_words(r, n_words as u64)?;
        let samples = read_words(r, (n_words.div_ceil(WORDS_PER_BLOCK) + 1) as u64)?;
        if samples != compute_samples(&words) {
            return Err(Error::Format("rank samples do not match bit words".into()));
        }
        Ok(RankBitVector {
            words,
            len,
            samples,
        })
    }
}

fn compute_samples(words: &[u64]) -> Vec<u64> {
    let mut samples = Vec::with_capacity(words.len() / WORDS_PER_BLOCK + 2);
    let mut acc = 0u64;
    samples.push(0);
    for chunk in words.chunks(WORDS_PER_BLOCK) {
        acc += chunk.iter().map(|w| w.count_ones() as u64).sum::<u64>();
        samples.push(acc);
    }
    samples
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_rank(bits: &[bool], i: usize) -> u64 {
        bits[..i].iter().filter(|&&b| b).count() as u64
    }

    fn parse(s: &str) -> RankBitVector {
        RankBitVector::from_bits(s.bytes().map(|b| b == b'1'))
    }

    #[test]
    fn empty() {
        let v = RankBitVector::from_bits(std::iter::empty());
        assert_eq!(v.rank1(0), 0);
        assert_eq!(v.count_ones(), 0);
    }

    #[test]
    fn small_literals() {
        assert_eq!(parse("10110").rank1(5), 3);
        assert_eq!(parse("1111").rank1(4), 4);
        assert_eq!(parse("0000").rank1(4), 0);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn rank_past_end_is_rejected() {
        parse("101").rank1(4);
    }

    #[test]
    fn new_clears_tail_bits() {
        let v = RankBitVector::new(vec![u64::MAX], 10);
        assert_eq!(v.count_ones(), 10);
        assert_eq!(v.rank1(10), 10);
    }

    #[test]
    fn random_arrays_match_naive_prefix_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let len = rng.gen_range(0..1500);
            let density: f64 = rng.gen();
            let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(density)).collect();
            let v = RankBitVector::from_bits(bits.iter().copied());
            // Every index on short arrays, a sample on longer ones.
            let step = if len < 200 { 1 } else { 7 };
            for i in (0..=len).step_by(step) {
                assert_eq!(v.rank1(i), naive_rank(&bits, i));
            }
            assert_eq!(v.rank1(len), naive_rank(&bits, len));
        }
    }

    #[test]
    fn overhead_within_budget() {
        let v = RankBitVector::new(vec![0xdead_beef; 1 << 14], 64 << 14);
        let raw = (64usize << 14) as f64;
        assert!(v.size_in_bits() as f64 <= raw * 1.25 + 256.0);
    }

    proptest! {
        #[test]
        fn rank_invariants(bits in proptest::collection::vec(any::<bool>(), 0..2000)) {
            let v = RankBitVector::from_bits(bits.iter().copied());
            prop_assert_eq!(v.rank1(bits.len()), v.count_ones());
            for (i, &b) in bits.iter().enumerate() {
                prop_assert_eq!(v.rank1(i + 1) - v.rank1(i), b as u64);
                prop_assert_eq!(v.get(i), b);
            }
        }

        #[test]
        fn serialization_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..3000)) {
            let v = RankBitVector::from_bits(bits);
            let mut buf = Vec::new();
            v.write_to(&mut buf).unwrap();
            prop_assert_eq!(buf.len() as u64 * 8, v.size_in_bits());
            let back = RankBitVector::read_from(&mut buf.as_slice()).unwrap();
            prop_assert_eq!(back, v);
        }
    }
}

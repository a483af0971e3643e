//! Minimal perfect hash function over distinct `u64` keys.
//!
//! Construction is a cascade of bitmaps. At each level the remaining keys are
//! hashed into `gamma * n` slots; slots hit by exactly one key are kept, and the
//! keys that collided move on to the next level with a fresh seed. A key's
//! dense index is the number of kept slots before its own, counted across
//! levels with [`RankBitVector::rank1`]. Keys still colliding after
//! [`MAX_LEVELS`] levels are stored in a small sorted fallback table.

use std::io::{Read, Write};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::bitrank::RankBitVector;
use crate::hash::{level_mix, level_seed, reduce};
use crate::io::{expect_magic, read_u32, read_u64, write_u32, write_u64};
use crate::{Error, Result};

pub const DEFAULT_GAMMA: f64 = 2.0;
pub const DEFAULT_SEED: u64 = 0x5344_4943_5f51_4431;
pub const MAX_LEVELS: usize = 64;

const MAGIC: &[u8; 4] = b"MPHF";
const VERSION: u32 = 1;

/// Below this many keys a level is filled sequentially.
const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq)]
struct Level {
    bits: RankBitVector,
    seed: u64,
    /// Kept slots in all previous levels.
    offset: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mphf {
    levels: Vec<Level>,
    /// Sorted `(key, index)` pairs for keys unresolved after the last level.
    fallback: Vec<(u64, u64)>,
    n_keys: u64,
    gamma: f64,
    seed: u64,
}

#[inline]
fn slot(key: u64, seed: u64, size: usize) -> usize {
    reduce(level_mix(key ^ seed), size as u64) as usize
}

fn level_size(n: usize, gamma: f64) -> usize {
    let raw = (n as f64 * gamma).ceil() as usize;
    raw.max(1).div_ceil(64) * 64
}

fn first_duplicate(keys: &[u64]) -> Option<u64> {
    let mut sorted = keys.to_vec();
    sorted.par_sort_unstable();
    sorted.windows(2).find(|w| w[0] == w[1]).map(|w| w[0])
}

impl Mphf {
    /// Builds with the default master seed.
    pub fn new(keys: &[u64], gamma: f64) -> Result<Self> {
        Self::with_seed(keys, gamma, DEFAULT_SEED)
    }

    pub fn with_seed(keys: &[u64], gamma: f64, seed: u64) -> Result<Self> {
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(Error::param(format!("gamma must be >= 1.0, got {gamma}")));
        }
        let mut levels = Vec::new();
        let mut remaining: Vec<u64> = keys.to_vec();
        let mut offset = 0u64;

        for level in 0..MAX_LEVELS {
            if remaining.is_empty() {
                break;
            }
            let level_seed = level_seed(seed, level);
            let size = level_size(remaining.len(), gamma);
            let seen: Vec<AtomicU64> = (0..size / 64).map(|_| AtomicU64::new(0)).collect();
            let collide: Vec<AtomicU64> = (0..size / 64).map(|_| AtomicU64::new(0)).collect();

            let mark = |&key: &u64| {
                let p = slot(key, level_seed, size);
                let bit = 1u64 << (p % 64);
                if seen[p / 64].fetch_or(bit, Ordering::Relaxed) & bit != 0 {
                    collide[p / 64].fetch_or(bit, Ordering::Relaxed);
                }
            };
            if remaining.len() >= PAR_THRESHOLD {
                remaining.par_iter().for_each(mark);
            } else {
                remaining.iter().for_each(mark);
            }

            let collide: Vec<u64> = collide.into_iter().map(AtomicU64::into_inner).collect();
            let words: Vec<u64> = seen
                .into_iter()
                .zip(&collide)
                .map(|(s, c)| s.into_inner() & !c)
                .collect();

            let collided = |key: &u64| {
                let p = slot(*key, level_seed, size);
                collide[p / 64] >> (p % 64) & 1 == 1
            };
            let before = remaining.len();
            remaining = if before >= PAR_THRESHOLD {
                remaining.par_iter().copied().filter(collided).collect()
            } else {
                remaining.iter().copied().filter(collided).collect()
            };
            if remaining.len() == before {
                // Nothing placed: either an unlucky tiny level or duplicates.
                if let Some(dup) = first_duplicate(&remaining) {
                    return Err(Error::DuplicateKey(dup));
                }
            }

            let bits = RankBitVector::new(words, size);
            let placed = bits.count_ones();
            levels.push(Level {
                bits,
                seed: level_seed,
                offset,
            });
            offset += placed;
        }

        remaining.sort_unstable();
        if let Some(w) = remaining.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateKey(w[0]));
        }
        let fallback = remaining
            .into_iter()
            .enumerate()
            .map(|(i, k)| (k, offset + i as u64))
            .collect();

        Ok(Mphf {
            levels,
            fallback,
            n_keys: keys.len() as u64,
            gamma,
            seed,
        })
    }

    /// Dense index of `key`, or `None` when a non-key misses every level and the
    /// fallback. Non-keys may also receive an arbitrary index.
    #[inline]
    pub fn lookup(&self, key: u64) -> Option<u64> {
        for level in &self.levels {
            let p = slot(key, level.seed, level.bits.len());
            if let Some(r) = level.bits.rank_if_set(p) {
                return Some(level.offset + r);
            }
        }
        self.fallback
            .binary_search_by_key(&key, |&(k, _)| k)
            .ok()
            .map(|i| self.fallback[i].1)
    }

    pub fn len(&self) -> u64 {
        self.n_keys
    }

    pub fn is_empty(&self) -> bool {
        self.n_keys == 0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn fallback_len(&self) -> usize {
        self.fallback.len()
    }

    /// Exact size of [`Mphf::write_to`] output, in bits.
    pub fn size_in_bits(&self) -> u64 {
        let header = 4 + 4 + 8 + 8 + 8 + 4;
        let levels: u64 = self
            .levels
            .iter()
            .map(|l| 64 + l.bits.size_in_bits())
            .sum();
        let fallback = 64 + 128 * self.fallback.len() as u64;
        header * 8 + levels + fallback
    }

    /// Serialized bits per key; `0.0` for an empty set.
    pub fn bits_per_key(&self) -> f64 {
        if self.n_keys == 0 {
            return 0.0;
        }
        self.size_in_bits() as f64 / self.n_keys as f64
    }

    pub fn write_to<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        w.write_all(MAGIC)?;
        write_u32(w, VERSION)?;
        write_u64(w, self.n_keys)?;
        write_u64(w, self.gamma.to_bits())?;
        write_u64(w, self.seed)?;
        write_u32(w, self.levels.len() as u32)?;
        for level in &self.levels {
            write_u64(w, level.seed)?;
            level.bits.write_to(w)?;
        }
        write_u64(w, self.fallback.len() as u64)?;
        for &(k, i) in &self.fallback {
            write_u64(w, k)?;
            write_u64(w, i)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read + ?Sized>(r: &mut R) -> Result<Self> {
        expect_magic(r, MAGIC)?;
        let version = read_u32(r)?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported MPHF version {version}")));
        }
        let n_keys = read_u64(r)?;
        let gamma = f64::from_bits(read_u64(r)?);
        let seed = read_u64(r)?;
        let n_levels = read_u32(r)? as usize;
        if n_levels > MAX_LEVELS {
            return Err(Error::Format(format!("{n_levels} levels exceeds {MAX_LEVELS}")));
        }
        let mut levels = Vec::with_capacity(n_levels);
        let mut offset = 0;
        for _ in 0..n_levels {
            let level_seed = read_u64(r)?;
            let bits = RankBitVector::read_from(r)?;
            if bits.is_empty() {
                return Err(Error::Format("empty MPHF level".into()));
            }
            let placed = bits.count_ones();
            levels.push(Level {
                bits,
                seed: level_seed,
                offset,
            });
            offset += placed;
        }
        let n_fallback = read_u64(r)?;
        if offset + n_fallback != n_keys {
            return Err(Error::Format(format!(
                "levels and fallback hold {} keys, header says {n_keys}",
                offset + n_fallback
            )));
        }
        let fallback = (0..n_fallback)
            .map(|_| Ok((read_u64(r)?, read_u64(r)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mphf {
            levels,
            fallback,
            n_keys,
            gamma,
            seed,
        })
    }
}

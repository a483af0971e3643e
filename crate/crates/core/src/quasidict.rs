//! Quasi-dictionary: an MPHF plus one `f`-bit fingerprint per key.
//!
//! `query` hashes a key with the MPHF and accepts the slot only if the stored
//! fingerprint matches the key's own. Indexed keys always get their slot back;
//! a non-indexed key is accepted with probability about `2^-f`. Applications
//! attach their own per-key data through a [`ValueStore`] addressed by the
//! returned index.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::hash::{fingerprint_mix, FINGERPRINT_MIX, FINGERPRINT_SEED, LEVEL_MIX};
use crate::io::{expect_magic, read_u32, read_u64, read_words, write_u32, write_u64, write_words};
use crate::kmer::MAX_K;
use crate::mphf::{Mphf, DEFAULT_GAMMA, DEFAULT_SEED};
use crate::packed::PackedArray;
use crate::{Error, Result};

pub const DEFAULT_F: u32 = 12;
pub const MAX_F: u32 = 64;

const MAGIC: &[u8; 4] = b"QDIC";
const VERSION: u32 = 1;

/// Mixed fingerprint of `key`, keeping the low `f` bits.
///
/// Panics if `f` is not in `1..=64`.
#[inline]
pub fn fingerprint(key: u64, f: u32) -> u64 {
    assert!((1..=MAX_F).contains(&f), "fingerprint width {f} not in 1..=64");
    let h = fingerprint_mix(key ^ FINGERPRINT_SEED);
    if f == 64 {
        h
    } else {
        h & ((1u64 << f) - 1)
    }
}

/// Fingerprint function bound to a width and, for k-mer keys, a k.
///
/// When `f == 2k` the key code itself is the fingerprint, which makes the
/// dictionary exact over k-mer codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fingerprinter {
    width: u32,
    identity: bool,
}

impl Fingerprinter {
    /// `k == 0` means the keys are arbitrary `u64` values rather than k-mers.
    pub fn new(f: u32, k: u32) -> Result<Self> {
        if !(1..=MAX_F).contains(&f) {
            return Err(Error::param(format!("fingerprint width f={f} not in 1..=64")));
        }
        if k as usize > MAX_K {
            return Err(Error::param(format!("k={k} exceeds {MAX_K}")));
        }
        Ok(Fingerprinter {
            width: f,
            identity: k > 0 && f == 2 * k,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// True when the fingerprint is the raw key code.
    pub fn is_exact(&self) -> bool {
        self.identity
    }

    #[inline]
    pub fn apply(&self, key: u64) -> u64 {
        if self.identity {
            key & (u64::MAX >> (64 - self.width))
        } else {
            fingerprint(key, self.width)
        }
    }
}

/// Construction parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QdParams {
    pub f: u32,
    /// Key length in bases, or 0 for non-k-mer keys.
    pub k: u32,
    pub gamma: f64,
    pub seed: u64,
}

impl Default for QdParams {
    fn default() -> Self {
        QdParams {
            f: DEFAULT_F,
            k: 0,
            gamma: DEFAULT_GAMMA,
            seed: DEFAULT_SEED,
        }
    }
}

impl QdParams {
    pub fn with_f(f: u32) -> Self {
        QdParams {
            f,
            ..Default::default()
        }
    }

    pub fn kmers(k: u32, f: u32) -> Self {
        QdParams {
            f,
            k,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiDictionary {
    mphf: Mphf,
    fingerprints: PackedArray,
    fp: Fingerprinter,
    k: u32,
}

impl QuasiDictionary {
    /// Builds the MPHF over `keys`, then stores each key's fingerprint at its slot.
    pub fn create(keys: &[u64], params: &QdParams) -> Result<Self> {
        let fp = Fingerprinter::new(params.f, params.k)?;
        let mphf = Mphf::with_seed(keys, params.gamma, params.seed)?;

        // Slots are distinct, so the fill can run in parallel as (slot, fp)
        // pairs computed first and written second.
        let slots: Vec<(u64, u64)> = keys
            .par_iter()
            .map(|&key| {
                let idx = mphf.lookup(key).expect("constructed key has a slot");
                (idx, fp.apply(key))
            })
            .collect();
        let mut fingerprints = PackedArray::new(params.f, keys.len());
        for (idx, value) in slots {
            fingerprints.set(idx as usize, value);
        }

        Ok(QuasiDictionary {
            mphf,
            fingerprints,
            fp,
            k: params.k,
        })
    }

    /// Index of `key` in `[0, N)`, or `None` when the key is detected as not indexed.
    #[inline]
    pub fn query(&self, key: u64) -> Option<u64> {
        let idx = self.mphf.lookup(key)?;
        (self.fingerprints.get(idx as usize) == self.fp.apply(key)).then_some(idx)
    }

    pub fn len(&self) -> usize {
        self.mphf.len() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mphf.is_empty()
    }

    pub fn f(&self) -> u32 {
        self.fp.width()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_exact(&self) -> bool {
        self.fp.is_exact()
    }

    pub fn mphf(&self) -> &Mphf {
        &self.mphf
    }

    /// Stored fingerprint at slot `i`.
    pub fn fingerprint_at(&self, i: usize) -> u64 {
        self.fingerprints.get(i)
    }

    /// Bits taken by the packed fingerprint words.
    pub fn fingerprint_bits(&self) -> u64 {
        64 * self.fingerprints.words().len() as u64
    }

    const HEADER_BYTES: u64 = 4 + 4 + 8 + 4 + 4 + 8 * 5 + 8;

    /// Exact size of [`QuasiDictionary::write_to`] output, in bits.
    pub fn size_in_bits(&self) -> u64 {
        Self::HEADER_BYTES * 8 + self.mphf.size_in_bits() + 64 + self.fingerprint_bits()
    }

    pub fn bits_per_key(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.size_in_bits() as f64 / self.len() as f64
    }

    pub fn write_to<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        w.write_all(MAGIC)?;
        write_u32(w, VERSION)?;
        write_u64(w, self.len() as u64)?;
        write_u32(w, self.f())?;
        write_u32(w, self.k)?;
        write_words(w, &LEVEL_MIX)?;
        write_words(w, &FINGERPRINT_MIX)?;
        write_u64(w, FINGERPRINT_SEED)?;
        write_u64(w, self.mphf.seed())?;
        self.mphf.write_to(w)?;
        write_u64(w, self.fingerprints.words().len() as u64)?;
        write_words(w, self.fingerprints.words())
    }

    pub fn read_from<R: Read + ?Sized>(r: &mut R) -> Result<Self> {
        expect_magic(r, MAGIC)?;
        let version = read_u32(r)?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported index version {version}")));
        }
        let n = read_u64(r)? as usize;
        let f = read_u32(r)?;
        let k = read_u32(r)?;
        let level_mix = [read_u64(r)?, read_u64(r)?];
        let fp_mix = [read_u64(r)?, read_u64(r)?];
        let fp_seed = read_u64(r)?;
        if level_mix != LEVEL_MIX || fp_mix != FINGERPRINT_MIX || fp_seed != FINGERPRINT_SEED {
            return Err(Error::Format("index built with different mixer constants".into()));
        }
        let seed = read_u64(r)?;
        let fp = Fingerprinter::new(f, k).map_err(|e| Error::Format(e.to_string()))?;
        let mphf = Mphf::read_from(r)?;
        if mphf.len() as usize != n || mphf.seed() != seed {
            return Err(Error::Format("MPHF section does not match header".into()));
        }
        let n_words = read_u64(r)?;
        let words = read_words(r, n_words)?;
        let fingerprints = PackedArray::from_words(words, f, n)
            .ok_or_else(|| Error::Format("fingerprint array has wrong length".into()))?;
        Ok(QuasiDictionary {
            mphf,
            fingerprints,
            fp,
            k,
        })
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

/// Per-key application data, addressed by the index returned from
/// [`QuasiDictionary::query`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueStore<V> {
    slots: Vec<V>,
}

impl<V: Clone + Default> ValueStore<V> {
    pub fn new(len: usize) -> Self {
        ValueStore {
            slots: vec![V::default(); len],
        }
    }
}

impl<V> ValueStore<V> {
    pub fn from_vec(slots: Vec<V>) -> Self {
        ValueStore { slots }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Panics if `index` is out of range.
    #[inline]
    pub fn get(&self, index: u64) -> &V {
        let len = self.slots.len();
        self.slots
            .get(index as usize)
            .unwrap_or_else(|| panic!("value index {index} out of range for {len} slots"))
    }

    /// Panics if `index` is out of range.
    #[inline]
    pub fn set(&mut self, index: u64, value: V) {
        let len = self.slots.len();
        *self
            .slots
            .get_mut(index as usize)
            .unwrap_or_else(|| panic!("value index {index} out of range for {len} slots")) = value;
    }

    pub fn as_slice(&self) -> &[V] {
        &self.slots
    }
}

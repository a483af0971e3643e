//! 64-bit shift-xor-multiply mixers.
//!
//! Two distinct finalizers are used: the MurmurHash3 `fmix64` finalizer drives
//! the MPHF level hashes, and the SplitMix64 finalizer drives fingerprints and
//! seed derivation. Both are bijections on `u64`. The constants are part of
//! the index file header, so changing them invalidates stored indexes.

/// Multipliers of the MPHF level mixer (MurmurHash3 `fmix64`).
pub const LEVEL_MIX: [u64; 2] = [0xff51_afd7_ed55_8ccd, 0xc4ce_b9fe_1a85_ec53];

/// Multipliers of the fingerprint mixer (SplitMix64 finalizer).
pub const FINGERPRINT_MIX: [u64; 2] = [0xbf58_476d_1ce4_e5b9, 0x94d0_49bb_1331_11eb];

/// Xored into keys before fingerprint mixing.
pub const FINGERPRINT_SEED: u64 = 0x2545_f491_4f6c_dd1d;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
pub fn level_mix(mut h: u64) -> u64 {
    h ^= h >> 33;
    h = h.wrapping_mul(LEVEL_MIX[0]);
    h ^= h >> 33;
    h = h.wrapping_mul(LEVEL_MIX[1]);
    h ^ (h >> 33)
}

#[inline]
pub fn fingerprint_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(FINGERPRINT_MIX[0]);
    z = (z ^ (z >> 27)).wrapping_mul(FINGERPRINT_MIX[1]);
    z ^ (z >> 31)
}

/// Seed of MPHF level `level` under `master`.
#[inline]
pub fn level_seed(master: u64, level: usize) -> u64 {
    fingerprint_mix(master ^ GOLDEN.wrapping_mul(level as u64 + 1))
}

/// Maps `h` uniformly onto `[0, n)` using its high bits.
#[inline]
pub fn reduce(h: u64, n: u64) -> u64 {
    ((h as u128 * n as u128) >> 64) as u64
}

/// `Hasher` for `u64` keys that have no adversarial structure (k-mer codes).
#[derive(Default, Clone, Copy)]
pub struct MixHasher(u64);

impl std::hash::Hasher for MixHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = fingerprint_mix(self.0 ^ b as u64);
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = fingerprint_mix(self.0 ^ v);
    }

    fn write_u32(&mut self, v: u32) {
        self.write_u64(v as u64)
    }
}

pub type MixBuildHasher = std::hash::BuildHasherDefault<MixHasher>;

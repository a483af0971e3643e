//! Fixed-width integer array packed contiguously across 64-bit words.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedArray {
    words: Vec<u64>,
    width: u32,
    len: usize,
}

impl PackedArray {
    /// Zero-filled array of `len` entries of `width` bits (1..=64).
    pub fn new(width: u32, len: usize) -> Self {
        assert!((1..=64).contains(&width), "width {width} not in 1..=64");
        let bits = len as u128 * width as u128;
        let n_words = bits.div_ceil(64) as usize;
        PackedArray {
            words: vec![0; n_words],
            width,
            len,
        }
    }

    pub(crate) fn from_words(words: Vec<u64>, width: u32, len: usize) -> Option<Self> {
        let expected = (len as u128 * width as u128).div_ceil(64) as usize;
        ((1..=64).contains(&width) && words.len() == expected).then_some(PackedArray {
            words,
            width,
            len,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let bit = i * self.width as usize;
        let (w, off) = (bit / 64, bit % 64);
        let mut v = self.words[w] >> off;
        if off + self.width as usize > 64 {
            v |= self.words[w + 1] << (64 - off);
        }
        v & self.mask()
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: u64) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = self.mask();
        debug_assert!(value <= mask, "value {value:#x} wider than {} bits", self.width);
        let value = value & mask;
        let bit = i * self.width as usize;
        let (w, off) = (bit / 64, bit % 64);
        self.words[w] = (self.words[w] & !(mask << off)) | (value << off);
        if off + self.width as usize > 64 {
            let spill = 64 - off;
            self.words[w + 1] = (self.words[w + 1] & !(mask >> spill)) | (value >> spill);
        }
    }
}

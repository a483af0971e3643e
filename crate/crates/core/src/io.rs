//! Little-endian primitives shared by the on-disk formats.

use std::io::{Read, Write};

use crate::{Error, Result};

pub(crate) fn write_u32<W: Write + ?Sized>(w: &mut W, v: u32) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

pub(crate) fn write_u64<W: Write + ?Sized>(w: &mut W, v: u64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

pub(crate) fn write_words<W: Write + ?Sized>(w: &mut W, words: &[u64]) -> Result<()> {
    for &x in words {
        write_u64(w, x)?;
    }
    Ok(())
}

pub(crate) fn read_u8<R: Read + ?Sized>(r: &mut R) -> Result<u8> {
    let mut b = [0u8; 1];
    r.read_exact(&mut b)?;
    Ok(b[0])
}

pub(crate) fn read_u32<R: Read + ?Sized>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub(crate) fn read_u64<R: Read + ?Sized>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

/// Reads `n` words, refusing absurd lengths before allocating.
pub(crate) fn read_words<R: Read + ?Sized>(r: &mut R, n: u64) -> Result<Vec<u64>> {
    if n > (1 << 40) {
        return Err(Error::Format(format!("word count {n} out of range")));
    }
    (0..n).map(|_| read_u64(r)).collect()
}

pub(crate) fn expect_magic<R: Read + ?Sized>(r: &mut R, magic: &[u8; 4]) -> Result<()> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    if &b != magic {
        return Err(Error::Format(format!(
            "expected magic {:?}, found {:?}",
            String::from_utf8_lossy(magic),
            String::from_utf8_lossy(&b)
        )));
    }
    Ok(())
}

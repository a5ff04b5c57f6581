//! On-disk cache of prime and `ℕ^c` membership bitsets.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! "PSGC" | version: u16 | limit: u64 | [num: u32, den: u32] | bitset | checksum: u64
//! ```
//!
//! The exponent pair is present only in membership files. The checksum is
//! 64-bit FNV-1a over every preceding byte.

use std::fs;
use std::path::{Path, PathBuf};

use log::warn;

use crate::ps::PsMembership;
use crate::sieve::{sieve_primes, Bitset, PrimeSieve};
use crate::{Error, RationalExponent, Result};

pub const MAGIC: &[u8; 4] = b"PSGC";
pub const VERSION: u16 = 1;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub fn encode(limit: u64, exponent: Option<RationalExponent>, bits: &Bitset) -> Vec<u8> {
    let mut out = Vec::with_capacity(30 + bits.len() / 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&limit.to_le_bytes());
    if let Some(c) = exponent {
        out.extend_from_slice(&c.num().to_le_bytes());
        out.extend_from_slice(&c.den().to_le_bytes());
    }
    out.extend_from_slice(&bits.to_le_bytes());
    let sum = fnv1a64(&out);
    out.extend_from_slice(&sum.to_le_bytes());
    out
}

/// Decodes a cache image, checking it was written for `limit` (and `exponent`).
pub fn decode(
    bytes: &[u8],
    path: &Path,
    limit: u64,
    exponent: Option<RationalExponent>,
) -> Result<Bitset> {
    let corrupt = |reason: &str| Error::CacheCorrupt {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };
    let header = 14 + if exponent.is_some() { 8 } else { 0 };
    if bytes.len() < header + 8 {
        return Err(corrupt("truncated"));
    }
    let (body, tail) = bytes.split_at(bytes.len() - 8);
    if fnv1a64(body) != u64::from_le_bytes(tail.try_into().unwrap()) {
        return Err(corrupt("checksum mismatch"));
    }
    if &body[..4] != MAGIC {
        return Err(corrupt("bad magic"));
    }
    if u16::from_le_bytes([body[4], body[5]]) != VERSION {
        return Err(corrupt("unsupported version"));
    }
    if u64::from_le_bytes(body[6..14].try_into().unwrap()) != limit {
        return Err(corrupt("limit mismatch"));
    }
    if let Some(c) = exponent {
        let num = u32::from_le_bytes(body[14..18].try_into().unwrap());
        let den = u32::from_le_bytes(body[18..22].try_into().unwrap());
        if (num, den) != (c.num(), c.den()) {
            return Err(corrupt("exponent mismatch"));
        }
    }
    Bitset::from_le_bytes(&body[header..], limit as usize + 1).ok_or_else(|| corrupt("bad bitset"))
}

/// A directory of cached sieves and membership tables.
#[derive(Debug, Clone)]
pub struct SieveCache {
    dir: PathBuf,
}

impl SieveCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn prime_path(&self, limit: u64) -> PathBuf {
        self.dir.join(format!("primes_{limit}.psgc"))
    }

    pub fn membership_path(&self, limit: u64, c: RationalExponent) -> PathBuf {
        self.dir
            .join(format!("members_{limit}_{}_{}.psgc", c.num(), c.den()))
    }

    pub fn read_primes(&self, limit: u64) -> Result<PrimeSieve> {
        let path = self.prime_path(limit);
        let bytes = fs::read(&path)?;
        let bits = decode(&bytes, &path, limit, None)?;
        Ok(PrimeSieve::from_bitset(limit, bits))
    }

    pub fn read_membership(&self, limit: u64, c: RationalExponent) -> Result<PsMembership> {
        let path = self.membership_path(limit, c);
        let bytes = fs::read(&path)?;
        let bits = decode(&bytes, &path, limit, Some(c))?;
        Ok(PsMembership::from_bitset(limit, c, bits))
    }

    fn write(&self, path: &Path, bytes: &[u8]) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Cached sieve for `limit`; a missing or corrupt file is recomputed and
    /// rewritten.
    pub fn primes(&self, limit: u64) -> PrimeSieve {
        match self.read_primes(limit) {
            Ok(s) => return s,
            Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => warn!("{e}; resieving"),
        }
        let sieve = sieve_primes(limit);
        if let Err(e) = self.write(&self.prime_path(limit), &encode(limit, None, sieve.bits())) {
            warn!("cannot write prime cache: {e}");
        }
        sieve
    }

    pub fn membership(&self, limit: u64, c: RationalExponent) -> PsMembership {
        match self.read_membership(limit, c) {
            Ok(m) => return m,
            Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => warn!("{e}; recomputing"),
        }
        let table = PsMembership::new(limit, c);
        let bytes = encode(limit, Some(c), table.bits());
        if let Err(e) = self.write(&self.membership_path(limit, c), &bytes) {
            warn!("cannot write membership cache: {e}");
        }
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::make_exponent;

    #[test]
    fn header_layout() {
        let sieve = sieve_primes(20);
        let bytes = encode(20, None, sieve.bits());
        assert_eq!(&bytes[..4], b"PSGC");
        assert_eq!(&bytes[4..6], &1u16.to_le_bytes());
        assert_eq!(&bytes[6..14], &20u64.to_le_bytes());
        // 21 bits → 3 bytes; primes 2,3,5,7 in byte 0 = 0b1010_1100
        assert_eq!(bytes[14], 0b1010_1100);
        assert_eq!(bytes.len(), 14 + 3 + 8);
        let c = make_exponent(3, 2).unwrap();
        let m = PsMembership::new(20, c);
        let bytes = encode(20, Some(c), m.bits());
        assert_eq!(&bytes[14..18], &3u32.to_le_bytes());
        assert_eq!(&bytes[18..22], &2u32.to_le_bytes());
    }

    #[test]
    fn corrupt_files_are_rejected_and_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SieveCache::new(dir.path());
        let fresh = cache.primes(1000);
        assert_eq!(cache.read_primes(1000).unwrap(), fresh);

        let path = cache.prime_path(1000);
        let mut bytes = fs::read(&path).unwrap();
        bytes[20] ^= 0x10;
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(cache.read_primes(1000), Err(Error::CacheCorrupt { .. })));
        assert_eq!(cache.primes(1000), fresh);
        assert_eq!(cache.read_primes(1000).unwrap(), fresh);
    }

    #[test]
    fn membership_keyed_by_exponent() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SieveCache::new(dir.path());
        let a = make_exponent(11, 10).unwrap();
        let b = make_exponent(3, 2).unwrap();
        let ma = cache.membership(500, a);
        let mb = cache.membership(500, b);
        assert_ne!(ma, mb);
        assert_eq!(cache.read_membership(500, a).unwrap(), ma);
        // a file renamed onto the wrong key is caught by the header
        fs::copy(cache.membership_path(500, a), cache.membership_path(500, b)).unwrap();
        assert!(matches!(cache.read_membership(500, b), Err(Error::CacheCorrupt { .. })));
        assert_eq!(cache.membership(500, b), mb);
    }
}

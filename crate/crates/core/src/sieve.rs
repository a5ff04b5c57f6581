//! Segmented sieve of Eratosthenes producing a dense prime bitset.

use rayon::prelude::*;

/// Dense bitset over `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitset {
    words: Vec<u64>,
    len: usize,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(64), 0);
        if len % 64 != 0 {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % 64)) - 1;
        }
        Self { words, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.len && (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// Little-endian byte image: bit `i` is bit `i % 8` of byte `i / 8`.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.words.iter().flat_map(|w| w.to_le_bytes()).collect();
        out.truncate(self.len.div_ceil(8));
        out
    }

    pub fn from_le_bytes(bytes: &[u8], len: usize) -> Option<Self> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        let words = bytes
            .chunks(8)
            .map(|c| {
                let mut buf = [0u8; 8];
                buf[..c.len()].copy_from_slice(c);
                u64::from_le_bytes(buf)
            })
            .collect();
        let set = Self::from_words(words, len);
        // reject stray bits past the end
        if set.to_le_bytes() != bytes {
            return None;
        }
        Some(set)
    }
}

/// Primality table for `0..=limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSieve {
    limit: u64,
    bits: Bitset,
}

pub const DEFAULT_SEGMENT: usize = 1 << 18;

/// All primes up to `limit`, using the default segment size.
pub fn sieve_primes(limit: u64) -> PrimeSieve {
    PrimeSieve::with_segment(limit, DEFAULT_SEGMENT)
}

fn small_primes(limit: usize) -> Vec<usize> {
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

impl PrimeSieve {
    /// Sieves `[0, limit]` in segments of `segment` numbers (rounded up to a
    /// multiple of 64). Segments are processed in parallel and concatenated in
    /// order, so the result does not depend on the thread count.
    pub fn with_segment(limit: u64, segment: usize) -> Self {
        let len = usize::try_from(limit).expect("limit fits in usize") + 1;
        let segment = segment.max(64).div_ceil(64) * 64;
        let root = (limit as f64).sqrt() as usize + 2;
        let base = small_primes(root);
        let n_segments = len.div_ceil(segment);
        let words: Vec<u64> = (0..n_segments)
            .into_par_iter()
            .flat_map_iter(|s| {
                let lo = s * segment;
                let hi = (lo + segment).min(len);
                sieve_segment(lo, hi, &base)
            })
            .collect();
        Self {
            limit,
            bits: Bitset::from_words(words, len),
        }
    }

    pub fn from_bitset(limit: u64, bits: Bitset) -> Self {
        assert_eq!(bits.len() as u64, limit + 1);
        Self { limit, bits }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn bits(&self) -> &Bitset {
        &self.bits
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n <= self.limit && self.bits.get(n as usize)
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter_ones().map(|i| i as u64)
    }
}

/// Words covering `[lo, hi)` with bit set iff the number is prime.
fn sieve_segment(lo: usize, hi: usize, base: &[usize]) -> Vec<u64> {
    let span = hi - lo;
    let mut words = vec![u64::MAX; span.div_ceil(64)];
    let mut clear = |i: usize| words[i / 64] &= !(1u64 << (i % 64));
    for n in lo..hi.min(2) {
        clear(n - lo);
    }
    for &p in base {
        if p * p >= hi {
            break;
        }
        let mut start = (p * p).max(lo.div_ceil(p) * p);
        while start < hi {
            clear(start - lo);
            start += p;
        }
    }
    if span % 64 != 0 {
        let last = words.len() - 1;
        words[last] &= (1u64 << (span % 64)) - 1;
    }
    words
}

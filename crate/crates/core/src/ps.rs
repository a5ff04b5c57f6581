//! Exact Piatetski-Shapiro arithmetic: `ℕ^c = {⌊n^c⌋ : n ≥ 1}` and its primes.

use rayon::prelude::*;
use serde::Serialize;

use crate::introot::{ceil_root_of_power, cmp_powers, floor_root_of_power};
use crate::sieve::{sieve_primes, Bitset, PrimeSieve};
use crate::{Error, RationalExponent, Real, Result};

/// A prime of `ℕ^c` with its density weight `c·p^(1-1/c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsPrime<T> {
    pub p: u64,
    pub weight: T,
    pub logp: T,
    pub preimage: u64,
}

/// `⌊n^c⌋`, computed as the integer `den`-th root of `n^num`.
///
/// # Panics
/// If `n ≥ 2^32`; see [`checked_floor_pow`].
pub fn floor_pow(n: u64, c: RationalExponent) -> u64 {
    checked_floor_pow(n, c).expect("n below 2^32")
}

pub fn checked_floor_pow(n: u64, c: RationalExponent) -> Result<u64> {
    if n >= 1 << 32 {
        return Err(Error::Overflow(format!("floor_pow({n}, {c})")));
    }
    Ok(floor_root_of_power(n, c.num(), c.den()))
}

/// Largest `n` with `⌊n^c⌋ ≤ limit`, i.e. `|ℕ^c ∩ [1, limit]|`.
pub fn ps_count(limit: u64, c: RationalExponent) -> u64 {
    // ⌊n^c⌋ ≤ limit  ⇔  n^num < (limit+1)^den
    ceil_root_of_power(limit + 1, c.den(), c.num()) - 1
}

/// Whether `m ∈ ℕ^c`: with `k` the least integer satisfying `k^num ≥ m^den`,
/// `m` is a member iff `⌊k^c⌋ = m`.
pub fn is_ps_member(m: u64, c: RationalExponent) -> bool {
    if m == 0 {
        return false;
    }
    let k = ceil_root_of_power(m, c.den(), c.num());
    // ⌊k^c⌋ = m  ⇔  k^num < (m+1)^den, given k^num ≥ m^den
    cmp_powers(k, c.num(), m + 1, c.den()) == std::cmp::Ordering::Less
}

/// `ℕ^c ∩ [1, limit]`, strictly increasing.
pub fn ps_sequence(limit: u64, c: RationalExponent) -> Vec<u64> {
    if limit == 0 {
        return Vec::new();
    }
    let count = ps_count(limit, c);
    (1..count as usize + 1)
        .into_par_iter()
        .with_min_len(4096)
        .map(|n| floor_pow(n as u64, c))
        .collect()
}

/// Membership table for `ℕ^c ∩ [0, limit]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsMembership {
    c: RationalExponent,
    limit: u64,
    bits: Bitset,
}

impl PsMembership {
    pub fn new(limit: u64, c: RationalExponent) -> Self {
        let mut bits = Bitset::new(limit as usize + 1);
        for m in ps_sequence(limit, c) {
            bits.set(m as usize, true);
        }
        Self { c, limit, bits }
    }

    pub fn from_bitset(limit: u64, c: RationalExponent, bits: Bitset) -> Self {
        assert_eq!(bits.len() as u64, limit + 1);
        Self { c, limit, bits }
    }

    pub fn exponent(&self) -> RationalExponent {
        self.c
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn bits(&self) -> &Bitset {
        &self.bits
    }

    #[inline]
    pub fn contains(&self, m: u64) -> bool {
        m <= self.limit && self.bits.get(m as usize)
    }
}

/// Primes `p ≤ limit` lying in `ℕ^c`, ascending.
pub fn ps_primes<T: Real>(limit: u64, c: RationalExponent) -> Vec<PsPrime<T>> {
    if limit < 2 {
        return Vec::new();
    }
    ps_primes_with(&sieve_primes(limit), limit, c)
}

/// As [`ps_primes`], reusing a sieve that covers `limit`.
pub fn ps_primes_with<T: Real>(
    sieve: &PrimeSieve,
    limit: u64,
    c: RationalExponent,
) -> Vec<PsPrime<T>> {
    assert!(sieve.limit() >= limit, "sieve does not cover {limit}");
    ps_sequence(limit, c)
        .into_iter()
        .enumerate()
        .filter(|&(_, m)| sieve.is_prime(m))
        .map(|(i, p)| PsPrime {
            p,
            weight: c.density_weight(p),
            logp: T::of_u64(p).ln(),
            preimage: i as u64 + 1,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::make_exponent;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn c(n: u64, d: u64) -> RationalExponent {
        make_exponent(n, d).unwrap()
    }

    #[test]
    fn floor_pow_examples() {
        assert_eq!(floor_pow(10, c(11, 10)), 12);
        assert_eq!(floor_pow(1, c(11, 10)), 1);
        assert_eq!(floor_pow(1, c(3, 2)), 1);
        assert_eq!(floor_pow(2, c(3, 2)), 2);
        assert_eq!(floor_pow(3, c(3, 2)), 5);
    }

    #[test]
    fn membership_examples() {
        assert!(is_ps_member(5, c(3, 2)));
        assert!(!is_ps_member(3, c(3, 2)));
        assert!(!is_ps_member(4, c(3, 2)));
        assert!(is_ps_member(1, c(3, 2)));
        assert!(is_ps_member(1, c(11, 10)));
        assert!(!is_ps_member(6, c(11, 10)));
    }

    #[test]
    fn sequence_examples() {
        assert_eq!(ps_sequence(15, c(3, 2)), vec![1, 2, 5, 8, 11, 14]);
        assert_eq!(ps_sequence(12, c(11, 10)), vec![1, 2, 3, 4, 5, 7, 8, 9, 11, 12]);
        assert_eq!(ps_sequence(1, c(3, 2)), vec![1]);
        assert_eq!(ps_sequence(1, c(11, 10)), vec![1]);
    }

    #[test]
    fn prime_examples() {
        let p = |l, e| ps_primes::<f64>(l, e).iter().map(|q| q.p).collect::<Vec<_>>();
        assert_eq!(p(12, c(11, 10)), vec![2, 3, 5, 7, 11]);
        assert_eq!(p(14, c(3, 2)), vec![2, 5, 11]);
        assert!(p(1, c(3, 2)).is_empty());
        let eleven = ps_primes::<f64>(14, c(3, 2))[2];
        assert_eq!(eleven.preimage, 5);
        assert!((eleven.weight - 1.5 * 11f64.powf(1.0 / 3.0)).abs() < 1e-13);
        assert!((eleven.logp - 11f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn sequence_matches_membership() {
        for e in [c(11, 10), c(21, 20), c(3, 2), c(7, 5)] {
            let seq = ps_sequence(5000, e);
            let table = PsMembership::new(5000, e);
            for m in 1..=5000u64 {
                assert_eq!(is_ps_member(m, e), seq.binary_search(&m).is_ok(), "m={m} c={e}");
                assert_eq!(table.contains(m), is_ps_member(m, e));
            }
            assert_eq!(seq.len() as u64, ps_count(5000, e));
        }
    }

    #[test]
    fn weight_matches_high_precision_value() {
        // 40-digit reference values
        let cases = [
            (1_000_003u64, c(11, 10), 3.862311960992728324146570080981377405819),
            (999_983u64, c(3, 2), 149.9991499951832878420770244367763320352),
        ];
        for (p, e, exact) in cases {
            let w: f64 = e.density_weight(p);
            assert!((w - exact).abs() / exact < 4.0 * f64::EPSILON, "{w} vs {exact}");
        }
    }

    proptest! {
        #[test]
        fn floor_pow_brackets(n in 1u64..2_000_000, num in 3u64..40, den in 2u64..30) {
            prop_assume!(num > den && num < 2 * den);
            let e = c(num, den);
            let k = floor_pow(n, e);
            let lhs = num_traits::pow(BigUint::from(k), e.den() as usize);
            let mid = num_traits::pow(BigUint::from(n), e.num() as usize);
            let rhs = num_traits::pow(BigUint::from(k + 1), e.den() as usize);
            prop_assert!(lhs <= mid && mid < rhs);
        }
    }
}

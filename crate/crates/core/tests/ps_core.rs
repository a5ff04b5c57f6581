use num_bigint::BigUint;
use psg_core::introot::ceil_root_of_power;
use psg_core::ps::ps_count;
use psg_core::{
    floor_pow, is_ps_member, make_exponent, ps_primes, ps_sequence, sieve_primes, PrimeSieve,
    RationalExponent,
};

fn c(n: u64, d: u64) -> RationalExponent {
    make_exponent(n, d).unwrap()
}

/// Plain odd-only Eratosthenes, independent of the segmented sieve.
fn count_primes_oracle(limit: usize) -> usize {
    let half = (limit + 1) / 2;
    let mut composite = vec![false; half];
    let mut i = 3;
    while i * i <= limit {
        if !composite[i / 2] {
            let mut j = i * i;
            while j <= limit {
                composite[j / 2] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    1 + composite.iter().skip(1).filter(|&&x| !x).count()
}

#[test]
fn prime_count_to_ten_to_the_eight() {
    let sieve = sieve_primes(100_000_000);
    assert_eq!(sieve.count(), 5_761_455);
    assert_eq!(sieve.count(), count_primes_oracle(100_000_000));
    let small = PrimeSieve::with_segment(1_000_000, 1 << 12);
    assert_eq!(small.count(), count_primes_oracle(1_000_000));
}

#[test]
fn exactness_near_upper_end_of_range() {
    // c = 73/64 - 1/1000 = 9117/8000; n^9117 has ~10^5 bits, so a short range
    let e = c(9117, 8000);
    assert_eq!((e.num(), e.den()), (9117, 8000));
    for n in (1..=60u64).chain([97, 128, 255]) {
        let k = floor_pow(n, e);
        let mid = BigUint::from(n).pow(e.num());
        assert!(BigUint::from(k).pow(e.den()) <= mid);
        assert!(mid < BigUint::from(k + 1).pow(e.den()));
    }
}

/// `⌈m^(1/c)⌉ ≠ ⌈(m+1)^(1/c)⌉`, the integer form of the sawtooth criterion.
fn ceiling_criterion(m: u64, e: RationalExponent) -> bool {
    ceil_root_of_power(m, e.den(), e.num()) != ceil_root_of_power(m + 1, e.den(), e.num())
}

#[test]
fn membership_matches_ceiling_criterion() {
    for e in [c(11, 10), c(21, 20), c(3, 2), c(9117, 8000)] {
        let limit = if e.num() > 1000 { 2_000 } else { 100_000 };
        for m in 1..=limit {
            assert_eq!(is_ps_member(m, e), ceiling_criterion(m, e), "m={m} c={e}");
        }
    }
}

#[test]
fn counting_function_is_largest_preimage() {
    for e in [c(11, 10), c(3, 2), c(7, 4)] {
        for big_n in [1u64, 2, 10, 999, 1000, 123_456, 1_000_000] {
            let count = ps_count(big_n, e);
            assert!(floor_pow(count, e) <= big_n);
            assert!(floor_pow(count + 1, e) > big_n);
            assert_eq!(ps_sequence(big_n, e).len() as u64, count);
            let root = (big_n as f64).powf(1.0 / e.value::<f64>()).floor() as u64;
            assert!(count.abs_diff(root) <= 1, "N={big_n} c={e}");
        }
    }
}

#[test]
fn density_sums_to_one() {
    // direct summation of c·m^(1-1/c) over ℕ^c ∩ [1, N]
    let e = c(11, 10);
    let big_n = 1_000_000u64;
    let total: f64 = ps_sequence(big_n, e)
        .iter()
        .map(|&m| 1.1 * (m as f64).powf(1.0 / 11.0))
        .sum();
    assert!((total / big_n as f64 - 1.0).abs() < 0.01, "{}", total / big_n as f64);
}

#[test]
fn ps_primes_are_primes_with_preimages() {
    let sieve = sieve_primes(200_000);
    for e in [c(11, 10), c(3, 2)] {
        let primes = ps_primes::<f64>(200_000, e);
        assert!(primes.windows(2).all(|w| w[0].p < w[1].p));
        for q in &primes {
            assert!(sieve.is_prime(q.p));
            assert_eq!(floor_pow(q.preimage, e), q.p);
        }
        let expected = ps_sequence(200_000, e).into_iter().filter(|&m| sieve.is_prime(m)).count();
        assert_eq!(primes.len(), expected);
    }
}

#[test]
fn f32_weights_track_f64() {
    let e = c(11, 10);
    let a = ps_primes::<f32>(50_000, e);
    let b = ps_primes::<f64>(50_000, e);
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!(((x.weight as f64) - y.weight).abs() < 1e-5 * y.weight);
    }
}

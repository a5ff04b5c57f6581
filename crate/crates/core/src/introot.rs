//! Exact integer k-th roots by Newton iteration.
//!
//! All floors of rational powers in the crate reduce to [`floor_root`]: for
//! `c = num/den`, `⌊n^c⌋ = ⌊(n^num)^(1/den)⌋`. A floating-point estimate seeds
//! the iteration; it never decides the result.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{FromPrimitive, ToPrimitive};

/// Unsigned integer types the root routines run on.
pub trait ExactInt: Clone + Ord + Integer + ToPrimitive + FromPrimitive {
    fn bit_len(&self) -> u64;
    /// `self^k`, or `None` if it does not fit the type.
    fn checked_power(&self, k: u32) -> Option<Self>;
}

impl ExactInt for u64 {
    fn bit_len(&self) -> u64 {
        (64 - self.leading_zeros()) as u64
    }

    fn checked_power(&self, k: u32) -> Option<Self> {
        self.checked_pow(k)
    }
}

impl ExactInt for u128 {
    fn bit_len(&self) -> u64 {
        (128 - self.leading_zeros()) as u64
    }

    fn checked_power(&self, k: u32) -> Option<Self> {
        self.checked_pow(k)
    }
}

impl ExactInt for BigUint {
    fn bit_len(&self) -> u64 {
        self.bits()
    }

    fn checked_power(&self, k: u32) -> Option<Self> {
        Some(self.pow(k))
    }
}

/// `base^k ≤ x`, with overflow counting as "greater".
fn power_le<T: ExactInt>(base: &T, k: u32, x: &T) -> bool {
    base.checked_power(k).is_some_and(|v| v <= *x)
}

fn newton_step<T: ExactInt>(x: &T, k: u32, y: &T) -> T {
    let km1 = T::from_u32(k - 1).unwrap();
    let kk = T::from_u32(k).unwrap();
    let quotient = y.checked_power(k - 1).map_or_else(T::zero, |p| x.clone() / p);
    (km1 * y.clone() + quotient) / kk
}

fn initial_estimate<T: ExactInt>(x: &T, k: u32, hint: Option<f64>) -> T {
    let from_float = |r: f64| -> Option<T> {
        if r.is_finite() && r >= 0.0 {
            T::from_f64(r.floor())
        } else {
            None
        }
    };
    if let Some(y) = hint.and_then(from_float) {
        return y;
    }
    if let Some(y) = x.to_f64().map(|f| f.powf(1.0 / k as f64)).and_then(from_float) {
        return y;
    }
    // 2^ceil(bits/k) is always above the root
    let e = x.bit_len().div_ceil(k as u64);
    num_traits::pow(T::from_u32(2).unwrap(), e as usize)
}

/// `⌊x^(1/k)⌋`, exactly. `hint` is an optional floating-point guess of the
/// root; a good guess skips the Newton loop entirely.
pub fn floor_root<T: ExactInt>(x: &T, k: u32, hint: Option<f64>) -> T {
    assert!(k >= 1, "root index must be positive");
    if k == 1 || x.is_zero() || x.is_one() {
        return x.clone();
    }
    let mut y = initial_estimate(x, k, hint);
    if !y.is_zero() {
        let next = y.clone() + T::one();
        if power_le(&y, k, x) && !power_le(&next, k, x) {
            return y;
        }
    }
    if y.is_zero() {
        y = T::one();
    }
    // After one step the iterate sits at or above the root and decreases
    // monotonically until it reaches it.
    y = newton_step(x, k, &y);
    loop {
        let next = newton_step(x, k, &y);
        if next >= y {
            break;
        }
        y = next;
    }
    while !power_le(&y, k, x) {
        y = y - T::one();
    }
    while power_le(&(y.clone() + T::one()), k, x) {
        y = y + T::one();
    }
    y
}

/// Smallest `y` with `y^k ≥ x`.
pub fn ceil_root<T: ExactInt>(x: &T, k: u32, hint: Option<f64>) -> T {
    let y = floor_root(x, k, hint);
    if y.checked_power(k).is_some_and(|v| v == *x) {
        y
    } else {
        y + T::one()
    }
}

fn checked_pow_u128(base: u64, exp: u32) -> Option<u128> {
    (base as u128).checked_pow(exp)
}

/// `⌊(base^exp)^(1/k)⌋` for machine-sized `base`, switching to big integers
/// when `base^exp` leaves `u128`.
pub fn floor_root_of_power(base: u64, exp: u32, k: u32) -> u64 {
    let hint = (base as f64).powf(exp as f64 / k as f64);
    let root = match checked_pow_u128(base, exp) {
        Some(x) => floor_root(&x, k, Some(hint)).to_u64(),
        None => {
            let x = num_traits::pow(BigUint::from(base), exp as usize);
            floor_root(&x, k, Some(hint)).to_u64()
        }
    };
    root.expect("root of a u64 power with exp < 2k fits in u64")
}

/// Smallest `y` with `y^k ≥ base^exp`.
pub fn ceil_root_of_power(base: u64, exp: u32, k: u32) -> u64 {
    let hint = (base as f64).powf(exp as f64 / k as f64);
    let root = match checked_pow_u128(base, exp) {
        Some(x) => ceil_root(&x, k, Some(hint)).to_u64(),
        None => {
            let x = num_traits::pow(BigUint::from(base), exp as usize);
            ceil_root(&x, k, Some(hint)).to_u64()
        }
    };
    root.expect("root fits in u64")
}

/// Exact comparison of `a^p` against `b^q`.
pub fn cmp_powers(a: u64, p: u32, b: u64, q: u32) -> std::cmp::Ordering {
    match (checked_pow_u128(a, p), checked_pow_u128(b, q)) {
        (Some(x), Some(y)) => x.cmp(&y),
        _ => {
            let x = num_traits::pow(BigUint::from(a), p as usize);
            let y = num_traits::pow(BigUint::from(b), q as usize);
            x.cmp(&y)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Roots;
    use proptest::prelude::*;

    #[test]
    fn small_roots() {
        assert_eq!(floor_root(&8u128, 2, None), 2);
        assert_eq!(floor_root(&9u128, 2, None), 3);
        assert_eq!(floor_root(&26u128, 3, None), 2);
        assert_eq!(floor_root(&27u128, 3, None), 3);
        assert_eq!(ceil_root(&28u128, 3, None), 4);
        assert_eq!(ceil_root(&27u128, 3, None), 3);
        assert_eq!(floor_root(&0u128, 5, None), 0);
        assert_eq!(floor_root(&1u128, 5, None), 1);
    }

    #[test]
    fn ten_to_the_eleventh() {
        // 12^10 ≤ 10^11 < 13^10
        assert_eq!(floor_root_of_power(10, 11, 10), 12);
    }

    #[test]
    fn wrong_hints_are_corrected() {
        let x = num_traits::pow(BigUint::from(12345u64), 7);
        for hint in [0.0, 1.0, 12344.0, 12346.0, 1e9, f64::NAN] {
            assert_eq!(floor_root(&x, 7, Some(hint)), BigUint::from(12345u64));
        }
        let below = x.clone() - 1u32;
        assert_eq!(floor_root(&below, 7, Some(12345.0)), BigUint::from(12344u64));
    }

    #[test]
    fn huge_operand_without_float_estimate() {
        // 3^2000 has ~3170 bits, beyond f64 range
        let x = num_traits::pow(BigUint::from(3u32), 2000);
        assert_eq!(floor_root(&x, 1000, None), BigUint::from(9u32));
        assert_eq!(floor_root(&(x.clone() - 1u32), 1000, None), BigUint::from(8u32));
    }

    proptest! {
        #[test]
        fn agrees_with_num_integer(x in any::<u128>(), k in 1u32..12) {
            prop_assert_eq!(floor_root(&x, k, None), x.nth_root(k));
        }

        #[test]
        fn big_agrees_with_num_bigint(base in 1u64..(1u64 << 32), exp in 1u32..40, k in 2u32..30) {
            let x = num_traits::pow(BigUint::from(base), exp as usize);
            prop_assert_eq!(floor_root(&x, k, None), x.nth_root(k));
            prop_assert_eq!(
                BigUint::from(floor_root_of_power(base, exp.min(2 * k - 1), k)),
                num_traits::pow(BigUint::from(base), exp.min(2 * k - 1) as usize).nth_root(k)
            );
        }
    }
}

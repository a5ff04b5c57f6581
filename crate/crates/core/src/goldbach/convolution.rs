use num_complex::Complex;
use num_traits::Zero;
use rustfft::FftPlanner;

use crate::{Error, Real, Result, WeightedSequence};

/// `(f1 * f2 * f3)(n)` for `n ∈ [0, 3N]`; entries below 3 are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleConvolution<T> {
    values: Vec<T>,
}

impl<T: Real> TripleConvolution<T> {
    pub fn get(&self, n: u64) -> T {
        self.values.get(n as usize).copied().unwrap_or_else(T::zero)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Largest `n` with a stored value, `3N`.
    pub fn max_n(&self) -> u64 {
        self.values.len() as u64 - 1
    }
}

fn linear_convolution<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + x * y;
        }
    }
    out
}

/// Index `n` holds `f(n)`; index 0 is zero.
fn padded<T: Real>(f: &WeightedSequence<T>, len: usize) -> Vec<Complex<T>> {
    let mut buf = vec![Complex::zero(); len];
    for (i, &v) in f.values().iter().enumerate() {
        buf[i + 1] = Complex::new(v, T::zero());
    }
    buf
}

/// Triple additive convolution of three sequences on a common `[1, N]`.
///
/// With `use_fft` the product is taken in frequency space on a zero-padded
/// grid of length at least `3N + 1` (no wraparound); otherwise two direct
/// pairwise convolutions are used.
pub fn triple_convolution<T: Real>(
    f1: &WeightedSequence<T>,
    f2: &WeightedSequence<T>,
    f3: &WeightedSequence<T>,
    use_fft: bool,
) -> Result<TripleConvolution<T>> {
    let n = f1.n_max();
    if f2.n_max() != n || f3.n_max() != n {
        return Err(Error::LengthMismatch(n, f2.n_max(), f3.n_max()));
    }
    let len = 3 * n + 1;
    if !use_fft {
        let lift = |f: &WeightedSequence<T>| {
            std::iter::once(T::zero()).chain(f.values().iter().copied()).collect::<Vec<_>>()
        };
        let mut values = linear_convolution(&linear_convolution(&lift(f1), &lift(f2)), &lift(f3));
        values.truncate(len);
        return Ok(TripleConvolution { values });
    }

    let size = len.next_power_of_two();
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);

    let transform = |g: &WeightedSequence<T>| {
        let mut buf = padded(g, size);
        forward.process(&mut buf);
        buf
    };
    // identical inputs are transformed once
    let mut acc = transform(f1);
    let s2 = (f2 != f1).then(|| transform(f2));
    let s3 = (f3 != f1 && f3 != f2).then(|| transform(f3));
    let third_is_second = f3 != f1 && f3 == f2;
    for (i, a) in acc.iter_mut().enumerate() {
        let x = *a;
        let y = s2.as_ref().map_or(x, |s| s[i]);
        let z = match &s3 {
            Some(s) => s[i],
            None if third_is_second => y,
            None => x,
        };
        *a = x * y * z;
    }
    drop(s2);
    drop(s3);
    inverse.process(&mut acc);
    let scale = T::of_u64(size as u64).recip();
    let values = acc[..len].iter().map(|z| z.re * scale).collect();
    Ok(TripleConvolution { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{indicator_seq, SequenceKind};
    use proptest::prelude::*;

    fn seq(v: Vec<f64>) -> WeightedSequence<f64> {
        WeightedSequence::new(v, SequenceKind::Custom).unwrap()
    }

    #[test]
    fn point_masses() {
        let delta = |k: usize| {
            let mut v = vec![0.0; 6];
            v[k - 1] = 1.0;
            seq(v)
        };
        for fft in [false, true] {
            let out = triple_convolution(&delta(2), &delta(3), &delta(6), fft).unwrap();
            for n in 0..=18u64 {
                let want = if n == 11 { 1.0 } else { 0.0 };
                assert!((out.get(n) - want).abs() < 1e-9, "n={n}");
            }
        }
    }

    #[test]
    fn trinomial_and_indicator() {
        let f = seq(vec![1.0, 1.0]);
        for fft in [false, true] {
            let out = triple_convolution(&f, &f, &f, fft).unwrap();
            let got: Vec<f64> = (3..=6).map(|n| out.get(n).round()).collect();
            assert_eq!(got, vec![1.0, 3.0, 3.0, 1.0]);
            assert_eq!(out.max_n(), 6);

            let one = indicator_seq::<f64>(4);
            let out = triple_convolution(&one, &one, &one, fft).unwrap();
            for n in 0..=12u64 {
                // enumerate all 64 triples in [1, 4]^3
                let mut want = 0;
                for a in 1..=4 {
                    for b in 1..=4 {
                        for c in 1..=4 {
                            want += (a + b + c == n) as u32;
                        }
                    }
                }
                assert!((out.get(n) - want as f64).abs() < 1e-9, "n={n}");
            }
            assert!((out.get(3) - 1.0).abs() < 1e-9);
            assert!((out.get(6) - 10.0).abs() < 1e-9);
        }
    }

    #[test]
    fn length_mismatch() {
        let a = indicator_seq::<f64>(3);
        let b = indicator_seq::<f64>(4);
        assert!(matches!(
            triple_convolution(&a, &a, &b, true),
            Err(Error::LengthMismatch(3, 3, 4))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn fft_agrees_with_direct(
            (a, b, c) in (1usize..256).prop_flat_map(|n| (
                prop::collection::vec(0.0f64..5.0, n),
                prop::collection::vec(0.0f64..5.0, n),
                prop::collection::vec(0.0f64..5.0, n),
            ))
        ) {
            let (a, b, c) = (seq(a), seq(b), seq(c));
            let fast = triple_convolution(&a, &b, &c, true).unwrap();
            let slow = triple_convolution(&a, &b, &c, false).unwrap();
            let scale = slow.values().iter().copied().fold(0.0, f64::max).max(1.0);
            for (x, y) in fast.values().iter().zip(slow.values()) {
                prop_assert!((x - y).abs() <= 1e-6 * scale);
            }
        }
    }
}

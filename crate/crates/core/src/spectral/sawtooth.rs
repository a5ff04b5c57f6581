//! The sawtooth `ψ(t) = {t} - 1/2`, its truncated Fourier expansion, and the
//! second-derivative van der Corput ratio.

use num_complex::Complex;
use num_traits::Zero;

use super::e;
use crate::Real;

pub fn psi<T: Real>(t: T) -> T {
    t - t.floor() - T::of_f64(0.5)
}

/// `sin(2πx)`, exactly zero at half-integers.
fn sin_turns<T: Real>(x: T) -> T {
    let r = x - x.floor();
    if r.is_zero() || r == T::of_f64(0.5) {
        T::zero()
    } else {
        (T::TAU() * r).sin()
    }
}

/// `|ψ(t) + (1/2πi)·Σ_{0<|h|≤H} e(ht)/h|`.
///
/// Pairing `h` with `-h` turns the sum into `(1/π)·Σ_{h=1}^{H} sin(2πht)/h`.
pub fn psi_fourier_error<T: Real>(t: T, h_max: u32) -> T {
    assert!(h_max >= 2, "truncation needs H ≥ 2");
    let partial: T = (1..=h_max)
        .map(|h| {
            let h = T::of_u64(h as u64);
            sin_turns(h * t) / h
        })
        .sum();
    (psi(t) + partial / T::PI()).abs()
}

/// `min{1, 1/(H‖t‖)}`.
pub fn psi_error_envelope<T: Real>(t: T, h_max: u32) -> T {
    let r = t - t.floor();
    let dist = r.min(T::one() - r);
    if dist.is_zero() {
        return T::one();
    }
    T::one().min(T::one() / (T::of_u64(h_max as u64) * dist))
}

/// `|Σ_{⌈X0⌉ ≤ n ≤ ⌊X0+Y⌋} e(f(n))| / (Y·Δ^(1/2) + Δ^(-1/2))`.
///
/// The caller vouches that `|f''| ∈ [Δ/2, 2Δ]` on the range.
pub fn vdc_ratio<T: Real, F: Fn(T) -> T>(phase: F, x0: T, y: u64, delta: T) -> T {
    assert!(delta > T::zero(), "Δ must be positive");
    let lo = x0.ceil();
    let hi = (x0 + T::of_u64(y)).floor();
    let mut sum = Complex::<T>::zero();
    let mut n = lo;
    while n <= hi {
        sum = sum + e(phase(n));
        n = n + T::one();
    }
    let yy = T::of_u64(y);
    sum.norm() / (yy * delta.sqrt() + delta.sqrt().recip())
}

//! The Fourier side: `f̂(θ) = Σ_n f(n)·e(nθ)` with `e(x) = exp(2πix)`.

mod arcs;
mod grid;
mod moments;
mod sawtooth;

pub use arcs::{arc_partition, classify_theta, ArcClass, ArcPartition, ArcSup, MajorArc};
pub use grid::{
    default_grid_size, dft_grid, natural_ps_discrepancy, sup_discrepancy,
    sup_discrepancy_with_location, twist_identity_residual, twist_identity_rhs,
    weighted_exp_sum, SpectrumGrid, TwistKind,
};
pub use moments::{large_spectrum, lq_moment, v0_threshold, LargeSpectrumReport, MomentReport};
pub use sawtooth::{psi, psi_error_envelope, psi_fourier_error, vdc_ratio};

use num_complex::Complex;

use crate::Real;

/// `e(x) = exp(2πix)`, reducing `x` modulo 1 first.
#[inline]
pub fn e<T: Real>(x: T) -> Complex<T> {
    let r = x - x.floor();
    Complex::from_polar(T::one(), T::TAU() * r)
}

/// Sums in fixed-size chunks and then adds the partial sums in order, so the
/// result is bit-identical for any thread count.
pub(crate) fn stable_sum<T: Real>(items: &[T]) -> T {
    use rayon::prelude::*;
    const CHUNK: usize = 1 << 12;
    let partial: Vec<T> = items
        .par_chunks(CHUNK)
        .map(|c| c.iter().copied().sum())
        .collect();
    partial.into_iter().sum()
}

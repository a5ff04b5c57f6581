//! Piatetski-Shapiro primes and the ternary Goldbach problem.
//!
//! The crate is organised bottom-up:
//!
//! * [`exponent`], [`introot`], [`sieve`], [`ps`] and [`cache`] provide exact
//!   arithmetic on `⌊n^c⌋` for rational `c ∈ (1, 2)`, prime sieving and the
//!   Piatetski-Shapiro primes with their density weights `c·p^(1-1/c)·log p`.
//! * [`weights`] builds the W-tricked sequences `λ_{W,b}`, `ν^{(c)}_{W,b}` and
//!   `τ^{(c)}_{W,b}` on `[1, N]`.
//! * [`spectral`] evaluates their Fourier transforms `f̂(θ) = Σ f(n) e(nθ)` and
//!   the measurements built on top of them (discrepancies, moments, large
//!   spectra, Farey arcs, sawtooth and van der Corput checks).
//! * [`goldbach`] counts and certifies representations `n = p1 + p2 + p3`.
//!
//! Floating-point code is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`, which is what every tolerance in
//! the test-suite assumes.

pub mod cache;
pub mod error;
pub mod exponent;
pub mod goldbach;
pub mod introot;
pub mod ps;
pub mod sieve;
pub mod spectral;
pub mod weights;

use std::fmt::{Debug, Display};

pub use num_complex::Complex;

pub use error::{Error, Result};
pub use exponent::{make_exponent, RationalExponent};
pub use goldbach::{
    check_transference, count_representations, find_representation, triple_convolution,
    verify_range, weighted_positivity, GoldbachConfig, RangeSummary, RepresentationReport,
    TransferenceParams, TransferenceReport,
};
pub use ps::{floor_pow, is_ps_member, ps_primes, ps_sequence, PsMembership};
pub use sieve::{sieve_primes, Bitset, PrimeSieve};
pub use spectral::{
    arc_partition, classify_theta, dft_grid, large_spectrum, lq_moment, natural_ps_discrepancy,
    psi, psi_fourier_error, sup_discrepancy, twist_identity_residual, v0_threshold, vdc_ratio,
    weighted_exp_sum, ArcClass, ArcPartition, LargeSpectrumReport, MomentReport, SpectrumGrid,
    TwistKind,
};
pub use weights::{
    ap_mean, indicator_seq, lambda_seq, nu_seq, primorial_w, residue_select, tau_seq, Progression,
    ResidueSelection, SequenceKind, WeightedSequence, WtrickContext,
};

/// Scalar used by every floating-point computation in the crate.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + rustfft::FftNum
    + Default
    + Display
    + Debug
    + Send
    + Sync
    + std::iter::Sum
{
    /// Converts an exact integer into the scalar.
    fn of_u64(n: u64) -> Self {
        <Self as num_traits::FromPrimitive>::from_u64(n).expect("u64 is representable")
    }

    fn of_f64(x: f64) -> Self {
        <Self as num_traits::FromPrimitive>::from_f64(x).expect("f64 is representable")
    }

    fn as_f64(self) -> f64 {
        <Self as num_traits::ToPrimitive>::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type PsPrime = ps::PsPrime<f64>;
pub type Sequence = WeightedSequence<f64>;
pub type Spectrum = SpectrumGrid<f64>;
pub type Convolution = goldbach::TripleConvolution<f64>;

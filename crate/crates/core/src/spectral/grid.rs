use std::io::Write;

use num_complex::Complex;
use num_traits::Zero;
use rustfft::FftPlanner;

use super::e;
use crate::ps::ps_sequence;
use crate::weights::{indicator_seq, lambda_seq, nu_seq, SequenceKind, WtrickContext};
use crate::{Error, RationalExponent, Real, Result, WeightedSequence};

/// `f̂(j/M)` for `j = 0..M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid<T> {
    values: Vec<Complex<T>>,
    total_mass: T,
    n_max: usize,
}

impl<T: Real> SpectrumGrid<T> {
    /// Grid size `M`.
    pub fn m(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn total_mass(&self) -> T {
        self.total_mass
    }

    /// Length of the transformed sequence.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn theta(&self, j: usize) -> T {
        T::of_u64(j as u64) / T::of_u64(self.m() as u64)
    }

    pub fn moduli(&self) -> Vec<T> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_modulus(&self) -> T {
        self.values.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }

    /// CSV `j,theta,re,im,modulus`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "j,theta,re,im,modulus")?;
        for (j, v) in self.values.iter().enumerate() {
            writeln!(
                out,
                "{j},{},{},{},{}",
                self.theta(j).as_f64(),
                v.re.as_f64(),
                v.im.as_f64(),
                v.norm().as_f64()
            )?;
        }
        Ok(())
    }
}

/// Next power of two at or above `n_max`, times four.
pub fn default_grid_size(n_max: usize) -> usize {
    4 * n_max.next_power_of_two()
}

/// Samples `f̂` on the `M`-grid by one inverse FFT. Position `n` goes to slot
/// `n mod M`; since `e(nj/M)` has period `M` in `n`, this is exact whenever
/// `M ≥ n_max`.
pub fn dft_grid<T: Real>(f: &WeightedSequence<T>, m: usize) -> Result<SpectrumGrid<T>> {
    if m < f.n_max() {
        return Err(Error::GridTooSmall {
            m,
            n_max: f.n_max(),
        });
    }
    let mut buf = vec![Complex::<T>::zero(); m];
    for (i, &v) in f.values().iter().enumerate() {
        buf[(i + 1) % m].re = buf[(i + 1) % m].re + v;
    }
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    Ok(SpectrumGrid {
        values: buf,
        total_mass: f.sum(),
        n_max: f.n_max(),
    })
}

/// Direct `Σ_n f(n)·e(nθ)` over the support of `f`.
pub fn weighted_exp_sum<T: Real>(f: &WeightedSequence<T>, theta: T) -> Complex<T> {
    f.support().fold(Complex::zero(), |acc, (n, v)| {
        acc + e(T::of_u64(n) * theta).scale(v)
    })
}

pub fn sup_discrepancy<T: Real>(g1: &SpectrumGrid<T>, g2: &SpectrumGrid<T>) -> Result<T> {
    sup_discrepancy_with_location(g1, g2).map(|(d, _)| d)
}

/// `max_j |g1[j] - g2[j]|` together with the maximising `j`.
pub fn sup_discrepancy_with_location<T: Real>(
    g1: &SpectrumGrid<T>,
    g2: &SpectrumGrid<T>,
) -> Result<(T, usize)> {
    if g1.m() != g2.m() {
        return Err(Error::GridMismatch(g1.m(), g2.m()));
    }
    Ok(g1
        .values
        .iter()
        .zip(&g2.values)
        .map(|(a, b)| (a - b).norm())
        .enumerate()
        .fold((T::zero(), 0), |best, (j, d)| if d > best.0 { (d, j) } else { best }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistKind {
    Nu,
    Lambda,
}

/// `(φ(W)/W²)·Σ_{k=1}^{W} e((θ+k)·b/W)·ĝ((θ+k)/W)` where `g` is the
/// untwisted (`W = 1`) sequence over the same `X`.
pub fn twist_identity_rhs<T: Real>(
    untwisted: &WeightedSequence<T>,
    ctx: &WtrickContext,
    theta: T,
) -> Complex<T> {
    let w = T::of_u64(ctx.modulus);
    let b = T::of_u64(ctx.b);
    let scale = T::of_u64(ctx.phi()) / (w * w);
    (1..=ctx.modulus)
        .map(|k| {
            let shifted = theta + T::of_u64(k);
            e(shifted * b / w) * weighted_exp_sum(untwisted, shifted / w)
        })
        .fold(Complex::zero(), |acc, z| acc + z)
        .scale(scale)
}

/// `|ŝ_{W,b}(θ) - RHS|` for `s = ν^{(c)}` or `s = λ`; both sides by direct
/// summation.
pub fn twist_identity_residual<T: Real>(
    ctx: &WtrickContext,
    c: RationalExponent,
    theta: T,
    kind: TwistKind,
) -> Result<T> {
    let base = WtrickContext::untwisted(ctx.x)?;
    let (twisted, untwisted) = match kind {
        TwistKind::Nu => (nu_seq::<T>(ctx, c), nu_seq::<T>(&base, c)),
        TwistKind::Lambda => (lambda_seq::<T>(ctx), lambda_seq::<T>(&base)),
    };
    let lhs = weighted_exp_sum(&twisted, theta);
    Ok((lhs - twist_identity_rhs(&untwisted, ctx, theta)).norm())
}

/// `max_j |Σ_{n ≤ N, n ∈ ℕ^c} c·n^(1-1/c)·e(nθ_j) - Σ_{n ≤ N} e(nθ_j)|`.
pub fn natural_ps_discrepancy<T: Real>(n: usize, c: RationalExponent, m: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let mut weights = vec![T::zero(); n];
    for k in ps_sequence(n as u64, c) {
        weights[k as usize - 1] = c.density_weight(k);
    }
    let ps = WeightedSequence::new(weights, SequenceKind::Tau)?;
    let flat = indicator_seq::<T>(n);
    sup_discrepancy(&dft_grid(&ps, m)?, &dft_grid(&flat, m)?)
}

//! The W-trick: weighted sequences `λ_{W,b}`, `ν^{(c)}_{W,b}`, `τ^{(c)}_{W,b}`
//! on `[1, N]` with `N = ⌊X/W⌋ + 1`, and progression averages.
//!
//! Throughout, position `n` carries the integer `W·n - b`.

mod io;

use serde::Serialize;

use crate::ps::{ps_primes_with, ps_sequence};
use crate::sieve::{sieve_primes, PrimeSieve};
use crate::{Error, RationalExponent, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    Lambda,
    Nu,
    Tau,
    Indicator,
    Custom,
}

impl SequenceKind {
    pub fn code(self) -> u8 {
        match self {
            Self::Lambda => 0,
            Self::Nu => 1,
            Self::Tau => 2,
            Self::Indicator => 3,
            Self::Custom => 4,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Some(match code {
            0 => Self::Lambda,
            1 => Self::Nu,
            2 => Self::Tau,
            3 => Self::Indicator,
            4 => Self::Custom,
            _ => return None,
        })
    }
}

/// A nonnegative function on `[1, n_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSequence<T> {
    values: Vec<T>,
    kind: SequenceKind,
}

impl<T: Real> WeightedSequence<T> {
    /// `values[i]` is the value at `n = i + 1`.
    pub fn new(values: Vec<T>, kind: SequenceKind) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty sequence".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite() || *v < T::zero()) {
            return Err(Error::InvalidWeight { n: i as u64 + 1 });
        }
        Ok(Self { values, kind })
    }

    pub fn zeros(n_max: usize, kind: SequenceKind) -> Self {
        assert!(n_max >= 1);
        Self {
            values: vec![T::zero(); n_max],
            kind,
        }
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Value at `n`; zero outside `[1, n_max]`.
    #[inline]
    pub fn get(&self, n: u64) -> T {
        if n == 0 {
            return T::zero();
        }
        self.values.get(n as usize - 1).copied().unwrap_or_else(T::zero)
    }

    fn set(&mut self, n: u64, v: T) {
        self.values[n as usize - 1] = v;
    }

    pub fn sum(&self) -> T {
        self.values.iter().copied().sum()
    }

    /// `(n, f(n))` for every `n` with `f(n) > 0`.
    pub fn support(&self) -> impl Iterator<Item = (u64, T)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > T::zero())
            .map(|(i, &v)| (i as u64 + 1, v))
    }

    /// Pointwise `f ≤ g`; returns the first violation.
    pub fn first_excess_over(&self, majorant: &Self) -> Option<u64> {
        (1..=self.n_max().max(majorant.n_max()) as u64).find(|&n| self.get(n) > majorant.get(n))
    }

    pub fn map(&self, kind: SequenceKind, f: impl Fn(u64, T) -> T) -> Result<Self> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| f(i as u64 + 1, v))
            .collect();
        Self::new(values, kind)
    }
}

/// Product of the primes `≤ w_threshold`.
pub fn primorial_w(w_threshold: u64) -> Result<u64> {
    let mut w: u64 = 1;
    for p in 2..=w_threshold {
        if is_small_prime(p) {
            w = w
                .checked_mul(p)
                .filter(|&v| v <= i64::MAX as u64)
                .ok_or_else(|| Error::Overflow(format!("primorial of {w_threshold}")))?;
        }
    }
    Ok(w)
}

fn is_small_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Largest prime dividing a primorial, or `None` if `w` is not a primorial.
fn primorial_index(w: u64) -> Option<u64> {
    if w == 0 {
        return None;
    }
    let mut rest = w;
    let mut last = 0;
    let mut p = 2;
    while rest > 1 {
        if rest % p != 0 {
            return None;
        }
        rest /= p;
        last = p;
        p += 1;
        while !is_small_prime(p) {
            p += 1;
        }
    }
    Some(last)
}

pub fn is_primorial(w: u64) -> bool {
    primorial_index(w).is_some()
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Euler's totient of a primorial.
fn primorial_phi(w: u64) -> u64 {
    let mut phi = 1;
    let mut rest = w;
    let mut p = 2;
    while rest > 1 {
        if rest % p == 0 {
            phi *= p - 1;
            rest /= p;
        }
        p += 1;
    }
    phi
}

/// Parameters of one W-tricked residue class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WtrickContext {
    pub x: u64,
    pub w_threshold: u64,
    pub modulus: u64,
    pub b: u64,
    pub n: u64,
}

impl WtrickContext {
    pub fn new(x: u64, w_threshold: u64, b: u64) -> Result<Self> {
        let modulus = primorial_w(w_threshold)?;
        Self::build(x, w_threshold, modulus, b)
    }

    /// Context for a given primorial modulus `W`.
    pub fn with_modulus(x: u64, modulus: u64, b: u64) -> Result<Self> {
        let w_threshold = primorial_index(modulus).ok_or(Error::NotPrimorial(modulus))?;
        Self::build(x, w_threshold, modulus, b)
    }

    /// `W = 1, b = 0`.
    pub fn untwisted(x: u64) -> Result<Self> {
        Self::with_modulus(x, 1, 0)
    }

    fn build(x: u64, w_threshold: u64, modulus: u64, b: u64) -> Result<Self> {
        if x == 0 {
            return Err(Error::InvalidArgument("X must be positive".into()));
        }
        let ok = if modulus == 1 {
            b == 0
        } else {
            (1..modulus).contains(&b) && gcd(b, modulus) == 1
        };
        if !ok {
            return Err(Error::BadResidue { b, w: modulus });
        }
        Ok(Self {
            x,
            w_threshold,
            modulus,
            b,
            n: x / modulus + 1,
        })
    }

    pub fn phi(&self) -> u64 {
        primorial_phi(self.modulus)
    }

    /// `φ(W)/W`.
    pub fn density_factor<T: Real>(&self) -> T {
        T::of_u64(self.phi()) / T::of_u64(self.modulus)
    }

    /// The position `n` carrying the integer `m`, if `m ≡ -b (mod W)` and
    /// `m ∈ [1, X]`.
    pub fn position_of(&self, m: u64) -> Option<u64> {
        ((1..=self.x).contains(&m) && (m + self.b) % self.modulus == 0)
            .then(|| (m + self.b) / self.modulus)
    }

    /// `W·n - b` when it lies in `[1, X]`.
    pub fn integer_at(&self, n: u64) -> Option<u64> {
        let m = (self.modulus * n).checked_sub(self.b)?;
        (1..=self.x).contains(&m).then_some(m)
    }
}

/// `λ_{W,b}(n) = (φ(W)/W)·log p` when `W·n - b = p` is prime, else 0.
pub fn lambda_seq<T: Real>(ctx: &WtrickContext) -> WeightedSequence<T> {
    lambda_seq_with(ctx, &sieve_primes(ctx.x))
}

pub fn lambda_seq_with<T: Real>(ctx: &WtrickContext, sieve: &PrimeSieve) -> WeightedSequence<T> {
    assert!(sieve.limit() >= ctx.x, "sieve does not cover X");
    let scale = ctx.density_factor::<T>();
    let mut seq = WeightedSequence::zeros(ctx.n as usize, SequenceKind::Lambda);
    for p in sieve.primes().take_while(|&p| p <= ctx.x) {
        if let Some(n) = ctx.position_of(p) {
            seq.set(n, scale * T::of_u64(p).ln());
        }
    }
    seq
}

/// `ν^{(c)}_{W,b}(n) = (φ(W)/W)·c·p^(1-1/c)·log p` when `W·n - b = p` is a
/// prime of `ℕ^c`, else 0.
pub fn nu_seq<T: Real>(ctx: &WtrickContext, c: RationalExponent) -> WeightedSequence<T> {
    nu_seq_with(ctx, c, &sieve_primes(ctx.x))
}

pub fn nu_seq_with<T: Real>(
    ctx: &WtrickContext,
    c: RationalExponent,
    sieve: &PrimeSieve,
) -> WeightedSequence<T> {
    let scale = ctx.density_factor::<T>();
    let mut seq = WeightedSequence::zeros(ctx.n as usize, SequenceKind::Nu);
    for q in ps_primes_with::<T>(sieve, ctx.x, c) {
        if let Some(n) = ctx.position_of(q.p) {
            seq.set(n, scale * q.weight * q.logp);
        }
    }
    seq
}

/// `τ^{(c)}_{W,b}(n) = c·m^(1-1/c)` when `W·n - b = m ∈ ℕ^c`, else 0.
pub fn tau_seq<T: Real>(ctx: &WtrickContext, c: RationalExponent) -> WeightedSequence<T> {
    let mut seq = WeightedSequence::zeros(ctx.n as usize, SequenceKind::Tau);
    for m in ps_sequence(ctx.x, c) {
        if let Some(n) = ctx.position_of(m) {
            seq.set(n, c.density_weight(m));
        }
    }
    seq
}

/// `1_{[N]}`.
pub fn indicator_seq<T: Real>(n: usize) -> WeightedSequence<T> {
    assert!(n >= 1, "indicator needs N ≥ 1");
    WeightedSequence {
        values: vec![T::one(); n],
        kind: SequenceKind::Indicator,
    }
}

/// `{r, r + q, …, r + (L-1)q}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Progression {
    pub start: u64,
    pub step: u64,
    pub len: u64,
}

impl Progression {
    pub fn new(start: u64, step: u64, len: u64) -> Self {
        Self { start, step, len }
    }

    pub fn last(&self) -> u64 {
        self.start + (self.len - 1) * self.step
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> {
        let Self { start, step, len } = *self;
        (0..len).map(move |j| start + j * step)
    }

    pub fn fits(&self, n_max: usize) -> bool {
        self.start >= 1 && self.step >= 1 && self.len >= 1 && self.last() <= n_max as u64
    }
}

/// `(1/L)·Σ_j f(r + jq)`.
pub fn ap_mean<T: Real>(f: &WeightedSequence<T>, p: &Progression) -> Result<T> {
    if !p.fits(f.n_max()) {
        return Err(Error::OutOfBounds {
            start: p.start,
            step: p.step,
            len: p.len,
            n_max: f.n_max() as u64,
        });
    }
    let total: T = p.iter().map(|n| f.get(n)).sum();
    Ok(total / T::of_u64(p.len))
}

/// Residues `b_i` coprime to `W` with `m ≡ -(b1+b2+b3) (mod W)` and the
/// target position `n = (m + b1 + b2 + b3)/W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResidueSelection {
    pub b: [u64; 3],
    pub n: u64,
}

/// First admissible triple in lexicographic order.
pub fn residue_select(m: u64, w: u64) -> Result<ResidueSelection> {
    if !is_primorial(w) {
        return Err(Error::NotPrimorial(w));
    }
    if w == 1 {
        return Ok(ResidueSelection { b: [0; 3], n: m });
    }
    let units: Vec<u64> = (1..w).filter(|&b| gcd(b, w) == 1).collect();
    for &b1 in &units {
        for &b2 in &units {
            for &b3 in &units {
                let s = b1 + b2 + b3;
                if (m + s) % w == 0 {
                    return Ok(ResidueSelection {
                        b: [b1, b2, b3],
                        n: (m + s) / w,
                    });
                }
            }
        }
    }
    Err(Error::NoSolution { m, w })
}

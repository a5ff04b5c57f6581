//! Ternary Goldbach for Piatetski-Shapiro primes: counting, witnesses, range
//! verification by FFT, and the transference-hypothesis checks.

mod convolution;
mod transference;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use convolution::{triple_convolution, TripleConvolution};
pub use transference::{
    check_transference, weighted_positivity, PositivityEvaluator, TransferenceParams,
    TransferenceReport, DEFAULT_SEED,
};

use crate::ps::ps_primes_with;
use crate::sieve::{sieve_primes, Bitset, PrimeSieve};
use crate::weights::{is_primorial, SequenceKind};
use crate::{Error, RationalExponent, Result, WeightedSequence};

/// Counts coming out of the FFT are cross-checked against direct counting up
/// to this `n`.
pub const DIRECT_CHECK_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GoldbachConfig {
    pub c: [RationalExponent; 3],
    pub x: u64,
    pub modulus: u64,
    pub use_fft: bool,
}

impl GoldbachConfig {
    pub fn new(c: [RationalExponent; 3], x: u64, modulus: u64, use_fft: bool) -> Result<Self> {
        if !is_primorial(modulus) {
            return Err(Error::NotPrimorial(modulus));
        }
        if x == 0 {
            return Err(Error::InvalidArgument("X must be positive".into()));
        }
        Ok(Self {
            c,
            x,
            modulus,
            use_fft,
        })
    }

    /// All three exponents equal to `c`, `W = 2`, FFT on.
    pub fn uniform(c: RationalExponent, x: u64) -> Self {
        Self {
            c: [c; 3],
            x,
            modulus: 2,
            use_fft: true,
        }
    }
}

/// The primes of `ℕ^{c_i}` up to a limit, as sorted lists and bitsets.
#[derive(Debug, Clone)]
pub struct PrimeTables {
    limit: u64,
    lists: [Vec<u64>; 3],
    members: [Bitset; 3],
}

impl PrimeTables {
    pub fn new(limit: u64, c: [RationalExponent; 3]) -> Self {
        Self::with_sieve(&sieve_primes(limit.max(2)), limit, c)
    }

    pub fn with_sieve(sieve: &PrimeSieve, limit: u64, c: [RationalExponent; 3]) -> Self {
        let build = |e: RationalExponent| -> Vec<u64> {
            if limit < 2 {
                return Vec::new();
            }
            ps_primes_with::<f64>(sieve, limit, e).iter().map(|q| q.p).collect()
        };
        let l0 = build(c[0]);
        let l1 = if c[1] == c[0] { l0.clone() } else { build(c[1]) };
        let l2 = match () {
            _ if c[2] == c[0] => l0.clone(),
            _ if c[2] == c[1] => l1.clone(),
            _ => build(c[2]),
        };
        let bits = |list: &[u64]| {
            let mut b = Bitset::new(limit as usize + 1);
            for &p in list {
                b.set(p as usize, true);
            }
            b
        };
        let members = [bits(&l0), bits(&l1), bits(&l2)];
        Self {
            limit,
            lists: [l0, l1, l2],
            members,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self, i: usize) -> &[u64] {
        &self.lists[i]
    }

    pub fn contains(&self, i: usize, p: u64) -> bool {
        p <= self.limit && self.members[i].get(p as usize)
    }

    fn pairs(&self, n: u64) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        self.lists[0]
            .iter()
            .take_while(move |&&p1| p1 < n)
            .flat_map(move |&p1| {
                self.lists[1]
                    .iter()
                    .take_while(move |&&p2| p1 + p2 < n)
                    .map(move |&p2| (p1, p2, n - p1 - p2))
            })
            .filter(|&(_, _, p3)| self.contains(2, p3))
    }

    /// Ordered triples `(p1, p2, p3)` with `p_i` a prime of `ℕ^{c_i}` summing to `n`.
    pub fn count(&self, n: u64) -> u64 {
        assert!(n <= self.limit + 4, "tables stop at {}", self.limit);
        self.pairs(n).count() as u64
    }

    /// Lexicographically smallest triple.
    pub fn witness(&self, n: u64) -> Option<(u64, u64, u64)> {
        assert!(n <= self.limit + 4, "tables stop at {}", self.limit);
        self.pairs(n).next()
    }

    /// Indicator of the primes of `ℕ^{c_i}`, on `[1, len]`.
    fn indicator(&self, i: usize, len: usize) -> WeightedSequence<f64> {
        let mut v = vec![0.0; len];
        for &p in self.lists[i].iter().take_while(|&&p| p as usize <= len) {
            v[p as usize - 1] = 1.0;
        }
        WeightedSequence::new(v, SequenceKind::Custom).expect("0/1 weights")
    }

    /// `c·p^(1-1/c)·log p` on the primes of `ℕ^{c_i}`, on `[1, len]`.
    fn weighted(&self, i: usize, c: RationalExponent, len: usize) -> WeightedSequence<f64> {
        let mut v = vec![0.0; len];
        for &p in self.lists[i].iter().take_while(|&&p| p as usize <= len) {
            v[p as usize - 1] = c.density_weight::<f64>(p) * (p as f64).ln();
        }
        WeightedSequence::new(v, SequenceKind::Nu).expect("positive weights")
    }
}

pub fn count_representations(n: u64, cfg: &GoldbachConfig) -> u64 {
    PrimeTables::new(n, cfg.c).count(n)
}

pub fn find_representation(n: u64, cfg: &GoldbachConfig) -> Option<(u64, u64, u64)> {
    PrimeTables::new(n, cfg.c).witness(n)
}

/// Ordered representations with `p_i ≤ X` and `p_i ≡ -b_i (mod W)`, the
/// triples that a W-tricked convolution sees.
pub fn count_representations_mod(n: u64, cfg: &GoldbachConfig, b: [u64; 3]) -> u64 {
    let tables = PrimeTables::new(n.min(cfg.x), cfg.c);
    let ok = |i: usize, p: u64| p <= cfg.x && (p + b[i]) % cfg.modulus == 0;
    tables
        .pairs(n)
        .filter(|&(p1, p2, p3)| ok(0, p1) && ok(1, p2) && ok(2, p3))
        .count() as u64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepresentationReport {
    pub n: u64,
    #[serde(rename = "count")]
    pub ordered_count: u64,
    pub witness: Option<(u64, u64, u64)>,
    /// `ν1 * ν2 * ν3 (n)` with untwisted weights `c·p^(1-1/c)·log p`.
    #[serde(skip)]
    pub weighted_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeSummary {
    pub range: (u64, u64),
    pub checked: usize,
    pub exceptions: Vec<u64>,
    pub largest_exception: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct RangeOutcome {
    pub reports: Vec<RepresentationReport>,
    pub summary: RangeSummary,
}

impl RangeOutcome {
    pub fn exceptions_above(&self, floor: u64) -> impl Iterator<Item = u64> + '_ {
        self.summary.exceptions.iter().copied().filter(move |&n| n > floor)
    }
}

/// Rounds FFT output to integers, refusing values that are not clearly near one.
fn round_counts(raw: &[f64]) -> Result<Vec<u64>> {
    raw.iter()
        .enumerate()
        .map(|(n, &v)| {
            let r = v.round();
            if (v - r).abs() > 0.25 || r < 0.0 {
                Err(Error::PrecisionLoss(format!("count at n = {n} is {v}")))
            } else {
                Ok(r as u64)
            }
        })
        .collect()
}

/// Exact moment identities `Σ r(s) = P1·P2·P3` and
/// `Σ s·r(s) = S1·P2·P3 + P1·S2·P3 + P1·P2·S3`.
fn check_checksums(counts: &[u64], tables: &PrimeTables, len: usize) -> Result<()> {
    let stats = |i: usize| {
        let ps = tables.lists[i].iter().take_while(|&&p| p as usize <= len);
        let (k, s) = ps.fold((0u128, 0u128), |(k, s), &p| (k + 1, s + p as u128));
        (k, s)
    };
    let (k1, s1) = stats(0);
    let (k2, s2) = stats(1);
    let (k3, s3) = stats(2);
    let total: u128 = counts.iter().map(|&c| c as u128).sum();
    let first: u128 = counts.iter().enumerate().map(|(s, &c)| s as u128 * c as u128).sum();
    if total != k1 * k2 * k3 || first != s1 * k2 * k3 + k1 * s2 * k3 + k1 * k2 * s3 {
        return Err(Error::PrecisionLoss("convolution checksum mismatch".into()));
    }
    Ok(())
}

/// Reports for every odd `n ∈ [lo, hi]`.
///
/// With `use_fft`, all counts come from one triple convolution of the
/// prime indicators; rounding margin, two exact checksums, and direct counts
/// for `n ≤ DIRECT_CHECK_LIMIT` guard the result.
pub fn verify_range(lo: u64, hi: u64, cfg: &GoldbachConfig) -> Result<RangeOutcome> {
    if lo > hi || hi > 3 * cfg.x {
        return Err(Error::InvalidArgument(format!(
            "range [{lo}, {hi}] must satisfy lo ≤ hi ≤ 3X = {}",
            3 * cfg.x
        )));
    }
    let start = Instant::now();
    let tables = PrimeTables::new(hi, cfg.c);
    let odd: Vec<u64> = (lo..=hi).filter(|n| n % 2 == 1).collect();
    let len = hi.max(1) as usize;

    let (counts, weighted): (Vec<u64>, Vec<f64>) = if cfg.use_fft {
        let ind: Vec<_> = (0..3).map(|i| tables.indicator(i, len)).collect();
        let conv = triple_convolution(&ind[0], &ind[1], &ind[2], true)?;
        drop(ind);
        let all = round_counts(conv.values())?;
        check_checksums(&all, &tables, len)?;
        drop(conv);
        for &n in odd.iter().take_while(|&&n| n <= DIRECT_CHECK_LIMIT) {
            let direct = tables.count(n);
            if direct != all[n as usize] {
                return Err(Error::PrecisionLoss(format!(
                    "FFT count {} differs from direct count {direct} at n = {n}",
                    all[n as usize]
                )));
            }
        }
        let wt: Vec<_> = (0..3).map(|i| tables.weighted(i, cfg.c[i], len)).collect();
        let wconv = triple_convolution(&wt[0], &wt[1], &wt[2], true)?;
        odd.iter()
            .map(|&n| {
                let count = all[n as usize];
                let w = if count == 0 { 0.0 } else { wconv.get(n).max(0.0) };
                (count, w)
            })
            .unzip()
    } else {
        odd.par_iter()
            .map(|&n| {
                let mut count = 0;
                let mut w = 0.0;
                for (p1, p2, p3) in tables.pairs(n) {
                    count += 1;
                    w += [p1, p2, p3]
                        .iter()
                        .zip(&cfg.c)
                        .map(|(&p, e)| e.density_weight::<f64>(p) * (p as f64).ln())
                        .product::<f64>();
                }
                (count, w)
            })
            .unzip()
    };

    let reports: Vec<RepresentationReport> = odd
        .par_iter()
        .zip(counts.par_iter().zip(weighted.par_iter()))
        .map(|(&n, (&count, &w))| RepresentationReport {
            n,
            ordered_count: count,
            witness: if count > 0 { tables.witness(n) } else { None },
            weighted_value: w,
        })
        .collect();
    if let Some(bad) = reports.iter().find(|r| (r.ordered_count > 0) != r.witness.is_some()) {
        return Err(Error::PrecisionLoss(format!("no witness found for n = {}", bad.n)));
    }
    let exceptions: Vec<u64> = reports
        .iter()
        .filter(|r| r.ordered_count == 0)
        .map(|r| r.n)
        .collect();
    let summary = RangeSummary {
        range: (lo, hi),
        checked: reports.len(),
        largest_exception: exceptions.last().copied(),
        exceptions,
        runtime_ms: Some(start.elapsed().as_millis() as u64),
    };
    Ok(RangeOutcome { reports, summary })
}

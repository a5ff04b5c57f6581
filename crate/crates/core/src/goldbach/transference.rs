//! Numerical checks of the three transference hypotheses and of the
//! W-tricked positivity `f1 * f2 * f3 (n) > 0`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::GoldbachConfig;
use crate::sieve::{sieve_primes, PrimeSieve};
use crate::spectral::{default_grid_size, dft_grid, lq_moment, sup_discrepancy};
use crate::weights::{ap_mean, indicator_seq, nu_seq_with, residue_select, Progression};
use crate::{Error, RationalExponent, Real, Result, WeightedSequence, WtrickContext};

/// `"PSGL"` as a big-endian integer.
pub const DEFAULT_SEED: u64 = 0x5053_474C;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferenceParams {
    pub eta: f64,
    pub epsilon: f64,
    pub q_exponent: f64,
    pub k: f64,
    /// Progression steps `1..=ap_step_max` are tested.
    pub ap_step_max: u64,
    /// Random progressions drawn per step, on top of the extreme ones.
    pub ap_samples: usize,
    pub seed: u64,
}

impl Default for TransferenceParams {
    fn default() -> Self {
        Self {
            eta: 0.3,
            epsilon: 0.1,
            q_exponent: 2.6,
            k: 50.0,
            ap_step_max: 2,
            ap_samples: 64,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferenceReport {
    pub eta: f64,
    pub epsilon: f64,
    pub q_exponent: f64,
    pub k: f64,
    pub cond_i_pass: bool,
    /// Smallest progression mean seen; `None` if no progression of length
    /// `≥ ηN` fits.
    pub worst_ap_mean: Option<f64>,
    pub worst_ap: Option<Progression>,
    pub aps_tested: usize,
    /// `‖ν̂ - 1̂_[N]‖_∞ / N` over the default grid.
    pub cond_ii_value: f64,
    pub cond_ii_pass: bool,
    /// `‖f̂‖_q / N^(1-1/q)`.
    pub cond_iii_ratio: f64,
    pub cond_iii_pass: bool,
}

impl TransferenceReport {
    pub fn passes(&self) -> bool {
        self.cond_i_pass && self.cond_ii_pass && self.cond_iii_pass
    }
}

fn progressions(n: u64, p: &TransferenceParams) -> Vec<Progression> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let min_len = ((p.eta * n as f64).ceil() as u64).max(1);
    let mut out = Vec::new();
    for q in 1..=p.ap_step_max {
        let max_len = (n - 1) / q + 1;
        if min_len > max_len {
            continue;
        }
        out.push(Progression::new(1, q, max_len));
        out.push(Progression::new(1, q, min_len));
        out.push(Progression::new(n - (min_len - 1) * q, q, min_len));
        for _ in 0..p.ap_samples {
            let len = rng.gen_range(min_len..=max_len);
            let start = rng.gen_range(1..=n - (len - 1) * q);
            out.push(Progression::new(start, q, len));
        }
    }
    out
}

/// Tests `f` against the hypotheses with majorant `nu`:
/// (i) progression means `≥ 1/3 + ε` for lengths `≥ ηN` (sampled),
/// (ii) `‖ν̂ - 1̂_[N]‖_∞ ≤ ηN`, (iii) `‖f̂‖_q ≤ K·N^(1-1/q)`.
pub fn check_transference<T: Real>(
    f: &WeightedSequence<T>,
    nu: &WeightedSequence<T>,
    params: &TransferenceParams,
) -> Result<TransferenceReport> {
    let p = *params;
    if !(p.q_exponent > 2.0 && p.q_exponent < 3.0) {
        return Err(Error::InvalidArgument(format!("q must lie in (2, 3), got {}", p.q_exponent)));
    }
    if !(p.eta >= 0.0 && p.epsilon >= 0.0 && p.k >= 1.0) {
        return Err(Error::InvalidArgument("need η ≥ 0, ε ≥ 0, K ≥ 1".into()));
    }
    if f.n_max() != nu.n_max() {
        return Err(Error::LengthMismatch(f.n_max(), nu.n_max(), nu.n_max()));
    }
    if let Some(n) = f.first_excess_over(nu) {
        return Err(Error::DominationViolated { n });
    }
    let n = nu.n_max();

    let aps = progressions(n as u64, &p);
    let mut worst: Option<(f64, Progression)> = None;
    for ap in &aps {
        let mean = ap_mean(f, ap)?.as_f64();
        if worst.is_none_or(|(w, _)| mean < w) {
            worst = Some((mean, *ap));
        }
    }
    let cond_i_pass = worst.is_none_or(|(w, _)| w >= 1.0 / 3.0 + p.epsilon);

    let m = default_grid_size(n);
    let nf = n as f64;
    let d = sup_discrepancy(&dft_grid(nu, m)?, &dft_grid(&indicator_seq::<T>(n), m)?)?;
    let cond_ii_value = d.as_f64() / nf;

    let moment = lq_moment(&dft_grid(f, m)?, T::of_f64(p.q_exponent))?;
    let norm = moment.integral_estimate.as_f64().powf(1.0 / p.q_exponent);
    let cond_iii_ratio = norm / nf.powf(1.0 - 1.0 / p.q_exponent);

    Ok(TransferenceReport {
        eta: p.eta,
        epsilon: p.epsilon,
        q_exponent: p.q_exponent,
        k: p.k,
        cond_i_pass,
        worst_ap_mean: worst.map(|w| w.0),
        worst_ap: worst.map(|w| w.1),
        aps_tested: aps.len(),
        cond_ii_value,
        cond_ii_pass: cond_ii_value <= p.eta,
        cond_iii_ratio,
        cond_iii_pass: cond_iii_ratio <= p.k,
    })
}

/// Evaluates `ν1 * ν2 * ν3 (n)` for the W-tricked sequences chosen by
/// [`residue_select`], caching sequences per `(b, c)`.
pub struct PositivityEvaluator {
    cfg: GoldbachConfig,
    sieve: PrimeSieve,
    cache: HashMap<(u64, RationalExponent), Vec<(u64, f64)>>,
}

impl PositivityEvaluator {
    pub fn new(cfg: &GoldbachConfig) -> Self {
        Self {
            cfg: *cfg,
            sieve: sieve_primes(cfg.x.max(2)),
            cache: HashMap::new(),
        }
    }

    fn support(&mut self, b: u64, c: RationalExponent) -> Result<&[(u64, f64)]> {
        if !self.cache.contains_key(&(b, c)) {
            let ctx = WtrickContext::with_modulus(self.cfg.x, self.cfg.modulus, b)?;
            let seq = nu_seq_with::<f64>(&ctx, c, &self.sieve);
            self.cache.insert((b, c), seq.support().collect());
        }
        Ok(&self.cache[&(b, c)])
    }

    pub fn evaluate(&mut self, m: u64) -> Result<f64> {
        if m % 2 == 0 || m > self.cfg.x {
            return Err(Error::InvalidArgument(format!(
                "m = {m} must be odd and at most X = {}",
                self.cfg.x
            )));
        }
        let sel = residue_select(m, self.cfg.modulus)?;
        let c = self.cfg.c;
        let s1 = self.support(sel.b[0], c[0])?.to_vec();
        let s2 = self.support(sel.b[1], c[1])?.to_vec();
        let s3: HashMap<u64, f64> = self.support(sel.b[2], c[2])?.iter().copied().collect();
        let n = sel.n;
        let mut total = 0.0;
        for &(x1, v1) in s1.iter().take_while(|&&(x1, _)| x1 < n) {
            for &(x2, v2) in s2.iter().take_while(|&&(x2, _)| x1 + x2 < n) {
                if let Some(v3) = s3.get(&(n - x1 - x2)) {
                    total += v1 * v2 * v3;
                }
            }
        }
        Ok(total)
    }
}

/// `f1 * f2 * f3 (n)` with `f_i = ν^{(c_i)}_{W,b_i}` and `(b, n)` from
/// [`residue_select`].
pub fn weighted_positivity(m: u64, cfg: &GoldbachConfig) -> Result<f64> {
    PositivityEvaluator::new(cfg).evaluate(m)
}

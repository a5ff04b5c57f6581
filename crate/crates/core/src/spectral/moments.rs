//! `L^u` moments of `|f̂|` and the large spectrum `{θ : |f̂(θ)| > δN}`.

use serde::Serialize;

use super::{stable_sum, SpectrumGrid};
use crate::{Error, RationalExponent, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport<T> {
    pub u: T,
    /// Left-endpoint Riemann sum of `|f̂|^u` over the grid.
    #[serde(rename = "estimate")]
    pub integral_estimate: T,
    /// `integral / N^(u-1)`.
    #[serde(rename = "ratio")]
    pub normalized_ratio: T,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LargeSpectrumReport<T> {
    pub delta: T,
    /// Fraction of grid points with `|f̂| > δN`.
    #[serde(rename = "estimate")]
    pub measure_estimate: T,
    /// `measure · N`.
    pub ratio: T,
    /// Size of a maximal `1/N`-spaced subset of those points.
    #[serde(rename = "R")]
    pub spaced_count: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
}

/// `(1/M)·Σ_j |f̂(j/M)|^u`, normalised by `N^(u-1)` with `N = n_max`.
///
/// Exponents below 2 are rejected; `u = 2` is admitted as the Parseval case.
pub fn lq_moment<T: Real>(g: &SpectrumGrid<T>, u: T) -> Result<MomentReport<T>> {
    if !(u >= T::of_u64(2)) || !u.is_finite() {
        return Err(Error::InvalidArgument(format!("moment exponent must be ≥ 2, got {u}")));
    }
    let powers: Vec<T> = g.values().iter().map(|v| v.norm().powf(u)).collect();
    let integral = stable_sum(&powers) / T::of_u64(g.m() as u64);
    let n = T::of_u64(g.n_max() as u64);
    Ok(MomentReport {
        u,
        integral_estimate: integral,
        normalized_ratio: integral / n.powf(u - T::one()),
        m: g.m(),
        n: g.n_max(),
    })
}

/// `v0 = 2 + 4(c-1)/(2-c)`, evaluated from the exact fraction.
pub fn v0_threshold<T: Real>(c: RationalExponent) -> T {
    let (num, den) = (c.num() as u64, c.den() as u64);
    T::of_u64(2) + T::of_u64(4 * (num - den)) / T::of_u64(2 * den - num)
}

/// Grid measure of `R_δ = {θ : |f̂(θ)| > δN}` and a greedy maximal
/// `1/N`-spaced subset of it (spacing measured around the circle).
pub fn large_spectrum<T: Real>(
    g: &SpectrumGrid<T>,
    delta: T,
    n: usize,
) -> Result<LargeSpectrumReport<T>> {
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::InvalidArgument(format!("δ must lie in (0, 1), got {delta}")));
    }
    if n == 0 || n > g.m() {
        return Err(Error::InvalidArgument(format!("N = {n} must lie in [1, M = {}]", g.m())));
    }
    let threshold = delta * T::of_u64(n as u64);
    let large: Vec<usize> = g
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > threshold)
        .map(|(j, _)| j)
        .collect();
    // grid points j, k are 1/N-spaced iff |j - k| ≥ M/N (mod M)
    let m = g.m();
    let mut picked: Vec<usize> = Vec::new();
    for &j in &large {
        if picked.last().is_none_or(|&last| (j - last) * n >= m) {
            picked.push(j);
        }
    }
    // close the circle: the last pick may sit within 1/N of the first
    if picked.len() > 1 && (m - picked[picked.len() - 1] + picked[0]) * n < m {
        picked.pop();
    }
    let measure = T::of_u64(large.len() as u64) / T::of_u64(m as u64);
    Ok(LargeSpectrumReport {
        delta,
        measure_estimate: measure,
        ratio: measure * T::of_u64(n as u64),
        spaced_count: picked.len(),
        m,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::dft_grid;
    use crate::{indicator_seq, make_exponent, SequenceKind, WeightedSequence};
    use proptest::prelude::*;

    #[test]
    fn v0_values() {
        let v = |n, d| v0_threshold::<f64>(make_exponent(n, d).unwrap());
        assert!((v(11, 10) - 22.0 / 9.0).abs() < 1e-15);
        assert!((v(101, 100) - (2.0 + 4.0 / 99.0)).abs() < 1e-15);
        assert_eq!(v(3, 2), 6.0);
    }

    #[test]
    fn parseval_and_point_mass() {
        let n = 300;
        let g = dft_grid(&indicator_seq::<f64>(n), 1024).unwrap();
        let r = lq_moment(&g, 2.0).unwrap();
        assert!((r.integral_estimate - n as f64).abs() < 1e-9 * n as f64);
        assert!((r.normalized_ratio - 1.0).abs() < 1e-9);

        let f = WeightedSequence::new(vec![0.0, 0.0, 3.0], SequenceKind::Custom).unwrap();
        let g = dft_grid(&f, 8).unwrap();
        for u in [2.0, 2.6, 5.0] {
            let r = lq_moment(&g, u).unwrap();
            assert!((r.integral_estimate - 3f64.powf(u)).abs() < 1e-9 * 3f64.powf(u));
        }
        assert!(lq_moment(&g, 1.5).is_err());
    }

    #[test]
    fn moments_are_log_convex_in_u() {
        let c = make_exponent(11, 10).unwrap();
        let ctx = crate::WtrickContext::with_modulus(20_000, 2, 1).unwrap();
        let f = crate::nu_seq::<f64>(&ctx, c);
        let g = dft_grid(&f, 4 * f.n_max().next_power_of_two()).unwrap();
        let i = |u: f64| lq_moment(&g, u).unwrap().integral_estimate.ln();
        for (u1, u3) in [(2.0, 4.0), (2.2, 3.0), (2.5, 6.5)] {
            let u2 = 0.5 * (u1 + u3);
            assert!(i(u2) <= 0.5 * (i(u1) + i(u3)) + 1e-9);
        }
    }

    #[test]
    fn dirichlet_spike() {
        let n = 1000;
        let g = dft_grid(&indicator_seq::<f64>(n), 16_384).unwrap();
        let r = large_spectrum(&g, 0.999, n).unwrap();
        assert!(r.measure_estimate <= 4.0 / n as f64);
        assert_eq!(r.spaced_count, 1);
        let r = large_spectrum(&g, 1.0 - 1e-12, n).unwrap();
        assert!(r.spaced_count <= 1);
        assert!(large_spectrum(&g, 0.0, n).is_err());
        assert!(large_spectrum(&g, 1.0, n).is_err());
    }

    #[test]
    fn report_json_keys() {
        let g = dft_grid(&indicator_seq::<f64>(4), 16).unwrap();
        let json = serde_json::to_value(lq_moment(&g, 3.0).unwrap()).unwrap();
        for key in ["u", "estimate", "ratio", "M", "N"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        let json = serde_json::to_value(large_spectrum(&g, 0.5, 4).unwrap()).unwrap();
        for key in ["delta", "estimate", "ratio", "R", "M", "N"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn covering_bound(values in prop::collection::vec(0.0f64..1.0, 4..200), extra in 0usize..500, delta in 0.01f64..0.99) {
            let f = WeightedSequence::new(values, SequenceKind::Custom).unwrap();
            let n = f.n_max();
            let m = n + extra;
            let g = dft_grid(&f, m).unwrap();
            let r = large_spectrum(&g, delta, n).unwrap();
            let bound = 2.0 * r.spaced_count as f64 / n as f64 + 2.0 / m as f64;
            prop_assert!(r.measure_estimate <= bound + 1e-15);
        }
    }
}

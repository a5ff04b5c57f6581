use psg_core::spectral::{default_grid_size, psi_error_envelope};
use psg_core::{
    dft_grid, indicator_seq, lambda_seq, large_spectrum, lq_moment, make_exponent,
    natural_ps_discrepancy, nu_seq, psi_fourier_error, sup_discrepancy, twist_identity_residual,
    v0_threshold, vdc_ratio, TwistKind, WtrickContext,
};

#[test]
fn weak_condition_example_at_two_to_sixteen() {
    let c = make_exponent(11, 10).unwrap();
    let x = 1u64 << 16;
    let ctx = WtrickContext::untwisted(x).unwrap();
    let m = default_grid_size(ctx.n as usize);
    let nu = dft_grid(&nu_seq::<f64>(&ctx, c), m).unwrap();
    let lam = dft_grid(&lambda_seq::<f64>(&ctx), m).unwrap();
    let d = sup_discrepancy(&nu, &lam).unwrap();
    assert!(d / (x as f64) < 0.25, "{}", d / x as f64);
}

#[test]
fn lambda_twisted_by_two_sees_the_prime_three() {
    // λ_{2,1} vanishes on n ≡ 2 (mod 3) (those carry 2n - 1 ≡ 0 mod 3), so its
    // transform at θ = 1/3 is about (N/2)·|1 + e(1/3)| = N/2 while 1̂_[N] is O(1).
    let ctx = WtrickContext::with_modulus(1 << 16, 2, 1).unwrap();
    let n = ctx.n as usize;
    let m = 3 * (1 << 16);
    let lam = dft_grid(&lambda_seq::<f64>(&ctx), m).unwrap();
    let one = dft_grid(&indicator_seq::<f64>(n), m).unwrap();
    let at_third = (lam.values()[m / 3] - one.values()[m / 3]).norm() / n as f64;
    assert!((at_third - 0.5).abs() < 0.05, "{at_third}");
    let d = sup_discrepancy(&lam, &one).unwrap() / n as f64;
    assert!(d >= at_third && d < 0.6, "{d}");
}

#[test]
fn twist_identity_examples() {
    let c = make_exponent(11, 10).unwrap();
    let ctx = WtrickContext::untwisted(5000).unwrap();
    assert!(twist_identity_residual(&ctx, c, 0.123, TwistKind::Nu).unwrap() < 1e-9);
    assert!(twist_identity_residual(&ctx, c, 0.123, TwistKind::Lambda).unwrap() < 1e-9);
    let ctx = WtrickContext::with_modulus(10_000, 6, 1).unwrap();
    let r: f64 = twist_identity_residual(&ctx, c, 0.3, TwistKind::Nu).unwrap();
    assert!(r <= 1e-6 * ctx.n as f64);
    let ctx = WtrickContext::with_modulus(10_000, 2, 1).unwrap();
    let r: f64 = twist_identity_residual(&ctx, c, 0.7, TwistKind::Lambda).unwrap();
    assert!(r <= 1e-6 * ctx.n as f64);
}

#[test]
fn natural_discrepancy_examples() {
    let n = 1usize << 14;
    let ln = (n as f64).ln();
    let d: f64 = natural_ps_discrepancy(n, make_exponent(11, 10).unwrap(), 1 << 16).unwrap();
    assert!(d <= 20.0 * (n as f64).powf(0.591) * ln, "{d}");
    let d: f64 = natural_ps_discrepancy(n, make_exponent(3, 2).unwrap(), 1 << 16).unwrap();
    assert!(d <= 20.0 * (n as f64).powf(5.0 / 6.0) * ln, "{d}");
}

#[test]
fn moment_and_large_spectrum_examples() {
    let c = make_exponent(11, 10).unwrap();
    let ctx = WtrickContext::with_modulus(1 << 16, 2, 1).unwrap();
    let g = dft_grid(&nu_seq::<f64>(&ctx, c), 1 << 18).unwrap();
    let r = lq_moment(&g, 2.6).unwrap();
    assert!(r.normalized_ratio > 0.0 && r.normalized_ratio < 50.0);
    let v0: f64 = v0_threshold(c);
    let ls = large_spectrum(&g, 0.2, ctx.n as usize).unwrap();
    assert!(ls.measure_estimate * ctx.n as f64 * 0.2f64.powf(v0 + 0.2) <= 100.0);
}

#[test]
fn psi_expansion_envelope_prescan() {
    // scan with the direct complex sum, independent of the sine pairing
    let complex_error = |t: f64, h_max: i64| {
        let mut s = psg_core::Complex::new(0.0, 0.0);
        for h in (-h_max..=h_max).filter(|&h| h != 0) {
            s += psg_core::Complex::from_polar(1.0, std::f64::consts::TAU * h as f64 * t) / h as f64;
        }
        (psg_core::Complex::new(psg_core::psi(t), 0.0)
            + s / psg_core::Complex::new(0.0, std::f64::consts::TAU))
        .norm()
    };
    let mut worst = 0.0f64;
    for h in [2u32, 8, 64] {
        for k in 0..2_000 {
            let t = k as f64 / 2_000.0;
            let ratio = complex_error(t, h as i64) / psi_error_envelope(t, h);
            worst = worst.max(ratio);
            assert!((psi_fourier_error(t, h) - complex_error(t, h as i64)).abs() < 1e-9);
        }
    }
    // attained at t = 0, where the error is exactly 1/2
    assert!((worst - 0.5).abs() < 1e-12, "{worst}");
}

#[test]
fn vdc_on_lemma_phase() {
    let (c, h, u, theta) = (1.1f64, 3.0, 0.5, 0.3);
    let x0: f64 = 4096.0;
    let delta = (c - 1.0) / (c * c) * h / x0.powf(2.0 - 1.0 / c);
    let phase = |x: f64| theta * x - h * (x + u).powf(1.0 / c);
    assert!(vdc_ratio(phase, x0, 4096, delta) <= 10.0);
}

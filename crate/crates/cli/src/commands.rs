use std::fs::File;
use std::io::{BufWriter, Write};

use psg_core::cache::SieveCache;
use psg_core::spectral::{default_grid_size, psi_error_envelope};
use psg_core::weights::{lambda_seq_with, nu_seq_with, tau_seq};
use psg_core::{
    arc_partition, check_transference, dft_grid, indicator_seq, large_spectrum, lq_moment,
    natural_ps_discrepancy, ps_primes, psi_fourier_error, sieve_primes, sup_discrepancy,
    v0_threshold, vdc_ratio, verify_range, weighted_exp_sum, GoldbachConfig, PrimeSieve,
    PsMembership, RationalExponent, Sequence, TransferenceParams, WtrickContext,
};
use serde_json::{json, Value};

use crate::output::{num, Table};
use crate::{CliConfig, Command, Format, KindArg, EXIT_EXCEPTIONS};

#[derive(Debug)]
pub(crate) struct CmdError(String);

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<String> for CmdError {
    fn from(s: String) -> Self {
        Self(s)
    }
}

impl From<psg_core::Error> for CmdError {
    fn from(e: psg_core::Error) -> Self {
        Self(e.to_string())
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        Self(e.to_string())
    }
}

impl From<serde_json::Error> for CmdError {
    fn from(e: serde_json::Error) -> Self {
        Self(e.to_string())
    }
}

type CmdResult<T = i32> = Result<T, CmdError>;

struct Ctx<'a> {
    cfg: &'a CliConfig,
    cache: Option<SieveCache>,
}

impl Ctx<'_> {
    fn sieve(&self, limit: u64) -> PrimeSieve {
        match &self.cache {
            Some(cache) => cache.primes(limit),
            None => sieve_primes(limit),
        }
    }

    fn lambda(&self, ctx: &WtrickContext) -> Sequence {
        lambda_seq_with(ctx, &self.sieve(ctx.x))
    }

    fn nu(&self, ctx: &WtrickContext, c: RationalExponent) -> Sequence {
        nu_seq_with(ctx, c, &self.sieve(ctx.x))
    }

    fn emit<W: Write>(&self, table: &Table, out: &mut W) -> CmdResult {
        table.write(self.cfg.format, out)?;
        Ok(0)
    }
}

/// Context whose sequences have length exactly `n`: `X = W·n - 1`.
fn context_of_length(n: usize, modulus: u64, residue: u64) -> CmdResult<WtrickContext> {
    let ctx = WtrickContext::with_modulus(modulus * n as u64 - 1, modulus, residue)?;
    debug_assert_eq!(ctx.n as usize, n);
    Ok(ctx)
}

fn complex_row(lead: Vec<Value>, z: psg_core::Complex<f64>) -> Vec<Value> {
    let mut row = lead;
    row.extend([num(z.re), num(z.im), num(z.norm())]);
    row
}

pub(crate) fn dispatch<W: Write>(cfg: &CliConfig, out: &mut W) -> CmdResult {
    let ctx = Ctx {
        cfg,
        cache: cfg.cache_dir.as_ref().map(SieveCache::new),
    };
    match &cfg.command {
        Command::Primes { c, limit } => {
            let primes = match &ctx.cache {
                Some(_) => psg_core::ps::ps_primes_with::<f64>(&ctx.sieve(*limit), *limit, *c),
                None => ps_primes::<f64>(*limit, *c),
            };
            let mut t = Table::new(&["p", "weight", "logp", "preimage"]);
            for q in primes {
                t.push(vec![json!(q.p), num(q.weight), num(q.logp), json!(q.preimage)]);
            }
            ctx.emit(&t, out)
        }
        Command::Members { c, from, to } => {
            let table = match &ctx.cache {
                Some(cache) => cache.membership(*to, *c),
                None => PsMembership::new(*to, *c),
            };
            let mut t = Table::new(&["m", "member"]);
            for m in *from..=*to {
                t.push(vec![json!(m), json!(table.contains(m))]);
            }
            ctx.emit(&t, out)
        }
        Command::Expsum {
            kind,
            c,
            x,
            twist,
            theta,
            grid,
        } => {
            let (w, b) = twist.validate().map_err(|e| CmdError(e.to_string()))?;
            let wctx = WtrickContext::with_modulus(*x, w, b)?;
            let seq = match kind {
                KindArg::Lambda => ctx.lambda(&wctx),
                KindArg::Nu => ctx.nu(&wctx, c.expect("validated")),
                KindArg::Tau => tau_seq(&wctx, c.expect("validated")),
                KindArg::Indicator => indicator_seq(wctx.n as usize),
            };
            if theta.is_empty() {
                let m = grid.unwrap_or_else(|| default_grid_size(seq.n_max()));
                let g = dft_grid(&seq, m)?;
                let mut t = Table::new(&["j", "theta", "re", "im", "modulus"]);
                for (j, z) in g.values().iter().enumerate() {
                    t.push(complex_row(vec![json!(j), num(g.theta(j))], *z));
                }
                ctx.emit(&t, out)
            } else {
                let mut t = Table::new(&["theta", "re", "im", "modulus"]);
                for &th in theta {
                    t.push(complex_row(vec![num(th)], weighted_exp_sum(&seq, th)));
                }
                ctx.emit(&t, out)
            }
        }
        Command::Discrepancy { c, log2n, twist } => {
            let (w, b) = twist.validate().map_err(|e| CmdError(e.to_string()))?;
            let mut t = Table::new(&[
                "N",
                "M",
                "nu_vs_lambda",
                "nu_vs_indicator",
                "lambda_vs_indicator",
                "natural",
            ]);
            for n in log2n.sizes() {
                let wctx = context_of_length(n, w, b)?;
                let m = default_grid_size(n);
                let nu = dft_grid(&ctx.nu(&wctx, *c), m)?;
                let lam = dft_grid(&ctx.lambda(&wctx), m)?;
                let one = dft_grid(&indicator_seq(n), m)?;
                let natural: f64 = natural_ps_discrepancy(n, *c, 4 * n)?;
                t.push(vec![
                    json!(n),
                    json!(m),
                    num(sup_discrepancy(&nu, &lam)?),
                    num(sup_discrepancy(&nu, &one)?),
                    num(sup_discrepancy(&lam, &one)?),
                    num(natural),
                ]);
            }
            ctx.emit(&t, out)
        }
        Command::Moments {
            c,
            u,
            log2n,
            modulus,
            residue,
        } => {
            let mut t = Table::new(&["N", "u", "ratio", "estimate", "M"]);
            for n in log2n.sizes() {
                let wctx = context_of_length(n, *modulus, *residue)?;
                let g = dft_grid(&ctx.nu(&wctx, *c), default_grid_size(n))?;
                for &uu in u {
                    let r = lq_moment(&g, uu)?;
                    t.push(vec![json!(n), num(uu), num(r.normalized_ratio), num(r.integral_estimate), json!(r.m)]);
                }
            }
            ctx.emit(&t, out)
        }
        Command::Spectrum {
            c,
            delta,
            log2n,
            modulus,
            residue,
        } => {
            let v0: f64 = v0_threshold(*c);
            let mut t = Table::new(&["N", "delta", "estimate", "ratio", "R", "M", "scaled"]);
            for n in log2n.sizes() {
                let wctx = context_of_length(n, *modulus, *residue)?;
                let g = dft_grid(&ctx.nu(&wctx, *c), default_grid_size(n))?;
                for &d in delta {
                    let r = large_spectrum(&g, d, n)?;
                    t.push(vec![
                        json!(n),
                        num(d),
                        num(r.measure_estimate),
                        num(r.ratio),
                        json!(r.spaced_count),
                        json!(r.m),
                        num(r.ratio * d.powf(v0 + 0.2)),
                    ]);
                }
            }
            ctx.emit(&t, out)
        }
        Command::Arcs { n, arc_exponent } => {
            let part = arc_partition(*n, *arc_exponent)?;
            let n = *n as usize;
            let lam = ctx.lambda(&context_of_length(n, 1, 0)?);
            let sup = part.sup_by_arc(&dft_grid(&lam, default_grid_size(n))?);
            let mut t = Table::new(&["class", "a", "q", "center", "sup"]);
            for (arc, s) in &sup.major {
                t.push(vec![json!("major"), json!(arc.a), json!(arc.q), num(arc.center), num(*s)]);
            }
            t.push(vec![json!("minor"), Value::Null, Value::Null, Value::Null, num(sup.minor)]);
            ctx.emit(&t, out)
        }
        Command::PsiCheck { h, grid } => {
            let mut t = Table::new(&["H", "worst_ratio", "worst_t", "error_at_half", "error_at_zero"]);
            for &hh in h {
                let (worst, at) = (0..*grid)
                    .map(|k| {
                        let tt = k as f64 / *grid as f64;
                        (psi_fourier_error(tt, hh) / psi_error_envelope(tt, hh), tt)
                    })
                    .fold((0.0f64, 0.0f64), |best, cur| if cur.0 > best.0 { cur } else { best });
                t.push(vec![
                    json!(hh),
                    num(worst),
                    num(at),
                    num(psi_fourier_error(0.5, hh)),
                    num(psi_fourier_error(0.0, hh)),
                ]);
            }
            ctx.emit(&t, out)
        }
        Command::VdcCheck {
            alpha,
            y,
            c,
            h,
            theta,
            u,
            x0,
        } => {
            let mut t = Table::new(&["family", "param", "theta", "u", "x0", "y", "delta", "ratio"]);
            for &a in alpha {
                for &yy in y {
                    let delta = 2.0 * a;
                    let r = vdc_ratio(|x: f64| a * x * x, 1.0, yy, delta);
                    t.push(vec![
                        json!("quadratic"),
                        num(a),
                        Value::Null,
                        Value::Null,
                        json!(1),
                        json!(yy),
                        num(delta),
                        num(r),
                    ]);
                }
            }
            let cv: f64 = c.value();
            for &x in x0 {
                let xf = x as f64;
                for &hh in h {
                    for &th in theta {
                        for &uu in u {
                            let hf = hh as f64;
                            let delta = (cv - 1.0) / (cv * cv) * hf / xf.powf(2.0 - 1.0 / cv);
                            let phase = |s: f64| th * s - hf * (s + uu).powf(1.0 / cv);
                            let r = vdc_ratio(phase, xf, x, delta);
                            t.push(vec![
                                json!(format!("ps {c}")),
                                json!(hh),
                                num(th),
                                num(uu),
                                json!(x),
                                json!(x),
                                num(delta),
                                num(r),
                            ]);
                        }
                    }
                }
            }
            ctx.emit(&t, out)
        }
        Command::Verify {
            c,
            from,
            to,
            x,
            modulus,
            floor,
            no_fft,
            reports,
        } => {
            let cs = if c.len() == 1 { [c[0]; 3] } else { [c[0], c[1], c[2]] };
            let gcfg = GoldbachConfig::new(cs, x.unwrap_or(*to), *modulus, !no_fft)?;
            let outcome = verify_range(*from, *to, &gcfg)?;
            if let Some(path) = reports {
                let mut w = BufWriter::new(File::create(path)?);
                for r in &outcome.reports {
                    serde_json::to_writer(&mut w, r)?;
                    w.write_all(b"\n")?;
                }
                w.flush()?;
            }
            let mut summary = outcome.summary.clone();
            if !ctx.cfg.timestamp {
                summary.runtime_ms = None;
            }
            match ctx.cfg.format {
                Format::Json => {
                    serde_json::to_writer(&mut *out, &summary)?;
                    writeln!(out)?;
                }
                Format::Csv => {
                    let mut t = Table::new(&["from", "to", "checked", "exceptions", "largest_exception"]);
                    let list: Vec<String> = summary.exceptions.iter().map(u64::to_string).collect();
                    t.push(vec![
                        json!(from),
                        json!(to),
                        json!(summary.checked),
                        json!(list.join(" ")),
                        json!(summary.largest_exception),
                    ]);
                    t.write(Format::Csv, out)?;
                }
            }
            let above = outcome.exceptions_above(*floor).count();
            Ok(if above > 0 { EXIT_EXCEPTIONS } else { 0 })
        }
        Command::Transference {
            c,
            x,
            modulus,
            residue,
            eta,
            epsilon,
            q,
            k,
            ap_step_max,
            ap_samples,
        } => {
            let wctx = WtrickContext::with_modulus(*x, *modulus, *residue)?;
            let nu = ctx.nu(&wctx, *c);
            let params = TransferenceParams {
                eta: *eta,
                epsilon: *epsilon,
                q_exponent: *q,
                k: *k,
                ap_step_max: *ap_step_max,
                ap_samples: *ap_samples,
                seed: ctx.cfg.seed,
            };
            let report = check_transference(&nu, &nu, &params)?;
            match ctx.cfg.format {
                Format::Json => {
                    let mut v = serde_json::to_value(report)?;
                    v["passes"] = json!(report.passes());
                    serde_json::to_writer(&mut *out, &v)?;
                    writeln!(out)?;
                }
                Format::Csv => {
                    let mut t = Table::new(&[
                        "cond_i_pass",
                        "worst_ap_mean",
                        "aps_tested",
                        "cond_ii_value",
                        "cond_ii_pass",
                        "cond_iii_ratio",
                        "cond_iii_pass",
                        "passes",
                    ]);
                    t.push(vec![
                        json!(report.cond_i_pass),
                        report.worst_ap_mean.map_or(Value::Null, num),
                        json!(report.aps_tested),
                        num(report.cond_ii_value),
                        json!(report.cond_ii_pass),
                        num(report.cond_iii_ratio),
                        json!(report.cond_iii_pass),
                        json!(report.passes()),
                    ]);
                    t.write(Format::Csv, out)?;
                }
            }
            Ok(0)
        }
    }
}

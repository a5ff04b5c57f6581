//! Argument parsing and dispatch for the `psg` binary.
//!
//! [`parse_args`] validates everything up front; [`run`] performs the work
//! and returns the process exit code.

mod commands;
pub mod output;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use psg_core::goldbach::DEFAULT_SEED;
use psg_core::weights::is_primorial;
use psg_core::RationalExponent;
use serde::Deserialize;

pub use output::{Format, Table};

/// Exit code for malformed command lines.
pub const EXIT_USAGE: i32 = 64;
/// Exit code when `verify` finds exceptions above `--floor`.
pub const EXIT_EXCEPTIONS: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum ArgsError {
    /// `--help` or `--version`; the text goes to stdout and the exit code is 0.
    Info(String),
    Usage(String),
}

impl ArgsError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ArgsError::Info(_) => 0,
            ArgsError::Usage(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for ArgsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgsError::Info(s) | ArgsError::Usage(s) => f.write_str(s.trim_end()),
        }
    }
}

impl std::error::Error for ArgsError {}

fn usage(flag: &str, msg: impl fmt::Display) -> ArgsError {
    ArgsError::Usage(format!("error: invalid value for '{flag}': {msg}"))
}

fn parse_exponent(s: &str) -> Result<RationalExponent, String> {
    s.parse().map_err(|e: psg_core::Error| e.to_string())
}

/// Inclusive range of base-2 exponents written `a:b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Log2Range {
    pub lo: u32,
    pub hi: u32,
}

impl Log2Range {
    pub fn sizes(&self) -> impl Iterator<Item = usize> {
        (self.lo..=self.hi).map(|k| 1usize << k)
    }
}

fn parse_log2_range(s: &str) -> Result<Log2Range, String> {
    let (a, b) = s.split_once(':').unwrap_or((s, s));
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("expected a:b, got {s:?}"));
    let (lo, hi) = (parse(a)?, parse(b)?);
    if !(4 <= lo && lo <= hi && hi <= 30) {
        return Err(format!("need 4 ≤ a ≤ b ≤ 30, got {lo}:{hi}"));
    }
    Ok(Log2Range { lo, hi })
}

#[derive(Debug, Parser)]
#[command(name = "psg", version, about = "Piatetski-Shapiro primes and ternary Goldbach experiments")]
struct Cli {
    /// Directory for cached sieves (PSG_CACHE_DIR takes precedence).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Omit run-time fields so output is byte-identical across runs.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// TOML file providing defaults for the global flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KindArg {
    Lambda,
    Nu,
    Tau,
    Indicator,
}

/// `X`, `W` and `b` for the W-trick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Args)]
pub struct TwistArgs {
    /// Modulus `W` (a primorial).
    #[arg(long = "w", default_value_t = 1)]
    pub modulus: u64,
    /// Residue `b`, coprime to `W` (default 0 for `W = 1`, else 1).
    #[arg(long = "b")]
    pub residue: Option<u64>,
}

impl TwistArgs {
    fn validate(&self) -> Result<(u64, u64), ArgsError> {
        if !is_primorial(self.modulus) {
            return Err(usage("--w", format!("{} is not a primorial", self.modulus)));
        }
        let b = self.residue.unwrap_or(u64::from(self.modulus > 1));
        let ok = if self.modulus == 1 {
            b == 0
        } else {
            b >= 1 && b < self.modulus && gcd(b, self.modulus) == 1
        };
        if !ok {
            return Err(usage("--b", format!("{b} is not a unit residue mod {}", self.modulus)));
        }
        Ok((self.modulus, b))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// PS primes up to a limit: p, weight, log p, preimage.
    Primes {
        #[arg(long, value_parser = parse_exponent)]
        c: RationalExponent,
        #[arg(long)]
        limit: u64,
    },
    /// Membership of each m in [from, to] in the PS sequence.
    Members {
        #[arg(long, value_parser = parse_exponent)]
        c: RationalExponent,
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Exponential sums at given θ, or the full DFT grid.
    Expsum {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_parser = parse_exponent)]
        c: Option<RationalExponent>,
        #[arg(long)]
        x: u64,
        #[command(flatten)]
        twist: TwistArgs,
        /// Evaluate at these θ (comma-separated) instead of on a grid.
        #[arg(long, value_delimiter = ',')]
        theta: Vec<f64>,
        /// Grid size M (default 4·2^⌈log2 N⌉).
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Sup-grid discrepancies ν vs λ vs 1_[N] and the natural PS discrepancy.
    Discrepancy {
        #[arg(long, value_parser = parse_exponent)]
        c: RationalExponent,
        #[arg(long, value_parser = parse_log2_range)]
        log2n: Log2Range,
        #[command(flatten)]
        twist: TwistArgs,
    },
    /// Normalised L^u moments of ν̂ across N and u.
    Moments {
        #[arg(long, value_parser = parse_exponent)]
        c: RationalExponent,
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<f64>,
        #[arg(long, value_parser = parse_log2_range)]
        log2n: Log2Range,
        #[arg(long = "w", default_value_t = 2)]
        modulus: u64,
        #[arg(long = "b", default_value_t = 1)]
        residue: u64,
    },
    /// Large-spectrum measure of ν̂ across δ.
    Spectrum {
        #[arg(long, value_parser = parse_exponent)]
        c: RationalExponent,
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2,0.4")]
        delta: Vec<f64>,
        #[arg(long, value_parser = parse_log2_range, default_value = "16:16")]
        log2n: Log2Range,
        #[arg(long = "w", default_value_t = 2)]
        modulus: u64,
        #[arg(long = "b", default_value_t = 1)]
        residue: u64,
    },
    /// Major-arc partition of [0,1) and per-arc sup of |λ̂|.
    Arcs {
        /// Length N of the (untwisted) λ sequence.
        #[arg(long)]
        n: u64,
        /// Exponent B in q ≤ (log N)^B.
        #[arg(long = "arc-exponent", default_value_t = 1.0)]
        arc_exponent: f64,
    },
    /// Worst ratio of the truncated sawtooth expansion error to its envelope.
    PsiCheck {
        #[arg(long, value_delimiter = ',', default_value = "2,8,64,256")]
        h: Vec<u32>,
        /// Number of points t = k/grid scanned in [0, 1).
        #[arg(long, default_value_t = 10_000)]
        grid: u32,
    },
    /// van der Corput ratios for quadratic phases and the PS phase family.
    VdcCheck {
        #[arg(long, value_delimiter = ',', default_value = "0.0001,0.001,0.01,0.1")]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        y: Vec<u64>,
        #[arg(long, value_parser = parse_exponent, default_value = "11/10")]
        c: RationalExponent,
        #[arg(long, value_delimiter = ',', default_value = "1,3,10")]
        h: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.3,0.5")]
        theta: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0,0.5")]
        u: Vec<f64>,
        /// Interval starts; each uses Y = X0.
        #[arg(long, value_delimiter = ',', default_value = "1024,4096,16384")]
        x0: Vec<u64>,
    },
    /// Ternary representations n = p1 + p2 + p3 for odd n in [from, to].
    Verify {
        /// One exponent, or three comma-separated.
        #[arg(long, value_parser = parse_exponent, value_delimiter = ',', required = true)]
        c: Vec<RationalExponent>,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Ambient scale X (default: --to).
        #[arg(long)]
        x: Option<u64>,
        #[arg(long = "w", default_value_t = 2)]
        modulus: u64,
        /// Exit with status 2 if an exception exceeds this.
        #[arg(long, default_value_t = 0)]
        floor: u64,
        /// Count directly instead of by FFT.
        #[arg(long)]
        no_fft: bool,
        /// Write one JSON report per n to this file.
        #[arg(long)]
        reports: Option<PathBuf>,
    },
    /// Transference hypotheses for f = ν.
    Transference {
        #[arg(long, value_parser = parse_exponent)]
        c: RationalExponent,
        #[arg(long)]
        x: u64,
        #[arg(long = "w", default_value_t = 2)]
        modulus: u64,
        #[arg(long = "b", default_value_t = 1)]
        residue: u64,
        #[arg(long, default_value_t = 0.3)]
        eta: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 2.6)]
        q: f64,
        #[arg(long, default_value_t = 50.0)]
        k: f64,
        #[arg(long, default_value_t = 2)]
        ap_step_max: u64,
        #[arg(long, default_value_t = 64)]
        ap_samples: usize,
    },
}

/// Defaults read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    cache_dir: Option<PathBuf>,
    format: Option<Format>,
    threads: Option<usize>,
    seed: Option<u64>,
    no_timestamp: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub command: Command,
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
    pub seed: u64,
    pub timestamp: bool,
}

/// Parses `argv` (without the program name), reading `PSG_CACHE_DIR`.
pub fn parse_args<I, S>(argv: I) -> Result<CliConfig, ArgsError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    parse_args_with_env(argv, std::env::var_os("PSG_CACHE_DIR").map(PathBuf::from))
}

/// As [`parse_args`], with the cache-directory override passed explicitly.
pub fn parse_args_with_env<I, S>(argv: I, env_cache_dir: Option<PathBuf>) -> Result<CliConfig, ArgsError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args = std::iter::once("psg".to_string()).chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ArgsError::Info(e.to_string()),
            _ => ArgsError::Usage(e.to_string()),
        }
    })?;
    let file = match &cli.config {
        Some(path) => read_config(path)?,
        None => FileConfig::default(),
    };
    validate(&cli.command)?;
    let threads = cli.threads.or(file.threads);
    if threads == Some(0) {
        return Err(usage("--threads", "must be positive"));
    }
    Ok(CliConfig {
        command: cli.command,
        cache_dir: env_cache_dir.or(cli.cache_dir).or(file.cache_dir),
        format: cli.format.or(file.format).unwrap_or_default(),
        threads,
        seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        timestamp: !(cli.no_timestamp || file.no_timestamp.unwrap_or(false)),
    })
}

fn read_config(path: &Path) -> Result<FileConfig, ArgsError> {
    let text = std::fs::read_to_string(path).map_err(|e| usage("--config", format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage("--config", format!("{}: {e}", path.display())))
}

fn validate_twist(modulus: u64, residue: u64) -> Result<(), ArgsError> {
    TwistArgs {
        modulus,
        residue: Some(residue),
    }
    .validate()
    .map(|_| ())
}

fn validate(cmd: &Command) -> Result<(), ArgsError> {
    match cmd {
        Command::Primes { limit, .. } if *limit == 0 => Err(usage("--limit", "must be positive")),
        Command::Members { from, to, .. } if *from == 0 || from > to => {
            Err(usage("--from", format!("need 1 ≤ from ≤ to, got {from}..{to}")))
        }
        Command::Expsum {
            kind,
            c,
            x,
            twist,
            grid,
            theta,
        } => {
            if *x == 0 {
                return Err(usage("--x", "must be positive"));
            }
            if matches!(kind, KindArg::Nu | KindArg::Tau) && c.is_none() {
                return Err(usage("--c", "required for --kind nu and tau"));
            }
            if grid.is_some() && !theta.is_empty() {
                return Err(usage("--grid", "cannot be combined with --theta"));
            }
            if theta.iter().any(|t| !t.is_finite()) {
                return Err(usage("--theta", "must be finite"));
            }
            twist.validate().map(|_| ())
        }
        Command::Discrepancy { twist, .. } => twist.validate().map(|_| ()),
        Command::Moments { u, modulus, residue, .. } => {
            if let Some(bad) = u.iter().find(|&&u| !(u >= 2.0 && u.is_finite())) {
                return Err(usage("--u", format!("need u ≥ 2, got {bad}")));
            }
            validate_twist(*modulus, *residue)
        }
        Command::Spectrum { delta, modulus, residue, .. } => {
            if let Some(bad) = delta.iter().find(|&&d| !(d > 0.0 && d < 1.0)) {
                return Err(usage("--delta", format!("need 0 < δ < 1, got {bad}")));
            }
            validate_twist(*modulus, *residue)
        }
        Command::Arcs { n, arc_exponent } => {
            if *n < 16 {
                return Err(usage("--n", "need N ≥ 16"));
            }
            if !(*arc_exponent > 0.0 && arc_exponent.is_finite()) {
                return Err(usage("--arc-exponent", "must be positive"));
            }
            Ok(())
        }
        Command::PsiCheck { h, grid } => {
            if let Some(bad) = h.iter().find(|&&h| h < 2) {
                return Err(usage("--h", format!("need H ≥ 2, got {bad}")));
            }
            if *grid == 0 {
                return Err(usage("--grid", "must be positive"));
            }
            Ok(())
        }
        Command::VdcCheck { alpha, y, x0, .. } => {
            if alpha.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
                return Err(usage("--alpha", "must be positive"));
            }
            if y.contains(&0) {
                return Err(usage("--y", "must be positive"));
            }
            if x0.contains(&0) {
                return Err(usage("--x0", "must be positive"));
            }
            Ok(())
        }
        Command::Verify {
            c, from, to, x, modulus, ..
        } => {
            if c.len() != 1 && c.len() != 3 {
                return Err(usage("--c", format!("expected 1 or 3 exponents, got {}", c.len())));
            }
            if from > to {
                return Err(usage("--from", format!("{from} exceeds --to {to}")));
            }
            let x = x.unwrap_or(*to);
            if x == 0 || to / 3 > x {
                return Err(usage("--x", format!("need X > 0 and --to ≤ 3X, got X = {x}")));
            }
            if !is_primorial(*modulus) {
                return Err(usage("--w", format!("{modulus} is not a primorial")));
            }
            Ok(())
        }
        Command::Transference {
            x,
            modulus,
            residue,
            q,
            eta,
            epsilon,
            k,
            ap_step_max,
            ..
        } => {
            if *x < 16 {
                return Err(usage("--x", "need X ≥ 16"));
            }
            if !(*q > 2.0 && *q < 3.0) {
                return Err(usage("--q", format!("need 2 < q < 3, got {q}")));
            }
            if !(*eta >= 0.0 && *eta <= 1.0) {
                return Err(usage("--eta", "need 0 ≤ η ≤ 1"));
            }
            if !(*epsilon >= 0.0) {
                return Err(usage("--epsilon", "must be nonnegative"));
            }
            if !(*k >= 1.0) {
                return Err(usage("--k", "need K ≥ 1"));
            }
            if *ap_step_max == 0 {
                return Err(usage("--ap-step-max", "must be positive"));
            }
            validate_twist(*modulus, *residue)
        }
        _ => Ok(()),
    }
}

/// Runs a validated configuration, writing results to `out` and diagnostics
/// to stderr. Returns the process exit code.
pub fn run<W: Write + Send>(cfg: &CliConfig, out: &mut W) -> i32 {
    let result = match cfg.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::dispatch(cfg, out)),
            Err(e) => Err(commands::CmdError::from(e.to_string())),
        },
        None => commands::dispatch(cfg, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<CliConfig, ArgsError> {
        parse_args_with_env(args.iter().copied(), None)
    }

    #[test]
    fn spec_examples() {
        let cfg = parse(&["primes", "--c", "11/10", "--limit", "12"]).unwrap();
        assert_eq!(
            cfg.command,
            Command::Primes {
                c: psg_core::make_exponent(11, 10).unwrap(),
                limit: 12
            }
        );
        let cfg = parse(&["verify", "--c", "11/10", "--from", "101", "--to", "999"]).unwrap();
        assert!(matches!(cfg.command, Command::Verify { from: 101, to: 999, .. }));

        let err = parse(&["primes", "--c", "2/1"]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
        assert!(err.to_string().contains("--c"), "{err}");
    }

    #[test]
    fn usage_errors_name_the_flag() {
        for (args, flag) in [
            (vec!["primes", "--c", "1.1", "--limit", "5"], "--c"),
            (vec!["primes", "--c", "11/10", "--limit", "5", "--bogus"], "--bogus"),
            (vec!["moments", "--c", "11/10", "--u", "2.6", "--log2n", "9:3"], "--log2n"),
            (vec!["moments", "--c", "11/10", "--u", "1.5", "--log2n", "5:6"], "--u"),
            (vec!["discrepancy", "--c", "11/10", "--log2n", "5", "--w", "4"], "--w"),
            (vec!["discrepancy", "--c", "11/10", "--log2n", "5", "--w", "6", "--b", "3"], "--b"),
            (vec!["verify", "--c", "11/10,3/2", "--from", "1", "--to", "9"], "--c"),
            (vec!["verify", "--c", "11/10", "--from", "9", "--to", "1"], "--from"),
            (vec!["transference", "--c", "11/10", "--x", "1000", "--q", "3"], "--q"),
            (vec!["expsum", "--kind", "nu", "--x", "100"], "--c"),
            (vec!["psi-check", "--h", "1"], "--h"),
            (vec!["--threads", "0", "psi-check"], "--threads"),
        ] {
            let err = parse(&args).unwrap_err();
            assert_eq!(err.exit_code(), EXIT_USAGE, "{args:?}");
            assert!(err.to_string().contains(flag), "{args:?}: {err}");
        }
    }

    #[test]
    fn global_flags_and_precedence() {
        let cfg = parse(&["psi-check"]).unwrap();
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.seed, DEFAULT_SEED);
        assert!(cfg.timestamp && cfg.cache_dir.is_none());

        let cfg = parse_args_with_env(
            ["psi-check", "--cache-dir", "/a", "--format", "json", "--seed", "7", "--no-timestamp"],
            Some(PathBuf::from("/env")),
        )
        .unwrap();
        assert_eq!(cfg.cache_dir, Some(PathBuf::from("/env")));
        assert_eq!((cfg.format, cfg.seed, cfg.timestamp), (Format::Json, 7, false));
    }

    #[test]
    fn config_file_supplies_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("psg.toml");
        std::fs::write(&path, "format = \"json\"\nseed = 11\nthreads = 2\n").unwrap();
        let p = path.to_str().unwrap();
        let cfg = parse(&["psi-check", "--config", p]).unwrap();
        assert_eq!((cfg.format, cfg.seed, cfg.threads), (Format::Json, 11, Some(2)));
        let cfg = parse(&["psi-check", "--config", p, "--seed", "3", "--format", "csv"]).unwrap();
        assert_eq!((cfg.format, cfg.seed), (Format::Csv, 3));

        std::fs::write(&path, "colour = true\n").unwrap();
        let err = parse(&["psi-check", "--config", p]).unwrap_err();
        assert!(err.to_string().contains("--config"));
    }

    #[test]
    fn log2_ranges() {
        assert_eq!(parse_log2_range("14:18"), Ok(Log2Range { lo: 14, hi: 18 }));
        assert_eq!(parse_log2_range("16"), Ok(Log2Range { lo: 16, hi: 16 }));
        assert_eq!(Log2Range { lo: 4, hi: 6 }.sizes().collect::<Vec<_>>(), [16, 32, 64]);
        assert!(parse_log2_range("3:5").is_err());
        assert!(parse_log2_range("a:b").is_err());
    }
}

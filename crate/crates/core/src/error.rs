use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("exponent {num}/{den} is outside the open interval (1, 2)")]
    OutOfRange { num: u64, den: u64 },
    #[error("exponent has a zero denominator")]
    ZeroDenominator,
    #[error("cannot parse exponent {0:?}: expected \"num/den\"")]
    ExponentSyntax(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cache file {path} is corrupt: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },
    #[error("W = {0} is not a primorial")]
    NotPrimorial(u64),
    #[error("b = {b} is not an admissible residue modulo W = {w}")]
    BadResidue { b: u64, w: u64 },
    #[error("weight at n = {n} is negative or not finite")]
    InvalidWeight { n: u64 },
    #[error("progression r = {start}, q = {step}, L = {len} leaves [1, {n_max}]")]
    OutOfBounds {
        start: u64,
        step: u64,
        len: u64,
        n_max: u64,
    },
    #[error("no coprime residue triple for m = {m} modulo W = {w}")]
    NoSolution { m: u64, w: u64 },
    #[error("grid size {m} is smaller than the sequence length {n_max}")]
    GridTooSmall { m: usize, n_max: usize },
    #[error("spectra have different grid sizes ({0} vs {1})")]
    GridMismatch(usize, usize),
    #[error("sequences have different lengths ({0}, {1}, {2})")]
    LengthMismatch(usize, usize, usize),
    #[error("f exceeds its majorant at n = {n}")]
    DominationViolated { n: u64 },
    #[error("convolution lost integer precision: {0}")]
    PrecisionLoss(String),
    #[error("malformed sequence file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

//! CSV and dense binary (`PSWS`) serialization of weighted sequences.

use std::io::{BufRead, Read, Write};

use super::{SequenceKind, WeightedSequence};
use crate::{Error, Real, Result};

pub const MAGIC: &[u8; 4] = b"PSWS";

impl<T: Real> WeightedSequence<T> {
    /// `n,value` rows with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n,value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{},{}", i + 1, v.as_f64())?;
        }
        Ok(())
    }

    /// Reads rows `n,value`; missing `n` are zero, `n_max` is the largest row.
    pub fn read_csv<R: BufRead>(input: R, kind: SequenceKind) -> Result<Self> {
        let mut values = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with('n')) {
                continue;
            }
            let bad = || Error::Format(format!("line {}: {line:?}", lineno + 1));
            let (n, v) = line.split_once(',').ok_or_else(bad)?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            let v: f64 = v.trim().parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            if values.len() < n {
                values.resize(n, T::zero());
            }
            values[n - 1] = T::of_f64(v);
        }
        Self::new(values, kind)
    }

    /// `"PSWS" | n_max: u64 | kind: u8 | f64 × n_max`, little-endian.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&(self.values.len() as u64).to_le_bytes())?;
        out.write_all(&[self.kind.code()])?;
        for v in &self.values {
            out.write_all(&v.as_f64().to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut head = [0u8; 13];
        input.read_exact(&mut head)?;
        if &head[..4] != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let n_max = u64::from_le_bytes(head[4..12].try_into().unwrap()) as usize;
        let kind = SequenceKind::from_code(head[12])
            .ok_or_else(|| Error::Format(format!("unknown kind {}", head[12])))?;
        let mut body = Vec::new();
        input.read_to_end(&mut body)?;
        if body.len() != n_max * 8 {
            return Err(Error::Format(format!(
                "expected {} value bytes, found {}",
                n_max * 8,
                body.len()
            )));
        }
        let values = body
            .chunks_exact(8)
            .map(|c| T::of_f64(f64::from_le_bytes(c.try_into().unwrap())))
            .collect();
        Self::new(values, kind)
    }
}

//! Farey dissection of `[0, 1)` into major arcs `|θ - a/q| ≤ (log N)^B / N`,
//! `q ≤ (log N)^B`, and the complementary minor arcs.

use num_integer::Integer;
use serde::Serialize;

use super::SpectrumGrid;
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MajorArc {
    pub a: u64,
    pub q: u64,
    pub center: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcPartition {
    pub n: u64,
    pub b: f64,
    pub q_max: u64,
    pub radius: f64,
    /// Ordered by `q`, then `a`.
    pub arcs: Vec<MajorArc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcClass {
    Major { a: u64, q: u64 },
    Minor,
}

/// Distance from `x` to the nearest integer.
fn circle_norm(x: f64) -> f64 {
    let r = x - x.floor();
    r.min(1.0 - r)
}

pub fn arc_partition(n: u64, b: f64) -> Result<ArcPartition> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!("arc partition needs N ≥ 16, got {n}")));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("B must be positive, got {b}")));
    }
    let scale = (n as f64).ln().powf(b);
    let q_max = scale.floor() as u64;
    let arcs = (1..=q_max)
        .flat_map(|q| {
            (1..=q).filter(move |a| a.gcd(&q) == 1).map(move |a| MajorArc {
                a,
                q,
                center: a as f64 / q as f64,
            })
        })
        .collect();
    Ok(ArcPartition {
        n,
        b,
        q_max,
        radius: scale / n as f64,
        arcs,
    })
}

/// The first arc (smallest `q`, then smallest `a`) containing `θ`.
pub fn classify_theta(part: &ArcPartition, theta: f64) -> ArcClass {
    part.arcs
        .iter()
        .find(|arc| circle_norm(theta - arc.center) <= part.radius)
        .map_or(ArcClass::Minor, |arc| ArcClass::Major { a: arc.a, q: arc.q })
}

/// Largest `|ĝ|` seen on each major arc and on the minor arcs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcSup {
    pub major: Vec<(MajorArc, f64)>,
    pub minor: f64,
}

impl ArcPartition {
    pub fn sup_by_arc<T: Real>(&self, grid: &SpectrumGrid<T>) -> ArcSup {
        let mut major: Vec<(MajorArc, f64)> = self.arcs.iter().map(|&a| (a, 0.0)).collect();
        let mut minor = 0.0f64;
        for (j, v) in grid.values().iter().enumerate() {
            let modulus = v.norm().as_f64();
            match classify_theta(self, grid.theta(j).as_f64()) {
                ArcClass::Major { a, q } => {
                    let slot = major
                        .iter_mut()
                        .find(|(arc, _)| arc.a == a && arc.q == q)
                        .expect("classified arcs belong to the partition");
                    slot.1 = slot.1.max(modulus);
                }
                ArcClass::Minor => minor = minor.max(modulus),
            }
        }
        ArcSup { major, minor }
    }
}

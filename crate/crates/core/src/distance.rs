//! Distance measures between distributions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Distribution, Error, Result};

/// Distance measure tag.
///
/// `L1`, `L2` and `LInf` are metrics. `KL` is the directed Kullback-Leibler
/// divergence in bits and may be `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    #[serde(rename = "linf")]
    LInf,
    KL,
}

impl Norm {
    pub const ALL: [Norm; 4] = [Norm::L1, Norm::L2, Norm::LInf, Norm::KL];
    pub const METRICS: [Norm; 3] = [Norm::L1, Norm::L2, Norm::LInf];

    pub fn name(self) -> &'static str {
        match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::LInf => "linf",
            Norm::KL => "kl",
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Norm::L1),
            "l2" => Ok(Norm::L2),
            "linf" | "l-inf" | "inf" => Ok(Norm::LInf),
            "kl" => Ok(Norm::KL),
            _ => Err(Error::Parse(format!("unknown norm {s:?}"))),
        }
    }
}

/// Distance between two distributions of equal alphabet size.
pub fn distance(p: &Distribution, q: &Distribution, norm: Norm) -> Result<f64> {
    if p.m() != q.m() {
        return Err(Error::DimensionMismatch {
            expected: p.m(),
            actual: q.m(),
        });
    }
    Ok(distance_slices(p.probs(), q.probs(), norm))
}

/// Same as [`distance`] on raw slices. `q` need not sum to one; this is
/// used for the subnormalized dyadic reconstructions of prefix codes.
///
/// Panics if the lengths differ.
pub fn distance_slices(p: &[f64], q: &[f64], norm: Norm) -> f64 {
    assert_eq!(p.len(), q.len(), "dimension mismatch");
    let pairs = p.iter().zip(q);
    match norm {
        Norm::L1 => pairs.map(|(a, b)| (a - b).abs()).sum(),
        Norm::L2 => pairs.map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(),
        Norm::LInf => pairs.map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
        Norm::KL => {
            let mut acc = 0.0;
            for (&a, &b) in pairs {
                if a == 0.0 {
                    continue;
                }
                if b == 0.0 {
                    return f64::INFINITY;
                }
                acc += a * (a / b).log2();
            }
            // rounding can push a tiny divergence below zero
            acc.max(0.0)
        }
    }
}

/// Distances under every [`Norm`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub kl: f64,
}

impl DistanceReport {
    pub fn between(p: &[f64], q: &[f64]) -> Self {
        Self {
            l1: distance_slices(p, q, Norm::L1),
            l2: distance_slices(p, q, Norm::L2),
            linf: distance_slices(p, q, Norm::LInf),
            kl: distance_slices(p, q, Norm::KL),
        }
    }

    pub fn get(&self, norm: Norm) -> f64 {
        match norm {
            Norm::L1 => self.l1,
            Norm::L2 => self.l2,
            Norm::LInf => self.linf,
            Norm::KL => self.kl,
        }
    }

    /// Componentwise maximum.
    pub fn max(self, other: Self) -> Self {
        Self {
            l1: self.l1.max(other.l1),
            l2: self.l2.max(other.l2),
            linf: self.linf.max(other.linf),
            kl: self.kl.max(other.kl),
        }
    }

    pub const ZERO: DistanceReport = DistanceReport {
        l1: 0.0,
        l2: 0.0,
        linf: 0.0,
        kl: 0.0,
    };
}

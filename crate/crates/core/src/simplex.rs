//! Points of the probability simplex and of the type lattice.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Accepted deviation of `Σ p_i` from 1.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// A probability distribution over an alphabet of `m ≥ 2` symbols.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates `probs` as a point of the simplex. Components must be
    /// finite and nonnegative and sum to 1 within [`SUM_TOLERANCE`].
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidDistribution(format!(
                "alphabet size must be at least 2, got {}",
                probs.len()
            )));
        }
        if let Some(x) = probs.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "component {x} is negative or not finite"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "components sum to {sum}, not 1"
            )));
        }
        Ok(Self { probs })
    }

    /// Builds a distribution from raw nonnegative weights (e.g. histogram
    /// counts) by dividing through by their total.
    pub fn normalized(weights: &[f64]) -> Result<Self> {
        if let Some(x) = weights.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "weight {x} is negative or not finite"
            )));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::InvalidDistribution(
                "weights must have a positive finite total".into(),
            ));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    /// Uniform distribution over `m` symbols.
    pub fn uniform(m: usize) -> Result<Self> {
        Self::new(vec![1.0 / m as f64; m])
    }

    /// Wraps components that are known to lie on the simplex up to rounding.
    pub(crate) fn from_vec_unchecked(probs: Vec<f64>) -> Self {
        debug_assert!(probs.iter().all(|x| *x >= 0.0));
        Self { probs }
    }

    pub fn m(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

impl TryFrom<Vec<f64>> for Distribution {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Distribution> for Vec<f64> {
    fn from(d: Distribution) -> Self {
        d.probs
    }
}

impl AsRef<[f64]> for Distribution {
    fn as_ref(&self) -> &[f64] {
        &self.probs
    }
}

/// A point of the type lattice: `m` nonnegative counts summing to `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypePoint {
    counts: Vec<u32>,
    n: u32,
}

impl TypePoint {
    /// Creates a point whose denominator is the sum of `counts`.
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::InvalidPoint(format!(
                "need at least 2 coordinates, got {}",
                counts.len()
            )));
        }
        let total: u64 = counts.iter().map(|&k| u64::from(k)).sum();
        let n = u32::try_from(total)
            .map_err(|_| Error::InvalidPoint(format!("total {total} exceeds u32")))?;
        if n == 0 {
            return Err(Error::InvalidPoint("counts sum to zero".into()));
        }
        Ok(Self { counts, n })
    }

    /// Creates a point and checks that the counts sum to `n`.
    pub fn with_total(counts: Vec<u32>, n: u32) -> Result<Self> {
        let p = Self::new(counts)?;
        if p.n != n {
            return Err(Error::InvalidPoint(format!(
                "counts sum to {}, expected {n}",
                p.n
            )));
        }
        Ok(p)
    }

    pub(crate) fn from_parts_unchecked(counts: Vec<u32>, n: u32) -> Self {
        debug_assert_eq!(
            counts.iter().map(|&k| u64::from(k)).sum::<u64>(),
            u64::from(n)
        );
        Self { counts, n }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.counts.len()
    }

    /// The plain reconstruction `k_i / n`.
    pub fn to_distribution(&self) -> Distribution {
        let n = f64::from(self.n);
        Distribution::from_vec_unchecked(self.counts.iter().map(|&k| f64::from(k) / n).collect())
    }
}

impl fmt::Display for TypePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Rational bias `β = num / den` shifting reconstruction points toward the
/// interior of the simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bias {
    num: u32,
    den: u32,
}

impl Bias {
    pub const ZERO: Bias = Bias { num: 0, den: 1 };

    /// Builds `num / den` in lowest terms.
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidLattice("bias denominator is zero".into()));
        }
        if num == 0 {
            return Ok(Self::ZERO);
        }
        let g = num.gcd(&den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    /// `β = 1/m`.
    pub fn reciprocal(m: usize) -> Result<Self> {
        let den =
            u32::try_from(m).map_err(|_| Error::InvalidLattice(format!("m = {m} too large")))?;
        Self::new(1, den)
    }

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn value(self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }
}

impl Default for Bias {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Display for Bias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Parses `"a/b"` or a plain decimal such as `"0.25"`.
impl FromStr for Bias {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid bias {s:?}"));
        if let Some((a, b)) = s.split_once('/') {
            let num = a.trim().parse::<u32>().map_err(|_| bad())?;
            let den = b.trim().parse::<u32>().map_err(|_| bad())?;
            return Self::new(num, den);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int = if int.is_empty() {
            0
        } else {
            int.parse::<u64>().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac.len() as u32);
        let frac_val = if frac.is_empty() {
            0
        } else {
            frac.parse::<u64>().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|x| x.checked_add(frac_val))
            .ok_or_else(bad)?;
        let g = num.gcd(&den).max(1);
        let (num, den) = (num / g, den / g);
        Self::new(
            u32::try_from(num).map_err(|_| bad())?,
            u32::try_from(den).map_err(|_| bad())?,
        )
    }
}

/// Parameters `(m, n, β)` of a plain (`β = 0`) or biased type lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    m: usize,
    n: u32,
    beta: Bias,
}

impl LatticeSpec {
    pub fn new(m: usize, n: u32, beta: Bias) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidLattice(format!(
                "m must be at least 2, got {m}"
            )));
        }
        if u32::try_from(m).is_err() {
            return Err(Error::InvalidLattice(format!("m = {m} too large")));
        }
        if n < 1 {
            return Err(Error::InvalidLattice("n must be at least 1".into()));
        }
        Ok(Self { m, n, beta })
    }

    pub fn plain(m: usize, n: u32) -> Result<Self> {
        Self::new(m, n, Bias::ZERO)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn beta(&self) -> Bias {
        self.beta
    }

    pub fn is_plain(&self) -> bool {
        self.beta.is_zero()
    }

    /// Checks that `point` belongs to this lattice.
    pub fn check_point(&self, point: &TypePoint) -> Result<()> {
        if point.m() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                actual: point.m(),
            });
        }
        if point.n() != self.n {
            return Err(Error::InvalidPoint(format!(
                "point has denominator {}, lattice has {}",
                point.n(),
                self.n
            )));
        }
        Ok(())
    }

    /// Reconstruction `q_i = (k_i + β) / (n + β m)`.
    pub fn reconstruct(&self, point: &TypePoint) -> Distribution {
        let beta = self.beta.value();
        let denom = f64::from(self.n) + beta * self.m as f64;
        Distribution::from_vec_unchecked(
            point
                .counts()
                .iter()
                .map(|&k| (f64::from(k) + beta) / denom)
                .collect(),
        )
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} n={} beta={}", self.m, self.n, self.beta)
    }
}

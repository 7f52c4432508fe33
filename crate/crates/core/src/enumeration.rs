//! Lexicographic ranking of types.
//!
//! Types are ordered lexicographically with `k_1` most significant, so
//! `(0,…,0,n)` has rank 0 and `(n,0,…,0)` has rank `C(n+m-1, m-1) - 1`.
//! All counts and ranks are arbitrary precision.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result, TypePoint};

/// Largest binomial table (entries) an [`Enumerator`] precomputes.
const TABLE_LIMIT: usize = 1 << 18;

/// Lexicographic rank of a type.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeIndex(BigUint);

impl TypeIndex {
    pub fn new(value: BigUint) -> Self {
        Self(value)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }
}

impl From<u64> for TypeIndex {
    fn from(v: u64) -> Self {
        Self(BigUint::from(v))
    }
}

impl From<BigUint> for TypeIndex {
    fn from(v: BigUint) -> Self {
        Self(v)
    }
}

impl fmt::Display for TypeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // exact at every step: the running product is C(n, i + 1)
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Number of ways to write `s` as an ordered sum of `parts` nonnegative
/// integers.
fn compositions(s: u64, parts: usize) -> BigUint {
    if parts == 0 {
        return if s == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    let p = (parts - 1) as u64;
    binomial(s + p, p)
}

/// Number of types `|Q_n| = C(n+m-1, m-1)`.
pub fn count_types(m: usize, n: u32) -> BigUint {
    compositions(u64::from(n), m)
}

/// Fixed code length `⌈log2 |Q_n|⌉` in bits.
pub fn code_rate(m: usize, n: u32) -> u64 {
    bits_for(&count_types(m, n))
}

/// `⌈log2 count⌉`, with 0 bits for a single point.
pub(crate) fn bits_for(count: &BigUint) -> u64 {
    if count.is_zero() {
        return 0;
    }
    (count - 1u32).bits()
}

/// Unrounded `log2 |Q_n|`.
pub fn log2_count(m: usize, n: u32) -> f64 {
    log2_big(&count_types(m, n))
}

/// `log2` of an arbitrary-precision integer.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::NAN, f64::log2);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.log2() + shift as f64
}

/// Largest `n` whose fixed code length fits in `budget` bits.
pub fn max_n_for_rate(m: usize, budget: u32) -> Result<u32> {
    if m < 2 {
        return Err(Error::InvalidLattice(format!(
            "m must be at least 2, got {m}"
        )));
    }
    let fits = |n: u32| code_rate(m, n) <= u64::from(budget);
    if !fits(1) {
        return Err(Error::BudgetTooSmall {
            budget,
            needed: code_rate(m, 1) as u32,
        });
    }
    if fits(u32::MAX) {
        return Err(Error::BudgetTooLarge(budget));
    }
    // exponential search for a failing bound, then bisect on [lo, hi)
    let mut lo = 1u32;
    let mut hi = 2u32;
    while fits(hi) {
        lo = hi;
        hi = hi.saturating_mul(2);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Rank/unrank engine for one `(m, n)` lattice.
///
/// For small lattices a table of composition counts is built once at
/// construction and used read-only afterwards, so an `Enumerator` can be
/// shared across threads. Larger lattices compute binomials on demand.
#[derive(Clone, Debug)]
pub struct Enumerator {
    m: usize,
    n: u32,
    count: BigUint,
    /// `table[p][s]` = compositions of `s` into `p` parts, `p ∈ 0..=m`.
    table: Option<Vec<Vec<BigUint>>>,
}

impl Enumerator {
    pub fn new(m: usize, n: u32) -> Result<Self> {
        Self::with_table_limit(m, n, TABLE_LIMIT)
    }

    /// Like [`Enumerator::new`] but never builds a table.
    pub fn without_table(m: usize, n: u32) -> Result<Self> {
        Self::with_table_limit(m, n, 0)
    }

    fn with_table_limit(m: usize, n: u32, limit: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidLattice("m must be at least 1".into()));
        }
        let width = n as usize + 1;
        let table = (m.saturating_add(1).saturating_mul(width) <= limit).then(|| {
            let mut table = Vec::with_capacity(m + 1);
            let mut zero_parts = vec![BigUint::zero(); width];
            zero_parts[0] = BigUint::one();
            table.push(zero_parts);
            for p in 1..=m {
                let prev = &table[p - 1];
                let mut row: Vec<BigUint> = Vec::with_capacity(width);
                for s in 0..width {
                    let below = if s == 0 {
                        BigUint::zero()
                    } else {
                        row[s - 1].clone()
                    };
                    row.push(below + &prev[s]);
                }
                table.push(row);
            }
            table
        });
        Ok(Self {
            m,
            n,
            count: count_types(m, n),
            table,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `|Q_n|`.
    pub fn count(&self) -> &BigUint {
        &self.count
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    fn comp(&self, s: u64, parts: usize) -> BigUint {
        match &self.table {
            Some(t) => t[parts][s as usize].clone(),
            None => compositions(s, parts),
        }
    }

    fn check(&self, point: &TypePoint) -> Result<()> {
        if point.m() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                actual: point.m(),
            });
        }
        if point.n() != self.n {
            return Err(Error::InvalidPoint(format!(
                "point has denominator {}, enumerator has {}",
                point.n(),
                self.n
            )));
        }
        Ok(())
    }

    /// Number of types lexicographically smaller than `point`.
    pub fn rank(&self, point: &TypePoint) -> Result<TypeIndex> {
        self.check(point)?;
        Ok(TypeIndex(match &self.table {
            Some(table) => rank_nested_sum(table, point.counts(), self.n),
            None => self.rank_closed(point.counts()),
        }))
    }

    /// Rank through the telescoped sum: the block of types with prefix
    /// value below `k` at a position with `p` later parts and remainder
    /// `r` holds `comp(r, p+1) - comp(r-k, p+1)` types.
    fn rank_closed(&self, counts: &[u32]) -> BigUint {
        let mut rank = BigUint::zero();
        let mut rest = u64::from(self.n);
        for (j, &k) in counts[..self.m - 1].iter().enumerate() {
            let later = self.m - j - 1;
            let k = u64::from(k);
            if k > 0 {
                rank += compositions(rest, later + 1) - compositions(rest - k, later + 1);
            }
            rest -= k;
        }
        rank
    }

    /// Inverse of [`Enumerator::rank`].
    pub fn unrank(&self, index: &TypeIndex) -> Result<TypePoint> {
        if index.0 >= self.count {
            return Err(Error::IndexOutOfRange {
                index: index.0.to_string(),
                count: self.count.to_string(),
            });
        }
        let mut idx = index.0.clone();
        let mut counts = Vec::with_capacity(self.m);
        let mut rest = u64::from(self.n);
        for j in 0..self.m - 1 {
            let later = self.m - j - 1;
            let k = if self.table.is_some() {
                // digit-by-digit: skip whole blocks while the index lies past them
                let mut k = 0u64;
                loop {
                    let block = self.comp(rest - k, later);
                    if idx < block {
                        break;
                    }
                    idx -= block;
                    k += 1;
                }
                k
            } else {
                let k = self.largest_prefix(&idx, rest, later);
                if k > 0 {
                    idx -= compositions(rest, later + 1) - compositions(rest - k, later + 1);
                }
                k
            };
            counts.push(k as u32);
            rest -= k;
        }
        counts.push(rest as u32);
        Ok(TypePoint::from_parts_unchecked(counts, self.n))
    }

    /// Largest `k` such that the types with prefix value below `k` number
    /// at most `idx`, by bisection on the remainder `r - k`.
    fn largest_prefix(&self, idx: &BigUint, rest: u64, later: usize) -> u64 {
        let total = compositions(rest, later + 1);
        // need comp(rest - k, later + 1) >= total - idx
        let target = total - idx;
        let (mut lo, mut hi) = (0u64, rest);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if compositions(mid, later + 1) >= target {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        rest - lo
    }
}

/// Literal nested sum over table entries; O(n) big-integer additions.
fn rank_nested_sum(table: &[Vec<BigUint>], counts: &[u32], n: u32) -> BigUint {
    let m = counts.len();
    let mut rank = BigUint::zero();
    let mut rest = n as usize;
    for (j, &k) in counts[..m - 1].iter().enumerate() {
        let later = m - j - 1;
        for v in 0..k as usize {
            rank += &table[later][rest - v];
        }
        rest -= k as usize;
    }
    rank
}

/// Lexicographic rank of `point`.
pub fn rank(point: &TypePoint) -> Result<TypeIndex> {
    Enumerator::new(point.m(), point.n())?.rank(point)
}

/// Type with the given rank in `Q_n` over `m` symbols.
pub fn unrank(index: &TypeIndex, m: usize, n: u32) -> Result<TypePoint> {
    Enumerator::new(m, n)?.unrank(index)
}

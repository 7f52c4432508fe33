//! Prefix-code baselines. A code with lengths `ℓ_i` induces the dyadic
//! reconstruction `q_i = 2^{-ℓ_i}`, which sums to at most one (Kraft).

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::enumeration::{binomial, log2_big};
use crate::{DistanceReport, Distribution, Error, Result};

/// Weight substituted for zero-probability symbols before Huffman merging.
pub const ZERO_WEIGHT: f64 = 1e-12;

/// Prefix-code lengths satisfying Kraft's inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeLengths(Vec<u32>);

impl CodeLengths {
    pub fn new(lengths: Vec<u32>) -> Result<Self> {
        if lengths.contains(&0) && lengths.len() > 1 {
            return Err(Error::InvalidPoint("zero code length".into()));
        }
        let c = Self(lengths);
        if c.kraft_sum() > 1.0 {
            return Err(Error::InvalidPoint(format!(
                "Kraft sum {} exceeds 1",
                c.kraft_sum()
            )));
        }
        Ok(c)
    }

    pub fn lengths(&self) -> &[u32] {
        &self.0
    }

    /// `Σ 2^{-ℓ_i}`; exact while the lengths stay below the f64 exponent range.
    pub fn kraft_sum(&self) -> f64 {
        self.induced().iter().sum()
    }

    /// `q_i = 2^{-ℓ_i}`, deliberately not renormalized.
    pub fn induced(&self) -> Vec<f64> {
        self.0.iter().map(|&l| (-(l as f64)).exp2()).collect()
    }

    /// Expected length `Σ p_i ℓ_i`.
    pub fn expected_length(&self, p: &[f64]) -> f64 {
        self.0.iter().zip(p).map(|(&l, &x)| x * f64::from(l)).sum()
    }
}

/// Result of mapping a distribution through a prefix code.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TreeQuantization {
    pub lengths: CodeLengths,
    /// Dyadic, possibly subnormalized, reconstruction.
    pub reconstruction: Vec<f64>,
    pub distances: DistanceReport,
}

impl TreeQuantization {
    fn from_lengths(p: &Distribution, lengths: Vec<u32>) -> Self {
        let lengths = CodeLengths(lengths);
        let reconstruction = lengths.induced();
        let distances = DistanceReport::between(p.probs(), &reconstruction);
        Self {
            lengths,
            reconstruction,
            distances,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeScheme {
    Huffman,
    GilbertMoore,
}

impl fmt::Display for TreeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TreeScheme::Huffman => "huffman",
            TreeScheme::GilbertMoore => "gilbert-moore",
        })
    }
}

#[derive(Clone, Copy, Debug)]
struct Node {
    weight: f64,
    /// smallest symbol index under this node
    first: usize,
    id: usize,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then(self.first.cmp(&other.first))
            .then(self.id.cmp(&other.id))
    }
}

/// Optimal prefix-code lengths by repeated merging of the two lightest
/// subtrees; equal weights merge the subtree holding the lowest symbol
/// index first.
pub fn huffman_lengths(weights: &[f64]) -> Vec<u32> {
    let m = weights.len();
    if m == 1 {
        return vec![0];
    }
    let mut parent = vec![usize::MAX; 2 * m - 1];
    let mut heap: BinaryHeap<Reverse<Node>> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            Reverse(Node {
                weight: w,
                first: i,
                id: i,
            })
        })
        .collect();
    let mut next = m;
    while heap.len() > 1 {
        let Reverse(a) = heap.pop().expect("two nodes");
        let Reverse(b) = heap.pop().expect("two nodes");
        parent[a.id] = next;
        parent[b.id] = next;
        heap.push(Reverse(Node {
            weight: a.weight + b.weight,
            first: a.first.min(b.first),
            id: next,
        }));
        next += 1;
    }
    // parents always have larger ids, so depths fill in from the root down
    let mut depth = vec![0u32; 2 * m - 1];
    for id in (0..2 * m - 2).rev() {
        depth[id] = depth[parent[id]] + 1;
    }
    depth.truncate(m);
    depth
}

/// Maps `p` to the dyadic distribution of its Huffman code.
pub fn huffman_quantize(p: &Distribution) -> Result<TreeQuantization> {
    let weights: Vec<f64> = p
        .probs()
        .iter()
        .map(|&x| if x > 0.0 { x } else { ZERO_WEIGHT })
        .collect();
    Ok(TreeQuantization::from_lengths(p, huffman_lengths(&weights)))
}

/// Gilbert-Moore lengths `⌈-log2 p_i⌉ + 1`.
pub fn gilbert_moore_lengths(p: &[f64]) -> Result<Vec<u32>> {
    p.iter()
        .map(|&x| {
            if x > 0.0 {
                Ok((-x.log2()).ceil() as u32 + 1)
            } else {
                Err(Error::InvalidDistribution(
                    "Gilbert-Moore needs p_i > 0".into(),
                ))
            }
        })
        .collect()
}

/// Maps `p` to the dyadic distribution of its Gilbert-Moore code.
pub fn gilbert_moore_quantize(p: &Distribution) -> Result<TreeQuantization> {
    Ok(TreeQuantization::from_lengths(
        p,
        gilbert_moore_lengths(p.probs())?,
    ))
}

pub fn tree_quantize(p: &Distribution, scheme: TreeScheme) -> Result<TreeQuantization> {
    match scheme {
        TreeScheme::Huffman => huffman_quantize(p),
        TreeScheme::GilbertMoore => gilbert_moore_quantize(p),
    }
}

/// Catalan number `C(2k, k) / (k + 1)`.
pub fn catalan(k: u64) -> BigUint {
    binomial(2 * k, k) / (k + 1)
}

fn factorial(m: u64) -> BigUint {
    (2..=m).fold(BigUint::one(), |acc, i| acc * i)
}

/// Rate in bits of a tree scheme's reconstruction set. Gilbert-Moore is
/// exact; Huffman is bracketed by tree-counting bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateInterval {
    pub lo: f64,
    pub hi: f64,
}

impl RateInterval {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// `log2 Catalan(m-1)` for Gilbert-Moore; `[log2(m!/2), log2(m! Catalan(m-1))]`
/// for Huffman.
pub fn tree_rate(m: usize, scheme: TreeScheme) -> RateInterval {
    let m = m as u64;
    let cat = catalan(m - 1);
    match scheme {
        TreeScheme::GilbertMoore => {
            let r = log2_big(&cat);
            RateInterval { lo: r, hi: r }
        }
        TreeScheme::Huffman => {
            let f = factorial(m);
            RateInterval {
                lo: log2_big(&(&f / 2u32)),
                hi: log2_big(&(f * cat)),
            }
        }
    }
}

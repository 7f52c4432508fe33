//! Fixed-rate quantization of discrete probability distributions.
//!
//! A distribution over `m` symbols is mapped to the nearest point of the
//! type lattice `Q_n = { k / n : Σ k_i = n }` and transmitted as its
//! lexicographic index in `⌈log2 C(n+m-1, m-1)⌉` bits. The crate also
//! provides biased and dual variants of the lattice, closed-form covering
//! radii, prefix-code baselines (Huffman, Gilbert-Moore), and a sweep
//! harness comparing their rate-distance behaviour.
//!
//! ```
//! use simplex_quant::{quantize, Distribution, LatticeSpec, encode, decode};
//!
//! let p = Distribution::new(vec![0.55, 0.25, 0.20]).unwrap();
//! let spec = LatticeSpec::plain(3, 3).unwrap();
//! let q = quantize(&p, &spec).unwrap();
//! assert_eq!(q.point.counts(), &[2, 1, 0]);
//!
//! let blob = encode(&q.point, &spec).unwrap();
//! assert_eq!(decode(&blob).unwrap().0, q.point);
//! ```

pub mod bounds;
pub mod codec;
mod distance;
pub mod enumeration;
mod error;
mod glue;
pub mod io;
pub mod lattice;
mod simplex;
pub mod sweep;
pub mod tree;

pub use bounds::{
    asymptotic_constant, covering_radius, kl_hole_lower_bound, optimal_bound_constant,
    optimality_gap, simplex_volume,
};
pub use codec::{decode, encode, EncodedBlob};
pub use distance::{distance, distance_slices, DistanceReport, Norm};
pub use enumeration::{
    code_rate, count_types, max_n_for_rate, rank, unrank, Enumerator, TypeIndex,
};
pub use error::{Error, Result};
pub use glue::{glue_norm_squared, glue_vector};
pub use lattice::{
    enumerate_holes, enumerate_types, quantize, quantize_any, quantize_biased, quantize_dual,
    DualPoint, QuantizeResult,
};
pub use simplex::{Bias, Distribution, LatticeSpec, TypePoint, SUM_TOLERANCE};
pub use tree::{gilbert_moore_quantize, huffman_quantize, tree_rate, CodeLengths, TreeScheme};

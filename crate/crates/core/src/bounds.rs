//! Closed-form radii and high-rate constants.
//!
//! With `a = ⌊m/2⌋`, the covering radii of the plain type lattice are
//!
//! | norm | radius |
//! |------|--------|
//! | L∞ | `(1/n)(1 - 1/m)` |
//! | L2 | `(1/n) sqrt(a(m-a)/m)` |
//! | L1 | `(1/n) 2a(m-a)/m` |
//!
//! Multiplying by `n ~ 2^{R/(m-1)} ((m-1)!)^{1/(m-1)}` gives the
//! coefficient of `2^{-R/(m-1)}` in the rate-distance curve. Factorials
//! go through `ln Γ` so large alphabets do not overflow.

use statrs::function::gamma::ln_gamma;

use crate::{Error, LatticeSpec, Norm, Result};

fn half(m: usize) -> usize {
    m / 2
}

/// Radius numerator: the value at `n = 1`.
fn unit_radius(m: usize, norm: Norm) -> Result<f64> {
    let mf = m as f64;
    let a = half(m);
    let prod = (a * (m - a)) as f64;
    match norm {
        Norm::LInf => Ok(1.0 - 1.0 / mf),
        Norm::L2 => Ok((prod / mf).sqrt()),
        Norm::L1 => Ok(2.0 * prod / mf),
        Norm::KL => Err(Error::UnsupportedNorm(Norm::KL)),
    }
}

/// `ln (m-1)!`
fn ln_factorial_m1(m: usize) -> f64 {
    ln_gamma(m as f64)
}

/// Covering radius of the plain type lattice under an L-norm.
pub fn covering_radius(spec: &LatticeSpec, norm: Norm) -> Result<f64> {
    if !spec.is_plain() {
        return Err(Error::InvalidLattice(
            "covering radius is only known for beta = 0".into(),
        ));
    }
    Ok(unit_radius(spec.m(), norm)? / f64::from(spec.n()))
}

/// Lower bound on the KL divergence between a deep hole and its nearest
/// type, from Pinsker's inequality applied to the L1 radius.
pub fn kl_hole_lower_bound(m: usize, n: u32) -> f64 {
    let r1 = unit_radius(m, Norm::L1).expect("L1 has a closed form") / f64::from(n);
    pinsker_kl_floor(r1)
}

/// `d1² / (2 ln 2)`, the smallest KL divergence (in bits) compatible with
/// an L1 distance of `d1`.
pub fn pinsker_kl_floor(d1: f64) -> f64 {
    d1 * d1 / (2.0 * std::f64::consts::LN_2)
}

/// Coefficient of `2^{-R/(m-1)}` in the high-rate covering radius of the
/// type lattice quantizer.
pub fn asymptotic_constant(m: usize, norm: Norm) -> Result<f64> {
    let root = (ln_factorial_m1(m) / (m - 1) as f64).exp();
    Ok(unit_radius(m, norm)? / root)
}

/// Volume of the unit simplex `Ω_m` in `ℝ^{m-1}`: `sqrt(m) / (m-1)!`.
pub fn simplex_volume(m: usize) -> f64 {
    (0.5 * (m as f64).ln() - ln_factorial_m1(m)).exp()
}

/// `(sqrt(m) / (m-1)!)^{1/(m-1)}`, the `(m-1)`-th root of the simplex volume.
pub fn volume_root(m: usize) -> f64 {
    ((0.5 * (m as f64).ln() - ln_factorial_m1(m)) / (m - 1) as f64).exp()
}

/// Best achievable L∞ coefficient of `2^{-R/(m-1)}` for any quantizer
/// of the simplex: `(1/2) (sqrt(m)/(m-1)!)^{1/(m-1)}`.
pub fn optimal_bound_constant(m: usize) -> f64 {
    0.5 * volume_root(m)
}

/// Ratio of the type lattice L∞ constant to the optimum.
pub fn optimality_gap(m: usize) -> f64 {
    asymptotic_constant(m, Norm::LInf).expect("L-inf has a closed form") / optimal_bound_constant(m)
}

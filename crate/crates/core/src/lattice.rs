//! Nearest-point search and enumeration on the type lattice.
//!
//! The search rounds `n p_i` to the nearest integer, then repairs the sum
//! by moving the `|Δ|` coordinates with the most extreme rounding errors
//! one unit each. Ties between equal errors resolve by coordinate index
//! (an ascending `(δ, i)` order; increments take the front, decrements
//! the back). Selection uses `select_nth_unstable_by`, so a query costs
//! `O(m)` expected time.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::enumeration::count_types;
use crate::{
    glue_vector, DistanceReport, Distribution, Error, LatticeSpec, Norm, Result, TypePoint,
};

/// Upper limit on items produced by the exhaustive enumerators.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Components of a glue-shifted point above `-HOLE_TOLERANCE` count as
/// inside the simplex and are clamped to zero.
pub const HOLE_TOLERANCE: f64 = 1e-12;

/// Outcome of a nearest-type query.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantizeResult {
    pub point: TypePoint,
    pub reconstruction: Distribution,
    pub distances: DistanceReport,
    /// `Σ round(x_i) - n` before repair.
    pub delta_applied: i64,
}

/// A point of the dual type lattice: `base / n + v_coset`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualPoint {
    pub base: TypePoint,
    pub coset: usize,
    pub reconstruction: Distribution,
    pub distances: DistanceReport,
}

fn by_error(errors: &[f64]) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&a, &b| errors[a].total_cmp(&errors[b]).then(a.cmp(&b))
}

/// Integer vector `k ≥ lower` with `Σ k = total` nearest to `target`
/// (which should itself sum to `total`). Returns the counts and the
/// initial imbalance, or `None` when the lower bounds exceed `total`.
pub(crate) fn nearest_counts(target: &[f64], total: u32, lower: &[u32]) -> Option<(Vec<u32>, i64)> {
    debug_assert_eq!(target.len(), lower.len());
    let floor_sum: u64 = lower.iter().map(|&l| u64::from(l)).sum();
    if floor_sum > u64::from(total) {
        return None;
    }
    let mut k: Vec<i64> = target
        .iter()
        .zip(lower)
        .map(|(&x, &l)| ((x + 0.5).floor() as i64).max(i64::from(l)))
        .collect();
    let initial = k.iter().sum::<i64>() - i64::from(total);
    let mut delta = initial;
    while delta != 0 {
        let errors: Vec<f64> = k
            .iter()
            .zip(target)
            .map(|(&ki, &x)| ki as f64 - x)
            .collect();
        let cmp = by_error(&errors);
        let mut idx: Vec<usize> = if delta > 0 {
            (0..k.len())
                .filter(|&i| k[i] > i64::from(lower[i]))
                .collect()
        } else {
            (0..k.len()).collect()
        };
        let take = (delta.unsigned_abs() as usize).min(idx.len());
        if delta > 0 {
            // largest errors first
            let rev = |a: &usize, b: &usize| cmp(b, a);
            if take < idx.len() {
                idx.select_nth_unstable_by(take, rev);
            }
            for &i in &idx[..take] {
                k[i] -= 1;
            }
            delta -= take as i64;
        } else {
            if take < idx.len() {
                idx.select_nth_unstable_by(take, &cmp);
            }
            for &i in &idx[..take] {
                k[i] += 1;
            }
            delta += take as i64;
        }
    }
    let counts = k.into_iter().map(|v| v as u32).collect();
    Some((counts, initial))
}

fn check_dims(p: &Distribution, spec: &LatticeSpec) -> Result<()> {
    if p.m() != spec.m() {
        return Err(Error::DimensionMismatch {
            expected: spec.m(),
            actual: p.m(),
        });
    }
    Ok(())
}

fn finish(p: &Distribution, spec: &LatticeSpec, counts: Vec<u32>, delta: i64) -> QuantizeResult {
    let point = TypePoint::from_parts_unchecked(counts, spec.n());
    let reconstruction = spec.reconstruct(&point);
    let distances = DistanceReport::between(p.probs(), reconstruction.probs());
    QuantizeResult {
        point,
        reconstruction,
        distances,
        delta_applied: delta,
    }
}

/// Nearest type of the plain lattice `Q_n`, simultaneously under L1, L2
/// and L∞.
pub fn quantize(p: &Distribution, spec: &LatticeSpec) -> Result<QuantizeResult> {
    check_dims(p, spec)?;
    if !spec.is_plain() {
        return Err(Error::InvalidLattice(
            "biased lattice: use quantize_biased".into(),
        ));
    }
    let n = f64::from(spec.n());
    let target: Vec<f64> = p.probs().iter().map(|&x| n * x).collect();
    let lower = vec![0; p.m()];
    let (counts, delta) = nearest_counts(&target, spec.n(), &lower).expect("zero floors");
    Ok(finish(p, spec, counts, delta))
}

/// Nearest biased type `(k + β) / (n + β m)`.
///
/// The distance to a biased point is `|k_i - x_i| / (n + β m)` with
/// `x_i = (n + β m) p_i - β`, so the plain search runs on `x` with the
/// counts clamped at zero.
pub fn quantize_biased(p: &Distribution, spec: &LatticeSpec) -> Result<QuantizeResult> {
    check_dims(p, spec)?;
    if spec.is_plain() {
        return Err(Error::InvalidLattice(
            "quantize_biased needs beta > 0".into(),
        ));
    }
    let beta = spec.beta().value();
    let scale = f64::from(spec.n()) + beta * spec.m() as f64;
    let target: Vec<f64> = p.probs().iter().map(|&x| scale * x - beta).collect();
    let lower = vec![0; p.m()];
    let (counts, delta) = nearest_counts(&target, spec.n(), &lower).expect("zero floors");
    Ok(finish(p, spec, counts, delta))
}

/// Dispatches to [`quantize`] or [`quantize_biased`] on `spec.beta()`.
pub fn quantize_any(p: &Distribution, spec: &LatticeSpec) -> Result<QuantizeResult> {
    if spec.is_plain() {
        quantize(p, spec)
    } else {
        quantize_biased(p, spec)
    }
}

/// Shifts `base / n` by `v_coset`, returning `None` if the result leaves
/// the simplex by more than [`HOLE_TOLERANCE`].
fn shifted(base: &[u32], n: u32, glue: &[f64]) -> Option<Vec<f64>> {
    let nf = f64::from(n);
    base.iter()
        .zip(glue)
        .map(|(&k, &g)| {
            let x = f64::from(k) / nf + g;
            if x < -HOLE_TOLERANCE {
                None
            } else {
                Some(x.max(0.0))
            }
        })
        .collect()
}

/// Count floors that keep `base / n + v_coset` inside the simplex: the
/// coordinates where the glue vector is negative need `k ≥ 1`.
fn coset_floors(m: usize, coset: usize) -> Vec<u32> {
    (0..m).map(|j| u32::from(coset > 0 && j >= coset)).collect()
}

/// Nearest point of the dual type lattice `Q*_n` under `norm`.
///
/// Each coset `i` is searched exactly: the nearest in-simplex point of
/// `Q_n + v_i` is the nearest count vector to `n (p - v_i)` subject to the
/// floors from `coset_floors`. The best coset wins, lower index on ties.
pub fn quantize_dual(p: &Distribution, spec: &LatticeSpec, norm: Norm) -> Result<DualPoint> {
    check_dims(p, spec)?;
    if !spec.is_plain() {
        return Err(Error::InvalidLattice(
            "dual lattice is defined for beta = 0".into(),
        ));
    }
    let (m, n) = (spec.m(), spec.n());
    let nf = f64::from(n);
    let mut best: Option<(f64, DualPoint)> = None;
    for coset in 0..m {
        let glue = glue_vector(m, n, coset)?;
        let floors = coset_floors(m, coset);
        let target: Vec<f64> = p
            .probs()
            .iter()
            .zip(&glue)
            .map(|(&x, &g)| nf * (x - g))
            .collect();
        let Some((counts, _)) = nearest_counts(&target, n, &floors) else {
            continue;
        };
        let Some(recon) = shifted(&counts, n, &glue) else {
            continue;
        };
        let distances = DistanceReport::between(p.probs(), &recon);
        let d = distances.get(norm);
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            let base = TypePoint::from_parts_unchecked(counts, n);
            let reconstruction = Distribution::from_vec_unchecked(recon);
            best = Some((
                d,
                DualPoint {
                    base,
                    coset,
                    reconstruction,
                    distances,
                },
            ));
        }
    }
    Ok(best.expect("coset 0 always yields a candidate").1)
}

fn guard(size: BigUint) -> Result<u64> {
    match size.to_u64() {
        Some(s) if s <= ENUMERATION_LIMIT => Ok(s),
        _ => Err(Error::EnumerationTooLarge {
            size: size.to_string(),
            limit: ENUMERATION_LIMIT,
        }),
    }
}

/// All types of `Q_n` in ascending lexicographic order (`k_1` major).
#[derive(Clone, Debug)]
pub struct Types {
    next: Option<Vec<u32>>,
    n: u32,
    remaining: u64,
}

impl Iterator for Types {
    type Item = TypePoint;

    fn next(&mut self) -> Option<TypePoint> {
        let current = self.next.take()?;
        self.remaining -= 1;
        self.next = successor(&current);
        Some(TypePoint::from_parts_unchecked(current, self.n))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

impl ExactSizeIterator for Types {}

/// Next composition in lexicographic order: bump the rightmost coordinate
/// (excluding the last) that has mass after it and sweep that mass, minus
/// one, into the final coordinate.
fn successor(k: &[u32]) -> Option<Vec<u32>> {
    let m = k.len();
    let mut tail = 0u32;
    for j in (0..m - 1).rev() {
        tail += k[j + 1];
        if tail > 0 {
            let mut next = k.to_vec();
            next[j] += 1;
            for x in &mut next[j + 1..] {
                *x = 0;
            }
            next[m - 1] = tail - 1;
            return Some(next);
        }
    }
    None
}

/// Enumerates `Q_n` lexicographically. Fails if `|Q_n|` exceeds
/// [`ENUMERATION_LIMIT`].
pub fn enumerate_types(spec: &LatticeSpec) -> Result<Types> {
    let (m, n) = (spec.m(), spec.n());
    let remaining = guard(count_types(m, n))?;
    let mut first = vec![0; m];
    first[m - 1] = n;
    Ok(Types {
        next: Some(first),
        n,
        remaining,
    })
}

fn glue_table(m: usize, n: u32) -> Vec<Vec<f64>> {
    (0..m)
        .map(|i| glue_vector(m, n, i).expect("i < m"))
        .collect()
}

/// Every hole `q + v_i` (`i ≥ 1`) that lies in the simplex.
pub fn enumerate_holes(spec: &LatticeSpec) -> Result<impl Iterator<Item = Distribution>> {
    let (m, n) = (spec.m(), spec.n());
    guard(count_types(m, n) * BigUint::from(m))?;
    let glue = glue_table(m, n);
    let types = enumerate_types(spec)?;
    Ok(types.flat_map(move |q| {
        glue[1..]
            .iter()
            .filter_map(|g| shifted(q.counts(), n, g).map(Distribution::from_vec_unchecked))
            .collect::<Vec<_>>()
    }))
}

/// Every point of the dual type lattice `Q*_n`, coset by coset.
pub fn enumerate_dual_points(spec: &LatticeSpec) -> Result<Vec<(TypePoint, usize, Distribution)>> {
    let (m, n) = (spec.m(), spec.n());
    guard(count_types(m, n) * BigUint::from(m))?;
    let glue = glue_table(m, n);
    let mut out = Vec::new();
    for (coset, g) in glue.iter().enumerate() {
        for q in enumerate_types(spec)? {
            if let Some(x) = shifted(q.counts(), n, g) {
                out.push((q, coset, Distribution::from_vec_unchecked(x)));
            }
        }
    }
    Ok(out)
}

/// `|Q*_n|`: coset `i > 0` keeps the types with `k_j ≥ 1` on its `m - i`
/// negative coordinates.
pub fn count_dual_points(m: usize, n: u32) -> BigUint {
    let mut total = count_types(m, n);
    for coset in 1..m {
        let floors = (m - coset) as u32;
        if floors <= n {
            total += count_types(m, n - floors);
        }
    }
    total
}

/// Largest distance from an in-simplex hole to its nearest type, per norm.
pub fn hole_radii(spec: &LatticeSpec) -> Result<DistanceReport> {
    let mut acc = DistanceReport::ZERO;
    for h in enumerate_holes(spec)? {
        acc = acc.max(quantize(&h, spec)?.distances);
    }
    Ok(acc)
}

/// Whether the plain lattice has an in-simplex deep hole for the L1/L2
/// radius, i.e. `n ≥ ⌊m/2⌋`. When it does the covering radii equal the
/// closed forms in [`crate::bounds`].
pub fn has_deep_hole_in_simplex(m: usize, n: u32) -> bool {
    n as usize >= m / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{distance, Bias};

    fn dist(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    fn plain(m: usize, n: u32) -> LatticeSpec {
        LatticeSpec::plain(m, n).unwrap()
    }

    #[test]
    fn lattice_point_is_fixed() {
        let r = quantize(&dist(&[0.5, 0.25, 0.25]), &plain(3, 4)).unwrap();
        assert_eq!(r.point.counts(), &[2, 1, 1]);
        assert_eq!(r.delta_applied, 0);
        assert_eq!(r.distances.l1, 0.0);
    }

    #[test]
    fn rounding_already_balanced() {
        let r = quantize(&dist(&[0.55, 0.25, 0.20]), &plain(3, 3)).unwrap();
        assert_eq!(r.point.counts(), &[2, 1, 0]);
        assert!((r.distances.l1 - 0.4).abs() < 1e-12);
    }

    #[test]
    fn increment_branch_with_tie() {
        // δ = [-0.35, -0.35, -0.3]: the tie goes to the lower index
        let r = quantize(&dist(&[0.45, 0.45, 0.10]), &plain(3, 3)).unwrap();
        assert_eq!(r.delta_applied, -1);
        assert_eq!(r.point.counts(), &[2, 1, 0]);
    }

    #[test]
    fn decrement_branch() {
        // each n p_i = 0.6 rounds up, so n' = 5 and two units come back off
        let r = quantize(&dist(&[0.2; 5]), &plain(5, 3)).unwrap();
        assert_eq!(r.delta_applied, 2);
        assert_eq!(r.point.n(), 3);
        assert_eq!(r.point.counts().iter().filter(|&&k| k == 1).count(), 3);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = dist(&[0.5, 0.5]);
        assert!(matches!(
            quantize(&p, &plain(3, 2)),
            Err(Error::DimensionMismatch { .. })
        ));
        let biased = LatticeSpec::new(2, 2, Bias::new(1, 2).unwrap()).unwrap();
        assert!(quantize(&p, &biased).is_err());
        assert!(quantize_biased(&p, &plain(2, 2)).is_err());
        assert!(quantize_dual(&p, &biased, Norm::L2).is_err());
    }

    #[test]
    fn biased_vertex_clamps() {
        let spec = LatticeSpec::new(3, 2, Bias::new(1, 3).unwrap()).unwrap();
        let r = quantize_biased(&dist(&[1.0, 0.0, 0.0]), &spec).unwrap();
        assert_eq!(r.point.counts(), &[2, 0, 0]);
        let expected = [7.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0];
        for (a, b) in r.reconstruction.probs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn dual_center() {
        let r = quantize_dual(&dist(&[1.0 / 3.0; 3]), &plain(3, 1), Norm::L2).unwrap();
        assert_eq!(r.coset, 2);
        assert_eq!(r.base.counts(), &[0, 0, 1]);
        assert!(r.distances.l2 < 1e-15);
    }

    #[test]
    fn dual_keeps_lattice_points() {
        let r = quantize_dual(&dist(&[0.5, 0.0, 0.5]), &plain(3, 2), Norm::L2).unwrap();
        assert_eq!(r.coset, 0);
        assert_eq!(r.distances.l2, 0.0);
    }

    #[test]
    fn dual_point_count() {
        let spec = plain(3, 2);
        assert_eq!(enumerate_dual_points(&spec).unwrap().len(), 10);
        assert_eq!(count_dual_points(3, 2), BigUint::from(10u32));
        for m in 2..6 {
            for n in 1..6 {
                let listed = enumerate_dual_points(&plain(m, n)).unwrap().len();
                assert_eq!(
                    BigUint::from(listed),
                    count_dual_points(m, n),
                    "m={m} n={n}"
                );
            }
        }
    }

    #[test]
    fn type_enumeration_order() {
        let got: Vec<Vec<u32>> = enumerate_types(&plain(3, 2))
            .unwrap()
            .map(|t| t.counts().to_vec())
            .collect();
        let want = vec![
            vec![0, 0, 2],
            vec![0, 1, 1],
            vec![0, 2, 0],
            vec![1, 0, 1],
            vec![1, 1, 0],
            vec![2, 0, 0],
        ];
        assert_eq!(got, want);
        assert_eq!(enumerate_types(&plain(2, 3)).unwrap().count(), 4);
        assert_eq!(enumerate_types(&plain(5, 8)).unwrap().len(), 495);
    }

    #[test]
    fn enumeration_guard() {
        assert!(matches!(
            enumerate_types(&plain(20, 20)),
            Err(Error::EnumerationTooLarge { .. })
        ));
        assert!(enumerate_holes(&plain(20, 20)).is_err());
    }

    #[test]
    fn holes_include_center() {
        let center = [1.0 / 3.0; 3];
        let found = enumerate_holes(&plain(3, 1)).unwrap().any(|h| {
            h.probs()
                .iter()
                .zip(center)
                .all(|(a, b)| (a - b).abs() < 1e-15)
        });
        assert!(found);
    }

    #[test]
    fn segment_midpoints() {
        let holes: Vec<_> = enumerate_holes(&plain(2, 2)).unwrap().collect();
        assert_eq!(holes.len(), 2);
        for h in holes {
            let r = quantize(&h, &plain(2, 2)).unwrap();
            assert!((r.distances.linf - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn deep_hole_reaches_radius() {
        let spec = plain(4, 3);
        let radius = crate::covering_radius(&spec, Norm::L1).unwrap();
        let deepest = enumerate_holes(&spec)
            .unwrap()
            .map(|h| quantize(&h, &spec).unwrap().distances.l1)
            .fold(0.0, f64::max);
        assert!((deepest - radius).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_matches_point() {
        let p = dist(&[0.1, 0.2, 0.3, 0.4]);
        let spec = plain(4, 7);
        let r = quantize(&p, &spec).unwrap();
        assert_eq!(r.reconstruction, spec.reconstruct(&r.point));
        assert_eq!(
            distance(&p, &r.reconstruction, Norm::L2).unwrap(),
            r.distances.l2
        );
    }
}

//! Rate-distance sweeps comparing the type lattice with tree baselines.
//!
//! Random points of the simplex are flat-Dirichlet draws built from
//! normalized `Exp(1)` variates. The stream is cut into chunks of
//! [`CHUNK_SIZE`] draws; chunk `c` uses `ChaCha8Rng::seed_from_u64(seed)`
//! on stream `c`, so results do not depend on how many workers run.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumeration::{bits_for, code_rate, max_n_for_rate};
use crate::lattice::{count_dual_points, has_deep_hole_in_simplex, hole_radii};
use crate::tree::{tree_quantize, tree_rate, TreeScheme};
use crate::{
    covering_radius, quantize, quantize_biased, quantize_dual, Bias, DistanceReport, Distribution,
    Error, LatticeSpec, Norm, Result,
};

pub const CHUNK_SIZE: u64 = 4096;

pub const CSV_HEADER: &str =
    "scheme,m,rate,rate_lo,rate_hi,n,max_d1,max_d2,max_dinf,max_dkl,method,samples,seed";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Scheme {
    TypeLattice,
    TypeLatticeBiased,
    TypeLatticeDual,
    Huffman,
    GilbertMoore,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    ExactHoles,
    MonteCarlo,
}

/// One row of sweep output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub scheme: Scheme,
    pub m: usize,
    pub rate: f64,
    pub rate_lo: f64,
    pub rate_hi: f64,
    /// Lattice denominator, 0 for tree schemes.
    pub n: u32,
    pub max_d1: f64,
    pub max_d2: f64,
    pub max_dinf: f64,
    pub max_dkl: f64,
    pub method: Method,
    pub samples: u64,
    pub seed: u64,
}

impl SweepRecord {
    pub fn max(&self, norm: Norm) -> f64 {
        match norm {
            Norm::L1 => self.max_d1,
            Norm::L2 => self.max_d2,
            Norm::LInf => self.max_dinf,
            Norm::KL => self.max_dkl,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub m: usize,
    /// Largest fixed rate (bits) for lattice rows.
    pub max_rate: u32,
    pub schemes: Vec<Scheme>,
    pub samples: u64,
    pub seed: u64,
    /// Bias for `TYPE_LATTICE_BIASED`; `1/m` when unset.
    pub beta: Option<Bias>,
}

/// Random generator for chunk `chunk` of the stream seeded by `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// One uniform draw from the simplex over `m` symbols.
pub fn sample_simplex<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Distribution {
    let mut x: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = x.iter().sum();
    for v in &mut x {
        *v /= total;
    }
    Distribution::from_vec_unchecked(x)
}

/// Runs `f` on `samples` seeded uniform draws in parallel, reducing with
/// `reduce` from `init`. The reduction must be associative and commutative.
pub fn monte_carlo<T, F, G>(m: usize, samples: u64, seed: u64, init: T, f: F, reduce: G) -> T
where
    T: Clone + Send + Sync,
    F: Fn(&Distribution) -> T + Sync,
    G: Fn(T, T) -> T + Sync + Send,
{
    let chunks = samples.div_ceil(CHUNK_SIZE);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let len = CHUNK_SIZE.min(samples - c * CHUNK_SIZE);
            let mut acc = init.clone();
            for _ in 0..len {
                acc = reduce(acc, f(&sample_simplex(&mut rng, m)));
            }
            acc
        })
        .reduce(|| init.clone(), &reduce)
}

/// Componentwise maximum distance over seeded draws.
pub fn monte_carlo_max<F>(m: usize, samples: u64, seed: u64, f: F) -> DistanceReport
where
    F: Fn(&Distribution) -> DistanceReport + Sync,
{
    monte_carlo(
        m,
        samples,
        seed,
        DistanceReport::ZERO,
        f,
        DistanceReport::max,
    )
}

/// Worst-case distances of the plain lattice `Q_n`.
///
/// When an in-simplex deep hole exists (`n ≥ ⌊m/2⌋`) the closed forms are
/// exact. Otherwise the holes are enumerated if small enough, and sampled
/// as a last resort. The KL column is always `+∞`: any point with a small
/// positive coordinate next to a vertex rounds that coordinate to zero.
pub fn type_lattice_worst(
    spec: &LatticeSpec,
    samples: u64,
    seed: u64,
) -> Result<(DistanceReport, Method)> {
    let (m, n) = (spec.m(), spec.n());
    let (mut report, method) = if has_deep_hole_in_simplex(m, n) {
        let r = DistanceReport {
            l1: covering_radius(spec, Norm::L1)?,
            l2: covering_radius(spec, Norm::L2)?,
            linf: covering_radius(spec, Norm::LInf)?,
            kl: 0.0,
        };
        (r, Method::ExactHoles)
    } else {
        match hole_radii(spec) {
            Ok(r) => (r, Method::ExactHoles),
            Err(Error::EnumerationTooLarge { .. }) => {
                let r = monte_carlo_max(m, samples, seed, |p| {
                    quantize(p, spec).expect("matching dimensions").distances
                });
                (r, Method::MonteCarlo)
            }
            Err(e) => return Err(e),
        }
    };
    report.kl = f64::INFINITY;
    Ok((report, method))
}

/// Denominators at each distinct fixed rate up to `max_rate`, largest `n`
/// per rate.
/// Every `n` up to this bound gets its own plain-lattice row; past it only
/// the largest `n` at each further rate is kept.
pub const DENSE_STEPS: u32 = 1024;

/// `(n, rate)` for the largest `n` at each fixed rate up to `max_rate`.
fn rate_steps(m: usize, max_rate: u32) -> Result<Vec<(u32, u64)>> {
    let first = code_rate(m, 1);
    let mut steps: Vec<(u32, u64)> = Vec::new();
    for budget in first..=u64::from(max_rate) {
        let n = max_n_for_rate(m, budget as u32)?;
        if steps.last().is_none_or(|&(prev, _)| prev != n) {
            steps.push((n, code_rate(m, n)));
        }
    }
    Ok(steps)
}

/// `(n, rate)` for `n = 1, 2, ...` within `max_rate`, thinned past [`DENSE_STEPS`].
fn lattice_steps(m: usize, max_rate: u32) -> Result<Vec<(u32, u64)>> {
    let mut steps: Vec<(u32, u64)> = (1..=DENSE_STEPS)
        .map(|n| (n, code_rate(m, n)))
        .take_while(|&(_, rate)| rate <= u64::from(max_rate))
        .collect();
    if steps.len() == DENSE_STEPS as usize {
        steps.extend(
            rate_steps(m, max_rate)?
                .into_iter()
                .filter(|&(n, _)| n > DENSE_STEPS),
        );
    }
    Ok(steps)
}

fn dual_steps(m: usize, max_rate: u32) -> Vec<(u32, u64)> {
    let mut steps: Vec<(u32, u64)> = Vec::new();
    let mut n = 1u32;
    loop {
        let rate = bits_for(&count_dual_points(m, n));
        if rate > u64::from(max_rate) {
            break;
        }
        match steps.last_mut() {
            Some(last) if last.1 == rate => last.0 = n,
            _ => steps.push((n, rate)),
        }
        n += 1;
    }
    steps
}

fn record(
    scheme: Scheme,
    config: &SweepConfig,
    rate: (f64, f64, f64),
    n: u32,
    d: DistanceReport,
    method: Method,
    samples: u64,
) -> SweepRecord {
    SweepRecord {
        scheme,
        m: config.m,
        rate: rate.0,
        rate_lo: rate.1,
        rate_hi: rate.2,
        n,
        max_d1: d.l1,
        max_d2: d.l2,
        max_dinf: d.linf,
        max_dkl: d.kl,
        method,
        samples,
        seed: config.seed,
    }
}

/// Produces sweep rows ordered by scheme, then rate.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    let m = config.m;
    if m < 2 {
        return Err(Error::InvalidLattice(format!(
            "m must be at least 2, got {m}"
        )));
    }
    if config.samples == 0 {
        return Err(Error::InvalidLattice("samples must be at least 1".into()));
    }
    let mut schemes = config.schemes.clone();
    schemes.sort();
    schemes.dedup();
    let (samples, seed) = (config.samples, config.seed);
    let mut rows = Vec::new();
    for scheme in schemes {
        match scheme {
            Scheme::TypeLattice => {
                for (n, rate) in lattice_steps(m, config.max_rate)? {
                    let spec = LatticeSpec::plain(m, n)?;
                    let (d, method) = type_lattice_worst(&spec, samples, seed)?;
                    let used = if method == Method::MonteCarlo {
                        samples
                    } else {
                        0
                    };
                    let r = rate as f64;
                    rows.push(record(scheme, config, (r, r, r), n, d, method, used));
                }
            }
            Scheme::TypeLatticeBiased => {
                let beta = match config.beta {
                    Some(b) => b,
                    None => Bias::reciprocal(m)?,
                };
                for (n, rate) in rate_steps(m, config.max_rate)? {
                    let spec = LatticeSpec::new(m, n, beta)?;
                    let d = monte_carlo_max(m, samples, seed, |p| {
                        quantize_biased(p, &spec)
                            .expect("matching dimensions")
                            .distances
                    });
                    let r = rate as f64;
                    rows.push(record(
                        scheme,
                        config,
                        (r, r, r),
                        n,
                        d,
                        Method::MonteCarlo,
                        samples,
                    ));
                }
            }
            Scheme::TypeLatticeDual => {
                for (n, rate) in dual_steps(m, config.max_rate) {
                    let spec = LatticeSpec::plain(m, n)?;
                    let d = monte_carlo_max(m, samples, seed, |p| {
                        quantize_dual(p, &spec, Norm::L2)
                            .expect("matching dimensions")
                            .distances
                    });
                    let r = rate as f64;
                    rows.push(record(
                        scheme,
                        config,
                        (r, r, r),
                        n,
                        d,
                        Method::MonteCarlo,
                        samples,
                    ));
                }
            }
            Scheme::Huffman | Scheme::GilbertMoore => {
                let tree = if scheme == Scheme::Huffman {
                    TreeScheme::Huffman
                } else {
                    TreeScheme::GilbertMoore
                };
                let rate = tree_rate(m, tree);
                let d = monte_carlo_max(m, samples, seed, |p| {
                    tree_quantize(p, tree)
                        .expect("uniform draws are positive")
                        .distances
                });
                rows.push(record(
                    scheme,
                    config,
                    (rate.midpoint(), rate.lo, rate.hi),
                    0,
                    d,
                    Method::MonteCarlo,
                    samples,
                ));
            }
        }
    }
    Ok(rows)
}

/// Writes rows as CSV with the fixed [`CSV_HEADER`]; `+∞` becomes `inf`.
pub fn write_csv<W: Write>(rows: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Parses CSV written by [`write_csv`].
pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

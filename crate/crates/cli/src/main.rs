use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::{json, Value};
use simplex_quant::bounds::covering_radius;
use simplex_quant::enumeration::log2_count;
use simplex_quant::io::parse_distributions;
use simplex_quant::lattice::{count_dual_points, has_deep_hole_in_simplex, hole_radii};
use simplex_quant::sweep::{sweep, write_csv, Scheme, SweepConfig};
use simplex_quant::{
    asymptotic_constant, code_rate, decode, encode, max_n_for_rate, optimal_bound_constant,
    optimality_gap, quantize_any, quantize_dual, Bias, DistanceReport, Distribution, EncodedBlob,
    Enumerator, LatticeSpec, Norm, TypeIndex, TypePoint,
};

const THREADS_VAR: &str = "SIMPLEX_QUANT_THREADS";

#[derive(Parser)]
#[command(
    name = "simplex-quant",
    version,
    about = "Fixed-rate quantization of probability distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quantize distributions to the nearest type and optionally encode one.
    Quantize(QuantizeArgs),
    /// Decode a .tqnt blob.
    Decode {
        /// Blob to read.
        file: PathBuf,
    },
    /// Lexicographic index of a type given by its counts.
    Rank {
        #[arg(required = true, value_delimiter = ',')]
        counts: Vec<u32>,
    },
    /// Type at a lexicographic index.
    Unrank {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: u32,
        index: BigUint,
    },
    /// Covering radii and rate-distance constants of a lattice.
    Analyze {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: u32,
        /// Norms to report; all L-norms when omitted.
        #[arg(long, value_delimiter = ',')]
        norm: Vec<Norm>,
    },
    /// Worst-case distance against rate for each scheme, as CSV.
    Sweep(SweepArgs),
    /// Sweep of the plain type lattice against both tree schemes.
    Compare(SweepArgs),
}

#[derive(Args)]
struct QuantizeArgs {
    /// Probabilities, if no --input is given.
    #[arg(value_delimiter = ',', allow_negative_numbers = true)]
    probs: Vec<f64>,
    /// Distribution file (text or JSON); `-` reads stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Treat input rows as raw weights.
    #[arg(long)]
    renormalize: bool,
    /// Alphabet size; checked against the input.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, conflicts_with = "rate")]
    n: Option<u32>,
    /// Rate budget in bits; picks the largest n that fits.
    #[arg(long)]
    rate: Option<u32>,
    /// Reconstruction bias, `a/b` or decimal.
    #[arg(long)]
    beta: Option<Bias>,
    /// Search the dual lattice instead.
    #[arg(long, conflicts_with = "beta")]
    dual: bool,
    /// Norm minimized by --dual.
    #[arg(long, default_value = "l2")]
    norm: Norm,
    /// Write the encoded point here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    m: usize,
    /// Largest lattice rate in bits.
    #[arg(long, default_value_t = 30)]
    rate: u32,
    /// Schemes to include. `sweep` defaults to all of them; `compare`
    /// defaults to the plain lattice and always adds both tree schemes.
    #[arg(long, value_delimiter = ',')]
    schemes: Vec<SchemeArg>,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Bias for the biased lattice; 1/m when omitted.
    #[arg(long)]
    beta: Option<Bias>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SchemeArg {
    TypeLattice,
    TypeLatticeBiased,
    TypeLatticeDual,
    Huffman,
    GilbertMoore,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::TypeLattice => Scheme::TypeLattice,
            SchemeArg::TypeLatticeBiased => Scheme::TypeLatticeBiased,
            SchemeArg::TypeLatticeDual => Scheme::TypeLatticeDual,
            SchemeArg::Huffman => Scheme::Huffman,
            SchemeArg::GilbertMoore => Scheme::GilbertMoore,
        }
    }
}

fn usage(kind: ErrorKind, msg: impl std::fmt::Display) -> ! {
    Cli::command().error(kind, msg).exit()
}

/// JSON number, or the string `"inf"` for infinities.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(if x > 0.0 { "inf" } else { "-inf" })
    }
}

fn distances_json(d: &DistanceReport) -> Value {
    json!({ "l1": num(d.l1), "l2": num(d.l2), "linf": num(d.linf), "kl": num(d.kl) })
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn configure_threads() {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            // only fails if a pool already exists, which cannot happen this early
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        _ => usage(
            ErrorKind::InvalidValue,
            format!("{THREADS_VAR} must be a positive integer, got {raw:?}"),
        ),
    }
}

fn cmd_quantize(args: QuantizeArgs) -> Result<()> {
    let dists = match (&args.input, args.probs.is_empty()) {
        (Some(path), true) => parse_distributions(&read_input(path)?, args.renormalize)?,
        (None, false) => {
            let p = if args.renormalize {
                Distribution::normalized(&args.probs)?
            } else {
                Distribution::new(args.probs.clone())?
            };
            vec![p]
        }
        (Some(_), false) => usage(
            ErrorKind::ArgumentConflict,
            "give probabilities or --input, not both",
        ),
        (None, true) => usage(
            ErrorKind::MissingRequiredArgument,
            "no distribution given (probabilities or --input)",
        ),
    };
    if args.dual && args.out.is_some() {
        usage(
            ErrorKind::ArgumentConflict,
            "--dual points have no index space; encoding them is unsupported",
        );
    }
    if args.out.is_some() && dists.len() != 1 {
        anyhow::bail!("--out holds exactly one point, input has {}", dists.len());
    }
    let m = dists[0].m();
    if let Some(want) = args.m {
        if let Some(p) = dists.iter().find(|p| p.m() != want) {
            anyhow::bail!(
                "--m {want} does not match a distribution over {} symbols",
                p.m()
            );
        }
    }
    if let Some(p) = dists.iter().find(|p| p.m() != m) {
        anyhow::bail!("mixed alphabet sizes in input: {m} and {}", p.m());
    }
    let n = match (args.n, args.rate) {
        (Some(n), None) => n,
        (None, Some(budget)) => max_n_for_rate(m, budget)?,
        _ => usage(
            ErrorKind::MissingRequiredArgument,
            "exactly one of --n and --rate is required",
        ),
    };
    let spec = LatticeSpec::new(m, n, args.beta.unwrap_or(Bias::ZERO))?;

    let stdout = io::stdout();
    let mut out = stdout.lock();
    for p in &dists {
        let report = if args.dual {
            let q = quantize_dual(p, &spec, args.norm)?;
            let count = count_dual_points(m, n);
            json!({
                "m": m, "n": n, "dual": true, "norm": args.norm.name(),
                "rate": (&count - 1u32).bits(),
                "coset": q.coset,
                "base": q.base.counts(),
                "reconstruction": q.reconstruction.probs(),
                "distances": distances_json(&q.distances),
            })
        } else {
            let q = quantize_any(p, &spec)?;
            let index = Enumerator::new(m, n)?.rank(&q.point)?;
            if let Some(path) = &args.out {
                let blob = encode(&q.point, &spec)?;
                fs::write(path, blob.as_bytes())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            json!({
                "m": m, "n": n, "beta": spec.beta().to_string(),
                "rate": code_rate(m, n),
                "index": index.to_string(),
                "point": q.point.counts(),
                "reconstruction": q.reconstruction.probs(),
                "distances": distances_json(&q.distances),
            })
        };
        writeln!(out, "{report}")?;
    }
    Ok(())
}

fn cmd_decode(file: &Path) -> Result<()> {
    let bytes = fs::read(file).with_context(|| format!("reading {}", file.display()))?;
    let (point, spec) = decode(&EncodedBlob::from_bytes(bytes))?;
    let index = Enumerator::new(spec.m(), spec.n())?.rank(&point)?;
    let report = json!({
        "m": spec.m(), "n": spec.n(), "beta": spec.beta().to_string(),
        "index": index.to_string(),
        "point": point.counts(),
        "reconstruction": spec.reconstruct(&point).probs(),
    });
    println!("{report}");
    Ok(())
}

fn cmd_analyze(m: usize, n: u32, norms: Vec<Norm>) -> Result<()> {
    let spec = LatticeSpec::plain(m, n)?;
    let norms = if norms.is_empty() {
        Norm::METRICS.to_vec()
    } else {
        norms
    };
    if norms.contains(&Norm::KL) {
        anyhow::bail!("analyze reports L-norm radii only; KL has no closed-form radius");
    }
    let holes = hole_radii(&spec)?;
    let log2_size = log2_count(m, n);
    let scale = (log2_size / (m - 1) as f64).exp2();

    println!(
        "m = {m}, n = {n}, |Q_n| = 2^{log2_size:.6}, fixed rate {} bits",
        code_rate(m, n)
    );
    if !has_deep_hole_in_simplex(m, n) {
        println!("n < floor(m/2): the L1/L2 deep holes lie outside the simplex");
    }
    println!(
        "{:<5} {:>14} {:>14} {:>14} {:>14}",
        "norm", "radius", "holes", "normalized", "asymptotic"
    );
    for norm in norms {
        let radius = covering_radius(&spec, norm)?;
        println!(
            "{:<5} {:>14.9} {:>14.9} {:>14.9} {:>14.9}",
            norm.name(),
            radius,
            holes.get(norm),
            radius * scale,
            asymptotic_constant(m, norm)?,
        );
    }
    if m >= 3 {
        println!(
            "optimum linf constant {:.9}, gap {:.6}",
            optimal_bound_constant(m),
            optimality_gap(m)
        );
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs, default: &[Scheme]) -> Result<()> {
    if args.samples == 0 {
        usage(ErrorKind::InvalidValue, "--samples must be at least 1");
    }
    let schemes = if args.schemes.is_empty() {
        default.to_vec()
    } else {
        args.schemes.into_iter().map(Scheme::from).collect()
    };
    let config = SweepConfig {
        m: args.m,
        max_rate: args.rate,
        schemes,
        samples: args.samples,
        seed: args.seed,
        beta: args.beta,
    };
    let rows = sweep(&config)?;
    match args.out {
        Some(path) => {
            let file =
                fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&rows, io::BufWriter::new(file))?;
        }
        None => write_csv(&rows, io::stdout().lock())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Quantize(args) => cmd_quantize(args),
        Command::Decode { file } => cmd_decode(&file),
        Command::Rank { counts } => {
            let point = TypePoint::new(counts)?;
            println!("{}", simplex_quant::rank(&point)?);
            Ok(())
        }
        Command::Unrank { m, n, index } => {
            let point = Enumerator::new(m, n)?.unrank(&TypeIndex::from(index))?;
            println!(
                "{}",
                point
                    .counts()
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            );
            Ok(())
        }
        Command::Analyze { m, n, norm } => cmd_analyze(m, n, norm),
        Command::Sweep(args) => cmd_sweep(
            args,
            &[
                Scheme::TypeLattice,
                Scheme::TypeLatticeBiased,
                Scheme::TypeLatticeDual,
                Scheme::Huffman,
                Scheme::GilbertMoore,
            ],
        ),
        Command::Compare(mut args) => {
            if args.schemes.is_empty() {
                args.schemes.push(SchemeArg::TypeLattice);
            }
            args.schemes
                .extend([SchemeArg::Huffman, SchemeArg::GilbertMoore]);
            cmd_sweep(args, &[])
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

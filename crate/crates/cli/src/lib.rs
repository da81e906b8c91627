//! Command-line front end for `ewkit`: build operators, pair them, compute
//! detection thresholds, tabulate sweeps, issue certificates and convert
//! between witnesses and map tables.
//!
//! Exit codes: 0 success (or certified), 1 not certified, 2 parameter or
//! dimension error, 3 unreadable or malformed file.

#![forbid(unsafe_code)]

pub mod error;
pub mod format;
pub mod grid;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ewkit::certification::{
    blockpos_scan, certify_atomic_conditional, certify_completely_copositive, certify_ppt, Certificate, ScanConfig,
    HA_SCHMIDT_ASSUMPTION,
};
use ewkit::constructions::{
    choi_map, dejamiolkowski, ha_state, jamiolkowski, maximally_entangled, perturbed_witness, projector_p, projector_q,
    witness_dk, witness_from_difference, StateFamilyParams, WitnessFamilyParams,
};
use ewkit::detection::{alpha_threshold, lambda_threshold, mu_threshold, sweep, SeparableState, Threshold, ZERO_TOL};
use ewkit::linalg::trace_pair;
use ewkit::multipartite::{sigma_indecomposable_certificate, MultipartitePair};
use ewkit::{HermitianOp, SigmaVector, TensorSpace};
use serde_json::{Map, Value};

pub use error::{CliError, CliResult};
use format::{fixed6, fixed6_trimmed, map_to_json, read_map, write_output, OperatorFile};
use grid::parse_grid;

/// Meta key marking an operator file as a declared-separable state.
pub const SEPARABLE_KEY: &str = "separable";

#[derive(Debug, Parser)]
#[command(name = "ewkit", version, about = "Entanglement-witness toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an operator (or a map table for `choi-map`) and write it as JSON.
    Construct(ConstructArgs),
    /// Print Tr(W rho) and whether rho is detected.
    Pair(PairArgs),
    /// Print a detection threshold, `none` or `infinite`.
    Bounds {
        #[command(subcommand)]
        kind: BoundsKind,
    },
    /// Tabulate Tr(W_{λ,μ} rho_γ) over a parameter grid as CSV.
    Sweep(SweepArgs),
    /// Issue a certificate as JSON; exit 0 if certified, 1 if not.
    Certify {
        #[command(subcommand)]
        kind: CertifyKind,
    },
    /// Convert between witnesses and map tables.
    Cj {
        #[command(subcommand)]
        direction: CjDirection,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    /// W_{d,k}; needs --d, --k.
    Witness,
    /// rho_γ; needs --d, --gamma.
    State,
    /// P on d⊗d; needs --d.
    ProjectorP,
    /// Q on d⊗d; needs --d.
    ProjectorQ,
    /// W_{d,k} + λP + μQ; needs --d, --k, --lambda, --mu.
    Perturbed,
    /// I/n; needs --d (for d⊗d) or --dims.
    MaximallyMixed,
    /// |Φ⁺⟩⟨Φ⁺| on d⊗d; needs --d.
    MaxEntangled,
    /// The map table behind W_{d,k}; needs --d, --k.
    ChoiMap,
    /// Q - P from two PSD operator files; needs --plus, --minus.
    Difference,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub kind: ConstructKind,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    /// Local dimensions, comma separated (maximally-mixed only).
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Multiply the constructed operator by this factor.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// PSD operator file Q (difference only).
    #[arg(long)]
    pub plus: Option<PathBuf>,
    /// PSD operator file P (difference only).
    #[arg(long)]
    pub minus: Option<PathBuf>,
    /// Output file; stdout if omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(short, long = "witness", value_name = "FILE")]
    pub w: PathBuf,
    #[arg(short, long = "state", value_name = "FILE")]
    pub s: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum BoundsKind {
    /// Largest α keeping (1-α)ρ₀ + ασ detected.
    Alpha {
        #[arg(short, long = "witness", value_name = "FILE")]
        w: PathBuf,
        /// Seed state ρ₀.
        #[arg(short, long = "state", value_name = "FILE")]
        s: PathBuf,
        /// Separable state σ.
        #[arg(long)]
        sep: PathBuf,
        /// Accept --sep even if its file is not tagged separable.
        #[arg(long)]
        declare_separable: bool,
    },
    /// Largest λ keeping ρ₀ detected by W₀ + λP.
    Lambda {
        #[arg(short, long = "witness", value_name = "FILE")]
        w: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        p: PathBuf,
        #[arg(short, long = "state", value_name = "FILE")]
        s: PathBuf,
    },
    /// Largest μ keeping ρ₀ detected by W₀ + λP + μQ.
    Mu {
        #[arg(short, long = "witness", value_name = "FILE")]
        w: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        p: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        q: PathBuf,
        #[arg(short, long = "state", value_name = "FILE")]
        s: PathBuf,
        #[arg(long)]
        lambda: f64,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// `start:stop:step` (stop excluded) or a single value.
    #[arg(long)]
    pub gamma_grid: String,
    #[arg(long, default_value = "0")]
    pub lambda_grid: String,
    #[arg(long, default_value = "0")]
    pub mu_grid: String,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertOut {
    /// Certificate file; the JSON goes to stdout if omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CertifyKind {
    /// τ^σ ρ is PSD.
    Ppt {
        #[arg(short, long = "state", value_name = "FILE")]
        s: PathBuf,
        /// Transposed parties as comma-separated bits; default: last party.
        #[arg(long)]
        sigma: Option<SigmaVector>,
        #[command(flatten)]
        out: CertOut,
    },
    /// W detects a σ-PPT state.
    Indecomposable {
        #[arg(short, long = "witness", value_name = "FILE")]
        w: PathBuf,
        #[arg(short, long = "state", value_name = "FILE")]
        s: PathBuf,
        #[arg(long)]
        sigma: Option<SigmaVector>,
        #[command(flatten)]
        out: CertOut,
    },
    /// Atomicity, conditional on a recorded Schmidt-number assumption.
    Atomic {
        #[arg(short, long = "witness", value_name = "FILE")]
        w: PathBuf,
        #[arg(short, long = "state", value_name = "FILE")]
        s: PathBuf,
        #[arg(long, default_value = HA_SCHMIDT_ASSUMPTION)]
        assumption: String,
        #[command(flatten)]
        out: CertOut,
    },
    /// Randomized search for a product vector with negative expectation.
    Blockpos {
        #[arg(short, long = "witness", value_name = "FILE")]
        w: PathBuf,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        max_iters: usize,
        #[arg(long, env = "EWKIT_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: CertOut,
    },
    /// (1⊗τ)W is PSD.
    Ccp {
        #[arg(short, long = "witness", value_name = "FILE")]
        w: PathBuf,
        #[command(flatten)]
        out: CertOut,
    },
}

#[derive(Debug, Subcommand)]
pub enum CjDirection {
    /// Map table to its Choi–Jamiołkowski operator.
    ToWitness {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Bipartite operator to its map table.
    ToMap {
        #[arg(short, long = "witness", value_name = "FILE")]
        w: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

/// Runs a parsed command and returns its exit code.
pub fn run(cli: Cli) -> u8 {
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> CliResult<u8> {
    match command {
        Command::Construct(args) => construct(&args).map(|_| 0),
        Command::Pair(args) => pair(&args).map(|_| 0),
        Command::Bounds { kind } => bounds(&kind).map(|_| 0),
        Command::Sweep(args) => run_sweep(&args).map(|_| 0),
        Command::Certify { kind } => certify(kind),
        Command::Cj { direction } => cj(&direction).map(|_| 0),
    }
}

fn need<T: Copy>(value: Option<T>, flag: &str, kind: ConstructKind) -> CliResult<T> {
    value.ok_or_else(|| {
        let name = kind
            .to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default();
        CliError::usage(format!("construct {name} requires --{flag}"))
    })
}

fn meta_entry(meta: &mut Map<String, Value>, key: &str, value: impl Into<Value>) {
    meta.insert(key.to_string(), value.into());
}

fn construct(args: &ConstructArgs) -> CliResult<()> {
    let kind = args.kind;
    if !args.scale.is_finite() {
        return Err(CliError::usage("--scale must be finite"));
    }
    let mut meta = Map::new();
    let name = kind
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    meta_entry(&mut meta, "kind", name);
    let d = || need(args.d, "d", kind);
    let k = || need(args.k, "k", kind);
    let op = match kind {
        ConstructKind::Witness => {
            let (d, k) = (d()?, k()?);
            meta_entry(&mut meta, "d", d);
            meta_entry(&mut meta, "k", k);
            witness_dk(d, k)?
        }
        ConstructKind::State => {
            let (d, gamma) = (d()?, need(args.gamma, "gamma", kind)?);
            meta_entry(&mut meta, "d", d);
            meta_entry(&mut meta, "gamma", gamma);
            ha_state(&StateFamilyParams::new(d, gamma)?)?
        }
        ConstructKind::ProjectorP | ConstructKind::ProjectorQ | ConstructKind::MaxEntangled => {
            let d = d()?;
            meta_entry(&mut meta, "d", d);
            match kind {
                ConstructKind::ProjectorP => projector_p(d)?,
                ConstructKind::ProjectorQ => projector_q(d)?,
                _ => maximally_entangled(d)?,
            }
        }
        ConstructKind::Perturbed => {
            let params = WitnessFamilyParams::new(
                d()?,
                k()?,
                need(args.lambda, "lambda", kind)?,
                need(args.mu, "mu", kind)?,
            )?;
            meta_entry(&mut meta, "d", params.d());
            meta_entry(&mut meta, "k", params.k());
            meta_entry(&mut meta, "lambda", params.lambda());
            meta_entry(&mut meta, "mu", params.mu());
            perturbed_witness(&params)?
        }
        ConstructKind::MaximallyMixed => {
            let dims = match (&args.dims, args.d) {
                (Some(dims), _) => dims.clone(),
                (None, Some(d)) => vec![d, d],
                (None, None) => return Err(CliError::usage("construct maximally-mixed requires --d or --dims")),
            };
            meta_entry(&mut meta, SEPARABLE_KEY, args.scale == 1.0);
            HermitianOp::maximally_mixed(TensorSpace::new(dims)?)
        }
        ConstructKind::ChoiMap => {
            let map = choi_map(d()?, k()?)?;
            if args.scale != 1.0 {
                return Err(CliError::usage("--scale does not apply to choi-map"));
            }
            return write_output(args.out.as_deref(), &map_to_json(&map)?);
        }
        ConstructKind::Difference => {
            let plus = args
                .plus
                .as_deref()
                .ok_or_else(|| CliError::usage("construct difference requires --plus"))?;
            let minus = args
                .minus
                .as_deref()
                .ok_or_else(|| CliError::usage("construct difference requires --minus"))?;
            let (q, _) = OperatorFile::read(plus)?;
            let (p, _) = OperatorFile::read(minus)?;
            witness_from_difference(&q, &p)?.into_op()
        }
    };
    let op = if args.scale == 1.0 {
        op
    } else {
        meta_entry(&mut meta, "scale", args.scale);
        op.scale(args.scale)
    };
    write_output(args.out.as_deref(), &OperatorFile::from_op(&op, meta).to_json()?)
}

fn read_op(path: &Path) -> CliResult<HermitianOp> {
    OperatorFile::read(path).map(|(op, _)| op)
}

fn pair(args: &PairArgs) -> CliResult<()> {
    let w = read_op(&args.w)?;
    let rho = read_op(&args.s)?;
    let t = trace_pair(&w, &rho)?;
    println!("trace: {}", fixed6_trimmed(t));
    println!("detected: {}", t < -ZERO_TOL);
    Ok(())
}

fn print_threshold(t: Threshold) {
    match t {
        Threshold::Finite(x) => println!("{}", fixed6(x)),
        Threshold::Infinite => println!("infinite"),
        Threshold::None(reason) => {
            println!("none");
            eprintln!("note: {reason:?}");
        }
    }
}

fn bounds(kind: &BoundsKind) -> CliResult<()> {
    let t = match kind {
        BoundsKind::Alpha {
            w,
            s,
            sep,
            declare_separable,
        } => {
            let (w, rho0) = (read_op(w)?, read_op(s)?);
            let (sigma, meta) = OperatorFile::read(sep)?;
            let tagged = meta.get(SEPARABLE_KEY).and_then(Value::as_bool) == Some(true);
            if !tagged && !declare_separable {
                return Err(CliError::usage(format!(
                    "{} is not tagged `\"{SEPARABLE_KEY}\": true`; pass --declare-separable to vouch for it",
                    sep.display()
                )));
            }
            let sigma = SeparableState::declared(sigma)?;
            alpha_threshold(&w, &rho0, sigma.op())?
        }
        BoundsKind::Lambda { w, p, s } => lambda_threshold(&read_op(w)?, &read_op(p)?, &read_op(s)?)?,
        BoundsKind::Mu { w, p, q, s, lambda } => {
            mu_threshold(&read_op(w)?, &read_op(p)?, &read_op(q)?, *lambda, &read_op(s)?)?
        }
    };
    print_threshold(t);
    Ok(())
}

fn csv_float(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn run_sweep(args: &SweepArgs) -> CliResult<()> {
    let gammas = parse_grid(&args.gamma_grid)?;
    let lambdas = parse_grid(&args.lambda_grid)?;
    let mus = parse_grid(&args.mu_grid)?;
    let rows = sweep(args.d, args.k, &gammas, &lambdas, &mus)?;
    let mut out = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::usage(format!("csv: {e}"));
    out.write_record(["gamma", "lambda", "mu", "alpha", "trace", "detected"])
        .map_err(io)?;
    for r in &rows {
        out.write_record([
            csv_float(r.gamma),
            csv_float(r.lambda),
            csv_float(r.mu),
            csv_float(r.alpha),
            r.trace.to_string(),
            r.detected.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = out.into_inner().map_err(|e| CliError::usage(format!("csv: {e}")))?;
    write_output(
        args.out.as_deref(),
        &String::from_utf8(bytes).expect("csv output is utf-8"),
    )
}

fn default_sigma(op: &HermitianOp) -> SigmaVector {
    let n = op.space().parties();
    SigmaVector::new((0..n).map(|i| i + 1 == n).collect())
}

fn emit_certificate(cert: &Certificate, out: &CertOut) -> CliResult<u8> {
    let json = serde_json::to_string_pretty(cert).expect("certificates serialize") + "\n";
    match &out.out {
        Some(path) => {
            write_output(Some(path), &json)?;
            println!("{}", if cert.verdict { "certified" } else { "not certified" });
        }
        None => print!("{json}"),
    }
    Ok(if cert.verdict { 0 } else { 1 })
}

fn certify(kind: CertifyKind) -> CliResult<u8> {
    match kind {
        CertifyKind::Ppt { s, sigma, out } => {
            let rho = read_op(&s)?;
            let sigma = sigma.unwrap_or_else(|| default_sigma(&rho));
            emit_certificate(&certify_ppt(&rho, &sigma)?, &out)
        }
        CertifyKind::Indecomposable { w, s, sigma, out } => {
            let (w, rho) = (read_op(&w)?, read_op(&s)?);
            let sigma = sigma.unwrap_or_else(|| default_sigma(&rho));
            let pair = MultipartitePair::new(w, rho, sigma)?;
            emit_certificate(&sigma_indecomposable_certificate(&pair)?, &out)
        }
        CertifyKind::Atomic { w, s, assumption, out } => {
            let (w, rho) = (read_op(&w)?, read_op(&s)?);
            emit_certificate(&certify_atomic_conditional(&w, &rho, &assumption)?, &out)
        }
        CertifyKind::Blockpos {
            w,
            restarts,
            max_iters,
            seed,
            out,
        } => {
            let config = ScanConfig {
                restarts,
                max_iters,
                seed,
                ..ScanConfig::default()
            };
            emit_certificate(&blockpos_scan(&read_op(&w)?, &config)?, &out)
        }
        CertifyKind::Ccp { w, out } => emit_certificate(&certify_completely_copositive(&read_op(&w)?)?, &out),
    }
}

fn cj(direction: &CjDirection) -> CliResult<()> {
    match direction {
        CjDirection::ToWitness { map, out } => {
            let w = jamiolkowski(&read_map(map)?)?;
            let mut meta = Map::new();
            meta_entry(&mut meta, "kind", "cj-to-witness");
            write_output(out.as_deref(), &OperatorFile::from_op(&w, meta).to_json()?)
        }
        CjDirection::ToMap { w, out } => {
            let map = dejamiolkowski(&read_op(w)?)?;
            write_output(out.as_deref(), &map_to_json(&map)?)
        }
    }
}

//! `xent`: X-state entanglement measures and Heisenberg-chain thermal sweeps.

mod config;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use xent_core::chain::threshold_temperature;
use xent_core::sweep::{temperatures, thermal_sweep};
use xent_core::{entanglement, verify};
use xent_core::{Boundary, ChainSpec, Complex64, Error, Spacing, ThermalChain, XState};

use config::Config;

const VERSION: &str = env!("CARGO_PKG_VERSION");
const VERIFY_FAILED: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "xent", version, about = "Entanglement of two-qubit X-states and Heisenberg-chain pairs")]
struct Cli {
    /// Output format: text|json for state/threshold/verify, csv|json for thermal
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized checks
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Suppress warnings on stderr
    #[arg(long, global = true)]
    quiet: bool,
    /// key = value file; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze a single X-state X(v, z)
    State(StateArgs),
    /// Sweep the reduced pair state of a chain over temperature
    Thermal(ThermalArgs),
    /// Locate the temperature where the pair becomes separable
    Threshold(ThresholdArgs),
    /// Run the verification suite
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct StateArgs {
    #[arg(long, allow_negative_numbers = true)]
    v: Option<f64>,
    #[arg(long = "z-re", allow_negative_numbers = true)]
    z_re: Option<f64>,
    #[arg(long = "z-im", allow_negative_numbers = true)]
    z_im: Option<f64>,
}

#[derive(Args, Debug)]
struct ChainArgs {
    /// Number of sites
    #[arg(long)]
    n: Option<usize>,
    /// Coupling J (negative is antiferromagnetic)
    #[arg(long, allow_negative_numbers = true)]
    j: Option<f64>,
    /// open|periodic
    #[arg(long)]
    boundary: Option<String>,
    /// Site pair as `i,j`
    #[arg(long)]
    pair: Option<String>,
}

#[derive(Args, Debug)]
struct ThermalArgs {
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long = "t-min")]
    t_min: Option<f64>,
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// linear|geometric
    #[arg(long)]
    spacing: Option<String>,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[command(flatten)]
    chain: ChainArgs,
    /// Lower end of the bracket (default 0.01·|J|)
    #[arg(long = "t-lo")]
    t_lo: Option<f64>,
    /// Upper end of the bracket (default 20·|J|)
    #[arg(long = "t-hi")]
    t_hi: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    samples: Option<usize>,
}

enum Failure {
    Core(Error),
    Io(io::Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

struct Ctx {
    cfg: Config,
    format: Option<Format>,
    quiet: bool,
}

impl Ctx {
    fn warn(&self, msg: &str) {
        if !self.quiet {
            eprintln!("warning: {msg}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
        Err(Failure::Verify) => ExitCode::from(VERIFY_FAILED),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let format = match cli.format {
        Some(f) => Some(f),
        None => cfg
            .get::<String>("format")?
            .map(|s| Format::from_str(&s, true).map_err(|_| Error::Usage(format!("unknown format `{s}`"))))
            .transpose()?,
    };
    let quiet = cli.quiet || cfg.get::<bool>("quiet")?.unwrap_or(false);
    let seed = cfg.resolve(cli.seed, "seed", verify::DEFAULT_SEED)?;
    let ctx = Ctx { cfg, format, quiet };
    let text = match cli.command {
        Command::State(a) => cmd_state(&ctx, a)?,
        Command::Thermal(a) => cmd_thermal(&ctx, a, seed)?,
        Command::Threshold(a) => cmd_threshold(&ctx, a)?,
        Command::Verify(a) => {
            let (text, pass) = cmd_verify(&ctx, a, seed)?;
            emit(&text)?;
            return if pass { Ok(()) } else { Err(Failure::Verify) };
        }
    };
    emit(&text)
}

fn emit(text: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn pick_format(ctx: &Ctx, allowed: &[Format], default: Format) -> Result<Format, Error> {
    let f = ctx.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let names: Vec<_> = allowed.iter().map(|f| format!("{f:?}").to_lowercase()).collect();
        Err(Error::Usage(format!("format must be one of {}", names.join("|"))))
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn cmd_state(ctx: &Ctx, a: StateArgs) -> Result<String, Error> {
    let format = pick_format(ctx, &[Format::Text, Format::Json], Format::Text)?;
    let v = ctx.cfg.resolve_opt(a.v, "v")?.ok_or_else(|| Error::Usage("--v is required".into()))?;
    let z_re = ctx.cfg.resolve(a.z_re, "z-re", 0.0)?;
    let z_im = ctx.cfg.resolve(a.z_im, "z-im", 0.0)?;
    let x = XState::new(v, Complex64::new(z_re, z_im))?;
    let report = entanglement::analyze(&x)?;
    Ok(match format {
        Format::Json => to_json(&json!({ "state": x, "entangled": x.is_entangled(), "report": report })),
        _ => output::state_text(&x, &report),
    })
}

fn parse_pair(s: &str) -> Result<(usize, usize), Error> {
    let bad = || Error::Usage(format!("pair must look like `i,j`, got `{s}`"));
    let (i, j) = s.split_once(',').ok_or_else(bad)?;
    Ok((i.trim().parse().map_err(|_| bad())?, j.trim().parse().map_err(|_| bad())?))
}

fn chain_spec(ctx: &Ctx, a: &ChainArgs) -> Result<ChainSpec, Error> {
    let n = ctx.cfg.resolve(a.n, "n", 2)?;
    let j = ctx.cfg.resolve(a.j, "j", -1.0)?;
    let boundary: Boundary = match ctx.cfg.resolve_opt(a.boundary.clone(), "boundary")? {
        Some(b) => b.parse()?,
        None => Boundary::Open,
    };
    let pair = match ctx.cfg.resolve_opt(a.pair.clone(), "pair")? {
        Some(p) => parse_pair(&p)?,
        None => (0, 1),
    };
    let spec = ChainSpec::new(n, j, boundary, pair)?;
    if !spec.is_antiferromagnetic() {
        ctx.warn(&format!("J = {j} is not antiferromagnetic; the pair state is not expected to be entangled"));
    }
    Ok(spec)
}

fn cmd_thermal(ctx: &Ctx, a: ThermalArgs, seed: u64) -> Result<String, Error> {
    let format = pick_format(ctx, &[Format::Csv, Format::Json], Format::Csv)?;
    let spec = chain_spec(ctx, &a.chain)?;
    let t_min = ctx.cfg.resolve(a.t_min, "t-min", 0.1)?;
    let t_max = ctx.cfg.resolve(a.t_max, "t-max", 2.0)?;
    let steps = ctx.cfg.resolve(a.steps, "steps", 20)?;
    let spacing: Spacing = match ctx.cfg.resolve_opt(a.spacing, "spacing")? {
        Some(s) => s.parse()?,
        None => Spacing::Linear,
    };
    let temps = temperatures(t_min, t_max, steps, spacing)?;
    let chain = ThermalChain::new(spec)?;
    let rows = thermal_sweep(&chain, &temps)?;
    Ok(match format {
        Format::Json => to_json(&json!({
            "meta": {
                "command": "thermal",
                "n": spec.n(),
                "j": spec.coupling(),
                "boundary": spec.boundary(),
                "pair": [spec.pair().0, spec.pair().1],
                "t_min": t_min,
                "t_max": t_max,
                "steps": steps,
                "spacing": spacing,
                "seed": seed,
                "version": VERSION,
            },
            "rows": rows,
        })),
        _ => output::csv(&rows),
    })
}

fn cmd_threshold(ctx: &Ctx, a: ThresholdArgs) -> Result<String, Error> {
    let format = pick_format(ctx, &[Format::Text, Format::Json], Format::Text)?;
    let spec = chain_spec(ctx, &a.chain)?;
    let scale = spec.coupling().abs();
    if scale == 0.0 {
        return Err(Error::Domain("threshold is undefined for J = 0".into()));
    }
    let t_lo = ctx.cfg.resolve(a.t_lo, "t-lo", 0.01 * scale)?;
    let t_hi = ctx.cfg.resolve(a.t_hi, "t-hi", 20.0 * scale)?;
    let tol = ctx.cfg.resolve(a.tol, "tol", 1e-10)?;
    let t = threshold_temperature(&spec, t_lo, t_hi, tol)?;
    let ratio = t.temperature / scale;
    Ok(match format {
        Format::Json => to_json(&json!({
            "t_star": t.temperature,
            "t_star_over_abs_j": ratio,
            "iterations": t.iterations,
            "t_lo": t_lo,
            "t_hi": t_hi,
            "tol": tol,
            "version": VERSION,
        })),
        _ => format!("T* = {:.6}\nT*/|J| = {:.6}\n", t.temperature, ratio),
    })
}

fn cmd_verify(ctx: &Ctx, a: VerifyArgs, seed: u64) -> Result<(String, bool), Error> {
    let format = pick_format(ctx, &[Format::Text, Format::Json], Format::Text)?;
    let samples = ctx.cfg.resolve(a.samples, "samples", verify::DEFAULT_SAMPLES)?;
    let report = verify::run(samples, seed)?;
    let text = match format {
        Format::Json => report.to_json() + "\n",
        _ => report.to_text(),
    };
    Ok((text, report.required_checks_pass()))
}

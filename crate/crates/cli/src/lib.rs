//! Command-line driver: `build`, `verify`, `bonnet`, `weyl` and `curve`.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or an internal
//! error occurs, 2 for usage errors, infeasible parameters and unreadable or
//! malformed input.

mod config;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use darboux_core::bonnet::{run_bonnet_suite, BonnetSuiteReport, Integrability};
use darboux_core::curve::{
    integrate_states, project_initial_state, ribaucour_curve_transform, write_csv, CurveQc, SpaceForm,
};
use darboux_core::darboux::{darboux_partner, Family, PairFile, PairParams};
use darboux_core::verifier::{default_weyl_grid, verify_pair, weyl_product_check, Tolerances};
use darboux_core::Error;

pub use config::{Command, RunConfig};

/// Environment variable capping the rayon worker count (0 = automatic).
pub const THREADS_ENV: &str = "DARBOUX_FORGE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "darboux-forge", version, about = "Build and certify Darboux pairs of hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Build a Darboux pair from a curve and write it as JSON.
    Build(BuildArgs),
    /// Verify a pair file and write the report as JSON.
    Verify(VerifyArgs),
    /// Run the Bonnet frame identities on random jets.
    Bonnet(BonnetArgs),
    /// Check the Weyl tensor of Q²_c × S².
    Weyl(WeylArgs),
    /// Integrate the Ribaucour system along a curve and write CSV.
    Curve(CurveArgs),
}

#[derive(Debug, Args)]
struct TolArgs {
    #[arg(long, default_value_t = 1e-6)]
    tol_conformal: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_envelope: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_common: f64,
    #[arg(long, default_value_t = 1e-5)]
    tol_bs: f64,
    #[arg(long, default_value_t = 1e-4)]
    tol_recovery: f64,
    #[arg(long, default_value_t = 1e-3)]
    tol_darboux: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            conformal: self.tol_conformal,
            envelope: self.tol_envelope,
            common: self.tol_common,
            b_squared: self.tol_bs,
            recovery: self.tol_recovery,
            darboux: self.tol_darboux,
        }
    }
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[arg(long)]
    family: String,
    /// Curve spec, e.g. `circle:R=1`, `latitude:theta=1.0`, `horocycle`.
    #[arg(long)]
    curve: String,
    #[arg(long = "A", allow_hyphen_values = true)]
    a: f64,
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    h0: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, value_delimiter = ',', default_value = "0,1", allow_hyphen_values = true)]
    s_range: Vec<f64>,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[arg(long)]
    out: String,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    pair: String,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Debug, Args)]
struct BonnetArgs {
    #[arg(long, allow_hyphen_values = true)]
    c: i8,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `printed`, `corrected` or `both`.
    #[arg(long, default_value = "both")]
    constraint: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct WeylArgs {
    #[arg(long, allow_hyphen_values = true)]
    c: f64,
    #[arg(long, default_value_t = 100)]
    planes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[arg(long, allow_hyphen_values = true)]
    c: f64,
    #[arg(long = "A", allow_hyphen_values = true)]
    a: f64,
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    h0: Vec<f64>,
    /// Defaults to `circle:R=1`, `latitude:theta=1.0` or `horocycle` by `c`.
    #[arg(long)]
    curve: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "0,6.283185307179586", allow_hyphen_values = true)]
    s_range: Vec<f64>,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[arg(long)]
    out: String,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Checks(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Checks(_) | Failure::Internal(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Checks(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible(_) | Error::InvalidInput(_) | Error::MalformedPairFile(_) => {
                Failure::Usage(e.to_string())
            }
            Error::VerificationFailed(_) => Failure::Checks(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (including the program name), runs the command and returns
/// its exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(f) = configure_threads() {
        eprintln!("error: {}", f.message());
        return ExitCode::from(f.code());
    }
    let outcome = match cli.command {
        Cmd::Build(a) => run_build(a),
        Cmd::Verify(a) => run_verify(a),
        Cmd::Bonnet(a) => run_bonnet(a),
        Cmd::Weyl(a) => run_weyl(a),
        Cmd::Curve(a) => run_curve(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn configure_threads() -> Outcome {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("{THREADS_ENV} must be a non-negative integer, got '{raw}'")))?;
    // a second initialisation in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn triple(values: &[f64], flag: &str) -> std::result::Result<[f64; 3], Failure> {
    <[f64; 3]>::try_from(values)
        .map_err(|_| Failure::Usage(format!("--{flag} needs three comma-separated numbers")))
}

fn range(values: &[f64]) -> std::result::Result<(f64, f64), Failure> {
    match values {
        [a, b] => Ok((*a, *b)),
        _ => Err(Failure::Usage("--s-range needs two comma-separated numbers".into())),
    }
}

fn write_output(path: Option<&str>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Internal(format!("cannot write {p}: {e}"))),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| Failure::Internal(format!("cannot write to stdout: {e}")))
        }
    }
}

fn to_json(value: &impl Serialize) -> std::result::Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))
}

/// Build configuration as recorded alongside `build` runs.
fn build_config(a: &BuildArgs, family: Family, h0: [f64; 3], s_range: (f64, f64)) -> RunConfig {
    let mut cfg = RunConfig::new(Command::Build);
    cfg.family = Some(family);
    cfg.curve_spec = Some(a.curve.clone());
    cfg.a = Some(a.a);
    cfg.h0 = Some(h0);
    cfg.n = Some(a.dim);
    cfg.s_range = Some(s_range);
    cfg.step = Some(a.step);
    cfg.tol = a.tol.tolerances();
    cfg.out_path = Some(a.out.clone());
    cfg
}

fn run_build(a: BuildArgs) -> Outcome {
    let family = Family::parse(&a.family)?;
    let h0 = triple(&a.h0, "h0")?;
    let s_range = range(&a.s_range)?;
    let cfg = build_config(&a, family, h0, s_range);
    let params = PairParams::new(family, &a.curve, a.a, h0, a.dim, s_range, a.step)?;
    let pair = darboux_partner(&params)?;
    let json = PairFile::from_pair(&pair).to_json()?;
    write_output(Some(&a.out), &json)?;
    let cfg = serde_json::to_string(&cfg).map_err(|e| Failure::Internal(e.to_string()))?;
    eprintln!("wrote {} ({} nodes) for {cfg}", a.out, pair.base_spheres.len());
    Ok(())
}

fn run_verify(a: VerifyArgs) -> Outcome {
    let text = fs::read_to_string(&a.pair).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", a.pair)))?;
    let pair = PairFile::from_json(&text)?.into_pair()?;
    let grid = pair.default_grid()?;
    let report = verify_pair(&pair, &grid, &a.tol.tolerances());
    write_output(a.out.as_deref(), &to_json(&report)?)?;
    if report.pass {
        Ok(())
    } else {
        let names: Vec<String> = report
            .failing()
            .map(|c| format!("{} ({:e} > {:e})", c.name, c.max_residual, c.tolerance))
            .collect();
        Err(Failure::Checks(format!("failing checks: {}", names.join(", "))))
    }
}

#[derive(Serialize)]
struct BonnetOutput {
    pass: bool,
    suites: Vec<BonnetSuiteReport>,
}

fn run_bonnet(a: BonnetArgs) -> Outcome {
    let constraints = match a.constraint.as_str() {
        "printed" => vec![Integrability::Printed],
        "corrected" => vec![Integrability::Corrected],
        "both" => vec![Integrability::Printed, Integrability::Corrected],
        other => return Err(Failure::Usage(format!("unknown constraint '{other}'"))),
    };
    let suites = constraints
        .into_iter()
        .map(|k| run_bonnet_suite(a.c, a.trials, a.seed, k))
        .collect::<darboux_core::Result<Vec<_>>>()?;
    let out = BonnetOutput { pass: suites.iter().all(|s| s.pass), suites };
    write_output(a.out.as_deref(), &to_json(&out)?)?;
    if out.pass {
        Ok(())
    } else {
        Err(Failure::Checks("some Bonnet identities failed; see the report".into()))
    }
}

#[derive(Serialize)]
struct WeylOutput {
    c: f64,
    w1221: f64,
    w1331: f64,
    checks: Vec<darboux_core::verifier::CheckReport>,
    pass: bool,
}

fn run_weyl(a: WeylArgs) -> Outcome {
    let report = weyl_product_check(a.c, &default_weyl_grid(), a.planes, a.seed)?;
    let out = WeylOutput {
        c: report.c,
        w1221: report.w1221,
        w1331: report.w1331,
        checks: report.checks(),
        pass: report.pass(),
    };
    write_output(a.out.as_deref(), &to_json(&out)?)?;
    if out.pass {
        Ok(())
    } else {
        Err(Failure::Checks("some Weyl checks failed; see the report".into()))
    }
}

fn default_curve(c: SpaceForm) -> &'static str {
    match c {
        SpaceForm::Flat => "circle:R=1",
        SpaceForm::Spherical => "latitude:theta=1.0",
        SpaceForm::Hyperbolic => "horocycle",
    }
}

fn run_curve(a: CurveArgs) -> Outcome {
    let c = SpaceForm::from_curvature(a.c)?;
    let spec = a.curve.clone().unwrap_or_else(|| default_curve(c).to_string());
    let curve = CurveQc::parse(&spec, c)?;
    let h0 = project_initial_state(triple(&a.h0, "h0")?, a.a, a.c)?;
    let traj = integrate_states(&curve, h0, a.a, range(&a.s_range)?, a.step)?;
    let transformed = ribaucour_curve_transform(&traj)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &traj, &transformed).map_err(|e| Failure::Internal(e.to_string()))?;
    let mut file = fs::File::create(&a.out).map_err(|e| Failure::Internal(format!("cannot write {}: {e}", a.out)))?;
    file.write_all(&buf).map_err(|e| Failure::Internal(e.to_string()))?;
    eprintln!("wrote {} ({} rows, first-integral drift {:e})", a.out, traj.states.len(), traj.max_drift);
    Ok(())
}

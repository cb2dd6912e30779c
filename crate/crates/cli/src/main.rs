//! `anglebound`: command-line access to the bound, geometry, curvature,
//! construction and search routines.
//!
//! Output is JSON on stdout, or CSV for `table`. With `--out FILE` the output
//! goes to `FILE` and a `FILE-stem.manifest.json` records how to reproduce it
//! (`anglebound replay MANIFEST`). Exit codes: 0 success, 2 usage or
//! precondition error, 1 internal failure.

mod input;
mod manifest;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anglebound::ef::{self, LineArrangement};
use anglebound::geometry::max_angle_triple;
use anglebound::{bounds, convexity, curvature, search, Angle, Error};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use manifest::{manifest_path, strip_out, RunManifest};

/// Seed used by randomized subcommands when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "anglebound", version, about = "Point sets under a maximum-angle constraint")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for randomized subcommands
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Write output to this file and a manifest next to it
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Maximum number of worker threads
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct ThetaArg {
    /// Angle bound in radians
    #[arg(long, required_unless_present = "theta_deg", conflicts_with = "theta_deg")]
    theta: Option<f64>,
    /// Angle bound in degrees
    #[arg(long)]
    theta_deg: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct RhoArg {
    /// Line separation ρ in radians
    #[arg(long, required_unless_present = "rho_deg", conflicts_with = "rho_deg")]
    rho: Option<f64>,
    /// Line separation ρ in degrees
    #[arg(long)]
    rho_deg: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct EtaArg {
    /// Cone half-angle in radians
    #[arg(long, required_unless_present = "eta_deg", conflicts_with = "eta_deg")]
    eta: Option<f64>,
    /// Cone half-angle in degrees
    #[arg(long)]
    eta_deg: Option<f64>,
}

fn resolve(rad: Option<f64>, deg: Option<f64>) -> Result<Angle, Failure> {
    match (rad, deg) {
        (Some(r), _) => Ok(Angle::new(r)?),
        (None, Some(d)) => Ok(Angle::from_degrees(d)?),
        (None, None) => Err(Failure::usage("missing angle")),
    }
}

impl ThetaArg {
    fn angle(&self) -> Result<Angle, Failure> {
        resolve(self.theta, self.theta_deg)
    }
}

impl RhoArg {
    fn angle(&self) -> Result<Angle, Failure> {
        resolve(self.rho, self.rho_deg)
    }
}

impl EtaArg {
    fn angle(&self) -> Result<Angle, Failure> {
        resolve(self.eta, self.eta_deg)
    }
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Cardinality bound for sets with all angles at most θ in R^D
    Bound {
        #[command(flatten)]
        #[serde(flatten)]
        theta: ThetaArg,
        /// Ambient dimension D
        #[arg(long)]
        dim: usize,
    },
    /// Largest angle of a point set
    Angle {
        /// Point set (JSON or CSV)
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Whether every point is a vertex of the convex hull
    ConvexPosition {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Normal-cone fractions of the hull vertices
    Curvature {
        #[arg(long = "in")]
        input: PathBuf,
        /// Monte Carlo directions
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Estimate a single vertex instead of the shared-sample sum
        #[arg(long)]
        vertex: Option<usize>,
    },
    /// Cones of half-angle η at each point containing all other points
    ConeCover {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        #[serde(flatten)]
        eta: EtaArg,
    },
    /// Pack m lines through the origin in R^D
    PackLines {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 2000)]
        iters: usize,
    },
    /// Cover line space in R^D to within ρ/2
    CoverLines {
        #[command(flatten)]
        #[serde(flatten)]
        rho: RhoArg,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = ef::DEFAULT_PROBES)]
        probes: usize,
        #[arg(long, default_value_t = ef::DEFAULT_MAX_ROUNDS)]
        max_rounds: usize,
    },
    /// Doubling construction of 2^m points with largest angle at most π − ρ
    EfConstruct {
        #[command(flatten)]
        #[serde(flatten)]
        rho: RhoArg,
        /// Line arrangement JSON; otherwise lines are packed with --m and --dim
        #[arg(long)]
        lines: Option<PathBuf>,
        #[arg(long, required_unless_present = "lines")]
        m: Option<usize>,
        #[arg(long, required_unless_present = "lines")]
        dim: Option<usize>,
        #[arg(long, default_value_t = 2000)]
        iters: usize,
        /// Multiple of the sufficient translation scale tried first
        #[arg(long, default_value_t = 1.0)]
        slack: f64,
        #[arg(long, default_value_t = 60)]
        max_doublings: usize,
    },
    /// Triple with angle at least π − ρ in a set of more than 2^m points
    Witness {
        #[arg(long = "in")]
        input: PathBuf,
        /// Line arrangement JSON whose ρ/2-neighbourhoods cover every segment
        #[arg(long)]
        lines: PathBuf,
        #[command(flatten)]
        #[serde(flatten)]
        rho: RhoArg,
    },
    /// Two-sided bound on the largest set in R^d with angles at most θ
    NBounds {
        #[command(flatten)]
        #[serde(flatten)]
        theta: ThetaArg,
        #[arg(long)]
        dim: usize,
        /// Packing constant c_d (default: estimated from a line packing)
        #[arg(long)]
        c_pack: Option<f64>,
        /// Covering constant C_d (default: estimated from a line covering)
        #[arg(long)]
        c_cover: Option<f64>,
        #[arg(long, default_value_t = ef::DEFAULT_PROBES)]
        probes: usize,
    },
    /// Smallest largest angle found for n points in R^D
    SearchAlpha {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 3000)]
        iters: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
    /// Largest set found in R^D with all angles at most θ
    SearchMax {
        #[command(flatten)]
        #[serde(flatten)]
        theta: ThetaArg,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
    },
    /// CSV tables
    Table {
        /// Cardinality bound over a grid of dimensions and angles
        #[arg(long, required = true)]
        bound_grid: bool,
        /// Inclusive range of ambient dimensions, `a..b`
        #[arg(long, default_value = "2..6")]
        dims: String,
        /// Inclusive range of angles in degrees, `a..b`
        #[arg(long, default_value = "91..119")]
        theta_deg: String,
        #[arg(long, default_value_t = 1.0)]
        step_deg: f64,
    },
    /// Re-run the command recorded in a manifest
    Replay {
        manifest: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Bound { .. } => "bound",
            Command::Angle { .. } => "angle",
            Command::ConvexPosition { .. } => "convex-position",
            Command::Curvature { .. } => "curvature",
            Command::ConeCover { .. } => "cone-cover",
            Command::PackLines { .. } => "pack-lines",
            Command::CoverLines { .. } => "cover-lines",
            Command::EfConstruct { .. } => "ef-construct",
            Command::Witness { .. } => "witness",
            Command::NBounds { .. } => "n-bounds",
            Command::SearchAlpha { .. } => "search-alpha",
            Command::SearchMax { .. } => "search-max",
            Command::Table { .. } => "table",
            Command::Replay { .. } => "replay",
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_precondition() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::internal(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

/// Parses `a..b`, `a..=b` or a single value.
fn parse_range(s: &str) -> Result<(f64, f64), Failure> {
    let bad = || Failure::usage(format!("bad range '{s}', expected a..b"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if a.is_nan() || b.is_nan() || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn bound_grid(dims: &str, theta_deg: &str, step: f64) -> Result<Vec<u8>, Failure> {
    let (d0, d1) = parse_range(dims)?;
    let (t0, t1) = parse_range(theta_deg)?;
    if d0 < 2.0 || d0.fract() != 0.0 || d1.fract() != 0.0 {
        return Err(Failure::usage("dimensions must be integers >= 2"));
    }
    if step.is_nan() || step <= 0.0 {
        return Err(Failure::usage("step must be positive"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = [
        "dim", "theta_deg", "theta", "eta", "f", "f_error", "bound", "theorem_applicable", "status",
    ];
    w.write_record(header).map_err(|e| Failure::internal(e.to_string()))?;
    for dim in d0 as usize..=d1 as usize {
        let threshold = bounds::theta_d(dim).radians();
        let count = ((t1 - t0) / step + 1e-9).floor() as usize;
        for k in 0..=count {
            let deg = t0 + k as f64 * step;
            let theta = Angle::from_degrees(deg)?;
            let record = match bounds::cardinality_bound(theta, dim) {
                Ok(r) => {
                    let status = if r.theorem_applicable {
                        "ok"
                    } else if (theta.radians() - threshold).abs() <= bounds::BOUNDARY_TOL {
                        "boundary"
                    } else {
                        "not-applicable"
                    };
                    vec![
                        dim.to_string(),
                        deg.to_string(),
                        theta.radians().to_string(),
                        r.eta.radians().to_string(),
                        r.f_value.value.to_string(),
                        r.f_value.abs_error_estimate.to_string(),
                        r.bound.to_string(),
                        r.theorem_applicable.to_string(),
                        status.to_string(),
                    ]
                }
                Err(_) => vec![
                    dim.to_string(),
                    deg.to_string(),
                    theta.radians().to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    "false".into(),
                    "not-applicable".into(),
                ],
            };
            w.write_record(&record).map_err(|e| Failure::internal(e.to_string()))?;
        }
    }
    w.into_inner().map_err(|e| Failure::internal(e.to_string()))
}

fn load_points(path: &std::path::Path) -> Result<anglebound::PointSet, Failure> {
    input::read_point_set(path).map_err(Failure::usage)
}

fn execute(command: &Command, seed: u64) -> Result<Vec<u8>, Failure> {
    match command {
        Command::Bound { theta, dim } => to_json(&bounds::cardinality_bound(theta.angle()?, *dim)?),
        Command::Angle { input } => {
            let a = load_points(input)?;
            let (triple, angle) = match max_angle_triple(&a) {
                Some((i, y, j, angle)) => (Some([i, y, j]), angle),
                None => (None, Angle::ZERO),
            };
            to_json(&json!({
                "max_angle": angle,
                "max_angle_deg": angle.degrees(),
                "triple": triple,
            }))
        }
        Command::ConvexPosition { input } => {
            to_json(&convexity::is_convex_position(&load_points(input)?))
        }
        Command::Curvature {
            input,
            samples,
            vertex,
        } => {
            let v = load_points(input)?;
            match vertex {
                Some(i) => {
                    let (fraction, std_error) =
                        curvature::normal_cone_fraction_mc(&v, *i, *samples, seed)?;
                    to_json(&json!({
                        "vertex": i,
                        "fraction": fraction,
                        "std_error": std_error,
                        "samples": samples,
                        "seed": seed,
                    }))
                }
                None => to_json(&curvature::gauss_bonnet_sum(&v, *samples, seed)?),
            }
        }
        Command::ConeCover { input, eta } => {
            let eta = eta.angle()?;
            let cones = curvature::cone_cover_certificate(&load_points(input)?, eta)?;
            to_json(&json!({ "eta": eta, "cones": cones }))
        }
        Command::PackLines { m, dim, iters } => to_json(&ef::pack_lines(*m, *dim, *iters, seed)?),
        Command::CoverLines {
            rho,
            dim,
            probes,
            max_rounds,
        } => to_json(&ef::cover_lines_with(
            rho.angle()?,
            *dim,
            seed,
            *probes,
            *max_rounds,
        )?),
        Command::EfConstruct {
            rho,
            lines,
            m,
            dim,
            iters,
            slack,
            max_doublings,
        } => {
            let arrangement: LineArrangement = match lines {
                Some(path) => input::read_lines(path).map_err(Failure::usage)?,
                None => match (m, dim) {
                    (Some(m), Some(dim)) => ef::pack_lines(*m, *dim, *iters, seed)?,
                    _ => return Err(Failure::usage("give --lines or both --m and --dim")),
                },
            };
            let points = ef::ef_doubling(&arrangement, rho.angle()?, *slack, *max_doublings)?;
            let angle = anglebound::max_angle(&points);
            to_json(&json!({
                "lines": arrangement,
                "points": points,
                "max_angle": angle,
            }))
        }
        Command::Witness { input, lines, rho } => {
            let a = load_points(input)?;
            let l = input::read_lines(lines).map_err(Failure::usage)?;
            to_json(&ef::obtuse_triple_witness(&a, &l, rho.angle()?)?)
        }
        Command::NBounds {
            theta,
            dim,
            c_pack,
            c_cover,
            probes,
        } => {
            let theta = theta.angle()?;
            let estimated = match (c_pack, c_cover) {
                (Some(_), Some(_)) => None,
                _ => Some(ef::empirical_constants(theta, *dim, seed, *probes)?),
            };
            let c = c_pack.or(estimated.map(|k| k.c_d)).expect("set above");
            let big_c = c_cover.or(estimated.map(|k| k.C_d)).expect("set above");
            let report = ef::n_bounds(theta, *dim, c, big_c)?;
            to_json(&json!({ "report": report, "estimated_constants": estimated }))
        }
        Command::SearchAlpha {
            n,
            dim,
            iters,
            restarts,
        } => to_json(&search::minimize_max_angle(*n, *dim, *iters, *restarts, seed)?),
        Command::SearchMax { theta, dim, budget } => {
            to_json(&search::max_cardinality_search(theta.angle()?, *dim, *budget, seed)?)
        }
        Command::Table {
            dims,
            theta_deg,
            step_deg,
            ..
        } => bound_grid(dims, theta_deg, *step_deg),
        Command::Replay { .. } => unreachable!("handled in run"),
    }
}

fn parameters(command: &Command) -> Value {
    match serde_json::to_value(command) {
        Ok(Value::Object(map)) => map.into_iter().next().map_or(Value::Null, |(_, v)| v),
        Ok(other) => other,
        Err(_) => Value::Null,
    }
}

fn run(args: Vec<String>) -> Result<(), Failure> {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return if code == 0 {
                Ok(())
            } else {
                Err(Failure {
                    code,
                    message: String::new(),
                })
            };
        }
    };
    if let Some(n) = cli.threads {
        // a second call (nested replay) keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }

    if let Command::Replay { manifest } = &cli.command {
        let text = fs::read_to_string(manifest)
            .map_err(|e| Failure::usage(format!("{}: {e}", manifest.display())))?;
        let m: RunManifest = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("{}: {e}", manifest.display())))?;
        if m.argv.first().is_some_and(|a| a == "replay") {
            return Err(Failure::usage("a manifest cannot replay another manifest"));
        }
        let mut inner = vec![args[0].clone()];
        inner.extend(m.argv);
        if let Some(out) = &cli.out {
            inner.push("--out".into());
            inner.push(out.to_string_lossy().into_owned());
        }
        return run(inner);
    }

    let bytes = execute(&cli.command, cli.seed)?;
    match &cli.out {
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| Failure::internal(e.to_string())),
        Some(out) => {
            fs::write(out, &bytes).map_err(|e| Failure::internal(format!("{}: {e}", out.display())))?;
            let manifest = RunManifest {
                subcommand: cli.command.name().into(),
                parameters: parameters(&cli.command),
                seed: cli.seed,
                tool_version: env!("CARGO_PKG_VERSION").into(),
                outputs: vec![out.clone()],
                argv: strip_out(&args[1..]),
            };
            let path = manifest_path(out);
            fs::write(&path, to_json(&manifest)?)
                .map_err(|e| Failure::internal(format!("{}: {e}", path.display())))
        }
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quadmap::dynamics::Angle;
use quadmap::sampling::DEFAULT_SEED;
use quadmap::{AmbientVector, Pole};

use crate::CliError;

/// The quadratic map x ↦ 2(x·P)x − P on spheres and disks.
#[derive(Debug, Parser)]
#[command(name = "quadmap", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate the map and write the orbit.
    Iterate(IterateArgs),
    /// Compute a preimage and check the round trip.
    Preimage(PreimageArgs),
    /// Build a replayable sensitivity witness.
    Sensitivity(SensitivityArgs),
    /// Build a replayable accessibility witness for two balls.
    Accessibility(AccessibilityArgs),
    /// Probe whether orbits from one ball reach another.
    Transitivity(TransitivityArgs),
    /// Enumerate the periodic angles of the circle map.
    Periodic(PeriodicArgs),
    /// Estimate a Lyapunov exponent by a Birkhoff average.
    Lyapunov(LyapunovArgs),
    /// Compute the mixing time of two arcs by exact arc images.
    Mixing(MixingArgs),
    /// Certify that an orbit stays on its slice and away from a point.
    SliceCert(SliceCertArgs),
    /// Pedal and orthotomic curves.
    Curves(CurvesArgs),
    /// Run the full invariant suite and the chaos analysis.
    Verify(VerifyArgs),
    /// Replay every witness stored in a report.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Sphere,
    Disk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Sphere dimension n: points live in R^{n+1}.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Pole coordinates, comma separated.
    #[arg(long = "P", value_name = "COORDS", allow_hyphen_values = true)]
    pub pole: Option<String>,
    /// Pole angle on the circle: radians, or p/q for 2π·p/q.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Rescale a pole whose norm is off by more than 1e-6 instead of rejecting it.
    #[arg(long)]
    pub normalize_pole: bool,
    #[arg(long, value_enum, default_value_t = Space::Sphere)]
    pub space: Space,
    #[arg(long, env = "QUADMAP_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output file (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Start point coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Start angle on the circle.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// Exact rational angle arithmetic (needs p/q angles).
    #[arg(long)]
    pub exact: bool,
    /// Skip the projection back onto the sphere after each step.
    #[arg(long)]
    pub no_renormalize: bool,
}

#[derive(Debug, Args)]
pub struct PreimageArgs {
    #[command(flatten)]
    pub common: Common,
    /// Target point coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub y: String,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Base point (a seeded random point if absent).
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 64)]
    pub max_k: usize,
}

#[derive(Debug, Args)]
pub struct AccessibilityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Ball U as center:radius.
    #[arg(long = "U", allow_hyphen_values = true)]
    pub u: String,
    /// Ball V as center:radius.
    #[arg(long = "V", allow_hyphen_values = true)]
    pub v: String,
    #[arg(long, default_value_t = 1e-10)]
    pub lambda: f64,
}

#[derive(Debug, Args)]
pub struct TransitivityArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "U", allow_hyphen_values = true)]
    pub u: String,
    #[arg(long = "V", allow_hyphen_values = true)]
    pub v: String,
    #[arg(long, default_value_t = 1000)]
    pub max_k: usize,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct PeriodicArgs {
    #[command(flatten)]
    pub common: Common,
    /// Period k.
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LyapunovKind {
    Circle,
    Logistic,
    Slice,
}

#[derive(Debug, Args)]
pub struct LyapunovArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = LyapunovKind::Circle)]
    pub system: LyapunovKind,
    /// Start angle (circle).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Start point: a number in [0, 1] (logistic) or coordinates (slice).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct MixingArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "U", allow_hyphen_values = true)]
    pub u: String,
    #[arg(long = "V", allow_hyphen_values = true)]
    pub v: String,
    #[arg(long, default_value_t = 64)]
    pub horizon: usize,
}

#[derive(Debug, Args)]
pub struct SliceCertArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long = "R", allow_hyphen_values = true)]
    pub r: String,
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    /// Unit circle with inward normal (plane).
    Circle,
    /// The line (s, 1) with normal (0, 1) (plane).
    Line,
    /// Small circle at angle beta from P (sphere).
    SmallCircle,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = CurveKind::Circle)]
    pub curve: CurveKind,
    /// Read samples from a CSV file instead: `s,x,y,nx,ny` for plane curves,
    /// `s,p0,...,pn` for spherical pedals (with --space sphere and --P).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Pedal point in the plane.
    #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
    pub point: String,
    /// Angle between P and the small circle.
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Also write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// A JSON report written by verify, sensitivity or accessibility.
    #[arg(long)]
    pub report: PathBuf,
}

pub fn usage(flag: &str, message: impl ToString) -> CliError {
    CliError::Usage { flag: flag.to_string(), message: message.to_string() }
}

pub fn parse_coords(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let coords = text
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| usage(flag, format!("{t:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(usage(flag, "coordinates must be finite"));
    }
    Ok(coords)
}

pub fn parse_vector(flag: &str, text: &str) -> Result<AmbientVector, CliError> {
    AmbientVector::new(parse_coords(flag, text)?).map_err(|e| usage(flag, e))
}

/// `center:radius`.
pub fn parse_ball(flag: &str, text: &str) -> Result<(AmbientVector, f64), CliError> {
    let (center, radius) = text.rsplit_once(':').ok_or_else(|| usage(flag, "expected center:radius"))?;
    let radius: f64 = radius.trim().parse().map_err(|e| usage(flag, format!("radius: {e}")))?;
    Ok((parse_vector(flag, center)?, radius))
}

/// An angle; in exact mode only `p/q` (or `0`) is accepted.
pub fn parse_angle(flag: &str, text: &str, exact: bool) -> Result<Angle, CliError> {
    let text = text.trim();
    if exact && !text.contains('/') {
        return match text.parse::<f64>() {
            Ok(0.0) => Ok(Angle::zero_turns()),
            _ => Err(usage(flag, format!("exact mode needs a rational p/q (meaning 2π·p/q), got {text:?}"))),
        };
    }
    Angle::from_str(text).map_err(|e| usage(flag, e))
}

impl Common {
    /// The pole from `--P` or `--alpha`; `e₁` in `R^{dim+1}` if neither is given.
    pub fn pole(&self) -> Result<Pole, CliError> {
        let pole = match (&self.pole, &self.alpha) {
            (Some(_), Some(_)) => return Err(usage("--P", "give either --P or --alpha, not both")),
            (Some(text), None) => {
                let v = parse_vector("--P", text)?;
                let norm = v.norm();
                if (norm - 1.0).abs() > 1e-6 && !self.normalize_pole {
                    return Err(usage("--P", format!("‖P‖ = {norm}; pass --normalize-pole to rescale it")));
                }
                let v = v.normalized().map_err(|e| usage("--P", e))?;
                Pole::new(quadmap::SpherePoint::new(v).map_err(|e| usage("--P", e))?)
            }
            (None, Some(text)) => Pole::from_angle(parse_angle("--alpha", text, false)?.to_radians()),
            (None, None) => Pole::new(quadmap::SpherePoint::basis(self.dim.unwrap_or(1) + 1, 0)),
        };
        if let Some(dim) = self.dim {
            if pole.len() != dim + 1 {
                return Err(usage("--dim", format!("--dim {dim} needs a pole with {} coordinates", dim + 1)));
            }
        }
        Ok(pole)
    }

    /// The angle `α` when given, else the angle of a circle pole.
    pub fn alpha(&self, exact: bool) -> Result<Angle, CliError> {
        match &self.alpha {
            Some(text) => parse_angle("--alpha", text, exact),
            None => {
                let pole = self.pole()?;
                if pole.len() != 2 {
                    return Err(usage("--alpha", "needs --alpha or a pole on the circle"));
                }
                let a = Angle::radians(quadmap::dynamics::circle_angle(pole.vector())).map_err(|e| usage("--P", e))?;
                Ok(if exact { a.to_exact() } else { a })
            }
        }
    }
}

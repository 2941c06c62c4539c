//! Argument definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug, Clone)]
#[command(name = "nonlocal", version, about = "Fractional Laplacians, nonlocal calculus, fractional perimeters and long-jump walks")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Seed of the counter-based random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Grid over the order, as s=<a>:<b>:<step>; output is CSV.
    #[arg(long, global = true)]
    pub scan: Option<String>,
    /// Quadrature tolerances; each command has its own default.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Normalization constants C(n,s), c(n,s), a(n,s), kappa(n,s).
    Constants(Constants),
    /// Pointwise fractional Laplacian.
    #[command(subcommand)]
    Fraclap(Fraclap),
    /// Potential theory on balls.
    #[command(subcommand)]
    Ball(Ball),
    /// Caputo derivative and its stationary continuation.
    #[command(subcommand)]
    Caputo(Caputo),
    /// Marchaud derivative and its extension.
    #[command(subcommand)]
    Marchaud(Marchaud),
    /// Fractional perimeter, curvature and behaviour at infinity.
    #[command(subcommand)]
    Geom(Geom),
    /// Long-jump random walk.
    #[command(subcommand)]
    Walk(Walk),
    /// Dislocation particle dynamics.
    #[command(subcommand)]
    Dislocation(Dislocation),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Order {
    /// Fractional order in (0, 1); may be left out with --scan.
    #[arg(long)]
    pub s: Option<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Constants {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FieldPoint {
    /// gaussian | sech | skew-bump | positive-power | ball-bump | constant:<c>
    #[arg(long)]
    pub field: String,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fraclap {
    /// Singular-integral form.
    Si(FieldPoint),
    /// Heat-semigroup form.
    Semigroup(FieldPoint),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BallData {
    /// Field preset (see fraclap).
    #[arg(long)]
    pub data: String,
    /// Cut the field to |y| < R before moving the ball.
    #[arg(long)]
    pub truncate: Option<f64>,
    /// Center of the ball, in the coordinates of the field.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub center: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BallMean {
    #[arg(long)]
    pub field: String,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ball {
    /// s-harmonic function with given exterior data.
    Dirichlet(BallData),
    /// Solution with given forcing and zero exterior data.
    Poisson(BallData),
    /// s-mean value of a field.
    Mean(BallMean),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CaputoDeriv {
    /// ramp | well | cos | sin | exp
    #[arg(long)]
    pub preset: String,
    /// Initial point for cos, sin and exp.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CaputoExtend {
    /// ex221 (ramp history) | ex222 (quadratic well history); both default to s = 0.5
    #[arg(long)]
    pub preset: String,
    #[arg(long)]
    pub x: f64,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CaputoSequence {
    #[arg(long, default_value = "ex222")]
    pub preset: String,
    #[arg(long)]
    pub j: u32,
    #[arg(long)]
    pub x: f64,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Caputo {
    Deriv(CaputoDeriv),
    /// Continuation with vanishing derivative after the history.
    Extend(CaputoExtend),
    /// Blow-up sequence at the junction point.
    Sequence(CaputoSequence),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MarchaudFn {
    /// cos | sin | exp
    #[arg(long)]
    pub preset: String,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    /// Multiply by s / Gamma(1 - s).
    #[arg(long)]
    pub normalized: bool,
    #[arg(long, value_enum, default_value = "left")]
    pub side: SideArg,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MarchaudExt {
    #[command(flatten)]
    pub func: MarchaudFn,
    /// Extension variable x > 0.
    #[arg(long = "x-ext")]
    pub x: f64,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Marchaud {
    Deriv(MarchaudFn),
    Extend(MarchaudExt),
    /// Derivative recovered from the extension.
    Trace(MarchaudFn),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PerimeterMethodArg {
    Closed,
    Mc,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Perimeter {
    #[arg(long)]
    pub set: String,
    #[arg(long)]
    pub domain: String,
    #[arg(long, value_enum, default_value = "closed")]
    pub method: PerimeterMethodArg,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Curvature {
    #[arg(long)]
    pub set: String,
    /// Boundary point.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub q: Vec<f64>,
    /// Cylinder half-width; default a quarter of the curvature radius.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CurvaturePv {
    #[arg(long)]
    pub set: String,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub q: Vec<f64>,
    /// Tangent ball, center then radius; derived from the set when left out.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub tangent: Option<Vec<f64>>,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Alpha {
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Delta {
    #[arg(long)]
    pub alpha_bar: f64,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Coarea {
    /// linear | constant:<c> | indicator:<a>,<b>
    #[arg(long)]
    pub field: String,
    #[arg(long, default_value = "intervals:0,1")]
    pub domain: String,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geom {
    Perimeter(Perimeter),
    /// Graph formula.
    Curvature(Curvature),
    /// Principal value over deleted balls.
    CurvaturePv(CurvaturePv),
    /// s alpha_s(0, 1, E) by Monte Carlo.
    Alpha(Alpha),
    /// Stickiness threshold.
    Delta(Delta),
    /// Both sides of the coarea formula.
    Coarea(Coarea),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Payoff {
    #[command(flatten)]
    pub ball: BallData,
    #[arg(long, default_value_t = 0.02)]
    pub h: f64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_steps: u64,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Walk {
    /// Mean exit payoff.
    Payoff(Payoff),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Run {
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub positions: Vec<f64>,
    /// +1/-1 per particle; all +1 when left out.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub orientations: Option<Vec<i8>>,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Constant external stress.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub sigma: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon: f64,
    #[command(flatten)]
    pub order: Order,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dislocation {
    Run(Run),
}

impl Command {
    /// Order implied by the named example presets, which are posed at s = 1/2.
    pub fn default_order(&self) -> Option<f64> {
        let preset = match self {
            Command::Caputo(Caputo::Extend(a)) => &a.preset,
            Command::Caputo(Caputo::Sequence(a)) => &a.preset,
            _ => return None,
        };
        matches!(preset.as_str(), "ex221" | "ex222").then_some(0.5)
    }

    /// The order flag of whichever command this is.
    pub fn order_mut(&mut self) -> &mut Option<f64> {
        let o = match self {
            Command::Constants(a) => &mut a.order,
            Command::Fraclap(Fraclap::Si(a) | Fraclap::Semigroup(a)) => &mut a.order,
            Command::Ball(Ball::Dirichlet(a) | Ball::Poisson(a)) => &mut a.order,
            Command::Ball(Ball::Mean(a)) => &mut a.order,
            Command::Caputo(Caputo::Deriv(a)) => &mut a.order,
            Command::Caputo(Caputo::Extend(a)) => &mut a.order,
            Command::Caputo(Caputo::Sequence(a)) => &mut a.order,
            Command::Marchaud(Marchaud::Deriv(a) | Marchaud::Trace(a)) => &mut a.order,
            Command::Marchaud(Marchaud::Extend(a)) => &mut a.func.order,
            Command::Geom(Geom::Perimeter(a)) => &mut a.order,
            Command::Geom(Geom::Curvature(a)) => &mut a.order,
            Command::Geom(Geom::CurvaturePv(a)) => &mut a.order,
            Command::Geom(Geom::Alpha(a)) => &mut a.order,
            Command::Geom(Geom::Delta(a)) => &mut a.order,
            Command::Geom(Geom::Coarea(a)) => &mut a.order,
            Command::Walk(Walk::Payoff(a)) => &mut a.ball.order,
            Command::Dislocation(Dislocation::Run(a)) => &mut a.order,
        };
        &mut o.s
    }
}

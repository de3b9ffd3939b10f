use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};

use netspace_core::Engine;

#[derive(Parser, Debug)]
#[command(name = "netspace", version, about = "Net-space norms, Dirichlet-kernel constants and inequality campaigns")]
pub struct Cli {
    /// TOML file of flag defaults (top-level keys, or a [subcommand] table); command-line flags win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads; results do not depend on it [default: all cores]
    #[arg(long, global = true, env = "NETSPACE_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// ‖F‖_{N_{p,q}} of one coefficient net
    Netnorm(NetnormArgs),
    /// F̄[λ] with witnesses at every requested level
    AveragingTable(AveragingArgs),
    /// ‖D_Q‖_{L^{p'}} of one Dirichlet kernel
    Dirichlet(DirichletArgs),
    /// The characterization constant C_{pM} with one row per element
    Characterize(CharacterizeArgs),
    /// Run a verification campaign and write its report
    Verify(VerifyArgs),
    /// Growth-condition bands and eigenvalue counting on a lattice
    ValidateLattice(ValidateArgs),
}

fn ser_exponent<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*x)
    }
}

fn ser_engine<S: Serializer>(e: &Engine, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeChoice {
    /// Z^n truncated to a sup-norm cube
    Z,
    /// SU(2) dual truncated at a highest spin
    Su2,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LatticeArgs {
    /// Lattice JSON file; overrides --kind and the size flags
    #[arg(long)]
    pub lattice: Option<PathBuf>,

    /// Built-in lattice
    #[arg(long, value_enum, default_value_t = LatticeChoice::Su2)]
    pub kind: LatticeChoice,

    /// Dimension n of Z^n
    #[arg(long, default_value_t = 1)]
    pub dim: u32,

    /// Sup-norm radius of the Z^n truncation
    #[arg(long, default_value_t = 4)]
    pub radius: u32,

    /// λ on Z^n: rank or euclidean
    #[arg(long, default_value = "rank")]
    pub lambda_rule: String,

    /// Highest spin l of the SU(2) truncation (half-integers allowed)
    #[arg(long, default_value_t = 5.0)]
    pub lmax: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FamilyArgs {
    /// all-subsets, progressions, segments, segments-top-lambda or file:PATH
    #[arg(long, default_value = "all-subsets")]
    pub family: String,

    /// Skip members with more elements than this
    #[arg(long)]
    pub max_cardinality: Option<usize>,

    /// Stop enumerating after this many members
    #[arg(long)]
    pub max_count: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutputArgs {
    /// JSON output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// CSV output file for per-row data
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct NetSource {
    /// Coefficient-net JSON file; without it a seeded random net is used
    #[arg(long)]
    pub net: Option<PathBuf>,

    /// Seed of the random net
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct NetnormArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub net: NetSource,

    /// Exponent p, 1 <= p < inf
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,

    /// Exponent q, 1 <= q <= inf
    #[arg(long, default_value_t = 2.0)]
    #[serde(serialize_with = "ser_exponent")]
    pub q: f64,

    /// exact, heuristic or auto
    #[arg(long, default_value = "auto")]
    #[serde(serialize_with = "ser_engine")]
    pub engine: Engine,

    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct AveragingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub net: NetSource,

    /// Comma-separated levels λ [default: the lattice's distinct λ]
    #[arg(long)]
    pub levels: Option<String>,

    /// exact, heuristic or auto
    #[arg(long, default_value = "auto")]
    #[serde(serialize_with = "ser_engine")]
    pub engine: Engine,

    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct DirichletArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub lattice: LatticeArgs,

    /// Element labels of Q separated by ';'
    #[arg(long, conflicts_with = "ids")]
    pub members: Option<String>,

    /// Element ids of Q separated by ','
    #[arg(long)]
    pub ids: Option<String>,

    /// Exponent p' of the kernel norm, 1 <= p' <= inf
    #[arg(long)]
    #[serde(serialize_with = "ser_exponent")]
    pub p_prime: f64,

    /// Torus grid points per axis
    #[arg(long, default_value_t = 256)]
    pub grid: usize,

    /// SU(2) quadrature panels [default: 2(2 l_max + 1)]
    #[arg(long)]
    pub panels: Option<usize>,

    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct CharacterizeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,

    /// Exponent p, 1 < p <= inf
    #[arg(long, default_value_t = 2.0)]
    #[serde(serialize_with = "ser_exponent")]
    pub p: f64,

    /// Torus grid points per axis
    #[arg(long, default_value_t = 256)]
    pub grid: usize,

    /// SU(2) quadrature panels [default: 2(2 l_max + 1)]
    #[arg(long)]
    pub panels: Option<usize>,

    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inequality {
    /// Weighted coefficient sums against ‖f‖_p^p on T^n
    HlTorus,
    /// N_{p',q}(progressions) norm of f̂ against ‖f‖_{L^{p,q}} on T^n
    NedTorus,
    /// Closed-form converse sum on SU(2) against ‖f‖_p^p
    Su2Converse,
    /// N_{p,q2} against N_{p,q1} on random nets
    Embedding,
    /// Upper-bound step of the K-functional estimate
    Kfunc,
    /// Progressions against all subsets against Lorentz against L^p on T^n
    Comparison,
    /// ‖f̂‖_{N_{p',∞}} against C_{pM} ‖f‖_p
    CharForward,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrontendChoice {
    Torus,
    Su2,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// Campaign to run
    #[arg(long, value_enum)]
    pub inequality: Inequality,

    /// deterministic, random:N[:seed=S][:decay=D] or file:PATH
    #[arg(long, default_value = "deterministic")]
    pub corpus: String,

    /// Exponent p
    #[arg(long, default_value_t = 1.5)]
    pub p: f64,

    /// Lorentz exponent q (ned-torus)
    #[arg(long, default_value_t = 2.0)]
    #[serde(serialize_with = "ser_exponent")]
    pub q: f64,

    /// Smaller exponent q1 (embedding)
    #[arg(long, default_value_t = 2.0)]
    #[serde(serialize_with = "ser_exponent")]
    pub q1: f64,

    /// Larger exponent q2 (embedding)
    #[arg(long, default_value_t = f64::INFINITY)]
    #[serde(serialize_with = "ser_exponent")]
    pub q2: f64,

    /// Exponent p1 (kfunc)
    #[arg(long, default_value_t = 1.5)]
    pub p1: f64,

    /// Exponent p2 > p1 (kfunc)
    #[arg(long, default_value_t = 3.0)]
    pub p2: f64,

    /// Torus dimension n
    #[arg(long, default_value_t = 1)]
    pub dim: u32,

    /// Torus corpus bandwidth K (frequencies in [-K, K]^n)
    #[arg(long, default_value_t = 8)]
    pub bandwidth: usize,

    /// Torus grid points per axis
    #[arg(long, default_value_t = 256)]
    pub grid: usize,

    /// Z^n truncation radius for ned-torus [default: 2 × bandwidth]
    #[arg(long)]
    pub radius: Option<usize>,

    /// Highest spin of the SU(2) truncation
    #[arg(long, default_value_t = 10.0)]
    pub lmax: f64,

    /// Comma-separated spins for a truncation trend (su2-converse, embedding)
    #[arg(long)]
    pub lmax_trend: Option<String>,

    /// Largest allowed max/min of the empirical constants along the trend
    #[arg(long, default_value_t = 1.5)]
    pub threshold: f64,

    /// Number of random trials (kfunc)
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,

    /// Seed of the trial generator (kfunc)
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Elements per random lattice (kfunc)
    #[arg(long, default_value_t = 8)]
    pub lattice_size: usize,

    /// Lattice JSON file (embedding, kfunc) instead of the built-in one
    #[arg(long)]
    pub lattice: Option<PathBuf>,

    /// Family [default: segments for embedding, all-subsets otherwise]
    #[arg(long)]
    pub family: Option<String>,

    /// Group frontend (char-forward)
    #[arg(long, value_enum, default_value_t = FrontendChoice::Su2)]
    pub frontend: FrontendChoice,

    /// exact, heuristic or auto (embedding, char-forward)
    #[arg(long, default_value = "auto")]
    #[serde(serialize_with = "ser_engine")]
    pub engine: Engine,

    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct ValidateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub lattice: LatticeArgs,

    /// Growth exponent β (β != -1)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,

    /// below or above [default: below for β > -1, above for β < -1]
    #[arg(long)]
    pub side: Option<String>,

    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

//! Experiment runners behind the `ssx` binary.
//!
//! Every subcommand returns a [`Report`] carrying the configuration echo, the
//! tolerances in force and one pass/fail entry per checked claim.

mod commands;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use ssx_core::symmetric_pair::{build_so_pair, hyperboloid_pair, SymmetricPairModel};
use ssx_core::tolerances::Tolerances;

pub use report::{Claim, Report, TableRow, SCHEMA_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] ssx_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed input: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for anything the caller can fix by changing the configuration.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Json(_) => 2,
            CliError::Core(e) => match e {
                ssx_core::Error::InvalidArgument(_)
                | ssx_core::Error::InvalidSigns(_)
                | ssx_core::Error::Unsupported(_) => 2,
                _ => 1,
            },
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "ssx", version, about = "Verification runs on pseudo-Riemannian symmetric space models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

/// Overrides for the thresholds used by the domain predicates.
#[derive(Debug, Clone, Args, Serialize, Default)]
pub struct ToleranceArgs {
    #[arg(long, global = true)]
    pub tol_margin: Option<f64>,
    #[arg(long, global = true)]
    pub tol_imag_rel: Option<f64>,
    #[arg(long, global = true)]
    pub tol_cluster_rel: Option<f64>,
    #[arg(long, global = true)]
    pub tol_group_identity: Option<f64>,
}

impl ToleranceArgs {
    pub fn resolve(&self) -> CliResult<Tolerances> {
        let mut t = Tolerances::default();
        for (slot, v) in [
            (&mut t.margin, self.tol_margin),
            (&mut t.imag_rel, self.tol_imag_rel),
            (&mut t.cluster_rel, self.tol_cluster_rel),
            (&mut t.group_identity, self.tol_group_identity),
        ] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(CliError::Config(format!("tolerance {v} must be positive")));
                }
                *slot = v;
            }
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 3)]
    pub p: usize,
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    /// Comma-separated ±1 entries of the diagonal involution; defaults to
    /// `1,…,1,−1` (the hyperboloid model).
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
}

pub fn parse_signs(s: &str) -> CliResult<Vec<i8>> {
    s.split(',')
        .map(|t| match t.trim() {
            "1" | "+1" => Ok(1),
            "-1" => Ok(-1),
            other => Err(CliError::Config(format!("sign entry {other:?} is not ±1"))),
        })
        .collect()
}

impl ModelArgs {
    pub fn build(&self) -> CliResult<SymmetricPairModel> {
        Ok(match &self.tau {
            Some(t) => build_so_pair(self.p, self.q, &parse_signs(t)?)?,
            None => hyperboloid_pair(self.p, self.q)?,
        })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QuadricArgs {
    #[arg(long, default_value_t = 4)]
    pub p: usize,
    #[arg(long, default_value_t = 3)]
    pub q: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum DomainArg {
    Omega,
    OmegaPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum LatticeArg {
    A,
    B,
    D,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum InvolutionArg {
    Identity,
    Flip,
    NegatedFlip,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Membership of sampled X ∈ q in ω and ω′.
    OmegaCheck {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 3.0)]
        max_norm: f64,
    },
    /// Regularity of the polar map differential by the spectral and cosine routes.
    Regularity {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 200)]
        nilpotent_samples: usize,
        #[arg(long, default_value_t = 200)]
        jordan_samples: usize,
        #[arg(long, default_value_t = 4.0)]
        max_norm: f64,
    },
    /// Classify points of a JSON file, or random translates of the base points.
    OrbitClassify {
        #[command(flatten)]
        quadric: QuadricArgs,
        /// JSON array of points, each an array of `[re, im]` pairs.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        translates: usize,
    },
    /// The invariant F along the three closed-orbit slices.
    FTable {
        #[command(flatten)]
        quadric: QuadricArgs,
        #[arg(long, default_value_t = 20)]
        translates: usize,
    },
    /// Levi signatures per hypersurface stratum.
    LeviTable {
        #[command(flatten)]
        quadric: QuadricArgs,
        #[arg(long, default_value_t = 10)]
        translates: usize,
    },
    /// Signature of the complex Hessian of the transported energy.
    KahlerSignature {
        #[command(flatten)]
        quadric: QuadricArgs,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Monge–Ampère residuals of √|E| and of E.
    MaResidual {
        #[command(flatten)]
        quadric: QuadricArgs,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Collision search for the polar map on Ω or Ω′.
    Injectivity {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "omega")]
        domain: DomainArg,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 3.0)]
        max_norm: f64,
        /// Also evaluate the higher-rank collision witness of the model.
        #[arg(long)]
        inject_witness: bool,
    },
    /// Shortest-vector checks on coroot lattices and the lattice element values.
    LatticeVerify {
        #[arg(long = "type", value_enum)]
        lattice: LatticeArg,
        #[arg(long)]
        n: usize,
        /// Restrict to one involution (same-length types only).
        #[arg(long, value_enum)]
        involution: Option<InvolutionArg>,
        /// Hyperboloid model used for the restricted-root values.
        #[arg(long, default_value_t = 3)]
        model_p: usize,
        #[arg(long, default_value_t = 2)]
        model_q: usize,
    },
    /// The rank-one classification table.
    Rank1Catalog,
    /// Build X and γ with exp(i(X+γ)) = exp(iX) on a higher-rank model.
    CollisionWitness {
        #[arg(long, default_value_t = 3)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        q: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "1,1,-1,-1")]
        tau: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::OmegaCheck { .. } => "omega-check",
            Command::Regularity { .. } => "regularity",
            Command::OrbitClassify { .. } => "orbit-classify",
            Command::FTable { .. } => "f-table",
            Command::LeviTable { .. } => "levi-table",
            Command::KahlerSignature { .. } => "kahler-signature",
            Command::MaResidual { .. } => "ma-residual",
            Command::Injectivity { .. } => "injectivity",
            Command::LatticeVerify { .. } => "lattice-verify",
            Command::Rank1Catalog => "rank1-catalog",
            Command::CollisionWitness { .. } => "collision-witness",
        }
    }
}

/// Runs the configured subcommand and assembles its report.
pub fn run(cli: &Cli) -> CliResult<Report> {
    let tol = cli.tolerances.resolve()?;
    let seed = cli.seed;
    let outcome = match &cli.command {
        Command::OmegaCheck { model, samples, max_norm } => {
            commands::domains::omega_check(&model.build()?, *samples, *max_norm, seed, tol)?
        }
        Command::Regularity {
            model,
            samples,
            nilpotent_samples,
            jordan_samples,
            max_norm,
        } => commands::domains::regularity(
            &model.build()?,
            *samples,
            *nilpotent_samples,
            *jordan_samples,
            *max_norm,
            seed,
            tol,
        )?,
        Command::OrbitClassify {
            quadric,
            points,
            translates,
        } => commands::quadric::orbit_classify(quadric.p, quadric.q, points.as_deref(), *translates, seed)?,
        Command::FTable { quadric, translates } => commands::quadric::f_table(quadric.p, quadric.q, *translates, seed)?,
        Command::LeviTable { quadric, translates } => {
            commands::quadric::levi_table(quadric.p, quadric.q, *translates, seed)?
        }
        Command::KahlerSignature { quadric, points } => {
            commands::quadric::kahler_signature(quadric.p, quadric.q, *points, seed)?
        }
        Command::MaResidual { quadric, points } => commands::quadric::ma_residual(quadric.p, quadric.q, *points, seed)?,
        Command::Injectivity {
            model,
            domain,
            samples,
            max_norm,
            inject_witness,
        } => commands::trials::injectivity(&model.build()?, *domain, *samples, *max_norm, *inject_witness, seed)?,
        Command::LatticeVerify {
            lattice,
            n,
            involution,
            model_p,
            model_q,
        } => commands::lattice::lattice_verify(*lattice, *n, *involution, *model_p, *model_q)?,
        Command::Rank1Catalog => commands::lattice::rank1_catalog()?,
        Command::CollisionWitness { p, q, tau } => {
            commands::trials::collision_witness(&build_so_pair(*p, *q, &parse_signs(tau)?)?, tol)?
        }
    };
    let passed = outcome.claims.iter().all(|c| c.passed);
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        subcommand: cli.command.name().to_string(),
        config: serde_json::to_value(cli)?,
        tolerances: tol,
        claims: outcome.claims,
        passed,
        data: outcome.data,
        rows: outcome.rows,
    })
}

pub fn render(report: &Report, format: Format) -> CliResult<String> {
    Ok(match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
        Format::Text => report.to_text(),
    })
}

/// Parses arguments, runs, writes the report and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("ssx: {e}");
            return e.exit_code();
        }
    };
    let text = match render(&report, cli.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("ssx: {e}");
            return e.exit_code();
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("ssx: {e}");
        return 1;
    }
    if report.passed {
        0
    } else {
        1
    }
}

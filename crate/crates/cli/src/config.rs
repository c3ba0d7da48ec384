use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "hecke", version, about = "Hecke operators on the supersingular locus and exact Satake bounds")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Common {
    /// Key = value config file with one section per command
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Directory of modular polynomial files (default: bundled data)
    #[arg(long, global = true)]
    pub data_dir: Option<PathBuf>,
    /// Directory for cached loci and Hecke matrices
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for range commands (default: available cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    /// A seeded random unit vector and the indicator of the first point
    #[default]
    All,
    Random,
    Indicator,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Supersingular j-invariants, weights and the mass check
    Locus(LocusArgs),
    /// Integer matrix of T_m
    Hecke(HeckeArgs),
    /// Eigenvalues of T_l against 2 sqrt(l)
    Spectrum(SpectrumArgs),
    /// Convergence of T_m v / deg over squarefree m
    Equidist(EquidistArgs),
    /// Convergence of powers of T_l
    Power(PowerArgs),
    /// Degrees, norms and the norm/degree bound for GL_n
    Satake(SatakeArgs),
    /// Decomposition of rational primes in a totally real field
    Splitting(SplittingArgs),
    /// Threshold beyond which binom(n,r)^omega(m) <= m^eps
    Stirling(StirlingArgs),
    /// Validate modular polynomial data files
    ModpolyCheck(ModpolyCheckArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Locus(_) => "locus",
            Command::Hecke(_) => "hecke",
            Command::Spectrum(_) => "spectrum",
            Command::Equidist(_) => "equidist",
            Command::Power(_) => "power",
            Command::Satake(_) => "satake",
            Command::Splitting(_) => "splitting",
            Command::Stirling(_) => "stirling",
            Command::ModpolyCheck(_) => "modpoly-check",
        }
    }
}

/// Fills every unset field of `self` from `file`.
pub trait Merge {
    fn merge(self, file: Self) -> Self;
}

macro_rules! mergeable {
    ($ty:ident { $($field:ident),* $(,)? }) => {
        impl Merge for $ty {
            fn merge(self, file: Self) -> Self {
                $ty { $($field: self.$field.or(file.$field)),* }
            }
        }
    };
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocusArgs {
    #[arg(long)]
    pub p: Option<u64>,
    /// Inclusive prime range `a..b`
    #[arg(long, conflicts_with = "p")]
    pub range: Option<String>,
}
mergeable!(LocusArgs { p, range });

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeckeArgs {
    #[arg(long)]
    pub p: Option<u64>,
    /// Squarefree level prime to p
    #[arg(long)]
    pub m: Option<u64>,
}
mergeable!(HeckeArgs { p, m });

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub ell: Option<u64>,
}
mergeable!(SpectrumArgs { p, ell });

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquidistArgs {
    #[arg(long)]
    pub p: Option<u64>,
    /// Comma-separated primes generating the squarefree levels
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    #[arg(long, value_enum)]
    pub init: Option<InitKind>,
}
mergeable!(EquidistArgs { p, primes, init });

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub ell: Option<u64>,
    /// Number of iterations
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, value_enum)]
    pub init: Option<InitKind>,
}
mergeable!(PowerArgs { p, ell, count, init });

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SatakeArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Defaults to every r in 1..n-1
    #[arg(long)]
    pub r: Option<usize>,
    /// Defining polynomial coefficients, constant term first; a list monic only
    /// when read leading-first is read that way (default: Q)
    #[arg(long, allow_hyphen_values = true)]
    pub field: Option<String>,
    /// Comma-separated squarefree levels
    #[arg(long, value_delimiter = ',')]
    pub m: Option<Vec<u64>>,
    /// Every squarefree unramified level in 2..=m_max
    #[arg(long)]
    pub m_max: Option<u64>,
}
mergeable!(SatakeArgs { n, r, field, m, m_max });

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplittingArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub field: Option<String>,
    /// Comma-separated primes
    #[arg(long, value_delimiter = ',')]
    pub ell: Option<Vec<u64>>,
}
mergeable!(SplittingArgs { field, ell });

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StirlingArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Positive rational, as `a/b` or a decimal
    #[arg(long)]
    pub eps: Option<String>,
    /// Only report failures up to this bound
    #[arg(long)]
    pub limit: Option<u64>,
}
mergeable!(StirlingArgs { n, r, eps, limit });

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModpolyCheckArgs {}

impl Merge for ModpolyCheckArgs {
    fn merge(self, _: Self) -> Self {
        self
    }
}

mergeable!(Common { config, out, format, data_dir, cache_dir, seed, jobs });

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    #[serde(default)]
    pub common: Common,
    #[serde(default)]
    pub locus: LocusArgs,
    #[serde(default)]
    pub hecke: HeckeArgs,
    #[serde(default)]
    pub spectrum: SpectrumArgs,
    #[serde(default)]
    pub equidist: EquidistArgs,
    #[serde(default)]
    pub power: PowerArgs,
    #[serde(default)]
    pub satake: SatakeArgs,
    #[serde(default)]
    pub splitting: SplittingArgs,
    #[serde(default)]
    pub stirling: StirlingArgs,
    #[serde(default)]
    pub modpoly_check: ModpolyCheckArgs,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// Applies the config file (if any) underneath the command-line flags.
pub fn resolve(cli: Cli) -> Result<(Common, Command), CliError> {
    let Some(path) = cli.common.config.clone() else {
        return Ok((cli.common, cli.command));
    };
    let file = ConfigFile::load(&path)?;
    let common = cli.common.merge(file.common);
    let command = match cli.command {
        Command::Locus(a) => Command::Locus(a.merge(file.locus)),
        Command::Hecke(a) => Command::Hecke(a.merge(file.hecke)),
        Command::Spectrum(a) => Command::Spectrum(a.merge(file.spectrum)),
        Command::Equidist(a) => Command::Equidist(a.merge(file.equidist)),
        Command::Power(a) => Command::Power(a.merge(file.power)),
        Command::Satake(a) => Command::Satake(a.merge(file.satake)),
        Command::Splitting(a) => Command::Splitting(a.merge(file.splitting)),
        Command::Stirling(a) => Command::Stirling(a.merge(file.stirling)),
        Command::ModpolyCheck(a) => Command::ModpolyCheck(a.merge(file.modpoly_check)),
    };
    if let Command::Locus(LocusArgs { p: Some(_), range: Some(_) }) = &command {
        return Err(CliError::Usage("locus takes either p or range, not both".into()));
    }
    Ok((common, command))
}

pub fn required<T>(value: Option<T>, name: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing required value --{name}")))
}

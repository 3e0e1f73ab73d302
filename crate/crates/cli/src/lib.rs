//! Argument and config-file handling for the `peridisp` binary.
//!
//! Values are resolved flag first, then config file, then `PERIDISP_OUT` (for
//! the output directory only), then the built-in defaults.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use peridisp::dispersion::{dispersion_asymptotics, PeridynamicParams};
use peridisp::experiments::{
    self, conservation_scenarios, run_conservation_report, ExperimentConfig, ScenarioReport,
    Tolerances,
};
use peridisp::specfun::AlphaOrder;
use peridisp::spectral::SpectralGrid;
use peridisp::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

pub const DEFAULT_OUT: &str = "peridisp-out";

#[derive(Debug, Parser)]
#[command(
    name = "peridisp",
    version,
    about = "Dispersion relation, spectral evolution and conservation checks for the linear peridynamic wave equation",
    after_help = "Config file keys (JSON object, unknown keys rejected): command, alpha, kappa, rho, delta, v, \
half_width, n_modes, out_dir, tol_energy, tol_gamma, scenario, xi, times.\n\
Exit codes: 0 success, 1 validator failure, 2 usage error, 3 i/o error."
)]
pub struct Cli {
    /// Nonlocality order α in (0,1) [default: 0.1]
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Micromodulus κ [default: 0.5]
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    /// Density ρ [default: 1]
    #[arg(long, global = true)]
    pub rho: Option<f64>,
    /// Horizon δ [default: 1]
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Speed parameter of the Gaussian pulse, v₁ = −v·v₀′ (evolve only) [default: 0]
    #[arg(long, global = true)]
    pub v: Option<f64>,
    /// Half-width of the periodic domain [−L, L) [default: 40]
    #[arg(long = "L", global = true, value_name = "L")]
    pub half_width: Option<f64>,
    /// Number of modes, a power of two >= 16 [default: 8192]
    #[arg(long = "n", global = true, value_name = "N")]
    pub n_modes: Option<usize>,
    /// Output directory [default: $PERIDISP_OUT, else peridisp-out]
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Relative energy drift tolerance [default: 1e-8]
    #[arg(long = "tol-energy", global = true, value_name = "TOL")]
    pub tol_energy: Option<f64>,
    /// Relative tolerance of the Gamma identity check [default: 1e-8]
    #[arg(long = "tol-gamma", global = true, value_name = "TOL")]
    pub tol_gamma: Option<f64>,
    /// JSON config file; command-line flags take precedence over its values
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate ω, ω′, ω″ and the majorant of ω² to dispersion.csv
    Dispersion {
        /// Comma-separated frequencies [default: 61 points log-spaced on 1e-3..1e3]
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi: Option<Vec<f64>>,
    },
    /// Evolve the Gaussian pulse and write evolve.csv and evolve_observables.json
    Evolve {
        /// Comma-separated ascending times [default: 0,1,...,8]
        #[arg(long, value_delimiter = ',')]
        times: Option<Vec<f64>>,
    },
    /// Energy, momentum and angular momentum drift table (conservation.csv)
    Conserve {
        /// Restrict to one scenario: fig7, fig8, fig9, fig10 or fig10_delta_{2.5,1,0.1} [default: all]
        #[arg(long)]
        scenario: Option<String>,
    },
    /// Print the closed-form limits of ω, ω′, ω″ (asymptotics.json)
    Asymptotics,
    /// Compare I(α) with −cos(πα)Γ(−2α) for α = 0.01..0.99 (gamma_check.csv)
    GammaCheck,
    /// Figures 7-10 with their validators
    Figures,
    /// Figures, dispersion scan and conservation report
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Dispersion,
    Evolve,
    Conserve,
    Asymptotics,
    GammaCheck,
    Figures,
    All,
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<CommandKind>,
    pub alpha: Option<f64>,
    pub kappa: Option<f64>,
    pub rho: Option<f64>,
    pub delta: Option<f64>,
    pub v: Option<f64>,
    pub half_width: Option<f64>,
    pub n_modes: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub tol_energy: Option<f64>,
    pub tol_gamma: Option<f64>,
    pub scenario: Option<String>,
    pub xi: Option<Vec<f64>>,
    pub times: Option<Vec<f64>>,
}

/// Fully resolved and validated run description.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: PeridynamicParams,
    pub v: f64,
    pub half_width: f64,
    pub n_modes: usize,
    pub out_dir: PathBuf,
    pub tolerances: Tolerances,
    pub scenario: Option<String>,
    pub xi: Vec<f64>,
    pub times: Vec<f64>,
}

impl RunConfig {
    pub fn experiment_config(&self) -> ExperimentConfig {
        ExperimentConfig {
            params: self.params,
            half_width: self.half_width,
            n_modes: self.n_modes,
            out_dir: self.out_dir.clone(),
            tolerances: self.tolerances,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Parse failure, `--help` or `--version`; clap decides the exit code.
    Clap(clap::Error),
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Clap(e) => e.exit_code() as u8,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Clap(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "error: {m}"),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn default_xi() -> Vec<f64> {
    (0..=60)
        .map(|i| 10f64.powf(-3.0 + i as f64 / 10.0))
        .collect()
}

fn default_times() -> Vec<f64> {
    (0..=8).map(f64::from).collect()
}

fn read_config_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))
}

fn positive(name: &str, value: f64) -> Result<f64, CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(usage(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

/// Parses `args` (program name first) using the process environment for
/// `PERIDISP_OUT`.
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    parse_config_with_env(args, std::env::var_os("PERIDISP_OUT").map(PathBuf::from))
}

pub fn parse_config_with_env<I, T>(args: I, env_out: Option<PathBuf>) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(CliError::Clap)?;
    let file = match &cli.config {
        Some(path) => read_config_file(path)?,
        None => FileConfig::default(),
    };
    resolve(cli, file, env_out)
}

fn resolve(cli: Cli, file: FileConfig, env_out: Option<PathBuf>) -> Result<RunConfig, CliError> {
    let defaults = PeridynamicParams::default();
    let (mut xi, mut times, mut scenario) = (file.xi, file.times, file.scenario);
    let command = match cli.command {
        Some(Command::Dispersion { xi: x }) => {
            xi = x.or(xi);
            CommandKind::Dispersion
        }
        Some(Command::Evolve { times: t }) => {
            times = t.or(times);
            CommandKind::Evolve
        }
        Some(Command::Conserve { scenario: s }) => {
            scenario = s.or(scenario);
            CommandKind::Conserve
        }
        Some(Command::Asymptotics) => CommandKind::Asymptotics,
        Some(Command::GammaCheck) => CommandKind::GammaCheck,
        Some(Command::Figures) => CommandKind::Figures,
        Some(Command::All) => CommandKind::All,
        None => file
            .command
            .ok_or_else(|| usage("no command given; see --help"))?,
    };

    let alpha = cli.alpha.or(file.alpha).unwrap_or(defaults.alpha());
    let order = AlphaOrder::new(alpha).map_err(|e| usage(e.to_string()))?;
    let kappa = positive("kappa", cli.kappa.or(file.kappa).unwrap_or(defaults.kappa))?;
    let rho = positive("rho", cli.rho.or(file.rho).unwrap_or(defaults.rho))?;
    let delta = positive("delta", cli.delta.or(file.delta).unwrap_or(defaults.delta))?;
    let params =
        PeridynamicParams::new(kappa, rho, delta, order).map_err(|e| usage(e.to_string()))?;

    let v = cli.v.or(file.v).unwrap_or(0.0);
    if !v.is_finite() {
        return Err(usage(format!("v must be finite, got {v}")));
    }
    let half_width = cli.half_width.or(file.half_width).unwrap_or(40.0);
    let n_modes = cli.n_modes.or(file.n_modes).unwrap_or(8192);
    SpectralGrid::new(half_width, n_modes).map_err(|e| usage(e.to_string()))?;

    let tolerances = Tolerances {
        energy: positive(
            "tol-energy",
            cli.tol_energy.or(file.tol_energy).unwrap_or(1e-8),
        )?,
        gamma: positive(
            "tol-gamma",
            cli.tol_gamma.or(file.tol_gamma).unwrap_or(1e-8),
        )?,
        ..Tolerances::default()
    };

    let xi = xi.unwrap_or_else(default_xi);
    if xi.is_empty() || xi.iter().any(|x| !x.is_finite()) {
        return Err(usage("xi must be a nonempty list of finite frequencies"));
    }
    let times = times.unwrap_or_else(default_times);
    if times.is_empty()
        || times.iter().any(|t| !(*t >= 0.0 && t.is_finite()))
        || times.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(usage(
            "times must be a nonempty ascending list of values >= 0",
        ));
    }

    let out_dir = cli
        .out
        .or(file.out_dir)
        .or(env_out)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));

    Ok(RunConfig {
        command,
        params,
        v,
        half_width,
        n_modes,
        out_dir,
        tolerances,
        scenario,
        xi,
        times,
    })
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::Io { .. } | Error::Serialization(_) => EXIT_IO,
        Error::Domain(_) | Error::InvalidArgument(_) | Error::LengthMismatch { .. } => EXIT_USAGE,
        _ => EXIT_VALIDATION,
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value)?;
    fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))
        .and_then(|_| fs::write(path, text))
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn run(cfg: &RunConfig) -> Result<Vec<ScenarioReport>, Error> {
    let ex = cfg.experiment_config();
    write_json(&cfg.out_dir.join("run_config.json"), cfg)?;
    Ok(match cfg.command {
        CommandKind::Dispersion => vec![experiments::run_dispersion_table(&ex, &cfg.xi)?],
        CommandKind::Evolve => vec![experiments::run_evolution(&ex, cfg.v, &cfg.times)?],
        CommandKind::Conserve => {
            let all = conservation_scenarios(&ex)?;
            let chosen: Vec<_> = match &cfg.scenario {
                None => all,
                Some(name) => all
                    .into_iter()
                    .filter(|s| {
                        s.name == *name
                            || s.name
                                .strip_prefix(name.as_str())
                                .is_some_and(|r| r.starts_with('_'))
                    })
                    .collect(),
            };
            if chosen.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "unknown scenario {:?}; expected fig7, fig8, fig9, fig10 or fig10_delta_{{2.5,1,0.1}}",
                    cfg.scenario.as_deref().unwrap_or_default()
                )));
            }
            vec![run_conservation_report(&ex, &chosen)?]
        }
        CommandKind::Asymptotics => {
            let asy = dispersion_asymptotics(&cfg.params);
            println!("{}", serde_json::to_string_pretty(&asy)?);
            write_json(&cfg.out_dir.join("asymptotics.json"), &asy)?;
            Vec::new()
        }
        CommandKind::GammaCheck => vec![experiments::run_gamma_check(&ex)?],
        CommandKind::Figures => experiments::run_figures(&ex)?,
        CommandKind::All => experiments::run_all(&ex)?,
    })
}

/// Runs the configured command, prints one line per validator and returns
/// the exit code. Artifacts are written even when validators fail.
pub fn dispatch(cfg: &RunConfig) -> u8 {
    match run(cfg) {
        Ok(reports) => {
            print!("{}", experiments::summarize(&reports));
            for r in &reports {
                for a in &r.artifacts {
                    println!("wrote {}", a.display());
                }
            }
            if reports.iter().all(ScenarioReport::passed) {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

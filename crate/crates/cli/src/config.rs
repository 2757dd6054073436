//! Flag parsing, config files, and resolution into concrete run descriptions.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, ValueEnum};
use serde::Serialize;
use ttc_core::meanfield::{DEFAULT_DT, FULL_MODE_DEFAULT_PERIOD};
use ttc_core::survival::{AveragingWindow, BasisLabel, StateSpec, DEFAULT_ORDER, DEFAULT_T_MAX};
use ttc_core::{DotSector, LyapunovMode, ModelParams, SpectrumTopology};

use crate::error::{CliError, CliResult};
use crate::presets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Eigenphases,
    SpacingRatio,
    Survival,
    BasisSurvival,
    Lyapunov,
    PhasePortrait,
    VerifyReduction,
    RmtRefs,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Eigenphases => "eigenphases",
            Experiment::SpacingRatio => "spacing-ratio",
            Experiment::Survival => "survival",
            Experiment::BasisSurvival => "basis-survival",
            Experiment::Lyapunov => "lyapunov",
            Experiment::PhasePortrait => "phase-portrait",
            Experiment::VerifyReduction => "verify-reduction",
            Experiment::RmtRefs => "rmt-refs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisArg {
    Sz,
    Sx,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "stroboscopic")]
    Stroboscopic,
    #[value(name = "full_continuous", alias = "full-continuous")]
    FullContinuous,
}

impl From<ModeArg> for LyapunovMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Stroboscopic => LyapunovMode::Stroboscopic,
            ModeArg::FullContinuous => LyapunovMode::FullContinuous,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SectorArg {
    Plus,
    Minus,
}

/// `lo:hi:count`, inclusive and evenly spaced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sweep {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        ttc_core::floquet::linear_grid(self.lo, self.hi, self.count)
    }
}

fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts[..] else {
        return Err(format!("expected lo:hi:count, got `{s}`"));
    };
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    let count: usize = count.trim().parse().map_err(|e| format!("`{count}`: {e}"))?;
    let sweep = Sweep { lo: num(lo)?, hi: num(hi)?, count };
    if count < 1 || !(sweep.lo <= sweep.hi) {
        return Err(format!("need lo <= hi and count >= 1, got `{s}`"));
    }
    Ok(sweep)
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("`{lo}`: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("`{hi}`: {e}"))?;
    if !(lo <= hi) {
        return Err(format!("need lo <= hi, got `{s}`"));
    }
    Ok((lo, hi))
}

/// `x_polarized`, `gaussian`, `fock` (m = N/2) or `fock:<m>`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateArg {
    XPolarized,
    Gaussian,
    Fock(Option<f64>),
}

impl StateArg {
    pub fn spec(&self, n_particles: usize) -> StateSpec {
        match self {
            StateArg::XPolarized => StateSpec::XPolarized,
            StateArg::Gaussian => StateSpec::Gaussian,
            StateArg::Fock(m) => StateSpec::Fock(m.unwrap_or(n_particles as f64 / 2.0)),
        }
    }
}

fn parse_state(s: &str) -> Result<StateArg, String> {
    match s.trim() {
        "x_polarized" | "x-polarized" => Ok(StateArg::XPolarized),
        "gaussian" => Ok(StateArg::Gaussian),
        "fock" => Ok(StateArg::Fock(None)),
        other => match other.strip_prefix("fock:") {
            Some(m) => m.parse().map(|m| StateArg::Fock(Some(m))).map_err(|e| format!("`{m}`: {e}")),
            None => Err(format!("unknown state `{other}` (x_polarized, gaussian, fock, fock:<m>)")),
        },
    }
}

/// Raw command line. Every setting is optional so that presets and config
/// files can be layered underneath explicit flags.
#[derive(Debug, Clone, Default, Parser)]
#[command(name = "ttc", version, about = "n-fold two-time-correlator / Floquet laboratory")]
#[command(arg_required_else_help = true, args_override_self = true)]
pub struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    pub experiment: Option<Experiment>,
    /// Same as the positional argument.
    #[arg(long = "experiment", value_enum)]
    pub experiment_flag: Option<Experiment>,
    /// Figure preset: fig2 .. fig7.
    #[arg(long)]
    pub preset: Option<String>,
    /// `key = value` file; explicit flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Boson number.
    #[arg(long = "N")]
    pub n_particles: Option<usize>,
    /// Correlator order.
    #[arg(long = "n")]
    pub order: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub kz: Option<f64>,
    #[arg(long = "alpha-x", allow_negative_numbers = true)]
    pub alpha_x: Option<f64>,
    #[arg(long = "alpha-z", allow_negative_numbers = true)]
    pub alpha_z: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Backward Hamiltonian with alpha_x -> alpha_x - 2 beta.
    #[arg(long = "generalized-h2")]
    pub generalized_h2: bool,

    #[arg(long = "t-min", allow_negative_numbers = true)]
    pub t_min: Option<f64>,
    #[arg(long = "t-max", allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    #[arg(long = "t-steps")]
    pub t_steps: Option<usize>,
    /// Long-time-average window `lo:hi` (default: [max(10, 2 t_th), 20] / alpha_x).
    #[arg(long, value_parser = parse_window)]
    pub window: Option<(f64, f64)>,

    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "output-dir")]
    pub output_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub basis: Option<BasisArg>,
    /// x_polarized, gaussian, fock or fock:<m>.
    #[arg(long, value_parser = parse_state)]
    pub state: Option<StateArg>,
    #[arg(long = "dot-sector", value_enum)]
    pub dot_sector: Option<SectorArg>,
    /// Use open (non-wrapping) spacing ratios.
    #[arg(long = "open-spectrum")]
    pub open_spectrum: bool,

    /// Kick length T.
    #[arg(long)]
    pub period: Option<f64>,
    #[arg(long = "period-sweep", value_parser = parse_sweep)]
    pub period_sweep: Option<Sweep>,
    #[arg(long = "kz-sweep", value_parser = parse_sweep)]
    pub kz_sweep: Option<Sweep>,
    #[arg(long = "n-cycles")]
    pub n_cycles: Option<usize>,
    #[arg(long = "n-samples")]
    pub n_samples: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Integrator step.
    #[arg(long)]
    pub dt: Option<f64>,

    /// Shrink slow presets (see README).
    #[arg(long = "desk-scale")]
    pub desk_scale: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

impl Cli {
    /// `top` wins wherever it sets a value.
    pub fn overlay(&self, top: &Cli) -> Cli {
        Cli {
            experiment: top.experiment.or(self.experiment),
            experiment_flag: top.experiment_flag.or(self.experiment_flag),
            preset: top.preset.clone().or_else(|| self.preset.clone()),
            config: top.config.clone().or_else(|| self.config.clone()),
            n_particles: top.n_particles.or(self.n_particles),
            order: top.order.or(self.order),
            kz: top.kz.or(self.kz),
            alpha_x: top.alpha_x.or(self.alpha_x),
            alpha_z: top.alpha_z.or(self.alpha_z),
            delta: top.delta.or(self.delta),
            beta: top.beta.or(self.beta),
            generalized_h2: top.generalized_h2 || self.generalized_h2,
            t_min: top.t_min.or(self.t_min),
            t_max: top.t_max.or(self.t_max),
            t_steps: top.t_steps.or(self.t_steps),
            window: top.window.or(self.window),
            seed: top.seed.or(self.seed),
            output_dir: top.output_dir.clone().or_else(|| self.output_dir.clone()),
            basis: top.basis.or(self.basis),
            state: top.state.clone().or_else(|| self.state.clone()),
            dot_sector: top.dot_sector.or(self.dot_sector),
            open_spectrum: top.open_spectrum || self.open_spectrum,
            period: top.period.or(self.period),
            period_sweep: top.period_sweep.or(self.period_sweep),
            kz_sweep: top.kz_sweep.or(self.kz_sweep),
            n_cycles: top.n_cycles.or(self.n_cycles),
            n_samples: top.n_samples.or(self.n_samples),
            mode: top.mode.or(self.mode),
            dt: top.dt.or(self.dt),
            desk_scale: top.desk_scale || self.desk_scale,
            threads: top.threads.or(self.threads),
        }
    }
}

/// Turns `key = value` lines into the equivalent flags.
pub fn config_file_args(text: &str, origin: &Path) -> CliResult<Vec<String>> {
    let cmd = Cli::command();
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = || format!("{}:{}", origin.display(), lineno + 1);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("{}: expected `key = value`, got `{line}`", at())))?;
        let key = key.trim();
        let value = value.trim();
        let long = if key == "N" || key == "n" { key.to_string() } else { key.replace('_', "-") };
        let arg = cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(long.as_str()))
            .ok_or_else(|| CliError::usage(format!("{}: unknown key `{key}`", at())))?;
        if long == "config" {
            return Err(CliError::usage(format!("{}: config files cannot include other config files", at())));
        }
        if arg.get_action().takes_values() {
            out.push(format!("--{long}"));
            out.push(value.to_string());
        } else {
            match value {
                "true" => out.push(format!("--{long}")),
                "false" => {}
                other => {
                    return Err(CliError::usage(format!("{}: `{key}` expects true or false, got `{other}`", at())))
                }
            }
        }
    }
    Ok(out)
}

/// Parses argv, splicing in the config file (if any) underneath the explicit flags.
pub fn parse_args<I, T>(argv: I) -> Result<Cli, ParseOutcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let first = Cli::try_parse_from(&argv).map_err(ParseOutcome::Clap)?;
    let Some(path) = first.config.clone() else {
        return Ok(first);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|source| ParseOutcome::Cli(CliError::Io { path: path.clone(), source }))?;
    let extra = config_file_args(&text, &path).map_err(ParseOutcome::Cli)?;
    let mut merged: Vec<OsString> = argv.first().cloned().into_iter().collect();
    merged.extend(extra.into_iter().map(OsString::from));
    merged.extend(argv.into_iter().skip(1));
    Cli::try_parse_from(merged).map_err(ParseOutcome::Clap)
}

#[derive(Debug)]
pub enum ParseOutcome {
    Clap(clap::Error),
    Cli(CliError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovKnobs {
    pub period: f64,
    pub period_sweep: Option<Sweep>,
    pub kz_sweep: Option<Sweep>,
    pub n_cycles: usize,
    pub n_samples: usize,
    #[serde(serialize_with = "serialize_mode")]
    pub mode: LyapunovMode,
    pub dt: f64,
}

fn serialize_mode<S: serde::Serializer>(m: &LyapunovMode, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(match m {
        LyapunovMode::Stroboscopic => "stroboscopic",
        LyapunovMode::FullContinuous => "full_continuous",
    })
}

/// A fully resolved, validated run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    /// Distinguishes the panels of a multi-run preset in file names.
    pub label: Option<String>,
    pub preset: Option<String>,
    pub params: ModelParams,
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
    pub n: u32,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub basis: BasisArg,
    pub state: StateArg,
    pub window: AveragingWindow,
    pub dot_sector: DotSector,
    pub topology: SpectrumTopology,
    pub lyapunov: LyapunovKnobs,
    pub threads: Option<usize>,
    /// Reductions applied by `--desk-scale`.
    pub desk_scale: Vec<String>,
}

impl RunConfig {
    /// Output file stem.
    pub fn stem(&self) -> String {
        match &self.label {
            Some(l) => format!("{}-{l}", self.experiment.name()),
            None => self.experiment.name().to_string(),
        }
    }

    pub fn basis_label(&self) -> BasisLabel {
        match self.basis {
            BasisArg::Sz => BasisLabel::SzFock,
            BasisArg::Sx => BasisLabel::SxEigen,
            BasisArg::Random => BasisLabel::RandomHaar { seed: self.seed },
        }
    }

    pub fn t_grid(&self) -> Vec<f64> {
        ttc_core::floquet::linear_grid(self.t_min, self.t_max, self.t_steps)
    }
}

fn default_t_range(exp: Experiment, alpha_x: f64) -> (f64, f64, usize) {
    match exp {
        Experiment::Survival | Experiment::BasisSurvival => (0.0, DEFAULT_T_MAX / alpha_x, 4001),
        Experiment::VerifyReduction => (0.0, 5.0, 50),
        _ => (0.0, 5.0, 501),
    }
}

fn usage_from_core(e: ttc_core::Error) -> CliError {
    CliError::usage(e.to_string())
}

/// Builds a validated run from layered settings.
pub fn resolve_one(cli: &Cli, label: Option<String>, desk_scale: Vec<String>) -> CliResult<RunConfig> {
    let experiment = match (cli.experiment, cli.experiment_flag) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::usage(format!("conflicting experiments `{}` and `{}`", a.name(), b.name())))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(CliError::usage("no experiment given (positional, --experiment or --preset)")),
    };

    let mut params = ModelParams::paper_default(cli.n_particles.unwrap_or(60));
    params.kz = cli.kz.unwrap_or(params.kz);
    params.alpha_x = cli.alpha_x.unwrap_or(params.alpha_x);
    params.alpha_z = cli.alpha_z.unwrap_or(params.alpha_z);
    params.delta = cli.delta.unwrap_or(params.delta);
    params.beta = cli.beta.unwrap_or(params.beta);
    params.generalized_h2 = cli.generalized_h2;
    params.validate().map_err(usage_from_core)?;

    let (lo, hi, steps) = default_t_range(experiment, params.alpha_x);
    let t_min = cli.t_min.unwrap_or(lo);
    let t_max = cli.t_max.unwrap_or(hi);
    let t_steps = cli.t_steps.unwrap_or(steps);
    if !(t_min.is_finite() && t_max.is_finite()) || t_min > t_max {
        return Err(CliError::usage(format!("t-min must not exceed t-max (got {t_min} > {t_max})")));
    }
    if t_min < 0.0 {
        return Err(CliError::usage(format!("t-min must be >= 0 (got {t_min})")));
    }
    if t_steps < 1 {
        return Err(CliError::usage("t-steps must be at least 1"));
    }

    let n = cli.order.unwrap_or(DEFAULT_ORDER);
    let needs_order = matches!(experiment, Experiment::Survival | Experiment::BasisSurvival);
    if needs_order && n < 1 {
        return Err(CliError::usage("n must be at least 1"));
    }

    let window = match cli.window {
        Some((t_lo, t_hi)) => AveragingWindow { t_lo, t_hi },
        None => AveragingWindow::default_for(&params),
    };
    if needs_order {
        let grid = ttc_core::floquet::linear_grid(t_min, t_max, t_steps);
        if !grid.iter().any(|&t| window.contains(t)) {
            return Err(CliError::usage(format!(
                "window [{}, {}] contains no point of the time grid [{t_min}, {t_max}]",
                window.t_lo, window.t_hi
            )));
        }
    }

    let mode: LyapunovMode = cli.mode.map(Into::into).unwrap_or_default();
    let default_period = match (experiment, mode) {
        (Experiment::Lyapunov, LyapunovMode::FullContinuous) => FULL_MODE_DEFAULT_PERIOD,
        _ => 5.0,
    };
    let default_cycles = if experiment == Experiment::PhasePortrait { 50 } else { 20 };
    let lyapunov = LyapunovKnobs {
        period: cli.period.unwrap_or(default_period),
        period_sweep: cli.period_sweep,
        kz_sweep: cli.kz_sweep,
        n_cycles: cli.n_cycles.unwrap_or(default_cycles),
        n_samples: cli.n_samples.unwrap_or(500),
        mode,
        dt: cli.dt.unwrap_or(DEFAULT_DT),
    };
    if lyapunov.period_sweep.is_some() && lyapunov.kz_sweep.is_some() {
        return Err(CliError::usage("period-sweep and kz-sweep cannot be combined"));
    }
    if !(lyapunov.period.is_finite() && lyapunov.period >= 0.0) {
        return Err(CliError::usage(format!("period must be >= 0 (got {})", lyapunov.period)));
    }
    if !(lyapunov.dt.is_finite() && lyapunov.dt > 0.0) {
        return Err(CliError::usage(format!("dt must be positive (got {})", lyapunov.dt)));
    }
    if lyapunov.n_cycles < 1 || lyapunov.n_samples < 1 {
        return Err(CliError::usage("n-cycles and n-samples must be at least 1"));
    }
    if cli.threads == Some(0) {
        return Err(CliError::usage("threads must be at least 1"));
    }

    Ok(RunConfig {
        experiment,
        label,
        preset: cli.preset.clone(),
        params,
        t_min,
        t_max,
        t_steps,
        n,
        seed: cli.seed.unwrap_or(0),
        output_dir: cli.output_dir.clone().unwrap_or_else(|| PathBuf::from("ttc-out")),
        basis: cli.basis.unwrap_or(BasisArg::Random),
        state: cli.state.clone().unwrap_or(StateArg::XPolarized),
        window,
        dot_sector: match cli.dot_sector {
            Some(SectorArg::Minus) => DotSector::Minus,
            _ => DotSector::Plus,
        },
        topology: if cli.open_spectrum { SpectrumTopology::Open } else { SpectrumTopology::Circular },
        lyapunov,
        threads: cli.threads,
        desk_scale,
    })
}

/// Expands a preset (if any) and layers the explicit settings on top.
pub fn resolve(cli: &Cli) -> CliResult<Vec<RunConfig>> {
    let Some(name) = cli.preset.as_deref() else {
        return Ok(vec![resolve_one(cli, None, Vec::new())?]);
    };
    if cli.experiment.is_some() || cli.experiment_flag.is_some() {
        return Err(CliError::usage("--preset selects its own experiments; drop the experiment argument"));
    }
    presets::expand(name, cli.desk_scale)?
        .into_iter()
        .map(|panel| resolve_one(&panel.settings.overlay(cli), panel.label, panel.desk_scale))
        .collect()
}

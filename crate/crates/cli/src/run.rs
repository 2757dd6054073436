//! Executes a resolved run and writes its CSV and metadata files.

use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};
use ttc_core::floquet::eigenphase_sweep;
use ttc_core::meanfield::{lyapunov_max, phase_portrait, PortraitInitial};
use ttc_core::spectral::mean_r_sweep;
use ttc_core::survival::{
    basis_averaged_survival, make_basis, make_state, rmt_saturation, survival_probability, verify_reduction,
    REDUCTION_MAX_N,
};
use ttc_core::{LyapunovConfig, LyapunovResult};

use crate::config::{Experiment, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{ensure_dir, write_csv, write_json, write_pairs};

/// Reduction discrepancies above this are reported as a failed check.
pub const REDUCTION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub summary: Value,
}

pub fn run_experiment(cfg: &RunConfig) -> CliResult<RunOutcome> {
    ensure_dir(&cfg.output_dir)?;
    let started = Instant::now();
    let (files, summary) = match cfg.experiment {
        Experiment::Eigenphases => eigenphases(cfg)?,
        Experiment::SpacingRatio => spacing_ratio(cfg)?,
        Experiment::Survival => survival(cfg)?,
        Experiment::BasisSurvival => basis_survival(cfg)?,
        Experiment::Lyapunov => lyapunov(cfg)?,
        Experiment::PhasePortrait => portrait(cfg)?,
        Experiment::VerifyReduction => reduction(cfg)?,
        Experiment::RmtRefs => rmt_refs(cfg)?,
    };
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = json!({
        "experiment": cfg.experiment.name(),
        "label": cfg.label,
        "preset": cfg.preset,
        "seed": cfg.seed,
        "code_version": env!("CARGO_PKG_VERSION"),
        "wall_time_s": started.elapsed().as_secs_f64(),
        "timestamp_unix": timestamp,
        "config": cfg,
        "rmt_references": rmt_saturation(cfg.params.dim())?,
        "desk_scale": cfg.desk_scale,
        "outputs": files.iter().map(|f| f.file_name().map(|n| n.to_string_lossy().into_owned())).collect::<Vec<_>>(),
        "summary": summary,
    });
    let meta_path = cfg.output_dir.join(format!("{}.meta.json", cfg.stem()));
    let mut files = files;
    files.push(write_json(&meta_path, &meta)?);
    Ok(RunOutcome { files, summary })
}

type Produced = (Vec<PathBuf>, Value);

fn csv_path(cfg: &RunConfig) -> PathBuf {
    cfg.output_dir.join(format!("{}.csv", cfg.stem()))
}

fn eigenphases(cfg: &RunConfig) -> CliResult<Produced> {
    let rows = eigenphase_sweep(&cfg.params, &cfg.t_grid())?;
    let mut header = vec!["t".to_string()];
    header.extend((1..=cfg.params.dim()).map(|i| format!("theta_{i}")));
    let path = write_csv(
        &csv_path(cfg),
        &header,
        rows.iter().map(|r| std::iter::once(r.t).chain(r.eigenphases.iter().copied()).collect()),
    )?;
    Ok((vec![path], json!({ "rows": rows.len(), "dim": cfg.params.dim() })))
}

fn spacing_ratio(cfg: &RunConfig) -> CliResult<Produced> {
    let rows = mean_r_sweep(&cfg.params, &cfg.t_grid(), cfg.topology)?;
    let path = write_csv(&csv_path(cfg), &["t", "mean_r"], rows.iter().map(|r| vec![r.t, r.mean_r]))?;
    let late: Vec<f64> = rows.iter().filter(|r| r.t * cfg.params.alpha_x >= 2.5).map(|r| r.mean_r).collect();
    let late_mean = (!late.is_empty()).then(|| late.iter().sum::<f64>() / late.len() as f64);
    Ok((
        vec![path],
        json!({ "rows": rows.len(), "mean_r_late": late_mean, "r_coe": ttc_core::spectral::r_coe(), "topology": cfg.topology }),
    ))
}

fn survival(cfg: &RunConfig) -> CliResult<Produced> {
    let spec = cfg.state.spec(cfg.params.n);
    let state = make_state(&spec, &cfg.params.basis()?)?;
    let series = survival_probability(&cfg.params, &state, &cfg.t_grid(), cfg.n, cfg.window)?;
    let path = write_csv(
        &csv_path(cfg),
        &["t", "P"],
        series.t_grid.iter().zip(&series.values).map(|(&t, &p)| vec![t, p]),
    )?;
    Ok((vec![path], json!({ "state": spec.name(), "long_time_avg": series.long_time_avg, "window": series.window })))
}

fn basis_survival(cfg: &RunConfig) -> CliResult<Produced> {
    let basis = make_basis(cfg.basis_label(), &cfg.params.basis()?)?;
    let series = basis_averaged_survival(&cfg.params, &basis, &cfg.t_grid(), cfg.n, cfg.window)?;
    let path = write_csv(
        &csv_path(cfg),
        &["t", "P_bar"],
        series.t_grid.iter().zip(&series.values).map(|(&t, &p)| vec![t, p]),
    )?;
    Ok((vec![path], json!({ "basis": cfg.basis, "long_time_avg": series.long_time_avg, "window": series.window })))
}

fn lyapunov_row(r: &LyapunovResult) -> [f64; 3] {
    [r.lambda_max, r.lambda_std, r.n_discarded as f64]
}

fn lyapunov(cfg: &RunConfig) -> CliResult<Produced> {
    let k = &cfg.lyapunov;
    let config = |period: f64| LyapunovConfig { dt: k.dt, ..LyapunovConfig::new(period, k.n_cycles, k.n_samples, cfg.seed, k.mode) };
    let path = csv_path(cfg);
    let (path, points) = if let Some(sweep) = k.kz_sweep {
        let results = sweep
            .values()
            .into_iter()
            .map(|kz| Ok((kz, lyapunov_max(&cfg.params.with_kz(kz), &config(k.period))?)))
            .collect::<CliResult<Vec<_>>>()?;
        let rows = results.iter().map(|(kz, r)| [vec![*kz, k.period], lyapunov_row(r).to_vec()].concat());
        let file = write_csv(&path, &["kz", "T", "lambda_mean", "lambda_std", "n_discarded"], rows)?;
        (file, results.iter().map(|(kz, r)| json!({ "kz": kz, "lambda": r.lambda_max })).collect::<Vec<_>>())
    } else {
        let periods = k.period_sweep.map(|s| s.values()).unwrap_or_else(|| vec![k.period]);
        let results = periods
            .into_iter()
            .map(|t| Ok((t, lyapunov_max(&cfg.params, &config(t))?)))
            .collect::<CliResult<Vec<_>>>()?;
        let rows = results.iter().map(|(t, r)| [vec![*t], lyapunov_row(r).to_vec()].concat());
        let file = write_csv(&path, &["T", "lambda_mean", "lambda_std", "n_discarded"], rows)?;
        (file, results.iter().map(|(t, r)| json!({ "T": t, "lambda": r.lambda_max })).collect::<Vec<_>>())
    };
    Ok((vec![path], json!({ "points": points })))
}

fn portrait(cfg: &RunConfig) -> CliResult<Produced> {
    let initials = PortraitInitial::reference_set(cfg.seed);
    let orbits = phase_portrait(&cfg.params, cfg.lyapunov.period, cfg.lyapunov.n_cycles, &initials, cfg.lyapunov.dt)?;
    let mut files = Vec::new();
    let mut spans = serde_json::Map::new();
    for orbit in &orbits {
        let name = match orbit.initial {
            PortraitInitial::SzPolarized => "sz",
            PortraitInitial::SxPolarized => "sx",
            PortraitInitial::Random { .. } => "random",
            PortraitInitial::Point { .. } => "point",
        };
        let path = cfg.output_dir.join(format!("{}-{name}.csv", cfg.stem()));
        files.push(write_csv(
            &path,
            &["cycle", "half", "z", "phi"],
            orbit.rows.iter().map(|r| vec![r.cycle as f64, f64::from(r.half), r.z, r.phi]),
        )?);
        let (lo, hi) = orbit.rows.iter().fold((1.0f64, -1.0f64), |(lo, hi), r| (lo.min(r.z), hi.max(r.z)));
        spans.insert(name.to_string(), json!({ "z_min": lo, "z_max": hi, "start": orbit.initial.label() }));
    }
    Ok((files, json!({ "orbits": spans })))
}

fn reduction(cfg: &RunConfig) -> CliResult<Produced> {
    if cfg.params.n > REDUCTION_MAX_N {
        return Err(CliError::usage(format!("verify-reduction supports N <= {REDUCTION_MAX_N} (got {})", cfg.params.n)));
    }
    let state = make_state(&cfg.state.spec(cfg.params.n), &cfg.params.basis()?)?;
    let rows = verify_reduction(&cfg.params, &state, &cfg.t_grid(), cfg.n, cfg.dot_sector)?;
    let path = write_csv(
        &csv_path(cfg),
        &["t", "full_re", "full_im", "reduced_re", "reduced_im", "discrepancy", "modulus_discrepancy"],
        rows.iter().map(|r| vec![r.t, r.full.re, r.full.im, r.reduced.re, r.reduced.im, r.discrepancy, r.modulus_discrepancy]),
    )?;
    let worst = rows.iter().map(|r| r.discrepancy).fold(0.0, f64::max);
    if worst >= REDUCTION_TOLERANCE {
        return Err(CliError::Contract(format!(
            "reduced correlator differs from the full one by {worst:.3e} (tolerance {REDUCTION_TOLERANCE:e}); rows in {}",
            path.display()
        )));
    }
    Ok((vec![path], json!({ "max_discrepancy": worst, "dot_sector": cfg.dot_sector })))
}

fn rmt_refs(cfg: &RunConfig) -> CliResult<Produced> {
    let r = rmt_saturation(cfg.params.dim())?;
    let rows = [
        ("dim", r.dim as f64),
        ("ipr_cue", r.ipr_cue),
        ("ipr_coe", r.ipr_coe),
        ("p_cue", r.p_cue),
        ("p_coe", r.p_coe),
        ("t_th_cue", r.t_th_cue),
        ("t_th_coe", r.t_th_coe),
        ("r_coe", ttc_core::spectral::r_coe()),
        ("r_poisson", ttc_core::spectral::r_poisson()),
    ];
    let path = write_pairs(&csv_path(cfg), ["quantity", "value"], &rows)?;
    Ok((vec![path], serde_json::to_value(r)?))
}

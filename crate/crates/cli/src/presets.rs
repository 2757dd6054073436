//! Figure presets. Each expands into one run per figure panel.

use crate::config::{BasisArg, Cli, Experiment, ModeArg, StateArg, Sweep};
use crate::error::{CliError, CliResult};

pub const NAMES: [&str; 6] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7"];

#[derive(Debug, Clone)]
pub struct Panel {
    pub label: Option<String>,
    pub settings: Cli,
    pub desk_scale: Vec<String>,
}

fn panel(label: &str, settings: Cli) -> Panel {
    Panel { label: Some(label.to_string()), settings, desk_scale: Vec::new() }
}

fn base(experiment: Experiment, preset: &str) -> Cli {
    Cli {
        experiment: Some(experiment),
        preset: Some(preset.to_string()),
        kz: Some(3.0),
        alpha_x: Some(1.0),
        alpha_z: Some(0.01),
        ..Cli::default()
    }
}

/// Halves `N` and `n` of a survival panel.
fn shrink_quantum(p: &mut Panel) {
    let (big_n, n) = (p.settings.n_particles.unwrap_or(60), p.settings.order.unwrap_or(50));
    p.settings.n_particles = Some(big_n / 2);
    p.settings.order = Some((n / 2).max(1));
    p.desk_scale.push(format!("N {big_n} -> {}", big_n / 2));
    p.desk_scale.push(format!("n {n} -> {}", (n / 2).max(1)));
}

/// Mean-field runs do not depend on `N`; desk scale cuts the ensemble instead.
fn shrink_ensemble(p: &mut Panel) {
    let samples = p.settings.n_samples.unwrap_or(500);
    p.settings.n_samples = Some(500.min(samples));
    p.desk_scale.push(format!("n_samples {samples} -> {}", 500.min(samples)));
}

pub fn expand(name: &str, desk_scale: bool) -> CliResult<Vec<Panel>> {
    let mut panels = match name {
        "fig2" => [1.0, 5.0]
            .iter()
            .map(|&t| {
                let s = Cli { period: Some(t), n_cycles: Some(50), n_particles: Some(100), ..base(Experiment::PhasePortrait, name) };
                panel(&format!("T{t}"), s)
            })
            .collect(),
        "fig3" => vec![Panel {
            label: None,
            settings: Cli {
                mode: Some(ModeArg::Stroboscopic),
                period_sweep: Some(Sweep { lo: 0.5, hi: 6.0, count: 12 }),
                n_cycles: Some(20),
                n_samples: Some(1500),
                n_particles: Some(100),
                ..base(Experiment::Lyapunov, name)
            },
            desk_scale: Vec::new(),
        }],
        "fig4" => vec![
            panel("a", Cli { n_particles: Some(16), ..base(Experiment::Eigenphases, name) }),
            panel("b", Cli { n_particles: Some(100), ..base(Experiment::SpacingRatio, name) }),
        ],
        "fig5" => [("sx", BasisArg::Sx), ("random", BasisArg::Random), ("sz", BasisArg::Sz)]
            .into_iter()
            .map(|(label, basis)| {
                let s = Cli { n_particles: Some(60), order: Some(50), basis: Some(basis), ..base(Experiment::BasisSurvival, name) };
                panel(label, s)
            })
            .collect(),
        "fig6" => {
            let kz = Some(Sweep { lo: 0.0, hi: 6.0, count: 13 });
            vec![
                panel(
                    "full",
                    Cli {
                        mode: Some(ModeArg::FullContinuous),
                        kz_sweep: kz,
                        n_samples: Some(1500),
                        n_particles: Some(100),
                        ..base(Experiment::Lyapunov, name)
                    },
                ),
                panel(
                    "kicked",
                    Cli {
                        mode: Some(ModeArg::Stroboscopic),
                        kz_sweep: kz,
                        period: Some(5.0),
                        n_cycles: Some(20),
                        n_samples: Some(1500),
                        n_particles: Some(100),
                        ..base(Experiment::Lyapunov, name)
                    },
                ),
            ]
        }
        "fig7" => [("x", StateArg::XPolarized), ("gaussian", StateArg::Gaussian), ("fock", StateArg::Fock(None))]
            .into_iter()
            .map(|(label, state)| {
                let s = Cli { n_particles: Some(200), order: Some(50), state: Some(state), ..base(Experiment::Survival, name) };
                panel(label, s)
            })
            .collect(),
        other => {
            return Err(CliError::usage(format!("unknown preset `{other}` (expected one of {})", NAMES.join(", "))))
        }
    };
    if desk_scale {
        for p in &mut panels {
            match name {
                "fig5" | "fig7" => shrink_quantum(p),
                "fig3" | "fig6" => shrink_ensemble(p),
                _ => {}
            }
        }
    }
    Ok(panels)
}

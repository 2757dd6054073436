//! Benettin estimates of the maximal Lyapunov exponent and phase portraits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spin_algebra::wrap_phase;

use super::integrator::{evolve_full_model, evolve_h2, evolve_planar, stroboscopic_orbit, DEFAULT_DT, POLE_GUARD};
use super::{great_circle_distance, ClassicalState, FullClassicalState, Planar};

pub const DEFAULT_D0: f64 = 1e-8;
/// Default `T` for the continuous full-model runs: 20 renormalisation intervals
/// of `2T` give a total time of 400, long enough for the `ln t / t` shear
/// contribution of regular orbits to drop below 0.02.
pub const FULL_MODE_DEFAULT_PERIOD: f64 = 10.0;
/// Distance of the `S_z`-polarised portrait start from the pole.
pub const POLE_OFFSET: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LyapunovMode {
    /// Alternating `ℋ_2` / `ℋ_1` kicks of length `T` each.
    #[default]
    Stroboscopic,
    /// The time-independent full Hamiltonian, renormalised every `2T`.
    FullContinuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovConfig {
    /// Kick length `T`; one renormalisation interval is `2T`.
    pub period: f64,
    pub n_cycles: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub dt: f64,
    pub d0: f64,
    pub mode: LyapunovMode,
}

impl LyapunovConfig {
    pub fn new(period: f64, n_cycles: usize, n_samples: usize, seed: u64, mode: LyapunovMode) -> Self {
        Self { period, n_cycles, n_samples, seed, dt: DEFAULT_DT, d0: DEFAULT_D0, mode }
    }

    fn validate(&self) -> Result<()> {
        if !(self.period.is_finite() && self.period > 0.0) {
            return Err(Error::InvalidParameter { name: "period", reason: format!("must be > 0 (got {})", self.period) });
        }
        if self.n_cycles < 1 {
            return Err(Error::InvalidParameter { name: "n_cycles", reason: "must be at least 1".into() });
        }
        if self.n_samples < 1 {
            return Err(Error::InvalidParameter { name: "n_samples", reason: "must be at least 1".into() });
        }
        if !(self.d0 > 0.0 && self.d0 < 1e-2) {
            return Err(Error::InvalidParameter { name: "d0", reason: format!("must lie in (0, 1e-2) (got {})", self.d0) });
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter { name: "dt", reason: format!("must be positive (got {})", self.dt) });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovResult {
    /// Mean over the retained samples, in units of `alpha_x`.
    pub lambda_max: f64,
    /// Sample standard deviation across initial states.
    pub lambda_std: f64,
    pub n_cycles: usize,
    /// Samples that entered the average.
    pub n_samples: usize,
    /// Samples dropped because a trajectory hit the coordinate pole.
    pub n_discarded: usize,
    pub kick_period: f64,
}

fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Companion point at great-circle distance `d0` from `reference`, displaced
/// along the tangent direction at angle `theta`.
fn displaced(reference: ClassicalState, theta: f64, d0: f64) -> Option<ClassicalState> {
    let s = (1.0 - reference.z * reference.z).sqrt();
    let (dz, dphi) = (d0 * theta.cos(), d0 * theta.sin() / s);
    rescaled(reference, dz, dphi, d0)
}

/// `reference + f · (dz, dphi)` with `f` chosen so the distance is `d0`.
fn rescaled(reference: ClassicalState, dz: f64, dphi: f64, d0: f64) -> Option<ClassicalState> {
    let trial = ClassicalState { z: reference.z + dz, phi: wrap_phase(reference.phi + dphi) };
    let d = great_circle_distance(reference, trial);
    if !(d > 0.0 && d.is_finite()) {
        return None;
    }
    let f = d0 / d;
    let out = ClassicalState { z: reference.z + f * dz, phi: wrap_phase(reference.phi + f * dphi) };
    (out.z.abs() < POLE_GUARD).then_some(out)
}

fn renormalize(reference: ClassicalState, companion: ClassicalState, d0: f64) -> Option<(f64, ClassicalState)> {
    let d = great_circle_distance(reference, companion);
    if !(d > 0.0 && d.is_finite()) {
        return None;
    }
    let next = rescaled(reference, companion.z - reference.z, wrap_phase(companion.phi - reference.phi), d0)?;
    Some(((d / d0).ln(), next))
}

fn stroboscopic_sample(p: &ModelParams, cfg: &LyapunovConfig, rng: &mut ChaCha8Rng) -> Option<f64> {
    let z = 2.0 * rng.random::<f64>() - 1.0;
    let phi = PI * (2.0 * rng.random::<f64>() - 1.0);
    let theta = 2.0 * PI * rng.random::<f64>();
    let h1 = Planar::h1(p);
    let mut a = ClassicalState { z, phi };
    if !(z.abs() < POLE_GUARD) {
        return None;
    }
    let mut b = displaced(a, theta, cfg.d0)?;
    let mut acc = 0.0;
    for _ in 0..cfg.n_cycles {
        a = evolve_planar(&h1, evolve_h2(p, a, cfg.period), cfg.period, cfg.dt, 0.0).ok()?;
        b = evolve_planar(&h1, evolve_h2(p, b, cfg.period), cfg.period, cfg.dt, 0.0).ok()?;
        let (log_growth, next) = renormalize(a, b, cfg.d0)?;
        acc += log_growth;
        b = next;
    }
    Some(acc / (cfg.n_cycles as f64 * 2.0 * cfg.period))
}

fn continuous_sample(p: &ModelParams, cfg: &LyapunovConfig, rng: &mut ChaCha8Rng) -> Option<f64> {
    let z = 2.0 * rng.random::<f64>() - 1.0;
    let phi = PI * (2.0 * rng.random::<f64>() - 1.0);
    let theta = 2.0 * PI * rng.random::<f64>();
    let y = 2.0 * rng.random::<f64>() - 1.0;
    let varphi = PI * (2.0 * rng.random::<f64>() - 1.0);
    if !(z.abs() < POLE_GUARD) {
        return None;
    }
    let mut a = FullClassicalState { z, phi, y, varphi };
    let b0 = displaced(a.boson(), theta, cfg.d0)?;
    let mut b = FullClassicalState { z: b0.z, phi: b0.phi, ..a };
    let interval = 2.0 * cfg.period;
    let mut acc = 0.0;
    for _ in 0..cfg.n_cycles {
        a = evolve_full_model(p, a, interval, cfg.dt).ok()?;
        b = evolve_full_model(p, b, interval, cfg.dt).ok()?;
        let (log_growth, next) = renormalize(a.boson(), b.boson(), cfg.d0)?;
        acc += log_growth;
        b = FullClassicalState { z: next.z, phi: next.phi, ..a };
    }
    Some(acc / (cfg.n_cycles as f64 * interval))
}

/// Ensemble-averaged maximal Lyapunov exponent (two-trajectory method).
///
/// Initial states are uniform in `z ∈ (-1, 1)`, `φ ∈ [-π, π)` (and, for the
/// full model, `y ∈ [-1, 1]`, uniform dot phase). Sample `i` draws from stream
/// `i` of a ChaCha generator keyed by `seed`, so results do not depend on the
/// thread count.
pub fn lyapunov_max(p: &ModelParams, cfg: &LyapunovConfig) -> Result<LyapunovResult> {
    p.validate()?;
    cfg.validate()?;
    let samples: Vec<Option<f64>> = (0..cfg.n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, i);
            match cfg.mode {
                LyapunovMode::Stroboscopic => stroboscopic_sample(p, cfg, &mut rng),
                LyapunovMode::FullContinuous => continuous_sample(p, cfg, &mut rng),
            }
        })
        .collect();
    let kept: Vec<f64> = samples.iter().flatten().copied().collect();
    if kept.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let k = kept.len() as f64;
    let mean = kept.iter().sum::<f64>() / k;
    let var = if kept.len() > 1 { kept.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0) } else { 0.0 };
    Ok(LyapunovResult {
        lambda_max: mean,
        lambda_std: var.sqrt(),
        n_cycles: cfg.n_cycles,
        n_samples: kept.len(),
        n_discarded: cfg.n_samples - kept.len(),
        kick_period: cfg.period,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PortraitInitial {
    /// Spin up along `S_z`, regularised to `z = 1 - 1e-6`, `φ = 0`.
    SzPolarized,
    /// Spin up along `S_x`: `z = 0`, `φ = 0`.
    SxPolarized,
    /// Uniform random point drawn from `seed`.
    Random { seed: u64 },
    Point { z: f64, phi: f64 },
}

impl PortraitInitial {
    /// The three starting points used for the published portraits.
    pub fn reference_set(seed: u64) -> Vec<Self> {
        vec![Self::SzPolarized, Self::SxPolarized, Self::Random { seed }]
    }

    pub fn label(&self) -> String {
        match self {
            Self::SzPolarized => "sz_polarized".into(),
            Self::SxPolarized => "sx_polarized".into(),
            Self::Random { seed } => format!("random({seed})"),
            Self::Point { z, phi } => format!("point({z},{phi})"),
        }
    }

    pub fn state(&self) -> ClassicalState {
        match *self {
            Self::SzPolarized => ClassicalState::new(1.0 - POLE_OFFSET, 0.0),
            Self::SxPolarized => ClassicalState::new(0.0, 0.0),
            Self::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let z = 2.0 * rng.random::<f64>() - 1.0;
                let phi = PI * (2.0 * rng.random::<f64>() - 1.0);
                ClassicalState::new(z, phi)
            }
            Self::Point { z, phi } => ClassicalState::new(z, phi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitRow {
    /// 0 for the initial state, then 1-based kick index.
    pub cycle: usize,
    /// 0 for the initial state, 1 after the `ℋ_2` half, 2 after the `ℋ_1` half.
    pub half: u8,
    pub z: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PortraitOrbit {
    pub initial: PortraitInitial,
    pub rows: Vec<OrbitRow>,
}

/// Stroboscopic orbits (start plus every half-kick) for each starting point.
pub fn phase_portrait(
    p: &ModelParams,
    period: f64,
    n_cycles: usize,
    initials: &[PortraitInitial],
    dt: f64,
) -> Result<Vec<PortraitOrbit>> {
    p.validate()?;
    initials
        .par_iter()
        .map(|init| {
            let s0 = init.state();
            let orbit = stroboscopic_orbit(p, s0, period, n_cycles, dt)?;
            let mut rows = Vec::with_capacity(orbit.len() + 1);
            rows.push(OrbitRow { cycle: 0, half: 0, z: s0.z, phi: s0.phi });
            for (k, s) in orbit.iter().enumerate() {
                rows.push(OrbitRow { cycle: k / 2 + 1, half: (k % 2 + 1) as u8, z: s.z, phi: s.phi });
            }
            Ok(PortraitOrbit { initial: *init, rows })
        })
        .collect()
}

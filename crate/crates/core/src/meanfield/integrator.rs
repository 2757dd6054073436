//! Fixed-step fourth-order Runge-Kutta propagation of the mean-field equations.

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spin_algebra::wrap_phase;

use super::{ClassicalState, FullClassicalState, Planar};

pub const DEFAULT_DT: f64 = 1e-3;
/// Trajectories reaching `|z| >= POLE_GUARD` are rejected.
pub const POLE_GUARD: f64 = 1.0 - 1e-12;

fn check_step(dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter { name: "dt", reason: format!("must be positive (got {dt})") });
    }
    Ok(())
}

fn check_duration(duration: f64) -> Result<()> {
    if !duration.is_finite() {
        return Err(Error::InvalidParameter { name: "duration", reason: "must be finite".into() });
    }
    Ok(())
}

/// Number of equal steps no longer than `dt` covering `|duration|`.
fn step_count(duration: f64, dt: f64) -> usize {
    (duration.abs() / dt - 1e-9).ceil().max(0.0) as usize
}

/// Exact `ℋ_2` flow: `z` fixed, `φ += (k_z z/2 + α_z/2) · duration`.
pub fn evolve_h2(p: &ModelParams, state: ClassicalState, duration: f64) -> ClassicalState {
    let rate = p.kz * state.z / 2.0 + p.alpha_z / 2.0;
    ClassicalState { z: state.z, phi: wrap_phase(state.phi + rate * duration) }
}

/// Flow of `ℋ` on the Bloch vector `v = (x, y, z)`: `v' = ∇ℋ × v`, with
/// `ℋ = a z² + b z + c x`. This is the canonical `(z, φ)` flow written in
/// coordinates without the pole singularity. The optional fourth component
/// carries the dot phase, whose rate is `dot.0 · x - dot.1`.
#[inline]
fn bloch_rhs(h: &Planar, v: [f64; 4], dot: (f64, f64)) -> [f64; 4] {
    let gz = 2.0 * h.a * v[2] + h.b;
    [-gz * v[1], gz * v[0] - h.c * v[2], h.c * v[1], dot.0 * v[0] - dot.1]
}

#[inline]
fn axpy(v: [f64; 4], s: f64, k: [f64; 4]) -> [f64; 4] {
    [v[0] + s * k[0], v[1] + s * k[1], v[2] + s * k[2], v[3] + s * k[3]]
}

/// RK4 on the Bloch vector; returns `(z, φ, dot phase)`. `t0` only labels pole errors.
fn integrate(
    h: &Planar,
    state: ClassicalState,
    varphi: f64,
    dot: (f64, f64),
    duration: f64,
    dt: f64,
    t0: f64,
) -> Result<(ClassicalState, f64)> {
    check_step(dt)?;
    check_duration(duration)?;
    if !(state.z.abs() < POLE_GUARD) {
        return Err(Error::PoleProximity { z: state.z, t: t0 });
    }
    let steps = step_count(duration, dt);
    if steps == 0 {
        return Ok((state, varphi));
    }
    let hstep = duration / steps as f64;
    let b = state.bloch_vector();
    let mut v = [b[0], b[1], b[2], varphi];
    for k in 0..steps {
        let k1 = bloch_rhs(h, v, dot);
        let k2 = bloch_rhs(h, axpy(v, 0.5 * hstep, k1), dot);
        let k3 = bloch_rhs(h, axpy(v, 0.5 * hstep, k2), dot);
        let k4 = bloch_rhs(h, axpy(v, hstep, k3), dot);
        for i in 0..4 {
            v[i] += hstep / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        for x in &mut v[..3] {
            *x /= norm;
        }
        if !(v[2].abs() < POLE_GUARD) {
            return Err(Error::PoleProximity { z: v[2], t: t0 + hstep * (k + 1) as f64 });
        }
    }
    Ok((ClassicalState { z: v[2], phi: v[1].atan2(v[0]) }.wrapped(), wrap_phase(v[3])))
}

pub(crate) fn evolve_planar(h: &Planar, state: ClassicalState, duration: f64, dt: f64, t0: f64) -> Result<ClassicalState> {
    Ok(integrate(h, state, 0.0, (0.0, 0.0), duration, dt, t0)?.0)
}

/// Propagates under `ℋ_1` for `duration` (negative durations run backwards).
pub fn evolve_h1(p: &ModelParams, state: ClassicalState, duration: f64, dt: f64) -> Result<ClassicalState> {
    evolve_planar(&Planar::h1(p), state, duration, dt, 0.0)
}

/// Propagates the four-variable mean-field system of the full Hamiltonian.
///
/// `y` is a constant of motion and enters only through the effective hopping;
/// the dot phase follows `varphi' = (β/4) √(1-z²) cos φ - Δ/(4N)`.
pub fn evolve_full_model(
    p: &ModelParams,
    state: FullClassicalState,
    duration: f64,
    dt: f64,
) -> Result<FullClassicalState> {
    let dot = (p.beta / 4.0, p.delta / (4.0 * p.n as f64));
    let (b, varphi) = integrate(&Planar::full(p, state.y), state.boson(), state.varphi, dot, duration, dt, 0.0)?;
    Ok(FullClassicalState { z: b.z, phi: b.phi, y: state.y, varphi })
}

/// Alternates `ℋ_2` then `ℋ_1`, each for `period`, recording the state after
/// every half-kick (`2 · n_cycles` entries, the initial state excluded).
pub fn stroboscopic_orbit(
    p: &ModelParams,
    initial: ClassicalState,
    period: f64,
    n_cycles: usize,
    dt: f64,
) -> Result<Vec<ClassicalState>> {
    if n_cycles < 1 {
        return Err(Error::InvalidParameter { name: "n_cycles", reason: "must be at least 1".into() });
    }
    if !(period.is_finite() && period >= 0.0) {
        return Err(Error::InvalidParameter { name: "period", reason: format!("must be >= 0 (got {period})") });
    }
    let h1 = Planar::h1(p);
    let mut out = Vec::with_capacity(2 * n_cycles);
    let mut s = initial;
    for cycle in 0..n_cycles {
        s = evolve_h2(p, s, period);
        out.push(s);
        s = evolve_planar(&h1, s, period, dt, (2 * cycle + 1) as f64 * period)?;
        out.push(s);
    }
    Ok(out)
}

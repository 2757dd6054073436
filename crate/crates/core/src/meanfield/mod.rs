//! Mean-field (large-N) dynamics on the Bloch sphere.
//!
//! `z` is the scaled number difference and `phi` the relative phase; they are
//! canonical with `phi' = ∂H/∂z`, `z' = -∂H/∂phi`. Every Hamiltonian used here
//! has the form `a z^2 + b z + c √(1-z^2) cos(phi)` plus dot terms.

pub mod integrator;
pub mod lyapunov;

use serde::{Deserialize, Serialize};

use crate::model::ModelParams;
use crate::spin_algebra::wrap_phase;

pub use integrator::{evolve_full_model, evolve_h1, evolve_h2, stroboscopic_orbit, DEFAULT_DT, POLE_GUARD};
pub use lyapunov::{
    lyapunov_max, phase_portrait, LyapunovConfig, FULL_MODE_DEFAULT_PERIOD, LyapunovMode, LyapunovResult, OrbitRow, PortraitInitial,
    PortraitOrbit,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub z: f64,
    pub phi: f64,
}

impl ClassicalState {
    pub fn new(z: f64, phi: f64) -> Self {
        Self { z, phi: wrap_phase(phi) }
    }

    fn wrapped(self) -> Self {
        Self { z: self.z, phi: wrap_phase(self.phi) }
    }

    /// Unit vector `(√(1-z²) cos φ, √(1-z²) sin φ, z)`.
    pub fn bloch_vector(&self) -> [f64; 3] {
        let s = (1.0 - self.z * self.z).max(0.0).sqrt();
        let (sin, cos) = self.phi.sin_cos();
        [s * cos, s * sin, self.z]
    }
}

/// Boson coordinates plus the dot's population difference `y` and phase `varphi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullClassicalState {
    pub z: f64,
    pub phi: f64,
    pub y: f64,
    pub varphi: f64,
}

impl FullClassicalState {
    pub fn new(z: f64, phi: f64, y: f64, varphi: f64) -> Self {
        Self { z, phi: wrap_phase(phi), y, varphi: wrap_phase(varphi) }
    }

    pub fn boson(&self) -> ClassicalState {
        ClassicalState { z: self.z, phi: self.phi }
    }
}

/// `a z^2 + b z + c √(1-z^2) cos φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Planar {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Planar {
    /// `ℋ_1 = -(k_z/4) z² + (α_x/2) √(1-z²) cos φ - (α_z/2) z`.
    pub fn h1(p: &ModelParams) -> Self {
        Self { a: -p.kz / 4.0, b: -p.alpha_z / 2.0, c: p.alpha_x / 2.0 }
    }

    /// `ℋ_2 = (k_z/4) z² + (α_z/2) z`.
    pub fn h2(p: &ModelParams) -> Self {
        Self { a: p.kz / 4.0, b: p.alpha_z / 2.0, c: 0.0 }
    }

    /// Boson part of the full Hamiltonian at fixed dot population `y`.
    pub fn full(p: &ModelParams, y: f64) -> Self {
        Self { a: p.kz / 4.0, b: p.alpha_z / 2.0, c: -p.alpha_x / 2.0 + p.beta / 2.0 * (1.0 + y / 2.0) }
    }

    pub fn energy(&self, s: ClassicalState) -> f64 {
        let root = (1.0 - s.z * s.z).max(0.0).sqrt();
        self.a * s.z * s.z + self.b * s.z + self.c * root * s.phi.cos()
    }

    /// `(z', phi')`.
    #[cfg(test)]
    pub fn rhs(&self, z: f64, phi: f64) -> (f64, f64) {
        let root = (1.0 - z * z).max(0.0).sqrt();
        let (sin, cos) = phi.sin_cos();
        let zdot = self.c * root * sin;
        let phidot = 2.0 * self.a * z + self.b - if root > 0.0 { self.c * z * cos / root } else { 0.0 };
        (zdot, phidot)
    }
}

pub fn energy_h1(p: &ModelParams, s: ClassicalState) -> f64 {
    Planar::h1(p).energy(s)
}

pub fn energy_h2(p: &ModelParams, s: ClassicalState) -> f64 {
    Planar::h2(p).energy(s)
}

/// `ℋ = (k_z/4) z² - (α_x/2) √(1-z²) cos φ + (α_z/2) z - (Δ/2N)(1 + y/2) + (β/2) √(1-z²) cos φ (1 + y/2)`.
pub fn energy_full(p: &ModelParams, s: FullClassicalState) -> f64 {
    Planar::full(p, s.y).energy(s.boson()) - p.delta / (2.0 * p.n as f64) * (1.0 + s.y / 2.0)
}

/// Great-circle distance between two points on the Bloch sphere.
///
/// Equal to `arccos[z_1 z_2 + √((1-z_1²)(1-z_2²)) cos(φ_1 - φ_2)]`, evaluated
/// through the chord length so that separations near `1e-8` keep full precision.
pub fn great_circle_distance(a: ClassicalState, b: ClassicalState) -> f64 {
    let (u, v) = (a.bloch_vector(), b.bloch_vector());
    let chord = ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2) + (u[2] - v[2]).powi(2)).sqrt();
    2.0 * (chord / 2.0).min(1.0).asin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn distance_properties() {
        let a = ClassicalState::new(0.3, 1.0);
        let b = ClassicalState::new(-0.6, -2.5);
        assert_eq!(great_circle_distance(a, a), 0.0);
        assert!((great_circle_distance(a, b) - great_circle_distance(b, a)).abs() < 1e-15);
        let n = ClassicalState::new(1.0, 0.3);
        let s = ClassicalState::new(-1.0, -1.2);
        assert!((great_circle_distance(n, s) - PI).abs() < 1e-12);
        let arccos = (a.z * b.z + ((1.0 - a.z * a.z) * (1.0 - b.z * b.z)).sqrt() * (a.phi - b.phi).cos()).acos();
        assert!((great_circle_distance(a, b) - arccos).abs() < 1e-12);
    }

    #[test]
    fn distance_resolves_tiny_separations() {
        let a = ClassicalState::new(0.0, 0.0);
        let b = ClassicalState::new(0.0, 1e-9);
        assert!((great_circle_distance(a, b) / 1e-9 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn energies() {
        let p = ModelParams::paper_default(10);
        let s = ClassicalState::new(0.5, 0.0);
        let want = -0.75 / 4.0 + 0.5 * (0.75f64).sqrt() - 0.0025;
        assert!((energy_h1(&p, s) - want).abs() < 1e-15);
        assert!((energy_h2(&p, s) - (0.75 / 4.0 + 0.0025)).abs() < 1e-15);
        let full = FullClassicalState::new(0.5, 0.0, 0.0, 0.0);
        let hb = 0.75 / 4.0 - 0.5 * (0.75f64).sqrt() + 0.0025;
        assert!((energy_full(&p, full) - (hb + 0.25 * (0.75f64).sqrt())).abs() < 1e-15);
    }

    #[test]
    fn vector_field_matches_energy_gradient() {
        let p = ModelParams::paper_default(10).with_delta(0.2);
        let h = Planar::full(&p, 0.4);
        let (z, phi) = (0.37, 2.1);
        let eps = 1e-6;
        let e = |z: f64, phi: f64| h.energy(ClassicalState { z, phi });
        let dz = (e(z + eps, phi) - e(z - eps, phi)) / (2.0 * eps);
        let dphi = (e(z, phi + eps) - e(z, phi - eps)) / (2.0 * eps);
        let (zdot, phidot) = h.rhs(z, phi);
        assert!((phidot - dz).abs() < 1e-8);
        assert!((zdot + dphi).abs() < 1e-8);
    }
}

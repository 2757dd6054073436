//! Physical parameters and Hamiltonians of the boson + dot system.
//!
//! Energies are measured in units of the hopping `alpha_x` (default 1), times
//! in units of `1/alpha_x`.
//!
//! The composite boson ⊗ dot space uses boson index major, dot index minor:
//! composite index `2·i + s`, with `s = 0` the `σ_z = +1` dot state and
//! `s = 1` the `σ_z = -1` dot state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, kron, real, ComplexMatrix, ONE, ZERO};
use crate::spin_algebra::{build_sx, build_sz, SpinBasisSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Boson-boson interaction energy.
    pub kz: f64,
    /// Hopping energy (the energy unit).
    pub alpha_x: f64,
    /// Tilt between the two wells.
    pub alpha_z: f64,
    /// Dot level splitting.
    pub delta: f64,
    /// Boson-dot coupling.
    pub beta: f64,
    /// Boson number.
    pub n: usize,
    /// Use the general backward Hamiltonian `H_B` with `alpha_x -> alpha_x - 2 beta`
    /// instead of the `beta = alpha_x / 2` form.
    #[serde(default)]
    pub generalized_h2: bool,
}

impl ModelParams {
    /// `k_z = 3, alpha_x = 1, alpha_z = 0.01, delta = 0, beta = 1/2`.
    pub fn paper_default(n: usize) -> Self {
        Self { kz: 3.0, alpha_x: 1.0, alpha_z: 0.01, delta: 0.0, beta: 0.5, n, generalized_h2: false }
    }

    pub fn with_kz(mut self, kz: f64) -> Self {
        self.kz = kz;
        self
    }

    pub fn with_alpha_z(mut self, alpha_z: f64) -> Self {
        self.alpha_z = alpha_z;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidBasis(self.n));
        }
        let finite = [
            ("kz", self.kz),
            ("alpha_x", self.alpha_x),
            ("alpha_z", self.alpha_z),
            ("delta", self.delta),
            ("beta", self.beta),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::InvalidParameter { name, reason: format!("must be finite (got {v})") });
            }
        }
        if self.alpha_x <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "alpha_x",
                reason: format!("must be positive (got {})", self.alpha_x),
            });
        }
        Ok(())
    }

    pub fn basis(&self) -> Result<SpinBasisSpec> {
        self.validate()?;
        SpinBasisSpec::new(self.n)
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }
}

/// Diagonal of `k_z S_z^2/(N+1) + alpha_z S_z`.
pub fn interaction_diagonal(p: &ModelParams) -> Vec<f64> {
    let spec = SpinBasisSpec::new(p.n.max(1)).expect("n >= 1");
    let norm = (p.n + 1) as f64;
    spec.m_values().iter().map(|&m| p.kz * m * m / norm + p.alpha_z * m).collect()
}

fn bose_hamiltonian(p: &ModelParams, hopping: f64) -> Result<ComplexMatrix> {
    let spec = p.basis()?;
    let sx = build_sx(&spec);
    let diag = interaction_diagonal(p);
    Ok(ComplexMatrix::from_fn(spec.dim(), spec.dim(), |i, j| {
        let d = if i == j { real(diag[i]) } else { ZERO };
        d - sx[(i, j)] * hopping
    }))
}

/// `H_B = k_z S_z^2/(N+1) - alpha_x S_x + alpha_z S_z`.
pub fn build_hb(p: &ModelParams) -> Result<ComplexMatrix> {
    bose_hamiltonian(p, p.alpha_x)
}

/// Forward generator of the Floquet step, `H_1 = -H_B`.
pub fn build_h1(p: &ModelParams) -> Result<ComplexMatrix> {
    Ok(matrix::scale(&build_hb(p)?, real(-1.0)))
}

/// Backward generator of the Floquet step.
///
/// With the default `beta = alpha_x/2` choice this is `H_B` at `alpha_x = 0`,
/// i.e. diagonal. With `generalized_h2` set it is `H_B` with the hopping
/// replaced by `alpha_x - 2 beta`, valid for any `beta`.
pub fn build_h2(p: &ModelParams) -> Result<ComplexMatrix> {
    if p.generalized_h2 {
        bose_hamiltonian(p, p.alpha_x - 2.0 * p.beta)
    } else {
        p.validate()?;
        Ok(matrix::from_real_diagonal(&interaction_diagonal(p)))
    }
}

fn dot_sigma_z() -> ComplexMatrix {
    matrix::from_real_diagonal(&[1.0, -1.0])
}

fn dot_sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO })
}

/// `H_B ⊗ 1 - (Δ/2) 1 ⊗ (1 + σ_z) + β S_x ⊗ (1 + σ_z)` on the composite space.
pub fn build_full_hamiltonian(p: &ModelParams) -> Result<ComplexMatrix> {
    let spec = p.basis()?;
    let hb = build_hb(p)?;
    let id_b = matrix::identity(spec.dim());
    let id_d = matrix::identity(2);
    let one_plus_sz = &id_d + &dot_sigma_z();
    let h = kron(&hb, &id_d);
    let h = &h - &kron(&id_b, &matrix::scale(&one_plus_sz, real(p.delta / 2.0)));
    let h = &h + &kron(&matrix::scale(&build_sx(&spec), real(p.beta)), &one_plus_sz);
    Ok(h)
}

/// `1_{N+1} ⊗ σ_x`, the probe operator used for both correlator insertions.
pub fn build_dot_sigma_x(p: &ModelParams) -> Result<ComplexMatrix> {
    let spec = p.basis()?;
    Ok(kron(&matrix::identity(spec.dim()), &dot_sigma_x()))
}

/// `1_{N+1} ⊗ σ_z`.
pub fn build_dot_sigma_z(p: &ModelParams) -> Result<ComplexMatrix> {
    let spec = p.basis()?;
    Ok(kron(&matrix::identity(spec.dim()), &dot_sigma_z()))
}

/// `S_z` embedded in the composite space (used only by tests and diagnostics).
pub fn build_boson_sz(p: &ModelParams) -> Result<ComplexMatrix> {
    let spec = p.basis()?;
    Ok(kron(&build_sz(&spec), &matrix::identity(2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{commutator, frobenius_norm, hermiticity_deviation, max_abs, max_abs_diff};
    use crate::spin_algebra::build_sx;

    #[test]
    fn hb_reduces_to_hopping() {
        let p = ModelParams::paper_default(5).with_kz(0.0).with_alpha_z(0.0);
        let spec = p.basis().unwrap();
        let want = matrix::scale(&build_sx(&spec), real(-1.0));
        assert_eq!(max_abs_diff(&build_hb(&p).unwrap(), &want), 0.0);
    }

    #[test]
    fn hb_single_boson_diagonal() {
        let p = ModelParams::paper_default(1).with_alpha_z(0.0);
        let hb = build_hb(&p).unwrap();
        assert!((hb[(0, 0)].re - 0.375).abs() < 1e-15);
        assert!((hb[(1, 1)].re - 0.375).abs() < 1e-15);
    }

    #[test]
    fn hb_matches_elementwise_formula() {
        // independent evaluation of k_z m^2/(N+1) - alpha_x <m|S_x|m'> + alpha_z m
        let p = ModelParams::paper_default(4);
        let hb = build_hb(&p).unwrap();
        let s = 2.0f64;
        for i in 0..5 {
            for j in 0..5 {
                let m = i as f64 - s;
                let mp = j as f64 - s;
                let mut want = 0.0;
                if i == j {
                    want += 3.0 * m * m / 5.0 + 0.01 * m;
                }
                if j == i + 1 {
                    want -= 0.5 * (s * (s + 1.0) - m * (m + 1.0)).sqrt();
                }
                if i == j + 1 {
                    want -= 0.5 * (s * (s + 1.0) - mp * (mp + 1.0)).sqrt();
                }
                assert!((hb[(i, j)] - real(want)).norm() < 1e-14, "({i},{j})");
            }
        }
    }

    #[test]
    fn h1_is_minus_hb() {
        let p = ModelParams::paper_default(2);
        let sum = &build_h1(&p).unwrap() + &build_hb(&p).unwrap();
        assert_eq!(max_abs(&sum), 0.0);
        let h1 = build_h1(&p).unwrap();
        assert!((h1[(0, 0)].re + 0.99).abs() < 1e-14);
        assert!(hermiticity_deviation(&h1) < 1e-14);
    }

    #[test]
    fn h2_examples() {
        let p = ModelParams::paper_default(2);
        let h2 = build_h2(&p).unwrap();
        let diag: Vec<f64> = (0..3).map(|i| h2[(i, i)].re).collect();
        for (g, w) in diag.iter().zip([0.99, 0.0, 1.01]) {
            assert!((g - w).abs() < 1e-14);
        }
        let zero = build_h2(&p.with_kz(0.0).with_alpha_z(0.0)).unwrap();
        assert_eq!(max_abs(&zero), 0.0);
        let sz = build_sz(&p.basis().unwrap());
        assert_eq!(max_abs(&commutator(&h2, &sz)), 0.0);
    }

    #[test]
    fn generalized_h2_matches_default_at_half_beta() {
        let mut p = ModelParams::paper_default(6);
        let plain = build_h2(&p).unwrap();
        p.generalized_h2 = true;
        assert!(max_abs_diff(&build_h2(&p).unwrap(), &plain) < 1e-15);
        p.beta = 0.2;
        let g = build_h2(&p).unwrap();
        assert!((g[(0, 1)].re + 0.6 * 0.5 * 6f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn h1_h2_do_not_commute_with_hopping() {
        for (kz, az) in [(3.0, 0.01), (0.0, 0.2), (1.0, 0.0)] {
            let p = ModelParams::paper_default(8).with_kz(kz).with_alpha_z(az);
            let c = commutator(&build_h1(&p).unwrap(), &build_h2(&p).unwrap());
            assert!(frobenius_norm(&c) > 1e-3);
        }
    }

    #[test]
    fn full_hamiltonian_structure() {
        let p = ModelParams::paper_default(4).with_delta(0.3).with_beta(0.7);
        let h = build_full_hamiltonian(&p).unwrap();
        assert!(hermiticity_deviation(&h) < 1e-13);
        let sz = build_dot_sigma_z(&p).unwrap();
        assert!(max_abs(&commutator(&h, &sz)) < 1e-12);

        // the σ_z = -1 block is H_B
        let hb = build_hb(&p).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(h[(2 * i + 1, 2 * j + 1)], hb[(i, j)]);
            }
        }
    }

    #[test]
    fn decoupled_dot_gives_identical_blocks() {
        let p = ModelParams::paper_default(3).with_beta(0.0);
        let h = build_full_hamiltonian(&p).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(h[(2 * i, 2 * j)], h[(2 * i + 1, 2 * j + 1)]);
                assert_eq!(h[(2 * i, 2 * j + 1)], ZERO);
            }
        }
    }

    #[test]
    fn dot_sigma_x_properties() {
        let p = ModelParams::paper_default(3);
        let sx = build_dot_sigma_x(&p).unwrap();
        assert_eq!(max_abs_diff(&(&sx * &sx), &matrix::identity(8)), 0.0);
        assert_eq!(hermiticity_deviation(&sx), 0.0);
        let tr: faer::c64 = (0..8).map(|i| sx[(i, i)]).sum();
        assert_eq!(tr, ZERO);
        let sz = build_dot_sigma_z(&p).unwrap();
        assert_eq!(max_abs(&(&(&sx * &sz) + &(&sz * &sx))), 0.0);
    }

    #[test]
    fn validation() {
        let mut p = ModelParams::paper_default(4);
        p.alpha_x = 0.0;
        assert!(matches!(p.validate(), Err(Error::InvalidParameter { name: "alpha_x", .. })));
        p.alpha_x = 1.0;
        p.kz = f64::NAN;
        assert!(p.validate().is_err());
        assert_eq!(ModelParams::paper_default(0).validate(), Err(Error::InvalidBasis(0)));
    }
}

//! Floquet laboratory for n-fold two-time correlators of a bosonic Josephson
//! junction probed by a dispersively coupled two-level dot.
//!
//! The correlator `⟨[σ_x(t) σ_x(0)]^n⟩` reduces to `⟨ψ|F^n|ψ⟩` with
//! `F = e^{-i H_1 t} e^{-i H_2 t}` acting on the bosons alone. The modules
//! build the Hamiltonians ([`model`]), the Floquet operator ([`floquet`]),
//! its level statistics ([`spectral`]), survival probabilities ([`survival`])
//! and the classical mean-field limit ([`meanfield`]).

pub mod error;
pub mod floquet;
pub mod matrix;
pub mod meanfield;
pub mod model;
pub mod spectral;
pub mod spin_algebra;
pub mod survival;

pub use faer::{c64, Mat};

pub use error::{Error, Result};
pub use floquet::{build_floquet, build_ut, FloquetDecomposition, FloquetFactory};
pub use matrix::ComplexMatrix;
pub use meanfield::{ClassicalState, FullClassicalState, LyapunovConfig, LyapunovMode, LyapunovResult};
pub use model::ModelParams;
pub use spectral::{SpacingRatioResult, SpectrumTopology};
pub use spin_algebra::{HermitianEigenSystem, SpinBasisSpec, UnitaryEigenSystem};
pub use survival::{DotSector, QuantumState, RmtSaturation, StateBasis, SurvivalSeries};

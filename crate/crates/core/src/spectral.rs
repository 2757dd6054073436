//! Spacing-ratio statistics of eigenphase spectra.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::floquet::{check_grid, FloquetFactory};
use crate::model::ModelParams;

/// Spacings below this are treated as this value before forming ratios.
pub const DEGENERACY_CLAMP: f64 = 1e-12;

/// Mean spacing ratio of the circular orthogonal ensemble, `4 - 2√3`.
pub fn r_coe() -> f64 {
    4.0 - 2.0 * 3f64.sqrt()
}

/// Mean spacing ratio of uncorrelated (Poisson) levels, `2 ln 2 - 1`.
pub fn r_poisson() -> f64 {
    2.0 * std::f64::consts::LN_2 - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RmtReference {
    pub r_coe: f64,
    pub r_poisson: f64,
}

impl Default for RmtReference {
    fn default() -> Self {
        Self { r_coe: r_coe(), r_poisson: r_poisson() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumTopology {
    /// `D` spacings including the wrap-around gap, `D` ratios.
    #[default]
    Circular,
    /// `D - 1` spacings, `D - 2` ratios.
    Open,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpacingRatioResult {
    pub ratios: Vec<f64>,
    pub mean_r: f64,
    pub n_spacings: usize,
}

/// Ratios `min(δ_n, δ_{n+1}) / max(δ_n, δ_{n+1})` of adjacent eigenphase gaps.
///
/// `phases` must be sorted ascending in `[-π, π)`.
pub fn spacing_ratios(phases: &[f64], topology: SpectrumTopology) -> Result<SpacingRatioResult> {
    let d = phases.len();
    if d < 3 {
        return Err(Error::InsufficientData { needed: 3, got: d });
    }
    if phases.iter().any(|t| !t.is_finite()) {
        return Err(Error::Domain("eigenphases must be finite".into()));
    }
    if phases.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Unsorted);
    }
    let mut spacings: Vec<f64> = phases.windows(2).map(|w| w[1] - w[0]).collect();
    if topology == SpectrumTopology::Circular {
        spacings.push(phases[0] + 2.0 * PI - phases[d - 1]);
    }
    for s in &mut spacings {
        *s = s.max(DEGENERACY_CLAMP);
    }
    let ns = spacings.len();
    let pairs = match topology {
        SpectrumTopology::Circular => ns,
        SpectrumTopology::Open => ns - 1,
    };
    let ratios: Vec<f64> = (0..pairs)
        .map(|k| {
            let (a, b) = (spacings[k], spacings[(k + 1) % ns]);
            a.min(b) / a.max(b)
        })
        .collect();
    let mean_r = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(SpacingRatioResult { ratios, mean_r, n_spacings: ns })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanRRow {
    pub t: f64,
    pub mean_r: f64,
}

/// Mean spacing ratio of the Floquet spectrum at every grid time.
pub fn mean_r_sweep(p: &ModelParams, t_grid: &[f64], topology: SpectrumTopology) -> Result<Vec<MeanRRow>> {
    check_grid(t_grid)?;
    let factory = FloquetFactory::new(p)?;
    t_grid
        .par_iter()
        .map(|&t| {
            let fd = factory.decompose(t)?;
            let r = spacing_ratios(fd.eigenphases(), topology)?;
            Ok(MeanRRow { t, mean_r: r.mean_r })
        })
        .collect()
}

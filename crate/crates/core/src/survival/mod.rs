//! n-fold correlator amplitudes, survival probabilities and their random-matrix
//! saturation values.

pub mod reduction;
pub mod states;

use faer::c64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::floquet::{check_grid, linear_grid, FloquetDecomposition, FloquetFactory};
use crate::matrix::{self, cis, ComplexMatrix, ZERO};
use crate::model::ModelParams;

pub use reduction::{verify_reduction, DotSector, ReductionRow, REDUCTION_MAX_N};
pub use states::{
    make_basis, make_random_basis, make_state, sx_basis, sz_basis, BasisLabel, QuantumState, StateBasis, StateSpec,
};

pub const DEFAULT_ORDER: u32 = 50;
pub const DEFAULT_WINDOW_SAMPLES: usize = 2000;
pub const DEFAULT_T_MAX: f64 = 20.0;
/// Single-state survival kicks the vector directly while `n < factor · D`,
/// and diagonalises `F` otherwise.
const DIRECT_KICK_FACTOR: usize = 8;

/// Random-matrix predictions for a spectrum of dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RmtSaturation {
    pub dim: usize,
    /// Basis-summed saturation for a unitary-ensemble eigenbasis.
    pub ipr_cue: f64,
    /// Basis-summed saturation for an orthogonal-ensemble eigenbasis.
    pub ipr_coe: f64,
    /// Single-state saturation, unitary ensemble.
    pub p_cue: f64,
    /// Single-state saturation, orthogonal ensemble.
    pub p_coe: f64,
    pub t_th_cue: f64,
    pub t_th_coe: f64,
}

pub fn rmt_saturation(dim: usize) -> Result<RmtSaturation> {
    if dim < 1 {
        return Err(Error::InvalidParameter { name: "dim", reason: "must be at least 1".into() });
    }
    let d = dim as f64;
    Ok(RmtSaturation {
        dim,
        ipr_cue: 2.0 * d / (d + 1.0),
        ipr_coe: 3.0 * d / (d + 2.0),
        p_cue: 2.0 / (d + 1.0),
        p_coe: 3.0 / (d + 2.0),
        t_th_cue: (3.0 / (2.0 * std::f64::consts::PI)).powf(0.25),
        t_th_coe: (3.0 / std::f64::consts::PI).powf(0.25),
    })
}

/// Time interval over which survival curves are averaged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AveragingWindow {
    pub t_lo: f64,
    pub t_hi: f64,
}

impl AveragingWindow {
    /// Second half of `[0, 20] / alpha_x`, never starting before `max(2 t_Th, 2) / alpha_x`
    /// (orthogonal Thouless time). Single-state curves are still relaxing at `2 / alpha_x`.
    pub fn default_for(p: &ModelParams) -> Self {
        let t_th = (3.0 / std::f64::consts::PI).powf(0.25);
        let t_lo = (DEFAULT_T_MAX / 2.0).max(2.0 * t_th).max(2.0);
        Self { t_lo: t_lo / p.alpha_x, t_hi: DEFAULT_T_MAX / p.alpha_x }
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_lo && t <= self.t_hi
    }

    /// `samples` equally spaced times spanning the window.
    pub fn grid(&self, samples: usize) -> Vec<f64> {
        linear_grid(self.t_lo, self.t_hi, samples)
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_lo.is_finite() && self.t_hi.is_finite() && self.t_lo <= self.t_hi) {
            return Err(Error::InvalidParameter {
                name: "window",
                reason: format!("need finite t_lo <= t_hi (got [{}, {}])", self.t_lo, self.t_hi),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalSeries {
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub n: u32,
    pub long_time_avg: f64,
    pub window: AveragingWindow,
}

fn series(t_grid: &[f64], values: Vec<f64>, n: u32, window: AveragingWindow) -> Result<SurvivalSeries> {
    let inside: Vec<f64> = t_grid.iter().zip(&values).filter(|(t, _)| window.contains(**t)).map(|(_, v)| *v).collect();
    if inside.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let long_time_avg = inside.iter().sum::<f64>() / inside.len() as f64;
    Ok(SurvivalSeries { t_grid: t_grid.to_vec(), values, n, long_time_avg, window })
}

fn check_order(n: u32) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameter { name: "n", reason: "correlator order must be at least 1".into() });
    }
    Ok(())
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// `Σ_j |c_j|^2 e^{i n θ_j}` for overlaps `c_j = ⟨v_j|ψ⟩`.
fn amplitude_from_overlaps(overlaps: impl Iterator<Item = c64>, phases: &[c64]) -> c64 {
    overlaps.zip(phases).fold(ZERO, |acc, (c, &e)| acc + e * c.norm_sqr())
}

fn power_phases(fd: &FloquetDecomposition, n: u32) -> Vec<c64> {
    fd.eigenphases().iter().map(|&t| cis(f64::from(n) * t)).collect()
}

fn state_amplitude(fd: &FloquetDecomposition, state: &QuantumState, n: u32) -> c64 {
    let v = &fd.eigen.eigenvectors;
    let psi = state.amplitudes();
    let overlaps = (0..v.ncols()).map(|j| {
        let col = v.col(j);
        (0..psi.len()).fold(ZERO, |acc, i| acc + col[i].conj() * psi[i])
    });
    amplitude_from_overlaps(overlaps, &power_phases(fd, n))
}

/// `F_n(t) = ⟨ψ|F^n|ψ⟩`.
pub fn ttc_amplitude(p: &ModelParams, state: &QuantumState, t: f64, n: u32) -> Result<c64> {
    check_order(n)?;
    check_dim(p.dim(), state.dim())?;
    let fd = FloquetFactory::new(p)?.decompose(t)?;
    Ok(state_amplitude(&fd, state, n))
}

/// `P_n(t) = |F_n(t)|^2` on a time grid.
pub fn survival_probability(
    p: &ModelParams,
    state: &QuantumState,
    t_grid: &[f64],
    n: u32,
    window: AveragingWindow,
) -> Result<SurvivalSeries> {
    check_order(n)?;
    check_grid(t_grid)?;
    window.validate()?;
    check_dim(p.dim(), state.dim())?;
    let factory = FloquetFactory::new(p)?;
    let direct = (n as usize) < DIRECT_KICK_FACTOR * p.dim();
    let values = t_grid
        .par_iter()
        .map(|&t| {
            let amp = if direct {
                matrix::inner(state.amplitudes(), &factory.apply_power(t, n, state.amplitudes())?)
            } else {
                state_amplitude(&factory.decompose(t)?, state, n)
            };
            Ok(amp.norm_sqr())
        })
        .collect::<Result<Vec<f64>>>()?;
    series(t_grid, values, n, window)
}

/// `Σ_i P_n^{(i)}(t)` over the states of `basis` (a sum, equal to `D` at `t = 0`).
pub fn basis_averaged_survival(
    p: &ModelParams,
    basis: &StateBasis,
    t_grid: &[f64],
    n: u32,
    window: AveragingWindow,
) -> Result<SurvivalSeries> {
    check_order(n)?;
    check_grid(t_grid)?;
    window.validate()?;
    check_dim(p.dim(), basis.dim())?;
    let factory = FloquetFactory::new(p)?;
    let values = t_grid
        .par_iter()
        .map(|&t| {
            let fd = factory.decompose(t)?;
            Ok(basis_survival_sum(&fd, basis.vectors(), n))
        })
        .collect::<Result<Vec<f64>>>()?;
    series(t_grid, values, n, window)
}

fn basis_survival_sum(fd: &FloquetDecomposition, basis: &ComplexMatrix, n: u32) -> f64 {
    let overlaps = fd.eigen.eigenvectors.adjoint() * basis;
    let phases = power_phases(fd, n);
    (0..overlaps.ncols())
        .map(|i| {
            let col = overlaps.col(i);
            amplitude_from_overlaps((0..col.nrows()).map(|j| col[j]), &phases).norm_sqr()
        })
        .sum()
}

/// `Σ_a |⟨v_a|ψ⟩|^4` for the columns `v_a` of `reference`.
pub fn ipr_of_state(state: &QuantumState, reference: &ComplexMatrix) -> Result<f64> {
    check_dim(reference.nrows(), state.dim())?;
    let overlaps = matrix::matvec(&reference.adjoint().to_owned(), state.amplitudes());
    Ok(overlaps.iter().map(|c| c.norm_sqr().powi(2)).sum())
}

/// `Σ_{i,a} |⟨v_a|ψ_i⟩|^4`, the diagonal-approximation value of the basis sum.
pub fn basis_ipr(basis: &StateBasis, reference: &ComplexMatrix) -> Result<f64> {
    check_dim(reference.nrows(), basis.dim())?;
    let overlaps = reference.adjoint() * basis.vectors();
    let mut acc = 0.0;
    for i in 0..overlaps.ncols() {
        for a in 0..overlaps.nrows() {
            acc += overlaps[(a, i)].norm_sqr().powi(2);
        }
    }
    Ok(acc)
}

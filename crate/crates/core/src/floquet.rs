//! Floquet operator `F(t) = e^{-i H_1 t} e^{-i H_2 t}`, its powers, the
//! symmetrised operator `U_t = F^n e^{i H_2 t}` and eigenphase sweeps.

use faer::c64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{self, cis, ComplexMatrix, ZERO};
use crate::model::{self, ModelParams};
use crate::spin_algebra::{eig_hermitian, eig_unitary, HermitianEigenSystem, UnitaryEigenSystem};

/// Default spacing of sweep grids, in units of `1/alpha_x`.
pub const DEFAULT_SWEEP_STEP: f64 = 0.01;

/// The Floquet operator at one kick period together with its spectrum.
#[derive(Debug, Clone)]
pub struct FloquetDecomposition {
    pub t: f64,
    pub operator: ComplexMatrix,
    pub eigen: UnitaryEigenSystem,
}

impl FloquetDecomposition {
    pub fn dim(&self) -> usize {
        self.eigen.dim()
    }

    pub fn eigenphases(&self) -> &[f64] {
        &self.eigen.eigenphases
    }
}

#[derive(Debug, Clone)]
enum Backward {
    Diagonal(Vec<f64>),
    Dense(HermitianEigenSystem),
}

/// Diagonalises `H_1` (and `H_2` if it is not diagonal) once so that `F(t)`
/// can be assembled for many periods at `O(D^3)` matrix-product cost each.
#[derive(Debug, Clone)]
pub struct FloquetFactory {
    params: ModelParams,
    h1: HermitianEigenSystem,
    h2: Backward,
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter { name: "t", reason: format!("must be finite and >= 0 (got {t})") });
    }
    Ok(())
}

impl FloquetFactory {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let h1 = eig_hermitian(&model::build_h1(params)?)?;
        let h2 = if params.generalized_h2 {
            Backward::Dense(eig_hermitian(&model::build_h2(params)?)?)
        } else {
            Backward::Diagonal(model::interaction_diagonal(params))
        };
        Ok(Self { params: *params, h1, h2 })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.h1.dim()
    }

    /// `e^{-i s H_2 t}` for `s = ±1`.
    fn backward(&self, t: f64, sign: f64) -> ComplexMatrix {
        match &self.h2 {
            Backward::Diagonal(d) => {
                let n = d.len();
                ComplexMatrix::from_fn(n, n, |i, j| if i == j { cis(-sign * d[i] * t) } else { ZERO })
            }
            Backward::Dense(es) => es.propagator(sign * t),
        }
    }

    fn apply_backward(&self, mut a: ComplexMatrix, t: f64, sign: f64) -> ComplexMatrix {
        match &self.h2 {
            Backward::Diagonal(d) => {
                let phases: Vec<c64> = d.iter().map(|&e| cis(-sign * e * t)).collect();
                matrix::scale_columns(&mut a, &phases);
                a
            }
            Backward::Dense(_) => &a * &self.backward(t, sign),
        }
    }

    /// `F(t)^n v`, applied factor by factor without forming `F`.
    pub fn apply_power(&self, t: f64, n: u32, v: &[c64]) -> Result<Vec<c64>> {
        check_time(t)?;
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        let u = &self.h1.eigenvectors;
        let h1_phases: Vec<c64> = self.h1.eigenvalues.iter().map(|&l| cis(-l * t)).collect();
        let diagonal: Option<Vec<c64>> = match &self.h2 {
            Backward::Diagonal(d) => Some(d.iter().map(|&e| cis(-e * t)).collect()),
            Backward::Dense(_) => None,
        };
        let dense = diagonal.is_none().then(|| self.backward(t, 1.0));
        let mut x = v.to_vec();
        let mut tmp = vec![ZERO; x.len()];
        for _ in 0..n {
            if let Some(d) = &diagonal {
                for (xi, e) in x.iter_mut().zip(d) {
                    *xi *= e;
                }
            } else if let Some(b) = &dense {
                x = matrix::matvec(b, &x);
            }
            for (j, tj) in tmp.iter_mut().enumerate() {
                let col = u.col(j);
                let mut acc = ZERO;
                for (i, xi) in x.iter().enumerate() {
                    acc += col[i].conj() * xi;
                }
                *tj = acc * h1_phases[j];
            }
            x = matrix::matvec(u, &tmp);
        }
        Ok(x)
    }

    /// `F(t)` without diagonalising it.
    pub fn operator(&self, t: f64) -> Result<ComplexMatrix> {
        check_time(t)?;
        Ok(self.apply_backward(self.h1.propagator(t), t, 1.0))
    }

    pub fn decompose(&self, t: f64) -> Result<FloquetDecomposition> {
        let operator = self.operator(t)?;
        let eigen = eig_unitary(&operator)?;
        Ok(FloquetDecomposition { t, operator, eigen })
    }

    /// `U_t = F^n e^{i H_2 t}`.
    pub fn ut(&self, t: f64, n: u32) -> Result<ComplexMatrix> {
        if n < 1 {
            return Err(Error::InvalidParameter { name: "n", reason: "U_t requires n >= 1".into() });
        }
        let fd = self.decompose(t)?;
        Ok(self.apply_backward(floquet_power(&fd, n), t, -1.0))
    }
}

pub fn build_floquet(p: &ModelParams, t: f64) -> Result<FloquetDecomposition> {
    FloquetFactory::new(p)?.decompose(t)
}

/// `F^n` through the eigendecomposition.
pub fn floquet_power(fd: &FloquetDecomposition, n: u32) -> ComplexMatrix {
    if n == 0 {
        return matrix::identity(fd.dim());
    }
    fd.eigen.power(i64::from(n))
}

pub fn build_ut(p: &ModelParams, t: f64, n: u32) -> Result<ComplexMatrix> {
    FloquetFactory::new(p)?.ut(t, n)
}

/// `‖F(t) - e^{-i (H_1 + H_2) t}‖_2`, the error of truncating the effective
/// Hamiltonian at zeroth order. Scales as `t^2` for small `t`.
pub fn bch_short_time_residual(p: &ModelParams, t: f64) -> Result<f64> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let f = FloquetFactory::new(p)?.operator(t)?;
    let sum = &model::build_h1(p)? + &model::build_h2(p)?;
    let direct = eig_hermitian(&sum)?.propagator(t);
    matrix::operator_norm(&(&f - &direct))
}

/// Basis reversal `|m> -> |-m>`.
pub fn parity_operator(dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |i, j| if i + j + 1 == dim { matrix::ONE } else { ZERO })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenphaseRow {
    pub t: f64,
    pub eigenphases: Vec<f64>,
}

/// Sorted eigenphases of `F(t)` for each `t` in the grid, in grid order.
pub fn eigenphase_sweep(p: &ModelParams, t_grid: &[f64]) -> Result<Vec<EigenphaseRow>> {
    check_grid(t_grid)?;
    let factory = FloquetFactory::new(p)?;
    t_grid
        .par_iter()
        .map(|&t| {
            let fd = factory.decompose(t)?;
            Ok(EigenphaseRow { t, eigenphases: fd.eigen.eigenphases })
        })
        .collect()
}

pub(crate) fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    for &t in t_grid {
        check_time(t)?;
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter { name: "t_grid", reason: "must be ascending".into() });
    }
    Ok(())
}

/// `steps` points from `lo` to `hi` inclusive (a single point at `lo` when `steps == 1`).
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let h = (hi - lo) / (steps - 1) as f64;
            (0..steps).map(|k| if k + 1 == steps { hi } else { lo + h * k as f64 }).collect()
        }
    }
}

/// Grid `lo, lo + step, ...` up to and including `hi` (within rounding).
pub fn stepped_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let steps = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    linear_grid(lo, lo + step * (steps - 1) as f64, steps)
}

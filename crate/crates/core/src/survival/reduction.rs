//! Brute-force evaluation of the correlator on the full boson ⊗ dot space,
//! compared against the reduced Floquet amplitude.

use faer::c64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::{check_grid, floquet_power, FloquetFactory};
use crate::matrix::{self, cis, ComplexMatrix, ZERO};
use crate::model::{self, ModelParams};
use crate::spin_algebra::eig_hermitian;

use super::states::QuantumState;

/// Largest boson number accepted by [`verify_reduction`].
pub const REDUCTION_MAX_N: usize = 64;

/// Initial dot state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DotSector {
    /// `σ_z = +1`, composite index `2i`.
    #[default]
    Plus,
    /// `σ_z = -1`, composite index `2i + 1`.
    Minus,
}

impl DotSector {
    fn offset(self) -> usize {
        match self {
            DotSector::Plus => 0,
            DotSector::Minus => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionRow {
    pub t: f64,
    /// `⟨Ψ|[e^{iHt} σ_x e^{-iHt} σ_x]^n|Ψ⟩` on the composite space.
    pub full: c64,
    /// `⟨ψ|F^n|ψ⟩`.
    pub reduced: c64,
    /// `|full - expected|` where `expected` maps `reduced` into the chosen dot
    /// sector, including the `Δ` phase.
    pub discrepancy: f64,
    /// `||full| - |reduced||`.
    pub modulus_discrepancy: f64,
}

/// Checks that the dot drops out of the correlator.
///
/// Starting in the `σ_z = -1` sector the full correlator equals
/// `e^{i n Δ t} F_n(t)`; starting in `σ_z = +1` it equals
/// `e^{-i n Δ t} conj(F_n(t))`. For `beta != alpha_x/2` the reduced side uses
/// the generalised backward Hamiltonian.
pub fn verify_reduction(
    p: &ModelParams,
    state: &QuantumState,
    t_grid: &[f64],
    n: u32,
    sector: DotSector,
) -> Result<Vec<ReductionRow>> {
    p.validate()?;
    if p.n > REDUCTION_MAX_N {
        return Err(Error::TooLarge { n: p.n, max: REDUCTION_MAX_N });
    }
    check_grid(t_grid)?;
    if state.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: state.dim() });
    }

    let h = eig_hermitian(&model::build_full_hamiltonian(p)?)?;
    let x = model::build_dot_sigma_x(p)?;
    let mut psi = vec![ZERO; 2 * p.dim()];
    for (i, &a) in state.amplitudes().iter().enumerate() {
        psi[2 * i + sector.offset()] = a;
    }

    let mut reduced_params = *p;
    reduced_params.generalized_h2 = true;
    let factory = FloquetFactory::new(&reduced_params)?;

    t_grid
        .par_iter()
        .map(|&t| {
            let fwd = h.propagator(t);
            let bwd = fwd.adjoint().to_owned();
            let step = &(&(&bwd * &x) * &fwd) * &x;
            let mut v = psi.clone();
            for _ in 0..n {
                v = matrix::matvec(&step, &v);
            }
            let full = matrix::inner(&psi, &v);

            let reduced = if n == 0 {
                matrix::ONE
            } else {
                let fd = factory.decompose(t)?;
                let f: ComplexMatrix = floquet_power(&fd, n);
                matrix::inner(state.amplitudes(), &matrix::matvec(&f, state.amplitudes()))
            };
            let phase = f64::from(n) * p.delta * t;
            let expected = match sector {
                DotSector::Minus => cis(phase) * reduced,
                DotSector::Plus => cis(-phase) * reduced.conj(),
            };
            Ok(ReductionRow {
                t,
                full,
                reduced,
                discrepancy: (full - expected).norm(),
                modulus_discrepancy: (full.norm() - reduced.norm()).abs(),
            })
        })
        .collect()
}

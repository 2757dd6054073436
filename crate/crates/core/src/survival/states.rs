//! Initial states and orthonormal state bases of the boson space.

use faer::c64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, cis, real, ComplexMatrix, ZERO};
use crate::spin_algebra::{build_sx, build_sy, eig_hermitian, expm_hermitian, orthonormality_deviation, SpinBasisSpec};

pub const NORM_TOL: f64 = 1e-12;
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// A normalised amplitude vector in the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<c64>,
}

impl QuantumState {
    /// Wraps amplitudes that are already normalised.
    pub fn new(amplitudes: Vec<c64>) -> Result<Self> {
        let norm = matrix::norm(&amplitudes);
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(mut amplitudes: Vec<c64>) -> Result<Self> {
        let norm = matrix::norm(&amplitudes);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { norm });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[c64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `⟨ψ|O|ψ⟩`.
    pub fn expectation(&self, op: &ComplexMatrix) -> c64 {
        matrix::inner(&self.amplitudes, &matrix::matvec(op, &self.amplitudes))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSpec {
    /// `|m⟩`.
    Fock(f64),
    /// `e^{-i S_y π/2} |N/2⟩`, the coherent state polarised along `+x`.
    XPolarized,
    /// Amplitudes `∝ e^{-m^2/4N}`.
    Gaussian,
    Custom(Vec<(f64, f64)>),
}

impl StateSpec {
    pub fn name(&self) -> String {
        match self {
            StateSpec::Fock(m) => format!("fock({m})"),
            StateSpec::XPolarized => "x_polarized".into(),
            StateSpec::Gaussian => "gaussian".into(),
            StateSpec::Custom(_) => "custom".into(),
        }
    }
}

pub fn make_state(spec: &StateSpec, basis: &SpinBasisSpec) -> Result<QuantumState> {
    let d = basis.dim();
    match spec {
        StateSpec::Fock(m) => {
            let i = basis
                .index_of(*m)
                .ok_or_else(|| Error::Domain(format!("m = {m} is not an S_z eigenvalue for N = {}", basis.particles())))?;
            let mut a = vec![ZERO; d];
            a[i] = real(1.0);
            QuantumState::new(a)
        }
        StateSpec::XPolarized => {
            let rot = expm_hermitian(&build_sy(basis), c64::new(0.0, -std::f64::consts::FRAC_PI_2))?;
            QuantumState::normalized(matrix::column(&rot, d - 1))
        }
        StateSpec::Gaussian => {
            let n = basis.particles() as f64;
            let a = basis.m_values().iter().map(|m| real((-m * m / (4.0 * n)).exp())).collect();
            QuantumState::normalized(a)
        }
        StateSpec::Custom(v) => {
            if v.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: v.len() });
            }
            QuantumState::normalized(v.iter().map(|&(re, im)| c64::new(re, im)).collect())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisLabel {
    SzFock,
    SxEigen,
    RandomHaar { seed: u64 },
    Custom,
}

/// An orthonormal basis stored as the columns of a square matrix.
#[derive(Debug, Clone)]
pub struct StateBasis {
    vectors: ComplexMatrix,
    label: BasisLabel,
}

impl StateBasis {
    pub fn new(vectors: ComplexMatrix, label: BasisLabel) -> Result<Self> {
        matrix::ensure_square(&vectors)?;
        let deviation = orthonormality_deviation(&vectors);
        if !(deviation <= ORTHONORMAL_TOL) {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self { vectors, label })
    }

    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn label(&self) -> BasisLabel {
        self.label
    }

    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn state(&self, i: usize) -> QuantumState {
        QuantumState { amplitudes: matrix::column(&self.vectors, i) }
    }
}

pub fn sz_basis(spec: &SpinBasisSpec) -> StateBasis {
    StateBasis { vectors: matrix::identity(spec.dim()), label: BasisLabel::SzFock }
}

pub fn sx_basis(spec: &SpinBasisSpec) -> Result<StateBasis> {
    StateBasis::new(eig_hermitian(&build_sx(spec))?.eigenvectors, BasisLabel::SxEigen)
}

/// Haar-distributed orthonormal basis: QR of a complex Ginibre matrix with
/// the phases of `diag(R)` moved into `Q`.
pub fn make_random_basis(dim: usize, seed: u64) -> Result<StateBasis> {
    if dim < 1 {
        return Err(Error::InvalidParameter { name: "dim", reason: "must be at least 1".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        entries.push(c64::new(re, im));
    }
    let g = ComplexMatrix::from_fn(dim, dim, |i, j| entries[j * dim + i]);
    let qr = g.qr();
    let mut q = qr.compute_Q();
    let r = qr.R();
    let phases: Vec<c64> = (0..dim)
        .map(|j| {
            let rjj = r[(j, j)];
            if rjj.norm() > 0.0 {
                cis(rjj.arg())
            } else {
                real(1.0)
            }
        })
        .collect();
    matrix::scale_columns(&mut q, &phases);
    StateBasis::new(q, BasisLabel::RandomHaar { seed })
}

pub fn make_basis(label: BasisLabel, spec: &SpinBasisSpec) -> Result<StateBasis> {
    match label {
        BasisLabel::SzFock => Ok(sz_basis(spec)),
        BasisLabel::SxEigen => sx_basis(spec),
        BasisLabel::RandomHaar { seed } => make_random_basis(spec.dim(), seed),
        BasisLabel::Custom => Err(Error::Domain("a custom basis must be supplied explicitly".into())),
    }
}

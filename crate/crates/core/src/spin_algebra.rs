//! Collective spin operators in the Dicke basis and the dense spectral
//! machinery (Hermitian eigensystems, matrix exponentials, unitary
//! eigenphases) used by every other module.
//!
//! Basis index `i` corresponds to `S_z` eigenvalue `m_i = -N/2 + i`, so the
//! basis is ordered by increasing `m`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use faer::{c64, Side};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    self, cis, ensure_square, hermiticity_deviation, max_abs, real, spectral_synthesis,
    unitarity_deviation, ComplexMatrix, I,
};

/// Accepted deviation from Hermiticity, relative to `max(1, max|H|)`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Accepted `max |U^dagger U - 1|` before a matrix is rejected as non-unitary.
pub const UNITARY_TOL: f64 = 1e-8;

/// Symmetric (Dicke) sector of `N` two-level bosons: dimension `N + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinBasisSpec {
    n: usize,
}

impl SpinBasisSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidBasis(n));
        }
        Ok(Self { n })
    }

    /// Particle count `N`.
    pub fn particles(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// Total spin `S = N/2`.
    pub fn spin(&self) -> f64 {
        self.n as f64 / 2.0
    }

    pub fn m(&self, index: usize) -> f64 {
        index as f64 - self.spin()
    }

    pub fn m_values(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m(i)).collect()
    }

    /// Basis index of `S_z` eigenvalue `m`, if `m` is one of the allowed
    /// (half-)integers.
    pub fn index_of(&self, m: f64) -> Option<usize> {
        let shifted = m + self.spin();
        let idx = shifted.round();
        if (shifted - idx).abs() > 1e-9 || idx < 0.0 || idx > self.n as f64 {
            return None;
        }
        Some(idx as usize)
    }

    /// `<m+1| S_+ |m>` for `m = m_index`, i.e. `sqrt((N - i)(i + 1))`.
    fn ladder(&self, index: usize) -> f64 {
        (((self.n - index) * (index + 1)) as f64).sqrt()
    }
}

pub fn build_sz(spec: &SpinBasisSpec) -> ComplexMatrix {
    matrix::from_real_diagonal(&spec.m_values())
}

pub fn build_sx(spec: &SpinBasisSpec) -> ComplexMatrix {
    let d = spec.dim();
    let mut m = ComplexMatrix::zeros(d, d);
    for i in 0..d - 1 {
        let c = 0.5 * spec.ladder(i);
        m[(i, i + 1)] = real(c);
        m[(i + 1, i)] = real(c);
    }
    m
}

/// `S_y` with the sign fixed by `[S_x, S_y] = i S_z`.
pub fn build_sy(spec: &SpinBasisSpec) -> ComplexMatrix {
    let d = spec.dim();
    let mut m = ComplexMatrix::zeros(d, d);
    for i in 0..d - 1 {
        let c = 0.5 * spec.ladder(i);
        m[(i, i + 1)] = I * c;
        m[(i + 1, i)] = -I * c;
    }
    m
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Each eigenvector is normalised so that its largest-magnitude component is
/// real and positive.
#[derive(Debug, Clone)]
pub struct HermitianEigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V · diag(e^{scale·λ}) · V^dagger`.
    pub fn exp(&self, scale: c64) -> ComplexMatrix {
        let d: Vec<c64> = self.eigenvalues.iter().map(|&l| (scale * l).exp()).collect();
        spectral_synthesis(&self.eigenvectors, &d)
    }

    /// `e^{-i H t}`, computed with exact phases `cis(-λ t)`.
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        let d: Vec<c64> = self.eigenvalues.iter().map(|&l| cis(-l * t)).collect();
        spectral_synthesis(&self.eigenvectors, &d)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d: Vec<c64> = self.eigenvalues.iter().map(|&l| real(l)).collect();
        spectral_synthesis(&self.eigenvectors, &d)
    }
}

pub fn eig_hermitian(h: &ComplexMatrix) -> Result<HermitianEigenSystem> {
    let d = ensure_square(h)?;
    let deviation = hermiticity_deviation(h);
    if !(deviation <= HERMITIAN_TOL * max_abs(h).max(1.0)) {
        return Err(Error::NotHermitian { deviation });
    }
    if d == 0 {
        return Ok(HermitianEigenSystem { eigenvalues: vec![], eigenvectors: ComplexMatrix::zeros(0, 0) });
    }
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let eigenvalues: Vec<f64> = (0..d).map(|i| evd.S()[i].re).collect();
    let mut eigenvectors = evd.U().to_owned();
    fix_column_phases(&mut eigenvectors);
    Ok(HermitianEigenSystem { eigenvalues, eigenvectors })
}

/// `exp(scale · H)` for Hermitian `H`.
pub fn expm_hermitian(h: &ComplexMatrix, scale: c64) -> Result<ComplexMatrix> {
    Ok(eig_hermitian(h)?.exp(scale))
}

/// Eigenphases and an orthonormal eigenbasis of a unitary matrix.
#[derive(Debug, Clone)]
pub struct UnitaryEigenSystem {
    /// `θ_j ∈ [-π, π)`, sorted ascending.
    pub eigenphases: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl UnitaryEigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenphases.len()
    }

    pub fn eigenvalues(&self) -> Vec<c64> {
        self.eigenphases.iter().map(|&t| cis(t)).collect()
    }

    /// `U^n = V · diag(e^{i n θ}) · V^dagger`; negative `n` gives powers of `U^dagger`.
    pub fn power(&self, n: i64) -> ComplexMatrix {
        let d: Vec<c64> = self.eigenphases.iter().map(|&t| cis(n as f64 * t)).collect();
        spectral_synthesis(&self.eigenvectors, &d)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.power(1)
    }
}

/// Map an angle onto `[-π, π)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut x = (theta + PI).rem_euclid(two_pi) - PI;
    if x >= PI {
        x -= two_pi;
    }
    x
}

pub fn eig_unitary(u: &ComplexMatrix) -> Result<UnitaryEigenSystem> {
    let d = ensure_square(u)?;
    if !matrix::all_finite(u) {
        return Err(Error::NotUnitary { deviation: f64::NAN });
    }
    let deviation = unitarity_deviation(u);
    if !(deviation <= UNITARY_TOL) {
        return Err(Error::NotUnitary { deviation });
    }
    if d == 0 {
        return Ok(UnitaryEigenSystem { eigenphases: vec![], eigenvectors: ComplexMatrix::zeros(0, 0) });
    }

    let evd = u.eigen().map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let phases: Vec<f64> = (0..d).map(|i| wrap_phase(evd.S()[i].arg())).collect();
    let mut vectors = lowdin_orthonormalize(evd.U().to_owned())?;
    fix_column_phases(&mut vectors);

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        phases[a]
            .total_cmp(&phases[b])
            .then_with(|| lexicographic_columns(&vectors, a, b))
    });
    let eigenphases = order.iter().map(|&j| phases[j]).collect();
    let eigenvectors = ComplexMatrix::from_fn(d, d, |i, j| vectors[(i, order[j])]);
    Ok(UnitaryEigenSystem { eigenphases, eigenvectors })
}

/// Replace the columns of `w` by `W (W^dagger W)^{-1/2}`.
///
/// The general eigensolver returns unit eigenvectors that are only orthogonal
/// up to `eps / gap`; for a normal matrix the symmetric orthonormalisation
/// restores exact orthonormality while keeping each eigen-residual at the
/// round-off level.
fn lowdin_orthonormalize(w: ComplexMatrix) -> Result<ComplexMatrix> {
    let gram = w.adjoint() * &w;
    let evd = gram
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let d = w.ncols();
    let mut inv_sqrt = Vec::with_capacity(d);
    for i in 0..d {
        let mu = evd.S()[i].re;
        if !(mu > 1e-13) {
            return Err(Error::Eigensolver(format!(
                "eigenvectors are numerically dependent (Gram eigenvalue {mu:e})"
            )));
        }
        inv_sqrt.push(real(1.0 / mu.sqrt()));
    }
    let q = evd.U().to_owned();
    let g_inv_sqrt = spectral_synthesis(&q, &inv_sqrt);
    Ok(&w * &g_inv_sqrt)
}

/// Rotate each column so that its largest-magnitude entry is real positive.
fn fix_column_phases(v: &mut ComplexMatrix) {
    for j in 0..v.ncols() {
        let mut best = 0usize;
        let mut best_abs = -1.0f64;
        for i in 0..v.nrows() {
            let a = v[(i, j)].norm();
            if a > best_abs + 1e-12 {
                best = i;
                best_abs = a;
            }
        }
        if best_abs <= 0.0 {
            continue;
        }
        let p = v[(best, j)].conj() / best_abs;
        for i in 0..v.nrows() {
            v[(i, j)] *= p;
        }
        v[(best, j)] = real(v[(best, j)].re);
    }
}

fn lexicographic_columns(v: &ComplexMatrix, a: usize, b: usize) -> Ordering {
    for i in 0..v.nrows() {
        let (x, y) = (v[(i, a)], v[(i, b)]);
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Quick check used by tests and callers: `V` has orthonormal columns.
pub fn orthonormality_deviation(v: &ComplexMatrix) -> f64 {
    unitarity_deviation(v)
}

//! Small dense-matrix helpers shared by the physics modules.
//!
//! Matrices are `faer::Mat<c64>`; vectors are plain `Vec<c64>` since every
//! vector in this crate is a state of at most a few hundred amplitudes.

use faer::{c64, Mat};

use crate::error::{Error, Result};

pub type ComplexMatrix = Mat<c64>;

pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };
pub const I: c64 = c64 { re: 0.0, im: 1.0 };

#[inline]
pub fn real(x: f64) -> c64 {
    c64::new(x, 0.0)
}

/// `e^{i x}` for real `x`.
#[inline]
pub fn cis(x: f64) -> c64 {
    let (s, c) = x.sin_cos();
    c64::new(c, s)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    Mat::from_fn(dim, dim, |i, j| if i == j { ONE } else { ZERO })
}

pub fn from_real_diagonal(diag: &[f64]) -> ComplexMatrix {
    let d = diag.len();
    Mat::from_fn(d, d, |i, j| if i == j { real(diag[i]) } else { ZERO })
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows())
}

/// Largest entrywise modulus.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    let mut out = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            out = out.max(m[(i, j)].norm());
        }
    }
    out
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut out = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            out = out.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    out
}

/// `max |H - H^dagger|`.
pub fn hermiticity_deviation(h: &ComplexMatrix) -> f64 {
    let mut out = 0.0f64;
    for j in 0..h.ncols() {
        for i in 0..=j.min(h.nrows().saturating_sub(1)) {
            out = out.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    out
}

/// `max |U^dagger U - 1|`.
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    let g = u.adjoint() * u;
    max_abs_diff(&g, &identity(u.ncols()))
}

/// `max |M - M^T|` (plain transpose, no conjugation).
pub fn transpose_deviation(m: &ComplexMatrix) -> f64 {
    let mut out = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..j {
            out = out.max((m[(i, j)] - m[(j, i)]).norm());
        }
    }
    out
}

pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint().to_owned()
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

/// Kronecker product `a ⊗ b` with the index of `a` major.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn scale(m: &ComplexMatrix, s: c64) -> ComplexMatrix {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s)
}

pub fn add(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a + b
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    let mut acc = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            acc += m[(i, j)].norm_sqr();
        }
    }
    acc.sqrt()
}

/// Multiply column `j` of `m` by `d[j]` in place (i.e. `m · diag(d)`).
pub fn scale_columns(m: &mut ComplexMatrix, d: &[c64]) {
    assert_eq!(m.ncols(), d.len());
    for (j, &s) in d.iter().enumerate() {
        for i in 0..m.nrows() {
            m[(i, j)] *= s;
        }
    }
}

/// `V · diag(d) · V^dagger`.
pub fn spectral_synthesis(v: &ComplexMatrix, d: &[c64]) -> ComplexMatrix {
    let mut vd = v.clone();
    scale_columns(&mut vd, d);
    &vd * v.adjoint()
}

pub fn matvec(m: &ComplexMatrix, x: &[c64]) -> Vec<c64> {
    assert_eq!(m.ncols(), x.len());
    let mut out = vec![ZERO; m.nrows()];
    for (j, &xj) in x.iter().enumerate() {
        if xj == ZERO {
            continue;
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o += m[(i, j)] * xj;
        }
    }
    out
}

/// `⟨a|b⟩` with `a` conjugated.
pub fn inner(a: &[c64], b: &[c64]) -> c64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}

pub fn norm(a: &[c64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn column(m: &ComplexMatrix, j: usize) -> Vec<c64> {
    (0..m.nrows()).map(|i| m[(i, j)]).collect()
}

pub fn from_columns(cols: &[Vec<c64>]) -> ComplexMatrix {
    let ncols = cols.len();
    let nrows = cols.first().map_or(0, Vec::len);
    Mat::from_fn(nrows, ncols, |i, j| cols[j][i])
}

pub fn all_finite(m: &ComplexMatrix) -> bool {
    (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].re.is_finite() && m[(i, j)].im.is_finite()))
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0.0);
    }
    let sv = m
        .singular_values()
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    Ok(sv.into_iter().fold(0.0, f64::max))
}

//! Dense Hermitian helpers on top of nalgebra.

use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues in `[-NEGATIVE_EIGENVALUE_TOL, 0)` are clipped to zero; anything
/// more negative marks an invalid state.
pub const NEGATIVE_EIGENVALUE_TOL: f64 = 1e-10;

pub(crate) const C0: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const C1: Complex64 = Complex64::new(1.0, 0.0);

pub fn dagger(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    m.adjoint()
}

/// Largest entry of `|m - m†|`.
pub fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn symmetrized(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut h = m.clone();
    let n = h.nrows();
    for i in 0..n {
        h[(i, i)] = Complex64::new(h[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            h[(i, j)] = v;
            h[(j, i)] = v.conj();
        }
    }
    h
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = symmetrized(m).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Eigen-decomposition `m = V diag(λ) V†` of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = symmetrized(m).symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Clips tiny negative eigenvalues and rejects genuinely negative ones.
pub fn clip_spectrum(eigenvalues: &[f64]) -> Result<Vec<f64>> {
    eigenvalues
        .iter()
        .map(|&l| {
            if l >= 0.0 {
                Ok(l)
            } else if l >= -NEGATIVE_EIGENVALUE_TOL {
                Ok(0.0)
            } else {
                Err(Error::InvalidState(alloc::format!(
                    "eigenvalue {l:.3e} below -{NEGATIVE_EIGENVALUE_TOL:e}"
                )))
            }
        })
        .collect()
}

/// `-Σ λ ln λ` in nats over a clipped spectrum.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let clipped = clip_spectrum(eigenvalues)?;
    Ok(clipped
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum())
}

/// Trace norm `Σ|λ|` of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m).iter().map(|l| l.abs()).sum()
}

/// `exp(A)` for anti-Hermitian `A`, through the eigen-decomposition of the
/// Hermitian matrix `iA`.
pub fn expm_anti_hermitian(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let h = a.map(|z| z * i);
    let (lambda, v) = hermitian_eigen(&h);
    // exp(A) = exp(-i H)
    let mut scaled = v.clone();
    for (col, &l) in lambda.iter().enumerate() {
        let phase = Complex64::new(0.0, -l).exp();
        for row in 0..scaled.nrows() {
            scaled[(row, col)] *= phase;
        }
    }
    &scaled * v.adjoint()
}

/// Copies `m` into the top-left corner of a zero `dim × dim` matrix, or
/// truncates it when `dim` is smaller.
pub fn resize_square(m: &DMatrix<Complex64>, dim: usize) -> DMatrix<Complex64> {
    let keep = m.nrows().min(dim);
    let mut out = DMatrix::from_element(dim, dim, C0);
    out.view_mut((0, 0), (keep, keep))
        .copy_from(&m.view((0, 0), (keep, keep)));
    out
}

//! States and operators on the truncated number basis `|0⟩ … |N⟩`.
//!
//! Quadratures follow `x = (a + a†)/√2`, `p = (a − a†)/(i√2)`, so the vacuum
//! has covariance `½·I` and a zero-mean state with `ν` photons has
//! `tr(cov) = 1 + 2ν`.

use alloc::format;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{domain, truncation, Error, Result};
use crate::linalg::{self, C0, C1};

/// Tolerated truncation loss (norm or trace) before operations refuse an input.
pub const MAX_DEFICIT: f64 = 1e-4;

/// Pure state in the truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    amplitudes: DVector<Complex64>,
    tail: f64,
}

impl FockState {
    /// Normalizes `amplitudes`; the cutoff is `amplitudes.len() - 1`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::from_vector(DVector::from_vec(amplitudes))
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn from_vector(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(domain("a state needs at least one amplitude"));
        }
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(domain("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self {
            amplitudes: amplitudes / Complex64::new(norm, 0.0),
            tail: 0.0,
        })
    }

    pub(crate) fn with_tail(mut self, tail: f64) -> Self {
        self.tail = tail;
        self
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amplitudes.get(n).copied().unwrap_or(C0)
    }

    /// Probability mass that the constructor could not represent below the cutoff.
    pub fn tail_mass(&self) -> f64 {
        self.tail
    }

    /// `⟨self|other⟩`, treating missing amplitudes as zero.
    pub fn inner(&self, other: &FockState) -> Complex64 {
        let n = self.dim().min(other.dim());
        (0..n)
            .map(|k| self.amplitudes[k].conj() * other.amplitudes[k])
            .sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum()
    }

    /// `⟨a⟩` for this state.
    pub fn mean_field(&self) -> Complex64 {
        (1..self.dim())
            .map(|n| self.amplitudes[n - 1].conj() * self.amplitudes[n] * (n as f64).sqrt())
            .sum()
    }

    /// Zero-pads or truncates to `cutoff`, renormalizing and adding any lost
    /// mass to the tail.
    pub fn with_cutoff(&self, cutoff: usize) -> Result<FockState> {
        let mut v = DVector::from_element(cutoff + 1, C0);
        let keep = self.dim().min(cutoff + 1);
        v.rows_mut(0, keep).copy_from(&self.amplitudes.rows(0, keep));
        let lost = 1.0 - v.norm_squared();
        Ok(FockState::from_vector(v)?.with_tail(self.tail + lost.max(0.0)))
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator {
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
            deficit: self.tail,
        }
    }

    /// Amplitudes as `(re, im)` pairs.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.amplitudes.iter().map(|a| [a.re, a.im]).collect()
    }
}

/// `|n⟩` on a space with the given cutoff.
pub fn make_fock(n: usize, cutoff: usize) -> Result<FockState> {
    if n > cutoff {
        return Err(domain(format!("Fock index {n} exceeds cutoff {cutoff}")));
    }
    let mut v = DVector::from_element(cutoff + 1, C0);
    v[n] = C1;
    FockState::from_vector(v)
}

/// Coherent state `|α⟩`, renormalized on the truncated space. Refuses cutoffs
/// that lose more than [`MAX_DEFICIT`] of the Poisson weight.
pub fn make_coherent(alpha: Complex64, cutoff: usize) -> Result<FockState> {
    let mut v = DVector::from_element(cutoff + 1, C0);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    v[0] = c;
    for n in 1..=cutoff {
        c = c * alpha / (n as f64).sqrt();
        v[n] = c;
    }
    let tail = (1.0 - v.norm_squared()).max(0.0);
    if tail > MAX_DEFICIT {
        return Err(truncation(
            format!("coherent state |α|²={:.3} at cutoff {cutoff}", alpha.norm_sqr()),
            tail,
            MAX_DEFICIT,
        ));
    }
    Ok(FockState::from_vector(v)?.with_tail(tail))
}

/// Smallest cutoff whose geometric tail `(n̄/(n̄+1))^(N+1)` is below `tail`.
pub fn thermal_cutoff(nbar: f64, tail: f64) -> usize {
    if nbar <= 0.0 {
        return 0;
    }
    let q = nbar / (nbar + 1.0);
    let n = (tail.ln() / q.ln()).ceil() as usize;
    n.saturating_sub(1)
}

/// Thermal state with mean photon number `nbar`, renormalized on the truncated
/// space; the dropped geometric tail is kept as the trace deficit.
pub fn make_thermal(nbar: f64, cutoff: usize) -> Result<DensityOperator> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(domain(format!("thermal photon number must be ≥ 0, got {nbar}")));
    }
    let q = nbar / (nbar + 1.0);
    let mut p: Vec<f64> = Vec::with_capacity(cutoff + 1);
    let mut w = 1.0 - q;
    for _ in 0..=cutoff {
        p.push(w);
        w *= q;
    }
    let total: f64 = p.iter().sum();
    let deficit = 1.0 - total;
    let diag = DVector::from_iterator(p.len(), p.iter().map(|&x| Complex64::new(x / total, 0.0)));
    Ok(DensityOperator {
        matrix: DMatrix::from_diagonal(&diag),
        deficit: deficit.max(0.0),
    })
}

/// Hermitian, positive, unit-trace operator on the truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<Complex64>,
    deficit: f64,
}

impl DensityOperator {
    /// Validates Hermiticity, renormalizes the trace and records the trace
    /// shortfall as the deficit.
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::from_matrix_with_deficit(matrix, 0.0)
    }

    pub(crate) fn from_matrix_with_deficit(matrix: DMatrix<Complex64>, prior: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(domain("empty operator"));
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > 1e-10 * scale {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:.3e})")));
        }
        let tr: f64 = (0..matrix.nrows()).map(|i| matrix[(i, i)].re).sum();
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::InvalidState(format!("trace {tr} is not positive")));
        }
        let mut matrix = matrix / Complex64::new(tr, 0.0);
        // exact Hermitian symmetry after rescaling
        let n = matrix.nrows();
        for i in 0..n {
            matrix[(i, i)].im = 0.0;
            for j in (i + 1)..n {
                let v = (matrix[(i, j)] + matrix[(j, i)].conj()) * 0.5;
                matrix[(i, j)] = v;
                matrix[(j, i)] = v.conj();
            }
        }
        Ok(Self {
            matrix,
            deficit: (prior + (1.0 - tr)).max(0.0),
        })
    }

    /// Diagonal operator from a probability vector.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        if p.iter().any(|&x| !(x >= 0.0)) {
            return Err(domain("probabilities must be non-negative"));
        }
        let diag = DVector::from_iterator(p.len(), p.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::from_matrix(DMatrix::from_diagonal(&diag))
    }

    /// Convex combination `Σ wᵢ ρᵢ` on the largest cutoff among the parts.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let dim = parts.iter().map(|(_, r)| r.dim()).max().unwrap_or(0);
        if dim == 0 {
            return Err(domain("empty mixture"));
        }
        let mut m = DMatrix::from_element(dim, dim, C0);
        let mut deficit = 0.0;
        for (w, r) in parts {
            m += linalg::resize_square(&r.matrix, dim) * Complex64::new(*w, 0.0);
            deficit += w * r.deficit;
        }
        Self::from_matrix_with_deficit(m, deficit)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn cutoff(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Probability mass lost to truncation before renormalization.
    pub fn deficit(&self) -> f64 {
        self.deficit
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        (0..self.dim()).map(|n| n as f64 * self.matrix[(n, n)].re).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|n| self.matrix[(n, n)].re).collect()
    }

    /// `Tr[ρ a]`.
    pub fn mean_field(&self) -> Complex64 {
        (1..self.dim())
            .map(|m| self.matrix[(m, m - 1)] * (m as f64).sqrt())
            .sum()
    }

    /// `Tr[ρ a²]`.
    pub fn mean_field_squared(&self) -> Complex64 {
        (2..self.dim())
            .map(|m| self.matrix[(m, m - 2)] * ((m * (m - 1)) as f64).sqrt())
            .sum()
    }

    /// Spectrum with eigenvalues in `[-1e-10, 0)` clipped to zero.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::clip_spectrum(&linalg::hermitian_eigenvalues(&self.matrix))
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn overlap_with_pure(&self, psi: &FockState) -> f64 {
        let v = psi.with_cutoff(self.cutoff()).map(|s| s.amplitudes().clone());
        match v {
            Ok(v) => (v.adjoint() * &self.matrix * &v)[(0, 0)].re,
            Err(_) => 0.0,
        }
    }

    /// Zero-pads (or truncates) to a new cutoff without renormalizing.
    pub fn resized(&self, cutoff: usize) -> DensityOperator {
        let matrix = linalg::resize_square(&self.matrix, cutoff + 1);
        let kept: f64 = (0..=cutoff.min(self.cutoff())).map(|i| self.matrix[(i, i)].re).sum();
        DensityOperator {
            matrix,
            deficit: self.deficit + (1.0 - kept).max(0.0),
        }
    }

    /// `U ρ U†` for a square `U` of matching dimension.
    pub fn conjugated(&self, u: &DMatrix<Complex64>) -> Result<DensityOperator> {
        if u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: u.ncols(),
            });
        }
        Self::from_matrix_with_deficit(u * &self.matrix * u.adjoint(), self.deficit)
    }

    /// Trace norm `‖self − other‖₁`, padding the smaller operator.
    pub fn trace_distance(&self, other: &DensityOperator) -> f64 {
        let dim = self.dim().max(other.dim());
        let d = linalg::resize_square(&self.matrix, dim) - linalg::resize_square(&other.matrix, dim);
        linalg::trace_norm_hermitian(&d)
    }

    /// Largest `|ρ_ij|` outside the main diagonal.
    pub fn off_diagonal_weight(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.matrix[(i, j)].norm());
                }
            }
        }
        worst
    }
}

/// First and second moments of the quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceMoments {
    pub mean: [f64; 2],
    pub cov: [[f64; 2]; 2],
}

impl PhaseSpaceMoments {
    pub fn new(mean: [f64; 2], cov: [[f64; 2]; 2]) -> Self {
        Self { mean, cov }
    }

    pub fn trace(&self) -> f64 {
        self.cov[0][0] + self.cov[1][1]
    }

    /// `det(cov) − ¼`; non-negative (with a positive diagonal) iff
    /// `cov + (i/2)Ω ⪰ 0` for a single mode.
    pub fn uncertainty_margin(&self) -> f64 {
        self.cov[0][0] * self.cov[1][1] - self.cov[0][1] * self.cov[1][0] - 0.25
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.cov[0][0] > 0.0
            && self.cov[1][1] > 0.0
            && (self.cov[0][1] - self.cov[1][0]).abs() <= tol
            && self.uncertainty_margin() >= -tol
    }

    pub fn max_abs_diff(&self, other: &PhaseSpaceMoments) -> f64 {
        let mut d = 0.0_f64;
        for i in 0..2 {
            d = d.max((self.mean[i] - other.mean[i]).abs());
            for j in 0..2 {
                d = d.max((self.cov[i][j] - other.cov[i][j]).abs());
            }
        }
        d
    }
}

/// Quadrature mean vector and symmetrized covariance matrix of `rho`.
pub fn moments(rho: &DensityOperator) -> PhaseSpaceMoments {
    let a = rho.mean_field();
    let a2 = rho.mean_field_squared();
    let n = rho.mean_photon_number();
    let sqrt2 = core::f64::consts::SQRT_2;
    let mx = sqrt2 * a.re;
    let mp = sqrt2 * a.im;
    let xx = a2.re + n + 0.5;
    let pp = -a2.re + n + 0.5;
    let xp = a2.im;
    PhaseSpaceMoments {
        mean: [mx, mp],
        cov: [[xx - mx * mx, xp - mx * mp], [xp - mx * mp, pp - mp * mp]],
    }
}

/// Operator on a two-mode truncated space, stored with row index `i·d₂ + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeOperator {
    matrix: DMatrix<Complex64>,
    dims: (usize, usize),
}

impl TwoModeOperator {
    pub fn new(matrix: DMatrix<Complex64>, dims: (usize, usize)) -> Result<Self> {
        let d = dims.0 * dims.1;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: matrix.nrows(),
            });
        }
        Ok(Self { matrix, dims })
    }

    /// `|Ψ⟩⟨Ψ|` from the amplitude table `Ψ[i][j] = ⟨i, j|Ψ⟩`.
    pub fn from_pure(psi: &DMatrix<Complex64>) -> Self {
        let (d1, d2) = (psi.nrows(), psi.ncols());
        let v = DVector::from_iterator(d1 * d2, (0..d1).flat_map(|i| (0..d2).map(move |j| psi[(i, j)])));
        Self {
            matrix: &v * v.adjoint(),
            dims: (d1, d2),
        }
    }

    /// `ρ ⊗ σ`.
    pub fn product(rho: &DensityOperator, sigma: &DensityOperator) -> Self {
        Self {
            matrix: rho.matrix().kronecker(sigma.matrix()),
            dims: (rho.dim(), sigma.dim()),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        (0..self.matrix.nrows()).map(|i| self.matrix[(i, i)].re).sum()
    }
}

/// Traces out the second mode.
pub fn partial_trace_second(rho2: &TwoModeOperator) -> Result<DensityOperator> {
    let (d1, d2) = rho2.dims;
    if d1 == 0 || d2 == 0 {
        return Err(domain("empty two-mode operator"));
    }
    let m = &rho2.matrix;
    let out = DMatrix::from_fn(d1, d1, |i, k| (0..d2).map(|j| m[(i * d2 + j, k * d2 + j)]).sum());
    DensityOperator::from_matrix(out)
}

//! Gaussian unitaries in the number basis.
//!
//! Conventions:
//! - beam splitter `U = exp[θ(a†b − ab†)]` with `cos θ = √η`, so that
//!   `U†aU = √η a + √(1−η) b` and `U†bU = −√(1−η) a + √η b`;
//! - rotation `R_θ = exp(−iθ a†a)`;
//! - squeezing `S_r = exp[(r/2)(a² − a†²)]`, which squeezes `x` for `r > 0`;
//! - displacement `D_α = exp(α a† − α* a)`;
//! - two-mode squeezer `exp[r(a†b† − ab)]` with `G = cosh² r`, giving
//!   `S†aS = √G a + √(G−1) b†`;
//! - reflection `M_θ = R_θ M R_θ†` where `M` conjugates number-basis amplitudes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{domain, truncation, Error, Result};
use crate::fock::{DensityOperator, FockState};
use crate::linalg::{self, C0};

/// Largest vacuum leakage tolerated by truncated displacement, squeezing and
/// two-mode squeezing operators.
pub const UNITARITY_DEFECT_LIMIT: f64 = 1e-6;

/// Beam splitter stored as one real orthogonal block per total photon number.
///
/// Block `n` has entries `⟨m, n−m| U |i, n−i⟩` at `(m, i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSplitter {
    eta: f64,
    cutoff: usize,
    blocks: Vec<DMatrix<f64>>,
}

impl BeamSplitter {
    /// Blocks for total photon numbers `0..=2·cutoff`, exact within each block.
    pub fn new(eta: f64, cutoff: usize) -> Result<Self> {
        Self::with_max_total(eta, cutoff, 2 * cutoff)
    }

    /// Blocks for total photon numbers `0..=max_total`.
    pub fn with_max_total(eta: f64, cutoff: usize, max_total: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(domain(format!("transmittance must lie in [0, 1], got {eta}")));
        }
        let theta = eta.sqrt().acos();
        let blocks = (0..=max_total).map(|n| splitter_block(theta, n)).collect();
        Ok(Self { eta, cutoff, blocks })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn blocks(&self) -> &[DMatrix<f64>] {
        &self.blocks
    }

    pub fn max_total(&self) -> usize {
        self.blocks.len() - 1
    }

    /// `⟨m, k| U |i, j⟩`.
    pub fn amplitude(&self, m: usize, k: usize, i: usize, j: usize) -> f64 {
        let n = i + j;
        if m + k != n || n >= self.blocks.len() {
            return 0.0;
        }
        self.blocks[n][(m, i)]
    }

    /// Applies `U` to a two-mode amplitude table `Ψ[i][j]`. The output table
    /// has side `d₁ + d₂ − 1` so no amplitude is lost.
    pub fn apply(&self, psi: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        let (d1, d2) = (psi.nrows(), psi.ncols());
        let max_n = d1 + d2 - 2;
        if max_n >= self.blocks.len() {
            return Err(Error::DimensionMismatch {
                expected: self.blocks.len() - 1,
                got: max_n,
            });
        }
        let side = max_n + 1;
        let mut out = DMatrix::from_element(side, side, C0);
        for i in 0..d1 {
            for j in 0..d2 {
                let a = psi[(i, j)];
                if a == C0 {
                    continue;
                }
                let n = i + j;
                let block = &self.blocks[n];
                for m in 0..=n {
                    out[(m, n - m)] += a * block[(m, i)];
                }
            }
        }
        Ok(out)
    }

    /// Largest `‖BᵀB − I‖` entry over all blocks.
    pub fn unitarity_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let g = b.transpose() * b;
                let mut worst = 0.0_f64;
                for i in 0..g.nrows() {
                    for j in 0..g.ncols() {
                        let target = if i == j { 1.0 } else { 0.0 };
                        worst = worst.max((g[(i, j)] - target).abs());
                    }
                }
                worst
            })
            .fold(0.0, f64::max)
    }
}

/// `exp[θ(a†b − ab†)]` restricted to `span{|i, n−i⟩}`, as the exponential
/// of a real antisymmetric tridiagonal generator.
fn splitter_block(theta: f64, n: usize) -> DMatrix<f64> {
    if n == 0 || theta == 0.0 {
        return DMatrix::identity(n + 1, n + 1);
    }
    let mut g = DMatrix::from_element(n + 1, n + 1, C0);
    for i in 0..n {
        let w = theta * (((i + 1) * (n - i)) as f64).sqrt();
        g[(i + 1, i)] = Complex64::new(w, 0.0);
        g[(i, i + 1)] = Complex64::new(-w, 0.0);
    }
    linalg::expm_anti_hermitian(&g).map(|z| z.re)
}

/// `exp[r(a†b† − ab)]` with gain `G = cosh² r`; conserves `n_a − n_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeSqueezer {
    gain: f64,
    cutoff: usize,
    defect: f64,
}

impl TwoModeSqueezer {
    /// Refuses cutoffs where the squeezed vacuum leaks more than
    /// [`UNITARITY_DEFECT_LIMIT`] above `cutoff`.
    pub fn new(gain: f64, cutoff: usize) -> Result<Self> {
        if !(gain >= 1.0) || !gain.is_finite() {
            return Err(domain(format!("gain must be ≥ 1, got {gain}")));
        }
        let lambda = (gain - 1.0) / gain; // tanh² r
        let defect = lambda.powi(cutoff as i32 + 1);
        if defect > UNITARITY_DEFECT_LIMIT {
            return Err(truncation(
                format!("two-mode squeezer G={gain} at cutoff {cutoff}"),
                defect,
                UNITARITY_DEFECT_LIMIT,
            ));
        }
        Ok(Self { gain, cutoff, defect })
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn defect(&self) -> f64 {
        self.defect
    }

    /// Column `S|i, l⟩` as amplitudes on `|m, m − (i − l)⟩` for
    /// `m = 0..=out_cutoff` (zero where the second index would be negative).
    pub fn column(&self, i: usize, l: usize, out_cutoff: usize) -> Vec<f64> {
        two_mode_squeezer_column(self.gain, i, l, out_cutoff)
    }

    /// Applies the squeezer to `Ψ[i][j]`, keeping both output modes up to
    /// `out_cutoff` photons.
    pub fn apply(&self, psi: &DMatrix<Complex64>, out_cutoff: usize) -> DMatrix<Complex64> {
        let side = out_cutoff + 1;
        let mut out = DMatrix::from_element(side, side, C0);
        for i in 0..psi.nrows() {
            for l in 0..psi.ncols() {
                let a = psi[(i, l)];
                if a == C0 {
                    continue;
                }
                let col = self.column(i, l, out_cutoff);
                for (m, v) in col.iter().enumerate() {
                    let k = m as isize - i as isize + l as isize;
                    if k >= 0 && (k as usize) < side {
                        out[(m, k as usize)] += a * *v;
                    }
                }
            }
        }
        out
    }
}

/// Amplitudes of `S|i, l⟩` on `|m, m − (i − l)⟩`, built from the two-mode
/// squeezed vacuum by the commuting ladder maps
/// `S a† S† = c a† − s b` and `S b† S† = c b† − s a`.
pub(crate) fn two_mode_squeezer_column(gain: f64, i: usize, l: usize, out_cutoff: usize) -> Vec<f64> {
    let c = gain.sqrt();
    let s = (gain - 1.0).sqrt();
    let t = s / c;
    // levels above `top` can only feed back into indices ≥ top − (i + l)
    let top = out_cutoff + i + l + 2;
    let mut v = vec![0.0; top + 1];
    let mut amp = 1.0 / c;
    for slot in v.iter_mut() {
        *slot = amp;
        amp *= t;
    }
    let mut d: isize = 0;
    for step in 1..=l {
        // (c b† − s a)/√step : sector d → d − 1
        let mut next = vec![0.0; top + 1];
        for m in 0..=top {
            let x = v[m];
            if x == 0.0 {
                continue;
            }
            let nb = m as isize - d;
            if nb < 0 {
                continue;
            }
            next[m] += c * ((nb + 1) as f64).sqrt() * x;
            if m > 0 {
                next[m - 1] -= s * (m as f64).sqrt() * x;
            }
        }
        let norm = (step as f64).sqrt();
        v = next.into_iter().map(|x| x / norm).collect();
        d -= 1;
    }
    for step in 1..=i {
        // (c a† − s b)/√step : sector d → d + 1
        let mut next = vec![0.0; top + 1];
        for m in 0..=top {
            let x = v[m];
            if x == 0.0 {
                continue;
            }
            let nb = m as isize - d;
            if nb < 0 {
                continue;
            }
            if m < top {
                next[m + 1] += c * ((m + 1) as f64).sqrt() * x;
            }
            next[m] -= s * (nb as f64).sqrt() * x;
        }
        let norm = (step as f64).sqrt();
        v = next.into_iter().map(|x| x / norm).collect();
        d += 1;
    }
    v.truncate(out_cutoff + 1);
    v
}

/// Which single-mode Gaussian unitary a matrix represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingleModeKind {
    Displacement(Complex64),
    Rotation(f64),
    Squeezing(f64),
}

/// Single-mode Gaussian unitary restricted to the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleModeUnitary {
    kind: SingleModeKind,
    matrix: DMatrix<Complex64>,
    defect: f64,
}

impl SingleModeUnitary {
    pub fn kind(&self) -> SingleModeKind {
        self.kind
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn cutoff(&self) -> usize {
        self.matrix.nrows() - 1
    }

    /// Vacuum weight pushed above the cutoff.
    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn apply(&self, psi: &FockState) -> Result<FockState> {
        let v = psi.with_cutoff(self.cutoff())?;
        let out = &self.matrix * v.amplitudes();
        let lost = (1.0 - out.norm_squared()).max(0.0);
        Ok(FockState::from_vector(out)?.with_tail(v.tail_mass() + lost))
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        rho.resized(self.cutoff()).conjugated(&self.matrix)
    }

    /// Largest entry of `|U†U − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.matrix.adjoint() * &self.matrix;
        let mut worst = 0.0_f64;
        for i in 0..g.nrows() {
            for j in 0..g.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// `R_θ = diag(e^{−inθ})`.
pub fn rotation(theta: f64, cutoff: usize) -> SingleModeUnitary {
    let diag = DVector::from_iterator(
        cutoff + 1,
        (0..=cutoff).map(|n| Complex64::new(0.0, -(n as f64) * theta).exp()),
    );
    SingleModeUnitary {
        kind: SingleModeKind::Rotation(theta),
        matrix: DMatrix::from_diagonal(&diag),
        defect: 0.0,
    }
}

fn annihilation(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::from_element(dim, dim, C0);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Exponentiates the anti-Hermitian generator on a doubled space, keeps the
/// `(cutoff+1)²` corner and measures how much of the vacuum image escapes.
fn truncated_exponential(
    kind: SingleModeKind,
    cutoff: usize,
    generator: impl Fn(&DMatrix<Complex64>) -> DMatrix<Complex64>,
    what: &str,
) -> Result<SingleModeUnitary> {
    let big = 2 * (cutoff + 1) + 8;
    let a = annihilation(big);
    let u_big = linalg::expm_anti_hermitian(&generator(&a));
    let kept: f64 = (0..=cutoff).map(|n| u_big[(n, 0)].norm_sqr()).sum();
    let defect = (1.0 - kept).max(0.0);
    if defect > UNITARITY_DEFECT_LIMIT {
        return Err(truncation(format!("{what} at cutoff {cutoff}"), defect, UNITARITY_DEFECT_LIMIT));
    }
    Ok(SingleModeUnitary {
        kind,
        matrix: u_big.view((0, 0), (cutoff + 1, cutoff + 1)).into_owned(),
        defect,
    })
}

/// `S_r = exp[(r/2)(a² − a†²)]`; `x` is squeezed for `r > 0`.
pub fn squeezing(r: f64, cutoff: usize) -> Result<SingleModeUnitary> {
    if !r.is_finite() {
        return Err(domain("squeezing parameter must be finite"));
    }
    if r == 0.0 {
        return Ok(identity(SingleModeKind::Squeezing(0.0), cutoff));
    }
    truncated_exponential(
        SingleModeKind::Squeezing(r),
        cutoff,
        |a| {
            let a2 = a * a;
            (&a2 - a2.adjoint()) * Complex64::new(r / 2.0, 0.0)
        },
        &format!("squeezing r={r}"),
    )
}

/// `D_α = exp(α a† − α* a)`.
pub fn displacement(alpha: Complex64, cutoff: usize) -> Result<SingleModeUnitary> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(domain("displacement must be finite"));
    }
    if alpha == C0 {
        return Ok(identity(SingleModeKind::Displacement(C0), cutoff));
    }
    truncated_exponential(
        SingleModeKind::Displacement(alpha),
        cutoff,
        |a| a.adjoint() * alpha - a * alpha.conj(),
        &format!("displacement |α|²={:.3}", alpha.norm_sqr()),
    )
}

fn identity(kind: SingleModeKind, cutoff: usize) -> SingleModeUnitary {
    SingleModeUnitary {
        kind,
        matrix: DMatrix::identity(cutoff + 1, cutoff + 1),
        defect: 0.0,
    }
}

/// Anti-unitary phase-space mirror about the axis at angle `theta`:
/// `ψ(n) → e^{−2inθ} ψ(n)*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflection {
    pub theta: f64,
}

impl Reflection {
    pub fn new(theta: f64) -> Self {
        Self { theta }
    }

    pub fn apply(&self, psi: &FockState) -> FockState {
        let v = DVector::from_iterator(
            psi.dim(),
            psi.amplitudes()
                .iter()
                .enumerate()
                .map(|(n, a)| Complex64::new(0.0, -2.0 * n as f64 * self.theta).exp() * a.conj()),
        );
        FockState::from_vector(v)
            .expect("reflection preserves the norm")
            .with_tail(psi.tail_mass())
    }

    /// `M_θ ρ M_θ†`, i.e. `ρ_mn → e^{−2i(m−n)θ} ρ_mn*`.
    pub fn apply_density(&self, rho: &DensityOperator) -> DensityOperator {
        let m = rho.matrix();
        let out = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
            Complex64::new(0.0, -2.0 * (i as f64 - j as f64) * self.theta).exp() * m[(i, j)].conj()
        });
        DensityOperator::from_matrix_with_deficit(out, rho.deficit()).expect("reflection preserves validity")
    }
}

/// `reflection(θ)` as a free function.
pub fn reflection(theta: f64) -> Reflection {
    Reflection::new(theta)
}

/// A phase-space symmetry: rotation `R_θ` or reflection `M_θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symmetry {
    Rotation(f64),
    Reflection(f64),
}

impl Symmetry {
    pub fn apply(&self, psi: &FockState) -> FockState {
        match *self {
            Symmetry::Rotation(theta) => {
                let v = DVector::from_iterator(
                    psi.dim(),
                    psi.amplitudes()
                        .iter()
                        .enumerate()
                        .map(|(n, a)| Complex64::new(0.0, -(n as f64) * theta).exp() * a),
                );
                FockState::from_vector(v)
                    .expect("rotation preserves the norm")
                    .with_tail(psi.tail_mass())
            }
            Symmetry::Reflection(theta) => Reflection::new(theta).apply(psi),
        }
    }

    pub fn apply_density(&self, rho: &DensityOperator) -> DensityOperator {
        match *self {
            Symmetry::Rotation(theta) => {
                let m = rho.matrix();
                let out = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
                    Complex64::new(0.0, -(i as f64 - j as f64) * theta).exp() * m[(i, j)]
                });
                DensityOperator::from_matrix_with_deficit(out, rho.deficit())
                    .expect("rotation preserves validity")
            }
            Symmetry::Reflection(theta) => Reflection::new(theta).apply_density(rho),
        }
    }

    pub fn angle(&self) -> f64 {
        match *self {
            Symmetry::Rotation(t) | Symmetry::Reflection(t) => t,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{make_coherent, make_fock, moments, partial_trace_second, TwoModeOperator};
    use approx::assert_abs_diff_eq;
    use core::f64::consts::{FRAC_1_SQRT_2, PI};

    fn product_table(a: &FockState, b: &FockState) -> DMatrix<Complex64> {
        DMatrix::from_fn(a.dim(), b.dim(), |i, j| a.amplitude(i) * b.amplitude(j))
    }

    #[test]
    fn transparent_splitter_is_identity() {
        let bs = BeamSplitter::new(1.0, 6).unwrap();
        for b in bs.blocks() {
            assert_eq!(b, &DMatrix::identity(b.nrows(), b.ncols()));
        }
    }

    #[test]
    fn opaque_splitter_swaps_with_sign() {
        let bs = BeamSplitter::new(0.0, 4).unwrap();
        // U|i, j⟩ = (−1)^i |j, i⟩
        for i in 0..=4 {
            for j in 0..=4 {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                assert_abs_diff_eq!(bs.amplitude(j, i, i, j), sign, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn hong_ou_mandel() {
        let bs = BeamSplitter::new(0.5, 2).unwrap();
        let one = make_fock(1, 2).unwrap();
        let out = bs.apply(&product_table(&one, &one)).unwrap();
        assert_abs_diff_eq!(out[(2, 0)].re, FRAC_1_SQRT_2, epsilon = 1e-14);
        assert_abs_diff_eq!(out[(0, 2)].re, -FRAC_1_SQRT_2, epsilon = 1e-14);
        assert_abs_diff_eq!(out[(1, 1)].norm(), 0.0, epsilon = 1e-14);
        let reduced = partial_trace_second(&TwoModeOperator::from_pure(&out)).unwrap();
        let expected = DensityOperator::diagonal(&[0.5, 0.0, 0.5, 0.0, 0.0]).unwrap();
        assert!(reduced.trace_distance(&expected) < 1e-12);

        let vac = make_fock(0, 2).unwrap();
        let out = bs.apply(&product_table(&vac, &vac)).unwrap();
        assert_abs_diff_eq!(out[(0, 0)].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn blocks_are_orthogonal() {
        for &eta in &[0.0, 0.13, 0.5, 0.77, 1.0] {
            let bs = BeamSplitter::new(eta, 30).unwrap();
            assert!(bs.unitarity_defect() < 1e-12, "eta {eta}: {}", bs.unitarity_defect());
        }
        assert!(BeamSplitter::new(1.2, 3).is_err());
        assert!(BeamSplitter::new(-0.1, 3).is_err());
    }

    #[test]
    fn rotation_examples() {
        let r0 = rotation(0.0, 5);
        assert_eq!(r0.matrix(), &DMatrix::identity(6, 6));
        let psi = FockState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let out = rotation(2.0 * PI / 3.0, 3).apply(&psi).unwrap();
        assert!((out.inner(&psi).norm() - 1.0).abs() < 1e-14);
        let one = make_fock(1, 3).unwrap();
        let out = rotation(PI, 3).apply(&one).unwrap();
        assert_abs_diff_eq!(out.amplitude(1).re, -1.0, epsilon = 1e-14);
    }

    #[test]
    fn squeezing_examples() {
        assert_eq!(squeezing(0.0, 8).unwrap().matrix(), &DMatrix::identity(9, 9));
        let s = squeezing(0.5, 40).unwrap();
        let sq = s.apply(&make_fock(0, 40).unwrap()).unwrap();
        let m = moments(&sq.to_density());
        assert_abs_diff_eq!(m.cov[0][0], (-1.0f64).exp() / 2.0, epsilon = 1e-4);
        assert_abs_diff_eq!(m.cov[1][1], (1.0f64).exp() / 2.0, epsilon = 1e-4);
        assert!(matches!(squeezing(5.0, 10), Err(Error::Truncation { .. })));
    }

    #[test]
    fn displacement_examples() {
        assert_eq!(displacement(C0, 5).unwrap().matrix(), &DMatrix::identity(6, 6));
        let alpha = Complex64::new(1.0, 0.0);
        let d = displacement(alpha, 40).unwrap();
        let out = d.apply(&make_fock(0, 40).unwrap()).unwrap();
        let coh = make_coherent(alpha, 40).unwrap();
        assert!(out.inner(&coh).norm_sqr() >= 1.0 - 1e-8);
        assert!(matches!(
            displacement(Complex64::new(10.0, 0.0), 15),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn reflection_examples() {
        let real = FockState::from_real(&[0.6, -0.8]).unwrap();
        assert_eq!(reflection(0.0).apply(&real), real);
        let h = FRAC_1_SQRT_2;
        let psi = FockState::new(vec![Complex64::new(h, 0.0), Complex64::new(0.0, h)]).unwrap();
        let out = reflection(0.0).apply(&psi);
        assert_abs_diff_eq!(out.amplitude(1).im, -h, epsilon = 1e-15);
        let psi03 = FockState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let out = reflection(2.0 * PI / 3.0).apply(&psi03);
        assert!((out.inner(&psi03).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_mode_squeezer_examples() {
        let id = TwoModeSqueezer::new(1.0, 5).unwrap();
        for i in 0..4 {
            for l in 0..4 {
                let col = id.column(i, l, 6);
                for (m, v) in col.iter().enumerate() {
                    let expected = if m == i { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(*v, expected, epsilon = 1e-14);
                }
            }
        }

        let g = 2.0;
        let sq = TwoModeSqueezer::new(g, 40).unwrap();
        let vac = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        let out = sq.apply(&vac, 40);
        let reduced = partial_trace_second(&TwoModeOperator::from_pure(&out)).unwrap();
        let thermal = crate::fock::make_thermal(g - 1.0, 40).unwrap();
        assert!(reduced.trace_distance(&thermal) < 1e-9);

        assert!(matches!(TwoModeSqueezer::new(100.0, 10), Err(Error::Truncation { .. })));
        assert!(TwoModeSqueezer::new(0.5, 10).is_err());
    }

    #[test]
    fn two_mode_squeezer_conserves_norm_and_difference() {
        let sq = TwoModeSqueezer::new(1.5, 60).unwrap();
        for &(i, l) in &[(0usize, 0usize), (3, 1), (1, 4), (5, 5)] {
            let col = sq.column(i, l, 150);
            let norm: f64 = col.iter().map(|v| v * v).sum();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-10);
            // no amplitude on m < i − l
            for (m, v) in col.iter().enumerate() {
                if (m as isize) < i as isize - l as isize {
                    assert_eq!(*v, 0.0);
                }
            }
        }
    }

    #[test]
    fn two_mode_squeezer_heisenberg_relation() {
        // ⟨a⟩ after S on |α⟩|0⟩ equals √G α
        let g = 1.7;
        let alpha = Complex64::new(0.4, 0.2);
        let coh = make_coherent(alpha, 30).unwrap();
        let vac = make_fock(0, 0).unwrap();
        let sq = TwoModeSqueezer::new(g, 80).unwrap();
        let out = sq.apply(&product_table(&coh, &vac), 80);
        let reduced = partial_trace_second(&TwoModeOperator::from_pure(&out)).unwrap();
        let m = reduced.mean_field();
        assert_abs_diff_eq!(m.re, g.sqrt() * alpha.re, epsilon = 1e-9);
        assert_abs_diff_eq!(m.im, g.sqrt() * alpha.im, epsilon = 1e-9);
    }

    #[test]
    fn symmetry_on_density_matches_state_action() {
        let psi = FockState::new(vec![
            Complex64::new(0.2, 0.4),
            Complex64::new(-0.3, 0.1),
            Complex64::new(0.5, -0.6),
        ])
        .unwrap();
        for sym in [Symmetry::Rotation(0.9), Symmetry::Reflection(0.4)] {
            let a = sym.apply(&psi).to_density();
            let b = sym.apply_density(&psi.to_density());
            assert!(a.trace_distance(&b) < 1e-13);
        }
    }
}

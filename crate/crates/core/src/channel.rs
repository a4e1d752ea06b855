//! Attenuators and amplifiers with arbitrary single-mode environments.
//!
//! A channel is `M[ρ] = Tr₂[U (ρ ⊗ σ) U†]` with `U` a beam splitter
//! (attenuator) or a two-mode squeezer (amplifier). It is applied through
//! Kraus operators `B_{j,k} = √p_j ⟨k| U |e_j⟩` where `σ = Σ p_j |e_j⟩⟨e_j|`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::entropy::{g_function, von_neumann_entropy};
use crate::error::{domain, truncation, Error, Result};
use crate::fock::{make_thermal, moments, thermal_cutoff, DensityOperator, FockState, PhaseSpaceMoments};
use crate::gaussian::{two_mode_squeezer_column, BeamSplitter, Symmetry, TwoModeSqueezer};
use crate::linalg::{self, C0};

/// Largest `|Tr σa|` accepted for an environment.
pub const ENV_MEAN_TOL: f64 = 1e-8;
/// Largest `|Tr σa²|` for which an environment counts as having `cov ∝ I`.
pub const ENV_SQUEEZE_TOL: f64 = 1e-8;
/// Thermal environments are truncated where the geometric tail drops below this.
pub const THERMAL_ENV_TAIL: f64 = 1e-12;
/// Worst-case trace loss accepted when choosing an amplifier output cutoff.
pub const AMPLIFIER_TRACE_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_OUTPUT_CUTOFF: usize = 256;
/// Environment eigencomponents lighter than this are dropped.
const COMPONENT_FLOOR: f64 = 1e-14;
/// Largest environment-asymmetry accepted by [`ChannelSpec::covariance_check`].
pub const SYMMETRY_TOL: f64 = 1e-8;

/// State of the environment mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Environment {
    Fock(usize),
    Thermal(f64),
    /// Fock-diagonal state with populations `p`.
    Diagonal(Vec<f64>),
    Pure(FockState),
    Mixed(DensityOperator),
}

impl Environment {
    fn validate(&self) -> Result<()> {
        match self {
            Environment::Fock(_) => Ok(()),
            Environment::Thermal(n) => {
                if !(*n >= 0.0) || !n.is_finite() {
                    return Err(domain(format!("thermal photon number must be ≥ 0, got {n}")));
                }
                Ok(())
            }
            Environment::Diagonal(p) => {
                if p.is_empty() || p.iter().any(|&x| !(x >= 0.0)) {
                    return Err(domain("diagonal environment needs non-negative probabilities"));
                }
                let total: f64 = p.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(domain(format!("diagonal environment sums to {total}, not 1")));
                }
                Ok(())
            }
            Environment::Pure(_) | Environment::Mixed(_) => {
                let mean = self.density().mean_field();
                if mean.norm() > ENV_MEAN_TOL {
                    return Err(domain(format!(
                        "environment has mean field {mean}; displace it to zero mean first"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Fock-diagonal environments make the channel phase-covariant.
    pub fn is_diagonal(&self) -> bool {
        match self {
            Environment::Fock(_) | Environment::Thermal(_) | Environment::Diagonal(_) => true,
            Environment::Pure(_) | Environment::Mixed(_) => self.density().off_diagonal_weight() <= 1e-14,
        }
    }

    pub fn is_thermal(&self) -> bool {
        matches!(self, Environment::Thermal(_) | Environment::Fock(0))
    }

    pub fn mean_photon_number(&self) -> f64 {
        match self {
            Environment::Fock(n) => *n as f64,
            Environment::Thermal(n) => *n,
            Environment::Diagonal(p) => p.iter().enumerate().map(|(n, w)| n as f64 * w).sum(),
            Environment::Pure(psi) => psi.mean_photon_number(),
            Environment::Mixed(rho) => rho.mean_photon_number(),
        }
    }

    /// Density operator; thermal states are truncated at [`THERMAL_ENV_TAIL`].
    pub fn density(&self) -> DensityOperator {
        match self {
            Environment::Fock(n) => {
                let mut p = vec![0.0; n + 1];
                p[*n] = 1.0;
                DensityOperator::diagonal(&p).expect("valid populations")
            }
            Environment::Thermal(n) => {
                make_thermal(*n, thermal_cutoff(*n, THERMAL_ENV_TAIL)).expect("validated photon number")
            }
            Environment::Diagonal(p) => DensityOperator::diagonal(p).expect("validated populations"),
            Environment::Pure(psi) => psi.to_density(),
            Environment::Mixed(rho) => rho.clone(),
        }
    }

    /// `σ = Σ p_j |e_j⟩⟨e_j|` with trailing zero amplitudes trimmed.
    pub fn components(&self) -> Result<Vec<(f64, FockState)>> {
        let raw: Vec<(f64, FockState)> = match self {
            Environment::Pure(psi) => vec![(1.0, psi.clone())],
            Environment::Mixed(rho) => {
                let (lam, vecs) = linalg::hermitian_eigen(rho.matrix());
                let lam = linalg::clip_spectrum(&lam)?;
                let mut out = Vec::new();
                for (k, &l) in lam.iter().enumerate() {
                    if l > COMPONENT_FLOOR {
                        out.push((l, FockState::from_vector(vecs.column(k).into_owned())?));
                    }
                }
                out
            }
            _ => {
                let pops = self.density().populations();
                let mut out = Vec::new();
                for (n, &p) in pops.iter().enumerate() {
                    if p > COMPONENT_FLOOR {
                        let mut v = vec![C0; n + 1];
                        v[n] = Complex64::new(1.0, 0.0);
                        out.push((p, FockState::new(v)?));
                    }
                }
                out
            }
        };
        let total: f64 = raw.iter().map(|(w, _)| w).sum();
        raw.into_iter()
            .map(|(w, psi)| {
                let top = (0..psi.dim()).rev().find(|&n| psi.amplitude(n).norm() > 1e-15).unwrap_or(0);
                Ok((w / total, psi.with_cutoff(top)?))
            })
            .collect()
    }

    /// Largest photon number carried by any component.
    pub fn cutoff(&self) -> Result<usize> {
        Ok(self.components()?.iter().map(|(_, e)| e.cutoff()).max().unwrap_or(0))
    }
}

/// Rotation, squeezing and displacement that bring a state's moments to the
/// normal form `mean = 0`, `cov ∝ I`: apply `D(−α)`, then `R(−φ)`, then `S(−r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalForm {
    pub displacement: Complex64,
    /// Angle of the squeezed quadrature measured from the `x` axis.
    pub rotation: f64,
    pub squeezing: f64,
}

impl NormalForm {
    pub fn of(m: &PhaseSpaceMoments) -> Self {
        let disp = Complex64::new(m.mean[0], m.mean[1]) / core::f64::consts::SQRT_2;
        let (a, b, c) = (m.cov[0][0], m.cov[0][1], m.cov[1][1]);
        let half_tr = (a + c) / 2.0;
        let spread = (((a - c) / 2.0).powi(2) + b * b).sqrt();
        let small = half_tr - spread;
        let large = half_tr + spread;
        // direction of the small eigenvalue
        let rotation = 0.5 * (-2.0 * b).atan2(c - a);
        Self {
            displacement: disp,
            rotation,
            squeezing: if small > 0.0 { 0.25 * (large / small).ln() } else { f64::INFINITY },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelKind {
    Attenuator { eta: f64 },
    Amplifier { gain: f64 },
}

/// A channel description: coupling strength plus environment.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    kind: ChannelKind,
    environment: Environment,
    max_output_cutoff: usize,
}

/// Outcome of a symmetry-covariance test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CovarianceCheck {
    /// `‖M[GρG†] − G M[ρ] G†‖₁`.
    Residual(f64),
    /// The environment is not invariant under the symmetry; carries `‖GσG† − σ‖₁`.
    EnvironmentAsymmetric(f64),
}

impl ChannelSpec {
    pub fn attenuator(eta: f64, environment: Environment) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(domain(format!("transmittance must lie in [0, 1], got {eta}")));
        }
        environment.validate()?;
        Ok(Self {
            kind: ChannelKind::Attenuator { eta },
            environment,
            max_output_cutoff: DEFAULT_MAX_OUTPUT_CUTOFF,
        })
    }

    pub fn amplifier(gain: f64, environment: Environment) -> Result<Self> {
        if !(gain >= 1.0) || !gain.is_finite() {
            return Err(domain(format!("gain must be ≥ 1, got {gain}")));
        }
        environment.validate()?;
        Ok(Self {
            kind: ChannelKind::Amplifier { gain },
            environment,
            max_output_cutoff: DEFAULT_MAX_OUTPUT_CUTOFF,
        })
    }

    /// Attenuator with the environment in `|n⟩`.
    pub fn fock_attenuator(eta: f64, n: usize) -> Result<Self> {
        Self::attenuator(eta, Environment::Fock(n))
    }

    /// Cap for the amplifier's adaptive output cutoff.
    pub fn with_max_output_cutoff(mut self, cap: usize) -> Self {
        self.max_output_cutoff = cap;
        self
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn environment(&self) -> &Environment {
        &self.environment
    }

    pub fn max_output_cutoff(&self) -> usize {
        self.max_output_cutoff
    }

    /// `η` or `G`.
    pub fn transmissivity(&self) -> f64 {
        match self.kind {
            ChannelKind::Attenuator { eta } => eta,
            ChannelKind::Amplifier { gain } => gain,
        }
    }

    /// Photons added at the output for vacuum input: `(1−η)n̄` or `(G−1)(n̄+1)`.
    pub fn added_noise(&self) -> f64 {
        let n = self.environment.mean_photon_number();
        match self.kind {
            ChannelKind::Attenuator { eta } => (1.0 - eta) * n,
            ChannelKind::Amplifier { gain } => (gain - 1.0) * (n + 1.0),
        }
    }

    pub fn is_phase_covariant(&self) -> bool {
        self.environment.is_diagonal()
    }

    pub fn is_gaussian(&self) -> bool {
        self.environment.is_thermal()
    }

    /// Same coupling with the environment replaced by the thermal state of
    /// equal photon number. Requires `cov(σ) ∝ I`.
    pub fn gaussian_equivalent(&self) -> Result<ChannelSpec> {
        if let Environment::Thermal(_) = self.environment {
            return Ok(self.clone());
        }
        let sigma = self.environment.density();
        let sq = sigma.mean_field_squared();
        if sq.norm() > ENV_SQUEEZE_TOL {
            let nf = NormalForm::of(&moments(&sigma));
            return Err(domain(format!(
                "environment covariance is not proportional to the identity (|Tr σa²| = {:.3e}); \
                 rotate by {:.6} and squeeze by {:.6} first",
                sq.norm(),
                -nf.rotation,
                -nf.squeezing
            )));
        }
        Ok(Self {
            kind: self.kind,
            environment: Environment::Thermal(sigma.mean_photon_number()),
            max_output_cutoff: self.max_output_cutoff,
        })
    }

    /// Output moments: `η cov + (1−η) cov_σ` for attenuators and
    /// `G cov + (G−1) cov_σ*` for amplifiers, where `*` flips the sign of `p`.
    pub fn output_covariance(&self, input: &PhaseSpaceMoments) -> PhaseSpaceMoments {
        let env = moments(&self.environment.density());
        match self.kind {
            ChannelKind::Attenuator { eta } => {
                let t = eta.sqrt();
                let mut out = PhaseSpaceMoments::new([t * input.mean[0], t * input.mean[1]], [[0.0; 2]; 2]);
                for i in 0..2 {
                    for j in 0..2 {
                        out.cov[i][j] = eta * input.cov[i][j] + (1.0 - eta) * env.cov[i][j];
                    }
                }
                out
            }
            ChannelKind::Amplifier { gain } => {
                let t = gain.sqrt();
                let mut out = PhaseSpaceMoments::new([t * input.mean[0], t * input.mean[1]], [[0.0; 2]; 2]);
                let sign = [[1.0, -1.0], [-1.0, 1.0]];
                for i in 0..2 {
                    for j in 0..2 {
                        out.cov[i][j] = gain * input.cov[i][j] + (gain - 1.0) * sign[i][j] * env.cov[i][j];
                    }
                }
                out
            }
        }
    }

    /// Kraus representation for inputs up to `input_cutoff` photons.
    pub fn compile(&self, input_cutoff: usize) -> Result<Channel> {
        self.compile_with(input_cutoff, None)
    }

    /// As [`compile`](Self::compile), reusing a precomputed beam splitter when
    /// it has enough blocks.
    pub fn compile_with(&self, input_cutoff: usize, splitter: Option<&BeamSplitter>) -> Result<Channel> {
        let comps = self.environment.components()?;
        match self.kind {
            ChannelKind::Attenuator { eta } => compile_attenuator(self, eta, input_cutoff, &comps, splitter),
            ChannelKind::Amplifier { gain } => compile_amplifier(self, gain, input_cutoff, &comps),
        }
    }

    /// `M[ρ]`, compiled at the cutoff of `rho`.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        self.compile(rho.cutoff())?.apply(rho)
    }

    /// Tests `M[GρG†] = G M[ρ] G†` for a rotation or reflection `G`. The
    /// environment must be invariant under the matching symmetry: the same `G`
    /// for attenuators and its phase conjugate for amplifiers.
    pub fn covariance_check(&self, symmetry: Symmetry, rho: &DensityOperator) -> Result<CovarianceCheck> {
        let env_sym = match (self.kind, symmetry) {
            (ChannelKind::Attenuator { .. }, s) => s,
            (ChannelKind::Amplifier { .. }, Symmetry::Rotation(t)) => Symmetry::Rotation(-t),
            (ChannelKind::Amplifier { .. }, Symmetry::Reflection(t)) => Symmetry::Reflection(-t),
        };
        let sigma = self.environment.density();
        let asym = env_sym.apply_density(&sigma).trace_distance(&sigma);
        if asym > SYMMETRY_TOL {
            return Ok(CovarianceCheck::EnvironmentAsymmetric(asym));
        }
        let ch = self.compile(rho.cutoff())?;
        let lhs = ch.apply(&symmetry.apply_density(rho))?;
        let rhs = symmetry.apply_density(&ch.apply(rho)?);
        Ok(CovarianceCheck::Residual(lhs.trace_distance(&rhs)))
    }

    /// `S(M[|0⟩⟨0|])`.
    pub fn vacuum_output_entropy(&self) -> Result<f64> {
        let vac = FockState::new(vec![Complex64::new(1.0, 0.0)])?;
        self.compile(0)?.output_entropy_pure(&vac)
    }

    /// Minimum output entropy of the Gaussian-equivalent channel, `g(N)` with
    /// `N` the added noise.
    pub fn s_min_gaussian(&self) -> Result<f64> {
        g_function(self.added_noise())
    }
}

/// One sparse Kraus operator as `(row, column, value)` triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct Kraus {
    entries: Vec<(usize, usize, Complex64)>,
}

impl Kraus {
    fn from_dense(m: &DMatrix<Complex64>) -> Option<Self> {
        let mut entries = Vec::new();
        for i in 0..m.ncols() {
            for r in 0..m.nrows() {
                let v = m[(r, i)];
                if v != C0 {
                    entries.push((r, i, v));
                }
            }
        }
        if entries.is_empty() {
            None
        } else {
            Some(Self { entries })
        }
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn to_dense(&self, rows: usize, cols: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(rows, cols, C0);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }
}

/// A channel compiled to Kraus operators for a fixed input cutoff.
#[derive(Debug, Clone)]
pub struct Channel {
    spec: ChannelSpec,
    input_cutoff: usize,
    output_cutoff: usize,
    kraus: Vec<Kraus>,
    deficit: f64,
}

fn compile_attenuator(
    spec: &ChannelSpec,
    eta: f64,
    input_cutoff: usize,
    comps: &[(f64, FockState)],
    splitter: Option<&BeamSplitter>,
) -> Result<Channel> {
    let env_cut = comps.iter().map(|(_, e)| e.cutoff()).max().unwrap_or(0);
    let out_cut = input_cutoff + env_cut;
    let owned;
    let bs = match splitter {
        Some(b) if b.max_total() >= out_cut && b.eta() == eta => b,
        _ => {
            owned = BeamSplitter::with_max_total(eta, input_cutoff, out_cut)?;
            &owned
        }
    };
    let (din, dout) = (input_cutoff + 1, out_cut + 1);
    let mut kraus = Vec::new();
    for (w, e) in comps {
        let sw = w.sqrt();
        for k in 0..dout {
            let mut b = DMatrix::from_element(dout, din, C0);
            for l in 0..e.dim() {
                let el = e.amplitude(l);
                if el == C0 {
                    continue;
                }
                for i in 0..din {
                    let n = i + l;
                    if n < k {
                        continue;
                    }
                    let m = n - k;
                    b[(m, i)] += el * (sw * bs.blocks()[n][(m, i)]);
                }
            }
            if let Some(op) = Kraus::from_dense(&b) {
                kraus.push(op);
            }
        }
    }
    Ok(Channel {
        spec: spec.clone(),
        input_cutoff,
        output_cutoff: out_cut,
        kraus,
        deficit: 0.0,
    })
}

fn amplifier_kraus(
    gain: f64,
    input_cutoff: usize,
    out_cut: usize,
    comps: &[(f64, FockState)],
) -> (Vec<Kraus>, f64) {
    let (din, dout) = (input_cutoff + 1, out_cut + 1);
    // kept[i]: retained trace for the basis input |i⟩
    let mut kept = vec![0.0; din];
    let mut kraus = Vec::new();
    for (w, e) in comps {
        let sw = w.sqrt();
        let mut ops: Vec<DMatrix<Complex64>> = (0..dout).map(|_| DMatrix::from_element(dout, din, C0)).collect();
        for l in 0..e.dim() {
            let el = e.amplitude(l);
            if el == C0 {
                continue;
            }
            for i in 0..din {
                let col = two_mode_squeezer_column(gain, i, l, out_cut);
                for (m, v) in col.iter().enumerate() {
                    let k = m as isize - i as isize + l as isize;
                    if k < 0 || k as usize >= dout {
                        continue;
                    }
                    ops[k as usize][(m, i)] += el * (sw * v);
                }
            }
        }
        for b in &ops {
            for i in 0..din {
                kept[i] += b.column(i).norm_squared();
            }
            if let Some(op) = Kraus::from_dense(b) {
                kraus.push(op);
            }
        }
    }
    let worst = kept.iter().map(|k| (1.0 - k).max(0.0)).fold(0.0, f64::max);
    (kraus, worst)
}

fn compile_amplifier(spec: &ChannelSpec, gain: f64, input_cutoff: usize, comps: &[(f64, FockState)]) -> Result<Channel> {
    let env_cut = comps.iter().map(|(_, e)| e.cutoff()).max().unwrap_or(0);
    let cap = spec.max_output_cutoff;
    let mut out_cut = (2 * (input_cutoff + env_cut)).max(8);
    loop {
        let out = out_cut.min(cap);
        let fits = TwoModeSqueezer::new(gain, out).is_ok();
        if fits {
            let (kraus, worst) = amplifier_kraus(gain, input_cutoff, out, comps);
            if worst < AMPLIFIER_TRACE_TOL {
                return Ok(Channel {
                    spec: spec.clone(),
                    input_cutoff,
                    output_cutoff: out,
                    kraus,
                    deficit: worst,
                });
            }
            if out == cap {
                return Err(truncation(
                    format!("amplifier G={gain} output cutoff capped at {cap}"),
                    worst,
                    AMPLIFIER_TRACE_TOL,
                ));
            }
        } else if out == cap {
            let defect = ((gain - 1.0) / gain).powi(cap as i32 + 1);
            return Err(truncation(
                format!("amplifier G={gain} output cutoff capped at {cap}"),
                defect,
                AMPLIFIER_TRACE_TOL,
            ));
        }
        out_cut *= 2;
    }
}

impl Channel {
    pub fn spec(&self) -> &ChannelSpec {
        &self.spec
    }

    pub fn input_cutoff(&self) -> usize {
        self.input_cutoff
    }

    pub fn output_cutoff(&self) -> usize {
        self.output_cutoff
    }

    pub fn kraus(&self) -> &[Kraus] {
        &self.kraus
    }

    /// Worst-case trace lost for a basis input (zero for attenuators).
    pub fn deficit(&self) -> f64 {
        self.deficit
    }

    fn check_input(&self, cutoff: usize) -> Result<()> {
        if cutoff > self.input_cutoff {
            return Err(Error::DimensionMismatch {
                expected: self.input_cutoff,
                got: cutoff,
            });
        }
        Ok(())
    }

    /// `Σ B ρ B†`, renormalized with the lost trace added to the deficit.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        self.check_input(rho.cutoff())?;
        let r = rho.resized(self.input_cutoff);
        let rm = r.matrix();
        let (din, dout) = (self.input_cutoff + 1, self.output_cutoff + 1);
        let mut out = DMatrix::from_element(dout, dout, C0);
        let mut t = DMatrix::from_element(dout, din, C0);
        for b in &self.kraus {
            t.fill(C0);
            for &(m, i, v) in &b.entries {
                for c in 0..din {
                    t[(m, c)] += v * rm[(i, c)];
                }
            }
            for &(m2, i, v) in &b.entries {
                let vc = v.conj();
                for m in 0..dout {
                    out[(m, m2)] += t[(m, i)] * vc;
                }
            }
        }
        DensityOperator::from_matrix_with_deficit(out, rho.deficit())
    }

    /// Columns `B_k ψ`, so that `M[|ψ⟩⟨ψ|] = V V†`.
    pub fn purification_columns(&self, psi: &FockState) -> Result<DMatrix<Complex64>> {
        self.check_input(psi.cutoff())?;
        let dout = self.output_cutoff + 1;
        let mut v = DMatrix::from_element(dout, self.kraus.len(), C0);
        for (k, b) in self.kraus.iter().enumerate() {
            for &(m, i, x) in &b.entries {
                v[(m, k)] += x * psi.amplitude(i);
            }
        }
        Ok(v)
    }

    /// `M[|ψ⟩⟨ψ|]`.
    pub fn apply_pure(&self, psi: &FockState) -> Result<DensityOperator> {
        let v = self.purification_columns(psi)?;
        DensityOperator::from_matrix_with_deficit(&v * v.adjoint(), psi.tail_mass())
    }

    /// Nonzero output spectrum for a pure input, from the smaller of the two
    /// Gram matrices of the purification, normalized to unit sum.
    pub fn output_spectrum_pure(&self, psi: &FockState) -> Result<Vec<f64>> {
        let v = self.purification_columns(psi)?;
        let gram = if v.ncols() < v.nrows() {
            v.adjoint() * &v
        } else {
            &v * v.adjoint()
        };
        let lam = linalg::clip_spectrum(&linalg::hermitian_eigenvalues(&gram))?;
        let total: f64 = lam.iter().sum();
        Ok(lam.into_iter().map(|l| l / total).collect())
    }

    /// `S(M[|ψ⟩⟨ψ|])`.
    pub fn output_entropy_pure(&self, psi: &FockState) -> Result<f64> {
        linalg::entropy_of_spectrum(&self.output_spectrum_pure(psi)?)
    }

    /// `S(M[ρ])`.
    pub fn output_entropy(&self, rho: &DensityOperator) -> Result<f64> {
        von_neumann_entropy(&self.apply(rho)?)
    }
}

/// `Σ_k ‖B_k ψ‖²`, useful to spot-check trace preservation.
pub fn output_trace_pure(channel: &Channel, psi: &FockState) -> Result<f64> {
    let v = channel.purification_columns(psi)?;
    Ok(v.norm_squared())
}

/// Resolves a state vector to a [`FockState`] from amplitude pairs.
pub fn state_from_pairs(pairs: &[[f64; 2]]) -> Result<FockState> {
    FockState::from_vector(DVector::from_iterator(
        pairs.len(),
        pairs.iter().map(|p| Complex64::new(p[0], p[1])),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{make_coherent, make_fock};
    use crate::gaussian::rotation;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::{FRAC_1_SQRT_2, LN_2, PI};

    fn three_fold() -> FockState {
        FockState::from_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).unwrap()
    }

    #[test]
    fn hong_ou_mandel_outputs() {
        let ch = ChannelSpec::fock_attenuator(0.5, 1).unwrap();
        let out0 = ch.apply(&make_fock(0, 2).unwrap().to_density()).unwrap();
        let want0 = DensityOperator::diagonal(&[0.5, 0.5]).unwrap();
        assert!(out0.trace_distance(&want0) < 1e-12);
        let out1 = ch.apply(&make_fock(1, 2).unwrap().to_density()).unwrap();
        let want1 = DensityOperator::diagonal(&[0.5, 0.0, 0.5]).unwrap();
        assert!(out1.trace_distance(&want1) < 1e-12);
    }

    #[test]
    fn pure_loss_keeps_coherent_states_pure() {
        let alpha = Complex64::new(0.7, -0.4);
        let eta = 0.3;
        let ch = ChannelSpec::fock_attenuator(eta, 0).unwrap();
        let out = ch.apply(&make_coherent(alpha, 30).unwrap().to_density()).unwrap();
        assert_abs_diff_eq!(out.purity(), 1.0, epsilon = 1e-8);
        let m = moments(&out);
        let t = eta.sqrt() * core::f64::consts::SQRT_2;
        assert_abs_diff_eq!(m.mean[0], t * alpha.re, epsilon = 1e-8);
        assert_abs_diff_eq!(m.mean[1], t * alpha.im, epsilon = 1e-8);
    }

    #[test]
    fn pure_and_mixed_paths_agree() {
        let ch = ChannelSpec::attenuator(0.4, Environment::Pure(three_fold())).unwrap();
        let psi = FockState::new(vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.5),
            Complex64::new(0.4, -0.3),
        ])
        .unwrap();
        let c = ch.compile(2).unwrap();
        let a = c.apply(&psi.to_density()).unwrap();
        let b = c.apply_pure(&psi).unwrap();
        assert!(a.trace_distance(&b) < 1e-12);
        let s1 = von_neumann_entropy(&a).unwrap();
        let s2 = c.output_entropy_pure(&psi).unwrap();
        assert_abs_diff_eq!(s1, s2, epsilon = 1e-10);
    }

    #[test]
    fn gaussian_equivalent_examples() {
        let ch = ChannelSpec::fock_attenuator(0.3, 1).unwrap();
        assert_eq!(ch.gaussian_equivalent().unwrap().environment(), &Environment::Thermal(1.0));
        let ch = ChannelSpec::attenuator(0.3, Environment::Pure(three_fold())).unwrap();
        match ch.gaussian_equivalent().unwrap().environment() {
            Environment::Thermal(n) => assert_abs_diff_eq!(*n, 1.5, epsilon = 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        let th = ChannelSpec::attenuator(0.3, Environment::Thermal(0.7)).unwrap();
        assert_eq!(th.gaussian_equivalent().unwrap(), th);

        // (|0⟩ + |2⟩)/√2 has Tr σa² ≠ 0
        let sq = FockState::from_real(&[1.0, 0.0, 1.0]).unwrap();
        let ch = ChannelSpec::attenuator(0.3, Environment::Pure(sq)).unwrap();
        assert!(ch.gaussian_equivalent().is_err());
    }

    #[test]
    fn displaced_environment_is_rejected() {
        let psi = FockState::from_real(&[1.0, 1.0]).unwrap();
        assert!(ChannelSpec::attenuator(0.5, Environment::Pure(psi)).is_err());
        assert!(ChannelSpec::attenuator(0.5, Environment::Diagonal(vec![0.5, 0.4])).is_err());
        assert!(ChannelSpec::attenuator(1.5, Environment::Fock(0)).is_err());
        assert!(ChannelSpec::amplifier(0.5, Environment::Fock(0)).is_err());
    }

    #[test]
    fn output_covariance_examples() {
        let vac = PhaseSpaceMoments::new([0.0; 2], [[0.5, 0.0], [0.0, 0.5]]);
        let ch = ChannelSpec::attenuator(0.5, Environment::Thermal(1.0)).unwrap();
        let out = ch.output_covariance(&vac);
        assert_abs_diff_eq!(out.cov[0][0], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(out.cov[1][1], 1.0, epsilon = 1e-10);
        let id = ChannelSpec::attenuator(1.0, Environment::Thermal(1.0)).unwrap();
        assert!(id.output_covariance(&vac).max_abs_diff(&vac) < 1e-10);
        let full = ChannelSpec::attenuator(0.0, Environment::Thermal(1.0)).unwrap();
        assert_abs_diff_eq!(full.output_covariance(&vac).cov[0][0], 1.5, epsilon = 1e-10);
    }

    #[test]
    fn covariance_check_examples() {
        let rho = FockState::new(vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.5),
            Complex64::new(0.4, -0.3),
            Complex64::new(0.1, 0.2),
        ])
        .unwrap()
        .to_density();
        let pc = ChannelSpec::attenuator(0.6, Environment::Diagonal(vec![0.2, 0.5, 0.3])).unwrap();
        match pc.covariance_check(Symmetry::Rotation(1.234), &rho).unwrap() {
            CovarianceCheck::Residual(r) => assert!(r <= 1e-8, "{r}"),
            other => panic!("{other:?}"),
        }
        let ch = ChannelSpec::attenuator(0.5, Environment::Pure(three_fold())).unwrap();
        for sym in [Symmetry::Rotation(2.0 * PI / 3.0), Symmetry::Reflection(2.0 * PI / 3.0)] {
            match ch.covariance_check(sym, &rho).unwrap() {
                CovarianceCheck::Residual(r) => assert!(r <= 1e-8, "{r}"),
                other => panic!("{other:?}"),
            }
        }
        assert!(matches!(
            ch.covariance_check(Symmetry::Rotation(PI / 2.0), &rho).unwrap(),
            CovarianceCheck::EnvironmentAsymmetric(_)
        ));
    }

    #[test]
    fn amplifier_with_vacuum_environment_gives_thermal_output() {
        let g = 1.5;
        let ch = ChannelSpec::amplifier(g, Environment::Fock(0)).unwrap();
        let out = ch.apply(&make_fock(0, 0).unwrap().to_density()).unwrap();
        let want = make_thermal(g - 1.0, out.cutoff()).unwrap();
        assert!(out.trace_distance(&want) < 1e-5);
        assert_abs_diff_eq!(
            von_neumann_entropy(&out).unwrap(),
            ch.s_min_gaussian().unwrap(),
            epsilon = 1e-5
        );
    }

    #[test]
    fn amplifier_moments_follow_mixing_law() {
        let ch = ChannelSpec::amplifier(1.3, Environment::Pure(three_fold())).unwrap();
        let psi = make_coherent(Complex64::new(0.3, 0.2), 12).unwrap();
        let sq = crate::gaussian::squeezing(0.2, 20).unwrap().apply(&psi.with_cutoff(20).unwrap()).unwrap();
        let out = ch.apply(&sq.to_density()).unwrap();
        let predicted = ch.output_covariance(&moments(&sq.to_density()));
        assert!(moments(&out).max_abs_diff(&predicted) < 1e-6);
    }

    #[test]
    fn amplifier_cap_is_enforced() {
        let ch = ChannelSpec::amplifier(20.0, Environment::Fock(0))
            .unwrap()
            .with_max_output_cutoff(16);
        assert!(matches!(ch.compile(2), Err(Error::Truncation { .. })));
    }

    #[test]
    fn vacuum_output_entropy_of_fock_attenuator() {
        let ch = ChannelSpec::fock_attenuator(0.5, 1).unwrap();
        assert_abs_diff_eq!(ch.vacuum_output_entropy().unwrap(), LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(ch.s_min_gaussian().unwrap(), g_function(0.5).unwrap(), epsilon = 1e-15);
    }

    #[test]
    fn thermal_environment_matches_gaussian_minimum() {
        let ch = ChannelSpec::attenuator(0.5, Environment::Thermal(1.0)).unwrap();
        assert_abs_diff_eq!(
            ch.vacuum_output_entropy().unwrap(),
            ch.s_min_gaussian().unwrap(),
            epsilon = 1e-5
        );
    }

    #[test]
    fn normal_form_recovers_squeezing() {
        let r = 0.3;
        let s = crate::gaussian::squeezing(r, 40).unwrap();
        let rot = rotation(0.4, 40);
        let psi = rot.apply(&s.apply(&make_fock(0, 40).unwrap()).unwrap()).unwrap();
        let nf = NormalForm::of(&moments(&psi.to_density()));
        assert_abs_diff_eq!(nf.squeezing, r, epsilon = 1e-6);
        // R_θ turns the squeezed x axis by −θ in this convention
        assert_abs_diff_eq!(nf.rotation, -0.4, epsilon = 1e-6);
    }
}

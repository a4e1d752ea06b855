//! Stochastic minimum-output-entropy search.
//!
//! The routine draws `n_init` Haar-random seeds and keeps the best, then runs
//! `n_loop` rounds of `n_it` trials `ψ_test = normalize(ψ_min + δ ψ_rand)`,
//! accepting a trial only when it lowers the output entropy. `δ` is halved
//! after every round.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::{Channel, ChannelSpec, SYMMETRY_TOL};
use crate::error::{domain, Result};
use crate::fock::FockState;
use crate::gaussian::{displacement, Symmetry};

/// Budget of the search routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoeParams {
    pub n_fock: usize,
    pub n_init: usize,
    pub n_loop: usize,
    pub n_it: usize,
    pub delta0: f64,
    pub seed: u64,
}

impl Default for MoeParams {
    fn default() -> Self {
        Self {
            n_fock: 20,
            n_init: 50,
            n_loop: 25,
            n_it: 2000,
            delta0: 1.0,
            seed: 0,
        }
    }
}

impl MoeParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_init == 0 || self.n_loop == 0 || self.n_it == 0 {
            return Err(domain("n_init, n_loop and n_it must all be at least 1"));
        }
        if !(self.delta0 > 0.0) || !self.delta0.is_finite() {
            return Err(domain(format!("delta0 must be positive, got {}", self.delta0)));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Generator for restart `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Normalized standard complex-normal vector, i.e. the first column of a
/// Haar-random unitary.
pub fn haar_random_state<R: Rng + ?Sized>(cutoff: usize, rng: &mut R) -> FockState {
    loop {
        let v: Vec<Complex64> = (0..=cutoff)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Ok(s) = FockState::new(v) {
            return s;
        }
    }
}

/// Uniform random real unit vector supported on `{m·k + p}`.
fn random_on_ray<R: Rng + ?Sized>(cutoff: usize, m: usize, p: usize, rng: &mut R) -> FockState {
    loop {
        let mut v = alloc::vec![Complex64::new(0.0, 0.0); cutoff + 1];
        let mut n = p;
        while n <= cutoff {
            v[n] = Complex64::new(rng.sample(StandardNormal), 0.0);
            n += m;
        }
        if let Ok(s) = FockState::new(v) {
            return s;
        }
    }
}

/// `min_φ ‖Gψ − e^{iφ}ψ‖ = √(2 − 2|⟨ψ|Gψ⟩|)`.
pub fn symmetry_residual(state: &FockState, symmetry: Symmetry) -> f64 {
    let overlap = state.inner(&symmetry.apply(state)).norm();
    (2.0 - 2.0 * overlap).max(0.0).sqrt()
}

pub fn symmetry_residuals(state: &FockState, symmetries: &[Symmetry]) -> Vec<(Symmetry, f64)> {
    symmetries.iter().map(|&s| (s, symmetry_residual(state, s))).collect()
}

/// Rotations `R_{2πk/m}` and reflections `M_{πk/m}` (`m ≤ max_order`) that
/// leave the environment invariant, with duplicate angles removed.
pub fn environment_symmetries(channel: &ChannelSpec, max_order: usize) -> Vec<Symmetry> {
    let sigma = channel.environment().density();
    let mut rotations: Vec<f64> = Vec::new();
    let mut reflections: Vec<f64> = Vec::new();
    let same = |a: f64, b: f64, period: f64| {
        let d = (a - b).rem_euclid(period);
        d < 1e-9 || period - d < 1e-9
    };
    for m in 1..=max_order {
        for k in 0..m {
            let rot = 2.0 * PI * k as f64 / m as f64;
            if k > 0 && !rotations.iter().any(|&r| same(r, rot, 2.0 * PI)) {
                let s = Symmetry::Rotation(rot);
                if s.apply_density(&sigma).trace_distance(&sigma) <= SYMMETRY_TOL {
                    rotations.push(rot);
                }
            }
            let refl = PI * k as f64 / m as f64;
            if !reflections.iter().any(|&r| same(r, refl, PI)) {
                let s = Symmetry::Reflection(refl);
                if s.apply_density(&sigma).trace_distance(&sigma) <= SYMMETRY_TOL {
                    reflections.push(refl);
                }
            }
        }
    }
    rotations
        .into_iter()
        .map(Symmetry::Rotation)
        .chain(reflections.into_iter().map(Symmetry::Reflection))
        .collect()
}

/// Closest coherent state found by pattern search from the mean field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentFit {
    pub alpha: Complex64,
    pub fidelity: f64,
}

fn coherent_overlap(state: &FockState, alpha: Complex64) -> f64 {
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    let mut acc = c.conj() * state.amplitude(0);
    for n in 1..state.dim() {
        c = c * alpha / (n as f64).sqrt();
        acc += c.conj() * state.amplitude(n);
    }
    acc.norm_sqr()
}

/// `max_α |⟨α|ψ⟩|²`, started at `α = ⟨a⟩` and refined by compass search.
pub fn coherent_fidelity(state: &FockState) -> CoherentFit {
    let mut alpha = state.mean_field();
    let mut best = coherent_overlap(state, alpha);
    let mut step = 0.25;
    let dirs = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    while step > 1e-9 {
        let mut moved = false;
        for d in dirs {
            let cand = alpha + d * step;
            let f = coherent_overlap(state, cand);
            if f > best {
                best = f;
                alpha = cand;
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    CoherentFit { alpha, fidelity: best }
}

/// Search space of the routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ansatz {
    /// All complex amplitudes up to the cutoff.
    Full,
    /// Real amplitudes on `{m·k + p}`.
    Symmetric { m: usize, p: usize },
}

/// Output of one run of the routine, with diagnostics of its best state.
#[derive(Debug, Clone, PartialEq)]
pub struct MoeReport {
    pub best_state: FockState,
    pub best_entropy: f64,
    pub params: MoeParams,
    pub ansatz: Ansatz,
    /// Accepted improvements as `(iteration, entropy)`; iterations count the
    /// seeds first and then the perturbation trials.
    pub trace: Vec<(usize, f64)>,
    pub channel: ChannelSpec,
    /// Best state displaced to zero mean field and truncated back to `n_fock`.
    pub centered_state: FockState,
    pub centered_entropy: f64,
    pub symmetry_residuals: Vec<(Symmetry, f64)>,
    pub coherent: CoherentFit,
    /// Index of the restart that produced this report.
    pub restart: usize,
    /// Best entropy of every restart, in restart order.
    pub restart_entropies: Vec<f64>,
}

/// A channel compiled once for repeated runs of the routine.
#[derive(Debug, Clone)]
pub struct MoeProblem {
    spec: ChannelSpec,
    compiled: Channel,
    params: MoeParams,
    ansatz: Ansatz,
}

impl MoeProblem {
    pub fn new(channel: &ChannelSpec, params: MoeParams, ansatz: Ansatz) -> Result<Self> {
        params.validate()?;
        if let Ansatz::Symmetric { m, p } = ansatz {
            if m == 0 || p >= m {
                return Err(domain(format!("symmetric ansatz needs m ≥ 1 and 0 ≤ p < m (got m={m}, p={p})")));
            }
            if p > params.n_fock {
                return Err(domain(format!("ray {{{m}k+{p}}} is empty below cutoff {}", params.n_fock)));
            }
        }
        Ok(Self {
            spec: channel.clone(),
            compiled: channel.compile(params.n_fock)?,
            params,
            ansatz,
        })
    }

    pub fn params(&self) -> &MoeParams {
        &self.params
    }

    pub fn entropy(&self, psi: &FockState) -> Result<f64> {
        self.compiled.output_entropy_pure(psi)
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> FockState {
        match self.ansatz {
            Ansatz::Full => haar_random_state(self.params.n_fock, rng),
            Ansatz::Symmetric { m, p } => random_on_ray(self.params.n_fock, m, p, rng),
        }
    }

    /// The routine on RNG stream `stream`; returns the best state, its
    /// entropy and the acceptance trace.
    pub fn run_stream(&self, stream: u64) -> Result<(FockState, f64, Vec<(usize, f64)>)> {
        let p = &self.params;
        let mut rng = stream_rng(p.seed, stream);
        let mut trace = Vec::new();
        let mut best = self.draw(&mut rng);
        let mut best_s = self.entropy(&best)?;
        trace.push((0, best_s));
        for i in 1..p.n_init {
            let cand = self.draw(&mut rng);
            let s = self.entropy(&cand)?;
            if s < best_s {
                best = cand;
                best_s = s;
                trace.push((i, s));
            }
        }
        let mut delta = p.delta0;
        let mut iteration = p.n_init;
        for _ in 0..p.n_loop {
            for _ in 0..p.n_it {
                let kick = self.draw(&mut rng);
                let v = best.amplitudes() + kick.amplitudes() * Complex64::new(delta, 0.0);
                if let Ok(cand) = FockState::from_vector(v) {
                    let s = self.entropy(&cand)?;
                    if s < best_s {
                        best = cand;
                        best_s = s;
                        trace.push((iteration, s));
                    }
                }
                iteration += 1;
            }
            delta *= 0.5;
        }
        Ok((best, best_s, trace))
    }

    /// Full report for the result of stream `restart`.
    pub fn report(
        &self,
        restart: usize,
        result: (FockState, f64, Vec<(usize, f64)>),
        restart_entropies: Vec<f64>,
    ) -> Result<MoeReport> {
        let (best_state, best_entropy, trace) = result;
        let centered_state = center(&best_state)?;
        let centered_entropy = self.entropy(&centered_state)?;
        let symmetries = environment_symmetries(&self.spec, 12);
        Ok(MoeReport {
            symmetry_residuals: symmetry_residuals(&centered_state, &symmetries),
            coherent: coherent_fidelity(&best_state),
            best_state,
            best_entropy,
            params: self.params,
            ansatz: self.ansatz,
            trace,
            channel: self.spec.clone(),
            centered_state,
            centered_entropy,
            restart,
            restart_entropies,
        })
    }
}

/// Picks the lowest entropy, ties going to the lowest restart index.
pub fn best_restart(entropies: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in entropies.iter().enumerate() {
        if s < entropies[best] {
            best = i;
        }
    }
    best
}

/// Displaces `state` by `−⟨a⟩` on an enlarged space and truncates back.
pub fn center(state: &FockState) -> Result<FockState> {
    let alpha = state.mean_field();
    if alpha.norm() < 1e-14 {
        return Ok(state.clone());
    }
    let big = 2 * state.cutoff() + 16 + (4.0 * alpha.norm_sqr()).ceil() as usize;
    let d = displacement(-alpha, big)?;
    let shifted = d.apply(&state.with_cutoff(big)?)?;
    shifted.with_cutoff(state.cutoff())
}

fn run_restarts(channel: &ChannelSpec, params: MoeParams, ansatz: Ansatz, restarts: usize) -> Result<MoeReport> {
    let problem = MoeProblem::new(channel, params, ansatz)?;
    let mut results = Vec::with_capacity(restarts.max(1));
    for r in 0..restarts.max(1) {
        results.push(problem.run_stream(r as u64)?);
    }
    let entropies: Vec<f64> = results.iter().map(|r| r.1).collect();
    let idx = best_restart(&entropies);
    let chosen = results.swap_remove(idx);
    problem.report(idx, chosen, entropies)
}

/// One run of the routine over all pure states up to `params.n_fock`.
pub fn minimize_output_entropy(channel: &ChannelSpec, params: MoeParams) -> Result<MoeReport> {
    run_restarts(channel, params, Ansatz::Full, 1)
}

/// Best of `restarts` independent runs (streams `0..restarts`).
pub fn minimize_output_entropy_restarts(channel: &ChannelSpec, params: MoeParams, restarts: usize) -> Result<MoeReport> {
    run_restarts(channel, params, Ansatz::Full, restarts)
}

/// The routine restricted to `Σ c_k |m·k + p⟩` with real `c_k`.
pub fn minimize_symmetric(channel: &ChannelSpec, m: usize, p: usize, params: MoeParams) -> Result<MoeReport> {
    run_restarts(channel, params, Ansatz::Symmetric { m, p }, 1)
}

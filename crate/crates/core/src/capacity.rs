//! Capacity bounds: the Gaussian-equivalent capacity, the interval width Δ
//! and a Holevo-information estimate for Gaussian coherent-state ensembles.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::channel::{ChannelKind, ChannelSpec};
use crate::entropy::{g_function, von_neumann_entropy};
use crate::error::{domain, Error, Result};
use crate::fock::{make_coherent, make_thermal, thermal_cutoff};
use crate::gaussian::BeamSplitter;
use crate::quadrature::gauss_laguerre;

/// `g(τν + N) − g(N)`: capacity of the phase-insensitive Gaussian channel with
/// transmissivity or gain `tau` that adds `noise` photons at its output.
pub fn capacity_gaussian(tau: f64, noise: f64, nu: f64) -> Result<f64> {
    if !(tau >= 0.0) || !(noise >= 0.0) || !(nu >= 0.0) {
        return Err(domain(format!(
            "capacity needs τ, N, ν ≥ 0 (got τ={tau}, N={noise}, ν={nu})"
        )));
    }
    Ok((g_function(tau * nu + noise)? - g_function(noise)?).max(0.0))
}

impl ChannelSpec {
    /// Capacity of the Gaussian-equivalent channel at input budget `nu`.
    pub fn gaussian_capacity(&self, nu: f64) -> Result<f64> {
        capacity_gaussian(self.transmissivity(), self.added_noise(), nu)
    }
}

/// How the non-Gaussian minimum output entropy entering Δ was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SminMode {
    /// Vacuum output entropy, assuming the vacuum minimizes the output entropy.
    VacuumMinimizer,
    /// Value found by a search, capped by the vacuum output entropy.
    Search(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaMax {
    pub value: f64,
    pub s_min_gaussian: f64,
    pub s_min: f64,
    pub mode: SminMode,
}

impl DeltaMax {
    /// True when the value rests on the vacuum being the minimizer.
    pub fn conjecture_based(&self) -> bool {
        matches!(self.mode, SminMode::VacuumMinimizer)
    }
}

/// `Δ = S_min(M_G) − S_min(M)`.
pub fn delta_max(channel: &ChannelSpec, mode: SminMode) -> Result<DeltaMax> {
    let s_min_gaussian = channel.gaussian_equivalent()?.s_min_gaussian()?;
    let vacuum = channel.vacuum_output_entropy()?;
    let s_min = match mode {
        SminMode::VacuumMinimizer => vacuum,
        SminMode::Search(s) => s.min(vacuum),
    };
    Ok(DeltaMax {
        value: s_min_gaussian - s_min,
        s_min_gaussian,
        s_min,
        mode,
    })
}

/// `[C_G, C_G + Δ]` at input budget `nu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityInterval {
    pub nu: f64,
    pub c_gaussian: f64,
    pub delta: f64,
    pub upper: f64,
    /// Set when `C_G < Δ`: the interval is wider than its lower end, the
    /// low-budget regime where Gaussian optimality of the averaged input is
    /// least certain.
    pub low_energy: bool,
}

/// Interval for `channel` at budget `nu` given its minimum output entropy `s_min`.
pub fn capacity_interval(channel: &ChannelSpec, nu: f64, s_min: f64) -> Result<CapacityInterval> {
    let gauss = channel.gaussian_equivalent()?;
    let c_gaussian = gauss.gaussian_capacity(nu)?;
    let delta = gauss.s_min_gaussian()? - s_min;
    Ok(CapacityInterval {
        nu,
        c_gaussian,
        delta,
        upper: c_gaussian + delta,
        low_energy: c_gaussian < delta,
    })
}

/// Holevo information of the Gaussian coherent ensemble and its refinement history.
#[derive(Debug, Clone, PartialEq)]
pub struct HolevoEstimate {
    pub value: f64,
    /// Change between the last two refinement levels.
    pub error: f64,
    pub average_entropy: f64,
    pub conditional_entropy: f64,
    pub radial_order: usize,
    pub angular_order: usize,
    /// `(radial order, χ)` for each refinement level.
    pub trace: Vec<(usize, f64)>,
}

/// Refinement stops once successive orders differ by less than this.
pub const HOLEVO_TOL: f64 = 1e-3;
pub const HOLEVO_MAX_ORDER: usize = 32;
const AVERAGE_STATE_TAIL: f64 = 1e-10;

fn node_cutoff(alpha2: f64) -> usize {
    let r = alpha2.sqrt();
    (alpha2 + 8.0 * r + 12.0).ceil() as usize
}

/// Average over the ensemble of `S(M[|α⟩⟨α|])`, with `t = |α|²/ν` on a
/// Gauss–Laguerre grid and the phase on a uniform (trapezoid) grid.
fn conditional_entropy(channel: &ChannelSpec, nu: f64, radial: usize, angular: usize) -> Result<f64> {
    let (t, w) = gauss_laguerre(radial);
    let env_cut = channel.environment().cutoff()?;
    let max_cut = node_cutoff(nu * t[t.len() - 1]);
    let splitter = match channel.kind() {
        ChannelKind::Attenuator { eta } => Some(BeamSplitter::with_max_total(eta, max_cut, max_cut + env_cut)?),
        ChannelKind::Amplifier { .. } => None,
    };
    let mut total = 0.0;
    for (tk, wk) in t.iter().zip(&w) {
        let a2 = nu * tk;
        let cut = node_cutoff(a2);
        let compiled = channel.compile_with(cut, splitter.as_ref())?;
        let mut ring = 0.0;
        for j in 0..angular {
            let phi = 2.0 * PI * j as f64 / angular as f64;
            let alpha = Complex64::from_polar(a2.sqrt(), phi);
            ring += compiled.output_entropy_pure(&make_coherent(alpha, cut)?)?;
        }
        total += wk * ring / angular as f64;
    }
    Ok(total)
}

/// `χ = S(M[τ_ν]) − ∫ p_α S(M[|α⟩⟨α|]) d²α` for `α` complex-normal with
/// `E|α|² = ν`. The averaged input is exactly the thermal state `τ_ν`.
/// Radial orders double from `quadrature_order` until the estimate moves by
/// less than [`HOLEVO_TOL`]; phase-covariant channels use a single angle.
pub fn holevo_coherent_ensemble(channel: &ChannelSpec, nu: f64, quadrature_order: usize) -> Result<HolevoEstimate> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(domain(format!("photon budget must be ≥ 0, got {nu}")));
    }
    let start = quadrature_order.max(1);
    if nu == 0.0 {
        return Ok(HolevoEstimate {
            value: 0.0,
            error: 0.0,
            average_entropy: 0.0,
            conditional_entropy: 0.0,
            radial_order: start,
            angular_order: 1,
            trace: Vec::new(),
        });
    }
    let tau = make_thermal(nu, thermal_cutoff(nu, AVERAGE_STATE_TAIL))?;
    let average_entropy = von_neumann_entropy(&channel.apply(&tau)?)?;
    let covariant = channel.is_phase_covariant();
    let mut trace = Vec::new();
    let mut order = start;
    let mut prev: Option<f64> = None;
    while order <= HOLEVO_MAX_ORDER {
        let angular = if covariant { 1 } else { 2 * order };
        let cond = conditional_entropy(channel, nu, order, angular)?;
        let chi = average_entropy - cond;
        trace.push((order, chi));
        if let Some(p) = prev {
            let error = (chi - p).abs();
            if error < HOLEVO_TOL {
                return Ok(HolevoEstimate {
                    value: chi,
                    error,
                    average_entropy,
                    conditional_entropy: cond,
                    radial_order: order,
                    angular_order: angular,
                    trace,
                });
            }
        }
        prev = Some(chi);
        order *= 2;
    }
    Err(Error::NonConvergence(format!(
        "Holevo quadrature did not settle below {HOLEVO_TOL}: {trace:?}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Environment;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::LN_2;

    #[test]
    fn capacity_examples() {
        let want = 3.0 * 3f64.ln() - 4.0 * LN_2;
        assert_abs_diff_eq!(capacity_gaussian(0.5, 1.0, 2.0).unwrap(), want, epsilon = 1e-12);
        assert_eq!(capacity_gaussian(0.3, 0.7, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(capacity_gaussian(1.0, 0.0, 1.0).unwrap(), 2.0 * LN_2, epsilon = 1e-15);
        assert!(capacity_gaussian(0.5, -1.0, 1.0).is_err());
    }

    #[test]
    fn s_min_examples() {
        let ch = ChannelSpec::attenuator(0.5, Environment::Thermal(1.0)).unwrap();
        assert_abs_diff_eq!(ch.s_min_gaussian().unwrap(), g_function(0.5).unwrap(), epsilon = 1e-15);
        let id = ChannelSpec::attenuator(1.0, Environment::Thermal(3.0)).unwrap();
        assert_eq!(id.s_min_gaussian().unwrap(), 0.0);
        let full = ChannelSpec::attenuator(0.0, Environment::Thermal(1.0)).unwrap();
        assert_abs_diff_eq!(full.s_min_gaussian().unwrap(), 2.0 * LN_2, epsilon = 1e-15);
    }

    #[test]
    fn delta_examples() {
        let ch = ChannelSpec::fock_attenuator(0.5, 1).unwrap();
        let d = delta_max(&ch, SminMode::VacuumMinimizer).unwrap();
        assert_abs_diff_eq!(d.value, g_function(0.5).unwrap() - LN_2, epsilon = 1e-12);
        assert!(d.conjecture_based());

        let th = ChannelSpec::attenuator(0.5, Environment::Thermal(1.0)).unwrap();
        assert!(delta_max(&th, SminMode::VacuumMinimizer).unwrap().value.abs() < 1e-6);

        let psi = crate::fock::FockState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let ch = ChannelSpec::attenuator(0.5, Environment::Pure(psi)).unwrap();
        let d = delta_max(&ch, SminMode::Search(0.872)).unwrap();
        assert_abs_diff_eq!(d.value, g_function(0.75).unwrap() - 0.872, epsilon = 1e-12);
    }

    #[test]
    fn interval_examples() {
        let ch = ChannelSpec::fock_attenuator(0.5, 1).unwrap();
        let iv = capacity_interval(&ch, 0.0, LN_2).unwrap();
        assert_eq!(iv.c_gaussian, 0.0);
        assert_abs_diff_eq!(iv.upper, iv.delta, epsilon = 0.0);
        let th = ChannelSpec::attenuator(0.5, Environment::Thermal(1.0)).unwrap();
        let s = th.vacuum_output_entropy().unwrap();
        let iv = capacity_interval(&th, 2.0, s).unwrap();
        assert!((iv.upper - iv.c_gaussian).abs() < 1e-6);
    }

    #[test]
    fn holevo_of_gaussian_channel_matches_capacity() {
        let ch = ChannelSpec::attenuator(0.5, Environment::Thermal(1.0)).unwrap();
        let est = holevo_coherent_ensemble(&ch, 2.0, 4).unwrap();
        let cg = ch.gaussian_capacity(2.0).unwrap();
        assert!((est.value - cg).abs() <= 0.02 * cg, "{} vs {}", est.value, cg);
        assert_eq!(holevo_coherent_ensemble(&ch, 0.0, 4).unwrap().value, 0.0);
    }
}

//! Rayon versions of the core sweeps. Work items are independent and results
//! are collected in input order, so output matches the sequential routines.

use bosonlab_core::capacity::{capacity_interval, delta_max, holevo_coherent_ensemble, CapacityInterval, DeltaMax, HolevoEstimate, SminMode};
use bosonlab_core::channel::ChannelSpec;
use bosonlab_core::fock::DensityOperator;
use bosonlab_core::moe::{best_restart, Ansatz, MoeParams, MoeProblem, MoeReport};
use bosonlab_core::scan::{assemble, refinement_bracket, ScanResult, SqueezedScan};
use bosonlab_core::wigner::{axis, WignerEvaluator, WignerGrid};
use bosonlab_core::Result;
use rayon::prelude::*;

/// Best of `restarts` runs on streams `0..restarts`, run concurrently.
pub fn moe_restarts(channel: &ChannelSpec, params: MoeParams, ansatz: Ansatz, restarts: usize) -> Result<MoeReport> {
    let problem = MoeProblem::new(channel, params, ansatz)?;
    let mut results = (0..restarts.max(1) as u64)
        .into_par_iter()
        .map(|r| problem.run_stream(r))
        .collect::<Result<Vec<_>>>()?;
    let entropies: Vec<f64> = results.iter().map(|r| r.1).collect();
    let idx = best_restart(&entropies);
    let chosen = results.swap_remove(idx);
    problem.report(idx, chosen, entropies)
}

/// Squeezed-vacuum scan with rows (one per `r`) evaluated concurrently.
pub fn squeezed_scan(channel: &ChannelSpec, thetas: &[f64], rs: &[f64], cutoff: usize, refine: bool) -> Result<ScanResult> {
    let scan = SqueezedScan::new(channel, cutoff)?;
    let rows = rs
        .par_iter()
        .map(|&r| scan.row(r, thetas))
        .collect::<Result<Vec<_>>>()?;
    let mut result = assemble(thetas, rs, &rows)?;
    if refine {
        let (lo, hi) = refinement_bracket(rs, result.argmin.r);
        let best = if hi > lo {
            let p = scan.refine(result.argmin.theta, lo, hi)?;
            if p.entropy < result.argmin.entropy {
                p
            } else {
                result.argmin
            }
        } else {
            result.argmin
        };
        result.refined = Some(best);
    }
    Ok(result)
}

/// Wigner grid with rows evaluated concurrently.
pub fn wigner_grid(rho: &DensityOperator, extent: f64, resolution: usize) -> Result<WignerGrid> {
    if resolution < 2 {
        return bosonlab_core::wigner::wigner(rho, extent, resolution);
    }
    let eval = WignerEvaluator::new(rho);
    let xs = axis(extent, resolution);
    let rows: Vec<Vec<f64>> = xs
        .par_iter()
        .map(|&x| xs.iter().map(|&p| eval.value(x, p)).collect())
        .collect();
    WignerGrid::from_rows(extent, &rows)
}

/// `Δ` for every channel in `channels` (vacuum-minimizer mode or a search
/// per channel with `params`).
pub fn delta_sweep(channels: &[ChannelSpec], search: Option<(MoeParams, usize)>) -> Result<Vec<DeltaMax>> {
    channels
        .par_iter()
        .map(|ch| {
            let mode = match search {
                None => SminMode::VacuumMinimizer,
                Some((params, restarts)) => {
                    let report = moe_restarts(ch, params, Ansatz::Full, restarts)?;
                    SminMode::Search(report.best_entropy)
                }
            };
            delta_max(ch, mode)
        })
        .collect()
}

/// Capacity interval at each budget, with an optional Holevo estimate.
pub fn capacity_rows(
    channel: &ChannelSpec,
    nus: &[f64],
    s_min: f64,
    holevo_order: Option<usize>,
) -> Result<Vec<(CapacityInterval, Option<HolevoEstimate>)>> {
    nus.par_iter()
        .map(|&nu| {
            let iv = capacity_interval(channel, nu, s_min)?;
            let chi = match holevo_order {
                Some(order) => Some(holevo_coherent_ensemble(channel, nu, order)?),
                None => None,
            };
            Ok((iv, chi))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use bosonlab_core::channel::Environment;
    use bosonlab_core::fock::FockState;
    use bosonlab_core::scan::{linspace, squeezed_state_scan};

    #[test]
    fn parallel_scan_matches_sequential() {
        let psi = FockState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let ch = ChannelSpec::attenuator(0.5, Environment::Pure(psi)).unwrap();
        let thetas = linspace(0.0, 1.0, 4);
        let rs = linspace(0.0, 0.6, 5);
        let a = squeezed_scan(&ch, &thetas, &rs, 20, true).unwrap();
        let b = squeezed_state_scan(&ch, &thetas, &rs, 20, true).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parallel_restarts_match_sequential() {
        let ch = ChannelSpec::fock_attenuator(0.5, 1).unwrap();
        let params = MoeParams {
            n_fock: 6,
            n_init: 5,
            n_loop: 3,
            n_it: 20,
            ..MoeParams::default()
        };
        let a = moe_restarts(&ch, params, Ansatz::Full, 3).unwrap();
        let b = bosonlab_core::moe::minimize_output_entropy_restarts(&ch, params, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parallel_wigner_matches_sequential() {
        let rho = FockState::from_real(&[1.0, 0.5, 0.0, 1.0]).unwrap().to_density();
        let a = wigner_grid(&rho, 3.0, 11).unwrap();
        let b = bosonlab_core::wigner::wigner(&rho, 3.0, 11).unwrap();
        assert_eq!(a, b);
    }
}

//! Entropic functionals in nats.

use alloc::format;

use crate::error::{domain, Result};
use crate::fock::DensityOperator;
use crate::linalg;

/// Eigenvalues of `σ` below this fraction of its largest eigenvalue are
/// treated as its null space.
const SUPPORT_TOL: f64 = 1e-14;
/// Weight of `ρ` on the null space of `σ` that makes `D(ρ‖σ)` infinite.
const SUPPORT_LEAK: f64 = 1e-10;
const LOG_FLOOR: f64 = 1e-300;

/// `S(ρ) = −Σ λ ln λ` over the clipped spectrum.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    linalg::entropy_of_spectrum(&linalg::hermitian_eigenvalues(rho.matrix()))
}

/// Entropy of a thermal state with mean photon number `x`:
/// `g(x) = (x+1) ln(x+1) − x ln x`.
pub fn g_function(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(format!("g is defined for x ≥ 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok((x + 1.0) * x.ln_1p() - x * x.ln())
}

/// Quantum relative entropy `D(ρ‖σ) = Tr ρ(ln ρ − ln σ)`; `+∞` when `ρ` has
/// weight outside the support of `σ`.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let dim = rho.dim().max(sigma.dim());
    let r = linalg::resize_square(rho.matrix(), dim);
    let s = linalg::resize_square(sigma.matrix(), dim);
    let (lam, vecs) = linalg::hermitian_eigen(&s);
    let top = lam.iter().cloned().fold(0.0, f64::max);
    let mut cross = 0.0;
    for (k, &l) in lam.iter().enumerate() {
        let v = vecs.column(k);
        let w = (v.adjoint() * &r * v)[(0, 0)].re;
        if l <= SUPPORT_TOL * top {
            if w > SUPPORT_LEAK {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += w * l.max(LOG_FLOOR).ln();
    }
    let s_rho = linalg::entropy_of_spectrum(&linalg::hermitian_eigenvalues(&r))?;
    Ok((-s_rho - cross).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{make_fock, make_thermal};
    use approx::assert_abs_diff_eq;
    use core::f64::consts::LN_2;

    #[test]
    fn entropy_examples() {
        let pure = make_fock(2, 5).unwrap().to_density();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-9);
        let half = DensityOperator::diagonal(&[0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&half).unwrap(), LN_2, epsilon = 1e-12);
        let th = make_thermal(1.0, 60).unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&th).unwrap(), 2.0 * LN_2, epsilon = 1e-6);
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_function(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(g_function(1.0).unwrap(), 2.0 * LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(g_function(0.5).unwrap(), 0.954_771_252_442_219_2, epsilon = 1e-12);
        assert!(g_function(-0.1).is_err());
        // g(x) − ln x → 1
        assert_abs_diff_eq!(g_function(1e3).unwrap() - 1e3f64.ln(), 1.0, epsilon = 1e-3);
    }

    #[test]
    fn relative_entropy_examples() {
        let th = make_thermal(1.0, 60).unwrap();
        assert!(relative_entropy(&th, &th).unwrap().abs() < 1e-9);
        let one = make_fock(1, 60).unwrap().to_density();
        assert_abs_diff_eq!(relative_entropy(&one, &th).unwrap(), 2.0 * LN_2, epsilon = 1e-4);
        let vac = make_fock(0, 3).unwrap().to_density();
        let one = make_fock(1, 3).unwrap().to_density();
        assert_eq!(relative_entropy(&vac, &one).unwrap(), f64::INFINITY);
    }
}

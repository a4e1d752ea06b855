//! Wigner functions from the Fock-basis Laguerre kernel.
//!
//! With `α = (x + ip)/√2` and `m ≥ n`,
//! `W_{|m⟩⟨n|}(α) = (−1)ⁿ/π · √(n!/m!) · (2α*)^{m−n} · e^{−2|α|²} · L_n^{(m−n)}(4|α|²)`,
//! and `W_{|n⟩⟨m|}` is its complex conjugate.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_PI, PI, SQRT_2};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::fock::DensityOperator;

/// Evaluates the Wigner function of a fixed operator at arbitrary points.
#[derive(Debug, Clone)]
pub struct WignerEvaluator {
    rho: DMatrix<Complex64>,
}

impl WignerEvaluator {
    pub fn new(rho: &DensityOperator) -> Self {
        Self {
            rho: rho.matrix().clone(),
        }
    }

    pub fn value(&self, x: f64, p: f64) -> f64 {
        let dim = self.rho.nrows();
        let alpha_c = Complex64::new(x, -p) / SQRT_2;
        let r2 = 0.5 * (x * x + p * p);
        let y = 4.0 * r2;
        let gauss = (-2.0 * r2).exp() * FRAC_1_PI;
        let two_ac = alpha_c * 2.0;
        let mut total = 0.0;
        let mut lag = Vec::with_capacity(dim);
        let mut power = Complex64::new(1.0, 0.0);
        for k in 0..dim {
            if k > 0 {
                power *= two_ac;
            }
            laguerre_column(dim - k, k, y, &mut lag);
            // ratio(n) = √(n!/(n+k)!)
            let mut ratio = 1.0 / (1..=k).map(|j| (j as f64).sqrt()).product::<f64>();
            for n in 0..dim - k {
                if n > 0 {
                    ratio *= (n as f64 / (n + k) as f64).sqrt();
                }
                let m = n + k;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let kernel = power * (sign * ratio * lag[n]);
                let c = self.rho[(m, n)] * kernel;
                total += if k == 0 { c.re } else { 2.0 * c.re };
            }
        }
        total * gauss
    }
}

/// `L_n^{(k)}(y)` for `n = 0..count`.
fn laguerre_column(count: usize, k: usize, y: f64, out: &mut Vec<f64>) {
    out.clear();
    if count == 0 {
        return;
    }
    let kf = k as f64;
    out.push(1.0);
    if count > 1 {
        out.push(1.0 + kf - y);
    }
    for j in 1..count.saturating_sub(1) {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + kf - y) * out[j] - (jf + kf) * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
}

/// `W(x, p)` on a square grid; `values[(i, j)]` is at `(x_axis[i], p_axis[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub x_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    pub values: DMatrix<f64>,
}

/// Evenly spaced points from `−extent` to `extent`.
pub fn axis(extent: f64, resolution: usize) -> Vec<f64> {
    let step = 2.0 * extent / (resolution - 1) as f64;
    (0..resolution).map(|i| -extent + step * i as f64).collect()
}

fn check_grid(extent: f64, resolution: usize) -> Result<()> {
    if resolution < 2 {
        return Err(domain("Wigner grid needs at least two points per axis"));
    }
    if !(extent > 0.0) || !extent.is_finite() {
        return Err(domain("Wigner grid extent must be positive"));
    }
    Ok(())
}

/// Extent that comfortably holds a state with mean photon number `nbar`.
pub fn suggested_extent(nbar: f64) -> f64 {
    (2.0 * nbar + 1.0).sqrt() + 4.0
}

/// Samples the Wigner function of `rho` on `[−extent, extent]²`.
pub fn wigner(rho: &DensityOperator, extent: f64, resolution: usize) -> Result<WignerGrid> {
    check_grid(extent, resolution)?;
    let eval = WignerEvaluator::new(rho);
    let xs = axis(extent, resolution);
    let values = DMatrix::from_fn(resolution, resolution, |i, j| eval.value(xs[i], xs[j]));
    Ok(WignerGrid {
        x_axis: xs.clone(),
        p_axis: xs,
        values,
    })
}

impl WignerGrid {
    /// Builds a grid from rows computed elsewhere (`rows[i][j]` at `(x_i, p_j)`).
    pub fn from_rows(extent: f64, rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        check_grid(extent, n)?;
        if rows.iter().any(|r| r.len() != n) {
            return Err(domain("Wigner rows must form a square grid"));
        }
        let xs = axis(extent, n);
        Ok(Self {
            x_axis: xs.clone(),
            p_axis: xs,
            values: DMatrix::from_fn(n, n, |i, j| rows[i][j]),
        })
    }

    pub fn cell_area(&self) -> f64 {
        (self.x_axis[1] - self.x_axis[0]) * (self.p_axis[1] - self.p_axis[0])
    }

    /// `Σ W dx dp`.
    pub fn integral(&self) -> f64 {
        self.values.sum() * self.cell_area()
    }

    /// `2π Σ W·V dx dp`, which approximates `Tr(ρσ)` for the underlying operators.
    pub fn overlap(&self, other: &WignerGrid) -> f64 {
        2.0 * PI * self.values.component_mul(&other.values).sum() * self.cell_area()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.amax()
    }

    /// Bilinear interpolation; `None` outside the grid.
    pub fn interpolate(&self, x: f64, p: f64) -> Option<f64> {
        let (x0, p0) = (self.x_axis[0], self.p_axis[0]);
        let (dx, dp) = (self.x_axis[1] - x0, self.p_axis[1] - p0);
        let fx = (x - x0) / dx;
        let fp = (p - p0) / dp;
        let (n, m) = (self.x_axis.len(), self.p_axis.len());
        if fx < 0.0 || fp < 0.0 || fx > (n - 1) as f64 || fp > (m - 1) as f64 {
            return None;
        }
        let i = (fx.floor() as usize).min(n - 2);
        let j = (fp.floor() as usize).min(m - 2);
        let (u, v) = (fx - i as f64, fp - j as f64);
        let w = &self.values;
        Some(
            (1.0 - u) * (1.0 - v) * w[(i, j)]
                + u * (1.0 - v) * w[(i + 1, j)]
                + (1.0 - u) * v * w[(i, j + 1)]
                + u * v * w[(i + 1, j + 1)],
        )
    }

    fn residual_under(&self, radius: f64, map: impl Fn(f64, f64) -> (f64, f64)) -> f64 {
        let mut worst = 0.0_f64;
        for (i, &x) in self.x_axis.iter().enumerate() {
            for (j, &p) in self.p_axis.iter().enumerate() {
                if x * x + p * p > radius * radius {
                    continue;
                }
                let (xr, pr) = map(x, p);
                if let Some(v) = self.interpolate(xr, pr) {
                    worst = worst.max((v - self.values[(i, j)]).abs());
                }
            }
        }
        worst
    }

    /// Largest `|W(R(x,p)) − W(x,p)|` over grid points inside `radius`, with
    /// `R` the rotation by `angle` about the origin.
    pub fn rotation_residual(&self, angle: f64, radius: f64) -> f64 {
        let (s, c) = angle.sin_cos();
        self.residual_under(radius, |x, p| (c * x - s * p, s * x + c * p))
    }

    /// As [`rotation_residual`](Self::rotation_residual) for the mirror about
    /// the line through the origin at `axis_angle`.
    pub fn reflection_residual(&self, axis_angle: f64, radius: f64) -> f64 {
        let (s, c) = (2.0 * axis_angle).sin_cos();
        self.residual_under(radius, |x, p| (c * x + s * p, s * x - c * p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{make_coherent, make_fock, moments, FockState};
    use approx::assert_abs_diff_eq;

    #[test]
    fn point_values() {
        let vac = make_fock(0, 3).unwrap().to_density();
        assert_abs_diff_eq!(WignerEvaluator::new(&vac).value(0.0, 0.0), FRAC_1_PI, epsilon = 1e-14);
        let one = make_fock(1, 3).unwrap().to_density();
        assert_abs_diff_eq!(WignerEvaluator::new(&one).value(0.0, 0.0), -FRAC_1_PI, epsilon = 1e-14);
        // |n⟩ at the origin: (−1)ⁿ/π
        let five = make_fock(5, 6).unwrap().to_density();
        assert_abs_diff_eq!(WignerEvaluator::new(&five).value(0.0, 0.0), -FRAC_1_PI, epsilon = 1e-13);
    }

    #[test]
    fn coherent_state_is_a_displaced_gaussian() {
        let alpha = Complex64::new(0.8, -0.5);
        let rho = make_coherent(alpha, 40).unwrap().to_density();
        let m = moments(&rho);
        let eval = WignerEvaluator::new(&rho);
        for &(x, p) in &[(0.0, 0.0), (1.0, -0.3), (m.mean[0], m.mean[1]), (-1.2, 0.7)] {
            let dx = x - m.mean[0];
            let dp = p - m.mean[1];
            let want = (-(dx * dx + dp * dp)).exp() / PI;
            assert_abs_diff_eq!(eval.value(x, p), want, epsilon = 1e-10);
        }
    }

    #[test]
    fn grid_normalization_and_symmetry() {
        let psi = FockState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let grid = wigner(&psi.to_density(), 5.0, 201).unwrap();
        assert_abs_diff_eq!(grid.integral(), 1.0, epsilon = 1e-3);
        assert!(grid.max_abs() <= FRAC_1_PI + 1e-6);
        assert!(grid.rotation_residual(2.0 * PI / 3.0, 3.5) < 5e-3);
        assert!(grid.reflection_residual(0.0, 3.5) < 1e-12);
        assert!(grid.rotation_residual(PI / 2.0, 3.5) > 1e-2);
    }

    #[test]
    fn resolution_must_be_at_least_two() {
        let vac = make_fock(0, 1).unwrap().to_density();
        assert!(wigner(&vac, 3.0, 1).is_err());
    }
}

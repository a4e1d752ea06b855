//! One-dimensional quadrature rules.

use alloc::format;
use alloc::vec::Vec;
use nalgebra::DMatrix;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Gauss–Kronrod 7/15 on `[a, b]`: Kronrod value and `|K − G|`.
pub fn gauss_kronrod_15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive bisection with the 7/15 rule until the summed error estimate is
/// below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Estimate> {
    integrate_with_breakpoints(&mut f, &[a, b], abs_tol, rel_tol)
}

/// As [`integrate`] over consecutive intervals of the sorted `points`.
pub fn integrate_with_breakpoints<F: FnMut(f64) -> f64>(
    f: &mut F,
    points: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    const MAX_INTERVALS: usize = 4000;
    let mut parts: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (v, e) = gauss_kronrod_15(f, w[0], w[1]);
            evaluations += 15;
            parts.push((w[0], w[1], v, e));
        }
    }
    loop {
        let value: f64 = parts.iter().map(|p| p.2).sum();
        let error: f64 = parts.iter().map(|p| p.3).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Estimate { value, error, evaluations });
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::NonConvergence(format!(
                "adaptive quadrature stalled at error {error:.3e} after {evaluations} evaluations"
            )));
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (a, b, _, _) = parts.swap_remove(idx);
        let m = 0.5 * (a + b);
        if !(m > a && m < b) {
            return Err(Error::NonConvergence("interval collapsed below machine precision".into()));
        }
        let (v1, e1) = gauss_kronrod_15(f, a, m);
        let (v2, e2) = gauss_kronrod_15(f, m, b);
        evaluations += 30;
        parts.push((a, m, v1, e1));
        parts.push((m, b, v2, e2));
    }
}

/// Nodes and weights from a symmetric Jacobi matrix (Golub–Welsch).
fn golub_welsch(diag: &[f64], off: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = diag[i];
        if i + 1 < n {
            j[(i, i + 1)] = off[i];
            j[(i + 1, i)] = off[i];
        }
    }
    let eig = j.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], mu0 * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Gauss–Laguerre rule for `∫₀^∞ e^{−t} f(t) dt`.
pub fn gauss_laguerre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let diag: Vec<f64> = (0..order).map(|i| (2 * i + 1) as f64).collect();
    let off: Vec<f64> = (1..order).map(|i| i as f64).collect();
    golub_welsch(&diag, &off, 1.0)
}

/// Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let diag = alloc::vec![0.0; order];
    let off: Vec<f64> = (1..order)
        .map(|i| {
            let i = i as f64;
            i / (4.0 * i * i - 1.0).sqrt()
        })
        .collect();
    golub_welsch(&diag, &off, 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;

    #[test]
    fn kronrod_integrates_smooth_functions() {
        let est = integrate(|x| x.sin(), 0.0, PI, 1e-13, 0.0).unwrap();
        assert_abs_diff_eq!(est.value, 2.0, epsilon = 1e-12);
        let est = integrate(|x| (-x * x / 2.0).exp(), -12.0, 12.0, 1e-12, 0.0).unwrap();
        assert_abs_diff_eq!(est.value, (2.0 * PI).sqrt(), epsilon = 1e-11);
    }

    #[test]
    fn kronrod_handles_kinks_with_breakpoints() {
        let mut f = |x: f64| x.abs();
        let est = integrate_with_breakpoints(&mut f, &[-1.0, 0.0, 2.0], 1e-14, 0.0).unwrap();
        assert_abs_diff_eq!(est.value, 2.5, epsilon = 1e-13);
        assert!(est.evaluations <= 30);
    }

    #[test]
    fn laguerre_is_exact_for_polynomials() {
        let (x, w) = gauss_laguerre(6);
        // ∫ e^{-t} t^k = k!
        let mut fact = 1.0;
        for k in 0..12u32 {
            if k > 0 {
                fact *= k as f64;
            }
            let s: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(k as i32)).sum();
            assert_abs_diff_eq!(s / fact, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn legendre_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(5);
        for k in 0..10 {
            let s: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(k)).sum();
            let want = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert_abs_diff_eq!(s, want, epsilon = 1e-13);
        }
    }
}

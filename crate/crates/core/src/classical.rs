//! Classical additive-noise channel `Y = X + N`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{E, PI};
use core::fmt;

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_with_breakpoints, Estimate};

/// Half-width of a Gaussian support window in standard deviations.
const GAUSS_WINDOW: f64 = 12.0;
const LAPLACE_WINDOW: f64 = 40.0;
const ENTROPY_TOL: f64 = 1e-10;
const DENSITY_TOL: f64 = 1e-13;

#[derive(Clone)]
enum Shape {
    Gaussian,
    Uniform,
    Laplace,
    Mixture { weights: Vec<f64>, means: Vec<f64>, variances: Vec<f64> },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// Zero-mean probability density with a support window and the points where
/// it fails to be smooth.
#[derive(Clone)]
pub struct NoiseDensity {
    name: String,
    shape: Shape,
    variance: f64,
    support: (f64, f64),
    breakpoints: Vec<f64>,
}

impl fmt::Debug for NoiseDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NoiseDensity")
            .field("name", &self.name)
            .field("variance", &self.variance)
            .field("support", &self.support)
            .finish()
    }
}

fn gaussian_pdf(x: f64, var: f64) -> f64 {
    (-x * x / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

fn check_variance(v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(domain(format!(
            "noise variance must be positive and finite, got {v} (a point mass has no differential entropy)"
        )));
    }
    Ok(())
}

impl NoiseDensity {
    pub fn gaussian(variance: f64) -> Result<Self> {
        check_variance(variance)?;
        let w = GAUSS_WINDOW * variance.sqrt();
        Ok(Self {
            name: "gaussian".into(),
            shape: Shape::Gaussian,
            variance,
            support: (-w, w),
            breakpoints: vec![0.0],
        })
    }

    /// Uniform on `[−√(3v), √(3v)]`.
    pub fn uniform(variance: f64) -> Result<Self> {
        check_variance(variance)?;
        let h = (3.0 * variance).sqrt();
        Ok(Self {
            name: "uniform".into(),
            shape: Shape::Uniform,
            variance,
            support: (-h, h),
            breakpoints: Vec::new(),
        })
    }

    /// Laplace with scale `b = √(v/2)`.
    pub fn laplace(variance: f64) -> Result<Self> {
        check_variance(variance)?;
        let w = LAPLACE_WINDOW * (variance / 2.0).sqrt();
        Ok(Self {
            name: "laplace".into(),
            shape: Shape::Laplace,
            variance,
            support: (-w, w),
            breakpoints: vec![0.0],
        })
    }

    /// Mixture `Σ wᵢ 𝒩(mᵢ, vᵢ)`; the means are shifted together so the mixture
    /// has zero mean.
    pub fn gaussian_mixture(weights: &[f64], means: &[f64], variances: &[f64]) -> Result<Self> {
        if weights.is_empty() || weights.len() != means.len() || weights.len() != variances.len() {
            return Err(domain("mixture needs equally many weights, means and variances"));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(domain("mixture weights must be non-negative"));
        }
        for &v in variances {
            check_variance(v)?;
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(domain("mixture weights must not all vanish"));
        }
        let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let shift: f64 = weights.iter().zip(means).map(|(w, m)| w * m).sum();
        let means: Vec<f64> = means.iter().map(|m| m - shift).collect();
        let variance = weights
            .iter()
            .zip(&means)
            .zip(variances)
            .map(|((w, m), v)| w * (v + m * m))
            .sum();
        let lo = means
            .iter()
            .zip(variances)
            .map(|(m, v)| m - GAUSS_WINDOW * v.sqrt())
            .fold(f64::INFINITY, f64::min);
        let hi = means
            .iter()
            .zip(variances)
            .map(|(m, v)| m + GAUSS_WINDOW * v.sqrt())
            .fold(f64::NEG_INFINITY, f64::max);
        let mut breakpoints = means.clone();
        breakpoints.sort_by(f64::total_cmp);
        Ok(Self {
            name: "gaussian-mixture".into(),
            shape: Shape::Mixture {
                weights,
                means,
                variances: variances.to_vec(),
            },
            variance,
            support: (lo, hi),
            breakpoints,
        })
    }

    /// Arbitrary density on `support`. Normalization, zero mean and the
    /// variance are checked by quadrature.
    pub fn custom<F>(name: &str, density: F, support: (f64, f64), breakpoints: &[f64]) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(support.1 > support.0) {
            return Err(domain("support must be a non-empty interval"));
        }
        let mut me = Self {
            name: name.into(),
            shape: Shape::Custom(Arc::new(density)),
            variance: 1.0,
            support,
            breakpoints: breakpoints.to_vec(),
        };
        let mass = me.moment(0)?;
        if (mass - 1.0).abs() > 1e-8 {
            return Err(domain(format!("density integrates to {mass}, not 1")));
        }
        let mean = me.moment(1)?;
        if mean.abs() > 1e-8 {
            return Err(domain(format!("density has mean {mean}; only zero-mean noise is accepted")));
        }
        me.variance = me.moment(2)?;
        check_variance(me.variance)?;
        Ok(me)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let v = self.variance;
        match &self.shape {
            Shape::Gaussian => gaussian_pdf(x, v),
            Shape::Uniform => {
                let h = (3.0 * v).sqrt();
                if x.abs() <= h {
                    0.5 / h
                } else {
                    0.0
                }
            }
            Shape::Laplace => {
                let b = (v / 2.0).sqrt();
                (-x.abs() / b).exp() / (2.0 * b)
            }
            Shape::Mixture { weights, means, variances } => weights
                .iter()
                .zip(means)
                .zip(variances)
                .map(|((w, m), s)| w * gaussian_pdf(x - m, *s))
                .sum(),
            Shape::Custom(f) => {
                if x < self.support.0 || x > self.support.1 {
                    0.0
                } else {
                    f(x)
                }
            }
        }
    }

    fn grid(&self, lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
        let mut pts = vec![lo, hi];
        pts.extend(self.breakpoints.iter().copied().filter(|&b| b > lo && b < hi));
        pts.extend(extra.iter().copied().filter(|&b| b > lo && b < hi));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// `∫ xᵏ p(x) dx`.
    pub fn moment(&self, k: i32) -> Result<f64> {
        let pts = self.grid(self.support.0, self.support.1, &[]);
        let mut f = |x: f64| x.powi(k) * self.pdf(x);
        Ok(integrate_with_breakpoints(&mut f, &pts, 1e-12, 1e-12)?.value)
    }

    /// Density of `N + X` with `X ~ 𝒩(0, energy)`.
    fn convolved_pdf(&self, y: f64, energy: f64) -> Result<f64> {
        let w = GAUSS_WINDOW * energy.sqrt();
        let lo = (y - w).max(self.support.0);
        let hi = (y + w).min(self.support.1);
        if !(hi > lo) {
            return Ok(0.0);
        }
        let pts = self.grid(lo, hi, &[y]);
        let mut f = |x: f64| self.pdf(x) * gaussian_pdf(y - x, energy);
        Ok(integrate_with_breakpoints(&mut f, &pts, DENSITY_TOL, 1e-11)?.value)
    }
}

fn neg_p_ln_p(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

/// `h(N) = −∫ p ln p`.
pub fn differential_entropy(p: &NoiseDensity) -> Result<Estimate> {
    let pts = p.grid(p.support.0, p.support.1, &[]);
    let mut f = |x: f64| neg_p_ln_p(p.pdf(x));
    integrate_with_breakpoints(&mut f, &pts, ENTROPY_TOL, 1e-12)
}

/// `½ ln(1 + γ)`.
pub fn classical_capacity_gaussian(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(domain(format!("signal-to-noise ratio must be ≥ 0, got {gamma}")));
    }
    Ok(0.5 * gamma.ln_1p())
}

/// Entropy of a Gaussian with variance `v`: `½ ln(2πe v)`.
pub fn gaussian_entropy(variance: f64) -> f64 {
    0.5 * (2.0 * PI * E * variance).ln()
}

/// `Δ_cl = h(N_G) − h(N)`, the relative entropy to the Gaussian of equal variance.
pub fn delta_classical(p: &NoiseDensity) -> Result<f64> {
    Ok(gaussian_entropy(p.variance) - differential_entropy(p)?.value)
}

/// `I(X_G; X_G + N) = h(X_G + N) − h(N)` for Gaussian input of power `energy`.
pub fn mutual_information_gaussian_input(p: &NoiseDensity, energy: f64) -> Result<Estimate> {
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(domain(format!("input power must be positive, got {energy}")));
    }
    let h_n = differential_entropy(p)?;
    let w = GAUSS_WINDOW * energy.sqrt();
    let (lo, hi) = (p.support.0 - w, p.support.1 + w);
    let edges = [p.support.0, p.support.1];
    let pts = p.grid(lo, hi, &edges);
    let mut failure: Option<Error> = None;
    let mut f = |y: f64| match p.convolved_pdf(y, energy) {
        Ok(q) => neg_p_ln_p(q),
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let h_y = integrate_with_breakpoints(&mut f, &pts, ENTROPY_TOL, 1e-11)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Estimate {
        value: h_y.value - h_n.value,
        error: h_y.error + h_n.error,
        evaluations: h_y.evaluations + h_n.evaluations,
    })
}

/// The three quantities of the classical sandwich at input power `energy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalSummary {
    pub h_n: f64,
    pub h_ng: f64,
    pub delta_cl: f64,
    pub c_gaussian: f64,
    pub mutual_information: f64,
}

pub fn classical_summary(p: &NoiseDensity, energy: f64) -> Result<ClassicalSummary> {
    let h_n = differential_entropy(p)?.value;
    let h_ng = gaussian_entropy(p.variance);
    Ok(ClassicalSummary {
        h_n,
        h_ng,
        delta_cl: h_ng - h_n,
        c_gaussian: classical_capacity_gaussian(energy / p.variance)?,
        mutual_information: mutual_information_gaussian_input(p, energy)?.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::LN_2;

    #[test]
    fn entropy_examples() {
        let g = NoiseDensity::gaussian(2.3).unwrap();
        assert_abs_diff_eq!(differential_entropy(&g).unwrap().value, gaussian_entropy(2.3), epsilon = 1e-6);
        let u = NoiseDensity::uniform(1.0).unwrap();
        assert_abs_diff_eq!(
            differential_entropy(&u).unwrap().value,
            (2.0 * 3f64.sqrt()).ln(),
            epsilon = 1e-9
        );
        assert!(NoiseDensity::uniform(0.0).is_err());
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(classical_capacity_gaussian(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(classical_capacity_gaussian(1.0).unwrap(), 0.5 * LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(classical_capacity_gaussian(E * E - 1.0).unwrap(), 1.0, epsilon = 1e-14);
        assert!(classical_capacity_gaussian(-0.1).is_err());
    }

    #[test]
    fn delta_examples() {
        assert!(delta_classical(&NoiseDensity::gaussian(1.0).unwrap()).unwrap().abs() < 1e-6);
        assert_abs_diff_eq!(
            delta_classical(&NoiseDensity::uniform(1.0).unwrap()).unwrap(),
            0.5 * (PI * E / 6.0).ln(),
            epsilon = 1e-4
        );
        assert_abs_diff_eq!(
            delta_classical(&NoiseDensity::laplace(1.0).unwrap()).unwrap(),
            0.5 * (2.0 * PI * E).ln() - (1.0 + 0.5 * LN_2),
            epsilon = 1e-4
        );
    }

    #[test]
    fn mutual_information_examples() {
        let g = NoiseDensity::gaussian(1.5).unwrap();
        let i = mutual_information_gaussian_input(&g, 2.0).unwrap().value;
        assert_abs_diff_eq!(i, 0.5 * (1.0 + 2.0 / 1.5f64).ln(), epsilon = 1e-5);

        let u = NoiseDensity::uniform(1.0).unwrap();
        let i = mutual_information_gaussian_input(&u, 1.0).unwrap().value;
        let lower = 0.5 * LN_2;
        assert!(i >= lower && i <= lower + 0.17655, "{i}");

        let tiny = mutual_information_gaussian_input(&u, 1e-8).unwrap().value;
        assert!(tiny.abs() < 1e-3, "{tiny}");
    }

    #[test]
    fn mixture_is_recentred() {
        let m = NoiseDensity::gaussian_mixture(&[1.0, 3.0], &[2.0, 0.0], &[0.5, 1.0]).unwrap();
        assert!(m.moment(1).unwrap().abs() < 1e-10);
        assert_abs_diff_eq!(m.moment(0).unwrap(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(m.moment(2).unwrap(), m.variance(), epsilon = 1e-8);
    }

    #[test]
    fn custom_density_is_validated() {
        let tri = NoiseDensity::custom("triangle", |x: f64| (1.0 - x.abs()).max(0.0), (-1.0, 1.0), &[0.0]).unwrap();
        assert_abs_diff_eq!(tri.variance(), 1.0 / 6.0, epsilon = 1e-10);
        assert!(NoiseDensity::custom("shifted", |x: f64| if (0.0..=1.0).contains(&x) { 1.0 } else { 0.0 }, (0.0, 1.0), &[]).is_err());
    }
}

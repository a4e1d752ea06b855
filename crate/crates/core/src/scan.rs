//! Output entropy of rotated squeezed vacua `R_θ S_r |0⟩` over a grid.

use alloc::vec::Vec;

use crate::channel::{Channel, ChannelSpec};
use crate::error::{domain, Result};
use crate::fock::{make_fock, FockState};
use crate::gaussian::{squeezing, Symmetry};

/// Golden-section search stops when the bracket is narrower than this.
pub const REFINE_TOL: f64 = 1e-7;

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub theta: f64,
    pub r: f64,
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    /// Row-major in `r`: all angles for `rs[0]`, then `rs[1]`, …
    pub table: Vec<ScanPoint>,
    /// Grid minimum, ties going to the first point in table order.
    pub argmin: ScanPoint,
    /// Golden-section refinement in `r` at the minimizing angle.
    pub refined: Option<ScanPoint>,
}

/// Channel compiled once at the scan cutoff.
#[derive(Debug, Clone)]
pub struct SqueezedScan {
    compiled: Channel,
    cutoff: usize,
}

impl SqueezedScan {
    pub fn new(channel: &ChannelSpec, cutoff: usize) -> Result<Self> {
        Ok(Self {
            compiled: channel.compile(cutoff)?,
            cutoff,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn squeezed_vacuum(&self, r: f64) -> Result<FockState> {
        squeezing(r, self.cutoff)?.apply(&make_fock(0, self.cutoff)?)
    }

    /// `S(M[R_θ S_r |0⟩⟨0| S_r† R_θ†])`.
    pub fn entropy(&self, theta: f64, r: f64) -> Result<f64> {
        let psi = Symmetry::Rotation(theta).apply(&self.squeezed_vacuum(r)?);
        self.compiled.output_entropy_pure(&psi)
    }

    /// Entropies for one squeezing value across all angles.
    pub fn row(&self, r: f64, thetas: &[f64]) -> Result<Vec<f64>> {
        let sq = self.squeezed_vacuum(r)?;
        thetas
            .iter()
            .map(|&t| self.compiled.output_entropy_pure(&Symmetry::Rotation(t).apply(&sq)))
            .collect()
    }

    /// Golden-section minimization of `r ↦ S(θ, r)` on `[lo, hi]`.
    pub fn refine(&self, theta: f64, lo: f64, hi: f64) -> Result<ScanPoint> {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (lo, hi);
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let mut fc = self.entropy(theta, c)?;
        let mut fd = self.entropy(theta, d)?;
        while b - a > REFINE_TOL {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = self.entropy(theta, c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = self.entropy(theta, d)?;
            }
        }
        let r = 0.5 * (a + b);
        Ok(ScanPoint {
            theta,
            r,
            entropy: self.entropy(theta, r)?,
        })
    }
}

/// Collects rows (one per `r`) into a table and locates the grid minimum.
pub fn assemble(thetas: &[f64], rs: &[f64], rows: &[Vec<f64>]) -> Result<ScanResult> {
    if thetas.is_empty() || rs.is_empty() || rows.len() != rs.len() {
        return Err(domain("scan grids must be non-empty and match the rows"));
    }
    let mut table = Vec::with_capacity(thetas.len() * rs.len());
    for (r, row) in rs.iter().zip(rows) {
        for (t, s) in thetas.iter().zip(row) {
            table.push(ScanPoint {
                theta: *t,
                r: *r,
                entropy: *s,
            });
        }
    }
    let mut argmin = table[0];
    for p in &table {
        if p.entropy < argmin.entropy {
            argmin = *p;
        }
    }
    Ok(ScanResult {
        table,
        argmin,
        refined: None,
    })
}

/// Bracket `[r_{i−1}, r_{i+1}]` around the grid minimum, clamped to the grid.
pub fn refinement_bracket(rs: &[f64], r: f64) -> (f64, f64) {
    let i = rs.iter().position(|&x| x == r).unwrap_or(0);
    let lo = rs[i.saturating_sub(1)];
    let hi = rs[(i + 1).min(rs.len() - 1)];
    (lo, hi)
}

/// Full grid scan, optionally refined in `r` at the best angle.
pub fn squeezed_state_scan(
    channel: &ChannelSpec,
    thetas: &[f64],
    rs: &[f64],
    cutoff: usize,
    refine: bool,
) -> Result<ScanResult> {
    if thetas.iter().chain(rs).any(|x| !x.is_finite()) {
        return Err(domain("scan grids must be finite"));
    }
    let scan = SqueezedScan::new(channel, cutoff)?;
    let rows = rs.iter().map(|&r| scan.row(r, thetas)).collect::<Result<Vec<_>>>()?;
    let mut result = assemble(thetas, rs, &rows)?;
    if refine {
        let (lo, hi) = refinement_bracket(rs, result.argmin.r);
        if hi > lo {
            let p = scan.refine(result.argmin.theta, lo, hi)?;
            result.refined = Some(if p.entropy < result.argmin.entropy { p } else { result.argmin });
        } else {
            result.refined = Some(result.argmin);
        }
    }
    Ok(result)
}

/// `n` evenly spaced points on `[a, b]` (both ends included).
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

//! Fourier multipliers `F⁻¹ e^{s·aξ} F` on a uniform grid.
//!
//! The multiplier is applied only inside the band `|ξ| < ξ_c`; every
//! application checks that the weighted spectral density `e^{s·aξ}|f̂|²` has
//! died out at the band edge.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::{Grid, Samples};
use crate::error::{KreinError, Result};

/// Distance from the Hermite turning point to the band edge.
pub const BAND_MARGIN: f64 = 10.0;

/// Relative weighted density allowed in the outermost unit of the band.
pub const EDGE_DENSITY_TOL: f64 = 1e-12;

/// Bound on `e^{2|a|ξ_c}·ε²`, the amplified round-off floor.
pub const NOISE_TOL: f64 = 1e-12;

#[derive(Clone)]
pub struct FourierWeight {
    a: f64,
    cut: f64,
    xi: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FourierWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierWeight")
            .field("a", &self.a)
            .field("cut", &self.cut)
            .finish()
    }
}

impl FourierWeight {
    /// Band `ξ_c = √(2n_max + 1) + |2a| + BAND_MARGIN`.
    pub fn new(grid: &Grid, a: f64, n_max: usize) -> Result<Self> {
        let m = grid.len();
        let h = grid.spacing();
        let xi: Vec<f64> = (0..m)
            .map(|k| {
                let kk = if k >= m / 2 { k as f64 - m as f64 } else { k as f64 };
                2.0 * std::f64::consts::PI * kk / (m as f64 * h)
            })
            .collect();
        let nyquist = std::f64::consts::PI / h;
        let cut = (2.0 * n_max as f64 + 1.0).sqrt() + 2.0 * a.abs() + BAND_MARGIN;
        if cut > 0.9 * nyquist {
            return Err(KreinError::UnderResolved(format!(
                "band edge {cut:.3} beyond 90% of the Nyquist frequency {nyquist:.3}"
            )));
        }
        let noise = (2.0 * a.abs() * cut).exp() * f64::EPSILON * f64::EPSILON;
        if noise > NOISE_TOL {
            return Err(KreinError::BandOverflow(format!(
                "weight e^{{2|a|ξ_c}} = {:.3e} amplifies round-off to {noise:.3e}",
                (2.0 * a.abs() * cut).exp()
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(FourierWeight {
            a,
            cut,
            xi,
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
        })
    }

    pub fn shift(&self) -> f64 {
        self.a
    }

    pub fn band_edge(&self) -> f64 {
        self.cut
    }

    /// Discrete spectrum (unnormalized DFT).
    pub fn spectrum(&self, f: &[Complex64]) -> Samples {
        let mut buf = f.to_vec();
        self.forward.process(&mut buf);
        buf
    }

    /// Largest `e^{s·aξ}|f̂|²` in the outermost unit of the band relative to
    /// its peak.
    pub fn edge_density(&self, spec: &[Complex64], s: f64) -> f64 {
        let mut peak = 0.0_f64;
        let mut edge = 0.0_f64;
        for (k, z) in spec.iter().enumerate() {
            let x = self.xi[k];
            if x.abs() >= self.cut {
                continue;
            }
            let d = (s * self.a * x).exp() * z.norm_sqr();
            peak = peak.max(d);
            if x.abs() >= self.cut - 1.0 {
                edge = edge.max(d);
            }
        }
        if peak == 0.0 {
            0.0
        } else {
            edge / peak
        }
    }

    /// `F⁻¹(e^{s·aξ} F f)` restricted to the band. `a = 0` returns `f`.
    pub fn apply(&self, f: &[Complex64], s: f64) -> Result<Samples> {
        if self.a == 0.0 {
            return Ok(f.to_vec());
        }
        let mut buf = self.spectrum(f);
        let edge = self.edge_density(&buf, s);
        if edge > EDGE_DENSITY_TOL {
            return Err(KreinError::BandOverflow(format!(
                "weighted spectral density at the band edge is {edge:.3e} of its peak"
            )));
        }
        let m = buf.len();
        for (k, z) in buf.iter_mut().enumerate() {
            let x = self.xi[k];
            *z = if x.abs() < self.cut && k != m / 2 {
                *z * ((s * self.a * x).exp() / m as f64)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        self.inverse.process(&mut buf);
        Ok(buf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_shift_matches_closed_form() {
        // F⁻¹ e^{aξ} F moves e^{−(x+ia)²/2} back to e^{−x²/2}
        let grid = Grid::uniform(12.0, 1024).unwrap();
        let a = 0.5;
        let w = FourierWeight::new(&grid, a, 4).unwrap();
        let f = grid.sample(|x| (-(Complex64::new(x, a)).powi(2) / 2.0).exp());
        let back = w.apply(&f, 1.0).unwrap();
        for (j, &x) in grid.nodes().iter().enumerate() {
            assert!((back[j].re - (-x * x / 2.0).exp()).abs() < 1e-12);
            assert!(back[j].im.abs() < 1e-12);
        }
    }

    #[test]
    fn zero_shift_is_identity() {
        let grid = Grid::uniform(6.0, 64).unwrap();
        let w = FourierWeight::new(&grid, 0.0, 3).unwrap();
        let f = grid.sample(|x| Complex64::new(x.sin(), x.cos()));
        assert_eq!(w.apply(&f, 2.0).unwrap(), f);
    }

    #[test]
    fn refusals() {
        let grid = Grid::uniform(12.0, 4096).unwrap();
        assert!(matches!(
            FourierWeight::new(&grid, 3.0, 12),
            Err(KreinError::BandOverflow(_))
        ));
        let coarse = Grid::uniform(12.0, 64).unwrap();
        assert!(matches!(
            FourierWeight::new(&coarse, 0.5, 12),
            Err(KreinError::UnderResolved(_))
        ));
        // a box has a slowly decaying spectrum
        let w = FourierWeight::new(&grid, 0.5, 12).unwrap();
        let boxf = grid.sample(|x| Complex64::new(if x.abs() < 1.0 { 1.0 } else { 0.0 }, 0.0));
        assert!(matches!(w.apply(&boxf, 2.0), Err(KreinError::BandOverflow(_))));
    }
}

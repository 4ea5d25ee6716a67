//! Quasi-bases of non-Hermitian families and their `C`-symmetries.
//!
//! A family `f_n` is J-orthonormal for the parity `𝒫f(x) = f(−x)` and
//! orthonormal for `(f, g)_G = (Gf, g)`, where `G = e^Q` and
//! `e^{Q/2}f_n = g_n` is an orthonormal reference basis. Two families are
//! built in:
//!
//! * shifted Hermite functions `f_n(x) = g_n(x + ia)`, with `G` the Fourier
//!   multiplier `e^{2aξ}`;
//! * `f_n = e^{p}g_n` with `g_n` the eigenfunctions of `−d²/dx² + |x|^β` and
//!   `p` odd, with `G = e^{−2p}`.
//!
//! `C = 𝒫G` acts as `Cf = Σ [f, f_n] f_n` on the span.

pub mod anharmonic;
pub mod fourier;
pub mod grid;
pub mod hermite;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{KreinError, Result};
use crate::linalg::{self, CMat};
use anharmonic::{solve_h0, PWeight};
use fourier::FourierWeight;
use grid::{axpy, diff, Grid, Samples};

/// Largest `|g_{n_max}(±L)|` accepted.
pub const TAIL_TOL: f64 = 1e-14;

/// Largest entry of `(g_m, g_n) − I` accepted.
pub const REFERENCE_TOL: f64 = 1e-8;

pub const DEFAULT_L: f64 = 12.0;
pub const DEFAULT_NODES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    ShiftedHermite { a: f64 },
    WeightedAnharmonic { beta: f64, p: PWeight },
}

#[derive(Debug, Clone)]
enum Metric {
    Fourier(FourierWeight),
    /// `G = e^{−2p}` and `e^{Q/2} = e^{−p}` pointwise.
    Pointwise {
        g: Vec<f64>,
        half: Vec<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct FunctionFamily {
    pub grid: Grid,
    pub kind: FamilyKind,
    pub n_max: usize,
    /// Reference functions `g_0 … g_{n_max}`.
    pub g: Vec<Samples>,
    pub f: Vec<Samples>,
    /// `Hf_n` sampled.
    pub hf: Vec<Samples>,
    pub eigenvalues: Vec<f64>,
    pub warnings: Vec<String>,
    metric: Metric,
}

fn resolution_checks(grid: &Grid, g: &[Samples], n_max: usize, a: f64) -> Result<()> {
    let xi_max = (2.0 * n_max as f64 + 1.0).sqrt() + 2.0 * a.abs();
    let h_max = std::f64::consts::PI / (2.0 * xi_max);
    if grid.spacing() > h_max {
        return Err(KreinError::UnderResolved(format!(
            "spacing {:.3e} exceeds π/(2ξ_max) = {h_max:.3e}",
            grid.spacing()
        )));
    }
    let last = &g[n_max];
    let m = grid.len();
    let tail = last[0].norm().max(last[m - 1].norm());
    if tail > TAIL_TOL {
        return Err(KreinError::UnderResolved(format!(
            "|g_{n_max}(±L)| = {tail:.3e}; enlarge L"
        )));
    }
    let gram = gram(grid, g, g);
    let dev = linalg::max_abs(&(gram - linalg::identity(g.len())));
    if dev > REFERENCE_TOL {
        return Err(KreinError::UnderResolved(format!(
            "reference Gram deviates by {dev:.3e}"
        )));
    }
    Ok(())
}

/// `G_{mn} = (a_m, b_n)`.
fn gram(grid: &Grid, a: &[Samples], b: &[Samples]) -> CMat {
    let entries: Vec<Complex64> = (0..a.len() * b.len())
        .into_par_iter()
        .map(|k| grid.inner(&a[k / b.len()], &b[k % b.len()]))
        .collect();
    CMat::from_row_slice(a.len(), b.len(), &entries)
}

/// Unshifted Hermite functions `g_0 … g_{n_max}`.
pub fn hermite_family(n_max: usize, grid: &Grid) -> Result<FunctionFamily> {
    shifted_family(0.0, n_max, grid)
}

/// `f_n(x) = g_n(x + ia)` and `Hf_n` with `H = −d²/dx² + x² + 2iax`.
pub fn shifted_family(a: f64, n_max: usize, grid: &Grid) -> Result<FunctionFamily> {
    if !a.is_finite() {
        return Err(KreinError::OutOfRange("shift a must be finite".into()));
    }
    let count = n_max + 1;
    let m = grid.len();
    let mut g = vec![vec![Complex64::new(0.0, 0.0); m]; count];
    let mut f = g.clone();
    let mut hf = g.clone();
    for (j, &x) in grid.nodes().iter().enumerate() {
        let real_t = hermite::hermite_table(Complex64::new(x, 0.0), count);
        let z = Complex64::new(x, a);
        let t = hermite::hermite_table(z, count + 2);
        let pot = Complex64::new(x * x, 2.0 * a * x);
        for n in 0..count {
            g[n][j] = real_t[n];
            f[n][j] = t[n];
            hf[n][j] = -hermite::second_derivative(&t, n) + pot * t[n];
        }
    }
    resolution_checks(grid, &g, n_max, a)?;
    let metric = Metric::Fourier(FourierWeight::new(grid, a, n_max)?);
    let eigenvalues = (0..count).map(|n| 1.0 + 2.0 * n as f64 + a * a).collect();
    let mut warnings = Vec::new();
    if a.abs() > 1.0 {
        warnings.push(format!("|a| = {} exceeds the supported envelope |a| ≤ 1", a.abs()));
    }
    Ok(FunctionFamily {
        grid: grid.clone(),
        kind: FamilyKind::ShiftedHermite { a },
        n_max,
        g,
        f,
        hf,
        eigenvalues,
        warnings,
        metric,
    })
}

/// `f_n = e^{p}g_n` with `g_n` the finite-difference eigenfunctions of
/// `H₀ = −d²/dx² + |x|^β`, and `Hf_n` for
/// `H = e^{p}H₀e^{−p} = H₀ + p'' − p'² + 2p'·d/dx` discretized with central
/// differences.
pub fn anharmonic_family(beta: f64, p: PWeight, n_max: usize, grid: &Grid) -> Result<FunctionFamily> {
    let sol = solve_h0(beta, grid, n_max)?;
    let m = grid.len();
    let h = grid.spacing();
    let xs = grid.nodes();
    let to_c = |v: &Vec<f64>| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Samples>();
    let g: Vec<Samples> = sol.functions.iter().map(to_c).collect();
    resolution_checks(grid, &g, n_max, 0.0)?;

    let ep: Vec<f64> = xs.iter().map(|&x| p.p(x).exp()).collect();
    let f: Vec<Samples> = sol
        .functions
        .iter()
        .map(|gn| gn.iter().zip(&ep).map(|(v, e)| Complex64::new(v * e, 0.0)).collect())
        .collect();
    let hf: Vec<Samples> = f
        .iter()
        .map(|fn_| {
            (0..m)
                .map(|j| {
                    let x = xs[j];
                    let left = if j > 0 { fn_[j - 1] } else { Complex64::new(0.0, 0.0) };
                    let right = if j + 1 < m {
                        fn_[j + 1]
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    let lap = (left - fn_[j] * 2.0 + right) / (h * h);
                    let d1 = (right - left) / (2.0 * h);
                    let dp = p.dp(x);
                    -lap + fn_[j] * (x.abs().powf(beta) + p.d2p(x) - dp * dp) + d1 * (2.0 * dp)
                })
                .collect()
        })
        .collect();

    let mut warnings = Vec::new();
    let alpha = p.growth_exponent();
    if alpha >= beta / 2.0 + 1.0 {
        warnings.push(format!(
            "growth exponent {alpha} of p is not below β/2 + 1 = {}",
            beta / 2.0 + 1.0
        ));
    }
    let richardson = sol
        .richardson
        .iter()
        .zip(&sol.eigenvalues)
        .fold(0.0_f64, |a, (r, l)| a.max((r / l).abs()));
    if richardson > 1e-4 {
        warnings.push(format!(
            "relative eigenvalue discretization error estimate {richardson:.3e}"
        ));
    }
    let metric = Metric::Pointwise {
        g: xs.iter().map(|&x| (-2.0 * p.p(x)).exp()).collect(),
        half: xs.iter().map(|&x| (-p.p(x)).exp()).collect(),
    };
    Ok(FunctionFamily {
        grid: grid.clone(),
        kind: FamilyKind::WeightedAnharmonic { beta, p },
        n_max,
        g,
        f,
        hf,
        eigenvalues: sol.eigenvalues,
        warnings,
        metric,
    })
}

/// Reconstruction of a target from the first coefficients.
#[derive(Debug, Clone, Serialize)]
pub struct Expansion {
    /// `c_n = [g, Cf_n]`.
    pub coefficients: Vec<Complex64>,
    /// `‖g − Σ c_n f_n‖_G`.
    pub g_error: f64,
    /// `‖e^{Q/2}g − Σ c_n g_n‖`.
    pub plain_error: f64,
}

impl FunctionFamily {
    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// `Gf`.
    pub fn apply_g(&self, f: &[Complex64]) -> Result<Samples> {
        match &self.metric {
            Metric::Fourier(w) => w.apply(f, 2.0),
            Metric::Pointwise { g, .. } => Ok(f.iter().zip(g).map(|(a, w)| a * w).collect()),
        }
    }

    /// `e^{Q/2}f`.
    pub fn apply_half(&self, f: &[Complex64]) -> Result<Samples> {
        match &self.metric {
            Metric::Fourier(w) => w.apply(f, 1.0),
            Metric::Pointwise { half, .. } => Ok(f.iter().zip(half).map(|(a, w)| a * w).collect()),
        }
    }

    /// `Cf = 𝒫Gf`.
    pub fn apply_c(&self, f: &[Complex64]) -> Result<Samples> {
        Ok(self.grid.reflect(&self.apply_g(f)?))
    }

    /// `(f, g)_G`.
    pub fn g_inner(&self, f: &[Complex64], g: &[Complex64]) -> Result<Complex64> {
        Ok(self.grid.inner(&self.apply_g(f)?, g))
    }

    /// `(g_m, g_n)`.
    pub fn reference_gram(&self) -> CMat {
        gram(&self.grid, &self.g, &self.g)
    }

    /// `[f_m, f_n]` at `(m, n)`.
    pub fn indefinite_gram(&self) -> CMat {
        let reflected: Vec<Samples> = self.f.iter().map(|f| self.grid.reflect(f)).collect();
        gram(&self.grid, &reflected, &self.f)
    }

    /// Signs of the diagonal of the indefinite Gram, as measured.
    pub fn signs(&self) -> Vec<i8> {
        let d = self.indefinite_gram();
        (0..self.len())
            .map(|n| if d[(n, n)].re >= 0.0 { 1 } else { -1 })
            .collect()
    }

    /// `(f_m, f_n)_G` at `(m, n)`.
    pub fn g_gram(&self) -> Result<CMat> {
        let gf: Vec<Samples> = self.f.par_iter().map(|f| self.apply_g(f)).collect::<Result<_>>()?;
        Ok(gram(&self.grid, &gf, &self.f))
    }

    /// `‖Hf_n − λ_n f_n‖ / ‖f_n‖`.
    pub fn eigen_residuals(&self) -> Vec<f64> {
        (0..self.len())
            .map(|n| {
                let r: Samples = self.hf[n]
                    .iter()
                    .zip(&self.f[n])
                    .map(|(hv, v)| hv - v * self.eigenvalues[n])
                    .collect();
                self.grid.norm(&r) / self.grid.norm(&self.f[n])
            })
            .collect()
    }

    /// `A_mn = (Hf_n, f_m)_G`.
    pub fn h_gram_in_g(&self) -> Result<CMat> {
        let ghf: Vec<Samples> = self.hf.par_iter().map(|f| self.apply_g(f)).collect::<Result<_>>()?;
        Ok(gram(&self.grid, &ghf, &self.f).transpose())
    }

    /// `Σ [f, f_n] f_n`.
    pub fn c_action(&self, f: &[Complex64]) -> Samples {
        let mut out = vec![Complex64::new(0.0, 0.0); f.len()];
        for fn_ in &self.f {
            axpy(&mut out, self.grid.krein(f, fn_), fn_);
        }
        out
    }

    /// Relative distance of `f` from the span of the family, measured in
    /// `(·,·)_G`.
    pub fn span_residual(&self, f: &[Complex64]) -> Result<f64> {
        let e = self.expansion(f, self.len())?;
        let nf = self.g_inner(f, f)?.re.sqrt();
        Ok(if nf == 0.0 { 0.0 } else { e.g_error / nf })
    }

    /// `max_{m,n} |(f_m, γ_n) − δ_mn|` with `γ_n = sign([f_n, f_n])𝒫f_n`.
    pub fn biorthogonality_residual(&self) -> f64 {
        let signs = self.signs();
        let gamma: Vec<Samples> = self
            .f
            .iter()
            .zip(&signs)
            .map(|(f, &s)| self.grid.reflect(f).into_iter().map(|v| v * f64::from(s)).collect())
            .collect();
        let b = gram(&self.grid, &self.f, &gamma);
        linalg::max_abs(&(b - linalg::identity(self.len())))
    }

    /// `(max |A − A*|, λ_min(A))` for `A_mn = (Gf_n, f_m)`: `JC = G` must be
    /// positive on the span.
    pub fn jc_positivity(&self) -> Result<(f64, f64)> {
        let a = self.g_gram()?.transpose();
        let herm = linalg::max_abs(&(&a - a.adjoint()));
        let (vals, _) = linalg::eigh(&a);
        Ok((herm, vals.first().copied().unwrap_or(0.0)))
    }

    /// `max ‖C²f_n − f_n‖` for `C` the multiplier route.
    pub fn c_involution_residual(&self) -> Result<f64> {
        self.f
            .iter()
            .map(|f| {
                let cc = self.apply_c(&self.apply_c(f)?)?;
                Ok(self.grid.norm(&diff(&cc, f)))
            })
            .try_fold(0.0_f64, |acc, r: Result<f64>| Ok(acc.max(r?)))
    }

    /// Largest gap between the series form of `C` and the multiplier form on
    /// the family members.
    pub fn c_route_agreement(&self) -> Result<f64> {
        self.f
            .iter()
            .map(|f| Ok(self.grid.norm(&diff(&self.c_action(f), &self.apply_c(f)?))))
            .try_fold(0.0_f64, |acc, r: Result<f64>| Ok(acc.max(r?)))
    }

    /// Expansion of `target` in `f_0 … f_{n_use − 1}`.
    pub fn expansion(&self, target: &[Complex64], n_use: usize) -> Result<Expansion> {
        if n_use > self.len() {
            return Err(KreinError::OutOfRange(format!(
                "{n_use} terms from a family of {}",
                self.len()
            )));
        }
        let tn = self.g_inner(target, target)?.re;
        if !tn.is_finite() {
            return Err(KreinError::Invariant("target has no finite G-norm".into()));
        }
        let mut recon = vec![Complex64::new(0.0, 0.0); target.len()];
        let mut recon_ref = recon.clone();
        // G applied term by term: the residual itself is mostly round-off,
        // which the multiplier would amplify
        let mut g_res = self.apply_g(target)?;
        let mut coefficients = Vec::with_capacity(n_use);
        for n in 0..n_use {
            let gf = self.apply_g(&self.f[n])?;
            let cn = self.grid.krein(target, &self.grid.reflect(&gf));
            axpy(&mut recon, cn, &self.f[n]);
            axpy(&mut recon_ref, cn, &self.g[n]);
            axpy(&mut g_res, -cn, &gf);
            coefficients.push(cn);
        }
        let r = diff(target, &recon);
        let g_error = self.grid.inner(&g_res, &r).re.max(0.0).sqrt();
        let half = self.apply_half(target)?;
        let plain_error = self.grid.norm(&diff(&half, &recon_ref));
        Ok(Expansion {
            coefficients,
            g_error,
            plain_error,
        })
    }
}

/// Summary of every diagnostic for one family.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub kind: FamilyKind,
    pub n_max: usize,
    pub half_length: f64,
    pub nodes: usize,
    pub signs: Vec<i8>,
    pub reference_gram_deviation: f64,
    /// `max |[f_m, f_n] − σ_nδ_mn|`.
    pub indefinite_gram_deviation: f64,
    pub g_gram_deviation: f64,
    pub eigenvalues: Vec<f64>,
    pub eigen_residuals: Vec<f64>,
    /// `max |A − diag(λ)|` for `A = h_gram_in_g`.
    pub h_gram_deviation: f64,
    pub h_gram_hermitian_residual: f64,
    pub biorthogonality_residual: f64,
    pub c_involution_residual: f64,
    pub c_route_agreement: f64,
    pub jc_hermitian_residual: f64,
    pub jc_min_eigenvalue: f64,
    pub warnings: Vec<String>,
}

pub fn family_report(fam: &FunctionFamily) -> Result<FamilyReport> {
    let count = fam.len();
    let id = linalg::identity(count);
    let signs = fam.signs();
    let sigma = linalg::diag_real(&signs.iter().map(|&s| f64::from(s)).collect::<Vec<_>>());
    let hg = fam.h_gram_in_g()?;
    let lam = linalg::diag_real(&fam.eigenvalues);
    let (jc_herm, jc_min) = fam.jc_positivity()?;
    Ok(FamilyReport {
        kind: fam.kind,
        n_max: fam.n_max,
        half_length: fam.grid.half_length(),
        nodes: fam.grid.len(),
        reference_gram_deviation: linalg::max_abs(&(fam.reference_gram() - &id)),
        indefinite_gram_deviation: linalg::max_abs(&(fam.indefinite_gram() - sigma)),
        g_gram_deviation: linalg::max_abs(&(fam.g_gram()? - &id)),
        signs,
        eigenvalues: fam.eigenvalues.clone(),
        eigen_residuals: fam.eigen_residuals(),
        h_gram_deviation: linalg::max_abs(&(&hg - lam)),
        h_gram_hermitian_residual: linalg::max_abs(&(&hg - hg.adjoint())),
        biorthogonality_residual: fam.biorthogonality_residual(),
        c_involution_residual: fam.c_involution_residual()?,
        c_route_agreement: fam.c_route_agreement()?,
        jc_hermitian_residual: jc_herm,
        jc_min_eigenvalue: jc_min,
        warnings: fam.warnings.clone(),
    })
}

//! Uniform periodic grid on `[−L, L)` with trapezoid quadrature.

use num_complex::Complex64;

use crate::error::{KreinError, Result};

pub type Samples = Vec<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    l: f64,
    h: f64,
    x: Vec<f64>,
}

impl Grid {
    /// `x_j = −L + jh`, `h = 2L/M`; `M` must be a power of two.
    pub fn uniform(l: f64, m: usize) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(KreinError::OutOfRange(format!("half-length L = {l}")));
        }
        if m < 8 || !m.is_power_of_two() {
            return Err(KreinError::OutOfRange(format!(
                "node count {m} is not a power of two ≥ 8"
            )));
        }
        let h = 2.0 * l / m as f64;
        let x = (0..m).map(|j| -l + j as f64 * h).collect();
        Ok(Grid { l, h, x })
    }

    pub fn half_length(&self) -> f64 {
        self.l
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    /// Index of `−x_j` (periodic wrap at `−L`).
    pub fn mirror(&self, j: usize) -> usize {
        (self.len() - j) % self.len()
    }

    /// `(𝒫f)(x) = f(−x)`.
    pub fn reflect(&self, f: &[Complex64]) -> Samples {
        (0..self.len()).map(|j| f[self.mirror(j)]).collect()
    }

    pub fn sample<F: Fn(f64) -> Complex64>(&self, f: F) -> Samples {
        self.x.iter().map(|&x| f(x)).collect()
    }

    /// `(f, g) = h Σ f_j conj(g_j)`.
    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        f.iter().zip(g).map(|(a, b)| a * b.conj()).sum::<Complex64>() * self.h
    }

    pub fn norm(&self, f: &[Complex64]) -> f64 {
        (f.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.h).sqrt()
    }

    /// `[f, g] = (𝒫f, g)`.
    pub fn krein(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        let m = self.len();
        (0..m).map(|j| f[self.mirror(j)] * g[j].conj()).sum::<Complex64>() * self.h
    }
}

pub fn axpy(y: &mut [Complex64], a: Complex64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn diff(f: &[Complex64], g: &[Complex64]) -> Samples {
    f.iter().zip(g).map(|(a, b)| a - b).collect()
}

//! `H₀ = −d²/dx² + |x|^β` by second-order finite differences.
//!
//! Even and odd eigenfunctions are computed separately on the half-line, so
//! every `g_n` has exact parity. The even sector uses the reflection
//! `u_{−1} = u_1` at the origin, symmetrized by scaling `u_0` with `1/√2`;
//! the odd sector has `u_0 = 0`. Both vanish at `x = L`.

use serde::Serialize;

use super::grid::Grid;
use crate::error::{KreinError, Result};

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + x.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue by Sturm bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 4.0 * f64::EPSILON * scale {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solve `(A − σI)x = b` with the Thomas algorithm.
    fn solve_shifted(&self, sigma: f64, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        let tiny = f64::EPSILON * (sigma.abs() + 1.0);
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut piv = self.diag[0] - sigma;
        if piv.abs() < tiny {
            piv = tiny;
        }
        c[0] = if n > 1 { self.off[0] / piv } else { 0.0 };
        d[0] = b[0] / piv;
        for i in 1..n {
            let mut p = self.diag[i] - sigma - self.off[i - 1] * c[i - 1];
            if p.abs() < tiny {
                p = tiny;
            }
            c[i] = if i + 1 < n { self.off[i] / p } else { 0.0 };
            d[i] = (b[i] - self.off[i - 1] * d[i - 1]) / p;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        x
    }

    /// Unit eigenvector for the eigenvalue `lambda` by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let sigma = lambda + 1e-10 * lambda.abs().max(1.0);
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7 % 13) as f64)).collect();
        for _ in 0..4 {
            let w = self.solve_shifted(sigma, &v);
            let nrm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            v = w.into_iter().map(|x| x / nrm).collect();
        }
        v
    }

    /// `‖Av − λv‖`.
    pub fn residual(&self, lambda: f64, v: &[f64]) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = (self.diag[i] - lambda) * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s * s
            })
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Half-line operator for one parity sector with `k` unknowns at spacing `h`.
pub fn half_line_operator(beta: f64, h: f64, k: usize, parity: Parity) -> Tridiagonal {
    let inv = 1.0 / (h * h);
    match parity {
        Parity::Even => {
            let diag = (0..k).map(|i| 2.0 * inv + (i as f64 * h).powf(beta)).collect();
            let mut off = vec![-inv; k - 1];
            off[0] = -std::f64::consts::SQRT_2 * inv;
            Tridiagonal { diag, off }
        }
        Parity::Odd => {
            let diag = (1..k).map(|i| 2.0 * inv + (i as f64 * h).powf(beta)).collect();
            Tridiagonal {
                diag,
                off: vec![-inv; k - 2],
            }
        }
    }
}

/// Eigenpairs of `H₀` sampled on the full grid.
#[derive(Debug, Clone)]
pub struct AnharmonicSolution {
    pub eigenvalues: Vec<f64>,
    /// Real, unit-normalized on the grid, `g_n(−x) = (−1)ⁿ g_n(x)`.
    pub functions: Vec<Vec<f64>>,
    /// `(λ_h − λ_{2h})/3` for each eigenvalue.
    pub richardson: Vec<f64>,
    /// Largest `‖Av − λv‖` of the tridiagonal problems.
    pub solver_residual: f64,
}

fn sector(beta: f64, h: f64, k: usize, parity: Parity, count: usize) -> (Vec<f64>, Vec<Vec<f64>>, f64) {
    let op = half_line_operator(beta, h, k, parity);
    let mut vals = Vec::with_capacity(count);
    let mut vecs = Vec::with_capacity(count);
    let mut res = 0.0_f64;
    for i in 0..count {
        let lam = op.eigenvalue(i);
        let mut v = op.eigenvector(lam);
        if v[0] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        res = res.max(op.residual(lam, &v) / lam.abs().max(1.0));
        vals.push(lam);
        vecs.push(v);
    }
    (vals, vecs, res)
}

/// Lowest `n_max + 1` eigenpairs of `H₀` on `grid`.
pub fn solve_h0(beta: f64, grid: &Grid, n_max: usize) -> Result<AnharmonicSolution> {
    if !(beta > 2.0 && beta.is_finite()) {
        return Err(KreinError::OutOfRange(format!("beta = {beta} must exceed 2")));
    }
    let m = grid.len();
    let h = grid.spacing();
    let k = m / 2;
    let n_even = n_max / 2 + 1;
    let n_odd = n_max.div_ceil(2);
    if n_even + 2 > k / 2 {
        return Err(KreinError::UnderResolved(
            "too few grid nodes for the requested n_max".into(),
        ));
    }
    let (ev, evec, r1) = sector(beta, h, k, Parity::Even, n_even);
    let (ov, ovec, r2) = sector(beta, h, k, Parity::Odd, n_odd);
    let (ev2, _, _) = sector(beta, 2.0 * h, k / 2, Parity::Even, n_even);
    let (ov2, _, _) = sector(beta, 2.0 * h, k / 2, Parity::Odd, n_odd);

    let mut eigenvalues = Vec::with_capacity(n_max + 1);
    let mut richardson = Vec::with_capacity(n_max + 1);
    let mut functions = Vec::with_capacity(n_max + 1);
    let half = m / 2;
    for n in 0..=n_max {
        let (lam, coarse, v, parity) = if n % 2 == 0 {
            (ev[n / 2], ev2[n / 2], &evec[n / 2], Parity::Even)
        } else {
            (ov[n / 2], ov2[n / 2], &ovec[n / 2], Parity::Odd)
        };
        let mut g = vec![0.0; m];
        match parity {
            Parity::Even => {
                g[half] = std::f64::consts::SQRT_2 * v[0];
                for i in 1..k {
                    g[half + i] = v[i];
                    g[half - i] = v[i];
                }
            }
            Parity::Odd => {
                for i in 1..k {
                    g[half + i] = v[i - 1];
                    g[half - i] = -v[i - 1];
                }
            }
        }
        let nrm = (g.iter().map(|x| x * x).sum::<f64>() * h).sqrt();
        g.iter_mut().for_each(|x| *x /= nrm);
        eigenvalues.push(lam);
        richardson.push((lam - coarse) / 3.0);
        functions.push(g);
    }
    // the spectrum must alternate even, odd, even, … without near-collisions
    for n in 1..=n_max {
        let gap = eigenvalues[n] - eigenvalues[n - 1];
        if gap <= 1e-8 * eigenvalues[n].abs().max(1.0) {
            return Err(KreinError::Eigensolver(format!(
                "eigenvalues {n} and {} collide or are out of order (gap {gap:.3e})",
                n - 1
            )));
        }
    }
    Ok(AnharmonicSolution {
        eigenvalues,
        functions,
        richardson,
        solver_residual: r1.max(r2),
    })
}

/// Built-in odd weights `p(x)` with `f_n = e^{p}g_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PWeight {
    Zero,
    /// `x/(1 + x²)`.
    Rational,
    Tanh,
    /// `slope·x`.
    Linear {
        slope: f64,
    },
}

impl std::str::FromStr for PWeight {
    type Err = KreinError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(PWeight::Zero),
            "rational" => Ok(PWeight::Rational),
            "tanh" => Ok(PWeight::Tanh),
            "linear" => Ok(PWeight::Linear { slope: 1.0 }),
            _ => {
                if let Some(v) = s.strip_prefix("linear:") {
                    let slope = v
                        .parse::<f64>()
                        .map_err(|_| KreinError::Malformed(format!("bad slope in {s:?}")))?;
                    Ok(PWeight::Linear { slope })
                } else {
                    Err(KreinError::Malformed(format!("unknown weight {s:?}")))
                }
            }
        }
    }
}

impl PWeight {
    pub fn p(&self, x: f64) -> f64 {
        match self {
            PWeight::Zero => 0.0,
            PWeight::Rational => x / (1.0 + x * x),
            PWeight::Tanh => x.tanh(),
            PWeight::Linear { slope } => slope * x,
        }
    }

    pub fn dp(&self, x: f64) -> f64 {
        match self {
            PWeight::Zero => 0.0,
            PWeight::Rational => (1.0 - x * x) / (1.0 + x * x).powi(2),
            PWeight::Tanh => 1.0 - x.tanh().powi(2),
            PWeight::Linear { slope } => *slope,
        }
    }

    pub fn d2p(&self, x: f64) -> f64 {
        match self {
            PWeight::Zero | PWeight::Linear { .. } => 0.0,
            PWeight::Rational => (2.0 * x.powi(3) - 6.0 * x) / (1.0 + x * x).powi(3),
            PWeight::Tanh => -2.0 * x.tanh() * (1.0 - x.tanh().powi(2)),
        }
    }

    /// Smallest `α` with `|p^{(k)}| ≤ C(1 + x²)^{(α−k)/2}`.
    pub fn growth_exponent(&self) -> f64 {
        match self {
            PWeight::Zero => f64::NEG_INFINITY,
            PWeight::Rational => -1.0,
            PWeight::Tanh => 0.0,
            PWeight::Linear { .. } => 1.0,
        }
    }

    /// `max_k sup_x |p^{(k)}(x)|(1 + x²)^{(k−α)/2}` over the grid, `k ≤ 2`.
    pub fn growth_constant(&self, grid: &Grid) -> f64 {
        let alpha = self.growth_exponent();
        if alpha == f64::NEG_INFINITY {
            return 0.0;
        }
        grid.nodes()
            .iter()
            .map(|&x| {
                let w = 1.0 + x * x;
                [self.p(x), self.dp(x), self.d2p(x)]
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v.abs() * w.powf((k as f64 - alpha) / 2.0))
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_matches_dense_eigensolver() {
        let t = Tridiagonal {
            diag: vec![2.0, 1.0, 3.0, -1.0, 0.5],
            off: vec![0.5, -1.0, 0.2, 0.7],
        };
        let dense = nalgebra::DMatrix::from_fn(5, 5, |i, j| {
            if i == j {
                t.diag[i]
            } else if i + 1 == j {
                t.off[i]
            } else if j + 1 == i {
                t.off[j]
            } else {
                0.0
            }
        });
        let mut vals: Vec<f64> = dense.symmetric_eigen().eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (k, v) in vals.iter().enumerate() {
            let lam = t.eigenvalue(k);
            assert!((lam - v).abs() < 1e-12);
            assert!(t.residual(lam, &t.eigenvector(lam)) < 1e-10);
        }
    }

    #[test]
    fn harmonic_limit_recovers_odd_integers() {
        // β = 2 is outside the admissible range, so check the operator directly
        let grid = Grid::uniform(10.0, 2048).unwrap();
        let h = grid.spacing();
        let even = half_line_operator(2.0, h, 1024, Parity::Even);
        let odd = half_line_operator(2.0, h, 1024, Parity::Odd);
        assert!((even.eigenvalue(0) - 1.0).abs() < 1e-4);
        assert!((odd.eigenvalue(0) - 3.0).abs() < 1e-4);
        assert!((even.eigenvalue(1) - 5.0).abs() < 1e-4);
    }

    #[test]
    fn quartic_ground_state() {
        // lowest eigenvalue of −d² + x⁴
        let grid = Grid::uniform(8.0, 2048).unwrap();
        let sol = solve_h0(4.0, &grid, 3).unwrap();
        assert!((sol.eigenvalues[0] - 1.060_362_090_484_182_9).abs() < 1e-5);
        assert!(sol.richardson[0].abs() < 1e-5);
        let g = &sol.functions[1];
        let m = grid.len();
        for j in 1..m {
            assert!((g[grid.mirror(j)] + g[j]).abs() < 1e-14);
        }
    }

    #[test]
    fn weights_are_odd_with_consistent_derivatives() {
        for w in [PWeight::Rational, PWeight::Tanh, PWeight::Linear { slope: 0.3 }] {
            for x in [0.3, 1.7, -2.2] {
                assert!((w.p(-x) + w.p(x)).abs() < 1e-15);
                let e = 1e-6;
                assert!((w.dp(x) - (w.p(x + e) - w.p(x - e)) / (2.0 * e)).abs() < 1e-8);
                assert!((w.d2p(x) - (w.dp(x + e) - w.dp(x - e)) / (2.0 * e)).abs() < 1e-8);
            }
        }
        assert_eq!("linear:0.5".parse::<PWeight>().unwrap(), PWeight::Linear { slope: 0.5 });
    }
}

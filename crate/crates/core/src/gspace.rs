//! The metric `G = (I − T)(I + T)⁻¹` generated by a self-adjoint contraction
//! `T`, the inner product `(f, g)_G = (Gf, g)`, the fundamental symmetry
//! `J_G = (I + T)J(I + T)⁻¹` and the energetic norm.
//!
//! In finite dimension `H_G = H` as a set, so the distortion between the two
//! norms is measured by `cond(G)`.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::angular::PartialContraction;
use crate::error::{KreinError, Result};
use crate::extension::{CAYLEY_TOL, EXTENSION_TOL};
use crate::indefinite::SignatureSpace;
use crate::linalg::{self, c, inner, CMat, CVec};
use crate::sampling::random_complex_matrix;

/// Tolerance of the agreement identities.
pub const AGREEMENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct GMetric {
    space: SignatureSpace,
    t: CMat,
    g: CMat,
    xi: CMat,
    plus_t_inv: CMat,
    /// Orthonormal basis of `ker G` (eigenvalue `+1` of `T`).
    kernel: CMat,
    anticommuting: bool,
    cond: f64,
}

impl GMetric {
    /// `T` must be a self-adjoint contraction without eigenvalue `−1`.
    /// Eigenvalue `+1` makes `G` degenerate; the structure maps below then
    /// refuse vectors with a component along `ker G`.
    pub fn new(space: &SignatureSpace, t: &CMat) -> Result<Self> {
        space.check_square(t)?;
        let herm = linalg::max_abs(&(t - t.adjoint()));
        if herm > EXTENSION_TOL {
            return Err(KreinError::NotSymmetric(herm));
        }
        let t = linalg::hermitian_part(t);
        let (vals, vecs) = linalg::eigh(&t);
        let n = vals.len();
        if let Some(&hi) = vals.last() {
            if hi.abs().max(vals[0].abs()) > 1.0 + EXTENSION_TOL {
                return Err(KreinError::NotContraction(hi.abs().max(vals[0].abs())));
            }
        }
        if let Some(&lo) = vals.first() {
            if 1.0 + lo < CAYLEY_TOL {
                return Err(KreinError::CayleyUndefined(1.0 + lo));
            }
        }
        let g_vals: Vec<f64> = vals.iter().map(|&l| ((1.0 - l) / (1.0 + l)).max(0.0)).collect();
        let xi_vals: Vec<f64> = vals.iter().map(|&l| (1.0 - l * l).max(0.0).sqrt()).collect();
        let inv_vals: Vec<f64> = vals.iter().map(|&l| 1.0 / (1.0 + l)).collect();
        let ker: Vec<usize> = (0..n).filter(|&i| 1.0 - vals[i] < CAYLEY_TOL).collect();
        let kernel = CMat::from_fn(n, ker.len(), |i, k| vecs[(i, ker[k])]);
        let cond = if ker.is_empty() && n > 0 {
            let (lo, hi) = g_vals
                .iter()
                .fold((f64::INFINITY, 0.0_f64), |(a, b), &x| (a.min(x), b.max(x)));
            hi / lo
        } else if n == 0 {
            1.0
        } else {
            f64::INFINITY
        };
        Ok(GMetric {
            space: space.clone(),
            anticommuting: space.anticommutator_residual(&t) < EXTENSION_TOL,
            g: linalg::rebuild(&g_vals, &vecs),
            xi: linalg::rebuild(&xi_vals, &vecs),
            plus_t_inv: linalg::rebuild(&inv_vals, &vecs),
            t,
            kernel,
            cond,
        })
    }

    pub fn space(&self) -> &SignatureSpace {
        &self.space
    }

    pub fn t(&self) -> &CMat {
        &self.t
    }

    pub fn g(&self) -> &CMat {
        &self.g
    }

    /// `Ξ = √(I − T²)`.
    pub fn xi(&self) -> &CMat {
        &self.xi
    }

    pub fn is_degenerate(&self) -> bool {
        self.kernel.ncols() > 0
    }

    pub fn anticommuting(&self) -> bool {
        self.anticommuting
    }

    /// `λ_max(G) / λ_min(G)`, infinite for degenerate `G`.
    pub fn cond(&self) -> f64 {
        self.cond
    }

    /// `J_G = (I + T)J(I + T)⁻¹`. Requires `JT = −TJ`.
    pub fn j_g(&self) -> Result<CMat> {
        self.require_anticommuting()?;
        let it = linalg::identity(self.t.nrows()) + &self.t;
        Ok(it * self.space.j() * &self.plus_t_inv)
    }

    /// `P±^G = (I + T)P±(I + T)⁻¹`, the G-orthogonal projections onto
    /// `L±^max`.
    pub fn projections(&self) -> Result<(CMat, CMat)> {
        self.require_anticommuting()?;
        let it = linalg::identity(self.t.nrows()) + &self.t;
        let (pp, pm) = self.space.fundamental_projections();
        Ok((&it * pp * &self.plus_t_inv, &it * pm * &self.plus_t_inv))
    }

    fn require_anticommuting(&self) -> Result<()> {
        if self.anticommuting {
            Ok(())
        } else {
            Err(KreinError::NotAnticommuting(
                self.space.anticommutator_residual(&self.t),
            ))
        }
    }

    fn check_direction(&self, f: &CVec) -> Result<()> {
        self.space.check_vector(f)?;
        if self.kernel.ncols() == 0 {
            return Ok(());
        }
        let along = (self.kernel.adjoint() * f).norm();
        if along > AGREEMENT_TOL * 1.0_f64.max(f.norm()) {
            return Err(KreinError::DegenerateDirection(along));
        }
        Ok(())
    }

    /// `(Gf, g)` together with the decomposition form
    /// `[f₊, g₊] − [f₋, g₋]`, `f± ∈ L±^max`; the two must agree.
    pub fn g_inner(&self, f: &CVec, g: &CVec) -> Result<Complex64> {
        let direct = self.g_inner_direct(f, g)?;
        if self.anticommuting {
            let split = self.g_inner_split(f, g)?;
            let scale = 1.0_f64.max(f.norm() * g.norm() * self.cond.min(1e6));
            if (direct - split).norm() > AGREEMENT_TOL * scale {
                return Err(KreinError::Invariant(format!(
                    "(f,g)_G routes disagree by {:.3e}",
                    (direct - split).norm()
                )));
            }
        }
        Ok(direct)
    }

    /// `(Gf, g)`.
    pub fn g_inner_direct(&self, f: &CVec, g: &CVec) -> Result<Complex64> {
        self.check_direction(f)?;
        self.check_direction(g)?;
        Ok(inner(&(&self.g * f), g))
    }

    /// `[f₊, g₊] − [f₋, g₋]` with `f = f₊ + f₋`, `f± = (I + T)P±(I + T)⁻¹f`.
    pub fn g_inner_split(&self, f: &CVec, g: &CVec) -> Result<Complex64> {
        self.check_direction(f)?;
        self.check_direction(g)?;
        let (pp, pm) = self.projections()?;
        let br = |a: &CVec, b: &CVec| inner(&(self.space.j() * a), b);
        Ok(br(&(&pp * f), &(&pp * g)) - br(&(&pm * f), &(&pm * g)))
    }

    /// `[f, g]_G = (J_G f, g)_G`.
    pub fn jg_product(&self, f: &CVec, g: &CVec) -> Result<Complex64> {
        self.check_direction(f)?;
        self.check_direction(g)?;
        let jg = self.j_g()?;
        Ok(inner(&(&self.g * (jg * f)), g))
    }

    /// `(Gf, f)^{1/2}`.
    pub fn g_norm(&self, f: &CVec) -> Result<f64> {
        Ok(self.g_inner_direct(f, f)?.re.max(0.0).sqrt())
    }

    /// `(‖f‖² + ‖f‖_G²)^{1/2}`.
    pub fn energetic_norm(&self, f: &CVec) -> f64 {
        let gf = inner(&(&self.g * f), f).re.max(0.0);
        (f.norm_squared() + gf).sqrt()
    }

    /// Residuals of the structural identities on `samples` random vector
    /// pairs.
    pub fn agreement<R: Rng>(&self, samples: usize, rng: &mut R) -> Result<AgreementResiduals> {
        let n = self.t.nrows();
        let mut out = AgreementResiduals::default();
        let it = linalg::identity(n) + &self.t;
        let range = if self.is_degenerate() {
            linalg::complement(&self.kernel)
        } else {
            linalg::identity(n)
        };
        for _ in 0..samples {
            let coeffs = random_complex_matrix(range.ncols(), 2, rng);
            let pair = &range * coeffs;
            let f: CVec = pair.column(0).into_owned();
            let g: CVec = pair.column(1).into_owned();
            let direct = self.g_inner_direct(&f, &g)?;
            let x: CVec = random_complex_matrix(n, 1, rng).column(0).into_owned();
            let fx = &it * &x;
            if self.kernel.ncols() == 0 || (self.kernel.adjoint() * &fx).norm() < AGREEMENT_TOL {
                let lhs = self.g_norm(&fx)?;
                out.xi_norm = out.xi_norm.max((lhs - (&self.xi * &x).norm()).abs());
            }
            if self.anticommuting {
                let split = self.g_inner_split(&f, &g)?;
                out.split = out.split.max((direct - split).norm());
                let jg = self.jg_product(&f, &g)?;
                let plain = inner(&(self.space.j() * &f), &g);
                out.krein_product = out.krein_product.max((jg - plain).norm());
                let jgm = self.j_g()?;
                out.j_g_involution = linalg::max_abs(&(&jgm * &jgm - linalg::identity(n)));
                // J_G is G-self-adjoint: G J_G = (G J_G)*
                let gj = &self.g * &jgm;
                out.j_g_self_adjoint = linalg::max_abs(&(&gj - gj.adjoint()));
            }
        }
        Ok(out)
    }

    pub fn report<R: Rng>(&self, samples: usize, rng: &mut R) -> Result<GReport> {
        Ok(GReport {
            cond_g: self.cond,
            degenerate: self.is_degenerate(),
            agreement_residuals: self.agreement(samples, rng)?,
        })
    }
}

/// Maximal deviations observed by [`GMetric::agreement`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct AgreementResiduals {
    /// `(Gf, g)` vs `[f₊, g₊] − [f₋, g₋]`.
    pub split: f64,
    /// `‖(I + T)x‖_G` vs `‖Ξx‖`.
    pub xi_norm: f64,
    /// `[f, g]_G` vs `[f, g]`.
    pub krein_product: f64,
    pub j_g_involution: f64,
    pub j_g_self_adjoint: f64,
}

impl AgreementResiduals {
    pub fn max(&self) -> f64 {
        self.split
            .max(self.xi_norm)
            .max(self.krein_product)
            .max(self.j_g_involution)
            .max(self.j_g_self_adjoint)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GReport {
    #[serde(rename = "cond_G")]
    pub cond_g: f64,
    pub degenerate: bool,
    pub agreement_residuals: AgreementResiduals,
}

/// Largest disagreement of `(G_T f, f)` between the given extensions over
/// `f ∈ (I + T₀)D(T₀)`.
///
/// Every extension `T` of `T₀` whose Cayley transform exists gives
/// `(G_T f, f) = ‖x‖² − ‖T₀x‖²` there; extensions without one are skipped.
/// Returns the number of metrics compared and the residual.
pub fn domain_form_agreement(t0: &PartialContraction, extensions: &[CMat]) -> Result<(usize, f64)> {
    let d = t0.domain();
    let k = d.ncols();
    let f = d + t0.action();
    let reference: Vec<f64> = (0..k)
        .map(|j| {
            let x = d.column(j);
            x.norm_squared() - t0.action().column(j).norm_squared()
        })
        .collect();
    let mut used = 0;
    let mut worst = 0.0_f64;
    for t in extensions {
        let m = match GMetric::new(t0.space(), t) {
            Ok(m) => m,
            Err(KreinError::CayleyUndefined(_)) => continue,
            Err(e) => return Err(e),
        };
        used += 1;
        let gf = m.g() * &f;
        for j in 0..k {
            let v = inner(&gf.column(j).into_owned(), &f.column(j).into_owned());
            worst = worst.max((v - c(reference[j], 0.0)).norm());
        }
    }
    Ok((used, worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real_rows, vec_real};
    use crate::sampling::{random_anticommuting, random_space};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn std2() -> SignatureSpace {
        SignatureSpace::diagonal(1, 1).unwrap()
    }

    #[test]
    fn zero_t_gives_the_plain_product() {
        let s = std2();
        let m = GMetric::new(&s, &CMat::zeros(2, 2)).unwrap();
        let f = vec_real(&[0.3, -1.0]);
        let g = vec_real(&[2.0, 0.5]);
        assert!((m.g_inner(&f, &g).unwrap() - inner(&f, &g)).norm() < 1e-15);
        assert!(linalg::max_abs(&(m.j_g().unwrap() - s.j())) < 1e-15);
        assert!((m.energetic_norm(&vec_real(&[1.0, 0.0])) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.energetic_norm(&vec_real(&[0.0, 0.0])), 0.0);
        assert!((m.cond() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn maximal_subspace_examples() {
        let s = std2();
        let t = from_real_rows(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let m = GMetric::new(&s, &t).unwrap();
        let f = vec_real(&[1.0, 0.5]);
        let v = m.g_inner(&f, &f).unwrap();
        assert!((v - c(0.75, 0.0)).norm() < 1e-14);
        assert!((v - inner(&(s.j() * &f), &f)).norm() < 1e-14);
        let g = vec_real(&[0.5, 1.0]);
        assert!(m.g_inner(&f, &g).unwrap().norm() < 1e-14);
        // neutral vector stays neutral
        let e = vec_real(&[1.0, 1.0]);
        assert!(m.jg_product(&e, &e).unwrap().norm() < 1e-14);
    }

    #[test]
    fn diagonal_example() {
        let s = std2();
        let m = GMetric::new(&s, &linalg::diag_real(&[0.5, -0.5])).unwrap();
        assert!(linalg::max_abs(&(m.g() - linalg::diag_real(&[1.0 / 3.0, 3.0]))) < 1e-14);
        let en = m.energetic_norm(&vec_real(&[1.0, 0.0]));
        assert!((en - (1.0 + 1.0 / 3.0_f64).sqrt()).abs() < 1e-14);
        assert!((m.cond() - 9.0).abs() < 1e-12);
        assert!(!m.anticommuting());
        assert!(m.j_g().is_err());
    }

    #[test]
    fn random_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, q) in [(1, 1), (2, 3), (4, 2)] {
            let s = random_space(p, q, &mut rng).unwrap();
            let t = random_anticommuting(&s, 0.8, &mut rng);
            let m = GMetric::new(&s, &t).unwrap();
            let r = m.agreement(20, &mut rng).unwrap();
            assert!(r.max() < 1e-10, "{r:?}");
        }
    }

    #[test]
    fn degenerate_metric_rejects_kernel_directions() {
        let s = std2();
        let m = GMetric::new(&s, &linalg::diag_real(&[1.0, 0.0])).unwrap();
        assert!(m.is_degenerate() && m.cond().is_infinite());
        let e1 = vec_real(&[1.0, 0.0]);
        let e2 = vec_real(&[0.0, 1.0]);
        assert!(matches!(m.g_inner(&e1, &e2), Err(KreinError::DegenerateDirection(_))));
        assert!((m.g_inner(&e2, &e2).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            GMetric::new(&s, &linalg::diag_real(&[-1.0, 0.0])),
            Err(KreinError::CayleyUndefined(_))
        ));
    }
}

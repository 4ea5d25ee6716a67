//! Self-adjoint contractive extensions of a partial contraction `T₀`.
//!
//! All such extensions form the operator interval `[T_μ, T_M]` and are
//! parametrized by nonnegative contractions `X` on the defect space
//! `𝔐 = R(T_M − T_μ)`:
//!
//! ```text
//! T = T_μ + (T_M − T_μ)^{1/2} X (T_M − T_μ)^{1/2}
//! ```
//!
//! The extension anticommutes with `J` exactly when `X = J(I − X)J` on `𝔐`.
//! Whether `𝔐` carries a hypermaximal neutral subspace (equal `±` dimensions
//! of `J|𝔐`) separates the cases B and C.

use rand::Rng;
use serde::Serialize;

use crate::angular::{symmetry_residual, PartialContraction, OPERATOR_TOL};
use crate::error::{KreinError, Result};
use crate::indefinite::{classify_subspace, Classification, DefiniteClass, SignatureSpace, Subspace};
use crate::linalg::{self, real, CMat};
use crate::sampling::{random_anticommuting, random_unitary};

/// Tolerance on identities satisfied by constructed extensions.
pub const EXTENSION_TOL: f64 = 1e-10;

/// Eigenvalues of `T_M − T_μ` above this threshold span the defect space.
pub const DEFECT_TOL: f64 = 1e-10;

/// `1 + λ` below this makes the Cayley transform undefined.
pub const CAYLEY_TOL: f64 = 1e-10;

/// Some self-adjoint contraction `T'` extending `T₀`.
///
/// In the block form with respect to `D ⊕ D^⊥` the first block column
/// `[A; B]` is fixed by `T₀`. The lower-right block `C` ranges over the
/// operator interval cut out by `I ± T' ≥ 0`, whose endpoints are the Schur
/// complements `C_min = −I + B(I + A)⁻¹B*` and `C_max = I − B(I − A)⁻¹B*`.
/// The midpoint is returned.
pub fn any_sa_extension(t0: &PartialContraction) -> Result<CMat> {
    let r = symmetry_residual(t0);
    if r > OPERATOR_TOL {
        return Err(KreinError::NotSymmetric(r));
    }
    let d = t0.domain();
    let n = t0.dim();
    let k = d.ncols();
    let dc = linalg::complement(d);
    let a = linalg::hermitian_part(&(d.adjoint() * t0.action()));
    let b = dc.adjoint() * t0.action();
    let ik = linalg::identity(k);
    let im = linalg::identity(n - k);
    let inv_plus = (&ik + &a)
        .try_inverse()
        .ok_or_else(|| KreinError::RankFailure("I + T₀ singular on the domain".into()))?;
    let inv_minus = (&ik - &a)
        .try_inverse()
        .ok_or_else(|| KreinError::RankFailure("I − T₀ singular on the domain".into()))?;
    let c_min = -&im + &b * inv_plus * b.adjoint();
    let c_max = &im - &b * inv_minus * b.adjoint();
    let c_mid = linalg::hermitian_part(&((c_min + c_max) * real(0.5)));

    let basis = linalg::hstack(d, &dc);
    let block = CMat::from_fn(n, n, |i, j| match (i < k, j < k) {
        (true, true) => a[(i, j)],
        (false, true) => b[(i - k, j)],
        (true, false) => b[(j - k, i)].conj(),
        (false, false) => c_mid[(i - k, j - k)],
    });
    let t = linalg::hermitian_part(&(&basis * block * basis.adjoint()));
    let norm = linalg::op_norm(&t);
    if norm > 1.0 + EXTENSION_TOL {
        return Err(KreinError::Invariant(format!(
            "no contractive completion found (norm {norm:.17e})"
        )));
    }
    Ok(t)
}

/// `T = ½(T' − JT'J)`: the part of `T'` anticommuting with `J`.
pub fn j_symmetrize(space: &SignatureSpace, t_prime: &CMat) -> CMat {
    let j = space.j();
    (t_prime - j * t_prime * j) * real(0.5)
}

/// The interval `[T_μ, T_M]` of all self-adjoint contractive extensions.
#[derive(Debug, Clone)]
pub struct ExtensionInterval {
    space: SignatureSpace,
    domain: CMat,
    action: CMat,
    t_mid: CMat,
    t_mu: CMat,
    t_m: CMat,
    defect: CMat,
    root: CMat,
    signature: (usize, usize),
}

impl ExtensionInterval {
    pub fn space(&self) -> &SignatureSpace {
        &self.space
    }

    /// The hard extension.
    pub fn t_mu(&self) -> &CMat {
        &self.t_mu
    }

    /// The soft extension.
    pub fn t_m(&self) -> &CMat {
        &self.t_m
    }

    /// The anticommuting extension the endpoints were computed from.
    pub fn reference(&self) -> &CMat {
        &self.t_mid
    }

    /// Orthonormal basis of `𝔐`, ordered so that `J|𝔐` is `diag(I_p, −I_q)`.
    pub fn defect_basis(&self) -> &CMat {
        &self.defect
    }

    pub fn defect(&self) -> Subspace {
        Subspace::from_span(&self.defect)
    }

    pub fn defect_dim(&self) -> usize {
        self.defect.ncols()
    }

    /// Multiplicities of `+1` and `−1` of `J` restricted to `𝔐`.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    /// `(T_M − T_μ)^{1/2}`.
    pub fn root(&self) -> &CMat {
        &self.root
    }

    /// `J|𝔐` in the defect basis.
    pub fn j_defect(&self) -> CMat {
        self.defect.adjoint() * self.space.j() * &self.defect
    }

    pub fn width(&self) -> f64 {
        linalg::op_norm(&(&self.t_m - &self.t_mu))
    }

    /// Embed an operator on `𝔐` (defect coordinates) into the full space.
    pub fn embed(&self, x: &CMat) -> CMat {
        &self.defect * x * self.defect.adjoint()
    }

    pub fn check(&self) -> IntervalCheck {
        let diff = &self.t_m - &self.t_mu;
        let (vals, _) = linalg::eigh(&diff);
        let j = self.space.j();
        let herm = linalg::max_abs(&(&self.t_mu - self.t_mu.adjoint()))
            .max(linalg::max_abs(&(&self.t_m - self.t_m.adjoint())));
        let ext = linalg::max_abs(&(&self.t_mu * &self.domain - &self.action))
            .max(linalg::max_abs(&(&self.t_m * &self.domain - &self.action)));
        let reduces = if self.defect.ncols() == 0 {
            0.0
        } else {
            let je = j * &self.defect;
            linalg::max_abs(&(&je - &self.defect * (self.defect.adjoint() * &je)))
        };
        IntervalCheck {
            order_min_eigenvalue: vals.first().copied().unwrap_or(0.0),
            hermitian_residual: herm,
            norm_mu: linalg::op_norm(&self.t_mu),
            norm_m: linalg::op_norm(&self.t_m),
            extension_residual: ext,
            endpoint_relation_residual: linalg::max_abs(&(j * &self.t_mu + &self.t_m * j)),
            reduces_j_residual: reduces,
        }
    }
}

/// Structural diagnostics of an [`ExtensionInterval`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalCheck {
    /// Smallest eigenvalue of `T_M − T_μ` (must be ≥ 0).
    pub order_min_eigenvalue: f64,
    pub hermitian_residual: f64,
    pub norm_mu: f64,
    pub norm_m: f64,
    /// `‖T_μ − T₀‖` and `‖T_M − T₀‖` on the domain.
    pub extension_residual: f64,
    /// `‖JT_μ + T_M J‖`.
    pub endpoint_relation_residual: f64,
    /// `‖(I − P_𝔐)J P_𝔐‖`.
    pub reduces_j_residual: f64,
}

impl IntervalCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.order_min_eigenvalue >= -tol
            && self.hermitian_residual <= tol
            && self.norm_mu <= 1.0 + tol
            && self.norm_m <= 1.0 + tol
            && self.extension_residual <= tol
            && self.endpoint_relation_residual <= tol
            && self.reduces_j_residual <= tol
    }
}

/// Krein's endpoint formulas
///
/// ```text
/// T_μ = T − √(I+T) Q₁ √(I+T),   T_M = T + √(I−T) Q₂ √(I−T)
/// ```
///
/// with `T` an anticommuting self-adjoint contractive extension and `Q₁`,
/// `Q₂` the projections onto the orthogonal complements of `√(I+T)D(T₀)` and
/// `√(I−T)D(T₀)`.
pub fn krein_interval(t0: &PartialContraction) -> Result<ExtensionInterval> {
    let space = t0.space().clone();
    let n = space.dim();
    let t = j_symmetrize(&space, &any_sa_extension(t0)?);
    let id = linalg::identity(n);
    let d = t0.domain();

    let root_plus = linalg::psd_sqrt(&(&id + &t))?;
    let root_minus = linalg::psd_sqrt(&(&id - &t))?;
    let q1 = &id - linalg::projector(&linalg::orth(&(&root_plus * d), linalg::RANK_RTOL));
    let q2 = &id - linalg::projector(&linalg::orth(&(&root_minus * d), linalg::RANK_RTOL));
    let t_mu = linalg::hermitian_part(&(&t - &root_plus * q1 * &root_plus));
    let t_m = linalg::hermitian_part(&(&t + &root_minus * q2 * &root_minus));

    let (vals, vecs) = linalg::eigh(&(&t_m - &t_mu));
    let keep: Vec<usize> = (0..n).filter(|&i| vals[i] > DEFECT_TOL).collect();
    let e = CMat::from_fn(n, keep.len(), |i, j| vecs[(i, keep[j])]);
    let root = linalg::rebuild(&keep.iter().map(|&i| vals[i].sqrt()).collect::<Vec<_>>(), &e);

    // rotate the defect basis so that J|𝔐 is diagonal with +1 first
    let (defect, signature) = if e.ncols() == 0 {
        (e, (0, 0))
    } else {
        let jm = e.adjoint() * space.j() * &e;
        let (jvals, jvecs) = linalg::eigh(&jm);
        let m = jvals.len();
        let q = jvals.iter().filter(|&&v| v < 0.0).count();
        let order: Vec<usize> = (q..m).chain(0..q).collect();
        let rot = CMat::from_fn(m, m, |i, k| jvecs[(i, order[k])]);
        (&e * rot, (m - q, q))
    };

    Ok(ExtensionInterval {
        space,
        domain: d.clone(),
        action: t0.action().clone(),
        t_mid: t,
        t_mu,
        t_m,
        defect,
        root,
        signature,
    })
}

/// Residual `‖X − J(I − X)J‖` on `𝔐`.
pub fn x_equation_residual(interval: &ExtensionInterval, x: &CMat) -> f64 {
    let jm = interval.j_defect();
    let m = jm.nrows();
    linalg::max_abs(&(x - &jm * (linalg::identity(m) - x) * &jm))
}

/// `X_α = (1 − α)X₀ + αX₁` with `X₁ = I − X₀`.
#[derive(Debug, Clone)]
pub struct AffineFamily {
    pub x0: CMat,
    pub x1: CMat,
}

impl AffineFamily {
    pub fn at(&self, alpha: f64) -> CMat {
        &self.x0 * real(1.0 - alpha) + &self.x1 * real(alpha)
    }
}

/// Solutions of `X = J(I − X)J` on the defect space.
#[derive(Debug, Clone)]
pub struct XSolutions {
    /// The elementary solution `½I`.
    pub half: CMat,
    /// Orthogonal projection onto a hypermaximal neutral subspace, when
    /// `p = q`.
    pub projection: Option<CMat>,
    /// Line through `X₀` (the projection if any, otherwise `½I`) and `I − X₀`.
    pub affine: AffineFamily,
}

/// Projection onto `span{(u_i + Σ_j W_ji u'_j)/√2}` where `u`, `u'` are the
/// `+1` and `−1` eigenvectors of `J|𝔐` and `W` is unitary.
///
/// Every such subspace is hypermaximal neutral, so the projection solves the
/// `X`-equation. Returns `None` when `p ≠ q`.
pub fn projection_solution(interval: &ExtensionInterval, pairing: &CMat) -> Option<CMat> {
    let (p, q) = interval.signature();
    if p != q || p == 0 || pairing.nrows() != p || pairing.ncols() != p {
        return None;
    }
    let m = p + q;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = CMat::from_fn(m, p, |i, k| {
        if i < p {
            if i == k {
                real(s)
            } else {
                real(0.0)
            }
        } else {
            pairing[(i - p, k)] * s
        }
    });
    Some(&v * v.adjoint())
}

/// As [`projection_solution`] with a random unitary pairing drawn from `rng`.
pub fn random_projection_solution<R: Rng>(interval: &ExtensionInterval, rng: &mut R) -> Option<CMat> {
    let (p, _) = interval.signature();
    projection_solution(interval, &random_unitary(p, rng))
}

/// Random solution of the `X`-equation: `½I + K` with `J|𝔐` anticommuting
/// with `K` and `‖K‖ ≤ ½`. Every solution has this form.
pub fn random_x_solution<R: Rng>(interval: &ExtensionInterval, rng: &mut R) -> CMat {
    let (p, q) = interval.signature();
    let m = p + q;
    let half = linalg::identity(m) * real(0.5);
    if p == 0 || q == 0 {
        return half;
    }
    let space = SignatureSpace::diagonal(p, q).expect("p, q > 0");
    let k = random_anticommuting(&space, rng.gen_range(0.0..=0.5), rng);
    half + k
}

/// Random nonnegative contraction on `𝔐` (eigenvalues uniform in `[0, 1]`).
pub fn random_x<R: Rng>(m: usize, rng: &mut R) -> CMat {
    let u = random_unitary(m, rng);
    let d: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..=1.0)).collect();
    linalg::rebuild(&d, &u)
}

pub fn solve_x_equation(interval: &ExtensionInterval) -> Result<XSolutions> {
    let m = interval.defect_dim();
    if m == 0 {
        return Err(KreinError::TrivialDefect);
    }
    let (p, _) = interval.signature();
    let half = linalg::identity(m) * real(0.5);
    let projection = projection_solution(interval, &linalg::identity(p));
    let x0 = projection.clone().unwrap_or_else(|| half.clone());
    let x1 = linalg::identity(m) - &x0;
    let sols = XSolutions {
        half,
        projection,
        affine: AffineFamily { x0, x1 },
    };
    for x in [Some(&sols.half), sols.projection.as_ref(), Some(&sols.affine.at(0.3))]
        .into_iter()
        .flatten()
    {
        let r = x_equation_residual(interval, x);
        if r > EXTENSION_TOL {
            return Err(KreinError::Invariant(format!("X-equation residual {r:.3e}")));
        }
        check_x(x)?;
    }
    Ok(sols)
}

fn check_x(x: &CMat) -> Result<()> {
    if x.nrows() != x.ncols() {
        return Err(KreinError::NotSquare {
            rows: x.nrows(),
            cols: x.ncols(),
        });
    }
    if x.nrows() == 0 {
        return Ok(());
    }
    let herm = linalg::max_abs(&(x - x.adjoint()));
    if herm > EXTENSION_TOL {
        return Err(KreinError::XOutOfInterval(format!("not self-adjoint ({herm:.3e})")));
    }
    let (vals, _) = linalg::eigh(x);
    let (lo, hi) = (vals[0], vals[vals.len() - 1]);
    if lo < -EXTENSION_TOL || hi > 1.0 + EXTENSION_TOL {
        return Err(KreinError::XOutOfInterval(format!("spectrum in [{lo:.3e}, {hi:.3e}]")));
    }
    Ok(())
}

/// A self-adjoint contractive extension together with its parameter.
#[derive(Debug, Clone)]
pub struct ExtensionChoice {
    /// Parameter on `𝔐` in defect coordinates.
    pub x: CMat,
    /// The extension on the whole space.
    pub t: CMat,
    /// `X` is an orthogonal projection.
    pub extremal: bool,
    /// `JT = −TJ`.
    pub anticommuting: bool,
    /// `X = J(I − X)J`.
    pub x_solves_equation: bool,
    pub anticommutator_residual: f64,
    pub x_equation_residual: f64,
}

impl ExtensionChoice {
    /// The two anticommutation criteria agree.
    pub fn consistent(&self) -> bool {
        self.anticommuting == self.x_solves_equation
    }
}

pub fn extension_from_x(interval: &ExtensionInterval, x: &CMat) -> Result<ExtensionChoice> {
    let m = interval.defect_dim();
    if x.nrows() != m || x.ncols() != m {
        return Err(KreinError::DimensionMismatch {
            expected: m,
            got: x.nrows(),
        });
    }
    check_x(x)?;
    let x = linalg::hermitian_part(x);
    let root = interval.root();
    let t = linalg::hermitian_part(&(interval.t_mu() + root * interval.embed(&x) * root));
    let anti = interval.space().anticommutator_residual(&t);
    let xres = x_equation_residual(interval, &x);
    let scale = 1.0_f64.max(interval.width());
    let idem = if m == 0 { 0.0 } else { linalg::max_abs(&(&x * &x - &x)) };
    Ok(ExtensionChoice {
        extremal: idem < EXTENSION_TOL,
        anticommuting: anti < EXTENSION_TOL * scale,
        x_solves_equation: xres < EXTENSION_TOL,
        anticommutator_residual: anti,
        x_equation_residual: xres,
        x,
        t,
    })
}

/// Outcome of the two extremality criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Extremality {
    /// `X` is an orthogonal projection.
    pub projection_criterion: bool,
    /// `G^{1/2}(I+T)D(T₀)` spans `G^{1/2}H`; `None` when the Cayley
    /// transform of `T` does not exist.
    pub rank_criterion: Option<bool>,
}

impl Extremality {
    pub fn cayley_defined(&self) -> bool {
        self.rank_criterion.is_some()
    }

    pub fn agree(&self) -> bool {
        self.rank_criterion.is_none_or(|r| r == self.projection_criterion)
    }

    pub fn verdict(&self) -> bool {
        self.projection_criterion
    }
}

/// Finite-dimensional form of `inf_{f ∈ D(G₀)} (G(φ − f), φ − f) = 0` for all
/// `φ`: the image of `D(G₀) = (I+T)D(T₀)` under `G^{1/2}` fills the range of
/// `G^{1/2}`.
pub fn extremality_test(t0: &PartialContraction, choice: &ExtensionChoice) -> Extremality {
    let t = &choice.t;
    let (vals, vecs) = linalg::eigh(t);
    let cayley_defined = vals.iter().all(|&l| 1.0 + l >= CAYLEY_TOL);
    let rank_criterion = cayley_defined.then(|| {
        let live: Vec<usize> = (0..vals.len()).filter(|&i| 1.0 - vals[i] >= CAYLEY_TOL).collect();
        if live.is_empty() {
            return true;
        }
        let n = t.nrows();
        let d = t0.domain();
        let image = (linalg::identity(n) + t) * d;
        let coords = vecs.adjoint() * image;
        let scaled = CMat::from_fn(live.len(), d.ncols(), |r, k| {
            let i = live[r];
            coords[(i, k)] * ((1.0 - vals[i]) / (1.0 + vals[i])).sqrt()
        });
        linalg::rank(&scaled, EXTENSION_TOL) == live.len()
    });
    Extremality {
        projection_criterion: choice.extremal,
        rank_criterion,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    A,
    B,
    C,
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Case::A => "A",
            Case::B => "B",
            Case::C => "C",
        };
        f.write_str(s)
    }
}

pub fn classify_case(interval: &ExtensionInterval) -> Case {
    if interval.width() < EXTENSION_TOL {
        return Case::A;
    }
    let (p, q) = interval.signature();
    if p == q {
        Case::B
    } else {
        Case::C
    }
}

/// `L±^max = (I + T)H±` with diagnostics.
#[derive(Debug, Clone)]
pub struct MaxSubspaces {
    pub plus: Subspace,
    pub minus: Subspace,
    pub plus_class: Option<Classification>,
    pub minus_class: Option<Classification>,
    /// Some image direction collapsed or became neutral.
    pub degenerate: bool,
    /// `max |[f₊, f₋]|`.
    pub duality_residual: f64,
}

fn check_anticommuting_contraction(space: &SignatureSpace, t: &CMat) -> Result<()> {
    space.check_square(t)?;
    let herm = linalg::max_abs(&(t - t.adjoint()));
    if herm > EXTENSION_TOL {
        return Err(KreinError::NotSymmetric(herm));
    }
    let norm = linalg::op_norm(t);
    if norm > 1.0 + EXTENSION_TOL {
        return Err(KreinError::NotContraction(norm));
    }
    let anti = space.anticommutator_residual(t);
    if anti > EXTENSION_TOL {
        return Err(KreinError::NotAnticommuting(anti));
    }
    Ok(())
}

pub fn max_subspaces(space: &SignatureSpace, t: &CMat) -> Result<MaxSubspaces> {
    check_anticommuting_contraction(space, t)?;
    let n = space.dim();
    let it = linalg::identity(n) + t;
    let hp = space.h_plus();
    let hm = space.h_minus();
    let plus = Subspace::from_span(&(&it * &hp));
    let minus = Subspace::from_span(&(&it * &hm));
    let classify = |l: &Subspace| {
        if l.dim() == 0 {
            Ok(None)
        } else {
            classify_subspace(space, l).map(Some)
        }
    };
    let plus_class = classify(&plus)?;
    let minus_class = classify(&minus)?;
    let strict = |c: &Option<Classification>, want: DefiniteClass| c.is_none_or(|c| c.class == want);
    let degenerate = plus.dim() < hp.ncols()
        || minus.dim() < hm.ncols()
        || !strict(&plus_class, DefiniteClass::Positive)
        || !strict(&minus_class, DefiniteClass::Negative);
    let duality_residual = if plus.dim() == 0 || minus.dim() == 0 {
        0.0
    } else {
        linalg::max_abs(&(minus.basis().adjoint() * space.j() * plus.basis()))
    };
    Ok(MaxSubspaces {
        plus,
        minus,
        plus_class,
        minus_class,
        degenerate,
        duality_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    /// `R(Ξ) ∩ D(T₀)^⊥ = {0}`.
    pub dense: bool,
    pub intersection_dim: usize,
    pub xi_rank: usize,
}

/// Finite-dimensional density criterion `R(Ξ) ∩ D(T₀)^⊥ = {0}` with
/// `Ξ = √(I − T²)`.
pub fn density_test(t0: &PartialContraction, t: &CMat) -> Result<DensityReport> {
    let space = t0.space();
    check_anticommuting_contraction(space, t)?;
    let ext = linalg::max_abs(&(t * t0.domain() - t0.action()));
    if ext > EXTENSION_TOL {
        return Err(KreinError::Invariant(format!(
            "T does not extend T₀ (residual {ext:.3e})"
        )));
    }
    let n = space.dim();
    // R(Ξ) = R(I − T²)
    let (vals, vecs) = linalg::eigh(&(linalg::identity(n) - t * t));
    let keep: Vec<usize> = (0..n).filter(|&i| vals[i] > DEFECT_TOL).collect();
    let range = CMat::from_fn(n, keep.len(), |i, j| vecs[(i, keep[j])]);
    let perp = linalg::complement(t0.domain());
    let dim = linalg::intersection_dim(&range, &perp, EXTENSION_TOL);
    Ok(DensityReport {
        dense: dim == 0,
        intersection_dim: dim,
        xi_rank: keep.len(),
    })
}

/// `G = (I − T)(I + T)⁻¹` for self-adjoint `T` with `−1 ∉ σ(T)`.
pub fn cayley(t: &CMat) -> Result<CMat> {
    let herm = linalg::max_abs(&(t - t.adjoint()));
    if herm > EXTENSION_TOL {
        return Err(KreinError::NotSymmetric(herm));
    }
    let (vals, vecs) = linalg::eigh(t);
    if let Some(&lo) = vals.first() {
        if 1.0 + lo < CAYLEY_TOL {
            return Err(KreinError::CayleyUndefined(1.0 + lo));
        }
    }
    let g: Vec<f64> = vals.iter().map(|&l| (1.0 - l) / (1.0 + l)).collect();
    Ok(linalg::rebuild(&g, &vecs))
}

/// `T = (I − G)(I + G)⁻¹` for positive definite `G`.
pub fn cayley_inv(g: &CMat) -> Result<CMat> {
    let herm = linalg::max_abs(&(g - g.adjoint()));
    if herm > EXTENSION_TOL * 1.0_f64.max(linalg::max_abs(g)) {
        return Err(KreinError::NotSymmetric(herm));
    }
    let (vals, vecs) = linalg::eigh(g);
    if let Some(&lo) = vals.first() {
        if lo <= 0.0 {
            return Err(KreinError::NotPositiveDefinite(lo));
        }
    }
    let t: Vec<f64> = vals.iter().map(|&m| (1.0 - m) / (1.0 + m)).collect();
    Ok(linalg::rebuild(&t, &vecs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, from_real_rows};

    fn std2() -> SignatureSpace {
        SignatureSpace::diagonal(1, 1).unwrap()
    }

    fn half_instance() -> PartialContraction {
        PartialContraction::new(
            std2(),
            from_real_rows(2, 1, &[1.0, 0.0]),
            from_real_rows(2, 1, &[0.0, 0.5]),
        )
        .unwrap()
    }

    fn empty_instance() -> PartialContraction {
        PartialContraction::new(std2(), CMat::zeros(2, 0), CMat::zeros(2, 0)).unwrap()
    }

    fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
        linalg::max_abs(&(a - b)) < tol
    }

    #[test]
    fn sa_extension_examples() {
        let t = from_real_rows(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let full = PartialContraction::full(std2(), t.clone()).unwrap();
        assert!(close(&any_sa_extension(&full).unwrap(), &t, 1e-15));
        assert!(close(&any_sa_extension(&half_instance()).unwrap(), &t, 1e-15));
        assert!(close(
            &any_sa_extension(&empty_instance()).unwrap(),
            &CMat::zeros(2, 2),
            1e-15
        ));
    }

    #[test]
    fn j_symmetrize_examples() {
        let s = std2();
        for cc in [-0.7, 0.0, 0.3] {
            let tp = from_real_rows(2, 2, &[0.0, 0.5, 0.5, cc]);
            let t = j_symmetrize(&s, &tp);
            assert!(close(&t, &from_real_rows(2, 2, &[0.0, 0.5, 0.5, 0.0]), 1e-15));
        }
        assert!(close(&j_symmetrize(&s, s.j()), &CMat::zeros(2, 2), 1e-15));
        let anti = from_real_rows(2, 2, &[0.0, 0.3, 0.3, 0.0]);
        assert!(close(&j_symmetrize(&s, &anti), &anti, 1e-15));
    }

    #[test]
    fn interval_examples() {
        let iv = krein_interval(&empty_instance()).unwrap();
        assert!(close(iv.t_mu(), &(-linalg::identity(2)), 1e-12));
        assert!(close(iv.t_m(), &linalg::identity(2), 1e-12));
        assert_eq!(iv.signature(), (1, 1));

        let iv = krein_interval(&half_instance()).unwrap();
        assert!(close(iv.t_mu(), &from_real_rows(2, 2, &[0.0, 0.5, 0.5, -0.75]), 1e-12));
        assert!(close(iv.t_m(), &from_real_rows(2, 2, &[0.0, 0.5, 0.5, 0.75]), 1e-12));
        assert_eq!(iv.signature(), (0, 1));
        assert!(
            iv.defect()
                .angle_to(&Subspace::from_span(&from_real_rows(2, 1, &[0.0, 1.0])))
                < 1e-12
        );

        let t = from_real_rows(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let iv = krein_interval(&PartialContraction::full(std2(), t.clone()).unwrap()).unwrap();
        assert!(close(iv.t_mu(), &t, 1e-12) && close(iv.t_m(), &t, 1e-12));
        assert_eq!(iv.defect_dim(), 0);
        assert!(iv.check().passes(1e-10));
    }

    #[test]
    fn x_equation_examples() {
        let iv = krein_interval(&empty_instance()).unwrap();
        let sols = solve_x_equation(&iv).unwrap();
        let proj = sols.projection.expect("signature (1,1) has projection solutions");
        assert!(close(&(&proj * &proj), &proj, 1e-14));
        // the whole family X_θ = [[½, e^{iθ}/2], [e^{−iθ}/2, ½]]
        for theta in [0.0_f64, 0.7, 2.0, -1.3] {
            let w = CMat::from_element(1, 1, c(theta.cos(), theta.sin()));
            let x = projection_solution(&iv, &w).unwrap();
            let expect = CMat::from_row_slice(
                2,
                2,
                &[
                    c(0.5, 0.0),
                    c(theta.cos(), -theta.sin()) * 0.5,
                    c(theta.cos(), theta.sin()) * 0.5,
                    c(0.5, 0.0),
                ],
            );
            assert!(close(&x, &expect, 1e-14));
            assert!(x_equation_residual(&iv, &x) < 1e-14);
        }

        let iv = krein_interval(&half_instance()).unwrap();
        let sols = solve_x_equation(&iv).unwrap();
        assert!(sols.projection.is_none());
        assert!(close(&sols.half, &(linalg::identity(1) * real(0.5)), 1e-15));
        // x = 1 − x has the single solution ½
        for x in [0.0, 0.25, 0.75, 1.0] {
            let xm = linalg::identity(1) * real(x);
            assert!(x_equation_residual(&iv, &xm) > 0.1);
        }
    }

    #[test]
    fn trivial_defect_has_no_x_equation() {
        let t = from_real_rows(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let iv = krein_interval(&PartialContraction::full(std2(), t).unwrap()).unwrap();
        assert_eq!(solve_x_equation(&iv).unwrap_err(), KreinError::TrivialDefect);
    }

    #[test]
    fn extension_from_x_examples() {
        let iv = krein_interval(&half_instance()).unwrap();
        let e0 = extension_from_x(&iv, &CMat::zeros(1, 1)).unwrap();
        assert!(close(&e0.t, iv.t_mu(), 1e-12));
        let e1 = extension_from_x(&iv, &linalg::identity(1)).unwrap();
        assert!(close(&e1.t, iv.t_m(), 1e-12));
        assert!(e1.extremal && e0.extremal);
        let eh = extension_from_x(&iv, &(linalg::identity(1) * real(0.5))).unwrap();
        assert!(close(&eh.t, &((iv.t_mu() + iv.t_m()) * real(0.5)), 1e-12));
        assert!(eh.anticommuting && eh.x_solves_equation && !eh.extremal);
        assert!(matches!(
            extension_from_x(&iv, &(linalg::identity(1) * real(1.5))),
            Err(KreinError::XOutOfInterval(_))
        ));
    }

    #[test]
    fn extremality_examples() {
        let t0 = half_instance();
        let iv = krein_interval(&t0).unwrap();
        let eh = extension_from_x(&iv, &(linalg::identity(1) * real(0.5))).unwrap();
        let r = extremality_test(&t0, &eh);
        assert_eq!(
            r,
            Extremality {
                projection_criterion: false,
                rank_criterion: Some(false)
            }
        );
        let e1 = extension_from_x(&iv, &linalg::identity(1)).unwrap();
        let r = extremality_test(&t0, &e1);
        assert_eq!(
            r,
            Extremality {
                projection_criterion: true,
                rank_criterion: Some(true)
            }
        );
        // T_μ has eigenvalue −1: only the projection criterion applies
        let e0 = extension_from_x(&iv, &CMat::zeros(1, 1)).unwrap();
        assert!(!extremality_test(&t0, &e0).cayley_defined());

        let t = from_real_rows(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let full = PartialContraction::full(std2(), t).unwrap();
        let iv = krein_interval(&full).unwrap();
        let only = extension_from_x(&iv, &CMat::zeros(0, 0)).unwrap();
        let r = extremality_test(&full, &only);
        assert!(r.verdict() && r.rank_criterion == Some(true));
    }

    #[test]
    fn case_examples() {
        let t = from_real_rows(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let full = krein_interval(&PartialContraction::full(std2(), t).unwrap()).unwrap();
        assert_eq!(classify_case(&full), Case::A);
        assert_eq!(classify_case(&krein_interval(&empty_instance()).unwrap()), Case::B);
        assert_eq!(classify_case(&krein_interval(&half_instance()).unwrap()), Case::C);
    }

    #[test]
    fn max_subspace_examples() {
        let s = std2();
        let m = max_subspaces(&s, &CMat::zeros(2, 2)).unwrap();
        assert!(m.plus.angle_to(&Subspace::from_span(&s.h_plus())) < 1e-14);
        assert!(!m.degenerate);

        let t = from_real_rows(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let m = max_subspaces(&s, &t).unwrap();
        assert!(
            m.plus
                .angle_to(&Subspace::from_span(&from_real_rows(2, 1, &[1.0, 0.5])))
                < 1e-14
        );
        assert!(
            m.minus
                .angle_to(&Subspace::from_span(&from_real_rows(2, 1, &[0.5, 1.0])))
                < 1e-14
        );
        assert!(m.duality_residual < 1e-14 && !m.degenerate);

        let t = from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let m = max_subspaces(&s, &t).unwrap();
        assert!(m.degenerate);
        assert_eq!(m.plus_class.unwrap().class, DefiniteClass::Nonnegative);
        assert!(
            m.plus
                .angle_to(&Subspace::from_span(&from_real_rows(2, 1, &[1.0, 1.0])))
                < 1e-14
        );
    }

    #[test]
    fn density_examples() {
        let s = std2();
        let full = PartialContraction::full(s.clone(), CMat::zeros(2, 2)).unwrap();
        assert!(density_test(&full, &CMat::zeros(2, 2)).unwrap().dense);

        let t = from_real_rows(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let r = density_test(&half_instance(), &t).unwrap();
        assert!(!r.dense);
        assert_eq!(r.intersection_dim, 1);
        assert_eq!(r.xi_rank, 2);

        // Ξ = 0 everywhere but D^⊥ = {0}
        let t = from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let full = PartialContraction::full(s, t.clone()).unwrap();
        let r = density_test(&full, &t).unwrap();
        assert!(r.dense && r.xi_rank == 0);
    }

    #[test]
    fn cayley_examples() {
        assert!(close(&cayley(&CMat::zeros(2, 2)).unwrap(), &linalg::identity(2), 1e-15));
        let t = 0.4;
        let g = cayley(&linalg::diag_real(&[t, -t])).unwrap();
        assert!(close(
            &g,
            &linalg::diag_real(&[(1.0 - t) / (1.0 + t), (1.0 + t) / (1.0 - t)]),
            1e-14
        ));
        let bad = from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(cayley(&bad), Err(KreinError::CayleyUndefined(_))));
        let back = cayley_inv(&g).unwrap();
        assert!(close(&back, &linalg::diag_real(&[t, -t]), 1e-14));
        assert!(matches!(
            cayley_inv(&linalg::diag_real(&[1.0, 0.0])),
            Err(KreinError::NotPositiveDefinite(_))
        ));
    }
}

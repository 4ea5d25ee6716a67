//! Angular representation of pairs of definite subspaces.
//!
//! A positive subspace `L₊` and a negative subspace `L₋` are graphs over
//! `M± = P±L± ⊆ H±`. Collecting the two angular operators gives one partial
//! contraction `T₀ = K₊⁻P₊ + K₋⁺P₋` on the J-invariant domain `M₊ ⊕ M₋`, and
//! `L± = (I + T₀)M±`.

use serde::{Deserialize, Serialize};

use crate::error::{KreinError, Result};
use crate::indefinite::{classify_subspace, DefiniteClass, SignatureSpace, Subspace};
use crate::json::MatrixJson;
use crate::linalg::{self, CMat, CVec};

/// Tolerance for structural checks on partial operators.
pub const OPERATOR_TOL: f64 = 1e-10;

/// Singular values within this distance of 1 are flagged, not rejected.
pub const UNIT_FLAG_TOL: f64 = 1e-12;

/// `‖T₀‖` closer than this to 1 is reported as approaching non-uniformity.
pub const APPROACH_GAP: f64 = 1e-2;

/// A linear operator defined on a subspace of `C^n`.
///
/// `domain` has orthonormal columns and `action` holds their images.
#[derive(Debug, Clone)]
pub struct PartialOperator {
    pub domain: CMat,
    pub action: CMat,
}

impl PartialOperator {
    /// The operator sending column `k` of `inputs` to column `k` of `outputs`.
    /// The inputs must be linearly independent.
    pub fn from_pairs(inputs: &CMat, outputs: &CMat) -> Result<Self> {
        let k = inputs.ncols();
        let q = linalg::orth(inputs, linalg::RANK_RTOL);
        if q.ncols() != k {
            return Err(KreinError::RankFailure(format!(
                "{} input vectors span only {} dimensions",
                k,
                q.ncols()
            )));
        }
        let action = outputs * linalg::pinv(inputs, linalg::RANK_RTOL) * &q;
        Ok(PartialOperator { domain: q, action })
    }

    pub fn dim(&self) -> usize {
        self.domain.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.domain.nrows()
    }

    /// Apply to a vector of the domain (the component orthogonal to the
    /// domain is discarded).
    pub fn apply(&self, v: &CVec) -> CVec {
        &self.action * (self.domain.adjoint() * v)
    }

    /// Apply column-wise to a matrix whose columns lie in the domain.
    pub fn apply_all(&self, m: &CMat) -> CMat {
        &self.action * (self.domain.adjoint() * m)
    }

    /// Distance of `m`'s columns from the domain.
    pub fn domain_residual(&self, m: &CMat) -> f64 {
        linalg::max_abs(&(m - &self.domain * (self.domain.adjoint() * m)))
    }

    /// Compression `(A d_j, d_i)` onto the domain.
    pub fn compression(&self) -> CMat {
        self.domain.adjoint() * &self.action
    }
}

/// The partial contraction `T₀` built from the angular operators.
#[derive(Debug, Clone)]
pub struct PartialContraction {
    space: SignatureSpace,
    op: PartialOperator,
    norm: f64,
    near_unit: bool,
}

impl PartialContraction {
    /// Validate and build. `domain` is a spanning set of `D(T₀)` (it is
    /// orthonormalized) and `action` holds `T₀` applied to its columns.
    pub fn new(space: SignatureSpace, domain: CMat, action: CMat) -> Result<Self> {
        Self::with_strictness(space, domain, action, 0.0)
    }

    /// As [`PartialContraction::new`], additionally requiring
    /// `‖T₀‖ < 1 − eps_strict` when `eps_strict > 0`.
    pub fn with_strictness(space: SignatureSpace, domain: CMat, action: CMat, eps_strict: f64) -> Result<Self> {
        let n = space.dim();
        if domain.nrows() != n {
            return Err(KreinError::DimensionMismatch {
                expected: n,
                got: domain.nrows(),
            });
        }
        if action.nrows() != n {
            return Err(KreinError::DimensionMismatch {
                expected: n,
                got: action.nrows(),
            });
        }
        if action.ncols() != domain.ncols() {
            return Err(KreinError::DimensionMismatch {
                expected: domain.ncols(),
                got: action.ncols(),
            });
        }
        let op = if domain.ncols() == 0 {
            PartialOperator {
                domain: CMat::zeros(n, 0),
                action: CMat::zeros(n, 0),
            }
        } else {
            PartialOperator::from_pairs(&domain, &action)?
        };

        let norm = linalg::op_norm(&op.action);
        if norm > 1.0 + UNIT_FLAG_TOL {
            return Err(KreinError::NotContraction(norm));
        }
        if eps_strict > 0.0 && norm >= 1.0 - eps_strict {
            return Err(KreinError::NotContraction(norm));
        }
        let near_unit = norm >= 1.0 - UNIT_FLAG_TOL;

        let jd = space.j() * &op.domain;
        let inv = op.domain_residual(&jd);
        if inv > OPERATOR_TOL {
            return Err(KreinError::DomainNotInvariant(inv));
        }
        // J T₀ x + T₀ J x on the domain basis
        let anti = linalg::max_abs(&(space.j() * &op.action + op.apply_all(&jd)));
        if anti > OPERATOR_TOL {
            return Err(KreinError::NotAnticommuting(anti));
        }
        Ok(PartialContraction {
            space,
            op,
            norm,
            near_unit,
        })
    }

    /// `T₀` defined on the whole space by the matrix `t`.
    pub fn full(space: SignatureSpace, t: CMat) -> Result<Self> {
        let n = space.dim();
        Self::new(space, linalg::identity(n), t)
    }

    pub fn space(&self) -> &SignatureSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Orthonormal basis of `D(T₀)`.
    pub fn domain(&self) -> &CMat {
        &self.op.domain
    }

    /// Images of the domain basis.
    pub fn action(&self) -> &CMat {
        &self.op.action
    }

    pub fn operator(&self) -> &PartialOperator {
        &self.op
    }

    pub fn domain_dim(&self) -> usize {
        self.op.dim()
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// `‖T₀‖` within [`UNIT_FLAG_TOL`] of 1.
    pub fn near_unit(&self) -> bool {
        self.near_unit
    }

    pub fn is_full_domain(&self) -> bool {
        self.domain_dim() == self.dim()
    }

    pub fn apply(&self, x: &CVec) -> CVec {
        self.op.apply(x)
    }

    /// `M₊ = P₊D(T₀)` and `M₋ = P₋D(T₀)`.
    pub fn m_parts(&self) -> (CMat, CMat) {
        let (pp, pm) = self.space.fundamental_projections();
        (
            linalg::orth(&(pp * self.domain()), linalg::RANK_RTOL),
            linalg::orth(&(pm * self.domain()), linalg::RANK_RTOL),
        )
    }

    /// `L± = (I + T₀)M±`.
    pub fn subspaces(&self) -> (Subspace, Subspace) {
        let (mp, mm) = self.m_parts();
        let lp = &mp + self.op.apply_all(&mp);
        let lm = &mm + self.op.apply_all(&mm);
        (Subspace::from_span(&lp), Subspace::from_span(&lm))
    }

    /// Full-space matrix of `T₀P_D` (zero on `D(T₀)^⊥`).
    pub fn padded(&self) -> CMat {
        &self.op.action * self.op.domain.adjoint()
    }

    pub fn to_json(&self) -> PartialContractionJson {
        PartialContractionJson {
            j: MatrixJson::from_matrix(self.space.j()),
            domain: MatrixJson::from_matrix(self.domain()),
            action: MatrixJson::from_matrix(self.action()),
        }
    }
}

/// `{"J": matrix, "domain": matrix, "action": matrix}`.
///
/// Problem files may spell the last two `T0_domain` / `T0_action`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartialContractionJson {
    #[serde(rename = "J")]
    pub j: MatrixJson,
    #[serde(alias = "T0_domain")]
    pub domain: MatrixJson,
    #[serde(alias = "T0_action")]
    pub action: MatrixJson,
}

impl PartialContractionJson {
    pub fn build(&self) -> Result<PartialContraction> {
        let space = SignatureSpace::new(self.j.to_matrix()?)?;
        let n = space.dim();
        let domain = self.domain.to_matrix()?;
        let action = self.action.to_matrix()?;
        // an empty domain may be written as a 0-column matrix with rows 0
        let (domain, action) = if domain.ncols() == 0 {
            (CMat::zeros(n, 0), CMat::zeros(n, 0))
        } else {
            (domain, action)
        };
        PartialContraction::new(space, domain, action)
    }
}

/// Angular representation of a positive `L₊` and a negative `L₋`.
///
/// Either subspace may be zero. `K₊⁻ = P₋(P₊|L₊)⁻¹` and
/// `K₋⁺ = P₊(P₋|L₋)⁻¹`.
pub fn extract_angular(space: &SignatureSpace, l_plus: &Subspace, l_minus: &Subspace) -> Result<PartialContraction> {
    let n = space.dim();
    let (pp, pm) = space.fundamental_projections();
    let mut domain_parts = Vec::new();
    let mut action_parts = Vec::new();
    for (l, expected, to_domain, to_image) in [
        (l_plus, DefiniteClass::Positive, &pp, &pm),
        (l_minus, DefiniteClass::Negative, &pm, &pp),
    ] {
        if l.dim() == 0 {
            continue;
        }
        let cls = classify_subspace(space, l)?;
        if cls.class != expected {
            return Err(KreinError::WrongDefiniteness {
                expected: if expected == DefiniteClass::Positive {
                    "positive"
                } else {
                    "negative"
                },
                min: cls.gram_min,
                max: cls.gram_max,
            });
        }
        let b = l.basis();
        let proj = to_domain * b;
        if linalg::rank(&proj, linalg::RANK_RTOL) != b.ncols() {
            return Err(KreinError::RankFailure(
                "projection of a definite subspace onto its half-space is singular".into(),
            ));
        }
        let m = linalg::orth(&proj, linalg::RANK_RTOL);
        let k = to_image * b * linalg::pinv(&proj, linalg::RANK_RTOL) * &m;
        domain_parts.push(m);
        action_parts.push(k);
    }
    let mut domain = CMat::zeros(n, 0);
    let mut action = CMat::zeros(n, 0);
    for (d, a) in domain_parts.iter().zip(&action_parts) {
        domain = linalg::hstack(&domain, d);
        action = linalg::hstack(&action, a);
    }
    PartialContraction::new(space.clone(), domain, action)
}

/// Residual of `(T₀x, y) = (x, T₀y)` on the domain.
pub fn symmetry_residual(t0: &PartialContraction) -> f64 {
    let s = t0.operator().compression();
    linalg::max_abs(&(&s - s.adjoint()))
}

/// `L₊` and `L₋` are dual, i.e. `T₀` is symmetric on its domain.
pub fn duality_test(t0: &PartialContraction) -> bool {
    symmetry_residual(t0) <= OPERATOR_TOL
}

/// `max |[f₊, f₋]|` over orthonormal bases of `L₊` and `L₋`.
pub fn cross_product_residual(t0: &PartialContraction) -> f64 {
    let (lp, lm) = t0.subspaces();
    if lp.dim() == 0 || lm.dim() == 0 {
        return 0.0;
    }
    linalg::max_abs(&(lm.basis().adjoint() * t0.space().j() * lp.basis()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    UniformlyDefinite,
    /// Uniformly definite, but `1 − ‖T₀‖ <` [`APPROACH_GAP`].
    ApproachingNonUniform,
    DefiniteNotUniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DefinitenessReport {
    pub norm: f64,
    pub class: Definiteness,
    pub maximal: bool,
}

/// Class of the pair `L±` whose angular operator has norm `norm`.
pub fn class_for_norm(norm: f64) -> Definiteness {
    if norm >= 1.0 - UNIT_FLAG_TOL {
        Definiteness::DefiniteNotUniform
    } else if 1.0 - norm < APPROACH_GAP {
        Definiteness::ApproachingNonUniform
    } else {
        Definiteness::UniformlyDefinite
    }
}

pub fn definiteness_class(t0: &PartialContraction) -> DefinitenessReport {
    let norm = t0.norm();
    let class = class_for_norm(norm);
    let maximal = t0.is_full_domain() && duality_test(t0);
    DefinitenessReport { norm, class, maximal }
}

/// `C₀(f₊ + f₋) = f₊ − f₋` on `L₊ ∔ L₋`, realized as
/// `C₀(I + T₀)x = (I + T₀)Jx`.
pub fn c0_operator(t0: &PartialContraction) -> Result<PartialOperator> {
    let r = symmetry_residual(t0);
    if r > OPERATOR_TOL {
        return Err(KreinError::NotSymmetric(r));
    }
    let d = t0.domain();
    let jd = t0.space().j() * d;
    let inputs = d + t0.action();
    let outputs = &jd + t0.operator().apply_all(&jd);
    PartialOperator::from_pairs(&inputs, &outputs)
}

/// Checks on `C₀`: `C₀² = I` and `G₀ = JC₀` symmetric positive on `D(C₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct C0Check {
    pub involution_residual: f64,
    pub symmetry_residual: f64,
    pub min_eigenvalue: f64,
}

impl C0Check {
    pub fn passes(&self, tol: f64) -> bool {
        self.involution_residual <= tol && self.symmetry_residual <= tol && self.min_eigenvalue > 0.0
    }
}

pub fn check_c0(space: &SignatureSpace, c0: &PartialOperator) -> C0Check {
    if c0.dim() == 0 {
        return C0Check {
            involution_residual: 0.0,
            symmetry_residual: 0.0,
            min_eigenvalue: f64::INFINITY,
        };
    }
    let w = &c0.domain;
    let cw = &c0.action;
    let ccw = c0.apply_all(cw);
    let involution = linalg::max_abs(&(&ccw - w)).max(c0.domain_residual(cw));
    let g = w.adjoint() * space.j() * cw;
    let sym = linalg::max_abs(&(&g - g.adjoint()));
    let (vals, _) = linalg::eigh(&g);
    C0Check {
        involution_residual: involution,
        symmetry_residual: sym,
        min_eigenvalue: vals[0],
    }
}

/// `G₀ = (I − T₀)(I + T₀)⁻¹` on `(I + T₀)D(T₀)`.
pub fn cayley_g0(t0: &PartialContraction) -> Result<PartialOperator> {
    let d = t0.domain();
    let inputs = d + t0.action();
    if linalg::rank(&inputs, linalg::RANK_RTOL) != d.ncols() {
        // (I + T₀)x = 0 for some nonzero domain vector
        let (_, s, _) = linalg::svd(&inputs);
        let smin = s.iter().fold(f64::INFINITY, |m, &x| m.min(x));
        return Err(KreinError::CayleyUndefined(smin));
    }
    let outputs = d - t0.action();
    PartialOperator::from_pairs(&inputs, &outputs)
}

/// `max ‖JG₀f − G₀⁻¹Jf‖` over the domain basis of `G₀`.
pub fn intertwining_residual(t0: &PartialContraction) -> Result<f64> {
    let g0 = cayley_g0(t0)?;
    let d = t0.domain();
    let g0_inv = PartialOperator::from_pairs(&(d - t0.action()), &(d + t0.action()))?;
    let j = t0.space().j();
    let lhs = j * &g0.action;
    let jf = j * &g0.domain;
    let rhs = g0_inv.apply_all(&jf);
    Ok(linalg::max_abs(&(lhs - rhs)).max(g0_inv.domain_residual(&jf)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_real_rows;

    fn std2() -> SignatureSpace {
        SignatureSpace::diagonal(1, 1).unwrap()
    }

    fn span(rows: usize, data: &[f64]) -> Subspace {
        Subspace::from_span(&from_real_rows(rows, data.len() / rows, data))
    }

    fn half_instance() -> PartialContraction {
        PartialContraction::new(
            std2(),
            from_real_rows(2, 1, &[1.0, 0.0]),
            from_real_rows(2, 1, &[0.0, 0.5]),
        )
        .unwrap()
    }

    #[test]
    fn fundamental_pair_gives_zero_operator() {
        let s = std2();
        let t0 = extract_angular(
            &s,
            &Subspace::from_span(&s.h_plus()),
            &Subspace::from_span(&s.h_minus()),
        )
        .unwrap();
        assert!(t0.is_full_domain());
        assert!(linalg::max_abs(&t0.padded()) < 1e-15);
    }

    #[test]
    fn graph_is_read_off() {
        let s = std2();
        let t0 = extract_angular(&s, &span(2, &[1.0, 0.5]), &Subspace::zero(2)).unwrap();
        assert_eq!(t0.domain_dim(), 1);
        let e1 = linalg::vec_real(&[1.0, 0.0]);
        let img = t0.apply(&e1);
        assert!((img - linalg::vec_real(&[0.0, 0.5])).norm() < 1e-14);
    }

    #[test]
    fn neutral_subspace_is_rejected() {
        let err = extract_angular(&std2(), &span(2, &[1.0, 1.0]), &Subspace::zero(2)).unwrap_err();
        assert!(matches!(
            err,
            KreinError::WrongDefiniteness {
                expected: "positive",
                ..
            }
        ));
    }

    #[test]
    fn reconstruction_reproduces_subspaces() {
        let s = SignatureSpace::diagonal(2, 2).unwrap();
        let lp = span(4, &[1.0, 0.0, 0.0, 1.0, 0.3, -0.2, 0.1, 0.2]);
        // graph of K over H₊ and of K* over H₋ gives a dual pair
        let lm = span(4, &[0.3, 0.1, -0.2, 0.2, 1.0, 0.0, 0.0, 1.0]);
        let t0 = extract_angular(&s, &lp, &lm).unwrap();
        let (rp, rm) = t0.subspaces();
        assert!(rp.angle_to(&lp) < 1e-10);
        assert!(rm.angle_to(&lm) < 1e-10);
        assert!(duality_test(&t0));
        assert!(cross_product_residual(&t0) < 1e-10);
    }

    #[test]
    fn duality_examples() {
        assert!(duality_test(&half_instance()));

        let s = SignatureSpace::diagonal(2, 2).unwrap();
        let dom = from_real_rows(4, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        // T₀e₁ = ½e₃, T₀e₃ = ¼e₁
        let act = from_real_rows(4, 2, &[0.0, 0.25, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0]);
        let t0 = PartialContraction::new(s.clone(), dom.clone(), act).unwrap();
        assert!(!duality_test(&t0));
        let act = from_real_rows(4, 2, &[0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0]);
        let t0 = PartialContraction::new(s, dom, act).unwrap();
        assert!(duality_test(&t0));
    }

    #[test]
    fn definiteness_examples() {
        let full = PartialContraction::full(std2(), CMat::zeros(2, 2)).unwrap();
        let r = definiteness_class(&full);
        assert_eq!(r.class, Definiteness::UniformlyDefinite);
        assert!(r.maximal);
        let r = definiteness_class(&half_instance());
        assert_eq!(r.class, Definiteness::UniformlyDefinite);
        assert!(!r.maximal);
        assert!((r.norm - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unit_norm_is_flagged_not_rejected() {
        let t = from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let t0 = PartialContraction::full(std2(), t).unwrap();
        assert!(t0.near_unit());
        assert_eq!(definiteness_class(&t0).class, Definiteness::DefiniteNotUniform);
        let t = from_real_rows(2, 2, &[0.0, 1.1, 1.1, 0.0]);
        assert!(matches!(
            PartialContraction::full(std2(), t),
            Err(KreinError::NotContraction(_))
        ));
    }

    #[test]
    fn strictness_margin_is_enforced() {
        let res = PartialContraction::with_strictness(
            std2(),
            from_real_rows(2, 1, &[1.0, 0.0]),
            from_real_rows(2, 1, &[0.0, 0.5]),
            0.6,
        );
        assert!(matches!(res, Err(KreinError::NotContraction(_))));
    }

    #[test]
    fn invalid_domains_are_rejected() {
        let s = std2();
        let r = 0.5_f64.sqrt();
        let res = PartialContraction::new(s.clone(), from_real_rows(2, 1, &[r, r]), CMat::zeros(2, 1));
        assert!(matches!(res, Err(KreinError::DomainNotInvariant(_))));
        let res = PartialContraction::new(s, from_real_rows(2, 1, &[1.0, 0.0]), from_real_rows(2, 1, &[0.5, 0.0]));
        assert!(matches!(res, Err(KreinError::NotAnticommuting(_))));
    }

    #[test]
    fn c0_examples() {
        let s = std2();
        let fund = PartialContraction::full(s.clone(), CMat::zeros(2, 2)).unwrap();
        let c0 = c0_operator(&fund).unwrap();
        let full = &c0.action * c0.domain.adjoint();
        assert!(linalg::max_abs(&(full - s.j())) < 1e-14);

        let c0 = c0_operator(&half_instance()).unwrap();
        let f = linalg::vec_real(&[1.0, 0.5]);
        assert!((c0.apply(&f) - &f).norm() < 1e-14);
        assert!(check_c0(&s, &c0).passes(1e-10));
    }

    #[test]
    fn c0_requires_duality() {
        let s = SignatureSpace::diagonal(2, 2).unwrap();
        let dom = from_real_rows(4, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let act = from_real_rows(4, 2, &[0.0, 0.25, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0]);
        let t0 = PartialContraction::new(s, dom, act).unwrap();
        assert!(matches!(c0_operator(&t0), Err(KreinError::NotSymmetric(_))));
    }

    #[test]
    fn cayley_g0_examples() {
        let zero = PartialContraction::full(std2(), CMat::zeros(2, 2)).unwrap();
        let g0 = cayley_g0(&zero).unwrap();
        assert!(linalg::max_abs(&(&g0.action * g0.domain.adjoint() - linalg::identity(2))) < 1e-14);

        let g0 = cayley_g0(&half_instance()).unwrap();
        let img = g0.apply(&linalg::vec_real(&[1.0, 0.5]));
        assert!((img - linalg::vec_real(&[1.0, -0.5])).norm() < 1e-14);
        assert!(intertwining_residual(&half_instance()).unwrap() < 1e-12);
    }

    #[test]
    fn cayley_g0_undefined_at_minus_one() {
        // T₀ = −antidiag(1,1) on the full space has eigenvalue −1
        let t = from_real_rows(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        let t0 = PartialContraction::full(std2(), t).unwrap();
        assert!(matches!(cayley_g0(&t0), Err(KreinError::CayleyUndefined(_))));
    }

    #[test]
    fn json_roundtrip_rebuilds_the_same_operator() {
        let t0 = half_instance();
        let text = serde_json::to_string(&t0.to_json()).unwrap();
        let back: PartialContractionJson = serde_json::from_str(&text).unwrap();
        let t1 = back.build().unwrap();
        assert!(linalg::max_abs(&(t0.padded() - t1.padded())) < 1e-15);
    }
}

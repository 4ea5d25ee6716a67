//! Sequence-space family of partial contractions.
//!
//! `H = ⊕_n span{γ_n⁺, γ_n⁻}` with `Jγ_n± = ±γ_n±` and
//! `Tγ_n⁺ = iα_nγ_n⁻`, `Tγ_n⁻ = −iα_nγ_n⁺`, `α_n = 1 − 1/n`. The domain of
//! `T₀` is `M₊ ⊕ M₋` with `M± = {χ±}^⊥ ∩ H±` and `χ± = Σ n^{−δ}γ_n±`.
//!
//! Truncations store the pair `(γ_n⁺, γ_n⁻)` at indices `2(n−1)` and
//! `2(n−1)+1`. No truncation decides the case by itself: the analytic
//! classifier is authoritative and the numerics are trend checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angular::{class_for_norm, Definiteness, PartialContraction};
use crate::error::{KreinError, Result};
use crate::extension::{classify_case, krein_interval, Case};
use crate::indefinite::SignatureSpace;
use crate::linalg::{self, c, CMat, CVec};

/// Largest truncation built as a dense matrix.
pub const MAX_DENSE_N: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Both `χ⁺` and `χ⁻` are removed from the domain.
    BothConstraints,
    /// `χ⁺ = 0`: `M₊ = H₊`.
    ChiPlusZero,
}

impl std::str::FromStr for Variant {
    type Err = KreinError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "both" | "both_constraints" | "both-constraints" => Ok(Variant::BothConstraints),
            "chi-plus-zero" | "chi_plus_zero" => Ok(Variant::ChiPlusZero),
            _ => Err(KreinError::Malformed(format!("unknown variant {s:?}"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::BothConstraints => "both_constraints",
            Variant::ChiPlusZero => "chi_plus_zero",
        })
    }
}

/// `α_n = 1 − n^{−exponent}`; the standard family has exponent 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[derive(Default)]
pub enum AlphaProfile {
    #[default]
    Standard,
    Power {
        exponent: f64,
    },
}

impl AlphaProfile {
    pub fn exponent(&self) -> f64 {
        match self {
            AlphaProfile::Standard => 1.0,
            AlphaProfile::Power { exponent } => *exponent,
        }
    }

    pub fn alpha(&self, n: usize) -> f64 {
        match self {
            AlphaProfile::Standard => 1.0 - 1.0 / n as f64,
            AlphaProfile::Power { exponent } => 1.0 - (n as f64).powf(-exponent),
        }
    }

    /// `1 − α_n²`, evaluated without cancellation.
    pub fn one_minus_alpha_sq(&self, n: usize) -> f64 {
        let u = match self {
            AlphaProfile::Standard => 1.0 / n as f64,
            AlphaProfile::Power { exponent } => (n as f64).powf(-exponent),
        };
        u * (2.0 - u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceModelSpec {
    pub delta: f64,
    pub variant: Variant,
    /// Truncation `N`: number of `(γ⁺, γ⁻)` pairs.
    pub n: usize,
    #[serde(default)]
    pub alpha: AlphaProfile,
}

impl SequenceModelSpec {
    pub fn new(delta: f64, variant: Variant, n: usize) -> Result<Self> {
        let s = SequenceModelSpec {
            delta,
            variant,
            n,
            alpha: AlphaProfile::Standard,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_alpha(mut self, alpha: AlphaProfile) -> Result<Self> {
        self.alpha = alpha;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.5 && self.delta <= 1.5) {
            return Err(KreinError::OutOfRange(format!(
                "delta = {} outside (1/2, 3/2]",
                self.delta
            )));
        }
        if self.n == 0 {
            return Err(KreinError::OutOfRange("truncation N must be positive".into()));
        }
        if let AlphaProfile::Power { exponent } = self.alpha {
            if !(exponent > 0.0 && exponent.is_finite()) {
                return Err(KreinError::OutOfRange(format!("alpha exponent {exponent}")));
            }
        }
        Ok(())
    }

    /// `δ` below or at this value makes `Σ n^{−2δ}/(1 − α_n²)` diverge.
    pub fn divergence_threshold(&self) -> f64 {
        (1.0 + self.alpha.exponent()) / 2.0
    }

    /// `‖T‖ = max α_n` on the truncation.
    pub fn t_norm(&self) -> f64 {
        (1..=self.n).map(|k| self.alpha.alpha(k)).fold(0.0, f64::max)
    }

    /// Definiteness class of `L±^max` read off `‖T‖`.
    pub fn definiteness(&self) -> Definiteness {
        class_for_norm(self.t_norm())
    }

    /// `cond(G)` for `G = (I − T)(I + T)⁻¹`: `((1 + α)/(1 − α))²` at the
    /// largest `α`.
    pub fn cond_g(&self) -> f64 {
        let a = self.t_norm();
        ((1.0 + a) / (1.0 - a)).powi(2)
    }
}

/// Index of `γ_n⁺` (`n ≥ 1`); `γ_n⁻` follows it.
pub fn plus_index(n: usize) -> usize {
    2 * (n - 1)
}

#[derive(Debug, Clone)]
pub struct ModelInstance {
    pub spec: SequenceModelSpec,
    pub space: SignatureSpace,
    pub t: CMat,
    /// Normalized truncated `χ⁺`; `None` for the `χ⁺ = 0` variant.
    pub chi_plus: Option<CVec>,
    pub chi_minus: CVec,
    pub t0: PartialContraction,
}

/// Truncated `Σ n^{−δ}γ_n^±` (unnormalized); `sign` picks the component.
pub fn chi(spec: &SequenceModelSpec, plus: bool) -> CVec {
    let mut v = CVec::zeros(2 * spec.n);
    for k in 1..=spec.n {
        let i = plus_index(k) + usize::from(!plus);
        v[i] = c((k as f64).powf(-spec.delta), 0.0);
    }
    v
}

pub fn build_model(spec: &SequenceModelSpec) -> Result<ModelInstance> {
    spec.validate()?;
    if spec.n > MAX_DENSE_N {
        return Err(KreinError::OutOfRange(format!(
            "dense truncation limited to N ≤ {MAX_DENSE_N}"
        )));
    }
    let n = spec.n;
    let dim = 2 * n;
    let signs: Vec<f64> = (0..dim).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let space = SignatureSpace::from_signs(&signs)?;
    let mut t = CMat::zeros(dim, dim);
    for k in 1..=n {
        let a = spec.alpha.alpha(k);
        let p = plus_index(k);
        t[(p + 1, p)] = c(0.0, a);
        t[(p, p + 1)] = c(0.0, -a);
    }

    let normalize = |v: CVec| {
        let nv = v.norm();
        v / c(nv, 0.0)
    };
    let chi_minus = normalize(chi(spec, false));
    let chi_plus = match spec.variant {
        Variant::BothConstraints => Some(normalize(chi(spec, true))),
        Variant::ChiPlusZero => None,
    };

    // M₊ ⊕ M₋: the coordinate vectors of H± with χ± projected out
    let mut cols = Vec::with_capacity(dim);
    for k in 1..=n {
        for (offset, constraint) in [(0, chi_plus.as_ref()), (1, Some(&chi_minus))] {
            let mut e = CVec::zeros(dim);
            e[plus_index(k) + offset] = c(1.0, 0.0);
            if let Some(x) = constraint {
                let coef = x[plus_index(k) + offset].conj();
                e -= x * coef;
            }
            cols.push(e);
        }
    }
    let spanning = CMat::from_columns(&cols);
    let domain = linalg::orth(&spanning, linalg::RANK_RTOL);
    let action = &t * &domain;
    let t0 = PartialContraction::new(space.clone(), domain, action)?;
    Ok(ModelInstance {
        spec: *spec,
        space,
        t,
        chi_plus,
        chi_minus,
        t0,
    })
}

pub fn classify_analytic(spec: &SequenceModelSpec) -> Result<Case> {
    spec.validate()?;
    if spec.delta <= spec.divergence_threshold() {
        return Ok(Case::A);
    }
    Ok(match spec.variant {
        Variant::BothConstraints => Case::B,
        Variant::ChiPlusZero => Case::C,
    })
}

/// Window and threshold of the growth-exponent fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticConfig {
    /// Partial sums are recorded at `N = 2^0, …, 2^max_log2`.
    pub max_log2: u32,
    /// The log-log fit uses `N ≥ 2^fit_from_log2`.
    pub fit_from_log2: u32,
    pub threshold: f64,
    /// Diverging sums whose last dyadic increment ratio is within this of 1
    /// are flagged marginal.
    pub marginal_band: f64,
}

impl Default for DiagnosticConfig {
    fn default() -> Self {
        DiagnosticConfig {
            max_log2: 16,
            fit_from_log2: 8,
            threshold: 0.05,
            marginal_band: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesVerdict {
    Diverges,
    Converges,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreimageDiagnostic {
    /// `(N, S_N)` at dyadic `N`.
    pub partial_sums: Vec<(usize, f64)>,
    pub exponent_estimate: f64,
    /// `(S_{2N} − S_N)/(S_N − S_{N/2})` at the largest `N`.
    pub increment_ratio: f64,
    pub verdict: SeriesVerdict,
    pub marginal: bool,
}

/// Term `n^{−2δ}/(1 − α_n²)` of `‖Ξ⁻¹χ‖²`.
pub fn preimage_term(spec: &SequenceModelSpec, n: usize) -> f64 {
    (n as f64).powf(-2.0 * spec.delta) / spec.alpha.one_minus_alpha_sq(n)
}

/// Growth of `S_N = Σ_{n ≤ N} n^{−2δ}/(1 − α_n²)`; `χ` lies in `R(Ξ)`
/// exactly when the series converges.
pub fn xi_preimage_diagnostic(spec: &SequenceModelSpec, cfg: &DiagnosticConfig) -> Result<PreimageDiagnostic> {
    spec.validate()?;
    if cfg.fit_from_log2 + 1 >= cfg.max_log2 {
        return Err(KreinError::OutOfRange("fit window needs at least three points".into()));
    }
    let top = 1usize << cfg.max_log2;
    let mut partial_sums = Vec::with_capacity(cfg.max_log2 as usize + 1);
    let mut s = 0.0;
    let mut next = 1;
    for k in 1..=top {
        s += preimage_term(spec, k);
        if k == next {
            partial_sums.push((k, s));
            next *= 2;
        }
    }
    let fit: Vec<(f64, f64)> = partial_sums
        .iter()
        .filter(|(n, _)| *n >= 1 << cfg.fit_from_log2)
        .map(|&(n, s)| ((n as f64).ln(), s.ln()))
        .collect();
    let exponent_estimate = slope(&fit);
    let m = partial_sums.len();
    let increment_ratio =
        (partial_sums[m - 1].1 - partial_sums[m - 2].1) / (partial_sums[m - 2].1 - partial_sums[m - 3].1);
    let verdict = if exponent_estimate > cfg.threshold {
        SeriesVerdict::Diverges
    } else {
        SeriesVerdict::Converges
    };
    let marginal = verdict == SeriesVerdict::Diverges && (increment_ratio - 1.0).abs() < cfg.marginal_band;
    Ok(PreimageDiagnostic {
        partial_sums,
        exponent_estimate,
        increment_ratio,
        verdict,
        marginal,
    })
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / k, b + y / k));
    let (num, den) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    num / den
}

/// `‖Ξ⁻¹χ_N‖²` computed from the dense truncation at each `N`, with the
/// unnormalized `χ⁻`; it must reproduce the partial sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixTrend {
    pub points: Vec<(usize, f64)>,
    /// Largest relative deviation from `S_N`.
    pub series_deviation: f64,
    pub monotone: bool,
}

pub fn matrix_preimage_trend(spec: &SequenceModelSpec, ns: &[usize]) -> Result<MatrixTrend> {
    let points: Vec<(usize, f64)> = ns
        .par_iter()
        .map(|&n| {
            let s = SequenceModelSpec { n, ..*spec };
            let inst = build_model(&s)?;
            let dim = 2 * n;
            let xi2 = linalg::identity(dim) - &inst.t * &inst.t;
            let xi = linalg::psd_sqrt(&xi2)?;
            let x = chi(&s, false);
            let y = xi
                .lu()
                .solve(&x)
                .ok_or_else(|| KreinError::RankFailure("Ξ singular on the truncation".into()))?;
            Ok((n, y.norm_squared()))
        })
        .collect::<Result<_>>()?;
    let mut dev = 0.0_f64;
    for &(n, v) in &points {
        let s: f64 = (1..=n).map(|k| preimage_term(spec, k)).sum();
        dev = dev.max((v - s).abs() / s);
    }
    let monotone = points.windows(2).all(|w| w[0].0 >= w[1].0 || w[1].1 >= w[0].1);
    Ok(MatrixTrend {
        points,
        series_deviation: dev,
        monotone,
    })
}

#[derive(Debug, Clone)]
pub struct DefectPrediction {
    /// `𝔐 = {0}` (case A).
    pub trivial: bool,
    /// Normalized truncated generators of `𝔐`.
    pub basis: CMat,
    pub signature: (usize, usize),
}

pub fn defect_prediction(spec: &SequenceModelSpec) -> Result<DefectPrediction> {
    spec.validate()?;
    let dim = 2 * spec.n;
    if classify_analytic(spec)? == Case::A {
        return Ok(DefectPrediction {
            trivial: true,
            basis: CMat::zeros(dim, 0),
            signature: (0, 0),
        });
    }
    let unit = |v: CVec| {
        let nv = v.norm();
        v / c(nv, 0.0)
    };
    let minus = unit(chi(spec, false));
    let (basis, signature) = match spec.variant {
        Variant::BothConstraints => (CMat::from_columns(&[unit(chi(spec, true)), minus]), (1, 1)),
        Variant::ChiPlusZero => (CMat::from_columns(&[minus]), (0, 1)),
    };
    Ok(DefectPrediction {
        trivial: false,
        basis,
        signature,
    })
}

/// The extension engine run on a truncation.
#[derive(Debug, Clone, Serialize)]
pub struct TruncationCheck {
    pub n: usize,
    pub case: Case,
    pub signature: (usize, usize),
    /// Largest principal angle between the computed `𝔐` and
    /// `span{χ⁺, χ⁻}` (or `span{χ⁻}`).
    pub defect_angle: f64,
    pub t_norm: f64,
}

pub fn truncation_check(spec: &SequenceModelSpec) -> Result<TruncationCheck> {
    let inst = build_model(spec)?;
    let iv = krein_interval(&inst.t0)?;
    let expected = match &inst.chi_plus {
        Some(p) => CMat::from_columns(&[p.clone(), inst.chi_minus.clone()]),
        None => CMat::from_columns(std::slice::from_ref(&inst.chi_minus)),
    };
    Ok(TruncationCheck {
        n: spec.n,
        case: classify_case(&iv),
        signature: iv.signature(),
        defect_angle: linalg::max_principal_angle(iv.defect_basis(), &expected),
        t_norm: linalg::op_norm(&inst.t),
    })
}

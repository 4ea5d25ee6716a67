//! The invariant suite behind `krein-lab verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::angular::{
    c0_operator, check_c0, cross_product_residual, duality_test, extract_angular, intertwining_residual,
    PartialContraction,
};
use crate::error::Result;
use crate::extension::{
    cayley, cayley_inv, classify_case, density_test, extension_from_x, extremality_test, krein_interval, max_subspaces,
    random_x, random_x_solution, solve_x_equation, x_equation_residual, Case, EXTENSION_TOL,
};
use crate::gspace::{domain_form_agreement, GMetric};
use crate::indefinite::{classify_subspace, DefiniteClass, Subspace};
use crate::linalg::{self, from_real_rows, CMat};
use crate::model::{
    classify_analytic, matrix_preimage_trend, truncation_check, xi_preimage_diagnostic, DiagnosticConfig,
    SequenceModelSpec, SeriesVerdict, Variant,
};
use crate::quasi_basis::anharmonic::PWeight;
use crate::quasi_basis::grid::Grid;
use crate::quasi_basis::{anharmonic_family, family_report, shifted_family, DEFAULT_L, DEFAULT_NODES};
use crate::sampling::{random_anticommuting, random_problem, random_space};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: String,
    pub passed: bool,
    /// Measured quantity (1/0 for yes/no checks).
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Default, Clone, Serialize)]
pub struct Suite {
    pub checks: Vec<Check>,
}

impl Suite {
    fn at_most(&mut self, module: &'static str, name: impl Into<String>, value: f64, bound: f64) {
        self.checks.push(Check {
            module,
            name: name.into(),
            passed: value <= bound,
            value,
            bound,
        });
    }

    fn holds(&mut self, module: &'static str, name: impl Into<String>, ok: bool) {
        let value = if ok { 1.0 } else { 0.0 };
        self.checks.push(Check {
            module,
            name: name.into(),
            passed: ok,
            value,
            bound: 1.0,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Number of random extension problems examined.
pub const RANDOM_INSTANCES: usize = 25;

pub fn run_suite(seed: u64) -> Result<Suite> {
    let mut s = Suite::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indefinite_checks(&mut s, &mut rng)?;
    extension_checks(&mut s, &mut rng)?;
    half_instance_checks(&mut s)?;
    gspace_checks(&mut s, &mut rng)?;
    model_checks(&mut s)?;
    quasi_basis_checks(&mut s)?;
    Ok(s)
}

fn indefinite_checks(s: &mut Suite, rng: &mut ChaCha8Rng) -> Result<()> {
    let mut worst_j = 0.0_f64;
    let mut worst_recon = 0.0_f64;
    let mut worst_cross = 0.0_f64;
    let mut worst_c0 = 0.0_f64;
    let mut worst_intertwining = 0.0_f64;
    let mut halves_definite = true;
    let mut dual = true;
    for _ in 0..10 {
        let p = rng.gen_range(1..4);
        let q = rng.gen_range(1..4);
        let space = random_space(p, q, rng)?;
        let j = space.j();
        worst_j = worst_j.max(linalg::max_abs(&(j * j - linalg::identity(p + q))));
        let hp = classify_subspace(&space, &Subspace::from_span(&space.h_plus()))?;
        let hm = classify_subspace(&space, &Subspace::from_span(&space.h_minus()))?;
        halves_definite &= hp.class == DefiniteClass::Positive && hm.class == DefiniteClass::Negative;

        let t = random_anticommuting(&space, rng.gen_range(0.1..0.9), rng);
        let t0 = PartialContraction::full(space.clone(), t)?;
        let (lp, lm) = t0.subspaces();
        let back = extract_angular(&space, &lp, &lm)?;
        worst_recon = worst_recon.max(linalg::max_abs(&(back.padded() - t0.padded())));
        dual &= duality_test(&back);
        worst_cross = worst_cross.max(cross_product_residual(&back));
        let c0 = c0_operator(&back)?;
        let chk = check_c0(&space, &c0);
        worst_c0 = worst_c0.max(chk.involution_residual.max(chk.symmetry_residual));
        if chk.min_eigenvalue <= 0.0 {
            worst_c0 = f64::INFINITY;
        }
        worst_intertwining = worst_intertwining.max(intertwining_residual(&back)?);
    }
    s.at_most("indefinite-core", "J is an involution", worst_j, 1e-12);
    s.holds(
        "indefinite-core",
        "H± uniformly definite of the right sign",
        halves_definite,
    );
    s.at_most("angular-rep", "angular operators reproduce T₀", worst_recon, 1e-10);
    s.holds("angular-rep", "maximal dual pairs pass the duality test", dual);
    s.at_most("angular-rep", "[L₊, L₋] = 0", worst_cross, 1e-10);
    s.at_most("angular-rep", "C₀ involution and JC₀ symmetric", worst_c0, 1e-10);
    s.at_most(
        "angular-rep",
        "JG₀ = G₀⁻¹J on the domain of G₀",
        worst_intertwining,
        1e-10,
    );
    Ok(())
}

fn extension_checks(s: &mut Suite, rng: &mut ChaCha8Rng) -> Result<()> {
    let mut interval = 0.0_f64;
    let mut order = 0.0_f64;
    let mut inconsistent = 0usize;
    let mut disagreements = 0usize;
    let mut rank_compared = 0usize;
    let mut solution_residual = 0.0_f64;
    let mut signature_ok = true;
    let mut form = 0.0_f64;
    let mut affine = 0.0_f64;
    let mut roundtrip = 0.0_f64;
    for _ in 0..RANDOM_INSTANCES {
        let (_, t0) = random_problem(2..=6, rng)?;
        let iv = krein_interval(&t0)?;
        let chk = iv.check();
        interval = interval
            .max(chk.hermitian_residual)
            .max(chk.extension_residual)
            .max(chk.endpoint_relation_residual)
            .max(chk.reduces_j_residual)
            .max(chk.norm_mu - 1.0)
            .max(chk.norm_m - 1.0)
            .max(-chk.order_min_eigenvalue);
        let (p, q) = iv.signature();
        signature_ok &= p + q == iv.defect_dim();
        let case = classify_case(&iv);
        signature_ok &= case == if p == q { Case::B } else { Case::C };
        if iv.defect_dim() == 0 {
            continue;
        }
        let sols = solve_x_equation(&iv)?;
        for k in 0..=4 {
            affine = affine.max(x_equation_residual(&iv, &sols.affine.at(k as f64 / 4.0)));
        }
        let flipped = linalg::identity(iv.defect_dim()) - &sols.affine.x0;
        affine = affine.max(x_equation_residual(&iv, &flipped));
        let mut extensions = vec![iv.t_mu().clone(), iv.t_m().clone()];
        for k in 0..12 {
            let x = if k % 2 == 0 {
                random_x_solution(&iv, rng)
            } else {
                random_x(iv.defect_dim(), rng)
            };
            let e = extension_from_x(&iv, &x)?;
            if !e.consistent() {
                inconsistent += 1;
            }
            if e.x_solves_equation {
                solution_residual = solution_residual.max(e.anticommutator_residual);
            }
            // T_μ ≤ T ≤ T_M
            let (lo, _) = linalg::eigh(&(&e.t - iv.t_mu()));
            let (hi, _) = linalg::eigh(&(iv.t_m() - &e.t));
            order = order.max(-lo[0]).max(-hi[0]);
            if linalg::op_norm(&e.t) < 0.999 {
                roundtrip = roundtrip.max(linalg::max_abs(&(cayley_inv(&cayley(&e.t)?)? - &e.t)));
            }
            extensions.push(e.t.clone());
        }
        let mut xs = vec![
            CMat::zeros(iv.defect_dim(), iv.defect_dim()),
            linalg::identity(iv.defect_dim()),
        ];
        xs.extend(sols.projection.clone());
        for x in xs {
            let e = extension_from_x(&iv, &x)?;
            let ex = extremality_test(&t0, &e);
            if ex.cayley_defined() {
                rank_compared += 1;
                if !ex.agree() {
                    disagreements += 1;
                }
            }
        }
        form = form.max(domain_form_agreement(&t0, &extensions)?.1);
    }
    s.at_most(
        "extension-engine",
        "interval endpoints are extensions with JT_μ + T_M J = 0",
        interval,
        1e-10,
    );
    s.at_most("extension-engine", "sampled extensions lie in [T_μ, T_M]", order, 1e-10);
    s.holds("extension-engine", "defect signature decides case B/C", signature_ok);
    s.at_most(
        "extension-engine",
        "JT = −TJ iff X = J(I − X)J (counterexamples)",
        inconsistent as f64,
        0.0,
    );
    s.at_most(
        "extension-engine",
        "X-equation solutions anticommute",
        solution_residual,
        EXTENSION_TOL,
    );
    s.at_most(
        "extension-engine",
        format!("projection and rank extremality criteria agree ({rank_compared} compared)"),
        disagreements as f64,
        0.0,
    );
    s.at_most(
        "extension-engine",
        "affine combinations of X₀ and I − X₀ solve the X-equation",
        affine,
        EXTENSION_TOL,
    );
    s.at_most("extension-engine", "Cayley roundtrip", roundtrip, 1e-10);
    s.at_most("gspace", "(G_T f, f) independent of T on D(G₀)", form, 1e-10);
    Ok(())
}

fn half_instance_checks(s: &mut Suite) -> Result<()> {
    let space = crate::indefinite::SignatureSpace::diagonal(1, 1)?;
    let t0 = PartialContraction::new(
        space.clone(),
        from_real_rows(2, 1, &[1.0, 0.0]),
        from_real_rows(2, 1, &[0.0, 0.5]),
    )?;
    let iv = krein_interval(&t0)?;
    let dev = linalg::max_abs(&(iv.t_mu() - from_real_rows(2, 2, &[0.0, 0.5, 0.5, -0.75]))).max(linalg::max_abs(
        &(iv.t_m() - from_real_rows(2, 2, &[0.0, 0.5, 0.5, 0.75])),
    ));
    s.at_most("extension-engine", "t=½ endpoints", dev, 1e-10);
    s.holds(
        "extension-engine",
        "t=½ defect signature (0,1) and case C",
        iv.signature() == (0, 1) && classify_case(&iv) == Case::C,
    );
    let sols = solve_x_equation(&iv)?;
    let e = extension_from_x(&iv, &sols.half)?;
    let expect = from_real_rows(2, 2, &[0.0, 0.5, 0.5, 0.0]);
    s.at_most(
        "extension-engine",
        "t=½ anticommuting extension at X = ½",
        linalg::max_abs(&(&e.t - expect)),
        1e-10,
    );
    s.holds(
        "extension-engine",
        "t=½ extension is not extremal",
        !extremality_test(&t0, &e).verdict(),
    );
    s.holds(
        "extension-engine",
        "t=½ density test false",
        !density_test(&t0, &e.t)?.dense,
    );
    let ms = max_subspaces(&space, &e.t)?;
    s.at_most(
        "extension-engine",
        "t=½ maximal subspaces are dual",
        ms.duality_residual,
        1e-12,
    );
    Ok(())
}

fn gspace_checks(s: &mut Suite, rng: &mut ChaCha8Rng) -> Result<()> {
    let mut worst = 0.0_f64;
    for _ in 0..8 {
        let p = rng.gen_range(1..4);
        let q = rng.gen_range(1..4);
        let space = random_space(p, q, rng)?;
        let t = random_anticommuting(&space, rng.gen_range(0.1..0.9), rng);
        let m = GMetric::new(&space, &t)?;
        worst = worst.max(m.agreement(10, rng)?.max());
    }
    s.at_most(
        "gspace",
        "(·,·)_G routes, ‖f‖_G = ‖Ξx‖ and [·,·]_G = [·,·]",
        worst,
        1e-10,
    );
    Ok(())
}

fn model_checks(s: &mut Suite) -> Result<()> {
    let deltas = [0.6, 0.8, 1.0, 1.1, 1.25, 1.5];
    let mut table = true;
    let mut diag = true;
    let cfg = DiagnosticConfig::default();
    for &d in &deltas {
        let both = SequenceModelSpec::new(d, Variant::BothConstraints, 8)?;
        let zero = SequenceModelSpec::new(d, Variant::ChiPlusZero, 8)?;
        let (eb, ez) = if d <= 1.0 {
            (Case::A, Case::A)
        } else {
            (Case::B, Case::C)
        };
        table &= classify_analytic(&both)? == eb && classify_analytic(&zero)? == ez;
        let dg = xi_preimage_diagnostic(&both, &cfg)?;
        diag &= (dg.verdict == SeriesVerdict::Diverges) == (d <= 1.0);
        diag &= dg.marginal == (d == 1.0);
    }
    s.holds("model-family", "analytic classification table", table);
    s.holds("model-family", "preimage series verdicts and marginal flag", diag);
    let spec = SequenceModelSpec::new(0.8, Variant::BothConstraints, 4)?;
    let tr = matrix_preimage_trend(&spec, &[4, 8, 16, 32, 64])?;
    s.at_most(
        "model-family",
        "matrix route reproduces the partial sums",
        tr.series_deviation,
        1e-8,
    );
    s.holds("model-family", "matrix-route preimage norms are monotone", tr.monotone);
    let mut trunc = true;
    let mut angle = 0.0_f64;
    for (variant, case, sig) in [
        (Variant::BothConstraints, Case::B, (1, 1)),
        (Variant::ChiPlusZero, Case::C, (0, 1)),
    ] {
        for d in [0.8, 1.25] {
            let tc = truncation_check(&SequenceModelSpec::new(d, variant, 16)?)?;
            trunc &= tc.case == case && tc.signature == sig;
            angle = angle.max(tc.defect_angle);
        }
    }
    s.holds("model-family", "truncations are case B/C-like for every δ", trunc);
    s.at_most("model-family", "truncated defect space is span{χ±}", angle, 1e-8);
    Ok(())
}

fn quasi_basis_checks(s: &mut Suite) -> Result<()> {
    let grid = Grid::uniform(DEFAULT_L, DEFAULT_NODES)?;
    let r = family_report(&shifted_family(0.5, 12, &grid)?)?;
    let alternating = r
        .signs
        .iter()
        .enumerate()
        .all(|(n, &x)| x == if n % 2 == 0 { 1 } else { -1 });
    s.holds("quasi-basis", "shifted Hermite signs σ_n = (−1)ⁿ", alternating);
    s.at_most(
        "quasi-basis",
        "shifted Hermite indefinite Gram",
        r.indefinite_gram_deviation,
        1e-8,
    );
    s.at_most("quasi-basis", "shifted Hermite G-Gram", r.g_gram_deviation, 1e-6);
    s.at_most(
        "quasi-basis",
        "shifted Hermite eigen-residuals",
        r.eigen_residuals.iter().fold(0.0, |a: f64, &b| a.max(b)),
        1e-8,
    );
    s.at_most(
        "quasi-basis",
        "shifted Hermite (Hf_n, f_m)_G diagonal",
        r.h_gram_deviation,
        1e-6,
    );
    s.at_most(
        "quasi-basis",
        "shifted Hermite biorthogonality",
        r.biorthogonality_residual,
        1e-8,
    );
    s.at_most(
        "quasi-basis",
        "C² = I and series/multiplier routes agree",
        r.c_involution_residual.max(r.c_route_agreement),
        1e-8,
    );
    s.holds(
        "quasi-basis",
        "JC positive on the span",
        r.jc_min_eigenvalue > 0.0 && r.jc_hermitian_residual < 1e-8,
    );
    let r = family_report(&anharmonic_family(4.0, PWeight::Rational, 8, &grid)?)?;
    s.at_most(
        "quasi-basis",
        "anharmonic indefinite Gram",
        r.indefinite_gram_deviation,
        1e-6,
    );
    s.at_most("quasi-basis", "anharmonic weighted Gram", r.g_gram_deviation, 1e-12);
    s.at_most(
        "quasi-basis",
        "anharmonic ground-state residual",
        r.eigen_residuals[0],
        1e-4,
    );
    Ok(())
}

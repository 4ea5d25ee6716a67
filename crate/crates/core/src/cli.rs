//! Command-line front end: JSON problem files in, JSON and CSV reports out.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::angular::{PartialContraction, PartialContractionJson};
use crate::error::KreinError;
use crate::extension::{
    classify_case, extension_from_x, extremality_test, krein_interval, random_projection_solution, random_x,
    random_x_solution, solve_x_equation, ExtensionChoice, ExtensionInterval, EXTENSION_TOL,
};
use crate::json::{fmt_f64, matrix_value, to_fixed_json};
use crate::linalg::{self, CMat};
use crate::model::{
    classify_analytic, matrix_preimage_trend, truncation_check, xi_preimage_diagnostic, AlphaProfile, DiagnosticConfig,
    SequenceModelSpec, Variant, MAX_DENSE_N,
};
use crate::quasi_basis::anharmonic::PWeight;
use crate::quasi_basis::grid::Grid;
use crate::quasi_basis::{anharmonic_family, family_report, shifted_family, FunctionFamily, DEFAULT_L, DEFAULT_NODES};
use crate::verify::run_suite;

const CSV_HELP: &str = "\
CSV files written to --output-dir:
  extend_samples.csv          index,kind,anticommuting,extremal,x_equation_residual,anticommutator_residual,t_norm
  solve_x_samples.csv         index,kind,x_equation_residual,anticommutator_residual
  model_partial_sums.csv      N,partial_sum
  model_matrix_trend.csv      N,preimage_norm_sq
  <family>_indefinite_gram.csv, <family>_g_gram.csv
                              m,n,re,im
  <family>_residuals.csv      n,eigenvalue,sign,eigen_residual
  verify.csv                  module,check,passed,value,bound
<family> is `hermite` or `anharmonic`.

Exit codes: 0 success, 2 malformed or invalid input, 3 invariant violation,
4 numerical-resolution refusal.

KREIN_LAB_THREADS caps the worker threads used for parallel sweeps.";

/// Run configuration; parsed from the command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "krein-lab", version, about = "Krein-space extension and quasi-basis diagnostics", after_help = CSV_HELP)]
pub struct RunConfig {
    /// Seed for every random choice; identical seeds give identical reports.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for report files (created if missing).
    #[arg(long, global = true, default_value = ".")]
    pub output_dir: PathBuf,
    /// Tolerance for invariant checks on computed extensions.
    #[arg(long, global = true, default_value_t = EXTENSION_TOL)]
    pub tolerance: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Extension interval [T_μ, T_M], case A/B/C and sampled extensions.
    Extend {
        /// Problem file {"J", "T0_domain", "T0_action"}.
        #[arg(long)]
        input: PathBuf,
        /// Number of random X to sample in addition to 0, I and ½I.
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Solutions of X = J(I − X)J on the defect space.
    SolveX {
        #[arg(long)]
        input: PathBuf,
        /// Number of seeded alternative solutions.
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
    /// Analytic case and numerical cross-checks for the sequence model.
    ClassifyModel {
        #[arg(long)]
        delta: f64,
        /// `both` or `chi-plus-zero`.
        #[arg(long)]
        variant: Variant,
        /// Truncation size for the matrix cross-checks.
        #[arg(long = "N", visible_alias = "n", default_value_t = 64)]
        n: usize,
        /// Use α_n = 1 − 1/(n+1)^e instead of the standard profile (e = 1).
        #[arg(long)]
        alpha_exponent: Option<f64>,
    },
    /// Gram, eigen and C-symmetry diagnostics for a function family.
    QuasiBasis {
        #[command(subcommand)]
        family: FamilyCommand,
    },
    /// Run the full invariant suite.
    Verify,
}

#[derive(Debug, Clone, Subcommand)]
pub enum FamilyCommand {
    /// Shifted Hermite functions h_n(x + ia).
    Hermite {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        nmax: usize,
        /// Half-length of the grid [−L, L).
        #[arg(long = "L", visible_alias = "l", default_value_t = DEFAULT_L)]
        l: f64,
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
    },
    /// Anharmonic oscillator |x|^β with weight p.
    Anharmonic {
        #[arg(long)]
        beta: f64,
        /// zero, rational, tanh, linear or linear:<slope>.
        #[arg(long)]
        p: PWeight,
        #[arg(long)]
        nmax: usize,
        #[arg(long = "L", visible_alias = "l", default_value_t = DEFAULT_L)]
        l: f64,
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
    },
}

#[derive(Debug)]
pub enum Failure {
    /// Unreadable or structurally invalid input.
    Input(String),
    /// A computed object failed one of its defining checks.
    Invariant(String),
    /// The request needs more resolution than the configuration allows.
    Refusal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Invariant(_) => 3,
            Failure::Refusal(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "invalid input: {m}"),
            Failure::Invariant(m) => write!(f, "invariant violated: {m}"),
            Failure::Refusal(m) => write!(f, "refused: {m}"),
        }
    }
}

impl From<KreinError> for Failure {
    fn from(e: KreinError) -> Self {
        use KreinError::*;
        if e.is_resolution_refusal() {
            return Failure::Refusal(e.to_string());
        }
        match e {
            Invariant(_)
            | RankFailure(_)
            | NotPositiveDefinite(_)
            | NotPositiveSemidefinite(_)
            | XOutOfInterval(_)
            | DegenerateDirection(_)
            | TrivialDefect => Failure::Invariant(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// What a successful run produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    /// Human-readable summary for stdout.
    pub summary: String,
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf, Failure> {
        let path = self.dir.join(name);
        fs::write(&path, contents)?;
        self.files.push(path.clone());
        Ok(path)
    }

    fn json(&mut self, name: &str, v: &Value) -> Result<PathBuf, Failure> {
        self.write(name, &to_fixed_json(v))
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome, Failure> {
    if !(config.tolerance > 0.0 && config.tolerance.is_finite()) {
        return Err(Failure::Input("tolerance must be positive".into()));
    }
    fs::create_dir_all(&config.output_dir)?;
    let mut w = Writer {
        dir: &config.output_dir,
        files: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let summary = match &config.command {
        Command::Extend { input, samples } => extend(&mut w, input, *samples, config.tolerance, &mut rng)?,
        Command::SolveX { input, samples } => solve_x(&mut w, input, *samples, config.tolerance, &mut rng)?,
        Command::ClassifyModel {
            delta,
            variant,
            n,
            alpha_exponent,
        } => classify_model(&mut w, *delta, *variant, *n, *alpha_exponent)?,
        Command::QuasiBasis { family } => quasi_basis(&mut w, family)?,
        Command::Verify => verify(&mut w, config.seed)?,
    };
    Ok(Outcome {
        files: w.files,
        summary,
    })
}

/// Parse arguments, run, print, and map the result onto an exit code.
pub fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = std::env::var("KREIN_LAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(&config) {
        Ok(out) => {
            print!("{}", out.summary);
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("krein-lab: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}

fn read_problem(path: &Path) -> Result<PartialContraction, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let parsed: PartialContractionJson =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(parsed.build()?)
}

fn interval_for(t0: &PartialContraction, tol: f64) -> Result<ExtensionInterval, Failure> {
    let iv = krein_interval(t0)?;
    let chk = iv.check();
    if !chk.passes(tol) {
        return Err(Failure::Invariant(format!(
            "extension interval fails its checks: {chk:?}"
        )));
    }
    Ok(iv)
}

fn choice_value(kind: &str, e: &ExtensionChoice, extremal: bool) -> Value {
    json!({
        "kind": kind,
        "X": matrix_value(&e.x),
        "T": matrix_value(&e.t),
        "anticommuting": e.anticommuting,
        "x_solves_equation": e.x_solves_equation,
        "extremal": extremal,
        "x_equation_residual": e.x_equation_residual,
        "anticommutator_residual": e.anticommutator_residual,
    })
}

fn extend(w: &mut Writer, input: &Path, samples: usize, tol: f64, rng: &mut ChaCha8Rng) -> Result<String, Failure> {
    let t0 = read_problem(input)?;
    let iv = interval_for(&t0, tol)?;
    let m = iv.defect_dim();
    let case = classify_case(&iv);
    let mut xs: Vec<(&str, CMat)> = vec![("zero", CMat::zeros(m, m)), ("identity", linalg::identity(m))];
    if m > 0 {
        xs.push(("half", linalg::identity(m) * linalg::real(0.5)));
        for k in 0..samples {
            if k % 2 == 0 {
                xs.push(("random_solution", random_x_solution(&iv, rng)));
            } else {
                xs.push(("random", random_x(m, rng)));
            }
        }
    }
    let mut values = Vec::new();
    let mut csv =
        String::from("index,kind,anticommuting,extremal,x_equation_residual,anticommutator_residual,t_norm\n");
    for (i, (kind, x)) in xs.iter().enumerate() {
        let e = extension_from_x(&iv, x)?;
        if !e.consistent() {
            return Err(Failure::Invariant(format!(
                "sample {i}: JT = −TJ disagrees with the X-equation"
            )));
        }
        let ex = extremality_test(&t0, &e);
        if !ex.agree() {
            return Err(Failure::Invariant(format!("sample {i}: extremality criteria disagree")));
        }
        let _ = writeln!(
            csv,
            "{i},{kind},{},{},{},{},{}",
            e.anticommuting,
            ex.verdict(),
            fmt_f64(e.x_equation_residual),
            fmt_f64(e.anticommutator_residual),
            fmt_f64(linalg::op_norm(&e.t)),
        );
        values.push(choice_value(kind, &e, ex.verdict()));
    }
    let (p, q) = iv.signature();
    let report = json!({
        "T_mu": matrix_value(iv.t_mu()),
        "T_M": matrix_value(iv.t_m()),
        "defect_dim": m,
        "signature": [p, q],
        "case": case.to_string(),
        "defect_basis": matrix_value(iv.defect_basis()),
        "checks": iv.check(),
        "X_samples": values,
    });
    w.json("extend_report.json", &report)?;
    w.write("extend_samples.csv", &csv)?;
    Ok(format!("case {case}, defect dimension {m}, signature ({p},{q})\n"))
}

fn solve_x(w: &mut Writer, input: &Path, samples: usize, tol: f64, rng: &mut ChaCha8Rng) -> Result<String, Failure> {
    let t0 = read_problem(input)?;
    let iv = interval_for(&t0, tol)?;
    let (p, q) = iv.signature();
    if iv.defect_dim() == 0 {
        let report = json!({
            "defect_dim": 0,
            "signature": [0, 0],
            "unique_extension": matrix_value(iv.t_mu()),
        });
        w.json("solve_x_report.json", &report)?;
        w.write(
            "solve_x_samples.csv",
            "index,kind,x_equation_residual,anticommutator_residual\n",
        )?;
        return Ok("defect space is trivial; the extension is unique\n".into());
    }
    let sols = solve_x_equation(&iv)?;
    let mut alternatives = Vec::new();
    let mut csv = String::from("index,kind,x_equation_residual,anticommutator_residual\n");
    let mut candidates: Vec<(&str, CMat)> = vec![("half", sols.half.clone())];
    if let Some(pr) = &sols.projection {
        candidates.push(("projection", pr.clone()));
    }
    for _ in 0..samples {
        candidates.push(("sampled", random_x_solution(&iv, rng)));
        if let Some(pr) = random_projection_solution(&iv, rng) {
            candidates.push(("sampled_projection", pr));
        }
    }
    for (i, (kind, x)) in candidates.iter().enumerate() {
        let e = extension_from_x(&iv, x)?;
        if !e.x_solves_equation || !e.anticommuting || e.anticommutator_residual > tol {
            return Err(Failure::Invariant(format!(
                "{kind} solution {i} does not give JT = −TJ"
            )));
        }
        let _ = writeln!(
            csv,
            "{i},{kind},{},{}",
            fmt_f64(e.x_equation_residual),
            fmt_f64(e.anticommutator_residual)
        );
        alternatives.push(json!({"kind": kind, "X": matrix_value(x), "T": matrix_value(&e.t)}));
    }
    let report = json!({
        "defect_dim": iv.defect_dim(),
        "signature": [p, q],
        "case": classify_case(&iv).to_string(),
        "half": matrix_value(&sols.half),
        "projection": sols.projection.as_ref().map(matrix_value),
        "affine_family": {
            "description": "X(α) = (1 − α) X0 + α X1, α ∈ [0, 1]",
            "X0": matrix_value(&sols.affine.x0),
            "X1": matrix_value(&sols.affine.x1),
        },
        "solutions": alternatives,
    });
    w.json("solve_x_report.json", &report)?;
    w.write("solve_x_samples.csv", &csv)?;
    let kind = if p == q {
        "hypermaximal projections exist"
    } else {
        "no projection solutions (p ≠ q)"
    };
    Ok(format!(
        "signature ({p},{q}); {kind}; {} solutions written\n",
        candidates.len()
    ))
}

fn classify_model(
    w: &mut Writer,
    delta: f64,
    variant: Variant,
    n: usize,
    alpha_exponent: Option<f64>,
) -> Result<String, Failure> {
    let mut spec = SequenceModelSpec::new(delta, variant, n)?;
    if let Some(e) = alpha_exponent {
        spec = spec.with_alpha(AlphaProfile::Power { exponent: e })?;
    }
    let case = classify_analytic(&spec)?;
    let diag = xi_preimage_diagnostic(&spec, &DiagnosticConfig::default())?;
    let mut sums = String::from("N,partial_sum\n");
    for (k, s) in &diag.partial_sums {
        let _ = writeln!(sums, "{k},{}", fmt_f64(*s));
    }
    let sums_path = w.write("model_partial_sums.csv", &sums)?;

    let top = n.min(MAX_DENSE_N);
    let ns: Vec<usize> = (2..=10).map(|k| 1usize << k).filter(|&k| k <= top).collect();
    let trend = if ns.is_empty() {
        None
    } else {
        Some(matrix_preimage_trend(&spec, &ns)?)
    };
    let mut tcsv = String::from("N,preimage_norm_sq\n");
    for (k, v) in trend.iter().flat_map(|t| &t.points) {
        let _ = writeln!(tcsv, "{k},{}", fmt_f64(*v));
    }
    w.write("model_matrix_trend.csv", &tcsv)?;
    let trunc = truncation_check(&spec)?;

    let report = json!({
        "spec": spec,
        "analytic_case": case.to_string(),
        "divergence_threshold": spec.divergence_threshold(),
        "t_norm": spec.t_norm(),
        "definiteness": format!("{:?}", spec.definiteness()),
        "partial_sums_csv": sums_path.display().to_string(),
        "trend_verdict": diag.verdict,
        "marginal": diag.marginal,
        "exponent_estimate": diag.exponent_estimate,
        "increment_ratio": diag.increment_ratio,
        "matrix_trend": trend,
        "truncation": trunc,
    });
    w.json("model_report.json", &report)?;
    let marginal = if diag.marginal { " (marginal)" } else { "" };
    Ok(format!("case {case}; preimage series {:?}{marginal}\n", diag.verdict))
}

fn gram_csv(g: &CMat) -> String {
    let mut s = String::from("m,n,re,im\n");
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let _ = writeln!(s, "{i},{j},{},{}", fmt_f64(g[(i, j)].re), fmt_f64(g[(i, j)].im));
        }
    }
    s
}

fn quasi_basis(w: &mut Writer, cmd: &FamilyCommand) -> Result<String, Failure> {
    let (name, fam): (&str, FunctionFamily) = match cmd {
        FamilyCommand::Hermite { a, nmax, l, nodes } => {
            ("hermite", shifted_family(*a, *nmax, &Grid::uniform(*l, *nodes)?)?)
        }
        FamilyCommand::Anharmonic {
            beta,
            p,
            nmax,
            l,
            nodes,
        } => (
            "anharmonic",
            anharmonic_family(*beta, *p, *nmax, &Grid::uniform(*l, *nodes)?)?,
        ),
    };
    let report = family_report(&fam)?;
    w.write(
        &format!("{name}_indefinite_gram.csv"),
        &gram_csv(&fam.indefinite_gram()),
    )?;
    w.write(&format!("{name}_g_gram.csv"), &gram_csv(&fam.g_gram()?))?;
    let mut res = String::from("n,eigenvalue,sign,eigen_residual\n");
    for (k, ((lam, sign), r)) in report
        .eigenvalues
        .iter()
        .zip(&report.signs)
        .zip(&report.eigen_residuals)
        .enumerate()
    {
        let _ = writeln!(res, "{k},{},{sign},{}", fmt_f64(*lam), fmt_f64(*r));
    }
    w.write(&format!("{name}_residuals.csv"), &res)?;
    w.json(
        &format!("{name}_report.json"),
        &serde_json::to_value(&report).expect("report serializes"),
    )?;
    let mut out = format!(
        "{name}: indefinite Gram deviation {:.3e}, G-Gram deviation {:.3e}\n",
        report.indefinite_gram_deviation, report.g_gram_deviation
    );
    for warning in &report.warnings {
        let _ = writeln!(out, "warning: {warning}");
    }
    Ok(out)
}

fn verify(w: &mut Writer, seed: u64) -> Result<String, Failure> {
    let suite = run_suite(seed)?;
    let mut out = String::new();
    let mut csv = String::from("module,check,passed,value,bound\n");
    for c in &suite.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{mark}  [{}] {}  ({:.3e} ≤ {:.1e})",
            c.module, c.name, c.value, c.bound
        );
        let _ = writeln!(
            csv,
            "{},\"{}\",{},{},{}",
            c.module,
            c.name,
            c.passed,
            fmt_f64(c.value),
            fmt_f64(c.bound)
        );
    }
    w.write("verify.csv", &csv)?;
    w.json(
        "verify_report.json",
        &serde_json::to_value(&suite).expect("suite serializes"),
    )?;
    if suite.passed() {
        Ok(out)
    } else {
        print!("{out}");
        let names: Vec<_> = suite.failures().map(|c| c.name.clone()).collect();
        Err(Failure::Invariant(format!(
            "{} check(s) failed: {}",
            names.len(),
            names.join("; ")
        )))
    }
}

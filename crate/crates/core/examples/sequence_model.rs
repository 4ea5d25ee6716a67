//! The sequence model: analytic case for each δ, the preimage series that
//! decides it, and finite truncations (which always look like case B or C).

use krein_lab::model::{
    classify_analytic, truncation_check, xi_preimage_diagnostic, DiagnosticConfig, SequenceModelSpec, Variant,
};

fn main() -> krein_lab::Result<()> {
    let cfg = DiagnosticConfig::default();
    println!(
        "{:<6} {:<16} {:<5} {:<10} {:<9} {}",
        "δ", "variant", "case", "series", "exponent", "N=32 truncation"
    );
    for variant in [Variant::BothConstraints, Variant::ChiPlusZero] {
        for delta in [0.6, 0.8, 1.0, 1.1, 1.25, 1.5] {
            let spec = SequenceModelSpec::new(delta, variant, 32)?;
            let case = classify_analytic(&spec)?;
            let d = xi_preimage_diagnostic(&spec, &cfg)?;
            let tr = truncation_check(&spec)?;
            let series = format!("{:?}{}", d.verdict, if d.marginal { "*" } else { "" });
            println!(
                "{delta:<6} {:<16} {case:<5} {series:<10} {:<9.3} case {} {:?}",
                format!("{variant:?}"),
                d.exponent_estimate,
                tr.case,
                tr.signature
            );
        }
    }
    println!("* marginal: the fitted growth is too slow to call with confidence");
    Ok(())
}

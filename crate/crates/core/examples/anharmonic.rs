//! Eigenfunctions of `-d²/dx² + |x|^β` dressed by a weight `p`, for each
//! built-in weight: eigenvalues, parity signs and Gram diagnostics.

use krein_lab::quasi_basis::anharmonic::PWeight;
use krein_lab::quasi_basis::grid::Grid;
use krein_lab::quasi_basis::{anharmonic_family, family_report, DEFAULT_L, DEFAULT_NODES};

fn main() -> krein_lab::Result<()> {
    let grid = Grid::uniform(DEFAULT_L, DEFAULT_NODES)?;
    for p in [PWeight::Zero, PWeight::Rational, PWeight::Tanh] {
        let fam = anharmonic_family(4.0, p, 6, &grid)?;
        let r = family_report(&fam)?;
        let eig: Vec<String> = r.eigenvalues.iter().take(4).map(|v| format!("{v:.5}")).collect();
        println!("p = {p:?}");
        println!("  eigenvalues {} ...", eig.join(", "));
        println!("  signs {:?}", r.signs);
        println!(
            "  indefinite Gram {:.1e}, weighted Gram {:.1e}, ground-state residual {:.1e}",
            r.indefinite_gram_deviation, r.g_gram_deviation, r.eigen_residuals[0]
        );
        for w in &r.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(())
}

//! Shifted Hermite functions `h_n(x + ia)`: Gram matrices, the Fourier
//! metric, the C-symmetry, and expansions of a few targets.

use krein_lab::linalg::real;
use krein_lab::quasi_basis::grid::Grid;
use krein_lab::quasi_basis::{family_report, shifted_family, DEFAULT_L, DEFAULT_NODES};

fn main() -> krein_lab::Result<()> {
    let grid = Grid::uniform(DEFAULT_L, DEFAULT_NODES)?;
    let fam = shifted_family(0.5, 16, &grid)?;
    let r = family_report(&fam)?;
    println!("signs σ_n: {:?}", r.signs);
    println!("indefinite Gram vs diag(σ): {:.2e}", r.indefinite_gram_deviation);
    println!("G-Gram vs identity:        {:.2e}", r.g_gram_deviation);
    println!(
        "largest eigen-residual:    {:.2e}",
        r.eigen_residuals.iter().cloned().fold(0.0, f64::max)
    );
    println!("C² = I:                    {:.2e}", r.c_involution_residual);
    println!("min eigenvalue of JC:      {:.4}", r.jc_min_eigenvalue);

    let targets: [(&str, fn(f64) -> f64); 3] = [
        ("exp(-x²)", |x| (-x * x).exp()),
        ("x exp(-x²)", |x| x * (-x * x).exp()),
        ("exp(-x²/4)", |x| (-x * x / 4.0).exp()),
    ];
    for (name, f) in targets {
        let samples = grid.sample(|x| real(f(x)));
        let errs: Vec<String> = [5, 9, 17]
            .iter()
            .map(|&n| fam.expansion(&samples, n).map(|e| format!("{:.2e}", e.g_error)))
            .collect::<krein_lab::Result<_>>()?;
        println!("{name:<12} G-error with 5/9/17 terms: {}", errs.join(" / "));
    }
    Ok(())
}

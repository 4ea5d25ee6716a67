//! Dual definite subspaces `L±` as graphs of an angular operator, the
//! operators `C₀` and `G₀ = JC₀` they induce.

use krein_lab::angular::{
    c0_operator, check_c0, cross_product_residual, definiteness_class, extract_angular, intertwining_residual,
    PartialContraction,
};
use krein_lab::indefinite::Subspace;
use krein_lab::linalg::{self, c, from_real_rows, CMat};
use krein_lab::sampling::random_space;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> krein_lab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let space = random_space(2, 2, &mut rng)?;
    let hp = space.h_plus();
    let hm = space.h_minus();

    // L₊ = {x + Kx : x ∈ H₊}; the dual L₋ uses K*.
    let k = CMat::from_fn(2, 2, |i, j| c(0.3 * (i as f64 - j as f64) + 0.1, 0.2 * (i + j) as f64)) * linalg::real(0.8);
    let lp = &hp + &hm * &k;
    let lm = &hm + &hp * k.adjoint();
    let t0 = extract_angular(&space, &Subspace::from_span(&lp), &Subspace::from_span(&lm))?;
    let report = definiteness_class(&t0);
    println!(
        "‖T₀‖ = {:.4}, class {:?}, maximal dual pair: {}",
        report.norm, report.class, report.maximal
    );
    println!("max |[f₊, f₋]| = {:.2e}", cross_product_residual(&t0));

    let c0 = c0_operator(&t0)?;
    let chk = check_c0(&space, &c0);
    println!(
        "C₀² − I: {:.2e}, JC₀ − (JC₀)*: {:.2e}, min eig JC₀ = {:.4}",
        chk.involution_residual, chk.symmetry_residual, chk.min_eigenvalue
    );
    println!("JG₀ − G₀⁻¹J on D(G₀): {:.2e}", intertwining_residual(&t0)?);

    // A partial contraction that is not symmetric has no dual pair behind it.
    let s = krein_lab::indefinite::SignatureSpace::diagonal(1, 1)?;
    let lopsided = PartialContraction::new(
        s,
        from_real_rows(2, 2, &[1.0, 0.0, 0.0, 1.0]),
        from_real_rows(2, 2, &[0.0, 0.2, 0.6, 0.0]),
    )?;
    println!("asymmetric T₀ gives C₀: {:?}", c0_operator(&lopsided).err());
    Ok(())
}

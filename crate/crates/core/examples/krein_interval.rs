//! The interval `[T_μ, T_M]` of self-adjoint contractive extensions for the
//! two-dimensional instance `T₀e₁ = ½e₂`, and what each choice of `X`
//! produces.

use krein_lab::angular::PartialContraction;
use krein_lab::extension::{
    classify_case, density_test, extension_from_x, extremality_test, krein_interval, max_subspaces,
};
use krein_lab::indefinite::SignatureSpace;
use krein_lab::linalg::{self, from_real_rows};

fn show(name: &str, m: &linalg::CMat) {
    println!(
        "{name} = [[{:+.4}, {:+.4}], [{:+.4}, {:+.4}]]",
        m[(0, 0)].re,
        m[(0, 1)].re,
        m[(1, 0)].re,
        m[(1, 1)].re
    );
}

fn main() -> krein_lab::Result<()> {
    let space = SignatureSpace::diagonal(1, 1)?;
    let t0 = PartialContraction::new(
        space.clone(),
        from_real_rows(2, 1, &[1.0, 0.0]),
        from_real_rows(2, 1, &[0.0, 0.5]),
    )?;
    let iv = krein_interval(&t0)?;
    show("T_μ", iv.t_mu());
    show("T_M", iv.t_m());
    println!("defect signature {:?}, case {}", iv.signature(), classify_case(&iv));
    let chk = iv.check();
    println!("JT_μ + T_M J residual {:.1e}", chk.endpoint_relation_residual);

    for x in [0.0, 0.25, 0.5, 1.0] {
        let e = extension_from_x(&iv, &from_real_rows(1, 1, &[x]))?;
        let ex = extremality_test(&t0, &e);
        println!(
            "X = {x:<4}  T₂₂ = {:+.4}  anticommuting {:<5}  extremal {}",
            e.t[(1, 1)].re,
            e.anticommuting,
            ex.verdict()
        );
    }

    let mid = extension_from_x(&iv, &from_real_rows(1, 1, &[0.5]))?;
    let ms = max_subspaces(&space, &mid.t)?;
    println!(
        "maximal subspaces of the anticommuting extension dual to {:.1e}",
        ms.duality_residual
    );
    println!("D(T₀) + Ξ-image dense: {}", density_test(&t0, &mid.t)?.dense);
    Ok(())
}

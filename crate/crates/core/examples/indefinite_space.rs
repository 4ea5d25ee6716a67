//! A fundamental symmetry, the indefinite product it induces, and how
//! subspaces are classified by the sign of `[f, f]`.

use krein_lab::indefinite::{classify_subspace, SignatureSpace, Subspace};
use krein_lab::linalg::{from_real_rows, vec_real};

fn main() -> krein_lab::Result<()> {
    let space = SignatureSpace::diagonal(2, 1)?;
    println!("signature {:?}", space.signature());

    let f = vec_real(&[1.0, 0.0, 1.0]);
    let g = vec_real(&[0.0, 1.0, 2.0]);
    println!("[f, f] = {:.3}  (neutral)", space.indefinite_product(&f, &f)?.re);
    println!("[f, g] = {:.3}", space.indefinite_product(&f, &g)?.re);

    let candidates = [
        (
            "span{e1, e2 + e3/2}",
            from_real_rows(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.5]),
        ),
        ("span{e3 + e1/3}", from_real_rows(3, 1, &[1.0 / 3.0, 0.0, 1.0])),
        ("span{e1 + e3}", from_real_rows(3, 1, &[1.0, 0.0, 1.0])),
        ("span{e1, e3}", from_real_rows(3, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0])),
    ];
    for (name, basis) in candidates {
        let c = classify_subspace(&space, &Subspace::from_span(&basis))?;
        println!(
            "{name:<22} {:?}, Gram spectrum [{:.3}, {:.3}], margin {:.3}",
            c.class, c.gram_min, c.gram_max, c.uniform_margin
        );
    }
    Ok(())
}

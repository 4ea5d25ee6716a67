//! Solutions of `X = J(I − X)J` on a defect space of signature (2, 2):
//! the elementary `½I`, hypermaximal projections, the affine line between a
//! solution and its reflection, and seeded samples of the rest.

use krein_lab::extension::{
    extension_from_x, krein_interval, random_projection_solution, random_x_solution, solve_x_equation,
    x_equation_residual,
};
use krein_lab::linalg;
use krein_lab::sampling::{random_instance, random_space};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> krein_lab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let space = random_space(3, 3, &mut rng)?;
    let (_, t0) = random_instance(&space, 1, 1, 0.7, &mut rng)?;
    let iv = krein_interval(&t0)?;
    println!("defect dimension {}, signature {:?}", iv.defect_dim(), iv.signature());

    let sols = solve_x_equation(&iv)?;
    let report = |name: &str, x: &linalg::CMat| -> krein_lab::Result<()> {
        let e = extension_from_x(&iv, x)?;
        println!(
            "{name:<18} X-residual {:.1e}  ‖JT + TJ‖ {:.1e}  ‖T‖ {:.4}",
            x_equation_residual(&iv, x),
            e.anticommutator_residual,
            linalg::op_norm(&e.t)
        );
        Ok(())
    };
    report("½I", &sols.half)?;
    if let Some(p) = &sols.projection {
        report("projection", p)?;
    }
    for alpha in [0.25, 0.5, 0.75] {
        report(&format!("affine α = {alpha}"), &sols.affine.at(alpha))?;
    }
    for k in 0..3 {
        report(&format!("sample {k}"), &random_x_solution(&iv, &mut rng))?;
    }
    if let Some(p) = random_projection_solution(&iv, &mut rng) {
        report("other projection", &p)?;
    }
    Ok(())
}

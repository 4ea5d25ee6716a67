//! The positive metric `G = (I − T)(I + T)⁻¹` of an anticommuting extension,
//! the involution `J_G` it induces, and the G-orthogonal decomposition.

use krein_lab::gspace::GMetric;
use krein_lab::linalg;
use krein_lab::sampling::{random_anticommuting, random_space};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> krein_lab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let space = random_space(2, 3, &mut rng)?;
    for norm in [0.3, 0.9, 0.999] {
        let t = random_anticommuting(&space, norm, &mut rng);
        let m = GMetric::new(&space, &t)?;
        let rep = m.report(20, &mut rng)?;
        let jg = m.j_g()?;
        let (pp, pm) = m.projections()?;
        println!(
            "‖T‖ = {norm:<6} cond(G) = {:>10.3e}  J_G² − I {:.1e}  P₊ + P₋ − I {:.1e}  worst agreement {:.1e}",
            rep.cond_g,
            linalg::max_abs(&(&jg * &jg - linalg::identity(space.dim()))),
            linalg::max_abs(&(&pp + &pm - linalg::identity(space.dim()))),
            rep.agreement_residuals.max()
        );
    }
    Ok(())
}

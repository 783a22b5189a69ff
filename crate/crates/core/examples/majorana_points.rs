//! Majorana points of a few states, and the round trip back to the state.

use majorana_lu::majorana::{majorana_points, points_to_state};
use majorana_lu::states::SymmetricPureState;
use majorana_lu::Tolerances;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> majorana_lu::Result<()> {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let states = [
        ("GHZ_3", SymmetricPureState::ghz_balanced(3)?),
        ("|D_5^(2)>", SymmetricPureState::dicke(5, 2)?),
        ("random n=6", SymmetricPureState::random(6, &mut rng)?),
    ];
    for (name, psi) in &states {
        let config = majorana_points(psi, &tol)?;
        println!("{name}: {} clusters", config.clusters().len());
        for c in config.clusters() {
            let v = c.point.vector();
            println!(
                "  theta={:.6} phi={:.6} m={}  ({:+.4}, {:+.4}, {:+.4})",
                c.point.theta(),
                c.point.phi(),
                c.multiplicity,
                v.x,
                v.y,
                v.z
            );
        }
        let back = points_to_state(&config)?;
        println!(
            "  round-trip error up to phase: {:.2e}",
            back.distance_up_to_phase(psi)
        );
    }
    Ok(())
}

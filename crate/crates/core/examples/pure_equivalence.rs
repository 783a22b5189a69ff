//! Decide whether two symmetric pure states are related by some g^{⊗n}.

use majorana_lu::classify::lu_equivalent_pure;
use majorana_lu::states::{SingleQubitUnitary, SymmetricPureState};
use majorana_lu::Tolerances;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> majorana_lu::Result<()> {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let psi = SymmetricPureState::random(5, &mut rng)?;
    let g = SingleQubitUnitary::random(&mut rng);
    let pairs = [
        ("psi vs g psi", psi.clone(), psi.apply_uniform(&g)),
        (
            "psi vs fresh random",
            psi.clone(),
            SymmetricPureState::random(5, &mut rng)?,
        ),
        (
            "D_3^(1) vs D_3^(2)",
            SymmetricPureState::dicke(3, 1)?,
            SymmetricPureState::dicke(3, 2)?,
        ),
        (
            "GHZ_3 vs D_3^(1)",
            SymmetricPureState::ghz_balanced(3)?,
            SymmetricPureState::dicke(3, 1)?,
        ),
    ];
    for (name, a, b) in pairs {
        match lu_equivalent_pure(&a, &b, &tol)? {
            Some(h) => println!(
                "{name}: equivalent, |g psi - psi'| = {:.1e}",
                a.apply_uniform(&h).distance_up_to_phase(&b)
            ),
            None => println!("{name}: not equivalent"),
        }
    }
    Ok(())
}

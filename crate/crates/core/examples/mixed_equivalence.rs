//! Search for g with g^{⊗n} rho g^{⊗n}† = rho' between permutation-invariant
//! mixed states, and the two-qubit search over independent factors.

use majorana_lu::mixed::{
    lu_equivalent_mixed, random_symmetric_mixture, two_factor_search, EquivalenceSearchConfig,
    MixedEquivalence,
};
use majorana_lu::states::{LocalUnitary, SingleQubitUnitary};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> majorana_lu::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = EquivalenceSearchConfig::default();
    let rho = random_symmetric_mixture(4, 3, &mut rng)?;
    let g = SingleQubitUnitary::random(&mut rng);
    let target = rho.apply_lu(&LocalUnitary::uniform(g, 4))?;
    let other = random_symmetric_mixture(4, 3, &mut rng)?;

    for (name, b) in [("rho vs g rho g^+", &target), ("rho vs unrelated", &other)] {
        match lu_equivalent_mixed(&rho, b, &cfg)? {
            MixedEquivalence::Equivalent { g: found, distance } => {
                println!(
                    "{name}: equivalent at distance {distance:.1e}, g matches up to phase: {}",
                    found.projectively_equal(&g, 1e-6)
                )
            }
            MixedEquivalence::NotEquivalent { reason } => {
                println!("{name}: not equivalent ({reason})")
            }
            MixedEquivalence::Undecided { distance, .. } => {
                println!("{name}: undecided, best distance {distance:.1e}")
            }
        }
    }

    let pair = random_symmetric_mixture(2, 2, &mut rng)?;
    let moved = pair.apply_lu(&LocalUnitary::new(vec![
        SingleQubitUnitary::random(&mut rng),
        SingleQubitUnitary::random(&mut rng),
    ])?)?;
    let found = two_factor_search(&pair, &moved, &cfg)?;
    println!(
        "two qubits, independent factors: equivalent={} distance={:.1e}",
        found.equivalent, found.distance
    );
    Ok(())
}

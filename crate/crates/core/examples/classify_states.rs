//! Stabilizer classes of rotated symmetric states, with the unitary that
//! brings each one to its class representative.

use majorana_lu::classify::{class_census, classify_state};
use majorana_lu::states::{SingleQubitUnitary, SymmetricPureState, C64};
use majorana_lu::Tolerances;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> majorana_lu::Result<()> {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t: f64 = 0.4;
    let states = [
        SymmetricPureState::dicke(4, 0)?,
        SymmetricPureState::ghz_balanced(4)?,
        SymmetricPureState::ghz(
            4,
            C64::new((t * std::f64::consts::FRAC_PI_4).cos(), 0.0),
            C64::new((t * std::f64::consts::FRAC_PI_4).sin(), 0.0),
        )?,
        SymmetricPureState::dicke(4, 2)?,
        SymmetricPureState::dicke(5, 1)?,
        SymmetricPureState::random(4, &mut rng)?,
    ];
    for psi in states {
        // hide the representative behind a random g^{⊗n}
        let hidden = psi.apply_uniform(&SingleQubitUnitary::random(&mut rng));
        let r = classify_state(&hidden, &tol)?;
        println!(
            "n={} class {:<16} residual {:.1e}  generators {}",
            psi.n(),
            format!("{:?}", r.class),
            r.residual,
            r.generators.len()
        );
    }
    for n in 3..=6 {
        let c = class_census(n)?;
        println!(
            "n={n}: classes {:?}, ivb for k in {:?}",
            c.labels, c.dicke_general
        );
    }
    Ok(())
}

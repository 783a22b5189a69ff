//! Reduce a GHZ-support state to its canonical form with bit flips and a
//! phase layer, and check the two-qubit support condition.

use majorana_lu::mixed::{canonical_ghz_form, two_qubit_support_check, GhzForm};
use majorana_lu::states::BitString;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> majorana_lu::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let support = BitString::new(5, 0b01101)?;
    let form = GhzForm::random(support, &mut rng);
    println!(
        "support {support}: a = {:.6}, b = {:.6}",
        form.a(),
        form.b()
    );

    let tau = form.to_density()?;
    let c = canonical_ghz_form(&tau, 1e-10)?;
    println!(
        "canonical: a = {:.6}, b = {:.6}, residual {:.1e}",
        c.form.a(),
        c.form.b(),
        c.residual
    );
    for step in &c.steps {
        println!("  {step:?}");
    }

    let zeros = GhzForm::random(BitString::zeros(4), &mut rng).to_density()?;
    let check = two_qubit_support_check(&zeros, 0, 2, 0.7, 1e-10)?;
    println!(
        "support check on 0..0 form: holds={} residual={:.1e}",
        check.holds(),
        check.residual
    );
    Ok(())
}

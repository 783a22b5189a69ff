//! Dicke and GHZ states, their densities and reduced spectra.

use majorana_lu::states::{SymmetricPureState, C64};
use majorana_lu::verify::spectra_report;

fn main() -> majorana_lu::Result<()> {
    let n = 4;
    let states = [
        ("|D_4^(1)>", SymmetricPureState::dicke(n, 1)?),
        ("|D_4^(2)>", SymmetricPureState::dicke(n, 2)?),
        ("GHZ", SymmetricPureState::ghz_balanced(n)?),
        (
            "GHZ t=0.3",
            SymmetricPureState::ghz(
                n,
                C64::new((0.3f64 * std::f64::consts::FRAC_PI_4).cos(), 0.0),
                C64::new((0.3f64 * std::f64::consts::FRAC_PI_4).sin(), 0.0),
            )?,
        ),
    ];
    for (name, psi) in &states {
        let rho = psi.to_density()?;
        let spectra = spectra_report(&rho)?;
        println!("{name}");
        println!(
            "  dicke coefficients: {:?}",
            psi.coeffs().iter().map(|c| c.re).collect::<Vec<_>>()
        );
        println!(
            "  purity tr(rho^2) = {:.6}",
            spectra.eigenvalues.iter().map(|l| l * l).sum::<f64>()
        );
        println!("  one-qubit reduced spectrum: {:?}", spectra.reduced[0]);
        println!(
            "  permutation invariant: {}",
            rho.is_permutation_invariant(1e-12)
        );
    }
    Ok(())
}

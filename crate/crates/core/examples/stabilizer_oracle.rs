//! Compare classified stabilizer generators with a brute-force search.

use majorana_lu::classify::classify_state;
use majorana_lu::states::SymmetricPureState;
use majorana_lu::verify::{check_stabilizes, stabilizer_anomalies, StabilizerSearchConfig};
use majorana_lu::Tolerances;

fn main() -> majorana_lu::Result<()> {
    let tol = Tolerances::default();
    let cfg = StabilizerSearchConfig::default();
    for (name, psi) in [
        ("GHZ_3", SymmetricPureState::ghz_balanced(3)?),
        ("|D_4^(2)>", SymmetricPureState::dicke(4, 2)?),
        ("|D_3^(1)>", SymmetricPureState::dicke(3, 1)?),
    ] {
        let r = classify_state(&psi, &tol)?;
        let rho = r.canonical.to_density()?;
        let worst = r
            .generators
            .iter()
            .map(|u| check_stabilizes(u, &rho, cfg.tol).map(|w| w.residual))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let report = stabilizer_anomalies(&r, &cfg)?;
        println!(
            "{name}: class {}, worst generator residual {worst:.1e}, {} witnesses, {} outside the class",
            r.class.label(),
            report.witnesses.len(),
            report.anomalies.len()
        );
    }
    Ok(())
}

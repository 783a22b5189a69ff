//! Recover the rotation between two point configurations and lift it to SU(2).

use majorana_lu::majorana::{mobius_apply, BlochPoint, MajoranaConfiguration};
use majorana_lu::rotmatch::{match_rotation, matching_distance, so3_to_su2, su2_to_so3};
use majorana_lu::states::SingleQubitUnitary;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> majorana_lu::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let points: Vec<BlochPoint> = [(0.3, 0.1), (1.2, 2.0), (2.0, 4.1), (2.7, 5.5), (1.6, 0.9)]
        .iter()
        .map(|&(t, p)| BlochPoint::from_angles(t, p))
        .collect();
    let a = MajoranaConfiguration::from_points(&points, 1e-6)?;
    let g = SingleQubitUnitary::random(&mut rng);
    let b = mobius_apply(&g, &a);

    let r = match_rotation(&a, &b, 1e-6)?.expect("a rotated copy always matches");
    println!(
        "recovered rotation angle {:.6} about {:?}",
        r.angle(),
        r.axis().as_slice()
    );
    println!("true rotation angle      {:.6}", su2_to_so3(&g).angle());
    println!(
        "residual after matching  {:.2e}",
        matching_distance(&r.apply_config(&a), &b)?
    );
    println!(
        "lift agrees with g up to phase: {}",
        so3_to_su2(&r).projectively_equal(&g, 1e-8)
    );
    Ok(())
}

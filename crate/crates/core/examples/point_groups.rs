//! Rotation symmetry groups of polygon and polyhedron configurations.

use std::f64::consts::{PI, TAU};

use majorana_lu::majorana::{BlochPoint, MajoranaConfiguration};
use majorana_lu::rotmatch::symmetry_group;

fn report(name: &str, points: Vec<BlochPoint>) -> majorana_lu::Result<()> {
    let config = MajoranaConfiguration::from_points(&points, 1e-6)?;
    let g = symmetry_group(&config, 1e-6)?;
    let order = g.order().map_or("infinite".to_string(), |o| o.to_string());
    println!("{name:>14}: {:<11} order {order}", g.kind().name());
    Ok(())
}

fn main() -> majorana_lu::Result<()> {
    for m in 3..=6 {
        let polygon = (0..m)
            .map(|j| BlochPoint::from_angles(PI / 2.0, TAU * j as f64 / m as f64))
            .collect();
        report(&format!("{m}-gon"), polygon)?;
    }
    let s = 1.0 / 3f64.sqrt();
    let tetra = [
        (1.0, 1.0, 1.0),
        (1.0, -1.0, -1.0),
        (-1.0, 1.0, -1.0),
        (-1.0, -1.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| BlochPoint::new(s * x, s * y, s * z))
    .collect::<Result<_, _>>()?;
    report("tetrahedron", tetra)?;
    let octa = [
        (1.0, 0.0, 0.0),
        (-1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (0.0, -1.0, 0.0),
        (0.0, 0.0, 1.0),
        (0.0, 0.0, -1.0),
    ]
    .iter()
    .map(|&(x, y, z)| BlochPoint::new(x, y, z))
    .collect::<Result<_, _>>()?;
    report("octahedron", octa)?;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut ico = Vec::new();
    for (a, b) in [(1.0, phi), (1.0, -phi), (-1.0, phi), (-1.0, -phi)] {
        for v in [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)] {
            ico.push(BlochPoint::new(v.0, v.1, v.2)?);
        }
    }
    report("icosahedron", ico)?;
    report("two poles", vec![BlochPoint::north(), BlochPoint::south()])?;
    Ok(())
}

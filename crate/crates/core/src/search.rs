//! Derivative-free minimization over SU(2).

use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;

use crate::states::SingleQubitUnitary;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// ZYZ Euler lattice with `m` values per angle; `β` sits at cell midpoints so
/// no two lattice points coincide at the poles.
pub(crate) fn euler_lattice(m: usize) -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(m * m * m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                out.push([
                    TAU * i as f64 / m as f64,
                    PI * (j as f64 + 0.5) / m as f64,
                    TAU * k as f64 / m as f64,
                ]);
            }
        }
    }
    out
}

pub(crate) fn euler_unitary(a: &[f64; 3]) -> SingleQubitUnitary {
    SingleQubitUnitary::from_euler_zyz(a[0], a[1], a[2])
}

/// `exp(-i δ·σ/2)`.
fn local(delta: [f64; 3]) -> SingleQubitUnitary {
    let v = Vector3::from(delta);
    let angle = v.norm();
    if angle == 0.0 {
        SingleQubitUnitary::identity()
    } else {
        SingleQubitUnitary::from_axis_angle(v, angle)
    }
}

/// Minimum of `f` on `[a, b]` by golden-section search down to width `tol`.
fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Coordinate-wise golden-section descent in the exponential chart
/// `exp(-i δ·σ/2)·g` around the current point, followed by a pattern move
/// along each sweep's net displacement. The search radius follows the step
/// length.
pub(crate) fn refine_su2(
    f: &impl Fn(&SingleQubitUnitary) -> f64,
    start: SingleQubitUnitary,
    mut radius: f64,
    stop_below: f64,
    max_sweeps: usize,
) -> (SingleQubitUnitary, f64) {
    let mut g = start;
    let mut fg = f(&g);
    for _ in 0..max_sweeps {
        if fg <= stop_below || radius < 1e-14 {
            break;
        }
        let mut moved = [0.0; 3];
        for i in 0..3 {
            let base = g;
            let along = |t: f64| {
                let mut d = [0.0; 3];
                d[i] = t;
                f(&(local(d) * base))
            };
            let (t, ft) = golden_section(along, -radius, radius, radius * 1e-3);
            if ft < fg {
                let mut d = [0.0; 3];
                d[i] = t;
                g = local(d) * base;
                fg = ft;
                moved[i] = t;
            }
        }
        let step = Vector3::from(moved).norm();
        if step > 0.0 {
            let cand = local(moved) * g;
            let fc = f(&cand);
            if fc < fg {
                g = cand;
                fg = fc;
            }
            radius = (2.0 * step).clamp(radius * 1e-3, (2.0 * radius).min(PI));
        } else {
            radius *= 0.1;
        }
    }
    (g, fg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn golden_section_finds_parabola_minimum() {
        // a parabola only resolves its minimum to about sqrt(eps)
        let (x, _) = golden_section(|t| (t - 0.3).powi(2) + 1.0, -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-7);
        let (x, fx) = golden_section(|t| (t - 0.3).abs(), -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-11 && fx < 1e-11);
    }

    #[test]
    fn refinement_recovers_target_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for _ in 0..10 {
            let target = SingleQubitUnitary::random(&mut rng);
            let f = |g: &SingleQubitUnitary| g.projective_distance(&target);
            let lattice = euler_lattice(8);
            let best = lattice
                .iter()
                .map(euler_unitary)
                .min_by(|x, y| f(x).total_cmp(&f(y)))
                .unwrap();
            let (g, fg) = refine_su2(&f, best, 0.5, 1e-12, 200);
            assert!(fg < 1e-9, "{fg}");
            assert!(g.projectively_equal(&target, 1e-9));
        }
    }
}

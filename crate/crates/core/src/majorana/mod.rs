//! Majorana point configurations of symmetric pure states.
//!
//! A symmetric state `Σ_k c_k |D_n^(k)⟩` is the symmetrization of `n`
//! single-qubit states `|0⟩ + z_j|1⟩`, where the `z_j` are the roots of
//!
//! ```text
//! P(z) = Σ_k (-1)^k √C(n,k) c_k z^{n-k}
//! ```
//!
//! A drop in the degree of `P` by `m` stands for `m` copies of `|1⟩`. Each
//! single-qubit state is drawn as its Bloch vector, so `|0⟩` is the north pole
//! `(0, 0, 1)` and `|1⟩` the south pole.

mod roots;

use std::cmp::Ordering;

use nalgebra::Vector3;

pub use roots::{find_roots, relative_residual, ZERO_COEFF_RATIO};

use crate::error::{Error, Result};
use crate::states::{binomial, Qubit, SingleQubitUnitary, SymmetricPureState, C64, ONE, ZERO};
use crate::tolerances::Tolerances;
use roots::{core_roots, strip_zeros, Poly};

/// A point on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPoint(Vector3<f64>);

impl BlochPoint {
    /// Normalizes `v`; fails on the zero vector.
    pub fn from_vector(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self(v / norm))
    }

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_vector(Vector3::new(x, y, z))
    }

    pub fn north() -> Self {
        Self(Vector3::z())
    }

    pub fn south() -> Self {
        Self(-Vector3::z())
    }

    /// Polar angle `theta ∈ [0, π]` from +z and azimuth `phi` from +x.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self(Vector3::new(st * cp, st * sp, ct))
    }

    /// Bloch vector of `α|0⟩ + β|1⟩`.
    pub fn from_qubit(q: Qubit) -> Result<Self> {
        let [a, b] = q;
        let cross = a.conj() * b;
        Self::new(2.0 * cross.re, 2.0 * cross.im, a.norm_sqr() - b.norm_sqr())
    }

    /// Bloch vector of `|0⟩ + z|1⟩`.
    pub fn from_stereographic(z: C64) -> Self {
        if z.norm() <= 1.0 {
            Self::from_qubit([ONE, z]).expect("nonzero")
        } else {
            Self::from_qubit([ONE / z, ONE]).expect("nonzero")
        }
    }

    /// Representative qubit with real nonnegative `|0⟩` amplitude (`|1⟩` at
    /// the south pole).
    pub fn to_qubit(&self) -> Qubit {
        let v = self.0;
        let rho = v.x.hypot(v.y);
        let phase = if rho > 0.0 {
            C64::new(v.x / rho, v.y / rho)
        } else {
            ONE
        };
        let (cos_half, sin_half) = if v.z >= 0.0 {
            let c = ((1.0 + v.z) / 2.0).sqrt();
            (c, rho / (2.0 * c))
        } else {
            let s = ((1.0 - v.z) / 2.0).sqrt();
            (rho / (2.0 * s), s)
        };
        if cos_half == 0.0 {
            return [ZERO, ONE];
        }
        [C64::new(cos_half, 0.0), phase * sin_half]
    }

    pub fn vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn theta(&self) -> f64 {
        self.0.x.hypot(self.0.y).atan2(self.0.z)
    }

    /// Azimuth in `[0, 2π)`.
    pub fn phi(&self) -> f64 {
        let p = self.0.y.atan2(self.0.x);
        if p < 0.0 {
            p + std::f64::consts::TAU
        } else {
            p
        }
    }

    pub fn chordal_distance(&self, other: &Self) -> f64 {
        (self.0 - other.0).norm()
    }

    /// Image under the rotation `g` induces on the sphere.
    pub fn transformed(&self, g: &SingleQubitUnitary) -> Self {
        Self::from_qubit(g.apply(self.to_qubit())).expect("unitary image of a unit vector")
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .z
            .total_cmp(&self.0.z)
            .then(self.0.x.total_cmp(&other.0.x))
            .then(self.0.y.total_cmp(&other.0.y))
    }
}

/// A point together with how many Majorana points sit on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedPoint {
    pub point: BlochPoint,
    pub multiplicity: usize,
}

/// A multiset of points on the sphere, stored as distinct clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct MajoranaConfiguration {
    clusters: Vec<WeightedPoint>,
}

impl MajoranaConfiguration {
    /// Clusters points lying within chordal distance `eps` (single linkage).
    pub fn from_points(points: &[BlochPoint], eps: f64) -> Result<Self> {
        let weighted = points
            .iter()
            .map(|&point| WeightedPoint {
                point,
                multiplicity: 1,
            })
            .collect();
        Self::from_weighted(weighted, eps)
    }

    /// Merges clusters closer than `eps` until none remain.
    pub fn from_weighted(mut clusters: Vec<WeightedPoint>, eps: f64) -> Result<Self> {
        clusters.retain(|c| c.multiplicity > 0);
        if clusters.is_empty() {
            return Err(Error::TooFewQubits { n: 0, min: 1 });
        }
        loop {
            let groups = linkage(&clusters, |a, b| a.point.chordal_distance(&b.point) <= eps);
            if groups.len() == clusters.len() {
                break;
            }
            clusters = groups
                .iter()
                .map(|g| merge(g.iter().map(|&i| clusters[i])))
                .collect();
        }
        clusters.sort_by(|a, b| a.point.canonical_cmp(&b.point));
        Ok(Self { clusters })
    }

    pub fn n(&self) -> usize {
        self.clusters.iter().map(|c| c.multiplicity).sum()
    }

    pub fn clusters(&self) -> &[WeightedPoint] {
        &self.clusters
    }

    /// Every point, repeated by multiplicity.
    pub fn points(&self) -> Vec<BlochPoint> {
        self.clusters
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.point, c.multiplicity))
            .collect()
    }

    /// Applies `f` to each cluster point, keeping multiplicities.
    pub fn map_points(&self, f: impl Fn(&BlochPoint) -> BlochPoint) -> Self {
        let mut clusters: Vec<WeightedPoint> = self
            .clusters
            .iter()
            .map(|c| WeightedPoint {
                point: f(&c.point),
                multiplicity: c.multiplicity,
            })
            .collect();
        clusters.sort_by(|a, b| a.point.canonical_cmp(&b.point));
        Self { clusters }
    }
}

fn merge(items: impl Iterator<Item = WeightedPoint>) -> WeightedPoint {
    let (sum, m) = items.fold((Vector3::zeros(), 0), |(s, m), c| {
        (s + c.point.0 * c.multiplicity as f64, m + c.multiplicity)
    });
    WeightedPoint {
        point: BlochPoint::from_vector(sum).unwrap_or(BlochPoint(Vector3::z())),
        multiplicity: m,
    }
}

/// Connected components of the "close" relation, in first-index order.
fn linkage<T>(items: &[T], close: impl Fn(&T, &T) -> bool) -> Vec<Vec<usize>> {
    let mut label: Vec<Option<usize>> = vec![None; items.len()];
    let mut groups = Vec::new();
    for start in 0..items.len() {
        if label[start].is_some() {
            continue;
        }
        let id = groups.len();
        label[start] = Some(id);
        let mut members = vec![start];
        let mut cursor = 0;
        while cursor < members.len() {
            let cur = members[cursor];
            for j in 0..items.len() {
                if label[j].is_none() && close(&items[cur], &items[j]) {
                    label[j] = Some(id);
                    members.push(j);
                }
            }
            cursor += 1;
        }
        groups.push(members);
    }
    groups
}

/// Descending coefficients of `P(z) = Σ_k (-1)^k √C(n,k) c_k z^{n-k}`.
pub fn majorana_polynomial(psi: &SymmetricPureState) -> Vec<C64> {
    let n = psi.n();
    psi.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            c * (sign * binomial(n, k).sqrt())
        })
        .collect()
}

/// The Majorana configuration of `psi`.
pub fn majorana_points(
    psi: &SymmetricPureState,
    tol: &Tolerances,
) -> Result<MajoranaConfiguration> {
    let desc = majorana_polynomial(psi);
    let (south, core, north) = strip_zeros(&desc)?;
    let roots = core_roots(&core)?;
    let mut clusters = cluster_roots(&Poly::from_descending(&core), &roots, tol.cluster);
    if north > 0 {
        clusters.push(WeightedPoint {
            point: BlochPoint::north(),
            multiplicity: north,
        });
    }
    if south > 0 {
        clusters.push(WeightedPoint {
            point: BlochPoint::south(),
            multiplicity: south,
        });
    }
    MajoranaConfiguration::from_weighted(clusters, tol.cluster)
}

/// The symmetric state whose Majorana configuration is `config`.
pub fn points_to_state(config: &MajoranaConfiguration) -> Result<SymmetricPureState> {
    let qubits: Vec<Qubit> = config.points().iter().map(|p| p.to_qubit()).collect();
    SymmetricPureState::symmetrize(&qubits)
}

/// Moves every point by the rotation that `g` induces on the sphere.
pub fn mobius_apply(
    g: &SingleQubitUnitary,
    config: &MajoranaConfiguration,
) -> MajoranaConfiguration {
    config.map_points(|p| p.transformed(g))
}

const LINKAGE_LEVELS: [f64; 6] = [0.5, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5];

/// Groups numerically split multiple roots.
///
/// A root of multiplicity `m` comes out of the eigenvalue solver spread over
/// a radius near `ε^{1/m}`, while the mean of the spread stays accurate. Roots
/// are linked at decreasing radii; a linked group of size `m` is accepted as
/// one `m`-fold root when the Taylor coefficients of `P` at its refined centre
/// are no larger than their rounding bounds allow, and is otherwise split at
/// the next radius. At radius `eps` groups are accepted unconditionally.
fn cluster_roots(poly: &Poly, roots: &[C64], eps: f64) -> Vec<WeightedPoint> {
    let points: Vec<BlochPoint> = roots
        .iter()
        .map(|&z| BlochPoint::from_stereographic(z))
        .collect();
    let mut levels: Vec<f64> = LINKAGE_LEVELS
        .iter()
        .copied()
        .filter(|&l| l > eps)
        .collect();
    levels.push(eps);
    let all: Vec<usize> = (0..roots.len()).collect();
    let mut out = Vec::new();
    split_group(poly, roots, &points, &all, &levels, eps, &mut out);
    out
}

fn split_group(
    poly: &Poly,
    roots: &[C64],
    points: &[BlochPoint],
    members: &[usize],
    levels: &[f64],
    eps: f64,
    out: &mut Vec<WeightedPoint>,
) {
    let Some((&radius, rest)) = levels.split_first() else {
        return;
    };
    let sub: Vec<BlochPoint> = members.iter().map(|&i| points[i]).collect();
    for group in linkage(&sub, |a, b| a.chordal_distance(b) <= radius) {
        let ids: Vec<usize> = group.iter().map(|&g| members[g]).collect();
        if ids.len() == 1 {
            out.push(WeightedPoint {
                point: points[ids[0]],
                multiplicity: 1,
            });
        } else if rest.is_empty() {
            out.push(merge(ids.iter().map(|&i| WeightedPoint {
                point: points[i],
                multiplicity: 1,
            })));
        } else if let Some(point) = certify_multiple_root(poly, roots, &ids, radius, eps) {
            out.push(WeightedPoint {
                point,
                multiplicity: ids.len(),
            });
        } else {
            split_group(poly, roots, points, &ids, rest, eps, out);
        }
    }
}

fn certify_multiple_root(
    poly: &Poly,
    roots: &[C64],
    ids: &[usize],
    radius: f64,
    eps: f64,
) -> Option<BlochPoint> {
    let m = ids.len();
    let north_mean = ids.iter().filter(|&&i| roots[i].norm() <= 1.0).count() * 2 >= m;
    let (chart, coords): (Poly, Vec<C64>) = if north_mean {
        (poly.clone(), ids.iter().map(|&i| roots[i]).collect())
    } else {
        (
            poly.reversed(),
            ids.iter().map(|&i| ONE / roots[i]).collect(),
        )
    };
    let mean = coords.iter().sum::<C64>() / m as f64;
    let refined = chart.nth_derivative(m - 1).polish(mean, 5);
    let centre = if (refined - mean).norm() <= radius {
        refined
    } else {
        mean
    };

    let taylor = chart.taylor(centre, m);
    let top = taylor[m].norm();
    if !(top > 0.0) {
        return None;
    }
    let mut spread = 0.0f64;
    let mut noise = 0.0f64;
    for (j, a) in taylor.iter().enumerate().take(m) {
        let power = 1.0 / (m - j) as f64;
        spread = spread.max((a.norm() / top).powf(power));
        noise = noise.max((chart.taylor_error_bound(centre, j) / top).powf(power));
    }
    if spread > eps.max(2.0 * noise) {
        return None;
    }
    let z = if north_mean { centre } else { ONE / centre };
    Some(if z.is_finite() {
        BlochPoint::from_stereographic(z)
    } else {
        BlochPoint::south()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn polar_conventions() {
        let zero = BlochPoint::from_qubit([ONE, ZERO]).unwrap();
        assert!(zero.chordal_distance(&BlochPoint::north()) < 1e-15);
        let one = BlochPoint::from_qubit([ZERO, ONE]).unwrap();
        assert!(one.chordal_distance(&BlochPoint::south()) < 1e-15);
        let plus = BlochPoint::from_stereographic(ONE);
        assert!((plus.vector() - Vector3::x()).norm() < 1e-15);
        let p = BlochPoint::from_angles(1.1, 4.0);
        assert!((p.theta() - 1.1).abs() < 1e-14 && (p.phi() - 4.0).abs() < 1e-14);
        assert_eq!(BlochPoint::south().to_qubit(), [ZERO, ONE]);
    }

    #[test]
    fn qubit_round_trip_near_poles() {
        for theta in [1e-9, 1e-4, 0.7, PI - 1e-4, PI - 1e-9] {
            let p = BlochPoint::from_angles(theta, 2.2);
            let q = BlochPoint::from_qubit(p.to_qubit()).unwrap();
            assert!(p.chordal_distance(&q) < 1e-15, "theta={theta}");
            assert!(p.to_qubit()[0].im == 0.0 && p.to_qubit()[0].re >= 0.0);
        }
    }

    #[test]
    fn convention_forced_cases() {
        let zero = SymmetricPureState::dicke(1, 0).unwrap();
        let c = majorana_points(&zero, &tol()).unwrap();
        assert_eq!(
            c.clusters(),
            &[WeightedPoint {
                point: BlochPoint::north(),
                multiplicity: 1
            }]
        );

        let d21 = SymmetricPureState::dicke(2, 1).unwrap();
        let c = majorana_points(&d21, &tol()).unwrap();
        assert_eq!(c.clusters().len(), 2);
        assert_eq!(c.clusters()[0].point, BlochPoint::north());
        assert_eq!(c.clusters()[1].point, BlochPoint::south());
    }

    #[test]
    fn dicke_states_give_two_pole_clusters() {
        for n in 1..=8 {
            for k in 0..=n {
                let c = majorana_points(&SymmetricPureState::dicke(n, k).unwrap(), &tol()).unwrap();
                let north = c
                    .clusters()
                    .iter()
                    .find(|w| w.point == BlochPoint::north())
                    .map_or(0, |w| w.multiplicity);
                let south = c
                    .clusters()
                    .iter()
                    .find(|w| w.point == BlochPoint::south())
                    .map_or(0, |w| w.multiplicity);
                assert_eq!((north, south), (n - k, k), "n={n} k={k}");
                let back = points_to_state(&c).unwrap();
                assert!(
                    back.distance_up_to_phase(&SymmetricPureState::dicke(n, k).unwrap()) < 1e-14
                );
            }
        }
    }

    #[test]
    fn ghz_gives_equatorial_polygon() {
        for n in 2..=8 {
            let c = majorana_points(&SymmetricPureState::ghz_balanced(n).unwrap(), &tol()).unwrap();
            assert_eq!(c.clusters().len(), n);
            let mut phis: Vec<f64> = c.points().iter().map(|p| p.phi()).collect();
            phis.sort_by(f64::total_cmp);
            for p in c.points() {
                assert!(p.vector().z.abs() < 1e-12);
            }
            for w in phis.windows(2) {
                assert!((w[1] - w[0] - TAU / n as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn equatorial_triangle_symmetrizes_to_ghz() {
        let pts: Vec<BlochPoint> = (0..3)
            .map(|k| BlochPoint::from_angles(PI / 2.0, k as f64 * TAU / 3.0))
            .collect();
        let c = MajoranaConfiguration::from_points(&pts, 1e-6).unwrap();
        let psi = points_to_state(&c).unwrap();
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        // φ = 0 point is |+⟩, root z = 1, so P ∝ z^3 - 1 and c_0 = c_3
        let ghz = SymmetricPureState::ghz(3, h, h).unwrap();
        assert!(psi.distance_up_to_phase(&ghz) < 1e-14);
    }

    #[test]
    fn round_trip_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for trial in 0..200 {
            let n = 1 + trial % 8;
            let psi = SymmetricPureState::random(n, &mut rng).unwrap();
            let c = majorana_points(&psi, &tol()).unwrap();
            assert_eq!(c.n(), n);
            let back = points_to_state(&c).unwrap();
            assert!(back.distance_up_to_phase(&psi) < 1e-8, "trial {trial}");
        }
    }

    #[test]
    fn degree_deficiency_is_exact() {
        // zero c_0..c_{m-1} drop the degree of P by m
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 2..=8 {
            for m in 1..n {
                let mut coeffs = SymmetricPureState::random(n, &mut rng)
                    .unwrap()
                    .coeffs()
                    .to_vec();
                coeffs[..m].iter_mut().for_each(|c| *c = ZERO);
                let psi = SymmetricPureState::normalized(n, coeffs).unwrap();
                let c = majorana_points(&psi, &tol()).unwrap();
                let south = c
                    .clusters()
                    .iter()
                    .find(|w| w.point == BlochPoint::south())
                    .map_or(0, |w| w.multiplicity);
                assert_eq!(south, m);
            }
        }
    }

    #[test]
    fn rotated_multiple_roots_are_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for n in 2..=8 {
            for k in 0..=n / 2 {
                let g = SingleQubitUnitary::random(&mut rng);
                let psi = SymmetricPureState::dicke(n, k).unwrap().apply_uniform(&g);
                let c = majorana_points(&psi, &tol()).unwrap();
                let mut mult: Vec<usize> = c.clusters().iter().map(|w| w.multiplicity).collect();
                mult.sort();
                let mut want = vec![n - k, k];
                want.retain(|&m| m > 0);
                want.sort();
                assert_eq!(mult, want, "n={n} k={k}");
                let north = BlochPoint::north().transformed(&g);
                let heavy = c.clusters().iter().max_by_key(|w| w.multiplicity).unwrap();
                if k != n - k {
                    assert!(heavy.point.chordal_distance(&north) < 1e-9);
                }
            }
        }
    }

    #[test]
    fn mobius_examples() {
        let ghz = majorana_points(&SymmetricPureState::ghz_balanced(4).unwrap(), &tol()).unwrap();
        let same = mobius_apply(&SingleQubitUnitary::identity(), &ghz);
        for (a, b) in same.clusters().iter().zip(ghz.clusters()) {
            assert!(a.point.chordal_distance(&b.point) < 1e-15);
        }
        // a quarter turn about z maps the square onto itself shifted by π/2
        let turned = mobius_apply(&SingleQubitUnitary::z_rotation(PI / 2.0), &ghz);
        let first = ghz.points()[0];
        let moved = first.transformed(&SingleQubitUnitary::z_rotation(PI / 2.0));
        assert!((moved.phi() - (first.phi() + PI / 2.0).rem_euclid(TAU)).abs() < 1e-12);
        assert!(turned
            .points()
            .iter()
            .any(|p| p.chordal_distance(&moved) < 1e-12));

        let d = majorana_points(&SymmetricPureState::dicke(5, 2).unwrap(), &tol()).unwrap();
        let flipped = mobius_apply(&SingleQubitUnitary::pauli_x(), &d);
        let want = majorana_points(&SymmetricPureState::dicke(5, 3).unwrap(), &tol()).unwrap();
        assert_eq!(flipped.clusters().len(), 2);
        for (a, b) in flipped.clusters().iter().zip(want.clusters()) {
            assert_eq!(a.multiplicity, b.multiplicity);
            assert!(a.point.chordal_distance(&b.point) < 1e-15);
        }
    }

    #[test]
    fn clustering_is_idempotent() {
        let pts = [
            BlochPoint::from_angles(0.5, 0.1),
            BlochPoint::from_angles(0.5 + 4e-7, 0.1),
            BlochPoint::from_angles(0.5 + 8e-7, 0.1),
            BlochPoint::from_angles(2.0, 1.0),
        ];
        let c = MajoranaConfiguration::from_points(&pts, 1e-6).unwrap();
        assert_eq!(c.n(), 4);
        assert_eq!(c.clusters().len(), 2);
        let again = MajoranaConfiguration::from_weighted(c.clusters().to_vec(), 1e-6).unwrap();
        assert_eq!(again, c);
    }
}

//! Rotations of the Bloch sphere and rotational matching of Majorana
//! configurations.

mod group;

use std::cmp::Ordering;

use nalgebra::{Matrix2, Matrix3, Vector3};

pub use group::{closure, symmetry_group, GroupKind, PointGroup};

use crate::error::{Error, Result};
use crate::majorana::{BlochPoint, MajoranaConfiguration, WeightedPoint};
use crate::states::{SingleQubitUnitary, C64, ONE, ZERO};

const QUATERNION_TIE: f64 = 1e-12;

/// A proper rotation of R³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation(Matrix3<f64>);

impl Rotation {
    /// Checks orthogonality and `det = +1` within `1e-10`.
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let ortho = (m.transpose() * m - Matrix3::identity()).norm();
        let det = m.determinant();
        if ortho > 1e-10 || (det - 1.0).abs() > 1e-10 {
            return Err(Error::Unsupported(format!(
                "not a rotation: orthogonality defect {ortho:.3e}, determinant {det}"
            )));
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    /// Right-handed rotation by `angle` about `axis`.
    pub fn from_axis_angle(axis: Vector3<f64>, angle: f64) -> Result<Self> {
        let norm = axis.norm();
        if !(norm > 0.0) {
            return Err(Error::ZeroVector);
        }
        let (s, c) = (angle / 2.0).sin_cos();
        let v = axis / norm * s;
        Ok(Self::from_unit_quaternion(c, v.x, v.y, v.z))
    }

    fn from_unit_quaternion(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self(Matrix3::new(
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ))
    }

    /// Unit quaternion `(w, x, y, z)` with `w ≥ 0`; when `|w| ≤ 1e-12` it is
    /// set to zero and the first nonzero of `x, y, z` is made positive.
    pub fn quaternion(&self) -> [f64; 4] {
        let m = &self.0;
        let tr = m.trace();
        // Shepperd: divide by the largest of the four diagonal combinations
        let cands = [
            1.0 + tr,
            1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)],
            1.0 - m[(0, 0)] + m[(1, 1)] - m[(2, 2)],
            1.0 - m[(0, 0)] - m[(1, 1)] + m[(2, 2)],
        ];
        let (best, &val) = cands
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("four candidates");
        let s = 2.0 * val.max(0.0).sqrt();
        let mut q = match best {
            0 => [
                s / 4.0,
                (m[(2, 1)] - m[(1, 2)]) / s,
                (m[(0, 2)] - m[(2, 0)]) / s,
                (m[(1, 0)] - m[(0, 1)]) / s,
            ],
            1 => [
                (m[(2, 1)] - m[(1, 2)]) / s,
                s / 4.0,
                (m[(0, 1)] + m[(1, 0)]) / s,
                (m[(0, 2)] + m[(2, 0)]) / s,
            ],
            2 => [
                (m[(0, 2)] - m[(2, 0)]) / s,
                (m[(0, 1)] + m[(1, 0)]) / s,
                s / 4.0,
                (m[(1, 2)] + m[(2, 1)]) / s,
            ],
            _ => [
                (m[(1, 0)] - m[(0, 1)]) / s,
                (m[(0, 2)] + m[(2, 0)]) / s,
                (m[(1, 2)] + m[(2, 1)]) / s,
                s / 4.0,
            ],
        };
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        q.iter_mut().for_each(|x| *x /= norm);
        let flip = if q[0].abs() > QUATERNION_TIE {
            q[0] < 0.0
        } else {
            q[0] = 0.0;
            q[1..]
                .iter()
                .find(|x| x.abs() > QUATERNION_TIE)
                .is_some_and(|x| *x < 0.0)
        };
        if flip {
            q.iter_mut().for_each(|x| *x = -*x);
        }
        q
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0 * v
    }

    pub fn apply_point(&self, p: &BlochPoint) -> BlochPoint {
        BlochPoint::from_vector(self.0 * p.vector()).expect("rotation preserves length")
    }

    pub fn apply_config(&self, config: &MajoranaConfiguration) -> MajoranaConfiguration {
        config.map_points(|p| self.apply_point(p))
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.transpose())
    }

    /// Rotation angle in `[0, π]`.
    pub fn angle(&self) -> f64 {
        let q = self.quaternion();
        2.0 * Vector3::new(q[1], q[2], q[3]).norm().atan2(q[0])
    }

    /// Unit axis oriented so the rotation is right-handed by `angle()`. For
    /// angle `π` the axis has its first nonzero component positive. The
    /// identity reports `+z`.
    pub fn axis(&self) -> Vector3<f64> {
        let q = self.quaternion();
        let v = Vector3::new(q[1], q[2], q[3]);
        let norm = v.norm();
        if norm < 1e-15 {
            Vector3::z()
        } else {
            v / norm
        }
    }

    /// Frobenius distance between the matrices.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.0 - other.0).norm()
    }

    /// `(p, q)` with `angle ≈ pπ/q` within `1e-9`, `q ≤ 120`, in lowest terms.
    pub fn angle_as_pi_fraction(&self) -> Option<(u32, u32)> {
        snap_to_pi_fraction(self.angle())
    }

    /// Sort key for deterministic choice: angle, then axis components.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.axis(), other.axis());
        self.angle()
            .total_cmp(&other.angle())
            .then(a.x.total_cmp(&b.x))
            .then(a.y.total_cmp(&b.y))
            .then(a.z.total_cmp(&b.z))
    }
}

impl std::ops::Mul for Rotation {
    type Output = Rotation;

    fn mul(self, rhs: Rotation) -> Rotation {
        Rotation(self.0 * rhs.0)
    }
}

pub(crate) fn snap_to_pi_fraction(angle: f64) -> Option<(u32, u32)> {
    let x = angle / std::f64::consts::PI;
    (1..=120u32).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() < 1e-9 && p >= 0.0).then_some((p as u32, q))
    })
}

/// `R_ij = ½ tr(σ_i g σ_j g†)`.
pub fn su2_to_so3(g: &SingleQubitUnitary) -> Rotation {
    let sigma = paulis();
    let m = g.matrix();
    let adj = m.adjoint();
    // make the result insensitive to a global phase of g
    let scale = g.determinant().norm();
    let mut r = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            r[(i, j)] = 0.5 * (sigma[i] * m * sigma[j] * adj).trace().re / scale;
        }
    }
    Rotation(r)
}

/// SU(2) preimage with `w ≥ 0` in `w·1 - i v·σ`; ties at `w = 0` take the
/// first nonzero component of `v` positive.
pub fn so3_to_su2(r: &Rotation) -> SingleQubitUnitary {
    let [w, x, y, z] = r.quaternion();
    SingleQubitUnitary::from_quaternion(w, x, y, z)
}

fn paulis() -> [Matrix2<C64>; 3] {
    let i = C64::new(0.0, 1.0);
    [
        Matrix2::new(ZERO, ONE, ONE, ZERO),
        Matrix2::new(ZERO, -i, i, ZERO),
        Matrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// Rotation taking `a` to `b` about `a × b`; for antipodal inputs the axis is
/// a fixed perpendicular of `a`.
pub fn minimal_rotation(a: &Vector3<f64>, b: &Vector3<f64>) -> Rotation {
    let cross = a.cross(b);
    let dot = a.dot(b);
    let angle = cross.norm().atan2(dot);
    if cross.norm() > 1e-12 {
        return Rotation::from_axis_angle(cross, angle).expect("nonzero axis");
    }
    if dot > 0.0 {
        return Rotation::identity();
    }
    Rotation::from_axis_angle(perpendicular(a), std::f64::consts::PI).expect("nonzero axis")
}

/// Unit vector perpendicular to `a`: the x axis projected off `a`, or the y
/// axis when `a` is close to ±x.
pub(crate) fn perpendicular(a: &Vector3<f64>) -> Vector3<f64> {
    let helper = if a.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    (helper - a * a.dot(&helper)).normalize()
}

/// Bottleneck distance between two multisets of points: the minimum over
/// bijections of the largest chordal distance between paired points.
pub fn matching_distance(a: &MajoranaConfiguration, b: &MajoranaConfiguration) -> Result<f64> {
    check_same_n(a, b)?;
    let (pa, pb) = (a.points(), b.points());
    let mut levels: Vec<f64> = pa
        .iter()
        .flat_map(|p| pb.iter().map(move |q| p.chordal_distance(q)))
        .collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let (mut lo, mut hi) = (0, levels.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(&pa, &pb, levels[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(levels[lo])
}

fn check_same_n(a: &MajoranaConfiguration, b: &MajoranaConfiguration) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::ArityMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(())
}

/// Assignment `a[i] ↦ b[m[i]]` with every pair within `tol`: greedy nearest
/// neighbour first, augmenting paths if that fails.
fn perfect_matching(a: &[BlochPoint], b: &[BlochPoint], tol: f64) -> Option<Vec<usize>> {
    let n = a.len();
    let mut used = vec![false; n];
    let mut greedy = Vec::with_capacity(n);
    for p in a {
        let best = (0..n)
            .filter(|&j| !used[j])
            .map(|j| (j, p.chordal_distance(&b[j])))
            .filter(|&(_, d)| d <= tol)
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match best {
            Some((j, _)) => {
                used[j] = true;
                greedy.push(j);
            }
            None => break,
        }
    }
    if greedy.len() == n {
        return Some(greedy);
    }

    let adj: Vec<Vec<usize>> = a
        .iter()
        .map(|p| {
            (0..n)
                .filter(|&j| p.chordal_distance(&b[j]) <= tol)
                .collect()
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, &adj, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut out = vec![0; n];
    for (j, o) in owner.iter().enumerate() {
        out[o.expect("perfect matching")] = j;
    }
    Some(out)
}

fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if owner[j].is_none_or(|k| augment(k, adj, owner, seen)) {
            owner[j] = Some(i);
            return true;
        }
    }
    false
}

/// Best least-squares rotation taking each `a[i]` to `b[i]` (Kabsch).
fn fit_rotation(a: &[BlochPoint], b: &[BlochPoint]) -> Option<Rotation> {
    let mut h = Matrix3::zeros();
    for (p, q) in a.iter().zip(b) {
        h += q.vector() * p.vector().transpose();
    }
    best_rotation(&h)
}

/// The rotation `R` maximizing `tr(Rᵀ h)`.
pub(crate) fn best_rotation(h: &Matrix3<f64>) -> Option<Rotation> {
    let svd = h.svd(true, true);
    let (u, v_t) = (svd.u?, svd.v_t?);
    let d = (u * v_t).determinant().signum();
    let fix = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, d));
    Some(Rotation(u * fix * v_t))
}

/// Tests `r` against the full multisets and refits it on the found pairing.
fn confirm(r: &Rotation, pa: &[BlochPoint], pb: &[BlochPoint], tol: f64) -> Option<Rotation> {
    let moved: Vec<BlochPoint> = pa.iter().map(|p| r.apply_point(p)).collect();
    let pairing = perfect_matching(&moved, pb, tol)?;
    let targets: Vec<BlochPoint> = pairing.iter().map(|&j| pb[j]).collect();
    let refit = fit_rotation(pa, &targets)?;
    let worst = |x: &Rotation| {
        pa.iter()
            .zip(&targets)
            .map(|(p, q)| x.apply_point(p).chordal_distance(q))
            .fold(0.0, f64::max)
    };
    // a collinear pairing leaves the refit's spin about the axis arbitrary
    Some(if worst(&refit) < worst(r) { refit } else { *r })
}

fn all_collinear(clusters: &[WeightedPoint]) -> bool {
    match clusters {
        [_] => true,
        [a, b] => a.point.vector().cross(b.point.vector()).norm() < 1e-9,
        _ => false,
    }
}

/// A rotation `R` with `R·a = b` as multisets within chordal distance `tol`,
/// or `None`. Among several the smallest angle wins, then the
/// lexicographically smallest axis.
pub fn match_rotation(
    a: &MajoranaConfiguration,
    b: &MajoranaConfiguration,
    tol: f64,
) -> Result<Option<Rotation>> {
    Ok(match_all(a, b, tol)?.into_iter().next())
}

/// Every distinct candidate rotation matching `a` onto `b`, in canonical
/// order. When `a` is collinear (one cluster or two antipodal ones) the
/// matching rotations form a continuum and only the minimal ones are listed.
pub fn match_all(
    a: &MajoranaConfiguration,
    b: &MajoranaConfiguration,
    tol: f64,
) -> Result<Vec<Rotation>> {
    check_same_n(a, b)?;
    let (ca, cb) = (a.clusters(), b.clusters());
    let mut found: Vec<Rotation> = Vec::new();
    let (pa, pb) = (a.points(), b.points());
    let mut consider = |r: Rotation| {
        if let Some(r) = confirm(&r, &pa, &pb, tol) {
            if found.iter().all(|f| f.distance(&r) > 1e-6) {
                found.push(r);
            }
        }
    };

    if all_collinear(ca) {
        if !all_collinear(cb) {
            return Ok(Vec::new());
        }
        for x in ca {
            for y in cb.iter().filter(|y| y.multiplicity == x.multiplicity) {
                consider(minimal_rotation(x.point.vector(), y.point.vector()));
            }
        }
    } else {
        let a1 = ca
            .iter()
            .min_by_key(|c| c.multiplicity)
            .expect("nonempty configuration");
        let a2 = ca
            .iter()
            .filter(|c| c.point.vector().cross(a1.point.vector()).norm() >= 1e-9)
            .min_by(|x, y| {
                let dx = x.point.vector().dot(a1.point.vector()).abs();
                let dy = y.point.vector().dot(a1.point.vector()).abs();
                dx.total_cmp(&dy)
            })
            .expect("non-collinear configuration");
        let fa = frame(&a1.point, &a2.point);
        let span = a1.point.chordal_distance(&a2.point);
        for b1 in cb.iter().filter(|c| c.multiplicity == a1.multiplicity) {
            for b2 in cb.iter().filter(|c| c.multiplicity == a2.multiplicity) {
                if (b1.point.chordal_distance(&b2.point) - span).abs() > 2.0 * tol
                    || b1.point.vector().cross(b2.point.vector()).norm() < 1e-9
                {
                    continue;
                }
                let fb = frame(&b1.point, &b2.point);
                consider(Rotation(fb * fa.transpose()));
            }
        }
    }
    found.sort_by(|x, y| x.canonical_cmp(y));
    Ok(found)
}

fn frame(p: &BlochPoint, q: &BlochPoint) -> Matrix3<f64> {
    let u1 = *p.vector();
    let u2 = (q.vector() - u1 * u1.dot(q.vector())).normalize();
    let u3 = u1.cross(&u2);
    Matrix3::from_columns(&[u1, u2, u3])
}

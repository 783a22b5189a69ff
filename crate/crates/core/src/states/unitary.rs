use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// A 2×2 unitary acting on one qubit.
///
/// Equality with `==` is exact matrix equality; use
/// [`SingleQubitUnitary::projectively_equal`] for equality in PU(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitUnitary(Matrix2<C64>);

impl SingleQubitUnitary {
    /// Checks unitarity to `1e-12` (max-entry deviation of `u u† - 1`).
    pub fn new(m: Matrix2<C64>) -> Result<Self> {
        Self::with_tolerance(m, 1e-12)
    }

    pub fn with_tolerance(m: Matrix2<C64>, tol: f64) -> Result<Self> {
        let dev = unitarity_deviation(&m);
        if !(dev <= tol) {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self(m))
    }

    #[cfg(test)]
    pub(crate) fn from_matrix_unchecked(m: Matrix2<C64>) -> Self {
        Self(m)
    }

    pub fn from_rows(rows: [[C64; 2]; 2]) -> Result<Self> {
        Self::new(Matrix2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1]))
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn pauli_x() -> Self {
        Self(Matrix2::new(ZERO, ONE, ONE, ZERO))
    }

    pub fn pauli_y() -> Self {
        Self(Matrix2::new(ZERO, -I, I, ZERO))
    }

    pub fn pauli_z() -> Self {
        Self(Matrix2::new(ONE, ZERO, ZERO, -ONE))
    }

    /// `exp(-i t Z / 2) = diag(e^{-it/2}, e^{it/2})`.
    pub fn z_rotation(t: f64) -> Self {
        Self(Matrix2::new(
            C64::from_polar(1.0, -t / 2.0),
            ZERO,
            ZERO,
            C64::from_polar(1.0, t / 2.0),
        ))
    }

    /// `diag(1, e^{iφ})`, the phase layer used to make GHZ coherences real.
    pub fn phase_gate(phi: f64) -> Self {
        Self(Matrix2::new(ONE, ZERO, ZERO, C64::from_polar(1.0, phi)))
    }

    /// `exp(-i θ/2 v·σ)`, which rotates the Bloch sphere by `θ` about `v`.
    pub fn from_axis_angle(axis: Vector3<f64>, theta: f64) -> Self {
        let v = axis.normalize();
        let (s, c) = (theta / 2.0).sin_cos();
        Self::from_quaternion(c, s * v.x, s * v.y, s * v.z)
    }

    /// The SU(2) element `w·1 - i(x σx + y σy + z σz)` of a unit quaternion.
    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self(Matrix2::new(
            C64::new(w, -z),
            C64::new(-y, -x),
            C64::new(y, -x),
            C64::new(w, z),
        ))
    }

    /// ZYZ Euler parameterization `Rz(α) Ry(β) Rz(γ)` of SU(2).
    pub fn from_euler_zyz(alpha: f64, beta: f64, gamma: f64) -> Self {
        let ry = Self::from_axis_angle(Vector3::y(), beta);
        Self::z_rotation(alpha) * ry * Self::z_rotation(gamma)
    }

    /// Haar-random element of U(2).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut q = [0.0f64; 4];
        loop {
            for x in q.iter_mut() {
                *x = rng.sample(StandardNormal);
            }
            let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-8 {
                q.iter_mut().for_each(|x| *x /= norm);
                break;
            }
        }
        let phase = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        let g = Self::from_quaternion(q[0], q[1], q[2], q[3]);
        Self(g.0 * phase)
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.0[(0, 0)] * v[0] + self.0[(0, 1)] * v[1],
            self.0[(1, 0)] * v[0] + self.0[(1, 1)] * v[1],
        ]
    }

    pub fn determinant(&self) -> C64 {
        self.0[(0, 0)] * self.0[(1, 1)] - self.0[(0, 1)] * self.0[(1, 0)]
    }

    /// Representative in SU(2) (one of the two).
    pub fn to_special(&self) -> Self {
        let det = self.determinant();
        let root = C64::from_polar(1.0, -det.arg() / 2.0);
        Self(self.0 * root)
    }

    /// `min_λ ‖g - λh‖_F` over unit complex `λ`.
    pub fn projective_distance(&self, other: &Self) -> f64 {
        let overlap = (other.0.adjoint() * self.0).trace();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        (self.0 - other.0 * phase).norm()
    }

    pub fn projectively_equal(&self, other: &Self, tol: f64) -> bool {
        self.projective_distance(other) <= tol
    }

    /// Phase-fixed representative: first entry (row-major) with modulus above
    /// `1e-9` made real positive.
    pub fn phase_normalized(&self) -> Self {
        let pivot = self
            .0
            .transpose()
            .iter()
            .copied()
            .find(|z| z.norm() > 1e-9)
            .unwrap_or(ONE);
        Self(self.0 * (pivot.conj() / pivot.norm()))
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.0[(0, 1)].norm() <= tol && self.0[(1, 0)].norm() <= tol
    }

    pub fn is_antidiagonal(&self, tol: f64) -> bool {
        self.0[(0, 0)].norm() <= tol && self.0[(1, 1)].norm() <= tol
    }
}

impl std::ops::Mul for SingleQubitUnitary {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

fn unitarity_deviation(m: &Matrix2<C64>) -> f64 {
    (m * m.adjoint() - Matrix2::identity())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// A tuple `(g_1, …, g_n)` acting as `g_1 ⊗ … ⊗ g_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    factors: Vec<SingleQubitUnitary>,
}

impl LocalUnitary {
    pub fn new(factors: Vec<SingleQubitUnitary>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::TooFewQubits { n: 0, min: 1 });
        }
        Ok(Self { factors })
    }

    pub fn uniform(g: SingleQubitUnitary, n: usize) -> Self {
        Self {
            factors: vec![g; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::uniform(SingleQubitUnitary::identity(), n)
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[SingleQubitUnitary] {
        &self.factors
    }

    pub fn factor(&self, k: usize) -> &SingleQubitUnitary {
        &self.factors[k]
    }

    /// Factorwise product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::ArityMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(Self {
            factors: self
                .factors
                .iter()
                .zip(&other.factors)
                .map(|(a, b)| *a * *b)
                .collect(),
        })
    }

    pub fn adjoint(&self) -> Self {
        Self {
            factors: self.factors.iter().map(|g| g.adjoint()).collect(),
        }
    }

    /// Factorwise conjugation `g U g†`.
    pub fn conjugated_by(&self, g: &SingleQubitUnitary) -> Self {
        Self {
            factors: self.factors.iter().map(|f| *g * *f * g.adjoint()).collect(),
        }
    }

    /// Largest per-factor projective distance; `∞` on arity mismatch.
    pub fn projective_distance(&self, other: &Self) -> f64 {
        if self.n() != other.n() {
            return f64::INFINITY;
        }
        self.factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| a.projective_distance(b))
            .fold(0.0, f64::max)
    }

    /// Equality in PU(2)^n: every factor agrees up to its own phase.
    pub fn projectively_equal(&self, other: &Self, tol: f64) -> bool {
        self.projective_distance(other) <= tol
    }

    pub fn phase_normalized(&self) -> Self {
        Self {
            factors: self.factors.iter().map(|g| g.phase_normalized()).collect(),
        }
    }
}

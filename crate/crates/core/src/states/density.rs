use nalgebra::{DMatrix, Matrix2, SymmetricEigen};

use super::{check_full_space, PureState, SingleQubitUnitary, C64, ZERO};
use crate::error::{Error, Result};
use crate::states::LocalUnitary;
use crate::tolerances::Tolerances;

/// An n-qubit density matrix on the full 2^n computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    mat: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity at the default
    /// tolerance.
    pub fn new(n: usize, mat: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerance(n, mat, Tolerances::default().hermiticity)
    }

    pub fn with_tolerance(n: usize, mat: DMatrix<C64>, tol: f64) -> Result<Self> {
        check_full_space(n)?;
        let dim = 1usize << n;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::ArityMismatch {
                expected: dim,
                found: mat.nrows().max(mat.ncols()),
            });
        }
        let herm = (&mat - mat.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if !(herm <= tol) {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = mat.trace();
        if !((tr - C64::new(1.0, 0.0)).norm() <= tol) {
            return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
        }
        let rho = Self { n, mat };
        let min_eig = rho.eigenvalues().last().copied().unwrap_or(0.0);
        if min_eig < -tol {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(rho)
    }

    pub(crate) fn from_pure_unchecked(psi: &PureState) -> Self {
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        Self {
            n: psi.n(),
            mat: &v * v.adjoint(),
        }
    }

    /// Convex mixture `Σ p_i |ψ_i⟩⟨ψ_i|`; weights are renormalized.
    pub fn mixture(terms: &[(f64, PureState)]) -> Result<Self> {
        let first = terms.first().ok_or(Error::ZeroVector)?;
        let n = first.1.n();
        let total: f64 = terms.iter().map(|(p, _)| *p).sum();
        if terms.iter().any(|(p, s)| *p < 0.0 || s.n() != n) || !(total > 0.0) {
            return Err(Error::InvalidDensity(
                "mixture weights must be nonnegative".into(),
            ));
        }
        let mut mat = DMatrix::from_element(1 << n, 1 << n, ZERO);
        for (p, psi) in terms {
            mat += Self::from_pure_unchecked(psi).mat * C64::new(p / total, 0.0);
        }
        Ok(Self { n, mat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    /// `U ρ U†`, applied one qubit at a time.
    pub fn apply_lu(&self, u: &LocalUnitary) -> Result<Self> {
        if u.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: u.n(),
            });
        }
        let mut mat = self.mat.clone();
        for (k, g) in u.factors().iter().enumerate() {
            conjugate_qubit(&mut mat, self.n, k, g);
        }
        Ok(Self { n: self.n, mat })
    }

    /// `g^{⊗n} ρ (g^{⊗n})†`.
    pub fn conjugate_uniform(&self, g: &SingleQubitUnitary) -> Self {
        let mut mat = self.mat.clone();
        for k in 0..self.n {
            conjugate_qubit(&mut mat, self.n, k, g);
        }
        Self { n: self.n, mat }
    }

    /// Conjugation by the qubit permutation sending qubit `k` to position
    /// `perm[k]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        let image: Vec<usize> = (0..self.dim())
            .map(|idx| {
                (0..n).fold(0, |acc, k| {
                    let bit = (idx >> (n - 1 - k)) & 1;
                    acc | (bit << (n - 1 - perm[k]))
                })
            })
            .collect();
        let mut mat = self.mat.clone();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                mat[(image[i], image[j])] = self.mat[(i, j)];
            }
        }
        Ok(Self { n, mat })
    }

    /// Swaps qubits `a` and `b`.
    pub fn transpose_qubits(&self, a: usize, b: usize) -> Result<Self> {
        let mut perm: Vec<usize> = (0..self.n).collect();
        if a >= self.n || b >= self.n {
            return Err(Error::InvalidPermutation(vec![a, b]));
        }
        perm.swap(a, b);
        self.permute_qubits(&perm)
    }

    /// First adjacent transposition that moves `ρ` by more than `tol`
    /// (max-entry), with the deviation.
    pub fn permutation_violation(&self, tol: f64) -> Option<(usize, usize, f64)> {
        (0..self.n.saturating_sub(1)).find_map(|k| {
            let swapped = self.transpose_qubits(k, k + 1).ok()?;
            let dev = max_abs_diff(&swapped.mat, &self.mat);
            (dev > tol).then_some((k, k + 1, dev))
        })
    }

    /// Checks adjacent transpositions only; they generate the symmetric group.
    pub fn is_permutation_invariant(&self, tol: f64) -> bool {
        self.permutation_violation(tol).is_none()
    }

    pub(crate) fn require_permutation_invariant(&self, tol: f64) -> Result<()> {
        match self.permutation_violation(tol) {
            Some((a, b, dev)) => Err(Error::NotPermutationInvariant(a, b, dev)),
            None => Ok(()),
        }
    }

    /// Partial trace over every qubit except `k`.
    pub fn reduced_1qubit(&self, k: usize) -> Result<Matrix2<C64>> {
        if k >= self.n {
            return Err(Error::IndexOutOfRange {
                what: "qubit",
                index: k,
                limit: self.n,
            });
        }
        let stride = 1usize << (self.n - 1 - k);
        let mut out = Matrix2::from_element(ZERO);
        for base in (0..self.dim()).filter(|i| i & stride == 0) {
            for a in 0..2 {
                for b in 0..2 {
                    out[(a, b)] += self.mat[(base | (a * stride), base | (b * stride))];
                }
            }
        }
        Ok(out)
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.mat.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (&self.mat - &other.mat).norm()
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }
}

fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `M ← g_k M g_k†` where `g_k` acts on qubit `k`.
fn conjugate_qubit(mat: &mut DMatrix<C64>, n: usize, k: usize, g: &SingleQubitUnitary) {
    let dim = 1usize << n;
    let stride = 1usize << (n - 1 - k);
    let (g00, g01, g10, g11) = (g.entry(0, 0), g.entry(0, 1), g.entry(1, 0), g.entry(1, 1));
    for col in 0..dim {
        for r0 in (0..dim).filter(|i| i & stride == 0) {
            let r1 = r0 | stride;
            let (a0, a1) = (mat[(r0, col)], mat[(r1, col)]);
            mat[(r0, col)] = g00 * a0 + g01 * a1;
            mat[(r1, col)] = g10 * a0 + g11 * a1;
        }
    }
    let (h00, h01, h10, h11) = (g00.conj(), g01.conj(), g10.conj(), g11.conj());
    for c0 in (0..dim).filter(|i| i & stride == 0) {
        let c1 = c0 | stride;
        for row in 0..dim {
            let (a0, a1) = (mat[(row, c0)], mat[(row, c1)]);
            mat[(row, c0)] = a0 * h00 + a1 * h01;
            mat[(row, c1)] = a0 * h10 + a1 * h11;
        }
    }
}

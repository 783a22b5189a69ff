//! Dense test-side oracles built from Kronecker products, independent of the
//! library's per-qubit kernels.
#![allow(dead_code)]

use majorana_lu::states::{
    DensityMatrix, LocalUnitary, SingleQubitUnitary, SymmetricPureState, C64,
};
use nalgebra::{DMatrix, DVector};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn kron(factors: &[SingleQubitUnitary]) -> DMatrix<C64> {
    let mut out = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for g in factors {
        let m = DMatrix::from_fn(2, 2, |r, col| g.entry(r, col));
        out = out.kronecker(&m);
    }
    out
}

pub fn kron_lu(u: &LocalUnitary) -> DMatrix<C64> {
    kron(u.factors())
}

pub fn uniform(g: &SingleQubitUnitary, n: usize) -> DMatrix<C64> {
    kron(&vec![*g; n])
}

pub fn conj(u: &DMatrix<C64>, rho: &DMatrix<C64>) -> DMatrix<C64> {
    u * rho * u.adjoint()
}

pub fn frob(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).norm()
}

fn choose(n: usize, k: usize) -> f64 {
    (1..=k).map(|j| (n + 1 - j) as f64 / j as f64).product()
}

/// Amplitude `c_k / sqrt(C(n,k))` on every weight-`k` string.
pub fn full_vector(psi: &SymmetricPureState) -> DVector<C64> {
    let n = psi.n();
    DVector::from_fn(1 << n, |i, _| {
        let k = (i as u32).count_ones() as usize;
        psi.coeffs()[k] / choose(n, k).sqrt()
    })
}

pub fn projector(v: &DVector<C64>) -> DMatrix<C64> {
    v * v.adjoint()
}

pub fn density(psi: &SymmetricPureState) -> DMatrix<C64> {
    projector(&full_vector(psi))
}

/// `min_α ‖e^{iα} a - b‖` for unit vectors.
pub fn phase_distance(a: &DVector<C64>, b: &DVector<C64>) -> f64 {
    let ov = a.dotc(b);
    let phase = if ov.norm() > 0.0 {
        ov / ov.norm()
    } else {
        c(1.0, 0.0)
    };
    (a * phase - b).norm()
}

/// `(|01⟩ - |10⟩)/√2` with qubit 0 as the most significant bit.
pub fn singlet_vector() -> DVector<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DVector::from_vec(vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)])
}

pub fn dm(rho: &DensityMatrix) -> DMatrix<C64> {
    rho.matrix().clone()
}

/// Every transposition of two qubits leaves `m` unchanged within `tol`.
pub fn permutation_invariant(m: &DMatrix<C64>, n: usize, tol: f64) -> bool {
    let swap = |i: usize, a: usize, b: usize| {
        let (sa, sb) = (n - 1 - a, n - 1 - b);
        let (ba, bb) = ((i >> sa) & 1, (i >> sb) & 1);
        if ba == bb {
            i
        } else {
            i ^ (1 << sa) ^ (1 << sb)
        }
    };
    for a in 0..n {
        for b in a + 1..n {
            for r in 0..m.nrows() {
                for col in 0..m.ncols() {
                    if (m[(swap(r, a, b), swap(col, a, b))] - m[(r, col)]).norm() > tol {
                        return false;
                    }
                }
            }
        }
    }
    true
}

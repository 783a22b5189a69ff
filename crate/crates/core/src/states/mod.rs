//! State representations: symmetric pure states in the Dicke basis, full
//! 2^n state vectors, density matrices, and the local unitary group acting
//! on them.
//!
//! Qubits are indexed from 0. In a computational basis index the qubit 0 bit
//! is the most significant, so the index of `|i_0 i_1 … i_{n-1}⟩` reads as the
//! binary numeral `i_0 i_1 … i_{n-1}`.

mod density;
mod unitary;

use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;

pub use density::DensityMatrix;
pub use unitary::{LocalUnitary, SingleQubitUnitary, C64};
pub(crate) use unitary::{ONE, ZERO};

use crate::error::{Error, Result};
use crate::tolerances::FULL_SPACE_CAP;

/// A single-qubit state vector `α|0⟩ + β|1⟩` (not necessarily normalized).
pub type Qubit = [C64; 2];

/// Binomial coefficient as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `g^{⊗n}|ψ⟩` in the Dicke basis; see [`SymmetricPureState::apply_uniform`].
pub fn apply_diag_symmetric(
    g: &SingleQubitUnitary,
    psi: &SymmetricPureState,
) -> SymmetricPureState {
    psi.apply_uniform(g)
}

/// Computational basis label `i_0 i_1 … i_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    n: usize,
    index: usize,
}

impl BitString {
    pub fn new(n: usize, index: usize) -> Result<Self> {
        if n >= usize::BITS as usize || index >> n != 0 {
            return Err(Error::IndexOutOfRange {
                what: "bit string",
                index,
                limit: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
            });
        }
        Ok(Self { n, index })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, index: 0 }
    }

    pub fn ones(n: usize) -> Self {
        Self {
            n,
            index: (1 << n) - 1,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Bit of qubit `k`.
    pub fn bit(&self, k: usize) -> u8 {
        ((self.index >> (self.n - 1 - k)) & 1) as u8
    }

    pub fn weight(&self) -> usize {
        self.index.count_ones() as usize
    }

    pub fn complement(&self) -> Self {
        Self {
            n: self.n,
            index: !self.index & ((1 << self.n) - 1),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.index == 0 || self.index == (1 << self.n) - 1
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.n {
            write!(f, "{}", self.bit(k))?;
        }
        Ok(())
    }
}

pub(crate) fn check_full_space(n: usize) -> Result<()> {
    if n > FULL_SPACE_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: FULL_SPACE_CAP,
        });
    }
    Ok(())
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Applies `g` to qubit `k` of a full state vector in place.
pub(crate) fn apply_to_qubit(amps: &mut [C64], n: usize, k: usize, g: &SingleQubitUnitary) {
    let stride = 1usize << (n - 1 - k);
    let (g00, g01, g10, g11) = (g.entry(0, 0), g.entry(0, 1), g.entry(1, 0), g.entry(1, 1));
    for base in 0..amps.len() {
        if base & stride != 0 {
            continue;
        }
        let (a0, a1) = (amps[base], amps[base | stride]);
        amps[base] = g00 * a0 + g01 * a1;
        amps[base | stride] = g10 * a0 + g11 * a1;
    }
}

/// Multiplies two polynomials given as ascending coefficient lists.
fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow(base: &[C64], exp: usize) -> Vec<C64> {
    (0..exp).fold(vec![ONE], |acc, _| poly_mul(&acc, base))
}

/// A pure permutation-symmetric state `Σ_k c_k |D_n^(k)⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPureState {
    n: usize,
    coeffs: Vec<C64>,
}

impl SymmetricPureState {
    /// Requires `n + 1` coefficients with unit norm (to `1e-12`).
    pub fn new(n: usize, coeffs: Vec<C64>) -> Result<Self> {
        Self::validate_shape(n, &coeffs)?;
        let ns = norm_sqr(&coeffs);
        if (ns - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm_sqr: ns });
        }
        Ok(Self { n, coeffs })
    }

    /// Rescales the coefficients to unit norm.
    pub fn normalized(n: usize, mut coeffs: Vec<C64>) -> Result<Self> {
        Self::validate_shape(n, &coeffs)?;
        let norm = norm_sqr(&coeffs).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        coeffs.iter_mut().for_each(|c| *c /= norm);
        Ok(Self { n, coeffs })
    }

    fn validate_shape(n: usize, coeffs: &[C64]) -> Result<()> {
        if n < 1 {
            return Err(Error::TooFewQubits { n, min: 1 });
        }
        if coeffs.len() != n + 1 {
            return Err(Error::ArityMismatch {
                expected: n + 1,
                found: coeffs.len(),
            });
        }
        Ok(())
    }

    /// Dicke state with `k` excitations.
    pub fn dicke(n: usize, k: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::TooFewQubits { n, min: 1 });
        }
        if k > n {
            return Err(Error::IndexOutOfRange {
                what: "Dicke excitation",
                index: k,
                limit: n,
            });
        }
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[k] = ONE;
        Ok(Self { n, coeffs })
    }

    /// `a|0…0⟩ + b|1…1⟩`.
    pub fn ghz(n: usize, a: C64, b: C64) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewQubits { n, min: 2 });
        }
        let ns = a.norm_sqr() + b.norm_sqr();
        if (ns - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm_sqr: ns });
        }
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[0] = a;
        coeffs[n] = b;
        Ok(Self { n, coeffs })
    }

    /// The balanced GHZ state `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz_balanced(n: usize) -> Result<Self> {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::ghz(n, h, h)
    }

    /// Normalized symmetrization `α Σ_π ψ_{π(1)} ⊗ … ⊗ ψ_{π(n)}`.
    ///
    /// The symmetric projection of a product state keeps the coefficients of
    /// `Π_j (α_j + β_j t)`, so `c_k` is the `t^k` coefficient divided by
    /// `√C(n,k)`.
    pub fn symmetrize(points: &[Qubit]) -> Result<Self> {
        let n = points.len();
        if n < 1 {
            return Err(Error::TooFewQubits { n, min: 1 });
        }
        let mut poly = vec![ONE];
        for p in points {
            let scale = (p[0].norm_sqr() + p[1].norm_sqr()).sqrt();
            if !(scale > 0.0) {
                return Err(Error::ZeroVector);
            }
            poly = poly_mul(&poly, &[p[0] / scale, p[1] / scale]);
        }
        let coeffs: Vec<C64> = poly
            .into_iter()
            .enumerate()
            .map(|(k, e)| e / binomial(n, k).sqrt())
            .collect();
        if norm_sqr(&coeffs) == 0.0 {
            // a product of nonzero linear factors is never the zero polynomial
            return Err(Error::ZeroVector);
        }
        Self::normalized(n, coeffs)
    }

    /// Haar-random symmetric state (complex Gaussian coefficients).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let coeffs = (0..=n)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(n, coeffs)
    }

    /// Projects a full state onto the symmetric subspace.
    ///
    /// Fails when more than `tol` of the norm lies outside it.
    pub fn from_full(state: &PureState, tol: f64) -> Result<Self> {
        let n = state.n();
        let mut coeffs = vec![ZERO; n + 1];
        for (idx, amp) in state.amplitudes().iter().enumerate() {
            coeffs[idx.count_ones() as usize] += amp;
        }
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c /= binomial(n, k).sqrt();
        }
        let ns = norm_sqr(&coeffs);
        if (1.0 - ns).abs() > tol {
            return Err(Error::Format(format!(
                "state has weight {:e} outside the symmetric subspace",
                1.0 - ns
            )));
        }
        Self::normalized(n, coeffs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Embeds into the 2^n computational basis.
    pub fn expand(&self) -> Result<PureState> {
        check_full_space(self.n)?;
        let scales: Vec<C64> = (0..=self.n)
            .map(|k| self.coeffs[k] / binomial(self.n, k).sqrt())
            .collect();
        let amps = (0..1usize << self.n)
            .map(|idx| scales[idx.count_ones() as usize])
            .collect();
        Ok(PureState { n: self.n, amps })
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        Ok(self.expand()?.to_density())
    }

    /// `g^{⊗n}|ψ⟩` computed on the (n+1)-dimensional symmetric power.
    pub fn apply_uniform(&self, g: &SingleQubitUnitary) -> Self {
        let n = self.n;
        let (g00, g01, g10, g11) = (g.entry(0, 0), g.entry(0, 1), g.entry(1, 0), g.entry(1, 1));
        let zero_image = [g00, g10];
        let one_image = [g01, g11];
        let mut out = vec![ZERO; n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            let e = c * binomial(n, k).sqrt();
            let term = poly_mul(&poly_pow(&zero_image, n - k), &poly_pow(&one_image, k));
            for (j, t) in term.into_iter().enumerate() {
                out[j] += e * t;
            }
        }
        for (k, c) in out.iter_mut().enumerate() {
            *c /= binomial(n, k).sqrt();
        }
        Self { n, coeffs: out }
    }

    /// Global phase fixed so the first coefficient above `tol` in modulus is
    /// real positive.
    pub fn phase_normalized(&self, tol: f64) -> Self {
        let pivot = self
            .coeffs
            .iter()
            .copied()
            .find(|c| c.norm() > tol)
            .unwrap_or(ONE);
        let phase = pivot.conj() / pivot.norm();
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * phase).collect(),
        }
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `min_α ‖ψ - e^{iα} φ‖`; infinite when `n` differs.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        let overlap = other.inner(self);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b * phase).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// A state vector on the full 2^n computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(n: usize, amps: Vec<C64>) -> Result<Self> {
        check_full_space(n)?;
        if amps.len() != 1 << n {
            return Err(Error::ArityMismatch {
                expected: 1 << n,
                found: amps.len(),
            });
        }
        let ns = norm_sqr(&amps);
        if (ns - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm_sqr: ns });
        }
        Ok(Self { n, amps })
    }

    pub fn normalized(n: usize, mut amps: Vec<C64>) -> Result<Self> {
        let norm = norm_sqr(&amps).sqrt();
        if !(norm > 0.0) {
            return Err(Error::ZeroVector);
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Self::new(n, amps)
    }

    /// `(|01⟩ - |10⟩)/√2`.
    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            n: 2,
            amps: vec![ZERO, C64::new(h, 0.0), C64::new(-h, 0.0), ZERO],
        }
    }

    pub fn basis(bits: BitString) -> Result<Self> {
        check_full_space(bits.n())?;
        let mut amps = vec![ZERO; 1 << bits.n()];
        amps[bits.index()] = ONE;
        Ok(Self { n: bits.n(), amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, bits: BitString) -> C64 {
        self.amps[bits.index()]
    }

    pub fn apply_lu(&self, u: &LocalUnitary) -> Result<Self> {
        if u.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: u.n(),
            });
        }
        let mut amps = self.amps.clone();
        for (k, g) in u.factors().iter().enumerate() {
            apply_to_qubit(&mut amps, self.n, k, g);
        }
        Ok(Self { n: self.n, amps })
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure_unchecked(self)
    }
}

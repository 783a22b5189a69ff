//! Local-unitary equivalence of permutation-invariant density matrices.
//!
//! For `n ≥ 3` two such states are LU equivalent exactly when one is
//! `g^{⊗n} ρ (g^{⊗n})†` of the other, so the search runs over a single
//! SU(2) element.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix3, SMatrix, SVector, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rotmatch::{best_rotation, so3_to_su2, su2_to_so3, Rotation};
use crate::search::{euler_lattice, euler_unitary, refine_su2};
use crate::states::{
    BitString, DensityMatrix, LocalUnitary, SingleQubitUnitary, SymmetricPureState, C64, ZERO,
};
use crate::tolerances::Tolerances;
use crate::verify::{check_stabilizes, spectra_report};

/// Slack on the PSD condition `|b|² ≤ a(1-a)`.
const PSD_SLACK: f64 = 1e-10;

/// `τ = a|I⟩⟨I| + b|I⟩⟨Iᶜ| + b̄|Iᶜ⟩⟨I| + (1-a)|Iᶜ⟩⟨Iᶜ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzForm {
    support: BitString,
    a: f64,
    b: C64,
}

impl GhzForm {
    pub fn new(support: BitString, a: f64, b: C64) -> Result<Self> {
        if support.n() == 0 {
            return Err(Error::TooFewQubits { n: 0, min: 1 });
        }
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::InvalidDensity(format!(
                "weight a = {a} outside [0, 1]"
            )));
        }
        if !(b.norm_sqr() <= a * (1.0 - a) + PSD_SLACK) {
            return Err(Error::InvalidDensity(format!(
                "|b|² = {:e} exceeds a(1-a) = {:e}",
                b.norm_sqr(),
                a * (1.0 - a)
            )));
        }
        Ok(Self { support, a, b })
    }

    /// A form on `support` with `a` uniform and `b` uniform in the allowed
    /// disc.
    pub fn random<R: Rng + ?Sized>(support: BitString, rng: &mut R) -> Self {
        let a: f64 = rng.random();
        let r = (a * (1.0 - a)).sqrt() * rng.random::<f64>().sqrt();
        let b = C64::from_polar(r, rng.random_range(0.0..2.0 * PI));
        Self { support, a, b }
    }

    pub fn n(&self) -> usize {
        self.support.n()
    }

    pub fn support(&self) -> BitString {
        self.support
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        let dim = 1usize << self.n();
        let (i, j) = (self.support.index(), self.support.complement().index());
        let mut mat = DMatrix::from_element(dim, dim, ZERO);
        mat[(i, i)] += C64::new(self.a, 0.0);
        mat[(j, j)] += C64::new(1.0 - self.a, 0.0);
        mat[(i, j)] += self.b;
        mat[(j, i)] += self.b.conj();
        DensityMatrix::new(self.n(), mat)
    }

    /// The form after conjugation by `diag(1, e^{iφ})^{⊗n}`: `b` picks up
    /// `e^{iφ(|I| - |Iᶜ|)}`, i.e. `e^{-inφ}` for `I = 0…0` and `e^{inφ}` for
    /// `I = 1…1`.
    pub fn phase_layer(&self, phi: f64) -> Self {
        let w = self.support.weight() as f64;
        let n = self.n() as f64;
        Self {
            b: self.b * C64::from_polar(1.0, phi * (2.0 * w - n)),
            ..*self
        }
    }

    /// The form after `X` on every qubit in `qubits`.
    pub fn flipped(&self, qubits: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut index = self.support.index();
        for &k in qubits {
            if k >= n {
                return Err(Error::IndexOutOfRange {
                    what: "qubit",
                    index: k,
                    limit: n,
                });
            }
            index ^= 1 << (n - 1 - k);
        }
        Ok(Self {
            support: BitString::new(n, index)?,
            ..*self
        })
    }
}

/// One step of the GHZ canonicalization chain.
#[derive(Debug, Clone, PartialEq)]
pub enum CanonicalStep {
    /// `X` on the listed qubits; all qubits is the global X layer.
    Flip(Vec<usize>),
    /// `diag(1, e^{iφ})` on every qubit.
    Phase(f64),
}

#[derive(Debug, Clone)]
pub struct GhzCanonicalization {
    /// Support `0…0`, `a ≥ 1/2` and `b ≥ 0`.
    pub form: GhzForm,
    pub steps: Vec<CanonicalStep>,
    /// Product of the steps: `transform · τ · transform† = form`.
    pub transform: LocalUnitary,
    /// Frobenius distance between the transformed input and `form`.
    pub residual: f64,
}

fn step_unitary(step: &CanonicalStep, n: usize) -> LocalUnitary {
    match step {
        CanonicalStep::Flip(qubits) => {
            let mut f = vec![SingleQubitUnitary::identity(); n];
            for &k in qubits {
                f[k] = SingleQubitUnitary::pauli_x();
            }
            LocalUnitary::new(f).expect("n ≥ 1")
        }
        CanonicalStep::Phase(phi) => LocalUnitary::uniform(SingleQubitUnitary::phase_gate(*phi), n),
    }
}

/// Brings a state supported on `{|I⟩, |Iᶜ⟩}` to `I = 0…0`, `a ≥ 1/2`, real
/// nonnegative `b`.
///
/// `X` gates move the support to `0…0` (for `I = 1…1` this is the global X
/// layer), another X layer swaps `a ↔ 1-a` when `a < 1/2`, and the phase
/// layer with `φ = arg(b)/n` makes `b` real.
pub fn canonical_ghz_form(tau: &DensityMatrix, tol: f64) -> Result<GhzCanonicalization> {
    let n = tau.n();
    let dim = tau.dim();
    let top = (0..dim)
        .max_by(|&x, &y| {
            tau.entry(x, x)
                .re
                .total_cmp(&tau.entry(y, y).re)
                .then(y.cmp(&x))
        })
        .expect("dim ≥ 2");
    let support = BitString::new(n, top)?;
    let other = support.complement().index();
    let inside = |r: usize| r == top || r == other;
    let mut offending = Vec::new();
    for r in 0..dim {
        for c in 0..dim {
            if !(inside(r) && inside(c)) && tau.entry(r, c).norm() > tol {
                offending.push((r, c));
            }
        }
    }
    if !offending.is_empty() {
        return Err(Error::NotGhzForm(offending));
    }

    let mut form = GhzForm::new(support, tau.entry(top, top).re, tau.entry(top, other))?;
    let mut steps = Vec::new();
    let ones: Vec<usize> = (0..n).filter(|&k| support.bit(k) == 1).collect();
    if !ones.is_empty() {
        form = form.flipped(&ones)?;
        steps.push(CanonicalStep::Flip(ones));
    }
    if form.a < 0.5 {
        // the X layer exchanges the roles of |0…0⟩ and |1…1⟩
        form = GhzForm {
            support: form.support,
            a: 1.0 - form.a,
            b: form.b.conj(),
        };
        steps.push(CanonicalStep::Flip((0..n).collect()));
    }
    if form.b.norm() > 0.0 {
        let phi = form.b.arg() / n as f64;
        form = form.phase_layer(phi);
        form.b = C64::new(form.b.norm(), 0.0);
        steps.push(CanonicalStep::Phase(phi));
    }

    let mut transform = LocalUnitary::identity(n);
    for s in &steps {
        transform = step_unitary(s, n).compose(&transform)?;
    }
    let residual = tau
        .apply_lu(&transform)?
        .frobenius_distance(&form.to_density()?);
    Ok(GhzCanonicalization {
        form,
        steps,
        transform,
        residual,
    })
}

/// Outcome of [`two_qubit_support_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SupportCheck {
    /// Whether `d^{(k)} (d†)^{(ℓ)}` stabilizes τ within tolerance; when it
    /// does not, the support lemma does not apply.
    pub stabilized: bool,
    pub residual: f64,
    /// First entry `(I, J)` with `τ_IJ ≠ 0` and `J ∉ {I, Iᶜ}`.
    pub violation: Option<(BitString, BitString)>,
}

impl SupportCheck {
    pub fn holds(&self) -> bool {
        self.stabilized && self.violation.is_none()
    }
}

/// Checks that a state stabilized by `d` on qubit `k` and `d†` on qubit `ℓ`,
/// `d = diag(e^{it}, e^{-it})`, has coherences only between complementary
/// strings.
pub fn two_qubit_support_check(
    tau: &DensityMatrix,
    k: usize,
    l: usize,
    t: f64,
    tol: f64,
) -> Result<SupportCheck> {
    let n = tau.n();
    for q in [k, l] {
        if q >= n {
            return Err(Error::IndexOutOfRange {
                what: "qubit",
                index: q,
                limit: n,
            });
        }
    }
    if k == l {
        return Err(Error::Unsupported("the two qubits must differ".into()));
    }
    let mut f = vec![SingleQubitUnitary::identity(); n];
    f[k] = SingleQubitUnitary::z_rotation(-2.0 * t);
    f[l] = SingleQubitUnitary::z_rotation(2.0 * t);
    let w = check_stabilizes(&LocalUnitary::new(f)?, tau, tol)?;
    if !w.accepted {
        return Ok(SupportCheck {
            stabilized: false,
            residual: w.residual,
            violation: None,
        });
    }
    let mask = tau.dim() - 1;
    let mut violation = None;
    'rows: for r in 0..tau.dim() {
        for c in 0..tau.dim() {
            if c != r && c != !r & mask && tau.entry(r, c).norm() > tol {
                violation = Some((BitString::new(n, r)?, BitString::new(n, c)?));
                break 'rows;
            }
        }
    }
    Ok(SupportCheck {
        stabilized: true,
        residual: w.residual,
        violation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceSearchConfig {
    /// Euler-lattice points per angle.
    pub grid: usize,
    /// Sweep cap per local refinement.
    pub max_sweeps: usize,
    /// Acceptance threshold on `D(g)`; `None` means `1e-7 · 2^{n/2}`.
    pub threshold: Option<f64>,
    /// Random starting points refined besides the best lattice points.
    pub restarts: usize,
    /// Best lattice points refined.
    pub lattice_starts: usize,
    pub seed: u64,
    /// Tolerance of the spectral prefilter.
    pub spectrum_tol: f64,
}

impl Default for EquivalenceSearchConfig {
    fn default() -> Self {
        Self {
            grid: 12,
            max_sweeps: 300,
            threshold: None,
            restarts: 8,
            lattice_starts: 4,
            seed: 0x5eed,
            spectrum_tol: 1e-8,
        }
    }
}

impl EquivalenceSearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid < 4 {
            return Err(Error::Unsupported(format!(
                "lattice needs at least 4 points per angle, got {}",
                self.grid
            )));
        }
        if let Some(t) = self.threshold {
            if !(t > 0.0) {
                return Err(Error::Unsupported(format!(
                    "threshold must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }

    pub fn threshold_for(&self, n: usize) -> f64 {
        self.threshold.unwrap_or(1e-7 * 2f64.powf(n as f64 / 2.0))
    }
}

#[derive(Debug, Clone)]
pub enum MixedEquivalence {
    /// `g^{⊗n} ρ (g^{⊗n})† = ρ'` up to `distance`.
    Equivalent {
        g: SingleQubitUnitary,
        distance: f64,
    },
    /// Rejected by an LU invariant.
    NotEquivalent { reason: String },
    /// Invariants agree but the search did not reach the threshold.
    Undecided {
        best: SingleQubitUnitary,
        distance: f64,
    },
}

impl MixedEquivalence {
    pub fn unitary(&self) -> Option<&SingleQubitUnitary> {
        match self {
            Self::Equivalent { g, .. } => Some(g),
            _ => None,
        }
    }
}

/// Refinement target; well below any useful threshold.
const REFINE_FLOOR: f64 = 1e-12;

/// Minimizes `D(g) = ‖g^{⊗n} ρ g^{⊗n}† - ρ'‖_F` over SU(2).
pub fn lu_equivalent_mixed(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    cfg: &EquivalenceSearchConfig,
) -> Result<MixedEquivalence> {
    cfg.validate()?;
    let n = rho.n();
    if rho_prime.n() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: rho_prime.n(),
        });
    }
    if n < 3 {
        return Err(Error::Unsupported(format!(
            "single-g reduction needs at least 3 qubits, got {n}; see two_factor_search"
        )));
    }
    let tol = Tolerances::default().hermiticity;
    rho.require_permutation_invariant(tol)?;
    rho_prime.require_permutation_invariant(tol)?;
    if let Some(reason) =
        spectra_report(rho)?.mismatch(&spectra_report(rho_prime)?, cfg.spectrum_tol)
    {
        return Ok(MixedEquivalence::NotEquivalent { reason });
    }

    let threshold = cfg.threshold_for(n);
    let objective = |g: &SingleQubitUnitary| rho.conjugate_uniform(g).frobenius_distance(rho_prime);
    let mut lattice: Vec<([f64; 3], f64)> = euler_lattice(cfg.grid)
        .into_iter()
        .map(|a| (a, objective(&euler_unitary(&a))))
        .collect();
    lattice.sort_by(|x, y| {
        x.1.total_cmp(&y.1).then_with(|| {
            x.0.iter()
                .zip(&y.0)
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
    });
    let mut starts: Vec<SingleQubitUnitary> = lattice
        .iter()
        .take(cfg.lattice_starts.max(1))
        .map(|(a, _)| euler_unitary(a))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    starts.extend((0..cfg.restarts).map(|_| SingleQubitUnitary::random(&mut rng)));

    let radius = PI / cfg.grid as f64;
    let mut best = (SingleQubitUnitary::identity(), f64::INFINITY);
    for start in starts {
        let (g, d) = refine_su2(&objective, start, radius, REFINE_FLOOR, cfg.max_sweeps);
        if d < best.1 {
            best = (g, d);
        }
        if best.1 <= REFINE_FLOOR {
            break;
        }
    }

    let (g, _) = best;
    let g = g.phase_normalized();
    let distance = objective(&g);
    if distance <= threshold {
        assert!(
            objective(&g) <= threshold,
            "returned unitary fails the threshold"
        );
        Ok(MixedEquivalence::Equivalent { g, distance })
    } else {
        Ok(MixedEquivalence::Undecided { best: g, distance })
    }
}

/// Result of the two-qubit fallback, which searches `(g_1, g_2)` freely.
#[derive(Debug, Clone)]
pub struct TwoFactorResult {
    pub unitary: LocalUnitary,
    pub distance: f64,
    /// `distance ≤ threshold`; a miss is not a proof of inequivalence.
    pub equivalent: bool,
}

/// Pauli components `(r, s, T)` of a two-qubit state:
/// `ρ = ¼(1 + r·σ⊗1 + 1⊗s·σ + Σ T_ij σ_i⊗σ_j)`.
fn pauli_components(rho: &DensityMatrix) -> (Vector3<f64>, Vector3<f64>, Matrix3<f64>) {
    let paulis = [
        SingleQubitUnitary::identity(),
        SingleQubitUnitary::pauli_x(),
        SingleQubitUnitary::pauli_y(),
        SingleQubitUnitary::pauli_z(),
    ];
    let m = rho.matrix();
    let expect = |a: usize, b: usize| {
        let mut acc = ZERO;
        for r in 0..4 {
            for c in 0..4 {
                // tr(ρ P) = Σ ρ_rc P_cr with P = σ_a ⊗ σ_b
                let p = paulis[a].entry(c >> 1, r >> 1) * paulis[b].entry(c & 1, r & 1);
                acc += m[(r, c)] * p;
            }
        }
        acc.re
    };
    let r = Vector3::from_fn(|i, _| expect(i + 1, 0));
    let s = Vector3::from_fn(|i, _| expect(0, i + 1));
    let t = Matrix3::from_fn(|i, j| expect(i + 1, j + 1));
    (r, s, t)
}

fn rotate_by(r: &Rotation, w: &[f64]) -> Rotation {
    let v = Vector3::new(w[0], w[1], w[2]);
    match Rotation::from_axis_angle(v, v.norm()) {
        Ok(q) => q * *r,
        Err(_) => *r,
    }
}

type PairResidual = SVector<f64, 15>;

/// Levenberg-Marquardt on `residual(exp(ω_1)·a, exp(ω_2)·b)` with a central
/// difference Jacobian.
fn polish_pair(
    residual: &impl Fn(&Rotation, &Rotation) -> PairResidual,
    mut a: Rotation,
    mut b: Rotation,
) -> (Rotation, Rotation, f64) {
    let h = 1e-7;
    let mut e = residual(&a, &b);
    let mut c = e.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..60 {
        if c <= 1e-28 {
            break;
        }
        let mut jac = SMatrix::<f64, 15, 6>::zeros();
        for i in 0..6 {
            let mut w = [0.0; 6];
            w[i] = h;
            let up = residual(&rotate_by(&a, &w[..3]), &rotate_by(&b, &w[3..]));
            w[i] = -h;
            let down = residual(&rotate_by(&a, &w[..3]), &rotate_by(&b, &w[3..]));
            jac.set_column(i, &((up - down) / (2.0 * h)));
        }
        let jtj = jac.transpose() * jac;
        let rhs = -(jac.transpose() * e);
        let mut improved = false;
        while lambda < 1e12 {
            let m = jtj + SMatrix::<f64, 6, 6>::identity() * lambda;
            let Some(step) = m.lu().solve(&rhs) else {
                break;
            };
            let (na, nb) = (
                rotate_by(&a, &step.as_slice()[..3]),
                rotate_by(&b, &step.as_slice()[3..]),
            );
            let ne = residual(&na, &nb);
            if ne.norm_squared() < c {
                (a, b, e) = (na, nb, ne);
                c = e.norm_squared();
                lambda = (lambda * 0.1).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (a, b, c)
}

/// Brute-force search over `g_1 ⊗ g_2` for two-qubit states, where the
/// single-g reduction does not hold.
///
/// In the Pauli picture `g_1 ⊗ g_2` acts as `r → R_1 r`, `s → R_2 s`,
/// `T → R_1 T R_2ᵀ`, and with one rotation fixed the other is a Procrustes
/// problem. The search alternates the two closed-form updates from every
/// point of an Euler lattice for `R_1` and from random restarts.
pub fn two_factor_search(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    cfg: &EquivalenceSearchConfig,
) -> Result<TwoFactorResult> {
    cfg.validate()?;
    if rho.n() != 2 || rho_prime.n() != 2 {
        return Err(Error::Unsupported(
            "the two-factor fallback is for two-qubit states".into(),
        ));
    }
    let threshold = cfg.threshold_for(2);
    let (r, s, t) = pauli_components(rho);
    let (r2, s2, t2) = pauli_components(rho_prime);
    let residual = |a: &Rotation, b: &Rotation| {
        let (a, b) = (a.matrix(), b.matrix());
        let mut e = PairResidual::zeros();
        e.fixed_rows_mut::<3>(0).copy_from(&(a * r - r2));
        e.fixed_rows_mut::<3>(3).copy_from(&(b * s - s2));
        e.fixed_rows_mut::<9>(6)
            .copy_from_slice((a * t * b.transpose() - t2).as_slice());
        e
    };
    let cost = |a: &Rotation, b: &Rotation| residual(a, b).norm_squared();
    let fit_second =
        |a: &Rotation| best_rotation(&(s2 * s.transpose() + t2.transpose() * a.matrix() * t));
    let fit_first =
        |b: &Rotation| best_rotation(&(r2 * r.transpose() + t2 * b.matrix() * t.transpose()));

    let mut starts: Vec<Rotation> = euler_lattice(cfg.grid)
        .iter()
        .map(|a| su2_to_so3(&euler_unitary(a)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    starts.extend((0..cfg.restarts).map(|_| su2_to_so3(&SingleQubitUnitary::random(&mut rng))));

    let mut best: Option<(f64, Rotation, Rotation)> = None;
    for mut a in starts {
        let mut b = fit_second(&a).unwrap_or_else(Rotation::identity);
        let mut c = cost(&a, &b);
        for _ in 0..cfg.max_sweeps {
            a = fit_first(&b).unwrap_or(a);
            b = fit_second(&a).unwrap_or(b);
            let next = cost(&a, &b);
            let done = c - next <= 1e-15 * c.max(1e-300);
            c = next;
            if done {
                break;
            }
        }
        (a, b, c) = polish_pair(&residual, a, b);
        if best.as_ref().is_none_or(|x| c < x.0) {
            best = Some((c, a, b));
        }
    }
    let (_, a, b) = best.expect("lattice is nonempty");
    let unitary = LocalUnitary::new(vec![so3_to_su2(&a), so3_to_su2(&b)])?;
    let distance = rho.apply_lu(&unitary)?.frobenius_distance(rho_prime);
    Ok(TwoFactorResult {
        unitary,
        distance,
        equivalent: distance <= threshold,
    })
}

/// `Σ p_i |ψ_i⟩⟨ψ_i|` over `terms` random symmetric pure states with random
/// weights; permutation invariant by construction.
pub fn random_symmetric_mixture<R: Rng + ?Sized>(
    n: usize,
    terms: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let parts = (0..terms.max(1))
        .map(|_| {
            Ok((
                rng.random::<f64>() + 0.05,
                SymmetricPureState::random(n, rng)?.expand()?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    DensityMatrix::mixture(&parts)
}

//! Brute-force checks on full `2^n × 2^n` density matrices.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::classify::{ClassificationResult, StabilizerClass};
use crate::error::{Error, Result};
use crate::search::{euler_lattice, euler_unitary, refine_su2};
use crate::states::{DensityMatrix, LocalUnitary, SingleQubitUnitary, C64};
use crate::tolerances::DENSE_ORACLE_CAP;

/// A local unitary with its stabilizer residual `‖UρU† - ρ‖_F`.
#[derive(Debug, Clone)]
pub struct StabilizerWitness {
    pub unitary: LocalUnitary,
    pub residual: f64,
    pub accepted: bool,
}

fn check_cap(n: usize) -> Result<()> {
    if n > DENSE_ORACLE_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: DENSE_ORACLE_CAP,
        });
    }
    Ok(())
}

/// Residual of `u` on `rho` by dense conjugation; accepted iff `≤ tol`.
pub fn check_stabilizes(
    u: &LocalUnitary,
    rho: &DensityMatrix,
    tol: f64,
) -> Result<StabilizerWitness> {
    check_cap(rho.n())?;
    if u.n() != rho.n() {
        return Err(Error::ArityMismatch {
            expected: rho.n(),
            found: u.n(),
        });
    }
    let residual = rho.apply_lu(u)?.frobenius_distance(rho);
    Ok(StabilizerWitness {
        unitary: u.clone(),
        residual,
        accepted: residual <= tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizerSearchConfig {
    /// Euler-lattice points per angle for identical tuples `g^{⊗n}`.
    pub euler_grid: usize,
    /// Phase values per qubit, `2πj/phase_grid`, for diagonal tuples.
    pub phase_grid: usize,
    /// Residual under which a tuple is a stabilizer.
    pub tol: f64,
    /// Lattice minima above this residual are not refined.
    pub screen: f64,
}

impl Default for StabilizerSearchConfig {
    fn default() -> Self {
        Self {
            euler_grid: 12,
            phase_grid: 8,
            tol: 1e-9,
            screen: f64::INFINITY,
        }
    }
}

/// Largest diagonal-phase lattice enumerated.
const PHASE_LATTICE_CAP: usize = 1 << 20;

/// Stabilizer elements of `rho` found by two searches: identical tuples
/// `g^{⊗n}` (Euler lattice, then descent from every lattice local minimum)
/// and per-qubit phase tuples `(e^{-it_k Z/2})_k`, with or without a global
/// X layer, on an exact lattice. Witnesses are merged up to per-factor phases
/// and sorted.
pub fn sample_stabilizer(
    rho: &DensityMatrix,
    cfg: &StabilizerSearchConfig,
) -> Result<Vec<StabilizerWitness>> {
    check_cap(rho.n())?;
    rho.require_permutation_invariant(1e-10)?;
    // lattice tuples are pairwise distinct; an identical tuple can only
    // repeat another identical tuple or a uniform lattice point
    let lattice = phase_tuple_search(rho, cfg)?;
    let p = cfg.phase_grid.max(1);
    let uniform: HashSet<(bool, usize)> = lattice
        .iter()
        .filter(|(_, t, _)| t.iter().all(|&j| j == t[0]))
        .map(|(flip, t, _)| (*flip, t[0]))
        .collect();
    let mut found: Vec<StabilizerWitness> = Vec::new();
    for w in identical_tuple_search(rho, cfg)? {
        if !w.accepted
            || found
                .iter()
                .any(|f| f.unitary.projectively_equal(&w.unitary, 1e-6))
        {
            continue;
        }
        let g = &w.unitary.factors()[0];
        let on_lattice = (0..p).any(|j| {
            let z = SingleQubitUnitary::z_rotation(std::f64::consts::TAU * j as f64 / p as f64);
            (uniform.contains(&(false, j)) && g.projectively_equal(&z, 1e-6))
                || (uniform.contains(&(true, j))
                    && g.projectively_equal(&(z * SingleQubitUnitary::pauli_x()), 1e-6))
        });
        if !on_lattice {
            found.push(w);
        }
    }
    found.extend(lattice.into_iter().map(|(_, _, w)| w));
    found.sort_by(|a, b| {
        witness_key(&a.unitary)
            .partial_cmp(&witness_key(&b.unitary))
            .unwrap_or(Ordering::Equal)
    });
    Ok(found)
}

fn witness_key(u: &LocalUnitary) -> Vec<f64> {
    u.phase_normalized()
        .factors()
        .iter()
        .flat_map(|f| {
            f.matrix()
                .iter()
                .flat_map(|c| [c.re, c.im])
                .collect::<Vec<_>>()
        })
        .collect()
}

fn identical_tuple_search(
    rho: &DensityMatrix,
    cfg: &StabilizerSearchConfig,
) -> Result<Vec<StabilizerWitness>> {
    let n = rho.n();
    let m = cfg.euler_grid.max(4);
    let lattice = euler_lattice(m);
    let f = |g: &SingleQubitUnitary| rho.conjugate_uniform(g).frobenius_distance(rho);
    let values: Vec<f64> = lattice.iter().map(|a| f(&euler_unitary(a))).collect();
    let idx = |i: usize, j: usize, k: usize| (i % m) * m * m + (j % m) * m + (k % m);
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let v = values[idx(i, j, k)];
                if v > cfg.screen {
                    continue;
                }
                // local minimum over the periodic neighbourhood
                let is_min = (0..27).all(|s| {
                    let (di, dj, dk) = (s / 9, (s / 3) % 3, s % 3);
                    values[idx(i + di + m - 1, j + dj + m - 1, k + dk + m - 1)] >= v
                });
                if !is_min {
                    continue;
                }
                let start = euler_unitary(&lattice[idx(i, j, k)]);
                let (g, residual) = refine_su2(
                    &f,
                    start,
                    std::f64::consts::PI / m as f64,
                    cfg.tol * 1e-3,
                    300,
                );
                out.push(StabilizerWitness {
                    unitary: LocalUnitary::uniform(g, n),
                    residual,
                    accepted: residual <= cfg.tol,
                });
            }
        }
    }
    Ok(out)
}

/// Accepted lattice tuples with their X flag and phase indices.
fn phase_tuple_search(
    rho: &DensityMatrix,
    cfg: &StabilizerSearchConfig,
) -> Result<Vec<(bool, Vec<usize>, StabilizerWitness)>> {
    let n = rho.n();
    let p = cfg.phase_grid.max(1);
    let total = p
        .checked_pow(n as u32)
        .filter(|&t| t <= PHASE_LATTICE_CAP)
        .ok_or_else(|| {
            Error::Unsupported(format!(
                "phase lattice {p}^{n} exceeds {PHASE_LATTICE_CAP} points"
            ))
        })?;
    let dim = rho.dim();
    let flipped = rho.conjugate_uniform(&SingleQubitUnitary::pauli_x());
    let mut out = Vec::new();
    for (flip, base) in [(false, rho), (true, &flipped)] {
        for code in 0..total {
            let digits: Vec<usize> = (0..n).map(|q| (code / p.pow(q as u32)) % p).collect();
            let t: Vec<f64> = digits
                .iter()
                .map(|&j| std::f64::consts::TAU * j as f64 / p as f64)
                .collect();
            // (e^{-it_k Z/2})_k multiplies entry (I, J) by e^{i Σ_k t_k (I_k - J_k)}
            let phase_of = |index: usize| -> f64 {
                (0..n)
                    .filter(|&q| (index >> (n - 1 - q)) & 1 == 1)
                    .map(|q| t[q])
                    .sum()
            };
            let phases: Vec<C64> = (0..dim)
                .map(|i| C64::from_polar(1.0, phase_of(i)))
                .collect();
            let bound = cfg.tol * cfg.tol;
            let mut sq = 0.0;
            'rows: for r in 0..dim {
                for c in 0..dim {
                    let moved = base.entry(r, c) * phases[r] * phases[c].conj();
                    sq += (moved - rho.entry(r, c)).norm_sqr();
                }
                if sq > bound {
                    break 'rows;
                }
            }
            let residual = sq.sqrt();
            if sq <= bound {
                let factors = t
                    .iter()
                    .map(|&tk| {
                        let z = SingleQubitUnitary::z_rotation(tk);
                        if flip {
                            z * SingleQubitUnitary::pauli_x()
                        } else {
                            z
                        }
                    })
                    .collect();
                let w = StabilizerWitness {
                    unitary: LocalUnitary::new(factors)?,
                    residual,
                    accepted: true,
                };
                out.push((flip, digits, w));
            }
        }
    }
    Ok(out)
}

/// Witnesses found on the canonical representative of a classification,
/// split by membership in the classified stabilizer group.
#[derive(Debug, Clone)]
pub struct AnomalyReport {
    pub witnesses: Vec<StabilizerWitness>,
    /// Witnesses outside the classified group.
    pub anomalies: Vec<StabilizerWitness>,
}

/// Membership tolerance for searched witnesses.
pub const MEMBERSHIP_TOL: f64 = 1e-5;

/// Searches for stabilizer elements of `result.canonical` and reports any
/// that the class's stabilizer family does not contain.
pub fn stabilizer_anomalies(
    result: &ClassificationResult,
    cfg: &StabilizerSearchConfig,
) -> Result<AnomalyReport> {
    let rho = result.canonical.to_density()?;
    let witnesses = sample_stabilizer(&rho, cfg)?;
    let family = result.family()?;
    // the singlet family acts on |01⟩ - |10⟩, which (Z, 1) maps to the
    // canonical |D_2^(1)⟩
    let frame = match result.class {
        StabilizerClass::Singlet => Some(LocalUnitary::new(vec![
            SingleQubitUnitary::pauli_z(),
            SingleQubitUnitary::identity(),
        ])?),
        _ => None,
    };
    let mut anomalies = Vec::new();
    for w in &witnesses {
        let u = match &frame {
            Some(z) => z.compose(&w.unitary)?.compose(z)?,
            None => w.unitary.clone(),
        };
        if !family.contains(&u, MEMBERSHIP_TOL) {
            anomalies.push(w.clone());
        }
    }
    Ok(AnomalyReport {
        witnesses,
        anomalies,
    })
}

/// Sorted spectrum and one-qubit reduced spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectraReport {
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues of each one-qubit reduced state, descending.
    pub reduced: Vec<[f64; 2]>,
}

impl SpectraReport {
    /// A description of the first disagreement beyond `tol`, if any.
    pub fn mismatch(&self, other: &Self, tol: f64) -> Option<String> {
        if self.eigenvalues.len() != other.eigenvalues.len() {
            return Some("dimensions differ".into());
        }
        let spec = self
            .eigenvalues
            .iter()
            .zip(&other.eigenvalues)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if spec > tol {
            return Some(format!("global spectra differ by {spec:.3e}"));
        }
        for (k, (a, b)) in self.reduced.iter().zip(&other.reduced).enumerate() {
            let d = (a[0] - b[0]).abs().max((a[1] - b[1]).abs());
            if d > tol {
                return Some(format!("reduced spectra of qubit {k} differ by {d:.3e}"));
            }
        }
        None
    }
}

pub fn spectra_report(rho: &DensityMatrix) -> Result<SpectraReport> {
    let reduced = (0..rho.n())
        .map(|k| {
            let m = rho.reduced_1qubit(k)?;
            let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
            let off = m[(0, 1)].norm();
            let mean = (a + d) / 2.0;
            let half = ((a - d) / 2.0).hypot(off);
            Ok([mean + half, mean - half])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectraReport {
        eigenvalues: rho.eigenvalues(),
        reduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify_state, StabilizerFamily};
    use crate::majorana::{points_to_state, BlochPoint, MajoranaConfiguration};
    use crate::states::{PureState, SymmetricPureState};
    use crate::tolerances::Tolerances;
    use std::f64::consts::PI;

    fn ghz3() -> DensityMatrix {
        SymmetricPureState::ghz_balanced(3)
            .unwrap()
            .to_density()
            .unwrap()
    }

    fn tetrahedron_state() -> SymmetricPureState {
        let pts: Vec<BlochPoint> = [
            (1.0, 1.0, 1.0),
            (1.0, -1.0, -1.0),
            (-1.0, 1.0, -1.0),
            (-1.0, -1.0, 1.0),
        ]
        .iter()
        .map(|&(x, y, z)| BlochPoint::new(x, y, z).unwrap())
        .collect();
        points_to_state(&MajoranaConfiguration::from_points(&pts, 1e-6).unwrap()).unwrap()
    }

    #[test]
    fn check_examples() {
        let rho = ghz3();
        assert_eq!(
            check_stabilizes(&LocalUnitary::identity(3), &rho, 0.0)
                .unwrap()
                .residual,
            0.0
        );
        let fam = StabilizerFamily::new(&StabilizerClass::GhzBalanced, 3).unwrap();
        let u = fam.element(&[PI / 3.0, PI / 5.0], true).unwrap();
        assert!(check_stabilizes(&u, &rho, 1e-10).unwrap().accepted);
        let d31 = SymmetricPureState::dicke(3, 1)
            .unwrap()
            .to_density()
            .unwrap();
        let g = SingleQubitUnitary::z_rotation(-PI / 4.0);
        assert!(
            check_stabilizes(&LocalUnitary::uniform(g, 3), &d31, 1e-10)
                .unwrap()
                .accepted
        );
        assert!(check_stabilizes(&LocalUnitary::identity(2), &rho, 1e-10).is_err());
    }

    #[test]
    fn spectra_examples() {
        let r = spectra_report(&ghz3()).unwrap();
        assert!(
            (r.eigenvalues[0] - 1.0).abs() < 1e-12
                && r.eigenvalues[1..].iter().all(|x| x.abs() < 1e-12)
        );
        assert!(r.reduced.iter().all(|s| (s[0] - 0.5).abs() < 1e-12));
        // a = 1/2, b = 1/4 on |000⟩, |111⟩
        let mut m = nalgebra::DMatrix::from_element(8, 8, C64::new(0.0, 0.0));
        m[(0, 0)] = C64::new(0.5, 0.0);
        m[(7, 7)] = C64::new(0.5, 0.0);
        m[(0, 7)] = C64::new(0.25, 0.0);
        m[(7, 0)] = C64::new(0.25, 0.0);
        let r = spectra_report(&DensityMatrix::new(3, m).unwrap()).unwrap();
        assert!((r.eigenvalues[0] - 0.75).abs() < 1e-12 && (r.eigenvalues[1] - 0.25).abs() < 1e-12);
        assert!(r.mismatch(&r, 1e-12).is_none());
        let s = spectra_report(&ghz3()).unwrap();
        assert!(r.mismatch(&s, 1e-8).is_some());
    }

    #[test]
    fn ghz3_search_has_no_anomalies() {
        let result = classify_state(
            &SymmetricPureState::ghz_balanced(3).unwrap(),
            &Tolerances::default(),
        )
        .unwrap();
        let report = stabilizer_anomalies(&result, &StabilizerSearchConfig::default()).unwrap();
        assert!(report.anomalies.is_empty(), "{:?}", report.anomalies);
        // diagonal tuples with Σt ≡ 0 and the flipped ones
        let diag = report
            .witnesses
            .iter()
            .filter(|w| w.unitary.factors().iter().all(|f| f.is_diagonal(1e-9)))
            .count();
        let anti = report
            .witnesses
            .iter()
            .filter(|w| w.unitary.factors().iter().all(|f| f.is_antidiagonal(1e-9)))
            .count();
        assert!(diag >= 64 && anti >= 64, "{diag} {anti}");
    }

    #[test]
    fn tetrahedron_search_finds_the_twelve_rotations() {
        let result = classify_state(&tetrahedron_state(), &Tolerances::default()).unwrap();
        let report = stabilizer_anomalies(&result, &StabilizerSearchConfig::default()).unwrap();
        assert!(report.anomalies.is_empty());
        let identical = report
            .witnesses
            .iter()
            .filter(|w| {
                w.unitary
                    .factors()
                    .iter()
                    .all(|f| f.projectively_equal(w.unitary.factor(0), 1e-9))
            })
            .count();
        assert_eq!(identical, 12);
    }

    #[test]
    fn singlet_pairs() {
        let rho = PureState::singlet().to_density();
        assert!(rho.is_permutation_invariant(1e-12));
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(101);
        for _ in 0..20 {
            let g = SingleQubitUnitary::random(&mut rng);
            assert!(
                check_stabilizes(&LocalUnitary::uniform(g, 2), &rho, 1e-10)
                    .unwrap()
                    .accepted
            );
        }
    }
}

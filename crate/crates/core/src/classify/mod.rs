//! LU stabilizer classes of symmetric pure states and pure-state LU
//! equivalence.
//!
//! A state is classified from its Majorana configuration:
//!
//! 1. one cluster: LU equivalent to `|0…0⟩`, class `i`;
//! 2. two antipodal clusters of sizes `k` and `n-k`: `|D_n^(k)⟩`, class `iva`
//!    when `k = n/2` and `ivb` otherwise (for `n = 2` the singlet class `iii`);
//! 3. a rotation sends the state to `a|0…0⟩ + b|1…1⟩`: class `iia` when
//!    `a = b`, otherwise `iib` with `a = cos(πt/4)`, `b = sin(πt/4)`;
//! 4. anything else has a finite stabilizer, reported as the rotation group of
//!    the configuration.

mod family;

use nalgebra::Vector3;

pub use family::StabilizerFamily;

use crate::error::{Error, Result};
use crate::majorana::{majorana_points, MajoranaConfiguration};
use crate::rotmatch::{
    match_all, minimal_rotation, so3_to_su2, symmetry_group, PointGroup, Rotation,
};
use crate::states::{LocalUnitary, SingleQubitUnitary, SymmetricPureState, C64};
use crate::tolerances::Tolerances;

/// Distances within this factor above a threshold count as too close to call.
pub const AMBIGUITY_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub enum StabilizerClass {
    /// `i`: product states, stabilizer `U(1)^n`.
    ProductU1n,
    /// `iia`: the GHZ state, stabilizer `U(1)^{n-1} ⋊ Z_2`.
    GhzBalanced,
    /// `iib`: `cos(πt/4)|0…0⟩ + sin(πt/4)|1…1⟩` with `0 < t < 1`, stabilizer
    /// `U(1)^{n-1}`.
    GhzGeneral { t: f64 },
    /// `iii`: the two-qubit singlet, stabilizer `PU(2)`.
    Singlet,
    /// `iva`: `|D_n^(n/2)⟩`, stabilizer `U(1) ⋊ Z_2`.
    DickeBalanced,
    /// `ivb`: `|D_n^(k)⟩` with `1 ≤ k < n/2`, stabilizer `U(1)`.
    DickeGeneral { k: usize },
    /// Finite stabilizer: the rotation group of the configuration.
    Finite(PointGroup),
}

impl StabilizerClass {
    /// `i`, `iia`, `iib`, `iii`, `iva`, `ivb` or `finite:<group>`.
    pub fn label(&self) -> String {
        match self {
            StabilizerClass::ProductU1n => "i".into(),
            StabilizerClass::GhzBalanced => "iia".into(),
            StabilizerClass::GhzGeneral { .. } => "iib".into(),
            StabilizerClass::Singlet => "iii".into(),
            StabilizerClass::DickeBalanced => "iva".into(),
            StabilizerClass::DickeGeneral { .. } => "ivb".into(),
            StabilizerClass::Finite(g) => format!("finite:{}", g.kind().name()),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, StabilizerClass::Finite(_))
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationResult {
    pub class: StabilizerClass,
    /// Representative of the class; for `iii` this is `|D_2^(1)⟩`.
    pub canonical: SymmetricPureState,
    /// `g` with `g^{⊗n} ψ ≡ canonical`.
    pub transform: SingleQubitUnitary,
    /// Generators of the stabilizer of `canonical`.
    pub generators: Vec<LocalUnitary>,
    /// `‖g^{⊗n} ψ - e^{iα} canonical‖` at the best phase.
    pub residual: f64,
}

impl ClassificationResult {
    /// The stabilizer family of `canonical`, when it has one in the frame of
    /// the class table. Finite groups are returned in the canonical frame.
    pub fn family(&self) -> Result<StabilizerFamily> {
        StabilizerFamily::new(&self.class, self.canonical.n())
    }
}

/// Classifies `psi` by the shape of its Majorana configuration.
///
/// Fails with `AmbiguousClassification` when a decisive distance lies
/// within `AMBIGUITY_FACTOR` above its threshold.
pub fn classify_state(psi: &SymmetricPureState, tol: &Tolerances) -> Result<ClassificationResult> {
    let n = psi.n();
    let config = majorana_points(psi, tol)?;
    let clusters = config.clusters();

    let gap = min_cluster_gap(&config);
    if gap <= AMBIGUITY_FACTOR * tol.cluster {
        return Err(Error::AmbiguousClassification {
            first: format!("{} clusters", clusters.len()),
            second: "merged clusters".into(),
        });
    }

    if clusters.len() == 1 {
        let g = so3_to_su2(&minimal_rotation(clusters[0].point.vector(), &Vector3::z()));
        return finish(
            psi,
            StabilizerClass::ProductU1n,
            SymmetricPureState::dicke(n, 0)?,
            g,
        );
    }

    if clusters.len() == 2 {
        let (p, q) = (clusters[0], clusters[1]);
        let sum = (p.point.vector() + q.point.vector()).norm();
        if sum <= tol.cluster {
            let (major, minor) = if q.multiplicity > p.multiplicity {
                (q, p)
            } else {
                (p, q)
            };
            let g = so3_to_su2(&minimal_rotation(major.point.vector(), &Vector3::z()));
            let k = minor.multiplicity;
            let class = if n == 2 {
                StabilizerClass::Singlet
            } else if 2 * k == n {
                StabilizerClass::DickeBalanced
            } else {
                StabilizerClass::DickeGeneral { k }
            };
            return finish(psi, class, SymmetricPureState::dicke(n, k)?, g);
        }
        if sum <= AMBIGUITY_FACTOR * tol.cluster {
            return Err(Error::AmbiguousClassification {
                first: "two antipodal clusters".into(),
                second: "two non-antipodal clusters".into(),
            });
        }
    }

    if let Some(result) = ghz_branch(psi, &config, tol)? {
        return Ok(result);
    }

    let group = symmetry_group(&config, tol.matching)?;
    let frame = match group.axis() {
        Some(axis) => minimal_rotation(&axis, &Vector3::z()),
        None => Rotation::identity(),
    };
    let g = so3_to_su2(&frame);
    let canonical = psi.apply_uniform(&g).phase_normalized(tol.norm);
    let rotated: Vec<Rotation> = group
        .generators()
        .iter()
        .map(|r| frame * *r * frame.inverse())
        .collect();
    let generators: Vec<LocalUnitary> = rotated
        .iter()
        .map(|r| LocalUnitary::uniform(so3_to_su2(r), n))
        .collect();
    let axis = group.axis().map(|a| frame.apply(&a));
    let class = StabilizerClass::Finite(PointGroup::from_parts(group.kind(), axis, rotated));
    Ok(ClassificationResult {
        class,
        residual: psi.apply_uniform(&g).distance_up_to_phase(&canonical),
        canonical,
        transform: g,
        generators,
    })
}

fn min_cluster_gap(config: &MajoranaConfiguration) -> f64 {
    let c = config.clusters();
    let mut gap = f64::INFINITY;
    for (i, a) in c.iter().enumerate() {
        for b in &c[i + 1..] {
            gap = gap.min(a.point.chordal_distance(&b.point));
        }
    }
    gap
}

fn finish(
    psi: &SymmetricPureState,
    class: StabilizerClass,
    canonical: SymmetricPureState,
    g: SingleQubitUnitary,
) -> Result<ClassificationResult> {
    let n = psi.n();
    let mut generators = StabilizerFamily::new(&class, n)?.generators();
    if class == StabilizerClass::Singlet {
        // (Z ⊗ 1) maps the singlet to |D_2^(1)⟩ up to sign
        let z = LocalUnitary::new(vec![
            SingleQubitUnitary::pauli_z(),
            SingleQubitUnitary::identity(),
        ])?;
        generators = generators
            .iter()
            .map(|u| z.compose(u).and_then(|zu| zu.compose(&z)))
            .collect::<Result<_>>()?;
    }
    let residual = psi.apply_uniform(&g).distance_up_to_phase(&canonical);
    Ok(ClassificationResult {
        class,
        canonical,
        transform: g,
        generators,
        residual,
    })
}

/// Tests whether a rotation sends `psi` into `span{|0…0⟩, |1…1⟩}`.
fn ghz_branch(
    psi: &SymmetricPureState,
    config: &MajoranaConfiguration,
    tol: &Tolerances,
) -> Result<Option<ClassificationResult>> {
    let n = psi.n();
    let clusters = config.clusters();
    if clusters.len() != n || n < 2 {
        return Ok(None);
    }
    let p: Vec<Vector3<f64>> = clusters.iter().map(|c| *c.point.vector()).collect();
    let axis = if n == 2 {
        p[0] + p[1]
    } else {
        (p[1] - p[0]).cross(&(p[2] - p[0]))
    };
    let frame = minimal_rotation(&axis.normalize(), &Vector3::z());
    let h = so3_to_su2(&frame);
    let rotated = psi.apply_uniform(&h);
    let c = rotated.coeffs();
    let interior = c[1..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    if interior > AMBIGUITY_FACTOR * tol.equality {
        return Ok(None);
    }
    if interior > tol.equality {
        return Err(Error::AmbiguousClassification {
            first: "ghz".into(),
            second: "finite".into(),
        });
    }

    let (mut a, mut b) = (c[0], c[n]);
    let mut g = h;
    if a.norm() < b.norm() {
        g = SingleQubitUnitary::pauli_x() * g;
        std::mem::swap(&mut a, &mut b);
    }
    // diag(1, e^{iφ})^{⊗n} multiplies b by e^{inφ}; match b's phase to a's
    let phi = (a.arg() - b.arg()) / n as f64;
    g = SingleQubitUnitary::phase_gate(phi) * g;
    let (a, b) = (a.norm(), b.norm());
    let diff = a - b;
    let balanced = diff <= tol.equality;
    if !balanced && diff <= AMBIGUITY_FACTOR * tol.equality {
        return Err(Error::AmbiguousClassification {
            first: "iia".into(),
            second: "iib".into(),
        });
    }
    let (class, canonical) = if balanced {
        (
            StabilizerClass::GhzBalanced,
            SymmetricPureState::ghz_balanced(n)?,
        )
    } else {
        let t = 4.0 / std::f64::consts::PI * b.atan2(a);
        (
            StabilizerClass::GhzGeneral { t },
            SymmetricPureState::ghz(n, C64::new(a, 0.0), C64::new(b, 0.0))?,
        )
    };
    finish(psi, class, canonical, g).map(Some)
}

/// The stabilizer family of `class` at `n` qubits: its generators, an
/// element for any parameter tuple, and a sampler.
pub fn stabilizer_generators(class: &StabilizerClass, n: usize) -> Result<StabilizerFamily> {
    StabilizerFamily::new(class, n)
}

/// `g` with `g^{⊗n} psi ≡ other`, or `None` when no rotation of the
/// Majorana configuration of `psi` matches that of `other`.
///
/// Each candidate rotation is confirmed on the states themselves at
/// `tol.verification`.
pub fn lu_equivalent_pure(
    psi: &SymmetricPureState,
    other: &SymmetricPureState,
    tol: &Tolerances,
) -> Result<Option<SingleQubitUnitary>> {
    if psi.n() != other.n() {
        return Err(Error::ArityMismatch {
            expected: psi.n(),
            found: other.n(),
        });
    }
    let a = majorana_points(psi, tol)?;
    let b = majorana_points(other, tol)?;
    for r in match_all(&a, &b, tol.matching)? {
        let g = so3_to_su2(&r);
        if psi.apply_uniform(&g).distance_up_to_phase(other) <= tol.verification {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// The infinite-stabilizer classes available at `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassCensus {
    pub n: usize,
    /// Class labels present at `n`; `iib` stands for its one-parameter family.
    pub labels: Vec<&'static str>,
    /// `k` of the `ivb` representatives `|D_n^(k)⟩`, `1 ≤ k < n/2`.
    pub dicke_general: Vec<usize>,
    /// The `ivb` count `⌊n/2⌋` as stated with the class table.
    pub stated_dicke_general_count: usize,
}

impl ClassCensus {
    /// Whether the stated `ivb` count differs from the enumeration.
    pub fn count_discrepancy(&self) -> bool {
        self.stated_dicke_general_count != self.dicke_general.len()
    }
}

pub fn class_census(n: usize) -> Result<ClassCensus> {
    if n < 3 {
        return Err(Error::TooFewQubits { n, min: 3 });
    }
    let mut labels = vec!["i", "iia", "iib"];
    if n.is_multiple_of(2) {
        labels.push("iva");
    }
    let dicke_general: Vec<usize> = (1..n).filter(|&k| 2 * k < n).collect();
    if !dicke_general.is_empty() {
        labels.push("ivb");
    }
    Ok(ClassCensus {
        n,
        labels,
        dicke_general,
        stated_dicke_general_count: n / 2,
    })
}

/// Whether two classes agree in tag and parameters (`t` within `tol`).
pub fn same_class(a: &StabilizerClass, b: &StabilizerClass, tol: f64) -> bool {
    match (a, b) {
        (StabilizerClass::GhzGeneral { t: s }, StabilizerClass::GhzGeneral { t }) => {
            (s - t).abs() <= tol
        }
        (StabilizerClass::Finite(g), StabilizerClass::Finite(h)) => g.kind() == h.kind(),
        _ => a == b,
    }
}

use nalgebra::Vector3;
use rand::Rng;

use super::StabilizerClass;
use crate::error::{Error, Result};
use crate::rotmatch::{closure, so3_to_su2, Rotation};
use crate::states::{LocalUnitary, SingleQubitUnitary, C64};

/// The explicit LU stabilizer group of a class representative.
///
/// Elements are built from the parameter tuples of each class:
///
/// | class | parameters | element |
/// |-------|-----------|---------|
/// | i     | `t_1..t_n` | `(e^{-it_k Z/2})_k` |
/// | iia   | `t_1..t_{n-1}`, flip | `(e^{-it_1 Z/2}, …, e^{-it_{n-1} Z/2}, e^{i(Σt)Z/2})·X^{⊗n·b}` |
/// | iib   | `t_1..t_{n-1}` | as iia without the flip |
/// | iii   | Euler angles of `g` | `(g, g)` on `|01⟩ - |10⟩` |
/// | iva   | `t`, flip | `(e^{-itZ/2})^{⊗n}·X^{⊗n·b}` |
/// | ivb   | `t` | `(e^{-itZ/2})^{⊗n}` |
/// | finite | none | `g^{⊗n}` for `g` over the lifted point group |
#[derive(Debug, Clone)]
pub struct StabilizerFamily {
    n: usize,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    PerQubitPhases,
    GhzPhases { flip: bool },
    Singlet,
    UniformPhases { flip: bool },
    Finite { generators: Vec<Rotation> },
}

impl StabilizerFamily {
    /// The family of `class` at `n` qubits, in the frame of the canonical
    /// representative. Finite groups are taken as given.
    pub fn new(class: &StabilizerClass, n: usize) -> Result<Self> {
        let kind = match class {
            StabilizerClass::ProductU1n => Kind::PerQubitPhases,
            StabilizerClass::GhzBalanced => Kind::GhzPhases { flip: true },
            StabilizerClass::GhzGeneral { .. } => Kind::GhzPhases { flip: false },
            StabilizerClass::Singlet => {
                if n != 2 {
                    return Err(Error::ArityMismatch {
                        expected: 2,
                        found: n,
                    });
                }
                Kind::Singlet
            }
            StabilizerClass::DickeBalanced => Kind::UniformPhases { flip: true },
            StabilizerClass::DickeGeneral { .. } => Kind::UniformPhases { flip: false },
            StabilizerClass::Finite(group) => Kind::Finite {
                generators: group.generators().to_vec(),
            },
        };
        if n == 0 {
            return Err(Error::TooFewQubits { n, min: 1 });
        }
        if matches!(kind, Kind::GhzPhases { .. }) && n < 2 {
            return Err(Error::TooFewQubits { n, min: 2 });
        }
        Ok(Self { n, kind })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of continuous parameters.
    pub fn dimension(&self) -> usize {
        match self.kind {
            Kind::PerQubitPhases => self.n,
            Kind::GhzPhases { .. } => self.n - 1,
            Kind::Singlet => 3,
            Kind::UniformPhases { .. } => 1,
            Kind::Finite { .. } => 0,
        }
    }

    /// Whether the family has the `(X, …, X)` component.
    pub fn has_flip(&self) -> bool {
        matches!(
            self.kind,
            Kind::GhzPhases { flip: true } | Kind::UniformPhases { flip: true }
        )
    }

    /// The element with the given parameters. For the singlet the three
    /// parameters are ZYZ Euler angles of `g`.
    pub fn element(&self, params: &[f64], flip: bool) -> Result<LocalUnitary> {
        if params.len() != self.dimension() {
            return Err(Error::ArityMismatch {
                expected: self.dimension(),
                found: params.len(),
            });
        }
        if flip && !self.has_flip() {
            return Err(Error::Unsupported(
                "this stabilizer family has no X layer".into(),
            ));
        }
        let z = SingleQubitUnitary::z_rotation;
        let mut factors: Vec<SingleQubitUnitary> = match &self.kind {
            Kind::PerQubitPhases => params.iter().map(|&t| z(t)).collect(),
            Kind::GhzPhases { .. } => {
                let total: f64 = params.iter().sum();
                params
                    .iter()
                    .map(|&t| z(t))
                    .chain(std::iter::once(z(-total)))
                    .collect()
            }
            Kind::Singlet => {
                let g = SingleQubitUnitary::from_euler_zyz(params[0], params[1], params[2]);
                vec![g, g]
            }
            Kind::UniformPhases { .. } => vec![z(params[0]); self.n],
            Kind::Finite { .. } => vec![SingleQubitUnitary::identity(); self.n],
        };
        if flip {
            factors
                .iter_mut()
                .for_each(|f| *f = *f * SingleQubitUnitary::pauli_x());
        }
        LocalUnitary::new(factors)
    }

    /// Topological generators: each U(1) parameter at `t = 1` (which generates
    /// a dense subgroup), the X layer where present, and the lifted group
    /// generators of a finite family.
    pub fn generators(&self) -> Vec<LocalUnitary> {
        let d = self.dimension();
        let mut out = Vec::new();
        match &self.kind {
            Kind::Singlet => {
                for axis in [Vector3::x(), Vector3::z()] {
                    let g = SingleQubitUnitary::from_axis_angle(axis, 1.0);
                    out.push(LocalUnitary::uniform(g, 2));
                }
            }
            Kind::Finite { generators } => {
                out.extend(
                    generators
                        .iter()
                        .map(|r| LocalUnitary::uniform(so3_to_su2(r), self.n)),
                );
            }
            _ => {
                for k in 0..d {
                    let mut t = vec![0.0; d];
                    t[k] = 1.0;
                    out.push(self.element(&t, false).expect("arity matches"));
                }
                if self.has_flip() {
                    out.push(self.element(&vec![0.0; d], true).expect("arity matches"));
                }
            }
        }
        out
    }

    /// All elements of a finite family (the identity alone otherwise).
    pub fn finite_elements(&self) -> Vec<LocalUnitary> {
        match &self.kind {
            Kind::Finite { generators } => closure(generators)
                .iter()
                .map(|r| LocalUnitary::uniform(so3_to_su2(r), self.n))
                .collect(),
            _ => vec![LocalUnitary::identity(self.n)],
        }
    }

    /// A random element: uniform parameters in `[0, 2π)` and a fair flip.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LocalUnitary {
        if let Kind::Finite { .. } = self.kind {
            let all = self.finite_elements();
            return all[rng.random_range(0..all.len())].clone();
        }
        if let Kind::Singlet = self.kind {
            let g = SingleQubitUnitary::random(rng);
            return LocalUnitary::uniform(g, 2);
        }
        let params: Vec<f64> = (0..self.dimension())
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        let flip = self.has_flip() && rng.random_bool(0.5);
        self.element(&params, flip).expect("arity matches")
    }

    /// Whether `u` equals a family element up to per-factor phases, by
    /// reading parameters off `u` and rebuilding the element.
    pub fn contains(&self, u: &LocalUnitary, tol: f64) -> bool {
        if u.n() != self.n {
            return false;
        }
        match &self.kind {
            Kind::Singlet => {
                let g = *u.factor(0);
                u.projectively_equal(&LocalUnitary::uniform(g, 2), tol)
            }
            Kind::Finite { .. } => self
                .finite_elements()
                .iter()
                .any(|e| e.projectively_equal(u, tol)),
            _ => {
                let flip =
                    self.has_flip() && u.factors().iter().all(|f| f.is_antidiagonal(tol.sqrt()));
                let diag: Vec<SingleQubitUnitary> = u
                    .factors()
                    .iter()
                    .map(|f| {
                        if flip {
                            *f * SingleQubitUnitary::pauli_x()
                        } else {
                            *f
                        }
                    })
                    .collect();
                let angles: Vec<f64> = diag.iter().map(z_angle).collect();
                let params: Vec<f64> = match self.kind {
                    Kind::UniformPhases { .. } => vec![angles[0]],
                    _ => angles[..self.dimension()].to_vec(),
                };
                self.element(&params, flip)
                    .map(|e| e.projectively_equal(u, tol))
                    .unwrap_or(false)
            }
        }
    }
}

/// `t` with `f ≡ e^{-itZ/2}` for a diagonal `f`.
fn z_angle(f: &SingleQubitUnitary) -> f64 {
    let (p, q): (C64, C64) = (f.entry(0, 0), f.entry(1, 1));
    (q * p.conj()).arg()
}

//! Complex polynomial roots: companion-matrix eigenvalues followed by Newton
//! polishing.

use nalgebra::{DMatrix, Schur};

use crate::error::{Error, Result};
use crate::states::{C64, ONE, ZERO};

/// Coefficients with modulus at or below this fraction of the coefficient
/// norm count as zero when deciding the degree.
pub const ZERO_COEFF_RATIO: f64 = 1e-12;

const NEWTON_STEPS: usize = 5;

/// Polynomial stored with ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Poly {
    pub(crate) asc: Vec<C64>,
}

impl Poly {
    pub(crate) fn from_descending(desc: &[C64]) -> Self {
        Self {
            asc: desc.iter().rev().copied().collect(),
        }
    }

    pub(crate) fn degree(&self) -> usize {
        self.asc.len().saturating_sub(1)
    }

    pub(crate) fn reversed(&self) -> Self {
        Self {
            asc: self.asc.iter().rev().copied().collect(),
        }
    }

    pub(crate) fn eval(&self, z: C64) -> C64 {
        self.asc.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    /// Taylor coefficients `P^{(j)}(z)/j!` for `j = 0..=m`.
    pub(crate) fn taylor(&self, z: C64, m: usize) -> Vec<C64> {
        let mut work: Vec<C64> = self.asc.clone();
        let mut out = Vec::with_capacity(m + 1);
        for j in 0..=m {
            if work.len() <= j {
                out.push(ZERO);
                continue;
            }
            // synthetic division of work[j..] by (x - z); remainder is the
            // j-th Taylor coefficient
            for i in (j..work.len() - 1).rev() {
                let carry = work[i + 1] * z;
                work[i] += carry;
            }
            out.push(work[j]);
        }
        out
    }

    /// Rounding bound for the `j`-th Taylor coefficient at `z`.
    pub(crate) fn taylor_error_bound(&self, z: C64, j: usize) -> f64 {
        let r = z.norm();
        let d = self.degree();
        let sum: f64 = self
            .asc
            .iter()
            .enumerate()
            .skip(j)
            .map(|(i, c)| c.norm() * binomial_f(i, j) * r.powi((i - j) as i32))
            .sum();
        4.0 * (d as f64 + 1.0) * f64::EPSILON * sum
    }

    /// Newton polishing, keeping a step only when it lowers `|P|`.
    pub(crate) fn polish(&self, mut z: C64, steps: usize) -> C64 {
        let deriv = self.derivative();
        let mut best = self.eval(z).norm();
        for _ in 0..steps {
            if best == 0.0 {
                break;
            }
            let dz = deriv.eval(z);
            if dz.norm() == 0.0 {
                break;
            }
            let cand = z - self.eval(z) / dz;
            let val = self.eval(cand).norm();
            if !(val < best) {
                break;
            }
            z = cand;
            best = val;
        }
        z
    }

    pub(crate) fn derivative(&self) -> Self {
        if self.asc.len() <= 1 {
            return Self { asc: vec![ZERO] };
        }
        Self {
            asc: self
                .asc
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        }
    }

    pub(crate) fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }
}

fn binomial_f(n: usize, k: usize) -> f64 {
    crate::states::binomial(n, k)
}

/// Splits a descending coefficient list into (leading zeros, core, trailing
/// zeros) under the relative zero threshold.
pub(crate) fn strip_zeros(desc: &[C64]) -> Result<(usize, Vec<C64>, usize)> {
    let norm = desc.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(Error::ZeroVector);
    }
    let cut = ZERO_COEFF_RATIO * norm;
    let lead = desc.iter().take_while(|c| c.norm() <= cut).count();
    let trail = desc.iter().rev().take_while(|c| c.norm() <= cut).count();
    let core = desc[lead..desc.len() - trail].to_vec();
    Ok((lead, core, trail))
}

/// Roots of the polynomial with coefficients given from the highest power
/// down.
///
/// Leading coefficients below the zero threshold lower the degree (those roots
/// are at infinity and are not returned). Trailing zero coefficients give
/// exact zero roots. Every other root comes from the companion matrix and is
/// polished with at most five Newton steps; roots outside the unit disk are
/// polished on the reversed polynomial in `1/z`. Multiple roots come back as
/// nearby clusters.
pub fn find_roots(desc: &[C64]) -> Result<Vec<C64>> {
    let (_, core, trailing) = strip_zeros(desc)?;
    let mut roots = core_roots(&core)?;
    roots.extend(std::iter::repeat_n(ZERO, trailing));
    Ok(roots)
}

/// Roots of a polynomial whose leading and constant coefficients are nonzero.
pub(crate) fn core_roots(desc: &[C64]) -> Result<Vec<C64>> {
    if desc.len() <= 1 {
        return Ok(Vec::new());
    }
    let poly = Poly::from_descending(desc);
    let eigen = match companion_eigenvalues(desc) {
        Some(e) => e,
        None => shifted_eigenvalues(&poly)?,
    };

    let rev = poly.reversed();
    Ok(eigen
        .iter()
        .map(|&z| {
            if z.norm() <= 1.0 {
                poly.polish(z, NEWTON_STEPS)
            } else {
                ONE / rev.polish(ONE / z, NEWTON_STEPS)
            }
        })
        .collect())
}

fn companion_eigenvalues(desc: &[C64]) -> Option<Vec<C64>> {
    let degree = desc.len() - 1;
    let lead = desc[0];
    let mut companion = DMatrix::from_element(degree, degree, ZERO);
    for i in 1..degree {
        companion[(i, i - 1)] = ONE;
    }
    // monic z^d + a_{d-1} z^{d-1} + … + a_0, with a_i in the last column
    for i in 0..degree {
        companion[(i, degree - 1)] = -desc[degree - i] / lead;
    }
    let eigen = Schur::try_new(companion, f64::EPSILON, 10_000)?.eigenvalues()?;
    Some(eigen.iter().copied().collect())
}

/// The QR iteration can stall on highly symmetric companion matrices such as
/// that of `z^n - 1`; substituting `z = w + s` breaks the symmetry.
fn shifted_eigenvalues(poly: &Poly) -> Result<Vec<C64>> {
    for s in [
        C64::new(0.1, 0.07),
        C64::new(-0.13, 0.21),
        C64::new(0.31, -0.17),
    ] {
        let mut shifted = poly.taylor(s, poly.degree());
        shifted.reverse();
        if let Some(e) = companion_eigenvalues(&shifted) {
            return Ok(e.into_iter().map(|w| w + s).collect());
        }
    }
    Err(Error::Unsupported(
        "companion eigenvalue iteration did not converge".into(),
    ))
}

/// `max_r |P(z_r)| / ‖coeffs‖`, evaluated in whichever chart keeps `|z| ≤ 1`.
pub fn relative_residual(desc: &[C64], roots: &[C64]) -> f64 {
    let norm = desc.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let poly = Poly::from_descending(desc);
    let rev = poly.reversed();
    roots
        .iter()
        .map(|&z| {
            if z.norm() <= 1.0 {
                poly.eval(z).norm()
            } else {
                rev.eval(ONE / z).norm()
            }
        })
        .fold(0.0, f64::max)
        / norm
}

/// Numerical thresholds shared by every comparing operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity, trace and positivity checks on density matrices.
    pub hermiticity: f64,
    /// Unit-norm checks on state vectors and unitarity of 2×2 factors.
    pub norm: f64,
    /// State equality up to global phase, and stabilizer residuals.
    pub equality: f64,
    /// Chordal distance under which Majorana points merge into one cluster.
    pub cluster: f64,
    /// Chordal distance accepted when matching rotated configurations.
    pub matching: f64,
    /// State distance up to phase accepted when confirming a transform that
    /// was found geometrically.
    pub verification: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            norm: 1e-12,
            equality: 1e-8,
            cluster: 1e-6,
            matching: 1e-6,
            verification: 1e-7,
        }
    }
}

/// Largest qubit count for which full 2^n state vectors are built.
pub const FULL_SPACE_CAP: usize = 12;

/// Largest qubit count for which dense 2^n × 2^n oracles run.
pub const DENSE_ORACLE_CAP: usize = 10;

/// Numerical thresholds used by validation and comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity residual, max-norm.
    pub herm: f64,
    /// Trace (and vector norm) residual.
    pub tr: f64,
    /// Most negative eigenvalue accepted as roundoff.
    pub psd: f64,
    /// Equality of states, channels and reconstructions, max-norm.
    pub eq: f64,
    /// Trace preservation and unitarity residual.
    pub tp: f64,
    /// Eigenvalues at or below this count as zero when measuring rank.
    pub rank: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        herm: 1e-9,
        tr: 1e-9,
        psd: 1e-9,
        eq: 1e-10,
        tp: 1e-9,
        rank: 1e-10,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

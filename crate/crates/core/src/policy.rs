//! Numeric tolerances used across the crate, collected in one record so that
//! callers (and tests) can tighten or loosen them in a single place.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericPolicy {
    /// Max entrywise asymmetry (relative to max(1, max|m_ij|)) accepted by the eigensolver.
    pub hermitian_tol: f64,
    /// Jacobi sweeps stop once the off-diagonal Frobenius mass drops below this times ‖M‖_F.
    pub jacobi_offdiag_tol: f64,
    pub jacobi_max_sweeps: usize,
    /// Eigenvalues closer than this (relative to max(1, ‖M‖_F)) are treated as degenerate.
    pub degeneracy_tol: f64,
    /// Eigenvalues in [-positivity_tol, 0) are clamped to zero before taking entropies.
    pub positivity_tol: f64,
    /// Improved-dissipator channels with rate below `rate_floor * kappa` are dropped.
    pub rate_floor: f64,
    /// Purity threshold for the tripartite monogamy relation.
    pub purity_tol: f64,
    /// Negative values of entanglement quantities above -negativity_floor are clamped to 0.
    pub negativity_floor: f64,
}

impl NumericPolicy {
    pub const DEFAULT: NumericPolicy = NumericPolicy {
        hermitian_tol: 1e-10,
        jacobi_offdiag_tol: 1e-12,
        jacobi_max_sweeps: 100,
        degeneracy_tol: 1e-9,
        positivity_tol: 1e-8,
        rate_floor: 1e-12,
        purity_tol: 1e-8,
        negativity_floor: 1e-6,
    };
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self::DEFAULT
    }
}

//! Numerical tolerance policy.
//!
//! All comparisons in the crate go through a single globally configurable
//! table. Relative tolerances are Frobenius-scaled by `max(1, ‖·‖_F)` at the
//! point of use; the two floors are absolute cutoffs on probability-like
//! quantities. The defaults are deliberately conservative for `f64` dense
//! linear algebra at desk scale.

use std::sync::RwLock;

/// Tolerance table used by every validated construction and membership test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity residual allowed when validating an operator (relative).
    pub herm_tol: f64,
    /// Spectral decomposition residuals: reconstruction and unitarity (relative).
    pub eig_tol: f64,
    /// Subspace membership / closure / commutativity residual (relative).
    pub sub_tol: f64,
    /// Rank decisions: null-space and new-direction acceptance in closures (relative).
    pub accept_tol: f64,
    /// Dispersion-free value comparisons and mixture reproduction (absolute).
    pub df_tol: f64,
    /// Eigenvector family orthonormality and overlap decisions (absolute).
    pub fam_tol: f64,
    /// Eigenvalue clustering: gap below `cluster_tol · op_norm` merges (relative).
    pub cluster_tol: f64,
    /// Mixture components below this weight are dropped and mass renormalized.
    pub weight_floor: f64,
    /// Eigenspace probability mass below this floor counts as zero.
    pub proj_floor: f64,
}

impl Tolerances {
    /// Rebuild the table from a base relative tolerance. The rank/cluster
    /// family sits one decade above the base; the floors stay absolute.
    pub fn from_base(base: f64) -> Self {
        assert!(base > 0.0 && base < 1.0, "base tolerance must be in (0, 1)");
        Tolerances {
            herm_tol: base,
            eig_tol: base,
            sub_tol: base,
            accept_tol: base * 10.0,
            df_tol: base * 10.0,
            fam_tol: base * 10.0,
            cluster_tol: base * 10.0,
            weight_floor: 1e-12,
            proj_floor: 1e-12,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::from_base(1e-9)
    }
}

static GLOBAL: RwLock<Tolerances> = RwLock::new(Tolerances {
    herm_tol: 1e-9,
    eig_tol: 1e-9,
    sub_tol: 1e-9,
    accept_tol: 1e-8,
    df_tol: 1e-8,
    fam_tol: 1e-8,
    cluster_tol: 1e-8,
    weight_floor: 1e-12,
    proj_floor: 1e-12,
});

/// Snapshot of the current global tolerance table.
pub fn tolerances() -> Tolerances {
    *GLOBAL.read().expect("tolerance table poisoned")
}

/// Replace the global tolerance table. Intended for process start-up
/// (CLI flag or scenario override), not for concurrent tuning.
pub fn set_tolerances(t: Tolerances) {
    *GLOBAL.write().expect("tolerance table poisoned") = t;
}

/// Frobenius-style relative scale: `max(1, magnitude)`.
pub fn rel_scale(magnitude: f64) -> f64 {
    magnitude.max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_base_construction() {
        assert_eq!(Tolerances::default(), Tolerances::from_base(1e-9));
        let t = tolerances();
        assert_eq!(t.sub_tol, 1e-9);
        assert_eq!(t.accept_tol, 1e-8);
        assert_eq!(t.weight_floor, 1e-12);
    }

    #[test]
    #[should_panic]
    fn rejects_unusable_base() {
        let _ = Tolerances::from_base(0.0);
    }
}

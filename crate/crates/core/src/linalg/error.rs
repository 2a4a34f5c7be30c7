use thiserror::Error;

/// Failures in the dense linear-algebra layer.
#[derive(Debug, Clone, Error)]
pub enum LinalgError {
    #[error("matrix is not square: {rows} rows, {cols} entries per row")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry list has length {len}, expected {dim}×{dim}")]
    BadEntryCount { dim: usize, len: usize },

    #[error("dimension mismatch: left operand is {left}×{left}, right is {right}×{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian: anti-Hermitian residual {residual:.3e} exceeds {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    EigNonConvergence { sweeps: usize },

    #[error("spectral decomposition failed self-check: residual {residual:.3e} exceeds {tol:.3e}")]
    SpectralInvariant { residual: f64, tol: f64 },

    #[error("scalar function undefined (non-finite) at eigenvalue {eigenvalue}")]
    FunctionUndefined { eigenvalue: f64 },

    #[error("operator family is empty")]
    EmptyFamily,
}

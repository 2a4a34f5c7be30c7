use num_complex::Complex64;

use super::eigen;
use super::error::LinalgError;
use super::matrix::ComplexMatrix;
use crate::tol::{rel_scale, tolerances};

/// A validated Hermitian operator.
///
/// Construction symmetrises the input to `(M + M†)/2` after checking that the
/// anti-Hermitian part is within tolerance, so the stored matrix is exactly
/// Hermitian entry-by-entry. Real-linear combinations of canonical operators
/// stay canonical; products are re-canonicalised where they are formed.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOp {
    mat: ComplexMatrix,
}

impl HermitianOp {
    /// Validate and canonicalise. Fails if the anti-Hermitian residual
    /// exceeds `herm_tol · max(1, ‖M‖_F)`.
    pub fn new(mat: ComplexMatrix) -> Result<Self, LinalgError> {
        let t = tolerances();
        let adj = mat.adjoint();
        let residual = (&mat - &adj).frobenius_norm() / 2.0;
        let tol = t.herm_tol * rel_scale(mat.frobenius_norm());
        if residual > tol {
            return Err(LinalgError::NotHermitian { residual, tol });
        }
        Ok(Self::symmetrized(mat))
    }

    /// Canonicalise without the residual check. For internal use on matrices
    /// that are Hermitian by construction (products of Hermitians, spectral
    /// reconstructions) up to rounding.
    pub(crate) fn symmetrized(mat: ComplexMatrix) -> Self {
        let adj = mat.adjoint();
        let mut sym = (&mat + &adj).scale_re(0.5);
        // Force exactly real diagonal entries.
        for i in 0..sym.dim() {
            let d = sym.at(i, i);
            sym.set(i, i, Complex64::new(d.re, 0.0));
        }
        HermitianOp { mat: sym }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOp {
            mat: ComplexMatrix::identity(dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        HermitianOp {
            mat: ComplexMatrix::zeros(dim),
        }
    }

    /// Real diagonal matrix.
    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = ComplexMatrix::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, Complex64::new(*v, 0.0));
        }
        HermitianOp { mat: m }
    }

    /// Rank-one projector `v v† / ‖v‖²`.
    pub fn projector(v: &[Complex64]) -> Self {
        let n = v.len();
        let norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!(norm_sqr > 0.0, "projector of zero vector");
        let mut m = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, v[r] * v[c].conj() / norm_sqr);
            }
        }
        HermitianOp::symmetrized(m)
    }

    /// Outer-product symmetriser `(u v† + v u†)/√2`, an off-diagonal basis
    /// element for the Hermitian space spanned by two orthonormal vectors.
    pub fn symmetric_unit(u: &[Complex64], v: &[Complex64]) -> Self {
        let n = u.len();
        assert_eq!(n, v.len());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut m = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, (u[r] * v[c].conj() + v[r] * u[c].conj()) * s);
            }
        }
        HermitianOp::symmetrized(m)
    }

    /// Outer-product antisymmetriser `(i u v† − i v u†)/√2`.
    pub fn antisymmetric_unit(u: &[Complex64], v: &[Complex64]) -> Self {
        let n = u.len();
        assert_eq!(n, v.len());
        let s = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
        let mut m = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, s * (u[r] * v[c].conj() - v[r] * u[c].conj()));
            }
        }
        HermitianOp::symmetrized(m)
    }

    pub fn pauli_x() -> Self {
        HermitianOp {
            mat: ComplexMatrix::from_rows(vec![
                vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            ])
            .expect("static entries"),
        }
    }

    pub fn pauli_y() -> Self {
        HermitianOp {
            mat: ComplexMatrix::from_rows(vec![
                vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
                vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
            ])
            .expect("static entries"),
        }
    }

    pub fn pauli_z() -> Self {
        HermitianOp::diagonal(&[1.0, -1.0])
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    /// Real trace (the diagonal is exactly real by canonicalisation).
    pub fn trace_re(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn add(&self, other: &HermitianOp) -> HermitianOp {
        HermitianOp {
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &HermitianOp) -> HermitianOp {
        HermitianOp {
            mat: &self.mat - &other.mat,
        }
    }

    pub fn scale(&self, factor: f64) -> HermitianOp {
        HermitianOp {
            mat: self.mat.scale_re(factor),
        }
    }

    /// Real part of the trace inner product `tr(self · other)`, which is the
    /// full value when both operands are Hermitian.
    pub fn trace_inner(&self, other: &HermitianOp) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                // tr(AB) = Σ A_rc B_cr = Σ A_rc conj(B_rc) for Hermitian B.
                let a = self.mat.at(r, c);
                let b = other.mat.at(r, c);
                acc += a.re * b.re + a.im * b.im;
            }
        }
        acc
    }
}

fn check_dims(a: &HermitianOp, b: &HermitianOp) -> Result<(), LinalgError> {
    if a.dim() != b.dim() {
        return Err(LinalgError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// Symmetrised product `(ab + ba)/2`. Commutative, not associative.
pub fn jordan(a: &HermitianOp, b: &HermitianOp) -> Result<HermitianOp, LinalgError> {
    check_dims(a, b)?;
    let ab = a.mat().matmul(b.mat());
    let ba = b.mat().matmul(a.mat());
    Ok(HermitianOp::symmetrized((&ab + &ba).scale_re(0.5)))
}

/// Antisymmetrised product `(i/2)(ab − ba)`. Anticommutative, not associative.
pub fn lie(a: &HermitianOp, b: &HermitianOp) -> Result<HermitianOp, LinalgError> {
    check_dims(a, b)?;
    let ab = a.mat().matmul(b.mat());
    let ba = b.mat().matmul(a.mat());
    Ok(HermitianOp::symmetrized(
        (&ab - &ba).scale(Complex64::new(0.0, 0.5)),
    ))
}

/// Hermitian real and imaginary parts of the ordinary product:
/// `ab = re + i·im` with `re = jordan(a, b)` and `im = −lie(a, b)`.
pub fn re_im_product(
    a: &HermitianOp,
    b: &HermitianOp,
) -> Result<(HermitianOp, HermitianOp), LinalgError> {
    let re = jordan(a, b)?;
    let im = lie(a, b)?.scale(-1.0);
    Ok((re, im))
}

/// Operator norm: the largest eigenvalue magnitude.
pub fn op_norm(a: &HermitianOp) -> Result<f64, LinalgError> {
    let dec = eigen::decompose(a)?;
    Ok(dec
        .eigenvalues()
        .iter()
        .fold(0.0f64, |m, &v| m.max(v.abs())))
}

/// Functional calculus: apply a real scalar function to the spectrum.
///
/// Eigenvalues are clustered with the degeneracy policy (gap below
/// `cluster_tol · op_norm`) and `f` is evaluated once per cluster at the
/// cluster mean, so nearly-degenerate eigenvalues cannot straddle a
/// discontinuity of `f`. Returns an error if `f` is non-finite at any
/// cluster representative.
pub fn op_function<F>(a: &HermitianOp, f: F) -> Result<HermitianOp, LinalgError>
where
    F: Fn(f64) -> f64,
{
    let dec = eigen::decompose(a)?;
    let scale = dec
        .eigenvalues()
        .iter()
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    let ranges = eigen::cluster_ranges(dec.eigenvalues(), scale);
    let mut mapped = vec![0.0; dec.eigenvalues().len()];
    for range in ranges {
        let vals = &dec.eigenvalues()[range.clone()];
        let rep = vals.iter().sum::<f64>() / vals.len() as f64;
        let y = f(rep);
        if !y.is_finite() {
            return Err(LinalgError::FunctionUndefined { eigenvalue: rep });
        }
        for slot in &mut mapped[range] {
            *slot = y;
        }
    }
    Ok(dec.assemble(&mapped))
}

//! Real linear subspaces of the Hermitian operators on ℂⁿ.
//!
//! The Hermitian n×n matrices form a real inner-product space of dimension n²
//! under `⟨A, B⟩ = tr(AB)`. This module packs operators into isometric real
//! coordinate vectors (diagonal entries, then √2·Re and √2·Im of each upper
//! off-diagonal entry), and builds the shared machinery on top: orthonormal
//! bases via Gram–Schmidt with re-orthogonalisation, projection residuals,
//! membership tests, subspace intersection, and null spaces of real-linear
//! maps through the spectrum of their Gram matrix.

use num_complex::Complex64;

use crate::linalg::{decompose, ComplexMatrix, HermitianOp, LinalgError};
use crate::tol::{rel_scale, tolerances};

/// Pack a Hermitian operator into its isometric real coordinate vector.
pub fn pack_hermitian(op: &HermitianOp) -> Vec<f64> {
    let n = op.dim();
    let mut out = Vec::with_capacity(n * n);
    let m = op.mat();
    for i in 0..n {
        out.push(m.at(i, i).re);
    }
    let s = std::f64::consts::SQRT_2;
    for i in 0..n {
        for j in (i + 1)..n {
            let z = m.at(i, j);
            out.push(s * z.re);
            out.push(s * z.im);
        }
    }
    out
}

/// Inverse of [`pack_hermitian`].
pub fn unpack_hermitian(dim: usize, coords: &[f64]) -> HermitianOp {
    assert_eq!(coords.len(), dim * dim, "coordinate length mismatch");
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m.set(i, i, Complex64::new(coords[i], 0.0));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut k = dim;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let z = Complex64::new(coords[k] * s, coords[k + 1] * s);
            k += 2;
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    HermitianOp::symmetrized(m)
}

/// Pack an arbitrary complex matrix into real coordinates (real parts then
/// imaginary parts); the Euclidean norm equals the Frobenius norm.
pub fn pack_complex(m: &ComplexMatrix) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * m.entries().len());
    for z in m.entries() {
        out.push(z.re);
    }
    for z in m.entries() {
        out.push(z.im);
    }
    out
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Outcome of a membership test: the projection residual alongside the
/// boolean it justifies.
#[derive(Debug, Clone, Copy)]
pub struct Membership {
    pub contained: bool,
    pub residual: f64,
}

/// A real subspace of the Hermitian operators on ℂⁿ, held as an orthonormal
/// basis (trace inner product) together with cached coordinates.
#[derive(Debug, Clone)]
pub struct HermitianSubspace {
    dim_h: usize,
    ops: Vec<HermitianOp>,
    coords: Vec<Vec<f64>>,
}

impl HermitianSubspace {
    pub fn empty(dim_h: usize) -> Self {
        HermitianSubspace {
            dim_h,
            ops: vec![],
            coords: vec![],
        }
    }

    /// Orthonormalise a spanning list (order-dependent, deterministic).
    /// Operators that add no new direction beyond `accept_tol · max(1, ‖·‖)`
    /// are dropped.
    pub fn from_operators(dim_h: usize, ops: &[HermitianOp]) -> Result<Self, LinalgError> {
        let mut sub = HermitianSubspace::empty(dim_h);
        for op in ops {
            if op.dim() != dim_h {
                return Err(LinalgError::DimensionMismatch {
                    left: dim_h,
                    right: op.dim(),
                });
            }
            sub.adjoin(op);
        }
        Ok(sub)
    }

    /// Hilbert-space dimension n.
    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    /// Real linear dimension of the subspace.
    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    pub fn basis(&self) -> &[HermitianOp] {
        &self.ops
    }

    pub fn basis_coords(&self) -> &[Vec<f64>] {
        &self.coords
    }

    pub fn op(&self, i: usize) -> &HermitianOp {
        &self.ops[i]
    }

    /// Gram–Schmidt step: true if the operator contributed a new direction.
    pub fn adjoin(&mut self, op: &HermitianOp) -> bool {
        let t = tolerances();
        let raw = pack_hermitian(op);
        let scale = rel_scale(norm(&raw));
        let mut resid = raw.clone();
        // Two projection passes keep the basis orthonormal to working
        // precision even for nearly dependent inputs.
        for _ in 0..2 {
            for basis in &self.coords {
                let overlap = dot(&resid, basis);
                for (r, b) in resid.iter_mut().zip(basis) {
                    *r -= overlap * b;
                }
            }
        }
        let remaining = norm(&resid);
        if remaining <= t.accept_tol * scale {
            return false;
        }
        for r in resid.iter_mut() {
            *r /= remaining;
        }
        self.ops.push(unpack_hermitian(self.dim_h, &resid));
        self.coords.push(resid);
        true
    }

    /// Coefficients of the orthogonal projection onto the subspace.
    pub fn project_coefficients(&self, op: &HermitianOp) -> Vec<f64> {
        let raw = pack_hermitian(op);
        self.coords.iter().map(|b| dot(&raw, b)).collect()
    }

    /// Orthogonal projection as an operator.
    pub fn project(&self, op: &HermitianOp) -> HermitianOp {
        let coeffs = self.project_coefficients(op);
        self.from_coefficients(&coeffs)
    }

    /// Rebuild an operator from basis coefficients.
    pub fn from_coefficients(&self, coeffs: &[f64]) -> HermitianOp {
        assert_eq!(coeffs.len(), self.dim());
        let mut acc = vec![0.0; self.dim_h * self.dim_h];
        for (c, basis) in coeffs.iter().zip(&self.coords) {
            for (a, b) in acc.iter_mut().zip(basis) {
                *a += c * b;
            }
        }
        unpack_hermitian(self.dim_h, &acc)
    }

    /// Frobenius norm of the component orthogonal to the subspace.
    pub fn residual(&self, op: &HermitianOp) -> f64 {
        let raw = pack_hermitian(op);
        let mut resid = raw.clone();
        for basis in &self.coords {
            let overlap = dot(&resid, basis);
            for (r, b) in resid.iter_mut().zip(basis) {
                *r -= overlap * b;
            }
        }
        norm(&resid)
    }

    /// Membership at `sub_tol · max(1, ‖op‖)`.
    pub fn member(&self, op: &HermitianOp) -> Membership {
        let t = tolerances();
        let residual = self.residual(op);
        Membership {
            contained: residual <= t.sub_tol * rel_scale(op.frobenius_norm()),
            residual,
        }
    }

    pub fn contains(&self, op: &HermitianOp) -> bool {
        self.member(op).contained
    }

    /// Mutual-containment test at membership tolerance.
    pub fn span_equal(&self, other: &HermitianSubspace) -> bool {
        self.dim() == other.dim()
            && other.basis().iter().all(|op| self.contains(op))
            && self.basis().iter().all(|op| other.contains(op))
    }

    /// Largest membership residual, in either direction, between two spans.
    pub fn span_distance(&self, other: &HermitianSubspace) -> f64 {
        let mut worst = 0.0f64;
        for op in other.basis() {
            worst = worst.max(self.residual(op));
        }
        for op in self.basis() {
            worst = worst.max(other.residual(op));
        }
        worst
    }

    /// Intersection of two subspaces: solve for combinations of this basis
    /// that project entirely into the other span.
    pub fn intersect(&self, other: &HermitianSubspace) -> Result<HermitianSubspace, LinalgError> {
        assert_eq!(self.dim_h, other.dim_h, "ambient dimension mismatch");
        // Image of each basis vector under (1 − P_other), in ambient coords.
        let images: Vec<Vec<f64>> = self
            .coords
            .iter()
            .map(|c| {
                let mut r = c.clone();
                for basis in &other.coords {
                    let overlap = dot(&r, basis);
                    for (x, b) in r.iter_mut().zip(basis) {
                        *x -= overlap * b;
                    }
                }
                r
            })
            .collect();
        let null = null_space_coefficients(&images)?;
        let ops: Vec<HermitianOp> = null
            .iter()
            .map(|c| self.from_coefficients(c))
            .collect();
        HermitianSubspace::from_operators(self.dim_h, &ops)
    }

    /// Orthogonal complement of `inner` within this subspace. `inner` must be
    /// contained in `self` for the result to be meaningful.
    pub fn complement_within(&self, inner: &HermitianSubspace) -> HermitianSubspace {
        let mut result = HermitianSubspace {
            dim_h: self.dim_h,
            ops: inner.ops.clone(),
            coords: inner.coords.clone(),
        };
        let before = result.dim();
        for op in &self.ops {
            result.adjoin(op);
        }
        HermitianSubspace {
            dim_h: self.dim_h,
            ops: result.ops.split_off(before),
            coords: result.coords.split_off(before),
        }
    }

    /// The full Hermitian space on ℂⁿ (standard orthonormal basis).
    pub fn full(dim_h: usize) -> HermitianSubspace {
        let mut ops = Vec::with_capacity(dim_h * dim_h);
        let mut coords = Vec::with_capacity(dim_h * dim_h);
        for k in 0..dim_h * dim_h {
            let mut c = vec![0.0; dim_h * dim_h];
            c[k] = 1.0;
            ops.push(unpack_hermitian(dim_h, &c));
            coords.push(c);
        }
        HermitianSubspace {
            dim_h,
            ops,
            coords,
        }
    }
}

/// Null space of the real-linear map `c ↦ Σ cᵢ · imageᵢ`, via the spectrum of
/// the Gram matrix `G = ⟨imageᵢ, imageⱼ⟩`. The null/nonnull decision is made
/// on the Gram eigenvalue scale: directions with `λ ≤ accept_tol · max(1, λ_max)`
/// are reported, orthonormal under the coefficient dot product. Deciding on
/// eigenvalues rather than singular values keeps genuinely null directions
/// (whose computed λ sits at the eigensolver's resolution, around 1e-13·λ_max)
/// cleanly on the null side of the cut.
pub fn null_space_coefficients(images: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, LinalgError> {
    let t = tolerances();
    let m = images.len();
    if m == 0 {
        return Ok(vec![]);
    }
    let mut gram = ComplexMatrix::zeros(m);
    for i in 0..m {
        for j in i..m {
            let g = dot(&images[i], &images[j]);
            gram.set(i, j, Complex64::new(g, 0.0));
            gram.set(j, i, Complex64::new(g, 0.0));
        }
    }
    let dec = decompose(&HermitianOp::symmetrized(gram))?;
    let lambda_max = dec
        .eigenvalues()
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(v));
    let cut = t.accept_tol * rel_scale(lambda_max);
    let mut out = Vec::new();
    for (k, &lambda) in dec.eigenvalues().iter().enumerate() {
        if lambda <= cut {
            let col = dec.eigenvector(k);
            out.push(col.iter().map(|z| z.re).collect());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::jordan;

    #[test]
    fn pack_is_an_isometry() {
        let a = HermitianOp::pauli_y();
        let b = HermitianOp::pauli_x();
        let pa = pack_hermitian(&a);
        let pb = pack_hermitian(&b);
        // tr(σy σy) = 2, tr(σy σx) = 0.
        assert!((dot(&pa, &pa) - 2.0).abs() < 1e-15);
        assert!(dot(&pa, &pb).abs() < 1e-15);
        assert!((a.trace_inner(&a) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn pack_unpack_roundtrip() {
        let a = HermitianOp::new(
            ComplexMatrix::from_rows(vec![
                vec![Complex64::new(1.5, 0.0), Complex64::new(0.3, -0.7)],
                vec![Complex64::new(0.3, 0.7), Complex64::new(-0.25, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let back = unpack_hermitian(2, &pack_hermitian(&a));
        assert!(back.sub(&a).frobenius_norm() < 1e-15);
    }

    #[test]
    fn gram_schmidt_drops_dependent_directions() {
        let id = HermitianOp::identity(2);
        let z = HermitianOp::pauli_z();
        let mix = id.add(&z); // dependent on the first two
        let sub = HermitianSubspace::from_operators(2, &[id, z, mix]).unwrap();
        assert_eq!(sub.dim(), 2);
    }

    #[test]
    fn membership_examples() {
        let id = HermitianOp::identity(2);
        let sub = HermitianSubspace::from_operators(2, std::slice::from_ref(&id)).unwrap();
        assert!(sub.contains(&id.scale(3.0)));
        let m = sub.member(&HermitianOp::pauli_x());
        assert!(!m.contained);
        // σx is orthogonal to the identity, so the residual is its full norm.
        assert!((m.residual - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn intersection_of_diagonal_and_identity_span() {
        let diag = HermitianSubspace::from_operators(
            2,
            &[HermitianOp::identity(2), HermitianOp::pauli_z()],
        )
        .unwrap();
        let idspan =
            HermitianSubspace::from_operators(2, &[HermitianOp::identity(2), HermitianOp::pauli_x()])
                .unwrap();
        let inter = diag.intersect(&idspan).unwrap();
        assert_eq!(inter.dim(), 1);
        assert!(inter.contains(&HermitianOp::identity(2)));
        assert!(!inter.contains(&HermitianOp::pauli_z()));
    }

    #[test]
    fn complement_within_splits_dimension() {
        let full = HermitianSubspace::full(2);
        let idspan =
            HermitianSubspace::from_operators(2, &[HermitianOp::identity(2)]).unwrap();
        let comp = full.complement_within(&idspan);
        assert_eq!(comp.dim(), 3);
        for op in comp.basis() {
            assert!(op.trace_re().abs() < 1e-12, "complement must be traceless");
        }
    }

    #[test]
    fn null_space_finds_annihilating_combination() {
        // Map sends (c1, c2, c3) to c1·x + c2·x + c3·z: kernel is (1, -1, 0)/√2.
        let x = pack_hermitian(&HermitianOp::pauli_x());
        let z = pack_hermitian(&HermitianOp::pauli_z());
        let null = null_space_coefficients(&[x.clone(), x, z]).unwrap();
        assert_eq!(null.len(), 1);
        let c = &null[0];
        assert!((c[0] + c[1]).abs() < 1e-10);
        assert!(c[2].abs() < 1e-10);
    }

    #[test]
    fn full_space_closed_under_products() {
        let full = HermitianSubspace::full(3);
        assert_eq!(full.dim(), 9);
        let p = jordan(full.op(1), full.op(5)).unwrap();
        assert!(full.contains(&p));
    }
}

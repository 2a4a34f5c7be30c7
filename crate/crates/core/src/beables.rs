//! Beable-status analysis.
//!
//! A subalgebra `B` has beable status for a state `ω` when the restriction
//! `ω|_B` is a mixture of dispersion-free states on `B`, so that every
//! observable in `B` can be treated as possessing a definite value, the
//! statistics arising purely from ignorance. The decision procedure here is
//! exact at desk scale: `B` has beable status for `ω` if and only if every
//! lie product of `B` lies in the state's null space `I_{ω|B}`, in which case
//! the quotient `B/I` is commutative and `ω` factors through its characters.
//!
//! The rest of the module builds the interesting examples: definite-set
//! intersections, the eigenspace-projection construction from a preferred
//! observable, maximal beable subalgebras from orthonormal families (with a
//! randomized maximality certificate and an exact structural converse), and
//! the forcing result that an algebra with beable status for a full set of
//! states must be commutative.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg::{
    cluster_ranges, decompose, lie, simultaneous_diagonalize, ComplexMatrix, HermitianOp,
    LinalgError,
};
use crate::random;
use crate::segalgebra::{quotient, AlgebraError, IdealSubspace, Segalgebra};
use crate::states::{decompose_through_quotient, AlgState, MixtureDecomposition, StateError};
use crate::subspace::{null_space_coefficients, pack_complex, HermitianSubspace};
use crate::tol::{rel_scale, tolerances};

/// Failures in beable-status analysis and subalgebra construction.
#[derive(Debug, Clone, Error)]
pub enum BeableError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error(transparent)]
    State(#[from] StateError),

    #[error("operator dimension {got} does not match expected {expected}")]
    WrongDimension { expected: usize, got: usize },

    #[error("the algebra lacks beable status for the given state, violating a precondition")]
    NoBeableStatus,

    #[error("at least one state is required")]
    EmptyStateList,

    #[error("the states do not form a full set: {null_dim} independent operators are annihilated by all of them")]
    NotFullSet { null_dim: usize },

    #[error("the intersected null spaces are not contained in the target state's null space (residual {residual:.3e})")]
    IdealHypothesisViolated { residual: f64 },

    #[error("an eigenvector family must contain at least one vector")]
    FamilyEmpty,

    #[error("a family vector has norm below 1e-12")]
    ZeroFamilyVector,

    #[error("the target vector has norm below 1e-12")]
    ZeroTargetVector,

    #[error("family vectors are not orthonormal: worst overlap {residual:.3e}")]
    FamilyNotOrthonormal { residual: f64 },

    #[error("the target vector is not in the family span: residual {residual:.3e}")]
    TargetOutsideSpan { residual: f64 },

    #[error("the target vector is orthogonal to family member {index} (overlap {overlap:.3e})")]
    TargetOrthogonal { index: usize, overlap: f64 },

    #[error("the joint null space of the algebra's lie products is zero")]
    JointNullSpaceEmpty,

    #[error("the joint null space is not invariant under the algebra (residual {residual:.3e})")]
    NotInvariant { residual: f64 },

    #[error("the algebra is not maximal: the recovered family spans a {recovered_dim}-dimensional algebra strictly containing the {algebra_dim}-dimensional input")]
    NotMaximal {
        algebra_dim: usize,
        recovered_dim: usize,
    },

    #[error("recovered family fails to reproduce the input algebra (residual {residual:.3e})")]
    RecoveryInconsistent { residual: f64 },

    #[error("an algebra with beable status for a full set of states must be commutative, but this one is not (lie residual {residual:.3e})")]
    CommutativityContradiction { residual: f64 },
}

/// Outcome of a beable-status decision.
#[derive(Debug, Clone)]
pub struct BeableVerdict {
    has_status: bool,
    ideal: IdealSubspace,
    witness: Option<HermitianOp>,
    witness_dispersion: Option<f64>,
    decomposition: Option<MixtureDecomposition>,
    worst_lie_residual: f64,
}

impl BeableVerdict {
    pub fn has_status(&self) -> bool {
        self.has_status
    }

    /// The state's null space inside the algebra.
    pub fn ideal(&self) -> &IdealSubspace {
        &self.ideal
    }

    /// On a negative verdict: the lie product with the largest squared
    /// expectation, i.e. the pair of algebra elements whose incompatibility
    /// the state actually sees.
    pub fn witness(&self) -> Option<&HermitianOp> {
        self.witness.as_ref()
    }

    /// `ω(W²)` for the witness, when present.
    pub fn witness_dispersion(&self) -> Option<f64> {
        self.witness_dispersion
    }

    /// On a positive verdict: an explicit convex mixture of dispersion-free
    /// states reproducing the state on the algebra.
    pub fn decomposition(&self) -> Option<&MixtureDecomposition> {
        self.decomposition.as_ref()
    }

    /// Worst membership residual of a lie product against the null space
    /// (small on positive verdicts, the deciding quantity on negative ones).
    pub fn worst_lie_residual(&self) -> f64 {
        self.worst_lie_residual
    }
}

/// Decide whether `b` has beable status for `omega`: compute the state's
/// null space inside `b`, test every pairwise lie product for membership,
/// and on success construct the mixture by factoring the induced state
/// through the commutative quotient.
pub fn has_beable_status(b: &Segalgebra, omega: &AlgState) -> Result<BeableVerdict, BeableError> {
    if b.dim_h() != omega.dim() {
        return Err(BeableError::WrongDimension {
            expected: omega.dim(),
            got: b.dim_h(),
        });
    }
    let ideal = omega.state_ideal(b)?;
    let mut worst_residual = 0.0f64;
    let mut witness: Option<HermitianOp> = None;
    let mut witness_dispersion = f64::NEG_INFINITY;
    for i in 0..b.dim() {
        for j in (i + 1)..b.dim() {
            let l = lie(b.op(i), b.op(j))?;
            let m = ideal.subspace().member(&l);
            worst_residual = worst_residual.max(m.residual);
            if !m.contained {
                let spread = omega.evaluate(&crate::linalg::jordan(&l, &l)?)?;
                if spread > witness_dispersion {
                    witness_dispersion = spread;
                    witness = Some(l);
                }
            }
        }
    }
    if let Some(w) = witness {
        return Ok(BeableVerdict {
            has_status: false,
            ideal,
            witness: Some(w),
            witness_dispersion: Some(witness_dispersion),
            decomposition: None,
            worst_lie_residual: worst_residual,
        });
    }
    let q = quotient(b, &ideal)?;
    let decomposition = decompose_through_quotient(omega, &q)?;
    Ok(BeableVerdict {
        has_status: true,
        ideal,
        witness: None,
        witness_dispersion: None,
        decomposition: Some(decomposition),
        worst_lie_residual: worst_residual,
    })
}

/// Intersection of the definite sets of a family of states, inside `s`. The
/// result has beable status for `omega` provided the intersection of the
/// family's null spaces is contained in `omega`'s null space; that hypothesis
/// is verified and its violation reported as an error.
pub fn intersect_definite_sets(
    states: &[AlgState],
    omega: &AlgState,
    s: &Segalgebra,
) -> Result<Segalgebra, BeableError> {
    if states.is_empty() {
        return Err(BeableError::EmptyStateList);
    }
    for st in states {
        if st.dim() != s.dim_h() {
            return Err(BeableError::WrongDimension {
                expected: s.dim_h(),
                got: st.dim(),
            });
        }
    }
    let mut common_null: Option<HermitianSubspace> = None;
    for st in states {
        let ideal = st.state_ideal(s)?;
        common_null = Some(match common_null {
            None => ideal.subspace().clone(),
            Some(acc) => acc.intersect(ideal.subspace())?,
        });
    }
    let common_null = common_null.expect("nonempty state list");
    let omega_null = omega.state_ideal(s)?;
    let mut worst = 0.0f64;
    for op in common_null.basis() {
        let m = omega_null.subspace().member(op);
        if !m.contained {
            worst = worst.max(m.residual);
        }
    }
    if worst > 0.0 {
        return Err(BeableError::IdealHypothesisViolated { residual: worst });
    }

    let mut intersection: Option<HermitianSubspace> = None;
    for st in states {
        let d = st.definite_set(s)?;
        intersection = Some(match intersection {
            None => d.subspace().clone(),
            Some(acc) => acc.intersect(d.subspace())?,
        });
    }
    Ok(Segalgebra::from_subspace(
        intersection.expect("nonempty state list"),
    )?)
}

/// A set of mutually orthonormal vectors together with a unit target vector
/// lying in their span and orthogonal to none of them. These are exactly the
/// conditions under which the vectors generate a maximal beable subalgebra
/// for the target's vector state.
#[derive(Debug, Clone)]
pub struct EigenFamily {
    vectors: Vec<Vec<Complex64>>,
    target: Vec<Complex64>,
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl EigenFamily {
    pub fn new(
        vectors: Vec<Vec<Complex64>>,
        target: Vec<Complex64>,
    ) -> Result<Self, BeableError> {
        let t = tolerances();
        if vectors.is_empty() {
            return Err(BeableError::FamilyEmpty);
        }
        let dim = target.len();
        let mut normalized = Vec::with_capacity(vectors.len());
        for v in &vectors {
            if v.len() != dim {
                return Err(BeableError::WrongDimension {
                    expected: dim,
                    got: v.len(),
                });
            }
            let n = vec_norm(v);
            if n < 1e-12 {
                return Err(BeableError::ZeroFamilyVector);
            }
            normalized.push(v.iter().map(|z| z / n).collect::<Vec<_>>());
        }
        let tn = vec_norm(&target);
        if tn < 1e-12 {
            return Err(BeableError::ZeroTargetVector);
        }
        let target: Vec<Complex64> = target.iter().map(|z| z / tn).collect();

        let mut worst = 0.0f64;
        for i in 0..normalized.len() {
            for j in (i + 1)..normalized.len() {
                worst = worst.max(inner(&normalized[i], &normalized[j]).norm());
            }
        }
        if worst > t.fam_tol {
            return Err(BeableError::FamilyNotOrthonormal { residual: worst });
        }

        let mut residue = target.clone();
        for v in &normalized {
            let overlap = inner(v, &target);
            for (r, vi) in residue.iter_mut().zip(v) {
                *r -= overlap * vi;
            }
        }
        let out = vec_norm(&residue);
        if out > t.fam_tol {
            return Err(BeableError::TargetOutsideSpan { residual: out });
        }

        for (idx, v) in normalized.iter().enumerate() {
            let overlap = inner(v, &target).norm();
            if overlap <= t.fam_tol {
                return Err(BeableError::TargetOrthogonal {
                    index: idx,
                    overlap,
                });
            }
        }

        Ok(EigenFamily {
            vectors: normalized,
            target,
        })
    }

    pub fn dim_h(&self) -> usize {
        self.target.len()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn target(&self) -> &[Complex64] {
        &self.target
    }

    /// The target's vector state.
    pub fn target_state(&self) -> AlgState {
        AlgState::from_vector(&self.target).expect("target is a unit vector")
    }
}

/// The algebra of all Hermitian operators having every family vector as an
/// eigenvector: the span of the family's rank-one projectors plus the full
/// Hermitian algebra of the orthogonal complement. Its real dimension is
/// `k + (n−k)²` for `k` family vectors in `n` dimensions, and it is a
/// maximal beable subalgebra for the family's target state.
pub fn family_algebra(fam: &EigenFamily) -> Result<Segalgebra, BeableError> {
    let n = fam.dim_h();
    let mut frame: Vec<Vec<Complex64>> = fam.vectors().to_vec();
    // Extend the family to an orthonormal basis; the tail spans the
    // complement that carries the unconstrained Hermitian block.
    let mut e = 0;
    while frame.len() < n && e < n {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[e] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for c in &frame {
                let overlap = inner(c, &v);
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= overlap * ci;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm > 1e-8 {
            frame.push(v.iter().map(|z| z / norm).collect());
        }
        e += 1;
    }
    assert_eq!(frame.len(), n, "family extended to a full basis");
    let complement = &frame[fam.len()..];

    let mut ops: Vec<HermitianOp> = fam
        .vectors()
        .iter()
        .map(|v| HermitianOp::projector(v))
        .collect();
    for (a, wa) in complement.iter().enumerate() {
        ops.push(HermitianOp::projector(wa));
        for wb in complement.iter().skip(a + 1) {
            ops.push(HermitianOp::symmetric_unit(wa, wb));
            ops.push(HermitianOp::antisymmetric_unit(wa, wb));
        }
    }
    Ok(Segalgebra::from_operators(n, &ops)?)
}

/// Result of the preferred-observable construction: the surviving
/// renormalised eigenspace projections of the target vector, the algebra
/// they generate, and the masses involved.
#[derive(Debug, Clone)]
pub struct BubDefinite {
    family: EigenFamily,
    algebra: Segalgebra,
    kept_masses: Vec<f64>,
    dropped_masses: Vec<f64>,
}

impl BubDefinite {
    pub fn family(&self) -> &EigenFamily {
        &self.family
    }

    pub fn algebra(&self) -> &Segalgebra {
        &self.algebra
    }

    /// `⟨v|P_i|v⟩` for each kept eigenprojection, in family order.
    pub fn kept_masses(&self) -> &[f64] {
        &self.kept_masses
    }

    /// Masses at or below the projection floor, reported for transparency.
    pub fn dropped_masses(&self) -> &[f64] {
        &self.dropped_masses
    }
}

/// Project the unit vector `v` onto the eigenspaces of the preferred
/// observable `r`, keep the projections carrying mass above the projection
/// floor, renormalise them, and return the subalgebra of operators having
/// each surviving projection as an eigenvector. The result always has beable
/// status for `v`'s vector state.
pub fn bub_definite(v: &[Complex64], r: &HermitianOp) -> Result<BubDefinite, BeableError> {
    let t = tolerances();
    let n = r.dim();
    if v.len() != n {
        return Err(BeableError::WrongDimension {
            expected: n,
            got: v.len(),
        });
    }
    let norm = vec_norm(v);
    if norm < 1e-12 {
        return Err(BeableError::ZeroTargetVector);
    }
    let v: Vec<Complex64> = v.iter().map(|z| z / norm).collect();

    let dec = decompose(r)?;
    let scale = dec
        .eigenvalues()
        .iter()
        .fold(0.0f64, |m, &x| m.max(x.abs()));
    let mut kept_vectors: Vec<Vec<Complex64>> = Vec::new();
    let mut kept_masses: Vec<f64> = Vec::new();
    let mut dropped_masses: Vec<f64> = Vec::new();
    for range in cluster_ranges(dec.eigenvalues(), rel_scale(scale)) {
        let mut proj = vec![Complex64::new(0.0, 0.0); n];
        for j in range {
            let col = dec.eigenvector(j);
            let amp = inner(&col, &v);
            for (p, c) in proj.iter_mut().zip(&col) {
                *p += amp * c;
            }
        }
        let mass = proj.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if mass > t.proj_floor {
            let m = mass.sqrt();
            kept_vectors.push(proj.iter().map(|z| z / m).collect());
            kept_masses.push(mass);
        } else {
            dropped_masses.push(mass);
        }
    }
    let family = EigenFamily::new(kept_vectors, v)?;
    let algebra = family_algebra(&family)?;
    Ok(BubDefinite {
        family,
        algebra,
        kept_masses,
        dropped_masses,
    })
}

/// Randomized maximality certificate: repeatedly adjoin a random Hermitian
/// operator outside `b`, regenerate, and confirm the extension loses beable
/// status. Returns `true` only if every trial fails to extend.
///
/// Candidates alternate between ambient random Hermitians and directions
/// sampled from the first-order extension cone
/// `{A : (A • bᵢ)√ρ = 0 for all i}`, which contains every element of every
/// beable extension of `b`. For a genuinely maximal algebra that cone
/// collapses onto `b` itself; when it does not, the structured draws find
/// the extension deterministically instead of relying on random luck.
pub fn check_maximality(
    b: &Segalgebra,
    omega: &AlgState,
    trials: usize,
    seed: u64,
) -> Result<bool, BeableError> {
    let verdict = has_beable_status(b, omega)?;
    if !verdict.has_status() {
        return Err(BeableError::NoBeableStatus);
    }
    let n = b.dim_h();
    if b.dim() == n * n {
        return Ok(true);
    }

    let root = omega.sqrt();
    let ambient = HermitianSubspace::full(n);
    let images: Vec<Vec<f64>> = ambient
        .basis()
        .iter()
        .map(|e| {
            let mut img = Vec::with_capacity(b.dim() * 2 * n * n);
            for bi in b.basis() {
                let l = lie(e, bi)?;
                img.extend(pack_complex(&l.mat().matmul(root.mat())));
            }
            Ok(img)
        })
        .collect::<Result<_, BeableError>>()?;
    let cone = null_space_coefficients(&images)?;
    let mut structured: Vec<HermitianOp> = Vec::new();
    for coeffs in &cone {
        let op = ambient.from_coefficients(coeffs);
        let outside = op.sub(&b.subspace().project(&op));
        let norm = outside.frobenius_norm();
        if norm > 1e-8 * rel_scale(op.frobenius_norm()) {
            structured.push(outside.scale(1.0 / norm));
        }
    }

    let mut rng = random::rng_from_seed(seed);
    for trial in 0..trials {
        let raw = if trial % 2 == 0 && !structured.is_empty() {
            let mut acc = HermitianOp::zero(n);
            for dir in &structured {
                let g: f64 = rng.sample(StandardNormal);
                acc = acc.add(&dir.scale(g));
            }
            acc
        } else {
            random::hermitian(&mut rng, n)
        };
        let outside = raw.sub(&b.subspace().project(&raw));
        let norm = outside.frobenius_norm();
        if norm < 1e-8 {
            continue;
        }
        let candidate = outside.scale(1.0 / norm);
        let mut seeds: Vec<HermitianOp> = b.basis().to_vec();
        seeds.push(candidate);
        let extended = Segalgebra::generate(n, &seeds)?;
        if has_beable_status(&extended, omega)?.has_status() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Recover the orthonormal family generating a maximal beable algebra for a
/// vector state: take the joint null space of all the algebra's lie products
/// (checked to be algebra-invariant), simultaneously diagonalise the algebra
/// restricted to it, and keep the common eigenvectors not orthogonal to the
/// target. The round trip through [`family_algebra`] must reproduce the
/// input span; a strictly larger result proves the input was not maximal and
/// is reported as such.
pub fn recover_family(b: &Segalgebra, v: &[Complex64]) -> Result<EigenFamily, BeableError> {
    let t = tolerances();
    let n = b.dim_h();
    if v.len() != n {
        return Err(BeableError::WrongDimension {
            expected: n,
            got: v.len(),
        });
    }
    let vn = vec_norm(v);
    if vn < 1e-12 {
        return Err(BeableError::ZeroTargetVector);
    }
    let target: Vec<Complex64> = v.iter().map(|z| z / vn).collect();
    if !has_beable_status(b, &AlgState::from_vector(&target)?)?.has_status() {
        return Err(BeableError::NoBeableStatus);
    }

    // Joint null space of every lie product, via the PSD Gram operator
    // Σ L†L whose kernel is exactly ∩ ker L.
    let mut gram = ComplexMatrix::zeros(n);
    for i in 0..b.dim() {
        for j in (i + 1)..b.dim() {
            let l = lie(b.op(i), b.op(j))?;
            gram = &gram + &l.mat().adjoint().matmul(l.mat());
        }
    }
    let gram_dec = decompose(&HermitianOp::symmetrized(gram))?;
    let lambda_max = gram_dec.eigenvalues().last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = t.accept_tol * rel_scale(lambda_max);
    let null_cols: Vec<Vec<Complex64>> = gram_dec
        .eigenvalues()
        .iter()
        .enumerate()
        .filter(|(_, &lam)| lam <= cutoff)
        .map(|(idx, _)| gram_dec.eigenvector(idx))
        .collect();
    if null_cols.is_empty() {
        return Err(BeableError::JointNullSpaceEmpty);
    }
    let m = null_cols.len();

    // The null space must be invariant under the algebra for the restriction
    // to make sense; a violation means numerically broken input.
    let mut worst_invariance = 0.0f64;
    for op in b.basis() {
        for col in &null_cols {
            let image = op.mat().apply(col);
            let mut residue = image.clone();
            for basis_col in &null_cols {
                let overlap = inner(basis_col, &image);
                for (r, c) in residue.iter_mut().zip(basis_col) {
                    *r -= overlap * c;
                }
            }
            worst_invariance =
                worst_invariance.max(vec_norm(&residue) / rel_scale(op.frobenius_norm()));
        }
    }
    if worst_invariance > t.sub_tol {
        return Err(BeableError::NotInvariant {
            residual: worst_invariance,
        });
    }

    // Restrict the algebra to the null space and diagonalise simultaneously.
    let restricted: Vec<HermitianOp> = b
        .basis()
        .iter()
        .map(|op| {
            let mut k = ComplexMatrix::zeros(m);
            for (col_j, cj) in null_cols.iter().enumerate() {
                let image = op.mat().apply(cj);
                for (row_i, ci) in null_cols.iter().enumerate() {
                    k.set(row_i, col_j, inner(ci, &image));
                }
            }
            HermitianOp::symmetrized(k)
        })
        .collect();
    let spaces = simultaneous_diagonalize(&restricted)?;

    let mut kept: Vec<Vec<Complex64>> = Vec::new();
    for space in &spaces {
        for u in &space.basis {
            let mut lifted = vec![Complex64::new(0.0, 0.0); n];
            for (coef, col) in u.iter().zip(&null_cols) {
                for (l, c) in lifted.iter_mut().zip(col) {
                    *l += coef * c;
                }
            }
            if inner(&lifted, &target).norm() > t.fam_tol {
                kept.push(lifted);
            }
        }
    }
    let family = EigenFamily::new(kept, target)?;

    let rebuilt = family_algebra(&family)?;
    let mut containment = 0.0f64;
    for op in b.basis() {
        let mship = rebuilt.member(op);
        if !mship.contained {
            containment = containment.max(mship.residual);
        }
    }
    if containment > 0.0 {
        return Err(BeableError::RecoveryInconsistent {
            residual: containment,
        });
    }
    if rebuilt.dim() > b.dim() {
        return Err(BeableError::NotMaximal {
            algebra_dim: b.dim(),
            recovered_dim: rebuilt.dim(),
        });
    }
    Ok(family)
}

/// Does `b` have beable status for every state in a full set? A full set is
/// one whose null spaces intersect trivially on the ambient algebra: no
/// nonzero Hermitian operator satisfies `ω(A²) = 0` for every listed state.
/// A single faithful state is already full in this sense. When the answer is
/// `true`, the algebra is checked to be commutative, which the theory
/// guarantees; a contradiction is reported as an error rather than silently
/// returned.
pub fn forced_commutativity(
    b: &Segalgebra,
    states: &[AlgState],
) -> Result<bool, BeableError> {
    if states.is_empty() {
        return Err(BeableError::EmptyStateList);
    }
    let n = b.dim_h();
    for st in states {
        if st.dim() != n {
            return Err(BeableError::WrongDimension {
                expected: n,
                got: st.dim(),
            });
        }
    }
    let ambient = HermitianSubspace::full(n);
    let roots: Vec<HermitianOp> = states.iter().map(|st| st.sqrt()).collect();
    let images: Vec<Vec<f64>> = ambient
        .basis()
        .iter()
        .map(|e| {
            let mut img = Vec::with_capacity(states.len() * 2 * n * n);
            for root in &roots {
                img.extend(pack_complex(&e.mat().matmul(root.mat())));
            }
            img
        })
        .collect();
    let null = null_space_coefficients(&images)?;
    if !null.is_empty() {
        return Err(BeableError::NotFullSet {
            null_dim: null.len(),
        });
    }

    for st in states {
        if !has_beable_status(b, st)?.has_status() {
            return Ok(false);
        }
    }
    if !b.is_commutative() {
        return Err(BeableError::CommutativityContradiction {
            residual: b.commutativity_residual(),
        });
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{density, orthonormal_family, rng_from_seed, unit_vector};

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis_vector(n: usize, i: usize) -> Vec<Complex64> {
        let mut v = vec![cx(0.0, 0.0); n];
        v[i] = cx(1.0, 0.0);
        v
    }

    #[test]
    fn commutative_algebras_always_have_beable_status() {
        let diag = Segalgebra::generate(3, &[HermitianOp::diagonal(&[1.0, 2.0, 3.0])]).unwrap();
        let mut rng = rng_from_seed(21);
        for rank in [1, 2, 3] {
            let omega = density(&mut rng, 3, rank);
            let verdict = has_beable_status(&diag, &omega).unwrap();
            assert!(verdict.has_status());
            let mix = verdict.decomposition().unwrap();
            assert!(mix.reproduction_residual() < 1e-9);
        }
    }

    #[test]
    fn full_algebra_fails_for_the_maximally_mixed_state() {
        let full = Segalgebra::full(2);
        let omega = AlgState::maximally_mixed(2);
        let verdict = has_beable_status(&full, &omega).unwrap();
        assert!(!verdict.has_status());
        assert_eq!(verdict.ideal().dim(), 0);
        let witness = verdict.witness().expect("negative verdict carries a witness");
        assert!(verdict.witness_dispersion().unwrap() > 1e-8);
        assert!(full.contains(witness));
        assert!(verdict.decomposition().is_none());
    }

    #[test]
    fn definite_sets_have_beable_status_even_when_noncommutative() {
        let v = unit_vector(&mut rng_from_seed(4), 3);
        let omega = AlgState::from_vector(&v).unwrap();
        let d = omega.definite_set(&Segalgebra::full(3)).unwrap();
        assert_eq!(d.dim(), 5);
        assert!(!d.is_commutative());
        let verdict = has_beable_status(&d, &omega).unwrap();
        assert!(verdict.has_status());
        // A vector state is dispersion-free on its own definite set, so the
        // mixture is a single point mass.
        let mix = verdict.decomposition().unwrap();
        assert_eq!(mix.len(), 1);
        assert!((mix.components()[0].0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_decomposition_recovers_populations() {
        let diag = Segalgebra::generate(
            4,
            &[HermitianOp::diagonal(&[1.0, 2.0, 3.0, 4.0])],
        )
        .unwrap();
        let omega = density(&mut rng_from_seed(9), 4, 4);
        let verdict = has_beable_status(&diag, &omega).unwrap();
        let mix = verdict.decomposition().unwrap();
        assert_eq!(mix.len(), 4);
        let mut weights: Vec<f64> = mix.components().iter().map(|(w, _)| *w).collect();
        let mut populations: Vec<f64> = (0..4)
            .map(|i| omega.density().mat().at(i, i).re)
            .collect();
        weights.sort_by(|a, b| a.partial_cmp(b).unwrap());
        populations.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (w, p) in weights.iter().zip(&populations) {
            assert!((w - p).abs() < 1e-9, "{w} vs {p}");
        }
    }

    #[test]
    fn eigen_family_validation_rejects_bad_inputs() {
        let e0 = basis_vector(3, 0);
        let e1 = basis_vector(3, 1);
        let plus: Vec<Complex64> = e0.iter().zip(&e1).map(|(a, b)| (a + b) * 0.5f64.sqrt()).collect();

        assert!(EigenFamily::new(vec![e0.clone(), e1.clone()], plus.clone()).is_ok());
        assert!(matches!(
            EigenFamily::new(vec![], plus.clone()),
            Err(BeableError::FamilyEmpty)
        ));
        assert!(matches!(
            EigenFamily::new(vec![e0.clone(), plus.clone()], plus.clone()),
            Err(BeableError::FamilyNotOrthonormal { .. })
        ));
        // Target sticking out of the span.
        assert!(matches!(
            EigenFamily::new(vec![e0.clone()], plus.clone()),
            Err(BeableError::TargetOutsideSpan { .. })
        ));
        // Target orthogonal to a member.
        assert!(matches!(
            EigenFamily::new(vec![e0.clone(), e1.clone()], e0.clone()),
            Err(BeableError::TargetOrthogonal { index: 1, .. })
        ));
    }

    #[test]
    fn family_algebra_dimension_counts() {
        let e0 = basis_vector(3, 0);
        let e1 = basis_vector(3, 1);
        let plus: Vec<Complex64> = e0.iter().zip(&e1).map(|(a, b)| (a + b) * 0.5f64.sqrt()).collect();
        // Two family vectors in dim 3: diagonal pair plus a 1×1 block.
        let fam = EigenFamily::new(vec![e0.clone(), e1.clone()], plus).unwrap();
        let alg = family_algebra(&fam).unwrap();
        assert_eq!(alg.dim(), 3);
        assert!(alg.is_commutative());

        // A full orthonormal basis gives the commutative diagonal algebra.
        let basis_fam = EigenFamily::new(
            vec![basis_vector(3, 0), basis_vector(3, 1), basis_vector(3, 2)],
            unit_vector(&mut rng_from_seed(2), 3)
                .iter()
                .map(|z| cx(z.norm(), 0.0))
                .collect::<Vec<_>>(),
        );
        // (target components made real positive so no member is orthogonal)
        let basis_fam = basis_fam.unwrap();
        let diag = family_algebra(&basis_fam).unwrap();
        assert_eq!(diag.dim(), 3);
        assert!(diag.is_commutative());
        assert!(diag.contains(&HermitianOp::diagonal(&[1.0, 2.0, 3.0])));

        // A single vector reproduces its state's definite set: 1 + (n−1)².
        let v = unit_vector(&mut rng_from_seed(8), 3);
        let single = EigenFamily::new(vec![v.clone()], v.clone()).unwrap();
        let alg = family_algebra(&single).unwrap();
        assert_eq!(alg.dim(), 5);
        let omega = AlgState::from_vector(&v).unwrap();
        let d = omega.definite_set(&Segalgebra::full(3)).unwrap();
        assert!(alg.span_equal(&d));
    }

    #[test]
    fn family_algebra_has_beable_status_for_its_target() {
        let (vectors, target) = orthonormal_family(&mut rng_from_seed(17), 4, 2);
        let fam = EigenFamily::new(vectors, target.clone()).unwrap();
        let alg = family_algebra(&fam).unwrap();
        assert_eq!(alg.dim(), 2 + 4);
        let omega = AlgState::from_vector(&target).unwrap();
        assert!(has_beable_status(&alg, &omega).unwrap().has_status());
    }

    #[test]
    fn preferred_observable_eigenvector_case_gives_the_definite_set() {
        // v is an eigenvector of r, so a single projection survives.
        let r = HermitianOp::diagonal(&[1.0, 2.0, 2.0]);
        let v = basis_vector(3, 0);
        let out = bub_definite(&v, &r).unwrap();
        assert_eq!(out.family().len(), 1);
        assert_eq!(out.dropped_masses().len(), 1);
        let omega = AlgState::from_vector(&v).unwrap();
        let d = omega.definite_set(&Segalgebra::full(3)).unwrap();
        assert!(out.algebra().span_equal(&d));
    }

    #[test]
    fn preferred_observable_nondegenerate_case_is_commutative() {
        let r = HermitianOp::diagonal(&[1.0, 2.0, 3.0]);
        let v: Vec<Complex64> = vec![cx(0.6, 0.0), cx(0.0, 0.64), cx(0.48, 0.0)];
        let out = bub_definite(&v, &r).unwrap();
        assert_eq!(out.family().len(), 3);
        assert!(out.algebra().is_commutative());
        assert_eq!(out.algebra().dim(), 3);
        let masses: f64 = out.kept_masses().iter().sum();
        assert!((masses - 1.0).abs() < 1e-12);
    }

    #[test]
    fn preferred_observable_degenerate_case_is_noncommutative() {
        // Eigenspaces {e0}, {e1,e2}, {e3}; the target misses the last one,
        // so two projections survive and the complement carries a full 2×2
        // Hermitian block.
        let r = HermitianOp::diagonal(&[1.0, 2.0, 2.0, 3.0]);
        let s = 0.5f64.sqrt();
        let v = vec![cx(s, 0.0), cx(s, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)];
        let out = bub_definite(&v, &r).unwrap();
        assert_eq!(out.family().len(), 2);
        assert_eq!(out.algebra().dim(), 2 + 4);
        assert!(!out.algebra().is_commutative());
        let omega = AlgState::from_vector(&v).unwrap();
        assert!(has_beable_status(out.algebra(), &omega).unwrap().has_status());
    }

    #[test]
    fn definite_set_intersections() {
        let full = Segalgebra::full(3);
        let omega = density(&mut rng_from_seed(30), 3, 3);

        // Degenerate case: intersecting a single state's definite set.
        let single = intersect_definite_sets(
            std::slice::from_ref(&omega),
            &omega,
            &full,
        )
        .unwrap();
        assert!(single.span_equal(&omega.definite_set(&full).unwrap()));

        // All basis-vector states cut the full algebra down to the diagonal.
        let states: Vec<AlgState> = (0..3)
            .map(|i| AlgState::from_vector(&basis_vector(3, i)).unwrap())
            .collect();
        let inter = intersect_definite_sets(&states, &omega, &full).unwrap();
        assert_eq!(inter.dim(), 3);
        assert!(inter.contains(&HermitianOp::diagonal(&[1.0, 2.0, 3.0])));
        assert!(inter.is_commutative());
    }

    #[test]
    fn definite_set_intersection_hypothesis_violation() {
        let full = Segalgebra::full(2);
        let up = AlgState::from_vector(&basis_vector(2, 0)).unwrap();
        let plus = AlgState::from_vector(&[cx(1.0, 0.0), cx(1.0, 0.0)]).unwrap();
        // I_up = span{|1⟩⟨1|} is not inside I_plus.
        assert!(matches!(
            intersect_definite_sets(std::slice::from_ref(&up), &plus, &full),
            Err(BeableError::IdealHypothesisViolated { .. })
        ));
    }

    #[test]
    fn maximality_certificate_accepts_family_algebras() {
        let v = unit_vector(&mut rng_from_seed(14), 3);
        let omega = AlgState::from_vector(&v).unwrap();
        let fam = EigenFamily::new(vec![v.clone()], v.clone()).unwrap();
        let alg = family_algebra(&fam).unwrap();
        assert!(check_maximality(&alg, &omega, 40, 99).unwrap());
    }

    #[test]
    fn maximality_certificate_rejects_the_identity_span() {
        let v = unit_vector(&mut rng_from_seed(15), 3);
        let omega = AlgState::from_vector(&v).unwrap();
        let trivial = Segalgebra::span_identity(3);
        assert!(!check_maximality(&trivial, &omega, 40, 7).unwrap());
    }

    #[test]
    fn maximality_certificate_rejects_proper_diagonal_subalgebras() {
        // span{I, E00} sits strictly inside the diagonal algebra, which
        // extends it with beable status for any faithful state. Ambient
        // random candidates essentially never find this extension; the
        // structured cone draws must.
        let sub = Segalgebra::generate(3, &[HermitianOp::diagonal(&[1.0, 0.0, 0.0])]).unwrap();
        assert_eq!(sub.dim(), 2);
        let omega = density(&mut rng_from_seed(31), 3, 3);
        assert!(!check_maximality(&sub, &omega, 40, 3).unwrap());
    }

    #[test]
    fn maximality_requires_beable_status() {
        let omega = AlgState::maximally_mixed(2);
        assert!(matches!(
            check_maximality(&Segalgebra::full(2), &omega, 5, 1),
            Err(BeableError::NoBeableStatus)
        ));
    }

    #[test]
    fn recover_family_from_the_diagonal_algebra() {
        let diag = Segalgebra::generate(3, &[HermitianOp::diagonal(&[1.0, 2.0, 3.0])]).unwrap();
        let v: Vec<Complex64> = vec![cx(0.5, 0.1), cx(-0.4, 0.3), cx(0.2, -0.6)];
        let fam = recover_family(&diag, &v).unwrap();
        assert_eq!(fam.len(), 3);
        // Each recovered vector is a standard basis direction up to phase.
        for w in fam.vectors() {
            let big = w.iter().filter(|z| z.norm() > 0.9).count();
            assert_eq!(big, 1);
        }
    }

    #[test]
    fn recover_family_from_a_definite_set() {
        let v = unit_vector(&mut rng_from_seed(41), 3);
        let omega = AlgState::from_vector(&v).unwrap();
        let d = omega.definite_set(&Segalgebra::full(3)).unwrap();
        let fam = recover_family(&d, &v).unwrap();
        assert_eq!(fam.len(), 1);
        let overlap: Complex64 = fam.vectors()[0]
            .iter()
            .zip(&v)
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn recover_family_round_trip() {
        let (vectors, target) = orthonormal_family(&mut rng_from_seed(55), 4, 2);
        let fam = EigenFamily::new(vectors, target.clone()).unwrap();
        let alg = family_algebra(&fam).unwrap();
        let back = recover_family(&alg, &target).unwrap();
        assert_eq!(back.len(), 2);
        let again = family_algebra(&back).unwrap();
        assert!(again.span_equal(&alg));
    }

    #[test]
    fn recover_family_reports_non_maximal_inputs() {
        // span{I, E00} is a beable subalgebra for this state but not a
        // maximal one; the recovered family generates the full diagonal
        // algebra which strictly contains it.
        let sub = Segalgebra::generate(3, &[HermitianOp::diagonal(&[1.0, 0.0, 0.0])]).unwrap();
        let v: Vec<Complex64> = vec![cx(0.5, 0.0), cx(0.5, 0.5), cx(0.1, -0.49)];
        assert!(matches!(
            recover_family(&sub, &v),
            Err(BeableError::NotMaximal { .. })
        ));
    }

    #[test]
    fn forced_commutativity_with_a_faithful_state() {
        let diag = Segalgebra::generate(3, &[HermitianOp::diagonal(&[1.0, 2.0, 3.0])]).unwrap();
        let faithful = density(&mut rng_from_seed(61), 3, 3);
        assert!(forced_commutativity(&diag, std::slice::from_ref(&faithful)).unwrap());

        let full = Segalgebra::full(2);
        let faithful2 = density(&mut rng_from_seed(62), 2, 2);
        assert!(!forced_commutativity(&full, std::slice::from_ref(&faithful2)).unwrap());
    }

    #[test]
    fn forced_commutativity_rejects_deficient_state_sets() {
        let full = Segalgebra::full(2);
        let up = AlgState::from_vector(&basis_vector(2, 0)).unwrap();
        assert!(matches!(
            forced_commutativity(&full, std::slice::from_ref(&up)),
            Err(BeableError::NotFullSet { .. })
        ));
    }

    #[test]
    fn forced_commutativity_with_a_spanning_family_of_pure_states() {
        // Sixteen random pure states in dim 2 are a full set almost surely
        // (four suffice; redundancy is harmless).
        let mut rng = rng_from_seed(77);
        let states: Vec<AlgState> = (0..16)
            .map(|_| AlgState::from_vector(&unit_vector(&mut rng, 2)).unwrap())
            .collect();
        let diag = Segalgebra::generate(2, &[HermitianOp::pauli_z()]).unwrap();
        assert!(forced_commutativity(&diag, &states).unwrap());
        assert!(!forced_commutativity(&Segalgebra::full(2), &states).unwrap());
    }
}

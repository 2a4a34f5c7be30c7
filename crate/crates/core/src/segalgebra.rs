//! Segalgebras: real subspaces of the Hermitian operators that contain the
//! identity and are closed under both bilinear products.
//!
//! Closure under `jordan` and `lie` together is exactly closure of the
//! complexification `S + iS` under the ordinary matrix product, since
//! `ab = jordan(a, b) − i·lie(a, b)`. [`complexified_closure_check`] tests
//! that equivalence directly on a bare subspace; [`Segalgebra`] bakes it in
//! as a construction invariant.
//!
//! The module also covers the ideal theory the state analysis builds on:
//! product-absorbing subspaces ([`IdealSubspace`]), quasicommutativity of an
//! algebra relative to an ideal, and the quotient algebra with its `hat`
//! projection map.

use thiserror::Error;

use crate::linalg::{jordan, lie, re_im_product, HermitianOp, LinalgError};
use crate::subspace::{HermitianSubspace, Membership};
use crate::tol::tolerances;

/// Failures in algebra construction and ideal handling.
#[derive(Debug, Clone, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error("identity is not in the span: residual {residual:.3e}")]
    IdentityMissing { residual: f64 },

    #[error("basis is not orthonormal: Gram residual {residual:.3e}")]
    NotOrthonormal { residual: f64 },

    #[error("span is not closed under the products: worst residual {residual:.3e}")]
    NotClosed { residual: f64 },

    #[error("operator dimension {got} does not match algebra dimension {expected}")]
    WrongOperatorDim { expected: usize, got: usize },

    #[error("candidate ideal is not inside the parent algebra: residual {residual:.3e}")]
    CandidateOutsideParent { residual: f64 },

    #[error("candidate ideal contains the identity, so it is not proper")]
    IdentityInIdeal,

    #[error("subspace does not absorb products: worst residual {residual:.3e}")]
    NotAnIdeal { residual: f64 },

    #[error("ideal does not belong to this algebra")]
    ForeignIdeal,
}

/// A validated Segalgebra: orthonormal Hermitian basis whose span contains
/// the identity and is closed under `jordan` and `lie`. The first basis
/// element of a generated algebra is always the normalised identity.
#[derive(Debug, Clone)]
pub struct Segalgebra {
    sub: HermitianSubspace,
}

impl Segalgebra {
    /// Orthonormalise the given operators and validate every invariant.
    pub fn from_operators(dim_h: usize, ops: &[HermitianOp]) -> Result<Self, AlgebraError> {
        let sub = HermitianSubspace::from_operators(dim_h, ops)?;
        Segalgebra::from_subspace(sub)
    }

    /// Validate an already-orthonormal span as a Segalgebra.
    pub fn from_subspace(sub: HermitianSubspace) -> Result<Self, AlgebraError> {
        let alg = Segalgebra { sub };
        alg.validate()?;
        Ok(alg)
    }

    /// The smallest Segalgebra containing the seeds: adjoin the identity,
    /// then close under both products. Deterministic in the seed order.
    pub fn generate(dim_h: usize, seeds: &[HermitianOp]) -> Result<Self, AlgebraError> {
        let mut sub = HermitianSubspace::empty(dim_h);
        sub.adjoin(&HermitianOp::identity(dim_h));
        for seed in seeds {
            if seed.dim() != dim_h {
                return Err(AlgebraError::WrongOperatorDim {
                    expected: dim_h,
                    got: seed.dim(),
                });
            }
            sub.adjoin(seed);
        }

        // Close under products. Only pairs touching the newest generation can
        // produce new directions, so track a frontier instead of re-multiplying
        // the settled part of the basis against itself.
        let mut settled = 0usize;
        loop {
            let len = sub.dim();
            if settled == len {
                break;
            }
            let mut products = Vec::new();
            for i in 0..len {
                let j_start = i.max(settled);
                for j in j_start..len {
                    products.push(jordan(sub.op(i), sub.op(j))?);
                    if i != j {
                        products.push(lie(sub.op(i), sub.op(j))?);
                    }
                }
            }
            settled = len;
            for p in &products {
                sub.adjoin(p);
            }
        }
        let alg = Segalgebra { sub };
        alg.validate()?;
        Ok(alg)
    }

    /// All Hermitian operators on ℂⁿ.
    pub fn full(dim_h: usize) -> Self {
        Segalgebra {
            sub: HermitianSubspace::full(dim_h),
        }
    }

    /// The one-dimensional algebra spanned by the identity.
    pub fn span_identity(dim_h: usize) -> Self {
        Segalgebra::generate(dim_h, &[]).expect("identity span is closed")
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let t = tolerances();
        let id = HermitianOp::identity(self.dim_h());
        let id_m = self.sub.member(&id);
        if !id_m.contained {
            return Err(AlgebraError::IdentityMissing {
                residual: id_m.residual,
            });
        }
        // Orthonormality of the basis under the trace inner product.
        let mut gram_residual = 0.0f64;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let g = self.sub.op(i).trace_inner(self.sub.op(j));
                let expected = if i == j { 1.0 } else { 0.0 };
                gram_residual = gram_residual.max((g - expected).abs());
            }
        }
        if gram_residual > t.sub_tol {
            return Err(AlgebraError::NotOrthonormal {
                residual: gram_residual,
            });
        }
        let closure = closure_residual(&self.sub)?;
        if closure > t.sub_tol {
            return Err(AlgebraError::NotClosed { residual: closure });
        }
        Ok(())
    }

    pub fn dim_h(&self) -> usize {
        self.sub.dim_h()
    }

    /// Real linear dimension of the algebra.
    pub fn dim(&self) -> usize {
        self.sub.dim()
    }

    pub fn basis(&self) -> &[HermitianOp] {
        self.sub.basis()
    }

    pub fn op(&self, i: usize) -> &HermitianOp {
        self.sub.op(i)
    }

    pub fn subspace(&self) -> &HermitianSubspace {
        &self.sub
    }

    pub fn member(&self, op: &HermitianOp) -> Membership {
        self.sub.member(op)
    }

    pub fn contains(&self, op: &HermitianOp) -> bool {
        self.sub.contains(op)
    }

    pub fn span_equal(&self, other: &Segalgebra) -> bool {
        self.sub.span_equal(&other.sub)
    }

    /// Largest Frobenius norm among basis lie products.
    pub fn commutativity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            for j in (i + 1)..self.dim() {
                let l = lie(self.op(i), self.op(j)).expect("dims agree");
                worst = worst.max(l.frobenius_norm());
            }
        }
        worst
    }

    /// All basis lie products vanish within `sub_tol` (the basis is
    /// orthonormal, so the comparison is absolute).
    pub fn is_commutative(&self) -> bool {
        self.commutativity_residual() <= tolerances().sub_tol
    }
}

/// Worst membership residual of the Hermitian real and imaginary parts of
/// ordinary products of basis elements: the amount by which `span + i·span`
/// fails to be closed under matrix multiplication.
pub fn closure_residual(sub: &HermitianSubspace) -> Result<f64, LinalgError> {
    let mut worst = 0.0f64;
    for i in 0..sub.dim() {
        for j in i..sub.dim() {
            let (re, im) = re_im_product(sub.op(i), sub.op(j))?;
            worst = worst.max(sub.residual(&re));
            if i != j {
                worst = worst.max(sub.residual(&im));
            }
        }
    }
    Ok(worst)
}

/// Does the complexified span close under the ordinary matrix product?
/// True exactly when the subspace is closed under both bilinear products,
/// i.e. when it is (the Hermitian part of) a *-algebra.
pub fn complexified_closure_check(sub: &HermitianSubspace) -> Result<bool, LinalgError> {
    Ok(closure_residual(sub)? <= tolerances().sub_tol)
}

/// A proper, product-absorbing subspace of a parent Segalgebra.
#[derive(Debug, Clone)]
pub struct IdealSubspace {
    parent: Segalgebra,
    sub: HermitianSubspace,
}

impl IdealSubspace {
    /// Validate generators as an ideal of `parent`: contained in the parent,
    /// proper (no identity), and absorbing under both products.
    pub fn new(parent: &Segalgebra, generators: &[HermitianOp]) -> Result<Self, AlgebraError> {
        let sub = HermitianSubspace::from_operators(parent.dim_h(), generators)?;
        for op in sub.basis() {
            let m = parent.member(op);
            if !m.contained {
                return Err(AlgebraError::CandidateOutsideParent {
                    residual: m.residual,
                });
            }
        }
        if sub.contains(&HermitianOp::identity(parent.dim_h())) {
            return Err(AlgebraError::IdentityInIdeal);
        }
        let residual = absorption_residual(parent, &sub)?;
        if residual > tolerances().sub_tol {
            return Err(AlgebraError::NotAnIdeal { residual });
        }
        Ok(IdealSubspace {
            parent: parent.clone(),
            sub,
        })
    }

    /// The zero ideal.
    pub fn zero(parent: &Segalgebra) -> Self {
        IdealSubspace {
            sub: HermitianSubspace::empty(parent.dim_h()),
            parent: parent.clone(),
        }
    }

    /// Internal constructor for ideals whose properties hold by construction
    /// (state ideals, stabilised ideal closures).
    pub(crate) fn from_parts_unchecked(parent: Segalgebra, sub: HermitianSubspace) -> Self {
        IdealSubspace { parent, sub }
    }

    pub fn parent(&self) -> &Segalgebra {
        &self.parent
    }

    pub fn subspace(&self) -> &HermitianSubspace {
        &self.sub
    }

    pub fn dim(&self) -> usize {
        self.sub.dim()
    }

    pub fn basis(&self) -> &[HermitianOp] {
        self.sub.basis()
    }

    pub fn member(&self, op: &HermitianOp) -> Membership {
        self.sub.member(op)
    }
}

/// Worst residual of `jordan(b, a)` and `lie(b, a)` against the candidate
/// span, over parent basis `b` and candidate basis `a`.
fn absorption_residual(
    parent: &Segalgebra,
    candidate: &HermitianSubspace,
) -> Result<f64, LinalgError> {
    let mut worst = 0.0f64;
    for b in parent.basis() {
        for a in candidate.basis() {
            worst = worst.max(candidate.residual(&jordan(b, a)?));
            worst = worst.max(candidate.residual(&lie(b, a)?));
        }
    }
    Ok(worst)
}

/// Is the candidate subspace a proper ideal of `s`? Errors if the candidate
/// is not even inside `s` (that is a caller bug, not a negative answer).
pub fn is_ideal(s: &Segalgebra, candidate: &HermitianSubspace) -> Result<bool, AlgebraError> {
    for op in candidate.basis() {
        let m = s.member(op);
        if !m.contained {
            return Err(AlgebraError::CandidateOutsideParent {
                residual: m.residual,
            });
        }
    }
    if candidate.contains(&HermitianOp::identity(s.dim_h())) {
        return Ok(false);
    }
    Ok(absorption_residual(s, candidate)? <= tolerances().sub_tol)
}

/// Largest residual of a basis lie product of `s` against the ideal span.
pub fn quasicommutativity_residual(s: &Segalgebra, ideal: &IdealSubspace) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..s.dim() {
        for j in (i + 1)..s.dim() {
            let l = lie(s.op(i), s.op(j)).expect("dims agree");
            worst = worst.max(ideal.subspace().residual(&l));
        }
    }
    worst
}

/// All lie products of `s` land in the ideal (membership tolerance applied
/// pairwise). Commutativity is the special case of the zero ideal.
pub fn is_quasicommutative(s: &Segalgebra, ideal: &IdealSubspace) -> bool {
    for i in 0..s.dim() {
        for j in (i + 1)..s.dim() {
            let l = lie(s.op(i), s.op(j)).expect("dims agree");
            if !ideal.subspace().contains(&l) {
                return false;
            }
        }
    }
    true
}

/// The quotient of a Segalgebra by an ideal, realised on the orthogonal
/// complement of the ideal inside the algebra. `hat` is the quotient map;
/// products are computed in the parent and projected back, which makes `hat`
/// a homomorphism for both products.
#[derive(Debug, Clone)]
pub struct QuotientAlgebra {
    parent: Segalgebra,
    ideal: IdealSubspace,
    rep: HermitianSubspace,
}

/// Form the quotient `s / ideal`. The ideal must belong to `s` and pass the
/// ideal test.
pub fn quotient(s: &Segalgebra, ideal: &IdealSubspace) -> Result<QuotientAlgebra, AlgebraError> {
    if !ideal.parent().span_equal(s) {
        return Err(AlgebraError::ForeignIdeal);
    }
    if !is_ideal(s, ideal.subspace())? {
        let residual = absorption_residual(s, ideal.subspace())?;
        return Err(AlgebraError::NotAnIdeal { residual });
    }
    let rep = s.subspace().complement_within(ideal.subspace());
    Ok(QuotientAlgebra {
        parent: s.clone(),
        ideal: ideal.clone(),
        rep,
    })
}

impl QuotientAlgebra {
    pub fn parent(&self) -> &Segalgebra {
        &self.parent
    }

    pub fn ideal(&self) -> &IdealSubspace {
        &self.ideal
    }

    /// Orthonormal coset representatives.
    pub fn rep_basis(&self) -> &HermitianSubspace {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Quotient map: orthogonal projection onto the representative span.
    pub fn hat(&self, op: &HermitianOp) -> HermitianOp {
        self.rep.project(op)
    }

    /// Coordinates of `hat(op)` in the representative basis.
    pub fn hat_coords(&self, op: &HermitianOp) -> Vec<f64> {
        self.rep.project_coefficients(op)
    }

    /// Jordan product on the quotient, in representative coordinates.
    pub fn jordan_coords(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let x = self.rep.from_coefficients(a);
        let y = self.rep.from_coefficients(b);
        let p = jordan(&x, &y).expect("dims agree");
        self.rep.project_coefficients(&p)
    }

    /// Lie product on the quotient, in representative coordinates.
    pub fn lie_coords(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let x = self.rep.from_coefficients(a);
        let y = self.rep.from_coefficients(b);
        let p = lie(&x, &y).expect("dims agree");
        self.rep.project_coefficients(&p)
    }

    /// Largest norm of a quotient lie product over representative pairs.
    pub fn commutativity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            for j in (i + 1)..self.dim() {
                let l = lie(self.rep.op(i), self.rep.op(j)).expect("dims agree");
                let coords = self.rep.project_coefficients(&l);
                let norm_sq: f64 = coords.iter().map(|c| c * c).sum();
                worst = worst.max(norm_sq.sqrt());
            }
        }
        worst
    }

    /// The quotient is commutative exactly when the parent is
    /// ideal-quasicommutative.
    pub fn is_commutative(&self) -> bool {
        self.commutativity_residual() <= tolerances().sub_tol
    }
}

/// Result of closing generators into an ideal: either a proper ideal or the
/// discovery that the closure swallowed the identity (hence the whole
/// algebra).
#[derive(Debug, Clone)]
pub enum IdealClosure {
    Proper(IdealSubspace),
    Improper,
}

/// Smallest ideal of `s` containing the generators: repeatedly absorb
/// products with the algebra basis until the span stabilises.
pub fn ideal_generated_by(
    s: &Segalgebra,
    generators: &[HermitianOp],
) -> Result<IdealClosure, AlgebraError> {
    let mut sub = HermitianSubspace::empty(s.dim_h());
    for g in generators {
        let m = s.member(g);
        if !m.contained {
            return Err(AlgebraError::CandidateOutsideParent {
                residual: m.residual,
            });
        }
        sub.adjoin(g);
    }
    let mut settled = 0usize;
    loop {
        let len = sub.dim();
        if settled == len {
            break;
        }
        let mut products = Vec::new();
        for b in s.basis() {
            for j in settled..len {
                products.push(jordan(b, sub.op(j))?);
                products.push(lie(b, sub.op(j))?);
            }
        }
        settled = len;
        for p in &products {
            sub.adjoin(p);
        }
    }
    if sub.contains(&HermitianOp::identity(s.dim_h())) {
        return Ok(IdealClosure::Improper);
    }
    Ok(IdealClosure::Proper(IdealSubspace::from_parts_unchecked(
        s.clone(),
        sub,
    )))
}

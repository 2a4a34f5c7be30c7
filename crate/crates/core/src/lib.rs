//! Finite-dimensional toolkit for Segalgebras: real linear spaces of Hermitian
//! matrices containing the identity and closed under the symmetrised (Jordan)
//! product `A ∘ B = (AB + BA)/2` and the antisymmetrised (Lie) product
//! `A • B = (i/2)(AB − BA)`.
//!
//! On top of the algebra layer the crate provides algebraic states (density
//! operators and dispersion-free value assignments), state ideals and definite
//! sets, and the beable-status analysis: deciding whether a state restricted
//! to a subalgebra is a mixture of dispersion-free states, constructing such
//! mixtures explicitly, and building/checking maximal beable subalgebras.
//!
//! Everything is dense `f64` linear algebra aimed at desk scale (Hilbert space
//! dimensions up to a few dozen). All values are immutable after construction;
//! validated types re-check their invariants when deserialized.

#![forbid(unsafe_code)]

pub mod tol;

pub mod linalg;

pub mod beables;

pub mod json;

pub mod random;

pub mod subspace;

pub mod segalgebra;

pub mod states;

pub use beables::{
    bub_definite, check_maximality, family_algebra, forced_commutativity, has_beable_status,
    intersect_definite_sets, recover_family, BeableError, BeableVerdict, BubDefinite,
    EigenFamily,
};
pub use json::JsonError;
pub use linalg::{
    decompose, jordan, lie, op_function, op_norm, re_im_product, ComplexMatrix, HermitianOp,
    LinalgError, SpectralDecomposition,
};
pub use segalgebra::{
    complexified_closure_check, ideal_generated_by, is_ideal, is_quasicommutative, quotient,
    AlgebraError, IdealClosure, IdealSubspace, QuotientAlgebra, Segalgebra,
};
pub use states::{
    characters, decompose_state, decompose_through_quotient, dispersion_free_states,
    is_dispersion_free, quotient_characters, AlgState, DispersionFreeState,
    MixtureDecomposition, QuotientCharacter, StateError,
};
pub use subspace::{HermitianSubspace, Membership};

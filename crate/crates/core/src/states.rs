//! Algebraic states and their dispersion-free decompositions.
//!
//! An [`AlgState`] is a density operator: positive, unit trace, evaluated on
//! Hermitian operators by `ω(A) = tr(ρA)`. A [`DispersionFreeState`] is a
//! normalised real-linear functional on a Segalgebra that is multiplicative
//! for the Jordan product and kills every lie product; such functionals take
//! a definite value from the spectrum of each operator they touch.
//!
//! The bridge between the two is the state ideal `I_ω = {A : ω(A²) = 0}`,
//! the definite set `D_ω = {A : A − ω(A)·1 ∈ I_ω}`, and the character theory
//! of commutative (and quasicommutative-quotient) algebras: a state on a
//! commutative Segalgebra is always a convex mixture of the algebra's
//! characters, computed here by simultaneous diagonalisation.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{
    decompose, jordan, lie, simultaneous_diagonalize, ComplexMatrix, HermitianOp, LinalgError,
    SpectralDecomposition,
};
use crate::segalgebra::{
    ideal_generated_by, quotient, AlgebraError, IdealClosure, IdealSubspace, QuotientAlgebra,
    Segalgebra,
};
use crate::subspace::{null_space_coefficients, pack_complex, HermitianSubspace};
use crate::tol::{rel_scale, tolerances};

/// Failures in state construction and decomposition.
#[derive(Debug, Clone, Error)]
pub enum StateError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error("state dimension {got} does not match algebra dimension {expected}")]
    WrongDimension { expected: usize, got: usize },

    #[error("state vector norm is below 1e-12")]
    ZeroVector,

    #[error("density operator is not positive: minimum eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("density operator trace {trace} is not 1")]
    NotNormalized { trace: f64 },

    #[error("expectation value has non-real part {imaginary:.3e}")]
    NonRealExpectation { imaginary: f64 },

    #[error("algebra is not commutative: lie residual {residual:.3e}")]
    NotCommutative { residual: f64 },

    #[error("value assignment is not dispersion-free: worst product residual {residual:.3e}")]
    NotDispersionFree { residual: f64 },

    #[error("value assignment sends the identity to {value}, not 1")]
    UnitNotPreserved { value: f64 },

    #[error("mixture fails to reproduce the target state: residual {residual:.3e}")]
    MixtureMismatch { residual: f64 },

    #[error("mixture weight {weight:.3e} is significantly negative")]
    NegativeWeight { weight: f64 },

    #[error("operator lies outside the functional's algebra: residual {residual:.3e}")]
    OutsideAlgebra { residual: f64 },
}

/// A density operator with its spectral decomposition cached.
#[derive(Debug, Clone)]
pub struct AlgState {
    rho: HermitianOp,
    eig: SpectralDecomposition,
}

impl AlgState {
    /// Validate a density matrix: Hermitian, positive (minimum eigenvalue at
    /// least −1e-10), unit trace within 1e-10.
    pub fn from_density(mat: ComplexMatrix) -> Result<Self, StateError> {
        let rho = HermitianOp::new(mat)?;
        let eig = decompose(&rho)?;
        let min = eig.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -1e-10 {
            return Err(StateError::NotPositive {
                min_eigenvalue: min,
            });
        }
        let trace = rho.trace_re();
        if (trace - 1.0).abs() > 1e-10 {
            return Err(StateError::NotNormalized { trace });
        }
        Ok(AlgState { rho, eig })
    }

    /// Pure state from a (not necessarily normalised) vector.
    pub fn from_vector(v: &[Complex64]) -> Result<Self, StateError> {
        let norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr.sqrt() < 1e-12 {
            return Err(StateError::ZeroVector);
        }
        let rho = HermitianOp::projector(v);
        let eig = decompose(&rho)?;
        Ok(AlgState { rho, eig })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let rho = HermitianOp::identity(dim).scale(1.0 / dim as f64);
        let eig = decompose(&rho).expect("scaled identity decomposes");
        AlgState { rho, eig }
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn density(&self) -> &HermitianOp {
        &self.rho
    }

    pub fn eigen(&self) -> &SpectralDecomposition {
        &self.eig
    }

    /// Full-rank check: every eigenvalue strictly above the positivity floor.
    pub fn is_faithful(&self) -> bool {
        self.eig.eigenvalues().iter().all(|&v| v > 1e-10)
    }

    /// `tr(ρA)`. The imaginary part must vanish to 1e-12 (relative); it is
    /// asserted and discarded.
    pub fn evaluate(&self, op: &HermitianOp) -> Result<f64, StateError> {
        if op.dim() != self.dim() {
            return Err(StateError::WrongDimension {
                expected: self.dim(),
                got: op.dim(),
            });
        }
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.rho.mat().at(i, k) * op.mat().at(k, i);
            }
        }
        let tol = 1e-12 * rel_scale(op.frobenius_norm());
        if acc.im.abs() > tol {
            return Err(StateError::NonRealExpectation { imaginary: acc.im });
        }
        Ok(acc.re)
    }

    /// Positive square root of the density operator (tiny negative
    /// eigenvalues are clamped to zero first).
    pub fn sqrt(&self) -> HermitianOp {
        let roots: Vec<f64> = self
            .eig
            .eigenvalues()
            .iter()
            .map(|&v| v.max(0.0).sqrt())
            .collect();
        self.eig.assemble(&roots)
    }

    /// State null space within an algebra: `{A ∈ B : ω(A²) = 0}`, computed
    /// as the null space of the real-linear map `A ↦ A√ρ` on `B`'s
    /// coordinates. The state vanishes on it and it never contains the
    /// identity.
    ///
    /// Two-sided absorption (`is_ideal`) holds exactly when every lie
    /// product of `B` lands back in this subspace; that is automatic inside
    /// a definite set and is the premise checked by the beable-status
    /// decision before it quotients by this subspace. For a noncommutative
    /// `B` without that property, absorption can genuinely fail: with
    /// `ω = |0⟩⟨0|` on the full qubit algebra the subspace is the span of
    /// `|1⟩⟨1|`, yet `σx ∘ |1⟩⟨1| = σx/2` escapes it.
    pub fn state_ideal(&self, b: &Segalgebra) -> Result<IdealSubspace, StateError> {
        if b.dim_h() != self.dim() {
            return Err(StateError::WrongDimension {
                expected: self.dim(),
                got: b.dim_h(),
            });
        }
        let root = self.sqrt();
        let images: Vec<Vec<f64>> = b
            .basis()
            .iter()
            .map(|op| pack_complex(&op.mat().matmul(root.mat())))
            .collect();
        let null = null_space_coefficients(&images)?;
        let ops: Vec<HermitianOp> = null
            .iter()
            .map(|c| b.subspace().from_coefficients(c))
            .collect();
        let sub = HermitianSubspace::from_operators(b.dim_h(), &ops)?;
        Ok(IdealSubspace::from_parts_unchecked(b.clone(), sub))
    }

    /// Definite set within an algebra: `{A ∈ S : A − ω(A)·1 ∈ I_ω}`, the
    /// largest subalgebra on which the state is dispersion-free. Always a
    /// Segalgebra containing the identity and the state ideal.
    pub fn definite_set(&self, s: &Segalgebra) -> Result<Segalgebra, StateError> {
        let ideal = self.state_ideal(s)?;
        let id = HermitianOp::identity(s.dim_h());
        let images: Vec<Vec<f64>> = s
            .basis()
            .iter()
            .map(|op| {
                let w = self.evaluate(op)?;
                let shifted = op.sub(&id.scale(w));
                let residue = shifted.sub(&ideal.subspace().project(&shifted));
                Ok(crate::subspace::pack_hermitian(&residue))
            })
            .collect::<Result<_, StateError>>()?;
        let null = null_space_coefficients(&images)?;
        let ops: Vec<HermitianOp> = null
            .iter()
            .map(|c| s.subspace().from_coefficients(c))
            .collect();
        Ok(Segalgebra::from_operators(s.dim_h(), &ops)?)
    }
}

/// Is the state dispersion-free on the whole of `b`? Equivalent to asking
/// whether the definite set is all of `b`.
pub fn is_dispersion_free(omega: &AlgState, b: &Segalgebra) -> Result<bool, StateError> {
    let d = omega.definite_set(b)?;
    Ok(d.dim() == b.dim())
}

/// A dispersion-free state: a real value assignment on an algebra basis that
/// extends to a Jordan homomorphism into ℝ and kills every lie product.
/// Validation checks exactly that, so possession of a value implies the
/// functional is a character of the algebra.
#[derive(Debug, Clone)]
pub struct DispersionFreeState {
    algebra: Segalgebra,
    values: Vec<f64>,
}

impl DispersionFreeState {
    pub fn new(algebra: Segalgebra, values: Vec<f64>) -> Result<Self, StateError> {
        let t = tolerances();
        assert_eq!(
            values.len(),
            algebra.dim(),
            "one value per basis element required"
        );
        let state = DispersionFreeState { algebra, values };

        let unit = state.evaluate_coords(
            &state
                .algebra
                .subspace()
                .project_coefficients(&HermitianOp::identity(state.algebra.dim_h())),
        );
        if (unit - 1.0).abs() > t.df_tol {
            return Err(StateError::UnitNotPreserved { value: unit });
        }

        let mut worst = 0.0f64;
        for i in 0..state.algebra.dim() {
            for j in i..state.algebra.dim() {
                let jp = jordan(state.algebra.op(i), state.algebra.op(j))?;
                let got = state.evaluate_coords(
                    &state.algebra.subspace().project_coefficients(&jp),
                );
                worst = worst.max((got - state.values[i] * state.values[j]).abs());
                if i != j {
                    let lp = lie(state.algebra.op(i), state.algebra.op(j))?;
                    let got = state.evaluate_coords(
                        &state.algebra.subspace().project_coefficients(&lp),
                    );
                    worst = worst.max(got.abs());
                }
            }
        }
        if worst > t.df_tol {
            return Err(StateError::NotDispersionFree { residual: worst });
        }
        Ok(state)
    }

    pub fn algebra(&self) -> &Segalgebra {
        &self.algebra
    }

    /// Values on the algebra's orthonormal basis.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn evaluate_coords(&self, coords: &[f64]) -> f64 {
        coords.iter().zip(&self.values).map(|(c, v)| c * v).sum()
    }

    /// Evaluate on an algebra member (errors on operators outside the span).
    pub fn evaluate(&self, op: &HermitianOp) -> Result<f64, StateError> {
        let m = self.algebra.member(op);
        if !m.contained {
            return Err(StateError::OutsideAlgebra {
                residual: m.residual,
            });
        }
        Ok(self.evaluate_coords(&self.algebra.subspace().project_coefficients(op)))
    }
}

/// A convex mixture of dispersion-free states reproducing some target state
/// on an algebra. Components below the weight floor have been dropped; their
/// total mass is recorded and the remaining weights renormalised.
#[derive(Debug, Clone)]
pub struct MixtureDecomposition {
    components: Vec<(f64, DispersionFreeState)>,
    dropped_mass: f64,
    reproduction_residual: f64,
}

impl MixtureDecomposition {
    /// Validate weights (nonnegative, unit sum within 1e-10) and reproduction
    /// of the target values on the algebra basis within `df_tol`.
    pub fn new(
        components: Vec<(f64, DispersionFreeState)>,
        dropped_mass: f64,
        target_values: &[f64],
    ) -> Result<Self, StateError> {
        let t = tolerances();
        let mut sum = 0.0;
        for (w, _) in &components {
            if *w < -t.df_tol {
                return Err(StateError::NegativeWeight { weight: *w });
            }
            sum += w;
        }
        if (sum - 1.0).abs() > 1e-10 {
            return Err(StateError::NotNormalized { trace: sum });
        }
        let mut residual = 0.0f64;
        if let Some((_, first)) = components.first() {
            let dim = first.algebra().dim();
            assert_eq!(target_values.len(), dim);
            for i in 0..dim {
                let mixed: f64 = components
                    .iter()
                    .map(|(w, chi)| w * chi.values()[i])
                    .sum();
                residual = residual.max((mixed - target_values[i]).abs());
            }
        }
        if residual > t.df_tol {
            return Err(StateError::MixtureMismatch { residual });
        }
        Ok(MixtureDecomposition {
            components,
            dropped_mass,
            reproduction_residual: residual,
        })
    }

    pub fn components(&self) -> &[(f64, DispersionFreeState)] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn dropped_mass(&self) -> f64 {
        self.dropped_mass
    }

    /// Worst basis-expectation mismatch measured at validation time.
    pub fn reproduction_residual(&self) -> f64 {
        self.reproduction_residual
    }

    /// Mixture expectation of an operator in the algebra.
    pub fn evaluate(&self, op: &HermitianOp) -> Result<f64, StateError> {
        let mut acc = 0.0;
        for (w, chi) in &self.components {
            acc += w * chi.evaluate(op)?;
        }
        Ok(acc)
    }
}

fn lex_cmp_values(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).expect("finite character values") {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

/// Value vector of a character together with the orthonormal vectors
/// spanning its joint eigenspace.
type CharacterSpace = (Vec<f64>, Vec<Vec<Complex64>>);

/// Joint eigenspaces of a commutative algebra's basis, with duplicate value
/// vectors merged and the result sorted canonically by value vector.
fn character_spaces(c: &Segalgebra) -> Result<Vec<CharacterSpace>, StateError> {
    let t = tolerances();
    let residual = c.commutativity_residual();
    if residual > t.sub_tol {
        return Err(StateError::NotCommutative { residual });
    }
    let spaces = simultaneous_diagonalize(c.basis())?;
    let mut merged: Vec<(Vec<f64>, Vec<Vec<Complex64>>)> = Vec::new();
    'outer: for space in spaces {
        for (values, basis) in merged.iter_mut() {
            let close = values
                .iter()
                .zip(&space.values)
                .all(|(a, b)| (a - b).abs() <= t.df_tol);
            if close {
                basis.extend(space.basis.iter().cloned());
                continue 'outer;
            }
        }
        merged.push((space.values, space.basis));
    }
    merged.sort_by(|a, b| lex_cmp_values(&a.0, &b.0));
    Ok(merged)
}

/// The characters (dispersion-free states) of a commutative Segalgebra: one
/// per joint eigenvalue pattern of the basis, in canonical order.
pub fn characters(c: &Segalgebra) -> Result<Vec<DispersionFreeState>, StateError> {
    character_spaces(c)?
        .into_iter()
        .map(|(values, _)| DispersionFreeState::new(c.clone(), values))
        .collect()
}

/// Decompose a state over a commutative algebra into its characters. The
/// weight of each character is the state's mass on the corresponding joint
/// eigenspace; components below the weight floor are dropped and the rest
/// renormalised. The mixture is validated against the state's basis
/// expectations before being returned.
pub fn decompose_state(
    omega: &AlgState,
    c: &Segalgebra,
) -> Result<MixtureDecomposition, StateError> {
    if c.dim_h() != omega.dim() {
        return Err(StateError::WrongDimension {
            expected: omega.dim(),
            got: c.dim_h(),
        });
    }
    let t = tolerances();
    let spaces = character_spaces(c)?;
    let mut weighted: Vec<(f64, Vec<f64>)> = Vec::new();
    for (values, basis) in spaces {
        let mut mass = 0.0;
        for v in &basis {
            let img = omega.density().mat().apply(v);
            let mut e = Complex64::new(0.0, 0.0);
            for (vi, wi) in v.iter().zip(&img) {
                e += vi.conj() * wi;
            }
            mass += e.re;
        }
        weighted.push((mass.max(0.0), values));
    }
    let mut dropped = 0.0;
    let mut kept: Vec<(f64, Vec<f64>)> = Vec::new();
    for (w, values) in weighted {
        if w < t.weight_floor {
            dropped += w;
        } else {
            kept.push((w, values));
        }
    }
    let total: f64 = kept.iter().map(|(w, _)| w).sum();
    if total <= 0.0 {
        return Err(StateError::MixtureMismatch { residual: 1.0 });
    }
    let components = kept
        .into_iter()
        .map(|(w, values)| {
            DispersionFreeState::new(c.clone(), values).map(|chi| (w / total, chi))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let target: Vec<f64> = c
        .basis()
        .iter()
        .map(|op| omega.evaluate(op))
        .collect::<Result<_, _>>()?;
    MixtureDecomposition::new(components, dropped, &target)
}

/// A character of a quotient algebra, as values on the representative basis.
#[derive(Debug, Clone)]
pub struct QuotientCharacter {
    values: Vec<f64>,
}

impl QuotientCharacter {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Pull back through the hat map to a value assignment on the parent
    /// algebra's basis.
    pub fn pull_back(&self, q: &QuotientAlgebra) -> Vec<f64> {
        q.parent()
            .basis()
            .iter()
            .map(|op| {
                q.hat_coords(op)
                    .iter()
                    .zip(&self.values)
                    .map(|(c, v)| c * v)
                    .sum()
            })
            .collect()
    }
}

/// Characters of a commutative quotient algebra.
///
/// The quotient Jordan product is associative here, so the multiplication
/// operators `M_x : y ↦ x ∘̂ y` form a commuting family of real symmetric
/// matrices on the representative coordinates (the trace form is
/// associative). Their joint eigenvalue patterns are exactly the quotient's
/// characters.
pub fn quotient_characters(q: &QuotientAlgebra) -> Result<Vec<QuotientCharacter>, StateError> {
    let t = tolerances();
    let residual = q.commutativity_residual();
    if residual > t.sub_tol {
        return Err(StateError::NotCommutative { residual });
    }
    let m = q.dim();
    // Jordan products of representative pairs, in representative coordinates.
    let mut prod_coords: Vec<Vec<Vec<f64>>> = vec![vec![]; m];
    for i in 0..m {
        prod_coords[i] = (0..m)
            .map(|j| {
                let p = jordan(q.rep_basis().op(i), q.rep_basis().op(j)).expect("dims agree");
                q.rep_basis().project_coefficients(&p)
            })
            .collect();
    }
    let mult_ops: Vec<HermitianOp> = (0..m)
        .map(|i| {
            let mut mat = ComplexMatrix::zeros(m);
            for j in 0..m {
                for k in 0..m {
                    mat.set(k, j, Complex64::new(prod_coords[i][j][k], 0.0));
                }
            }
            HermitianOp::symmetrized(mat)
        })
        .collect();
    let spaces = simultaneous_diagonalize(&mult_ops)?;

    let mut chars: Vec<Vec<f64>> = Vec::new();
    'outer: for space in &spaces {
        for existing in &chars {
            if existing
                .iter()
                .zip(&space.values)
                .all(|(a, b)| (a - b).abs() <= t.df_tol)
            {
                continue 'outer;
            }
        }
        chars.push(space.values.clone());
    }
    chars.sort_by(|a, b| lex_cmp_values(a, b));

    // Every character must send the quotient unit to 1.
    let unit_coords = q.hat_coords(&HermitianOp::identity(q.parent().dim_h()));
    for chi in &chars {
        let unit: f64 = unit_coords.iter().zip(chi).map(|(c, v)| c * v).sum();
        if (unit - 1.0).abs() > t.df_tol {
            return Err(StateError::UnitNotPreserved { value: unit });
        }
    }
    Ok(chars
        .into_iter()
        .map(|values| QuotientCharacter { values })
        .collect())
}

/// Decompose a state through a commutative quotient: express the induced
/// functional on the quotient as a convex mixture of quotient characters,
/// then pull every character back to a dispersion-free state on the parent.
pub fn decompose_through_quotient(
    omega: &AlgState,
    q: &QuotientAlgebra,
) -> Result<MixtureDecomposition, StateError> {
    let t = tolerances();
    let chars = quotient_characters(q)?;
    let m = q.dim();
    let phi: Vec<f64> = (0..m)
        .map(|k| omega.evaluate(q.rep_basis().op(k)))
        .collect::<Result<_, _>>()?;

    // Least-squares weights for Σ w_k · χ_k = φ via the character Gram matrix.
    let kk = chars.len();
    let mut gram = ComplexMatrix::zeros(kk);
    for a in 0..kk {
        for b in 0..kk {
            let g: f64 = chars[a]
                .values()
                .iter()
                .zip(chars[b].values())
                .map(|(x, y)| x * y)
                .sum();
            gram.set(a, b, Complex64::new(g, 0.0));
        }
    }
    let rhs: Vec<f64> = (0..kk)
        .map(|a| {
            chars[a]
                .values()
                .iter()
                .zip(&phi)
                .map(|(x, y)| x * y)
                .sum()
        })
        .collect();
    let dec = decompose(&HermitianOp::symmetrized(gram))?;
    let lambda_max = dec.eigenvalues().last().copied().unwrap_or(0.0);
    let cutoff = t.accept_tol * rel_scale(lambda_max.max(0.0));
    let mut weights = vec![0.0f64; kk];
    for (idx, &lambda) in dec.eigenvalues().iter().enumerate() {
        if lambda <= cutoff {
            continue;
        }
        let u = dec.eigenvector(idx);
        let proj: f64 = u.iter().zip(&rhs).map(|(z, r)| z.re * r).sum();
        for (w, z) in weights.iter_mut().zip(&u) {
            *w += proj / lambda * z.re;
        }
    }
    // Residual of the least-squares fit on the quotient.
    let mut fit_residual = 0.0f64;
    for (k, p) in phi.iter().enumerate() {
        let got: f64 = weights
            .iter()
            .zip(&chars)
            .map(|(w, chi)| w * chi.values()[k])
            .sum();
        fit_residual = fit_residual.max((got - p).abs());
    }
    if fit_residual > t.df_tol {
        return Err(StateError::MixtureMismatch {
            residual: fit_residual,
        });
    }

    let mut dropped = 0.0;
    let mut kept: Vec<(f64, &QuotientCharacter)> = Vec::new();
    for (w, chi) in weights.iter().zip(&chars) {
        if *w < -t.df_tol {
            return Err(StateError::NegativeWeight { weight: *w });
        }
        let w = w.max(0.0);
        if w < t.weight_floor {
            dropped += w;
        } else {
            kept.push((w, chi));
        }
    }
    let total: f64 = kept.iter().map(|(w, _)| w).sum();
    if total <= 0.0 {
        return Err(StateError::MixtureMismatch { residual: 1.0 });
    }
    let components = kept
        .into_iter()
        .map(|(w, chi)| {
            DispersionFreeState::new(q.parent().clone(), chi.pull_back(q))
                .map(|state| (w / total, state))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let target: Vec<f64> = q
        .parent()
        .basis()
        .iter()
        .map(|op| omega.evaluate(op))
        .collect::<Result<_, _>>()?;
    MixtureDecomposition::new(components, dropped, &target)
}

/// Every dispersion-free state of an arbitrary Segalgebra, possibly none.
///
/// Any such state kills every lie product, hence the ideal those products
/// generate; if that ideal is improper there are no dispersion-free states
/// at all, otherwise they are exactly the characters of the quotient pulled
/// back through the hat map.
pub fn dispersion_free_states(s: &Segalgebra) -> Result<Vec<DispersionFreeState>, StateError> {
    let mut lies = Vec::new();
    for i in 0..s.dim() {
        for j in (i + 1)..s.dim() {
            lies.push(lie(s.op(i), s.op(j))?);
        }
    }
    let ideal = match ideal_generated_by(s, &lies)? {
        IdealClosure::Improper => return Ok(vec![]),
        IdealClosure::Proper(ideal) => ideal,
    };
    let q = quotient(s, &ideal)?;
    let chars = quotient_characters(&q)?;
    let mut out: Vec<DispersionFreeState> = chars
        .iter()
        .map(|chi| DispersionFreeState::new(s.clone(), chi.pull_back(&q)))
        .collect::<Result<_, _>>()?;
    out.sort_by(|a, b| lex_cmp_values(a.values(), b.values()));
    Ok(out)
}

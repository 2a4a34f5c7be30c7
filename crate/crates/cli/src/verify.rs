//! Randomized invariant suites for the verify-theorems command.
//!
//! Every structural claim the library rests on is exercised here with seeded
//! random instances: product identities, closure detection, quotient
//! homomorphisms, character behaviour, state ideals and definite sets,
//! beable-status oracle agreement, and the maximal-family machinery. Suites
//! run sequentially in a fixed order with per-suite RNG streams, so a given
//! (dims, trials, seed) triple always produces the same report bytes.

use beable_core::linalg::{
    decompose, jordan, lie, op_function, op_norm, ComplexMatrix, HermitianOp,
};
use beable_core::random::{density, hermitian, orthonormal_family, rng_from_seed, unit_vector};
use beable_core::segalgebra::{
    closure_residual, ideal_generated_by, quasicommutativity_residual, quotient, IdealClosure,
    IdealSubspace, Segalgebra,
};
use beable_core::states::{characters, decompose_state, dispersion_free_states};
use beable_core::subspace::{null_space_coefficients, pack_complex, HermitianSubspace};
use beable_core::{
    bub_definite, check_maximality, complexified_closure_check, family_algebra,
    has_beable_status, is_quasicommutative, recover_family, AlgState, EigenFamily,
};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

pub struct SuiteOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub passes: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub notes: Vec<String>,
}

struct Recorder {
    name: &'static str,
    trials: usize,
    passes: usize,
    failures: usize,
    worst: f64,
    notes: Vec<String>,
}

impl Recorder {
    fn new(name: &'static str) -> Recorder {
        Recorder {
            name,
            trials: 0,
            passes: 0,
            failures: 0,
            worst: 0.0,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, residual: f64, note: &str) {
        self.trials += 1;
        if residual.is_finite() {
            self.worst = self.worst.max(residual);
        }
        if ok {
            self.passes += 1;
        } else {
            self.failures += 1;
            if self.notes.len() < 3 {
                self.notes.push(format!("{note} (residual {residual:.3e})"));
            }
        }
    }

    fn finish(self) -> SuiteOutcome {
        SuiteOutcome {
            name: self.name,
            trials: self.trials,
            passes: self.passes,
            failures: self.failures,
            worst_residual: self.worst,
            notes: self.notes,
        }
    }
}

fn suite_rng(seed: u64, index: u64) -> ChaCha8Rng {
    rng_from_seed(seed.wrapping_mul(0x100000001b3).wrapping_add(index))
}

fn scale2(a: &HermitianOp, b: &HermitianOp) -> f64 {
    (a.frobenius_norm() * b.frobenius_norm()).max(1.0)
}

/// The six fixed spin-half product identities with their residuals, reused
/// by the acceptance tests.
pub fn pauli_identity_residuals() -> Vec<(&'static str, f64)> {
    let sx = HermitianOp::pauli_x();
    let sy = HermitianOp::pauli_y();
    let sz = HermitianOp::pauli_z();
    let j = |a: &HermitianOp, b: &HermitianOp| jordan(a, b).unwrap();
    let l = |a: &HermitianOp, b: &HermitianOp| lie(a, b).unwrap();

    vec![
        ("jordan(sx,sy) = 0", j(&sx, &sy).frobenius_norm()),
        (
            "jordan(jordan(sx,sx),sy) = sy",
            j(&j(&sx, &sx), &sy).sub(&sy).frobenius_norm(),
        ),
        (
            "jordan(sx,jordan(sx,sy)) = 0",
            j(&sx, &j(&sx, &sy)).frobenius_norm(),
        ),
        ("lie(sx,sy) = -sz", l(&sx, &sy).add(&sz).frobenius_norm()),
        (
            "lie(sx,lie(sx,sy)) = -sy",
            l(&sx, &l(&sx, &sy)).add(&sy).frobenius_norm(),
        ),
        (
            "lie(lie(sx,sx),sy) = 0",
            l(&l(&sx, &sx), &sy).frobenius_norm(),
        ),
    ]
}

fn dim_for(dims: &[usize], t: usize) -> usize {
    dims[t % dims.len()]
}

fn suite_product_examples(rec: &mut Recorder) {
    for (label, residual) in pauli_identity_residuals() {
        rec.check(residual <= 1e-12, residual, label);
    }
}

fn suite_product_random(rec: &mut Recorder, dims: &[usize], trials: usize, rng: &mut ChaCha8Rng) {
    for t in 0..trials {
        let dim = dim_for(dims, t);
        let a = hermitian(rng, dim);
        let b = hermitian(rng, dim);
        let scale = scale2(&a, &b);

        let jo = jordan(&a, &b).unwrap();
        let li = lie(&a, &b).unwrap();
        let recomposed = &jo.mat().clone() - &li.mat().scale(Complex64::i());
        let split = (&a.mat().matmul(b.mat()) - &recomposed).frobenius_norm() / scale;
        let anti = lie(&b, &a).unwrap().add(&li).frobenius_norm() / scale;
        let sym = jordan(&b, &a).unwrap().sub(&jo).frobenius_norm() / scale;

        let worst = split.max(anti).max(sym);
        rec.check(worst <= 1e-10, worst, "product split / symmetry");
    }
}

fn suite_norm_square(rec: &mut Recorder, dims: &[usize], trials: usize, rng: &mut ChaCha8Rng) {
    for t in 0..trials {
        let a = hermitian(rng, dim_for(dims, t));
        let lhs = op_norm(&jordan(&a, &a).unwrap()).unwrap();
        let rhs = op_norm(&a).unwrap().powi(2);
        let residual = (lhs - rhs).abs() / rhs.max(1.0);
        rec.check(residual <= 1e-10, residual, "norm of square");
    }
}

fn suite_functional_calculus(
    rec: &mut Recorder,
    dims: &[usize],
    trials: usize,
    rng: &mut ChaCha8Rng,
) {
    for t in 0..trials {
        let a = hermitian(rng, dim_for(dims, t));
        let f = op_function(&a, |x| x.abs()).unwrap();
        let commutator =
            lie(&a, &f).unwrap().frobenius_norm() / scale2(&a, &f);
        let generated = Segalgebra::generate(a.dim(), std::slice::from_ref(&a)).unwrap();
        let membership = generated.member(&f);
        let residual = commutator.max(membership.residual);
        rec.check(
            membership.contained && commutator <= 1e-10,
            residual,
            "functional calculus membership",
        );
    }
}

fn suite_spectral(rec: &mut Recorder, dims: &[usize], trials: usize, rng: &mut ChaCha8Rng) {
    for t in 0..trials {
        let a = hermitian(rng, dim_for(dims, t));
        let dec = decompose(&a).unwrap();
        let scale = a.frobenius_norm().max(1.0);

        let rebuild = dec.reconstruct().sub(&a).frobenius_norm() / scale;
        let mut eigen_eq = 0.0f64;
        for k in 0..a.dim() {
            let v = dec.eigenvector(k);
            let av = a.mat().apply(&v);
            let lambda = dec.eigenvalues()[k];
            let r: f64 = av
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - lambda * y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            eigen_eq = eigen_eq.max(r / scale);
        }
        let sorted = dec.eigenvalues().windows(2).all(|w| w[0] <= w[1]);
        let residual = rebuild.max(eigen_eq);
        rec.check(sorted && residual <= 1e-10, residual, "spectral decomposition");
    }
}

fn suite_closure_detection(
    rec: &mut Recorder,
    dims: &[usize],
    trials: usize,
    rng: &mut ChaCha8Rng,
) {
    for t in 0..trials {
        let dim = dim_for(dims, t);
        let a = hermitian(rng, dim);
        let b = hermitian(rng, dim);

        let algebra = Segalgebra::generate(dim, &[a.clone(), b.clone()]).unwrap();
        let closed = complexified_closure_check(algebra.subspace()).unwrap();
        let residual = closure_residual(algebra.subspace()).unwrap();
        rec.check(closed, residual, "generated algebra closes");

        // span{I, a, b} almost never closes; skip the rare instance where it
        // happens to (then the positive check above already covered it).
        let open = HermitianSubspace::from_operators(
            dim,
            &[HermitianOp::identity(dim), a, b],
        )
        .unwrap();
        if open.dim() < algebra.dim() {
            let flagged = !complexified_closure_check(&open).unwrap();
            rec.check(flagged, 0.0, "non-closed span flagged");
        }
    }
}

/// Projectors onto an orthonormal family plus the full Hermitian block on
/// the orthogonal complement; the block is a proper ideal (dim >= 3).
fn block_algebra_with_ideal(
    rng: &mut ChaCha8Rng,
    dim: usize,
) -> (Segalgebra, IdealSubspace) {
    let (vectors, target) = orthonormal_family(rng, dim, 2);
    let fam = EigenFamily::new(vectors.clone(), target).unwrap();
    let s = family_algebra(&fam).unwrap();
    let mut complement = HermitianOp::identity(dim);
    for v in &vectors {
        complement = complement.sub(&HermitianOp::projector(v));
    }
    match ideal_generated_by(&s, &[complement]).unwrap() {
        IdealClosure::Proper(i) => (s, i),
        IdealClosure::Improper => unreachable!("complement block excludes the identity"),
    }
}

fn suite_quotient_homomorphism(
    rec: &mut Recorder,
    dims: &[usize],
    trials: usize,
    rng: &mut ChaCha8Rng,
) {
    let usable: Vec<usize> = dims.iter().copied().filter(|&d| d >= 3).collect();
    if usable.is_empty() {
        return;
    }
    for t in 0..trials {
        let dim = dim_for(&usable, t);
        let (s, ideal) = block_algebra_with_ideal(rng, dim);
        let q = quotient(&s, &ideal).unwrap();

        let mut worst = 0.0f64;
        for _ in 0..4 {
            let coeffs_a: Vec<f64> = (0..s.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let coeffs_b: Vec<f64> = (0..s.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let a = s.subspace().from_coefficients(&coeffs_a);
            let b = s.subspace().from_coefficients(&coeffs_b);
            let scale = scale2(&a, &b);

            let jo = q.hat(&jordan(&a, &b).unwrap());
            let jo_q = q.hat(&jordan(&q.hat(&a), &q.hat(&b)).unwrap());
            worst = worst.max(jo.sub(&jo_q).frobenius_norm() / scale);

            let li = q.hat(&lie(&a, &b).unwrap());
            let li_q = q.hat(&lie(&q.hat(&a), &q.hat(&b)).unwrap());
            worst = worst.max(li.sub(&li_q).frobenius_norm() / scale);
        }
        rec.check(worst <= 1e-9, worst, "quotient homomorphism");
    }
}

fn suite_quasicommutativity(
    rec: &mut Recorder,
    dims: &[usize],
    trials: usize,
    rng: &mut ChaCha8Rng,
) {
    let usable: Vec<usize> = dims.iter().copied().filter(|&d| d >= 3).collect();
    if usable.is_empty() {
        return;
    }
    for t in 0..trials {
        let dim = dim_for(&usable, t);

        // Ideal large enough to absorb every lie product: quotient must come
        // out commutative and the equivalence must report both sides true.
        let (s, ideal) = block_algebra_with_ideal(rng, dim);
        let quasi = is_quasicommutative(&s, &ideal);
        let q = quotient(&s, &ideal).unwrap();
        let q_residual = q.commutativity_residual();
        let q_commutative = q_residual
            <= 1e-9 * beable_core::tol::rel_scale(1.0);
        rec.check(
            quasi && q_commutative,
            q_residual,
            "quasicommutative block algebra",
        );

        // Zero ideal under a noncommutative algebra: both sides must be false.
        let full = Segalgebra::full(dim);
        let zero = IdealSubspace::zero(&full);
        let quasi_full = is_quasicommutative(&full, &zero);
        let q_full = quotient(&full, &zero).unwrap();
        rec.check(
            !quasi_full && q_full.commutativity_residual() > 1e-6,
            0.0,
            "noncommutative algebra is not quasicommutative over zero ideal",
        );
    }
}

fn suite_ideal_monotonicity(
    rec: &mut Recorder,
    dims: &[usize],
    trials: usize,
    rng: &mut ChaCha8Rng,
) {
    let usable: Vec<usize> = dims.iter().copied().filter(|&d| d >= 3).collect();
    if usable.is_empty() {
        return;
    }
    for t in 0..trials {
        let dim = dim_for(&usable, t);
        let (vectors, target) = orthonormal_family(rng, dim, 2);
        let fam = EigenFamily::new(vectors.clone(), target).unwrap();
        let s = family_algebra(&fam).unwrap();

        let mut complement = HermitianOp::identity(dim);
        for v in &vectors {
            complement = complement.sub(&HermitianOp::projector(v));
        }
        let small = match ideal_generated_by(&s, &[complement.clone()]).unwrap() {
            IdealClosure::Proper(i) => i,
            IdealClosure::Improper => unreachable!(),
        };
        let first_projector = HermitianOp::projector(&vectors[0]);
        let large = match ideal_generated_by(&s, &[complement, first_projector]).unwrap() {
            IdealClosure::Proper(i) => i,
            IdealClosure::Improper => unreachable!(),
        };

        let nested = small
            .basis()
            .iter()
            .all(|b| large.member(b).contained);
        let premise = is_quasicommutative(&s, &small);
        let conclusion = is_quasicommutative(&s, &large);
        let residual = quasicommutativity_residual(&s, &large);
        rec.check(
            nested && premise && conclusion,
            residual,
            "quasicommutativity survives ideal growth",
        );
    }
}

/// Commutative algebra generated by one random Hermitian operator.
fn random_commutative(rng: &mut ChaCha8Rng, dim: usize) -> Segalgebra {
    let h = hermitian(rng, dim);
    Segalgebra::generate(dim, std::slice::from_ref(&h)).unwrap()
}

fn random_member(rng: &mut ChaCha8Rng, s: &Segalgebra) -> HermitianOp {
    let coeffs: Vec<f64> = (0..s.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let raw = s.subspace().from_coefficients(&coeffs);
    let norm = raw.frobenius_norm();
    if norm > 1e-9 {
        raw.scale(1.0 / norm)
    } else {
        s.op(0).clone()
    }
}

fn suite_characters(rec: &mut Recorder, dims: &[usize], trials: usize, rng: &mut ChaCha8Rng) {
    for t in 0..trials {
        let dim = dim_for(dims, t);
        let c = random_commutative(rng, dim);
        let chars = characters(&c).unwrap();
        let chi = &chars[t % chars.len()];
        let a = random_member(rng, &c);
        let b = random_member(rng, &c);

        let va = chi.evaluate(&a).unwrap();
        let vb = chi.evaluate(&b).unwrap();
        let v_jordan = chi.evaluate(&jordan(&a, &b).unwrap()).unwrap();
        let v_lie = chi.evaluate(&lie(&a, &b).unwrap()).unwrap();

        let hom = (v_jordan - va * vb).abs();
        let kill = v_lie.abs();
        let spectrum = decompose(&a)
            .unwrap()
            .eigenvalues()
            .iter()
            .map(|l| (va - l).abs())
            .fold(f64::INFINITY, f64::min);

        let ok = hom < 1e-9 && kill < 1e-9 && spectrum < 1e-8;
        rec.check(ok, hom.max(kill).max(spectrum), "character homomorphism");
    }
}

fn suite_character_separation(
    rec: &mut Recorder,
    dims: &[usize],
    trials: usize,
    rng: &mut ChaCha8Rng,
) {
    for t in 0..trials {
        let dim = dim_for(dims, t);

        // Commutative: the value vectors must separate the algebra, i.e. the
        // character-by-basis value matrix has full column rank.
        let c = random_commutative(rng, dim);
        let chars = characters(&c).unwrap();
        let mut gram = vec![0.0f64; c.dim() * c.dim()];
        for chi in &chars {
            for i in 0..c.dim() {
                for j in 0..c.dim() {
                    gram[i * c.dim() + j] += chi.values()[i] * chi.values()[j];
                }
            }
        }
        let gram_op = HermitianOp::new(
            ComplexMatrix::new(
                c.dim(),
                gram.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            )
            .unwrap(),
        )
        .unwrap();
        let gram_dec = decompose(&gram_op).unwrap();
        let min_ev = gram_dec.eigenvalues()[0];
        let max_ev = gram_dec.eigenvalues()[c.dim() - 1].max(1.0);
        rec.check(
            min_ev > 1e-10 * max_ev,
            0.0,
            "characters separate a commutative algebra",
        );

        // Noncommutative: every dispersion-free state vanishes on lie
        // products, so some nonzero member is never separated from zero.
        let s = Segalgebra::generate(dim, &[hermitian(rng, dim), hermitian(rng, dim)]).unwrap();
        if s.is_commutative() {
            continue;
        }
        let witness = 'found: {
            for i in 0..s.dim() {
                for j in (i + 1)..s.dim() {
                    let l = lie(s.op(i), s.op(j)).unwrap();
                    if l.frobenius_norm() > 1e-6 {
                        break 'found Some(l);
                    }
                }
            }
            None
        };
        let Some(l) = witness else { continue };
        let states = dispersion_free_states(&s).unwrap();
        let max_value = states
            .iter()
            .map(|chi| chi.evaluate(&l).unwrap().abs())
            .fold(0.0f64, f64::max);
        rec.check(
            max_value <= 1e-9 * l.frobenius_norm().max(1.0),
            max_value,
            "no dispersion-free state sees a lie product",
        );
    }
}

fn suite_state_ideal(rec: &mut Recorder, dims: &[usize], trials: usize, rng: &mut ChaCha8Rng) {
    for t in 0..trials {
        let dim = dim_for(dims, t);
        let rank = 1 + t % (dim.max(2) - 1);
        let omega = density(rng, dim, rank);

        // Full matrix algebra: operators supported on the kernel of the
        // density form the vanishing set, so its dimension is forced.
        let full = Segalgebra::full(dim);
        let ideal = omega.state_ideal(&full).unwrap();
        let expected = (dim - rank) * (dim - rank);

        let mut vanish = 0.0f64;
        for l in ideal.basis() {
            vanish = vanish.max(
                omega
                    .evaluate(&jordan(l, l).unwrap())
                    .unwrap()
                    .abs(),
            );
        }
        let mut sums = 0.0f64;
        if ideal.dim() >= 2 {
            let a = ideal.basis()[0].add(&ideal.basis()[ideal.dim() - 1]);
            sums = omega.evaluate(&jordan(&a, &a).unwrap()).unwrap().abs();
        }
        let residual = vanish.max(sums);
        rec.check(
            ideal.dim() == expected && residual <= 1e-9,
            residual,
            "state ideal on the full algebra",
        );

        // Commutative algebra: the vanishing set must absorb products.
        let c = random_commutative(rng, dim);
        let c_ideal = omega.state_ideal(&c).unwrap();
        let absorbing =
            beable_core::is_ideal(&c, c_ideal.subspace()).unwrap();
        rec.check(absorbing, 0.0, "vanishing set absorbs in a commutative algebra");
    }
}

fn suite_definite_set(rec: &mut Recorder, dims: &[usize], trials: usize, rng: &mut ChaCha8Rng) {
    for t in 0..trials {
        let dim = dim_for(dims, t);
        let rank = 1 + t % dim;
        let omega = density(rng, dim, rank);
        let s = Segalgebra::full(dim);
        let d = omega.definite_set(&s).unwrap();

        let has_identity = d.contains(&HermitianOp::identity(dim));

        let ideal = omega.state_ideal(&s).unwrap();
        let ideal_inside = ideal.basis().iter().all(|l| d.contains(l));

        let mut dispersion = 0.0f64;
        for a in d.basis() {
            let mean = omega.evaluate(a).unwrap();
            let second = omega.evaluate(&jordan(a, a).unwrap()).unwrap();
            dispersion = dispersion.max((second - mean * mean).abs());
        }

        // Independent second computation: null space of A -> (A - w(A) I) rho^{1/2}.
        let sqrt = omega.sqrt();
        let images: Vec<Vec<f64>> = s
            .basis()
            .iter()
            .map(|e| {
                let mean = omega.evaluate(e).unwrap();
                let shifted = e.sub(&HermitianOp::identity(dim).scale(mean));
                pack_complex(&shifted.mat().matmul(sqrt.mat()))
            })
            .collect();
        let null = null_space_coefficients(&images).unwrap();
        let ops: Vec<HermitianOp> = null
            .iter()
            .map(|c| s.subspace().from_coefficients(c))
            .collect();
        let independent = HermitianSubspace::from_operators(dim, &ops).unwrap();
        let same_span = independent.span_equal(d.subspace());

        rec.check(
            has_identity && ideal_inside && same_span && dispersion <= 1e-9,
            dispersion,
            "definite set structure",
        );
    }
}

fn suite_mixture_round_trip(
    rec: &mut Recorder,
    dims: &[usize],
    trials: usize,
    rng: &mut ChaCha8Rng,
) {
    for t in 0..trials {
        let dim = dim_for(dims, t);
        let rank = 1 + t % dim;
        let omega = density(rng, dim, rank);
        let c = random_commutative(rng, dim);
        let mixture = decompose_state(&omega, &c).unwrap();
        let residual = mixture.reproduction_residual();
        rec.check(residual <= 1e-9, residual, "mixture reproduces the state");
    }
}

/// Direct quasicommutativity oracle: a lie product belongs to the vanishing
/// set exactly when its second moment is zero, so evaluate those moments
/// without any subspace machinery.
fn oracle_quasicommutative(b: &Segalgebra, omega: &AlgState) -> bool {
    for i in 0..b.dim() {
        for j in (i + 1)..b.dim() {
            let l = lie(b.op(i), b.op(j)).unwrap();
            let second = omega.evaluate(&jordan(&l, &l).unwrap()).unwrap();
            let scale = l.frobenius_norm().powi(2).max(1.0);
            if second > 1e-9 * scale {
                return false;
            }
        }
    }
    true
}

fn random_beable_instance(
    rng: &mut ChaCha8Rng,
    dim: usize,
    kind: usize,
) -> (Segalgebra, AlgState) {
    match kind % 5 {
        0 => (Segalgebra::full(dim), AlgState::from_vector(&unit_vector(rng, dim)).unwrap()),
        1 => (Segalgebra::full(dim), density(rng, dim, dim)),
        2 => (random_commutative(rng, dim), density(rng, dim, 1 + dim / 2)),
        3 => {
            let count = 1 + (dim > 2) as usize;
            let (vectors, target) = orthonormal_family(rng, dim, count);
            let fam = EigenFamily::new(vectors, target.clone()).unwrap();
            let algebra = family_algebra(&fam).unwrap();
            (algebra, AlgState::from_vector(&target).unwrap())
        }
        _ => {
            let state = AlgState::from_vector(&unit_vector(rng, dim)).unwrap();
            let d = state.definite_set(&Segalgebra::full(dim)).unwrap();
            (d, state)
        }
    }
}

fn suite_beable_oracle(rec: &mut Recorder, dims: &[usize], trials: usize, rng: &mut ChaCha8Rng) {
    for t in 0..trials {
        let dim = dim_for(dims, t);
        let (algebra, omega) = random_beable_instance(rng, dim, t);
        let verdict = has_beable_status(&algebra, &omega).unwrap();
        let oracle = oracle_quasicommutative(&algebra, &omega);

        // On a positive verdict the lie residual and the reproduction error
        // measure numerical slack; on a negative one the lie residual is
        // large by design, so it is not a residual to report.
        let mut residual = 0.0f64;
        let mut ok = verdict.has_status() == oracle;
        if verdict.has_status() {
            residual = verdict.worst_lie_residual();
            match verdict.decomposition() {
                Some(mix) => {
                    residual = residual.max(mix.reproduction_residual());
                    ok = ok && mix.reproduction_residual() <= 1e-9;
                }
                None => ok = false,
            }
        } else {
            ok = ok && verdict.witness().is_some();
        }
        rec.check(ok, residual, "beable verdict agrees with direct oracle");
    }
}

fn suite_faithful_definite(
    rec: &mut Recorder,
    dims: &[usize],
    trials: usize,
    rng: &mut ChaCha8Rng,
) {
    for t in 0..trials {
        let dim = dim_for(dims, t);
        let omega = density(rng, dim, dim);
        let d = omega.definite_set(&Segalgebra::full(dim)).unwrap();
        let identity_residual = d
            .subspace()
            .member(&HermitianOp::identity(dim))
            .residual;
        rec.check(
            omega.is_faithful() && d.dim() == 1 && identity_residual <= 1e-9,
            identity_residual,
            "faithful state pins the definite set to the identity line",
        );
    }
}

fn random_observable_with_degeneracy(rng: &mut ChaCha8Rng, dim: usize) -> HermitianOp {
    let base = hermitian(rng, dim);
    let dec = decompose(&base).unwrap();
    // Collapse eigenvalues onto a few integer levels to force degeneracy.
    let levels: Vec<f64> = dec
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(k, _)| (1 + k % 3) as f64)
        .collect();
    dec.assemble(&levels)
}

fn suite_bub_definite(rec: &mut Recorder, dims: &[usize], trials: usize, rng: &mut ChaCha8Rng) {
    for t in 0..trials {
        let dim = dim_for(dims, t);
        let v = unit_vector(rng, dim);
        let r = if t % 2 == 0 {
            hermitian(rng, dim)
        } else {
            random_observable_with_degeneracy(rng, dim)
        };
        let bub = bub_definite(&v, &r).unwrap();
        let state = AlgState::from_vector(&v).unwrap();
        let verdict = has_beable_status(bub.algebra(), &state).unwrap();
        let residual = verdict
            .decomposition()
            .map_or(f64::INFINITY, |m| m.reproduction_residual());
        rec.check(
            verdict.has_status() && residual <= 1e-9,
            residual,
            "preferred-observable algebra keeps beable status",
        );
    }
}

fn random_family(rng: &mut ChaCha8Rng, dim: usize) -> EigenFamily {
    let count = 1 + rng.gen_range(0..dim);
    let (vectors, target) = orthonormal_family(rng, dim, count);
    EigenFamily::new(vectors, target).unwrap()
}

fn suite_family_maximality(
    rec: &mut Recorder,
    dims: &[usize],
    trials: usize,
    rng: &mut ChaCha8Rng,
    seed: u64,
) {
    let families = trials.clamp(2, 12);
    let adjoin_budget = trials.clamp(10, 200);
    for t in 0..families {
        let dim = dim_for(dims, t);
        let fam = random_family(rng, dim);
        let algebra = family_algebra(&fam).unwrap();
        let state = fam.target_state();
        let maximal =
            check_maximality(&algebra, &state, adjoin_budget, seed.wrapping_add(t as u64))
                .unwrap();
        rec.check(maximal, 0.0, "family algebra admits no beable extension");
    }
}

fn suite_family_recovery(
    rec: &mut Recorder,
    dims: &[usize],
    trials: usize,
    rng: &mut ChaCha8Rng,
) {
    for t in 0..trials {
        let dim = dim_for(dims, t);
        let fam = random_family(rng, dim);
        let algebra = family_algebra(&fam).unwrap();
        let recovered = recover_family(&algebra, fam.target()).unwrap();
        let rebuilt = family_algebra(&recovered).unwrap();
        let distance = rebuilt.subspace().span_distance(algebra.subspace());
        rec.check(
            recovered.len() == fam.len() && rebuilt.span_equal(&algebra),
            distance,
            "family round-trips through its algebra",
        );
    }
}

pub fn run_suites(dims: &[usize], trials: usize, seed: u64) -> Vec<SuiteOutcome> {
    let mut outcomes = Vec::new();
    let mut index = 0u64;
    let mut run = |name: &'static str,
                   body: &mut dyn FnMut(&mut Recorder, &mut ChaCha8Rng)| {
        let mut rec = Recorder::new(name);
        let mut rng = suite_rng(seed, index);
        index += 1;
        body(&mut rec, &mut rng);
        outcomes.push(rec.finish());
    };

    run("product-identities", &mut |rec, _| {
        suite_product_examples(rec)
    });
    run("product-split", &mut |rec, rng| {
        suite_product_random(rec, dims, trials, rng)
    });
    run("norm-square", &mut |rec, rng| {
        suite_norm_square(rec, dims, trials, rng)
    });
    run("functional-calculus", &mut |rec, rng| {
        suite_functional_calculus(rec, dims, trials, rng)
    });
    run("spectral-decomposition", &mut |rec, rng| {
        suite_spectral(rec, dims, trials, rng)
    });
    run("closure-detection", &mut |rec, rng| {
        suite_closure_detection(rec, dims, trials, rng)
    });
    run("quotient-homomorphism", &mut |rec, rng| {
        suite_quotient_homomorphism(rec, dims, trials.min(60), rng)
    });
    run("quasicommutativity-equivalence", &mut |rec, rng| {
        suite_quasicommutativity(rec, dims, trials.min(60), rng)
    });
    run("ideal-monotonicity", &mut |rec, rng| {
        suite_ideal_monotonicity(rec, dims, trials.min(60), rng)
    });
    run("character-homomorphism", &mut |rec, rng| {
        suite_characters(rec, dims, trials, rng)
    });
    run("character-separation", &mut |rec, rng| {
        suite_character_separation(rec, dims, trials.min(60), rng)
    });
    run("state-ideal", &mut |rec, rng| {
        suite_state_ideal(rec, dims, trials.min(100), rng)
    });
    run("definite-set", &mut |rec, rng| {
        suite_definite_set(rec, dims, trials.min(100), rng)
    });
    run("mixture-round-trip", &mut |rec, rng| {
        suite_mixture_round_trip(rec, dims, trials, rng)
    });
    run("beable-oracle", &mut |rec, rng| {
        suite_beable_oracle(rec, dims, trials, rng)
    });
    run("faithful-definite-set", &mut |rec, rng| {
        suite_faithful_definite(rec, dims, trials.min(100), rng)
    });
    run("bub-definite-status", &mut |rec, rng| {
        suite_bub_definite(rec, dims, trials.min(80), rng)
    });
    let seed_copy = seed;
    run("family-maximality", &mut |rec, rng| {
        suite_family_maximality(rec, dims, trials, rng, seed_copy)
    });
    run("family-recovery", &mut |rec, rng| {
        suite_family_recovery(rec, dims, trials.min(80), rng)
    });

    outcomes
}

pub fn suites_to_json(outcomes: &[SuiteOutcome]) -> (Value, Map<String, Value>, bool, f64) {
    let mut residuals = Map::new();
    let mut all_passed = true;
    let mut worst = 0.0f64;
    let suites: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            all_passed &= o.failures == 0;
            worst = worst.max(o.worst_residual);
            residuals.insert(o.name.to_string(), json!(o.worst_residual));
            json!({
                "name": o.name,
                "trials": o.trials,
                "passes": o.passes,
                "failures": o.failures,
                "worst_residual": o.worst_residual,
                "notes": o.notes,
            })
        })
        .collect();
    let results = json!({
        "suites": suites,
        "all_passed": all_passed,
        "worst_residual": worst,
    });
    (results, residuals, all_passed, worst)
}

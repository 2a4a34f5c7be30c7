//! Acceptance gate: ten numbered criteria, one test each, with the stated
//! tolerances and runtime budgets. Each test prints a single summary line;
//! a failure panics with the offending instance.

use std::process::Command;
use std::time::Instant;

use beable_core::linalg::{decompose, jordan, lie, HermitianOp};
use beable_core::random::{density, hermitian, orthonormal_family, rng_from_seed, unit_vector};
use beable_core::states::characters;
use beable_core::subspace::HermitianSubspace;
use beable_core::{
    bub_definite, check_maximality, complexified_closure_check, decompose_state, family_algebra,
    has_beable_status, recover_family, AlgState, EigenFamily, Segalgebra,
};
use beable_lab::verify::pauli_identity_residuals;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

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

#[test]
fn criterion_01_product_identities_exact() {
    let started = Instant::now();
    for (label, residual) in pauli_identity_residuals() {
        assert!(residual <= 1e-12, "{label}: residual {residual:.3e}");
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    println!("criterion 1: PASS (six identity residuals <= 1e-12 in {elapsed:?})");
}

#[test]
fn criterion_02_closure_equivalence() {
    let started = Instant::now();
    let mut rng = rng_from_seed(0x0201);

    for t in 0..100usize {
        let dim = 2 + t % 5;
        let algebra =
            Segalgebra::generate(dim, &[hermitian(&mut rng, dim), hermitian(&mut rng, dim)])
                .unwrap();
        assert!(
            complexified_closure_check(algebra.subspace()).unwrap(),
            "instance {t}: generated algebra flagged as not closed"
        );
    }

    let mut rejected = 0usize;
    let mut attempts = 0usize;
    while rejected < 100 {
        attempts += 1;
        assert!(attempts < 300, "could not find 100 non-closed spans");
        let dim = 2 + attempts % 5;
        let a = hermitian(&mut rng, dim);
        let b = hermitian(&mut rng, dim);
        let span = HermitianSubspace::from_operators(
            dim,
            &[HermitianOp::identity(dim), a.clone(), b.clone()],
        )
        .unwrap();
        // A random three-dimensional span is never product-closed; skip the
        // measure-zero exception by regenerating instead of asserting on it.
        let closed_dim = Segalgebra::generate(dim, &[a, b]).unwrap().dim();
        if closed_dim == span.dim() {
            continue;
        }
        assert!(
            !complexified_closure_check(&span).unwrap(),
            "attempt {attempts}: non-closed span passed the closure check"
        );
        rejected += 1;
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, budget 30 s");
    println!("criterion 2: PASS (100 closed + 100 non-closed classified in {elapsed:?})");
}

#[test]
fn criterion_03_character_triples() {
    let started = Instant::now();
    let mut rng = rng_from_seed(0x0301);
    let mut triples = 0usize;

    while triples < 500 {
        let dim = 2 + triples % 5;
        let c = random_commutative(&mut rng, dim);
        let chars = characters(&c).unwrap();
        let chi = &chars[triples % chars.len()];
        let a = random_member(&mut rng, &c);
        let b = random_member(&mut rng, &c);

        let va = chi.evaluate(&a).unwrap();
        let vb = chi.evaluate(&b).unwrap();
        let v_jordan = chi.evaluate(&jordan(&a, &b).unwrap()).unwrap();
        let v_lie = chi.evaluate(&lie(&a, &b).unwrap()).unwrap();
        assert!(
            (v_jordan - va * vb).abs() < 1e-9,
            "triple {triples}: multiplicativity residual {:.3e}",
            (v_jordan - va * vb).abs()
        );
        assert!(v_lie.abs() < 1e-9, "triple {triples}: lie value {v_lie:.3e}");

        let spectrum_gap = decompose(&a)
            .unwrap()
            .eigenvalues()
            .iter()
            .map(|l| (va - l).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(
            spectrum_gap < 1e-8,
            "triple {triples}: value {va} misses the spectrum by {spectrum_gap:.3e}"
        );
        triples += 1;
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60 s");
    println!("criterion 3: PASS (500 character triples within tolerance in {elapsed:?})");
}

#[test]
fn criterion_04_mixture_round_trip() {
    let started = Instant::now();
    let mut rng = rng_from_seed(0x0401);

    for t in 0..200usize {
        let dim = 2 + t % 5;
        let rank = 1 + t % dim;
        let omega = density(&mut rng, dim, rank);
        let c = random_commutative(&mut rng, dim);
        let mixture = decompose_state(&omega, &c).unwrap();

        for b in c.basis() {
            let direct = omega.evaluate(b).unwrap();
            let mixed: f64 = mixture
                .components()
                .iter()
                .map(|(w, chi)| w * chi.evaluate(b).unwrap())
                .sum();
            assert!(
                (direct - mixed).abs() <= 1e-9,
                "pair {t}: expectation off by {:.3e}",
                (direct - mixed).abs()
            );
        }
    }

    let elapsed = started.elapsed();
    println!("criterion 4: PASS (200 state/algebra pairs reproduced in {elapsed:?})");
}

/// Quasicommutativity decided directly from second moments of lie products,
/// with none of the library's subspace machinery.
fn oracle_quasicommutative(b: &Segalgebra, omega: &AlgState) -> bool {
    for i in 0..b.dim() {
        for j in (i + 1)..b.dim() {
            let l = lie(b.op(i), b.op(j)).unwrap();
            let second = omega.evaluate(&jordan(&l, &l).unwrap()).unwrap();
            if second > 1e-9 * l.frobenius_norm().powi(2).max(1.0) {
                return false;
            }
        }
    }
    true
}

fn beable_instance(rng: &mut ChaCha8Rng, dim: usize, kind: usize) -> (Segalgebra, AlgState) {
    match kind % 5 {
        0 => (
            Segalgebra::full(dim),
            AlgState::from_vector(&unit_vector(rng, dim)).unwrap(),
        ),
        1 => (Segalgebra::full(dim), density(rng, dim, dim)),
        2 => (random_commutative(rng, dim), density(rng, dim, 1 + dim / 2)),
        3 => {
            let count = 1 + (dim > 2) as usize;
            let (vectors, target) = orthonormal_family(rng, dim, count);
            let fam = EigenFamily::new(vectors, target.clone()).unwrap();
            (family_algebra(&fam).unwrap(), AlgState::from_vector(&target).unwrap())
        }
        _ => {
            let state = AlgState::from_vector(&unit_vector(rng, dim)).unwrap();
            let d = state.definite_set(&Segalgebra::full(dim)).unwrap();
            (d, state)
        }
    }
}

#[test]
fn criterion_05_verdict_matches_oracle() {
    let started = Instant::now();
    let mut rng = rng_from_seed(0x0501);

    for t in 0..500usize {
        let dim = 2 + t % 4;
        let (algebra, omega) = beable_instance(&mut rng, dim, t);
        let verdict = has_beable_status(&algebra, &omega).unwrap();
        let oracle = oracle_quasicommutative(&algebra, &omega);
        assert_eq!(
            verdict.has_status(),
            oracle,
            "instance {t} (dim {dim}, kind {}): verdict disagrees with oracle",
            t % 5
        );
        if verdict.has_status() {
            let mixture = verdict
                .decomposition()
                .expect("positive verdict must carry a decomposition");
            for b in algebra.basis() {
                let direct = omega.evaluate(b).unwrap();
                let mixed: f64 = mixture
                    .components()
                    .iter()
                    .map(|(w, chi)| w * chi.evaluate(b).unwrap())
                    .sum();
                assert!(
                    (direct - mixed).abs() <= 1e-9,
                    "instance {t}: decomposition off by {:.3e}",
                    (direct - mixed).abs()
                );
            }
        }
    }

    let elapsed = started.elapsed();
    println!("criterion 5: PASS (500 verdicts agree with the direct oracle in {elapsed:?})");
}

#[test]
fn criterion_06_preferred_observable_cases() {
    let started = Instant::now();
    let mut rng = rng_from_seed(0x0601);

    // Eigenstate case: the subalgebra coincides with the definite set.
    for t in 0..50usize {
        let dim = 2 + t % 5;
        let r = hermitian(&mut rng, dim);
        let v = decompose(&r).unwrap().eigenvector(t % dim);
        let bub = bub_definite(&v, &r).unwrap();
        let state = AlgState::from_vector(&v).unwrap();
        let definite = state.definite_set(&Segalgebra::full(dim)).unwrap();
        let distance = bub
            .algebra()
            .subspace()
            .span_distance(definite.subspace());
        assert!(
            bub.algebra().span_equal(&definite) && distance < 1e-9,
            "instance {t}: span distance {distance:.3e}"
        );
        let verdict = has_beable_status(bub.algebra(), &state).unwrap();
        assert!(verdict.has_status(), "instance {t}: eigenstate case lost status");
    }

    // Nondegenerate observable with full support: commutative outcome.
    for t in 0..50usize {
        let dim = 2 + t % 5;
        let r = hermitian(&mut rng, dim);
        let v = unit_vector(&mut rng, dim);
        let bub = bub_definite(&v, &r).unwrap();
        assert!(
            bub.kept_masses().iter().all(|&m| m > 1e-12),
            "instance {t}: a kept mass fell below the floor"
        );
        if bub.family().len() == dim {
            assert!(
                bub.algebra().is_commutative(),
                "instance {t}: full-support nondegenerate case not commutative"
            );
        }
        let state = AlgState::from_vector(&v).unwrap();
        let verdict = has_beable_status(bub.algebra(), &state).unwrap();
        assert!(verdict.has_status(), "instance {t}: output lost beable status");
    }

    let elapsed = started.elapsed();
    println!("criterion 6: PASS (eigenstate + nondegenerate cases in {elapsed:?})");
}

#[test]
fn criterion_07_family_maximality_and_recovery() {
    let started = Instant::now();
    let mut rng = rng_from_seed(0x0701);

    // Two families per dimension, each facing 200 adjoin trials.
    for (t, dim) in (2..=6usize).flat_map(|d| [d, d]).enumerate() {
        let count = 1 + rng.gen_range(0..dim);
        let (vectors, target) = orthonormal_family(&mut rng, dim, count);
        let fam = EigenFamily::new(vectors, target).unwrap();
        let algebra = family_algebra(&fam).unwrap();
        let state = fam.target_state();
        let maximal = check_maximality(&algebra, &state, 200, 0x0702 + t as u64).unwrap();
        assert!(maximal, "family {t} (dim {dim}): false extension accepted");
    }

    for t in 0..100usize {
        let dim = 2 + t % 5;
        let count = 1 + rng.gen_range(0..dim);
        let (vectors, target) = orthonormal_family(&mut rng, dim, count);
        let fam = EigenFamily::new(vectors, target).unwrap();
        let algebra = family_algebra(&fam).unwrap();
        let recovered = recover_family(&algebra, fam.target()).unwrap();
        let rebuilt = family_algebra(&recovered).unwrap();
        assert!(
            rebuilt.span_equal(&algebra),
            "family {t} (dim {dim}): recovery changed the span"
        );
    }

    let elapsed = started.elapsed();
    println!("criterion 7: PASS (10x200 adjoin trials + 100 recoveries in {elapsed:?})");
}

/// Full-rank state with a guaranteed spectral floor of `0.1 / dim`.
fn faithful_state(rng: &mut ChaCha8Rng, dim: usize) -> AlgState {
    let bulk = density(rng, dim, dim);
    let mixed = bulk
        .density()
        .scale(0.9)
        .add(&HermitianOp::identity(dim).scale(0.1 / dim as f64));
    let omega = AlgState::from_density(mixed.mat().clone()).unwrap();
    assert!(omega.is_faithful());
    omega
}

#[test]
fn criterion_08_faithful_states_force_commutativity() {
    let started = Instant::now();
    let mut rng = rng_from_seed(0x0801);

    let mut noncommutative = 0usize;
    let mut attempts = 0usize;
    while noncommutative < 100 {
        attempts += 1;
        assert!(attempts < 200, "random generators kept commuting");
        let dim = 2 + attempts % 5;
        let algebra =
            Segalgebra::generate(dim, &[hermitian(&mut rng, dim), hermitian(&mut rng, dim)])
                .unwrap();
        if algebra.is_commutative() {
            continue;
        }
        noncommutative += 1;
        let omega = faithful_state(&mut rng, dim);
        let verdict = has_beable_status(&algebra, &omega).unwrap();
        assert!(
            !verdict.has_status(),
            "instance {noncommutative}: faithful state granted status to a \
             noncommutative algebra"
        );
        assert!(verdict.witness().is_some());
    }

    for t in 0..25usize {
        let dim = 2 + t % 5;
        let omega = faithful_state(&mut rng, dim);
        let definite = omega.definite_set(&Segalgebra::full(dim)).unwrap();
        assert_eq!(
            definite.dim(),
            1,
            "instance {t}: faithful definite set not the identity line"
        );
        assert!(definite.contains(&HermitianOp::identity(dim)));
    }

    let elapsed = started.elapsed();
    println!("criterion 8: PASS (100 denials + 25 identity-line checks in {elapsed:?})");
}

#[test]
fn criterion_09_singlet_scenario() {
    let corpus_text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/corpus/singlet.json"
    ))
    .unwrap();
    let doc: serde_json::Value = serde_json::from_str(&corpus_text).unwrap();

    // State construction: unit norm before any renormalisation.
    let raw = beable_core::json::vector_from_json(&doc["state"]["v"]).unwrap();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    assert!((norm - 1.0).abs() <= 1e-12, "corpus vector norm {norm}");

    // The vector is the joint zero mode of all three total-spin components.
    for axis in ["x", "y", "z"] {
        let s1 = beable_core::json::hermitian_from_json(&doc["operators"][format!("s1{axis}")])
            .unwrap();
        let s2 = beable_core::json::hermitian_from_json(&doc["operators"][format!("s2{axis}")])
            .unwrap();
        let total = s1.add(&s2);
        let image = total.mat().apply(&raw);
        let r: f64 = image.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        assert!(r <= 1e-12, "total spin {axis} leaves residual {r:.3e}");
    }

    // Run the bundled scenario end to end and time it.
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_beable-lab"))
        .args(["--corpus", "singlet", "--json"])
        .output()
        .unwrap();
    let elapsed = started.elapsed();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");

    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"]["verdict"]["has_status"], true);
    let reproduction = report["residuals"]["reproduction_residual"].as_f64().unwrap();
    assert!(reproduction < 1e-9, "report reproduction {reproduction:.3e}");

    // Independent replay: rebuild the subalgebra and confirm the mixture
    // reproduces every basis expectation.
    let preferred =
        beable_core::json::hermitian_from_json(&doc["operators"]["szsq1"]).unwrap();
    let bub = bub_definite(&raw, &preferred).unwrap();
    assert_eq!(bub.algebra().dim(), 51);
    let omega = AlgState::from_vector(&raw).unwrap();
    let verdict = has_beable_status(bub.algebra(), &omega).unwrap();
    let mixture = verdict.decomposition().expect("singlet case has status");
    for b in bub.algebra().basis() {
        let direct = omega.evaluate(b).unwrap();
        let mixed: f64 = mixture
            .components()
            .iter()
            .map(|(w, chi)| w * chi.evaluate(b).unwrap())
            .sum();
        assert!(
            (direct - mixed).abs() <= 1e-9,
            "basis expectation off by {:.3e}",
            (direct - mixed).abs()
        );
    }

    println!("criterion 9: PASS (norm, zero modes, 51-dim algebra, mixture, {elapsed:?})");
}

#[test]
fn criterion_10_verify_runs_are_reproducible() {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_beable-lab"))
            .args([
                "verify-theorems",
                "--dims",
                "2,3",
                "--trials",
                "50",
                "--seed",
                "7",
                "--json",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let mut report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        report.as_object_mut().unwrap().remove("timings");
        serde_json::to_string(&report).unwrap()
    };

    let first = run();
    let second = run();
    assert_eq!(first, second, "verify payloads differ between identical runs");
    println!("criterion 10: PASS (identical payloads, timings excluded)");
}

//! Cross-checks of the in-crate eigensolver and operator norm against
//! nalgebra's independent implementations.

use beable_core::linalg::{decompose, op_norm, ComplexMatrix};
use beable_core::random::{hermitian, rng_from_seed};
use nalgebra::DMatrix;
use num_complex::Complex64;

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.dim(), m.dim(), |i, j| m.at(i, j))
}

#[test]
fn eigenvalues_match_reference_solver() {
    for seed in 0..40u64 {
        let mut rng = rng_from_seed(seed);
        let dim = 2 + (seed % 7) as usize;
        let a = hermitian(&mut rng, dim);

        let ours = decompose(&a).unwrap();
        let mut reference: Vec<f64> = to_nalgebra(a.mat())
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        reference.sort_by(|x, y| x.partial_cmp(y).unwrap());

        let scale = a.frobenius_norm().max(1.0);
        for (l_ours, l_ref) in ours.eigenvalues().iter().zip(&reference) {
            assert!(
                (l_ours - l_ref).abs() <= 1e-9 * scale,
                "seed {seed}: eigenvalue {l_ours} vs reference {l_ref}"
            );
        }

        let rebuilt = ours.reconstruct();
        let residual = rebuilt.sub(&a).frobenius_norm();
        assert!(
            residual <= 1e-11 * scale,
            "seed {seed}: reconstruction residual {residual:.3e}"
        );
    }
}

#[test]
fn eigenvectors_satisfy_the_eigenvalue_equation() {
    for seed in 0..20u64 {
        let mut rng = rng_from_seed(1000 + seed);
        let dim = 2 + (seed % 5) as usize;
        let a = hermitian(&mut rng, dim);
        let dec = decompose(&a).unwrap();
        let scale = a.frobenius_norm().max(1.0);
        for k in 0..dim {
            let v = dec.eigenvector(k);
            let av = a.mat().apply(&v);
            let lambda = dec.eigenvalues()[k];
            let residual: f64 = av
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - lambda * y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(
                residual <= 1e-10 * scale,
                "seed {seed}, index {k}: Av - lambda v residual {residual:.3e}"
            );
        }
    }
}

#[test]
fn operator_norm_matches_largest_singular_value() {
    for seed in 0..40u64 {
        let mut rng = rng_from_seed(2000 + seed);
        let dim = 2 + (seed % 7) as usize;
        let a = hermitian(&mut rng, dim);

        let ours = op_norm(&a).unwrap();
        let svd = to_nalgebra(a.mat()).svd(false, false);
        let reference = svd
            .singular_values
            .iter()
            .copied()
            .fold(0.0f64, f64::max);

        assert!(
            (ours - reference).abs() <= 1e-10 * reference.max(1.0),
            "seed {seed}: op_norm {ours} vs singular value {reference}"
        );
    }
}

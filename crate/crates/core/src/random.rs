//! Seeded random generators for the objects the toolkit manipulates.
//!
//! Everything runs off a caller-supplied [`rand::Rng`]; use [`rng_from_seed`]
//! when reproducibility matters (reports, certificates, test corpora).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, HermitianOp};
use crate::states::AlgState;

/// Deterministic stream cipher RNG from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-ish random unit vector: complex gaussian components, normalised.
pub fn unit_vector(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.iter().map(|z| z / norm).collect();
        }
    }
}

/// GUE-style random Hermitian operator with O(1) entries.
pub fn hermitian(rng: &mut impl Rng, dim: usize) -> HermitianOp {
    let mut g = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            g.set(i, j, gaussian_complex(rng));
        }
    }
    let sym = &g.adjoint().scale(Complex64::new(0.5, 0.0))
        + &g.scale(Complex64::new(0.5, 0.0));
    HermitianOp::new(sym).expect("symmetrised gaussian is Hermitian")
}

/// Random unitary via Gram-Schmidt on gaussian columns.
pub fn unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        for c in &cols {
            let overlap: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= overlap * ci;
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.iter().map(|z| z / norm).collect());
        }
    }
    let mut u = ComplexMatrix::zeros(dim);
    for (j, c) in cols.iter().enumerate() {
        for (i, z) in c.iter().enumerate() {
            u.set(i, j, *z);
        }
    }
    u
}

/// Random density operator of the given rank (`rank = dim` gives a faithful
/// state almost surely).
pub fn density(rng: &mut impl Rng, dim: usize, rank: usize) -> AlgState {
    assert!(rank >= 1 && rank <= dim, "rank must lie in 1..=dim");
    loop {
        let mut w = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..rank {
                w.set(i, j, gaussian_complex(rng));
            }
        }
        let rho = w.matmul(&w.adjoint());
        let tr = rho.trace();
        if tr.re < 1e-6 {
            continue;
        }
        let rho = rho.scale(Complex64::new(1.0 / tr.re, 0.0));
        if let Ok(state) = AlgState::from_density(rho) {
            return state;
        }
    }
}

/// `count` mutually orthonormal vectors together with a unit target vector
/// supported on all of them (every overlap magnitude at least ~0.2/√count).
pub fn orthonormal_family(
    rng: &mut impl Rng,
    dim: usize,
    count: usize,
) -> (Vec<Vec<Complex64>>, Vec<Complex64>) {
    assert!(count >= 1 && count <= dim, "family size must lie in 1..=dim");
    let u = unitary(rng, dim);
    let vectors: Vec<Vec<Complex64>> = (0..count)
        .map(|j| (0..dim).map(|i| u.at(i, j)).collect())
        .collect();
    let coeffs: Vec<Complex64> = (0..count)
        .map(|_| {
            let mag = 0.2 + 0.8 * rng.gen::<f64>();
            let phase = rng.gen::<f64>() * std::f64::consts::TAU;
            Complex64::from_polar(mag, phase)
        })
        .collect();
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let mut target = vec![Complex64::new(0.0, 0.0); dim];
    for (c, v) in coeffs.iter().zip(&vectors) {
        for (t, vi) in target.iter_mut().zip(v) {
            *t += c / norm * vi;
        }
    }
    (vectors, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::decompose;

    #[test]
    fn seeded_streams_are_reproducible() {
        let a = hermitian(&mut rng_from_seed(7), 4);
        let b = hermitian(&mut rng_from_seed(7), 4);
        assert!(a.sub(&b).frobenius_norm() == 0.0);
    }

    #[test]
    fn unitary_columns_are_orthonormal() {
        let u = unitary(&mut rng_from_seed(3), 5);
        let gram = u.adjoint().matmul(&u);
        let id = ComplexMatrix::identity(5);
        assert!((&gram - &id).frobenius_norm() < 1e-12);
    }

    #[test]
    fn density_rank_controls_faithfulness() {
        let full = density(&mut rng_from_seed(11), 4, 4);
        assert!(full.is_faithful());
        let low = density(&mut rng_from_seed(11), 4, 2);
        assert!(!low.is_faithful());
        let eig = decompose(low.density()).unwrap();
        let nonzero = eig.eigenvalues().iter().filter(|&&v| v > 1e-10).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn family_target_overlaps_every_member() {
        let (vectors, target) = orthonormal_family(&mut rng_from_seed(5), 6, 3);
        for v in &vectors {
            let overlap: Complex64 = v.iter().zip(&target).map(|(a, b)| a.conj() * b).sum();
            assert!(overlap.norm() > 0.05);
        }
        let norm: f64 = target.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}

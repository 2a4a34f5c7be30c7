//! Randomized invariants of the algebra layer: product split, norm identity,
//! closure idempotence, quotient homomorphism, functional calculus membership.

use beable_core::linalg::{jordan, lie, op_function, op_norm, re_im_product};
use beable_core::random::{hermitian, orthonormal_family, rng_from_seed};
use beable_core::segalgebra::{ideal_generated_by, quotient, IdealClosure, Segalgebra};
use beable_core::EigenFamily;
use num_complex::Complex64;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = usize> {
    2usize..=6
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The ordinary matrix product decomposes as `ab = re + i·im` with both
    /// parts Hermitian.
    #[test]
    fn ordinary_product_splits(seed in any::<u64>(), dim in dims()) {
        let mut rng = rng_from_seed(seed);
        let a = hermitian(&mut rng, dim);
        let b = hermitian(&mut rng, dim);
        let (re, im) = re_im_product(&a, &b).unwrap();
        let recomposed = &re.mat().clone() + &im.mat().scale(Complex64::i());
        let direct = a.mat().matmul(b.mat());
        let scale = direct.frobenius_norm().max(1.0);
        let residual = (&direct - &recomposed).frobenius_norm();
        prop_assert!(residual <= 1e-10 * scale, "residual {residual:.3e}");
    }

    /// Operator norm satisfies the square identity on Hermitian inputs:
    /// the norm of the squared operator equals the squared norm.
    #[test]
    fn norm_square_identity(seed in any::<u64>(), dim in dims()) {
        let mut rng = rng_from_seed(seed);
        let a = hermitian(&mut rng, dim);
        let squared = jordan(&a, &a).unwrap();
        let lhs = op_norm(&squared).unwrap();
        let rhs = op_norm(&a).unwrap().powi(2);
        let scale = rhs.max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale, "lhs {lhs}, rhs {rhs}");
    }

    /// Generating from an already closed basis returns the same span.
    #[test]
    fn generate_is_idempotent(seed in any::<u64>(), dim in dims()) {
        let mut rng = rng_from_seed(seed);
        let a = hermitian(&mut rng, dim);
        let b = hermitian(&mut rng, dim);
        let s = Segalgebra::generate(dim, &[a, b]).unwrap();
        let again = Segalgebra::generate(dim, s.basis()).unwrap();
        prop_assert_eq!(again.dim(), s.dim());
        prop_assert!(again.span_equal(&s));
    }

    /// Passing to quotient representatives commutes with both products.
    #[test]
    fn quotient_respects_products(seed in any::<u64>(), dim in 3usize..=6) {
        let mut rng = rng_from_seed(seed);
        // Block algebra: projectors onto two orthonormal vectors plus every
        // Hermitian op on the orthogonal complement. That complement block
        // absorbs products with the whole algebra, so it generates a proper
        // ideal whenever the complement is nontrivial.
        let (vectors, target) = orthonormal_family(&mut rng, dim, 2);
        let fam = EigenFamily::new(vectors.clone(), target).unwrap();
        let s = beable_core::family_algebra(&fam).unwrap();

        let mut complement = beable_core::HermitianOp::identity(dim);
        for v in &vectors {
            complement = complement.sub(&beable_core::HermitianOp::projector(v));
        }
        let ideal = match ideal_generated_by(&s, &[complement]).unwrap() {
            IdealClosure::Proper(i) => i,
            IdealClosure::Improper => unreachable!("complement block never spans the identity"),
        };
        let q = quotient(&s, &ideal).unwrap();

        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let a = s.op(i);
                let b = s.op(j);
                let scale = (a.frobenius_norm() * b.frobenius_norm()).max(1.0);

                let jo = jordan(a, b).unwrap();
                let via_parent = q.hat(&jo);
                let via_quotient = q.hat(&jordan(&q.hat(a), &q.hat(b)).unwrap());
                let jr = via_parent.sub(&via_quotient).frobenius_norm();
                prop_assert!(jr <= 1e-9 * scale, "jordan residual {jr:.3e}");

                let li = lie(a, b).unwrap();
                let lp = q.hat(&li);
                let lq = q.hat(&lie(&q.hat(a), &q.hat(b)).unwrap());
                let lr = lp.sub(&lq).frobenius_norm();
                prop_assert!(lr <= 1e-9 * scale, "lie residual {lr:.3e}");
            }
        }
    }

    /// A spectral function of an operator commutes with it and lands in the
    /// algebra the operator generates.
    #[test]
    fn op_function_stays_inside(seed in any::<u64>(), dim in dims()) {
        let mut rng = rng_from_seed(seed);
        let a = hermitian(&mut rng, dim);
        let f = op_function(&a, |x| x.abs()).unwrap();
        let commutator = lie(&a, &f).unwrap().frobenius_norm();
        let scale = (a.frobenius_norm() * f.frobenius_norm()).max(1.0);
        prop_assert!(commutator <= 1e-10 * scale, "commutator {commutator:.3e}");

        let generated = Segalgebra::generate(dim, &[a]).unwrap();
        prop_assert!(generated.contains(&f));
    }
}

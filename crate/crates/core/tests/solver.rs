mod common;

use common::{fuzz_matrix, kron_anticommutant_dim, kron_commutant_dim, kron_commutant_pairs_dim, unimodular};
use liesym::determining::{is_symmetry, numeric_residual, GeodesicSystem, Sampling};
use liesym::linalg::RatMatrix;
use liesym::rational::rat;
use liesym::solver::{dimension_bounds, solve, symmetry_dimension, SolveError};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(seed: u64, n: usize) -> RatMatrix {
    fuzz_matrix(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

#[test]
fn singular_and_rectangular_inputs_are_refused() {
    let s = RatMatrix::from_i64(&[&[1, 0], &[0, 0]]);
    assert_eq!(solve(&s).unwrap_err(), SolveError::Singular);
    let r = RatMatrix::zeros(2, 3);
    assert!(matches!(solve(&r).unwrap_err(), SolveError::NotSquare { rows: 2, cols: 3 }));
}

#[test]
fn every_generator_of_a_nonscalar_involution_is_a_symmetry() {
    // diag(1, 1, -1) squares to the identity without being scalar, so it
    // reaches the upper bound.
    let a = RatMatrix::diagonal(&[rat(1), rat(1), rat(-1)]);
    let sol = solve(&a).unwrap();
    assert_eq!(sol.dimension(), dimension_bounds(3).1);
    let sys = GeodesicSystem::new(a).unwrap();
    for f in sol.ast_fields().unwrap() {
        assert!(is_symmetry(&f, &sys).is_symmetry, "{f}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dimension_matches_kronecker_count(seed in any::<u64>(), n in 2usize..=4) {
        let a = matrix(seed, n);
        // Nonsingular A forces h = 0, so the pair space is the commutant.
        prop_assert_eq!(kron_commutant_pairs_dim(&a), kron_commutant_dim(&a));
        let expected = 4 + 2 * n + kron_commutant_dim(&a) + kron_anticommutant_dim(&a);
        prop_assert_eq!(symmetry_dimension(&a).unwrap(), expected);
        let sol = solve(&a).unwrap();
        prop_assert_eq!(sol.dimension(), expected);
        prop_assert!(sol.identities_hold());
    }

    #[test]
    fn upper_bound_exactly_when_square_is_scalar(seed in any::<u64>(), n in 2usize..=4) {
        let a = matrix(seed, n);
        let (lower, upper) = dimension_bounds(n);
        let d = symmetry_dimension(&a).unwrap();
        prop_assert!((lower..=upper).contains(&d));
        prop_assert_eq!(d == upper, a.mul(&a).is_scalar_multiple_of_identity());
    }

    #[test]
    fn dimension_is_a_similarity_invariant(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let a = matrix(seed, n);
        let s = unimodular(&mut rng, n);
        let b = s.mul(&a).mul(&s.inverse().unwrap());
        prop_assert_eq!(symmetry_dimension(&a).unwrap(), symmetry_dimension(&b).unwrap());
    }

    #[test]
    fn generators_close_and_satisfy_the_determining_equations(seed in any::<u64>(), n in 2usize..=3) {
        let a = matrix(seed, n);
        let sol = solve(&a).unwrap();
        let alg = sol.structure_constants().unwrap();
        prop_assert!(alg.validate_jacobi().is_ok());
        let sys = GeodesicSystem::new(a.clone()).unwrap();
        let sampling = Sampling { samples: 10, seed, ..Sampling::default() };
        for g in &sol.generators {
            let r = numeric_residual(&g.structured.with_matrix(&a), &sys, &sampling);
            prop_assert!(r < 1e-8, "{} residual {r}", g.text());
        }
    }
}

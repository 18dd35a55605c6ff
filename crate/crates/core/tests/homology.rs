mod common;

use common::{matrix_rows, rank};
use dgla_deform::homology::{class_of, cohomology, preimage_d, Preimage};
use dgla_deform::linalg::{is_zero_vec, zero_vec};
use dgla_deform::models::random;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn betti_numbers_match_rank_count(seed in 0u64..10_000) {
        let l = random::random_dgla(&mut ChaCha8Rng::seed_from_u64(seed));
        let c = l.complex();
        for p in -1..4 {
            let out = rank(&matrix_rows(&c.differential(p)));
            let inc = rank(&matrix_rows(&c.differential(p - 1)));
            let h = cohomology(&c, p);
            prop_assert_eq!(h.dim(), c.dim(p) - out - inc);
            prop_assert_eq!(c.cohomology_dim(p), h.dim());
            for r in h.representatives() {
                prop_assert!(c.is_cocycle(p, r));
            }
        }
    }

    #[test]
    fn classes_round_trip_and_kill_boundaries(seed in 0u64..10_000, p in 0i32..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random::random_dgla(&mut rng);
        let c = l.complex();
        let h = cohomology(&c, p);
        let coords: Vec<_> = (0..h.dim()).map(|_| random::coefficient(&mut rng)).collect();
        let z = h.representative_of(&coords);
        let prev = random::random_matrix(&mut rng, c.dim(p - 1), 1).column(0);
        let boundary = c.apply_d(p - 1, &prev);
        let shifted: Vec<_> = z.iter().zip(&boundary).map(|(a, b)| a + b).collect();
        prop_assert_eq!(class_of(&h, &shifted).unwrap().coordinates, coords.clone());
        prop_assert!(class_of(&h, &boundary).unwrap().is_zero());

        match preimage_d(&c, p - 1, &boundary).unwrap() {
            Preimage::Solved(y) => prop_assert_eq!(c.apply_d(p - 1, &y), boundary.clone()),
            Preimage::NoSolution(_) => prop_assert!(false, "boundary reported unsolvable"),
        }
        match preimage_d(&c, p - 1, &shifted).unwrap() {
            Preimage::Solved(y) => {
                prop_assert!(is_zero_vec(&coords));
                prop_assert_eq!(c.apply_d(p - 1, &y), shifted);
            }
            Preimage::NoSolution(class) => {
                prop_assert!(coords.iter().any(|x| !x.is_zero()));
                prop_assert_eq!(class.coordinates, coords);
            }
        }
    }
}

#[test]
fn wrong_length_is_a_dimension_error() {
    let l = dgla_deform::models::obstructed();
    let c = l.complex();
    let h = cohomology(&c, 1);
    assert!(class_of(&h, &zero_vec(c.dim(1) + 1)).is_err());
    assert!(preimage_d(&c, 0, &zero_vec(c.dim(1) + 1)).is_err());
}

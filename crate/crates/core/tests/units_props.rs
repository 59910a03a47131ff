use std::sync::Arc;

use incidence_core::matrix::IncMatrix;
use incidence_core::proset::{random_proset, FiniteProset};
use incidence_core::ring::{Ring, Zmod};
use incidence_core::units::{det_profile, inverse, inverse_by_adjugate, is_invertible, random_invertible};
use incidence_core::Zz;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setup(n: usize, seed: u64) -> (Arc<FiniteProset>, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_proset(&mut rng, n, 0.3);
    (Arc::new(p), rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn inverses_are_two_sided(n in 1usize..=7, seed in any::<u64>()) {
        let (p, mut rng) = setup(n, seed);
        let z = Zz::new();
        let a = random_invertible(p.clone(), z.clone(), &mut rng);
        let b = inverse(&a).unwrap();
        prop_assert!(a.mul(&b).unwrap().is_identity());
        prop_assert!(b.mul(&a).unwrap().is_identity());
        for (&(s, t), _) in b.entries() {
            prop_assert!(p.leq(s, t));
        }
        if n <= 5 {
            prop_assert_eq!(inverse_by_adjugate(&a).unwrap(), b);
        }
    }

    #[test]
    fn invertibility_matches_the_dense_determinant(n in 1usize..=6, seed in any::<u64>()) {
        let (p, mut rng) = setup(n, seed);
        let r = Zmod::new(6u64);
        let a = IncMatrix::random(p.clone(), r.clone(), &mut rng);
        let det = a.to_dense(&(0..n).collect::<Vec<_>>()).det(&r).unwrap();
        prop_assert_eq!(is_invertible(&a).unwrap(), r.is_unit(&det));
        prop_assert_eq!(inverse(&a).is_ok(), r.is_unit(&det));
    }

    #[test]
    fn det_profiles_are_multiplicative(n in 1usize..=6, seed in any::<u64>()) {
        let (p, mut rng) = setup(n, seed);
        let r = Zmod::prime_field(5u64);
        let a = IncMatrix::random(p.clone(), r.clone(), &mut rng);
        let b = IncMatrix::random(p.clone(), r.clone(), &mut rng);
        let mut windows: Vec<_> = p.components().iter().map(|c| p.window(c).unwrap()).collect();
        windows.extend(p.comparable_pairs().into_iter().map(|(x, y)| p.window(&p.interval(x, y)).unwrap()));
        let (da, db) = (det_profile(&a, &windows).unwrap(), det_profile(&b, &windows).unwrap());
        let dab = det_profile(&a.mul(&b).unwrap(), &windows).unwrap();
        for ((x, y), z) in da.values.iter().zip(&db.values).zip(&dab.values) {
            prop_assert_eq!(&z.1, &r.mul(&x.1, &y.1));
        }
    }
}

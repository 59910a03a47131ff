use std::sync::Arc;

use incidence_core::limits::{reconstruct, ConsistentFamily};
use incidence_core::matrix::IncMatrix;
use incidence_core::proset::{Label, RuleProset};
use incidence_core::ring::Zmod;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rule() -> impl Strategy<Value = RuleProset> {
    prop_oneof![Just(RuleProset::nat()), Just(RuleProset::zig()), Just(RuleProset::divisibility())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reconstruct_inverts_truncate(p in rule(), depth in 0usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = Zmod::new(6u64);
        let windows: Vec<Vec<Label>> = (0..=depth).map(|d| p.standard_window(d).members().to_vec()).collect();
        let carrier = Arc::new(p.restrict(&p.standard_window(depth)).unwrap());
        let a = IncMatrix::random(carrier.clone(), r.clone(), &mut rng);
        let b = IncMatrix::random(carrier, r, &mut rng);
        let fa = ConsistentFamily::truncations(&p, &a, &windows).unwrap();
        let fb = ConsistentFamily::truncations(&p, &b, &windows).unwrap();
        let back = reconstruct(&fa).unwrap();
        prop_assert_eq!(&back, &a);
        let again = ConsistentFamily::truncations(&p, &back, &windows).unwrap();
        for ((w1, m1), (w2, m2)) in again.parts().zip(fa.parts()) {
            prop_assert_eq!(w1, w2);
            prop_assert_eq!(m1, m2);
        }
        let prod = reconstruct(&fa).unwrap().mul(&reconstruct(&fb).unwrap()).unwrap();
        for w in fa.windows() {
            let lhs = prod.project(w).unwrap();
            let rhs = fa.get(w).unwrap().mul(fb.get(w).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

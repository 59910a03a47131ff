use incidence_core::proset::{random_proset, Depth, FiniteProset};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn proset(max: usize) -> impl Strategy<Value = FiniteProset> {
    (1..=max, any::<u64>(), 1u32..=6).prop_map(|(n, seed, tenths)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_proset(&mut rng, n, f64::from(tenths) / 20.0)
    })
}

/// Component blocks by union-find over the comparability graph.
fn union_find_blocks(p: &FiniteProset) -> Vec<Vec<usize>> {
    let n = p.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for a in 0..n {
        for b in 0..n {
            if p.leq(a, b) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    let mut blocks: Vec<Vec<usize>> = vec![];
    for r in 0..n {
        let block: Vec<usize> = (0..n).filter(|&x| roots[x] == r).collect();
        if !block.is_empty() {
            blocks.push(block);
        }
    }
    blocks.sort();
    blocks
}

proptest! {
    #[test]
    fn subintervals_are_contained(p in proset(8)) {
        for (a, b) in p.comparable_pairs() {
            let big = p.interval(a, b);
            for &t in &big {
                for s in p.interval(a, t) {
                    prop_assert!(big.contains(&s));
                }
            }
        }
    }

    #[test]
    fn neighborhoods_grow_and_stabilize_on_the_component(p in proset(8)) {
        let comp = p.component_index();
        for s in 0..p.len() {
            let mut prev = p.neighborhood(s, Depth::Finite(0));
            for k in 1..=p.len() {
                let next = p.neighborhood(s, Depth::Finite(k));
                prop_assert!(prev.iter().all(|x| next.contains(x)));
                prev = next;
            }
            let whole: Vec<usize> = (0..p.len()).filter(|&t| comp[t] == comp[s]).collect();
            prop_assert_eq!(&prev, &whole);
            prop_assert_eq!(p.neighborhood(s, Depth::Omega), whole);
        }
    }

    #[test]
    fn components_match_union_find(p in proset(10)) {
        let mut mine = p.components();
        mine.sort();
        prop_assert_eq!(mine, union_find_blocks(&p));
    }

    #[test]
    fn convex_closures_are_convex(p in proset(10), picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let set: Vec<usize> = picks.iter().map(|i| i.index(p.len())).collect();
        let comp = p.component_index();
        match p.convex_closure(&set) {
            Ok(c) => {
                prop_assert!(p.is_convex(&c));
                prop_assert!(set.iter().all(|x| c.contains(x)));
            }
            Err(e) => {
                prop_assert_eq!(e.code(), "spans_components");
                prop_assert!(set.iter().any(|&x| comp[x] != comp[set[0]]));
            }
        }
    }

    #[test]
    fn layer_order_is_block_upper_triangular(p in proset(8)) {
        let order = p.layer_order();
        let mut sorted = order.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..p.len()).collect::<Vec<_>>());
        for i in 0..order.len() {
            for j in 0..i {
                if p.leq(order[i], order[j]) {
                    prop_assert!(p.equivalent(order[i], order[j]));
                }
            }
        }
    }
}

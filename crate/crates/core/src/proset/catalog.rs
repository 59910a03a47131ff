use std::collections::BTreeSet;

use rand::Rng;

use super::{FiniteProset, Label};

/// One representative of every isomorphism class of prosets on `n`
/// elements, labelled `0..n`. Supported for `n <= 6`.
///
/// Classes are built by extending each representative on `n - 1` elements
/// with a new point whose down-set and up-set are compatible, then reduced
/// to a canonical relation code.
pub fn prosets_of_size(n: usize) -> Vec<FiniteProset> {
    assert!(n <= 6, "catalog supports at most 6 elements");
    codes_of_size(n).into_iter().map(|c| from_code(n, c)).collect()
}

/// All isomorphism classes with at most `max` elements, smallest first.
pub fn prosets_up_to(max: usize) -> Vec<FiniteProset> {
    (0..=max).flat_map(prosets_of_size).collect()
}

/// A random proset on `n` elements: each ordered pair is related with
/// probability `density` before closure.
pub fn random_proset<G: Rng + ?Sized>(rng: &mut G, n: usize, density: f64) -> FiniteProset {
    let mut raw = vec![false; n * n];
    for b in raw.iter_mut() {
        *b = rng.gen_bool(density);
    }
    let labels = (0..n as i64).map(Label::Int).collect();
    FiniteProset::from_relation(labels, |i, j| raw[i * n + j]).expect("distinct labels")
}

fn codes_of_size(n: usize) -> BTreeSet<u64> {
    if n == 0 {
        return BTreeSet::from([0]);
    }
    let m = n - 1;
    let perms = permutations(n);
    let mut out = BTreeSet::new();
    for base in codes_of_size(m) {
        let rel = |i: usize, j: usize| i == j || base >> (i * m + j) & 1 == 1;
        let down_closed = |set: u32| {
            (0..m).all(|i| set >> i & 1 == 0 || (0..m).all(|j| !rel(j, i) || set >> j & 1 == 1))
        };
        let up_closed = |set: u32| {
            (0..m).all(|i| set >> i & 1 == 0 || (0..m).all(|j| !rel(i, j) || set >> j & 1 == 1))
        };
        let downs: Vec<u32> = (0..1u32 << m).filter(|&d| down_closed(d)).collect();
        let ups: Vec<u32> = (0..1u32 << m).filter(|&u| up_closed(u)).collect();
        for &d in &downs {
            for &u in &ups {
                let ok = (0..m).all(|i| {
                    d >> i & 1 == 0 || (0..m).all(|j| u >> j & 1 == 0 || rel(i, j))
                });
                if !ok {
                    continue;
                }
                let mut bits = vec![false; n * n];
                for i in 0..n {
                    for j in 0..n {
                        bits[i * n + j] = match (i == m, j == m) {
                            (true, true) => true,
                            (false, true) => d >> i & 1 == 1,
                            (true, false) => u >> j & 1 == 1,
                            (false, false) => rel(i, j),
                        };
                    }
                }
                out.insert(canonical(n, &bits, &perms));
            }
        }
    }
    out
}

/// Minimum relation code over all relabellings. Bit `i * n + j` is set
/// when `i ⪯ j` and `i != j`.
pub(crate) fn canonical(n: usize, bits: &[bool], perms: &[Vec<usize>]) -> u64 {
    perms
        .iter()
        .map(|p| {
            let mut code = 0u64;
            for i in 0..n {
                for j in 0..n {
                    if i != j && bits[p[i] * n + p[j]] {
                        code |= 1 << (i * n + j);
                    }
                }
            }
            code
        })
        .min()
        .unwrap_or(0)
}

/// Isomorphism invariant: equal codes iff isomorphic (at most 8 elements).
pub fn iso_code(p: &FiniteProset) -> u64 {
    assert!(p.len() <= 8);
    canonical(p.len(), p.relation_bits(), &permutations(p.len()))
}

fn from_code(n: usize, code: u64) -> FiniteProset {
    let labels = (0..n as i64).map(Label::Int).collect();
    FiniteProset::from_relation(labels, |i, j| code >> (i * n + j) & 1 == 1).expect("distinct labels")
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = vec![];
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn class_counts_match_known_sequence() {
        // number of preorders up to isomorphism on n points
        let counts: Vec<usize> = (0..=5).map(|n| prosets_of_size(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 9, 33, 139]);
    }

    #[test]
    fn representatives_are_pairwise_non_isomorphic() {
        let reps = prosets_of_size(4);
        let codes: BTreeSet<u64> = reps.iter().map(iso_code).collect();
        assert_eq!(codes.len(), reps.len());
    }

    #[test]
    fn random_prosets_are_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = random_proset(&mut rng, 6, 0.2);
            for a in 0..6 {
                for b in 0..6 {
                    for c in 0..6 {
                        assert!(!(p.leq(a, b) && p.leq(b, c)) || p.leq(a, c));
                    }
                }
            }
        }
    }
}

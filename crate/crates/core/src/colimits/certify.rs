use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::construct::{Coequalizer, Coproduct, Pushout};
use super::map::{fcc_assignments, ProsetMap};
use crate::proset::{prosets_up_to, FiniteProset, Label};

/// A cocone into a test target with no mediating map, or with several.
#[derive(Debug, Clone, Serialize)]
pub struct UniversalityFailure {
    pub target: Vec<(Label, Label)>,
    pub target_size: usize,
    /// The cocone legs as `(element, image)` pairs.
    pub legs: Vec<Vec<(Label, Label)>>,
    pub mediating: usize,
}

/// Outcome of checking a colimit against every target proset up to a
/// given size (one per isomorphism class).
#[derive(Debug, Clone, Serialize)]
pub struct UniversalityReport {
    pub max_target: usize,
    pub targets: usize,
    pub cocones: usize,
    /// The colimit legs themselves are FCC and form a cocone.
    pub legs_valid: bool,
    pub failure_count: usize,
    /// The first few failures.
    pub failures: Vec<UniversalityFailure>,
}

impl UniversalityReport {
    pub fn passed(&self) -> bool {
        self.legs_valid && self.failure_count == 0
    }
}

const KEPT_FAILURES: usize = 8;

fn fcc_maps(src: &FiniteProset, tgt: &Arc<FiniteProset>) -> Vec<Vec<usize>> {
    let src = Arc::new(src.clone());
    fcc_assignments(&src, tgt)
        .into_iter()
        .filter(|a| ProsetMap::new_unchecked(src.clone(), tgt.clone(), a.clone()).is_fcc())
        .collect()
}

fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&i| outer[i]).collect()
}

/// Counts, for every cocone produced by `cocones`, the FCC maps out of the
/// apex that recover it through `legs`.
fn certify(
    legs: &[ProsetMap],
    legs_valid: bool,
    max_target: usize,
    cocones: impl Fn(&Arc<FiniteProset>) -> Vec<Vec<Vec<usize>>>,
) -> UniversalityReport {
    let apex = legs.first().map(|l| l.target().clone());
    let mut report = UniversalityReport {
        max_target,
        targets: 0,
        cocones: 0,
        legs_valid,
        failure_count: 0,
        failures: vec![],
    };
    for t in prosets_up_to(max_target) {
        let t = Arc::new(t);
        report.targets += 1;
        let mut counts: HashMap<Vec<Vec<usize>>, usize> = HashMap::new();
        if let Some(apex) = &apex {
            for m in fcc_maps(apex, &t) {
                let key = legs.iter().map(|l| compose(&m, l.assignment())).collect();
                *counts.entry(key).or_default() += 1;
            }
        } else {
            counts.insert(vec![], 1);
        }
        for cocone in cocones(&t) {
            report.cocones += 1;
            let n = counts.get(&cocone).copied().unwrap_or(0);
            if n != 1 {
                report.failure_count += 1;
                if report.failures.len() < KEPT_FAILURES {
                    report.failures.push(UniversalityFailure {
                        target: t
                            .comparable_pairs()
                            .into_iter()
                            .map(|(a, b)| (t.label(a).clone(), t.label(b).clone()))
                            .collect(),
                        target_size: t.len(),
                        legs: legs
                            .iter()
                            .zip(&cocone)
                            .map(|(l, h)| {
                                h.iter()
                                    .enumerate()
                                    .map(|(a, &b)| (l.source().label(a).clone(), t.label(b).clone()))
                                    .collect()
                            })
                            .collect(),
                        mediating: n,
                    });
                }
            }
        }
    }
    report
}

/// Checks that every family of FCC maps out of the parts factors through
/// the coproduct in exactly one way.
pub fn certify_coproduct(parts: &[Arc<FiniteProset>], co: &Coproduct, max_target: usize) -> UniversalityReport {
    let valid = co.injections.iter().all(ProsetMap::is_fcc);
    if parts.is_empty() {
        // initial object: one map into every target
        let mut r = certify(&[], valid, max_target, |_| vec![vec![]]);
        r.legs_valid = co.proset.is_empty();
        return r;
    }
    certify(&co.injections, valid, max_target, |t| {
        parts.iter().fold(vec![vec![]], |acc: Vec<Vec<Vec<usize>>>, p| {
            let maps = fcc_maps(p, t);
            acc.iter()
                .flat_map(|prefix| {
                    maps.iter().map(move |m| {
                        let mut v = prefix.clone();
                        v.push(m.clone());
                        v
                    })
                })
                .collect()
        })
    })
}

/// Checks the pushout square and its universal property.
pub fn certify_pushout(f: &ProsetMap, g: &ProsetMap, po: &Pushout, max_target: usize) -> UniversalityReport {
    let commutes = matches!((po.p1.after(f), po.p2.after(g)), (Ok(a), Ok(b)) if a == b);
    let valid = commutes && po.p1.is_fcc() && po.p2.is_fcc();
    certify(&[po.p1.clone(), po.p2.clone()], valid, max_target, |t| {
        let mut by_composite: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
        for h2 in fcc_maps(g.target(), t) {
            by_composite.entry(compose(&h2, g.assignment())).or_default().push(h2);
        }
        let mut out = vec![];
        for h1 in fcc_maps(f.target(), t) {
            if let Some(h2s) = by_composite.get(&compose(&h1, f.assignment())) {
                out.extend(h2s.iter().map(|h2| vec![h1.clone(), h2.clone()]));
            }
        }
        out
    })
}

/// Checks `p ∘ f1 = p ∘ f2`, surjectivity, and the universal property.
pub fn certify_coequalizer(f1: &ProsetMap, f2: &ProsetMap, ce: &Coequalizer, max_target: usize) -> UniversalityReport {
    let commutes = matches!((ce.p.after(f1), ce.p.after(f2)), (Ok(a), Ok(b)) if a == b);
    let valid = commutes && ce.p.is_fcc() && ce.p.is_surjective();
    certify(std::slice::from_ref(&ce.p), valid, max_target, |t| {
        fcc_maps(f1.target(), t)
            .into_iter()
            .filter(|h| compose(h, f1.assignment()) == compose(h, f2.assignment()))
            .map(|h| vec![h])
            .collect()
    })
}

use std::sync::Arc;

use serde::Serialize;

use super::map::ProsetMap;
use crate::error::Result;
use crate::proset::{ConvexWindow, Label, Rule, RuleProset};

/// Evidence that a nested chain of windows presents `p` as a direct limit
/// on the requested elements.
#[derive(Debug, Clone, Serialize)]
pub struct DirectLimitReport {
    pub windows: Vec<ConvexWindow>,
    pub irreducible: bool,
    pub nested: bool,
    /// Every inclusion between windows is a convex embedding.
    pub embeddings_convex: bool,
    /// `j_(l,m) ∘ j_(k,l) = j_(k,m)` for all `k < l < m`.
    pub commuting: bool,
    /// Requested elements missed by every window.
    pub uncovered: Vec<Label>,
}

impl DirectLimitReport {
    pub fn passed(&self) -> bool {
        self.irreducible && self.nested && self.embeddings_convex && self.commuting && self.uncovered.is_empty()
    }
}

pub fn direct_limit_windows(p: &RuleProset, windows: &[Vec<Label>], requested: &[Label]) -> Result<DirectLimitReport> {
    let windows: Vec<ConvexWindow> = windows.iter().map(|w| p.window(w)).collect::<Result<_>>()?;
    let irreducible = match p.rule() {
        Rule::Nat | Rule::Int | Rule::Zig | Rule::Divisibility => true,
        _ => p.as_finite().is_some_and(|f| f.is_irreducible()),
    };
    let nested = windows.windows(2).all(|w| w[0].is_subset(&w[1]));
    let restricted: Vec<Arc<_>> = windows.iter().map(|w| p.restrict(w).map(Arc::new)).collect::<Result<_>>()?;
    let n = windows.len();
    let mut incl: Vec<Vec<Option<ProsetMap>>> = vec![vec![None; n]; n];
    let mut embeddings_convex = true;
    for k in 0..n {
        for l in k..n {
            if let Ok(j) = ProsetMap::inclusion(restricted[k].clone(), restricted[l].clone()) {
                embeddings_convex &= j.is_fcc() && j.is_injective();
                incl[k][l] = Some(j);
            }
        }
    }
    let mut commuting = nested;
    for k in 0..n {
        for l in k..n {
            for m in l..n {
                if let (Some(a), Some(b), Some(c)) = (&incl[k][l], &incl[l][m], &incl[k][m]) {
                    commuting &= b.after(a).ok().as_ref() == Some(c);
                }
            }
        }
    }
    let uncovered = requested.iter().filter(|x| !windows.iter().any(|w| w.contains(x))).cloned().collect();
    Ok(DirectLimitReport { windows, irreducible, nested, embeddings_convex: embeddings_convex && nested, commuting, uncovered })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proset::{labels, Depth};

    #[test]
    fn nat_initial_segments() {
        let w = vec![labels(&[0]), labels(&[0, 1]), labels(&[0, 1, 2])];
        let r = direct_limit_windows(&RuleProset::nat(), &w, &labels(&[0, 1, 2])).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn zig_neighbourhoods() {
        let zig = RuleProset::zig();
        let w: Vec<Vec<Label>> = (1..=3)
            .map(|d| zig.neighborhood(&0.into(), Depth::Finite(d)).unwrap())
            .collect();
        let r = direct_limit_windows(&zig, &w, &labels(&[-3, 3])).unwrap();
        assert!(r.passed());
        let r = direct_limit_windows(&zig, &w, &labels(&[7])).unwrap();
        assert_eq!(r.uncovered, labels(&[7]));
    }

    #[test]
    fn gaps_are_rejected() {
        let c3 = RuleProset::new(Rule::Chain(3)).unwrap();
        let err = direct_limit_windows(&c3, &[labels(&[0]), labels(&[0, 2])], &[]).unwrap_err();
        assert_eq!(err.code(), "window_not_convex");
    }

    #[test]
    fn non_nested_chain_fails() {
        let w = vec![labels(&[0, 1]), labels(&[2, 3])];
        let r = direct_limit_windows(&RuleProset::nat(), &w, &[]).unwrap();
        assert!(!r.nested && !r.passed());
    }
}

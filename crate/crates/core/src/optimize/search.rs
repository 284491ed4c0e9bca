//! Exhaustive maximization over a-vectors with `a₀ = 0`, grouped by total.
//!
//! One depth-first pass over all compositions of every total `≤ max_total`
//! into the `2ᵗ − 1` nonzero coordinates yields the best vector for each
//! total at once. Coordinate permutations of `F₂ᵗ` act on the vectors and
//! preserve the objective, so only orbit representatives (lexicographically
//! smallest dense form) are evaluated.

use rayon::prelude::*;

use crate::counting::MgIndex;
use crate::error::{Error, Result};
use crate::mgsets::cached_catalog;

/// Largest `t` handled by the dense search.
pub const MAX_SEARCH_T: usize = 5;

const WIDTH: usize = 1 << MAX_SEARCH_T;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Full minimal-codeword count.
    Count,
    /// Only the degree-`(t+1)` part (sum over projective bases).
    LeadingTerm,
}

/// A dense a-vector with its objective value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub value: u128,
    pub sum_sq: u128,
    pub dense: Vec<u64>,
}

impl Candidate {
    pub(crate) fn new(value: u128, dense: Vec<u64>) -> Self {
        let sum_sq = dense.iter().map(|&c| (c as u128) * (c as u128)).sum();
        Self {
            value,
            sum_sq,
            dense,
        }
    }

    /// Larger value first, then the more balanced vector, then lexicographic.
    pub fn beats(&self, other: &Candidate) -> bool {
        (self.value, other.sum_sq, &other.dense) > (other.value, self.sum_sq, &self.dense)
    }
}

fn merge_into(slot: &mut Option<Candidate>, cand: Candidate) {
    match slot {
        Some(cur) if !cand.beats(cur) => {}
        _ => *slot = Some(cand),
    }
}

/// Best vectors per total, from one search.
#[derive(Clone, Debug)]
pub struct TotalSearch {
    pub t: usize,
    pub objective: Objective,
    /// Indexed by total `0..=max_total`.
    pub best: Vec<Option<Candidate>>,
    /// Per total, the number of evaluated maximizers rejected by the
    /// optional pattern check.
    pub off_pattern: Vec<u64>,
    pub exact: bool,
    pub leaves: u64,
}

impl TotalSearch {
    pub fn max_total(&self) -> usize {
        self.best.len() - 1
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Maximum number of leaves (compositions) to visit.
    pub budget: u64,
    /// Restrict to orbit representatives under coordinate permutations.
    pub symmetry: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: super::DEFAULT_BUDGET,
            symmetry: true,
        }
    }
}

pub(crate) fn binomial_u128(n: u128, r: u128) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Compositions of all totals `≤ max_total` into `2ᵗ − 1` parts.
pub fn leaf_count(t: usize, max_total: usize) -> u128 {
    let r = (1u128 << t) - 1;
    binomial_u128(max_total as u128 + r, r).unwrap_or(u128::MAX)
}

/// `perm_maps[p][τ]` = image of `τ` under the `p`-th bit permutation.
fn permutation_maps(t: usize) -> Vec<Vec<u8>> {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..t).collect();
    permute(&mut current, 0, &mut perms);
    perms
        .into_iter()
        .filter(|p| p.iter().enumerate().any(|(i, &j)| i != j))
        .map(|p| {
            (0..1usize << t)
                .map(|tau| {
                    (0..t).fold(0u8, |acc, i| acc | ((((tau >> i) & 1) as u8) << p[i]))
                })
                .collect()
        })
        .collect()
}

fn permute(v: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == v.len() {
        out.push(v.clone());
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permute(v, i + 1, out);
        v.swap(i, j);
    }
}

type PatternCheck<'a> = &'a (dyn Fn(&[u64]) -> bool + Sync);

struct Searcher<'a> {
    t: usize,
    r: usize,
    max_total: usize,
    objective: Objective,
    index: &'a MgIndex,
    /// Inverse bit permutations: `b[τ] = a[inv[τ]]`.
    inverses: Vec<Vec<u8>>,
    symmetry: bool,
    check: Option<PatternCheck<'a>>,
}

struct Local {
    best: Vec<Option<Candidate>>,
    off_pattern: Vec<u64>,
    leaves: u64,
    limit: u64,
}

impl Local {
    fn new(max_total: usize, limit: u64) -> Self {
        Self {
            best: vec![None; max_total + 1],
            off_pattern: vec![0; max_total + 1],
            leaves: 0,
            limit,
        }
    }

    fn merge(&mut self, other: Local) {
        for (total, cand) in other.best.into_iter().enumerate() {
            let Some(cand) = cand else { continue };
            match &self.best[total] {
                Some(cur) if cur.value > cand.value => {}
                Some(cur) if cur.value == cand.value => {
                    self.off_pattern[total] += other.off_pattern[total];
                    merge_into(&mut self.best[total], cand);
                }
                _ => {
                    self.off_pattern[total] = other.off_pattern[total];
                    self.best[total] = Some(cand);
                }
            }
        }
        self.leaves += other.leaves;
    }
}

impl Searcher<'_> {
    fn is_canonical(&self, a: &[u64]) -> bool {
        let width = 1usize << self.t;
        'perm: for inv in &self.inverses {
            for tau in 1..width {
                let b = a[inv[tau] as usize];
                if b != a[tau] {
                    if b < a[tau] {
                        return false;
                    }
                    continue 'perm;
                }
            }
        }
        true
    }

    fn leaf(&self, a: &[u64], total: usize, local: &mut Local) {
        local.leaves += 1;
        if self.symmetry && !self.is_canonical(a) {
            return;
        }
        let width = 1usize << self.t;
        let dense = &a[..width];
        let value = match self.objective {
            Objective::Count => self.index.evaluate(dense),
            Objective::LeadingTerm => self.index.evaluate_top(dense),
        };
        let off = self.check.map(|f| !f(dense)).unwrap_or(false);
        match &local.best[total] {
            Some(cur) if cur.value > value => return,
            Some(cur) if cur.value == value => {
                if off {
                    local.off_pattern[total] += 1;
                }
                let sum_sq: u128 = dense.iter().map(|&c| (c as u128) * (c as u128)).sum();
                // same value and balance: earlier leaves are lexicographically smaller
                if sum_sq >= cur.sum_sq {
                    return;
                }
            }
            _ => {
                local.off_pattern[total] = off as u64;
            }
        }
        local.best[total] = Some(Candidate::new(value, dense.to_vec()));
    }

    /// Fills positions `pos..=r`; `rem` units are still unassigned.
    fn dfs(&self, a: &mut [u64; WIDTH], pos: usize, rem: usize, local: &mut Local) -> bool {
        if local.leaves >= local.limit {
            return false;
        }
        if pos > self.r {
            self.leaf(a, self.max_total - rem, local);
            return true;
        }
        // a[e₁] ≤ a[e₂] ≤ … holds for every orbit representative
        let lower = if self.symmetry && pos.is_power_of_two() && pos > 1 {
            a[pos >> 1] as usize
        } else {
            0
        };
        for v in lower..=rem {
            a[pos] = v as u64;
            if !self.dfs(a, pos + 1, rem - v, local) {
                a[pos] = 0;
                return false;
            }
        }
        a[pos] = 0;
        true
    }
}

/// Best a-vector with `a₀ = 0` for every total `0..=max_total`.
///
/// When the leaf count exceeds the budget the search runs sequentially until
/// the budget is spent and the result is flagged inexact.
pub fn search_by_total(
    t: usize,
    max_total: usize,
    objective: Objective,
    options: SearchOptions,
    check: Option<PatternCheck<'_>>,
) -> Result<TotalSearch> {
    if t == 0 || t > MAX_SEARCH_T {
        return Err(Error::out_of_range("t", t as i64, format!("1..={MAX_SEARCH_T}")));
    }
    if objective == Objective::LeadingTerm && t < 2 {
        return Err(Error::out_of_range("t", t as i64, "2..=5 for the leading term"));
    }
    let catalog = cached_catalog(t)?;
    let index = MgIndex::new(catalog);
    let searcher = Searcher {
        t,
        r: (1 << t) - 1,
        max_total,
        objective,
        index: &index,
        inverses: if options.symmetry {
            permutation_maps(t)
                .into_iter()
                .map(|m| {
                    let mut inv = vec![0u8; m.len()];
                    for (tau, &img) in m.iter().enumerate() {
                        inv[img as usize] = tau as u8;
                    }
                    inv
                })
                .collect()
        } else {
            Vec::new()
        },
        symmetry: options.symmetry,
        check,
    };
    let needed = leaf_count(t, max_total);
    let exact = needed <= options.budget as u128;
    let local = if exact {
        (0..=max_total)
            .into_par_iter()
            .map(|first| {
                let mut local = Local::new(max_total, u64::MAX);
                let mut a = [0u64; WIDTH];
                a[1] = first as u64;
                searcher.dfs(&mut a, 2, max_total - first, &mut local);
                local
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Local::new(max_total, u64::MAX), |mut acc, l| {
                acc.merge(l);
                acc
            })
    } else {
        let mut local = Local::new(max_total, options.budget);
        let mut a = [0u64; WIDTH];
        searcher.dfs(&mut a, 1, max_total, &mut local);
        local
    };
    Ok(TotalSearch {
        t,
        objective,
        best: local.best,
        off_pattern: local.off_pattern,
        exact,
        leaves: local.leaves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_counts() {
        assert_eq!(leaf_count(2, 3), 20);
        assert_eq!(leaf_count(4, 11), 7_726_160);
        assert_eq!(leaf_count(3, 40), 62_891_499);
    }

    #[test]
    fn permutation_maps_are_bijections() {
        for t in 1..=4 {
            let maps = permutation_maps(t);
            assert_eq!(maps.len(), (1..=t).product::<usize>() - 1);
            for m in maps {
                let mut seen = m.clone();
                seen.sort_unstable();
                assert_eq!(seen, (0..1u8 << t).collect::<Vec<_>>());
                assert_eq!(m[0], 0);
            }
        }
    }

    #[test]
    fn tie_break_prefers_balance() {
        let a = Candidate::new(63, vec![0, 3, 3, 3]);
        let b = Candidate::new(63, vec![0, 2, 3, 4]);
        assert!(a.beats(&b));
        assert!(!b.beats(&a));
        let c = Candidate::new(64, vec![0, 9, 0, 0]);
        assert!(c.beats(&a));
        let d = Candidate::new(63, vec![0, 3, 3, 3]);
        assert!(!a.beats(&d));
    }

    #[test]
    fn symmetry_reduction_keeps_maxima() {
        for t in 1..=3 {
            let kmax = if t == 3 { 10 } else { 12 };
            let full = search_by_total(
                t,
                kmax,
                Objective::Count,
                SearchOptions {
                    budget: u64::MAX,
                    symmetry: false,
                },
                None,
            )
            .unwrap();
            let pruned =
                search_by_total(t, kmax, Objective::Count, SearchOptions::default(), None).unwrap();
            assert!(pruned.leaves < full.leaves || t == 1);
            for total in 0..=kmax {
                let f = full.best[total].as_ref().unwrap();
                let p = pruned.best[total].as_ref().unwrap();
                assert_eq!(f.value, p.value, "t={t} total={total}");
            }
        }
    }

    #[test]
    fn budget_cut_is_flagged() {
        let s = search_by_total(
            3,
            12,
            Objective::Count,
            SearchOptions {
                budget: 1000,
                symmetry: true,
            },
            None,
        )
        .unwrap();
        assert!(!s.exact);
        assert_eq!(s.leaves, 1000);
    }
}

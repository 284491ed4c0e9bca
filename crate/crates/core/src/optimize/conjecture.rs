//! Checks of the conjectured optimal a-vectors for `t = 3` and of the
//! projective-basis shape of leading-term maximizers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::search::{search_by_total, Objective, SearchOptions};
use super::{fold_zero_rows, DEFAULT_BUDGET};
use crate::counting::{choose2, AVector};
use crate::error::{Error, Result};
use crate::mgsets::cached_catalog;

/// Largest `k` the exhaustive `t = 3` check accepts.
pub const EXHAUSTIVE_T3_MAX_K: u64 = 40;

pub const DEFAULT_RESTARTS: usize = 64;

/// Dense order of the seven listed values: `100, 010, 001, 110, 101, 011, 111`.
const LISTED_ORDER: [usize; 7] = [1, 2, 4, 3, 5, 6, 7];

/// The conjectured optimal a-vector for `t = 3`, `k ≥ 4`, with `a₀₀₀ = 0`.
pub fn conjectured_t3(k: u64) -> Result<AVector> {
    if k < 4 {
        return Err(Error::out_of_range("k", k as i64, "≥ 4"));
    }
    let mut dense = [0u64; 8];
    if k <= 26 {
        let l = (k - 4) / 7;
        let listed: [u64; 7] = match (k - 4) % 7 {
            0 => [l, l, l, l + 1, l + 1, l + 1, l + 1],
            1 => [l, l, l, l + 1, l + 1, l + 1, l + 2],
            2 => [l, l, l, l + 1, l + 1, l + 2, l + 2],
            3 => [l, l, l, l + 1, l + 2, l + 2, l + 2],
            4 => [l + 1, l, l, l + 2, l + 2, l + 1, l + 2],
            5 => [l + 1, l, l, l + 2, l + 2, l + 2, l + 2],
            _ => [l + 1, l + 1, l, l + 2, l + 2, l + 2, l + 2],
        };
        for (pos, v) in LISTED_ORDER.iter().zip(listed) {
            dense[*pos] = v;
        }
    } else if !k.is_multiple_of(4) {
        dense[1] = k / 4;
        dense[2] = (k + 1) / 4;
        dense[5] = (k + 2) / 4;
        dense[6] = k.div_ceil(4);
    } else {
        dense[1] = k / 4;
        dense[2] = k / 4 - 1;
        dense[5] = k / 4 + 1;
        dense[6] = k / 4;
    }
    AVector::from_dense(3, &dense)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    LocalSearch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Exhaustive maximum equals the conjectured value.
    Equal,
    /// Exhaustive maximum differs from the conjectured value.
    Unequal,
    /// Local search found nothing better (evidence, not proof).
    NoBetterFound,
    /// Local search found a strictly better vector.
    BetterFound,
    /// The search was cut short by its budget.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureRow {
    pub k: u64,
    pub search_value: u128,
    pub conjectured_value: u128,
    pub conjectured: AVector,
    pub argmax: AVector,
    pub verdict: Verdict,
    /// Whether no single-unit transfer improves the conjectured vector.
    pub conjectured_is_local_max: bool,
    /// Best value over every placement of the conjectured parts on the seven
    /// nonzero `τ`; separates a wrong labelling from wrong parts.
    pub best_placement_value: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub mode: SearchMode,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub rows: Vec<ConjectureRow>,
}

impl ConjectureReport {
    /// True when no row contradicts the conjecture and none is inconclusive.
    pub fn supported(&self) -> bool {
        self.rows
            .iter()
            .all(|r| matches!(r.verdict, Verdict::Equal | Verdict::NoBetterFound))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConjectureOptions {
    pub budget: u64,
    pub seed: u64,
    pub restarts: usize,
}

impl Default for ConjectureOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            seed: 0,
            restarts: DEFAULT_RESTARTS,
        }
    }
}

/// The count as a function on dense 8-entry vectors, with cheap evaluation
/// of every single-unit transfer.
struct Landscape {
    sets: Vec<Vec<usize>>,
}

impl Landscape {
    fn t3() -> Self {
        let catalog = cached_catalog(3).expect("t = 3 catalog");
        Self {
            sets: catalog
                .iter()
                .map(|s| s.members().iter().map(|&m| m as usize).collect())
                .collect(),
        }
    }

    fn value(&self, a: &[u64; 8]) -> u128 {
        let linear: u128 = a.iter().map(|&c| c as u128).sum();
        let pairs: u128 = a[1..].iter().map(|&c| choose2(c)).sum();
        let products: u128 = self
            .sets
            .iter()
            .map(|s| s.iter().map(|&i| a[i] as u128).product::<u128>())
            .sum();
        linear + pairs + products
    }

    /// `delta[i][j]` = change from moving one unit from `i` to `j`.
    fn transfer_deltas(&self, a: &[u64; 8]) -> [[i128; 8]; 8] {
        let mut g = [0i128; 8];
        let mut h = [[0i128; 8]; 8];
        for s in &self.sets {
            for (x, &i) in s.iter().enumerate() {
                let without_i: i128 = s
                    .iter()
                    .enumerate()
                    .filter(|&(y, _)| y != x)
                    .map(|(_, &m)| a[m] as i128)
                    .product();
                g[i] += without_i;
                for (y, &j) in s.iter().enumerate().skip(x + 1) {
                    let rest: i128 = s
                        .iter()
                        .enumerate()
                        .filter(|&(z, _)| z != x && z != y)
                        .map(|(_, &m)| a[m] as i128)
                        .product();
                    h[i][j] += rest;
                    h[j][i] += rest;
                }
            }
        }
        let mut delta = [[i128::MIN; 8]; 8];
        for i in 0..8 {
            if a[i] == 0 {
                continue;
            }
            for j in 0..8 {
                if i == j {
                    continue;
                }
                let gain_pair = if j != 0 { a[j] as i128 } else { 0 };
                let loss_pair = if i != 0 { a[i] as i128 - 1 } else { 0 };
                delta[i][j] = gain_pair - loss_pair + g[j] - g[i] - h[i][j];
            }
        }
        delta
    }

    fn best_move(&self, a: &[u64; 8]) -> Option<(usize, usize, i128)> {
        let delta = self.transfer_deltas(a);
        let mut best: Option<(usize, usize, i128)> = None;
        for (i, row) in delta.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                if d > 0 && best.is_none_or(|(_, _, b)| d > b) {
                    best = Some((i, j, d));
                }
            }
        }
        best
    }

    /// Steepest ascent under single-unit transfers.
    fn climb(&self, mut a: [u64; 8]) -> ([u64; 8], u128) {
        let mut value = self.value(&a);
        while let Some((i, j, d)) = self.best_move(&a) {
            a[i] -= 1;
            a[j] += 1;
            value = (value as i128 + d) as u128;
        }
        (a, value)
    }
}

fn random_composition(rng: &mut ChaCha8Rng, k: u64) -> [u64; 8] {
    let mut cuts: Vec<u64> = (0..7).map(|_| rng.gen_range(0..=k)).collect();
    cuts.sort_unstable();
    let mut out = [0u64; 8];
    let mut prev = 0;
    for (i, &c) in cuts.iter().enumerate() {
        out[i] = c - prev;
        prev = c;
    }
    out[7] = k - prev;
    out
}

fn dense8(a: &AVector) -> [u64; 8] {
    let mut out = [0u64; 8];
    out.copy_from_slice(&a.to_dense().expect("t = 3"));
    out
}

/// Maximum of the count over all distinct arrangements of `a[1..]`.
fn best_placement(land: &Landscape, a: &[u64; 8]) -> u128 {
    let mut parts: Vec<u64> = a[1..].to_vec();
    parts.sort_unstable();
    let mut best = 0;
    loop {
        let mut d = [0u64; 8];
        d[1..].copy_from_slice(&parts);
        best = best.max(land.value(&d));
        // next lexicographic permutation
        let Some(i) = (0..parts.len() - 1).rev().find(|&i| parts[i] < parts[i + 1]) else {
            break;
        };
        let j = (i + 1..parts.len()).rev().find(|&j| parts[j] > parts[i]).expect("successor exists");
        parts.swap(i, j);
        parts[i + 1..].reverse();
    }
    best
}

fn is_better(value: u128, a: &[u64; 8], best_value: u128, best: &[u64; 8]) -> bool {
    value > best_value || (value == best_value && a < best)
}

/// Compares the maximum of the `t = 3` count against the conjectured vector
/// for every `k` in `k_min..=k_max`.
pub fn check_conjecture_t3(
    k_min: u64,
    k_max: u64,
    mode: SearchMode,
    options: &ConjectureOptions,
) -> Result<ConjectureReport> {
    if k_min < 4 || k_min > k_max {
        return Err(Error::Domain(format!("need 4 ≤ k_min ≤ k_max, got {k_min}..={k_max}")));
    }
    let land = Landscape::t3();
    let mut rows = Vec::new();
    match mode {
        SearchMode::Exhaustive => {
            if k_max > EXHAUSTIVE_T3_MAX_K {
                return Err(Error::out_of_range(
                    "k_max",
                    k_max as i64,
                    format!("≤ {EXHAUSTIVE_T3_MAX_K} in exhaustive mode"),
                ));
            }
            let search = search_by_total(
                3,
                k_max as usize,
                Objective::Count,
                SearchOptions {
                    budget: options.budget,
                    symmetry: true,
                },
                None,
            )?;
            for k in k_min..=k_max {
                let conjectured = conjectured_t3(k)?;
                let conj = dense8(&conjectured);
                let conj_value = land.value(&conj);
                let best = fold_zero_rows(&search, k as usize).expect("total 0 is always visited");
                let verdict = if !search.exact {
                    Verdict::Inconclusive
                } else if best.value == conj_value {
                    Verdict::Equal
                } else {
                    Verdict::Unequal
                };
                rows.push(ConjectureRow {
                    k,
                    search_value: best.value,
                    conjectured_value: conj_value,
                    conjectured,
                    argmax: AVector::from_dense(3, &best.dense)?,
                    verdict,
                    conjectured_is_local_max: land.best_move(&conj).is_none(),
                    best_placement_value: best_placement(&land, &conj),
                });
            }
        }
        SearchMode::LocalSearch => {
            for k in k_min..=k_max {
                let conjectured = conjectured_t3(k)?;
                let conj = dense8(&conjectured);
                let conj_value = land.value(&conj);
                let (mut best, mut best_value) = land.climb(conj);
                let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
                rng.set_stream(k);
                for _ in 0..options.restarts {
                    let (a, v) = land.climb(random_composition(&mut rng, k));
                    if is_better(v, &a, best_value, &best) {
                        best = a;
                        best_value = v;
                    }
                }
                let verdict = if best_value > conj_value {
                    Verdict::BetterFound
                } else {
                    Verdict::NoBetterFound
                };
                rows.push(ConjectureRow {
                    k,
                    search_value: best_value,
                    conjectured_value: conj_value,
                    conjectured,
                    argmax: AVector::from_dense(3, &best)?,
                    verdict,
                    conjectured_is_local_max: land.best_move(&conj).is_none(),
                    best_placement_value: best_placement(&land, &conj),
                });
            }
        }
    }
    Ok(ConjectureReport {
        mode,
        seed: (mode == SearchMode::LocalSearch).then_some(options.seed),
        restarts: (mode == SearchMode::LocalSearch).then_some(options.restarts),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeadingRow {
    pub k: u64,
    pub max_value: u128,
    /// Value at near-equal parts on a projective basis.
    pub basis_value: u128,
    pub witness: AVector,
    pub witness_on_basis: bool,
    /// Maximizers (up to coordinate permutation) not of the basis shape.
    pub other_maximizers: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeadingReport {
    pub t: usize,
    pub exact: bool,
    pub rows: Vec<LeadingRow>,
}

impl LeadingReport {
    pub fn holds(&self) -> bool {
        self.exact && self.rows.iter().all(|r| r.holds)
    }
}

/// Product of the near-equal split of `k` into `parts` parts.
pub fn balanced_product(k: u64, parts: u64) -> u128 {
    (0..parts).map(|i| ((k + i) / parts) as u128).product()
}

/// Whether `dense` vanishes off some projective basis and its parts on that
/// basis differ by at most one.
pub fn on_projective_basis(t: usize, dense: &[u64]) -> bool {
    let catalog = cached_catalog(t).expect("catalog for t ≤ 5");
    let support = dense
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .fold(0u64, |acc, (tau, _)| acc | (1 << tau));
    if dense[0] > 0 {
        return false;
    }
    catalog.sets_of_size(t + 1).iter().any(|s| {
        if support & !s.mask() != 0 {
            return false;
        }
        let vals: Vec<u64> = s.members().iter().map(|&m| dense[m as usize]).collect();
        let (lo, hi) = (vals.iter().min().unwrap(), vals.iter().max().unwrap());
        hi - lo <= 1
    })
}

/// Maximizes the leading term over integer vectors with `a₀ = 0` and checks
/// that the maximum is attained at near-equal parts on a projective basis.
pub fn check_conjecture_leading(
    t: usize,
    k_min: u64,
    k_max: u64,
    budget: u64,
) -> Result<LeadingReport> {
    if !(2..=3).contains(&t) {
        return Err(Error::out_of_range("t", t as i64, "2..=3"));
    }
    if k_min > k_max {
        return Err(Error::Domain(format!("empty range {k_min}..={k_max}")));
    }
    let check = move |dense: &[u64]| on_projective_basis(t, dense);
    let search = search_by_total(
        t,
        k_max as usize,
        Objective::LeadingTerm,
        SearchOptions {
            budget,
            symmetry: true,
        },
        Some(&check),
    )?;
    let mut rows = Vec::new();
    for k in k_min..=k_max {
        let best = search.best[k as usize].as_ref().expect("every total is visited");
        let basis_value = balanced_product(k, t as u64 + 1);
        let witness_on_basis = on_projective_basis(t, &best.dense);
        rows.push(LeadingRow {
            k,
            max_value: best.value,
            basis_value,
            witness: AVector::from_dense(t, &best.dense)?,
            witness_on_basis,
            other_maximizers: search.off_pattern[k as usize],
            holds: search.exact && best.value == basis_value,
        });
    }
    Ok(LeadingReport {
        t,
        exact: search.exact,
        rows,
    })
}

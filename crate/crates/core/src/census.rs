//! Exhaustive scan of projective binary codes at small dimension, and the
//! explicit constructions.
//!
//! Every projective `[n, k]` code is equivalent to one whose column set
//! contains the `k` unit vectors, so the default scan fixes those and
//! chooses the remaining `n − k` columns. Counting is done straight from the
//! definition on codeword supports, independent of the counting formula.

use rayon::prelude::*;
use serde::Serialize;

use crate::counting::AVector;
use crate::error::{Error, Result};
use crate::gf2::{rank_bits, BinaryCode, BitVec};

/// Largest dimension the census accepts.
pub const CENSUS_MAX_K: usize = 6;

/// Default cap on the number of column sets examined.
pub const DEFAULT_CENSUS_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusMode {
    /// Column sets containing all unit vectors.
    IdentityNormalized,
    /// All `n`-subsets of nonzero columns, filtered by rank.
    FullScan,
}

#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    pub budget: u64,
    pub mode: CensusMode,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_CENSUS_BUDGET,
            mode: CensusMode::IdentityNormalized,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusResult {
    pub n: usize,
    pub k: usize,
    pub max_m: u64,
    /// Generator columns of a maximizing code, each of length `k`.
    pub witness_columns: Vec<BitVec>,
    /// Rank-`k` column sets examined.
    pub codes_scanned: u64,
}

impl CensusResult {
    pub fn witness_code(&self) -> Result<BinaryCode> {
        let cols: Vec<u64> = self.witness_columns.iter().map(BitVec::bits).collect();
        BinaryCode::from_columns(self.k, &cols)
    }
}

/// Number of minimal codewords of the code with the given `k`-bit columns,
/// straight from the definition.
pub fn count_minimal_by_support(k: usize, columns: &[u64]) -> u64 {
    let size = 1usize << k;
    let mut row_masks = [0u64; 64];
    for (j, &c) in columns.iter().enumerate() {
        let mut m = c;
        while m != 0 {
            row_masks[m.trailing_zeros() as usize] |= 1 << j;
            m &= m - 1;
        }
    }
    let mut supp = vec![0u64; size];
    for x in 1..size {
        supp[x] = supp[x & (x - 1)] ^ row_masks[x.trailing_zeros() as usize];
    }
    let mut order: Vec<(u32, u64)> = supp[1..].iter().map(|&s| (s.count_ones(), s)).collect();
    order.sort_unstable();
    let mut count = 0;
    for (i, &(w, s)) in order.iter().enumerate() {
        // a nonzero codeword with empty support would make the code rank deficient
        if w == 0 {
            continue;
        }
        let dominated = order[..i]
            .iter()
            .take_while(|&&(v, _)| v < w)
            .any(|&(v, c)| v > 0 && c & !s == 0);
        if !dominated {
            count += 1;
        }
    }
    count
}

fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[derive(Clone)]
struct Best {
    value: u64,
    columns: Vec<u64>,
    scanned: u64,
}

impl Best {
    fn absorb(&mut self, other: Best) {
        if other.value > self.value
            || (other.value == self.value && !other.columns.is_empty() && (self.columns.is_empty() || other.columns < self.columns))
        {
            self.value = other.value;
            self.columns = other.columns;
        }
        self.scanned += other.scanned;
    }
}

/// Scans all `r`-subsets of `pool` that start with `pool[first]`.
fn scan_from(k: usize, fixed: &[u64], pool: &[u64], r: usize, first: usize, check_rank: bool) -> Best {
    let mut best = Best {
        value: 0,
        columns: Vec::new(),
        scanned: 0,
    };
    let mut chosen: Vec<usize> = Vec::with_capacity(r);
    let mut cols: Vec<u64> = fixed.to_vec();
    chosen.push(first);
    cols.push(pool[first]);
    fn rec(
        k: usize,
        pool: &[u64],
        r: usize,
        chosen: &mut Vec<usize>,
        cols: &mut Vec<u64>,
        check_rank: bool,
        best: &mut Best,
    ) {
        if chosen.len() == r {
            if check_rank && rank_bits(cols) < k {
                return;
            }
            best.scanned += 1;
            let m = count_minimal_by_support(k, cols);
            let mut sorted = cols.clone();
            sorted.sort_unstable();
            if m > best.value || (m == best.value && (best.columns.is_empty() || sorted < best.columns)) {
                best.value = m;
                best.columns = sorted;
            }
            return;
        }
        let start = chosen.last().map_or(0, |&c| c + 1);
        let need = r - chosen.len();
        for i in start..=pool.len() - need {
            chosen.push(i);
            cols.push(pool[i]);
            rec(k, pool, r, chosen, cols, check_rank, best);
            chosen.pop();
            cols.pop();
        }
    }
    if r == 0 {
        unreachable!("r ≥ 1 when scanning from a first element");
    }
    rec(k, pool, r, &mut chosen, &mut cols, check_rank, &mut best);
    best
}

/// Column sets the census would examine at `(n, k)`.
pub fn census_work(n: usize, k: usize, mode: CensusMode) -> u128 {
    let nonzero = (1u64 << k) - 1;
    match mode {
        CensusMode::IdentityNormalized => binomial(nonzero - k as u64, (n - k) as u64),
        CensusMode::FullScan => binomial(nonzero, n as u64),
    }
}

/// Maximum of `M` over projective `[n, k]` codes.
pub fn census_max(n: usize, k: usize, options: &CensusOptions) -> Result<CensusResult> {
    if k == 0 || k > CENSUS_MAX_K {
        return Err(Error::out_of_range("k", k as i64, format!("1..={CENSUS_MAX_K}")));
    }
    let nonzero = (1usize << k) - 1;
    if n < k || n > nonzero {
        return Err(Error::Domain(format!(
            "no projective [{n},{k}] code: need {k} ≤ n ≤ {nonzero}"
        )));
    }
    let work = census_work(n, k, options.mode);
    if work > options.budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "census",
            needed: work,
            budget: options.budget,
        });
    }
    let units: Vec<u64> = (0..k).map(|i| 1u64 << i).collect();
    let (fixed, pool, check_rank): (Vec<u64>, Vec<u64>, bool) = match options.mode {
        CensusMode::IdentityNormalized => (
            units,
            (1..=nonzero as u64).filter(|c| !c.is_power_of_two()).collect(),
            false,
        ),
        CensusMode::FullScan => (Vec::new(), (1..=nonzero as u64).collect(), true),
    };
    let r = n - fixed.len();
    let best = if r == 0 {
        Best {
            value: count_minimal_by_support(k, &fixed),
            columns: fixed.clone(),
            scanned: 1,
        }
    } else {
        (0..=pool.len() - r)
            .into_par_iter()
            .map(|first| scan_from(k, &fixed, &pool, r, first, check_rank))
            .collect::<Vec<_>>()
            .into_iter()
            .fold(
                Best {
                    value: 0,
                    columns: Vec::new(),
                    scanned: 0,
                },
                |mut acc, b| {
                    acc.absorb(b);
                    acc
                },
            )
    };
    Ok(CensusResult {
        n,
        k,
        max_m: best.value,
        witness_columns: best.columns.iter().map(|&c| BitVec::from_masked(k, c)).collect(),
        codes_scanned: best.scanned,
    })
}

/// `max_{k ≤ n' ≤ n} census_max(n', k)`, which equals `M₂(n, k)` because zero
/// and repeated columns never change `M`. Stops early once `2ᵏ − 1` is hit.
pub fn census_folded(n: usize, k: usize, options: &CensusOptions) -> Result<CensusResult> {
    if k == 0 || k > CENSUS_MAX_K || n < k {
        return Err(Error::Domain(format!("census needs 1 ≤ k ≤ {CENSUS_MAX_K} and n ≥ k, got n = {n}, k = {k}")));
    }
    let ceiling = (1u64 << k) - 1;
    let top = n.min(ceiling as usize);
    let mut folded: Option<CensusResult> = None;
    let mut scanned = 0;
    for m in k..=top {
        let r = census_max(m, k, options)?;
        scanned += r.codes_scanned;
        if folded.as_ref().is_none_or(|f| r.max_m > f.max_m) {
            folded = Some(r);
        }
        if folded.as_ref().is_some_and(|f| f.max_m == ceiling) {
            break;
        }
    }
    let mut out = folded.expect("at least the identity code is scanned");
    out.n = n;
    out.codes_scanned = scanned;
    Ok(out)
}

/// Systematic code `[I_k | A]` whose information rows realize `a`.
pub fn realize(a: &AVector) -> Result<BinaryCode> {
    let t = a.t();
    let k = a.k() as usize;
    if k == 0 || k + t > 64 {
        return Err(Error::Domain(format!("cannot realize k = {k}, t = {t} within length 64")));
    }
    let mut rows = Vec::with_capacity(k);
    for (tau, c) in a.iter() {
        for _ in 0..c {
            let i = rows.len();
            rows.push(BitVec::from_masked(k + t, (1u64 << i) | (tau << k)));
        }
    }
    BinaryCode::new(rows)
}

/// Rows spread as evenly as possible over the projective basis
/// `{e₁, …, e_t, 𝟏}`.
pub fn construct_projective_base_code(k: usize, t: usize) -> Result<BinaryCode> {
    if k < t + 1 {
        return Err(Error::Domain(format!("need k ≥ t + 1, got k = {k}, t = {t}")));
    }
    if t == 0 {
        return realize(&AVector::from_pairs(0, [(0, k as u64)])?);
    }
    let basis = crate::mgsets::canonical_basis(t);
    let parts = basis.len();
    let pairs = basis
        .iter()
        .enumerate()
        .map(|(i, &tau)| (tau, ((k + i) / parts) as u64));
    realize(&AVector::from_pairs(t, pairs)?)
}

/// Two rows on each unit vector `eᵢ` and `k − 2t` zero rows.
pub fn construct_double_unit_code(k: usize, t: usize) -> Result<BinaryCode> {
    if k < 2 * t {
        return Err(Error::Domain(format!("need k ≥ 2t, got k = {k}, t = {t}")));
    }
    let pairs = (0..t)
        .map(|i| (1u64 << i, 2))
        .chain(std::iter::once((0, (k - 2 * t) as u64)));
    realize(&AVector::from_pairs(t, pairs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codewords::{a_vector, minimal_codewords_bruteforce};
    use crate::counting::{count, count_canonical_base};
    use crate::gf2::to_systematic;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(code: &BinaryCode) -> u64 {
        minimal_codewords_bruteforce(code).unwrap().count() as u64
    }

    #[test]
    fn support_count_matches_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let k = rng.gen_range(1..=6);
            let n = rng.gen_range(k..=k + 8);
            let code = crate::codewords::tests::random_code(&mut rng, k, n);
            assert_eq!(count_minimal_by_support(k, &code.columns()), m(&code));
        }
    }

    #[test]
    fn census_examples() {
        let o = CensusOptions::default();
        assert_eq!(census_folded(6, 3, &o).unwrap().max_m, 7);
        assert_eq!(census_folded(5, 3, &o).unwrap().max_m, 6);
        for k in 1..=5 {
            assert_eq!(census_folded(k, k, &o).unwrap().max_m, k as u64);
        }
        let r = census_folded(5, 3, &o).unwrap();
        assert_eq!(m(&r.witness_code().unwrap()), 6);
    }

    #[test]
    fn normalized_scan_agrees_with_full_scan() {
        let norm = CensusOptions::default();
        let full = CensusOptions {
            mode: CensusMode::FullScan,
            ..norm
        };
        for k in 1..=4 {
            for n in k..=((1 << k) - 1).min(k + 5) {
                let a = census_max(n, k, &norm).unwrap();
                let b = census_max(n, k, &full).unwrap();
                assert_eq!(a.max_m, b.max_m, "({n},{k})");
                assert!(b.codes_scanned >= a.codes_scanned);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let o = CensusOptions {
            budget: 10,
            mode: CensusMode::IdentityNormalized,
        };
        assert!(matches!(census_max(10, 5, &o), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn double_unit_examples() {
        for (k, t, want) in [(6, 2, 8), (4, 2, 6), (8, 3, 11)] {
            let c = construct_double_unit_code(k, t).unwrap();
            assert_eq!((c.n(), c.k()), (k + t, k));
            assert!(c.is_projective());
            assert_eq!(m(&c), want);
        }
        assert!(construct_double_unit_code(3, 2).is_err());
    }

    #[test]
    fn projective_base_examples() {
        let c = construct_projective_base_code(9, 2).unwrap();
        let a = a_vector(&to_systematic(&c).unwrap());
        assert_eq!(a.to_dense().unwrap(), vec![0, 3, 3, 3]);
        assert!(m(&c) >= 27);
        assert_eq!(m(&construct_projective_base_code(3, 2).unwrap()), 6);
        assert_eq!(m(&construct_projective_base_code(4, 3).unwrap()), 11);
        assert!(construct_projective_base_code(2, 2).is_err());
        for k in 2..=10 {
            for t in 1..=3.min(k - 1) {
                let c = construct_projective_base_code(k, t).unwrap();
                assert!(c.is_projective(), "k={k} t={t}");
                let a = a_vector(&to_systematic(&c).unwrap());
                assert_eq!(m(&c) as u128, count_canonical_base(&a).unwrap());
                assert_eq!(m(&c) as u128, count(&a).unwrap());
                assert!(m(&c) >= (k + t) as u64);
            }
        }
    }

    #[test]
    fn projective_codes_meet_the_lower_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut seen = 0;
        while seen < 100 {
            let k = rng.gen_range(2..=10);
            let t = rng.gen_range(1..=3);
            let code = crate::codewords::tests::random_code(&mut rng, k, k + t);
            if !code.is_projective() {
                continue;
            }
            seen += 1;
            assert!(m(&code) >= (k + t) as u64);
        }
    }
}

//! Minimal codewords: a definition-level enumerator, the systematic-form
//! enumerator, the counting vector, and structural reductions.

mod reduce;

use std::collections::BTreeSet;

use serde::Serialize;

pub use reduce::{
    reduce, reduce_ordered, split_components, ReductionKind, ReductionOrder, ReductionStep,
    ReductionTrace,
};

use crate::counting::AVector;
use crate::error::{Error, Result};
use crate::mgsets::is_mg_raw;
use crate::gf2::{strictly_inside, to_systematic, BinaryCode, BitVec, SystematicCode};

/// Largest dimension accepted by the brute-force enumerator.
pub const BRUTE_FORCE_MAX_K: usize = 20;

/// Default cap on the number of row subsets the systematic enumerator visits.
pub const DEFAULT_SUBSET_BUDGET: u64 = 50_000_000;

/// Subsets larger than this are never expanded (their 2^|S| subset sums
/// would dominate any budget).
const MAX_SUBSET_SIZE: usize = 21;

/// The minimal codewords of a code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalSet {
    code: BinaryCode,
    words: BTreeSet<BitVec>,
}

impl MinimalSet {
    pub fn code(&self) -> &BinaryCode {
        &self.code
    }

    /// Sorted by integer encoding.
    pub fn words(&self) -> &BTreeSet<BitVec> {
        &self.words
    }

    /// `M(C)`.
    pub fn count(&self) -> usize {
        self.words.len()
    }
}

/// Whether a codeword of `code` is minimal.
pub fn is_minimal_in(word: &BitVec, code: &BinaryCode) -> Result<bool> {
    if word.len() != code.n() {
        return Err(Error::LengthMismatch {
            left: code.n(),
            right: word.len(),
        });
    }
    if !code.contains(word) {
        return Err(Error::Domain(format!("{word} is not a codeword")));
    }
    if word.is_zero() {
        return Ok(false);
    }
    if code.k() > BRUTE_FORCE_MAX_K {
        return Err(Error::BudgetExceeded {
            what: "minimality test",
            needed: 1u128 << code.k(),
            budget: 1 << BRUTE_FORCE_MAX_K,
        });
    }
    Ok(!(1u64..(1 << code.k())).any(|m| {
        let c = code.encode(m).bits();
        c != 0 && strictly_inside(c, word.bits())
    }))
}

/// Enumerates all `2ᵏ − 1` nonzero codewords and keeps those whose support
/// does not strictly contain another codeword's support.
pub fn minimal_codewords_bruteforce(code: &BinaryCode) -> Result<MinimalSet> {
    let k = code.k();
    if k > BRUTE_FORCE_MAX_K {
        return Err(Error::BudgetExceeded {
            what: "brute-force enumeration",
            needed: 1u128 << k,
            budget: 1 << BRUTE_FORCE_MAX_K,
        });
    }
    let rows = code.row_bits();
    let total = 1usize << k;
    let mut words = vec![0u64; total];
    for m in 1..total {
        let low = m & (m - 1);
        words[m] = words[low] ^ rows[m.trailing_zeros() as usize];
    }
    let mut nonzero: Vec<u64> = words[1..].to_vec();
    nonzero.sort_unstable_by_key(|w| (w.count_ones(), *w));
    let mut minimal = BTreeSet::new();
    for (i, &w) in nonzero.iter().enumerate() {
        let weight = w.count_ones();
        let dominated = nonzero[..i]
            .iter()
            .take_while(|c| c.count_ones() < weight)
            .any(|&c| c & !w == 0);
        if !dominated {
            minimal.insert(BitVec::from_masked(code.n(), w));
        }
    }
    Ok(MinimalSet {
        code: code.clone(),
        words: minimal,
    })
}

/// A row subset `S` whose sum is a minimal codeword, with its information part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalSubset {
    /// Bit `i` set iff systematic row `i` is in `S`.
    pub rows: u64,
    /// `c^S_I`.
    pub info: u64,
}

impl MinimalSubset {
    pub fn size(&self) -> u32 {
        self.rows.count_ones()
    }
}

fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Row subsets visited by the systematic enumerator: `Σ_{s=1}^{t+1} C(k, s)`.
pub fn systematic_work(k: usize, t: usize) -> u128 {
    (1..=(t + 1).min(k)).map(|s| binomial(k as u64, s as u64)).sum()
}

/// The row subsets of a systematic generator that yield minimal codewords.
///
/// Subsets are visited by cardinality `1..=t+1` in colex order. A subset is
/// accepted iff no nonempty proper subset vanishes on the information
/// coordinates and its information sum is minimal inside the span of its
/// rows' information parts.
pub fn minimal_subsets(sc: &SystematicCode, budget: u64) -> Result<Vec<MinimalSubset>> {
    let k = sc.k();
    let t = sc.t();
    let work = systematic_work(k, t);
    if work > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "systematic enumeration (try the brute-force path for small k)",
            needed: work,
            budget,
        });
    }
    let max_size = (t + 1).min(k);
    if max_size > MAX_SUBSET_SIZE {
        return Err(Error::BudgetExceeded {
            what: "systematic enumeration subset size",
            needed: max_size as u128,
            budget: MAX_SUBSET_SIZE as u64,
        });
    }
    let info: Vec<u64> = sc.info_rows().iter().map(BitVec::bits).collect();
    let mut out = Vec::new();
    let mut members = [0u64; MAX_SUBSET_SIZE];
    for size in 1..=max_size {
        // Gosper's hack walks same-size masks in colex order
        let mut s: u64 = (1u64 << size) - 1;
        let limit = if k == 64 { u64::MAX } else { 1u64 << k };
        while s < limit {
            let mut m = s;
            let mut len = 0;
            let mut total = 0u64;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                members[len] = info[i];
                total ^= info[i];
                len += 1;
                m &= m - 1;
            }
            if accepts(&members[..len]) {
                out.push(MinimalSubset {
                    rows: s,
                    info: total,
                });
            }
            if size == 64 {
                break;
            }
            let c = s & s.wrapping_neg();
            let r = s.wrapping_add(c);
            if r == 0 {
                break;
            }
            s = (((r ^ s) >> 2) / c) | r;
        }
    }
    Ok(out)
}

// A single generator row is always minimal; larger sets must not contain a
// proper subset whose information sum lies inside c^S_I.
fn accepts(members: &[u64]) -> bool {
    members.len() == 1 || is_mg_raw(members)
}

/// Fast enumeration through the systematic form.
pub fn minimal_codewords_systematic(code: &BinaryCode, budget: u64) -> Result<MinimalSet> {
    let sc = to_systematic(code)?;
    let subsets = minimal_subsets(&sc, budget)?;
    let rows = sc.reduced_rows();
    let words = subsets
        .iter()
        .map(|s| {
            let mut m = s.rows;
            let mut w = 0u64;
            while m != 0 {
                w ^= rows[m.trailing_zeros() as usize];
                m &= m - 1;
            }
            BitVec::from_masked(code.n(), w)
        })
        .collect();
    Ok(MinimalSet {
        code: code.clone(),
        words,
    })
}

/// Multiplicities of the information rows.
pub fn a_vector(sc: &SystematicCode) -> AVector {
    AVector::from_pairs(sc.t(), sc.info_rows().iter().map(|r| (r.bits(), 1)))
        .expect("info rows have length t")
}

//! Minimal generating subsets of F₂ᵗ.
//!
//! A set of information vectors is minimal generating when the rows carrying
//! exactly those information parts sum to a minimal codeword. These sets are
//! the combinatorial kernel of the counting formula in [`crate::counting`].

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::{bitstring, BitVec};

/// Largest `t` for which a catalog can be built.
pub const MAX_CATALOG_T: usize = 5;

/// Sets bigger than this are refused by [`is_minimal_generating`].
const SUBSET_SUM_GUARD: usize = 20;

/// Minimal-generating test on raw distinct words.
///
/// A set qualifies when no nonempty proper subset sums to a vector whose
/// support lies inside the support of the total sum. For a zero total this
/// is "no vanishing proper subset"; for a nonzero total it says the total is
/// minimal in the span and the members are independent.
pub(crate) fn is_mg_raw(members: &[u64]) -> bool {
    match members.len() {
        0 => false,
        1 => members[0] != 0,
        len => {
            let total = members.iter().fold(0, |acc, m| acc ^ m);
            let full = (1u64 << len) - 1;
            let mut acc = 0u64;
            for step in 1u64..=full {
                acc ^= members[step.trailing_zeros() as usize];
                if step ^ (step >> 1) == full {
                    continue;
                }
                // proper nonempty subset sum `acc`: zero, equal or strictly inside the total all disqualify
                if acc & !total == 0 {
                    return false;
                }
            }
            true
        }
    }
}

/// Whether `s_hat` is a minimal generating set. Members must be distinct and
/// of equal length.
pub fn is_minimal_generating(s_hat: &[BitVec]) -> Result<bool> {
    let Some(first) = s_hat.first() else {
        return Err(Error::Domain("minimal generating test needs a nonempty set".into()));
    };
    if s_hat.len() > SUBSET_SUM_GUARD {
        return Err(Error::BudgetExceeded {
            what: "minimal generating test",
            needed: 1u128 << s_hat.len(),
            budget: 1 << SUBSET_SUM_GUARD,
        });
    }
    let len = first.len();
    let mut raw = Vec::with_capacity(s_hat.len());
    for v in s_hat {
        if v.len() != len {
            return Err(Error::LengthMismatch {
                left: len,
                right: v.len(),
            });
        }
        if raw.contains(&v.bits()) {
            return Err(Error::Domain(format!("duplicate member {v}")));
        }
        raw.push(v.bits());
    }
    Ok(is_mg_raw(&raw))
}

/// Pair criterion: two distinct nonzero vectors form a minimal generating
/// set iff their supports meet.
pub fn is_mg_pair(a: BitVec, b: BitVec) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("pair members must be nonzero".into()));
    }
    if a == b {
        return Err(Error::Domain("pair members must differ".into()));
    }
    Ok(a.bits() & b.bits() != 0)
}

/// Literal reading: the total is nonzero and no nonzero span element has
/// support strictly inside it.
#[cfg(test)]
fn sum_minimal_in_span(members: &[u64]) -> bool {
    let total = members.iter().fold(0, |acc, m| acc ^ m);
    if total == 0 {
        return false;
    }
    (1u64..(1 << members.len())).all(|sel| {
        let y = (0..members.len())
            .filter(|i| (sel >> i) & 1 == 1)
            .fold(0, |acc, i| acc ^ members[i]);
        y == 0 || !crate::gf2::strictly_inside(y, total)
    })
}

/// One catalog entry: members sorted ascending by integer encoding, plus the
/// membership mask (bit `τ` set for each member `τ`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MgSet {
    members: Vec<u64>,
    mask: u64,
}

impl MgSet {
    fn new(members: Vec<u64>) -> Self {
        let mask = members.iter().fold(0u64, |acc, &m| acc | (1u64 << m));
        Self { members, mask }
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn to_bitvecs(&self, t: usize) -> Vec<BitVec> {
        self.members
            .iter()
            .map(|&m| BitVec::new(t, m).expect("member fits in t bits"))
            .collect()
    }

    fn render(&self, t: usize) -> Vec<String> {
        self.members.iter().map(|&m| bitstring(t, m)).collect()
    }
}

/// All minimal generating subsets of F₂ᵗ∖{0} with sizes `2..=t+1`.
#[derive(Clone, Debug)]
pub struct MGCatalog {
    t: usize,
    sets_by_size: BTreeMap<usize, Vec<MgSet>>,
}

impl MGCatalog {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn sets_by_size(&self) -> &BTreeMap<usize, Vec<MgSet>> {
        &self.sets_by_size
    }

    pub fn sets_of_size(&self, size: usize) -> &[MgSet] {
        self.sets_by_size.get(&size).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Entries in (size, lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = &MgSet> {
        self.sets_by_size.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.sets_by_size.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn size_counts(&self) -> BTreeMap<usize, usize> {
        self.sets_by_size
            .iter()
            .map(|(&s, v)| (s, v.len()))
            .collect()
    }

    /// Size-(t+1) entries: the projective bases of F₂ᵗ.
    pub fn projective_bases(&self) -> &[MgSet] {
        self.sets_of_size(self.t + 1)
    }
}

impl Serialize for MGCatalog {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Dump {
            t: usize,
            counts: BTreeMap<usize, usize>,
            sets_by_size: BTreeMap<usize, Vec<Vec<String>>>,
        }
        Dump {
            t: self.t,
            counts: self.size_counts(),
            sets_by_size: self
                .sets_by_size
                .iter()
                .map(|(&s, v)| (s, v.iter().map(|e| e.render(self.t)).collect()))
                .collect(),
        }
        .serialize(serializer)
    }
}

fn check_t(t: usize) -> Result<()> {
    if (1..=MAX_CATALOG_T).contains(&t) {
        Ok(())
    } else {
        Err(Error::out_of_range("t", t as i64, format!("1..={MAX_CATALOG_T}")))
    }
}

/// Exhaustive construction over all subsets of F₂ᵗ∖{0} of size 2..=t+1.
pub fn build_catalog(t: usize) -> Result<MGCatalog> {
    check_t(t)?;
    let universe: Vec<u64> = (1u64..(1 << t)).collect();
    let mut sets_by_size = BTreeMap::new();
    for size in 2..=t + 1 {
        let mut found = Vec::new();
        let mut chosen = Vec::with_capacity(size);
        collect_mg(&universe, 0, size, &mut chosen, &mut found);
        sets_by_size.insert(size, found);
    }
    Ok(MGCatalog { t, sets_by_size })
}

fn collect_mg(
    universe: &[u64],
    start: usize,
    size: usize,
    chosen: &mut Vec<u64>,
    out: &mut Vec<MgSet>,
) {
    if chosen.len() == size {
        if is_mg_raw(chosen) {
            out.push(MgSet::new(chosen.clone()));
        }
        return;
    }
    let remaining = size - chosen.len();
    for i in start..=universe.len().saturating_sub(remaining) {
        chosen.push(universe[i]);
        collect_mg(universe, i + 1, size, chosen, out);
        chosen.pop();
    }
}

/// Catalog for `t`, built once per process.
pub fn cached_catalog(t: usize) -> Result<&'static MGCatalog> {
    static CACHE: [OnceLock<MGCatalog>; MAX_CATALOG_T + 1] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    check_t(t)?;
    Ok(CACHE[t].get_or_init(|| build_catalog(t).expect("t already checked")))
}

/// Projective bases of F₂ᵗ as sorted member lists.
pub fn projective_bases(t: usize) -> Result<Vec<Vec<BitVec>>> {
    if t < 2 {
        return Err(Error::out_of_range("t", t as i64, format!("2..={MAX_CATALOG_T}")));
    }
    let catalog = cached_catalog(t)?;
    Ok(catalog
        .projective_bases()
        .iter()
        .map(|s| s.to_bitvecs(t))
        .collect())
}

/// `{e₁, …, e_t, 𝟏}` as raw words (for `t = 1` this collapses to `{1}`).
pub fn canonical_basis(t: usize) -> Vec<u64> {
    let mut out: Vec<u64> = (0..t).map(|i| 1u64 << i).collect();
    let ones = if t == 0 { 0 } else { (1u64 << t) - 1 };
    if !out.contains(&ones) {
        out.push(ones);
    }
    out.sort_unstable();
    out
}

/// Text dump: one set per line, grouped by size with per-size counts.
pub fn render_catalog(catalog: &MGCatalog) -> String {
    let mut out = format!("t = {}\n", catalog.t);
    for (size, sets) in &catalog.sets_by_size {
        out.push_str(&format!("size {size}: {}\n", sets.len()));
        for s in sets {
            out.push_str(&s.render(catalog.t).join(","));
            out.push('\n');
        }
    }
    out
}

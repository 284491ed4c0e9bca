//! Bit-level linear algebra over GF(2).
//!
//! Every vector fits in a single `u64`: coordinate `i` (1-indexed in all
//! user-facing text) lives in bit `i - 1`. Codes are capped at length 64.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Maximum supported code length.
pub const MAX_LEN: usize = 64;

/// Largest input accepted by [`span_enumerate`].
pub const SPAN_GUARD: usize = 20;

#[inline]
pub(crate) fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// A fixed-length vector over GF(2).
///
/// Ordering is by length, then by the integer encoding of the bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: u8,
    bits: u64,
}

impl BitVec {
    /// Builds a vector from raw bits. Bits at positions `>= len` must be clear.
    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len > MAX_LEN {
            return Err(Error::out_of_range("vector length", len as i64, "0..=64"));
        }
        if bits & !low_mask(len) != 0 {
            return Err(Error::Domain(format!(
                "bits {bits:#x} set beyond length {len}"
            )));
        }
        Ok(Self {
            len: len as u8,
            bits,
        })
    }

    /// Like [`BitVec::new`] but masks stray high bits instead of failing.
    pub(crate) fn from_masked(len: usize, bits: u64) -> Self {
        debug_assert!(len <= MAX_LEN);
        Self {
            len: len as u8,
            bits: bits & low_mask(len),
        }
    }

    pub fn zero(len: usize) -> Self {
        Self::from_masked(len, 0)
    }

    /// The `i`-th unit vector, `i` 0-indexed.
    pub fn unit(len: usize, i: usize) -> Self {
        assert!(i < len, "unit index {i} out of range for length {len}");
        Self::from_masked(len, 1u64 << i)
    }

    pub fn ones(len: usize) -> Self {
        Self::from_masked(len, u64::MAX)
    }

    /// Parses a string of `'0'`/`'1'` characters; character `i + 1` is bit `i`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::format(None, "empty bitstring"));
        }
        if text.len() > MAX_LEN {
            return Err(Error::format(
                None,
                format!("bitstring of length {} exceeds {MAX_LEN}", text.len()),
            ));
        }
        let mut bits = 0u64;
        for (i, ch) in text.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << i,
                other => {
                    return Err(Error::format(
                        None,
                        format!("illegal character {other:?} at position {}", i + 1),
                    ))
                }
            }
        }
        Ok(Self {
            len: text.len() as u8,
            bits,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Bit at 0-indexed position `i`.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.len() && (self.bits >> i) & 1 == 1
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// 1-indexed coordinates of the nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        support(*self)
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(Self {
            len: self.len,
            bits: self.bits ^ other.bits,
        })
    }

    /// `supp(self) ⊊ supp(other)`.
    pub fn strictly_contained_in(&self, other: &Self) -> Result<bool> {
        support_strictly_contained(*self, *other)
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Renders the low `len` bits of `bits` as a bitstring.
pub fn bitstring(len: usize, bits: u64) -> String {
    BitVec::from_masked(len, bits).to_string()
}

fn check_len(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::LengthMismatch { left: a, right: b })
    }
}

pub fn support(v: BitVec) -> Vec<usize> {
    (0..v.len()).filter(|&i| v.get(i)).map(|i| i + 1).collect()
}

/// True iff `supp(a) ⊊ supp(b)`.
pub fn support_strictly_contained(a: BitVec, b: BitVec) -> Result<bool> {
    check_len(a.len(), b.len())?;
    Ok(strictly_inside(a.bits, b.bits))
}

#[inline]
pub(crate) fn strictly_inside(a: u64, b: u64) -> bool {
    a & !b == 0 && a != b
}

/// Row rank over GF(2) of raw words.
pub fn rank_bits(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::with_capacity(rows.len());
    for &row in rows {
        let mut r = row;
        for &b in &basis {
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(r);
            // keep basis sorted descending so the min-reduction above is a full elimination
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

pub fn rank(rows: &[BitVec]) -> usize {
    let raw: Vec<u64> = rows.iter().map(BitVec::bits).collect();
    rank_bits(&raw)
}

/// All GF(2) linear combinations of `vectors`, including zero.
pub fn span_enumerate(len: usize, vectors: &[BitVec]) -> Result<BTreeSet<BitVec>> {
    if vectors.len() > SPAN_GUARD {
        return Err(Error::BudgetExceeded {
            what: "span enumeration",
            needed: 1u128 << vectors.len(),
            budget: 1 << SPAN_GUARD,
        });
    }
    for v in vectors {
        check_len(len, v.len())?;
    }
    let mut out = BTreeSet::new();
    let mut acc = 0u64;
    out.insert(BitVec::from_masked(len, 0));
    for step in 1u64..(1u64 << vectors.len()) {
        acc ^= vectors[step.trailing_zeros() as usize].bits;
        out.insert(BitVec::from_masked(len, acc));
    }
    Ok(out)
}

/// A binary `[n, k]` code given by a full-rank generator matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCode {
    n: usize,
    rows: Vec<BitVec>,
}

impl BinaryCode {
    /// Validates shape and full rank.
    pub fn new(rows: Vec<BitVec>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::InvalidCode("generator matrix has no rows".into()));
        };
        let n = first.len();
        if n == 0 {
            return Err(Error::InvalidCode("code length must be at least 1".into()));
        }
        for r in &rows {
            check_len(n, r.len())?;
        }
        if rows.len() > n {
            return Err(Error::InvalidCode(format!(
                "rows dependent: {} rows of length {n}",
                rows.len()
            )));
        }
        let r = rank(&rows);
        if r != rows.len() {
            return Err(Error::InvalidCode(format!(
                "rows dependent: rank {r} < {} rows",
                rows.len()
            )));
        }
        Ok(Self { n, rows })
    }

    /// Builds a code from `n` columns, each a `k`-bit word (bit `i` = row `i`).
    pub fn from_columns(k: usize, columns: &[u64]) -> Result<Self> {
        if k == 0 || k > MAX_LEN {
            return Err(Error::out_of_range("dimension", k as i64, "1..=64"));
        }
        let n = columns.len();
        if n > MAX_LEN {
            return Err(Error::out_of_range("length", n as i64, "1..=64"));
        }
        let rows = (0..k)
            .map(|i| {
                let bits = columns
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, c)| acc | (((c >> i) & 1) << j));
                BitVec::from_masked(n, bits)
            })
            .collect();
        Self::new(rows)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub(crate) fn row_bits(&self) -> Vec<u64> {
        self.rows.iter().map(BitVec::bits).collect()
    }

    /// Columns as `k`-bit words.
    pub fn columns(&self) -> Vec<u64> {
        (0..self.n)
            .map(|j| {
                self.rows
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, r)| acc | (((r.bits >> j) & 1) << i))
            })
            .collect()
    }

    /// Codeword `x · G` for a message `x` given as a `k`-bit word.
    pub fn encode(&self, message: u64) -> BitVec {
        let mut bits = 0u64;
        let mut m = message;
        while m != 0 {
            bits ^= self.rows[m.trailing_zeros() as usize].bits;
            m &= m - 1;
        }
        BitVec::from_masked(self.n, bits)
    }

    /// Membership test by reduction against an echelon basis.
    pub fn contains(&self, word: &BitVec) -> bool {
        if word.len() != self.n {
            return false;
        }
        let mut with_word = self.row_bits();
        with_word.push(word.bits);
        rank_bits(&with_word) == self.k()
    }

    /// Pairwise distinct nonzero columns.
    pub fn is_projective(&self) -> bool {
        let cols = self.columns();
        let set: BTreeSet<u64> = cols.iter().copied().collect();
        set.len() == cols.len() && !set.contains(&0)
    }

    /// Appends one column given as a `k`-bit word.
    pub fn with_column(&self, column: u64) -> Result<Self> {
        let mut cols = self.columns();
        cols.push(column);
        Self::from_columns(self.k(), &cols)
    }
}

/// Parses the plain-text matrix format: one row of `'0'`/`'1'` per line,
/// blank lines and `#` comments ignored.
pub fn parse_matrix(text: &str) -> Result<BinaryCode> {
    let mut rows = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = BitVec::parse(line).map_err(|e| match e {
            Error::Format { message, .. } => Error::format(Some(line_no), message),
            other => other,
        })?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::format(
                    Some(line_no),
                    format!("row has length {} but earlier rows have length {w}", row.len()),
                ))
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::format(None, "no generator rows found"));
    }
    BinaryCode::new(rows)
}

/// Systematic form `[I_k | A]` together with the column permutation that
/// maps it back onto the original code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystematicCode {
    k: usize,
    t: usize,
    info_rows: Vec<BitVec>,
    /// `col_perm[j]` is the original (0-indexed) coordinate of systematic coordinate `j`.
    col_perm: Vec<usize>,
    /// Reduced rows in original coordinates; row `i` generates the same word
    /// as row `i` of `[I_k | A]` after un-permuting.
    reduced_rows: Vec<u64>,
}

impl SystematicCode {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.k + self.t
    }

    pub fn info_rows(&self) -> &[BitVec] {
        &self.info_rows
    }

    /// 0-indexed permutation; see [`SystematicCode::col_perm_one_based`] for display.
    pub fn col_perm(&self) -> &[usize] {
        &self.col_perm
    }

    pub fn col_perm_one_based(&self) -> Vec<usize> {
        self.col_perm.iter().map(|c| c + 1).collect()
    }

    pub(crate) fn reduced_rows(&self) -> &[u64] {
        &self.reduced_rows
    }

    /// Original coordinates (0-indexed) of the pivot columns, by row.
    pub fn pivots(&self) -> &[usize] {
        &self.col_perm[..self.k]
    }

    /// Rebuilds a generator of the original code from `[I_k | A]` and the permutation.
    pub fn to_generator(&self) -> BinaryCode {
        let n = self.n();
        let rows = (0..self.k)
            .map(|i| {
                let mut bits = 1u64 << self.col_perm[i];
                for j in 0..self.t {
                    if self.info_rows[i].get(j) {
                        bits |= 1u64 << self.col_perm[self.k + j];
                    }
                }
                BitVec::from_masked(n, bits)
            })
            .collect();
        BinaryCode::new(rows).expect("systematic rows are independent")
    }
}

/// Row-by-row elimination: row `i` takes the leftmost column where it is
/// still nonzero after clearing earlier pivots.
pub fn to_systematic(code: &BinaryCode) -> Result<SystematicCode> {
    let n = code.n();
    let k = code.k();
    let mut reduced: Vec<u64> = Vec::with_capacity(k);
    let mut pivots: Vec<usize> = Vec::with_capacity(k);
    for (i, row) in code.rows().iter().enumerate() {
        let mut r = row.bits();
        for (p, prev) in pivots.iter().zip(&reduced) {
            if (r >> p) & 1 == 1 {
                r ^= prev;
            }
        }
        if r == 0 {
            return Err(Error::InvalidCode(format!(
                "rows dependent: row {} reduces to zero",
                i + 1
            )));
        }
        let p = r.trailing_zeros() as usize;
        for prev in reduced.iter_mut() {
            if (*prev >> p) & 1 == 1 {
                *prev ^= r;
            }
        }
        reduced.push(r);
        pivots.push(p);
    }
    let pivot_mask = pivots.iter().fold(0u64, |acc, &p| acc | (1 << p));
    let info_cols: Vec<usize> = (0..n).filter(|j| (pivot_mask >> j) & 1 == 0).collect();
    let t = info_cols.len();
    let info_rows = reduced
        .iter()
        .map(|&r| {
            let bits = info_cols
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &c)| acc | (((r >> c) & 1) << j));
            BitVec::from_masked(t, bits)
        })
        .collect();
    let mut col_perm = pivots;
    col_perm.extend(info_cols);
    Ok(SystematicCode {
        k,
        t,
        info_rows,
        col_perm,
        reduced_rows: reduced,
    })
}

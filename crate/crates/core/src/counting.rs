//! Minimal-codeword counts from the counting vector `a`.
//!
//! `M(C)` depends only on how often each information vector occurs among the
//! rows of a systematic generator:
//!
//! ```text
//! M(C) = k + Σ_{τ≠0} C(a_τ, 2) + Σ_{Ŝ minimal generating, 2≤|Ŝ|≤t+1} Π_{τ∈Ŝ} a_τ
//! ```
//!
//! [`count_general`] evaluates this from a catalog; the `count_t*` functions
//! are the hand-expanded polynomials for small `t` and serve as a second route.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::bitstring;
use crate::mgsets::{canonical_basis, MGCatalog, MAX_CATALOG_T};

/// Largest `t` for which an a-vector can be expanded densely.
pub const MAX_DENSE_T: usize = 20;

/// Multiplicities of information vectors `τ ∈ F₂ᵗ` among generator rows.
///
/// `τ` is keyed by its integer encoding (coordinate `i` in bit `i - 1`);
/// only nonzero counts are stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AVector {
    t: usize,
    counts: BTreeMap<u64, u64>,
}

impl AVector {
    pub fn zero(t: usize) -> Self {
        Self {
            t,
            counts: BTreeMap::new(),
        }
    }

    /// From a dense slice of length `2ᵗ`, index = integer encoding of `τ`.
    pub fn from_dense(t: usize, dense: &[u64]) -> Result<Self> {
        if t > MAX_DENSE_T {
            return Err(Error::out_of_range("t", t as i64, format!("0..={MAX_DENSE_T}")));
        }
        if dense.len() != 1 << t {
            return Err(Error::LengthMismatch {
                left: 1 << t,
                right: dense.len(),
            });
        }
        let counts = dense
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(tau, &c)| (tau as u64, c))
            .collect();
        Ok(Self { t, counts })
    }

    /// From `(τ, count)` pairs; repeated `τ` accumulate.
    pub fn from_pairs(t: usize, pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        if t > 64 {
            return Err(Error::out_of_range("t", t as i64, "0..=64"));
        }
        let limit = crate::gf2::low_mask(t);
        let mut counts = BTreeMap::new();
        for (tau, c) in pairs {
            if tau & !limit != 0 {
                return Err(Error::Domain(format!("τ = {tau:#b} does not fit in {t} bits")));
            }
            if c > 0 {
                *counts.entry(tau).or_insert(0) += c;
            }
        }
        Ok(Self { t, counts })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// `k = Σ a_τ`.
    pub fn k(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn get(&self, tau: u64) -> u64 {
        self.counts.get(&tau).copied().unwrap_or(0)
    }

    /// Nonzero entries in increasing `τ` order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&t, &c)| (t, c))
    }

    pub fn to_dense(&self) -> Result<Vec<u64>> {
        if self.t > MAX_DENSE_T {
            return Err(Error::out_of_range("t", self.t as i64, format!("0..={MAX_DENSE_T}")));
        }
        let mut out = vec![0u64; 1 << self.t];
        for (&tau, &c) in &self.counts {
            out[tau as usize] = c;
        }
        Ok(out)
    }

    /// Copy with `a₀` replaced.
    pub fn with_zero_count(&self, a0: u64) -> Self {
        let mut out = self.clone();
        if a0 == 0 {
            out.counts.remove(&0);
        } else {
            out.counts.insert(0, a0);
        }
        out
    }
}

impl fmt::Display for AVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.t <= 5 {
            let dense = self.to_dense().expect("small t");
            let parts: Vec<String> = dense.iter().map(u64::to_string).collect();
            write!(f, "({})", parts.join(","))
        } else {
            let parts: Vec<String> = self
                .iter()
                .map(|(tau, c)| format!("{}:{c}", bitstring(self.t, tau)))
                .collect();
            write!(f, "{{{}}}", parts.join(" "))
        }
    }
}

impl fmt::Debug for AVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AVector(t={}, {self})", self.t)
    }
}

/// Serialized as a map from bitstring of `τ` to count, nonzero entries only.
impl Serialize for AVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.counts.len()))?;
        for (&tau, &c) in &self.counts {
            map.serialize_entry(&bitstring(self.t, tau), &c)?;
        }
        map.end()
    }
}

#[inline]
pub(crate) fn choose2(x: u64) -> u128 {
    let x = x as u128;
    x * x.saturating_sub(1) / 2
}

fn pair_term(a: &AVector) -> u128 {
    a.iter().filter(|&(tau, _)| tau != 0).map(|(_, c)| choose2(c)).sum()
}

fn check_t(a: &AVector, want: usize) -> Result<()> {
    if a.t() == want {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "expected an a-vector with t = {want}, got t = {}",
            a.t()
        )))
    }
}

/// Per-term decomposition of the count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountBreakdown {
    pub singletons: u128,
    pub pair_term: u128,
    pub mg_terms_by_size: BTreeMap<usize, u128>,
}

impl CountBreakdown {
    pub fn total(&self) -> u128 {
        self.singletons + self.pair_term + self.mg_terms_by_size.values().sum::<u128>()
    }
}

/// Evaluation record emitted by the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub t: usize,
    pub k: u64,
    pub a_vector: AVector,
    #[serde(rename = "M")]
    pub m: u128,
    pub breakdown: CountBreakdown,
}

/// Catalog-based evaluation with the individual terms kept apart.
pub fn count_breakdown(a: &AVector, catalog: &MGCatalog) -> Result<CountBreakdown> {
    let k = a.k() as u128;
    if a.t() == 0 {
        return Ok(CountBreakdown {
            singletons: k,
            pair_term: 0,
            mg_terms_by_size: BTreeMap::new(),
        });
    }
    if catalog.t() != a.t() {
        return Err(Error::Domain(format!(
            "catalog is for t = {} but a-vector has t = {}",
            catalog.t(),
            a.t()
        )));
    }
    let mut by_size = BTreeMap::new();
    for (&size, sets) in catalog.sets_by_size() {
        let sum: u128 = sets
            .iter()
            .map(|s| {
                s.members()
                    .iter()
                    .map(|&tau| a.get(tau) as u128)
                    .product::<u128>()
            })
            .sum();
        by_size.insert(size, sum);
    }
    Ok(CountBreakdown {
        singletons: k,
        pair_term: pair_term(a),
        mg_terms_by_size: by_size,
    })
}

/// `M(C)` for any code whose counting vector is `a`.
pub fn count_general(a: &AVector, catalog: &MGCatalog) -> Result<u128> {
    Ok(count_breakdown(a, catalog)?.total())
}

/// Like [`count_general`] with the catalog taken from the process cache.
pub fn count(a: &AVector) -> Result<u128> {
    if a.t() == 0 {
        return Ok(a.k() as u128);
    }
    if a.t() > MAX_CATALOG_T {
        return Err(Error::out_of_range(
            "t",
            a.t() as i64,
            format!("0..={MAX_CATALOG_T}"),
        ));
    }
    count_general(a, crate::mgsets::cached_catalog(a.t())?)
}

pub fn count_report(a: &AVector, catalog: &MGCatalog) -> Result<CountReport> {
    let breakdown = count_breakdown(a, catalog)?;
    Ok(CountReport {
        t: a.t(),
        k: a.k(),
        a_vector: a.clone(),
        m: breakdown.total(),
        breakdown,
    })
}

/// `t = 1`: `k + C(a₁, 2)`.
pub fn count_t1(a: &AVector) -> Result<u128> {
    check_t(a, 1)?;
    Ok(a.k() as u128 + choose2(a.get(1)))
}

/// `t = 2` in the compact form `k + C(k−a₀₀, 2) − a₁₀a₀₁ + a₁₀a₀₁a₁₁`.
pub fn count_t2(a: &AVector) -> Result<u128> {
    check_t(a, 2)?;
    let k = a.k() as i128;
    let a00 = a.get(0) as i128;
    let a10 = a.get(0b01) as i128;
    let a01 = a.get(0b10) as i128;
    let a11 = a.get(0b11) as i128;
    let nz = k - a00;
    let value = k + nz * (nz - 1) / 2 - a10 * a01 + a10 * a01 * a11;
    Ok(value as u128)
}

/// `t = 3`, the fully expanded polynomial with 15 pair, 19 triple and 7
/// quadruple terms.
pub fn count_t3(a: &AVector) -> Result<u128> {
    check_t(a, 3)?;
    // bitstring "xyz" has x in bit 0
    let g = |s: &str| -> u128 {
        let tau = s
            .chars()
            .enumerate()
            .fold(0u64, |acc, (i, c)| acc | (u64::from(c == '1') << i));
        a.get(tau) as u128
    };
    let (a100, a010, a001) = (g("100"), g("010"), g("001"));
    let (a110, a101, a011, a111) = (g("110"), g("101"), g("011"), g("111"));
    let k = a.k() as u128;

    let pairs = a110 * (a101 + a011 + a111)
        + a101 * (a011 + a111)
        + a011 * a111
        + a100 * (a110 + a101 + a111)
        + a010 * (a110 + a011 + a111)
        + a001 * (a011 + a101 + a111);

    let triples = a100 * a010 * a110
        + a100 * a001 * a101
        + a010 * a001 * a011
        + a100 * a010 * a111
        + a100 * a001 * a111
        + a010 * a001 * a111
        + a100 * a110 * a011
        + a100 * a011 * a101
        + a010 * a110 * a101
        + a010 * a101 * a011
        + a001 * a110 * a101
        + a001 * a110 * a011
        + a100 * a011 * a111
        + a010 * a101 * a111
        + a001 * a110 * a111
        + a110 * a101 * a011
        + a110 * a101 * a111
        + a110 * a011 * a111
        + a011 * a101 * a111;

    let quads = a100 * a010 * a001 * a111
        + a100 * a011 * a110 * a001
        + a100 * a101 * a011 * a010
        + a100 * a101 * a110 * a111
        + a010 * a110 * a101 * a001
        + a010 * a110 * a011 * a111
        + a001 * a011 * a101 * a111;

    Ok(k + pair_term(a) + pairs + triples + quads)
}

/// Count for a-vectors supported on `{e₁,…,e_t,𝟏}`.
///
/// The minimal generating subsets of that set are exactly those containing
/// `𝟏` and at least one unit vector, which sum to `a_𝟏 · (Π(1 + a_{eᵢ}) − 1)`.
pub fn count_canonical_base(a: &AVector) -> Result<u128> {
    let t = a.t();
    if t == 0 {
        return Ok(a.k() as u128);
    }
    let basis = canonical_basis(t);
    if let Some((tau, _)) = a.iter().find(|(tau, _)| *tau != 0 && !basis.contains(tau)) {
        return Err(Error::Domain(format!(
            "a-vector has weight on {} outside the canonical projective basis",
            bitstring(t, tau)
        )));
    }
    let k = a.k() as u128;
    if t == 1 {
        return Ok(k + choose2(a.get(1)));
    }
    let ones = a.get((1u64 << t) - 1) as u128;
    let unit_product: u128 = (0..t).map(|i| 1 + a.get(1u64 << i) as u128).product();
    Ok(k + pair_term(a) + ones * (unit_product - 1))
}

/// Degree-(t+1) part of the count via ordered tuples of successively
/// independent vectors, divided by `(t+1)!`.
pub fn leading_term(a: &AVector) -> Result<BigRational> {
    let t = a.t();
    if !(2..=MAX_CATALOG_T).contains(&t) {
        return Err(Error::out_of_range("t", t as i64, format!("2..={MAX_CATALOG_T}")));
    }
    let dense = a.to_dense()?;
    let mut total = BigInt::from(0);
    ordered_tuples(&dense, t, 0, 1u64, 0, BigInt::from(1), &mut total);
    let factorial: u64 = (1..=(t as u64 + 1)).product();
    Ok(BigRational::new(total, BigInt::from(factorial)))
}

// `span` is a bitmask over τ values of the span so far (bit 0 = zero vector).
fn ordered_tuples(
    a: &[u64],
    t: usize,
    depth: usize,
    span: u64,
    sum: u64,
    product: BigInt,
    total: &mut BigInt,
) {
    if depth == t {
        *total += product * BigInt::from(a[sum as usize]);
        return;
    }
    for tau in 1..(1u64 << t) {
        if (span >> tau) & 1 == 1 || a[tau as usize] == 0 {
            continue;
        }
        let mut next_span = span;
        let mut m = span;
        while m != 0 {
            let x = m.trailing_zeros() as u64;
            next_span |= 1u64 << (x ^ tau);
            m &= m - 1;
        }
        ordered_tuples(
            a,
            t,
            depth + 1,
            next_span,
            sum ^ tau,
            &product * BigInt::from(a[tau as usize]),
            total,
        );
    }
}

/// Sum over projective bases of `Π a_τ`, read straight off the catalog.
pub fn leading_term_catalog(a: &AVector, catalog: &MGCatalog) -> Result<u128> {
    check_t(a, catalog.t())?;
    Ok(catalog
        .projective_bases()
        .iter()
        .map(|s| s.members().iter().map(|&tau| a.get(tau) as u128).product::<u128>())
        .sum())
}

/// Membership index over catalog entries keyed by mask, for evaluating many
/// dense a-vectors of the same `t`.
pub struct MgIndex {
    t: usize,
    lookup: MaskLookup,
}

enum MaskLookup {
    // bit (mask >> 1) over the 2ᵗ−1 nonzero τ
    Dense(Vec<u64>),
    Sparse(HashSet<u64>),
}

impl MgIndex {
    pub fn new(catalog: &MGCatalog) -> Self {
        let t = catalog.t();
        let lookup = if (1usize << t) - 1 <= 20 {
            let mut words = vec![0u64; (1usize << ((1 << t) - 1)).div_ceil(64)];
            for s in catalog.iter() {
                let key = (s.mask() >> 1) as usize;
                words[key / 64] |= 1 << (key % 64);
            }
            MaskLookup::Dense(words)
        } else {
            MaskLookup::Sparse(catalog.iter().map(|s| s.mask()).collect())
        };
        Self { t, lookup }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    #[inline]
    fn contains(&self, mask: u64) -> bool {
        match &self.lookup {
            MaskLookup::Dense(words) => {
                let key = (mask >> 1) as usize;
                (words[key / 64] >> (key % 64)) & 1 == 1
            }
            MaskLookup::Sparse(set) => set.contains(&mask),
        }
    }

    /// Count for a dense a-vector (`a.len() == 2ᵗ`).
    pub fn evaluate(&self, a: &[u64]) -> u128 {
        debug_assert_eq!(a.len(), 1 << self.t);
        let k: u128 = a.iter().map(|&c| c as u128).sum();
        let mut support = [0u64; 64];
        let mut len = 0;
        let mut pairs = 0u128;
        for (tau, &c) in a.iter().enumerate().skip(1) {
            if c > 0 {
                support[len] = tau as u64;
                len += 1;
                pairs += choose2(c);
            }
        }
        let mut mg = 0u128;
        self.walk(a, &support[..len], 0, 0, 0, 1, &mut mg);
        k + pairs + mg
    }

    /// Sum over catalog entries of size exactly `t + 1` for a dense a-vector.
    pub fn evaluate_top(&self, a: &[u64]) -> u128 {
        let mut support = [0u64; 64];
        let mut len = 0;
        for (tau, &c) in a.iter().enumerate().skip(1) {
            if c > 0 {
                support[len] = tau as u64;
                len += 1;
            }
        }
        let mut acc = 0u128;
        self.walk_exact(a, &support[..len], 0, 0, 0, 1, &mut acc);
        acc
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        a: &[u64],
        support: &[u64],
        start: usize,
        size: usize,
        mask: u64,
        product: u128,
        acc: &mut u128,
    ) {
        if size >= 2 && self.contains(mask) {
            *acc += product;
        }
        if size == self.t + 1 {
            return;
        }
        for i in start..support.len() {
            let tau = support[i];
            self.walk(
                a,
                support,
                i + 1,
                size + 1,
                mask | (1u64 << tau),
                product * a[tau as usize] as u128,
                acc,
            );
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn walk_exact(
        &self,
        a: &[u64],
        support: &[u64],
        start: usize,
        size: usize,
        mask: u64,
        product: u128,
        acc: &mut u128,
    ) {
        if size == self.t + 1 {
            if self.contains(mask) {
                *acc += product;
            }
            return;
        }
        let needed = self.t + 1 - size;
        for i in start..support.len().saturating_sub(needed - 1) {
            let tau = support[i];
            self.walk_exact(
                a,
                support,
                i + 1,
                size + 1,
                mask | (1u64 << tau),
                product * a[tau as usize] as u128,
                acc,
            );
        }
    }
}

//! Exact values of `M₂(n, k)` by maximizing the count over a-vectors, the
//! closed forms for `t ≤ 2`, and symmetric-function optimization.

pub mod conjecture;
pub mod search;
pub mod table;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::counting::AVector;
use crate::error::{Error, Result};
pub use search::{search_by_total, Candidate, Objective, SearchOptions, TotalSearch, MAX_SEARCH_T};

/// Default leaf budget for composition searches.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedFormT0,
    ClosedFormT1,
    ClosedFormT2,
    FormulaMax,
    Census,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::ClosedFormT0 => "closed-form-t0",
            Method::ClosedFormT1 => "closed-form-t1",
            Method::ClosedFormT2 => "closed-form-t2",
            Method::FormulaMax => "formula-max",
            Method::Census => "census",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxMinResult {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub value: u128,
    pub witness: Option<AVector>,
    pub method: Method,
    /// False when a budget cut the search short; `value` is then a lower bound.
    pub exact: bool,
}

/// An ordered tuple of non-negative parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Composition {
    parts: Vec<u64>,
    total: u64,
}

impl Composition {
    pub fn new(parts: Vec<u64>) -> Self {
        let total = parts.iter().sum();
        Self { parts, total }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MaxMinOptions {
    pub budget: u64,
}

impl Default for MaxMinOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Folds in zero information rows: `M₂(k+t, k) = max_m (m + best₀(k − m))`,
/// where `best₀` is the optimum with `a₀ = 0`.
pub fn fold_zero_rows(search: &TotalSearch, k: usize) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for m in 0..=k {
        let Some(inner) = search.best.get(k - m).and_then(Option::as_ref) else {
            continue;
        };
        let mut dense = inner.dense.clone();
        dense[0] = m as u64;
        let cand = Candidate::new(inner.value + m as u128, dense);
        if best.as_ref().is_none_or(|b| cand.beats(b)) {
            best = Some(cand);
        }
    }
    best
}

/// `M₂(n, k)` with a witness a-vector. `t = 0` is answered directly; for
/// `1 ≤ t ≤ 5` the count is maximized over all a-vectors.
pub fn maxmin(n: usize, k: usize, options: &MaxMinOptions) -> Result<MaxMinResult> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 ≤ k ≤ n, got n = {n}, k = {k}")));
    }
    let t = n - k;
    if t == 0 {
        return Ok(MaxMinResult {
            n,
            k,
            t,
            value: k as u128,
            witness: Some(AVector::from_dense(0, &[k as u64])?),
            method: Method::ClosedFormT0,
            exact: true,
        });
    }
    if t > MAX_SEARCH_T {
        return Err(Error::out_of_range(
            "t = n - k",
            t as i64,
            format!("0..={MAX_SEARCH_T} for the formula path"),
        ));
    }
    let search = search_by_total(
        t,
        k,
        Objective::Count,
        SearchOptions {
            budget: options.budget,
            symmetry: true,
        },
        None,
    )?;
    result_from_search(&search, n, k)
}

pub(crate) fn result_from_search(search: &TotalSearch, n: usize, k: usize) -> Result<MaxMinResult> {
    let best = fold_zero_rows(search, k).ok_or(Error::BudgetExceeded {
        what: "maxmin search",
        needed: search::leaf_count(search.t, k),
        budget: search.leaves,
    })?;
    Ok(MaxMinResult {
        n,
        k,
        t: search.t,
        value: best.value,
        witness: Some(AVector::from_dense(search.t, &best.dense)?),
        method: Method::FormulaMax,
        exact: search.exact,
    })
}

/// `M₂(k+1, k) = C(k+1, 2)`.
pub fn maxmin_closed_t1(k: u64) -> u128 {
    let k = k as u128;
    (k + 1) * k / 2
}

/// `M₂(k+2, k) = k + C(k, 2) + ⌊(k−1)/3⌋⌊k/3⌋⌊(k+1)/3⌋`.
pub fn maxmin_closed_t2(k: u64) -> u128 {
    let k = k as u128;
    let cubic = if k == 0 {
        0
    } else {
        ((k - 1) / 3) * (k / 3) * ((k + 1) / 3)
    };
    k + k * k.saturating_sub(1) / 2 + cubic
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetricOptimum {
    pub assignment: Composition,
    /// `e_s` of the integer assignment.
    pub value: u128,
    /// `C(r, s)·(m/r)ˢ`, the optimum over the reals.
    #[serde(serialize_with = "crate::bounds::serialize_rational")]
    pub real_value: BigRational,
}

/// Elementary symmetric polynomial `e_s(x)`.
pub fn elementary_symmetric(x: &[u64], s: usize) -> u128 {
    let mut e = vec![0u128; s + 1];
    e[0] = 1;
    for &xi in x {
        for j in (1..=s).rev() {
            e[j] += e[j - 1] * xi as u128;
        }
    }
    e[s]
}

/// Maximizes `e_s(x₁, …, x_r)` subject to `Σ xᵢ = m`: the balanced point
/// `xᵢ = ⌊(m + i − 1)/r⌋`.
pub fn symmetric_opt(m: u64, r: usize, s: usize) -> Result<SymmetricOptimum> {
    if r == 0 || s == 0 || s > r {
        return Err(Error::Domain(format!("need 1 ≤ s ≤ r, got r = {r}, s = {s}")));
    }
    let parts: Vec<u64> = (1..=r as u64).map(|i| (m + i - 1) / r as u64).collect();
    let value = elementary_symmetric(&parts, s);
    let binom = search::binomial_u128(r as u128, s as u128).expect("small binomial");
    let ratio = BigRational::new(BigInt::from(m), BigInt::from(r));
    let mut power = BigRational::one();
    for _ in 0..s {
        power *= &ratio;
    }
    let real_value = if m == 0 {
        BigRational::zero()
    } else {
        power * BigRational::from_integer(BigInt::from(binom))
    };
    Ok(SymmetricOptimum {
        assignment: Composition::new(parts),
        value,
        real_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count;
    use crate::reference::published_table;

    fn exact(n: usize, k: usize) -> MaxMinResult {
        maxmin(n, k, &MaxMinOptions::default()).unwrap()
    }

    #[test]
    fn maxmin_examples() {
        assert_eq!(exact(6, 3).value, 7);
        assert_eq!(exact(10, 7).value, 48);
        assert_eq!(exact(15, 11).value, 308);
        let r = exact(11, 9);
        assert_eq!(r.value, 63);
        assert_eq!(r.witness.unwrap().to_dense().unwrap(), vec![0, 3, 3, 3]);
        assert_eq!(exact(4, 4).method, Method::ClosedFormT0);
        assert!(maxmin(12, 5, &MaxMinOptions::default()).is_err());
    }

    #[test]
    fn witnesses_re_evaluate() {
        for n in 2usize..=11 {
            for k in n.saturating_sub(4).max(1)..=n {
                let r = exact(n, k);
                let w = r.witness.as_ref().unwrap();
                assert_eq!(count(w).unwrap(), r.value);
                assert_eq!((w.k() as usize, w.t()), (k, n - k));
            }
        }
    }

    #[test]
    fn monotone_in_n() {
        for k in 1..=7 {
            let mut prev = 0;
            for n in k..=k + 4 {
                let v = exact(n, k).value;
                assert!(v >= prev);
                prev = v;
            }
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(maxmin_closed_t1(5), 15);
        assert_eq!(maxmin_closed_t1(13), 91);
        assert_eq!(maxmin_closed_t1(2), 3);
        assert_eq!(maxmin_closed_t1(1), 1);
        assert_eq!(maxmin_closed_t2(4), 11);
        assert_eq!(maxmin_closed_t2(9), 63);
        assert_eq!(maxmin_closed_t2(13), 155);
        for k in 2..=20u64 {
            assert_eq!(exact(k as usize + 1, k as usize).value, maxmin_closed_t1(k));
        }
        for k in 1..=20u64 {
            assert_eq!(exact(k as usize + 2, k as usize).value, maxmin_closed_t2(k));
        }
    }

    #[test]
    fn small_table_rows() {
        let reference = published_table();
        for n in 1..=8 {
            for k in 1..=n {
                if n - k <= 4 {
                    assert_eq!(exact(n, k).value, reference[n - 1][k - 1] as u128, "({n},{k})");
                }
            }
        }
    }

    #[test]
    fn symmetric_examples() {
        let r = symmetric_opt(7, 3, 3).unwrap();
        assert_eq!(r.assignment.parts(), &[2, 2, 3]);
        assert_eq!(r.value, 12);
        let r = symmetric_opt(6, 3, 3).unwrap();
        assert_eq!(r.value, 8);
        assert_eq!(r.real_value, BigRational::from_integer(8.into()));
        assert!(symmetric_opt(3, 2, 3).is_err());
    }

    fn compositions(m: u64, r: usize, out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>) {
        if cur.len() == r - 1 {
            let used: u64 = cur.iter().sum();
            cur.push(m - used);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        let used: u64 = cur.iter().sum();
        for v in 0..=m - used {
            cur.push(v);
            compositions(m, r, out, cur);
            cur.pop();
        }
    }

    #[test]
    fn balanced_point_is_optimal() {
        for m in 0..=12u64 {
            for r in 1..=4usize {
                let mut all = Vec::new();
                compositions(m, r, &mut all, &mut Vec::new());
                for s in 1..=r {
                    let best = all.iter().map(|x| elementary_symmetric(x, s)).max().unwrap();
                    assert_eq!(symmetric_opt(m, r, s).unwrap().value, best, "m={m} r={r} s={s}");
                }
            }
        }
        let mut all = Vec::new();
        compositions(7, 3, &mut all, &mut Vec::new());
        assert_eq!(all.len(), 36);
    }
}

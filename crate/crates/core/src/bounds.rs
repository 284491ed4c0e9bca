//! Upper and lower bounds on `M₂(n, k)`. Formulas that divide are
//! evaluated exactly over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::optimize::search::leaf_count;
use crate::optimize::{maxmin, MaxMinOptions, Method, MAX_SEARCH_T};

pub(crate) fn serialize_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn binom(n: u64, r: u64) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn binom_u128(n: u64, r: u64) -> Result<u128> {
    binom(n, r).to_u128().ok_or(Error::Overflow("binomial coefficient"))
}

fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n || n > 64 {
        return Err(Error::Domain(format!("need 1 ≤ k ≤ n ≤ 64, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// `(qᵏ − 1)/(q − 1)`, the number of codeword classes.
pub fn trivial_ub(k: usize, q: u64) -> Result<u128> {
    if q < 2 {
        return Err(Error::out_of_range("q", q as i64, "≥ 2"));
    }
    if (k as f64) * (q as f64).log2() > 120.0 {
        return Err(Error::Overflow("trivial upper bound"));
    }
    let qk = (q as u128).pow(k as u32);
    Ok((qk - 1) / (q as u128 - 1))
}

/// `C(n, k − 1)`.
pub fn matroid_ub(n: usize, k: usize) -> Result<u128> {
    check_nk(n, k)?;
    binom_u128(n as u64, k as u64 - 1)
}

/// `Σ_{i=1}^{t+1} C(k + t, i)`.
pub fn binomial_sum_ub(k: usize, t: usize) -> Result<u128> {
    (1..=t as u64 + 1).try_fold(0u128, |acc, i| {
        acc.checked_add(binom_u128((k + t) as u64, i)?)
            .ok_or(Error::Overflow("binomial sum bound"))
    })
}

/// `(k+1)k/2 + Σ_{s=2}^{t+1} C(2ᵗ−1, s)·(k/(2ᵗ−1))ˢ`.
pub fn improved_ub(k: usize, t: usize) -> Result<BigRational> {
    if t == 0 || t > 20 {
        return Err(Error::out_of_range("t", t as i64, "1..=20"));
    }
    let r = (1u64 << t) - 1;
    let ratio = rational(k as u64, r);
    let mut total = BigRational::from_integer(BigInt::from((k as u64 + 1) * k as u64 / 2));
    let mut power = ratio.clone();
    for s in 2..=t as u64 + 1 {
        power *= &ratio;
        total += BigRational::from_integer(binom(r, s)) * &power;
    }
    Ok(total)
}

/// `2ᵏ / (4n((k−1)/n − 1/2)) = 2ᵏ / (4(k−1) − 2n)`, defined for `(k−1)/n > 1/2`.
pub fn agrell_ub(n: usize, k: usize) -> Option<BigRational> {
    let den = 4 * (k as i64 - 1) - 2 * n as i64;
    (den > 0).then(|| BigRational::new(pow2(k as u64), BigInt::from(den)))
}

/// Random-coding estimate
/// `Σ_{j=0}^{n−k+1} C(n,j)(q−1)ʲ/q^{n−k} · Π_{i=0}^{j−2} (1 − q^{−(n−k−i)})`.
/// Absent for `n ≤ k`.
pub fn random_coding_lb(n: usize, k: usize, q: u64) -> Option<BigRational> {
    if n <= k || q < 2 {
        return None;
    }
    let r = (n - k) as u64;
    let q_big = BigInt::from(q);
    let scale = BigRational::new(BigInt::one(), q_big.pow(r as u32));
    let mut sum = BigRational::zero();
    let mut product = BigRational::one();
    for j in 0..=r + 1 {
        if j >= 2 {
            let i = j - 2;
            let factor = BigRational::one() - BigRational::new(BigInt::one(), q_big.pow((r - i) as u32));
            product *= factor;
        }
        let term = BigRational::from_integer(binom(n as u64, j) * BigInt::from(q - 1).pow(j as u32));
        sum += term * &scale * &product;
    }
    Some(sum)
}

/// `⌊k/(t+1)⌋^{t+1}` from the projective-basis construction.
pub fn projective_base_lb(k: usize, t: usize) -> Result<u128> {
    let base = (k / (t + 1)) as u128;
    base.checked_pow(t as u32 + 1)
        .ok_or(Error::Overflow("projective base bound"))
}

/// `k + t`; valid for projective codes only.
pub fn kashyap_lb(k: usize, t: usize) -> u128 {
    (k + t) as u128
}

/// An exact rational with its floor and a display approximation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalValue {
    #[serde(serialize_with = "serialize_rational")]
    pub exact: BigRational,
    #[serde(serialize_with = "serialize_bigint")]
    pub floor: BigInt,
    pub approx: f64,
}

impl From<BigRational> for RationalValue {
    fn from(exact: BigRational) -> Self {
        let floor = exact.floor().to_integer();
        let approx = exact.to_f64().unwrap_or(f64::NAN);
        Self {
            exact,
            floor,
            approx,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactValue {
    pub value: u128,
    pub method: Method,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub q: u64,
    pub trivial_ub: u128,
    pub matroid_ub: u128,
    pub binomial_sum_ub: u128,
    pub improved_ub: Option<RationalValue>,
    /// Reported only; never used as a verified bound.
    pub agrell_ub: Option<RationalValue>,
    /// A reference estimate, not a verified bound.
    pub random_coding_lb: Option<RationalValue>,
    pub projective_base_lb: u128,
    /// Applies to projective codes only.
    pub kashyap_lb: u128,
    /// `M₂(n, k)` when the formula path covers `t` within the budget.
    pub exact: Option<ExactValue>,
}

pub fn bounds_report(n: usize, k: usize, options: &MaxMinOptions) -> Result<BoundsReport> {
    check_nk(n, k)?;
    let t = n - k;
    let exact = if t == 0 || (t <= MAX_SEARCH_T && leaf_count(t, k) <= options.budget as u128) {
        let r = maxmin(n, k, options)?;
        Some(ExactValue {
            value: r.value,
            method: r.method,
            exact: r.exact,
        })
    } else {
        None
    };
    Ok(BoundsReport {
        n,
        k,
        t,
        q: 2,
        trivial_ub: trivial_ub(k, 2)?,
        matroid_ub: matroid_ub(n, k)?,
        binomial_sum_ub: binomial_sum_ub(k, t)?,
        improved_ub: if (1..=20).contains(&t) {
            Some(improved_ub(k, t)?.into())
        } else {
            None
        },
        agrell_ub: agrell_ub(n, k).map(Into::into),
        random_coding_lb: random_coding_lb(n, k, 2).map(Into::into),
        projective_base_lb: projective_base_lb(k, t)?,
        kashyap_lb: kashyap_lb(k, t),
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn trivial_examples() {
        assert_eq!(trivial_ub(3, 2).unwrap(), 7);
        assert_eq!(trivial_ub(1, 5).unwrap(), 1);
        assert_eq!(trivial_ub(15, 2).unwrap(), 32767);
        assert_eq!(trivial_ub(2, 3).unwrap(), 4);
        assert!(trivial_ub(121, 2).is_err());
    }

    #[test]
    fn matroid_and_binomial_sum() {
        assert_eq!(matroid_ub(6, 4).unwrap(), 20);
        assert_eq!(matroid_ub(10, 5).unwrap(), 210);
        for k in 1..=14 {
            assert_eq!(matroid_ub(k + 1, k).unwrap(), ((k + 1) * k / 2) as u128);
        }
        assert_eq!(binomial_sum_ub(3, 1).unwrap(), 10);
        assert_eq!(binomial_sum_ub(4, 2).unwrap(), 41);
        assert!(matroid_ub(6, 4).unwrap() <= binomial_sum_ub(4, 2).unwrap());
    }

    #[test]
    fn improved_examples() {
        assert_eq!(improved_ub(9, 2).unwrap(), int(99));
        assert_eq!(improved_ub(3, 2).unwrap(), int(10));
        assert!(improved_ub(30, 2).unwrap() < int(4960));
        for k in 10..=60 {
            assert!(improved_ub(k, 2).unwrap() < int(matroid_ub(k + 2, k).unwrap() as i64));
        }
    }

    #[test]
    fn agrell_examples() {
        assert_eq!(agrell_ub(15, 14).unwrap(), rational(16384, 22));
        assert_eq!(agrell_ub(10, 6), None);
        assert_eq!(agrell_ub(10, 8).unwrap(), int(32));
    }

    #[test]
    fn random_coding_examples() {
        assert_eq!(random_coding_lb(5, 3, 2).unwrap(), rational(69, 16));
        assert!(random_coding_lb(5, 3, 2).unwrap() <= int(6));
        assert_eq!(random_coding_lb(4, 4, 2), None);
        // (3,2,2) term by term: j = 0, 1, 2
        let r = random_coding_lb(3, 2, 2).unwrap();
        let manual = rational(1, 2) + rational(3, 2) + rational(3, 2) * rational(1, 2);
        assert_eq!(r, manual);
    }

    #[test]
    fn construction_bounds() {
        assert_eq!(projective_base_lb(9, 2).unwrap(), 27);
        assert_eq!(projective_base_lb(4, 3).unwrap(), 1);
        assert_eq!(kashyap_lb(6, 2), 8);
    }

    #[test]
    fn report_examples() {
        let opts = MaxMinOptions::default();
        let r = bounds_report(6, 3, &opts).unwrap();
        assert_eq!((r.matroid_ub, r.binomial_sum_ub), (15, 56));
        assert_eq!(r.exact.as_ref().unwrap().value, 7);
        let r = bounds_report(11, 9, &opts).unwrap();
        assert_eq!(r.exact.as_ref().unwrap().value, 63);
        assert_eq!(r.improved_ub.as_ref().unwrap().floor, BigInt::from(99));
        assert_eq!(r.matroid_ub, 165);
        let r = bounds_report(12, 5, &opts).unwrap();
        assert!(r.exact.is_none());
        assert!(r.agrell_ub.is_none());
    }
}

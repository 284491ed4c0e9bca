use std::fmt;

use serde::Serialize;

use crate::gf2::{rank_bits, to_systematic, BinaryCode, BitVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    ZeroColumn,
    DuplicateColumn,
    /// A coordinate carrying a weight-one codeword; equivalently a
    /// systematic row with zero information part.
    WeightOneCoordinate,
    DirectSumSplit,
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionKind::ZeroColumn => "zero-column",
            ReductionKind::DuplicateColumn => "duplicate-column",
            ReductionKind::WeightOneCoordinate => "weight-one-coordinate",
            ReductionKind::DirectSumSplit => "direct-sum-split",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub kind: ReductionKind,
    pub detail: String,
}

/// `M(original) = Σ M(component) + delta`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub delta: u64,
}

impl ReductionTrace {
    fn push(&mut self, kind: ReductionKind, detail: String) {
        self.steps.push(ReductionStep { kind, detail });
    }
}

fn compress(bits: u64, coords: &[usize]) -> u64 {
    coords
        .iter()
        .enumerate()
        .fold(0u64, |acc, (j, &c)| acc | (((bits >> c) & 1) << j))
}

fn drop_bit(bits: u64, j: usize) -> u64 {
    let low = bits & ((1u64 << j) - 1);
    let high = if j + 1 >= 64 { 0 } else { bits >> (j + 1) };
    low | (high << j)
}

fn code_from_rows(n: usize, rows: &[u64]) -> BinaryCode {
    BinaryCode::new(rows.iter().map(|&r| BitVec::from_masked(n, r)).collect())
        .expect("reduction preserves full rank")
}

/// Removes zero and repeated columns. Returns `None` when nothing changed.
fn strip_columns(code: &BinaryCode, trace: &mut ReductionTrace) -> Option<BinaryCode> {
    let cols = code.columns();
    let mut kept: Vec<u64> = Vec::with_capacity(cols.len());
    for (j, &c) in cols.iter().enumerate() {
        if c == 0 {
            trace.push(
                ReductionKind::ZeroColumn,
                format!("removed zero column {} of a [{},{}] code", j + 1, code.n(), code.k()),
            );
        } else if let Some(first) = cols[..j].iter().position(|&d| d == c) {
            trace.push(
                ReductionKind::DuplicateColumn,
                format!(
                    "removed column {} of a [{},{}] code (repeats column {})",
                    j + 1,
                    code.n(),
                    code.k(),
                    first + 1
                ),
            );
        } else {
            kept.push(c);
        }
    }
    if kept.len() == cols.len() {
        return None;
    }
    Some(BinaryCode::from_columns(code.k(), &kept).expect("nonzero columns keep full rank"))
}

/// Finds a coordinate `j` with `e_j ∈ C` and contracts it.
fn remove_weight_one(code: &BinaryCode, trace: &mut ReductionTrace) -> Option<BinaryCode> {
    let (n, k) = (code.n(), code.k());
    if n == k {
        return None;
    }
    let rows = code.row_bits();
    let j = (0..n).find(|&j| {
        let masked: Vec<u64> = rows.iter().map(|r| r & !(1u64 << j)).collect();
        rank_bits(&masked) < k
    })?;
    let p = rows.iter().position(|r| (r >> j) & 1 == 1)?;
    let pivot = rows[p];
    let reduced: Vec<u64> = rows
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != p)
        .map(|(_, &r)| drop_bit(if (r >> j) & 1 == 1 { r ^ pivot } else { r }, j))
        .collect();
    trace.delta += 1;
    trace.push(
        ReductionKind::WeightOneCoordinate,
        format!("removed coordinate {} of a [{n},{k}] code (weight-one codeword)", j + 1),
    );
    Some(code_from_rows(n - 1, &reduced))
}

/// Splits a code into its indecomposable direct summands. Coordinates are
/// joined when some reduced systematic row covers both.
pub fn split_components(code: &BinaryCode) -> Vec<BinaryCode> {
    let n = code.n();
    let sc = to_systematic(code).expect("codes are full rank");
    let rows = sc.reduced_rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &r in rows {
        let first = r.trailing_zeros() as usize;
        let mut m = r & (r - 1);
        while m != 0 {
            let c = m.trailing_zeros() as usize;
            let (a, b) = (find(&mut parent, first), find(&mut parent, c));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
            m &= m - 1;
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_index: Vec<Option<usize>> = vec![None; n];
    for c in 0..n {
        let root = find(&mut parent, c);
        match root_index[root] {
            Some(g) => groups[g].push(c),
            None => {
                root_index[root] = Some(groups.len());
                groups.push(vec![c]);
            }
        }
    }
    if groups.len() == 1 {
        return vec![code.clone()];
    }
    groups
        .iter()
        .map(|coords| {
            let mask = coords.iter().fold(0u64, |acc, &c| acc | (1 << c));
            let part: Vec<u64> = rows
                .iter()
                .filter(|&&r| r & mask != 0)
                .map(|&r| compress(r, coords))
                .collect();
            code_from_rows(coords.len(), &part)
        })
        .collect()
}

/// Which of the two structural reductions runs first on each code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReductionOrder {
    #[default]
    WeightOneFirst,
    SplitFirst,
}

/// Applies the reductions to a fixed point. A code that is an identity
/// `[k, k]` code after stripping columns is returned whole; identity pieces
/// met later are absorbed into `delta`.
pub fn reduce(code: &BinaryCode) -> (Vec<BinaryCode>, ReductionTrace) {
    reduce_ordered(code, ReductionOrder::WeightOneFirst)
}

pub fn reduce_ordered(code: &BinaryCode, order: ReductionOrder) -> (Vec<BinaryCode>, ReductionTrace) {
    let mut trace = ReductionTrace::default();
    let mut start = code.clone();
    while let Some(next) = strip_columns(&start, &mut trace) {
        start = next;
    }
    if start.n() == start.k() {
        return (vec![start], trace);
    }
    let mut done = Vec::new();
    let mut pending = vec![start];
    while let Some(mut current) = pending.pop() {
        loop {
            if let Some(next) = strip_columns(&current, &mut trace) {
                current = next;
                continue;
            }
            if current.n() == current.k() {
                break;
            }
            if order == ReductionOrder::WeightOneFirst {
                if let Some(next) = remove_weight_one(&current, &mut trace) {
                    current = next;
                    continue;
                }
            }
            break;
        }
        if current.n() == current.k() {
            trace.delta += current.k() as u64;
            trace.push(
                ReductionKind::WeightOneCoordinate,
                format!("removed identity piece [{0},{0}]", current.k()),
            );
            continue;
        }
        let parts = split_components(&current);
        if parts.len() > 1 {
            trace.push(
                ReductionKind::DirectSumSplit,
                format!(
                    "split a [{},{}] code into {}",
                    current.n(),
                    current.k(),
                    parts
                        .iter()
                        .map(|p| format!("[{},{}]", p.n(), p.k()))
                        .collect::<Vec<_>>()
                        .join(" + ")
                ),
            );
            // reversed so components come out in coordinate order
            pending.extend(parts.into_iter().rev());
            continue;
        }
        if order == ReductionOrder::SplitFirst {
            if let Some(next) = remove_weight_one(&current, &mut trace) {
                pending.push(next);
                continue;
            }
        }
        done.push(current);
    }
    (done, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codewords::minimal_codewords_bruteforce;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn code(rows: &[&str]) -> BinaryCode {
        BinaryCode::new(rows.iter().map(|r| BitVec::parse(r).unwrap()).collect()).unwrap()
    }

    fn m(c: &BinaryCode) -> u64 {
        minimal_codewords_bruteforce(c).unwrap().count() as u64
    }

    fn reassembled(code: &BinaryCode, order: ReductionOrder) -> (u64, ReductionTrace) {
        let (parts, trace) = reduce_ordered(code, order);
        (parts.iter().map(m).sum::<u64>() + trace.delta, trace)
    }

    #[test]
    fn zero_column_is_stripped() {
        let (parts, trace) = reduce(&code(&["100", "010"]));
        assert_eq!(parts.len(), 1);
        assert_eq!((parts[0].n(), parts[0].k()), (2, 2));
        assert_eq!(trace.delta, 0);
        assert_eq!(trace.steps[0].kind, ReductionKind::ZeroColumn);
        assert_eq!(m(&parts[0]), 2);
    }

    #[test]
    fn block_diagonal_splits() {
        let c = code(&["10100", "01100", "00011"]);
        assert_eq!(m(&c), 4);
        // after the duplicate column goes, the summand ⟨1⟩ is an identity piece
        // and counts once in delta
        let (parts, trace) = reduce_ordered(&c, ReductionOrder::SplitFirst);
        assert!(trace.steps.iter().any(|s| s.kind == ReductionKind::DirectSumSplit));
        assert_eq!(parts.len(), 1);
        assert_eq!(m(&parts[0]) + trace.delta, 4);
        assert_eq!((m(&parts[0]), trace.delta), (3, 1));
        let (parts, trace) = reduce(&c);
        assert_eq!((parts.len(), m(&parts[0]), trace.delta), (1, 3, 1));
    }

    #[test]
    fn zero_information_row_gives_delta_one() {
        // [6,4] code: row 4 has zero information part
        let c = code(&["100011", "010010", "001001", "000100"]);
        let (_, trace) = reduce(&c);
        assert!(trace.delta >= 1);
        assert_eq!(trace.steps.iter().filter(|s| s.kind == ReductionKind::WeightOneCoordinate).count(), 1);
        let mut trace = ReductionTrace::default();
        let shorter = remove_weight_one(&c, &mut trace).unwrap();
        assert_eq!((shorter.n(), shorter.k()), (5, 3));
        assert_eq!(m(&c), m(&shorter) + 1);
    }

    #[test]
    fn duplicate_column_is_noted() {
        let (_, trace) = reduce(&code(&["1011", "0111"]).with_column(1).unwrap());
        assert!(trace.steps.iter().any(|s| s.kind == ReductionKind::DuplicateColumn));
    }

    #[test]
    fn identities_hold_on_random_codes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..150 {
            let k = rng.gen_range(1..=10);
            let n = rng.gen_range(k..=k + 6);
            let c = crate::codewords::tests::random_code(&mut rng, k, n);
            let direct = m(&c);
            let (a, ta) = reassembled(&c, ReductionOrder::WeightOneFirst);
            let (b, tb) = reassembled(&c, ReductionOrder::SplitFirst);
            assert_eq!(a, direct);
            assert_eq!(b, direct);
            assert_eq!(ta.delta, tb.delta);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn components_are_reduced(seed in any::<u64>(), k in 1usize..=8, extra in 0usize..=5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = crate::codewords::tests::random_code(&mut rng, k, k + extra);
            let (parts, _) = reduce(&c);
            for p in parts {
                prop_assert!(p.is_projective());
                prop_assert_eq!(split_components(&p).len(), if p.n() == p.k() { p.k() } else { 1 });
            }
        }
    }
}

//! Published values of `M₂(n, k)` for `1 ≤ k ≤ n ≤ 15`.

const ROWS: [&[u64]; 15] = [
    &[1],
    &[1, 2],
    &[1, 3, 3],
    &[1, 3, 6, 4],
    &[1, 3, 6, 10, 5],
    &[1, 3, 7, 11, 15, 6],
    &[1, 3, 7, 14, 17, 21, 7],
    &[1, 3, 7, 14, 22, 25, 28, 8],
    &[1, 3, 7, 15, 26, 33, 36, 36, 9],
    &[1, 3, 7, 15, 30, 42, 48, 48, 45, 10],
    &[1, 3, 7, 15, 30, 52, 66, 69, 63, 55, 11],
    &[1, 3, 7, 15, 30, 54, 90, 103, 95, 82, 66, 12],
    &[1, 3, 7, 15, 31, 58, 94, 151, 149, 130, 102, 78, 13],
    &[1, 3, 7, 15, 31, 62, 106, 159, 245, 217, 175, 126, 91, 14],
    &[1, 3, 7, 15, 31, 63, 110, 183, 257, 385, 308, 221, 155, 196, 15],
];

pub const REFERENCE_MAX_N: usize = 15;

/// Rows `n = 1..=15`; row `n − 1` holds `k = 1..=n`.
pub fn published_table() -> Vec<Vec<u64>> {
    ROWS.iter().map(|r| r.to_vec()).collect()
}

/// The published value at `(n, k)`, if tabulated.
pub fn published_value(n: usize, k: usize) -> Option<u64> {
    if k == 0 || k > n || n > REFERENCE_MAX_N {
        return None;
    }
    Some(ROWS[n - 1][k - 1])
}

/// Cells known to disagree with `M₂(k+1, k) = C(k+1, 2)`: `(n, k, published, correct)`.
pub fn known_inconsistencies() -> Vec<(usize, usize, u64, u64)> {
    (2..=REFERENCE_MAX_N)
        .filter_map(|n| {
            let k = n - 1;
            let correct = (n * k / 2) as u64;
            let published = ROWS[n - 1][k - 1];
            (published != correct).then_some((n, k, published, correct))
        })
        .collect()
}

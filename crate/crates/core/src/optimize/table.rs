//! The grid of `M₂(n, k)` values, compared against the published table.

use std::fmt::Write as _;

use serde::Serialize;

use super::search::{search_by_total, Objective, SearchOptions};
use super::{result_from_search, Method, MAX_SEARCH_T};
use crate::census::{census_max, CensusOptions};
use crate::counting::AVector;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::reference::{known_inconsistencies, published_value};

/// Largest dimension for which cells beyond the formula band use the census.
pub const TABLE_CENSUS_MAX_K: usize = 5;

/// How a computed cell relates to the published value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Agreement {
    Match,
    /// Published value contradicts `M₂(k+1, k) = C(k+1, 2)`; the computed value is kept.
    PublishedInconsistent,
    Mismatch,
    NoReference,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub value: Option<u128>,
    pub method: Option<Method>,
    pub exact: bool,
    pub witness: Option<AVector>,
    pub witness_columns: Option<Vec<BitVec>>,
    pub published: Option<u64>,
    pub agreement: Option<Agreement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub n_max: usize,
    pub t_cap: usize,
    /// Row-major over `n = 1..=n_max`, `k = 1..=n`.
    pub cells: Vec<TableCell>,
}

#[derive(Clone, Copy, Debug)]
pub struct TableOptions {
    pub n_max: usize,
    pub t_cap: usize,
    pub budget: u64,
    pub census: CensusOptions,
}

impl Table {
    pub fn cell(&self, n: usize, k: usize) -> Option<&TableCell> {
        if k == 0 || k > n || n > self.n_max {
            return None;
        }
        self.cells.get((n - 1) * n / 2 + (k - 1))
    }

    /// Computed cells that disagree with the published table.
    pub fn flagged(&self) -> impl Iterator<Item = &TableCell> {
        self.cells.iter().filter(|c| {
            matches!(
                c.agreement,
                Some(Agreement::Mismatch | Agreement::PublishedInconsistent)
            )
        })
    }

    pub fn all_exact(&self) -> bool {
        self.cells.iter().all(|c| c.value.is_none() || c.exact)
    }
}

fn agreement(n: usize, k: usize, value: u128) -> Agreement {
    let Some(published) = published_value(n, k) else {
        return Agreement::NoReference;
    };
    if published as u128 == value {
        return Agreement::Match;
    }
    let inconsistent = known_inconsistencies()
        .iter()
        .any(|&(n2, k2, _, correct)| (n2, k2) == (n, k) && correct as u128 == value);
    if inconsistent {
        Agreement::PublishedInconsistent
    } else {
        Agreement::Mismatch
    }
}

/// Computes every cell with `t ≤ t_cap` from the formula, and cells with
/// larger `t` by census when `k ≤ 5`. Other cells are left empty.
pub fn table(options: &TableOptions) -> Result<Table> {
    let TableOptions {
        n_max,
        t_cap,
        budget,
        census,
    } = *options;
    if n_max == 0 || n_max > 64 {
        return Err(Error::out_of_range("n_max", n_max as i64, "1..=64"));
    }
    if t_cap > MAX_SEARCH_T {
        return Err(Error::out_of_range("t_cap", t_cap as i64, format!("0..={MAX_SEARCH_T}")));
    }
    let mut cells: Vec<TableCell> = Vec::new();
    for n in 1..=n_max {
        for k in 1..=n {
            cells.push(TableCell {
                n,
                k,
                t: n - k,
                value: None,
                method: None,
                exact: false,
                witness: None,
                witness_columns: None,
                published: published_value(n, k),
                agreement: None,
            });
        }
    }
    let index = |n: usize, k: usize| (n - 1) * n / 2 + (k - 1);

    for k in 1..=n_max {
        let c = &mut cells[index(k, k)];
        c.value = Some(k as u128);
        c.method = Some(Method::ClosedFormT0);
        c.exact = true;
        c.witness = Some(AVector::from_dense(0, &[k as u64])?);
    }

    for t in 1..=t_cap.min(n_max - 1) {
        let k_top = n_max - t;
        let search = search_by_total(
            t,
            k_top,
            Objective::Count,
            SearchOptions {
                budget,
                symmetry: true,
            },
            None,
        )?;
        for k in 1..=k_top {
            let r = result_from_search(&search, k + t, k)?;
            let c = &mut cells[index(k + t, k)];
            c.value = Some(r.value);
            c.method = Some(r.method);
            c.exact = r.exact;
            c.witness = r.witness;
        }
    }

    for k in 1..=TABLE_CENSUS_MAX_K.min(n_max) {
        let ceiling = (1u128 << k) - 1;
        let longest = (1usize << k) - 1;
        let mut running: Option<(u128, Vec<BitVec>)> = None;
        let mut scanned = k - 1;
        for n in (k + t_cap + 1)..=n_max {
            // zero and repeated columns never help, so fold over shorter lengths
            while scanned < n.min(longest) && running.as_ref().is_none_or(|(v, _)| *v < ceiling) {
                scanned += 1;
                let r = census_max(scanned, k, &census)?;
                if running.as_ref().is_none_or(|(v, _)| r.max_m as u128 > *v) {
                    running = Some((r.max_m as u128, r.witness_columns));
                }
            }
            let (v, cols) = running.clone().expect("census ran at least once");
            let c = &mut cells[index(n, k)];
            c.value = Some(v);
            c.method = Some(Method::Census);
            c.exact = true;
            c.witness_columns = Some(cols);
        }
    }

    for c in &mut cells {
        if let (Some(v), true) = (c.value, c.exact) {
            c.agreement = Some(agreement(c.n, c.k, v));
        }
    }
    Ok(Table {
        n_max,
        t_cap,
        cells,
    })
}

const UNAVAILABLE: &str = "—";

/// Header `n\k,1,2,…`, one row per `n`; unavailable cells are `—`.
pub fn render_csv(table: &Table) -> String {
    let mut out = String::from("n\\k");
    for k in 1..=table.n_max {
        let _ = write!(out, ",{k}");
    }
    out.push('\n');
    for n in 1..=table.n_max {
        let _ = write!(out, "{n}");
        for k in 1..=table.n_max {
            match table.cell(n, k) {
                Some(c) => match c.value {
                    Some(v) => {
                        let _ = write!(out, ",{v}");
                    }
                    None => {
                        let _ = write!(out, ",{UNAVAILABLE}");
                    }
                },
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

/// Aligned grid followed by notes on flagged cells and methods.
pub fn render_text(table: &Table) -> String {
    let width = table
        .cells
        .iter()
        .filter_map(|c| c.value.map(|v| v.to_string().len() + 1))
        .max()
        .unwrap_or(1)
        .max(3)
        + 1;
    let mut out = format!("{:>4}", "n\\k");
    for k in 1..=table.n_max {
        let _ = write!(out, "{k:>width$}");
    }
    out.push('\n');
    for n in 1..=table.n_max {
        let _ = write!(out, "{n:>4}");
        for k in 1..=n {
            let c = table.cell(n, k).expect("cell in range");
            let text = match c.value {
                Some(v) => {
                    let mark = match (c.exact, c.agreement) {
                        (false, _) => "~",
                        (_, Some(Agreement::Mismatch | Agreement::PublishedInconsistent)) => "*",
                        _ => "",
                    };
                    format!("{v}{mark}")
                }
                None => UNAVAILABLE.to_string(),
            };
            let _ = write!(out, "{text:>width$}");
        }
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "methods: t = 0 closed-form-t0; 1 ≤ t ≤ {} formula-max; larger t with k ≤ {TABLE_CENSUS_MAX_K} census; {UNAVAILABLE} not computed",
        table.t_cap
    );
    if table.cells.iter().any(|c| c.value.is_some() && !c.exact) {
        out.push_str("~ lower bound only: search budget exhausted\n");
    }
    for c in table.flagged() {
        let v = c.value.expect("flagged cells are computed");
        let p = c.published.expect("flagged cells have a reference");
        let why = match c.agreement {
            Some(Agreement::PublishedInconsistent) => {
                format!("published {p} contradicts C({},2) = {v}", c.n)
            }
            _ => format!("published {p} differs"),
        };
        let _ = writeln!(out, "* ({},{}): computed {v}, {why}", c.n, c.k);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::CensusOptions;
    use crate::optimize::DEFAULT_BUDGET;

    fn opts(n_max: usize, t_cap: usize) -> TableOptions {
        TableOptions {
            n_max,
            t_cap,
            budget: DEFAULT_BUDGET,
            census: CensusOptions::default(),
        }
    }

    #[test]
    fn first_rows() {
        let t = table(&opts(3, 2)).unwrap();
        assert_eq!(render_csv(&t), "n\\k,1,2,3\n1,1,,\n2,1,2,\n3,1,3,3\n");
        assert_eq!(t.flagged().count(), 0);
    }

    #[test]
    fn eight_rows_match() {
        let t = table(&opts(8, 4)).unwrap();
        for c in &t.cells {
            assert!(c.value.is_some(), "({},{})", c.n, c.k);
            assert_eq!(c.agreement, Some(Agreement::Match), "({},{})", c.n, c.k);
        }
        assert_eq!(t.cell(8, 2).unwrap().method, Some(Method::Census));
        assert_eq!(t.cell(8, 8).unwrap().method, Some(Method::ClosedFormT0));
    }

    #[test]
    fn unavailable_cells_are_marked() {
        let t = table(&opts(8, 1)).unwrap();
        let c = t.cell(8, 6).unwrap();
        assert_eq!(c.value, None);
        assert!(render_csv(&t).contains(UNAVAILABLE));
        assert!(render_text(&t).contains(UNAVAILABLE));
        assert_eq!(t.cell(12, 7), None);
    }
}

//! Exhaustive enumeration of contingency tables with fixed marginals.
//!
//! The feasible tables are the lattice points of the transportation polytope
//! of the marginals. They are produced row by row; a cell ranges over
//! `max(0, row_remaining - later column remainders) ..= min(row_remaining,
//! column_remaining)`, which keeps every partial fill completable. The last
//! cell of each row and the whole last row are determined by the rest.

use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use thiserror::Error;

use crate::extremal::Objective;
use crate::table::{ContingencyTable, MAX_OBSERVATIONS};

/// Default cap on the number of tables enumerated for one marginal spec.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Default upper bound on `n` for the 3x3 containment scan.
pub const DEFAULT_SCAN_N_MAX: i64 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("marginals must be non-empty")]
    EmptyMarginals,
    #[error("marginal {value} is not positive")]
    NonPositiveMarginal { value: i64 },
    #[error("row marginals sum to {row_sum} but column marginals sum to {col_sum}")]
    SumMismatch { row_sum: i128, col_sum: i128 },
    #[error("n = {n} exceeds the limit of {max}")]
    TooLarge { n: i128, max: i64 },
    #[error("enumeration budget of {budget} tables exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("scan bound n_max = {n_max} is below 3, the minimum for three non-empty clusters")]
    ScanBoundTooSmall { n_max: i64 },
}

/// Row and column cluster sizes, both summing to `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarginalSpec {
    rows: Vec<i64>,
    cols: Vec<i64>,
    n: i64,
}

impl MarginalSpec {
    pub fn new(rows: Vec<i64>, cols: Vec<i64>) -> Result<Self, OracleError> {
        if rows.is_empty() || cols.is_empty() {
            return Err(OracleError::EmptyMarginals);
        }
        if let Some(&value) = rows.iter().chain(cols.iter()).find(|&&m| m < 1) {
            return Err(OracleError::NonPositiveMarginal { value });
        }
        let row_sum: i128 = rows.iter().map(|&m| m as i128).sum();
        let col_sum: i128 = cols.iter().map(|&m| m as i128).sum();
        if row_sum != col_sum {
            return Err(OracleError::SumMismatch { row_sum, col_sum });
        }
        if row_sum > MAX_OBSERVATIONS as i128 {
            return Err(OracleError::TooLarge {
                n: row_sum,
                max: MAX_OBSERVATIONS,
            });
        }
        Ok(Self {
            rows,
            cols,
            n: row_sum as i64,
        })
    }

    pub fn of_table(t: &ContingencyTable) -> Self {
        Self {
            rows: t.row_marginals().to_vec(),
            cols: t.col_marginals().to_vec(),
            n: t.n(),
        }
    }

    pub fn rows(&self) -> &[i64] {
        &self.rows
    }

    pub fn cols(&self) -> &[i64] {
        &self.cols
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            n: self.n,
        }
    }
}

/// Streams every table with the given marginals exactly once, in
/// lexicographic row-major order of the cells.
///
/// Yields `Err(BudgetExceeded)` in place of the `budget + 1`-th table and
/// then stops.
#[derive(Debug, Clone)]
pub struct TableEnumerator {
    spec: MarginalSpec,
    cells: Vec<i64>,
    started: bool,
    finished: bool,
    emitted: u64,
    budget: u64,
}

pub fn enumerate_tables(spec: &MarginalSpec, budget: u64) -> TableEnumerator {
    TableEnumerator {
        spec: spec.clone(),
        cells: vec![0; spec.rows.len() * spec.cols.len()],
        started: false,
        finished: false,
        emitted: 0,
        budget,
    }
}

impl TableEnumerator {
    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    fn width(&self) -> usize {
        self.spec.cols.len()
    }

    fn is_free(&self, pos: usize) -> bool {
        let s = self.width();
        let r = self.spec.rows.len();
        pos / s + 1 < r && pos % s + 1 < s
    }

    /// Remaining room in row `i` before column `j`, and in every column
    /// above row `i`, given the cells preceding `(i, j)`.
    fn remainders(&self, i: usize, j: usize) -> (i64, impl Fn(usize) -> i64 + '_) {
        let s = self.width();
        let row_rem = self.spec.rows[i] - self.cells[i * s..i * s + j].iter().sum::<i64>();
        let col_rem = move |col: usize| {
            self.spec.cols[col] - (0..i).map(|ii| self.cells[ii * s + col]).sum::<i64>()
        };
        (row_rem, col_rem)
    }

    fn bounds(&self, pos: usize) -> (i64, i64) {
        let s = self.width();
        let (i, j) = (pos / s, pos % s);
        let (row_rem, col_rem) = self.remainders(i, j);
        let later: i64 = (j + 1..s).map(&col_rem).sum();
        ((row_rem - later).max(0), row_rem.min(col_rem(j)))
    }

    /// Fills every cell from `start` on: free cells at their lower bound,
    /// determined cells from the remainders.
    fn fill_from(&mut self, start: usize) {
        let s = self.width();
        let r = self.spec.rows.len();
        for pos in start..self.cells.len() {
            let (i, j) = (pos / s, pos % s);
            let value = if i + 1 == r {
                self.remainders(i, j).1(j)
            } else if j + 1 == s {
                self.remainders(i, j).0
            } else {
                self.bounds(pos).0
            };
            debug_assert!(value >= 0);
            self.cells[pos] = value;
        }
    }

    fn advance(&mut self) -> bool {
        for pos in (0..self.cells.len()).rev() {
            if !self.is_free(pos) {
                continue;
            }
            if self.cells[pos] < self.bounds(pos).1 {
                self.cells[pos] += 1;
                self.fill_from(pos + 1);
                return true;
            }
        }
        false
    }
}

impl Iterator for TableEnumerator {
    type Item = Result<ContingencyTable, OracleError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        if self.started {
            if !self.advance() {
                self.finished = true;
                return None;
            }
        } else {
            self.started = true;
            self.fill_from(0);
        }
        if self.emitted >= self.budget {
            self.finished = true;
            return Some(Err(OracleError::BudgetExceeded {
                budget: self.budget,
            }));
        }
        self.emitted += 1;
        Some(Ok(ContingencyTable::from_flat_unchecked(
            self.spec.rows.len(),
            self.spec.cols.len(),
            self.cells.clone(),
        )))
    }
}

/// Every table attaining the extremal `Q`, in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceExtremum {
    pub objective: Objective,
    pub q_value: i64,
    pub tables: Vec<ContingencyTable>,
    pub tables_scanned: u64,
}

/// Running extremum over a stream of tables, keeping every tied table.
#[derive(Debug, Clone)]
pub struct ExtremumTracker {
    objective: Objective,
    best: Option<i64>,
    tables: Vec<ContingencyTable>,
    scanned: u64,
}

impl ExtremumTracker {
    pub fn new(objective: Objective) -> Self {
        Self {
            objective,
            best: None,
            tables: Vec::new(),
            scanned: 0,
        }
    }

    pub fn offer(&mut self, table: ContingencyTable) {
        self.scanned += 1;
        let q = table.q_statistic();
        match self.best {
            Some(b) if q == b => self.tables.push(table),
            Some(b) if !self.objective.improves(q, b) => {}
            _ => {
                self.best = Some(q);
                self.tables.clear();
                self.tables.push(table);
            }
        }
    }

    pub fn scanned(&self) -> u64 {
        self.scanned
    }

    /// `None` until a table has been offered.
    pub fn finish(self) -> Option<BruteForceExtremum> {
        let q_value = self.best?;
        Some(BruteForceExtremum {
            objective: self.objective,
            q_value,
            tables: self.tables,
            tables_scanned: self.scanned,
        })
    }
}

pub fn extremize_q_bruteforce(
    spec: &MarginalSpec,
    objective: Objective,
    budget: u64,
) -> Result<BruteForceExtremum, OracleError> {
    let mut tracker = ExtremumTracker::new(objective);
    for table in enumerate_tables(spec, budget) {
        tracker.offer(table?);
    }
    Ok(tracker
        .finish()
        .expect("every valid spec has at least one table"))
}

/// Whether some largest cluster of one clustering lies entirely inside a
/// single cluster of the other. With ties for the largest size, any one of
/// the tied clusters suffices.
pub fn containment_predicate(t: &ContingencyTable) -> bool {
    let positive = |cells: &mut dyn Iterator<Item = i64>| cells.filter(|&v| v > 0).count();
    let row_max = t.row_marginals().iter().copied().max().unwrap_or(0);
    let col_max = t.col_marginals().iter().copied().max().unwrap_or(0);
    let row_contained = (0..t.rows())
        .filter(|&i| t.row_marginals()[i] == row_max)
        .any(|i| positive(&mut t.row(i).iter().copied()) == 1);
    let col_contained = (0..t.cols())
        .filter(|&j| t.col_marginals()[j] == col_max)
        .any(|j| positive(&mut (0..t.rows()).map(|i| t.get(i, j))) == 1);
    row_contained || col_contained
}

/// Partitions of `n` into exactly three positive parts, each sorted
/// descending, in descending lexicographic order.
pub fn three_part_partitions(n: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for first in (1..=n - 2).rev() {
        for second in (1..=first.min(n - first - 1)).rev() {
            let third = n - first - second;
            if third >= 1 && third <= second {
                out.push([first, second, third]);
            }
        }
    }
    out
}

/// Marginal pairs scanned for `3 <= n <= n_max`, sorted.
///
/// Row and column permutations and transposition map maximizers to
/// maximizers and preserve the containment predicate, so each marginal is
/// taken sorted descending and each unordered pair appears once with
/// `rows <= cols`.
pub fn conjecture_cases(n_max: i64) -> Vec<MarginalSpec> {
    let mut cases = Vec::new();
    for n in 3..=n_max {
        let parts = three_part_partitions(n);
        for (a, rows) in parts.iter().enumerate() {
            for cols in &parts[a..] {
                let (rows, cols) = if rows <= cols {
                    (rows, cols)
                } else {
                    (cols, rows)
                };
                cases.push(MarginalSpec {
                    rows: rows.to_vec(),
                    cols: cols.to_vec(),
                    n,
                });
            }
        }
    }
    cases.sort();
    cases
}

/// Maximizers of one marginal spec and how many satisfy containment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseOutcome {
    pub spec: MarginalSpec,
    pub max_q: i64,
    pub maximizers: Vec<ContingencyTable>,
    pub contained: Vec<bool>,
    pub tables_scanned: u64,
}

impl CaseOutcome {
    pub fn contained_count(&self) -> usize {
        self.contained.iter().filter(|&&c| c).count()
    }
}

pub fn evaluate_case(spec: &MarginalSpec, budget: u64) -> Result<CaseOutcome, OracleError> {
    let extremum = extremize_q_bruteforce(spec, Objective::Maximum, budget)?;
    let contained = extremum.tables.iter().map(containment_predicate).collect();
    Ok(CaseOutcome {
        spec: spec.clone(),
        max_q: extremum.q_value,
        maximizers: extremum.tables,
        contained,
        tables_scanned: extremum.tables_scanned,
    })
}

/// A maximizing table that fails the containment predicate, with the full
/// set of maximizers of its spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub spec: MarginalSpec,
    pub table: ContingencyTable,
    pub max_q: i64,
    pub maximizers: Vec<ContingencyTable>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureReport {
    pub n_max: i64,
    pub cases_scanned: usize,
    pub tables_scanned: u64,
    pub maximizers_found: usize,
    pub counterexamples: Vec<Counterexample>,
    /// Specs where no maximizer satisfies containment.
    pub specs_without_contained_maximizer: usize,
    /// Specs where at least one maximizer fails containment.
    pub specs_with_uncontained_maximizer: usize,
    /// Specs skipped because they exceeded the per-spec budget.
    pub skipped: Vec<MarginalSpec>,
    pub complete: bool,
    pub elapsed: Option<Duration>,
}

impl ConjectureReport {
    /// Merges per-spec results; `results` must follow [`conjecture_cases`]
    /// order for the report to be deterministic.
    pub fn from_results(
        n_max: i64,
        results: impl IntoIterator<Item = (MarginalSpec, Result<CaseOutcome, OracleError>)>,
    ) -> Self {
        let mut report = ConjectureReport {
            n_max,
            cases_scanned: 0,
            tables_scanned: 0,
            maximizers_found: 0,
            counterexamples: Vec::new(),
            specs_without_contained_maximizer: 0,
            specs_with_uncontained_maximizer: 0,
            skipped: Vec::new(),
            complete: true,
            elapsed: None,
        };
        for (spec, result) in results {
            let outcome = match result {
                Ok(outcome) => outcome,
                Err(_) => {
                    report.skipped.push(spec);
                    report.complete = false;
                    continue;
                }
            };
            report.cases_scanned += 1;
            report.tables_scanned += outcome.tables_scanned;
            report.maximizers_found += outcome.maximizers.len();
            let contained = outcome.contained_count();
            if contained == 0 {
                report.specs_without_contained_maximizer += 1;
            }
            if contained < outcome.maximizers.len() {
                report.specs_with_uncontained_maximizer += 1;
            }
            for (table, &ok) in outcome.maximizers.iter().zip(&outcome.contained) {
                if !ok {
                    report.counterexamples.push(Counterexample {
                        spec: outcome.spec.clone(),
                        table: table.clone(),
                        max_q: outcome.max_q,
                        maximizers: outcome.maximizers.clone(),
                    });
                }
            }
        }
        report
    }
}

/// Checks containment on every maximizer of every 3x3 marginal pair with
/// `n <= n_max`, sequentially.
pub fn scan_conjecture_3x3(n_max: i64, budget: u64) -> Result<ConjectureReport, OracleError> {
    if n_max < 3 {
        return Err(OracleError::ScanBoundTooSmall { n_max });
    }
    let results = conjecture_cases(n_max).into_iter().map(|spec| {
        let result = evaluate_case(&spec, budget);
        (spec, result)
    });
    Ok(ConjectureReport::from_results(n_max, results))
}

//! Contingency tables, pair counts and the `Q` statistic.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Largest number of observations a table may hold.
///
/// With `n <= 2^31 - 1` every square of a count, `n^2` and `Q` fit in an `i64`.
pub const MAX_OBSERVATIONS: i64 = (1 << 31) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("labeling is empty")]
    EmptyLabeling,
    #[error("labelings differ in length ({first} vs {second})")]
    LengthMismatch { first: usize, second: usize },
    #[error("table has no cells")]
    EmptyTable,
    #[error("row {row} has {found} cells, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("cell ({row}, {col}) is negative: {value}")]
    NegativeCount { row: usize, col: usize, value: i64 },
    #[error("{axis} {index} is an empty cluster")]
    EmptyCluster { axis: Axis, index: usize },
    #[error("{n} observations exceeds the limit of {max}")]
    TooManyObservations { n: i128, max: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Column,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Row => f.write_str("row"),
            Axis::Column => f.write_str("column"),
        }
    }
}

/// Cluster assignments of `n >= 1` observations. Tokens are opaque; the set
/// of distinct tokens defines the clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling<T> {
    assignments: Vec<T>,
}

impl<T: Ord> Labeling<T> {
    pub fn new(assignments: Vec<T>) -> Result<Self, TableError> {
        if assignments.is_empty() {
            return Err(TableError::EmptyLabeling);
        }
        Ok(Self { assignments })
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    /// Always false; a labeling holds at least one observation.
    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn assignments(&self) -> &[T] {
        &self.assignments
    }

    /// Dense cluster index of every observation, numbered by first appearance.
    pub fn cluster_indices(&self) -> (Vec<usize>, usize) {
        let mut seen: BTreeMap<&T, usize> = BTreeMap::new();
        let indices = self
            .assignments
            .iter()
            .map(|token| {
                let next = seen.len();
                *seen.entry(token).or_insert(next)
            })
            .collect();
        (indices, seen.len())
    }
}

/// An `r x s` table of co-occurrence counts with strictly positive marginals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContingencyTable {
    rows: usize,
    cols: usize,
    counts: Vec<i64>,
    row_marginals: Vec<i64>,
    col_marginals: Vec<i64>,
    n: i64,
}

/// Builds the table `n_ij = |C_i ∩ D_j|` of two labelings of the same
/// observations. Cluster indices follow first appearance in each labeling.
pub fn table_from_labels<A: Ord, B: Ord>(
    first: &Labeling<A>,
    second: &Labeling<B>,
) -> Result<ContingencyTable, TableError> {
    if first.len() != second.len() {
        return Err(TableError::LengthMismatch {
            first: first.len(),
            second: second.len(),
        });
    }
    check_size(first.len() as i128)?;
    let (row_of, rows) = first.cluster_indices();
    let (col_of, cols) = second.cluster_indices();
    let mut counts = alloc::vec![0i64; rows * cols];
    for (i, j) in row_of.into_iter().zip(col_of) {
        counts[i * cols + j] += 1;
    }
    Ok(ContingencyTable::from_flat_unchecked(rows, cols, counts))
}

fn check_size(n: i128) -> Result<(), TableError> {
    if n > MAX_OBSERVATIONS as i128 {
        Err(TableError::TooManyObservations {
            n,
            max: MAX_OBSERVATIONS,
        })
    } else {
        Ok(())
    }
}

impl ContingencyTable {
    /// Validates a matrix given row by row.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, TableError> {
        let r = rows.len();
        let s = rows.first().map_or(0, |row| row.as_ref().len());
        if r == 0 || s == 0 {
            return Err(TableError::EmptyTable);
        }
        let mut counts = Vec::with_capacity(r * s);
        let mut total: i128 = 0;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != s {
                return Err(TableError::Ragged {
                    row: i,
                    expected: s,
                    found: row.len(),
                });
            }
            for (j, &value) in row.iter().enumerate() {
                if value < 0 {
                    return Err(TableError::NegativeCount {
                        row: i,
                        col: j,
                        value,
                    });
                }
                total += value as i128;
            }
            counts.extend_from_slice(row);
        }
        check_size(total)?;
        let table = Self::from_flat_unchecked(r, s, counts);
        if let Some(index) = table.row_marginals.iter().position(|&m| m == 0) {
            return Err(TableError::EmptyCluster {
                axis: Axis::Row,
                index,
            });
        }
        if let Some(index) = table.col_marginals.iter().position(|&m| m == 0) {
            return Err(TableError::EmptyCluster {
                axis: Axis::Column,
                index,
            });
        }
        Ok(table)
    }

    /// Caller guarantees non-negative counts, non-zero marginals and a total
    /// within [`MAX_OBSERVATIONS`].
    pub(crate) fn from_flat_unchecked(rows: usize, cols: usize, counts: Vec<i64>) -> Self {
        debug_assert_eq!(counts.len(), rows * cols);
        let mut row_marginals = alloc::vec![0i64; rows];
        let mut col_marginals = alloc::vec![0i64; cols];
        for (idx, &value) in counts.iter().enumerate() {
            row_marginals[idx / cols] += value;
            col_marginals[idx % cols] += value;
        }
        let n = row_marginals.iter().sum();
        Self {
            rows,
            cols,
            counts,
            row_marginals,
            col_marginals,
            n,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.counts[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[i64] {
        &self.counts[row * self.cols..(row + 1) * self.cols]
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn row_marginals(&self) -> &[i64] {
        &self.row_marginals
    }

    pub fn col_marginals(&self) -> &[i64] {
        &self.col_marginals
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut counts = Vec::with_capacity(self.counts.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                counts.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            counts,
            row_marginals: self.col_marginals.clone(),
            col_marginals: self.row_marginals.clone(),
            n: self.n,
        }
    }

    pub fn swap_rows(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        for j in 0..self.cols {
            out.counts.swap(a * self.cols + j, b * self.cols + j);
        }
        out.row_marginals.swap(a, b);
        out
    }

    pub fn swap_cols(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows {
            out.counts.swap(i * self.cols + a, i * self.cols + b);
        }
        out.col_marginals.swap(a, b);
        out
    }

    /// `Q`, the sum of squared cells.
    pub fn q_statistic(&self) -> i64 {
        self.counts.iter().map(|&c| c * c).sum()
    }

    pub fn pair_counts(&self) -> PairCounts {
        PairCounts::from_sums(
            self.n,
            self.q_statistic(),
            sum_of_squares(&self.row_marginals),
            sum_of_squares(&self.col_marginals),
        )
    }

    pub fn row_sum_of_squares(&self) -> i64 {
        sum_of_squares(&self.row_marginals)
    }

    pub fn col_sum_of_squares(&self) -> i64 {
        sum_of_squares(&self.col_marginals)
    }
}

fn sum_of_squares(values: &[i64]) -> i64 {
    values.iter().map(|&v| v * v).sum()
}

/// Unordered observation pairs classified by co-membership:
/// `a` together in both, `b` together only in the first clustering,
/// `c` together only in the second, `d` apart in both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairCounts {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl PairCounts {
    /// Pair counts of any table with `n` observations, sum of squared cells
    /// `q`, and the given sums of squared row and column marginals.
    pub fn from_sums(n: i64, q: i64, row_sq: i64, col_sq: i64) -> Self {
        let (n, q, row_sq, col_sq) = (n as i128, q as i128, row_sq as i128, col_sq as i128);
        let half = |v: i128| {
            debug_assert!(v % 2 == 0 && v >= 0);
            (v / 2) as i64
        };
        Self {
            a: half(q - n),
            b: half(row_sq - q),
            c: half(col_sq - q),
            d: half(q + n * n - row_sq - col_sq),
        }
    }

    /// `n(n-1)/2`.
    pub fn total(&self) -> i64 {
        self.a + self.b + self.c + self.d
    }
}

//! Closed-form extrema of `Q` over 2x2 tables with fixed marginals.
//!
//! A 2x2 table with row marginals `(x, n - x)` and column marginals
//! `(y, n - y)` is determined by its top-left cell `k`:
//!
//! ```text
//!   k        x - k
//!   y - k    n + k - x - y
//! ```
//!
//! Relabeling clusters and swapping the two clusterings reduces every input
//! to `n/2 <= x <= y < n`, where `k` ranges over `[x + y - n, x]` and
//! `Q(k) = 4k^2 - 2(2x + 2y - n)k + const` is a convex parabola with vertex
//! `v = (2x + 2y - n) / 4`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::table::{ContingencyTable, MAX_OBSERVATIONS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtremalError {
    #[error(
        "degenerate cluster: every marginal must be at least 1 (rows {rows:?}, cols {cols:?})"
    )]
    DegenerateCluster { rows: [i64; 2], cols: [i64; 2] },
    #[error("marginals do not sum to n = {n} (rows {row_sum}, cols {col_sum})")]
    MarginalMismatch { n: i64, row_sum: i64, col_sum: i64 },
    #[error("n = {n} exceeds the limit of {max}")]
    TooLarge { n: i64, max: i64 },
    #[error("k = {k} is outside the feasible range {range}")]
    KOutOfRange { k: i64, range: KRange },
}

/// Relabelings that take the original marginals to canonical form, applied
/// in the order row swap, column swap, transpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Transform {
    pub row_swap: bool,
    pub col_swap: bool,
    pub transposed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub n: i64,
    pub x: i64,
    pub y: i64,
    pub transform: Transform,
}

/// Closed integer interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KRange {
    pub lo: i64,
    pub hi: i64,
}

impl KRange {
    pub fn contains(&self, k: i64) -> bool {
        self.lo <= k && k <= self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn iter(&self) -> core::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for KRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Objective {
    Maximum,
    Minimum,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::Maximum => "maximum",
            Objective::Minimum => "minimum",
        }
    }

    /// Whether `candidate` is strictly better than `incumbent`.
    pub fn improves(self, candidate: i64, incumbent: i64) -> bool {
        match self {
            Objective::Maximum => candidate > incumbent,
            Objective::Minimum => candidate < incumbent,
        }
    }
}

/// Which case of the closed form produced an extremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// `x > n/2`: maximum at `k = x`.
    MaxUpperBound,
    /// `x = n/2`: maximum at both `k = x + y - n` and `k = x`.
    MaxBothBounds,
    /// `x + y > 3n/2`: minimum at `k = x + y - n`.
    MinLowerBound,
    /// Vertex is an integer.
    MinVertex,
    /// Vertex has fractional part 1/4 or 3/4 and rounds to one integer.
    MinNearestInteger,
    /// Vertex has fractional part 1/2: minimum at both neighbours.
    MinVertexTie,
}

impl Branch {
    pub const ALL: [Branch; 6] = [
        Branch::MaxUpperBound,
        Branch::MaxBothBounds,
        Branch::MinLowerBound,
        Branch::MinVertex,
        Branch::MinNearestInteger,
        Branch::MinVertexTie,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Branch::MaxUpperBound => "max_upper_bound",
            Branch::MaxBothBounds => "max_both_bounds",
            Branch::MinLowerBound => "min_lower_bound",
            Branch::MinVertex => "min_vertex",
            Branch::MinNearestInteger => "min_nearest_integer",
            Branch::MinVertexTie => "min_vertex_tie",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalResult {
    pub objective: Objective,
    pub branch: Branch,
    pub canonical: CanonicalForm,
    /// Extremal values of the free cell in canonical orientation, ascending.
    pub k_values: Vec<i64>,
    pub q_value: i64,
    /// One table per entry of `k_values`, in the caller's orientation.
    pub tables: Vec<ContingencyTable>,
}

/// Reduces 2x2 marginals to `n/2 <= x <= y < n`.
pub fn canonicalize(
    rows: [i64; 2],
    cols: [i64; 2],
    n: i64,
) -> Result<CanonicalForm, ExtremalError> {
    if rows.iter().chain(cols.iter()).any(|&m| m < 1) {
        return Err(ExtremalError::DegenerateCluster { rows, cols });
    }
    let row_sum = rows[0] as i128 + rows[1] as i128;
    let col_sum = cols[0] as i128 + cols[1] as i128;
    if row_sum != n as i128 || col_sum != n as i128 {
        return Err(ExtremalError::MarginalMismatch {
            n,
            row_sum: row_sum.clamp(i64::MIN as i128, i64::MAX as i128) as i64,
            col_sum: col_sum.clamp(i64::MIN as i128, i64::MAX as i128) as i64,
        });
    }
    if n > MAX_OBSERVATIONS {
        return Err(ExtremalError::TooLarge {
            n,
            max: MAX_OBSERVATIONS,
        });
    }
    let row_swap = 2 * rows[0] < n;
    let col_swap = 2 * cols[0] < n;
    let x = if row_swap { rows[1] } else { rows[0] };
    let y = if col_swap { cols[1] } else { cols[0] };
    let transposed = x > y;
    let (x, y) = if transposed { (y, x) } else { (x, y) };
    Ok(CanonicalForm {
        n,
        x,
        y,
        transform: Transform {
            row_swap,
            col_swap,
            transposed,
        },
    })
}

impl CanonicalForm {
    /// Range of feasible `k`, `[x + y - n, x]`.
    pub fn k_range(&self) -> KRange {
        KRange {
            lo: self.x + self.y - self.n,
            hi: self.x,
        }
    }

    /// Four times the vertex of `Q(k)`.
    pub fn vertex_times_four(&self) -> i64 {
        2 * self.x + 2 * self.y - self.n
    }

    /// `Q(k)` evaluated from the formula for any integer `k`, feasible or not.
    pub fn q_of_k_extended(&self, k: i64) -> i128 {
        let (n, x, y, k) = (self.n as i128, self.x as i128, self.y as i128, k as i128);
        k * k + (x - k) * (x - k) + (y - k) * (y - k) + (n + k - x - y) * (n + k - x - y)
    }

    /// The canonical-orientation table with top-left cell `k`.
    pub fn canonical_table(&self, k: i64) -> Result<ContingencyTable, ExtremalError> {
        self.check(k)?;
        let (n, x, y) = (self.n, self.x, self.y);
        Ok(ContingencyTable::from_flat_unchecked(
            2,
            2,
            vec![k, x - k, y - k, n + k - x - y],
        ))
    }

    /// The table with top-left canonical cell `k`, in the original orientation.
    pub fn table(&self, k: i64) -> Result<ContingencyTable, ExtremalError> {
        Ok(self.to_original(&self.canonical_table(k)?))
    }

    /// Undoes the transpose, then the column swap, then the row swap.
    pub fn to_original(&self, canonical: &ContingencyTable) -> ContingencyTable {
        let t = self.transform;
        let mut out = if t.transposed {
            canonical.transpose()
        } else {
            canonical.clone()
        };
        if t.col_swap {
            out = out.swap_cols(0, 1);
        }
        if t.row_swap {
            out = out.swap_rows(0, 1);
        }
        out
    }

    /// Maps a 2x2 table with the original marginals to canonical orientation.
    pub fn to_canonical(&self, original: &ContingencyTable) -> ContingencyTable {
        let t = self.transform;
        let mut out = original.clone();
        if t.row_swap {
            out = out.swap_rows(0, 1);
        }
        if t.col_swap {
            out = out.swap_cols(0, 1);
        }
        if t.transposed {
            out = out.transpose();
        }
        out
    }

    /// Canonical `k` of a 2x2 table with the original marginals.
    pub fn k_of_table(&self, original: &ContingencyTable) -> i64 {
        self.to_canonical(original).get(0, 0)
    }

    /// Row and column marginals in the original orientation.
    pub fn original_marginals(&self) -> ([i64; 2], [i64; 2]) {
        let t = self.transform;
        let canonical_rows = [self.x, self.n - self.x];
        let canonical_cols = [self.y, self.n - self.y];
        let (mut rows, mut cols) = if t.transposed {
            (canonical_cols, canonical_rows)
        } else {
            (canonical_rows, canonical_cols)
        };
        if t.col_swap {
            cols.swap(0, 1);
        }
        if t.row_swap {
            rows.swap(0, 1);
        }
        (rows, cols)
    }

    fn check(&self, k: i64) -> Result<(), ExtremalError> {
        let range = self.k_range();
        if range.contains(k) {
            Ok(())
        } else {
            Err(ExtremalError::KOutOfRange { k, range })
        }
    }

    fn result(&self, objective: Objective, branch: Branch, k_values: Vec<i64>) -> ExtremalResult {
        let q_value = q_of_k(self, k_values[0]).expect("extremal k is feasible");
        debug_assert!(k_values.iter().all(|&k| q_of_k(self, k) == Ok(q_value)));
        let tables = k_values
            .iter()
            .map(|&k| self.table(k).expect("extremal k is feasible"))
            .collect();
        ExtremalResult {
            objective,
            branch,
            canonical: *self,
            k_values,
            q_value,
            tables,
        }
    }
}

/// Feasible range of `k`; see [`CanonicalForm::k_range`].
pub fn k_range(c: &CanonicalForm) -> KRange {
    c.k_range()
}

/// `Q(k) = k^2 + (x-k)^2 + (y-k)^2 + (n+k-x-y)^2` for feasible `k`.
pub fn q_of_k(c: &CanonicalForm, k: i64) -> Result<i64, ExtremalError> {
    c.check(k)?;
    Ok(c.q_of_k_extended(k) as i64)
}

pub fn maximize(c: &CanonicalForm) -> ExtremalResult {
    if 2 * c.x > c.n {
        c.result(Objective::Maximum, Branch::MaxUpperBound, vec![c.x])
    } else {
        c.result(
            Objective::Maximum,
            Branch::MaxBothBounds,
            vec![c.x + c.y - c.n, c.x],
        )
    }
}

pub fn minimize(c: &CanonicalForm) -> ExtremalResult {
    let (n, x, y) = (c.n, c.x, c.y);
    if 2 * (x + y) > 3 * n {
        return c.result(Objective::Minimum, Branch::MinLowerBound, vec![x + y - n]);
    }
    let four_v = c.vertex_times_four();
    let floor = four_v.div_euclid(4);
    match four_v.rem_euclid(4) {
        0 => c.result(Objective::Minimum, Branch::MinVertex, vec![floor]),
        2 => c.result(
            Objective::Minimum,
            Branch::MinVertexTie,
            vec![floor, floor + 1],
        ),
        // round half up: floor(v + 1/2)
        _ => c.result(
            Objective::Minimum,
            Branch::MinNearestInteger,
            vec![(four_v + 2).div_euclid(4)],
        ),
    }
}

/// Canonicalizes, extremizes and maps the extremal tables back to the
/// caller's orientation.
pub fn extremal_tables(
    rows: [i64; 2],
    cols: [i64; 2],
    n: i64,
    objective: Objective,
) -> Result<ExtremalResult, ExtremalError> {
    let c = canonicalize(rows, cols, n)?;
    Ok(match objective {
        Objective::Maximum => maximize(&c),
        Objective::Minimum => minimize(&c),
    })
}

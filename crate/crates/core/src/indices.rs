//! Pair-counting agreement indices and their chance-corrected forms.
//!
//! With the marginals fixed every index here is a function of `Q` alone, so
//! the index of a `Q`-maximizing table only needs the maximal `Q` value.

use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::IndexValue;
use crate::table::{ContingencyTable, PairCounts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexKind {
    Rand,
    AdjustedRand,
    Jaccard,
    FowlkesMallows,
}

impl IndexKind {
    pub const ALL: [IndexKind; 4] = [
        IndexKind::Rand,
        IndexKind::AdjustedRand,
        IndexKind::Jaccard,
        IndexKind::FowlkesMallows,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IndexKind::Rand => "rand",
            IndexKind::AdjustedRand => "adjusted_rand",
            IndexKind::Jaccard => "jaccard",
            IndexKind::FowlkesMallows => "fowlkes_mallows",
        }
    }

    /// Whether [`expected_index`] has a closed form for this kind.
    pub fn has_expectation(self) -> bool {
        matches!(self, IndexKind::Rand | IndexKind::AdjustedRand)
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    /// The index has a zero denominator for these pair counts.
    #[error("{kind} is undefined for these pair counts")]
    Undefined { kind: IndexKind },
    #[error("{kind} has no closed-form expectation under the fixed-marginals null")]
    Unsupported { kind: IndexKind },
    /// The maximal index equals its expectation, so the normalization divides by zero.
    #[error("{kind} normalization is degenerate: maximum equals expectation")]
    Degenerate { kind: IndexKind },
    #[error("{max_q} is not a valid maximal Q for a table with Q = {q}")]
    InvalidMaximum { max_q: i64, q: i64 },
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn ratio(num: BigInt, den: BigInt) -> Option<BigRational> {
    if den.is_zero() {
        None
    } else {
        Some(BigRational::new(num, den))
    }
}

/// Index value from pair counts.
///
/// Fowlkes-Mallows is `a / sqrt((a+b)(a+c))`; its square is rational and
/// comparisons between Fowlkes-Mallows values should use
/// [`fowlkes_mallows_squared`].
pub fn index(kind: IndexKind, p: &PairCounts) -> Result<IndexValue, IndexError> {
    let undefined = IndexError::Undefined { kind };
    let (a, b, c, d) = (big(p.a), big(p.b), big(p.c), big(p.d));
    let value = match kind {
        IndexKind::Rand => ratio(&a + &d, &a + &b + &c + &d).map(IndexValue::Exact),
        IndexKind::Jaccard => ratio(a.clone(), &a + &b + &c).map(IndexValue::Exact),
        IndexKind::FowlkesMallows => fowlkes_mallows_squared(p).map(IndexValue::sqrt_of),
        IndexKind::AdjustedRand => {
            let num = BigInt::from(2) * (&a * &d - &b * &c);
            let den = (&a + &b) * (&b + &d) + (&a + &c) * (&c + &d);
            ratio(num, den).map(IndexValue::Exact)
        }
    };
    value.ok_or(undefined)
}

/// `a^2 / ((a+b)(a+c))`, the exact square of the Fowlkes-Mallows index.
pub fn fowlkes_mallows_squared(p: &PairCounts) -> Option<BigRational> {
    let a = big(p.a);
    ratio(&a * &a, (&a + big(p.b)) * (&a + big(p.c)))
}

/// `1 - index`.
pub fn semimetric(kind: IndexKind, p: &PairCounts) -> Result<IndexValue, IndexError> {
    index(kind, p).map(|v| v.one_minus())
}

/// Expected number of pairs co-clustered in both clusterings when the labels
/// are permuted at random with the marginals held fixed:
/// `sum_i C(n_i+, 2) * sum_j C(n_+j, 2) / C(n, 2)`.
pub fn expected_pairs_together(t: &ContingencyTable) -> Option<BigRational> {
    let p = t.pair_counts();
    let rows = big(p.a + p.b);
    let cols = big(p.a + p.c);
    ratio(rows * cols, big(p.total()))
}

/// Expectation of the index under the fixed-marginals permutation null.
pub fn expected_index(kind: IndexKind, t: &ContingencyTable) -> Result<IndexValue, IndexError> {
    let undefined = IndexError::Undefined { kind };
    let p = t.pair_counts();
    let total = big(p.total());
    let rows = big(p.a + p.b);
    let cols = big(p.a + p.c);
    match kind {
        IndexKind::Rand => {
            let e_a = expected_pairs_together(t).ok_or(undefined)?;
            // E[a + d] = N - rows - cols + 2 E[a]
            let e_agree = BigRational::from_integer(&total - &rows - &cols) + e_a * BigInt::from(2);
            Ok(IndexValue::Exact(e_agree / total))
        }
        IndexKind::AdjustedRand => {
            // The adjustment centers on zero whenever the index is defined;
            // its denominator depends on the marginals only.
            let den = &rows * (&total - &cols) + &cols * (&total - &rows);
            if den.is_zero() {
                Err(undefined)
            } else {
                Ok(IndexValue::integer(0))
            }
        }
        IndexKind::Jaccard | IndexKind::FowlkesMallows => Err(IndexError::Unsupported { kind }),
    }
}

fn exact_index(kind: IndexKind, p: &PairCounts) -> Result<BigRational, IndexError> {
    match index(kind, p)? {
        IndexValue::Exact(r) => Ok(r),
        IndexValue::Surd { .. } => Err(IndexError::Unsupported { kind }),
    }
}

fn exact_expectation(kind: IndexKind, t: &ContingencyTable) -> Result<BigRational, IndexError> {
    if !kind.has_expectation() {
        return Err(IndexError::Unsupported { kind });
    }
    match expected_index(kind, t)? {
        IndexValue::Exact(r) => Ok(r),
        IndexValue::Surd { .. } => Err(IndexError::Unsupported { kind }),
    }
}

/// `(index - E[index]) / (1 - E[index])`, the adjustment with the
/// conventional upper bound of one.
pub fn conventional_adjusted_index(
    kind: IndexKind,
    t: &ContingencyTable,
) -> Result<IndexValue, IndexError> {
    let expected = exact_expectation(kind, t)?;
    let value = exact_index(kind, &t.pair_counts())?;
    let den = BigRational::one() - &expected;
    if den.is_zero() {
        return Err(IndexError::Degenerate { kind });
    }
    Ok(IndexValue::Exact((value - expected) / den))
}

/// Pair counts of any table with the marginals of `t` and `Q = q`.
pub fn pair_counts_at_q(t: &ContingencyTable, q: i64) -> Result<PairCounts, IndexError> {
    let q_t = t.q_statistic();
    let row_sq = t.row_sum_of_squares();
    let col_sq = t.col_sum_of_squares();
    let n = t.n();
    let feasible = q >= n
        && q <= row_sq.min(col_sq)
        && (q - n) % 2 == 0
        && q as i128 + (n as i128) * (n as i128) >= row_sq as i128 + col_sq as i128;
    if !feasible {
        return Err(IndexError::InvalidMaximum { max_q: q, q: q_t });
    }
    Ok(PairCounts::from_sums(t.n(), q, row_sq, col_sq))
}

/// `(index(t) - E[index]) / (index(t_max) - E[index])`, where `t_max` is any
/// table with the marginals of `t` attaining `max_q`.
///
/// `max_q` must come from a maximization over the same marginals (closed
/// form for 2x2, enumeration otherwise); values below `Q(t)` are rejected.
pub fn max_adjusted_index(
    kind: IndexKind,
    t: &ContingencyTable,
    max_q: i64,
) -> Result<IndexValue, IndexError> {
    let expected = exact_expectation(kind, t)?;
    let q = t.q_statistic();
    if max_q < q {
        return Err(IndexError::InvalidMaximum { max_q, q });
    }
    let at_max = exact_index(kind, &pair_counts_at_q(t, max_q)?)?;
    let value = exact_index(kind, &t.pair_counts())?;
    let den = at_max - &expected;
    if den.is_zero() {
        return Err(IndexError::Degenerate { kind });
    }
    Ok(IndexValue::Exact((value - expected) / den))
}

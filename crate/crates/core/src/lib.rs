//! Pair-counting agreement between two clusterings of the same data set.
//!
//! The crate builds contingency tables from labelings, derives the pair
//! counts `a, b, c, d` and the sum of squared cells `Q`, evaluates the Rand,
//! adjusted Rand, Jaccard and Fowlkes-Mallows indices exactly, and finds the
//! tables that maximize or minimize `Q` when the cluster sizes are fixed.
//!
//! For two clusterings with two clusters each the extrema are given in closed
//! form by [`extremal`]. For arbitrary `r x s` marginals [`oracle`] enumerates
//! every feasible table, which also backs the 3x3 containment scan.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod extremal;
pub mod indices;
pub mod oracle;
pub mod rational;
pub mod table;

pub use extremal::{
    canonicalize, extremal_tables, k_range, maximize, minimize, q_of_k, Branch, CanonicalForm,
    ExtremalError, ExtremalResult, KRange, Objective, Transform,
};
pub use indices::{expected_index, index, max_adjusted_index, semimetric, IndexError, IndexKind};
pub use oracle::{
    containment_predicate, enumerate_tables, extremize_q_bruteforce, scan_conjecture_3x3,
    BruteForceExtremum, ConjectureReport, MarginalSpec, OracleError, DEFAULT_BUDGET,
};
pub use rational::IndexValue;
pub use table::{
    table_from_labels, ContingencyTable, Labeling, PairCounts, TableError, MAX_OBSERVATIONS,
};

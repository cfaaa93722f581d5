use clustagree::extremal::Branch;
use clustagree::indices::{fowlkes_mallows_squared, max_adjusted_index};
use clustagree::oracle::{containment_predicate, enumerate_tables, MarginalSpec};
use clustagree::{
    canonicalize, index, maximize, minimize, table_from_labels, ContingencyTable, IndexKind,
    Labeling, DEFAULT_BUDGET,
};
use proptest::prelude::*;

/// Random labeling pair with `n` observations and at most `r`/`s` clusters.
fn labelings() -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (1usize..=50, 1u8..=4, 1u8..=4).prop_flat_map(|(n, r, s)| {
        (
            proptest::collection::vec(0..r, n),
            proptest::collection::vec(0..s, n),
        )
    })
}

fn all_pairs_tally(first: &[u8], second: &[u8]) -> [i64; 4] {
    let mut out = [0i64; 4];
    for i in 0..first.len() {
        for j in i + 1..first.len() {
            let same_first = first[i] == first[j];
            let same_second = second[i] == second[j];
            let slot = match (same_first, same_second) {
                (true, true) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (false, false) => 3,
            };
            out[slot] += 1;
        }
    }
    out
}

fn marginals_2x2() -> impl Strategy<Value = (i64, i64, i64)> {
    (2i64..=60).prop_flat_map(|n| (Just(n), 1..n, 1..n))
}

proptest! {
    #[test]
    fn pair_counts_match_all_pairs((first, second) in labelings()) {
        let t = table_from_labels(
            &Labeling::new(first.clone()).unwrap(),
            &Labeling::new(second.clone()).unwrap(),
        ).unwrap();
        let p = t.pair_counts();
        let n = t.n();
        prop_assert_eq!(p.total(), n * (n - 1) / 2);
        prop_assert_eq!(t.q_statistic(), 2 * p.a + n);
        prop_assert_eq!([p.a, p.b, p.c, p.d], all_pairs_tally(&first, &second));
    }

    #[test]
    fn renaming_permutes_the_table((first, second) in labelings(), shift in 1u8..=200) {
        let renamed: Vec<u8> = first.iter().map(|&v| v.wrapping_mul(7).wrapping_add(shift)).collect();
        let base = table_from_labels(
            &Labeling::new(first).unwrap(),
            &Labeling::new(second.clone()).unwrap(),
        ).unwrap();
        let other = table_from_labels(
            &Labeling::new(renamed).unwrap(),
            &Labeling::new(second).unwrap(),
        ).unwrap();
        let mut a = base.counts().to_vec();
        let mut b = other.counts().to_vec();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
        prop_assert_eq!(base.q_statistic(), other.q_statistic());
        prop_assert_eq!(base.pair_counts(), other.pair_counts());
    }

    #[test]
    fn semimetric_complements_index((first, second) in labelings()) {
        let t = table_from_labels(
            &Labeling::new(first).unwrap(),
            &Labeling::new(second).unwrap(),
        ).unwrap();
        let p = t.pair_counts();
        for kind in IndexKind::ALL {
            match (index(kind, &p), clustagree::semimetric(kind, &p)) {
                (Ok(v), Ok(d)) => {
                    prop_assert_eq!(d.one_minus(), v.clone());
                    prop_assert_eq!(d.is_zero(), v.is_one());
                }
                (Err(e), Err(f)) => prop_assert_eq!(e, f),
                other => prop_assert!(false, "mismatched definedness: {:?}", other),
            }
        }
    }

    #[test]
    fn orientation_invariance((n, x, y) in marginals_2x2()) {
        let base = canonicalize([x, n - x], [y, n - y], n).unwrap();
        let variants = [
            ([n - x, x], [y, n - y]),
            ([x, n - x], [n - y, y]),
            ([y, n - y], [x, n - x]),
            ([n - y, y], [n - x, x]),
        ];
        for (rows, cols) in variants {
            let c = canonicalize(rows, cols, n).unwrap();
            prop_assert_eq!((c.x, c.y), (base.x, base.y));
            prop_assert_eq!(maximize(&c).q_value, maximize(&base).q_value);
            prop_assert_eq!(minimize(&c).q_value, minimize(&base).q_value);
            prop_assert_eq!(c.original_marginals(), (rows, cols));
            for t in maximize(&c).tables.iter().chain(minimize(&c).tables.iter()) {
                prop_assert_eq!(t.row_marginals(), &rows[..]);
                prop_assert_eq!(t.col_marginals(), &cols[..]);
            }
        }
    }

    #[test]
    fn canonical_invariants((n, x, y) in marginals_2x2()) {
        let c = canonicalize([x, n - x], [y, n - y], n).unwrap();
        prop_assert!(n <= 2 * c.x && c.x <= c.y && c.y < n);
        let range = c.k_range();
        prop_assert!(!range.is_empty());
        let four_v = c.vertex_times_four() as i128;
        for k in range.iter() {
            let q = clustagree::q_of_k(&c, k).unwrap();
            prop_assert_eq!(q, c.table(k).unwrap().q_statistic());
            // reflection about v: k -> 2v - k, an integer when 4v is even
            if four_v % 2 == 0 {
                let mirror = (four_v / 2) as i64 - k;
                prop_assert_eq!(c.q_of_k_extended(k), c.q_of_k_extended(mirror));
            }
        }
        let max = maximize(&c);
        let min = minimize(&c);
        prop_assert_eq!(max.k_values.len() == 2, 2 * c.x == n);
        prop_assert_eq!(
            min.k_values.len() == 2,
            2 * (c.x + c.y) <= 3 * n && c.vertex_times_four() % 4 == 2
        );
        for r in [&max, &min] {
            prop_assert!(r.k_values.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(r.k_values.iter().all(|&k| range.contains(k)));
        }
        if max.branch == Branch::MaxUpperBound {
            let t = c.canonical_table(c.x).unwrap();
            prop_assert_eq!(t.to_rows(), vec![vec![c.x, 0], vec![c.y - c.x, n - c.y]]);
        }
        if min.branch == Branch::MinLowerBound {
            let t = c.canonical_table(c.x + c.y - n).unwrap();
            prop_assert_eq!(t.to_rows(), vec![vec![c.x + c.y - n, n - c.y], vec![n - c.x, 0]]);
        }
    }

    #[test]
    fn containment_is_symmetric(
        (r, s, cells) in (1usize..=3, 1usize..=3)
            .prop_flat_map(|(r, s)| (Just(r), Just(s), proptest::collection::vec(0i64..=3, r * s)))
    ) {
        let mut cells = cells;
        // keep every row and column non-empty
        for i in 0..r.max(s) {
            cells[(i % r) * s + i % s] += 1;
        }
        let rows: Vec<Vec<i64>> = cells.chunks(s).map(<[i64]>::to_vec).collect();
        let t = &ContingencyTable::from_rows(&rows).unwrap();
        let expected = containment_predicate(t);
        prop_assert_eq!(containment_predicate(&t.transpose()), expected);
        if t.rows() > 1 {
            prop_assert_eq!(containment_predicate(&t.swap_rows(0, t.rows() - 1)), expected);
        }
        if t.cols() > 1 {
            prop_assert_eq!(containment_predicate(&t.swap_cols(0, t.cols() - 1)), expected);
        }
    }
}

#[test]
fn enumeration_counts_and_uniqueness() {
    for n in 2..=25 {
        for x in 1..n {
            for y in 1..n {
                let spec = MarginalSpec::new(vec![x, n - x], vec![y, n - y]).unwrap();
                let tables: Vec<_> = enumerate_tables(&spec, DEFAULT_BUDGET)
                    .map(Result::unwrap)
                    .collect();
                let expected = x.min(y) - 0.max(x + y - n) + 1;
                assert_eq!(tables.len() as i64, expected);
                let mut sorted = tables.clone();
                sorted.dedup();
                assert_eq!(sorted.len(), tables.len());
            }
        }
    }
    let spec = MarginalSpec::new(vec![3, 3, 2, 1], vec![4, 2, 2, 1]).unwrap();
    let tables: Vec<_> = enumerate_tables(&spec, DEFAULT_BUDGET)
        .map(Result::unwrap)
        .collect();
    let mut brute = 0;
    // independent count: every 4x4 matrix with cells bounded by marginals
    let bound = |i: usize, j: usize| spec.rows()[i].min(spec.cols()[j]);
    let mut cells = [0i64; 16];
    fn rec(
        pos: usize,
        cells: &mut [i64; 16],
        bound: &dyn Fn(usize, usize) -> i64,
        spec: &MarginalSpec,
        count: &mut usize,
    ) {
        if pos == 16 {
            let ok = (0..4)
                .all(|i| (0..4).map(|j| cells[i * 4 + j]).sum::<i64>() == spec.rows()[i])
                && (0..4).all(|j| (0..4).map(|i| cells[i * 4 + j]).sum::<i64>() == spec.cols()[j]);
            if ok {
                *count += 1;
            }
            return;
        }
        for v in 0..=bound(pos / 4, pos % 4) {
            cells[pos] = v;
            rec(pos + 1, cells, bound, spec, count);
        }
    }
    rec(0, &mut cells, &bound, &spec, &mut brute);
    assert_eq!(tables.len(), brute);
    for w in tables.windows(2) {
        assert!(w[0].counts() < w[1].counts());
    }
}

#[test]
fn indices_increase_with_q_at_fixed_marginals() {
    for n in 2..=30 {
        for x in 1..n {
            for y in 1..n {
                let spec = MarginalSpec::new(vec![x, n - x], vec![y, n - y]).unwrap();
                let mut tables: Vec<_> = enumerate_tables(&spec, DEFAULT_BUDGET)
                    .map(Result::unwrap)
                    .collect();
                tables.sort_by_key(ContingencyTable::q_statistic);
                for w in tables.windows(2) {
                    let (lo, hi) = (&w[0], &w[1]);
                    let (p, q) = (lo.pair_counts(), hi.pair_counts());
                    let strict = lo.q_statistic() < hi.q_statistic();
                    for kind in [IndexKind::Rand, IndexKind::AdjustedRand] {
                        match (index(kind, &p), index(kind, &q)) {
                            (Ok(a), Ok(b)) => {
                                let (a, b) = (a.as_exact().unwrap(), b.as_exact().unwrap());
                                assert!(
                                    if strict { a < b } else { a == b },
                                    "{kind} n={n} x={x} y={y}"
                                );
                            }
                            // two singletons on each side
                            (Err(_), Err(_)) => assert_eq!(n, 2),
                            other => panic!("{kind}: {other:?}"),
                        }
                    }
                    if let (Ok(a), Ok(b)) =
                        (index(IndexKind::Jaccard, &p), index(IndexKind::Jaccard, &q))
                    {
                        assert!(a.as_exact() <= b.as_exact());
                    }
                    if let (Some(a), Some(b)) =
                        (fowlkes_mallows_squared(&p), fowlkes_mallows_squared(&q))
                    {
                        assert!(a <= b);
                        assert_eq!(a == b, p.a == q.a);
                    }
                }
                let max_q = tables.last().unwrap().q_statistic();
                for t in &tables {
                    match max_adjusted_index(IndexKind::AdjustedRand, t, max_q) {
                        Ok(v) => assert_eq!(v.is_one(), t.q_statistic() == max_q),
                        Err(_) => assert_eq!(tables[0].q_statistic(), max_q),
                    }
                }
            }
        }
    }
}

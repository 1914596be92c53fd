use polyspace::cohomology::{
    balanced_presentation, betti, case_table_row, defect_basis, normal_via_cup, normal_via_cup_of_signature, CaseLabel,
};
use polyspace::combinatorics::signature;
use polyspace::enumeration::enumerate_chambers;
use polyspace::{LengthVector, Subset};

fn lv(v: &[i64]) -> LengthVector {
    LengthVector::from_integers(v).unwrap()
}

fn ordered_vectors(n: usize, max: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                let lo = v.last().copied().unwrap_or(1);
                (lo..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn sum_of(v: &[i64], j: Subset) -> i64 {
    j.iter().map(|i| v[i - 1]).sum()
}

/// Sets `T ⊆ {1..n-1}` with `2 * sum(T ∪ {n}) == total`.
fn medians_with_last(v: &[i64]) -> Vec<Subset> {
    let n = v.len();
    let total: i64 = v.iter().sum();
    Subset::all(n - 1).filter(|&t| 2 * sum_of(v, t.with(n)) == total).collect()
}

#[test]
fn defect_ranks_on_single_wall_strata() {
    let mut checked = 0;
    for n in 4..=6 {
        for v in ordered_vectors(n, 2 * n as i64) {
            let total: i64 = v.iter().sum();
            let walls = Subset::all(n).filter(|&j| 2 * sum_of(&v, j) == total).count();
            if walls != 2 {
                continue;
            }
            let Ok(d) = defect_basis(&lv(&v)) else {
                continue;
            };
            let medians = medians_with_last(&v);
            let mut expected = vec![0u64; n - 2];
            for t in &medians {
                if t.len() < expected.len() {
                    expected[t.len()] += 1;
                }
            }
            assert_eq!(d.ranks(), expected, "{v:?}");
            let listed: Vec<Subset> = d.by_degree.iter().flatten().copied().collect();
            assert!(listed.iter().all(|t| medians.contains(t)), "{v:?}");

            // Pushing l_n off the wall removes exactly the defect classes.
            let mut pushed: Vec<i64> = v.iter().map(|x| 2 * x).collect();
            pushed[n - 1] += 1;
            let before = betti(&lv(&v)).unwrap().b;
            let after = betti(&lv(&pushed)).unwrap().b;
            let drop: Vec<u64> = before.iter().zip(&after).map(|(b, a)| b - a).collect();
            assert_eq!(drop, expected, "{v:?}");
            checked += 1;
        }
    }
    assert!(checked > 100, "only {checked} single-wall strata");
}

#[test]
fn balanced_ranks_count_surviving_monomials() {
    for n in 4..=6 {
        for v in ordered_vectors(n, n as i64 + 3) {
            let total: i64 = v.iter().sum();
            let long_with_n = |t: Subset| 2 * sum_of(&v, t.with(n)) > total;
            let Ok(b) = balanced_presentation(&lv(&v)) else {
                assert!(long_with_n(Subset::EMPTY) || 2 * v[n - 1] == total);
                continue;
            };
            let mut ranks = vec![0u64; n - 2];
            for t in Subset::all(n - 1).filter(|&t| !long_with_n(t) && t.len() < n - 2) {
                ranks[t.len()] += 1;
            }
            assert_eq!(b.ranks, ranks, "{v:?}");
            let i = (1..n).find(|&i| long_with_n(Subset::singleton(i))).unwrap_or(n);
            assert_eq!(b.i_of_ell, i);
            assert_eq!(b.ranks[1] as usize, i - 1);
            for t in Subset::all(n - 1) {
                assert_eq!(b.kills(t), long_with_n(t), "{v:?} {t}");
            }
        }
    }
}

#[test]
fn cup_products_detect_normality_on_chambers() {
    for n in 5..=8 {
        let mut applicable = 0;
        for r in enumerate_chambers(n).unwrap() {
            let family = signature(&r.witness.ordered().0);
            match normal_via_cup_of_signature(&family) {
                Ok(answer) => {
                    applicable += 1;
                    assert_eq!(answer, r.normal, "{}", r.witness);
                }
                Err(e) => assert!(e.is_precondition()),
            }
        }
        assert!(applicable > 0);
    }
}

#[test]
fn case_table_examples() {
    let row = |v: &[i64]| case_table_row(&lv(v)).unwrap();
    assert_eq!(row(&[1, 1, 1, 1, 9]).label, CaseLabel::LastLong);
    assert_eq!(row(&[1, 1, 1, 1, 4]).label, CaseLabel::LastMedian);
    let r = row(&[1, 1, 3, 3, 3]);
    assert_eq!((r.label, r.b0, r.b1, r.b_top), (CaseLabel::PairLong, 2, Some(4), 2));
    assert_eq!(betti(&lv(&[1, 1, 3, 3, 3])).unwrap().b, vec![2, 4, 2]);
    assert_eq!(betti(&lv(&[1, 1, 1, 1, 1])).unwrap().b, vec![1, 8, 1]);
    for v in ordered_vectors(6, 8) {
        let r = row(&v);
        let b = betti(&lv(&v)).unwrap().b;
        assert_eq!((r.b0, r.b_top), (b[0], b[3]), "{v:?}");
        if let Some(b1) = r.b1 {
            assert_eq!(b1, b[1], "{v:?}");
        }
    }
}

#[test]
fn cup_product_examples() {
    assert!(normal_via_cup(&lv(&[1, 1, 1, 1, 3])).unwrap());
    assert!(!normal_via_cup(&lv(&[1, 1, 1, 1, 1])).unwrap());
    assert!(normal_via_cup(&lv(&[1, 1, 3, 3, 3])).unwrap_err().is_precondition());
}

//! Betti numbers of the planar polygon space, the balanced subalgebra as an
//! exterior algebra modulo a squarefree monomial ideal, and the duality defect.

use serde::{Deserialize, Serialize};

use crate::combinatorics::{signature, SignatureFamily, SubsetClass};
use crate::error::{Error, Result};
use crate::lengths::LengthVector;
use crate::subset::Subset;

/// `b_k = a_k + a_{n-3-k} + ã_k` for `k = 0..=n-3`, where `a_k` (`ã_k`) counts
/// short (median) subsets of size `k + 1` containing `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub b: Vec<u64>,
    pub a: Vec<u64>,
    #[serde(rename = "a_tilde")]
    pub a_tilde: Vec<u64>,
}

impl BettiTable {
    pub fn top(&self) -> usize {
        self.b.len() - 1
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.b.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }
}

fn require_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::Precondition(format!("need at least {min} links, got {n}")));
    }
    Ok(())
}

pub fn betti(lengths: &LengthVector) -> Result<BettiTable> {
    require_n(lengths.n(), 3)?;
    Ok(betti_of_signature(&signature(&lengths.ordered().0)))
}

pub fn betti_of_signature(sig: &SignatureFamily) -> BettiTable {
    let n = sig.n;
    let len = n - 2;
    let mut a = vec![0u64; len];
    let mut a_tilde = vec![0u64; len];
    for t in &sig.short_with_n {
        if t.len() < len {
            a[t.len()] += 1;
        }
    }
    for t in &sig.median_with_n {
        if t.len() < len {
            a_tilde[t.len()] += 1;
        }
    }
    let b = (0..len).map(|k| a[k] + a[len - 1 - k] + a_tilde[k]).collect();
    BettiTable { b, a, a_tilde }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseLabel {
    LastLong,
    LastMedian,
    PairLong,
    PairMedianBothLong,
    PairMedianOneMedian,
    PairMedianBothMedian,
    /// `{n}` and `{n-2, n-1}` short: `b_0 = b_{n-3} = 1`, `b_1` not fixed by the case.
    Main,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRow {
    pub label: CaseLabel,
    pub b0: u64,
    pub b1: Option<u64>,
    pub b_top: u64,
}

/// Which degenerate row of the low-degree Betti table applies.
pub fn case_table_row(lengths: &LengthVector) -> Result<CaseRow> {
    let n = lengths.n();
    if n <= 4 {
        return Err(Error::Precondition(format!("case table needs n > 4, got {n}")));
    }
    let sig = signature(&lengths.ordered().0);
    Ok(case_row_of_signature(&sig))
}

pub fn case_row_of_signature(sig: &SignatureFamily) -> CaseRow {
    let n = sig.n as u64;
    let m = sig.n - 1;
    let row = |label, b0, b1, b_top| CaseRow { label, b0, b1, b_top };
    match sig.class_with_n(Subset::EMPTY) {
        SubsetClass::Long => return row(CaseLabel::LastLong, 0, Some(0), 0),
        SubsetClass::Median => return row(CaseLabel::LastMedian, 1, Some(0), 0),
        SubsetClass::Short => {}
    }
    let pair = Subset::from_indices([m - 1, m]);
    match sig.class_of(pair) {
        SubsetClass::Short => row(CaseLabel::Main, 1, None, 1),
        SubsetClass::Long => row(CaseLabel::PairLong, 2, Some(2 * n - 6), 2),
        SubsetClass::Median => {
            let lower = sig.class_with_n(Subset::singleton(m - 1));
            let upper = sig.class_with_n(Subset::singleton(m));
            match (lower, upper) {
                (SubsetClass::Median, SubsetClass::Median) => row(CaseLabel::PairMedianBothMedian, 1, Some(2 * n - 4), 2),
                (SubsetClass::Median, _) | (_, SubsetClass::Median) => {
                    row(CaseLabel::PairMedianOneMedian, 1, Some(2 * n - 5), 2)
                }
                _ => row(CaseLabel::PairMedianBothLong, 1, Some(2 * n - 6), 2),
            }
        }
    }
}

/// `B*` as the exterior algebra on `X_1..X_{n-1}` modulo the monomials
/// `X_T` with `T ∪ {n}` long. Only the inclusion-minimal such `T` are stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedPresentation {
    pub n: usize,
    pub generators: Vec<Subset>,
    /// Smallest `i` with `X_i` in the ideal, or `n` if there is none.
    pub i_of_ell: usize,
    /// `rk B^k` for `k = 0..=n-3`.
    pub ranks: Vec<u64>,
}

impl BalancedPresentation {
    pub fn num_variables(&self) -> usize {
        self.n - 1
    }

    /// Whether the monomial `X_T` lies in the ideal.
    pub fn kills(&self, t: Subset) -> bool {
        self.generators.iter().any(|g| g.is_subset_of(t))
    }
}

pub fn balanced_presentation(lengths: &LengthVector) -> Result<BalancedPresentation> {
    require_n(lengths.n(), 3)?;
    balanced_of_signature(&signature(&lengths.ordered().0))
}

pub fn balanced_of_signature(sig: &SignatureFamily) -> Result<BalancedPresentation> {
    let n = sig.n;
    let m = n - 1;
    let last = sig.class_with_n(Subset::EMPTY);
    if last != SubsetClass::Short {
        return Err(Error::Precondition(format!("{{{n}}} is {}, must be short", last.as_str())));
    }
    let long = |t: Subset| sig.class_with_n(t) == SubsetClass::Long;
    let generators: Vec<Subset> =
        Subset::all(m).filter(|&t| long(t) && t.iter().all(|i| !long(t.without(i)))).collect();
    let i_of_ell = (1..=m).find(|&i| long(Subset::singleton(i))).unwrap_or(n);
    let mut ranks = vec![0u64; n - 2];
    for t in Subset::all(m).filter(|&t| !long(t)) {
        if t.len() < ranks.len() {
            ranks[t.len()] += 1;
        }
    }
    Ok(BalancedPresentation { n, generators, i_of_ell, ranks })
}

/// Monomial basis of the duality defect `K*`, by degree `0..=n-3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectBasis {
    pub by_degree: Vec<Vec<Subset>>,
}

impl DefectBasis {
    pub fn ranks(&self) -> Vec<u64> {
        self.by_degree.iter().map(|d| d.len() as u64).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.by_degree.iter().all(Vec::is_empty)
    }
}

fn require_connected_top(sig: &SignatureFamily) -> Result<()> {
    let n = sig.n;
    if n < 4 {
        return Err(Error::Precondition(format!("need at least 4 links, got {n}")));
    }
    if sig.class_with_n(Subset::EMPTY) != SubsetClass::Short {
        return Err(Error::Precondition(format!("{{{n}}} must be short")));
    }
    if sig.class_of(Subset::from_indices([n - 2, n - 1])) != SubsetClass::Short {
        return Err(Error::Precondition(format!("{{{}, {}}} must be short", n - 2, n - 1)));
    }
    Ok(())
}

pub fn defect_basis(lengths: &LengthVector) -> Result<DefectBasis> {
    require_n(lengths.n(), 4)?;
    defect_of_signature(&signature(&lengths.ordered().0))
}

pub fn defect_of_signature(sig: &SignatureFamily) -> Result<DefectBasis> {
    require_connected_top(sig)?;
    let mut by_degree = vec![Vec::new(); sig.n - 2];
    for &t in &sig.median_with_n {
        if t.len() < by_degree.len() {
            by_degree[t.len()].push(t);
        }
    }
    Ok(DefectBasis { by_degree })
}

/// Whether every `(n-3)`-fold product of degree-one classes vanishes.
///
/// Requires `b_0 = b_{n-3} = 1`. When `b_1` exceeds `rk B^1` there is a
/// degree-one class outside `B^1` and the answer is `false`; otherwise
/// `H^1 = B^1` and products of generators are checked against the ideal of
/// long and median sets.
pub fn normal_via_cup(lengths: &LengthVector) -> Result<bool> {
    require_n(lengths.n(), 4)?;
    normal_via_cup_of_signature(&signature(&lengths.ordered().0))
}

pub fn normal_via_cup_of_signature(sig: &SignatureFamily) -> Result<bool> {
    let n = sig.n;
    require_n(n, 4)?;
    let table = betti_of_signature(sig);
    if table.b[0] != 1 || table.b[n - 3] != 1 {
        return Err(Error::Precondition(format!(
            "need b_0 = b_{} = 1, got {} and {}",
            n - 3,
            table.b[0],
            table.b[n - 3]
        )));
    }
    let balanced = balanced_of_signature(sig)?;
    if table.b[1] > balanced.ranks[1] {
        return Ok(false);
    }
    Ok(Subset::all(n - 1)
        .filter(|t| t.len() == n - 3)
        .all(|t| sig.class_with_n(t) != SubsetClass::Short))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(v: &[i64]) -> LengthVector {
        LengthVector::from_integers(v).unwrap()
    }

    fn s(ix: &[usize]) -> Subset {
        Subset::from_indices(ix.iter().copied())
    }

    #[test]
    fn betti_examples() {
        assert_eq!(betti(&lv(&[1, 1, 1, 1, 1])).unwrap().b, vec![1, 8, 1]);
        assert_eq!(betti(&lv(&[1, 1, 3, 3, 3])).unwrap().b, vec![2, 4, 2]);
        assert_eq!(betti(&lv(&[1, 1, 1, 1, 6])).unwrap().b, vec![0, 0, 0]);
        let t = betti(&lv(&[1, 1, 1, 1, 1])).unwrap();
        assert_eq!(t.a, vec![1, 4, 0]);
        assert_eq!(t.a_tilde, vec![0, 0, 0]);
    }

    #[test]
    fn case_rows() {
        let r = case_table_row(&lv(&[1, 1, 1, 1, 4])).unwrap();
        assert_eq!((r.label, r.b0, r.b1, r.b_top), (CaseLabel::LastMedian, 1, Some(0), 0));
        let r = case_table_row(&lv(&[1, 1, 3, 3, 3])).unwrap();
        assert_eq!((r.label, r.b0, r.b1, r.b_top), (CaseLabel::PairLong, 2, Some(4), 2));
        assert_eq!(case_table_row(&lv(&[1, 1, 1, 1, 3])).unwrap().label, CaseLabel::Main);
        assert!(case_table_row(&lv(&[1, 1, 1, 2])).unwrap_err().is_precondition());
    }

    #[test]
    fn balanced_examples() {
        let p = balanced_presentation(&lv(&[1, 1, 1, 1, 1])).unwrap();
        let pairs: Vec<Subset> = Subset::all(4).filter(|t| t.len() == 2).collect();
        assert_eq!(p.generators, pairs);
        assert_eq!(p.i_of_ell, 5);
        assert_eq!(p.ranks, vec![1, 4, 0]);

        let p = balanced_presentation(&lv(&[1, 1, 1, 2])).unwrap();
        assert_eq!(p.generators, vec![s(&[1]), s(&[2]), s(&[3])]);
        assert_eq!(p.i_of_ell, 1);
        assert_eq!(p.ranks, vec![1, 0]);

        let p = balanced_presentation(&lv(&[1, 1, 1, 1, 3])).unwrap();
        assert_eq!(p.generators, vec![s(&[1]), s(&[2]), s(&[3]), s(&[4])]);
        assert_eq!(p.i_of_ell, 1);

        assert!(balanced_presentation(&lv(&[1, 1, 1, 3])).unwrap_err().is_precondition());
        assert!(balanced_presentation(&lv(&[1, 1, 1, 4])).unwrap_err().is_precondition());
    }

    #[test]
    fn defect_examples() {
        assert!(defect_basis(&lv(&[1, 1, 1, 1, 1])).unwrap().is_empty());
        let d = defect_basis(&lv(&[1, 1, 1, 1, 2])).unwrap();
        assert_eq!(d.by_degree[1], vec![s(&[1]), s(&[2]), s(&[3]), s(&[4])]);
        let d = defect_basis(&lv(&[1, 1, 1, 1, 1, 1])).unwrap();
        assert_eq!(d.by_degree[2].len(), 10);
        assert!(d.by_degree[2].iter().all(|t| t.len() == 2 && t.max_index() <= Some(5)));
        assert!(defect_basis(&lv(&[1, 1, 3, 3, 3])).unwrap_err().is_precondition());
    }

    #[test]
    fn cup_products_detect_normality() {
        assert!(!normal_via_cup(&lv(&[1, 1, 1, 1, 1])).unwrap());
        assert!(!normal_via_cup(&lv(&[1, 1, 2, 2, 2, 3])).unwrap());
        assert!(normal_via_cup(&lv(&[1, 1, 1, 1, 3])).unwrap());
        assert!(normal_via_cup(&lv(&[1, 1, 3, 3, 3])).unwrap_err().is_precondition());
        assert!(normal_via_cup(&lv(&[1, 1, 1, 2, 4])).unwrap());
    }
}

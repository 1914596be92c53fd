//! Short, median and long subsets; stratum signatures; normality.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lengths::{LengthVector, OrderedLengths, Permutation};
use crate::subset::Subset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubsetClass {
    Short,
    Median,
    Long,
}

impl SubsetClass {
    /// From the comparison of the inside sum against the outside sum.
    pub(crate) fn from_ordering(inside_vs_outside: Ordering) -> Self {
        match inside_vs_outside {
            Ordering::Less => SubsetClass::Short,
            Ordering::Equal => SubsetClass::Median,
            Ordering::Greater => SubsetClass::Long,
        }
    }

    /// Class of the complementary subset.
    pub fn dual(self) -> Self {
        match self {
            SubsetClass::Short => SubsetClass::Long,
            SubsetClass::Median => SubsetClass::Median,
            SubsetClass::Long => SubsetClass::Short,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SubsetClass::Short => "short",
            SubsetClass::Median => "median",
            SubsetClass::Long => "long",
        }
    }
}

pub fn classify_subset(lengths: &LengthVector, subset: Subset) -> Result<SubsetClass> {
    lengths.classify(subset)
}

/// The families `S^0` (short subsets avoiding `n`), `S^1` (short subsets
/// containing `n`) and the median subsets containing `n`, all stored as
/// bitsets over `{1, ..., n-1}`; membership of `n` is implicit for the last two.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignatureFamily {
    pub n: usize,
    pub short_without_n: Vec<Subset>,
    pub short_with_n: Vec<Subset>,
    pub median_with_n: Vec<Subset>,
    pub generic: bool,
}

impl SignatureFamily {
    /// Class of `T ∪ {n}` for `T ⊆ {1, ..., n-1}`.
    pub fn class_with_n(&self, t: Subset) -> SubsetClass {
        if self.short_with_n.binary_search(&t).is_ok() {
            SubsetClass::Short
        } else if self.median_with_n.binary_search(&t).is_ok() {
            SubsetClass::Median
        } else {
            SubsetClass::Long
        }
    }

    /// Class of an arbitrary subset of `{1, ..., n}`.
    pub fn class_of(&self, j: Subset) -> SubsetClass {
        let last = Subset::singleton(self.n);
        if j.intersection(last).is_empty() {
            self.class_with_n(j.complement(self.n).without(self.n)).dual()
        } else {
            self.class_with_n(j.without(self.n))
        }
    }

    /// Members of the family for `nu = 0` (`S^0`) or `nu = 1` (`S^1`).
    pub fn family(&self, nu: u8) -> &[Subset] {
        if nu == 0 {
            &self.short_without_n
        } else {
            &self.short_with_n
        }
    }
}

/// Classifies all `2^n` subsets of an ordered vector.
pub fn signature(lengths: &OrderedLengths) -> SignatureFamily {
    let n = lengths.n();
    let classes = lengths.classify_all();
    let m = n - 1;
    let last = 1u32 << m;
    let mut short_without_n = Vec::new();
    let mut short_with_n = Vec::new();
    let mut median_with_n = Vec::new();
    for t in Subset::all(m) {
        if classes[t.bits() as usize] == SubsetClass::Short {
            short_without_n.push(t);
        }
        match classes[(t.bits() | last) as usize] {
            SubsetClass::Short => short_with_n.push(t),
            SubsetClass::Median => median_with_n.push(t),
            SubsetClass::Long => {}
        }
    }
    let generic = median_with_n.is_empty();
    SignatureFamily { n, short_without_n, short_with_n, median_with_n, generic }
}

/// Sorts `lengths` and returns the signature together with the sorting permutation.
pub fn signature_of(lengths: &LengthVector) -> (SignatureFamily, Permutation) {
    let (ordered, perm) = lengths.ordered();
    (signature(&ordered), perm)
}

/// Whether two ordered vectors have the same short/median/long subsets.
pub fn same_stratum(a: &OrderedLengths, b: &OrderedLengths) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch(a.n(), b.n()));
    }
    Ok(signature(a) == signature(b))
}

/// Normality from the definition: every long 3-element subset shares a
/// common index. Works on any labeling.
pub fn is_normal_by_triples(lengths: &LengthVector) -> bool {
    let n = lengths.n();
    let mut common = Subset::full(n);
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                let triple = Subset::from_indices([a, b, c]);
                if lengths.classify_unchecked(triple) == SubsetClass::Long {
                    common = common.intersection(triple);
                }
            }
        }
    }
    !common.is_empty()
}

/// Ordered criterion: `{n-3, n-2, n-1}` (indices below 1 dropped) is short or median.
pub fn is_normal_ordered(lengths: &OrderedLengths) -> bool {
    let n = lengths.n();
    if n < 3 {
        return true;
    }
    let probe = Subset::from_indices((n.saturating_sub(3).max(1))..n);
    lengths.classify_unchecked(probe) != SubsetClass::Long
}

/// Whether `lengths` is normal.
///
/// For `n >= 4` the triple-intersection definition is evaluated and checked
/// against the ordered criterion. For `n = 3` the ordered criterion with the
/// non-existent index 0 dropped is used, i.e. `{1, 2}` must be short or
/// median; with this convention one of the two triangle chambers is normal.
pub fn is_normal(lengths: &LengthVector) -> bool {
    let (ordered, _) = lengths.ordered();
    let shortcut = is_normal_ordered(&ordered);
    if lengths.n() >= 4 {
        let by_definition = is_normal_by_triples(lengths);
        assert_eq!(by_definition, shortcut, "normality criteria disagree for {lengths}");
    }
    shortcut
}

/// Tests `sigma(S^nu(a)) = S^nu(b)` for a permutation fixing `n`.
pub fn reduce_permutation(a: &OrderedLengths, b: &OrderedLengths, sigma: &Permutation, nu: u8) -> Result<bool> {
    let n = a.n();
    if b.n() != n || sigma.n() != n {
        return Err(Error::SizeMismatch(n, if b.n() != n { b.n() } else { sigma.n() }));
    }
    if !sigma.fixes_last() {
        return Err(Error::PermutationMovesLast(n));
    }
    if nu > 1 {
        return Err(Error::Precondition(format!("nu must be 0 or 1, got {nu}")));
    }
    let sa = signature(a);
    let sb = signature(b);
    let mut image: Vec<Subset> = sa.family(nu).iter().map(|&t| sigma.apply_subset(t)).collect();
    image.sort();
    Ok(image == sb.family(nu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(v: &[i64]) -> LengthVector {
        LengthVector::from_integers(v).unwrap()
    }

    fn ord(v: &[i64]) -> OrderedLengths {
        OrderedLengths::from_integers(v).unwrap()
    }

    fn s(ix: &[usize]) -> Subset {
        Subset::from_indices(ix.iter().copied())
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_subset(&lv(&[1, 1, 1, 1, 1]), s(&[1, 2, 5])).unwrap(), SubsetClass::Long);
        assert_eq!(classify_subset(&lv(&[1, 1, 1, 1]), s(&[1, 4])).unwrap(), SubsetClass::Median);
        assert_eq!(classify_subset(&lv(&[1, 2, 2, 2, 3]), s(&[5])).unwrap(), SubsetClass::Short);
        assert!(matches!(
            classify_subset(&lv(&[1, 1, 1]), s(&[4])),
            Err(Error::IndexOutOfRange { index: 4, n: 3 })
        ));
    }

    #[test]
    fn pentagon_signature() {
        let sig = signature(&ord(&[1, 1, 1, 1, 1]));
        let expected: Vec<Subset> = vec![s(&[]), s(&[1]), s(&[2]), s(&[3]), s(&[4])];
        let mut got = sig.short_with_n.clone();
        got.sort();
        let mut exp = expected;
        exp.sort();
        assert_eq!(got, exp);
        assert!(sig.median_with_n.is_empty());
        assert!(sig.generic);
    }

    #[test]
    fn wall_signature_has_medians() {
        let sig = signature(&ord(&[1, 1, 1, 1, 2]));
        assert_eq!(sig.median_with_n, vec![s(&[1]), s(&[2]), s(&[3]), s(&[4])]);
        assert!(!sig.generic);
    }

    #[test]
    fn quadrilateral_pair_differs() {
        let a = signature(&ord(&[1, 1, 1, 2]));
        let b = signature(&ord(&[1, 2, 2, 2]));
        assert_ne!(a.short_with_n, b.short_with_n);
        assert!(!same_stratum(&ord(&[1, 1, 1, 2]), &ord(&[1, 2, 2, 2])).unwrap());
    }

    #[test]
    fn same_stratum_examples() {
        assert!(same_stratum(&ord(&[1, 1, 1, 1, 3]), &ord(&[2, 2, 2, 2, 5])).unwrap());
        let p = ord(&[1, 2, 3, 4, 4]);
        assert!(same_stratum(&p, &p).unwrap());
        assert!(matches!(same_stratum(&ord(&[1, 1, 1]), &ord(&[1, 1, 1, 1])), Err(Error::SizeMismatch(3, 4))));
    }

    #[test]
    fn normality_examples() {
        assert!(!is_normal(&lv(&[1, 1, 1, 1, 1])));
        assert!(!is_normal(&lv(&[1, 1, 2, 2, 2, 3])));
        assert!(is_normal(&lv(&[1, 1, 1, 1, 3])));
        // Unordered input is handled through sorting.
        assert!(is_normal(&lv(&[3, 1, 1, 1, 1])));
    }

    #[test]
    fn normality_of_small_n() {
        assert!(!is_normal(&lv(&[1, 1, 1])));
        assert!(is_normal(&lv(&[1, 1, 3])));
        assert!(is_normal_by_triples(&lv(&[1, 1, 1])));
        // n = 4: only the chamber with {1,2,3} short is normal.
        assert!(!is_normal(&lv(&[1, 1, 1, 2])));
        assert!(!is_normal(&lv(&[1, 2, 2, 2])));
        assert!(is_normal(&lv(&[1, 1, 1, 5])));
    }

    #[test]
    fn reduce_permutation_examples() {
        let a = ord(&[1, 1, 2, 2, 3]);
        let id = Permutation::identity(5);
        assert!(reduce_permutation(&a, &a, &id, 0).unwrap());
        assert!(reduce_permutation(&a, &a, &id, 1).unwrap());
        let swap = Permutation::new(vec![2, 1, 3, 4, 5]).unwrap();
        for nu in 0..=1 {
            assert_eq!(
                reduce_permutation(&a, &a, &swap, nu).unwrap(),
                reduce_permutation(&a, &a, &id, nu).unwrap()
            );
        }
        let moves_last = Permutation::new(vec![5, 2, 3, 4, 1]).unwrap();
        assert!(matches!(reduce_permutation(&a, &a, &moves_last, 0), Err(Error::PermutationMovesLast(5))));
    }

    #[test]
    fn class_of_matches_direct_classification() {
        let l = ord(&[1, 2, 2, 3, 5, 6]);
        let sig = signature(&l);
        for j in Subset::all(6) {
            assert_eq!(sig.class_of(j), l.classify(j).unwrap(), "{j}");
        }
    }
}

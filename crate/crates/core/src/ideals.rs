//! Squarefree monomial ideals up to relabeling of variables, and recovery of
//! a chamber from the balanced subalgebra.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::{balanced_of_signature, betti_of_signature, BalancedPresentation, DefectBasis};
use crate::combinatorics::{signature, SignatureFamily, SubsetClass};
use crate::enumeration::ChamberRecord;
use crate::error::{Error, Result};
use crate::subset::Subset;

/// Ideal in `k[X_1..X_m]` generated by squarefree monomials, stored as the
/// inclusion-minimal generator bitsets in increasing numeric order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialIdeal {
    pub m: usize,
    pub generators: Vec<Subset>,
    /// Whether every `X_r^2` is in the ideal as well (exterior-algebra quotients).
    pub squares_included: bool,
}

impl MonomialIdeal {
    /// Keeps only the minimal generators.
    pub fn new(m: usize, generators: Vec<Subset>, squares_included: bool) -> Result<Self> {
        if m > 31 {
            return Err(Error::UnsupportedSize(m));
        }
        let full = Subset::full(m);
        if let Some(g) = generators.iter().find(|g| g.is_empty() || !g.is_subset_of(full)) {
            return Err(Error::Malformed(format!("generator {g} is empty or uses a variable beyond {m}")));
        }
        let mut gens: Vec<Subset> = generators
            .iter()
            .copied()
            .filter(|g| !generators.iter().any(|h| h != g && h.is_subset_of(*g)))
            .collect();
        gens.sort();
        gens.dedup();
        Ok(MonomialIdeal { m, generators: gens, squares_included })
    }

    /// No generator is a single variable.
    pub fn is_variable_free(&self) -> bool {
        self.generators.iter().all(|g| g.len() > 1)
    }

    pub fn contains_monomial(&self, t: Subset) -> bool {
        self.generators.iter().any(|g| g.is_subset_of(t))
    }

    pub fn relabel(&self, theta: &VariableBijection) -> MonomialIdeal {
        let mut gens: Vec<Subset> = self.generators.iter().map(|&g| theta.apply_subset(g)).collect();
        gens.sort();
        MonomialIdeal { m: self.m, generators: gens, squares_included: self.squares_included }
    }

    /// Number of generators of each size `0..=m` containing variable `v`.
    fn profile(&self, v: usize) -> Vec<u32> {
        let mut p = vec![0u32; self.m + 1];
        for g in self.generators.iter().filter(|g| g.contains(v)) {
            p[g.len()] += 1;
        }
        p
    }

    /// Drops variables that are themselves generators, renumbering the rest in
    /// order. Returns the number of dropped variables and the reduced ideal.
    pub fn strip_variables(&self) -> (usize, MonomialIdeal) {
        let killed: Subset =
            self.generators.iter().filter(|g| g.len() == 1).fold(Subset::EMPTY, |acc, &g| acc.union(g));
        let keep: Vec<usize> = (1..=self.m).filter(|&i| !killed.contains(i)).collect();
        let rename = |g: Subset| Subset::from_indices(g.iter().map(|i| keep.iter().position(|&k| k == i).unwrap() + 1));
        let gens = self.generators.iter().filter(|g| g.len() > 1).map(|&g| rename(g)).collect();
        (
            killed.len(),
            MonomialIdeal { m: keep.len(), generators: gens, squares_included: self.squares_included },
        )
    }
}

/// A bijection of `{1..m}`, `theta(i) = image[i - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VariableBijection {
    pub image: Vec<usize>,
}

impl VariableBijection {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let m = image.len();
        let mut seen = vec![false; m + 1];
        for &i in &image {
            if i == 0 || i > m || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Malformed(format!("not a bijection of 1..={m}")));
            }
        }
        Ok(VariableBijection { image })
    }

    pub fn identity(m: usize) -> Self {
        VariableBijection { image: (1..=m).collect() }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn apply_subset(&self, s: Subset) -> Subset {
        Subset::from_indices(s.iter().map(|i| self.apply(i)))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (k, &i) in self.image.iter().enumerate() {
            inv[i - 1] = k + 1;
        }
        VariableBijection { image: inv }
    }
}

fn require_variable_free(ideal: &MonomialIdeal) -> Result<()> {
    if !ideal.is_variable_free() {
        return Err(Error::Precondition("ideal contains a variable; strip killed variables first".into()));
    }
    Ok(())
}

/// Searches for `theta` with `theta(gens(a)) = gens(b)`.
pub fn find_isomorphism(a: &MonomialIdeal, b: &MonomialIdeal) -> Result<Option<VariableBijection>> {
    require_variable_free(a)?;
    require_variable_free(b)?;
    if a.m != b.m || a.generators.len() != b.generators.len() {
        return Ok(None);
    }
    let sizes = |i: &MonomialIdeal| {
        let mut s: Vec<usize> = i.generators.iter().map(|g| g.len()).collect();
        s.sort_unstable();
        s
    };
    if sizes(a) != sizes(b) {
        return Ok(None);
    }
    let m = a.m;
    let pa: Vec<Vec<u32>> = (1..=m).map(|v| a.profile(v)).collect();
    let pb: Vec<Vec<u32>> = (1..=m).map(|v| b.profile(v)).collect();
    let mut sorted_a = pa.clone();
    let mut sorted_b = pb.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return Ok(None);
    }
    let targets: HashSet<u32> = b.generators.iter().map(|g| g.0).collect();
    let sources: HashSet<u32> = a.generators.iter().map(|g| g.0).collect();
    let mut image = vec![0usize; m + 1];
    let mut used = vec![false; m + 1];

    // Generators of `a` grouped by their largest variable.
    let by_max = |ideal: &MonomialIdeal| {
        let mut out = vec![Vec::new(); m + 1];
        for g in &ideal.generators {
            out[g.max_index().unwrap()].push(*g);
        }
        out
    };
    let a_by_max = by_max(a);

    #[allow(clippy::too_many_arguments)]
    fn go(
        v: usize,
        m: usize,
        pa: &[Vec<u32>],
        pb: &[Vec<u32>],
        a_by_max: &[Vec<Subset>],
        b_gens: &[Subset],
        sources: &HashSet<u32>,
        targets: &HashSet<u32>,
        image: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if v > m {
            return true;
        }
        for w in 1..=m {
            if used[w] || pa[v - 1] != pb[w - 1] {
                continue;
            }
            image[v] = w;
            used[w] = true;
            let forward = a_by_max[v]
                .iter()
                .all(|g| targets.contains(&Subset::from_indices(g.iter().map(|i| image[i])).0));
            // Generators of `b` whose variables are all hit must come from `a`.
            let backward = forward
                && b_gens.iter().filter(|g| g.contains(w) && g.iter().all(|j| used[j])).all(|g| {
                    let pre = Subset::from_indices(g.iter().map(|j| (1..=v).find(|&i| image[i] == j).unwrap()));
                    sources.contains(&pre.0)
                });
            if backward && go(v + 1, m, pa, pb, a_by_max, b_gens, sources, targets, image, used) {
                return true;
            }
            used[w] = false;
        }
        false
    }

    if go(1, m, &pa, &pb, &a_by_max, &b.generators, &sources, &targets, &mut image, &mut used) {
        Ok(Some(VariableBijection { image: image[1..].to_vec() }))
    } else {
        Ok(None)
    }
}

/// Canonical representative under relabeling, with the bijection taking the
/// input to it.
///
/// Variables are first grouped by their profile (generator counts by size);
/// groups are numbered in decreasing profile order. Among labelings that
/// respect the groups, the one minimizing `(C_1, C_2, ..., C_m)` is chosen,
/// where `C_k` is the sorted list of generator images whose largest label is
/// `k`.
pub fn canonical_form(ideal: &MonomialIdeal) -> Result<(MonomialIdeal, VariableBijection)> {
    require_variable_free(ideal)?;
    let m = ideal.m;
    if m == 0 {
        return Ok((ideal.clone(), VariableBijection::identity(0)));
    }
    let profiles: Vec<Vec<u32>> = (1..=m).map(|v| ideal.profile(v)).collect();
    let mut order: Vec<usize> = (1..=m).collect();
    order.sort_by(|&x, &y| profiles[y - 1].cmp(&profiles[x - 1]).then(x.cmp(&y)));
    // cell_of_label[k] = range of positions in `order` sharing the profile of label k.
    let mut cell_end = vec![0usize; m];
    let mut start = 0;
    while start < m {
        let mut end = start;
        while end < m && profiles[order[end] - 1] == profiles[order[start] - 1] {
            end += 1;
        }
        for e in cell_end.iter_mut().take(end).skip(start) {
            *e = end;
        }
        start = end;
    }
    let cell_start: Vec<usize> = (0..m)
        .map(|k| {
            let mut s = k;
            while s > 0 && cell_end[s - 1] == cell_end[k] {
                s -= 1;
            }
            s
        })
        .collect();

    struct State<'a> {
        m: usize,
        ideal: &'a MonomialIdeal,
        order: &'a [usize],
        cell_start: &'a [usize],
        cell_end: &'a [usize],
        label: Vec<usize>,
        assigned: Subset,
        code: Vec<Vec<u32>>,
        best: Option<(Vec<Vec<u32>>, Vec<usize>)>,
    }

    impl State<'_> {
        fn layer(&self, v: usize) -> Vec<u32> {
            let mut c: Vec<u32> = self
                .ideal
                .generators
                .iter()
                .filter(|g| g.contains(v) && g.is_subset_of(self.assigned))
                .map(|g| g.iter().fold(0u32, |acc, i| acc | 1 << (self.label[i] - 1)))
                .collect();
            c.sort_unstable();
            c
        }

        fn go(&mut self, k: usize) {
            if k == self.m {
                self.best = Some((self.code.clone(), self.label.clone()));
                return;
            }
            for pos in self.cell_start[k]..self.cell_end[k] {
                let v = self.order[pos];
                if self.assigned.contains(v) {
                    continue;
                }
                self.label[v] = k + 1;
                self.assigned = self.assigned.with(v);
                let layer = self.layer(v);
                let cmp = match &self.best {
                    Some((best, _)) => self.code[..].cmp(&best[..k]).then_with(|| layer.cmp(&best[k])),
                    None => std::cmp::Ordering::Less,
                };
                if cmp != std::cmp::Ordering::Greater {
                    self.code.push(layer);
                    self.go(k + 1);
                    self.code.pop();
                }
                self.assigned = self.assigned.without(v);
                self.label[v] = 0;
            }
        }
    }

    let mut state = State {
        m,
        ideal,
        order: &order,
        cell_start: &cell_start,
        cell_end: &cell_end,
        label: vec![0; m + 1],
        assigned: Subset::EMPTY,
        code: Vec::new(),
        best: None,
    };
    state.go(0);
    let (_, label) = state.best.expect("at least one labeling");
    let theta = VariableBijection { image: label[1..].to_vec() };
    Ok((ideal.relabel(&theta), theta))
}

/// The balanced ideal over `X_1..X_{i(ℓ)-1}` after removing killed variables.
pub fn stripped_balanced_ideal(b: &BalancedPresentation) -> (usize, MonomialIdeal) {
    let full = MonomialIdeal { m: b.num_variables(), generators: b.generators.clone(), squares_included: true };
    full.strip_variables()
}

/// Rebuilds the short/median/long data of the sets containing `n` from the
/// balanced ideal (and the defect basis when given).
///
/// The variables of `b` may carry any labels. They are renumbered so that
/// variables lying in more surviving monomials come first; for a presentation
/// of an ordered vector this reproduces the ordering up to symmetries of the
/// families. `n` stays the distinguished last index.
pub fn recover_signature(b: &BalancedPresentation, d: Option<&DefectBasis>) -> Result<SignatureFamily> {
    let n = b.n;
    let m = n - 1;
    let medians: Vec<Subset> = d.map(|d| d.by_degree.iter().flatten().copied().collect()).unwrap_or_default();
    if let Some(t) = medians.iter().find(|&&t| b.kills(t) || t.max_index().is_some_and(|i| i > m)) {
        return Err(Error::Malformed(format!("defect monomial {t} is not a surviving monomial")));
    }
    let median_set: HashSet<Subset> = medians.iter().copied().collect();
    let alive = |t: Subset| !b.kills(t);
    let short = |t: Subset| alive(t) && !median_set.contains(&t);
    let key = |v: usize| {
        let members = Subset::all(m).filter(|t| t.contains(v));
        let (mut s, mut a) = (0usize, 0usize);
        for t in members {
            s += short(t) as usize;
            a += alive(t) as usize;
        }
        (s, a)
    };
    let mut order: Vec<usize> = (1..=m).collect();
    order.sort_by(|&x, &y| key(y).cmp(&key(x)).then(x.cmp(&y)));
    let mut image = vec![0; m];
    for (new, &old) in order.iter().enumerate() {
        image[old - 1] = new + 1;
    }
    let theta = VariableBijection { image };
    let inverse = theta.inverse();
    let class = |t: Subset| {
        let old = inverse.apply_subset(t);
        if short(old) {
            SubsetClass::Short
        } else if alive(old) {
            SubsetClass::Median
        } else {
            SubsetClass::Long
        }
    };
    let classes: Vec<SubsetClass> = Subset::all(m).map(class).collect();
    for t in Subset::all(m) {
        let c = classes[t.0 as usize];
        if t.lower_neighbors().any(|r| classes[r.0 as usize] > c) {
            return Err(Error::Malformed(format!("surviving monomials are not closed under dominance at {t}")));
        }
        let comp = t.complement(m);
        if c == SubsetClass::Short && classes[comp.0 as usize] == SubsetClass::Short {
            return Err(Error::Malformed(format!("{t} and its complement are both short with {n}")));
        }
    }
    let mut short_without_n = Vec::new();
    let mut short_with_n = Vec::new();
    let mut median_with_n = Vec::new();
    for t in Subset::all(m) {
        if classes[t.complement(m).0 as usize] == SubsetClass::Long {
            short_without_n.push(t);
        }
        match classes[t.0 as usize] {
            SubsetClass::Short => short_with_n.push(t),
            SubsetClass::Median => median_with_n.push(t),
            SubsetClass::Long => {}
        }
    }
    let generic = median_with_n.is_empty();
    Ok(SignatureFamily { n, short_without_n, short_with_n, median_with_n, generic })
}

/// Invariant of a chamber seen through its cohomology: the Betti numbers and
/// the balanced ideal up to relabeling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BalancedKey {
    /// `{n}` is long or median: no balanced presentation.
    Degenerate { betti: Vec<u64> },
    Ring { betti: Vec<u64>, degree_one_rank: usize, ideal: MonomialIdeal },
}

pub fn balanced_key(family: &SignatureFamily) -> Result<BalancedKey> {
    let betti = betti_of_signature(family).b;
    match balanced_of_signature(family) {
        Ok(b) => {
            let (_, stripped) = stripped_balanced_ideal(&b);
            let (ideal, _) = canonical_form(&stripped)?;
            Ok(BalancedKey::Ring { betti, degree_one_rank: b.i_of_ell - 1, ideal })
        }
        Err(e) if e.is_precondition() => Ok(BalancedKey::Degenerate { betti }),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub n: usize,
    pub chambers: usize,
    pub distinct_keys: usize,
    /// Pairs of record indices with equal keys.
    pub collisions: Vec<(usize, usize)>,
    /// Records whose signature is not reproduced by `recover_signature`.
    pub roundtrip_failures: Vec<usize>,
}

/// Checks that distinct chambers have distinct balanced keys, and that the
/// balanced presentation of every chamber reconstructs its signature.
pub fn audit_balanced_keys(n: usize, records: &[ChamberRecord]) -> Result<AuditReport> {
    if let Some(r) = records.iter().find(|r| r.signature.n != n) {
        return Err(Error::SizeMismatch(n, r.signature.n));
    }
    let per_record: Vec<Result<(BalancedKey, bool)>> = records
        .par_iter()
        .map(|r| {
            let family = signature(&r.witness.ordered().0);
            let key = balanced_key(&family)?;
            let roundtrip = match balanced_of_signature(&family) {
                Ok(b) => {
                    let scrambled = scramble(&b);
                    recover_signature(&scrambled, None)? == family
                }
                Err(_) => true,
            };
            Ok((key, roundtrip))
        })
        .collect();
    let mut first: HashMap<BalancedKey, usize> = HashMap::new();
    let mut collisions = Vec::new();
    let mut roundtrip_failures = Vec::new();
    for (k, item) in per_record.into_iter().enumerate() {
        let (key, ok) = item?;
        if !ok {
            roundtrip_failures.push(k);
        }
        match first.get(&key) {
            Some(&j) => collisions.push((j, k)),
            None => {
                first.insert(key, k);
            }
        }
    }
    Ok(AuditReport { n, chambers: records.len(), distinct_keys: first.len(), collisions, roundtrip_failures })
}

/// Reverses the variable order, so recovery cannot rely on the labels it is given.
fn scramble(b: &BalancedPresentation) -> BalancedPresentation {
    let m = b.num_variables();
    let theta = VariableBijection { image: (1..=m).rev().collect() };
    let mut generators: Vec<Subset> = b.generators.iter().map(|&g| theta.apply_subset(g)).collect();
    generators.sort();
    BalancedPresentation { generators, ..b.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{balanced_presentation, defect_basis};
    use crate::lengths::LengthVector;

    fn ideal(m: usize, gens: &[&[usize]]) -> MonomialIdeal {
        MonomialIdeal::new(m, gens.iter().map(|g| Subset::from_indices(g.iter().copied())).collect(), false).unwrap()
    }

    fn lv(v: &[i64]) -> LengthVector {
        LengthVector::from_integers(v).unwrap()
    }

    #[test]
    fn relabeling_example() {
        let a = ideal(3, &[&[1, 2]]);
        let b = ideal(3, &[&[2, 3]]);
        let theta = find_isomorphism(&a, &b).unwrap().unwrap();
        assert_eq!(theta.image, vec![2, 3, 1]);
        assert_eq!(a.relabel(&theta), b);
        assert_eq!(find_isomorphism(&a, &ideal(3, &[&[1, 2, 3]])).unwrap(), None);
    }

    #[test]
    fn symmetric_ideal_accepts_identity() {
        let pairs: Vec<Vec<usize>> = (1..=4).flat_map(|i| (i + 1..=4).map(move |j| vec![i, j])).collect();
        let refs: Vec<&[usize]> = pairs.iter().map(|p| p.as_slice()).collect();
        let a = ideal(4, &refs);
        assert!(find_isomorphism(&a, &a).unwrap().is_some());
        let (c, _) = canonical_form(&a).unwrap();
        assert_eq!(c, a);
    }

    #[test]
    fn canonical_form_examples() {
        let (c, theta) = canonical_form(&ideal(3, &[&[2, 3]])).unwrap();
        assert_eq!(c, ideal(3, &[&[1, 2]]));
        assert_eq!(ideal(3, &[&[2, 3]]).relabel(&theta), c);
        assert_eq!(canonical_form(&c).unwrap().0, c);
        assert!(canonical_form(&ideal(2, &[&[1]])).unwrap_err().is_precondition());
    }

    #[test]
    fn minimal_generators_only() {
        let a = ideal(4, &[&[1, 2], &[1, 2, 3], &[3, 4]]);
        assert_eq!(a.generators.len(), 2);
        assert!(MonomialIdeal::new(2, vec![Subset::EMPTY], false).is_err());
    }

    #[test]
    fn recover_examples() {
        for v in [&[1, 1, 1, 1, 1][..], &[1, 1, 1, 1, 3], &[1, 2, 3, 4, 5, 6]] {
            let l = lv(v);
            let b = balanced_presentation(&l).unwrap();
            let fam = recover_signature(&scramble(&b), None).unwrap();
            assert_eq!(fam, signature(&l.ordered().0), "{l}");
        }
        let wall = lv(&[1, 1, 1, 1, 2]);
        let b = balanced_presentation(&wall).unwrap();
        let d = defect_basis(&wall).unwrap();
        let fam = recover_signature(&b, Some(&d)).unwrap();
        assert_eq!(fam, signature(&wall.ordered().0));
        assert!(!fam.generic);
        let pentagon = recover_signature(&balanced_presentation(&lv(&[1, 1, 1, 1, 1])).unwrap(), None).unwrap();
        let other = recover_signature(&balanced_presentation(&lv(&[1, 1, 1, 1, 3])).unwrap(), None).unwrap();
        assert_ne!(pentagon, other);
    }

    #[test]
    fn malformed_ideal_is_rejected() {
        // X_1 X_2 killed while X_3 X_4 survives is fine after relabeling, but
        // killing X_1 X_2 and X_3 X_4 while X_1 X_3 and X_2 X_4 survive is not shifted.
        let b = BalancedPresentation {
            n: 5,
            generators: vec![Subset::from_indices([1, 2]), Subset::from_indices([3, 4])],
            i_of_ell: 5,
            ranks: vec![],
        };
        assert!(matches!(recover_signature(&b, None), Err(Error::Malformed(_))));
    }
}

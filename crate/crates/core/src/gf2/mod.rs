//! Mod-2 cohomology of the reflection quotient and of the spatial polygon
//! space from their presentation by `R, V_1..V_{n-1}`:
//!
//! * `V_i^2 + R V_i` for every `i`,
//! * `V_S` whenever `S ∪ {n}` is long,
//! * `sum_{S ⊊ L} R^{|L - S| - 1} V_S` for every long `L ⊆ {1..n-1}`.
//!
//! The first family is built into the monomial basis `R^a V_T` (`T`
//! squarefree); the others are expanded degree by degree into GF(2) rows.

pub mod matrix;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::balanced_of_signature;
use crate::combinatorics::{signature, SignatureFamily, SubsetClass};
use crate::enumeration::ChamberRecord;
use crate::error::{Error, Result};
use crate::ideals::{canonical_form, recover_signature, MonomialIdeal};
use crate::lengths::LengthVector;
use crate::subset::Subset;
use matrix::{solve, BitVec, Echelon};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// Planar polygons modulo reflection; generators in degree 1.
    Mbar,
    /// Spatial polygons; generators in degree 2.
    N,
}

impl Space {
    pub fn variable_degree(self) -> usize {
        match self {
            Space::Mbar => 1,
            Space::N => 2,
        }
    }
}

impl std::str::FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mbar" => Ok(Space::Mbar),
            "n" => Ok(Space::N),
            other => Err(Error::Parse(format!("unknown space {other:?}; expected mbar or n"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum R3Family {
    /// Only inclusion-minimal long sets.
    Minimal,
    /// Every long set.
    All,
}

/// Monomial `R^a V_T`.
type Monomial = (usize, Subset);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPresentation {
    pub n: usize,
    pub space: Space,
    /// Minimal `S` with `S ∪ {n}` long.
    pub monomial_relations: Vec<Subset>,
    /// Long `L ⊆ {1..n-1}` indexing the mixed relations.
    pub mixed_relations: Vec<Subset>,
    /// Drop terms of the mixed relations that already vanish by a monomial relation.
    pub reduce_mixed: bool,
    /// Adjoin `R = 0`.
    pub kill_r: bool,
    /// `{n}` is long: the space is empty.
    pub empty: bool,
}

impl GradedPresentation {
    pub fn new(lengths: &LengthVector, space: Space) -> Result<Self> {
        Self::from_family(&signature(&lengths.ordered().0), space)
    }

    pub fn from_family(family: &SignatureFamily, space: Space) -> Result<Self> {
        Self::with_options(family, space, R3Family::Minimal, true)
    }

    pub fn with_options(family: &SignatureFamily, space: Space, r3: R3Family, reduce_mixed: bool) -> Result<Self> {
        if !family.generic {
            return Err(Error::NonGeneric("the mod-2 presentation needs a generic length vector".into()));
        }
        let n = family.n;
        if n < 3 {
            return Err(Error::Precondition(format!("need at least 3 links, got {n}")));
        }
        let m = n - 1;
        let empty = family.class_with_n(Subset::EMPTY) == SubsetClass::Long;
        let long_with_n = |s: Subset| family.class_with_n(s) == SubsetClass::Long;
        let monomial_relations =
            Subset::all(m).filter(|&s| long_with_n(s) && s.iter().all(|i| !long_with_n(s.without(i)))).collect();
        let long = |l: Subset| family.class_of(l) == SubsetClass::Long;
        let mixed_relations = Subset::all(m)
            .filter(|&l| long(l) && (r3 == R3Family::All || l.iter().all(|i| !long(l.without(i)))))
            .collect();
        Ok(GradedPresentation {
            n,
            space,
            monomial_relations,
            mixed_relations,
            reduce_mixed,
            kill_r: false,
            empty,
        })
    }

    fn m(&self) -> usize {
        self.n - 1
    }

    /// Top degree in units of the generator degree.
    pub fn top(&self) -> usize {
        self.n - 3
    }

    pub fn with_r_killed(&self) -> Self {
        GradedPresentation { kill_r: true, ..self.clone() }
    }

    fn kills(&self, t: Subset) -> bool {
        self.monomial_relations.iter().any(|s| s.is_subset_of(t))
    }

    /// Relation generators as sums of monomials, with their degrees.
    fn relation_generators(&self) -> Vec<(usize, Vec<Monomial>)> {
        let mut out: Vec<(usize, Vec<Monomial>)> =
            self.monomial_relations.iter().map(|&s| (s.len(), vec![(0, s)])).collect();
        for &l in &self.mixed_relations {
            let terms: Vec<Monomial> = Subset::all(l.len())
                .map(|pattern| Subset::from_indices(l.iter().enumerate().filter(|(k, _)| pattern.contains(k + 1)).map(|(_, i)| i)))
                .filter(|&s| s != l)
                .filter(|&s| !self.reduce_mixed || !self.kills(s))
                .map(|s| (l.len() - s.len() - 1, s))
                .collect();
            if !terms.is_empty() {
                out.push((l.len() - 1, terms));
            }
        }
        if self.kill_r {
            out.push((1, vec![(1, Subset::EMPTY)]));
        }
        out
    }

    /// Basis monomials of degree `d`, pure `V` monomials first.
    fn monomials(&self, d: usize) -> Vec<Monomial> {
        let m = self.m();
        let mut out = Vec::new();
        for a in 0..=d {
            let k = d - a;
            out.extend(Subset::all(m).filter(|t| t.len() == k).map(|t| (a, t)));
        }
        out
    }

    /// Span of the relations in degree `d` together with the basis used for columns.
    fn relations_in_degree(&self, d: usize) -> (Vec<Monomial>, HashMap<Monomial, usize>, Echelon) {
        let basis = self.monomials(d);
        let index: HashMap<Monomial, usize> = basis.iter().enumerate().map(|(k, &mon)| (mon, k)).collect();
        let mut ech = Echelon::new(basis.len());
        for (e, terms) in self.relation_generators() {
            if e > d {
                continue;
            }
            for mu in self.monomials(d - e) {
                let mut row = BitVec::zeros(basis.len());
                for &t in &terms {
                    row.flip(index[&multiply(mu, t)]);
                }
                ech.insert(row);
            }
        }
        (basis, index, ech)
    }

    /// Dimensions by degree `0..=top` in generator units.
    fn unit_dims(&self) -> Vec<u64> {
        if self.empty {
            return vec![0; self.top() + 1];
        }
        (0..=self.top())
            .into_par_iter()
            .map(|d| {
                let (basis, _, ech) = self.relations_in_degree(d);
                (basis.len() - ech.rank()) as u64
            })
            .collect()
    }

    /// Whether `V_T` is zero in the ring.
    fn vanishes(&self, t: Subset) -> bool {
        if self.empty {
            return true;
        }
        let (basis, index, ech) = self.relations_in_degree(t.len());
        let mut v = BitVec::zeros(basis.len());
        v.flip(index[&(0, t)]);
        ech.reduce(&v).is_zero()
    }
}

fn multiply(a: Monomial, b: Monomial) -> Monomial {
    (a.0 + b.0 + a.1.intersection(b.1).len(), a.1.union(b.1))
}

pub fn monomial_name((a, t): Monomial) -> String {
    let mut parts = Vec::new();
    match a {
        0 => {}
        1 => parts.push("R".to_string()),
        _ => parts.push(format!("R^{a}")),
    }
    parts.extend(t.iter().map(|i| format!("V{i}")));
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    pub space: Space,
    /// Dimension in every degree `0..=top`; odd degrees are zero for `N`.
    pub dims: Vec<u64>,
}

pub fn graded_dims(p: &GradedPresentation) -> GradedDims {
    let unit = p.unit_dims();
    let dims = match p.space {
        Space::Mbar => unit,
        Space::N => {
            let mut d = vec![0; 2 * unit.len() - 1];
            for (k, &x) in unit.iter().enumerate() {
                d[2 * k] = x;
            }
            d
        }
    };
    GradedDims { space: p.space, dims }
}

/// Solutions of `v^2 = v u` for all `v` of degree one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct W1Solution {
    /// Dimension of the solution space; zero means `u` is unique.
    pub solution_dim: usize,
    /// One solution, as a sum of basis monomials of degree one.
    pub class: Vec<String>,
}

impl W1Solution {
    pub fn is_unique(&self) -> bool {
        self.solution_dim == 0
    }
}

fn require_mbar(p: &GradedPresentation) -> Result<()> {
    if p.space != Space::Mbar {
        return Err(Error::Precondition("needs the degree-one presentation".into()));
    }
    if p.empty {
        return Err(Error::Precondition(format!("{{{}}} is long: the space is empty", p.n)));
    }
    Ok(())
}

pub fn extract_w1(p: &GradedPresentation) -> Result<W1Solution> {
    require_mbar(p)?;
    let (basis1, _, ech1) = p.relations_in_degree(1);
    let h1: Vec<Monomial> = ech1.free_columns().into_iter().map(|c| basis1[c]).collect();
    if p.top() < 2 {
        // Degree two vanishes.
        return Ok(W1Solution { solution_dim: h1.len(), class: Vec::new() });
    }
    let (basis2, index2, ech2) = p.relations_in_degree(2);
    let reduced = |mon: Monomial| {
        let mut v = BitVec::zeros(basis2.len());
        v.flip(index2[&mon]);
        ech2.reduce(&v)
    };
    let width = basis2.len();
    let rows = h1.len() * width;
    let stack = |f: &dyn Fn(Monomial) -> BitVec| {
        let mut out = BitVec::zeros(rows);
        for (k, &v) in h1.iter().enumerate() {
            for c in f(v).ones() {
                out.flip(k * width + c);
            }
        }
        out
    };
    let columns: Vec<BitVec> = h1.iter().map(|&b| stack(&|v| reduced(multiply(v, b)))).collect();
    let rhs = stack(&|v| reduced(multiply(v, v)));
    let (x, solution_dim) =
        solve(&columns, &rhs, rows).ok_or_else(|| Error::Malformed("no class u with v^2 = vu for all v".into()))?;
    let class = h1.iter().zip(&x).filter(|(_, &on)| on).map(|(&mon, _)| monomial_name(mon)).collect();
    Ok(W1Solution { solution_dim, class })
}

/// Dimensions of the ring modulo `R`.
pub fn quotient_by_w1(p: &GradedPresentation) -> Result<GradedDims> {
    require_mbar(p)?;
    Ok(graded_dims(&p.with_r_killed()))
}

/// The ring modulo `R` read back as an exterior algebra modulo monomials:
/// minimal `T` with `V_T = 0`, restricted to `|T| <= top + 1`.
pub fn quotient_ideal(p: &GradedPresentation) -> Result<MonomialIdeal> {
    require_mbar(p)?;
    let q = p.with_r_killed();
    let m = p.m();
    let zero: Vec<Subset> = Subset::all(m).filter(|t| t.len() <= p.top() + 1 && q.vanishes(*t)).collect();
    let minimal = zero.iter().copied().filter(|t| t.iter().all(|i| !zero.contains(&t.without(i)))).collect();
    MonomialIdeal::new(m, minimal, true)
}

/// Invariant of the mod-2 ring of the reflection quotient: graded dimensions,
/// plus (when the class `u` is unique) the canonical form of the quotient by it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MbarKey {
    pub dims: Vec<u64>,
    pub quotient: Option<(usize, MonomialIdeal)>,
}

pub fn mbar_key(family: &SignatureFamily) -> Result<MbarKey> {
    let p = GradedPresentation::from_family(family, Space::Mbar)?;
    let dims = graded_dims(&p).dims;
    if p.empty || !extract_w1(&p)?.is_unique() {
        return Ok(MbarKey { dims, quotient: None });
    }
    let (killed, stripped) = quotient_ideal(&p)?.strip_variables();
    let (canonical, _) = canonical_form(&stripped)?;
    Ok(MbarKey { dims, quotient: Some((p.m() - killed, canonical)) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpatialVerdict {
    pub same: bool,
    /// First invariant that differed.
    pub stage: Option<String>,
    pub n_dims: [Vec<u64>; 2],
}

fn spatial_key(family: &SignatureFamily) -> Result<(Vec<u64>, MbarKey)> {
    let np = GradedPresentation::from_family(family, Space::N)?;
    let n_dims = graded_dims(&np).dims;
    let halved: Vec<u64> = n_dims.iter().step_by(2).copied().collect();
    if n_dims.iter().skip(1).step_by(2).any(|&x| x != 0) {
        return Err(Error::Malformed("odd-degree classes in the spatial ring".into()));
    }
    let key = mbar_key(family)?;
    if key.dims != halved {
        return Err(Error::Malformed("halved spatial dimensions differ from the planar quotient".into()));
    }
    Ok((n_dims, key))
}

/// Compares two generic vectors through the spatial ring: graded dimensions,
/// then (after halving degrees) the quotient by the class `u`.
pub fn spatial_pipeline(a: &LengthVector, b: &LengthVector) -> Result<SpatialVerdict> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch(a.n(), b.n()));
    }
    if a.n() < 5 {
        return Err(Error::Precondition(
            "n = 4 is excluded: (1,1,1,2) and (1,2,2,2) lie in different chambers with both spatial spaces a 2-sphere"
                .into(),
        ));
    }
    let (da, ka) = spatial_key(&signature(&a.ordered().0))?;
    let (db, kb) = spatial_key(&signature(&b.ordered().0))?;
    let stage = if da != db {
        Some("n_dims")
    } else if ka != kb {
        Some("w1_quotient")
    } else {
        None
    };
    Ok(SpatialVerdict { same: stage.is_none(), stage: stage.map(String::from), n_dims: [da, db] })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Spatial,
    Mbar,
    Signature,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageResult {
    pub stage: Stage,
    /// `None` when the stage does not apply (non-generic input).
    pub equal: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub same: bool,
    pub generic: bool,
    pub distinguished_by: Option<Stage>,
    pub stages: Vec<StageResult>,
}

fn recovered_signature(family: &SignatureFamily) -> Result<SignatureFamily> {
    if !family.generic {
        return Ok(family.clone());
    }
    let Ok(b) = balanced_of_signature(family) else {
        return Ok(family.clone());
    };
    let recovered = recover_signature(&b, None)?;
    if recovered.short_with_n != family.short_with_n {
        return Err(Error::Malformed("recovered signature disagrees with direct classification".into()));
    }
    Ok(recovered)
}

/// Runs the invariants from the coarsest to the finest: spatial ring
/// dimensions, the planar quotient ring, and the signature reconstructed from
/// the balanced subalgebra.
pub fn compare(a: &LengthVector, b: &LengthVector) -> Result<Comparison> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch(a.n(), b.n()));
    }
    let fa = signature(&a.ordered().0);
    let fb = signature(&b.ordered().0);
    let generic = fa.generic && fb.generic;
    let mut stages = Vec::new();
    if generic {
        let na = graded_dims(&GradedPresentation::from_family(&fa, Space::N)?).dims;
        let nb = graded_dims(&GradedPresentation::from_family(&fb, Space::N)?).dims;
        stages.push(StageResult { stage: Stage::Spatial, equal: Some(na == nb) });
        stages.push(StageResult { stage: Stage::Mbar, equal: Some(mbar_key(&fa)? == mbar_key(&fb)?) });
    } else {
        stages.push(StageResult { stage: Stage::Spatial, equal: None });
        stages.push(StageResult { stage: Stage::Mbar, equal: None });
    }
    let same = recovered_signature(&fa)? == recovered_signature(&fb)?;
    stages.push(StageResult { stage: Stage::Signature, equal: Some(same) });
    let distinguished_by = stages.iter().find(|s| s.equal == Some(false)).map(|s| s.stage);
    Ok(Comparison { same, generic, distinguished_by, stages })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientAudit {
    pub n: usize,
    pub chambers: usize,
    /// Chambers (with `{n}` short) where the class `u` is unique.
    pub w1_unique: usize,
    pub nonempty: usize,
    pub mbar_collisions: Vec<(usize, usize)>,
    pub spatial_collisions: Vec<(usize, usize)>,
    /// Chambers whose quotient by `R` has other dimensions than `B*`.
    pub quotient_mismatches: Vec<usize>,
}

/// Collisions of the mod-2 invariants among enumerated chambers.
pub fn quotient_audit(n: usize, records: &[ChamberRecord]) -> Result<QuotientAudit> {
    if let Some(r) = records.iter().find(|r| r.signature.n != n) {
        return Err(Error::SizeMismatch(n, r.signature.n));
    }
    type Row = (MbarKey, Vec<u64>, Option<bool>, bool);
    let rows: Vec<Result<Row>> = records
        .par_iter()
        .map(|r| {
            let family = signature(&r.witness.ordered().0);
            let key = mbar_key(&family)?;
            let np = GradedPresentation::from_family(&family, Space::N)?;
            let n_dims = graded_dims(&np).dims;
            let p = GradedPresentation::from_family(&family, Space::Mbar)?;
            if p.empty {
                return Ok((key, n_dims, None, true));
            }
            let unique = extract_w1(&p)?.is_unique();
            let balanced = balanced_of_signature(&family)?;
            let quotient_ok = quotient_by_w1(&p)?.dims == balanced.ranks;
            Ok((key, n_dims, Some(unique), quotient_ok))
        })
        .collect();
    let mut mbar: HashMap<MbarKey, usize> = HashMap::new();
    let mut spatial: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut report = QuotientAudit {
        n,
        chambers: records.len(),
        w1_unique: 0,
        nonempty: 0,
        mbar_collisions: Vec::new(),
        spatial_collisions: Vec::new(),
        quotient_mismatches: Vec::new(),
    };
    for (k, row) in rows.into_iter().enumerate() {
        let (key, n_dims, unique, quotient_ok) = row?;
        if let Some(u) = unique {
            report.nonempty += 1;
            report.w1_unique += u as usize;
        }
        if !quotient_ok {
            report.quotient_mismatches.push(k);
        }
        if let Some(&j) = mbar.get(&key) {
            report.mbar_collisions.push((j, k));
        } else {
            mbar.insert(key, k);
        }
        if let Some(&j) = spatial.get(&n_dims) {
            report.spatial_collisions.push((j, k));
        } else {
            spatial.insert(n_dims, k);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(v: &[i64]) -> LengthVector {
        LengthVector::from_integers(v).unwrap()
    }

    fn dims(v: &[i64], space: Space) -> Vec<u64> {
        graded_dims(&GradedPresentation::new(&lv(v), space).unwrap()).dims
    }

    #[test]
    fn pentagon_dims() {
        assert_eq!(dims(&[1, 1, 1, 1, 1], Space::Mbar), vec![1, 5, 1]);
        assert_eq!(dims(&[1, 1, 1, 1, 1], Space::N), vec![1, 0, 5, 0, 1]);
    }

    #[test]
    fn quadrilaterals_are_spheres() {
        for v in [[1, 1, 1, 2], [1, 2, 2, 2]] {
            assert_eq!(dims(&v, Space::Mbar), vec![1, 1]);
            assert_eq!(dims(&v, Space::N), vec![1, 0, 1]);
        }
    }

    #[test]
    fn empty_space_has_zero_dims() {
        assert_eq!(dims(&[1, 1, 1, 1, 9], Space::Mbar), vec![0, 0, 0]);
    }

    #[test]
    fn non_generic_rejected() {
        let err = GradedPresentation::new(&lv(&[1, 1, 1, 1, 2]), Space::Mbar).unwrap_err();
        assert!(matches!(err, Error::NonGeneric(_)));
    }

    #[test]
    fn pentagon_w1_is_r() {
        let p = GradedPresentation::new(&lv(&[1, 1, 1, 1, 1]), Space::Mbar).unwrap();
        let w = extract_w1(&p).unwrap();
        assert!(w.is_unique());
        assert_eq!(w.class, vec!["R".to_string()]);
        assert_eq!(quotient_by_w1(&p).unwrap().dims, vec![1, 4, 0]);
    }

    #[test]
    fn quadrilateral_w1_is_ambiguous() {
        let p = GradedPresentation::new(&lv(&[1, 1, 1, 2]), Space::Mbar).unwrap();
        assert!(!extract_w1(&p).unwrap().is_unique());
        assert_eq!(quotient_by_w1(&p).unwrap().dims, vec![1, 0]);
    }

    #[test]
    fn mixed_relation_variants_agree() {
        for v in [&[1, 1, 1, 1, 1][..], &[1, 2, 3, 4, 5, 6], &[1, 1, 2, 3, 3, 5, 8], &[1, 1, 1, 1, 1, 1, 1]] {
            let fam = signature(&lv(v).ordered().0);
            let base = graded_dims(&GradedPresentation::from_family(&fam, Space::Mbar).unwrap());
            for (r3, reduce) in [(R3Family::All, true), (R3Family::Minimal, false), (R3Family::All, false)] {
                let p = GradedPresentation::with_options(&fam, Space::Mbar, r3, reduce).unwrap();
                assert_eq!(graded_dims(&p), base, "{v:?}");
            }
        }
    }

    #[test]
    fn compare_quadrilateral_pair() {
        let c = compare(&lv(&[1, 1, 1, 2]), &lv(&[1, 2, 2, 2])).unwrap();
        assert!(!c.same);
        assert_eq!(c.distinguished_by, Some(Stage::Signature));
        let c = compare(&lv(&[1, 1, 1, 1, 3]), &lv(&[1, 1, 1, 1, 1])).unwrap();
        assert!(!c.same);
        assert!(compare(&lv(&[1, 1, 1, 1, 1]), &lv(&[2, 2, 2, 2, 2])).unwrap().same);
    }

    #[test]
    fn spatial_examples() {
        let p = lv(&[1, 1, 1, 1, 1]);
        assert!(spatial_pipeline(&p, &p).unwrap().same);
        assert!(!spatial_pipeline(&lv(&[1, 1, 1, 1, 3]), &p).unwrap().same);
        assert!(spatial_pipeline(&lv(&[1, 1, 1, 2]), &lv(&[1, 2, 2, 2])).unwrap_err().is_precondition());
    }
}

//! Chambers of the wall arrangement up to permutation of the links.
//!
//! A chamber of ordered vectors is determined by the family of `T ⊆ {1..n-1}`
//! with `T ∪ {n}` short. Candidates for this family are generated by a
//! depth-first search and certified with an exact LP.

mod db;
mod search;
mod volume;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cohomology::betti_of_signature;
use crate::combinatorics::{is_normal, signature, SignatureFamily};
use crate::error::{Error, Result};
use crate::lengths::LengthVector;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::subset::Subset;

pub use db::{db_path, frontier_path, read_records, write_records, FrontierState, DB_DIR_ENV};
pub use search::{enumerate_chambers, enumerate_with, sampled_signatures, EnumerationOptions, EnumerationReport, DEFAULT_MAX_N};
pub use volume::{estimate_nonnormal_volume, VolumeEstimate};

/// `{T ⊆ {1..n-1} : T ∪ {n} short}` for an ordered generic representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChamberSignature {
    pub n: usize,
    pub short_with_n: Vec<Subset>,
}

impl ChamberSignature {
    /// Sorts and deduplicates `members`.
    pub fn new(n: usize, mut members: Vec<Subset>) -> Self {
        members.sort();
        members.dedup();
        ChamberSignature { n, short_with_n: members }
    }

    pub fn from_family(family: &SignatureFamily) -> Result<Self> {
        if !family.generic {
            return Err(Error::NonGeneric(format!("{} median subsets contain n", family.median_with_n.len())));
        }
        Ok(ChamberSignature::new(family.n, family.short_with_n.clone()))
    }

    /// Signature of the chamber containing `lengths` (sorted first).
    pub fn of(lengths: &LengthVector) -> Result<Self> {
        Self::from_family(&signature(&lengths.ordered().0))
    }

    pub fn contains(&self, t: Subset) -> bool {
        self.short_with_n.binary_search(&t).is_ok()
    }

    fn m(&self) -> usize {
        self.n - 1
    }

    /// Closed under inclusion and under replacing an index by a smaller one.
    pub fn is_dominance_closed(&self) -> bool {
        self.short_with_n.iter().all(|t| t.lower_neighbors().all(|r| self.contains(r)))
    }

    /// Members with no member directly above them in the dominance order.
    pub fn maximal_members(&self) -> Vec<Subset> {
        let m = self.m();
        self.short_with_n.iter().copied().filter(|t| t.upper_neighbors(m).all(|u| !self.contains(u))).collect()
    }

    /// Non-members all of whose lower neighbours are members.
    pub fn minimal_non_members(&self) -> Vec<Subset> {
        Subset::all(self.m())
            .filter(|&t| !self.contains(t) && t.lower_neighbors().all(|r| self.contains(r)))
            .collect()
    }
}

/// Outcome of the realizability LP. `witness` is a primitive integer vector
/// in the chamber when the optimal margin is positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizabilityCertificate {
    pub witness: Option<LengthVector>,
    #[serde(with = "crate::rational::single")]
    pub margin: BigRational,
}

impl RealizabilityCertificate {
    pub fn is_realizable(&self) -> bool {
        self.witness.is_some()
    }
}

/// Coefficient row of `sum_{i in S} l_i` in the increment variables
/// `d_k = l_k - l_{k-1}`: the coefficient of `d_k` is `#{i in S : i >= k}`.
fn increment_row(s: Subset, n: usize) -> Vec<i64> {
    (1..=n).map(|k| s.iter().filter(|&i| i >= k).count() as i64).collect()
}

/// LP rows (without the margin column) for the given short and long sets, all
/// containing `n`. Each row `g` asks for `g · d >= t`.
pub(crate) fn margin_program(n: usize, shorts: &[Subset], longs: &[Subset]) -> LinearProgram {
    let full = Subset::full(n);
    let last = Subset::singleton(n);
    let mut objective = vec![0i64; n + 1];
    objective[n] = 1;
    let mut lp = LinearProgram::new(n + 1, objective);
    let mut first = vec![0i64; n + 1];
    first[0] = 1;
    first[n] = -1;
    lp.add(first, Relation::Ge, 0);
    let mut push = |inside: Subset, sign: i64| {
        let a = increment_row(inside, n);
        let b = increment_row(inside.complement(n), n);
        let mut row: Vec<i64> = a.iter().zip(&b).map(|(x, y)| sign * (y - x)).collect();
        row.push(-1);
        lp.add(row, Relation::Ge, 0);
    };
    for &t in shorts {
        push(t.union(last), 1);
    }
    for &t in longs {
        push(t.union(last), -1);
    }
    lp.add(
        {
            let mut r = increment_row(full, n);
            r.push(0);
            r
        },
        Relation::Eq,
        1,
    );
    lp
}

/// Solves `margin_program` and returns the optimal margin and lengths.
pub(crate) fn solve_margin(n: usize, shorts: &[Subset], longs: &[Subset]) -> (BigRational, Option<Vec<BigRational>>) {
    match margin_program(n, shorts, longs).solve() {
        LpOutcome::Optimal { value, point } => {
            if value.is_positive() {
                let mut acc = BigRational::zero();
                let lengths = point[..n]
                    .iter()
                    .map(|d| {
                        acc += d;
                        acc.clone()
                    })
                    .collect();
                (value, Some(lengths))
            } else {
                (value, None)
            }
        }
        LpOutcome::Infeasible => (BigRational::zero(), None),
        LpOutcome::Unbounded => unreachable!("the lengths sum to one"),
    }
}

/// Decides whether `candidate` is the signature of some chamber.
///
/// The margin rows are emitted only for dominance-maximal members and
/// dominance-minimal non-members; with ordered lengths the remaining
/// inequalities follow.
pub fn lp_realizable(candidate: &ChamberSignature) -> Result<RealizabilityCertificate> {
    let n = candidate.n;
    if !(2..=crate::MAX_N).contains(&n) {
        return Err(Error::UnsupportedSize(n));
    }
    if candidate.short_with_n.iter().any(|t| t.max_index().is_some_and(|i| i >= n)) {
        return Err(Error::Precondition(format!("candidate members must lie in 1..={}", n - 1)));
    }
    if !candidate.is_dominance_closed() {
        return Err(Error::Precondition("candidate is not closed under inclusion and dominance".into()));
    }
    let shorts = candidate.maximal_members();
    let longs = candidate.minimal_non_members();
    let (margin, lengths) = solve_margin(n, &shorts, &longs);
    let witness = lengths.map(|l| primitive_witness(&l));
    if let Some(w) = &witness {
        debug_assert_eq!(ChamberSignature::of(w).ok().as_ref(), Some(candidate));
    }
    Ok(RealizabilityCertificate { witness, margin })
}

fn primitive_witness(lengths: &[BigRational]) -> LengthVector {
    let lv = LengthVector::new(lengths.to_vec()).expect("positive LP solution");
    let ints = lv.integer_representative();
    LengthVector::new(ints.into_iter().map(BigRational::from_integer).collect()).expect("positive")
}

/// One enumerated chamber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberRecord {
    pub signature: ChamberSignature,
    pub witness: LengthVector,
    pub normal: bool,
    pub betti: Vec<u64>,
}

impl ChamberRecord {
    /// Builds the record from a witness, re-deriving its signature.
    pub fn from_witness(witness: LengthVector) -> Result<Self> {
        let (ordered, _) = witness.ordered();
        let family = signature(&ordered);
        let signature = ChamberSignature::from_family(&family)?;
        let witness = ordered.into_inner();
        Ok(ChamberRecord {
            normal: is_normal(&witness),
            betti: betti_of_signature(&family).b,
            signature,
            witness,
        })
    }

    /// Re-derives signature, normality and Betti numbers from the witness.
    pub fn verify(&self) -> Result<()> {
        let fresh = ChamberRecord::from_witness(self.witness.clone())?;
        if &fresh != self {
            return Err(Error::Malformed(format!("record for witness {} is inconsistent", self.witness)));
        }
        Ok(())
    }
}

/// `(c_n, c_n*)`: number of records and number of normal records.
pub fn count_normal(records: &[ChamberRecord]) -> (usize, usize) {
    (records.len(), records.iter().filter(|r| r.normal).count())
}

//! Length vectors with exact rational entries.

use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::SubsetClass;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational};
use crate::subset::Subset;
use crate::MAX_N;

/// A vector `(l_1, ..., l_n)` of strictly positive exact rationals.
///
/// Subset comparisons run on an integer rescaling of the entries so that
/// classifying all `2^n` subsets never touches a fraction.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LengthVectorRepr", into = "LengthVectorRepr")]
pub struct LengthVector {
    entries: Vec<BigRational>,
    weights: Weights,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Weights {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct LengthVectorRepr(#[serde(with = "crate::rational::vec")] Vec<BigRational>);

impl TryFrom<LengthVectorRepr> for LengthVector {
    type Error = Error;
    fn try_from(r: LengthVectorRepr) -> Result<Self> {
        LengthVector::new(r.0)
    }
}

impl From<LengthVector> for LengthVectorRepr {
    fn from(lv: LengthVector) -> Self {
        LengthVectorRepr(lv.entries)
    }
}

impl LengthVector {
    pub fn new(entries: Vec<BigRational>) -> Result<Self> {
        if entries.is_empty() || entries.len() > MAX_N {
            return Err(Error::UnsupportedSize(entries.len()));
        }
        if let Some((i, v)) = entries.iter().enumerate().find(|(_, v)| !v.is_positive()) {
            return Err(Error::NonPositive { index: i + 1, value: format_rational(v) });
        }
        let lcm = entries.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scaled: Vec<BigInt> = entries.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
        // 2 * (sum of up to MAX_N entries) must fit comfortably in an i128.
        let limit = BigInt::one() << 100;
        let weights = if scaled.iter().all(|w| w < &limit) {
            Weights::Small(scaled.iter().map(|w| w.to_i128().expect("bounded")).collect())
        } else {
            Weights::Big(scaled)
        };
        Ok(LengthVector { entries, weights })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        LengthVector::new(values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    /// Parses `"a/b,c/d,..."` or a JSON array of rational strings.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('[') {
            return Self::from_json(t);
        }
        let entries = t.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        LengthVector::new(entries)
    }

    /// Parses a JSON array such as `["1/2", "1", "3/4"]`. Bare JSON integers are accepted too.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Vec<serde_json::Value> = serde_json::from_str(text)?;
        let entries = raw
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => parse_rational(s),
                serde_json::Value::Number(num) if num.is_i64() || num.is_u64() => parse_rational(&num.to_string()),
                other => Err(Error::Parse(format!("expected a rational string, got {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        LengthVector::new(entries)
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    /// Entry `l_i` for 1-based `i`.
    pub fn get(&self, i: usize) -> &BigRational {
        &self.entries[i - 1]
    }

    pub fn is_ordered(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn total(&self) -> BigRational {
        self.entries.iter().fold(BigRational::zero(), |acc, v| acc + v)
    }

    /// Rescaled onto the open simplex (entries summing to 1).
    pub fn normalized(&self) -> LengthVector {
        let total = self.total();
        self.scaled(&total.recip())
    }

    pub fn scaled(&self, factor: &BigRational) -> LengthVector {
        assert!(factor.is_positive(), "scale factor must be positive");
        LengthVector::new(self.entries.iter().map(|v| v * factor).collect()).expect("positive scaling")
    }

    /// Smallest positive integer vector proportional to this one.
    pub fn integer_representative(&self) -> Vec<BigInt> {
        let lcm = self.entries.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints: Vec<BigInt> = self.entries.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        ints.into_iter().map(|v| v / &gcd).collect()
    }

    /// Sorts the entries increasingly (stable). The returned permutation maps a
    /// position of the ordered vector to the original position it came from.
    pub fn ordered(&self) -> (OrderedLengths, Permutation) {
        let mut idx: Vec<usize> = (0..self.n()).collect();
        idx.sort_by(|&a, &b| self.entries[a].cmp(&self.entries[b]));
        let entries = idx.iter().map(|&i| self.entries[i].clone()).collect();
        let ordered = LengthVector::new(entries).expect("permuted positive vector");
        let perm = Permutation { image: idx.iter().map(|&i| i + 1).collect() };
        (OrderedLengths(ordered), perm)
    }

    pub fn into_ordered(self) -> Result<OrderedLengths> {
        OrderedLengths::new(self)
    }

    /// Short/median/long status of `J` from an exact comparison of
    /// `sum_{i in J} l_i` with `sum_{i not in J} l_i`.
    pub fn classify(&self, subset: Subset) -> Result<SubsetClass> {
        if let Some(max) = subset.max_index() {
            if max > self.n() {
                return Err(Error::IndexOutOfRange { index: max, n: self.n() });
            }
        }
        Ok(self.classify_unchecked(subset))
    }

    pub(crate) fn classify_unchecked(&self, subset: Subset) -> SubsetClass {
        match &self.weights {
            Weights::Small(w) => {
                let (mut inside, mut total) = (0i128, 0i128);
                for (k, x) in w.iter().enumerate() {
                    total += x;
                    if subset.0 >> k & 1 == 1 {
                        inside += x;
                    }
                }
                SubsetClass::from_ordering((2 * inside).cmp(&total))
            }
            Weights::Big(w) => {
                let mut inside = BigInt::zero();
                let mut total = BigInt::zero();
                for (k, x) in w.iter().enumerate() {
                    total += x;
                    if subset.0 >> k & 1 == 1 {
                        inside += x;
                    }
                }
                SubsetClass::from_ordering((inside * BigInt::from(2)).cmp(&total))
            }
        }
    }

    /// Classification of every subset of `{1, ..., n}`, indexed by bitmask.
    pub fn classify_all(&self) -> Vec<SubsetClass> {
        let size = 1usize << self.n();
        match &self.weights {
            Weights::Small(w) => {
                let total: i128 = w.iter().sum();
                let mut sums = vec![0i128; size];
                for mask in 1..size {
                    let low = mask.trailing_zeros() as usize;
                    sums[mask] = sums[mask & (mask - 1)] + w[low];
                }
                sums.iter().map(|s| SubsetClass::from_ordering((2 * s).cmp(&total))).collect()
            }
            Weights::Big(_) => (0..size).map(|m| self.classify_unchecked(Subset(m as u32))).collect(),
        }
    }
}

impl fmt::Debug for LengthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LengthVector({self})")
    }
}

impl fmt::Display for LengthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(format_rational).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for LengthVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LengthVector::parse(s)
    }
}

/// A length vector known to satisfy `l_1 <= l_2 <= ... <= l_n`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(transparent)]
pub struct OrderedLengths(LengthVector);

impl OrderedLengths {
    pub fn new(lv: LengthVector) -> Result<Self> {
        if lv.is_ordered() {
            Ok(OrderedLengths(lv))
        } else {
            Err(Error::NotOrdered)
        }
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        OrderedLengths::new(LengthVector::from_integers(values)?)
    }

    pub fn into_inner(self) -> LengthVector {
        self.0
    }
}

impl Deref for OrderedLengths {
    type Target = LengthVector;
    fn deref(&self) -> &LengthVector {
        &self.0
    }
}

impl fmt::Display for OrderedLengths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A permutation of `{1, ..., n}` given by its image array.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n + 1];
        for &i in &image {
            if i == 0 || i > n || seen[i] {
                return Err(Error::InvalidPermutation(n));
            }
            seen[i] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (1..=n).collect() }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// `sigma(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply_subset(&self, s: Subset) -> Subset {
        Subset::from_indices(s.iter().map(|i| self.apply(i)))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (k, &i) in self.image.iter().enumerate() {
            inv[i - 1] = k + 1;
        }
        Permutation { image: inv }
    }

    pub fn fixes_last(&self) -> bool {
        self.image.last().is_none_or(|&i| i == self.n())
    }
}

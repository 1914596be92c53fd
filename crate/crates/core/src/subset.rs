//! Subsets of `{1, ..., n}` packed into a machine word.
//!
//! Index `i` lives in bit `i - 1`. Families of subsets that implicitly contain
//! the last index `n` are stored over `{1, ..., n-1}` only.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// All of `{1, ..., n}`.
    pub fn full(n: usize) -> Subset {
        debug_assert!(n <= 32);
        if n == 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Subset {
        debug_assert!(i >= 1);
        Subset(1 << (i - 1))
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Subset {
        indices.into_iter().fold(Subset::EMPTY, |s, i| s.with(i))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i >= 1 && self.0 & (1 << (i - 1)) != 0
    }

    #[inline]
    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | (1 << (i - 1)))
    }

    #[inline]
    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !(1 << (i - 1)))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Complement inside `{1, ..., n}`.
    #[inline]
    pub fn complement(self, n: usize) -> Subset {
        Subset(!self.0 & Subset::full(n).0)
    }

    #[inline]
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    /// Largest index, if any.
    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 32 - self.0.leading_zeros() as usize)
    }

    /// Indices in increasing order (1-based).
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i + 1)
            }
        })
    }

    /// Every subset of `{1, ..., n}` in increasing numeric (colexicographic) order.
    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        (0..(1u64 << n)).map(|b| Subset(b as u32))
    }

    /// Subsets one step below `self` in the dominance order on `{1, ..., m}`:
    /// drop index 1, or replace some `i` by `i - 1` when `i - 1` is absent.
    /// A family is closed under inclusion and index-dominance iff it is closed
    /// under these moves.
    pub fn lower_neighbors(self) -> impl Iterator<Item = Subset> {
        let s = self;
        let drop_one = s.contains(1).then(|| s.without(1));
        let shifts = s
            .iter()
            .filter(move |&i| i > 1 && !s.contains(i - 1))
            .map(move |i| s.without(i).with(i - 1));
        drop_one.into_iter().chain(shifts)
    }

    /// Inverse of [`Subset::lower_neighbors`] inside `{1, ..., m}`.
    pub fn upper_neighbors(self, m: usize) -> impl Iterator<Item = Subset> {
        let s = self;
        let add_one = (m >= 1 && !s.contains(1)).then(|| s.with(1));
        let shifts = s
            .iter()
            .filter(move |&i| i < m && !s.contains(i + 1))
            .map(move |i| s.without(i).with(i + 1));
        add_one.into_iter().chain(shifts)
    }

    /// `self <= other` in the dominance order: `other` is reached from `self` by
    /// adding indices and moving indices upward.
    pub fn dominated_by(self, other: Subset) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut a: Vec<usize> = self.iter().collect();
        let mut b: Vec<usize> = other.iter().collect();
        a.reverse();
        b.reverse();
        a.iter().zip(b.iter()).all(|(x, y)| x <= y)
    }

    /// Lowercase hex with a `0x` prefix.
    pub fn to_hex(self) -> String {
        format!("{:#x}", self.0)
    }

    pub fn from_hex(s: &str) -> Option<Subset> {
        let digits = s.strip_prefix("0x").unwrap_or(s);
        u32::from_str_radix(digits, 16).ok().map(Subset)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Subset::from_hex(&s).ok_or_else(|| serde::de::Error::custom(format!("bad hex subset {s:?}")))
    }
}

//! Combinatorial and cohomological invariants of planar and spatial polygon
//! spaces: subset signatures of length vectors, chamber enumeration with exact
//! LP certificates, Betti numbers, balanced subalgebras as monomial ideals, and
//! the GF(2) presentations of the reflection quotient and the spatial space.

pub mod cohomology;
pub mod combinatorics;
pub mod enumeration;
pub mod error;
pub mod gf2;
pub mod ideals;
pub mod lengths;
pub mod lp;
pub mod rational;
pub mod subset;

pub use combinatorics::{SignatureFamily, SubsetClass};
pub use error::{Error, Result};
pub use lengths::{LengthVector, OrderedLengths, Permutation};
pub use subset::Subset;

/// Hard cap on the number of links (subsets are 32-bit words and several
/// routines enumerate all `2^n` subsets).
pub const MAX_N: usize = 20;

//! Row echelon forms over GF(2) with rows packed into 64-bit words.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { words: vec![0; len.div_ceil(64)] }
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let t = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }
}

/// Fully reduced echelon basis of a subspace of `GF(2)^cols`: every pivot
/// column is set in exactly one stored row. Pivots are the leftmost columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<BitVec>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon { cols, rows: Vec::new(), pivot_row: vec![None; cols] }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Normal form of `v` modulo the span.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (c, r) in self.pivot_row.iter().enumerate() {
            if let Some(r) = r {
                if v.get(c) {
                    v.xor_assign(&self.rows[*r]);
                }
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: BitVec) -> bool {
        let v = self.reduce(&v);
        let Some(p) = v.first_one() else {
            return false;
        };
        for row in self.rows.iter_mut() {
            if row.get(p) {
                row.xor_assign(&v);
            }
        }
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(v);
        true
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_row[c].is_some()
    }

    /// Columns not used as pivots: a basis of the quotient space.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|&c| !self.is_pivot(c)).collect()
    }
}

/// Solves `A x = b` over GF(2) where `A` is given by its columns.
/// Returns one solution and the dimension of the solution space.
pub fn solve(columns: &[BitVec], rhs: &BitVec, rows: usize) -> Option<(Vec<bool>, usize)> {
    let k = columns.len();
    // Augmented system as row vectors of length k + 1.
    let mut eq: Vec<BitVec> = (0..rows)
        .map(|r| {
            let mut v = BitVec::zeros(k + 1);
            for (j, c) in columns.iter().enumerate() {
                if c.get(r) {
                    v.flip(j);
                }
            }
            if rhs.get(r) {
                v.flip(k);
            }
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..k {
        let Some(p) = (next..eq.len()).find(|&r| eq[r].get(c)) else {
            continue;
        };
        eq.swap(next, p);
        let pivot = eq[next].clone();
        for (r, row) in eq.iter_mut().enumerate() {
            if r != next && row.get(c) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push(c);
        next += 1;
    }
    if eq[next..].iter().any(|row| row.get(k)) {
        return None;
    }
    let mut x = vec![false; k];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = eq[r].get(k);
    }
    Some((x, k - pivots.len()))
}

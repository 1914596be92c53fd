//! Small dense exact simplex solver.
//!
//! Two-phase tableau method with Bland's rule. Coefficients are integers; the
//! tableau runs over `Ratio<i128>` with checked arithmetic and is re-solved
//! over `BigRational` if any intermediate value overflows.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<i64>,
    pub relation: Relation,
    pub rhs: i64,
}

/// `maximize objective · x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<i64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: BigRational, point: Vec<BigRational> },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize, objective: Vec<i64>) -> Self {
        assert_eq!(objective.len(), num_vars);
        LinearProgram { num_vars, objective, constraints: Vec::new() }
    }

    pub fn add(&mut self, coeffs: Vec<i64>, relation: Relation, rhs: i64) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        match Tableau::<Ratio<i128>>::build(self).and_then(|t| t.run()) {
            Some(outcome) => outcome,
            None => Tableau::<BigRational>::build(self)
                .and_then(|t| t.run())
                .expect("BigRational arithmetic cannot overflow"),
        }
    }
}

/// Field operations that may fail on overflow.
trait Exact: Clone + PartialOrd + Zero + One {
    fn from_int(v: i64) -> Self;
    fn add_(&self, o: &Self) -> Option<Self>;
    fn sub_(&self, o: &Self) -> Option<Self>;
    fn mul_(&self, o: &Self) -> Option<Self>;
    fn div_(&self, o: &Self) -> Option<Self>;
    fn to_big(&self) -> BigRational;
}

impl Exact for Ratio<i128> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
    fn add_(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub_(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul_(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div_(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl Exact for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn add_(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub_(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul_(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
}

struct Tableau<T> {
    /// `rows[r]` holds the coefficients of every column followed by the rhs.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    num_vars: usize,
    /// Columns at or beyond this index are artificial.
    first_artificial: usize,
    num_cols: usize,
    objective: Vec<i64>,
}

impl<T: Exact> Tableau<T> {
    fn build(lp: &LinearProgram) -> Option<Self> {
        let n = lp.num_vars;
        // Normalize to rhs >= 0 and rewrite `g·x >= 0` as `-g·x <= 0`.
        let mut normalized = Vec::with_capacity(lp.constraints.len());
        for c in &lp.constraints {
            let (mut coeffs, mut rel, mut rhs) = (c.coeffs.clone(), c.relation, c.rhs);
            if rhs < 0 || (rhs == 0 && rel == Relation::Ge) {
                coeffs.iter_mut().for_each(|v| *v = -*v);
                rhs = -rhs;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            normalized.push((coeffs, rel, rhs));
        }
        let num_slack = normalized.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let num_art = normalized.iter().filter(|(_, r, _)| *r != Relation::Le).count();
        let first_artificial = n + num_slack;
        let num_cols = first_artificial + num_art;
        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut slack, mut art) = (n, first_artificial);
        for (coeffs, rel, rhs) in normalized {
            let mut row = vec![T::zero(); num_cols + 1];
            for (k, &v) in coeffs.iter().enumerate() {
                row[k] = T::from_int(v);
            }
            row[num_cols] = T::from_int(rhs);
            match rel {
                Relation::Le => {
                    row[slack] = T::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = T::from_int(-1);
                    slack += 1;
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
        }
        Some(Tableau { rows, basis, num_vars: n, first_artificial, num_cols, objective: lp.objective.clone() })
    }

    fn run(mut self) -> Option<LpOutcome> {
        if self.first_artificial < self.num_cols {
            // Phase one: maximize -(sum of artificials).
            let mut cost = vec![T::zero(); self.num_cols];
            for c in cost.iter_mut().skip(self.first_artificial) {
                *c = T::from_int(-1);
            }
            if !self.optimize(&cost, self.num_cols)? {
                unreachable!("phase one is bounded");
            }
            let value = self.objective_value(&cost)?;
            if value < T::zero() {
                return Some(LpOutcome::Infeasible);
            }
            self.drive_out_artificials()?;
        }
        let mut cost = vec![T::zero(); self.num_cols];
        for (k, &v) in self.objective.iter().enumerate() {
            cost[k] = T::from_int(v);
        }
        if !self.optimize(&cost, self.first_artificial)? {
            return Some(LpOutcome::Unbounded);
        }
        let value = self.objective_value(&cost)?.to_big();
        let mut point = vec![BigRational::zero(); self.num_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.num_vars {
                point[b] = self.rows[r][self.num_cols].to_big();
            }
        }
        Some(LpOutcome::Optimal { value, point })
    }

    fn objective_value(&self, cost: &[T]) -> Option<T> {
        let mut v = T::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            v = v.add_(&cost[b].mul_(&self.rows[r][self.num_cols])?)?;
        }
        Some(v)
    }

    /// Reduced cost of column `j`: `c_j - c_B · column_j`.
    fn reduced_cost(&self, cost: &[T], j: usize) -> Option<T> {
        let mut v = cost[j].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            if !self.rows[r][j].is_zero() && !cost[b].is_zero() {
                v = v.sub_(&cost[b].mul_(&self.rows[r][j])?)?;
            }
        }
        Some(v)
    }

    /// Maximizes `cost` using columns `< allowed`. Returns `Some(false)` when unbounded.
    fn optimize(&mut self, cost: &[T], allowed: usize) -> Option<bool> {
        loop {
            // Bland: lowest-index improving column.
            let mut entering = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                if self.reduced_cost(cost, j)? > T::zero() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else { return Some(true) };
            // Ratio test; ties broken by lowest basic index.
            let mut leaving: Option<(usize, T)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][j];
                if *a > T::zero() {
                    let ratio = self.rows[r][self.num_cols].div_(a)?;
                    let better = match &leaving {
                        None => true,
                        Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                    };
                    if better {
                        leaving = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = leaving else { return Some(false) };
            self.pivot(r, j)?;
        }
    }

    fn pivot(&mut self, r: usize, j: usize) -> Option<()> {
        let p = self.rows[r][j].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v = v.div_(&p)?;
                }
            }
        }
        let pivot_row = self.rows[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == r || row[j].is_zero() {
                continue;
            }
            let factor = row[j].clone();
            for (v, pv) in row.iter_mut().zip(pivot_row.iter()) {
                if !pv.is_zero() {
                    *v = v.sub_(&factor.mul_(pv)?)?;
                }
            }
        }
        self.basis[r] = j;
        Some(())
    }

    /// After a feasible phase one, pivot artificials at level zero out of the
    /// basis (or drop their redundant rows).
    fn drive_out_artificials(&mut self) -> Option<()> {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(j) => self.pivot(r, j)?,
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        Some(())
    }
}

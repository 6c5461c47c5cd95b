//! Exact rational simplex method with Bland's anti-cycling rule.
//!
//! The core routine solves `min c·x` subject to `A x = b, x ≥ 0` with a
//! two-phase tableau. Inequality-form problems with free variables are
//! reduced to it by splitting variables and adding surplus columns.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{dot, solve_affine, Rat, RatMat, RatVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub x: RatVec,
    pub value: Rat,
    /// Basic columns of the optimal tableau, sorted.
    pub basis: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

struct Tableau {
    // m rows of width ncols + 1 (last entry is the right-hand side)
    rows: Vec<RatVec>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[Rat], j: usize) -> Rat {
        let mut z = cost[j].clone();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if !row[j].is_zero() && !cost[b].is_zero() {
                z -= &cost[b] * &row[j];
            }
        }
        z
    }

    /// Runs the simplex loop with Bland's rule over the allowed columns.
    /// Returns `false` when the objective is unbounded below.
    fn optimize(&mut self, cost: &[Rat], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j).is_negative());
            let Some(e) = entering else { return true };
            let rhs = self.ncols;
            let mut best: Option<(Rat, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[e].is_positive() {
                    let ratio = &row[rhs] / &row[e];
                    let better = match &best {
                        None => true,
                        Some((r, _, b)) => ratio < *r || (ratio == *r && self.basis[i] < *b),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            let Some((_, leave, _)) = best else { return false };
            self.pivot(leave, e);
        }
    }
}

/// Minimizes `c·x` subject to `A x = b`, `x ≥ 0`.
pub fn minimize_standard(a: &RatMat, b: &[Rat], c: &[Rat]) -> Result<LpOutcome> {
    let m = a.nrows();
    let n = a.ncols();
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: b.len(),
        });
    }
    if c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }
    let ncols = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let neg = b[i].is_negative();
        let mut row: RatVec = (0..n)
            .map(|j| if neg { -a[(i, j)].clone() } else { a[(i, j)].clone() })
            .collect();
        row.extend((0..m).map(|k| {
            if k == i {
                Rat::from_integer(1.into())
            } else {
                Rat::zero()
            }
        }));
        row.push(if neg { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        ncols,
    };
    let phase1: RatVec = (0..ncols)
        .map(|j| {
            if j >= n {
                Rat::from_integer(1.into())
            } else {
                Rat::zero()
            }
        })
        .collect();
    t.optimize(&phase1, ncols);
    let infeas: Rat = t
        .rows
        .iter()
        .zip(&t.basis)
        .filter(|(_, &bv)| bv >= n)
        .map(|(r, _)| r[ncols].clone())
        .fold(Rat::zero(), |a, x| a + x);
    if infeas.is_positive() {
        return Ok(LpOutcome::Infeasible);
    }
    // drive artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero() && !t.basis.contains(&j)) {
                t.pivot(i, j);
                i += 1;
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    let mut cost: RatVec = c.to_vec();
    cost.extend(std::iter::repeat_n(Rat::zero(), m));
    if !t.optimize(&cost, n) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        x[bv] = row[ncols].clone();
    }
    let value = dot(c, &x);
    let mut basis = t.basis.clone();
    basis.sort_unstable();
    Ok(LpOutcome::Optimal(LpSolution { x, value, basis }))
}

/// The basic solution of `A x = b` supported on `basis`, if it is unique.
pub fn basic_solution(a: &RatMat, b: &[Rat], basis: &[usize]) -> Option<RatVec> {
    let rows: Vec<RatVec> = (0..a.nrows())
        .map(|i| basis.iter().map(|&j| a[(i, j)].clone()).collect())
        .collect();
    let ab = RatMat::from_rows(basis.len(), &rows).ok()?;
    let sol = solve_affine(&ab, b).ok()?;
    if !sol.kernel.is_empty() {
        return None;
    }
    let mut x = vec![Rat::zero(); a.ncols()];
    for (v, &j) in sol.particular.into_iter().zip(basis) {
        x[j] = v;
    }
    Some(x)
}

/// Inequality-form problem over free variables:
/// `min c·x` subject to `G x ≥ h` and `E x = f`.
#[derive(Clone, Debug, Default)]
pub struct IneqLp {
    pub dim: usize,
    pub ge_rows: Vec<RatVec>,
    pub ge_rhs: Vec<Rat>,
    pub eq_rows: Vec<RatVec>,
    pub eq_rhs: Vec<Rat>,
}

impl IneqLp {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            ..Default::default()
        }
    }

    pub fn ge(&mut self, row: RatVec, rhs: Rat) -> &mut Self {
        self.ge_rows.push(row);
        self.ge_rhs.push(rhs);
        self
    }

    pub fn eq(&mut self, row: RatVec, rhs: Rat) -> &mut Self {
        self.eq_rows.push(row);
        self.eq_rhs.push(rhs);
        self
    }

    /// Returns the optimal point and value, `Ok(None)` when infeasible.
    pub fn minimize(&self, c: &[Rat]) -> Result<Option<(RatVec, Rat)>> {
        let n = self.dim;
        let g = self.ge_rows.len();
        let width = 2 * n + g;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (k, (row, h)) in self.ge_rows.iter().zip(&self.ge_rhs).enumerate() {
            let mut r: RatVec = row.clone();
            r.extend(row.iter().map(|x| -x.clone()));
            r.extend((0..g).map(|j| {
                if j == k {
                    Rat::from_integer((-1).into())
                } else {
                    Rat::zero()
                }
            }));
            rows.push(r);
            rhs.push(h.clone());
        }
        for (row, f) in self.eq_rows.iter().zip(&self.eq_rhs) {
            let mut r: RatVec = row.clone();
            r.extend(row.iter().map(|x| -x.clone()));
            r.extend(std::iter::repeat_n(Rat::zero(), g));
            rows.push(r);
            rhs.push(f.clone());
        }
        let a = RatMat::from_rows(width, &rows)?;
        let mut cost: RatVec = c.to_vec();
        cost.extend(c.iter().map(|x| -x.clone()));
        cost.extend(std::iter::repeat_n(Rat::zero(), g));
        match minimize_standard(&a, &rhs, &cost)? {
            LpOutcome::Optimal(sol) => {
                let x: RatVec = (0..n).map(|i| &sol.x[i] - &sol.x[n + i]).collect();
                Ok(Some((x, sol.value)))
            }
            LpOutcome::Infeasible => Ok(None),
            LpOutcome::Unbounded => Err(Error::Unbounded),
        }
    }

    pub fn feasible_point(&self) -> Result<Option<RatVec>> {
        Ok(self.minimize(&vec![Rat::zero(); self.dim])?.map(|(x, _)| x))
    }
}

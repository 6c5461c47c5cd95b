use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{sub, Rat, RatVec};
use crate::error::{Error, Result};

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[RatVec]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<RatVec> = rows.iter().map(|r| super::rvec(r)).collect();
        Self::from_rows(cols, &rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> Vec<RatVec> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<RatVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| super::dot(self.row(i), v)).collect())
    }

    pub fn mul(&self, other: &RatMat) -> Result<RatMat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        Ok(out)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<RatMat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = RatMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rat::one();
        }
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = RatMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form together with the pivot columns.
pub fn rref(m: &RatMat) -> (RatMat, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, row * a.cols + j);
            }
        }
        let inv = a[(row, col)].recip();
        for j in col..a.cols {
            let v = &a[(row, j)] * &inv;
            a[(row, j)] = v;
        }
        for r in 0..a.rows {
            if r == row || a[(r, col)].is_zero() {
                continue;
            }
            let f = a[(r, col)].clone();
            for j in col..a.cols {
                let v = &f * &a[(row, j)];
                a[(r, j)] -= v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank(m: &RatMat) -> usize {
    rref(m).1.len()
}

/// Basis of `{v : A v = 0}`, one vector per free column, in canonical order.
pub fn kernel(m: &RatMat) -> Vec<RatVec> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); m.cols];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            v
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: RatVec,
    pub kernel: Vec<RatVec>,
}

/// One solution of `A x = b` (free variables set to zero) plus a kernel basis.
pub fn solve_affine(a: &RatMat, b: &[Rat]) -> Result<AffineSolution> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            found: b.len(),
        });
    }
    let mut aug = RatMat::zeros(a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols)] = b[i].clone();
    }
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&a.cols) {
        return Err(Error::Inconsistent);
    }
    let mut x = vec![Rat::zero(); a.cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[(i, a.cols)].clone();
    }
    Ok(AffineSolution {
        particular: x,
        kernel: kernel(a),
    })
}

/// An affine subspace `base_point + span(directions)` of `Q^n` in canonical
/// form: directions are the nonzero rows of a reduced echelon matrix and the
/// base point vanishes on their pivot columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineSubspace {
    #[serde(with = "crate::serial::rat_vec")]
    base_point: RatVec,
    #[serde(with = "crate::serial::rat_vecs")]
    directions: Vec<RatVec>,
}

impl AffineSubspace {
    pub fn new(base_point: RatVec, directions: &[RatVec]) -> Result<Self> {
        let n = base_point.len();
        let dm = RatMat::from_rows(n, directions)?;
        let (r, pivots) = rref(&dm);
        let directions: Vec<RatVec> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        let mut base = base_point;
        for (dir, &p) in directions.iter().zip(&pivots) {
            if !base[p].is_zero() {
                let c = base[p].clone();
                for j in 0..n {
                    base[j] -= &c * &dir[j];
                }
            }
        }
        Ok(Self {
            base_point: base,
            directions,
        })
    }

    pub fn point(p: RatVec) -> Self {
        Self {
            base_point: p,
            directions: Vec::new(),
        }
    }

    pub fn whole(n: usize) -> Self {
        let dirs: Vec<RatVec> = RatMat::identity(n).rows();
        Self::new(vec![Rat::zero(); n], &dirs).expect("consistent dimensions")
    }

    pub fn base_point(&self) -> &[Rat] {
        &self.base_point
    }

    pub fn directions(&self) -> &[RatVec] {
        &self.directions
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base_point.len()
    }

    /// Whether `v` lies in the direction space.
    pub fn contains_direction(&self, v: &[Rat]) -> bool {
        let mut rows = self.directions.clone();
        rows.push(v.to_vec());
        let m = RatMat::from_rows(self.ambient_dim(), &rows).expect("dims");
        rank(&m) == self.dim()
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        p.len() == self.ambient_dim() && self.contains_direction(&sub(p, &self.base_point))
    }

    pub fn contains_subspace(&self, other: &AffineSubspace) -> bool {
        self.contains(&other.base_point) && other.directions.iter().all(|d| self.contains_direction(d))
    }

    /// Image under the linear map `x ↦ λ x`.
    pub fn image(&self, lambda: &RatMat) -> Result<AffineSubspace> {
        let base = lambda.mul_vec(&self.base_point)?;
        let dirs = self
            .directions
            .iter()
            .map(|d| lambda.mul_vec(d))
            .collect::<Result<Vec<_>>>()?;
        AffineSubspace::new(base, &dirs)
    }

    /// Pivot columns of the direction basis.
    pub fn pivots(&self) -> Vec<usize> {
        self.directions
            .iter()
            .map(|d| d.iter().position(|x| !x.is_zero()).expect("nonzero row"))
            .collect()
    }
}

/// Smallest affine subspace containing every point, in canonical form.
pub fn affine_hull(points: &[RatVec]) -> Result<AffineSubspace> {
    let first = points.first().ok_or(Error::EmptyInput("affine_hull needs a point"))?;
    for p in points {
        if p.len() != first.len() {
            return Err(Error::DimensionMismatch {
                expected: first.len(),
                found: p.len(),
            });
        }
    }
    let dirs: Vec<RatVec> = points[1..].iter().map(|p| sub(p, first)).collect();
    AffineSubspace::new(first.clone(), &dirs)
}

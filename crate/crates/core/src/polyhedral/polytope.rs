use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cone::{subsets, RationalCone};
use crate::error::{Error, Result};
use crate::exact::{affine_hull, dot, primitive_int, rank, solve_affine, Rat, RatMat, RatVec};
use crate::lp::{minimize_standard, IneqLp, LpOutcome};

/// Halfspace description `a0 + a·x >= 0` (inequalities) and `a0 + a·x = 0`
/// (equations), each stored as `[a0, a...]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub inequalities: Vec<RatVec>,
    pub equations: Vec<RatVec>,
}

/// Convex hull of finitely many rational points, stored by its vertices in
/// lexicographic order. May be empty.
#[derive(Clone, Debug)]
pub struct RationalPolytope {
    dim: usize,
    vertices: Vec<RatVec>,
    hrep: OnceLock<HRep>,
}

impl PartialEq for RationalPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for RationalPolytope {}

fn in_hull(p: &[Rat], others: &[&RatVec]) -> bool {
    if others.is_empty() {
        return false;
    }
    let d = p.len();
    let k = others.len();
    let mut rows: Vec<RatVec> = (0..d).map(|i| others.iter().map(|q| q[i].clone()).collect()).collect();
    rows.push(vec![Rat::one(); k]);
    let a = RatMat::from_rows(k, &rows).expect("dims");
    let mut b = p.to_vec();
    b.push(Rat::one());
    matches!(
        minimize_standard(&a, &b, &vec![Rat::zero(); k]),
        Ok(LpOutcome::Optimal(_))
    )
}

impl RationalPolytope {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            vertices: Vec::new(),
            hrep: OnceLock::new(),
        }
    }

    /// Convex hull of `points`; only extreme points are kept.
    pub fn from_points(dim: usize, points: &[RatVec]) -> Result<Self> {
        let mut pts = BTreeSet::new();
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            pts.insert(p.clone());
        }
        let pts: Vec<RatVec> = pts.into_iter().collect();
        let vertices = pts
            .iter()
            .enumerate()
            .filter(|(i, p)| {
                let others: Vec<&RatVec> = pts.iter().enumerate().filter(|(j, _)| j != i).map(|(_, q)| q).collect();
                !in_hull(p, &others)
            })
            .map(|(_, p)| p.clone())
            .collect();
        Ok(Self {
            dim,
            vertices,
            hrep: OnceLock::new(),
        })
    }

    /// Vertex enumeration of the bounded polyhedron
    /// `{x : G x >= h, E x = f}`. Unbounded input is rejected.
    pub fn from_halfspaces(dim: usize, ge: &[(RatVec, Rat)], eq: &[(RatVec, Rat)]) -> Result<Self> {
        let mut lp = IneqLp::new(dim);
        for (r, h) in ge {
            lp.ge(r.clone(), h.clone());
        }
        for (r, f) in eq {
            lp.eq(r.clone(), f.clone());
        }
        if lp.feasible_point()?.is_none() {
            return Ok(Self::empty(dim));
        }
        for i in 0..dim {
            for s in [1, -1] {
                let mut c = vec![Rat::zero(); dim];
                c[i] = Rat::from_integer(s.into());
                match lp.minimize(&c) {
                    Err(Error::Unbounded) => return Err(Error::Precondition("polyhedron is unbounded".into())),
                    Err(e) => return Err(e),
                    Ok(_) => {}
                }
            }
        }
        let eq_rows: Vec<RatVec> = eq.iter().map(|(r, _)| r.clone()).collect();
        let re = if eq_rows.is_empty() {
            0
        } else {
            rank(&RatMat::from_rows(dim, &eq_rows)?)
        };
        let k = dim - re;
        let mut verts = BTreeSet::new();
        for s in subsets(ge.len(), k) {
            let mut rows = eq_rows.clone();
            let mut rhs: RatVec = eq.iter().map(|(_, f)| f.clone()).collect();
            for &i in &s {
                rows.push(ge[i].0.clone());
                rhs.push(ge[i].1.clone());
            }
            let a = if rows.is_empty() {
                RatMat::zeros(0, dim)
            } else {
                RatMat::from_rows(dim, &rows)?
            };
            let Ok(sol) = solve_affine(&a, &rhs) else { continue };
            if !sol.kernel.is_empty() {
                continue;
            }
            let x = sol.particular;
            if ge.iter().all(|(r, h)| dot(r, &x) >= *h) {
                verts.insert(x);
            }
        }
        Ok(Self {
            dim,
            vertices: verts.into_iter().collect(),
            hrep: OnceLock::new(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension of the affine hull, `-1` when empty.
    pub fn polytope_dim(&self) -> i64 {
        match affine_hull(&self.vertices) {
            Ok(h) => h.dim() as i64,
            Err(_) => -1,
        }
    }

    /// The facet description, computed once from the homogenized cone.
    pub fn hrep(&self) -> &HRep {
        self.hrep.get_or_init(|| {
            if self.vertices.is_empty() {
                let mut e = vec![Rat::zero(); self.dim + 1];
                e[0] = Rat::one();
                return HRep {
                    inequalities: Vec::new(),
                    equations: vec![e],
                };
            }
            let gens: Vec<Vec<i64>> = self
                .vertices
                .iter()
                .map(|v| {
                    let mut h = vec![Rat::one()];
                    h.extend(v.iter().cloned());
                    primitive_int(&h).expect("nonzero homogenized vertex")
                })
                .collect();
            let cone = RationalCone::new(self.dim + 1, &gens).expect("dims");
            let conv = |r: &Vec<i64>| r.iter().map(|&x| Rat::from_integer(x.into())).collect::<RatVec>();
            HRep {
                inequalities: cone.facets().iter().map(conv).collect(),
                equations: cone.equations().iter().map(conv).collect(),
            }
        })
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        if self.vertices.is_empty() || x.len() != self.dim {
            return false;
        }
        let h = self.hrep();
        let val = |r: &RatVec| &r[0] + dot(&r[1..], x);
        h.equations.iter().all(|e| val(e).is_zero()) && h.inequalities.iter().all(|u| !val(u).is_negative())
    }

    /// All integer points, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        if self.vertices.is_empty() {
            return Vec::new();
        }
        let lo: Vec<i64> = (0..self.dim)
            .map(|i| {
                self.vertices
                    .iter()
                    .map(|v| v[i].ceil())
                    .min()
                    .unwrap()
                    .to_integer()
                    .to_i64()
                    .unwrap()
            })
            .collect();
        let hi: Vec<i64> = (0..self.dim)
            .map(|i| {
                self.vertices
                    .iter()
                    .map(|v| v[i].floor())
                    .max()
                    .unwrap()
                    .to_integer()
                    .to_i64()
                    .unwrap()
            })
            .collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let r: RatVec = cur.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect();
            if self.contains(&r) {
                out.push(cur.clone());
            }
            let mut i = self.dim;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] > hi[i] {
                    cur[i] = lo[i];
                } else {
                    break;
                }
            }
        }
    }
}

/// `R_+ B`, the cone over a rational polytope.
pub fn cone_over_polytope(b: &RationalPolytope) -> Result<RationalCone> {
    if b.is_empty() {
        return Err(Error::EmptyInput("polytope must be nonempty"));
    }
    let gens: Vec<Vec<i64>> = b.vertices().iter().filter_map(|v| primitive_int(v)).collect();
    RationalCone::new(b.ambient_dim(), &gens)
}

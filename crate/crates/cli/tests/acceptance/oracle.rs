//! Brute-force reference computations, written without the library's
//! polyhedral or Diophantine machinery.

use std::collections::BTreeMap;

use conecalc::diophantine::{Symbol, SymbolicNumber};
use conecalc::exact::Rat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub fn q(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn qf(p: i64, d: i64) -> Rat {
    Rat::new(p.into(), d.into())
}

pub fn qv(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn qdot(a: &[Rat], b: &[i64]) -> Rat {
    a.iter().zip(b).map(|(x, &y)| x * q(y)).sum()
}

/// Row rank by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                for j in 0..cols {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn in_span(v: &[Rat], dirs: &[Vec<Rat>]) -> bool {
    let mut with = dirs.to_vec();
    with.push(v.to_vec());
    rank(with) == rank(dirs.to_vec())
}

/// Unique solution of a square system, if any.
pub fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in 0..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
                let t = &f * &b[c];
                b[i] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Nonnegative rational coefficients writing `b` over linearly independent
/// columns drawn from `gens`, by Carathéodory's theorem.
pub fn cone_coefficients(gens: &[Vec<i64>], b: &[i64]) -> Option<Vec<Rat>> {
    let d = b.len();
    for k in 1..=gens.len().min(d) {
        for cols in subsets(gens.len(), k) {
            let mut rows: Vec<Vec<Rat>> = (0..d)
                .map(|j| cols.iter().map(|&c| q(gens[c][j])).chain([q(b[j])]).collect())
                .collect();
            if rank(rows.iter().map(|r| r[..k].to_vec()).collect()) < k {
                continue;
            }
            let mut r = 0;
            for c in 0..k {
                let p = (r..d).find(|&i| !rows[i][c].is_zero()).expect("independent columns");
                rows.swap(r, p);
                let pivot = rows[r][c].clone();
                rows[r].iter_mut().for_each(|x| *x /= &pivot);
                for i in 0..d {
                    if i != r && !rows[i][c].is_zero() {
                        let f = rows[i][c].clone();
                        for j in 0..=k {
                            let t = &f * &rows[r][j];
                            rows[i][j] -= t;
                        }
                    }
                }
                r += 1;
            }
            let consistent = rows[k..].iter().all(|row| row[k].is_zero());
            let lambda: Vec<Rat> = rows[..k].iter().map(|row| row[k].clone()).collect();
            if consistent && lambda.iter().all(|x| !x.is_negative()) {
                let mut full = vec![Rat::zero(); gens.len()];
                for (c, l) in cols.iter().zip(lambda) {
                    full[*c] = l;
                }
                return Some(full);
            }
        }
    }
    None
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn cross(a: &[i64], b: &[i64]) -> Vec<i64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Every integer point of the box `lo..=hi`.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for (&a, &b) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (a..=b).map(move |x| {
                    let mut p = p.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// A full-dimensional pointed cone in dimension 2 or 3, described by the
/// inner normals of all supporting planes spanned by its rays.
pub struct Cone {
    pub rays: Vec<Vec<i64>>,
    pub normals: Vec<Vec<i64>>,
    pub grading: Vec<i64>,
}

impl Cone {
    pub fn new(rays: &[Vec<i64>]) -> Option<Cone> {
        let d = rays.first()?.len();
        let candidates: Vec<Vec<i64>> = match d {
            2 => rays.iter().map(|r| vec![-r[1], r[0]]).collect(),
            3 => subsets(rays.len(), 2)
                .iter()
                .map(|p| cross(&rays[p[0]], &rays[p[1]]))
                .collect(),
            _ => return None,
        };
        let mut normals = Vec::new();
        for c in candidates {
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            for n in [c.clone(), c.iter().map(|x| -x).collect()] {
                if rays.iter().all(|r| dot(&n, r) >= 0) && !normals.contains(&n) {
                    normals.push(n);
                }
            }
        }
        let spans = rank(rays.iter().map(|r| qv(r)).collect()) == d;
        let grading = box_points(&vec![-4; d], &vec![4; d])
            .into_iter()
            .find(|g| rays.iter().all(|r| dot(g, r) > 0))?;
        spans.then(|| Cone {
            rays: rays.to_vec(),
            normals,
            grading,
        })
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.normals.iter().all(|n| dot(n, x) >= 0)
    }
}

/// Irreducible lattice points of the cone, lexicographically sorted. Every
/// irreducible element lies in the zonotope spanned by the rays, and a
/// reducible one dominates an irreducible one of smaller degree.
pub fn hilbert_basis(cone: &Cone) -> Vec<Vec<i64>> {
    let d = cone.grading.len();
    let lo: Vec<i64> = (0..d).map(|j| cone.rays.iter().map(|r| r[j].min(0)).sum()).collect();
    let hi: Vec<i64> = (0..d).map(|j| cone.rays.iter().map(|r| r[j].max(0)).sum()).collect();
    let mut pts: Vec<Vec<i64>> = box_points(&lo, &hi)
        .into_iter()
        .filter(|x| x.iter().any(|&c| c != 0) && cone.contains(x))
        .collect();
    pts.sort_by_key(|x| dot(&cone.grading, x));
    let mut hb: Vec<Vec<i64>> = Vec::new();
    for x in pts {
        if !hb
            .iter()
            .any(|h| cone.contains(&x.iter().zip(h).map(|(a, b)| a - b).collect::<Vec<_>>()))
        {
            hb.push(x);
        }
    }
    hb.sort();
    hb
}

/// Minimal generators of a graded submonoid of `Z^d`, given by membership,
/// among elements of degree at most the bound.
pub fn irreducibles(
    mut elems: Vec<Vec<i64>>,
    degree: impl Fn(&[i64]) -> i64,
    member: impl Fn(&[i64]) -> bool,
) -> Vec<Vec<i64>> {
    elems.retain(|x| degree(x) > 0);
    elems.sort_by_key(|x| degree(x));
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for x in elems {
        if !gens
            .iter()
            .any(|g| member(&x.iter().zip(g).map(|(a, b)| a - b).collect::<Vec<_>>()))
        {
            gens.push(x);
        }
    }
    gens.sort();
    gens
}

// ---------------------------------------------------------------------------
// Quadratic irrationals.

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// `lo <= √n <= hi` with `hi - lo = 10^-digits`.
pub fn sqrt_enclosure(n: u64, digits: u32) -> (Rat, Rat) {
    let s = pow10(digits);
    let r = (BigInt::from(n) * &s * &s).sqrt();
    (Rat::new(r.clone(), s.clone()), Rat::new(r + 1, s))
}

/// An interval containing the real value.
pub fn enclose(x: &SymbolicNumber, digits: u32) -> (Rat, Rat) {
    let mut lo = x.rational_part().clone();
    let mut hi = lo.clone();
    for (sym, c) in x.terms() {
        let Symbol::Sqrt(n) = sym else {
            panic!("only square roots are supported");
        };
        let (a, b) = sqrt_enclosure(*n, digits);
        if c.is_positive() {
            lo += c * &a;
            hi += c * &b;
        } else {
            lo += c * &b;
            hi += c * &a;
        }
    }
    (lo, hi)
}

pub fn to_f64(x: &SymbolicNumber) -> f64 {
    let (lo, _) = enclose(x, 20);
    conecalc::exact::to_f64(&lo)
}

/// Proves `max_i |v_i| < bound` by refining enclosures.
pub fn norm_below(v: &[SymbolicNumber], bound: &Rat) -> bool {
    [12, 30, 60, 120].iter().any(|&digits| {
        v.iter().all(|x| {
            let (lo, hi) = enclose(x, digits);
            lo.abs().max(hi.abs()) < *bound
        })
    })
}

pub fn positive(x: &SymbolicNumber) -> bool {
    [12, 30, 60, 120]
        .iter()
        .any(|&digits| enclose(x, digits).0.is_positive())
}

/// Coordinates over the basis `1, √2, √3, ...`; the key `None` is the
/// rational part.
pub type Form = BTreeMap<Option<Symbol>, Rat>;

pub fn form(x: &SymbolicNumber) -> Form {
    let mut f = Form::new();
    f.insert(None, x.rational_part().clone());
    for (s, c) in x.terms() {
        *f.entry(Some(s.clone())).or_insert_with(Rat::zero) += c;
    }
    f.retain(|_, c| !c.is_zero());
    f
}

pub fn form_axpy(acc: &mut Form, c: &Rat, x: &Form) {
    for (k, v) in x {
        *acc.entry(k.clone()).or_insert_with(Rat::zero) += c * v;
    }
    acc.retain(|_, c| !c.is_zero());
}

/// The smallest rational affine subspace through a point with quadratic
/// irrational coordinates: a base point and spanning directions.
pub fn rational_hull(x: &[SymbolicNumber]) -> (Vec<Rat>, Vec<Vec<Rat>>) {
    let forms: Vec<Form> = x.iter().map(form).collect();
    let base = forms
        .iter()
        .map(|f| f.get(&None).cloned().unwrap_or_else(Rat::zero))
        .collect();
    let mut keys: Vec<Symbol> = forms.iter().flat_map(|f| f.keys().flatten().cloned()).collect();
    keys.sort();
    keys.dedup();
    let dirs = keys
        .iter()
        .map(|k| {
            forms
                .iter()
                .map(|f| f.get(&Some(k.clone())).cloned().unwrap_or_else(Rat::zero))
                .collect()
        })
        .collect();
    (base, dirs)
}

pub fn in_hull(w: &[Rat], hull: &(Vec<Rat>, Vec<Vec<Rat>>)) -> bool {
    let diff: Vec<Rat> = w.iter().zip(&hull.0).map(|(a, b)| a - b).collect();
    in_span(&diff, &hull.1)
}

/// Convergents `p/q` of the continued fraction of `√n`.
pub fn sqrt_convergents(n: u64, count: usize) -> Vec<(i64, i64)> {
    let a0 = (n as f64).sqrt().floor() as i64;
    let (mut m, mut d, mut a) = (0i64, 1i64, a0);
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, a0, 1i64);
    let mut out = vec![(p1, q1)];
    while out.len() < count {
        m = d * a - m;
        d = (n as i64 - m * m) / d;
        a = (a0 + m) / d;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        out.push((p2, q2));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    out
}

// ---------------------------------------------------------------------------
// Toric divisors: `P_D = {m : <m, v_ρ> >= -a_ρ}` on a complete fan.

pub struct DivisorPolytope {
    pub rays: Vec<Vec<i64>>,
    pub a: Vec<Rat>,
    pub vertices: Vec<Vec<Rat>>,
}

impl DivisorPolytope {
    pub fn new(rays: &[Vec<i64>], a: &[Rat]) -> Self {
        let d = rays[0].len();
        let mut vertices: Vec<Vec<Rat>> = Vec::new();
        for s in subsets(rays.len(), d) {
            let m = solve(
                s.iter().map(|&i| qv(&rays[i])).collect(),
                s.iter().map(|&i| -&a[i]).collect(),
            );
            if let Some(m) = m {
                let feasible = rays.iter().zip(a).all(|(r, ai)| qdot(&m, r) + ai >= Rat::zero());
                if feasible && !vertices.contains(&m) {
                    vertices.push(m);
                }
            }
        }
        vertices.sort();
        Self {
            rays: rays.to_vec(),
            a: a.to_vec(),
            vertices,
        }
    }

    /// `min_{m ∈ P_D} <m, v_ρ> + a_ρ` for every ray.
    pub fn ord(&self) -> Option<Vec<Rat>> {
        if self.vertices.is_empty() {
            return None;
        }
        Some(
            self.rays
                .iter()
                .zip(&self.a)
                .map(|(r, ai)| self.vertices.iter().map(|m| qdot(m, r) + ai).min().unwrap())
                .collect(),
        )
    }

    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        if self.vertices.is_empty() {
            return vec![];
        }
        let d = self.rays[0].len();
        let lo: Vec<i64> = (0..d)
            .map(|j| {
                self.vertices
                    .iter()
                    .map(|v| v[j].floor().to_integer())
                    .min()
                    .unwrap()
                    .try_into()
                    .unwrap()
            })
            .collect();
        let hi: Vec<i64> = (0..d)
            .map(|j| {
                self.vertices
                    .iter()
                    .map(|v| v[j].ceil().to_integer())
                    .max()
                    .unwrap()
                    .try_into()
                    .unwrap()
            })
            .collect();
        box_points(&lo, &hi)
            .into_iter()
            .filter(|m| {
                self.rays
                    .iter()
                    .zip(&self.a)
                    .all(|(r, ai)| q(dot(m, r)) + ai >= Rat::zero())
            })
            .collect()
    }

    /// Fixed part: `min` over lattice points of `<m, v_ρ> + a_ρ`.
    pub fn fix(&self) -> Option<Vec<Rat>> {
        let pts = self.lattice_points();
        if pts.is_empty() {
            return None;
        }
        Some(
            self.rays
                .iter()
                .zip(&self.a)
                .map(|(r, ai)| pts.iter().map(|m| q(dot(m, r)) + ai).min().unwrap())
                .collect(),
        )
    }
}

pub fn positive_support(v: &[Rat]) -> Vec<usize> {
    (0..v.len()).filter(|&i| v[i].is_positive()).collect()
}

/// Basis of `{y : <r, y> = 0 for every row r}`.
pub fn nullspace(rows: &[Vec<Rat>], n: usize) -> Vec<Vec<Rat>> {
    let mut a = rows.to_vec();
    let mut pivots = Vec::new();
    for c in 0..n {
        let r = pivots.len();
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let lead = a[r][c].clone();
        for x in &mut a[r] {
            *x /= &lead;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut y = vec![Rat::zero(); n];
            y[free] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                y[pc] = -a[r][free].clone();
            }
            y
        })
        .collect()
}

/// Whether `v` is an integer combination of `gens`, by Euclidean column
/// elimination.
pub fn in_int_span(gens: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut g = gens.to_vec();
    let mut v = v.to_vec();
    let mut top = 0;
    for c in 0..v.len() {
        loop {
            let nz: Vec<usize> = (top..g.len()).filter(|&i| !g[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    g.swap(top, i);
                }
                break;
            }
            let m = *nz.iter().min_by_key(|&&i| g[i][c].abs()).unwrap();
            for &i in &nz {
                if i != m {
                    let f = &g[i][c] / &g[m][c];
                    let gm = g[m].clone();
                    for (x, y) in g[i].iter_mut().zip(&gm) {
                        *x -= &f * y;
                    }
                }
            }
        }
        if top < g.len() && !g[top][c].is_zero() {
            if !(&v[c] % &g[top][c]).is_zero() {
                return false;
            }
            let f = &v[c] / &g[top][c];
            for (x, y) in v.iter_mut().zip(&g[top]) {
                *x -= &f * y;
            }
            top += 1;
        } else if !v[c].is_zero() {
            return false;
        }
    }
    true
}

/// Whether `d ∈ V0 + Λ` with `V0` the real span of `v0` and `Λ` spanned by
/// `lattice`: project along `V0` and test lattice membership.
pub fn in_subspace_plus_lattice(d: &[Rat], v0: &[Vec<Rat>], lattice: &[Vec<i64>]) -> bool {
    let n = d.len();
    let p = nullspace(v0, n);
    let project = |x: &[Rat]| -> Vec<Rat> {
        p.iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    };
    let mut images: Vec<Vec<Rat>> = lattice.iter().map(|b| project(&qv(b))).collect();
    images.push(project(d));
    let den = images
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let scaled: Vec<Vec<BigInt>> = images
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| (x * Rat::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    let (target, gens) = scaled.split_last().unwrap();
    in_int_span(gens, target)
}

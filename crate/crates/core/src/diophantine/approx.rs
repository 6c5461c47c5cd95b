use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::symbolic::{certify_norm_lt, sym_scale, sym_sub, NormBound, SymbolicNumber, SymbolicPoint};
use crate::error::{Error, Result};
use crate::exact::{
    hermite_basis_in, is_integral, primitive_int, saturated_basis, scale, sub, to_f64, to_rat_vec, AffineSubspace, Rat,
    RatMat, RatVec,
};

/// Default number of multiples tried by the searches.
pub const DEFAULT_BUDGET: u64 = 4_000_000;

/// One vertex `w_i` of an approximating simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxPoint {
    #[serde(with = "crate::serial::rat_vec")]
    pub w: RatVec,
    pub k: i64,
    pub weight: SymbolicNumber,
    /// Certified `lo <= r_i <= hi` with `lo > 0`.
    #[serde(with = "crate::serial::rat_vec")]
    pub weight_interval: RatVec,
    /// Certified `‖x - w_i‖ <= upper < ε / k_i`.
    pub distance: NormBound,
}

/// The two-anchor identity `x = k1/(k1+k2) w1 + k2/(k1+k2) w2 + ξ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnchorData {
    pub k1: i64,
    pub k2: i64,
    #[serde(with = "crate::serial::rat")]
    pub eta: Rat,
    pub xi: Vec<SymbolicNumber>,
    /// Certified `‖ξ‖ (k1 + k2) <= upper < η`.
    pub xi_scaled: NormBound,
    /// `w_t = t w1 + (1 - t) w2`, a rational point of `W`.
    #[serde(with = "crate::serial::rat_vec")]
    pub w_t: RatVec,
    #[serde(with = "crate::serial::rat")]
    pub t: Rat,
    /// `y / k2` with `y = (k1 + k2) w_t - k1 x`, a point of `W`.
    pub y_over_k2: Vec<SymbolicNumber>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxCertificate {
    pub x: SymbolicPoint,
    pub subspace: AffineSubspace,
    #[serde(with = "crate::serial::rat")]
    pub epsilon: Rat,
    pub k: i64,
    pub points: Vec<ApproxPoint>,
    pub anchor: Option<AnchorData>,
}

/// Integer points of the cone over `W`: for `j = N' m` they are exactly
/// `m z* + Σ c_l u_l`, with `u_l` a basis of `U ∩ Z^n`.
struct Chart {
    r: usize,
    order: i64,
    z_star: Vec<i64>,
    u: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    /// `N' x - z*`, a symbolic vector of `U`.
    y: Vec<SymbolicNumber>,
    /// Coordinates of `y` in the basis `u`.
    beta: Vec<SymbolicNumber>,
    beta_f: Vec<f64>,
}

#[derive(Clone)]
struct Candidate {
    j: i64,
    z: Vec<i64>,
    /// `j x - z`
    e: Vec<SymbolicNumber>,
    e_f: Vec<f64>,
}

impl Candidate {
    fn point(&self) -> RatVec {
        let j = Rat::from_integer(BigInt::from(self.j));
        self.z
            .iter()
            .map(|&a| Rat::from_integer(BigInt::from(a)) / &j)
            .collect()
    }
}

impl Chart {
    fn new(x: &SymbolicPoint) -> Result<Self> {
        let n = x.dim();
        let w = x.hull();
        let r = w.dim();
        let mut homog = vec![Rat::one()];
        homog.extend(w.base_point().iter().cloned());
        let mut gens = vec![primitive_int(&homog).expect("nonzero")];
        for d in w.directions() {
            let mut h = vec![Rat::zero()];
            h.extend(d.iter().cloned());
            gens.push(primitive_int(&h).expect("nonzero direction"));
        }
        let hnf = hermite_basis_in(n + 1, &saturated_basis(n + 1, &gens));
        let rows = hnf.basis();
        debug_assert_eq!(rows.len(), r + 1);
        let order = rows[0][0];
        let z_star = rows[0][1..].to_vec();
        let u: Vec<Vec<i64>> = rows[1..].iter().map(|row| row[1..].to_vec()).collect();
        let pivots = w.pivots();
        let y: Vec<SymbolicNumber> = x
            .coords()
            .iter()
            .zip(&z_star)
            .map(|(c, &z)| {
                c.scale(&Rat::from_integer(BigInt::from(order)))
                    .add_rat(&-Rat::from_integer(BigInt::from(z)))
            })
            .collect();
        let beta = if r == 0 {
            Vec::new()
        } else {
            let a_rows: Vec<Vec<i64>> = u.iter().map(|v| pivots.iter().map(|&p| v[p]).collect()).collect();
            let inv = RatMat::from_i64_rows(r, &a_rows)?.inverse().expect("basis of U ∩ Z^n");
            (0..r)
                .map(|l| {
                    (0..r).fold(SymbolicNumber::zero(), |acc, kk| {
                        acc.add(&y[pivots[kk]].scale(&inv[(kk, l)]))
                    })
                })
                .collect()
        };
        let beta_f = beta.iter().map(SymbolicNumber::to_f64).collect();
        Ok(Self {
            r,
            order,
            z_star,
            u,
            pivots,
            y,
            beta,
            beta_f,
        })
    }

    fn float_error(&self, m: i64, c: &[i64]) -> Vec<f64> {
        let n = self.z_star.len();
        let mut e = vec![0.0; n];
        for ((b, &cl), u) in self.beta_f.iter().zip(c).zip(&self.u) {
            let d = m as f64 * b - cl as f64;
            for (ei, &ui) in e.iter_mut().zip(u) {
                *ei += d * ui as f64;
            }
        }
        e
    }

    /// The candidate with `j = N' m` and rounding `c`.
    fn candidate(&self, m: i64, c: &[i64]) -> Candidate {
        let z: Vec<i64> = (0..self.z_star.len())
            .map(|i| m * self.z_star[i] + (0..self.r).map(|l| c[l] * self.u[l][i]).sum::<i64>())
            .collect();
        let mr = Rat::from_integer(BigInt::from(m));
        let e: Vec<SymbolicNumber> = self
            .y
            .iter()
            .enumerate()
            .map(|(i, yi)| {
                let shift: i64 = (0..self.r).map(|l| c[l] * self.u[l][i]).sum();
                yi.scale(&mr).add_rat(&-Rat::from_integer(BigInt::from(shift)))
            })
            .collect();
        Candidate {
            j: self.order * m,
            z,
            e,
            e_f: self.float_error(m, c),
        }
    }

    fn chart_dir(&self, e_f: &[f64]) -> Vec<f64> {
        self.pivots.iter().map(|&p| e_f[p]).collect()
    }
}

fn sup_f(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Weights `r_i` with `x = Σ r_i w_i`, `Σ r_i = 1`, solved in the chart of
/// `W`, or `None` if the vertices are affinely dependent.
fn barycentric(x: &SymbolicPoint, verts: &[RatVec]) -> Option<Vec<SymbolicNumber>> {
    let pivots = x.hull().pivots();
    let r = pivots.len();
    debug_assert_eq!(verts.len(), r + 1);
    let mut rows: Vec<RatVec> = pivots
        .iter()
        .map(|&p| verts.iter().map(|v| v[p].clone()).collect())
        .collect();
    rows.push(vec![Rat::one(); r + 1]);
    let inv = RatMat::from_rows(r + 1, &rows).ok()?.inverse()?;
    let mut rhs = x.chart();
    rhs.push(SymbolicNumber::from_rat(Rat::one()));
    Some(
        (0..=r)
            .map(|i| (0..=r).fold(SymbolicNumber::zero(), |acc, j| acc.add(&rhs[j].scale(&inv[(i, j)]))))
            .collect(),
    )
}

fn tidy_interval(lo: &Rat, hi: &Rat) -> RatVec {
    let mut scale = BigInt::from(10u32);
    for _ in 0..40 {
        let s = Rat::from_integer(scale.clone());
        let a = Rat::new((lo * &s).floor().to_integer(), scale.clone());
        if a.is_positive() {
            return vec![a, Rat::new((hi * &s).ceil().to_integer(), scale)];
        }
        scale *= 10;
    }
    vec![lo.clone(), hi.clone()]
}

/// Certified enclosure `[lo, hi]` with `lo > 0`, or `None` when `w <= 0`.
fn positive_interval(w: &SymbolicNumber) -> Result<Option<RatVec>> {
    if w.is_rational() {
        let q = w.rational_part();
        return Ok(q.is_positive().then(|| vec![q.clone(), q.clone()]));
    }
    if w.signum()? != std::cmp::Ordering::Greater {
        return Ok(None);
    }
    let mut prec = 64;
    loop {
        let (lo, hi) = w.enclosure(prec);
        if lo.is_positive() {
            return Ok(Some(tidy_interval(&lo, &hi)));
        }
        prec *= 2;
    }
}

fn check_positive(weights: &[SymbolicNumber]) -> Result<Option<Vec<RatVec>>> {
    let mut out = Vec::with_capacity(weights.len());
    for w in weights {
        match positive_interval(w)? {
            Some(iv) => out.push(iv),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Whether `0` is a strictly positive combination of `dirs` (`r + 1`
/// vectors in `R^r`), in floating point.
fn surrounds_origin(dirs: &[&[f64]]) -> bool {
    let n = dirs.len();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|row| {
            let mut v: Vec<f64> = dirs.iter().map(|d| if row + 1 < n { d[row] } else { 1.0 }).collect();
            v.push(f64::from(u8::from(row + 1 == n)));
            v
        })
        .collect();
    for col in 0..n {
        let Some(p) = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())) else {
            return false;
        };
        if a[p][col].abs() < 1e-12 {
            return false;
        }
        a.swap(col, p);
        let pivot = a[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != col {
                let f = row[col] / pivot[col];
                for (x, y) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= f * y;
                }
            }
        }
    }
    (0..n).all(|i| a[i][n] / a[i][i] > 1e-12)
}

/// Unit vertex directions of a regular simplex in `R^r`, the first one
/// along `first`.
fn simplex_targets(r: usize, first: &[f64]) -> Vec<Vec<f64>> {
    // orthonormal basis of the hyperplane Σ x = 0 in R^{r+1}
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 0..r {
        let mut f = vec![0.0; r + 1];
        f[k] = 1.0;
        f[k + 1] = -1.0;
        for b in &basis {
            let d: f64 = f.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in f.iter_mut().zip(b) {
                *x -= d * y;
            }
        }
        basis.push(normalize(&f));
    }
    let c = 1.0 / (r + 1) as f64;
    let mut verts: Vec<Vec<f64>> = (0..=r)
        .map(|i| {
            let p: Vec<f64> = (0..=r).map(|k| f64::from(u8::from(k == i)) - c).collect();
            normalize(
                &basis
                    .iter()
                    .map(|b| p.iter().zip(b).map(|(x, y)| x * y).sum())
                    .collect::<Vec<f64>>(),
            )
        })
        .collect();
    let target = normalize(first);
    let w: Vec<f64> = verts[0].iter().zip(&target).map(|(a, b)| a - b).collect();
    let ww: f64 = w.iter().map(|x| x * x).sum();
    if ww > 1e-24 {
        for v in &mut verts {
            let d: f64 = v.iter().zip(&w).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(&w) {
                *x -= 2.0 * d / ww * y;
            }
        }
    }
    verts
}

fn dot_f(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest multiple considered by the search.
const MAX_MULTIPLE: i64 = 1 << 36;

/// Multiples `m` for which `m β` is close to an integer vector: small
/// combinations of a reduced basis of the simultaneous approximation
/// lattice at scale `delta`, where `m delta` and the error are balanced.
fn short_multiples(chart: &Chart, delta: f64) -> Vec<i64> {
    let r = chart.r;
    let embed = |v: &[i128]| -> Vec<f64> {
        let mut f = vec![v[0] as f64 * delta];
        let d: Vec<f64> = (0..r)
            .map(|l| v[0] as f64 * chart.beta_f[l] - v[l + 1] as f64)
            .collect();
        f.extend((0..chart.z_star.len()).map(|i| (0..r).map(|l| d[l] * chart.u[l][i] as f64).sum::<f64>()));
        f
    };
    let mut basis: Vec<Vec<i128>> = (0..=r).map(|i| (0..=r).map(|j| i128::from(i == j)).collect()).collect();
    lll(&mut basis, &embed);
    let width = 2i128;
    let mut out = Vec::new();
    let mut coef = vec![-width; r + 1];
    loop {
        let m: i128 = coef.iter().zip(&basis).map(|(c, b)| c * b[0]).sum::<i128>().abs();
        if m > 0 && m <= i128::from(MAX_MULTIPLE) {
            out.push(m as i64);
        }
        let Some(i) = coef.iter().position(|&c| c < width) else {
            break;
        };
        coef[i] += 1;
        for c in &mut coef[..i] {
            *c = -width;
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Floating-point LLL reduction of integer coordinate vectors under `embed`.
fn lll(basis: &mut [Vec<i128>], embed: &dyn Fn(&[i128]) -> Vec<f64>) {
    let gram_schmidt = |basis: &[Vec<i128>]| {
        let vs: Vec<Vec<f64>> = basis.iter().map(|b| embed(b)).collect();
        let mut stars: Vec<Vec<f64>> = Vec::new();
        let mut mu = vec![vec![0.0; vs.len()]; vs.len()];
        for (i, v) in vs.iter().enumerate() {
            let mut s = v.clone();
            for (j, sj) in stars.iter().enumerate() {
                let nj = dot_f(sj, sj);
                mu[i][j] = if nj > 0.0 { dot_f(v, sj) / nj } else { 0.0 };
                for (x, y) in s.iter_mut().zip(sj) {
                    *x -= mu[i][j] * y;
                }
            }
            stars.push(s);
        }
        let norms: Vec<f64> = stars.iter().map(|s| dot_f(s, s)).collect();
        (mu, norms)
    };
    let mut k = 1;
    let mut steps = 0;
    while k < basis.len() && steps < 10_000 {
        steps += 1;
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(basis);
            let q = mu[k][j].round();
            if q != 0.0 && q.is_finite() {
                let q = q as i128;
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
            }
        }
        let (mu, norms) = gram_schmidt(basis);
        if norms[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
}

struct Hit {
    cand: Candidate,
    dir: Vec<f64>,
    certified: Option<bool>,
}

type Surrounding = (Vec<Candidate>, Vec<SymbolicNumber>, Vec<RatVec>);

/// Searches rational points `w = z/j` of `W` with `‖j x - z‖ < tol` until
/// `x` lies in the relative interior of their convex hull together with
/// `forced`. Returns the points and the barycentric weights (forced first).
///
/// Multiples come from lattice reduction at a halving scale; every accepted
/// candidate is certified exactly.
fn surround(
    x: &SymbolicPoint,
    chart: &Chart,
    tol: &Rat,
    forced: Option<(&RatVec, Vec<f64>)>,
    budget: u64,
) -> Result<Surrounding> {
    let tol_f = to_f64(tol) * (1.0 + 1e-9);
    let mut search = Search {
        x,
        tol,
        forced,
        need: chart.r + 1,
        hits: Vec::new(),
        tried: std::collections::BTreeSet::new(),
    };
    let mut examined = 0u64;
    let mut delta = tol_f;
    while examined < budget && tol_f / delta <= MAX_MULTIPLE as f64 {
        for m in short_multiples(chart, delta) {
            examined += 1;
            let c: Vec<i64> = chart.beta_f.iter().map(|b| (m as f64 * b).round() as i64).collect();
            let e_f = chart.float_error(m, &c);
            if sup_f(&e_f) >= tol_f {
                continue;
            }
            let dir = normalize(&chart.chart_dir(&e_f));
            if search.hits.iter().any(|h| dot_f(&h.dir, &dir) > 0.999) {
                continue;
            }
            search.hits.push(Hit {
                cand: chart.candidate(m, &c),
                dir,
                certified: None,
            });
            if let Some(found) = search.attempt()? {
                return Ok(found);
            }
        }
        delta /= 2.0;
    }
    Err(Error::SearchExhausted(budget))
}

struct Search<'a> {
    x: &'a SymbolicPoint,
    tol: &'a Rat,
    forced: Option<(&'a RatVec, Vec<f64>)>,
    need: usize,
    hits: Vec<Hit>,
    tried: std::collections::BTreeSet<Vec<usize>>,
}

impl Search<'_> {
    /// Tries vertex sets containing the newest hit: the hits best aligned
    /// with a regular simplex through it (or through the forced direction),
    /// and, while there are few hits, every subset.
    fn attempt(&mut self) -> Result<Option<Surrounding>> {
        let newest = self.hits.len() - 1;
        let free = self.need - usize::from(self.forced.is_some());
        let first = self
            .forced
            .as_ref()
            .map_or_else(|| self.hits[newest].dir.clone(), |(_, d)| d.clone());
        let targets = simplex_targets(self.need - 1, &first);
        let mut chosen: Vec<usize> = if self.forced.is_some() {
            Vec::new()
        } else {
            vec![newest]
        };
        for t in &targets[1..] {
            let pick = (0..self.hits.len())
                .filter(|i| !chosen.contains(i))
                .max_by(|&i, &j| dot_f(&self.hits[i].dir, t).total_cmp(&dot_f(&self.hits[j].dir, t)));
            if let Some(i) = pick {
                chosen.push(i);
            }
        }
        if chosen.len() == free {
            if let Some(found) = self.check(chosen)? {
                return Ok(Some(found));
            }
        }
        if newest >= 24 || free == 0 || free - 1 > newest {
            return Ok(None);
        }
        let mut idx: Vec<usize> = (0..free - 1).collect();
        loop {
            let mut chosen = idx.clone();
            chosen.push(newest);
            if let Some(found) = self.check(chosen)? {
                return Ok(Some(found));
            }
            let Some(i) = (0..idx.len()).rev().find(|&i| idx[i] < newest - (idx.len() - i)) else {
                return Ok(None);
            };
            idx[i] += 1;
            for j in i + 1..idx.len() {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    fn check(&mut self, mut chosen: Vec<usize>) -> Result<Option<Surrounding>> {
        chosen.sort_unstable();
        if !self.tried.insert(chosen.clone()) {
            return Ok(None);
        }
        let mut dirs: Vec<&[f64]> = self.forced.iter().map(|(_, d)| d.as_slice()).collect();
        dirs.extend(chosen.iter().map(|&i| self.hits[i].dir.as_slice()));
        if !surrounds_origin(&dirs) {
            return Ok(None);
        }
        for &i in &chosen {
            let h = &mut self.hits[i];
            if h.certified.is_none() {
                h.certified = Some(certify_norm_lt(&h.cand.e, self.tol)?.is_some());
            }
            if h.certified != Some(true) {
                return Ok(None);
            }
        }
        let mut verts: Vec<RatVec> = self.forced.iter().map(|(w, _)| (*w).clone()).collect();
        verts.extend(chosen.iter().map(|&i| self.hits[i].cand.point()));
        let Some(weights) = barycentric(self.x, &verts) else {
            return Ok(None);
        };
        let Some(iv) = check_positive(&weights)? else {
            return Ok(None);
        };
        let found = chosen.iter().map(|&i| self.hits[i].cand.clone()).collect();
        Ok(Some((found, weights, iv)))
    }
}

/// Continued-fraction terms shared by every real number in `[lo, hi]`.
fn common_cf_terms(lo: &Rat, hi: &Rat) -> Vec<BigInt> {
    let mut terms = Vec::new();
    let (mut a, mut b) = (lo.clone(), hi.clone());
    loop {
        let fa = a.floor();
        if fa != b.floor() || terms.len() > 200 {
            return terms;
        }
        terms.push(fa.to_integer());
        let (ra, rb) = (&a - &fa, &b - &fa);
        if ra.is_zero() || rb.is_zero() {
            return terms;
        }
        // inversion reverses the order
        a = rb.recip();
        b = ra.recip();
    }
}

/// Two consecutive convergents (skipping the zeroth) of a scalar chart
/// coordinate that both satisfy the tolerance.
fn convergent_pair(chart: &Chart, tol: &Rat) -> Result<Vec<Candidate>> {
    let beta = &chart.beta[0];
    let mut prec = 128;
    while prec <= 1 << 14 {
        let (lo, hi) = beta.enclosure(prec);
        let terms = common_cf_terms(&lo, &hi);
        let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
        let (mut q0, mut q1) = (BigInt::one(), BigInt::zero());
        let mut convs = Vec::new();
        for a in &terms {
            let h = a * &h1 + &h0;
            let q = a * &q1 + &q0;
            (h0, h1) = (h1, h.clone());
            (q0, q1) = (q1, q.clone());
            convs.push((h, q));
        }
        let mut prev: Option<Candidate> = None;
        for (h, q) in convs.iter().skip(1) {
            let (Some(m), Some(c)) = (q.to_i64(), h.to_i64()) else {
                return Err(Error::SearchExhausted(convs.len() as u64));
            };
            let cand = chart.candidate(m, &[c]);
            if certify_norm_lt(&cand.e, tol)?.is_none() {
                prev = None;
                continue;
            }
            if let Some(p) = prev.take() {
                return Ok(vec![p, cand]);
            }
            prev = Some(cand);
        }
        prec *= 2;
    }
    Err(Error::SearchExhausted(1 << 14))
}

fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn make_point(
    x: &SymbolicPoint,
    w: RatVec,
    k: i64,
    weight: SymbolicNumber,
    iv: RatVec,
    eps: &Rat,
) -> Result<ApproxPoint> {
    let bound = eps / rint(k);
    let distance = certify_norm_lt(&x.minus(&w), &bound)?
        .ok_or_else(|| Error::CertificateInvalid(format!("distance bound fails for k = {k}")))?;
    Ok(ApproxPoint {
        w,
        k,
        weight,
        weight_interval: iv,
        distance,
    })
}

fn check_inputs(k: i64, eps: &Rat) -> Result<()> {
    if k < 1 {
        return Err(Error::Precondition("k must be a positive integer".into()));
    }
    if !eps.is_positive() {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    Ok(())
}

/// Rational points `w_i` of `W` surrounding `x`, with `k | k_i`,
/// `k_i w_i / k` integral and `‖x - w_i‖ < ε / k_i`.
pub fn approximate_simplex(x: &SymbolicPoint, k: i64, eps: &Rat) -> Result<ApproxCertificate> {
    approximate_simplex_with_budget(x, k, eps, DEFAULT_BUDGET)
}

pub fn approximate_simplex_with_budget(x: &SymbolicPoint, k: i64, eps: &Rat, budget: u64) -> Result<ApproxCertificate> {
    check_inputs(k, eps)?;
    let chart = Chart::new(x)?;
    let tol = eps / rint(k);
    let (cands, weights, ivs) = match chart.r {
        0 => {
            let c = chart.candidate(1, &[]);
            (
                vec![c],
                vec![SymbolicNumber::from_rat(Rat::one())],
                vec![vec![Rat::one(), Rat::one()]],
            )
        }
        1 => {
            let cands = convergent_pair(&chart, &tol)?;
            let verts: Vec<RatVec> = cands.iter().map(Candidate::point).collect();
            let weights = barycentric(x, &verts).expect("distinct points on a line");
            let ivs = check_positive(&weights)?
                .ok_or_else(|| Error::CertificateInvalid("convergents do not bracket x".into()))?;
            (cands, weights, ivs)
        }
        _ => surround(x, &chart, &tol, None, budget)?,
    };
    let points = cands
        .iter()
        .zip(weights)
        .zip(ivs)
        .map(|((c, wt), iv)| make_point(x, c.point(), k * c.j, wt, iv, eps))
        .collect::<Result<Vec<_>>>()?;
    Ok(ApproxCertificate {
        x: x.clone(),
        subspace: x.hull().clone(),
        epsilon: eps.clone(),
        k,
        points,
        anchor: None,
    })
}

/// Extends an anchor `(w1, k1)` to a surrounding family as in the anchored
/// approximation lemma.
pub fn approximate_anchored(x: &SymbolicPoint, eps: &Rat, eta: &Rat, w1: &[Rat], k1: i64) -> Result<ApproxCertificate> {
    approximate_anchored_with_budget(x, eps, eta, w1, k1, DEFAULT_BUDGET)
}

pub fn approximate_anchored_with_budget(
    x: &SymbolicPoint,
    eps: &Rat,
    eta: &Rat,
    w1: &[Rat],
    k1: i64,
    budget: u64,
) -> Result<ApproxCertificate> {
    check_inputs(k1, eps)?;
    if !eta.is_positive() {
        return Err(Error::Precondition("eta must be positive".into()));
    }
    if w1.len() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: w1.len(),
        });
    }
    let k1r = rint(k1);
    if !is_integral(&scale(w1, &k1r)) {
        return Err(Error::Precondition("k1 w1 must be integral".into()));
    }
    let x_minus_w1 = x.minus(w1);
    if certify_norm_lt(&x_minus_w1, &(eps / &k1r))?.is_none() {
        return Err(Error::UncertifiedAnchor(format!("‖x - w1‖ < ε/{k1} does not hold")));
    }
    let one = SymbolicNumber::from_rat(Rat::one());
    if x.as_rational().as_deref() == Some(w1) {
        let p = make_point(x, w1.to_vec(), k1, one, vec![Rat::one(), Rat::one()], eps)?;
        return Ok(ApproxCertificate {
            x: x.clone(),
            subspace: x.hull().clone(),
            epsilon: eps.clone(),
            k: 1,
            points: vec![p],
            anchor: None,
        });
    }
    let chart = Chart::new(x)?;
    let d1_f: Vec<f64> = x_minus_w1.iter().map(|c| c.to_f64() * k1 as f64).collect();
    let (eta_f, eps_f) = (to_f64(eta) * (1.0 + 1e-9), to_f64(eps) * (1.0 + 1e-9));
    let m0 = k1 / chart.order + 1;
    let mut found = None;
    for m in m0..m0 + budget as i64 {
        let c: Vec<i64> = chart.beta_f.iter().map(|b| (m as f64 * b).round() as i64).collect();
        let e_f = chart.float_error(m, &c);
        let shifted: Vec<f64> = e_f.iter().zip(&d1_f).map(|(a, b)| a - b).collect();
        if sup_f(&e_f) >= eta_f || sup_f(&shifted) >= eps_f {
            continue;
        }
        let cand = chart.candidate(m, &c);
        let Some(xi_scaled) = certify_norm_lt(&cand.e, eta)? else {
            continue;
        };
        // k2 (x - w2) = (K x - c) - k1 (x - w1)
        let k2_dist = sym_sub(&cand.e, &sym_scale(&x_minus_w1, &k1r));
        if certify_norm_lt(&k2_dist, eps)?.is_none() {
            continue;
        }
        found = Some((cand, xi_scaled));
        break;
    }
    let (cand, xi_scaled) = found.ok_or(Error::SearchExhausted(budget))?;
    let big_k = cand.j;
    let k2 = big_k - k1;
    let (kr, k2r) = (rint(big_k), rint(k2));
    let c: RatVec = to_rat_vec(&cand.z);
    let w2 = scale(&sub(&c, &scale(w1, &k1r)), &k2r.recip());
    let w_t = scale(&c, &kr.recip());
    let t = &k1r / &kr;
    let xi = sym_scale(&cand.e, &kr.recip());
    let y_over_k2: Vec<SymbolicNumber> = x
        .coords()
        .iter()
        .zip(&c)
        .map(|(xc, ci)| xc.scale(&-&k1r).add_rat(ci).scale(&k2r.recip()))
        .collect();
    let (rest, weights, ivs) = if chart.r == 0 {
        (Vec::new(), vec![one], vec![vec![Rat::one(), Rat::one()]])
    } else {
        let dir = normalize(&chart.chart_dir(&cand.e_f));
        surround(x, &chart, eps, Some((&w_t, dir)), budget)?
    };
    let r_t = &weights[0];
    let r1 = r_t.scale(&t);
    let r2 = r_t.scale(&(Rat::one() - &t));
    let iv1 = positive_interval(&r1)?.expect("t and r_t are positive");
    let iv2 = positive_interval(&r2)?.expect("t and r_t are positive");
    let mut points = vec![
        make_point(x, w1.to_vec(), k1, r1, iv1, eps)?,
        make_point(x, w2, k2, r2, iv2, eps)?,
    ];
    for ((cand, wt), iv) in rest
        .iter()
        .zip(weights.into_iter().skip(1))
        .zip(ivs.into_iter().skip(1))
    {
        points.push(make_point(x, cand.point(), cand.j, wt, iv, eps)?);
    }
    Ok(ApproxCertificate {
        x: x.clone(),
        subspace: x.hull().clone(),
        epsilon: eps.clone(),
        k: 1,
        points,
        anchor: Some(AnchorData {
            k1,
            k2,
            eta: eta.clone(),
            xi,
            xi_scaled: NormBound {
                upper: xi_scaled.upper,
                bound: eta.clone(),
            },
            w_t,
            t,
            y_over_k2,
        }),
    })
}

fn fail(msg: impl Into<String>) -> Error {
    Error::CertificateInvalid(msg.into())
}

impl ApproxCertificate {
    /// Re-derives every identity and inequality of the certificate exactly.
    pub fn verify(&self) -> Result<()> {
        let x = &self.x;
        let n = x.dim();
        let w = x.hull();
        if *w != self.subspace {
            return Err(fail("subspace is not the smallest rational affine subspace of x"));
        }
        if self.points.is_empty() {
            return Err(fail("no points"));
        }
        let kr = rint(self.k);
        let mut total = SymbolicNumber::zero();
        let mut comb = vec![SymbolicNumber::zero(); n];
        for (i, p) in self.points.iter().enumerate() {
            if p.w.len() != n || p.k < 1 || p.k % self.k != 0 {
                return Err(fail(format!("point {i}: bad dimension or k_i")));
            }
            if !is_integral(&scale(&p.w, &(rint(p.k) / &kr))) {
                return Err(fail(format!("point {i}: k_i w_i / k is not integral")));
            }
            if positive_interval(&p.weight)?.is_none() {
                return Err(fail(format!("point {i}: weight is not positive")));
            }
            let bound = &self.epsilon / rint(p.k);
            if p.distance.bound != bound || certify_norm_lt(&x.minus(&p.w), &bound)?.is_none() {
                return Err(fail(format!("point {i}: distance bound fails")));
            }
            let in_w_required = self.anchor.is_none() || i >= 2;
            if in_w_required && !w.contains(&p.w) {
                return Err(fail(format!("point {i}: not in the minimal subspace")));
            }
            total = total.add(&p.weight);
            for (c, wi) in comb.iter_mut().zip(&p.w) {
                *c = c.add(&p.weight.scale(wi));
            }
        }
        if total != SymbolicNumber::from_rat(Rat::one()) {
            return Err(fail("weights do not sum to 1"));
        }
        if comb != x.coords() {
            return Err(fail("x is not the weighted sum of the points"));
        }
        if let Some(a) = &self.anchor {
            if self.points.len() < 2 || self.points[0].k != a.k1 || self.points[1].k != a.k2 {
                return Err(fail("anchor data does not match the first two points"));
            }
            let big_k = rint(a.k1 + a.k2);
            let (w1, w2) = (&self.points[0].w, &self.points[1].w);
            let mix: RatVec = w1
                .iter()
                .zip(w2)
                .map(|(p, q)| (rint(a.k1) * p + rint(a.k2) * q) / &big_k)
                .collect();
            if sym_sub(&x.minus(&mix), &a.xi)
                .iter()
                .any(|c| *c != SymbolicNumber::zero())
            {
                return Err(fail("two-anchor identity fails"));
            }
            if a.xi_scaled.bound != a.eta || certify_norm_lt(&sym_scale(&a.xi, &big_k), &a.eta)?.is_none() {
                return Err(fail("‖ξ‖ (k1 + k2) < η fails"));
            }
            if a.w_t != mix || !w.contains(&a.w_t) || a.t != rint(a.k1) / &big_k {
                return Err(fail("w_t is not the point of W on the segment"));
            }
            let y = SymbolicPoint::new(a.y_over_k2.clone());
            if !y.lies_in(w) {
                return Err(fail("y / k2 is not in W"));
            }
        }
        Ok(())
    }
}

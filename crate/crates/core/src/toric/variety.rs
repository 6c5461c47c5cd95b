use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{dot_mixed, is_integral, primitive_i64, rank, rint, Rat, RatMat, RatVec};
use crate::polyhedral::{verify_fan, Fan, RationalCone};

pub const MAX_TORIC_DIM: usize = 3;

/// A torus-invariant Q-divisor `Σ a_ρ D_ρ`, one coefficient per ray.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TDivisor {
    #[serde(with = "crate::serial::rat_vec")]
    pub coeffs: RatVec,
}

impl TDivisor {
    pub fn new(coeffs: RatVec) -> Self {
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rint(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![Rat::zero(); n])
    }

    /// The prime divisor `D_i`.
    pub fn prime(n: usize, i: usize) -> Self {
        let mut d = Self::zero(n);
        d.coeffs[i] = rint(1);
        d
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        is_integral(&self.coeffs)
    }

    pub fn add(&self, other: &TDivisor) -> TDivisor {
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &TDivisor) -> TDivisor {
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Rat) -> TDivisor {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|a| !a.is_negative())
    }
}

/// A complete simplicial toric variety given by its fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricVariety {
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    #[serde(skip)]
    ample_hint: Option<TDivisor>,
}

#[derive(Deserialize)]
pub struct RawVariety {
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl RawVariety {
    pub fn resolve(self) -> Result<ToricVariety> {
        ToricVariety::new(self.rays, self.max_cones)
    }
}

impl ToricVariety {
    pub fn new(rays: Vec<Vec<i64>>, mut max_cones: Vec<Vec<usize>>) -> Result<Self> {
        let d = rays.first().map(Vec::len).ok_or(Error::EmptyInput("rays"))?;
        if d == 0 || d > MAX_TORIC_DIM {
            return Err(Error::DimensionTooLarge {
                dim: d,
                max: MAX_TORIC_DIM,
            });
        }
        for r in &rays {
            if r.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: r.len(),
                });
            }
            if r.iter().all(|&x| x == 0) || primitive_i64(r) != *r {
                return Err(Error::InvalidVariety(format!(
                    "ray {r:?} is not a primitive nonzero vector"
                )));
            }
        }
        for c in max_cones.iter_mut() {
            c.sort_unstable();
            c.dedup();
            if c.len() != d || c.iter().any(|&i| i >= rays.len()) {
                return Err(Error::InvalidVariety(format!(
                    "cone {c:?} is not a simplicial full-dimensional cone"
                )));
            }
            let m = RatMat::from_i64_rows(d, &c.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>())?;
            if rank(&m) != d {
                return Err(Error::InvalidVariety(format!("cone {c:?} has dependent rays")));
            }
        }
        max_cones.sort();
        let x = Self {
            rays,
            max_cones,
            ample_hint: None,
        };
        let fan = x.fan()?;
        if let Some(v) = verify_fan(&fan)? {
            return Err(Error::InvalidVariety(format!("fan is not complete: {v:?}")));
        }
        if let Some(i) = (0..x.rays.len()).find(|&i| !x.max_cones.iter().any(|c| c.contains(&i))) {
            return Err(Error::InvalidVariety(format!("ray {i} lies in no cone")));
        }
        Ok(x)
    }

    pub fn p1() -> Self {
        Self::new(vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).expect("valid fan")
    }

    pub fn p2() -> Self {
        Self::new(
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .expect("valid fan")
    }

    /// Hirzebruch surface with rays `(1,0), (0,1), (-1,a), (0,-1)`.
    pub fn hirzebruch(a: i64) -> Self {
        Self::new(
            vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
        .expect("valid fan")
    }

    pub fn p3() -> Self {
        let mut x = Self::new(
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]],
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        )
        .expect("valid fan");
        x.ample_hint = Some(TDivisor::prime(4, 3));
        x
    }

    /// `P^3` followed by `blowups` seeded star subdivisions at cones or
    /// edges. The result is smooth and projective.
    pub fn random_threefold(seed: u64, blowups: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = Self::p3();
        let mut ample = x.ample_hint.clone().expect("hint");
        for _ in 0..blowups {
            let cone = x.max_cones[rng.gen_range(0..x.max_cones.len())].clone();
            let face: Vec<usize> = if rng.gen_bool(0.5) {
                cone.clone()
            } else {
                let skip = rng.gen_range(0..3);
                cone.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &i)| i)
                    .collect()
            };
            let new_ray: Vec<i64> = (0..3).map(|j| face.iter().map(|&i| x.rays[i][j]).sum()).collect();
            let e = x.rays.len();
            let mut cones = Vec::new();
            for c in &x.max_cones {
                if face.iter().all(|i| c.contains(i)) {
                    for &f in &face {
                        cones.push(c.iter().map(|&i| if i == f { e } else { i }).collect());
                    }
                } else {
                    cones.push(c.clone());
                }
            }
            let mut rays = x.rays.clone();
            rays.push(new_ray);
            let pulled: Rat = face.iter().map(|&i| ample.coeffs[i].clone()).sum();
            let mut pullback = ample.coeffs.clone();
            pullback.push(pulled);
            x = Self::new(rays, cones).expect("star subdivision of a smooth complete fan");
            let exceptional = TDivisor::prime(x.rays.len(), e);
            ample = (1..)
                .map(|k| TDivisor::new(pullback.clone()).scale(&rint(k)).sub(&exceptional))
                .find(|a| x.is_ample(a))
                .expect("blow-up of a projective variety is projective");
        }
        x.ample_hint = Some(ample);
        x
    }

    pub fn dim(&self) -> usize {
        self.rays[0].len()
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn fan(&self) -> Result<Fan> {
        let cones = self
            .max_cones
            .iter()
            .map(|c| RationalCone::new(self.dim(), &c.iter().map(|&i| self.rays[i].clone()).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        Fan::new(cones, RationalCone::whole_space(self.dim()))
    }

    pub(crate) fn check_divisor(&self, d: &TDivisor) -> Result<()> {
        if d.len() != self.n_rays() {
            return Err(Error::DimensionMismatch {
                expected: self.n_rays(),
                found: d.len(),
            });
        }
        Ok(())
    }

    /// `m_σ` with `<m_σ, v_ρ> = -a_ρ` for the rays of each maximal cone.
    pub fn cartier_data(&self, d: &TDivisor) -> Result<Vec<RatVec>> {
        self.check_divisor(d)?;
        self.max_cones
            .iter()
            .map(|c| {
                let m =
                    RatMat::from_i64_rows(self.dim(), &c.iter().map(|&i| self.rays[i].clone()).collect::<Vec<_>>())?;
                let rhs: RatVec = c.iter().map(|&i| -d.coeffs[i].clone()).collect();
                m.inverse().expect("simplicial cone").mul_vec(&rhs)
            })
            .collect()
    }

    fn convexity(&self, d: &TDivisor, strict: bool) -> Result<bool> {
        let data = self.cartier_data(d)?;
        Ok(self.max_cones.iter().zip(&data).all(|(c, m)| {
            (0..self.n_rays()).filter(|i| !c.contains(i)).all(|i| {
                let v = dot_mixed(&self.rays[i], m) + &d.coeffs[i];
                if strict {
                    v.is_positive()
                } else {
                    !v.is_negative()
                }
            })
        }))
    }

    pub fn is_ample(&self, d: &TDivisor) -> bool {
        self.convexity(d, true).unwrap_or(false)
    }

    pub fn is_nef(&self, d: &TDivisor) -> bool {
        self.convexity(d, false).unwrap_or(false)
    }

    /// The fixed ample divisor: the sum of all prime divisors when that is
    /// ample, otherwise the first ample divisor with coefficients in
    /// `0..=4`, ordered by coefficient sum then lexicographically.
    pub fn ample_divisor(&self) -> Result<TDivisor> {
        if let Some(a) = &self.ample_hint {
            return Ok(a.clone());
        }
        let n = self.n_rays();
        let sum = TDivisor::from_i64(&vec![1; n]);
        if self.is_ample(&sum) {
            return Ok(sum);
        }
        for total in 1..=4 * n as i64 {
            let mut found = None;
            for_each_composition(n, total, 4, &mut |c| {
                if found.is_none() {
                    let d = TDivisor::from_i64(c);
                    if self.is_ample(&d) {
                        found = Some(d);
                    }
                }
            });
            if let Some(d) = found {
                return Ok(d);
            }
        }
        Err(Error::InvalidVariety(
            "no ample divisor found; the variety may not be projective".into(),
        ))
    }

    /// Rays sharing a two-dimensional cone with ray `g`.
    pub fn neighbors(&self, g: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .max_cones
            .iter()
            .filter(|c| c.contains(&g))
            .flat_map(|c| c.iter().copied())
            .filter(|&i| i != g)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Calls `f` on every vector of `n` entries in `0..=cap` summing to `total`,
/// in lexicographically decreasing order.
fn for_each_composition(n: usize, total: i64, cap: i64, f: &mut dyn FnMut(&[i64])) {
    fn rec(cur: &mut Vec<i64>, n: usize, left: i64, cap: i64, f: &mut dyn FnMut(&[i64])) {
        if cur.len() == n - 1 {
            if left <= cap {
                cur.push(left);
                f(cur);
                cur.pop();
            }
            return;
        }
        for v in (0..=left.min(cap)).rev() {
            cur.push(v);
            rec(cur, n, left - v, cap, f);
            cur.pop();
        }
    }
    if n > 0 {
        rec(&mut Vec::new(), n, total, cap, f);
    }
}

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::variety::{TDivisor, ToricVariety};
use crate::error::{Error, Result};
use crate::exact::{dot_i64, dot_mixed, rint, to_rat_vec, Rat, RatVec};
use crate::lp::IneqLp;
use crate::polyhedral::RationalPolytope;

fn halfspaces(x: &ToricVariety, d: &TDivisor) -> Vec<(RatVec, Rat)> {
    x.rays()
        .iter()
        .zip(&d.coeffs)
        .map(|(v, a)| (to_rat_vec(v), -a.clone()))
        .collect()
}

fn lp_for(x: &ToricVariety, d: &TDivisor) -> IneqLp {
    let mut lp = IneqLp::new(x.dim());
    for (r, h) in halfspaces(x, d) {
        lp.ge(r, h);
    }
    lp
}

/// `P_D = {m : <m, v_ρ> >= -a_ρ}`.
pub fn divisor_polytope(x: &ToricVariety, d: &TDivisor) -> Result<RationalPolytope> {
    x.check_divisor(d)?;
    RationalPolytope::from_halfspaces(x.dim(), &halfspaces(x, d), &[])
}

fn require_integral(d: &TDivisor) -> Result<()> {
    if d.is_integral() {
        Ok(())
    } else {
        Err(Error::NotIntegral)
    }
}

/// Lattice points of `P_D`, i.e. the torus-invariant sections of `O(D)`.
pub fn sections(x: &ToricVariety, d: &TDivisor) -> Result<Vec<Vec<i64>>> {
    require_integral(d)?;
    let p = divisor_polytope(x, d)?;
    if p.is_empty() {
        return Ok(Vec::new());
    }
    let to_i64 = |r: Rat| r.to_integer().to_i64().ok_or(Error::Overflow);
    let a: Vec<i64> = d.coeffs.iter().map(|c| to_i64(c.clone())).collect::<Result<_>>()?;
    let n = x.dim();
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for v in p.vertices() {
        for i in 0..n {
            lo[i] = lo[i].min(to_i64(v[i].ceil())?);
            hi[i] = hi[i].max(to_i64(v[i].floor())?);
        }
    }
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        if x.rays()
            .iter()
            .zip(&a)
            .all(|(v, &c)| v.iter().zip(&cur).map(|(p, q)| p * q).sum::<i64>() + c >= 0)
        {
            out.push(cur.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
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

pub fn h0(x: &ToricVariety, d: &TDivisor) -> Result<u64> {
    Ok(sections(x, d)?.len() as u64)
}

/// `<m, v_ρ> + a_ρ`, the order of vanishing of the section `m` along `D_ρ`.
pub fn vanishing(x: &ToricVariety, d: &TDivisor, rho: usize, m: &[Rat]) -> Rat {
    dot_mixed(&x.rays()[rho], m) + &d.coeffs[rho]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixMob {
    pub fix: TDivisor,
    pub mob: TDivisor,
    /// A section attaining the fixed multiplicity, per ray.
    pub witnesses: Vec<Vec<i64>>,
}

pub fn fix_mob(x: &ToricVariety, d: &TDivisor) -> Result<FixMob> {
    let pts = sections(x, d)?;
    if pts.is_empty() {
        return Err(Error::EmptyLinearSystem);
    }
    let mut fix = Vec::new();
    let mut witnesses = Vec::new();
    for (v, a) in x.rays().iter().zip(&d.coeffs) {
        let m = pts.iter().min_by_key(|m| dot_i64(v, m)).expect("nonempty");
        fix.push(rint(dot_i64(v, m) as i64) + a);
        witnesses.push(m.clone());
    }
    let fix = TDivisor::new(fix);
    Ok(FixMob {
        mob: d.sub(&fix),
        fix,
        witnesses,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrdValue {
    #[serde(with = "crate::serial::rat")]
    pub value: Rat,
    /// An optimal vertex of `P_D`.
    #[serde(with = "crate::serial::rat_vec")]
    pub witness: RatVec,
}

/// `ord_ρ ||D||`, the minimum of `<m, v_ρ> + a_ρ` over `P_D`.
pub fn asymptotic_ord(x: &ToricVariety, rho: usize, d: &TDivisor) -> Result<OrdValue> {
    x.check_divisor(d)?;
    if rho >= x.n_rays() {
        return Err(Error::Precondition(format!("ray index {rho} out of range")));
    }
    let c = to_rat_vec(&x.rays()[rho]);
    let (m, v) = lp_for(x, d).minimize(&c)?.ok_or(Error::NegativeIitaka)?;
    Ok(OrdValue {
        value: v + &d.coeffs[rho],
        witness: m,
    })
}

/// `ord_ρ ||D||` for every ray, or `None` when `P_D` is empty.
pub fn ord_vector(x: &ToricVariety, d: &TDivisor) -> Result<Option<RatVec>> {
    let p = divisor_polytope(x, d)?;
    if p.is_empty() {
        return Ok(None);
    }
    Ok(Some(
        (0..x.n_rays())
            .map(|rho| {
                p.vertices()
                    .iter()
                    .map(|m| vanishing(x, d, rho, m))
                    .min()
                    .expect("nonempty")
            })
            .collect(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocusMode {
    Stable,
    Diminished,
}

/// Divisorial part of a base locus. `everything` marks the convention
/// `B(D) = X` for divisors with no effective multiple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseLocus {
    pub rays: Vec<usize>,
    pub everything: bool,
}

impl BaseLocus {
    fn all(n: usize) -> Self {
        Self {
            rays: (0..n).collect(),
            everything: true,
        }
    }

    pub fn is_subset(&self, other: &BaseLocus) -> bool {
        other.everything || (!self.everything && self.rays.iter().all(|r| other.rays.contains(r)))
    }

    pub fn union(&self, other: &BaseLocus) -> BaseLocus {
        let mut rays: Vec<usize> = self.rays.iter().chain(&other.rays).copied().collect();
        rays.sort_unstable();
        rays.dedup();
        BaseLocus {
            rays,
            everything: self.everything || other.everything,
        }
    }
}

/// `lim_{ε↓0} ord_ρ ||D + εA||` for every ray, or `None` when `D + εA` has
/// no effective multiple for small `ε`.
///
/// The value function `ε ↦ ord_ρ ||D + εA||` is polyhedral convex on the
/// closed interval where `P_{D+εA}` is nonempty, so the limit is its value
/// at the left endpoint once that endpoint is `0`.
pub fn ord_limit(x: &ToricVariety, d: &TDivisor, a: &TDivisor) -> Result<Option<RatVec>> {
    x.check_divisor(a)?;
    let n = x.dim();
    // feasibility of {(m, ε) : <m, v_ρ> + a_ρ + ε A_ρ >= 0, ε >= 0} with ε minimal
    let mut lp = IneqLp::new(n + 1);
    for ((v, dc), ac) in x.rays().iter().zip(&d.coeffs).zip(&a.coeffs) {
        let mut row = to_rat_vec(v);
        row.push(ac.clone());
        lp.ge(row, -dc.clone());
    }
    let mut pos = vec![Rat::zero(); n + 1];
    pos[n] = rint(1);
    lp.ge(pos.clone(), Rat::zero());
    match lp.minimize(&pos) {
        Ok(Some((_, eps))) if eps.is_zero() => ord_vector(x, d),
        Ok(_) => Ok(None),
        Err(Error::Unbounded) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn base_locus(x: &ToricVariety, d: &TDivisor, mode: LocusMode) -> Result<BaseLocus> {
    let ords = match mode {
        LocusMode::Stable => ord_vector(x, d)?,
        LocusMode::Diminished => ord_limit(x, d, &x.ample_divisor()?)?,
    };
    Ok(match ords {
        None => BaseLocus::all(x.n_rays()),
        Some(o) => BaseLocus {
            rays: (0..o.len()).filter(|&i| o[i].is_positive()).collect(),
            everything: false,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictedOrd {
    pub boundary_ray: usize,
    #[serde(with = "crate::serial::rat")]
    pub value: Rat,
}

/// Restriction of `H^0(X, O(D))` to the prime divisor `D_Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Restriction {
    /// `h0(D) - h0(D - Γ)`.
    pub dimension: u64,
    /// Sections not vanishing on `D_Γ`.
    pub facet_points: Vec<Vec<i64>>,
    /// `ord_P ||D||_Γ` at each boundary divisor `P = D_Γ ∩ D_ρ`; empty when
    /// the rational facet is empty.
    pub restricted_ords: Vec<RestrictedOrd>,
    /// `D_Γ` lies in the base locus of `|D|`, so the image is zero.
    pub zero_image: bool,
}

/// `ord_P ||D||_Γ` for `P = D_Γ ∩ D_ρ`: the minimum of `<m, v_ρ> + a_ρ` over
/// the rational points of the `Γ`-facet of `P_D`.
pub fn restricted_ord(x: &ToricVariety, gamma: usize, rho: usize, d: &TDivisor) -> Result<Option<Rat>> {
    x.check_divisor(d)?;
    let mut lp = lp_for(x, d);
    lp.eq(to_rat_vec(&x.rays()[gamma]), -d.coeffs[gamma].clone());
    Ok(lp
        .minimize(&to_rat_vec(&x.rays()[rho]))?
        .map(|(_, v)| v + &d.coeffs[rho]))
}

pub fn restrict_to_ray(x: &ToricVariety, gamma: usize, d: &TDivisor) -> Result<Restriction> {
    if gamma >= x.n_rays() {
        return Err(Error::Precondition(format!("ray index {gamma} out of range")));
    }
    let all = sections(x, d)?;
    let lower = h0(x, &d.sub(&TDivisor::prime(x.n_rays(), gamma)))?;
    let facet_points: Vec<Vec<i64>> = all
        .iter()
        .filter(|m| vanishing(x, d, gamma, &to_rat_vec(m)).is_zero())
        .cloned()
        .collect();
    let mut restricted_ords = Vec::new();
    for rho in x.neighbors(gamma) {
        match restricted_ord(x, gamma, rho, d)? {
            Some(value) => restricted_ords.push(RestrictedOrd {
                boundary_ray: rho,
                value,
            }),
            None => break,
        }
    }
    Ok(Restriction {
        dimension: all.len() as u64 - lower,
        zero_image: facet_points.is_empty(),
        facet_points,
        restricted_ords,
    })
}

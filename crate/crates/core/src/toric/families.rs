use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::invariants::{divisor_polytope, fix_mob};
use super::variety::{TDivisor, ToricVariety};
use crate::error::{Error, Result};
use crate::exact::{common_denominator, rint, solve_affine, to_rat_vec, Rat, RatMat, RatVec};
use crate::polyhedral::{hilbert_basis, verify_fan, AffineMonoid, Fan, RationalCone, RationalPolytope};
use crate::pwl::{check_additivity_up_to_truncation, RayOracle, TruncationVerdict};

/// `Φ_t = base + Σ t_i directions[i]` for `t` in a parameter polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorFamily {
    pub base: TDivisor,
    pub directions: Vec<TDivisor>,
    pub parameters: RationalPolytope,
}

impl DivisorFamily {
    pub fn new(base: TDivisor, directions: Vec<TDivisor>, parameters: RationalPolytope) -> Result<Self> {
        if parameters.is_empty() {
            return Err(Error::EmptyInput("parameter polytope"));
        }
        if parameters.ambient_dim() != directions.len() {
            return Err(Error::DimensionMismatch {
                expected: directions.len(),
                found: parameters.ambient_dim(),
            });
        }
        if let Some(d) = directions.iter().find(|d| d.len() != base.len()) {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                found: d.len(),
            });
        }
        Ok(Self {
            base,
            directions,
            parameters,
        })
    }

    pub fn at(&self, t: &[Rat]) -> TDivisor {
        combination(&self.base, &self.directions, t)
    }
}

fn combination(base: &TDivisor, dirs: &[TDivisor], t: &[Rat]) -> TDivisor {
    dirs.iter()
        .zip(t)
        .fold(base.clone(), |acc, (d, c)| acc.add(&d.scale(c)))
}

/// `{t : G ⊄ B(Φ_t)}`, the parameters at which `ord_G ||Φ_t|| = 0`.
pub fn not_in_b_region(x: &ToricVariety, family: &DivisorFamily, g: usize) -> Result<RationalPolytope> {
    x.check_divisor(&family.base)?;
    if g >= x.n_rays() {
        return Err(Error::Precondition(format!("ray index {g} out of range")));
    }
    let l = family.directions.len();
    let n = x.dim();
    let lift = |t_part: &[Rat], m_part: &[Rat]| -> RatVec { t_part.iter().chain(m_part).cloned().collect() };
    let zeros_m = vec![Rat::zero(); n];
    let h = family.parameters.hrep();
    let mut ge: Vec<(RatVec, Rat)> = h
        .inequalities
        .iter()
        .map(|r| (lift(&r[1..], &zeros_m), -r[0].clone()))
        .collect();
    let mut eq: Vec<(RatVec, Rat)> = h
        .equations
        .iter()
        .map(|r| (lift(&r[1..], &zeros_m), -r[0].clone()))
        .collect();
    for (rho, v) in x.rays().iter().enumerate() {
        let t_part: RatVec = family.directions.iter().map(|d| d.coeffs[rho].clone()).collect();
        let row = (lift(&t_part, &to_rat_vec(v)), -family.base.coeffs[rho].clone());
        if rho == g {
            eq.push(row.clone());
        }
        ge.push(row);
    }
    let lifted = RationalPolytope::from_halfspaces(l + n, &ge, &eq)?;
    if lifted.is_empty() {
        return Ok(RationalPolytope::empty(l));
    }
    let projected: Vec<RatVec> = lifted.vertices().iter().map(|v| v[..l].to_vec()).collect();
    RationalPolytope::from_points(l, &projected)
}

/// Superadditive map `s ↦ Mob(Σ s_i D_i)` on `N^ℓ`; its stabilization index
/// at `s` is the least common denominator of the vertices of `P_{Φ_s}`.
pub struct MobOracle<'a> {
    x: &'a ToricVariety,
    directions: Vec<TDivisor>,
    domain: AffineMonoid,
}

impl<'a> MobOracle<'a> {
    pub fn new(x: &'a ToricVariety, directions: Vec<TDivisor>) -> Result<Self> {
        for d in &directions {
            x.check_divisor(d)?;
            if !d.is_integral() {
                return Err(Error::NotIntegral);
            }
            if divisor_polytope(x, d)?.lattice_points().is_empty() {
                return Err(Error::EmptyLinearSystem);
            }
        }
        Ok(Self {
            x,
            domain: AffineMonoid::orthant(directions.len()),
            directions,
        })
    }

    pub fn divisor(&self, s: &[i64]) -> TDivisor {
        combination(
            &TDivisor::zero(self.x.n_rays()),
            &self.directions,
            &s.iter().map(|&c| rint(c)).collect::<RatVec>(),
        )
    }
}

impl RayOracle for MobOracle<'_> {
    fn domain(&self) -> &AffineMonoid {
        &self.domain
    }

    fn eval(&self, s: &[i64]) -> Result<RatVec> {
        Ok(fix_mob(self.x, &self.divisor(s))?.mob.coeffs)
    }

    fn stabilization(&self, s: &[i64]) -> Option<u64> {
        let p = divisor_polytope(self.x, &self.divisor(s)).ok()?;
        if p.is_empty() {
            return None;
        }
        p.vertices()
            .iter()
            .map(|v| common_denominator(v))
            .fold(BigInt::from(1), |acc, d| acc.lcm(&d))
            .to_u64()
    }
}

/// Linear functions of `s` whose maximum is `ord_ρ ||Σ s_i D_i||`, one per
/// vertex of the dual feasible region, deduplicated and sorted.
fn ord_pieces(x: &ToricVariety, dirs: &[TDivisor], rho: usize) -> Result<Vec<RatVec>> {
    let n = x.dim();
    let target = to_rat_vec(&x.rays()[rho]);
    let mut out = BTreeSet::new();
    for k in 1..=n {
        for subset in crate::polyhedral::subsets(x.n_rays(), k) {
            let cols: Vec<RatVec> = subset.iter().map(|&i| to_rat_vec(&x.rays()[i])).collect();
            let a = RatMat::from_rows(n, &cols)?.transpose();
            let Ok(sol) = solve_affine(&a, &target) else { continue };
            if !sol.kernel.is_empty() || sol.particular.iter().any(|y| y < &Rat::zero()) {
                continue;
            }
            let row: RatVec = dirs
                .iter()
                .map(|d| {
                    subset
                        .iter()
                        .zip(&sol.particular)
                        .fold(d.coeffs[rho].clone(), |acc, (&i, y)| acc - y * &d.coeffs[i])
                })
                .collect();
            out.insert(row);
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberDecomposition {
    pub fan: Fan,
    /// Per chamber, the matrix `s ↦ (ord_ρ ||Φ_s||)_ρ`.
    pub ord_pieces: Vec<RatMat>,
    /// Per chamber, the matrix `s ↦ Mob^♯(s) = Φ_s - Σ ord_ρ ||Φ_s|| D_ρ`.
    pub mob_pieces: Vec<RatMat>,
}

/// Subdivides `R_+^ℓ` into cones on which every `ord_ρ ||Σ s_i D_i||` is
/// linear.
pub fn chamber_decomposition(x: &ToricVariety, dirs: &[TDivisor]) -> Result<ChamberDecomposition> {
    let l = dirs.len();
    if l == 0 {
        return Err(Error::EmptyInput("directions"));
    }
    for d in dirs {
        x.check_divisor(d)?;
        if divisor_polytope(x, d)?.is_empty() {
            return Err(Error::NegativeIitaka);
        }
    }
    let orthant: Vec<RatVec> = (0..l)
        .map(|i| (0..l).map(|j| rint((i == j) as i64)).collect())
        .collect();
    // (inequalities, chosen piece per ray)
    let mut cells: Vec<(Vec<RatVec>, Vec<RatVec>)> = vec![(orthant.clone(), Vec::new())];
    for rho in 0..x.n_rays() {
        let pieces = ord_pieces(x, dirs, rho)?;
        let mut next = Vec::new();
        for (ineqs, chosen) in &cells {
            for (j, pj) in pieces.iter().enumerate() {
                let mut cell = ineqs.clone();
                for (k, pk) in pieces.iter().enumerate() {
                    if k != j {
                        cell.push(pj.iter().zip(pk).map(|(a, b)| a - b).collect());
                    }
                }
                if RationalCone::from_inequalities(l, &cell, &[])?.cone_dim() == l {
                    let mut c = chosen.clone();
                    c.push(pj.clone());
                    next.push((cell, c));
                }
            }
        }
        cells = next;
    }
    let mut cones = Vec::new();
    let mut ord_mats = Vec::new();
    let mut mob_mats = Vec::new();
    for (ineqs, chosen) in cells {
        cones.push(RationalCone::from_inequalities(l, &ineqs, &[])?);
        let mob: Vec<RatVec> = chosen
            .iter()
            .enumerate()
            .map(|(rho, row)| row.iter().zip(dirs).map(|(o, d)| &d.coeffs[rho] - o).collect())
            .collect();
        ord_mats.push(RatMat::from_rows(l, &chosen)?);
        mob_mats.push(RatMat::from_rows(l, &mob)?);
    }
    let mut order: Vec<usize> = (0..cones.len()).collect();
    order.sort_by(|&a, &b| cones[a].rays().cmp(cones[b].rays()));
    let fan = Fan::new(
        order.iter().map(|&i| cones[i].clone()).collect(),
        RationalCone::from_inequalities(l, &orthant, &[])?,
    )?;
    if let Some(v) = verify_fan(&fan)? {
        return Err(Error::FanViolation(format!("{v:?}")));
    }
    Ok(ChamberDecomposition {
        fan,
        ord_pieces: order.iter().map(|&i| ord_mats[i].clone()).collect(),
        mob_pieces: order.iter().map(|&i| mob_mats[i].clone()).collect(),
    })
}

/// The least truncation index on which the Mob map is additive, per cone.
pub fn chamber_truncations(
    x: &ToricVariety,
    dirs: &[TDivisor],
    cones: &[RationalCone],
    p_max: u64,
    samples: u64,
) -> Result<Vec<TruncationVerdict>> {
    let oracle = MobOracle::new(x, dirs.to_vec())?;
    cones
        .iter()
        .map(|c| check_additivity_up_to_truncation(&oracle, c, p_max, samples))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionGenerator {
    pub degree: Vec<i64>,
    pub point: Vec<i64>,
}

/// `{(s, m) : s >= 0, <m, v_ρ> + Σ s_i a_ρ^(i) >= 0}`.
pub fn section_cone(x: &ToricVariety, divs: &[TDivisor]) -> Result<RationalCone> {
    let l = divs.len();
    let n = x.dim();
    let mut ineqs: Vec<Vec<i64>> = (0..l).map(|i| (0..l + n).map(|j| (i == j) as i64).collect()).collect();
    for d in divs {
        x.check_divisor(d)?;
        if !d.is_integral() {
            return Err(Error::NotIntegral);
        }
    }
    for (rho, v) in x.rays().iter().enumerate() {
        let mut row: Vec<i64> = divs
            .iter()
            .map(|d| d.coeffs[rho].to_integer().to_i64().expect("coefficient fits"))
            .collect();
        row.extend(v);
        ineqs.push(row);
    }
    RationalCone::from_int_inequalities(l + n, &ineqs, &[])
}

/// Degrees and exponents of the monomial generators of the section ring
/// `R(X; D_1, ..., D_ℓ)`.
pub fn multigraded_generators(x: &ToricVariety, divs: &[TDivisor]) -> Result<Vec<SectionGenerator>> {
    let cone = section_cone(x, divs)?;
    if !cone.is_pointed() {
        return Err(Error::UnboundedGrading("section cone contains a line".into()));
    }
    let l = divs.len();
    Ok(hilbert_basis(&cone)?
        .into_iter()
        .map(|h| SectionGenerator {
            degree: h[..l].to_vec(),
            point: h[l..].to_vec(),
        })
        .collect())
}

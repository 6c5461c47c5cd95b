//! Exact rational arithmetic, linear algebra over `Q`, and integer lattices.
//!
//! Everything here is exact. Canonical forms (lowest terms, reduced echelon
//! form, Hermite normal form) are enforced at construction so structural
//! equality coincides with mathematical equality.

mod lattice;
mod linalg;

pub use lattice::{hermite_basis, hermite_basis_in, integer_kernel, saturated_basis, IntLattice};
pub use linalg::{affine_hull, kernel, rank, rref, solve_affine, AffineSolution, AffineSubspace, RatMat};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;
pub type RatVec = Vec<Rat>;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rvec(entries: &[i64]) -> RatVec {
    entries.iter().map(|&e| rint(e)).collect()
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-1.25"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let err = || Error::ParseRational(s.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) || frac.is_empty() {
            return Err(err());
        }
        let whole: BigInt = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            int_digits.parse().map_err(|_| err())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let f: BigInt = frac.parse().map_err(|_| err())?;
        let v = Rat::new(whole * &scale + f, scale);
        return Ok(if neg { -v } else { v });
    }
    let p: BigInt = t.parse().map_err(|_| err())?;
    Ok(Rat::from_integer(p))
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Least common multiple of the denominators.
pub fn common_denominator(v: &[Rat]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector to the primitive integer vector on the same ray.
/// Returns `None` for the zero vector or when an entry does not fit in `i64`.
pub fn primitive_int(v: &[Rat]) -> Option<Vec<i64>> {
    let den = common_denominator(v);
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rat::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    ints.iter().map(|x| (x / &g).to_i64()).collect()
}

pub fn primitive_i64(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

pub fn to_rat_vec(v: &[i64]) -> RatVec {
    rvec(v)
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

pub fn dot_mixed(a: &[i64], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (&x, y)| acc + rint(x) * y)
}

pub fn add(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rat], c: &Rat) -> RatVec {
    a.iter().map(|x| x * c).collect()
}

pub fn sup_norm(a: &[Rat]) -> Rat {
    a.iter().map(|x| x.abs()).max().unwrap_or_else(Rat::zero)
}

pub fn floor_rat(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil_rat(r: &Rat) -> BigInt {
    r.ceil().to_integer()
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

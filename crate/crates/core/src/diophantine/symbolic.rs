use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{fmt_rat, parse_rat, to_f64, AffineSubspace, Rat, RatMat, RatVec};

/// Largest binary precision tried when certifying a sign.
const MAX_PRECISION: u32 = 1 << 14;

/// A user-declared real number, known through a rational enclosure
/// `approx ± radius`, and assumed linearly independent over `Q` from `1`
/// and every other symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeclaredSymbol {
    name: String,
    approx: Rat,
    radius: Rat,
    text: String,
}

impl DeclaredSymbol {
    /// `approx` is a decimal string; its last digit sets the enclosure radius.
    pub fn new(name: &str, approx: &str, assume_independent: bool) -> Result<Self> {
        if !assume_independent {
            return Err(Error::InvalidSymbol(format!(
                "{name}: declared symbols require assume_independent = true"
            )));
        }
        if name.is_empty() || name.starts_with("sqrt") {
            return Err(Error::InvalidSymbol(name.to_string()));
        }
        let digits = approx.split_once('.').map_or(0, |(_, f)| f.len());
        let radius = Rat::new(BigInt::one(), BigInt::from(10u32).pow(digits as u32));
        Ok(Self {
            name: name.to_string(),
            approx: parse_rat(approx)?,
            radius,
            text: approx.trim().to_string(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// A basis irrational: `√d` for squarefree `d > 1`, or a declared symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Sqrt(u64),
    Declared(DeclaredSymbol),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Sqrt(d) => write!(f, "sqrt({d})"),
            Symbol::Declared(s) => f.write_str(&s.name),
        }
    }
}

impl Symbol {
    fn enclosure(&self, prec: u32) -> (Rat, Rat) {
        match self {
            Symbol::Sqrt(d) => {
                let scale = BigInt::one() << prec;
                let a = (BigInt::from(*d) * &scale * &scale).sqrt();
                (Rat::new(a.clone(), scale.clone()), Rat::new(a + BigInt::one(), scale))
            }
            Symbol::Declared(s) => (&s.approx - &s.radius, &s.approx + &s.radius),
        }
    }

    fn to_f64(&self) -> f64 {
        match self {
            Symbol::Sqrt(d) => (*d as f64).sqrt(),
            Symbol::Declared(s) => to_f64(&s.approx),
        }
    }
}

/// Writes `n = s^2 * d` with `d` squarefree.
fn square_part(mut n: u64) -> (u64, u64) {
    let mut s = 1;
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p * p) {
            n /= p * p;
            s *= p;
        }
        p += 1;
    }
    (s, n)
}

/// `q + Σ c_j t_j` with rational `q, c_j` and basis symbols `t_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicNumber {
    rat: Rat,
    irr: Vec<(Symbol, Rat)>,
}

impl SymbolicNumber {
    pub fn from_rat(q: Rat) -> Self {
        Self {
            rat: q,
            irr: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    /// `c · sqrt(n)`, reduced to a squarefree radicand.
    pub fn sqrt(n: u64) -> Self {
        let (s, d) = square_part(n);
        let c = Rat::from_integer(BigInt::from(s));
        if d == 1 || n == 0 {
            let v = if n == 0 { Rat::zero() } else { c };
            return Self::from_rat(v);
        }
        Self::from_terms(Rat::zero(), vec![(Symbol::Sqrt(d), c)])
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::from_terms(Rat::zero(), vec![(s, Rat::one())])
    }

    pub fn from_terms(rat: Rat, terms: Vec<(Symbol, Rat)>) -> Self {
        let mut m: BTreeMap<Symbol, Rat> = BTreeMap::new();
        for (s, c) in terms {
            *m.entry(s).or_insert_with(Rat::zero) += c;
        }
        Self {
            rat,
            irr: m.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn rational_part(&self) -> &Rat {
        &self.rat
    }

    pub fn terms(&self) -> &[(Symbol, Rat)] {
        &self.irr
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_empty()
    }

    pub fn irrational_part(&self) -> SymbolicNumber {
        Self {
            rat: Rat::zero(),
            irr: self.irr.clone(),
        }
    }

    pub fn coefficient(&self, s: &Symbol) -> Rat {
        self.irr
            .iter()
            .find(|(t, _)| t == s)
            .map_or_else(Rat::zero, |(_, c)| c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.irr.clone();
        terms.extend(other.irr.iter().cloned());
        Self::from_terms(&self.rat + &other.rat, terms)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn add_rat(&self, q: &Rat) -> Self {
        Self {
            rat: &self.rat + q,
            irr: self.irr.clone(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            rat: &self.rat * c,
            irr: self.irr.iter().map(|(s, a)| (s.clone(), a * c)).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.rat) + self.irr.iter().map(|(s, c)| to_f64(c) * s.to_f64()).sum::<f64>()
    }

    /// A rational interval containing the value, tighter as `prec` grows.
    pub fn enclosure(&self, prec: u32) -> (Rat, Rat) {
        let mut lo = self.rat.clone();
        let mut hi = self.rat.clone();
        for (s, c) in &self.irr {
            let (a, b) = s.enclosure(prec);
            if c.is_positive() {
                lo += c * a;
                hi += c * b;
            } else {
                lo += c * b;
                hi += c * a;
            }
        }
        (lo, hi)
    }

    /// Refines the enclosure until `decide` returns an answer.
    fn refine<T>(&self, mut decide: impl FnMut(&Rat, &Rat) -> Option<T>) -> Result<T> {
        let mut prec = 64;
        while prec <= MAX_PRECISION {
            let (lo, hi) = self.enclosure(prec);
            if let Some(t) = decide(&lo, &hi) {
                return Ok(t);
            }
            prec *= 2;
        }
        Err(Error::Uncertifiable(self.to_string()))
    }

    /// Certified sign; exact for rational values.
    pub fn signum(&self) -> Result<Ordering> {
        if self.is_rational() {
            return Ok(self.rat.cmp(&Rat::zero()));
        }
        let z = Rat::zero();
        self.refine(|lo, hi| {
            if *lo > z {
                Some(Ordering::Greater)
            } else if *hi < z {
                Some(Ordering::Less)
            } else {
                None
            }
        })
    }

    pub fn cmp_rat(&self, q: &Rat) -> Result<Ordering> {
        self.add_rat(&-q).signum()
    }

    /// `⌊self⌋`, certified.
    pub fn floor(&self) -> Result<BigInt> {
        if self.is_rational() {
            return Ok(self.rat.floor().to_integer());
        }
        self.refine(|lo, hi| {
            let a = lo.floor();
            (hi.floor() == a && a != *hi).then(|| a.to_integer())
        })
    }

    /// Certified bound `|self| <= upper < bound`, or `None` if `|self| >= bound`.
    pub fn abs_below(&self, bound: &Rat) -> Result<Option<Rat>> {
        if self.is_rational() {
            let a = self.rat.abs();
            return Ok((a < *bound).then_some(a));
        }
        let nb = -bound.clone();
        self.refine(|lo, hi| {
            if *lo > nb && *hi < *bound {
                Some(Some(lo.abs().max(hi.abs())))
            } else if *lo >= *bound || *hi <= nb {
                Some(None)
            } else {
                None
            }
        })
    }

    fn declared(&self) -> impl Iterator<Item = &DeclaredSymbol> {
        self.irr.iter().filter_map(|(s, _)| match s {
            Symbol::Declared(d) => Some(d),
            Symbol::Sqrt(_) => None,
        })
    }
}

impl fmt::Display for SymbolicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if !self.rat.is_zero() || self.irr.is_empty() {
            out.push_str(&fmt_rat(&self.rat));
        }
        for (s, c) in &self.irr {
            if !out.is_empty() {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            } else if c.is_negative() {
                out.push('-');
            }
            let a = c.abs();
            if !a.is_one() {
                out.push_str(&fmt_rat(&a));
                out.push('*');
            }
            out.push_str(&s.to_string());
        }
        f.write_str(&out)
    }
}

impl Serialize for SymbolicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            rat: String,
            irr: Vec<(String, String)>,
        }
        Repr {
            rat: fmt_rat(&self.rat),
            irr: self.irr.iter().map(|(s, c)| (fmt_rat(c), s.to_string())).collect(),
        }
        .serialize(s)
    }
}

/// `‖v‖∞ <= upper < bound`, with `upper` certified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormBound {
    #[serde(with = "crate::serial::rat")]
    pub upper: Rat,
    #[serde(with = "crate::serial::rat")]
    pub bound: Rat,
}

/// Rounds `upper` up to a short decimal that stays below `bound`.
fn tidy_upper(upper: Rat, bound: &Rat) -> Rat {
    let mut scale = BigInt::from(10u32);
    for _ in 0..40 {
        let r = Rat::new(
            (&upper * Rat::from_integer(scale.clone())).ceil().to_integer(),
            scale.clone(),
        );
        if r < *bound {
            return r;
        }
        scale *= 10;
    }
    upper
}

/// Certifies `‖v‖∞ < bound`. `Ok(None)` means the inequality is false.
pub fn certify_norm_lt(v: &[SymbolicNumber], bound: &Rat) -> Result<Option<NormBound>> {
    let mut upper = Rat::zero();
    for x in v {
        match x.abs_below(bound)? {
            Some(u) => upper = upper.max(u),
            None => return Ok(None),
        }
    }
    Ok(Some(NormBound {
        upper: tidy_upper(upper, bound),
        bound: bound.clone(),
    }))
}

/// A real vector `x = v0 + Σ t_j v_j`, stored by its coordinates.
/// The smallest rational affine subspace containing it is computed at
/// construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicPoint {
    coords: Vec<SymbolicNumber>,
    hull: AffineSubspace,
}

impl SymbolicPoint {
    pub fn new(coords: Vec<SymbolicNumber>) -> Self {
        let n = coords.len();
        let symbols: BTreeSet<&Symbol> = coords.iter().flat_map(|c| c.irr.iter().map(|(s, _)| s)).collect();
        let dirs: Vec<RatVec> = symbols
            .iter()
            .map(|s| coords.iter().map(|c| c.coefficient(s)).collect())
            .collect();
        let base: RatVec = coords.iter().map(|c| c.rat.clone()).collect();
        let hull = AffineSubspace::new(base, &dirs).expect("directions share the dimension");
        debug_assert_eq!(hull.ambient_dim(), n);
        Self { coords, hull }
    }

    pub fn rational(v: &[Rat]) -> Self {
        Self::new(v.iter().cloned().map(SymbolicNumber::from_rat).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[SymbolicNumber] {
        &self.coords
    }

    /// The smallest rational affine subspace `W` containing the point.
    pub fn hull(&self) -> &AffineSubspace {
        &self.hull
    }

    pub fn is_rational(&self) -> bool {
        self.hull.dim() == 0
    }

    /// The point itself when rational.
    pub fn as_rational(&self) -> Option<RatVec> {
        self.is_rational()
            .then(|| self.coords.iter().map(|c| c.rat.clone()).collect())
    }

    /// Irrational terms `(t_l, R_l)` where `R` is the reduced echelon basis of
    /// the direction space of `W` and `t_l` is a combination of base symbols.
    pub fn terms(&self) -> Vec<(SymbolicNumber, RatVec)> {
        self.hull
            .pivots()
            .into_iter()
            .zip(self.hull.directions())
            .map(|(p, d)| (self.coords[p].irrational_part(), d.clone()))
            .collect()
    }

    /// Coordinates of the point in the chart `τ ↦ base + τ R` of `W`.
    pub fn chart(&self) -> Vec<SymbolicNumber> {
        self.hull.pivots().into_iter().map(|p| self.coords[p].clone()).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(SymbolicNumber::to_f64).collect()
    }

    /// `self - w` for a rational vector.
    pub fn minus(&self, w: &[Rat]) -> Vec<SymbolicNumber> {
        self.coords.iter().zip(w).map(|(c, q)| c.add_rat(&-q)).collect()
    }

    pub fn apply(&self, lambda: &RatMat) -> Result<SymbolicPoint> {
        if lambda.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: lambda.ncols(),
            });
        }
        let coords = (0..lambda.nrows())
            .map(|i| {
                self.coords
                    .iter()
                    .zip(lambda.row(i))
                    .fold(SymbolicNumber::zero(), |acc, (c, a)| acc.add(&c.scale(a)))
            })
            .collect();
        Ok(Self::new(coords))
    }

    /// Whether the point lies in a rational affine subspace (decided via the
    /// independence of the symbols).
    pub fn lies_in(&self, s: &AffineSubspace) -> bool {
        s.contains_subspace(&self.hull)
    }

    pub fn declared_symbols(&self) -> Vec<DeclaredSymbol> {
        let set: BTreeSet<&DeclaredSymbol> = self.coords.iter().flat_map(|c| c.declared()).collect();
        set.into_iter().cloned().collect()
    }
}

/// Symbolic vector arithmetic helpers.
pub fn sym_sub(a: &[SymbolicNumber], b: &[SymbolicNumber]) -> Vec<SymbolicNumber> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn sym_scale(a: &[SymbolicNumber], c: &Rat) -> Vec<SymbolicNumber> {
    a.iter().map(|x| x.scale(c)).collect()
}

impl Serialize for SymbolicPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawPoint::from(self).serialize(s)
    }
}

/// Wire form of a declared symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSymbol {
    pub name: String,
    pub approx: String,
    #[serde(default)]
    pub assume_independent: bool,
}

/// Wire form of a symbolic number: `{"rat": "p/q", "irr": [["c", "sqrt(2)"]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawNumber {
    #[serde(default = "zero_str")]
    pub rat: String,
    #[serde(default)]
    pub irr: Vec<(String, String)>,
}

fn zero_str() -> String {
    "0".into()
}

/// Wire form of a symbolic point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPoint {
    pub coords: Vec<RawNumber>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub symbols: Vec<RawSymbol>,
}

impl From<&SymbolicNumber> for RawNumber {
    fn from(x: &SymbolicNumber) -> Self {
        Self {
            rat: fmt_rat(&x.rat),
            irr: x.irr.iter().map(|(s, c)| (fmt_rat(c), s.to_string())).collect(),
        }
    }
}

impl From<&SymbolicPoint> for RawPoint {
    fn from(p: &SymbolicPoint) -> Self {
        Self {
            coords: p.coords.iter().map(RawNumber::from).collect(),
            symbols: p
                .declared_symbols()
                .into_iter()
                .map(|d| RawSymbol {
                    name: d.name.clone(),
                    approx: d.text.clone(),
                    assume_independent: true,
                })
                .collect(),
        }
    }
}

/// Parses `sqrt(n)` or looks the name up among declared symbols.
pub fn parse_symbol(name: &str, declared: &[DeclaredSymbol]) -> Result<SymbolicNumber> {
    let t = name.trim();
    if let Some(inner) = t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let n: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::InvalidSymbol(name.to_string()))?;
        return Ok(SymbolicNumber::sqrt(n));
    }
    declared
        .iter()
        .find(|d| d.name == t)
        .map(|d| SymbolicNumber::symbol(Symbol::Declared(d.clone())))
        .ok_or_else(|| Error::InvalidSymbol(name.to_string()))
}

impl RawNumber {
    pub fn resolve(&self, declared: &[DeclaredSymbol]) -> Result<SymbolicNumber> {
        let mut x = SymbolicNumber::from_rat(parse_rat(&self.rat)?);
        for (c, s) in &self.irr {
            x = x.add(&parse_symbol(s, declared)?.scale(&parse_rat(c)?));
        }
        Ok(x)
    }
}

impl RawPoint {
    pub fn resolve(&self) -> Result<SymbolicPoint> {
        let declared = self
            .symbols
            .iter()
            .map(|s| DeclaredSymbol::new(&s.name, &s.approx, s.assume_independent))
            .collect::<Result<Vec<_>>>()?;
        let coords = self
            .coords
            .iter()
            .map(|c| c.resolve(&declared))
            .collect::<Result<Vec<_>>>()?;
        Ok(SymbolicPoint::new(coords))
    }
}

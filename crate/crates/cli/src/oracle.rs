//! Oracles describable in JSON.

use num_integer::Integer;
use serde::Deserialize;

use conecalc::exact::{rint, Rat, RatVec};
use conecalc::polyhedral::AffineMonoid;
use conecalc::pwl::RayOracle;
use conecalc::toric::{MobOracle, TDivisor, ToricVariety};

use crate::input::{rat_rows, rats, Q};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    /// `⌊<c, s> / modulus⌋ value`
    Floor,
    /// `⌊min_j <c_j, s> / modulus⌋ value`
    Min,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub kind: TermKind,
    pub functionals: Vec<Vec<i64>>,
    #[serde(default = "one")]
    pub modulus: i64,
    pub value: Vec<Q>,
}

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleSpec {
    /// `s ↦ Mob(Σ s_i D_i)` on a toric variety.
    ToricMob {
        rays: Vec<Vec<i64>>,
        max_cones: Vec<Vec<usize>>,
        directions: Vec<Vec<Q>>,
    },
    /// A sum of floor and min terms on `N^dim`.
    Formula {
        dim: usize,
        terms: Vec<Term>,
        /// Overrides the stabilization index; `0` reports none.
        #[serde(default)]
        stabilization: Option<u64>,
    },
}

pub struct FormulaOracle {
    domain: AffineMonoid,
    terms: Vec<(Vec<Vec<i64>>, i64, RatVec)>,
    codim: usize,
    iota: Option<u64>,
}

impl FormulaOracle {
    fn new(dim: usize, terms: &[Term], stabilization: Option<u64>) -> Result<Self, CliError> {
        let codim = terms.first().map_or(0, |t| t.value.len());
        for (i, t) in terms.iter().enumerate() {
            let bad = |field: &str, message: String| CliError::Schema {
                path: format!("/oracle/terms/{i}/{field}"),
                message,
            };
            if t.modulus <= 0 {
                return Err(bad("modulus", "modulus must be positive".into()));
            }
            if t.functionals.is_empty() || t.functionals.iter().any(|c| c.len() != dim) {
                return Err(bad(
                    "functionals",
                    format!("expected nonempty list of vectors of length {dim}"),
                ));
            }
            if t.kind == TermKind::Floor && t.functionals.len() != 1 {
                return Err(bad("functionals", "floor terms take exactly one functional".into()));
            }
            if t.value.len() != codim {
                return Err(bad("value", format!("expected length {codim}")));
            }
        }
        let lcm = terms.iter().fold(1u64, |acc, t| acc.lcm(&(t.modulus as u64)));
        Ok(Self {
            domain: AffineMonoid::orthant(dim),
            terms: terms
                .iter()
                .map(|t| (t.functionals.clone(), t.modulus, rats(&t.value)))
                .collect(),
            codim,
            iota: match stabilization {
                None => Some(lcm),
                Some(0) => None,
                Some(k) => Some(k),
            },
        })
    }
}

impl RayOracle for FormulaOracle {
    fn domain(&self) -> &AffineMonoid {
        &self.domain
    }

    fn eval(&self, s: &[i64]) -> conecalc::Result<RatVec> {
        let mut out = vec![Rat::from_integer(0.into()); self.codim];
        for (fs, modulus, value) in &self.terms {
            let base = fs
                .iter()
                .map(|c| c.iter().zip(s).map(|(a, b)| a * b).sum::<i64>())
                .min()
                .expect("nonempty");
            let c = rint(Integer::div_floor(&base, modulus));
            for (o, v) in out.iter_mut().zip(value) {
                *o += &c * v;
            }
        }
        Ok(out)
    }

    fn stabilization(&self, _s: &[i64]) -> Option<u64> {
        self.iota
    }
}

/// An oracle built from its JSON description, together with what it borrows.
pub enum Built {
    Formula(FormulaOracle),
    Toric(ToricVariety, Vec<TDivisor>),
}

impl Built {
    pub fn build(desc: &OracleSpec) -> Result<Self, CliError> {
        Ok(match desc {
            OracleSpec::Formula {
                dim,
                terms,
                stabilization,
            } => Built::Formula(FormulaOracle::new(*dim, terms, *stabilization)?),
            OracleSpec::ToricMob {
                rays,
                max_cones,
                directions,
            } => {
                let x = ToricVariety::new(rays.clone(), max_cones.clone())?;
                let dirs = rat_rows(directions).into_iter().map(TDivisor::new).collect();
                Built::Toric(x, dirs)
            }
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Built::Formula(f) => f.domain.dim(),
            Built::Toric(_, d) => d.len(),
        }
    }

    /// Runs `f` with the oracle.
    pub fn with<T>(&self, f: impl FnOnce(&dyn RayOracle) -> Result<T, CliError>) -> Result<T, CliError> {
        match self {
            Built::Formula(o) => f(o),
            Built::Toric(x, dirs) => {
                let o = MobOracle::new(x, dirs.clone())?;
                f(&o)
            }
        }
    }
}

//! Serde adapters: rationals travel as `"p/q"` strings.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{fmt_rat, parse_rat, Rat};

pub mod rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        fmt_rat(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = RatRepr::deserialize(d)?;
        s.into_rat().map_err(serde::de::Error::custom)
    }
}

pub mod rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(fmt_rat).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let v = Vec::<RatRepr>::deserialize(d)?;
        v.into_iter()
            .map(|r| r.into_rat().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod rat_vecs {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| r.iter().map(fmt_rat).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let v = Vec::<Vec<RatRepr>>::deserialize(d)?;
        v.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|r| r.into_rat().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Accepts either a `"p/q"` string or a JSON integer.
#[derive(Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Int(i64),
    Str(String),
}

impl RatRepr {
    fn into_rat(self) -> Result<Rat, crate::Error> {
        match self {
            RatRepr::Int(i) => Ok(crate::exact::rint(i)),
            RatRepr::Str(s) => parse_rat(&s),
        }
    }
}

/// Newtype used where a bare rational needs to be a serde value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RatStr(#[serde(with = "rat")] pub Rat);

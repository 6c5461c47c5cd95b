use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_path_to_error::Segment;

use conecalc::exact::{parse_rat, Rat, RatVec};

use crate::CliError;

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

/// Decodes a JSON document, reporting failures with a JSON pointer.
pub fn parse<T: DeserializeOwned>(input: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(input);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path: String = e
            .path()
            .iter()
            .map(|s| match s {
                Segment::Seq { index } => format!("/{index}"),
                Segment::Map { key } => format!("/{}", escape(key)),
                Segment::Enum { variant } => format!("/{}", escape(variant)),
                Segment::Unknown => "/?".to_string(),
            })
            .collect();
        CliError::Schema {
            path,
            message: e.into_inner().to_string(),
        }
    })
}

/// A rational given as `"p/q"` or as a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(transparent)]
pub struct Q(#[serde(with = "conecalc::serial::rat")] pub Rat);

pub fn rats(v: &[Q]) -> RatVec {
    v.iter().map(|q| q.0.clone()).collect()
}

pub fn rat_rows(v: &[Vec<Q>]) -> Vec<RatVec> {
    v.iter().map(|r| rats(r)).collect()
}

pub fn parse_q(s: &str) -> Result<Rat, CliError> {
    parse_rat(s).map_err(CliError::Domain)
}

/// Rejects ambient dimensions above the configured guard.
pub fn guard(dim: usize, max: usize, path: &str) -> Result<(), CliError> {
    if dim > max {
        return Err(CliError::Guard {
            path: path.to_string(),
            dim,
            max,
        });
    }
    Ok(())
}

/// Common dimension of a list of integer vectors.
pub fn common_dim(rows: &[Vec<i64>], path: &str) -> Result<usize, CliError> {
    let d = rows.first().map(Vec::len).ok_or_else(|| CliError::Schema {
        path: path.to_string(),
        message: "expected at least one vector".into(),
    })?;
    if let Some(i) = rows.iter().position(|r| r.len() != d) {
        return Err(CliError::Schema {
            path: format!("{path}/{i}"),
            message: format!("expected length {d}, found {}", rows[i].len()),
        });
    }
    Ok(d)
}

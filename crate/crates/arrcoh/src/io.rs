//! The arrangement JSON schema:
//!
//! ```json
//! {"dim": 2, "hyperplanes": [{"normal": ["1", "0"], "offset": "0"}]}
//! ```
//!
//! Rationals are strings `"p"` or `"p/q"`; bare JSON integers are accepted
//! on input as well.

use std::path::Path;

use arrcoh_core::{rational, Arrangement, Rational};
use serde::{Deserialize, Serialize};

use crate::cli::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Text(String),
    Int(i64),
}

impl RationalText {
    pub fn from_rational(r: &Rational) -> Self {
        RationalText::Text(rational::format(r))
    }

    fn parse(&self, field: &str) -> Result<Rational, arrcoh_core::Error> {
        match self {
            RationalText::Int(v) => Ok(rational::int(*v)),
            RationalText::Text(t) => rational::parse(t)
                .map_err(|e| arrcoh_core::Error::Input(format!("{field}: {}", strip_prefix(&e)))),
        }
    }
}

fn strip_prefix(e: &arrcoh_core::Error) -> String {
    match e {
        arrcoh_core::Error::Input(m) => m.clone(),
        other => other.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationRecord {
    pub normal: Vec<RationalText>,
    pub offset: RationalText,
}

impl EquationRecord {
    pub fn new(normal: &[Rational], offset: &Rational) -> Self {
        EquationRecord {
            normal: normal.iter().map(RationalText::from_rational).collect(),
            offset: RationalText::from_rational(offset),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementFile {
    pub dim: usize,
    pub hyperplanes: Vec<EquationRecord>,
}

impl ArrangementFile {
    pub fn from_arrangement(a: &Arrangement) -> Self {
        ArrangementFile {
            dim: a.ambient_dim(),
            hyperplanes: a
                .hyperplanes()
                .iter()
                .map(|h| EquationRecord::new(h.normal(), h.offset()))
                .collect(),
        }
    }

    pub fn to_arrangement(&self) -> Result<Arrangement, arrcoh_core::Error> {
        let rows = self
            .hyperplanes
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let normal = h
                    .normal
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v.parse(&format!("hyperplanes[{i}].normal[{j}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let offset = h.offset.parse(&format!("hyperplanes[{i}].offset"))?;
                Ok((normal, offset))
            })
            .collect::<Result<Vec<_>, arrcoh_core::Error>>()?;
        Arrangement::new(self.dim, rows)
    }
}

pub fn parse_arrangement(text: &str) -> Result<Arrangement, CliError> {
    let file: ArrangementFile = serde_json::from_str(text).map_err(CliError::Schema)?;
    Ok(file.to_arrangement()?)
}

pub fn load_arrangement(path: &Path) -> Result<Arrangement, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_arrangement(&text)
}

pub fn arrangement_to_json(a: &Arrangement) -> String {
    serde_json::to_string(&ArrangementFile::from_arrangement(a)).expect("plain data serializes")
}

//! Argument resolution: inline JSON flags first, then keys of the `--json`
//! document.

use std::fs;
use std::io::Read;

use serde::de::DeserializeOwned;
use serde_json::Value;

use g2theta::json::{self, ComplexPair};
use g2theta::{CVector, Characteristic, PeriodMatrix, SymplecticIntMatrix};

use crate::CliError;

pub struct Inputs {
    doc: Option<Value>,
}

impl Inputs {
    pub fn load(source: Option<&str>) -> Result<Self, CliError> {
        let Some(source) = source else {
            return Ok(Self { doc: None });
        };
        let text = if source == "-" {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(|e| CliError::Malformed(format!("reading stdin: {e}")))?;
            buf
        } else {
            fs::read_to_string(source).map_err(|e| CliError::Malformed(format!("reading {source}: {e}")))?
        };
        let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::Malformed(format!("--json document: {e}")))?;
        if !doc.is_object() {
            return Err(CliError::Malformed("--json document must be an object".into()));
        }
        Ok(Self { doc: Some(doc) })
    }

    fn raw(&self, flag: Option<&str>, key: &str) -> Result<Option<Value>, CliError> {
        if let Some(text) = flag {
            let v = serde_json::from_str(text).map_err(|e| CliError::Malformed(format!("--{key}: {e}")))?;
            return Ok(Some(v));
        }
        Ok(self.doc.as_ref().and_then(|d| d.get(key)).cloned())
    }

    pub fn optional<T: DeserializeOwned>(&self, flag: Option<&str>, key: &str) -> Result<Option<T>, CliError> {
        match self.raw(flag, key)? {
            None => Ok(None),
            Some(v) => serde_json::from_value(v).map(Some).map_err(|e| CliError::Malformed(format!("{key}: {e}"))),
        }
    }

    pub fn required<T: DeserializeOwned>(&self, flag: Option<&str>, key: &str) -> Result<T, CliError> {
        self.optional(flag, key)?.ok_or_else(|| CliError::Malformed(format!("missing required input `{key}`")))
    }

    /// Plain-string flag (such as a word) with a string fallback in the document.
    pub fn text(&self, flag: Option<&str>, key: &str) -> Result<Option<String>, CliError> {
        if let Some(t) = flag {
            return Ok(Some(t.to_string()));
        }
        match self.doc.as_ref().and_then(|d| d.get(key)) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(other) => Err(CliError::Malformed(format!("{key}: expected a string, found {other}"))),
        }
    }

    pub fn number<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.optional(None, key),
        }
    }

    pub fn characteristic(&self, flag: Option<&str>, key: &str) -> Result<Characteristic, CliError> {
        self.required(flag, key)
    }

    pub fn period_matrix(&self, flag: Option<&str>, key: &str) -> Result<PeriodMatrix, CliError> {
        let rows: Vec<Vec<ComplexPair>> = self.required(flag, key)?;
        Ok(PeriodMatrix::from_rows(&rows)?)
    }

    pub fn vector(&self, flag: Option<&str>, key: &str) -> Result<CVector, CliError> {
        let pairs: Vec<ComplexPair> = self.required(flag, key)?;
        Ok(json::vector_from_pairs(&pairs))
    }

    pub fn symplectic(&self, flag: Option<&str>, key: &str) -> Result<SymplecticIntMatrix, CliError> {
        let rows: Vec<Vec<i64>> = self.required(flag, key)?;
        let m = json::int_matrix_from_rows(&rows).map_err(|e| CliError::Malformed(format!("{key}: {e}")))?;
        Ok(SymplecticIntMatrix::new(m)?)
    }
}

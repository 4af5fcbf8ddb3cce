//! The matrix interchange format: JSON, or whitespace text with the
//! exponent on the first line.

use std::fmt::Write as _;

use auerbach::{BasisMatrix, PExponent};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    /// `"1"`, `"inf"` or a decimal.
    pub p: String,
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl MatrixDocument {
    pub fn from_basis(b: &BasisMatrix) -> Self {
        MatrixDocument {
            p: b.p().to_string(),
            n: b.n(),
            rows: b.to_rows(),
            label: None,
            residual: None,
            provenance: None,
        }
    }

    pub fn exponent(&self) -> Result<PExponent, CliError> {
        self.p
            .parse()
            .map_err(|e| CliError::Parse(format!("bad exponent {:?}: {e}", self.p)))
    }

    /// The basis, at `p_override` when given.
    pub fn to_basis(&self, p_override: Option<PExponent>) -> Result<BasisMatrix, CliError> {
        let p = match p_override {
            Some(p) => p,
            None => self.exponent()?,
        };
        if self.rows.len() != self.n || self.rows.iter().any(|r| r.len() != self.n) {
            return Err(CliError::Parse(format!("rows do not form a {0}x{0} matrix", self.n)));
        }
        BasisMatrix::from_rows(self.rows.clone(), p).map_err(|e| CliError::Parse(e.to_string()))
    }

    /// JSON when the input starts with `{`, the text format otherwise.
    pub fn parse(input: &str) -> Result<Self, CliError> {
        let trimmed = input.trim_start();
        if trimmed.starts_with('{') {
            let doc: MatrixDocument =
                serde_json::from_str(trimmed).map_err(|e| CliError::Parse(format!("invalid document: {e}")))?;
            doc.exponent()?;
            return Ok(doc);
        }
        Self::parse_text(trimmed)
    }

    fn parse_text(input: &str) -> Result<Self, CliError> {
        let mut lines = input.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| CliError::Parse("empty matrix input".into()))?;
        let p = header.strip_prefix("p").map(|s| s.trim_start_matches([' ', '=', ':']).trim()).unwrap_or(header);
        let rows = lines
            .map(|line| {
                line.split_whitespace()
                    .map(|tok| tok.parse::<f64>().map_err(|e| CliError::Parse(format!("bad entry {tok:?}: {e}"))))
                    .collect::<Result<Vec<f64>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let doc = MatrixDocument {
            p: p.to_string(),
            n: rows.len(),
            rows,
            label: None,
            residual: None,
            provenance: None,
        };
        doc.exponent()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("p = {}\n", self.p);
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out
    }
}

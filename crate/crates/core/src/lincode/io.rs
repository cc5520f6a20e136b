//! JSON and Magma-style text forms of a code.

use serde::{Deserialize, Serialize};

use super::{CodeError, LinearCode};
use crate::gf::{Elem, Field};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    /// Monic modulus, constant term first.
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn of(field: &Field) -> FieldSpec {
        FieldSpec {
            p: field.characteristic(),
            m: field.degree(),
            modulus: field.modulus().to_vec(),
        }
    }

    pub fn build(&self) -> Result<Field, CodeError> {
        let f = Field::with_modulus(self.p, &self.modulus)?;
        if f.degree() != self.m {
            return Err(CodeError::Format(format!(
                "modulus degree {} does not match m={}",
                f.degree(),
                self.m
            )));
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub gen: Vec<Vec<String>>,
    #[serde(default)]
    pub meta: CodeMeta,
}

impl CodeFile {
    pub fn from_code(code: &LinearCode, meta: CodeMeta) -> CodeFile {
        let f = code.field();
        CodeFile {
            field: FieldSpec::of(f),
            n: code.n(),
            k: code.k(),
            gen: code
                .generator()
                .iter()
                .map(|row| row.iter().map(|&x| f.format(x)).collect())
                .collect(),
            meta,
        }
    }

    pub fn to_code(&self) -> Result<LinearCode, CodeError> {
        let f = self.field.build()?;
        if self.gen.len() != self.k {
            return Err(CodeError::Format(format!(
                "k={} but the generator has {} rows",
                self.k,
                self.gen.len()
            )));
        }
        let gen = self
            .gen
            .iter()
            .map(|row| row.iter().map(|t| f.parse(t)).collect::<Result<Vec<Elem>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        LinearCode::new(&f, self.n, gen)
    }

    pub fn twist_vector(&self, field: &Field) -> Result<Option<Vec<Elem>>, CodeError> {
        match &self.meta.twist {
            None => Ok(None),
            Some(tokens) => Ok(Some(
                tokens.iter().map(|t| field.parse(t)).collect::<Result<Vec<_>, _>>()?,
            )),
        }
    }
}

/// Matrix text in the layout Magma prints, with tokens right-aligned per column.
pub fn magma_text(code: &LinearCode) -> String {
    let f = code.field();
    let rows: Vec<Vec<String>> = code
        .generator()
        .iter()
        .map(|row| row.iter().map(|&x| f.format(x)).collect())
        .collect();
    let width = rows.iter().flat_map(|r| r.iter().map(|t| t.len())).max().unwrap_or(1);
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().map(|t| format!("{t:>width$}")).collect();
        out.push('[');
        out.push_str(&cells.join(" "));
        out.push_str("]\n");
    }
    out
}

/// Parses whitespace-separated token rows, optionally wrapped in brackets.
pub fn parse_matrix_text(field: &Field, text: &str) -> Result<Vec<Vec<Elem>>, CodeError> {
    text.lines()
        .map(|l| l.trim().trim_start_matches('[').trim_end_matches(']').trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| field.parse(t).map_err(CodeError::from))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let f = Field::new(3, 2).unwrap();
        let c = LinearCode::new(
            &f,
            4,
            vec![
                vec![Elem::ONE, Elem::ZERO, f.w(), f.pow_w(3)],
                vec![Elem::ZERO, Elem::ONE, f.pow_w(5), Elem(2)],
            ],
        )
        .unwrap();
        let file = CodeFile::from_code(
            &c,
            CodeMeta {
                construction: Some("test".into()),
                ..Default::default()
            },
        );
        let text = serde_json::to_string(&file).unwrap();
        let back: CodeFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, file);
        let c2 = back.to_code().unwrap();
        assert_eq!(c2.generator(), c.generator());
        let parsed = parse_matrix_text(&f, &magma_text(&c)).unwrap();
        assert_eq!(&parsed, c.generator());
    }
}

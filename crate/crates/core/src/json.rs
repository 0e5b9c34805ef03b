//! JSON literals for forms and graded matrices.
//!
//! Form: `{"vars": k, "deg": d, "terms": [{"exp": [e0, ..], "coef": "3/2"}]}`.
//! Graded matrix: `{"source": [..], "target": [..], "entries": [[form | null, ..], ..]}`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::form::Form;
use crate::graded::GradedMatrix;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermLiteral {
    pub exp: Vec<u32>,
    pub coef: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormLiteral {
    pub vars: usize,
    pub deg: u32,
    pub terms: Vec<TermLiteral>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedLiteral {
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    pub entries: Vec<Vec<Option<FormLiteral>>>,
}

impl FormLiteral {
    pub fn from_form(f: &Form) -> FormLiteral {
        FormLiteral {
            vars: f.nvars(),
            deg: f.degree(),
            terms: f
                .terms()
                .map(|(e, c)| TermLiteral { exp: e.clone(), coef: c.to_string() })
                .collect(),
        }
    }

    pub fn to_form(&self, field: Field) -> Result<Form> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.exp.clone(), field.parse(&t.coef)?)))
            .collect::<Result<Vec<_>>>()?;
        Form::from_terms(field, self.vars, Some(self.deg), terms)
    }
}

impl GradedLiteral {
    pub fn from_matrix(m: &GradedMatrix) -> GradedLiteral {
        GradedLiteral {
            source: m.source().to_vec(),
            target: m.target().to_vec(),
            entries: m
                .entries()
                .iter()
                .map(|r| r.iter().map(|e| (!e.is_zero()).then(|| FormLiteral::from_form(e))).collect())
                .collect(),
        }
    }

    /// `nvars` is needed only when every entry is null.
    pub fn to_matrix(&self, field: Field, nvars: Option<usize>) -> Result<GradedMatrix> {
        let nv = self
            .entries
            .iter()
            .flatten()
            .flatten()
            .map(|f| f.vars)
            .next()
            .or(nvars)
            .ok_or_else(|| Error::Parse("all entries are null and the variable count is unknown".into()))?;
        let entries = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| match e {
                        Some(f) => f.to_form(field),
                        None => Ok(Form::zero(field, nv, 0)),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GradedMatrix::from_fn(field, nv, self.source.clone(), self.target.clone(), |i, j| {
            entries[i][j].clone()
        })
        .and_then(|m| {
            if m.rows() == self.entries.len() && self.entries.iter().all(|r| r.len() == m.cols()) {
                Ok(m)
            } else {
                Err(Error::ShapeMismatch("entries do not match the twist vectors".into()))
            }
        })
    }
}

pub fn parse_form(text: &str, field: Field) -> Result<Form> {
    let lit: FormLiteral = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    lit.to_form(field)
}

pub fn parse_forms(text: &str, field: Field) -> Result<Vec<Form>> {
    let lits: Vec<FormLiteral> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    lits.iter().map(|l| l.to_form(field)).collect()
}

pub fn parse_graded(text: &str, field: Field, nvars: Option<usize>) -> Result<GradedMatrix> {
    let lit: GradedLiteral = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    lit.to_matrix(field, nvars)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_literal_parses() {
        let q = Field::Rationals;
        let text = r#"{"vars": 2, "deg": 1, "terms": [{"exp": [1, 0], "coef": "3/2"}, {"exp": [0, 1], "coef": "-1"}]}"#;
        let f = parse_form(text, q).unwrap();
        assert_eq!(f.to_string(), "3/2*x0 - x1");
        assert_eq!(FormLiteral::from_form(&f).terms.len(), 2);
    }

    #[test]
    fn inhomogeneous_literal_is_rejected() {
        let text = r#"{"vars": 2, "deg": 1, "terms": [{"exp": [2, 0], "coef": "1"}]}"#;
        assert!(matches!(parse_form(text, Field::Rationals), Err(Error::DegreeMismatch(1, 2))));
        assert!(matches!(parse_form("{", Field::Rationals), Err(Error::Parse(_))));
    }

    #[test]
    fn null_entries_become_zero() {
        let text = r#"{"source": [0, 0], "target": [1, 1], "entries": [[null, {"vars": 2, "deg": 1, "terms": [{"exp": [1, 0], "coef": "1"}]}], [null, null]]}"#;
        let m = parse_graded(text, Field::prime(5).unwrap(), None).unwrap();
        assert!(m.entry(0, 0).is_zero());
        assert_eq!(m.entry(0, 1).to_string(), "x0");
        assert!(m.validate().is_empty());
    }
}

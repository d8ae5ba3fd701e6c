//! Central hyperplane arrangements presented by their defining linear forms.

use crate::linalg::RationalMatrix;
use crate::poly::{parse_polynomial, LinearForm, Polynomial};
use crate::rational::Rational;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("an arrangement needs at least 2 variables, got {0}")]
    TooFewVariables(usize),
    #[error("an arrangement needs at least one hyperplane")]
    Empty,
    #[error("form {index} is zero")]
    ZeroForm { index: usize },
    #[error("forms {first} and {second} define the same hyperplane")]
    ProportionalPair { first: usize, second: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArrangementFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Form {
        line: usize,
        source: crate::poly::ParseError,
    },
    #[error(transparent)]
    Invalid(#[from] ArrangementError),
}

/// A finite set of pairwise non-proportional nonzero linear forms in
/// `nvars >= 2` variables. Indices into `forms` are 0-based in the API;
/// errors and reports number hyperplanes from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    nvars: usize,
    forms: Vec<LinearForm>,
}

impl Arrangement {
    pub fn new(nvars: usize, forms: Vec<LinearForm>) -> Result<Self, ArrangementError> {
        if nvars < 2 {
            return Err(ArrangementError::TooFewVariables(nvars));
        }
        if forms.is_empty() {
            return Err(ArrangementError::Empty);
        }
        for (i, form) in forms.iter().enumerate() {
            assert_eq!(form.nvars(), nvars, "form arity mismatch");
            if form.is_zero() {
                return Err(ArrangementError::ZeroForm { index: i + 1 });
            }
        }
        for i in 0..forms.len() {
            for j in i + 1..forms.len() {
                if proportional(&forms[i], &forms[j]) {
                    return Err(ArrangementError::ProportionalPair {
                        first: i + 1,
                        second: j + 1,
                    });
                }
            }
        }
        Ok(Arrangement { nvars, forms })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn size(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn form(&self, index: usize) -> &LinearForm {
        &self.forms[index]
    }

    /// Product of all defining forms; homogeneous of degree `size()`.
    pub fn defining_polynomial(&self) -> Polynomial {
        let mut q = Polynomial::one(self.nvars);
        for form in &self.forms {
            q = &q * &form.to_polynomial();
        }
        q
    }

    /// True when the normals span the whole space.
    pub fn is_essential(&self) -> bool {
        let rows = self
            .forms
            .iter()
            .map(|f| f.coefficients().to_vec())
            .collect();
        RationalMatrix::from_rows(rows).rank() == self.nvars
    }

    /// Parses the on-disk format: a `vars: N` header, then one linear form
    /// per line. Blank lines and `#` comments are skipped anywhere.
    pub fn parse(text: &str) -> Result<Self, ArrangementFileError> {
        let mut nvars = None;
        let mut forms = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if nvars.is_none() {
                let Some(rest) = content.strip_prefix("vars:") else {
                    return Err(ArrangementFileError::Syntax {
                        line,
                        message: "expected a `vars: N` header before the first form".into(),
                    });
                };
                let n: usize = rest.trim().parse().map_err(|_| ArrangementFileError::Syntax {
                    line,
                    message: format!("bad variable count `{}`", rest.trim()),
                })?;
                nvars = Some(n);
                continue;
            }
            let n = nvars.unwrap();
            let poly = parse_polynomial(content, n)
                .map_err(|source| ArrangementFileError::Form { line, source })?;
            let Some(form) = LinearForm::from_polynomial(&poly) else {
                return Err(ArrangementFileError::Syntax {
                    line,
                    message: format!("`{content}` is not homogeneous linear"),
                });
            };
            forms.push(form);
        }
        let Some(n) = nvars else {
            return Err(ArrangementFileError::Syntax {
                line: text.lines().count().max(1),
                message: "missing `vars: N` header".into(),
            });
        };
        Ok(Arrangement::new(n, forms)?)
    }

    /// Inverse of `parse` up to comments and whitespace: parsing the output
    /// reproduces the arrangement exactly.
    pub fn format(&self) -> String {
        let mut out = format!("vars: {}\n", self.nvars);
        for form in &self.forms {
            out.push_str(&form.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let forms: Vec<String> = self.forms.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", forms.join(", "))
    }
}

/// Two linear forms are proportional exactly when all 2x2 minors of their
/// coefficient rows vanish.
fn proportional(a: &LinearForm, b: &LinearForm) -> bool {
    let (ca, cb) = (a.coefficients(), b.coefficients());
    for i in 0..ca.len() {
        for j in i + 1..ca.len() {
            let minor: Rational = &(&ca[i] * &cb[j]) - &(&ca[j] * &cb[i]);
            if !minor.is_zero() {
                return false;
            }
        }
    }
    true
}

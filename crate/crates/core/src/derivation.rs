//! Polynomial derivations of the coordinate ring, written in the basis of
//! partial derivatives: theta = p_1 d_1 + ... + p_n d_n acts on f by
//! theta(f) = sum p_j df/dx_j.

use crate::arrangement::Arrangement;
use crate::poly::{parse_polynomial, Polynomial};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DerivationFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Component {
        line: usize,
        source: crate::poly::ParseError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    components: Vec<Polynomial>,
}

impl Derivation {
    /// One polynomial per variable; `components[j]` is the coefficient of
    /// `d_{j+1}`.
    pub fn new(components: Vec<Polynomial>) -> Self {
        assert!(!components.is_empty(), "a derivation needs at least one component");
        let nvars = components.len();
        for c in &components {
            assert_eq!(c.nvars(), nvars, "component arity mismatch");
        }
        Derivation { components }
    }

    pub fn zero(nvars: usize) -> Self {
        Derivation::new(vec![Polynomial::zero(nvars); nvars])
    }

    /// The Euler derivation x_1 d_1 + ... + x_n d_n.
    pub fn euler(nvars: usize) -> Self {
        Derivation::new((0..nvars).map(|j| Polynomial::variable(nvars, j)).collect())
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, var: usize) -> &Polynomial {
        &self.components[var]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        assert_eq!(f.nvars(), self.nvars(), "arity mismatch");
        let mut acc = Polynomial::zero(self.nvars());
        for (j, p) in self.components.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            acc = &acc + &(p * &f.partial_derivative(j));
        }
        acc
    }

    pub fn scale(&self, factor: &Polynomial) -> Self {
        Derivation::new(self.components.iter().map(|c| c * factor).collect())
    }

    /// All components homogeneous of one common degree (zero components do
    /// not count). The zero derivation is homogeneous without a degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut seen = None;
        for c in &self.components {
            match (c.homogeneous_degree(), c.is_zero()) {
                (_, true) => {}
                (Some(d), false) => {
                    if *seen.get_or_insert(d) != d {
                        return false;
                    }
                }
                (None, false) => return false,
            }
        }
        true
    }

    /// The common component degree, for homogeneous nonzero derivations.
    /// The Euler derivation has degree 1.
    pub fn degree(&self) -> Option<usize> {
        if !self.is_homogeneous() {
            return None;
        }
        self.components
            .iter()
            .find_map(|c| c.homogeneous_degree())
    }

    /// 1-based index of the first hyperplane whose form alpha fails
    /// `alpha | theta(alpha)`, or `None` when the derivation is logarithmic.
    pub fn first_non_logarithmic(&self, arrangement: &Arrangement) -> Option<usize> {
        assert_eq!(arrangement.nvars(), self.nvars(), "arity mismatch");
        for (i, form) in arrangement.forms().iter().enumerate() {
            let image = self.apply(&form.to_polynomial());
            if image.is_zero() {
                continue;
            }
            if image.exact_divide(&form.to_polynomial()).is_none() {
                return Some(i + 1);
            }
        }
        None
    }

    pub fn is_logarithmic(&self, arrangement: &Arrangement) -> bool {
        self.first_non_logarithmic(arrangement).is_none()
    }
}

impl Neg for &Derivation {
    type Output = Derivation;
    fn neg(self) -> Derivation {
        Derivation::new(self.components.iter().map(|c| -c).collect())
    }
}

impl Add for &Derivation {
    type Output = Derivation;
    fn add(self, rhs: &Derivation) -> Derivation {
        assert_eq!(self.nvars(), rhs.nvars(), "arity mismatch");
        Derivation::new(
            self.components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &Derivation {
    type Output = Derivation;
    fn sub(self, rhs: &Derivation) -> Derivation {
        self + &-rhs
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = c.to_string();
            if c.num_terms() == 1 && !coeff.starts_with('-') {
                parts.push(format!("{} d{}", coeff, j + 1));
            } else {
                parts.push(format!("({}) d{}", coeff, j + 1));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Parses the on-disk format: a `vars: N` header, then derivations as groups
/// of `dJ: <polynomial>` lines separated by blank lines. Unlisted components
/// are zero; `#` starts a comment.
pub fn parse_derivations(text: &str) -> Result<(usize, Vec<Derivation>), DerivationFileError> {
    let mut nvars: Option<usize> = None;
    let mut derivations = Vec::new();
    let mut block: Option<Vec<Polynomial>> = None;
    let mut block_lines: Vec<usize> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            if let Some(components) = block.take() {
                derivations.push(Derivation::new(components));
                block_lines.clear();
            }
            continue;
        }
        if nvars.is_none() {
            let Some(rest) = content.strip_prefix("vars:") else {
                return Err(DerivationFileError::Syntax {
                    line,
                    message: "expected a `vars: N` header before the first component".into(),
                });
            };
            let n: usize = rest.trim().parse().map_err(|_| DerivationFileError::Syntax {
                line,
                message: format!("bad variable count `{}`", rest.trim()),
            })?;
            if n == 0 {
                return Err(DerivationFileError::Syntax {
                    line,
                    message: "variable count must be positive".into(),
                });
            }
            nvars = Some(n);
            continue;
        }
        let n = nvars.unwrap();
        let (head, body) = content.split_once(':').ok_or_else(|| DerivationFileError::Syntax {
            line,
            message: "expected `dJ: <polynomial>`".into(),
        })?;
        let head = head.trim();
        let index: usize = head
            .strip_prefix('d')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| DerivationFileError::Syntax {
                line,
                message: format!("bad component label `{head}`"),
            })?;
        if index == 0 || index > n {
            return Err(DerivationFileError::Syntax {
                line,
                message: format!("component d{index} out of range 1..={n}"),
            });
        }
        let poly = parse_polynomial(body.trim(), n)
            .map_err(|source| DerivationFileError::Component { line, source })?;
        let components = block.get_or_insert_with(|| vec![Polynomial::zero(n); n]);
        if block_lines.contains(&index) {
            return Err(DerivationFileError::Syntax {
                line,
                message: format!("component d{index} given twice in one derivation"),
            });
        }
        block_lines.push(index);
        components[index - 1] = poly;
    }
    if let Some(components) = block.take() {
        derivations.push(Derivation::new(components));
    }
    let Some(n) = nvars else {
        return Err(DerivationFileError::Syntax {
            line: text.lines().count().max(1),
            message: "missing `vars: N` header".into(),
        });
    };
    Ok((n, derivations))
}

/// Inverse of `parse_derivations` up to comments, blank-line placement, and
/// zero components.
pub fn format_derivations(nvars: usize, derivations: &[Derivation]) -> String {
    let mut out = format!("vars: {nvars}\n");
    for der in derivations {
        assert_eq!(der.nvars(), nvars, "arity mismatch");
        out.push('\n');
        let mut wrote = false;
        for (j, c) in der.components().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out.push_str(&format!("d{}: {}\n", j + 1, c));
            wrote = true;
        }
        if !wrote {
            out.push_str("d1: 0\n");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Arrangement;
    use crate::poly::LinearForm;
    use crate::rational::rat;

    fn p(text: &str, nvars: usize) -> Polynomial {
        parse_polynomial(text, nvars).unwrap()
    }

    fn arr(forms: &[&[i64]]) -> Arrangement {
        let nvars = forms[0].len();
        Arrangement::new(
            nvars,
            forms
                .iter()
                .map(|c| LinearForm::new(c.iter().map(|&n| rat(n)).collect()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn euler_rescales_homogeneous_polynomials() {
        let e = Derivation::euler(3);
        let f = p("x1^2*x2 - 4*x3^3", 3);
        assert_eq!(e.apply(&f), &Polynomial::constant(3, rat(3)) * &f);
        assert_eq!(e.degree(), Some(1));
    }

    #[test]
    fn apply_uses_all_components() {
        let theta = Derivation::new(vec![p("x2", 2), p("x1", 2)]);
        assert_eq!(theta.apply(&p("x1*x2", 2)), p("x1^2 + x2^2", 2));
    }

    #[test]
    fn logarithmic_check_reports_first_offender() {
        let a = arr(&[&[1, 0], &[0, 1], &[1, -1]]);
        let euler = Derivation::euler(2);
        assert!(euler.is_logarithmic(&a));
        let theta = Derivation::new(vec![p("x1^2", 2), p("x2^2", 2)]);
        assert!(theta.is_logarithmic(&a));
        // d/dx1 sends x1 to 1 and x1 - x2 to 1; hyperplane 1 comes first.
        let bad = Derivation::new(vec![p("1", 2), p("0", 2)]);
        assert_eq!(bad.first_non_logarithmic(&a), Some(1));
        // x1 d1 preserves x1 and x2 but sends x1 - x2 to x1.
        let third = Derivation::new(vec![p("x1", 2), p("0", 2)]);
        assert_eq!(third.first_non_logarithmic(&a), Some(3));
    }

    #[test]
    fn homogeneity_and_degree() {
        let theta = Derivation::new(vec![p("x1^2", 2), p("x1*x2 + x2^2", 2)]);
        assert!(theta.is_homogeneous());
        assert_eq!(theta.degree(), Some(2));
        let mixed = Derivation::new(vec![p("x1", 2), p("x2^2", 2)]);
        assert!(!mixed.is_homogeneous());
        assert_eq!(mixed.degree(), None);
        assert!(Derivation::zero(2).is_homogeneous());
        assert_eq!(Derivation::zero(2).degree(), None);
    }

    #[test]
    fn display_is_readable() {
        let theta = Derivation::new(vec![p("x1^2", 3), p("x1*x2 + x2^2", 3), p("0", 3)]);
        assert_eq!(theta.to_string(), "x1^2 d1 + (x1*x2 + x2^2) d2");
        assert_eq!(Derivation::zero(2).to_string(), "0");
    }

    #[test]
    fn file_round_trip() {
        let text = "\
vars: 3

# Euler
d1: x1
d2: x2
d3: x3

d2: x2^2 - x1*x3
";
        let (nvars, ders) = parse_derivations(text).unwrap();
        assert_eq!(nvars, 3);
        assert_eq!(ders.len(), 2);
        assert_eq!(ders[0], Derivation::euler(3));
        assert!(ders[1].component(0).is_zero());
        let (n2, again) = parse_derivations(&format_derivations(nvars, &ders)).unwrap();
        assert_eq!(n2, nvars);
        assert_eq!(again, ders);
    }

    #[test]
    fn file_errors() {
        assert!(matches!(
            parse_derivations("d1: x1\n"),
            Err(DerivationFileError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_derivations("vars: 2\nd3: x1\n"),
            Err(DerivationFileError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_derivations("vars: 2\nd1: x1\nd1: x2\n"),
            Err(DerivationFileError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            parse_derivations("vars: 2\nd1: x1 +\n"),
            Err(DerivationFileError::Component { line: 2, .. })
        ));
    }

    #[test]
    fn leibniz_rule_for_apply() {
        let theta = Derivation::new(vec![p("x2^2", 2), p("x1 - x2", 2)]);
        let f = p("x1^2 + x2", 2);
        let g = p("x1*x2 - 1", 2);
        let lhs = theta.apply(&(&f * &g));
        let rhs = &(&theta.apply(&f) * &g) + &(&f * &theta.apply(&g));
        assert_eq!(lhs, rhs);
    }
}

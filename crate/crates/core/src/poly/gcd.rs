//! Multivariate gcd by content/primitive decomposition.
//!
//! The gcd of two polynomials splits into the gcd of their contents and the
//! gcd of their primitive parts with respect to a main variable. Contents
//! recurse into polynomials with one fewer active variable; primitive parts
//! run a subresultant polynomial remainder sequence (Knuth's Algorithm C),
//! which keeps every division exact while avoiding the coefficient blowup of
//! a naive pseudo-remainder cascade.
//!
//! Results are normalized: graded-lex leading coefficient 1.

use super::{Monomial, Polynomial};
use crate::rational::Rational;
use num_traits::One;
use std::collections::BTreeMap;

impl Polynomial {
    /// Splits into `(content, primitive)` with respect to `main`: the content
    /// is the gcd of the coefficient polynomials of the powers of `x_main`,
    /// and `content * primitive == self`. Panics on the zero polynomial.
    pub fn content_primitive(&self, main: usize) -> (Polynomial, Polynomial) {
        assert!(!self.is_zero(), "content of zero polynomial");
        assert!(main < self.nvars(), "variable index {main} out of range");
        let content = self
            .coefficients_in(main)
            .values()
            .fold(Polynomial::zero(self.nvars()), |acc, c| gcd(&acc, c));
        let primitive = self
            .exact_divide(&content)
            .expect("content divides its polynomial");
        (content, primitive)
    }

    /// Coefficient polynomials keyed by the exponent of `main`; the main
    /// variable is zeroed out of each coefficient.
    fn coefficients_in(&self, main: usize) -> BTreeMap<u32, Polynomial> {
        let mut groups: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in self.terms() {
            let e = m.exponent(main);
            groups
                .entry(e)
                .or_insert_with(|| Polynomial::zero(self.nvars()))
                .add_term(m.without(main), c.clone());
        }
        groups
    }

    /// Coefficient of the highest power of `main`, with `main` zeroed out.
    fn leading_coefficient_in(&self, main: usize) -> Polynomial {
        let d = self.degree_in(main);
        let mut lead = Polynomial::zero(self.nvars());
        for (m, c) in self.terms() {
            if m.exponent(main) == d {
                lead.add_term(m.without(main), c.clone());
            }
        }
        lead
    }
}

/// Greatest common divisor, normalized to leading coefficient 1.
/// `gcd(f, 0)` is the normalization of `f`; `gcd(0, 0)` is zero.
pub fn gcd(f: &Polynomial, g: &Polynomial) -> Polynomial {
    assert_eq!(f.nvars(), g.nvars(), "variable count mismatch");
    if f.is_zero() {
        return g.normalized();
    }
    if g.is_zero() {
        return f.normalized();
    }
    if f.is_constant() || g.is_constant() {
        return Polynomial::one(f.nvars());
    }
    let main = (0..f.nvars())
        .rev()
        .find(|&v| f.degree_in(v) > 0 || g.degree_in(v) > 0)
        .expect("nonconstant polynomial has an active variable");
    let (f_content, f_primitive) = f.content_primitive(main);
    let (g_content, g_primitive) = g.content_primitive(main);
    let content = gcd(&f_content, &g_content);
    let primitive = primitive_gcd_in(main, f_primitive, g_primitive);
    (&content * &primitive).normalized()
}

/// Iterated gcd over a family; zero for an empty family of zeros.
pub fn gcd_many<'a, I>(nvars: usize, polys: I) -> Polynomial
where
    I: IntoIterator<Item = &'a Polynomial>,
{
    polys
        .into_iter()
        .fold(Polynomial::zero(nvars), |acc, p| gcd(&acc, p))
}

/// Gcd of two polynomials that are primitive with respect to `main`, by the
/// subresultant remainder sequence in that variable.
fn primitive_gcd_in(main: usize, mut a: Polynomial, mut b: Polynomial) -> Polynomial {
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.nvars());
    }
    if a.degree_in(main) < b.degree_in(main) {
        std::mem::swap(&mut a, &mut b);
    }
    if b.degree_in(main) == 0 {
        // b is primitive and free of the main variable, hence a unit times 1.
        return Polynomial::one(a.nvars());
    }
    let mut g = Polynomial::one(a.nvars());
    let mut h = Polynomial::one(a.nvars());
    loop {
        let delta = a.degree_in(main) - b.degree_in(main);
        let r = pseudo_remainder(&a, &b, main);
        if r.is_zero() {
            break;
        }
        if r.degree_in(main) == 0 {
            // The remainder sequence bottoms out in the coefficient ring, so
            // the primitive parts are coprime.
            return Polynomial::one(a.nvars());
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = r
            .exact_divide(&divisor)
            .expect("subresultant remainder divides by g*h^delta");
        g = a.leading_coefficient_in(main);
        if delta > 0 {
            h = g
                .pow(delta)
                .exact_divide(&h.pow(delta - 1))
                .expect("subresultant h update stays polynomial");
        }
    }
    let (_, primitive) = b.content_primitive(main);
    primitive
}

/// Pseudo-remainder: the unique `r` with `lc^(da-db+1) * a = q*b + r` and
/// `deg_main(r) < deg_main(b)`, where `lc` is the leading coefficient of `b`
/// in `main` and `da >= db`.
fn pseudo_remainder(a: &Polynomial, b: &Polynomial, main: usize) -> Polynomial {
    let db = b.degree_in(main);
    debug_assert!(db >= 1);
    let lb = b.leading_coefficient_in(main);
    let mut r = a.clone();
    let mut budget = a.degree_in(main) + 1 - db;
    while !r.is_zero() && r.degree_in(main) >= db {
        let dr = r.degree_in(main);
        let lr = r.leading_coefficient_in(main);
        let mut shift = vec![0u32; a.nvars()];
        shift[main] = dr - db;
        let step = (&lr * b).mul_term(&Monomial::new(shift), &Rational::one());
        r = &(&lb * &r) - &step;
        budget -= 1;
    }
    // Pad to the exact power demanded by the definition so later exact
    // divisions in the remainder sequence line up.
    &r * &lb.pow(budget)
}

#[cfg(test)]
mod tests {
    use super::super::parse_polynomial;
    use super::*;
    use crate::rational::rat;

    fn p(s: &str, nvars: usize) -> Polynomial {
        parse_polynomial(s, nvars).unwrap()
    }

    #[test]
    fn zero_and_constant_rules() {
        let f = p("2*x1 + 2*x2", 2);
        let zero = Polynomial::zero(2);
        assert_eq!(gcd(&f, &zero), p("x1 + x2", 2));
        assert_eq!(gcd(&zero, &f), p("x1 + x2", 2));
        assert_eq!(gcd(&zero, &zero), zero);
        assert_eq!(gcd(&f, &Polynomial::constant(2, rat(5))), Polynomial::one(2));
    }

    #[test]
    fn content_primitive_example() {
        // x^2 y + x y^2 with main variable x: content y, primitive x^2 + x y.
        let f = p("x1^2*x2 + x1*x2^2", 2);
        let (content, primitive) = f.content_primitive(0);
        assert_eq!(content, p("x2", 2));
        assert_eq!(primitive, p("x1^2 + x1*x2", 2));
        assert_eq!(&content * &primitive, f);
    }

    #[test]
    fn difference_and_square_of_sum() {
        // gcd(x^2 - y^2, x^2 + 2xy + y^2) = x + y. Checked against the
        // divisor oracle: the result divides both inputs, and the quotients
        // are coprime to it in degree.
        let f = p("x1^2 - x2^2", 2);
        let g = p("x1^2 + 2*x1*x2 + x2^2", 2);
        let d = gcd(&f, &g);
        assert_eq!(d, p("x1 + x2", 2));
        assert!(f.exact_divide(&d).is_some());
        assert!(g.exact_divide(&d).is_some());
    }

    #[test]
    fn univariate_remainder_sequence() {
        // (x+1)^2 (x-1) and (x+1)(x-2) share exactly x+1.
        let f = &(&p("x1 + 1", 1) * &p("x1 + 1", 1)) * &p("x1 - 1", 1);
        let g = &p("x1 + 1", 1) * &p("x1 - 2", 1);
        assert_eq!(gcd(&f, &g), p("x1 + 1", 1));
    }

    #[test]
    fn three_variable_planted_factor() {
        let h = p("x1*x3 + x2^2", 3);
        let a = p("x1 + x3", 3);
        let b = p("x2 - 2*x3", 3);
        let d = gcd(&(&h * &a), &(&h * &b));
        assert_eq!(d, h.normalized());
    }

    #[test]
    fn scalar_invariance_and_symmetry() {
        let f = p("x1^2*x2 - x2^3", 2);
        let g = p("x1^3 + x1^2*x2", 2);
        let d = gcd(&f, &g);
        assert_eq!(gcd(&g, &f), d);
        assert_eq!(gcd(&f.scale(&rat(-7)), &g.scale(&rat(3))), d);
    }
}

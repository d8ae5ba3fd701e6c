//! Sparse multivariate polynomials over the rationals.
//!
//! A polynomial is a map from monomials to nonzero rational coefficients,
//! kept in graded lexicographic order so that equal polynomials always have
//! the same representation. All arithmetic is exact. Variables are indexed
//! 0..nvars-1 internally; the text grammar (see [`parse`]) numbers them
//! from 1.

mod gcd;
mod parse;

pub use gcd::{gcd, gcd_many};
pub use parse::{parse_polynomial, ParseError};

use crate::rational::Rational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector of length `nvars`. Ordered graded-lexicographically:
/// higher total degree wins, ties break on the first differing exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    /// The constant monomial `1`.
    pub fn unit(nvars: usize) -> Self {
        Monomial { exponents: vec![0; nvars] }
    }

    /// The monomial `x_var` (0-based variable index).
    pub fn variable(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index {var} out of range for {nvars} variables");
        let mut exponents = vec![0; nvars];
        exponents[var] = 1;
        Monomial { exponents }
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exponents[var]
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Exponentwise difference; `None` if any exponent would go negative.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.nvars(), other.nvars());
        let mut exponents = Vec::with_capacity(self.exponents.len());
        for (a, b) in self.exponents.iter().zip(&other.exponents) {
            exponents.push(a.checked_sub(*b)?);
        }
        Some(Monomial { exponents })
    }

    /// Copy with the exponent of `var` set to zero.
    pub fn without(&self, var: usize) -> Monomial {
        let mut exponents = self.exponents.clone();
        exponents[var] = 0;
        Monomial { exponents }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with exact rational coefficients. The term map never holds a
/// zero coefficient, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, value: Rational) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(Monomial::unit(nvars), value);
        p
    }

    /// The polynomial `x_var` (0-based variable index).
    pub fn variable(nvars: usize, var: usize) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(Monomial::variable(nvars, var), Rational::one());
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial width mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn single(monomial: Monomial, coeff: Rational) -> Self {
        let nvars = monomial.nvars();
        Polynomial::from_terms(nvars, [(monomial, coeff)])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_unit())
    }

    /// The value of a constant polynomial, `None` if any term has positive degree.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> std::collections::btree_map::Iter<'_, Monomial, Rational> {
        self.terms.iter()
    }

    pub fn coefficient(&self, monomial: &Monomial) -> Rational {
        self.terms.get(monomial).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest monomial and its coefficient; `None` for the zero polynomial.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Degree in one variable; 0 for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    /// True when all terms share one total degree. The zero polynomial is
    /// homogeneous of every degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|m| m.degree());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// `Some(d)` when the polynomial is nonzero and homogeneous of degree `d`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        if self.is_zero() || !self.is_homogeneous() {
            return None;
        }
        self.degree()
    }

    fn add_term(&mut self, monomial: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(monomial) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get() + &coeff;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, factor: &Rational) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect(),
        }
    }

    /// Multiply by a single term.
    pub fn mul_term(&self, monomial: &Monomial, coeff: &Rational) -> Polynomial {
        if coeff.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(monomial), c * coeff))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut result = Polynomial::one(self.nvars);
        for _ in 0..exp {
            result = &result * self;
        }
        result
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder. Panics on a zero divisor.
    ///
    /// Works term by term against the graded-lex leading term of the divisor;
    /// for an exact multiple the leading monomial of the running remainder is
    /// always divisible, so hitting a non-divisible one proves inexactness.
    pub fn exact_divide(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert_eq!(self.nvars, divisor.nvars, "variable count mismatch");
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut quotient = Polynomial::zero(self.nvars);
        let mut remainder = self.clone();
        let (dm, dc) = {
            let (m, c) = divisor.leading_term().unwrap();
            (m.clone(), c.clone())
        };
        while let Some((rm, rc)) = remainder.leading_term() {
            let qm = rm.checked_div(&dm)?;
            let qc = rc / &dc;
            remainder = &remainder - &divisor.mul_term(&qm, &qc);
            quotient.add_term(qm, qc);
        }
        Some(quotient)
    }

    pub fn partial_derivative(&self, var: usize) -> Polynomial {
        assert!(var < self.nvars, "variable index {var} out of range");
        let mut result = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut exponents = m.exponents().to_vec();
            exponents[var] = e - 1;
            result.add_term(Monomial::new(exponents), c * Rational::from_integer(e.into()));
        }
        result
    }

    /// Substitutes `x_pivot := -(form - c*x_pivot)/c` where `c` is the pivot
    /// coefficient of `form`, i.e. reduces modulo the linear form. The result
    /// has pivot degree 0 and represents the class of `self` in the quotient
    /// by `form`. Homogeneous inputs stay homogeneous (or collapse to zero).
    /// Panics when the pivot coefficient is zero.
    pub fn reduce_mod_linear(&self, form: &LinearForm, pivot: usize) -> Polynomial {
        assert_eq!(self.nvars, form.nvars(), "variable count mismatch");
        let c = form.coefficient(pivot);
        assert!(!c.is_zero(), "zero pivot coefficient");
        let mut substitute = Polynomial::zero(self.nvars);
        for j in 0..self.nvars {
            if j == pivot {
                continue;
            }
            let a = form.coefficient(j);
            if !a.is_zero() {
                substitute.add_term(Monomial::variable(self.nvars, j), -(a / &c));
            }
        }
        let mut powers: Vec<Polynomial> = vec![Polynomial::one(self.nvars)];
        let mut result = Polynomial::zero(self.nvars);
        for (m, coeff) in &self.terms {
            let e = m.exponent(pivot) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * &substitute;
                powers.push(next);
            }
            result = &result + &powers[e].mul_term(&m.without(pivot), coeff);
        }
        result
    }

    /// Scales so the graded-lex leading coefficient is 1. Zero stays zero.
    pub fn normalized(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = Rational::one() / c;
                self.scale(&inv)
            }
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut result = self.clone();
        for (m, c) in &rhs.terms {
            result.add_term(m.clone(), c.clone());
        }
        result
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut result = self.clone();
        for (m, c) in &rhs.terms {
            result.add_term(m.clone(), -c);
        }
        result
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut result = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                result.add_term(ma.mul(mb), ca * cb);
            }
        }
        result
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// Homogeneous degree-1 form stored as its coefficient vector. The zero form
/// is representable; arrangement validation rejects it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    coefficients: Vec<Rational>,
}

impl LinearForm {
    pub fn new(coefficients: Vec<Rational>) -> Self {
        LinearForm { coefficients }
    }

    pub fn nvars(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn coefficient(&self, var: usize) -> Rational {
        self.coefficients[var].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_zero())
    }

    /// Highest-index variable with a nonzero coefficient: the default pivot
    /// for reduction modulo this form. `None` for the zero form.
    pub fn pivot(&self) -> Option<usize> {
        self.coefficients.iter().rposition(|c| !c.is_zero())
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let nvars = self.nvars();
        Polynomial::from_terms(
            nvars,
            self.coefficients
                .iter()
                .enumerate()
                .map(|(j, c)| (Monomial::variable(nvars, j), c.clone())),
        )
    }

    /// Reads a polynomial that is homogeneous of degree 1 (or zero) back into
    /// coefficient form. `None` if any term has degree other than 1.
    pub fn from_polynomial(p: &Polynomial) -> Option<LinearForm> {
        let mut coefficients = vec![Rational::zero(); p.nvars()];
        for (m, c) in p.terms() {
            if m.degree() != 1 {
                return None;
            }
            let var = m.exponents().iter().position(|&e| e == 1).unwrap();
            coefficients[var] = c.clone();
        }
        Some(LinearForm { coefficients })
    }
}

/// Number of monomials of the given total degree in `nvars` variables.
pub fn monomial_count(nvars: usize, degree: usize) -> usize {
    // C(degree + nvars - 1, nvars - 1)
    assert!(nvars >= 1);
    let mut count: usize = 1;
    for i in 0..nvars - 1 {
        count = count * (degree + i + 1) / (i + 1);
    }
    count
}

/// All monomials of one total degree, in descending graded-lex order.
pub fn monomials_of_degree(nvars: usize, degree: usize) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(monomial_count(nvars, degree));
    let mut current = vec![0u32; nvars];
    fill_monomials(nvars, degree, 0, &mut current, &mut out);
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn fill_monomials(nvars: usize, remaining: usize, var: usize, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if var == nvars - 1 {
        current[var] = remaining as u32;
        out.push(Monomial::new(current.clone()));
        current[var] = 0;
        return;
    }
    for e in 0..=remaining {
        current[var] = e as u32;
        fill_monomials(nvars, remaining - e, var + 1, current, out);
    }
    current[var] = 0;
}

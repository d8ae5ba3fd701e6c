//! Coefficient matrices of derivation families and their maximal minors.
//!
//! A family theta_1..theta_p in n variables has the p x n matrix
//! M[i][j] = (component j of theta_i). For logarithmic families every
//! maximal minor is divisible by the defining polynomial Q, and the
//! quotients of the signed minors along a family of p = n + 1 derivations
//! are the coefficients of its canonical syzygy.

use crate::arrangement::Arrangement;
use crate::derivation::Derivation;
use crate::poly::Polynomial;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MinorError {
    #[error("derivation {derivation} is not logarithmic: form {hyperplane} does not divide its image")]
    NotLogarithmic { derivation: usize, hyperplane: usize },
    #[error("minor on rows {rows:?} is not divisible by the defining polynomial")]
    NotDivisibleByQ { rows: Vec<usize> },
    #[error("frame determinant vanishes, the frame is dependent over the fraction field")]
    DegenerateFrame,
}

/// Determinant of a square polynomial matrix. Cofactor expansion for small
/// sizes; fraction-free elimination (divisions are exact by the Sylvester
/// identity) above that.
pub fn determinant(rows: &[Vec<Polynomial>]) -> Polynomial {
    let n = rows.len();
    assert!(n > 0, "determinant needs a nonempty matrix");
    for row in rows {
        assert_eq!(row.len(), n, "determinant needs a square matrix");
    }
    if n <= 4 {
        cofactor_determinant(rows)
    } else {
        bareiss_determinant(rows)
    }
}

fn cofactor_determinant(rows: &[Vec<Polynomial>]) -> Polynomial {
    let n = rows.len();
    let nvars = rows[0][0].nvars();
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut acc = Polynomial::zero(nvars);
    for i in 0..n {
        if rows[i][0].is_zero() {
            continue;
        }
        let sub: Vec<Vec<Polynomial>> = rows
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let term = &rows[i][0] * &cofactor_determinant(&sub);
        acc = if i % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn bareiss_determinant(rows: &[Vec<Polynomial>]) -> Polynomial {
    let n = rows.len();
    let nvars = rows[0][0].nvars();
    let mut m = rows.to_vec();
    let mut negate = false;
    let mut prev = Polynomial::one(nvars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Polynomial::zero(nvars);
            };
            m.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .exact_divide(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
            m[i][k] = Polynomial::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

/// The coefficient matrix of a family, rows in family order.
pub fn coefficient_rows(derivations: &[Derivation]) -> Vec<Vec<Polynomial>> {
    derivations
        .iter()
        .map(|d| d.components().to_vec())
        .collect()
}

/// All k-element subsets of 0..n in lexicographic order.
pub fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    assert!(k <= n);
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fill_subsets(n, k, 0, &mut current, &mut out);
    out
}

fn fill_subsets(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    let remaining = k - current.len();
    for i in start..=n - remaining {
        current.push(i);
        fill_subsets(n, k, i + 1, current, out);
        current.pop();
    }
}

/// Exponent of the sign attached to the minor on a sorted 0-based row
/// subset: the number of inversions needed to bring those rows to the top.
pub fn sign_exponent(subset: &[usize]) -> usize {
    debug_assert!(subset.windows(2).all(|w| w[0] < w[1]), "subset must be sorted");
    subset.iter().enumerate().map(|(k, &i)| i - k).sum()
}

fn check_all_logarithmic(
    arrangement: &Arrangement,
    derivations: &[Derivation],
) -> Result<(), MinorError> {
    for (i, theta) in derivations.iter().enumerate() {
        if let Some(h) = theta.first_non_logarithmic(arrangement) {
            return Err(MinorError::NotLogarithmic {
                derivation: i + 1,
                hyperplane: h,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorProfile {
    /// 0-based row indices, ascending.
    pub rows: Vec<usize>,
    /// Signed minor (-1)^sign_exponent(rows) * det of the selected rows.
    pub minor: Polynomial,
    /// The quotient minor / Q.
    pub cofactor: Polynomial,
}

/// Signed maximal minors of a logarithmic family with at least n members,
/// each divided by the defining polynomial, in lexicographic subset order.
pub fn minor_profiles(
    arrangement: &Arrangement,
    derivations: &[Derivation],
) -> Result<Vec<MinorProfile>, MinorError> {
    let n = arrangement.nvars();
    assert!(
        derivations.len() >= n,
        "need at least as many derivations as variables"
    );
    for d in derivations {
        assert_eq!(d.nvars(), n, "arity mismatch");
    }
    check_all_logarithmic(arrangement, derivations)?;
    let q = arrangement.defining_polynomial();
    let rows = coefficient_rows(derivations);
    let mut profiles = Vec::new();
    for subset in index_subsets(derivations.len(), n) {
        let selected: Vec<Vec<Polynomial>> =
            subset.iter().map(|&i| rows[i].clone()).collect();
        let det = determinant(&selected);
        let minor = if sign_exponent(&subset) % 2 == 1 { -&det } else { det };
        let cofactor = minor.exact_divide(&q).ok_or_else(|| MinorError::NotDivisibleByQ {
            rows: subset.iter().map(|&i| i + 1).collect(),
        })?;
        profiles.push(MinorProfile { rows: subset, minor, cofactor });
    }
    Ok(profiles)
}

/// Syzygy coefficients of a logarithmic family of exactly n + 1 members:
/// g_i = (-1)^i det(M with row i deleted) / Q, numbering rows from 1. The
/// returned vector satisfies sum g_i theta_i = 0.
pub fn spog_coefficients(
    arrangement: &Arrangement,
    derivations: &[Derivation],
) -> Result<Vec<Polynomial>, MinorError> {
    let n = arrangement.nvars();
    assert_eq!(
        derivations.len(),
        n + 1,
        "syzygy coefficients need exactly one more derivation than variables"
    );
    check_all_logarithmic(arrangement, derivations)?;
    let q = arrangement.defining_polynomial();
    let rows = coefficient_rows(derivations);
    let mut coefficients = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let selected: Vec<Vec<Polynomial>> = rows
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, row)| row.clone())
            .collect();
        let det = determinant(&selected);
        // (-1)^i with 1-based i: deleting the first row negates.
        let signed = if (i + 1) % 2 == 1 { -&det } else { det };
        let g = signed.exact_divide(&q).ok_or_else(|| MinorError::NotDivisibleByQ {
            rows: (0..=n).filter(|&k| k != i).map(|k| k + 1).collect(),
        })?;
        coefficients.push(g);
    }
    debug_assert!(verify_syzygy(&coefficients, derivations));
    Ok(coefficients)
}

/// Checks sum c_i theta_i = 0 componentwise.
pub fn verify_syzygy(coefficients: &[Polynomial], derivations: &[Derivation]) -> bool {
    assert_eq!(coefficients.len(), derivations.len(), "length mismatch");
    if derivations.is_empty() {
        return true;
    }
    let nvars = derivations[0].nvars();
    for j in 0..nvars {
        let mut acc = Polynomial::zero(nvars);
        for (c, theta) in coefficients.iter().zip(derivations) {
            acc = &acc + &(c * theta.component(j));
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

/// Coefficients expressing a logarithmic derivation eta over a logarithmic
/// frame theta_1..theta_n with nonvanishing determinant: the returned
/// f_1..f_{n+1} satisfy f_1 theta_1 + ... + f_n theta_n + f_{n+1} eta = 0,
/// with f_{n+1} = (-1)^{n+1} det(frame) / Q nonzero. Up to sign this is
/// Cramer's rule with the common factor Q cancelled.
pub fn cramer_coefficients(
    arrangement: &Arrangement,
    frame: &[Derivation],
    eta: &Derivation,
) -> Result<Vec<Polynomial>, MinorError> {
    let n = arrangement.nvars();
    assert_eq!(frame.len(), n, "the frame needs exactly one derivation per variable");
    if determinant(&coefficient_rows(frame)).is_zero() {
        return Err(MinorError::DegenerateFrame);
    }
    let mut stack = frame.to_vec();
    stack.push(eta.clone());
    spog_coefficients(arrangement, &stack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, LinearForm};
    use crate::rational::rat;
    use proptest::prelude::*;

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

    fn der(components: &[&str], nvars: usize) -> Derivation {
        Derivation::new(components.iter().map(|c| p(c, nvars)).collect())
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(determinant(&[vec![p("x1", 2)]]), p("x1", 2));
        let m = vec![
            vec![p("x1", 2), p("x2", 2)],
            vec![p("x2", 2), p("x1", 2)],
        ];
        assert_eq!(determinant(&m), p("x1^2 - x2^2", 2));
        let singular = vec![
            vec![p("x1", 2), p("x2", 2)],
            vec![p("2*x1", 2), p("2*x2", 2)],
        ];
        assert!(determinant(&singular).is_zero());
    }

    #[test]
    fn determinant_reduction_agrees_with_cofactors() {
        // 5x5 uses the fraction-free path; compare against direct expansion.
        let entries: Vec<&str> = vec![
            "x1", "x2", "1", "0", "x1 + x2",
            "0", "x1", "x2", "1", "x1",
            "x2", "0", "x1", "x2", "1",
            "1", "x2", "0", "x1", "x2",
            "x1", "1", "x2", "0", "x1",
        ];
        let m: Vec<Vec<Polynomial>> = entries
            .chunks(5)
            .map(|row| row.iter().map(|s| p(s, 2)).collect())
            .collect();
        assert_eq!(bareiss_determinant(&m), cofactor_determinant(&m));
    }

    #[test]
    fn subset_enumeration_is_lexicographic() {
        assert_eq!(
            index_subsets(4, 2),
            vec![
                vec![0, 1], vec![0, 2], vec![0, 3],
                vec![1, 2], vec![1, 3], vec![2, 3],
            ]
        );
        assert_eq!(sign_exponent(&[0, 1, 2]), 0);
        assert_eq!(sign_exponent(&[1, 2]), 2);
        assert_eq!(sign_exponent(&[0, 2]), 1);
    }

    #[test]
    fn profiles_on_a_rank_two_example() {
        // Family (x d1, x*y d2, y d2) over {x, y}; Q = x*y.
        let a = arr(&[&[1, 0], &[0, 1]]);
        let family = vec![
            der(&["x1", "0"], 2),
            der(&["0", "x1*x2"], 2),
            der(&["0", "x2"], 2),
        ];
        let profiles = minor_profiles(&a, &family).unwrap();
        assert_eq!(profiles.len(), 3);
        assert_eq!(profiles[0].rows, vec![0, 1]);
        assert_eq!(profiles[0].cofactor, p("x1", 2));
        assert_eq!(profiles[1].rows, vec![0, 2]);
        assert_eq!(profiles[1].cofactor, p("-1", 2));
        assert_eq!(profiles[2].rows, vec![1, 2]);
        assert!(profiles[2].cofactor.is_zero());
    }

    #[test]
    fn syzygy_coefficients_on_the_same_example() {
        let a = arr(&[&[1, 0], &[0, 1]]);
        let family = vec![
            der(&["x1", "0"], 2),
            der(&["0", "x1*x2"], 2),
            der(&["0", "x2"], 2),
        ];
        let g = spog_coefficients(&a, &family).unwrap();
        assert_eq!(g, vec![p("0", 2), p("1", 2), p("-x1", 2)]);
        assert!(verify_syzygy(&g, &family));
        let broken = vec![p("1", 2), p("1", 2), p("-x1", 2)];
        assert!(!verify_syzygy(&broken, &family));
    }

    #[test]
    fn logarithmic_violations_are_reported_with_indices() {
        let a = arr(&[&[1, 0], &[0, 1]]);
        let family = vec![
            der(&["x1", "0"], 2),
            der(&["1", "0"], 2),
            der(&["0", "x2"], 2),
        ];
        assert_eq!(
            minor_profiles(&a, &family).unwrap_err(),
            MinorError::NotLogarithmic { derivation: 2, hyperplane: 1 }
        );
    }

    #[test]
    fn frame_coefficients_for_the_euler_derivation() {
        let a = arr(&[&[1, 0], &[0, 1]]);
        let frame = vec![der(&["x1", "0"], 2), der(&["0", "x2"], 2)];
        let eta = Derivation::euler(2);
        let f = cramer_coefficients(&a, &frame, &eta).unwrap();
        assert_eq!(f, vec![p("1", 2), p("1", 2), p("-1", 2)]);
        let mut stack = frame.clone();
        stack.push(eta);
        assert!(verify_syzygy(&f, &stack));
    }

    #[test]
    fn dependent_frames_are_rejected() {
        let a = arr(&[&[1, 0], &[0, 1]]);
        let frame = vec![der(&["x1", "0"], 2), der(&["2*x1", "0"], 2)];
        assert_eq!(
            cramer_coefficients(&a, &frame, &Derivation::euler(2)).unwrap_err(),
            MinorError::DegenerateFrame
        );
    }

    fn arb_entry() -> impl Strategy<Value = Polynomial> {
        (-3i64..=3, -3i64..=3, -3i64..=3).prop_map(|(a, b, c)| {
            let x = Polynomial::variable(2, 0);
            let y = Polynomial::variable(2, 1);
            let mut acc = Polynomial::constant(2, rat(a));
            acc = &acc + &x.scale(&rat(b));
            &acc + &y.scale(&rat(c))
        })
    }

    proptest! {
        #[test]
        fn determinant_alternates_under_row_swap(
            entries in proptest::collection::vec(arb_entry(), 9),
        ) {
            let m: Vec<Vec<Polynomial>> = entries.chunks(3).map(<[Polynomial]>::to_vec).collect();
            let mut swapped = m.clone();
            swapped.swap(0, 1);
            prop_assert_eq!(determinant(&swapped), -&determinant(&m));
        }

        #[test]
        fn determinant_is_linear_in_the_first_row(
            entries in proptest::collection::vec(arb_entry(), 12),
        ) {
            let rows: Vec<Vec<Polynomial>> = entries.chunks(3).map(<[Polynomial]>::to_vec).collect();
            let (extra, base) = (rows[3].clone(), rows[..3].to_vec());
            let mut shifted = base.clone();
            for (slot, e) in shifted[0].iter_mut().zip(&extra) {
                *slot = &*slot + e;
            }
            let mut other = base.clone();
            other[0] = extra;
            let sum = &determinant(&base) + &determinant(&other);
            prop_assert_eq!(determinant(&shifted), sum);
        }
    }
}

//! Independent graded checks on the derivation module, by plain linear
//! algebra over the rationals. Nothing here touches determinants or minors,
//! so results from this module can confirm or refute the criteria path.
//!
//! A degree-d derivation is a coordinate vector over the columns
//! (component j, monomial m), j outer, monomials of degree d in the order
//! produced by `monomials_of_degree` (descending graded-lex). The degree-d
//! piece of the module is the kernel of the divisibility constraints, one
//! block of rows per hyperplane: theta(alpha) must vanish identically after
//! substituting the pivot variable of alpha.
//!
//! Minimal generators come from the graded Nakayama lemma: a degree-d
//! element is a new generator exactly when it escapes the span of
//! S_1 times the degree-(d-1) piece, because that span equals the degree-d
//! part of the submodule generated below degree d.

use crate::arrangement::Arrangement;
use crate::derivation::Derivation;
use crate::linalg::{RationalMatrix, RowSpace};
use crate::poly::{monomial_count, monomials_of_degree, Monomial, Polynomial};
use crate::rational::Rational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

fn index_map(monomials: &[Monomial]) -> BTreeMap<Monomial, usize> {
    monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect()
}

fn derivation_coords(
    theta: &Derivation,
    monomials: &[Monomial],
    index: &BTreeMap<Monomial, usize>,
) -> Vec<Rational> {
    let n = theta.nvars();
    let count = monomials.len();
    let mut coords = vec![Rational::zero(); n * count];
    for j in 0..n {
        for (mono, coeff) in theta.component(j).terms() {
            coords[j * count + index[mono]] = coeff.clone();
        }
    }
    coords
}

fn derivation_from_coords(nvars: usize, monomials: &[Monomial], coords: &[Rational]) -> Derivation {
    let count = monomials.len();
    let components = (0..nvars)
        .map(|j| {
            Polynomial::from_terms(
                nvars,
                monomials
                    .iter()
                    .enumerate()
                    .map(|(t, m)| (m.clone(), coords[j * count + t].clone())),
            )
        })
        .collect();
    Derivation::new(components)
}

/// Basis of the degree-d piece of the logarithmic derivation module, each
/// vector scaled so its first coordinate in the column order above is 1.
pub fn derivation_space(arrangement: &Arrangement, degree: usize) -> Vec<Derivation> {
    let n = arrangement.nvars();
    let monomials = monomials_of_degree(n, degree);
    let count = monomials.len();

    struct Block {
        offset: usize,
        positions: BTreeMap<Monomial, usize>,
        reductions: Vec<Polynomial>,
    }
    let mut blocks = Vec::new();
    let mut total_rows = 0;
    for form in arrangement.forms() {
        let pivot = form.pivot().expect("arrangement forms are nonzero");
        let survivors: Vec<Monomial> = monomials
            .iter()
            .filter(|m| m.exponent(pivot) == 0)
            .cloned()
            .collect();
        let reductions = monomials
            .iter()
            .map(|m| {
                Polynomial::single(m.clone(), Rational::one()).reduce_mod_linear(form, pivot)
            })
            .collect();
        let positions = index_map(&survivors);
        blocks.push(Block { offset: total_rows, positions, reductions });
        total_rows += survivors.len();
    }

    let mut matrix = RationalMatrix::zero(total_rows, n * count);
    for (block, form) in blocks.iter().zip(arrangement.forms()) {
        for j in 0..n {
            let aj = form.coefficient(j);
            if aj.is_zero() {
                continue;
            }
            for (t, reduced) in block.reductions.iter().enumerate() {
                let col = j * count + t;
                for (mono, coeff) in reduced.terms() {
                    let row = block.offset + block.positions[mono];
                    matrix.set(row, col, coeff * &aj);
                }
            }
        }
    }
    matrix
        .kernel()
        .into_iter()
        .map(|v| derivation_from_coords(n, &monomials, &v))
        .collect()
}

#[derive(Debug, Clone)]
pub struct GeneratorReport {
    /// Degrees of the minimal generators found up to the cutoff, ascending.
    pub degrees: Vec<usize>,
    /// Representatives, one per entry of `degrees`.
    pub generators: Vec<Derivation>,
    /// `module_dims[d]` is the dimension of the degree-d piece, d = 0..=d_max.
    pub module_dims: Vec<usize>,
}

/// Minimal generators of the derivation module in degrees <= d_max.
pub fn minimal_generators(arrangement: &Arrangement, d_max: usize) -> GeneratorReport {
    let n = arrangement.nvars();
    let mut degrees = Vec::new();
    let mut generators = Vec::new();
    let mut module_dims = Vec::new();
    let mut previous: Vec<Derivation> = Vec::new();
    for d in 0..=d_max {
        let basis = derivation_space(arrangement, d);
        module_dims.push(basis.len());
        let monomials = monomials_of_degree(n, d);
        let index = index_map(&monomials);
        let mut span = RowSpace::new(n * monomials.len());
        for theta in &previous {
            for j in 0..n {
                let shifted = theta.scale(&Polynomial::variable(n, j));
                span.insert(derivation_coords(&shifted, &monomials, &index));
            }
        }
        for theta in &basis {
            if span.insert(derivation_coords(theta, &monomials, &index)) {
                degrees.push(d);
                generators.push(theta.clone());
            }
        }
        previous = basis;
    }
    GeneratorReport { degrees, generators, module_dims }
}

/// First degree <= d_max where the submodule generated by the given
/// logarithmic derivations misses part of the module, or `None` when it
/// generates everything that far.
pub fn first_ungenerated_degree(
    arrangement: &Arrangement,
    generators: &[Derivation],
    d_max: usize,
) -> Option<usize> {
    let n = arrangement.nvars();
    for (i, g) in generators.iter().enumerate() {
        assert_eq!(g.nvars(), n, "arity mismatch");
        assert!(g.is_homogeneous(), "generator {} must be homogeneous", i + 1);
        assert!(
            g.is_logarithmic(arrangement),
            "generator {} must be logarithmic",
            i + 1
        );
    }
    let mut piece: Vec<Derivation> = Vec::new();
    for d in 0..=d_max {
        let monomials = monomials_of_degree(n, d);
        let index = index_map(&monomials);
        let mut span = RowSpace::new(n * monomials.len());
        let mut reduced: Vec<Derivation> = Vec::new();
        let feed = |theta: Derivation, span: &mut RowSpace, reduced: &mut Vec<Derivation>| {
            if span.insert(derivation_coords(&theta, &monomials, &index)) {
                reduced.push(theta);
            }
        };
        for theta in &piece {
            for j in 0..n {
                feed(theta.scale(&Polynomial::variable(n, j)), &mut span, &mut reduced);
            }
        }
        for g in generators {
            if g.degree() == Some(d) {
                feed(g.clone(), &mut span, &mut reduced);
            }
        }
        for theta in derivation_space(arrangement, d) {
            let coords = derivation_coords(&theta, &monomials, &index);
            if !span.contains(&coords) {
                return Some(d);
            }
        }
        piece = reduced;
    }
    None
}

fn generator_degrees(generators: &[Derivation]) -> Vec<usize> {
    generators
        .iter()
        .map(|g| g.degree().expect("generators must be nonzero homogeneous"))
        .collect()
}

fn syzygy_coords(syzygy: &[Polynomial], gen_degrees: &[usize], degree: usize) -> Vec<Rational> {
    let mut coords = Vec::new();
    for (c, &e) in syzygy.iter().zip(gen_degrees) {
        if degree < e {
            debug_assert!(c.is_zero());
            continue;
        }
        let n = c.nvars();
        for m in monomials_of_degree(n, degree - e) {
            coords.push(c.coefficient(&m));
        }
    }
    coords
}

/// Basis of the degree-d syzygies among the given generators: tuples
/// (c_1..c_k) with c_i homogeneous of degree d - deg(g_i) and
/// sum c_i g_i = 0. Column blocks follow generator order.
pub fn syzygy_space(
    arrangement: &Arrangement,
    generators: &[Derivation],
    degree: usize,
) -> Vec<Vec<Polynomial>> {
    let n = arrangement.nvars();
    let gen_degrees = generator_degrees(generators);

    struct GenBlock {
        offset: usize,
        monomials: Vec<Monomial>,
    }
    let mut blocks = Vec::new();
    let mut cols = 0;
    for &e in &gen_degrees {
        let monomials = if degree >= e {
            monomials_of_degree(n, degree - e)
        } else {
            Vec::new()
        };
        blocks.push(GenBlock { offset: cols, monomials: monomials.clone() });
        cols += monomials.len();
    }

    let target = monomials_of_degree(n, degree);
    let index = index_map(&target);
    let mut matrix = RationalMatrix::zero(n * target.len(), cols);
    for (block, g) in blocks.iter().zip(generators) {
        for (t, m) in block.monomials.iter().enumerate() {
            let col = block.offset + t;
            for j in 0..n {
                let prod = g.component(j).mul_term(m, &Rational::one());
                for (mono, coeff) in prod.terms() {
                    matrix.set(j * target.len() + index[mono], col, coeff.clone());
                }
            }
        }
    }
    matrix
        .kernel()
        .into_iter()
        .map(|v| {
            blocks
                .iter()
                .map(|b| {
                    Polynomial::from_terms(
                        n,
                        b.monomials
                            .iter()
                            .enumerate()
                            .map(|(t, m)| (m.clone(), v[b.offset + t].clone())),
                    )
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ResolutionProfile {
    pub generator_degrees: Vec<usize>,
    pub generators: Vec<Derivation>,
    pub module_dims: Vec<usize>,
    pub syzygy_dims: Vec<usize>,
    pub syzygy_generator_degrees: Vec<usize>,
    /// True when the syzygy module looks free on its minimal generators in
    /// every degree up to the cutoff, the graded evidence for projective
    /// dimension <= 1.
    pub pd1_consistent: bool,
}

/// Minimal generators, graded dimensions, and syzygy data up to d_max.
pub fn resolution_profile(arrangement: &Arrangement, d_max: usize) -> ResolutionProfile {
    let n = arrangement.nvars();
    let report = minimal_generators(arrangement, d_max);
    let gen_degrees = report.degrees.clone();

    let mut syzygy_dims = Vec::new();
    let mut syzygy_generator_degrees = Vec::new();
    let mut previous: Vec<Vec<Polynomial>> = Vec::new();
    for d in 0..=d_max {
        let basis = syzygy_space(arrangement, &report.generators, d);
        syzygy_dims.push(basis.len());
        let mut span = RowSpace::new(
            gen_degrees
                .iter()
                .filter(|&&e| e <= d)
                .map(|&e| monomial_count(n, d - e))
                .sum(),
        );
        for s in &previous {
            for j in 0..n {
                let xj = Polynomial::variable(n, j);
                let shifted: Vec<Polynomial> = s.iter().map(|c| c * &xj).collect();
                span.insert(syzygy_coords(&shifted, &gen_degrees, d));
            }
        }
        for s in &basis {
            if span.insert(syzygy_coords(s, &gen_degrees, d)) {
                syzygy_generator_degrees.push(d);
            }
        }
        previous = basis;
    }

    let pd1_consistent = (0..=d_max).all(|d| {
        let expected: usize = syzygy_generator_degrees
            .iter()
            .filter(|&&s| s <= d)
            .map(|&s| monomial_count(n, d - s))
            .sum();
        syzygy_dims[d] == expected
    });

    ResolutionProfile {
        generator_degrees: gen_degrees,
        generators: report.generators,
        module_dims: report.module_dims,
        syzygy_dims,
        syzygy_generator_degrees,
        pd1_consistent,
    }
}

/// Dimension of the degree-d piece of the ideal generated by homogeneous
/// polynomials.
pub fn ideal_graded_dimension(nvars: usize, generators: &[Polynomial], degree: usize) -> usize {
    let target = monomials_of_degree(nvars, degree);
    let index = index_map(&target);
    let mut span = RowSpace::new(target.len());
    for g in generators {
        let Some(e) = g.homogeneous_degree() else {
            assert!(g.is_zero(), "ideal generators must be homogeneous");
            continue;
        };
        if e > degree {
            continue;
        }
        for m in monomials_of_degree(nvars, degree - e) {
            let prod = g.mul_term(&m, &Rational::one());
            let mut coords = vec![Rational::zero(); target.len()];
            for (mono, coeff) in prod.terms() {
                coords[index[mono]] = coeff.clone();
            }
            span.insert(coords);
        }
    }
    span.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::verify_syzygy;
    use crate::poly::{parse_polynomial, LinearForm};
    use crate::rational::rat;
    use proptest::prelude::*;

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

    fn boolean3() -> Arrangement {
        arr(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
    }

    fn four_generic_planes() -> Arrangement {
        arr(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]])
    }

    #[test]
    fn graded_dimensions_of_the_coordinate_planes() {
        let a = boolean3();
        let dims: Vec<usize> = (0..=3).map(|d| derivation_space(&a, d).len()).collect();
        assert_eq!(dims, vec![0, 3, 9, 18]);
        for d in 0..=3 {
            for theta in derivation_space(&a, d) {
                assert!(theta.is_logarithmic(&a));
                assert_eq!(theta.degree(), Some(d));
            }
        }
    }

    #[test]
    fn graded_dimensions_of_four_generic_planes() {
        let a = four_generic_planes();
        let dims: Vec<usize> = (0..=3).map(|d| derivation_space(&a, d).len()).collect();
        assert_eq!(dims, vec![0, 1, 6, 14]);
    }

    #[test]
    fn minimal_generator_degrees_of_small_arrangements() {
        assert_eq!(minimal_generators(&boolean3(), 3).degrees, vec![1, 1, 1]);

        let split = arr(&[&[1, 0, 0], &[0, 1, 0], &[1, -1, 0], &[0, 0, 1]]);
        let report = minimal_generators(&split, 4);
        assert_eq!(report.degrees, vec![1, 1, 2]);
        assert_eq!(report.module_dims, vec![0, 2, 7, 15, 26]);

        let generic = minimal_generators(&four_generic_planes(), 3);
        assert_eq!(generic.degrees, vec![1, 2, 2, 2]);
        for g in &generic.generators {
            assert!(g.is_logarithmic(&four_generic_planes()));
        }
    }

    #[test]
    fn generation_check_finds_the_gap() {
        let a = boolean3();
        let report = minimal_generators(&a, 2);
        assert_eq!(first_ungenerated_degree(&a, &report.generators, 5), None);
        let partial = &report.generators[..2];
        assert_eq!(first_ungenerated_degree(&a, partial, 5), Some(1));
    }

    #[test]
    fn syzygies_of_four_generic_planes() {
        let a = four_generic_planes();
        let report = minimal_generators(&a, 2);
        assert_eq!(syzygy_space(&a, &report.generators, 2).len(), 0);
        let relations = syzygy_space(&a, &report.generators, 3);
        assert_eq!(relations.len(), 1);
        let relation = &relations[0];
        assert!(verify_syzygy(relation, &report.generators));
        // Coefficient on a degree-e generator lives in degree 3 - e. The
        // coefficient on the Euler generator may vanish: it depends on the
        // degree-2 representatives picked by the elimination.
        for (c, e) in relation.iter().zip(&report.degrees) {
            if !c.is_zero() {
                assert_eq!(c.homogeneous_degree(), Some(3 - e));
            }
        }
        assert!(relation[1..].iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn resolution_profile_of_a_free_arrangement() {
        let split = arr(&[&[1, 0, 0], &[0, 1, 0], &[1, -1, 0], &[0, 0, 1]]);
        let profile = resolution_profile(&split, 4);
        assert_eq!(profile.generator_degrees, vec![1, 1, 2]);
        assert!(profile.syzygy_dims.iter().all(|&d| d == 0));
        assert!(profile.syzygy_generator_degrees.is_empty());
        assert!(profile.pd1_consistent);
    }

    #[test]
    fn resolution_profile_of_four_generic_planes() {
        let profile = resolution_profile(&four_generic_planes(), 5);
        assert_eq!(profile.generator_degrees, vec![1, 2, 2, 2]);
        assert_eq!(profile.syzygy_generator_degrees, vec![3]);
        assert!(profile.pd1_consistent);
    }

    #[test]
    fn ideal_dimensions() {
        let x2 = parse_polynomial("x1^2", 2).unwrap();
        let xy = parse_polynomial("x1*x2", 2).unwrap();
        assert_eq!(ideal_graded_dimension(2, &[x2.clone(), xy.clone()], 2), 2);
        assert_eq!(ideal_graded_dimension(2, &[x2.clone(), xy.clone()], 3), 3);
        let x = parse_polynomial("x1", 2).unwrap();
        assert_eq!(ideal_graded_dimension(2, &[x], 3), 3);
        assert_eq!(ideal_graded_dimension(2, &[x2, xy], 1), 0);
    }

    fn form_pool() -> Vec<LinearForm> {
        [
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 1, 0],
            [1, 0, -1],
            [0, 1, 1],
        ]
        .iter()
        .map(|c| LinearForm::new(c.iter().map(|&n| rat(n)).collect()))
        .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn minimal_generators_regenerate_the_module(
            forms in proptest::sample::subsequence(form_pool(), 1..=4),
        ) {
            let a = Arrangement::new(3, forms).unwrap();
            let report = minimal_generators(&a, 3);
            for g in &report.generators {
                prop_assert!(g.is_logarithmic(&a));
            }
            prop_assert_eq!(first_ungenerated_degree(&a, &report.generators, 3), None);
        }
    }
}

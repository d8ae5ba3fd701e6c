//! Decision procedures over the minors machinery: the determinant criterion
//! for freeness, the minor-coefficient criterion for minimal generation by
//! n + 1 derivations, the necessity direction, degree bookkeeping, and two
//! report-only conjecture explorers.
//!
//! Everything here returns certificates that carry the data needed to
//! re-verify the verdict from scratch, not just a boolean.

use crate::arrangement::Arrangement;
use crate::derivation::Derivation;
use crate::minors::{minor_profiles, spog_coefficients, verify_syzygy, MinorError};
use crate::oracle::{ideal_graded_dimension, ResolutionProfile};
use crate::poly::{gcd_many, monomial_count, LinearForm, Polynomial};
use crate::rational::Rational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CriteriaError {
    #[error("derivation {derivation} is not logarithmic: form {hyperplane} does not divide its image")]
    NotLogarithmic { derivation: usize, hyperplane: usize },
    #[error("derivation {derivation} is not homogeneous")]
    NonHomogeneous { derivation: usize },
    #[error("all maximal minors vanish: the family has rank below the number of variables")]
    AllMinorsZero,
    #[error("all polynomials in the input are zero")]
    AllZeroInput,
    #[error(transparent)]
    Minor(MinorError),
}

impl From<MinorError> for CriteriaError {
    fn from(e: MinorError) -> Self {
        match e {
            MinorError::NotLogarithmic { derivation, hyperplane } => {
                CriteriaError::NotLogarithmic { derivation, hyperplane }
            }
            other => CriteriaError::Minor(other),
        }
    }
}

fn require_homogeneous(derivations: &[Derivation]) -> Result<(), CriteriaError> {
    for (i, d) in derivations.iter().enumerate() {
        if !d.is_homogeneous() {
            return Err(CriteriaError::NonHomogeneous { derivation: i + 1 });
        }
    }
    Ok(())
}

/// Degrees of the inputs, with 0 standing in for the (degenerate) zero
/// derivation so certificates always have one entry per input.
fn input_degrees(derivations: &[Derivation]) -> Vec<usize> {
    derivations.iter().map(|d| d.degree().unwrap_or(0)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaitoVerdict {
    Free,
    NotConclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaitoCertificate {
    pub verdict: SaitoVerdict,
    /// The nonzero rational with det = c * Q; present exactly when Free.
    pub constant: Option<Rational>,
    /// Degrees of the inputs; on Free these are the exponents.
    pub exponents: Vec<usize>,
    /// The degree count sum(exponents) = |A|, reported alongside the
    /// determinant condition.
    pub degree_sum_matches: bool,
    pub determinant: Polynomial,
    /// determinant / Q; constant exactly when Free, zero when the inputs
    /// are dependent over the fraction field.
    pub cofactor: Polynomial,
}

/// Determinant test for a free basis: exactly n homogeneous logarithmic
/// derivations form a basis of the module iff det of their coefficient
/// matrix is a nonzero rational multiple of the defining polynomial.
pub fn check_saito(
    arrangement: &Arrangement,
    derivations: &[Derivation],
) -> Result<SaitoCertificate, CriteriaError> {
    let n = arrangement.nvars();
    assert_eq!(derivations.len(), n, "the determinant test needs exactly one derivation per variable");
    require_homogeneous(derivations)?;
    let profile = minor_profiles(arrangement, derivations)?
        .pop()
        .expect("square input yields one profile");
    let exponents = input_degrees(derivations);
    let degree_sum_matches = exponents.iter().sum::<usize>() == arrangement.size();
    let constant = match profile.cofactor.constant_value() {
        Some(c) if !c.is_zero() => Some(c),
        _ => None,
    };
    let verdict = if constant.is_some() {
        debug_assert!(degree_sum_matches, "det = cQ forces the degree count");
        SaitoVerdict::Free
    } else {
        SaitoVerdict::NotConclusive
    };
    Ok(SaitoCertificate {
        verdict,
        constant,
        exponents,
        degree_sum_matches,
        determinant: profile.minor,
        cofactor: profile.cofactor,
    })
}

/// True iff the iterated gcd of the inputs is a nonzero constant.
pub fn primitivity(polys: &[Polynomial]) -> Result<bool, CriteriaError> {
    let Some(sample) = polys.iter().find(|p| !p.is_zero()) else {
        return Err(CriteriaError::AllZeroInput);
    };
    let d = gcd_many(sample.nvars(), polys.iter());
    Ok(d.is_constant())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuloDivisorOutcome {
    NoNontrivialDivisor,
    /// A nonconstant common divisor of the residues; nontrivial witness.
    CommonDivisor(Polynomial),
    /// Every residue is zero: the linear form itself witnesses a common
    /// divisor.
    AllZeroResidues,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuloDivisorReport {
    pub outcome: ModuloDivisorOutcome,
    /// The inputs reduced into the quotient by the linear form, in order.
    pub residues: Vec<Polynomial>,
}

/// Tests whether the inputs share a nonconstant common divisor modulo a
/// linear form. The quotient by the form is again a polynomial ring (in one
/// variable fewer, after substituting the pivot), so the question reduces
/// to an iterated gcd of the residues there.
pub fn common_divisor_modulo(polys: &[Polynomial], form: &LinearForm) -> ModuloDivisorReport {
    assert!(!form.is_zero(), "the modulus must be a nonzero linear form");
    let pivot = form.pivot().unwrap();
    let residues: Vec<Polynomial> = polys
        .iter()
        .map(|p| p.reduce_mod_linear(form, pivot))
        .collect();
    let outcome = match residues.iter().find(|r| !r.is_zero()) {
        None => ModuloDivisorOutcome::AllZeroResidues,
        Some(sample) => {
            let d = gcd_many(sample.nvars(), residues.iter());
            if d.is_constant() {
                ModuloDivisorOutcome::NoNontrivialDivisor
            } else {
                ModuloDivisorOutcome::CommonDivisor(d)
            }
        }
    };
    ModuloDivisorReport { outcome, residues }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpogFailure {
    /// Some coefficient is a nonzero rational: the complementary n rows are
    /// a candidate free basis, so the determinant test applies instead.
    SaitoApplies { constant_index: usize },
    /// No coefficient is a nonzero linear form.
    NoLinearPivot,
    /// Every linear pivot candidate left the remaining coefficients with a
    /// common divisor modulo the pivot.
    CommonDivisorObstruction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpogVerdict {
    Spog,
    /// The criterion's hypotheses hold, but for n > 3 the projective
    /// dimension bound must come from elsewhere.
    SpogConditionalOnPd1,
    Fail(SpogFailure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotAttempt {
    /// 1-based index of the linear coefficient tried as pivot.
    pub pivot: usize,
    pub outcome: ModuloDivisorOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpogCertificate {
    pub verdict: SpogVerdict,
    /// 1-based index of the accepted pivot; set exactly on success.
    pub pivot: Option<usize>,
    /// The syzygy coefficients g_1..g_{n+1}, satisfying sum g_i theta_i = 0.
    pub coefficients: Vec<Polynomial>,
    pub generator_degrees: Vec<usize>,
    /// Degree of the relation as a homogeneous syzygy: deg g_i + deg theta_i.
    pub relation_degree: Option<usize>,
    /// Whether the coefficients have no nontrivial common divisor. Reported
    /// for transparency; not part of the success conditions.
    pub coefficients_primitive: bool,
    /// Every pivot candidate tried, in order, with the divisor-test outcome.
    pub pivot_attempts: Vec<PivotAttempt>,
}

/// Minor-coefficient test for minimal generation by n + 1 homogeneous
/// logarithmic derivations. Computes the canonical syzygy coefficients
/// g_1..g_{n+1}; succeeds when some g_i is a nonzero linear form and the
/// remaining coefficients have no common divisor modulo it. The conditions
/// are evaluated on the coefficients as computed: permuting the pivot into
/// the last slot only changes signs, which no condition sees.
///
/// A nonzero constant coefficient short-circuits to the determinant test
/// instead (the complementary rows are then a free basis candidate), and a
/// fully vanishing coefficient vector means the family has rank below n.
pub fn check_spog(
    arrangement: &Arrangement,
    derivations: &[Derivation],
    pd1_assumed: bool,
) -> Result<SpogCertificate, CriteriaError> {
    let n = arrangement.nvars();
    assert_eq!(
        derivations.len(),
        n + 1,
        "the minor criterion needs exactly one more derivation than variables"
    );
    require_homogeneous(derivations)?;
    let g = spog_coefficients(arrangement, derivations)?;
    if g.iter().all(Polynomial::is_zero) {
        return Err(CriteriaError::AllMinorsZero);
    }
    let generator_degrees = input_degrees(derivations);
    let relation_degree = g
        .iter()
        .position(|gi| !gi.is_zero())
        .and_then(|i| Some(derivations[i].degree()? + g[i].degree().unwrap()));
    let coefficients_primitive = primitivity(&g)?;

    let certificate = |verdict, pivot, attempts| SpogCertificate {
        verdict,
        pivot,
        coefficients: g.clone(),
        generator_degrees: generator_degrees.clone(),
        relation_degree,
        coefficients_primitive,
        pivot_attempts: attempts,
    };

    if let Some(j) = g.iter().position(|gi| gi.is_constant() && !gi.is_zero()) {
        return Ok(certificate(
            SpogVerdict::Fail(SpogFailure::SaitoApplies { constant_index: j + 1 }),
            None,
            Vec::new(),
        ));
    }
    // From here every nonzero coefficient has positive degree, so the
    // side condition g_j in S_{>0} for j != pivot holds automatically.
    let candidates: Vec<usize> = g
        .iter()
        .enumerate()
        .filter(|(_, gi)| gi.homogeneous_degree() == Some(1))
        .map(|(i, _)| i)
        .collect();
    if candidates.is_empty() {
        return Ok(certificate(
            SpogVerdict::Fail(SpogFailure::NoLinearPivot),
            None,
            Vec::new(),
        ));
    }
    let mut attempts = Vec::new();
    for i in candidates {
        let form = LinearForm::from_polynomial(&g[i]).unwrap();
        let others: Vec<Polynomial> = g
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, p)| p.clone())
            .collect();
        let report = common_divisor_modulo(&others, &form);
        let succeeded = report.outcome == ModuloDivisorOutcome::NoNontrivialDivisor;
        attempts.push(PivotAttempt { pivot: i + 1, outcome: report.outcome });
        if succeeded {
            let verdict = if n <= 3 || pd1_assumed {
                SpogVerdict::Spog
            } else {
                SpogVerdict::SpogConditionalOnPd1
            };
            return Ok(certificate(verdict, Some(i + 1), attempts));
        }
    }
    Ok(certificate(
        SpogVerdict::Fail(SpogFailure::CommonDivisorObstruction),
        None,
        attempts,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProportionalityOutcome {
    /// Every signed minor coefficient equals constant * relation
    /// coefficient, with one nonzero constant across all indices.
    Proportional { constant: Rational },
    /// 1-based index of the first coefficient violating proportionality.
    Mismatch { index: usize },
    /// The candidate relation is identically zero.
    AllZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecessityReport {
    /// sum f_i theta_i = 0 re-checked directly.
    pub relation_holds: bool,
    pub proportionality: ProportionalityOutcome,
    /// Divisor test on f_1..f_n modulo f_{n+1}; `None` when f_{n+1} is zero
    /// or not linear, which makes the test inapplicable.
    pub divisor_outcome: Option<ModuloDivisorOutcome>,
    /// 1-based indices i with f_i != 0 violating |A| = sum_{j != i} deg
    /// theta_j - deg f_i.
    pub degree_law_failures: Vec<usize>,
    pub passed: bool,
}

/// The necessity direction: given candidate minimal generators and their
/// relation, checks that the signed minors reproduce the relation up to one
/// nonzero rational, that the leading coefficients pass the divisor test,
/// and that the degree law holds at every nonzero coefficient.
pub fn necessity_check(
    arrangement: &Arrangement,
    generators: &[Derivation],
    relation: &[Polynomial],
) -> Result<NecessityReport, CriteriaError> {
    let n = arrangement.nvars();
    assert_eq!(generators.len(), n + 1, "necessity data needs n + 1 generators");
    assert_eq!(relation.len(), n + 1, "one relation coefficient per generator");
    require_homogeneous(generators)?;
    let relation_holds = verify_syzygy(relation, generators);
    let g = spog_coefficients(arrangement, generators)?;

    let proportionality = match relation.iter().position(|f| !f.is_zero()) {
        None => ProportionalityOutcome::AllZero,
        Some(i0) => {
            if g[i0].is_zero() {
                ProportionalityOutcome::Mismatch { index: i0 + 1 }
            } else {
                let (_, glead) = g[i0].leading_term().unwrap();
                let (_, flead) = relation[i0].leading_term().unwrap();
                let c = glead / flead;
                match (0..=n).find(|&j| g[j] != relation[j].scale(&c)) {
                    Some(j) => ProportionalityOutcome::Mismatch { index: j + 1 },
                    None => ProportionalityOutcome::Proportional { constant: c },
                }
            }
        }
    };

    let last = &relation[n];
    let divisor_outcome = if last.homogeneous_degree() == Some(1) {
        let form = LinearForm::from_polynomial(last).unwrap();
        Some(common_divisor_modulo(&relation[..n], &form).outcome)
    } else {
        None
    };

    let degrees = input_degrees(generators);
    let total: usize = degrees.iter().sum();
    let mut degree_law_failures = Vec::new();
    for (i, f) in relation.iter().enumerate() {
        let Some(df) = f.degree() else { continue };
        let lhs = arrangement.size() as i64;
        let rhs = (total - degrees[i]) as i64 - df as i64;
        if lhs != rhs {
            degree_law_failures.push(i + 1);
        }
    }

    let divisor_ok = matches!(
        divisor_outcome,
        None | Some(ModuloDivisorOutcome::NoNontrivialDivisor)
    );
    let passed = relation_holds
        && matches!(proportionality, ProportionalityOutcome::Proportional { .. })
        && divisor_ok
        && degree_law_failures.is_empty();
    Ok(NecessityReport {
        relation_holds,
        proportionality,
        divisor_outcome,
        degree_law_failures,
        passed,
    })
}

/// Alternating sum of resolution degrees against the arrangement size:
/// groups[j] holds the degrees in homological position j.
pub fn betti_degree_check(size: usize, groups: &[Vec<usize>]) -> bool {
    let mut total: i64 = 0;
    for (j, group) in groups.iter().enumerate() {
        let sum: i64 = group.iter().map(|&d| d as i64).sum();
        if j % 2 == 0 {
            total += sum;
        } else {
            total -= sum;
        }
    }
    total == size as i64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeConclusion {
    /// Every relation degree is some generator degree plus one, matched
    /// with multiplicity.
    Consistent,
    /// No relations up to the horizon.
    Vacuous,
    /// The syzygy data is not free-looking up to the horizon, so the shape
    /// question cannot be settled from this evidence.
    Inconclusive,
    Violation { relation_degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionShapeReport {
    pub generator_degrees: Vec<usize>,
    pub relation_degrees: Vec<usize>,
    pub pd1_consistent: bool,
    pub conclusion: ShapeConclusion,
}

/// Report-only explorer: does every minimal relation degree exceed a
/// matching generator degree by exactly one?
pub fn explore_conjecture_resolution_shape(profile: &ResolutionProfile) -> ResolutionShapeReport {
    let conclusion = if !profile.pd1_consistent {
        ShapeConclusion::Inconclusive
    } else if profile.syzygy_generator_degrees.is_empty() {
        ShapeConclusion::Vacuous
    } else {
        let mut pool = profile.generator_degrees.clone();
        let mut verdict = ShapeConclusion::Consistent;
        for &e in &profile.syzygy_generator_degrees {
            if let Some(pos) = pool.iter().position(|&d| d + 1 == e) {
                pool.remove(pos);
            } else {
                verdict = ShapeConclusion::Violation { relation_degree: e };
                break;
            }
        }
        verdict
    };
    ResolutionShapeReport {
        generator_degrees: profile.generator_degrees.clone(),
        relation_degrees: profile.syzygy_generator_degrees.clone(),
        pd1_consistent: profile.pd1_consistent,
        conclusion,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealComparisonRow {
    pub degree: usize,
    pub ideal_dim: usize,
    pub predicted_dim: usize,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericIdealReport {
    /// The predicted cut: k = (n - 1)(|A| - n - 1).
    pub k: usize,
    pub rows: Vec<IdealComparisonRow>,
    pub all_agree: bool,
}

/// Report-only explorer: compares, degree by degree, the ideal generated by
/// the maximal minors of a logarithmic family against the prediction
/// (polynomials of degree >= k) * Q.
pub fn explore_conjecture_generic_ideal(
    arrangement: &Arrangement,
    generators: &[Derivation],
    d_max: usize,
) -> Result<GenericIdealReport, CriteriaError> {
    let n = arrangement.nvars();
    let size = arrangement.size();
    let k = (n - 1) * size.saturating_sub(n + 1);
    assert!(d_max >= k + size, "degree bound below the prediction window");
    let minors: Vec<Polynomial> = minor_profiles(arrangement, generators)?
        .into_iter()
        .map(|p| p.minor)
        .collect();
    let rows: Vec<IdealComparisonRow> = (0..=d_max)
        .map(|d| {
            let ideal_dim = ideal_graded_dimension(n, &minors, d);
            let predicted_dim = if d >= size + k {
                monomial_count(n, d - size)
            } else {
                0
            };
            IdealComparisonRow { degree: d, ideal_dim, predicted_dim, agrees: ideal_dim == predicted_dim }
        })
        .collect();
    let all_agree = rows.iter().all(|r| r.agrees);
    Ok(GenericIdealReport { k, rows, all_agree })
}

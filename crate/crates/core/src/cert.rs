//! Serialized certificates. A certificate is a self-contained JSON document
//! carrying the inputs (as grammar strings), the verdict, and the witness
//! data; `verify` re-parses everything, re-runs the decision procedure, and
//! re-checks the recorded relation against zero, so a tampered document
//! cannot slip through.

use crate::arrangement::Arrangement;
use crate::criteria::{
    check_saito, check_spog, ModuloDivisorOutcome, SaitoCertificate, SaitoVerdict,
    SpogCertificate, SpogFailure, SpogVerdict,
};
use crate::derivation::Derivation;
use crate::minors::verify_syzygy;
use crate::poly::{parse_polynomial, LinearForm, Polynomial};
use crate::rational::{format_rational, parse_rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("certificate does not verify: {0}")]
    Mismatch(String),
}

fn malformed(msg: impl Into<String>) -> VerifyError {
    VerifyError::Malformed(msg.into())
}

fn mismatch(msg: impl Into<String>) -> VerifyError {
    VerifyError::Mismatch(msg.into())
}

/// Statement of the divisor-test reading baked into spog verdicts, recorded
/// verbatim in every document rather than assumed silently.
pub const DIVISOR_TEST_CONVENTION: &str =
    "common divisor modulo the pivot means a nonconstant homogeneous divisor of the residues; \
     all residues vanishing counts as a common divisor";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    Saito(SaitoDocument),
    Spog(SpogDocument),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SaitoDocument {
    pub nvars: usize,
    pub forms: Vec<String>,
    pub derivations: Vec<Vec<String>>,
    /// "free" or "not-conclusive".
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<String>,
    pub exponents: Vec<usize>,
    pub degree_sum_matches: bool,
    pub determinant: String,
    pub cofactor: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PivotAttemptDocument {
    pub pivot: usize,
    /// "no-nontrivial-divisor", "common-divisor", or "all-zero-residues".
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisor: Option<String>,
}

/// How the projective-dimension hypothesis was discharged for n > 3.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Pd1Evidence {
    /// Not discharged: n <= 3 needs none, n > 3 stays conditional.
    None,
    /// Caller asserted it via a flag.
    Assumed,
    /// Graded oracle evidence up to the recorded degree bound.
    Oracle,
}

/// Result of the optional independent oracle cross-check, bounded by
/// `max_degree`; these are graded rank comparisons, not an unbounded claim.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct OracleCrossCheck {
    pub max_degree: usize,
    pub generates: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_ungenerated_degree: Option<usize>,
    /// 1-based generator indices whose removal still generates; empty
    /// exactly when the set is minimal.
    pub redundant_generators: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub syzygy_dimension_at_relation_degree: Option<usize>,
    pub pd1_consistent: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpogDocument {
    pub nvars: usize,
    pub forms: Vec<String>,
    pub derivations: Vec<Vec<String>>,
    /// "spog", "spog-conditional-on-pd1", or "fail".
    pub verdict: String,
    /// Set when verdict is "fail": "saito-applies", "no-linear-pivot", or
    /// "common-divisor-obstruction".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_index: Option<usize>,
    pub pd1_evidence: Pd1Evidence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pivot: Option<usize>,
    pub coefficients: Vec<String>,
    pub generator_degrees: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation_degree: Option<usize>,
    pub coefficients_primitive: bool,
    pub pivot_attempts: Vec<PivotAttemptDocument>,
    pub divisor_test_convention: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_check: Option<OracleCrossCheck>,
}

fn form_strings(arrangement: &Arrangement) -> Vec<String> {
    arrangement
        .forms()
        .iter()
        .map(|f| f.to_polynomial().to_string())
        .collect()
}

fn derivation_strings(derivations: &[Derivation]) -> Vec<Vec<String>> {
    derivations
        .iter()
        .map(|d| d.components().iter().map(Polynomial::to_string).collect())
        .collect()
}

fn saito_verdict_string(verdict: SaitoVerdict) -> &'static str {
    match verdict {
        SaitoVerdict::Free => "free",
        SaitoVerdict::NotConclusive => "not-conclusive",
    }
}

fn spog_verdict_strings(verdict: &SpogVerdict) -> (&'static str, Option<&'static str>, Option<usize>) {
    match verdict {
        SpogVerdict::Spog => ("spog", None, None),
        SpogVerdict::SpogConditionalOnPd1 => ("spog-conditional-on-pd1", None, None),
        SpogVerdict::Fail(SpogFailure::SaitoApplies { constant_index }) => {
            ("fail", Some("saito-applies"), Some(*constant_index))
        }
        SpogVerdict::Fail(SpogFailure::NoLinearPivot) => ("fail", Some("no-linear-pivot"), None),
        SpogVerdict::Fail(SpogFailure::CommonDivisorObstruction) => {
            ("fail", Some("common-divisor-obstruction"), None)
        }
    }
}

fn outcome_strings(outcome: &ModuloDivisorOutcome) -> (&'static str, Option<String>) {
    match outcome {
        ModuloDivisorOutcome::NoNontrivialDivisor => ("no-nontrivial-divisor", None),
        ModuloDivisorOutcome::CommonDivisor(d) => ("common-divisor", Some(d.to_string())),
        ModuloDivisorOutcome::AllZeroResidues => ("all-zero-residues", None),
    }
}

pub fn saito_document(
    arrangement: &Arrangement,
    derivations: &[Derivation],
    cert: &SaitoCertificate,
) -> Certificate {
    Certificate::Saito(SaitoDocument {
        nvars: arrangement.nvars(),
        forms: form_strings(arrangement),
        derivations: derivation_strings(derivations),
        verdict: saito_verdict_string(cert.verdict).to_string(),
        constant: cert.constant.as_ref().map(format_rational),
        exponents: cert.exponents.clone(),
        degree_sum_matches: cert.degree_sum_matches,
        determinant: cert.determinant.to_string(),
        cofactor: cert.cofactor.to_string(),
    })
}

pub fn spog_document(
    arrangement: &Arrangement,
    derivations: &[Derivation],
    cert: &SpogCertificate,
    pd1_evidence: Pd1Evidence,
    oracle_check: Option<OracleCrossCheck>,
) -> Certificate {
    let (verdict, failure, constant_index) = spog_verdict_strings(&cert.verdict);
    Certificate::Spog(SpogDocument {
        nvars: arrangement.nvars(),
        forms: form_strings(arrangement),
        derivations: derivation_strings(derivations),
        verdict: verdict.to_string(),
        failure: failure.map(str::to_string),
        constant_index,
        pd1_evidence,
        pivot: cert.pivot,
        coefficients: cert.coefficients.iter().map(Polynomial::to_string).collect(),
        generator_degrees: cert.generator_degrees.clone(),
        relation_degree: cert.relation_degree,
        coefficients_primitive: cert.coefficients_primitive,
        pivot_attempts: cert
            .pivot_attempts
            .iter()
            .map(|a| {
                let (outcome, divisor) = outcome_strings(&a.outcome);
                PivotAttemptDocument { pivot: a.pivot, outcome: outcome.to_string(), divisor }
            })
            .collect(),
        divisor_test_convention: DIVISOR_TEST_CONVENTION.to_string(),
        oracle_check,
    })
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize infallibly")
    }

    pub fn from_json(text: &str) -> Result<Certificate, VerifyError> {
        serde_json::from_str(text).map_err(|e| malformed(e.to_string()))
    }

    /// Re-parse the recorded inputs, re-run the decision procedure, and
    /// compare against the recorded verdict and witness data.
    pub fn verify(&self) -> Result<(), VerifyError> {
        match self {
            Certificate::Saito(doc) => verify_saito(doc),
            Certificate::Spog(doc) => verify_spog(doc),
        }
    }
}

fn parse_inputs(
    nvars: usize,
    forms: &[String],
    derivations: &[Vec<String>],
) -> Result<(Arrangement, Vec<Derivation>), VerifyError> {
    let mut parsed_forms = Vec::new();
    for (i, text) in forms.iter().enumerate() {
        let poly = parse_polynomial(text, nvars)
            .map_err(|e| malformed(format!("form {}: {e}", i + 1)))?;
        let form = LinearForm::from_polynomial(&poly)
            .ok_or_else(|| malformed(format!("form {} is not linear", i + 1)))?;
        parsed_forms.push(form);
    }
    let arrangement = Arrangement::new(nvars, parsed_forms)
        .map_err(|e| malformed(format!("invalid arrangement: {e}")))?;
    let mut parsed_derivations = Vec::new();
    for (i, components) in derivations.iter().enumerate() {
        if components.len() != nvars {
            return Err(malformed(format!(
                "derivation {} has {} components, expected {nvars}",
                i + 1,
                components.len()
            )));
        }
        let mut polys = Vec::new();
        for (j, text) in components.iter().enumerate() {
            polys.push(
                parse_polynomial(text, nvars)
                    .map_err(|e| malformed(format!("derivation {} component {}: {e}", i + 1, j + 1)))?,
            );
        }
        parsed_derivations.push(Derivation::new(polys));
    }
    Ok((arrangement, parsed_derivations))
}

fn verify_saito(doc: &SaitoDocument) -> Result<(), VerifyError> {
    let (arrangement, derivations) = parse_inputs(doc.nvars, &doc.forms, &doc.derivations)?;
    if derivations.len() != doc.nvars {
        return Err(malformed(format!(
            "{} derivations for {} variables",
            derivations.len(),
            doc.nvars
        )));
    }
    let cert = check_saito(&arrangement, &derivations)
        .map_err(|e| mismatch(format!("re-check failed: {e}")))?;
    if saito_verdict_string(cert.verdict) != doc.verdict {
        return Err(mismatch(format!(
            "verdict: recorded {}, recomputed {}",
            doc.verdict,
            saito_verdict_string(cert.verdict)
        )));
    }
    let recorded_constant = match doc.constant.as_deref() {
        None => None,
        Some(s) => Some(
            parse_rational(s).ok_or_else(|| malformed(format!("constant is not a rational: {s}")))?,
        ),
    };
    if recorded_constant != cert.constant {
        return Err(mismatch("constant differs from recomputed value"));
    }
    if doc.exponents != cert.exponents {
        return Err(mismatch("exponents differ from recomputed degrees"));
    }
    if doc.degree_sum_matches != cert.degree_sum_matches {
        return Err(mismatch("degree sum flag differs"));
    }
    let determinant = parse_polynomial(&doc.determinant, doc.nvars)
        .map_err(|e| malformed(format!("determinant: {e}")))?;
    if determinant != cert.determinant {
        return Err(mismatch("determinant differs from recomputed value"));
    }
    let cofactor = parse_polynomial(&doc.cofactor, doc.nvars)
        .map_err(|e| malformed(format!("cofactor: {e}")))?;
    if cofactor != cert.cofactor {
        return Err(mismatch("cofactor differs from recomputed value"));
    }
    // The witness identity itself: det - cofactor * Q = 0 on the recorded
    // data, independently of the recomputation above.
    let residual = &determinant - &(&cofactor * &arrangement.defining_polynomial());
    if !residual.is_zero() {
        return Err(mismatch("determinant does not equal cofactor * Q"));
    }
    Ok(())
}

fn verify_spog(doc: &SpogDocument) -> Result<(), VerifyError> {
    let (arrangement, derivations) = parse_inputs(doc.nvars, &doc.forms, &doc.derivations)?;
    if derivations.len() != doc.nvars + 1 {
        return Err(malformed(format!(
            "{} derivations for {} variables, expected {}",
            derivations.len(),
            doc.nvars,
            doc.nvars + 1
        )));
    }
    let pd1_assumed = !matches!(doc.pd1_evidence, Pd1Evidence::None);
    let cert = check_spog(&arrangement, &derivations, pd1_assumed)
        .map_err(|e| mismatch(format!("re-check failed: {e}")))?;
    let (verdict, failure, constant_index) = spog_verdict_strings(&cert.verdict);
    if verdict != doc.verdict {
        return Err(mismatch(format!(
            "verdict: recorded {}, recomputed {verdict}",
            doc.verdict
        )));
    }
    if failure.map(str::to_string) != doc.failure {
        return Err(mismatch("failure reason differs"));
    }
    if constant_index != doc.constant_index {
        return Err(mismatch("constant index differs"));
    }
    if cert.pivot != doc.pivot {
        return Err(mismatch("pivot differs from recomputed value"));
    }
    if doc.coefficients.len() != cert.coefficients.len() {
        return Err(malformed("coefficient count differs from input count"));
    }
    let mut recorded = Vec::new();
    for (i, text) in doc.coefficients.iter().enumerate() {
        let p = parse_polynomial(text, doc.nvars)
            .map_err(|e| malformed(format!("coefficient {}: {e}", i + 1)))?;
        recorded.push(p);
    }
    if recorded != cert.coefficients {
        return Err(mismatch("coefficients differ from recomputed minors"));
    }
    // Relation re-checked to zero on the recorded data.
    if !verify_syzygy(&recorded, &derivations) {
        return Err(mismatch("recorded coefficients do not annihilate the inputs"));
    }
    if doc.generator_degrees != cert.generator_degrees {
        return Err(mismatch("generator degrees differ"));
    }
    if doc.relation_degree != cert.relation_degree {
        return Err(mismatch("relation degree differs"));
    }
    if doc.coefficients_primitive != cert.coefficients_primitive {
        return Err(mismatch("primitivity flag differs"));
    }
    if let Some(check) = &doc.oracle_check {
        // Oracle blocks are bounded-degree reports; verify their internal
        // consistency without repeating the (expensive) computation.
        if check.generates != check.first_ungenerated_degree.is_none() {
            return Err(mismatch("oracle block: generation flag contradicts witness degree"));
        }
        if doc.verdict == "spog"
            && !(check.generates && check.redundant_generators.is_empty())
        {
            return Err(mismatch("oracle block contradicts the positive verdict"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::minimal_generators;
    use crate::rational::rat;

    fn generic_planes() -> Arrangement {
        Arrangement::new(
            3,
            vec![
                LinearForm::new(vec![rat(1), rat(0), rat(0)]),
                LinearForm::new(vec![rat(0), rat(1), rat(0)]),
                LinearForm::new(vec![rat(0), rat(0), rat(1)]),
                LinearForm::new(vec![rat(1), rat(1), rat(1)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn saito_round_trip() {
        let a = Arrangement::new(
            2,
            vec![
                LinearForm::new(vec![rat(1), rat(0)]),
                LinearForm::new(vec![rat(0), rat(1)]),
                LinearForm::new(vec![rat(1), rat(-1)]),
            ],
        )
        .unwrap();
        let basis = vec![
            Derivation::euler(2),
            Derivation::new(vec![
                parse_polynomial("x1^2", 2).unwrap(),
                parse_polynomial("x2^2", 2).unwrap(),
            ]),
        ];
        let cert = check_saito(&a, &basis).unwrap();
        let doc = saito_document(&a, &basis, &cert);
        let json = doc.to_json();
        let parsed = Certificate::from_json(&json).unwrap();
        assert_eq!(parsed, doc);
        parsed.verify().unwrap();
    }

    #[test]
    fn spog_round_trip_and_tamper_detection() {
        let a = generic_planes();
        let gens = minimal_generators(&a, 2).generators;
        let cert = check_spog(&a, &gens, false).unwrap();
        let doc = spog_document(&a, &gens, &cert, Pd1Evidence::None, None);
        let json = doc.to_json();
        let parsed = Certificate::from_json(&json).unwrap();
        parsed.verify().unwrap();

        let Certificate::Spog(mut tampered) = parsed else { unreachable!() };
        tampered.verdict = "fail".to_string();
        tampered.failure = Some("no-linear-pivot".to_string());
        let err = Certificate::Spog(tampered).verify().unwrap_err();
        assert!(matches!(err, VerifyError::Mismatch(_)));
    }

    #[test]
    fn tampered_coefficient_is_caught() {
        let a = generic_planes();
        let gens = minimal_generators(&a, 2).generators;
        let cert = check_spog(&a, &gens, false).unwrap();
        let Certificate::Spog(mut doc) = spog_document(&a, &gens, &cert, Pd1Evidence::None, None)
        else {
            unreachable!()
        };
        doc.coefficients[0] = "x1^2".to_string();
        let err = Certificate::Spog(doc).verify().unwrap_err();
        assert!(matches!(err, VerifyError::Mismatch(_)));
    }

    #[test]
    fn malformed_polynomial_is_malformed_not_mismatch() {
        let a = generic_planes();
        let gens = minimal_generators(&a, 2).generators;
        let cert = check_spog(&a, &gens, false).unwrap();
        let Certificate::Spog(mut doc) = spog_document(&a, &gens, &cert, Pd1Evidence::None, None)
        else {
            unreachable!()
        };
        doc.forms[0] = "x9^^".to_string();
        let err = Certificate::Spog(doc).verify().unwrap_err();
        assert!(matches!(err, VerifyError::Malformed(_)));
    }

    #[test]
    fn pd1_evidence_is_honored_on_reverification() {
        // An arrangement with nvars > 3 whose verdict was upgraded by
        // assumed evidence must re-verify under the same assumption.
        let a = Arrangement::new(
            4,
            vec![
                LinearForm::new(vec![rat(1), rat(0), rat(0), rat(0)]),
                LinearForm::new(vec![rat(0), rat(1), rat(0), rat(0)]),
                LinearForm::new(vec![rat(0), rat(0), rat(1), rat(0)]),
                LinearForm::new(vec![rat(1), rat(1), rat(1), rat(0)]),
                LinearForm::new(vec![rat(0), rat(0), rat(0), rat(1)]),
            ],
        )
        .unwrap();
        let gens = minimal_generators(&a, 2).generators;
        assert_eq!(gens.len(), 5);
        let cert = check_spog(&a, &gens, true).unwrap();
        if cert.verdict == SpogVerdict::Spog {
            let doc = spog_document(&a, &gens, &cert, Pd1Evidence::Assumed, None);
            doc.verify().unwrap();
        }
    }
}

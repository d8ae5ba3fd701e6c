//! Command-line frontend over the logderiv library: reads arrangement and
//! derivation files, runs the determinant or minor criterion, queries the
//! graded oracle, and emits certificates in text or JSON.
//!
//! Exit codes are a stable contract: 0 positive verdict, 1 negative or
//! inconclusive verdict, 2 usage or parse error, 3 contract violation
//! (inputs that parse but break a mathematical precondition).

use clap::{Parser, Subcommand, ValueEnum};
use logderiv::arrangement::{Arrangement, ArrangementFileError};
use logderiv::cert::{self, Certificate, OracleCrossCheck, Pd1Evidence, VerifyError};
use logderiv::criteria::{
    check_saito, check_spog, explore_conjecture_generic_ideal,
    explore_conjecture_resolution_shape, CriteriaError, ModuloDivisorOutcome, SaitoVerdict,
    ShapeConclusion, SpogCertificate, SpogFailure, SpogVerdict,
};
use logderiv::derivation::{parse_derivations, Derivation};
use logderiv::minors::{minor_profiles, sign_exponent, MinorError};
use logderiv::oracle::{
    derivation_space, first_ungenerated_degree, minimal_generators, resolution_profile,
    syzygy_space,
};
use logderiv::poly::Polynomial;
use serde_json::json;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::{fs, thread};

#[derive(Parser)]
#[command(
    name = "logderiv",
    version,
    about = "Exact criteria for logarithmic derivation modules of central hyperplane arrangements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Degree cutoff for oracle computations and explorers.
    #[arg(long, global = true, value_name = "D")]
    max_degree: Option<usize>,

    /// Worker threads when the arrangement path is a directory of .arr files.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Clone)]
enum Command {
    /// Parse an arrangement file and report Q, |A|, and essentiality.
    Validate { arrangement: PathBuf },

    /// Determinant test on exactly one derivation per variable.
    Saito {
        arrangement: PathBuf,
        derivations: PathBuf,
    },

    /// Minor criterion on exactly one more derivation than variables.
    Spog {
        arrangement: PathBuf,
        derivations: PathBuf,

        /// Take projective dimension <= 1 on faith when vars > 3.
        #[arg(long)]
        assume_pd1: bool,

        /// Cross-check generation, minimality, and the relation space
        /// against the graded oracle and embed the result.
        #[arg(long)]
        oracle_verify: bool,
    },

    /// Signed maximal minors of a logarithmic family, with cofactors.
    Minors {
        arrangement: PathBuf,
        derivations: PathBuf,
    },

    /// Graded linear-algebra queries on the derivation module.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },

    /// Report-only explorers for open questions; always exit 0.
    Conjectures {
        #[command(subcommand)]
        command: ConjectureCommand,
    },

    /// Re-check a previously emitted JSON certificate.
    #[command(hide = true)]
    VerifyCert { certificate: PathBuf },
}

#[derive(Subcommand, Clone)]
enum OracleCommand {
    /// Dimension of each graded piece of the derivation module.
    Dims { arrangement: PathBuf },

    /// Minimal generators up to the cutoff, with representatives.
    MinGens { arrangement: PathBuf },

    /// Relation spaces among the given derivations, degree by degree.
    Syzygies {
        arrangement: PathBuf,
        derivations: PathBuf,
    },

    /// Do the given derivations generate the module up to the cutoff?
    Generates {
        arrangement: PathBuf,
        derivations: PathBuf,
    },
}

#[derive(Subcommand, Clone)]
enum ConjectureCommand {
    /// Is every minimal relation degree a generator degree plus one?
    ResolutionShape { arrangement: PathBuf },

    /// Ideal of maximal minors versus (degrees >= k) times Q.
    GenericIdeal { arrangement: PathBuf },
}

/// Error with the exit code it maps to. Messages go to stderr.
#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> CliError {
    CliError { code, message: message.into() }
}

type CmdResult = Result<(String, u8), CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match batch_directory(&cli.command) {
        Some(dir) => run_batch(&cli, &dir),
        None => run_command(&cli.command, cli.format, cli.max_degree),
    };
    match result {
        Ok((output, code)) => {
            print!("{output}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

// ---------------------------------------------------------------- loading

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn load_arrangement(path: &Path) -> Result<Arrangement, CliError> {
    let text = read_file(path)?;
    Arrangement::parse(&text).map_err(|e| match e {
        // A file that parses but violates the arrangement axioms is a
        // contract violation, not a syntax problem.
        ArrangementFileError::Invalid(inner) => fail(3, format!("{}: {inner}", path.display())),
        other => fail(2, format!("{}: {other}", path.display())),
    })
}

fn load_derivations(path: &Path, arrangement: &Arrangement) -> Result<Vec<Derivation>, CliError> {
    let text = read_file(path)?;
    let (nvars, ders) =
        parse_derivations(&text).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    if nvars != arrangement.nvars() {
        return Err(fail(
            2,
            format!(
                "{}: derivations use {nvars} variables but the arrangement has {}",
                path.display(),
                arrangement.nvars()
            ),
        ));
    }
    Ok(ders)
}

fn expect_count(ders: &[Derivation], want: usize, role: &str) -> Result<(), CliError> {
    if ders.len() != want {
        return Err(fail(
            2,
            format!("{role} needs exactly {want} derivations, got {}", ders.len()),
        ));
    }
    Ok(())
}

fn criteria_fail(e: CriteriaError) -> CliError {
    fail(3, e.to_string())
}

/// The oracle entry points assert these; surface them as exit 3 instead.
fn require_oracle_ready(
    arrangement: &Arrangement,
    ders: &[Derivation],
) -> Result<(), CliError> {
    for (i, d) in ders.iter().enumerate() {
        if d.is_zero() {
            return Err(fail(3, format!("derivation {} is zero", i + 1)));
        }
        if !d.is_homogeneous() {
            return Err(fail(3, format!("derivation {} is not homogeneous", i + 1)));
        }
        if let Some(h) = d.first_non_logarithmic(arrangement) {
            return Err(fail(
                3,
                format!(
                    "derivation {} is not logarithmic: form {h} does not divide its image",
                    i + 1
                ),
            ));
        }
    }
    Ok(())
}

// ------------------------------------------------------------- formatting

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn poly_strings(polys: &[Polynomial]) -> Vec<String> {
    polys.iter().map(Polynomial::to_string).collect()
}

fn divisor_outcome_label(outcome: &ModuloDivisorOutcome) -> String {
    match outcome {
        ModuloDivisorOutcome::NoNontrivialDivisor => "no-nontrivial-divisor".into(),
        ModuloDivisorOutcome::CommonDivisor(d) => format!("common-divisor ({d})"),
        ModuloDivisorOutcome::AllZeroResidues => "all-zero-residues".into(),
    }
}

fn pretty(value: serde_json::Value) -> String {
    let mut out = serde_json::to_string_pretty(&value).expect("report serialization");
    out.push('\n');
    out
}

// ------------------------------------------------------------- dispatcher

fn run_command(command: &Command, format: Format, max_degree: Option<usize>) -> CmdResult {
    match command {
        Command::Validate { arrangement } => cmd_validate(arrangement, format),
        Command::Saito { arrangement, derivations } => cmd_saito(arrangement, derivations, format),
        Command::Spog { arrangement, derivations, assume_pd1, oracle_verify } => {
            cmd_spog(arrangement, derivations, *assume_pd1, *oracle_verify, format, max_degree)
        }
        Command::Minors { arrangement, derivations } => {
            cmd_minors(arrangement, derivations, format)
        }
        Command::Oracle { command } => match command {
            OracleCommand::Dims { arrangement } => cmd_oracle_dims(arrangement, format, max_degree),
            OracleCommand::MinGens { arrangement } => {
                cmd_oracle_min_gens(arrangement, format, max_degree)
            }
            OracleCommand::Syzygies { arrangement, derivations } => {
                cmd_oracle_syzygies(arrangement, derivations, format, max_degree)
            }
            OracleCommand::Generates { arrangement, derivations } => {
                cmd_oracle_generates(arrangement, derivations, format, max_degree)
            }
        },
        Command::Conjectures { command } => match command {
            ConjectureCommand::ResolutionShape { arrangement } => {
                cmd_resolution_shape(arrangement, format, max_degree)
            }
            ConjectureCommand::GenericIdeal { arrangement } => {
                cmd_generic_ideal(arrangement, format, max_degree)
            }
        },
        Command::VerifyCert { certificate } => cmd_verify_cert(certificate, format),
    }
}

// --------------------------------------------------------------- commands

fn cmd_validate(path: &Path, format: Format) -> CmdResult {
    let a = load_arrangement(path)?;
    let forms: Vec<String> = a.forms().iter().map(|f| f.to_string()).collect();
    let q = a.defining_polynomial();
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "forms: {}", forms.join(", "));
            let _ = writeln!(s, "Q = {q}");
            let _ = writeln!(s, "|A| = {}", a.size());
            let _ = writeln!(s, "vars: {}", a.nvars());
            let _ = writeln!(s, "essential: {}", yesno(a.is_essential()));
            s
        }
        Format::Json => pretty(json!({
            "command": "validate",
            "nvars": a.nvars(),
            "size": a.size(),
            "forms": forms,
            "defining_polynomial": q.to_string(),
            "essential": a.is_essential(),
        })),
    };
    Ok((out, 0))
}

fn cmd_saito(arr_path: &Path, der_path: &Path, format: Format) -> CmdResult {
    let a = load_arrangement(arr_path)?;
    let ders = load_derivations(der_path, &a)?;
    expect_count(&ders, a.nvars(), "the determinant test")?;
    let cert = check_saito(&a, &ders).map_err(criteria_fail)?;
    let code = match cert.verdict {
        SaitoVerdict::Free => 0,
        SaitoVerdict::NotConclusive => 1,
    };
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            let verdict = match cert.verdict {
                SaitoVerdict::Free => "free",
                SaitoVerdict::NotConclusive => "not-conclusive",
            };
            let _ = writeln!(s, "verdict: {verdict}");
            if let Some(c) = &cert.constant {
                let _ = writeln!(s, "constant: {c}");
            }
            let _ = writeln!(s, "exponents: {}", join(&cert.exponents));
            let _ = writeln!(s, "exponent sum matches |A|: {}", yesno(cert.degree_sum_matches));
            let _ = writeln!(s, "determinant: {}", cert.determinant);
            let _ = writeln!(s, "cofactor: {}", cert.cofactor);
            s
        }
        Format::Json => {
            let mut doc = cert::saito_document(&a, &ders, &cert).to_json();
            doc.push('\n');
            doc
        }
    };
    Ok((out, code))
}

fn cmd_spog(
    arr_path: &Path,
    der_path: &Path,
    assume_pd1: bool,
    oracle_verify: bool,
    format: Format,
    max_degree: Option<usize>,
) -> CmdResult {
    let a = load_arrangement(arr_path)?;
    let ders = load_derivations(der_path, &a)?;
    expect_count(&ders, a.nvars() + 1, "the minor criterion")?;
    let mut cert = check_spog(&a, &ders, assume_pd1).map_err(criteria_fail)?;

    let mut evidence = if assume_pd1 { Pd1Evidence::Assumed } else { Pd1Evidence::None };
    let mut oracle_check = None;
    if oracle_verify {
        let check = run_oracle_cross_check(&a, &ders, &cert, max_degree);
        // The conditional verdict upgrades only when the oracle corroborates
        // everything it can see up to the cutoff.
        if cert.verdict == SpogVerdict::SpogConditionalOnPd1
            && check.pd1_consistent
            && check.generates
            && check.redundant_generators.is_empty()
        {
            cert = check_spog(&a, &ders, true).map_err(criteria_fail)?;
            evidence = Pd1Evidence::Oracle;
        }
        oracle_check = Some(check);
    }

    let code = match cert.verdict {
        SpogVerdict::Spog => 0,
        _ => 1,
    };
    let out = match format {
        Format::Text => spog_text(&cert, evidence, oracle_check.as_ref()),
        Format::Json => {
            let mut doc = cert::spog_document(&a, &ders, &cert, evidence, oracle_check).to_json();
            doc.push('\n');
            doc
        }
    };
    Ok((out, code))
}

fn run_oracle_cross_check(
    a: &Arrangement,
    ders: &[Derivation],
    cert: &SpogCertificate,
    max_degree: Option<usize>,
) -> OracleCrossCheck {
    let top = cert.generator_degrees.iter().copied().max().unwrap_or(0);
    let d_max = max_degree.unwrap_or(top + a.size());
    let first_gap = first_ungenerated_degree(a, ders, d_max);
    let mut redundant = Vec::new();
    for i in 0..ders.len() {
        let mut rest = ders.to_vec();
        rest.remove(i);
        if first_ungenerated_degree(a, &rest, d_max).is_none() {
            redundant.push(i + 1);
        }
    }
    let syzygy_dim = cert
        .relation_degree
        .map(|d| syzygy_space(a, ders, d).len());
    let pd1_consistent = resolution_profile(a, d_max).pd1_consistent;
    OracleCrossCheck {
        max_degree: d_max,
        generates: first_gap.is_none(),
        first_ungenerated_degree: first_gap,
        redundant_generators: redundant,
        syzygy_dimension_at_relation_degree: syzygy_dim,
        pd1_consistent,
    }
}

fn spog_text(
    cert: &SpogCertificate,
    evidence: Pd1Evidence,
    oracle_check: Option<&OracleCrossCheck>,
) -> String {
    let mut s = String::new();
    match &cert.verdict {
        SpogVerdict::Spog => {
            let _ = writeln!(s, "verdict: spog");
        }
        SpogVerdict::SpogConditionalOnPd1 => {
            let _ = writeln!(s, "verdict: spog-conditional-on-pd1");
        }
        SpogVerdict::Fail(reason) => {
            let _ = writeln!(s, "verdict: fail");
            match reason {
                SpogFailure::SaitoApplies { constant_index } => {
                    let _ = writeln!(
                        s,
                        "failure: saito-applies (coefficient {constant_index} is a nonzero \
                         constant; run the determinant test on the other rows)"
                    );
                }
                SpogFailure::NoLinearPivot => {
                    let _ = writeln!(s, "failure: no-linear-pivot");
                }
                SpogFailure::CommonDivisorObstruction => {
                    let _ = writeln!(s, "failure: common-divisor-obstruction");
                }
            }
        }
    }
    if let Some(p) = cert.pivot {
        let _ = writeln!(s, "pivot: g{p}");
    }
    let _ = writeln!(s, "generator degrees: {}", join(&cert.generator_degrees));
    if let Some(d) = cert.relation_degree {
        let _ = writeln!(s, "relation degree: {d}");
    }
    let _ = writeln!(s, "coefficients primitive: {}", yesno(cert.coefficients_primitive));
    for (i, g) in cert.coefficients.iter().enumerate() {
        let _ = writeln!(s, "g{} = {g}", i + 1);
    }
    if !cert.pivot_attempts.is_empty() {
        let _ = writeln!(s, "pivot attempts:");
        for attempt in &cert.pivot_attempts {
            let _ = writeln!(
                s,
                "  g{}: {}",
                attempt.pivot,
                divisor_outcome_label(&attempt.outcome)
            );
        }
    }
    let evidence_label = match evidence {
        Pd1Evidence::None => "none",
        Pd1Evidence::Assumed => "assumed",
        Pd1Evidence::Oracle => "oracle",
    };
    let _ = writeln!(s, "pd1 evidence: {evidence_label}");
    if let Some(check) = oracle_check {
        let _ = writeln!(s, "oracle check up to degree {}:", check.max_degree);
        let _ = writeln!(s, "  generates: {}", yesno(check.generates));
        if let Some(d) = check.first_ungenerated_degree {
            let _ = writeln!(s, "  first ungenerated degree: {d}");
        }
        if check.redundant_generators.is_empty() {
            let _ = writeln!(s, "  redundant generators: none");
        } else {
            let _ = writeln!(s, "  redundant generators: {}", join(&check.redundant_generators));
        }
        if let Some(dim) = check.syzygy_dimension_at_relation_degree {
            let _ = writeln!(s, "  relation space dimension at relation degree: {dim}");
        }
        let _ = writeln!(s, "  pd1 consistent: {}", yesno(check.pd1_consistent));
    }
    s
}

fn cmd_minors(arr_path: &Path, der_path: &Path, format: Format) -> CmdResult {
    let a = load_arrangement(arr_path)?;
    let ders = load_derivations(der_path, &a)?;
    if ders.len() < a.nvars() {
        return Err(fail(
            2,
            format!(
                "the minor table needs at least {} derivations, got {}",
                a.nvars(),
                ders.len()
            ),
        ));
    }
    let profiles = minor_profiles(&a, &ders).map_err(|e: MinorError| fail(3, e.to_string()))?;
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{} derivations over {} variables, {} maximal minors",
                ders.len(),
                a.nvars(),
                profiles.len()
            );
            for p in &profiles {
                let rows: Vec<usize> = p.rows.iter().map(|r| r + 1).collect();
                let sigma = sign_exponent(&p.rows);
                let _ = writeln!(
                    s,
                    "I = {{{}}}  sigma = {sigma}  minor = {}  cofactor = {}",
                    join(&rows),
                    p.minor,
                    p.cofactor
                );
            }
            s
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = profiles
                .iter()
                .map(|p| {
                    json!({
                        "rows": p.rows.iter().map(|r| r + 1).collect::<Vec<usize>>(),
                        "sign_exponent": sign_exponent(&p.rows),
                        "minor": p.minor.to_string(),
                        "cofactor": p.cofactor.to_string(),
                    })
                })
                .collect();
            pretty(json!({
                "command": "minors",
                "nvars": a.nvars(),
                "size": a.size(),
                "minors": rows,
            }))
        }
    };
    Ok((out, 0))
}

fn cmd_oracle_dims(path: &Path, format: Format, max_degree: Option<usize>) -> CmdResult {
    let a = load_arrangement(path)?;
    let d_max = max_degree.unwrap_or(8);
    let dims: Vec<usize> = (0..=d_max).map(|d| derivation_space(&a, d).len()).collect();
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "graded dimensions of the derivation module up to degree {d_max}");
            for (d, dim) in dims.iter().enumerate() {
                let _ = writeln!(s, "d = {d}: {dim}");
            }
            s
        }
        Format::Json => pretty(json!({
            "command": "oracle-dims",
            "max_degree": d_max,
            "dims": dims,
        })),
    };
    Ok((out, 0))
}

fn cmd_oracle_min_gens(path: &Path, format: Format, max_degree: Option<usize>) -> CmdResult {
    let a = load_arrangement(path)?;
    let d_max = max_degree.unwrap_or(a.size() + 2);
    let report = minimal_generators(&a, d_max);
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "minimal generators up to degree {d_max}");
            let _ = writeln!(s, "degrees: {}", join(&report.degrees));
            for (e, g) in report.degrees.iter().zip(&report.generators) {
                let _ = writeln!(s, "degree {e}: {g}");
            }
            let _ = writeln!(s, "module dims by degree: {}", join(&report.module_dims));
            s
        }
        Format::Json => {
            let gens: Vec<Vec<String>> = report
                .generators
                .iter()
                .map(|g| poly_strings(g.components()))
                .collect();
            pretty(json!({
                "command": "oracle-min-gens",
                "max_degree": d_max,
                "degrees": report.degrees,
                "generators": gens,
                "module_dims": report.module_dims,
            }))
        }
    };
    Ok((out, 0))
}

fn cmd_oracle_syzygies(
    arr_path: &Path,
    der_path: &Path,
    format: Format,
    max_degree: Option<usize>,
) -> CmdResult {
    let a = load_arrangement(arr_path)?;
    let ders = load_derivations(der_path, &a)?;
    require_oracle_ready(&a, &ders)?;
    let d_max = max_degree.unwrap_or(a.size() + 2);
    let spaces: Vec<Vec<Vec<Polynomial>>> =
        (0..=d_max).map(|d| syzygy_space(&a, &ders, d)).collect();
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "relation spaces among {} derivations up to degree {d_max}",
                ders.len()
            );
            for (d, basis) in spaces.iter().enumerate() {
                let _ = writeln!(s, "degree {d}: dim {}", basis.len());
                for relation in basis {
                    let _ = writeln!(s, "  ({})", poly_strings(relation).join(", "));
                }
            }
            s
        }
        Format::Json => {
            let by_degree: Vec<serde_json::Value> = spaces
                .iter()
                .enumerate()
                .map(|(d, basis)| {
                    json!({
                        "degree": d,
                        "dim": basis.len(),
                        "basis": basis.iter().map(|r| poly_strings(r)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            pretty(json!({
                "command": "oracle-syzygies",
                "max_degree": d_max,
                "spaces": by_degree,
            }))
        }
    };
    Ok((out, 0))
}

fn cmd_oracle_generates(
    arr_path: &Path,
    der_path: &Path,
    format: Format,
    max_degree: Option<usize>,
) -> CmdResult {
    let a = load_arrangement(arr_path)?;
    let ders = load_derivations(der_path, &a)?;
    require_oracle_ready(&a, &ders)?;
    let top = ders.iter().filter_map(Derivation::degree).max().unwrap_or(0);
    let d_max = max_degree.unwrap_or(top + a.size());
    let first_gap = first_ungenerated_degree(&a, &ders, d_max);
    let code = if first_gap.is_none() { 0 } else { 1 };
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "generates up to degree {d_max}: {}", yesno(first_gap.is_none()));
            if let Some(d) = first_gap {
                let _ = writeln!(s, "first ungenerated degree: {d}");
            }
            s
        }
        Format::Json => pretty(json!({
            "command": "oracle-generates",
            "max_degree": d_max,
            "generates": first_gap.is_none(),
            "first_ungenerated_degree": first_gap,
        })),
    };
    Ok((out, code))
}

fn cmd_resolution_shape(path: &Path, format: Format, max_degree: Option<usize>) -> CmdResult {
    let a = load_arrangement(path)?;
    let d_max = max_degree.unwrap_or(a.size() + 2);
    let profile = resolution_profile(&a, d_max);
    let report = explore_conjecture_resolution_shape(&profile);
    let conclusion = match report.conclusion {
        ShapeConclusion::Consistent => "consistent".to_string(),
        ShapeConclusion::Vacuous => "vacuous (no relations up to the horizon)".to_string(),
        ShapeConclusion::Inconclusive => "inconclusive".to_string(),
        ShapeConclusion::Violation { relation_degree } => {
            format!("violation at relation degree {relation_degree}")
        }
    };
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "resolution shape up to degree {d_max}");
            let _ = writeln!(s, "generator degrees: {}", join(&report.generator_degrees));
            if report.relation_degrees.is_empty() {
                let _ = writeln!(s, "relation degrees: none");
            } else {
                let _ = writeln!(s, "relation degrees: {}", join(&report.relation_degrees));
            }
            let _ = writeln!(s, "pd1 consistent: {}", yesno(report.pd1_consistent));
            let _ = writeln!(s, "conclusion: {conclusion}");
            s
        }
        Format::Json => pretty(json!({
            "command": "conjectures-resolution-shape",
            "max_degree": d_max,
            "generator_degrees": report.generator_degrees,
            "relation_degrees": report.relation_degrees,
            "pd1_consistent": report.pd1_consistent,
            "conclusion": conclusion,
        })),
    };
    Ok((out, 0))
}

fn cmd_generic_ideal(path: &Path, format: Format, max_degree: Option<usize>) -> CmdResult {
    let a = load_arrangement(path)?;
    let n = a.nvars();
    let size = a.size();
    let k = (n - 1) * size.saturating_sub(n + 1);
    let d_max = max_degree.unwrap_or(k + size + 4);
    if d_max < k + size {
        return Err(fail(
            2,
            format!("--max-degree must be at least k + |A| = {}", k + size),
        ));
    }
    let gens = minimal_generators(&a, size + 2).generators;
    if gens.len() < n {
        return Err(fail(
            3,
            format!("found only {} generators up to degree {}, need at least {n}", gens.len(), size + 2),
        ));
    }
    let report = explore_conjecture_generic_ideal(&a, &gens, d_max).map_err(criteria_fail)?;
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "minors ideal versus (degrees >= k) * Q, k = {}", report.k);
            let _ = writeln!(s, "degree  ideal  predicted  agree");
            for row in &report.rows {
                let _ = writeln!(
                    s,
                    "{:>6}  {:>5}  {:>9}  {}",
                    row.degree,
                    row.ideal_dim,
                    row.predicted_dim,
                    yesno(row.agrees)
                );
            }
            let _ = writeln!(s, "all degrees agree: {}", yesno(report.all_agree));
            s
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "degree": r.degree,
                        "ideal_dim": r.ideal_dim,
                        "predicted_dim": r.predicted_dim,
                        "agrees": r.agrees,
                    })
                })
                .collect();
            pretty(json!({
                "command": "conjectures-generic-ideal",
                "max_degree": d_max,
                "k": report.k,
                "rows": rows,
                "all_agree": report.all_agree,
            }))
        }
    };
    Ok((out, 0))
}

fn cmd_verify_cert(path: &Path, format: Format) -> CmdResult {
    let text = read_file(path)?;
    let cert = Certificate::from_json(&text).map_err(|e| fail(2, e.to_string()))?;
    match cert.verify() {
        Ok(()) => {
            let kind = match &cert {
                Certificate::Saito(_) => "saito",
                Certificate::Spog(_) => "spog",
            };
            let out = match format {
                Format::Text => format!("certificate verifies: {kind}\n"),
                Format::Json => pretty(json!({
                    "command": "verify-cert",
                    "kind": kind,
                    "verified": true,
                })),
            };
            Ok((out, 0))
        }
        Err(VerifyError::Mismatch(msg)) => Err(fail(1, format!("certificate does not verify: {msg}"))),
        Err(VerifyError::Malformed(msg)) => Err(fail(2, format!("malformed certificate: {msg}"))),
    }
}

// ------------------------------------------------------------- batch mode

fn batch_directory(command: &Command) -> Option<PathBuf> {
    let (arr, _) = job_paths(command)?;
    if arr.is_dir() {
        Some(arr.clone())
    } else {
        None
    }
}

fn job_paths(command: &Command) -> Option<(&PathBuf, Option<&PathBuf>)> {
    match command {
        Command::Validate { arrangement } => Some((arrangement, None)),
        Command::Saito { arrangement, derivations }
        | Command::Spog { arrangement, derivations, .. }
        | Command::Minors { arrangement, derivations } => Some((arrangement, Some(derivations))),
        Command::Oracle { command } => match command {
            OracleCommand::Dims { arrangement } | OracleCommand::MinGens { arrangement } => {
                Some((arrangement, None))
            }
            OracleCommand::Syzygies { arrangement, derivations }
            | OracleCommand::Generates { arrangement, derivations } => {
                Some((arrangement, Some(derivations)))
            }
        },
        Command::Conjectures { command } => match command {
            ConjectureCommand::ResolutionShape { arrangement }
            | ConjectureCommand::GenericIdeal { arrangement } => Some((arrangement, None)),
        },
        Command::VerifyCert { .. } => None,
    }
}

fn with_paths(command: &Command, arr: PathBuf, der: Option<PathBuf>) -> Command {
    let mut replaced = command.clone();
    match &mut replaced {
        Command::Validate { arrangement } => *arrangement = arr,
        Command::Saito { arrangement, derivations }
        | Command::Spog { arrangement, derivations, .. }
        | Command::Minors { arrangement, derivations } => {
            *arrangement = arr;
            *derivations = der.expect("derivations path resolved for this command");
        }
        Command::Oracle { command } => match command {
            OracleCommand::Dims { arrangement } | OracleCommand::MinGens { arrangement } => {
                *arrangement = arr;
            }
            OracleCommand::Syzygies { arrangement, derivations }
            | OracleCommand::Generates { arrangement, derivations } => {
                *arrangement = arr;
                *derivations = der.expect("derivations path resolved for this command");
            }
        },
        Command::Conjectures { command } => match command {
            ConjectureCommand::ResolutionShape { arrangement }
            | ConjectureCommand::GenericIdeal { arrangement } => *arrangement = arr,
        },
        Command::VerifyCert { .. } => unreachable!("verify-cert has no batch mode"),
    }
    replaced
}

/// Runs the command once per `.arr` file in the directory, `--jobs` files at
/// a time. Jobs are independent; workers share only the result slots.
fn run_batch(cli: &Cli, dir: &Path) -> CmdResult {
    let (_, der_path) = job_paths(&cli.command).expect("batch implies job paths");
    let needs_der = der_path.is_some();
    let der_dir = match der_path {
        Some(p) if p.is_dir() => Some(p.clone()),
        Some(p) => {
            return Err(fail(
                2,
                format!(
                    "{}: in batch mode the derivations path must be a directory of .der files",
                    p.display()
                ),
            ));
        }
        None => None,
    };

    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| fail(2, format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "arr"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(fail(2, format!("{}: no .arr files", dir.display())));
    }

    let jobs = cli.jobs.unwrap_or(1).max(1);
    let results: Mutex<Vec<Option<CmdResult>>> =
        Mutex::new((0..files.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    thread::scope(|scope| {
        for _ in 0..jobs.min(files.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= files.len() {
                    break;
                }
                let result = run_batch_job(cli, &files[i], needs_der, der_dir.as_deref());
                results.lock().unwrap()[i] = Some(result);
            });
        }
    });

    let results = results.into_inner().unwrap();
    let mut out = String::new();
    let mut worst = 0u8;
    for (file, result) in files.iter().zip(results) {
        let name = file.file_name().unwrap_or_default().to_string_lossy();
        let result = result.expect("every job index was claimed");
        match cli.format {
            Format::Text => {
                let _ = writeln!(out, "== {name} ==");
                match result {
                    Ok((body, code)) => {
                        out.push_str(&body);
                        worst = worst.max(code);
                    }
                    Err(e) => {
                        let _ = writeln!(out, "error: {}", e.message);
                        worst = worst.max(e.code);
                    }
                }
            }
            Format::Json => {
                // One compact object per file so the batch stays parseable
                // line by line.
                let line = match result {
                    Ok((body, code)) => {
                        worst = worst.max(code);
                        let report: serde_json::Value =
                            serde_json::from_str(&body).unwrap_or(json!(body));
                        json!({"file": name, "exit": code, "report": report})
                    }
                    Err(e) => {
                        worst = worst.max(e.code);
                        json!({"file": name, "exit": e.code, "error": e.message})
                    }
                };
                let _ = writeln!(out, "{line}");
            }
        }
    }
    Ok((out, worst))
}

fn run_batch_job(
    cli: &Cli,
    arr_file: &Path,
    needs_der: bool,
    der_dir: Option<&Path>,
) -> CmdResult {
    let der_file = if needs_der {
        let dir = der_dir.expect("checked before spawning");
        let candidate = dir.join(
            arr_file
                .file_stem()
                .map(|s| {
                    let mut name = s.to_os_string();
                    name.push(".der");
                    name
                })
                .unwrap_or_default(),
        );
        if !candidate.is_file() {
            return Err(fail(2, format!("{}: no matching derivations file", candidate.display())));
        }
        Some(candidate)
    } else {
        None
    };
    let command = with_paths(&cli.command, arr_file.to_path_buf(), der_file);
    run_command(&command, cli.format, cli.max_degree)
}

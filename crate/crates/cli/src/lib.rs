//! The `poisson-env` command line, as a library so tests can drive it
//! in-process.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use poisson_env_core::algebra::{AxiomViolation, Simplicity, ValidationFailure};
use poisson_env_core::io::{self, BasisFile};
use poisson_env_core::module::{
    annihilates, functor_f, j_annihilation_check, module_lower_bound, roundtrip_report,
    validate_poisson, validate_quasi_poisson, QAction,
};
use poisson_env_core::quotient::{dimension_table, TruncatedQuotient};
use poisson_env_core::smash::RelationFamily;
use poisson_env_core::{
    rational, AlgebraPresentation, Error, IdealGens, Matrix, Ncpa, QAlgebra, QuasiPoissonModule,
    Report, Status,
};

#[derive(Parser, Debug)]
#[command(
    name = "poisson-env",
    version,
    about = "Exact computations in Poisson enveloping algebras of finite-dimensional NCPAs",
    after_help = "Exit status: 0 pass, 1 mathematical failure, 2 usage or parse error.\n\
                  The U(A) degree cap is read from POISSON_ENV_MAX_DEGREE (default 8)."
)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the NCPA axioms of an algebra file.
    Validate { alg: PathBuf },
    /// Equip an associative algebra with the commutator bracket and print
    /// the resulting algebra file.
    Std {
        assoc: PathBuf,
        /// Write the file here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Product of two elements of A, e.g. `mul kxk.alg "e1 + e2" e1`.
    Mul { alg: PathBuf, x: String, y: String },
    /// Bracket of two elements of A.
    Bracket { alg: PathBuf, x: String, y: String },
    /// Product in Q(A) of two elements written as sums of `[left;right;u1,...]`.
    QMul {
        alg: PathBuf,
        qx: String,
        qy: String,
    },
    /// Check the seven generator relation families of Q(A).
    Relations { alg: PathBuf },
    /// Check that A, A^op and A^e are U(A)-module algebras on PBW monomials.
    ModuleAlg {
        alg: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Dimensions of a truncated quotient of Q(A) at degrees 0..=d.
    EnvDim {
        alg: PathBuf,
        /// Ideal generators: J, I, OH, or a '+'-joined sum such as J+I.
        #[arg(long, default_value = "J")]
        ideal: String,
        #[arg(long)]
        degree: usize,
        /// Saturation degree D >= d used for every row (default d+2 per row).
        #[arg(long)]
        saturate: Option<usize>,
        /// Extra module files used to certify lower bounds.
        #[arg(long = "module")]
        modules: Vec<PathBuf>,
        /// Save the coset basis at the top degree as JSON.
        #[arg(long)]
        basis_out: Option<PathBuf>,
    },
    /// Decide Poisson simplicity.
    Simple { alg: PathBuf },
    /// Poisson derivations and the regular Poisson module structures they induce.
    Derivations { alg: PathBuf },
    /// Check a module file against the quasi-Poisson (or Poisson) axioms.
    ModuleCheck {
        alg: PathBuf,
        module: PathBuf,
        #[arg(long)]
        poisson: bool,
    },
    /// Check G(F(M)) = M, F(G(F(M))) = F(M) and multiplicativity of F(M).
    Roundtrip {
        alg: PathBuf,
        module: PathBuf,
        #[arg(long)]
        degree: usize,
    },
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    /// `None` when clap handled the invocation (help, version, usage errors).
    pub report: Option<Report>,
    /// What goes to stdout.
    pub stdout: String,
    /// What goes to stderr.
    pub stderr: String,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Outcome {
                code,
                report: None,
                stdout,
                stderr,
            };
        }
    };
    let start = Instant::now();
    let mut report = Report::new(argv.iter().skip(1).cloned().collect());
    if let Err(e) = execute(&cli.command, &mut report) {
        match e {
            Error::NotQuasiPoisson(msg) => report.violation("not-quasi-poisson", msg, json!(null)),
            Error::NotMultiplicative(msg) => {
                report.violation("not-multiplicative", msg, json!(null))
            }
            other => report.error(error_key(&other), other.to_string()),
        }
    }
    report.set_elapsed(start.elapsed());
    let stdout = if cli.json {
        report.render_json()
    } else {
        report.render_text()
    };
    let stderr = if cli.json {
        String::new()
    } else {
        report.status_line() + "\n"
    };
    Outcome {
        code: report.status.exit_code(),
        report: Some(report),
        stdout,
        stderr,
    }
}

fn error_key(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "syntax",
        Error::MalformedRational(_) => "rational",
        Error::IndexOutOfRange { .. } => "index",
        Error::DegreeCapExceeded { .. } => "degree-cap",
        Error::Format(_) => "io",
        _ => "input",
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn load_presentation(path: &Path) -> Result<AlgebraPresentation, Error> {
    io::parse_algebra(&read(path)?)
}

/// Loads an algebra that must satisfy the axioms; other commands are
/// meaningless otherwise.
fn load_algebra(path: &Path) -> Result<Ncpa, Error> {
    Ncpa::validate(load_presentation(path)?).map_err(|f| match f {
        ValidationFailure::Malformed(e) => e,
        ValidationFailure::Violations(v) => Error::MalformedPresentation(format!(
            "{} is not an NCPA ({} axiom violation(s)); run `validate` for details",
            path.display(),
            v.len()
        )),
    })
}

fn load_module(path: &Path, alg: &Ncpa) -> Result<QuasiPoissonModule, Error> {
    io::parse_module(&read(path)?, alg)
}

fn labels(alg: &Ncpa, indices: &[usize]) -> String {
    let l: Vec<&str> = indices.iter().map(|&i| alg.labels()[i].as_str()).collect();
    format!("({})", l.join(", "))
}

fn vector(alg: &Ncpa, v: &poisson_env_core::SparseVector) -> String {
    io::format_a_element(alg, &poisson_env_core::AElement::new(v.clone()))
}

fn report_violations(names: &[String], vs: Vec<AxiomViolation>, report: &mut Report) {
    for v in vs {
        let at: Vec<&str> = v.indices.iter().map(|&i| names[i].as_str()).collect();
        report.violation(
            "axiom",
            format!(
                "{} fails at ({}): {} != {}",
                v.axiom,
                at.join(", "),
                v.lhs,
                v.rhs
            ),
            json!({
                "axiom": v.axiom,
                "indices": v.indices,
                "lhs": v.lhs.to_dense().iter().map(rational::format).collect::<Vec<_>>(),
                "rhs": v.rhs.to_dense().iter().map(rational::format).collect::<Vec<_>>(),
            }),
        );
    }
}

fn report_validation(p: AlgebraPresentation, report: &mut Report) -> Result<(), Error> {
    let names = p.labels.clone();
    report.info_with(
        "name",
        format!("algebra: {} (dim {})", p.name, p.dim),
        json!({"name": p.name, "dim": p.dim}),
    );
    match Ncpa::validate(p) {
        Ok(alg) => {
            report.info_with(
                "standard",
                format!("standard: {}", alg.is_standard()),
                alg.is_standard(),
            );
            report.info_with(
                "zero-bracket",
                format!("zero bracket: {}", alg.has_zero_bracket()),
                alg.has_zero_bracket(),
            );
            report.info("axioms", "all NCPA axioms hold");
            Ok(())
        }
        Err(ValidationFailure::Malformed(e)) => Err(e),
        Err(ValidationFailure::Violations(vs)) => {
            report_violations(&names, vs, report);
            Ok(())
        }
    }
}

fn execute(cmd: &Command, report: &mut Report) -> Result<(), Error> {
    match cmd {
        Command::Validate { alg } => report_validation(load_presentation(alg)?, report),
        Command::Std { assoc, output } => {
            let mut p = load_presentation(assoc)?;
            p.bracket.clear();
            let names = p.labels.clone();
            match Ncpa::standard(p) {
                Ok(alg) => {
                    let text = io::write_algebra(alg.presentation());
                    match output {
                        Some(path) => {
                            fs::write(path, &text)
                                .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
                            report.info(
                                "written",
                                format!("standard NCPA written to {}", path.display()),
                            );
                        }
                        None => report.info("file", text.trim_end().to_string()),
                    }
                    Ok(())
                }
                Err(ValidationFailure::Malformed(e)) => Err(e),
                Err(ValidationFailure::Violations(vs)) => {
                    report_violations(&names, vs, report);
                    Ok(())
                }
            }
        }
        Command::Mul { alg, x, y } | Command::Bracket { alg, x, y } => {
            let a = load_algebra(alg)?;
            let xe = io::parse_a_element(&a, x)?;
            let ye = io::parse_a_element(&a, y)?;
            let (op, r) = if matches!(cmd, Command::Mul { .. }) {
                ("*", a.mul(&xe, &ye)?)
            } else {
                ("{,}", a.bracket(&xe, &ye)?)
            };
            let text = io::format_a_element(&a, &r);
            let (xs, ys) = (io::format_a_element(&a, &xe), io::format_a_element(&a, &ye));
            let message = if op == "*" {
                format!("({xs}) * ({ys}) = {text}")
            } else {
                format!("{{{xs}, {ys}}} = {text}")
            };
            report.info_with("result", message, json!({"result": text}));
            Ok(())
        }
        Command::QMul { alg, qx, qy } => {
            let q = QAlgebra::new(load_algebra(alg)?);
            let x = io::parse_q_element(&q, qx)?;
            let y = io::parse_q_element(&q, qy)?;
            let r = q.q_multiply(&x, &y)?;
            let text = io::format_q_element(q.algebra(), &r);
            report.info_with(
                "result",
                format!("product = {text}"),
                json!({"result": text, "terms": r.len()}),
            );
            Ok(())
        }
        Command::Relations { alg } => {
            let q = QAlgebra::new(load_algebra(alg)?);
            let rel = q.check_generator_relations()?;
            let a = q.algebra();
            for family in RelationFamily::ALL {
                let checked = rel.checked.get(&family).copied().unwrap_or(0);
                let bad = rel.violations.iter().filter(|v| v.family == family).count();
                report.info_with(
                    "family",
                    format!(
                        "{}: {checked} checked, {bad} violation(s)",
                        family.describe()
                    ),
                    json!({"family": family.describe(), "checked": checked, "violations": bad}),
                );
            }
            for v in &rel.violations {
                let at = v.pair.map(|(i, j)| labels(a, &[i, j])).unwrap_or_default();
                report.violation(
                    "relation",
                    format!(
                        "{} fails at {at}: {} != {}",
                        v.family.describe(),
                        io::format_q_element(a, &v.lhs),
                        io::format_q_element(a, &v.rhs)
                    ),
                    json!({"family": v.family.describe(), "pair": v.pair}),
                );
            }
            Ok(())
        }
        Command::ModuleAlg { alg, degree } => {
            let q = QAlgebra::new(load_algebra(alg)?);
            let r = q.uea().verify_module_algebra(*degree)?;
            report.info_with(
                "checked",
                format!(
                    "module-algebra identity checked on {} instances up to degree {degree}",
                    r.checked
                ),
                json!({"degree": degree, "checked": r.checked}),
            );
            let a = q.algebra();
            for f in &r.failures {
                report.violation(
                    "module-algebra",
                    format!(
                        "{:?} fails for monomial {} at {}: {} != {}",
                        f.target,
                        f.monomial.to_word(),
                        labels(a, &f.indices),
                        f.lhs,
                        f.rhs
                    ),
                    json!({"target": format!("{:?}", f.target), "indices": f.indices}),
                );
            }
            Ok(())
        }
        Command::EnvDim {
            alg,
            ideal,
            degree,
            saturate,
            modules,
            basis_out,
        } => env_dim(
            alg,
            ideal,
            *degree,
            *saturate,
            modules,
            basis_out.as_deref(),
            report,
        ),
        Command::Simple { alg } => {
            let a = load_algebra(alg)?;
            match a.poisson_simplicity() {
                Simplicity::Simple => report.info_with("simple", "Poisson-simple: true", true),
                Simplicity::NotSimple(ideal) => {
                    report.info_with("simple", "Poisson-simple: false", false);
                    let basis: Vec<String> = ideal.basis().map(|v| vector(&a, v)).collect();
                    report.info_with(
                        "witness",
                        format!("proper Poisson ideal: span{{{}}}", basis.join(", ")),
                        basis,
                    );
                }
                Simplicity::Undetermined => report.info_with(
                    "simple",
                    "Poisson-simple: undetermined (no ideal found; commutant is not split)",
                    json!(null),
                ),
            }
            Ok(())
        }
        Command::Derivations { alg } => {
            let a = load_algebra(alg)?;
            let n = a.dim();
            let rs = a.regular_poisson_structures();
            let describe = |v: &poisson_env_core::SparseVector| -> String {
                let m = Matrix::from_vector(n, n, v).expect("n^2 vector");
                let images: Vec<String> = (0..n)
                    .map(|i| format!("{} -> {}", a.labels()[i], vector(&a, &m.column(i))))
                    .collect();
                images.join(", ")
            };
            report.info_with(
                "center",
                format!("center dimension: {}", a.center().rank()),
                a.center().rank(),
            );
            report.info_with(
                "derivations",
                format!("Poisson derivations: dimension {}", rs.derivations.rank()),
                rs.derivations.rank(),
            );
            for v in rs.derivations.basis() {
                report.info("derivation", format!("  psi: {}", describe(v)));
            }
            report.info_with(
                "regular-structures",
                format!(
                    "derivations inducing a Poisson module on A: dimension {}",
                    rs.qualifying.rank()
                ),
                rs.qualifying.rank(),
            );
            for v in rs.qualifying.basis() {
                report.info("structure", format!("  psi: {}", describe(v)));
            }
            Ok(())
        }
        Command::ModuleCheck {
            alg,
            module,
            poisson,
        } => {
            let a = load_algebra(alg)?;
            let m = load_module(module, &a)?;
            let r = if *poisson {
                validate_poisson(&a, &m)?
            } else {
                validate_quasi_poisson(&a, &m)?
            };
            let kind = if *poisson { "Poisson" } else { "quasi-Poisson" };
            report.info_with(
                "checked",
                format!(
                    "{kind} module axioms checked on {} instances (dim {})",
                    r.checked, m.dim
                ),
                json!({"checked": r.checked, "dim": m.dim}),
            );
            for v in &r.violations {
                report.violation(
                    "module-axiom",
                    format!("{} fails at {}", v.axiom.describe(), labels(&a, &v.indices)),
                    json!({"axiom": v.axiom, "indices": v.indices}),
                );
            }
            if *poisson && validate_quasi_poisson(&a, &m)?.passed() {
                let q = QAlgebra::new(a.clone());
                let j = j_annihilation_check(&q, &m)?;
                let pairs: Vec<String> = j
                    .failing_pairs
                    .iter()
                    .map(|&(x, y)| labels(&a, &[x, y]))
                    .collect();
                report.info_with(
                    "j-annihilation",
                    format!(
                        "J annihilates F(M): {}{}",
                        j.annihilates(),
                        if pairs.is_empty() {
                            String::new()
                        } else {
                            format!(" (nonzero at {})", pairs.join(", "))
                        }
                    ),
                    json!({"annihilates": j.annihilates(), "failing_pairs": j.failing_pairs}),
                );
            }
            Ok(())
        }
        Command::Roundtrip {
            alg,
            module,
            degree,
        } => {
            let q = QAlgebra::new(load_algebra(alg)?);
            let m = load_module(module, q.algebra())?;
            let r = roundtrip_report(&q, &m, *degree)?;
            let a = q.algebra();
            report.info_with(
                "checked",
                format!(
                    "checked {} monomials and {} products up to degree {degree}",
                    r.monomials_checked, r.pairs_checked
                ),
                json!({"monomials": r.monomials_checked, "pairs": r.pairs_checked}),
            );
            if r.g_f_identity {
                report.info("g-f", "G(F(M)) = M");
            } else {
                report.violation("g-f", "G(F(M)) != M", json!(null));
            }
            for x in &r.f_g_mismatches {
                report.violation(
                    "f-g",
                    format!("F(G(F(M))) != F(M) on {}", io::format_q_monomial(a, x)),
                    json!(null),
                );
            }
            if r.f_g_mismatches.is_empty() {
                report.info("f-g", "F(G(F(M))) = F(M)");
            }
            for (x, y) in &r.associativity_failures {
                report.violation(
                    "multiplicative",
                    format!(
                        "F(M) not multiplicative on {} * {}",
                        io::format_q_monomial(a, x),
                        io::format_q_monomial(a, y)
                    ),
                    json!(null),
                );
            }
            if r.associativity_failures.is_empty() {
                report.info("multiplicative", "F(M) is multiplicative");
            }
            Ok(())
        }
    }
}

fn env_dim(
    alg: &Path,
    ideal: &str,
    degree: usize,
    saturate: Option<usize>,
    module_files: &[PathBuf],
    basis_out: Option<&Path>,
    report: &mut Report,
) -> Result<(), Error> {
    let a = load_algebra(alg)?;
    let q = QAlgebra::new(a.clone());
    let gens = IdealGens::parse_sum(&q, ideal)?;
    let rows = dimension_table(&q, &gens, degree, saturate)?;

    // certificate: modules on which every generator acts as zero
    let mut candidates = vec![("regular".to_string(), QuasiPoissonModule::regular(&a))];
    if a.is_standard() {
        // A ⊗ A^op with {c, a ⊗ b} = ca ⊗ b - a ⊗ bc
        let sq = QuasiPoissonModule::tensor_square(&a);
        let m = QuasiPoissonModule::standard_bimodule_to_poisson(&a, sq.dim, sq.left, sq.right)?;
        candidates.push(("A (x) A^op".to_string(), m));
    }
    for path in module_files {
        candidates.push((path.display().to_string(), load_module(path, &a)?));
    }
    let mut certifying: Vec<QAction> = Vec::new();
    let mut names = Vec::new();
    for (name, m) in &candidates {
        match functor_f(&a, m) {
            Ok(action) if annihilates(&action, &gens)? => {
                certifying.push(action);
                names.push(name.clone());
            }
            _ => report.info(
                "skipped",
                format!("module {name} is not annihilated by {ideal}; not used"),
            ),
        }
    }
    let refs: Vec<&QAction> = certifying.iter().collect();

    for row in &rows {
        let lower = if refs.is_empty() {
            0
        } else {
            module_lower_bound(&q, &refs, row.degree)?
        };
        let flag = if row.stable { "stable" } else { "unstable" };
        let exact = if lower == row.dim { ", exact" } else { "" };
        report.info_with(
            "dim",
            format!(
                "d={}: {} ({flag}; module lower bound {lower}{exact})",
                row.degree, row.dim
            ),
            json!({
                "degree": row.degree,
                "dim": row.dim,
                "stable": row.stable,
                "saturation": row.saturation,
                "ambient": row.ambient,
                "ideal_rank": row.slice_rank,
                "lower_bound": lower,
            }),
        );
        if lower > row.dim {
            report.violation(
                "bounds",
                format!(
                    "d={}: module lower bound {lower} exceeds computed dimension {}",
                    row.degree, row.dim
                ),
                json!({"degree": row.degree}),
            );
        }
    }
    report.info_with(
        "certificate",
        format!(
            "lower bounds certified by: {}",
            if names.is_empty() {
                "none".into()
            } else {
                names.join(", ")
            }
        ),
        &names,
    );
    if let Some(path) = basis_out {
        let sat = saturate.unwrap_or(degree + 2);
        let tq = TruncatedQuotient::compute(&q, &gens, degree, sat)?;
        let file = BasisFile::new(&a, ideal, &tq);
        fs::write(path, file.to_json())
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        report.info(
            "basis",
            format!("degree-{degree} basis written to {}", path.display()),
        );
    }
    Ok(())
}

/// Convenience for callers that only need the status.
pub fn status_of(outcome: &Outcome) -> Option<Status> {
    outcome.report.as_ref().map(|r| r.status)
}

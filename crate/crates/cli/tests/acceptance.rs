//! Acceptance gate: twelve criteria, run in order, one PASS/FAIL line each
//! with wall time against a limit. Runs without the libtest harness so the
//! lines always reach the terminal and timings are not skewed by other
//! tests running in parallel.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use poisson_env_cli::{run, Outcome};
use poisson_env_core::algebra::{Axiom, Simplicity};
use poisson_env_core::catalog;
use poisson_env_core::module::{
    annihilator, functor_f, functor_g, j_annihilation_check, roundtrip_report, validate_poisson,
    ModuleAxiom,
};
use poisson_env_core::quotient::{poisson_ideal_j, TruncatedCoords, TruncatedQuotient};
use poisson_env_core::rational::{self, Rational};
use poisson_env_core::smash::{Embedding, RelationFamily};
use poisson_env_core::words::{counit, shuffle_coproduct, Word};
use poisson_env_core::{
    Matrix, Ncpa, QAlgebra, QElement, QMonomial, QuasiPoissonModule, SparseVector, Subspace,
    UElement, UMonomial,
};

type Outcome_ = Result<String, String>;

/// Name, check, time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome_, u64);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("poisson-env").chain(args.iter().copied()))
}

fn q_of(alg: Ncpa) -> QAlgebra {
    QAlgebra::with_cap(alg, 8)
}

/// `(degree, dim, stable)` rows of an `env-dim --json` run.
fn env_dim_rows(args: &[&str]) -> Result<Vec<(u64, u64, bool)>, String> {
    let out = cli(args);
    ensure!(
        out.code == 0,
        "env-dim exited {}: {}{}",
        out.code,
        out.stdout,
        out.stderr
    );
    let report = out.report.ok_or("no report")?;
    Ok(report
        .findings
        .iter()
        .filter(|f| f.key == "dim")
        .map(|f| {
            (
                f.data["degree"].as_u64().unwrap(),
                f.data["dim"].as_u64().unwrap(),
                f.data["stable"].as_bool().unwrap(),
            )
        })
        .collect())
}

fn c1_axioms() -> Outcome_ {
    let mut worst = Duration::ZERO;
    for file in ["kxk.alg", "m2std.alg", "trunc2-n2.alg"] {
        let t = Instant::now();
        let out = cli(&["validate", &data(file)]);
        worst = worst.max(t.elapsed());
        ensure!(out.code == 0, "{file} exited {}", out.code);
    }
    for (file, axiom) in [
        ("bad-assoc.alg", Axiom::Associativity),
        ("bad-leibniz.alg", Axiom::Leibniz),
        ("bad-antisym.alg", Axiom::Antisymmetry),
    ] {
        let t = Instant::now();
        let out = cli(&["validate", &data(file)]);
        worst = worst.max(t.elapsed());
        ensure!(out.code == 1, "{file} exited {}", out.code);
        let report = out.report.unwrap();
        let expected = serde_json::to_value(axiom).unwrap();
        ensure!(
            report.violations().any(|v| v.data["axiom"] == expected),
            "{file}: no {axiom} witness"
        );
    }
    ensure!(
        worst < Duration::from_secs(1),
        "slowest validation took {worst:?}"
    );
    Ok(format!(
        "3 valid, 3 violation fixtures with witnesses; slowest {worst:.1?}"
    ))
}

fn c2_module_algebra() -> Outcome_ {
    let mut checked = 0;
    for alg in catalog::bundled() {
        let q = q_of(alg);
        let r = q
            .uea()
            .verify_module_algebra(3)
            .map_err(|e| e.to_string())?;
        ensure!(
            r.passed(),
            "{}: {} failures",
            q.algebra().name(),
            r.failures.len()
        );
        checked += r.checked;
    }
    let mut words = 0;
    for r in 0..=4 {
        let mut all = vec![Vec::new()];
        for _ in 0..r {
            all = all
                .into_iter()
                .flat_map(|w: Vec<usize>| (0..3).map(move |l| [w.clone(), vec![l]].concat()))
                .collect();
        }
        for letters in all {
            let w = Word(letters);
            let d = shuffle_coproduct(&w).map_err(|e| e.to_string())?;
            // cocommutative
            for ((x, y), c) in &d {
                ensure!(
                    d.get(&(y.clone(), x.clone())) == Some(c),
                    "cocommutativity fails on {w}"
                );
            }
            // counit on either side gives back w
            let mut left = BTreeMap::new();
            let mut right = BTreeMap::new();
            for ((x, y), c) in &d {
                *left.entry(y.clone()).or_insert_with(rational::zero) += c * counit(x);
                *right.entry(x.clone()).or_insert_with(rational::zero) += c * counit(y);
            }
            left.retain(|_, c: &mut Rational| *c != rational::zero());
            right.retain(|_, c: &mut Rational| *c != rational::zero());
            let id: BTreeMap<Word, Rational> = [(w.clone(), rational::one())].into_iter().collect();
            ensure!(left == id && right == id, "counit law fails on {w}");
            // coassociative
            let mut lhs = BTreeMap::new();
            let mut rhs = BTreeMap::new();
            for ((x, y), c) in &d {
                for ((x1, x2), e) in shuffle_coproduct(x).unwrap() {
                    *lhs.entry((x1, x2, y.clone()))
                        .or_insert_with(rational::zero) += c * &e;
                }
                for ((y1, y2), e) in shuffle_coproduct(y).unwrap() {
                    *rhs.entry((x.clone(), y1, y2))
                        .or_insert_with(rational::zero) += c * &e;
                }
            }
            ensure!(lhs == rhs, "coassociativity fails on {w}");
            words += 1;
        }
    }
    Ok(format!(
        "{checked} module-algebra instances (degree <= 3); Hopf laws on {words} words"
    ))
}

fn assoc(q: &QAlgebra, a: &QMonomial, b: &QMonomial, c: &QMonomial) -> Result<(), String> {
    let (x, y, z) = (
        QElement::monomial(a.clone()),
        QElement::monomial(b.clone()),
        QElement::monomial(c.clone()),
    );
    let l = q.q_multiply(&q.q_multiply(&x, &y).unwrap(), &z).unwrap();
    let r = q.q_multiply(&x, &q.q_multiply(&y, &z).unwrap()).unwrap();
    ensure!(l == r, "(xy)z != x(yz) for {a}, {b}, {c}");
    Ok(())
}

fn c3_associativity() -> Outcome_ {
    let q = q_of(catalog::kxk());
    let ms = q.monomials_up_to(3);
    let mut exhaustive = 0;
    for a in &ms {
        for b in &ms {
            for c in &ms {
                if a.degree() + b.degree() + c.degree() <= 3 {
                    assoc(&q, a, b, c)?;
                    exhaustive += 1;
                }
            }
        }
    }
    let q = q_of(catalog::m2_standard());
    let ms = q.monomials_up_to(2);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..500 {
        let pick = |rng: &mut ChaCha8Rng| ms[rng.gen_range(0..ms.len())].clone();
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        assoc(&q, &a, &b, &c)?;
    }
    Ok(format!(
        "{exhaustive} exhaustive KxK triples, 500 random M2 triples (each factor degree <= 2)"
    ))
}

fn c4_relations() -> Outcome_ {
    let mut total = 0;
    let mut algebras = catalog::bundled();
    algebras.push(catalog::upper_triangular_standard());
    for alg in algebras {
        let q = q_of(alg);
        let r = q.check_generator_relations().map_err(|e| e.to_string())?;
        ensure!(
            r.passed(),
            "{}: {} violations",
            q.algebra().name(),
            r.violations.len()
        );
        ensure!(
            r.checked.len() == RelationFamily::ALL.len(),
            "not all families checked"
        );
        total += r.checked.values().sum::<usize>();
    }
    Ok(format!(
        "7 families, {total} instances over 4 algebras, 0 violations"
    ))
}

fn c5_trivial_bracket() -> Outcome_ {
    let q = q_of(catalog::trunc2(2));
    let alg = q.algebra().clone();
    let ms = q.monomials_up_to(3);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let a = &ms[rng.gen_range(0..ms.len())];
        let b = &ms[rng.gen_range(0..ms.len())];
        let mut u = a.u.indices().to_vec();
        u.extend_from_slice(b.u.indices());
        let expected = QElement::tensor(
            alg.mul_basis(a.left, b.left),
            alg.mul_basis(b.right, a.right),
            &UElement::monomial(UMonomial::sorted(u)),
        );
        ensure!(
            q.mul_monomials(a, b) == expected,
            "{a} * {b} is not componentwise"
        );
    }
    Ok("200 random pairs equal the A (x) A^op (x) S(A) product".into())
}

fn c6_kxk_dims() -> Outcome_ {
    let rows = env_dim_rows(&[
        "--json",
        "env-dim",
        &data("kxk.alg"),
        "--ideal",
        "J",
        "--degree",
        "3",
    ])?;
    let dims: Vec<u64> = rows.iter().map(|r| r.1).collect();
    ensure!(dims == [4, 6, 8, 10], "dims {dims:?}");
    ensure!(rows.iter().all(|r| r.2), "not all stable: {rows:?}");
    Ok("P(KxK): 4, 6, 8, 10, all stable at D = d + 2".into())
}

/// The spec expects `6 + 3 C(d+2, 2)` = 9, 15, 24, read off the basis list
/// given for this example. That list is linearly dependent in degree 2, so
/// this criterion instead checks the computed dimensions against an
/// independent computation and exhibits the dependencies.
fn c7_trunc2_dims() -> Outcome_ {
    let rows = env_dim_rows(&[
        "--json",
        "env-dim",
        &data("trunc2-n2.alg"),
        "--ideal",
        "J",
        "--degree",
        "2",
    ])?;
    let dims: Vec<u64> = rows.iter().map(|r| r.1).collect();
    ensure!(rows.iter().all(|r| r.2), "not all stable: {rows:?}");

    // Zero bracket and commutative A make Q(A) commutative and graded, so
    // the degree-k part of J is spanned by g * m with deg m = k - 1.
    let q = q_of(catalog::trunc2(2));
    let gens = poisson_ideal_j(&q);
    let coords = TruncatedCoords::new(&q, 2);
    let mut span = Subspace::zero(coords.len());
    for g in &gens.generators {
        for m in q.monomials_up_to(1) {
            let gm = q.q_multiply(g, &QElement::monomial(m)).unwrap();
            span.insert(&coords.to_vector(&gm).unwrap()).unwrap();
        }
    }
    let graded: Vec<u64> = (0..=2)
        .map(|d| {
            let ambient = q.truncated_dim(d);
            let in_slice = span
                .basis()
                .filter(|v| v.iter().all(|(k, _)| coords.monomial_at(k).degree() <= d))
                .count();
            (ambient - in_slice) as u64
        })
        .collect();
    ensure!(
        dims == graded,
        "env-dim {dims:?} != graded computation {graded:?}"
    );
    ensure!(dims == [9, 15, 22], "dims {dims:?}");

    // i(x1) j(x1) j(x2) = i(x2) j(x1)^2 in P(A), though both are listed as
    // basis elements
    let tq = TruncatedQuotient::compute(&q, &gens, 2, 4).unwrap();
    let qm = |i, j, u: &[usize]| {
        QElement::monomial(QMonomial::new(i, j, UMonomial::new(u.to_vec()).unwrap()))
    };
    ensure!(
        tq.contains(&qm(1, 0, &[1, 2]).sub(&qm(2, 0, &[1, 1])))
            .unwrap(),
        "first witness not in J"
    );
    ensure!(
        tq.contains(&qm(2, 0, &[1, 2]).sub(&qm(1, 0, &[2, 2])))
            .unwrap(),
        "second witness not in J"
    );
    Ok(format!(
        "{dims:?}, stable, equal to the graded computation. DEVIATION: spec expects [9, 15, 24]; \
         the listed basis is dependent: [x1;1;x1,x2] - [x2;1;x1,x1] and [x2;1;x1,x2] - [x1;1;x2,x2] lie in J"
    ))
}

fn c8_standard_quotient() -> Outcome_ {
    let rows = env_dim_rows(&[
        "--json",
        "env-dim",
        &data("kxk.alg"),
        "--ideal",
        "J+I",
        "--degree",
        "3",
    ])?;
    ensure!(rows.iter().all(|r| r.1 == 4 && r.2), "rows {rows:?}");
    let q = q_of(catalog::kxk());
    let tq =
        TruncatedQuotient::compute(&q, &poisson_ideal_j(&q), 1, 3).map_err(|e| e.to_string())?;
    let j1 = q.embed(Embedding::J, &q.algebra().unit()).unwrap();
    ensure!(tq.reduce(&j1).unwrap().is_zero(), "j(1) is not in J");
    ensure!(!tq.reduce(&q.identity()).unwrap().is_zero(), "1 is in J");
    Ok("P(KxK)/I: 4 at d = 0..3, stable; j(1_A) reduces to 0 mod J".into())
}

fn c9_roundtrips() -> Outcome_ {
    let mut cases: Vec<(Ncpa, QuasiPoissonModule, &str)> = catalog::bundled()
        .into_iter()
        .map(|a| {
            let m = QuasiPoissonModule::regular(&a);
            (a, m, "regular")
        })
        .collect();
    let kxk = catalog::kxk();
    cases.push((
        kxk.clone(),
        QuasiPoissonModule::tensor_square(&kxk),
        "tensor square",
    ));
    let mut monomials = 0;
    for (alg, m, what) in cases {
        let q = q_of(alg.clone());
        let r = roundtrip_report(&q, &m, 2).map_err(|e| e.to_string())?;
        ensure!(r.passed(), "{} {what}: {r:?}", alg.name());
        // F(G(Q)) = Q for a tabulated action Q = F(M)
        let table = functor_f(&alg, &m).unwrap().tabulate(&q, 2).unwrap();
        let back = functor_f(&alg, &functor_g(&q, &table).unwrap()).unwrap();
        for x in q.monomials_up_to(2) {
            ensure!(
                back.monomial_matrix(&x).unwrap() == table.monomial_matrix(&x).unwrap(),
                "F(G(Q)) differs on {x}"
            );
            monomials += 1;
        }
    }
    Ok(format!(
        "G F = Id on 4 modules; F G = Id on {monomials} monomials of degree <= 2"
    ))
}

fn c10_poisson_iff_j() -> Outcome_ {
    let mut suite: Vec<(Ncpa, QuasiPoissonModule)> = Vec::new();
    for alg in [
        catalog::kxk(),
        catalog::m2_standard(),
        catalog::upper_triangular_standard(),
        catalog::trunc2(2),
    ] {
        suite.push((alg.clone(), QuasiPoissonModule::regular(&alg)));
        suite.push((alg.clone(), QuasiPoissonModule::tensor_square(&alg)));
        // Lie action by left multiplication: quasi-Poisson only when the
        // bracket vanishes and A is commutative, and never Poisson
        let reg = QuasiPoissonModule::regular(&alg);
        let broken = reg.with_lie(reg.left.clone());
        if alg.has_zero_bracket() && alg.is_standard() {
            suite.push((alg.clone(), broken));
        }
    }
    let kxk = catalog::kxk();
    for m in [
        catalog::kxk_jordan_module(3, false),
        catalog::kxk_jordan_module(3, true),
        catalog::kxk_idempotent_module(0),
    ] {
        suite.push((kxk.clone(), m));
    }
    let mut violators = 0;
    for (alg, m) in &suite {
        let q = q_of(alg.clone());
        let poisson = validate_poisson(alg, m).unwrap();
        let j = j_annihilation_check(&q, m).map_err(|e| e.to_string())?;
        ensure!(
            poisson.passed() == j.annihilates(),
            "{}: verdicts differ",
            alg.name()
        );
        let witnesses: Vec<(usize, usize)> = poisson
            .of(ModuleAxiom::Poisson)
            .map(|v| (v.indices[0], v.indices[1]))
            .collect();
        ensure!(
            witnesses == j.failing_pairs,
            "{}: witnesses differ",
            alg.name()
        );
        violators += usize::from(!poisson.passed());
    }
    ensure!(suite.len() >= 10 && violators >= 2, "suite too small");
    Ok(format!(
        "{} modules ({violators} violate (1.4)), verdicts and witnesses agree",
        suite.len()
    ))
}

fn c11_regular_structures() -> Outcome_ {
    let mut induced = 0;
    for alg in [catalog::m2_standard(), catalog::kxk(), catalog::trunc2(2)] {
        let rs = alg.regular_poisson_structures();
        let name = alg.name().to_string();
        if name != "trunc2-n2" {
            ensure!(rs.qualifying.is_zero(), "{name}: nonzero structure space");
        }
        if name == "M2std" {
            ensure!(alg.center().rank() == 1, "dim C(M2) != 1");
        }
        let n = alg.dim();
        let mut psis = vec![Matrix::zeros(n, n)];
        psis.extend(
            rs.qualifying
                .basis()
                .map(|v| Matrix::from_vector(n, n, v).unwrap()),
        );
        for psi in psis {
            let m = QuasiPoissonModule::regular_twisted(&alg, &psi).map_err(|e| e.to_string())?;
            ensure!(
                validate_poisson(&alg, &m).unwrap().passed(),
                "{name}: psi module not Poisson"
            );
            induced += 1;
        }
    }
    Ok(format!(
        "zero space for M2 and KxK; {induced} induced modules all Poisson"
    ))
}

fn c12_simplicity() -> Outcome_ {
    let kxk = catalog::kxk();
    match kxk.poisson_simplicity() {
        Simplicity::NotSimple(ideal) => {
            ensure!(
                kxk.is_poisson_ideal(&ideal).unwrap(),
                "witness is not a Poisson ideal"
            );
            ensure!(
                !ideal.is_zero() && !ideal.is_full(),
                "witness is not proper"
            );
        }
        other => return Err(format!("KxK: {other:?}")),
    }
    ensure!(
        catalog::m2_standard().poisson_simplicity() == Simplicity::Simple,
        "M2 not simple"
    );
    let e1 = Subspace::span([SparseVector::unit(2, 0)].iter(), 2).unwrap();
    let quotient = QuasiPoissonModule::quotient_module(&kxk, &e1).map_err(|e| e.to_string())?;
    let ann = annihilator(&kxk, &quotient).unwrap();
    ensure!(ann == e1, "annihilator is {ann:?}");
    ensure!(
        kxk.is_poisson_ideal(&ann).unwrap(),
        "annihilator fails the closure test"
    );
    let out = cli(&["simple", &data("m2std.alg")]);
    ensure!(
        out.code == 0 && out.stdout.contains("Poisson-simple: true"),
        "CLI: {}",
        out.stdout
    );
    Ok("KxK not simple (witness span{e1}); M2 simple; Ann(A/span{e1}) = span{e1}".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("NCPA axiom suite", c1_axioms, 6),
        ("U(A)-module algebra and Hopf laws", c2_module_algebra, 10),
        ("Q(A) associativity", c3_associativity, 60),
        ("generator relations", c4_relations, 60),
        ("zero-bracket specialization", c5_trivial_bracket, 60),
        ("P(KxK) dimensions", c6_kxk_dims, 60),
        ("2-truncated dimensions", c7_trunc2_dims, 300),
        ("standard quotient J+I", c8_standard_quotient, 60),
        ("functor roundtrips", c9_roundtrips, 120),
        ("Poisson iff J-annihilation", c10_poisson_iff_j, 60),
        ("regular Poisson structures", c11_regular_structures, 60),
        ("simplicity and annihilators", c12_simplicity, 60),
    ];
    let mut failed = 0;
    for (k, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > Duration::from_secs(*limit) => {
                Err(format!("too slow ({detail})"))
            }
            r => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => {
                failed += 1;
                ("FAIL", e.clone())
            }
        };
        println!(
            "acceptance {:>2} {tag} {name} [{:.2}s / {limit}s]: {detail}",
            k + 1,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "acceptance summary: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

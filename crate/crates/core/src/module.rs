//! Quasi-Poisson and Poisson modules, `Q(A)`-modules, and the functors
//!
//! ```text
//! F: (v_i ⊗ v_j # α) · m = v_i · α(m) · v_j
//! G: a · m = i(a) m,   m · a = k(a) m,   {a, m}_* = j(a) m
//! ```
//!
//! between them. Actions are matrices acting on column vectors; a module over
//! an `n`-dimensional algebra stores `n` matrices for each of the left, right
//! and Lie actions, one per basis vector.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

use serde::Serialize;

use crate::algebra::Ncpa;
use crate::error::{Error, Result};
use crate::linalg::{kernel, Matrix, SparseVector, Subspace};
use crate::quotient::{j_generator, IdealGens};
use crate::smash::{Embedding, QAlgebra, QElement, QMonomial};

/// A bimodule with a Lie action, given by one matrix per basis vector for
/// each of `a · -`, `- · a` and `{a, -}_*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPoissonModule {
    pub dim: usize,
    pub left: Vec<Matrix>,
    pub right: Vec<Matrix>,
    pub lie: Vec<Matrix>,
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (m, n) = (b.nrows(), b.ncols());
    let mut out = Matrix::zeros(a.nrows() * m, a.ncols() * n);
    for (i, j, x) in a.triples() {
        for (k, l, y) in b.triples() {
            out.set(i * m + k, j * n + l, &x * &y);
        }
    }
    out
}

impl QuasiPoissonModule {
    /// Builds a module and checks that there are `alg.dim()` square matrices
    /// of size `dim` per action. Axioms are not checked here.
    pub fn new(
        alg: &Ncpa,
        dim: usize,
        left: Vec<Matrix>,
        right: Vec<Matrix>,
        lie: Vec<Matrix>,
    ) -> Result<Self> {
        let m = QuasiPoissonModule {
            dim,
            left,
            right,
            lie,
        };
        m.check_shape(alg)?;
        Ok(m)
    }

    pub fn check_shape(&self, alg: &Ncpa) -> Result<()> {
        let n = alg.dim();
        for (name, mats) in [
            ("left", &self.left),
            ("right", &self.right),
            ("lie", &self.lie),
        ] {
            if mats.len() != n {
                return Err(Error::ModuleShape(format!(
                    "{name} action has {} matrices, algebra has dimension {n}",
                    mats.len()
                )));
            }
            if let Some((k, bad)) = mats
                .iter()
                .enumerate()
                .find(|(_, a)| a.nrows() != self.dim || a.ncols() != self.dim)
            {
                return Err(Error::ModuleShape(format!(
                    "{name} action of basis {k} is {}x{}, expected {}x{}",
                    bad.nrows(),
                    bad.ncols(),
                    self.dim,
                    self.dim
                )));
            }
        }
        Ok(())
    }

    /// `A` acting on itself; the Lie action is the bracket.
    pub fn regular(alg: &Ncpa) -> Self {
        let n = alg.dim();
        QuasiPoissonModule {
            dim: n,
            left: (0..n).map(|i| alg.left_matrix(i).clone()).collect(),
            right: (0..n).map(|i| alg.right_matrix(i).clone()).collect(),
            lie: (0..n).map(|i| alg.ad_matrix(i).clone()).collect(),
        }
    }

    /// Regular bimodule with `{a, b}_* = {a, b} + ψ(a) b`, where column `a`
    /// of `psi` holds `ψ(v_a)`.
    pub fn regular_twisted(alg: &Ncpa, psi: &Matrix) -> Result<Self> {
        let n = alg.dim();
        if psi.nrows() != n || psi.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: psi.nrows().max(psi.ncols()),
            });
        }
        let mut m = Self::regular(alg);
        let lefts: Vec<Matrix> = (0..n).map(|i| alg.left_matrix(i).clone()).collect();
        for a in 0..n {
            let twist = Ncpa::combine(&lefts, &psi.column(a), n);
            m.lie[a] = m.lie[a].add(&twist);
        }
        Ok(m)
    }

    /// `A ⊗ A` with `a(b ⊗ c) = ab ⊗ c`, `(b ⊗ c)a = b ⊗ ca` and
    /// `{a, b ⊗ c}_* = {a, b} ⊗ c + b ⊗ {a, c}`.
    pub fn tensor_square(alg: &Ncpa) -> Self {
        let n = alg.dim();
        let id = Matrix::identity(n);
        QuasiPoissonModule {
            dim: n * n,
            left: (0..n).map(|i| kron(alg.left_matrix(i), &id)).collect(),
            right: (0..n).map(|i| kron(&id, alg.right_matrix(i))).collect(),
            lie: (0..n)
                .map(|i| kron(alg.ad_matrix(i), &id).add(&kron(&id, alg.ad_matrix(i))))
                .collect(),
        }
    }

    /// A bimodule over a standard NCPA made Poisson by `{a, m}_* = am - ma`.
    pub fn standard_bimodule_to_poisson(
        alg: &Ncpa,
        dim: usize,
        left: Vec<Matrix>,
        right: Vec<Matrix>,
    ) -> Result<Self> {
        if let Some((i, j)) = alg.first_non_commutator() {
            return Err(Error::NotStandard(i, j));
        }
        let lie = left.iter().zip(&right).map(|(l, r)| l.sub(r)).collect();
        let m = Self::new(alg, dim, left, right, lie)?;
        let report = validate_bimodule(alg, &m)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::ModuleShape(format!("not a bimodule: {v}")));
        }
        Ok(m)
    }

    /// `A / I` for a two-sided Poisson ideal `I`, on the basis of non-pivot
    /// coordinates of `I`.
    pub fn quotient_module(alg: &Ncpa, ideal: &Subspace) -> Result<Self> {
        if ideal.ambient_dim() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                found: ideal.ambient_dim(),
            });
        }
        if !alg.is_poisson_ideal(ideal)? {
            return Err(Error::InvalidArgument(
                "subspace is not a two-sided Poisson ideal".into(),
            ));
        }
        let free = ideal.free_columns();
        let induced = |op: &Matrix| -> Matrix {
            let cols: Vec<SparseVector> = free
                .iter()
                .map(|&c| {
                    let image = op.apply(&SparseVector::unit(alg.dim(), c)).expect("square");
                    let r = ideal.reduce(&image).expect("ambient checked");
                    SparseVector::from_dense(&free.iter().map(|&k| r.get(k)).collect::<Vec<_>>())
                })
                .collect();
            Matrix::from_columns(free.len(), &cols).expect("column lengths")
        };
        let n = alg.dim();
        Ok(QuasiPoissonModule {
            dim: free.len(),
            left: (0..n).map(|i| induced(alg.left_matrix(i))).collect(),
            right: (0..n).map(|i| induced(alg.right_matrix(i))).collect(),
            lie: (0..n).map(|i| induced(alg.ad_matrix(i))).collect(),
        })
    }

    /// Same bimodule, Lie action replaced.
    pub fn with_lie(&self, lie: Vec<Matrix>) -> Self {
        QuasiPoissonModule {
            lie,
            ..self.clone()
        }
    }

    pub fn direct_sum(&self, other: &QuasiPoissonModule) -> Self {
        let d = self.dim + other.dim;
        let block = |a: &Matrix, b: &Matrix| {
            let mut out = Matrix::zeros(d, d);
            for (i, j, x) in a.triples() {
                out.set(i, j, x);
            }
            for (i, j, x) in b.triples() {
                out.set(self.dim + i, self.dim + j, x);
            }
            out
        };
        let zip = |a: &[Matrix], b: &[Matrix]| a.iter().zip(b).map(|(x, y)| block(x, y)).collect();
        QuasiPoissonModule {
            dim: d,
            left: zip(&self.left, &other.left),
            right: zip(&self.right, &other.right),
            lie: zip(&self.lie, &other.lie),
        }
    }

    pub fn left_of(&self, x: &SparseVector) -> Matrix {
        Ncpa::combine(&self.left, x, self.dim)
    }

    pub fn right_of(&self, x: &SparseVector) -> Matrix {
        Ncpa::combine(&self.right, x, self.dim)
    }

    pub fn lie_of(&self, x: &SparseVector) -> Matrix {
        Ncpa::combine(&self.lie, x, self.dim)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ModuleAxiom {
    /// `(ab)·m = a·(b·m)`
    LeftAssociative,
    /// `m·(ab) = (m·a)·b`
    RightAssociative,
    /// `(a·m)·b = a·(m·b)`
    BimoduleCommute,
    LeftUnit,
    RightUnit,
    /// (1.1) `{a, b·m}_* = {a,b}·m + b·{a,m}_*`
    LieLeft,
    /// (1.2) `{a, m·b}_* = m·{a,b} + {a,m}_*·b`
    LieRight,
    /// (1.3) `{{a,b}, m}_* = {a,{b,m}_*}_* - {b,{a,m}_*}_*`
    LieModule,
    /// (1.4) `{ab, m}_* = a·{b,m}_* + {a,m}_*·b`
    Poisson,
}

impl ModuleAxiom {
    pub fn describe(self) -> &'static str {
        match self {
            ModuleAxiom::LeftAssociative => "(ab).m = a.(b.m)",
            ModuleAxiom::RightAssociative => "m.(ab) = (m.a).b",
            ModuleAxiom::BimoduleCommute => "(a.m).b = a.(m.b)",
            ModuleAxiom::LeftUnit => "1.m = m",
            ModuleAxiom::RightUnit => "m.1 = m",
            ModuleAxiom::LieLeft => "(1.1) {a,b.m} = {a,b}.m + b.{a,m}",
            ModuleAxiom::LieRight => "(1.2) {a,m.b} = m.{a,b} + {a,m}.b",
            ModuleAxiom::LieModule => "(1.3) {{a,b},m} = {a,{b,m}} - {b,{a,m}}",
            ModuleAxiom::Poisson => "(1.4) {ab,m} = a.{b,m} + {a,m}.b",
        }
    }
}

/// A violated module axiom at the given basis indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleViolation {
    pub axiom: ModuleAxiom,
    pub indices: Vec<usize>,
    pub lhs: Matrix,
    pub rhs: Matrix,
}

impl fmt::Display for ModuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {:?}", self.axiom.describe(), self.indices)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModuleReport {
    pub checked: usize,
    pub violations: Vec<ModuleViolation>,
}

impl ModuleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, axiom: ModuleAxiom, indices: Vec<usize>, lhs: Matrix, rhs: Matrix) {
        self.checked += 1;
        if lhs != rhs {
            self.violations.push(ModuleViolation {
                axiom,
                indices,
                lhs,
                rhs,
            });
        }
    }

    /// Violations of the given axiom.
    pub fn of(&self, axiom: ModuleAxiom) -> impl Iterator<Item = &ModuleViolation> {
        self.violations.iter().filter(move |v| v.axiom == axiom)
    }
}

fn validate_bimodule(alg: &Ncpa, m: &QuasiPoissonModule) -> Result<ModuleReport> {
    m.check_shape(alg)?;
    let n = alg.dim();
    let id = Matrix::identity(m.dim);
    let mut report = ModuleReport::default();
    report.record(
        ModuleAxiom::LeftUnit,
        vec![],
        m.left_of(alg.unit_coords()),
        id.clone(),
    );
    report.record(
        ModuleAxiom::RightUnit,
        vec![],
        m.right_of(alg.unit_coords()),
        id,
    );
    for a in 0..n {
        for b in 0..n {
            let ab = alg.mul_basis(a, b);
            report.record(
                ModuleAxiom::LeftAssociative,
                vec![a, b],
                m.left_of(ab),
                m.left[a].mul(&m.left[b]),
            );
            report.record(
                ModuleAxiom::RightAssociative,
                vec![a, b],
                m.right_of(ab),
                m.right[b].mul(&m.right[a]),
            );
            report.record(
                ModuleAxiom::BimoduleCommute,
                vec![a, b],
                m.right[b].mul(&m.left[a]),
                m.left[a].mul(&m.right[b]),
            );
        }
    }
    Ok(report)
}

/// Checks the bimodule axioms and (1.1)–(1.3) on all basis pairs.
pub fn validate_quasi_poisson(alg: &Ncpa, m: &QuasiPoissonModule) -> Result<ModuleReport> {
    let mut report = validate_bimodule(alg, m)?;
    let n = alg.dim();
    for a in 0..n {
        for b in 0..n {
            let br = alg.bracket_basis(a, b);
            report.record(
                ModuleAxiom::LieLeft,
                vec![a, b],
                m.lie[a].mul(&m.left[b]),
                m.left_of(br).add(&m.left[b].mul(&m.lie[a])),
            );
            report.record(
                ModuleAxiom::LieRight,
                vec![a, b],
                m.lie[a].mul(&m.right[b]),
                m.right_of(br).add(&m.right[b].mul(&m.lie[a])),
            );
            report.record(
                ModuleAxiom::LieModule,
                vec![a, b],
                m.lie_of(br),
                m.lie[a].mul(&m.lie[b]).sub(&m.lie[b].mul(&m.lie[a])),
            );
        }
    }
    Ok(report)
}

/// [`validate_quasi_poisson`] plus (1.4) on all basis pairs.
pub fn validate_poisson(alg: &Ncpa, m: &QuasiPoissonModule) -> Result<ModuleReport> {
    let mut report = validate_quasi_poisson(alg, m)?;
    let n = alg.dim();
    for a in 0..n {
        for b in 0..n {
            report.record(
                ModuleAxiom::Poisson,
                vec![a, b],
                m.lie_of(alg.mul_basis(a, b)),
                m.left[a].mul(&m.lie[b]).add(&m.right[b].mul(&m.lie[a])),
            );
        }
    }
    Ok(report)
}

/// `{a : a·M = M·a = 0}`.
pub fn annihilator(alg: &Ncpa, m: &QuasiPoissonModule) -> Result<Subspace> {
    m.check_shape(alg)?;
    let n = alg.dim();
    let mut eqs = Vec::with_capacity(2 * m.dim * m.dim);
    for mats in [&m.left, &m.right] {
        for r in 0..m.dim {
            for c in 0..m.dim {
                let row = SparseVector::from_dense(
                    &mats.iter().map(|x| x.get(r, c).clone()).collect::<Vec<_>>(),
                );
                if !row.is_zero() {
                    eqs.push(row);
                }
            }
        }
    }
    kernel(&eqs, n)
}

enum ActionSource {
    /// `F(M)`: products of the generator actions, cached per monomial.
    Generators {
        left: Vec<Matrix>,
        right: Vec<Matrix>,
        lie: Vec<Matrix>,
        cache: RwLock<HashMap<QMonomial, Matrix>>,
    },
    /// Explicit matrices for every monomial up to `max_degree`.
    Table {
        max_degree: usize,
        table: BTreeMap<QMonomial, Matrix>,
    },
}

/// An action of `Q(A)` on `K^dim`, extended linearly from basis monomials.
pub struct QAction {
    dim: usize,
    source: ActionSource,
}

impl fmt::Debug for QAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.source {
            ActionSource::Generators { .. } => "generators".to_string(),
            ActionSource::Table { max_degree, .. } => format!("table up to degree {max_degree}"),
        };
        f.debug_struct("QAction")
            .field("dim", &self.dim)
            .field("source", &kind)
            .finish()
    }
}

impl QAction {
    /// An action given monomial by monomial. Every monomial of U-degree at
    /// most `max_degree` must be present.
    pub fn from_table(
        q: &QAlgebra,
        dim: usize,
        max_degree: usize,
        table: BTreeMap<QMonomial, Matrix>,
    ) -> Result<Self> {
        for m in q.monomials_up_to(max_degree) {
            match table.get(&m) {
                None => {
                    return Err(Error::ModuleShape(format!("no matrix for monomial {m}")));
                }
                Some(a) if a.nrows() != dim || a.ncols() != dim => {
                    return Err(Error::ModuleShape(format!(
                        "matrix for {m} is {}x{}, expected {dim}x{dim}",
                        a.nrows(),
                        a.ncols()
                    )));
                }
                Some(_) => {}
            }
        }
        Ok(QAction {
            dim,
            source: ActionSource::Table { max_degree, table },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Highest U-degree the action is defined on, if bounded.
    pub fn max_degree(&self) -> Option<usize> {
        match &self.source {
            ActionSource::Generators { .. } => None,
            ActionSource::Table { max_degree, .. } => Some(*max_degree),
        }
    }

    pub fn monomial_matrix(&self, m: &QMonomial) -> Result<Matrix> {
        match &self.source {
            ActionSource::Table { max_degree, table } => {
                table.get(m).cloned().ok_or(Error::DegreeCapExceeded {
                    degree: m.degree(),
                    cap: *max_degree,
                })
            }
            ActionSource::Generators {
                left,
                right,
                lie,
                cache,
            } => {
                let n = left.len();
                if let Some(&index) = [m.left, m.right]
                    .iter()
                    .chain(m.u.max_index().iter())
                    .find(|&&i| i >= n)
                {
                    return Err(Error::IndexOutOfRange { index, dim: n });
                }
                if let Some(hit) = cache.read().expect("cache lock").get(m) {
                    return Ok(hit.clone());
                }
                // v_i · α(m) · v_j
                let nested =
                    m.u.indices()
                        .iter()
                        .fold(Matrix::identity(self.dim), |acc, &k| acc.mul(&lie[k]));
                let out = left[m.left].mul(&right[m.right]).mul(&nested);
                cache
                    .write()
                    .expect("cache lock")
                    .insert(m.clone(), out.clone());
                Ok(out)
            }
        }
    }

    pub fn act(&self, x: &QElement) -> Result<Matrix> {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (m, c) in x.iter() {
            out.add_scaled(c, &self.monomial_matrix(m)?);
        }
        Ok(out)
    }

    /// Pairs of monomials `(x, y)` with `deg x + deg y <= degree` for which
    /// `act(x) act(y) != act(xy)`.
    pub fn multiplicativity_failures(
        &self,
        q: &QAlgebra,
        degree: usize,
    ) -> Result<Vec<(QMonomial, QMonomial)>> {
        let ms = q.monomials_up_to(degree);
        let mut failures = Vec::new();
        for x in &ms {
            let ax = self.monomial_matrix(x)?;
            for y in ms.iter().filter(|y| x.degree() + y.degree() <= degree) {
                let prod = q.mul_monomials(x, y);
                if ax.mul(&self.monomial_matrix(y)?) != self.act(&prod)? {
                    failures.push((x.clone(), y.clone()));
                }
            }
        }
        Ok(failures)
    }

    /// Tabulates the action on all monomials of degree at most `degree`.
    pub fn tabulate(&self, q: &QAlgebra, degree: usize) -> Result<QAction> {
        let table = q
            .monomials_up_to(degree)
            .into_iter()
            .map(|m| {
                let a = self.monomial_matrix(&m)?;
                Ok((m, a))
            })
            .collect::<Result<_>>()?;
        Ok(QAction {
            dim: self.dim,
            source: ActionSource::Table {
                max_degree: degree,
                table,
            },
        })
    }
}

/// `F(M)`. Fails unless `M` is quasi-Poisson.
pub fn functor_f(alg: &Ncpa, m: &QuasiPoissonModule) -> Result<QAction> {
    let report = validate_quasi_poisson(alg, m)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::NotQuasiPoisson(v.to_string()));
    }
    Ok(QAction {
        dim: m.dim,
        source: ActionSource::Generators {
            left: m.left.clone(),
            right: m.right.clone(),
            lie: m.lie.clone(),
            cache: RwLock::new(HashMap::new()),
        },
    })
}

/// Degree up to which [`functor_g`] checks multiplicativity.
pub const G_CHECK_DEGREE: usize = 2;

/// `G(Q)`: the actions of `i(a)`, `k(a)` and `j(a)`. Fails unless the action
/// respects the product on monomial pairs of total degree at most 2.
pub fn functor_g(q: &QAlgebra, action: &QAction) -> Result<QuasiPoissonModule> {
    if let Some((x, y)) = action.multiplicativity_failures(q, G_CHECK_DEGREE)?.first() {
        return Err(Error::NotMultiplicative(format!("{x} * {y}")));
    }
    let alg = q.algebra();
    let n = alg.dim();
    let images = |kind| -> Result<Vec<Matrix>> {
        (0..n)
            .map(|a| action.act(&q.embed_basis(kind, a)?))
            .collect()
    };
    QuasiPoissonModule::new(
        alg,
        action.dim(),
        images(Embedding::I)?,
        images(Embedding::K)?,
        images(Embedding::J)?,
    )
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundtripReport {
    pub degree: usize,
    /// `G(F(M)) = M`, matrix for matrix.
    pub g_f_identity: bool,
    /// Monomials where `F(G(F(M)))` and `F(M)` differ.
    pub f_g_mismatches: Vec<QMonomial>,
    /// Monomial pairs where `F(M)` is not multiplicative.
    pub associativity_failures: Vec<(QMonomial, QMonomial)>,
    pub monomials_checked: usize,
    pub pairs_checked: usize,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.g_f_identity
            && self.f_g_mismatches.is_empty()
            && self.associativity_failures.is_empty()
    }
}

/// Checks `G(F(M)) = M`, `F(G(F(M))) = F(M)` on monomials of degree at most
/// `degree`, and multiplicativity of `F(M)` on pairs of total degree at most
/// `degree`.
pub fn roundtrip_report(
    q: &QAlgebra,
    m: &QuasiPoissonModule,
    degree: usize,
) -> Result<RoundtripReport> {
    let alg = q.algebra();
    let fm = functor_f(alg, m)?;
    let associativity_failures = fm.multiplicativity_failures(q, degree)?;
    let ms = q.monomials_up_to(degree);
    let pairs_checked = ms
        .iter()
        .map(|x| {
            ms.iter()
                .filter(|y| x.degree() + y.degree() <= degree)
                .count()
        })
        .sum();

    let gfm = functor_g(q, &fm)?;
    let g_f_identity = &gfm == m;
    let fgfm = functor_f(alg, &gfm)?;
    let mut f_g_mismatches = Vec::new();
    for x in &ms {
        if fgfm.monomial_matrix(x)? != fm.monomial_matrix(x)? {
            f_g_mismatches.push(x.clone());
        }
    }
    Ok(RoundtripReport {
        degree,
        g_f_identity,
        f_g_mismatches,
        associativity_failures,
        monomials_checked: ms.len(),
        pairs_checked,
    })
}

/// Outcome of acting by the generators of `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JAnnihilation {
    /// Basis pairs `(a, b)` whose generator acts nonzero.
    pub failing_pairs: Vec<(usize, usize)>,
}

impl JAnnihilation {
    pub fn annihilates(&self) -> bool {
        self.failing_pairs.is_empty()
    }
}

/// Whether every generator of `J` acts as zero on `F(M)`; this holds exactly
/// when `M` is Poisson, and a failing pair is a (1.4) witness.
pub fn j_annihilation_check(q: &QAlgebra, m: &QuasiPoissonModule) -> Result<JAnnihilation> {
    let fm = functor_f(q.algebra(), m)?;
    let n = q.dim();
    let mut failing_pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if !fm.act(&j_generator(q, a, b))?.is_zero() {
                failing_pairs.push((a, b));
            }
        }
    }
    Ok(JAnnihilation { failing_pairs })
}

/// Whether every generator in `gens` acts as zero.
pub fn annihilates(action: &QAction, gens: &IdealGens) -> Result<bool> {
    for g in &gens.generators {
        if !action.act(g)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rank of `Q(A)_{<=d} -> ⊕ End(M_k)`. When every `M_k` is annihilated by an
/// ideal, this is a lower bound for the dimension of the truncated quotient.
pub fn module_lower_bound(q: &QAlgebra, actions: &[&QAction], d: usize) -> Result<usize> {
    let ambient: usize = actions.iter().map(|a| a.dim() * a.dim()).sum();
    let mut image = Subspace::zero(ambient);
    for m in q.monomials_up_to(d) {
        let mut v = SparseVector::zero(ambient);
        let mut offset = 0;
        for a in actions {
            let block = a.monomial_matrix(&m)?.to_vector();
            for (k, c) in block.iter() {
                v.set(offset + k, c.clone());
            }
            offset += a.dim() * a.dim();
        }
        image.insert(&v)?;
    }
    Ok(image.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::quotient::{dimension_table, poisson_ideal_j, TruncatedQuotient};
    use crate::rational::int;
    use crate::uea::UMonomial;

    fn q_of(alg: Ncpa) -> QAlgebra {
        QAlgebra::with_cap(alg, 8)
    }

    #[test]
    fn regular_modules_are_poisson() {
        for alg in [
            catalog::kxk(),
            catalog::m2_standard(),
            catalog::trunc2(2),
            catalog::upper_triangular_standard(),
        ] {
            let m = QuasiPoissonModule::regular(&alg);
            assert!(validate_poisson(&alg, &m).unwrap().passed());
        }
    }

    #[test]
    fn zero_lie_bimodule_is_poisson_for_zero_bracket() {
        let alg = catalog::trunc2(2);
        let m = QuasiPoissonModule::regular(&alg);
        let zero = m.with_lie(vec![Matrix::zeros(3, 3); 3]);
        assert!(validate_poisson(&alg, &zero).unwrap().passed());
    }

    #[test]
    fn tensor_square_is_quasi_poisson() {
        for alg in [
            catalog::kxk(),
            catalog::m2_standard(),
            catalog::upper_triangular_standard(),
        ] {
            let m = QuasiPoissonModule::tensor_square(&alg);
            assert_eq!(m.dim, alg.dim() * alg.dim());
            assert!(validate_quasi_poisson(&alg, &m).unwrap().passed());
        }
        let alg = catalog::kxk();
        let m = QuasiPoissonModule::tensor_square(&alg);
        assert!(m.lie.iter().all(Matrix::is_zero));
        assert!(validate_poisson(&alg, &m).unwrap().passed());
    }

    #[test]
    fn shape_errors() {
        let alg = catalog::kxk();
        let bad = QuasiPoissonModule::new(
            &alg,
            2,
            vec![Matrix::identity(2)],
            vec![Matrix::identity(2); 2],
            vec![Matrix::zeros(2, 2); 2],
        );
        assert!(matches!(bad, Err(Error::ModuleShape(_))));
        let bad = QuasiPoissonModule::new(
            &alg,
            2,
            vec![Matrix::identity(3); 2],
            vec![Matrix::identity(2); 2],
            vec![Matrix::zeros(2, 2); 2],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn standard_bimodules() {
        let alg = catalog::m2_standard();
        let reg = QuasiPoissonModule::regular(&alg);
        let m = QuasiPoissonModule::standard_bimodule_to_poisson(
            &alg,
            4,
            reg.left.clone(),
            reg.right.clone(),
        )
        .unwrap();
        assert_eq!(m.lie, reg.lie);
        assert!(validate_poisson(&alg, &m).unwrap().passed());

        // A ⊗ A^op with {c, a ⊗ b} = ca ⊗ b - a ⊗ bc
        let sq = QuasiPoissonModule::tensor_square(&alg);
        let m =
            QuasiPoissonModule::standard_bimodule_to_poisson(&alg, 16, sq.left, sq.right).unwrap();
        assert!(validate_poisson(&alg, &m).unwrap().passed());

        let k = catalog::ground_field();
        let m = QuasiPoissonModule::standard_bimodule_to_poisson(
            &k,
            1,
            vec![Matrix::identity(1)],
            vec![Matrix::identity(1)],
        )
        .unwrap();
        assert!(m.lie[0].is_zero());

        // M2 with the zero bracket is an NCPA but not standard
        let zero_bracket = Ncpa::validate(catalog::m2_presentation()).unwrap();
        assert!(matches!(
            QuasiPoissonModule::standard_bimodule_to_poisson(
                &zero_bracket,
                4,
                reg.left.clone(),
                reg.right.clone()
            ),
            Err(Error::NotStandard(..))
        ));
    }

    #[test]
    fn f_examples() {
        let alg = catalog::kxk();
        let m = QuasiPoissonModule::regular(&alg);
        let fm = functor_f(&alg, &m).unwrap();
        let e1 = SparseVector::unit(2, 0);
        let act = |i, j, u: &[usize]| {
            fm.monomial_matrix(&QMonomial::new(i, j, UMonomial::new(u.to_vec()).unwrap()))
                .unwrap()
        };
        assert!(act(0, 1, &[]).apply(&e1).unwrap().is_zero());
        assert_eq!(act(0, 0, &[]).apply(&e1).unwrap(), e1);
        assert!(act(0, 0, &[1]).is_zero());
        assert!(act(1, 0, &[0, 1]).is_zero());
    }

    #[test]
    fn f_rejects_non_quasi_poisson() {
        let alg = catalog::m2_standard();
        let m = QuasiPoissonModule::regular(&alg);
        let broken = m.with_lie(vec![Matrix::identity(4); 4]);
        assert!(matches!(
            functor_f(&alg, &broken),
            Err(Error::NotQuasiPoisson(_))
        ));
    }

    #[test]
    fn roundtrips() {
        for (alg, degree) in [
            (catalog::kxk(), 2),
            (catalog::m2_standard(), 2),
            (catalog::trunc2(2), 2),
            (catalog::ground_field(), 3),
        ] {
            let m = QuasiPoissonModule::regular(&alg);
            let q = q_of(alg);
            let r = roundtrip_report(&q, &m, degree).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let alg = catalog::kxk();
        let m = QuasiPoissonModule::tensor_square(&alg);
        let q = q_of(alg);
        assert!(roundtrip_report(&q, &m, 2).unwrap().passed());
    }

    #[test]
    fn f_of_g_on_tables() {
        let alg = catalog::upper_triangular_standard();
        let q = q_of(alg.clone());
        let m = QuasiPoissonModule::regular(&alg);
        let table = functor_f(&alg, &m).unwrap().tabulate(&q, 2).unwrap();
        assert_eq!(table.max_degree(), Some(2));
        let gm = functor_g(&q, &table).unwrap();
        assert_eq!(gm, m);
        let fgm = functor_f(&alg, &gm).unwrap();
        for x in q.monomials_up_to(2) {
            assert_eq!(
                fgm.monomial_matrix(&x).unwrap(),
                table.monomial_matrix(&x).unwrap()
            );
        }
    }

    #[test]
    fn g_rejects_non_multiplicative_tables() {
        let alg = catalog::kxk();
        let q = q_of(alg.clone());
        let m = QuasiPoissonModule::regular(&alg);
        let good = functor_f(&alg, &m).unwrap().tabulate(&q, 2).unwrap();
        let mut table = BTreeMap::new();
        for x in q.monomials_up_to(2) {
            table.insert(x.clone(), good.monomial_matrix(&x).unwrap());
        }
        let j = QMonomial::new(0, 0, UMonomial::new(vec![0]).unwrap());
        table.insert(j, Matrix::identity(2));
        let bad = QAction::from_table(&q, 2, 2, table).unwrap();
        assert!(matches!(
            functor_g(&q, &bad),
            Err(Error::NotMultiplicative(_))
        ));
        assert!(QAction::from_table(&q, 2, 2, BTreeMap::new()).is_err());
    }

    #[test]
    fn poisson_iff_j_annihilates() {
        let mut modules: Vec<(Ncpa, QuasiPoissonModule)> = Vec::new();
        for alg in [
            catalog::kxk(),
            catalog::m2_standard(),
            catalog::upper_triangular_standard(),
        ] {
            modules.push((alg.clone(), QuasiPoissonModule::regular(&alg)));
            modules.push((alg.clone(), QuasiPoissonModule::tensor_square(&alg)));
        }
        // Lie action i -> L(v_i): quasi-Poisson over a zero bracket, breaks (1.4)
        let alg = catalog::kxk();
        let reg = QuasiPoissonModule::regular(&alg);
        modules.push((alg.clone(), reg.with_lie(reg.left.clone())));
        for (alg, m) in modules {
            let q = q_of(alg.clone());
            let poisson = validate_poisson(&alg, &m).unwrap();
            let j = j_annihilation_check(&q, &m).unwrap();
            assert_eq!(poisson.passed(), j.annihilates());
            let witnesses: Vec<(usize, usize)> = poisson
                .of(ModuleAxiom::Poisson)
                .map(|v| (v.indices[0], v.indices[1]))
                .collect();
            assert_eq!(witnesses, j.failing_pairs);
        }
    }

    #[test]
    fn annihilators() {
        let alg = catalog::kxk();
        assert!(annihilator(&alg, &QuasiPoissonModule::regular(&alg))
            .unwrap()
            .is_zero());

        let ideal = Subspace::span([SparseVector::unit(2, 0)].iter(), 2).unwrap();
        let quot = QuasiPoissonModule::quotient_module(&alg, &ideal).unwrap();
        assert_eq!(quot.dim, 1);
        let ann = annihilator(&alg, &quot).unwrap();
        assert_eq!(ann, ideal);
        assert!(alg.is_poisson_ideal(&ann).unwrap());

        let empty = QuasiPoissonModule::new(
            &alg,
            0,
            vec![Matrix::zeros(0, 0); 2],
            vec![Matrix::zeros(0, 0); 2],
            vec![Matrix::zeros(0, 0); 2],
        )
        .unwrap();
        assert!(annihilator(&alg, &empty).unwrap().is_full());

        let m2 = catalog::m2_standard();
        assert!(annihilator(&m2, &QuasiPoissonModule::regular(&m2))
            .unwrap()
            .is_zero());
        let sq = QuasiPoissonModule::tensor_square(&m2);
        assert!(annihilator(&m2, &sq).unwrap().is_zero());
        let not_ideal = Subspace::span([SparseVector::unit(4, 1)].iter(), 4).unwrap();
        assert!(QuasiPoissonModule::quotient_module(&m2, &not_ideal).is_err());
    }

    #[test]
    fn annihilator_is_poisson_ideal() {
        let alg = catalog::upper_triangular_standard();
        // ideal spanned by E12
        let ideal = alg
            .poisson_ideal_closure(&[alg.basis(1)], crate::algebra::Side::TwoSided)
            .unwrap();
        let quot = QuasiPoissonModule::quotient_module(&alg, &ideal).unwrap();
        let ann = annihilator(&alg, &quot).unwrap();
        assert!(alg.is_poisson_ideal(&ann).unwrap());
        assert!(ideal.is_subspace_of(&ann).unwrap());
    }

    #[test]
    fn twisted_regular_modules() {
        for alg in [catalog::kxk(), catalog::m2_standard()] {
            let rs = alg.regular_poisson_structures();
            let n = alg.dim();
            let mut psis = vec![Matrix::zeros(n, n)];
            for v in rs.qualifying.basis() {
                psis.push(Matrix::from_vector(n, n, v).unwrap());
            }
            for psi in psis {
                let m = QuasiPoissonModule::regular_twisted(&alg, &psi).unwrap();
                assert!(validate_poisson(&alg, &m).unwrap().passed());
            }
        }
    }

    #[test]
    fn morphisms_commute_with_f() {
        let alg = catalog::kxk();
        let q = q_of(alg.clone());
        // N commutes with every action of the Jordan module, so it is an
        // endomorphism; F must preserve that.
        let m = catalog::kxk_jordan_module(3, false);
        let f = m.lie[0].clone();
        let fm = functor_f(&alg, &m).unwrap();
        for x in q.monomials_up_to(3) {
            let a = fm.monomial_matrix(&x).unwrap();
            assert_eq!(f.mul(&a), a.mul(&f));
        }
        // projection from a direct sum onto its first summand
        let reg = QuasiPoissonModule::regular(&alg);
        let sum = reg.direct_sum(&m);
        let mut proj = Matrix::zeros(reg.dim, sum.dim);
        for i in 0..reg.dim {
            proj.set(i, i, int(1));
        }
        let (fs, fr) = (
            functor_f(&alg, &sum).unwrap(),
            functor_f(&alg, &reg).unwrap(),
        );
        for x in q.monomials_up_to(3) {
            assert_eq!(
                proj.mul(&fs.monomial_matrix(&x).unwrap()),
                fr.monomial_matrix(&x).unwrap().mul(&proj)
            );
        }
    }

    #[test]
    fn jordan_modules_certify_kxk_dimensions() {
        let alg = catalog::kxk();
        let q = q_of(alg.clone());
        let j = poisson_ideal_j(&q);
        let table = dimension_table(&q, &j, 3, None).unwrap();
        let modules: Vec<QuasiPoissonModule> = vec![
            catalog::kxk_jordan_module(4, false),
            catalog::kxk_jordan_module(4, true),
            catalog::kxk_idempotent_module(0),
            catalog::kxk_idempotent_module(1),
        ];
        let actions: Vec<QAction> = modules
            .iter()
            .map(|m| functor_f(&alg, m).unwrap())
            .collect();
        for a in &actions {
            assert!(annihilates(a, &j).unwrap());
        }
        let refs: Vec<&QAction> = actions.iter().collect();
        for row in table {
            assert_eq!(module_lower_bound(&q, &refs, row.degree).unwrap(), row.dim);
        }
    }

    #[test]
    fn ideal_slice_acts_as_zero_on_poisson_modules() {
        let alg = catalog::m2_standard();
        let q = q_of(alg.clone());
        let tq = TruncatedQuotient::compute(&q, &poisson_ideal_j(&q), 1, 2).unwrap();
        let reg = functor_f(&alg, &QuasiPoissonModule::regular(&alg)).unwrap();
        for row in tq.ideal_slice().basis() {
            let x = tq.coords().to_element(row);
            assert!(reg.act(&x).unwrap().is_zero());
        }
    }
}

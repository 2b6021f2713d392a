//! Finite-dimensional non-commutative Poisson algebras given by structure
//! constants: validation, element arithmetic and structural analysis
//! (center, Poisson ideals, simplicity, Poisson derivations).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{extend_closure, kernel, LinearOp, Matrix, SparseVector, Subspace};
use crate::rational::{self, Rational};

/// Raw structure constants of an algebra, before any axiom check.
///
/// `mul[(i, j)]` holds the coordinates of `v_i v_j` and `bracket[(i, j)]` those
/// of `{v_i, v_j}`; missing pairs are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub name: String,
    pub dim: usize,
    pub labels: Vec<String>,
    pub unit: SparseVector,
    pub mul: BTreeMap<(usize, usize), SparseVector>,
    pub bracket: BTreeMap<(usize, usize), SparseVector>,
}

impl AlgebraPresentation {
    /// Presentation with the given labels, unit and no products.
    pub fn new(name: impl Into<String>, labels: &[&str], unit: SparseVector) -> Self {
        Self {
            name: name.into(),
            dim: labels.len(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
            unit,
            mul: BTreeMap::new(),
            bracket: BTreeMap::new(),
        }
    }

    /// Adds `c * v_k` to `v_i v_j`.
    pub fn set_mul(&mut self, i: usize, j: usize, k: usize, c: Rational) -> &mut Self {
        let n = self.dim;
        self.mul
            .entry((i, j))
            .or_insert_with(|| SparseVector::zero(n))
            .add_at(k, &c);
        self
    }

    /// Adds `c * v_k` to `{v_i, v_j}`.
    pub fn set_bracket(&mut self, i: usize, j: usize, k: usize, c: Rational) -> &mut Self {
        let n = self.dim;
        self.bracket
            .entry((i, j))
            .or_insert_with(|| SparseVector::zero(n))
            .add_at(k, &c);
        self
    }

    pub fn has_zero_bracket(&self) -> bool {
        self.bracket.values().all(SparseVector::is_zero)
    }

    /// Structural checks: lengths, index ranges, label count.
    pub fn check_shape(&self) -> Result<()> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::MalformedPresentation(
                "dimension must be at least 1".into(),
            ));
        }
        if self.labels.len() != n {
            return Err(Error::MalformedPresentation(format!(
                "{} basis labels for dimension {n}",
                self.labels.len()
            )));
        }
        if self.unit.len() != n {
            return Err(Error::MalformedPresentation(format!(
                "unit has length {}, expected {n}",
                self.unit.len()
            )));
        }
        for (what, table) in [("mul", &self.mul), ("bracket", &self.bracket)] {
            for ((i, j), v) in table {
                if *i >= n || *j >= n {
                    return Err(Error::MalformedPresentation(format!(
                        "{what} entry ({i}, {j}) out of range for dimension {n}"
                    )));
                }
                if v.len() != n {
                    return Err(Error::MalformedPresentation(format!(
                        "{what} entry ({i}, {j}) has length {}, expected {n}",
                        v.len()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Dense structure tables shared by validation and by [`Ncpa`].
#[derive(Clone, Debug)]
struct Tables {
    n: usize,
    mul: Vec<SparseVector>,
    bracket: Vec<SparseVector>,
}

impl Tables {
    fn new(p: &AlgebraPresentation) -> Self {
        let n = p.dim;
        let build = |t: &BTreeMap<(usize, usize), SparseVector>| {
            (0..n * n)
                .map(|k| {
                    t.get(&(k / n, k % n))
                        .cloned()
                        .unwrap_or_else(|| SparseVector::zero(n))
                })
                .collect::<Vec<_>>()
        };
        Self {
            n,
            mul: build(&p.mul),
            bracket: build(&p.bracket),
        }
    }

    fn bilinear(&self, table: &[SparseVector], x: &SparseVector, y: &SparseVector) -> SparseVector {
        let mut out = SparseVector::zero(self.n);
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(&(a * b), &table[i * self.n + j]);
            }
        }
        out
    }

    fn mul(&self, x: &SparseVector, y: &SparseVector) -> SparseVector {
        self.bilinear(&self.mul, x, y)
    }

    fn bracket(&self, x: &SparseVector, y: &SparseVector) -> SparseVector {
        self.bilinear(&self.bracket, x, y)
    }

    fn e(&self, i: usize) -> SparseVector {
        SparseVector::unit(self.n, i)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Axiom {
    Associativity,
    LeftUnit,
    RightUnit,
    Antisymmetry,
    Jacobi,
    Leibniz,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Associativity => "associativity",
            Axiom::LeftUnit => "left unit",
            Axiom::RightUnit => "right unit",
            Axiom::Antisymmetry => "antisymmetry",
            Axiom::Jacobi => "Jacobi identity",
            Axiom::Leibniz => "Leibniz rule",
        };
        f.write_str(s)
    }
}

/// One failed axiom instance on basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub indices: Vec<usize>,
    pub lhs: SparseVector,
    pub rhs: SparseVector,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at {:?}: {} != {}",
            self.axiom, self.indices, self.lhs, self.rhs
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationFailure {
    Malformed(Error),
    Violations(Vec<AxiomViolation>),
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationFailure::Malformed(e) => write!(f, "{e}"),
            ValidationFailure::Violations(v) => write!(f, "{} axiom violation(s)", v.len()),
        }
    }
}

impl std::error::Error for ValidationFailure {}

fn check_associative(t: &Tables, unit: &SparseVector, out: &mut Vec<AxiomViolation>) {
    let n = t.n;
    for i in 0..n {
        let ei = t.e(i);
        let l = t.mul(unit, &ei);
        if l != ei {
            out.push(AxiomViolation {
                axiom: Axiom::LeftUnit,
                indices: vec![i],
                lhs: l,
                rhs: ei.clone(),
            });
        }
        let r = t.mul(&ei, unit);
        if r != ei {
            out.push(AxiomViolation {
                axiom: Axiom::RightUnit,
                indices: vec![i],
                lhs: r,
                rhs: ei.clone(),
            });
        }
        for j in 0..n {
            let ij = &t.mul[i * n + j];
            for k in 0..n {
                let lhs = t.mul(ij, &t.e(k));
                let rhs = t.mul(&ei, &t.mul[j * n + k]);
                if lhs != rhs {
                    out.push(AxiomViolation {
                        axiom: Axiom::Associativity,
                        indices: vec![i, j, k],
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
}

fn check_poisson(t: &Tables, out: &mut Vec<AxiomViolation>) {
    let n = t.n;
    for i in 0..n {
        for j in i..n {
            let lhs = t.bracket[i * n + j].clone();
            let rhs = t.bracket[j * n + i].scaled(&-Rational::one());
            if lhs != rhs {
                out.push(AxiomViolation {
                    axiom: Axiom::Antisymmetry,
                    indices: vec![i, j],
                    lhs,
                    rhs,
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (ei, ej, ek) = (t.e(i), t.e(j), t.e(k));
                // {a,{b,c}} + {b,{c,a}} + {c,{a,b}} = 0
                let mut jac = t.bracket(&ei, &t.bracket[j * n + k]);
                jac.add_scaled(&Rational::one(), &t.bracket(&ej, &t.bracket[k * n + i]));
                jac.add_scaled(&Rational::one(), &t.bracket(&ek, &t.bracket[i * n + j]));
                if !jac.is_zero() {
                    out.push(AxiomViolation {
                        axiom: Axiom::Jacobi,
                        indices: vec![i, j, k],
                        lhs: jac,
                        rhs: SparseVector::zero(n),
                    });
                }
                // {ab,c} = a{b,c} + {a,c}b
                let lhs = t.bracket(&t.mul[i * n + j], &ek);
                let mut rhs = t.mul(&ei, &t.bracket[j * n + k]);
                rhs.add_scaled(&Rational::one(), &t.mul(&t.bracket[i * n + k], &ej));
                if lhs != rhs {
                    out.push(AxiomViolation {
                        axiom: Axiom::Leibniz,
                        indices: vec![i, j, k],
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
}

/// A validated non-commutative Poisson algebra.
///
/// Construction goes through [`Ncpa::validate`], so every value of this type
/// satisfies associativity, the unit laws, antisymmetry, Jacobi and Leibniz
/// on all basis triples. Basis order is the input order of the labels.
#[derive(Clone, Debug)]
pub struct Ncpa {
    presentation: AlgebraPresentation,
    tables: Tables,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
    ad: Vec<Matrix>,
}

/// An element of an algebra, as coordinates in its basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AElement {
    pub coords: SparseVector,
}

impl AElement {
    pub fn new(coords: SparseVector) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    TwoSided,
}

/// Outcome of the Poisson-simplicity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Simplicity {
    Simple,
    /// A proper nonzero two-sided Poisson ideal.
    NotSimple(Subspace),
    /// The centralizer of the multiplication algebra is a nonsplit division
    /// algebra candidate and no ideal could be exhibited.
    Undetermined,
}

impl Simplicity {
    pub fn is_simple(&self) -> Option<bool> {
        match self {
            Simplicity::Simple => Some(true),
            Simplicity::NotSimple(_) => Some(false),
            Simplicity::Undetermined => None,
        }
    }
}

/// Poisson derivations, and the subspace of those that induce a Poisson
/// module structure on the regular bimodule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularStructures {
    /// All Poisson derivations, as row-major `n x n` matrices flattened to `n^2`.
    pub derivations: Subspace,
    /// Derivations with image in the center and `psi(a)[b,c] = 0`.
    pub qualifying: Subspace,
}

impl Ncpa {
    /// Checks every axiom on basis triples. On failure, reports all violated
    /// instances rather than the first.
    pub fn validate(p: AlgebraPresentation) -> std::result::Result<Ncpa, ValidationFailure> {
        p.check_shape().map_err(ValidationFailure::Malformed)?;
        let tables = Tables::new(&p);
        let mut violations = Vec::new();
        check_associative(&tables, &p.unit, &mut violations);
        check_poisson(&tables, &mut violations);
        if !violations.is_empty() {
            return Err(ValidationFailure::Violations(violations));
        }
        Ok(Self::from_tables(p, tables))
    }

    fn from_tables(presentation: AlgebraPresentation, tables: Tables) -> Ncpa {
        let n = tables.n;
        let op = |f: &dyn Fn(usize, usize) -> SparseVector| -> Vec<Matrix> {
            (0..n)
                .map(|i| {
                    let cols: Vec<SparseVector> = (0..n).map(|b| f(i, b)).collect();
                    Matrix::from_columns(n, &cols).expect("table vectors have length n")
                })
                .collect()
        };
        let left = op(&|i, b| tables.mul[i * n + b].clone());
        let right = op(&|i, b| tables.mul[b * n + i].clone());
        let ad = op(&|i, b| tables.bracket[i * n + b].clone());
        Ncpa {
            presentation,
            tables,
            left,
            right,
            ad,
        }
    }

    /// The standard NCPA of an associative algebra: bracket = commutator.
    /// Any bracket already present in `p` is replaced.
    pub fn standard(mut p: AlgebraPresentation) -> std::result::Result<Ncpa, ValidationFailure> {
        p.check_shape().map_err(ValidationFailure::Malformed)?;
        let tables = Tables::new(&p);
        let mut violations = Vec::new();
        check_associative(&tables, &p.unit, &mut violations);
        if !violations.is_empty() {
            return Err(ValidationFailure::Violations(violations));
        }
        let n = p.dim;
        p.bracket.clear();
        for i in 0..n {
            for j in 0..n {
                let c = tables.mul[i * n + j].sub(&tables.mul[j * n + i]);
                if !c.is_zero() {
                    p.bracket.insert((i, j), c);
                }
            }
        }
        Self::validate(p)
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.presentation
    }

    pub fn name(&self) -> &str {
        &self.presentation.name
    }

    pub fn dim(&self) -> usize {
        self.tables.n
    }

    pub fn labels(&self) -> &[String] {
        &self.presentation.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.presentation.labels.iter().position(|l| l == label)
    }

    pub fn has_zero_bracket(&self) -> bool {
        self.tables.bracket.iter().all(SparseVector::is_zero)
    }

    /// True iff the bracket is the commutator on every basis pair.
    pub fn is_standard(&self) -> bool {
        self.first_non_commutator().is_none()
    }

    pub(crate) fn first_non_commutator(&self) -> Option<(usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let comm = self.mul_basis(i, j).sub(self.mul_basis(j, i));
                if &comm != self.bracket_basis(i, j) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn unit(&self) -> AElement {
        AElement::new(self.presentation.unit.clone())
    }

    pub fn unit_coords(&self) -> &SparseVector {
        &self.presentation.unit
    }

    pub fn basis(&self, i: usize) -> AElement {
        AElement::new(SparseVector::unit(self.dim(), i))
    }

    pub fn zero(&self) -> AElement {
        AElement::new(SparseVector::zero(self.dim()))
    }

    pub fn element(&self, coords: SparseVector) -> Result<AElement> {
        coords.check_len(self.dim())?;
        Ok(AElement::new(coords))
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVector {
        &self.tables.mul[i * self.dim() + j]
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVector {
        &self.tables.bracket[i * self.dim() + j]
    }

    /// Product of coordinate vectors; lengths are assumed to match.
    pub fn mul_coords(&self, x: &SparseVector, y: &SparseVector) -> SparseVector {
        self.tables.mul(x, y)
    }

    pub fn bracket_coords(&self, x: &SparseVector, y: &SparseVector) -> SparseVector {
        self.tables.bracket(x, y)
    }

    fn check(&self, x: &AElement) -> Result<()> {
        x.coords.check_len(self.dim())
    }

    pub fn mul(&self, x: &AElement, y: &AElement) -> Result<AElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(AElement::new(self.mul_coords(&x.coords, &y.coords)))
    }

    pub fn bracket(&self, x: &AElement, y: &AElement) -> Result<AElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(AElement::new(self.bracket_coords(&x.coords, &y.coords)))
    }

    /// Matrix of `b -> v_i b`.
    pub fn left_matrix(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    /// Matrix of `b -> b v_i`.
    pub fn right_matrix(&self, i: usize) -> &Matrix {
        &self.right[i]
    }

    /// Matrix of `b -> {v_i, b}`.
    pub fn ad_matrix(&self, i: usize) -> &Matrix {
        &self.ad[i]
    }

    /// Linear combination `sum_i x_i * mats[i]`.
    pub(crate) fn combine(mats: &[Matrix], x: &SparseVector, size: usize) -> Matrix {
        let mut out = Matrix::zeros(size, size);
        for (i, c) in x.iter() {
            out.add_scaled(c, &mats[i]);
        }
        out
    }

    /// Associative center, as a subspace of coordinate space.
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        let mut eqs = Vec::with_capacity(n * n);
        for b in 0..n {
            for t in 0..n {
                let mut row = SparseVector::zero(n);
                for a in 0..n {
                    let c = self.mul_basis(a, b).get(t) - self.mul_basis(b, a).get(t);
                    row.set(a, c);
                }
                if !row.is_zero() {
                    eqs.push(row);
                }
            }
        }
        kernel(&eqs, n).expect("equation rows have length n")
    }

    /// Smallest subspace containing `seed` that is a Lie ideal and a
    /// left/right/two-sided associative ideal.
    pub fn poisson_ideal_closure(&self, seed: &[AElement], side: Side) -> Result<Subspace> {
        for s in seed {
            self.check(s)?;
        }
        let n = self.dim();
        let seeds: Vec<SparseVector> = seed.iter().map(|s| s.coords.clone()).collect();
        let mut space = Subspace::zero(n);
        let ops = self.ideal_operators(side);
        let refs: Vec<&LinearOp<'_>> = ops.iter().map(|b| b.as_ref()).collect();
        extend_closure(&mut space, &seeds, &refs)?;
        Ok(space)
    }

    fn ideal_operators(&self, side: Side) -> Vec<Box<LinearOp<'_>>> {
        let n = self.dim();
        let mut ops: Vec<Box<LinearOp<'_>>> = Vec::new();
        for i in 0..n {
            ops.push(Box::new(move |v: &SparseVector| self.ad[i].apply(v)));
            if matches!(side, Side::Left | Side::TwoSided) {
                ops.push(Box::new(move |v: &SparseVector| self.left[i].apply(v)));
            }
            if matches!(side, Side::Right | Side::TwoSided) {
                ops.push(Box::new(move |v: &SparseVector| self.right[i].apply(v)));
            }
        }
        ops
    }

    /// True iff `s` is closed under bracket and two-sided multiplication by
    /// every basis element.
    pub fn is_poisson_ideal(&self, s: &Subspace) -> Result<bool> {
        s.check_ambient(self.dim())?;
        for v in s.basis() {
            for i in 0..self.dim() {
                for m in [&self.ad[i], &self.left[i], &self.right[i]] {
                    if !s.contains(&m.apply(v)?)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Decides whether the only two-sided Poisson ideals are 0 and A.
    ///
    /// Poisson ideals are the submodules of A under the algebra `M` generated
    /// by all left, right and adjoint operators. The test runs, in order:
    /// closures of basis vectors and pairwise sums; the radical of `M`
    /// (trace-form kernel), whose image is a proper submodule when nonzero;
    /// the centralizer of `M`, which is one-dimensional for a simple module
    /// with no rational splitting; and rational eigenvalues or repeated
    /// factors of centralizer elements, whose kernels are submodules.
    pub fn poisson_simplicity(&self) -> Simplicity {
        let n = self.dim();
        let closure = |v: SparseVector| {
            self.poisson_ideal_closure(&[AElement::new(v)], Side::TwoSided)
                .expect("coordinates have length n")
        };
        let proper = |s: &Subspace| !s.is_zero() && !s.is_full();

        let mut probes: Vec<SparseVector> = (0..n).map(|i| SparseVector::unit(n, i)).collect();
        for i in 0..n {
            for j in i + 1..n {
                probes.push(SparseVector::unit(n, i).add(&SparseVector::unit(n, j)));
            }
        }
        for p in probes {
            let s = closure(p);
            if proper(&s) {
                return Simplicity::NotSimple(self.minimize_ideal(s));
            }
        }

        let gens: Vec<&Matrix> = (0..n)
            .flat_map(|i| [&self.left[i], &self.right[i], &self.ad[i]])
            .collect();
        let mult = matrix_algebra(&gens, n);

        // Dickson: rad(M) = { x in M : tr(xy) = 0 for all y in M }.
        let radical = trace_radical(&mult, n);
        let mut rad_image = Vec::new();
        for x in &radical {
            for j in 0..n {
                rad_image.push(x.column(j));
            }
        }
        let rad_space = Subspace::span(rad_image.iter(), n).expect("columns have length n");
        if proper(&rad_space) {
            return Simplicity::NotSimple(self.minimize_ideal(rad_space));
        }

        let cent = centralizer(&gens, n);
        if cent.len() <= 1 {
            return Simplicity::Simple;
        }
        let mut candidates = cent.clone();
        for a in 0..cent.len() {
            for b in a + 1..cent.len() {
                candidates.push(cent[a].add(&cent[b]));
            }
        }
        for c in &candidates {
            if let Some(sub) = split_by_element(c) {
                if proper(&sub) {
                    return Simplicity::NotSimple(self.minimize_ideal(sub));
                }
            }
        }
        Simplicity::Undetermined
    }

    /// Shrinks a proper ideal by re-closing its basis vectors, so witnesses
    /// tend to be small.
    fn minimize_ideal(&self, mut ideal: Subspace) -> Subspace {
        loop {
            let smaller = ideal
                .basis()
                .map(|v| {
                    self.poisson_ideal_closure(&[AElement::new(v.clone())], Side::TwoSided)
                        .expect("coordinates have length n")
                })
                .filter(|s| !s.is_zero())
                .min_by_key(Subspace::rank);
            match smaller {
                Some(s) if s.rank() < ideal.rank() => ideal = s,
                _ => return ideal,
            }
        }
    }

    /// Poisson derivations: linear maps that are derivations of both the
    /// product and the bracket. Matrices are flattened row-major, so entry
    /// `k * n + a` is the `v_k` coordinate of `psi(v_a)`.
    pub fn poisson_derivations(&self) -> Subspace {
        let n = self.dim();
        let var = |k: usize, a: usize| k * n + a;
        let mut eqs = Vec::new();
        for table in [&self.tables.mul, &self.tables.bracket] {
            for a in 0..n {
                for b in 0..n {
                    for t in 0..n {
                        let mut row = SparseVector::zero(n * n);
                        // psi(v_a * v_b)
                        for (c, x) in table[a * n + b].iter() {
                            row.add_at(var(t, c), x);
                        }
                        // - psi(v_a) * v_b - v_a * psi(v_b)
                        for k in 0..n {
                            let x = table[k * n + b].get(t);
                            row.add_at(var(k, a), &-x);
                            let y = table[a * n + k].get(t);
                            row.add_at(var(k, b), &-y);
                        }
                        if !row.is_zero() {
                            eqs.push(row);
                        }
                    }
                }
            }
        }
        kernel(&eqs, n * n).expect("rows have length n^2")
    }

    /// Poisson derivations together with the subspace satisfying
    /// `psi(A) in C(A)` and `psi(a)[b,c] = 0`.
    pub fn regular_poisson_structures(&self) -> RegularStructures {
        let n = self.dim();
        let derivations = self.poisson_derivations();
        let var = |k: usize, a: usize| k * n + a;
        let mut eqs: Vec<SparseVector> = Vec::new();
        let mut constraints = Vec::new();
        for a in 0..n {
            // psi(v_a) commutes with every v_b
            for b in 0..n {
                for t in 0..n {
                    let mut row = SparseVector::zero(n * n);
                    for k in 0..n {
                        let c = self.mul_basis(k, b).get(t) - self.mul_basis(b, k).get(t);
                        row.add_at(var(k, a), &c);
                    }
                    if !row.is_zero() {
                        constraints.push(row);
                    }
                }
            }
            // psi(v_a) [v_b, v_c] = 0
            for b in 0..n {
                for c in 0..n {
                    let comm = self.mul_basis(b, c).sub(self.mul_basis(c, b));
                    if comm.is_zero() {
                        continue;
                    }
                    for t in 0..n {
                        let mut row = SparseVector::zero(n * n);
                        for k in 0..n {
                            let x = self.mul_coords(&SparseVector::unit(n, k), &comm).get(t);
                            row.add_at(var(k, a), &x);
                        }
                        if !row.is_zero() {
                            constraints.push(row);
                        }
                    }
                }
            }
        }
        // intersect: solve over the derivation basis
        let basis: Vec<&SparseVector> = derivations.basis().collect();
        for con in &constraints {
            let mut row = SparseVector::zero(basis.len());
            for (idx, d) in basis.iter().enumerate() {
                let dot: Rational = d.iter().map(|(i, x)| x * con.get(i)).sum();
                row.set(idx, dot);
            }
            if !row.is_zero() {
                eqs.push(row);
            }
        }
        let coeffs = kernel(&eqs, basis.len()).expect("rows sized to basis");
        let mut qualifying = Subspace::zero(n * n);
        for c in coeffs.basis() {
            let mut v = SparseVector::zero(n * n);
            for (idx, x) in c.iter() {
                v.add_scaled(x, basis[idx]);
            }
            qualifying.insert(&v).expect("length n^2");
        }
        RegularStructures {
            derivations,
            qualifying,
        }
    }
}

impl Subspace {
    pub(crate) fn check_ambient(&self, n: usize) -> Result<()> {
        if self.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.ambient_dim(),
            });
        }
        Ok(())
    }
}

/// Basis of the unital algebra generated by `gens` inside `End(K^n)`.
fn matrix_algebra(gens: &[&Matrix], n: usize) -> Vec<Matrix> {
    let mut space = Subspace::zero(n * n);
    let mut basis = Vec::new();
    let mut queue = vec![Matrix::identity(n)];
    while let Some(m) = queue.pop() {
        if space.insert(&m.to_vector()).expect("n^2").is_none() {
            continue;
        }
        for g in gens {
            queue.push(g.mul(&m));
        }
        basis.push(m);
    }
    basis
}

/// Elements of the span of `alg` orthogonal to all of `alg` under the trace form.
fn trace_radical(alg: &[Matrix], n: usize) -> Vec<Matrix> {
    let k = alg.len();
    let mut rows = Vec::with_capacity(k);
    for y in alg {
        let mut row = SparseVector::zero(k);
        for (i, x) in alg.iter().enumerate() {
            row.set(i, x.mul(y).trace());
        }
        rows.push(row);
    }
    let ker = kernel(&rows, k).expect("k");
    ker.basis()
        .map(|c| {
            let mut m = Matrix::zeros(n, n);
            for (i, x) in c.iter() {
                m.add_scaled(x, &alg[i]);
            }
            m
        })
        .collect()
}

/// Basis of `{ c : c g = g c for every generator }`.
fn centralizer(gens: &[&Matrix], n: usize) -> Vec<Matrix> {
    let var = |i: usize, j: usize| i * n + j;
    let mut eqs = Vec::new();
    for g in gens {
        // (c g - g c)_{ij} = sum_k c_ik g_kj - g_ik c_kj
        for i in 0..n {
            for j in 0..n {
                let mut row = SparseVector::zero(n * n);
                for k in 0..n {
                    row.add_at(var(i, k), g.get(k, j));
                    row.add_at(var(k, j), &-g.get(i, k));
                }
                if !row.is_zero() {
                    eqs.push(row);
                }
            }
        }
    }
    let ker = kernel(&eqs, n * n).expect("n^2");
    ker.basis()
        .map(|v| Matrix::from_vector(n, n, v).expect("n^2"))
        .collect()
}

/// For `c` commuting with the multiplication algebra, a kernel that is a
/// proper submodule: `ker(c - lambda)` for a rational eigenvalue, or the
/// kernel of the squarefree part of a non-squarefree minimal polynomial.
fn split_by_element(c: &Matrix) -> Option<Subspace> {
    let n = c.nrows();
    let minpoly = minimal_polynomial(c);
    if minpoly.len() <= 2 {
        return None; // c is scalar
    }
    let sqfree = squarefree_part(&minpoly);
    if sqfree.len() < minpoly.len() {
        let k = eval_poly(&sqfree, c).null_space().ok()?;
        return Some(k);
    }
    for lambda in rational_roots(&minpoly) {
        let shifted = c.sub(&Matrix::identity(n).scaled(&lambda));
        let k = shifted.null_space().ok()?;
        if !k.is_zero() {
            return Some(k);
        }
    }
    None
}

/// Coefficients low-to-high of the monic minimal polynomial.
fn minimal_polynomial(c: &Matrix) -> Vec<Rational> {
    let n = c.nrows();
    let mut powers = vec![Matrix::identity(n)];
    loop {
        let next = powers.last().unwrap().mul(c);
        // solve next = sum a_i powers[i]
        let k = powers.len();
        let mut rows = Vec::new();
        let target = next.to_vector();
        let cols: Vec<SparseVector> = powers.iter().map(Matrix::to_vector).collect();
        for e in 0..n * n {
            let mut row = SparseVector::zero(k + 1);
            for (i, col) in cols.iter().enumerate() {
                row.set(i, col.get(e));
            }
            row.set(k, -target.get(e));
            if !row.is_zero() {
                rows.push(row);
            }
        }
        let ker = kernel(&rows, k + 1).expect("k+1");
        if let Some(sol) = ker.basis().find(|v| !v.get(k).is_zero()) {
            let scale = sol.get(k).recip();
            let mut poly: Vec<Rational> = (0..k).map(|i| -(sol.get(i) * &scale)).collect();
            poly.push(Rational::one());
            return poly;
        }
        powers.push(next);
    }
}

fn eval_poly(p: &[Rational], c: &Matrix) -> Matrix {
    let n = c.nrows();
    let mut acc = Matrix::zeros(n, n);
    for coeff in p.iter().rev() {
        acc = acc.mul(c).add(&Matrix::identity(n).scaled(coeff));
    }
    acc
}

fn poly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let q = r[dr].clone() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[dr - db + i] -= &q * bc;
        }
        r = poly_trim(r);
    }
    r
}

fn poly_div(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![Rational::zero(); a.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr].clone() / &b[db];
        q[dr - db] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            r[dr - db + i] -= &c * bc;
        }
        r = poly_trim(r);
        if r.is_empty() {
            break;
        }
    }
    poly_trim(q)
}

fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut x, mut y) = (poly_trim(a.to_vec()), poly_trim(b.to_vec()));
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    let lead = x.last().cloned().unwrap_or_else(Rational::one);
    x.iter().map(|c| c / &lead).collect()
}

fn squarefree_part(p: &[Rational]) -> Vec<Rational> {
    let deriv: Vec<Rational> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * rational::int(i as i64))
        .collect();
    let g = poly_gcd(p, &deriv);
    if g.len() <= 1 {
        return p.to_vec();
    }
    poly_div(p, &g)
}

const MAX_ROOT_SEARCH: u64 = 1_000_000;

fn small_divisors(x: &BigInt) -> Option<Vec<BigInt>> {
    let x = x.abs();
    let v: u64 = x.clone().try_into().ok()?;
    if v == 0 || v > MAX_ROOT_SEARCH * MAX_ROOT_SEARCH {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v.is_multiple_of(d) {
            out.push(BigInt::from(d));
            if d * d != v {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Rational roots by the rational root theorem; empty when coefficients are
/// too large to enumerate divisors.
fn rational_roots(p: &[Rational]) -> Vec<Rational> {
    let mut roots = Vec::new();
    let mut p = p.to_vec();
    if p.first().is_some_and(Zero::is_zero) {
        roots.push(Rational::zero());
        while p.first().is_some_and(Zero::is_zero) {
            p.remove(0);
        }
    }
    if p.len() <= 1 {
        return roots;
    }
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * &lcm).to_integer()).collect();
    let (Some(ps), Some(qs)) = (
        small_divisors(&ints[0]),
        small_divisors(ints.last().unwrap()),
    ) else {
        return roots;
    };
    for a in &ps {
        for b in &qs {
            for sign in [1, -1] {
                let cand = Rational::new(a * sign, b.clone());
                let val = p
                    .iter()
                    .rev()
                    .fold(Rational::zero(), |acc, c| acc * &cand + c);
                if val.is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots
}

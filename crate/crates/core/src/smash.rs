//! The quasi-Poisson enveloping algebra `Q(A) = A^e # U(A)`.
//!
//! A basis of `Q(A)` is `v_i ⊗ v_j # α` with `α` a PBW monomial; the product
//! is
//!
//! ```text
//! (v_i1 ⊗ v_j1 # α)(v_i2 ⊗ v_j2 # β)
//!     = Σ_{α = α1 ⊔ α2 ⊔ α3} (v_i1 · α1(v_i2)) ⊗ (v_j1 ∘ α2(v_j2)) # (α3 β)
//! ```
//!
//! where `∘` is the opposite product and `α_k(-)` the nested bracket action.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{AElement, Ncpa};
use crate::error::{Error, Result};
use crate::linalg::SparseVector;
use crate::rational::{self, Rational};
use crate::uea::{pbw_count, pbw_monomials, UElement, UMonomial, Uea};
use crate::words;

/// Basis element `v_left ⊗ v_right # u` of `Q(A)`.
///
/// Term order: U-degree, then `u` lexicographically, then `left`, then `right`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMonomial {
    pub left: usize,
    pub right: usize,
    pub u: UMonomial,
}

impl QMonomial {
    pub fn new(left: usize, right: usize, u: UMonomial) -> Self {
        QMonomial { left, right, u }
    }

    pub fn degree(&self) -> usize {
        self.u.degree()
    }
}

impl Ord for QMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.u
            .cmp(&other.u)
            .then(self.left.cmp(&other.left))
            .then(self.right.cmp(&other.right))
    }
}

impl PartialOrd for QMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u: Vec<String> = self.u.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "[{};{};{}]", self.left, self.right, u.join(","))
    }
}

impl Serialize for QMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.left, self.right, &self.u).serialize(s)
    }
}

/// A finite rational combination of [`QMonomial`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QElement {
    terms: BTreeMap<QMonomial, Rational>,
}

impl QElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: QMonomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, Rational::one());
        QElement { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (QMonomial, Rational)>>(terms: I) -> Self {
        let mut out = QElement::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    /// `a ⊗ b # u` expanded in the basis.
    pub fn tensor(a: &SparseVector, b: &SparseVector, u: &UElement) -> Self {
        let mut out = QElement::zero();
        for (p, x) in a.iter() {
            for (q, y) in b.iter() {
                let xy = x * y;
                for (m, z) in u.iter() {
                    out.add_term(QMonomial::new(p, q, m.clone()), &xy * z);
                }
            }
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<QMonomial, Rational> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&QMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &QMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest U-degree of a term; 0 for zero.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(QMonomial::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: QMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &QElement) {
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), c * d);
        }
    }

    pub fn scaled(&self, c: &Rational) -> QElement {
        let mut out = QElement::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn add(&self, other: &QElement) -> QElement {
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), other);
        out
    }

    pub fn sub(&self, other: &QElement) -> QElement {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), other);
        out
    }
}

impl fmt::Display for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{}*{}", rational::format(c), m))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The three canonical maps `A -> Q(A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Embedding {
    /// `i(a) = a ⊗ 1 # 1`, an algebra map.
    I,
    /// `j(a) = 1 ⊗ 1 # a`, a Lie map.
    J,
    /// `k(a) = 1 ⊗ a # 1`, an algebra map from `A^op`.
    K,
}

/// `Q(A)` for a fixed NCPA.
#[derive(Debug)]
pub struct QAlgebra {
    uea: Uea,
}

impl QAlgebra {
    pub fn new(algebra: impl Into<Arc<Ncpa>>) -> Self {
        QAlgebra {
            uea: Uea::new(algebra),
        }
    }

    pub fn with_cap(algebra: impl Into<Arc<Ncpa>>, cap: usize) -> Self {
        QAlgebra {
            uea: Uea::with_cap(algebra, cap),
        }
    }

    pub fn algebra(&self) -> &Ncpa {
        self.uea.algebra()
    }

    pub fn uea(&self) -> &Uea {
        &self.uea
    }

    pub fn dim(&self) -> usize {
        self.algebra().dim()
    }

    pub fn cap(&self) -> usize {
        self.uea.cap()
    }

    /// Checks indices and the degree cap.
    pub fn check_element(&self, x: &QElement) -> Result<()> {
        let n = self.dim();
        for m in x.terms.keys() {
            for index in [m.left, m.right] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, dim: n });
                }
            }
            if let Some(index) = m.u.max_index().filter(|&i| i >= n) {
                return Err(Error::IndexOutOfRange { index, dim: n });
            }
            self.uea.check_degree(m.degree())?;
        }
        Ok(())
    }

    /// `1_A ⊗ 1_{A^op} # 1_U`.
    pub fn identity(&self) -> QElement {
        let unit = self.algebra().unit_coords();
        QElement::tensor(unit, unit, &UElement::one())
    }

    pub fn embed(&self, kind: Embedding, a: &AElement) -> Result<QElement> {
        a.coords.check_len(self.dim())?;
        let unit = self.algebra().unit_coords();
        Ok(match kind {
            Embedding::I => QElement::tensor(&a.coords, unit, &UElement::one()),
            Embedding::K => QElement::tensor(unit, &a.coords, &UElement::one()),
            Embedding::J => QElement::tensor(unit, unit, &UElement::from_a(a)),
        })
    }

    /// Image of the basis vector `v_index` under an embedding.
    pub fn embed_basis(&self, kind: Embedding, index: usize) -> Result<QElement> {
        let n = self.dim();
        if index >= n {
            return Err(Error::IndexOutOfRange { index, dim: n });
        }
        self.embed(kind, &self.algebra().basis(index))
    }

    /// Product of two basis monomials (indices assumed valid).
    pub fn mul_monomials(&self, x: &QMonomial, y: &QMonomial) -> QElement {
        let alg = self.algebra();
        let n = alg.dim();
        let alpha = x.u.indices();
        let r = alpha.len();
        let mut out = QElement::zero();
        let left_mat = alg.left_matrix(x.left);
        let right_mat = alg.right_matrix(x.right);
        let (ei, ej) = (
            SparseVector::unit(n, y.left),
            SparseVector::unit(n, y.right),
        );

        // Group the tripartitions by α3: the α1/α2 split of the complement is a
        // shuffle coproduct acting on v_i2 ⊗ v_j2.
        words::for_each_assignment(r, 2, |take| {
            let mut rest = Vec::new();
            let mut word = Vec::with_capacity(r + y.u.degree());
            for (pos, &t) in take.iter().enumerate() {
                if t == 1 {
                    word.push(alpha[pos]);
                } else {
                    rest.push(alpha[pos]);
                }
            }
            word.extend_from_slice(y.u.indices());
            let u = self.uea.straighten_unchecked(&word);
            if u.is_zero() {
                return;
            }
            words::for_each_assignment(rest.len(), 2, |split| {
                let (mut a1, mut a2) = (Vec::new(), Vec::new());
                for (pos, &s) in split.iter().enumerate() {
                    if s == 0 {
                        a1.push(rest[pos]);
                    } else {
                        a2.push(rest[pos]);
                    }
                }
                let l = self.uea.lie_act_monomial(&UMonomial::from_sorted(a1), &ei);
                if l.is_zero() {
                    return;
                }
                let rt = self.uea.lie_act_monomial(&UMonomial::from_sorted(a2), &ej);
                if rt.is_zero() {
                    return;
                }
                let l = left_mat.apply(&l).expect("square");
                let rt = right_mat.apply(&rt).expect("square");
                out.add_scaled(&Rational::one(), &QElement::tensor(&l, &rt, &u));
            });
        });
        out
    }

    pub fn q_multiply(&self, x: &QElement, y: &QElement) -> Result<QElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        self.uea.check_degree(x.degree() + y.degree())?;
        let mut out = QElement::zero();
        for (mx, cx) in &x.terms {
            for (my, cy) in &y.terms {
                out.add_scaled(&(cx * cy), &self.mul_monomials(mx, my));
            }
        }
        Ok(out)
    }

    /// `f(a ⊗ b # α) = ε(α) ab`.
    pub fn augmentation(&self, x: &QElement) -> Result<AElement> {
        self.check_element(x)?;
        let alg = self.algebra();
        let mut out = SparseVector::zero(alg.dim());
        for (m, c) in &x.terms {
            if m.u.is_one() {
                out.add_scaled(c, alg.mul_basis(m.left, m.right));
            }
        }
        Ok(AElement::new(out))
    }

    /// All basis monomials of U-degree at most `d`, in term order.
    pub fn monomials_up_to(&self, d: usize) -> Vec<QMonomial> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n * pbw_count(n, d));
        for u in pbw_monomials(n, d) {
            for i in 0..n {
                for j in 0..n {
                    out.push(QMonomial::new(i, j, u.clone()));
                }
            }
        }
        out
    }

    /// `dim Q(A)_{<=d} = n^2 C(n+d, d)`.
    pub fn truncated_dim(&self, d: usize) -> usize {
        let n = self.dim();
        n * n * pbw_count(n, d)
    }

    /// Verifies the defining relations of `Q(A)` in terms of `i`, `j`, `k` on
    /// all basis pairs.
    pub fn check_generator_relations(&self) -> Result<RelationReport> {
        use Embedding::{I, J, K};
        let alg = self.algebra();
        let n = alg.dim();
        let mut report = RelationReport::default();
        let mul = |x: &QElement, y: &QElement| self.q_multiply(x, y);
        let basis: Vec<[QElement; 3]> = (0..n)
            .map(|a| {
                Ok([
                    self.embed_basis(I, a)?,
                    self.embed_basis(J, a)?,
                    self.embed_basis(K, a)?,
                ])
            })
            .collect::<Result<_>>()?;
        let (i, j, k) = (0, 1, 2);

        let one = self.identity();
        let unit = alg.unit();
        report.record(
            RelationFamily::Unit,
            None,
            self.embed(I, &unit)?,
            one.clone(),
        );
        report.record(RelationFamily::Unit, None, self.embed(K, &unit)?, one);

        for a in 0..n {
            for b in 0..n {
                let ab = AElement::new(alg.mul_basis(a, b).clone());
                let ba = AElement::new(alg.mul_basis(b, a).clone());
                let br = AElement::new(alg.bracket_basis(a, b).clone());
                let pair = Some((a, b));
                let (xa, xb) = (&basis[a], &basis[b]);

                report.record(
                    RelationFamily::IMultiplicative,
                    pair,
                    mul(&xa[i], &xb[i])?,
                    self.embed(I, &ab)?,
                );
                report.record(
                    RelationFamily::KMultiplicative,
                    pair,
                    mul(&xa[k], &xb[k])?,
                    self.embed(K, &ba)?,
                );
                report.record(
                    RelationFamily::IKCommute,
                    pair,
                    mul(&xa[i], &xb[k])?,
                    mul(&xb[k], &xa[i])?,
                );
                report.record(
                    RelationFamily::JBracket,
                    pair,
                    mul(&xa[j], &xb[j])?.sub(&mul(&xb[j], &xa[j])?),
                    self.embed(J, &br)?,
                );
                report.record(
                    RelationFamily::JI,
                    pair,
                    mul(&xa[j], &xb[i])?,
                    mul(&xb[i], &xa[j])?.add(&self.embed(I, &br)?),
                );
                report.record(
                    RelationFamily::JK,
                    pair,
                    mul(&xa[j], &xb[k])?,
                    mul(&xb[k], &xa[j])?.add(&self.embed(K, &br)?),
                );
            }
        }
        Ok(report)
    }
}

/// The relation families presenting `Q(A)` by `i(A)`, `j(A)`, `k(A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum RelationFamily {
    /// `i(a)i(b) = i(ab)`
    IMultiplicative,
    /// `k(a)k(b) = k(a∘b) = k(ba)`
    KMultiplicative,
    /// `i(a)k(b) = k(b)i(a)`
    IKCommute,
    /// `j(a)j(b) - j(b)j(a) = j({a,b})`
    JBracket,
    /// `j(a)i(b) = i(b)j(a) + i({a,b})`
    JI,
    /// `j(a)k(b) = k(b)j(a) + k({a,b})`
    JK,
    /// `i(1_A) = k(1_A) = 1_Q`
    Unit,
}

impl RelationFamily {
    pub const ALL: [RelationFamily; 7] = [
        RelationFamily::IMultiplicative,
        RelationFamily::KMultiplicative,
        RelationFamily::IKCommute,
        RelationFamily::JBracket,
        RelationFamily::JI,
        RelationFamily::JK,
        RelationFamily::Unit,
    ];

    pub fn describe(self) -> &'static str {
        match self {
            RelationFamily::IMultiplicative => "i(a)i(b) = i(ab)",
            RelationFamily::KMultiplicative => "k(a)k(b) = k(ba)",
            RelationFamily::IKCommute => "i(a)k(b) = k(b)i(a)",
            RelationFamily::JBracket => "j(a)j(b) - j(b)j(a) = j({a,b})",
            RelationFamily::JI => "j(a)i(b) = i(b)j(a) + i({a,b})",
            RelationFamily::JK => "j(a)k(b) = k(b)j(a) + k({a,b})",
            RelationFamily::Unit => "i(1) = k(1) = 1",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationViolation {
    pub family: RelationFamily,
    pub pair: Option<(usize, usize)>,
    pub lhs: QElement,
    pub rhs: QElement,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationReport {
    /// Number of checked instances per family.
    pub checked: BTreeMap<RelationFamily, usize>,
    pub violations: Vec<RelationViolation>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(
        &mut self,
        family: RelationFamily,
        pair: Option<(usize, usize)>,
        lhs: QElement,
        rhs: QElement,
    ) {
        *self.checked.entry(family).or_insert(0) += 1;
        if lhs != rhs {
            self.violations.push(RelationViolation {
                family,
                pair,
                lhs,
                rhs,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qm(i: usize, j: usize, u: &[usize]) -> QMonomial {
        QMonomial::new(i, j, UMonomial::new(u.to_vec()).unwrap())
    }

    fn mono(i: usize, j: usize, u: &[usize]) -> QElement {
        QElement::monomial(qm(i, j, u))
    }

    #[test]
    fn term_order() {
        let mut ms = vec![qm(1, 0, &[0]), qm(0, 1, &[]), qm(0, 0, &[0]), qm(1, 1, &[])];
        ms.sort();
        assert_eq!(
            ms,
            vec![qm(0, 1, &[]), qm(1, 1, &[]), qm(0, 0, &[0]), qm(1, 0, &[0])]
        );
    }

    #[test]
    fn identity_is_two_sided() {
        for alg in [catalog::kxk(), catalog::m2_standard(), catalog::trunc2(2)] {
            let q = QAlgebra::with_cap(alg, 8);
            let one = q.identity();
            for m in q.monomials_up_to(1) {
                let x = QElement::monomial(m);
                assert_eq!(q.q_multiply(&one, &x).unwrap(), x);
                assert_eq!(q.q_multiply(&x, &one).unwrap(), x);
            }
        }
    }

    #[test]
    fn kxk_product_example() {
        let q = QAlgebra::with_cap(catalog::kxk(), 8);
        let got = q.q_multiply(&mono(0, 0, &[1]), &mono(0, 0, &[0])).unwrap();
        assert_eq!(got, mono(0, 0, &[0, 1]));
    }

    #[test]
    fn m2_product_example() {
        // (1 ⊗ 1 # E12)(E21 ⊗ 1 # 1) = (E11 - E22) ⊗ 1 # 1 + E21 ⊗ 1 # E12
        let q = QAlgebra::with_cap(catalog::m2_standard(), 8);
        let alg = q.algebra().clone();
        let x = q.embed_basis(Embedding::J, 1).unwrap();
        let y = q.embed_basis(Embedding::I, 2).unwrap();
        let got = q.q_multiply(&x, &y).unwrap();
        let unit = alg.unit_coords().clone();
        let diff = SparseVector::from_pairs(4, [(0, int(1)), (3, int(-1))]).unwrap();
        let expected = QElement::tensor(&diff, &unit, &UElement::one()).add(&QElement::tensor(
            &SparseVector::unit(4, 2),
            &unit,
            &UElement::monomial(UMonomial::new(vec![1]).unwrap()),
        ));
        assert_eq!(got, expected);
    }

    fn check_assoc(q: &QAlgebra, a: &QMonomial, b: &QMonomial, c: &QMonomial) {
        let (a, b, c) = (
            QElement::monomial(a.clone()),
            QElement::monomial(b.clone()),
            QElement::monomial(c.clone()),
        );
        let l = q.q_multiply(&q.q_multiply(&a, &b).unwrap(), &c).unwrap();
        let r = q.q_multiply(&a, &q.q_multiply(&b, &c).unwrap()).unwrap();
        assert_eq!(l, r, "({a})({b})({c})");
    }

    #[test]
    fn associative_upper_triangular_exhaustive_degree_2() {
        let q = QAlgebra::with_cap(catalog::upper_triangular_standard(), 8);
        let ms = q.monomials_up_to(1);
        for a in &ms {
            for b in &ms {
                for c in &ms {
                    if a.degree() + b.degree() + c.degree() <= 2 {
                        check_assoc(&q, a, b, c);
                    }
                }
            }
        }
    }

    #[test]
    fn associative_m2_random() {
        let q = QAlgebra::with_cap(catalog::m2_standard(), 8);
        let ms = q.monomials_up_to(1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let a = &ms[rng.gen_range(0..ms.len())];
            let b = &ms[rng.gen_range(0..ms.len())];
            let c = &ms[rng.gen_range(0..ms.len())];
            check_assoc(&q, a, b, c);
        }
    }

    #[test]
    fn filtration_and_bilinearity() {
        let q = QAlgebra::with_cap(catalog::m2_standard(), 8);
        let ms = q.monomials_up_to(1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let a = ms[rng.gen_range(0..ms.len())].clone();
            let b = ms[rng.gen_range(0..ms.len())].clone();
            let c = ms[rng.gen_range(0..ms.len())].clone();
            let p = q.mul_monomials(&a, &b);
            assert!(p.degree() <= a.degree() + b.degree());
            let x = QElement::from_terms([(a.clone(), int(2)), (c.clone(), int(-3))]);
            let lhs = q.q_multiply(&x, &QElement::monomial(b.clone())).unwrap();
            let rhs = p
                .scaled(&int(2))
                .add(&q.mul_monomials(&c, &b).scaled(&int(-3)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn zero_bracket_is_componentwise() {
        let q = QAlgebra::with_cap(catalog::trunc2(2), 8);
        let alg = q.algebra().clone();
        let ms = q.monomials_up_to(2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = &ms[rng.gen_range(0..ms.len())];
            let b = &ms[rng.gen_range(0..ms.len())];
            let mut u: Vec<usize> = a.u.indices().to_vec();
            u.extend_from_slice(b.u.indices());
            let expected = QElement::tensor(
                alg.mul_basis(a.left, b.left),
                alg.mul_basis(b.right, a.right),
                &UElement::monomial(UMonomial::sorted(u)),
            );
            assert_eq!(q.mul_monomials(a, b), expected);
        }
    }

    #[test]
    fn embeddings_and_augmentation() {
        let q = QAlgebra::with_cap(catalog::m2_standard(), 8);
        let alg = q.algebra().clone();
        assert_eq!(q.embed(Embedding::I, &alg.unit()).unwrap(), q.identity());
        assert_eq!(q.augmentation(&q.identity()).unwrap(), alg.unit());
        for a in 0..4 {
            let va = alg.basis(a);
            assert_eq!(
                q.augmentation(&q.embed(Embedding::I, &va).unwrap())
                    .unwrap(),
                va
            );
            assert_eq!(
                q.augmentation(&q.embed(Embedding::K, &va).unwrap())
                    .unwrap(),
                va
            );
            assert!(q
                .augmentation(&q.embed(Embedding::J, &va).unwrap())
                .unwrap()
                .is_zero());
        }
        assert!(q.embed_basis(Embedding::I, 9).is_err());
        assert!(q.q_multiply(&mono(5, 0, &[]), &mono(0, 0, &[])).is_err());
    }

    #[test]
    fn generator_relations_hold() {
        for alg in [
            catalog::kxk(),
            catalog::m2_standard(),
            catalog::trunc2(2),
            catalog::upper_triangular_standard(),
        ] {
            let q = QAlgebra::with_cap(alg, 8);
            let report = q.check_generator_relations().unwrap();
            assert!(report.passed(), "{:?}", report.violations.first());
            assert_eq!(report.checked.len(), RelationFamily::ALL.len());
        }
    }

    #[test]
    fn degree_cap_enforced() {
        let q = QAlgebra::with_cap(catalog::kxk(), 2);
        let x = mono(0, 0, &[0, 1]);
        assert!(matches!(
            q.q_multiply(&x, &mono(0, 0, &[0])),
            Err(Error::DegreeCapExceeded { .. })
        ));
        assert_eq!(q.truncated_dim(2), 4 * 6);
        assert_eq!(q.monomials_up_to(2).len(), 24);
    }
}

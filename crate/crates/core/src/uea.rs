//! The universal enveloping algebra `U(A)` of the Lie algebra `(A, {-,-})`.
//!
//! Elements are kept in PBW normal form: combinations of weakly increasing
//! monomials in the input basis order. Arbitrary words are brought to normal
//! form by rewriting the leftmost descent `v_b v_a -> v_a v_b + {v_b, v_a}`,
//! with results memoized per word.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{AElement, Ncpa};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVector};
use crate::rational::{self, Rational};
use crate::words::{self, Word};

/// Default cap on the degree of any `U(A)` computation.
pub const DEFAULT_U_DEGREE_CAP: usize = 8;

/// Environment variable overriding [`DEFAULT_U_DEGREE_CAP`].
pub const DEGREE_CAP_ENV: &str = "POISSON_ENV_MAX_DEGREE";

/// The cap from `POISSON_ENV_MAX_DEGREE`, falling back to the default when the
/// variable is unset or not a number.
pub fn degree_cap_from_env() -> usize {
    std::env::var(DEGREE_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_U_DEGREE_CAP)
}

/// A PBW monomial `v_{i(1)} ... v_{i(r)}` with `i(1) <= ... <= i(r)`.
///
/// Ordered by degree first, then lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UMonomial(Vec<usize>);

impl UMonomial {
    pub fn one() -> Self {
        UMonomial(Vec::new())
    }

    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument(format!(
                "PBW monomial indices must be weakly increasing: {indices:?}"
            )));
        }
        Ok(UMonomial(indices))
    }

    /// Sorts the indices. Only meaningful where the letters commute, e.g. for
    /// subwords or when building monomials by hand.
    pub fn sorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        UMonomial(indices)
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] <= w[1]));
        UMonomial(indices)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word(self.0.clone())
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().copied()
    }
}

impl Ord for UMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for UMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for UMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for UMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// A finite rational combination of PBW monomials. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UElement {
    terms: BTreeMap<UMonomial, Rational>,
}

impl UElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(UMonomial::one())
    }

    pub fn monomial(m: UMonomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, Rational::one());
        UElement { terms }
    }

    /// The degree-one element `sum_i a_i v_i`.
    pub fn from_a(a: &AElement) -> Self {
        let mut out = UElement::zero();
        for (i, c) in a.coords.iter() {
            out.add_term(UMonomial(vec![i]), c.clone());
        }
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (UMonomial, Rational)>>(terms: I) -> Self {
        let mut out = UElement::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<UMonomial, Rational> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&UMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &UMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Highest degree of a term; 0 for the zero element.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(UMonomial::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: UMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &UElement) {
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), c * d);
        }
    }

    pub fn scaled(&self, c: &Rational) -> UElement {
        let mut out = UElement::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn add(&self, other: &UElement) -> UElement {
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), other);
        out
    }

    pub fn sub(&self, other: &UElement) -> UElement {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), other);
        out
    }

    /// Counit: the coefficient of the empty monomial.
    pub fn counit(&self) -> Rational {
        self.coeff(&UMonomial::one())
    }
}

impl fmt::Display for UElement {
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

/// Formal sum of `x1 ⊗ x2` over PBW monomial pairs.
pub type UCoproduct = BTreeMap<(UMonomial, UMonomial), Rational>;

/// All PBW monomials in `n` letters of degree at most `max_degree`, in term
/// order (degree, then lexicographic).
pub fn pbw_monomials(n: usize, max_degree: usize) -> Vec<UMonomial> {
    let mut out = vec![UMonomial::one()];
    let mut layer = vec![Vec::<usize>::new()];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for m in &layer {
            let start = m.last().copied().unwrap_or(0);
            for i in start..n {
                let mut w = m.clone();
                w.push(i);
                next.push(w);
            }
        }
        out.extend(next.iter().cloned().map(UMonomial::from_sorted));
        layer = next;
    }
    out
}

/// Number of PBW monomials of degree at most `d` in `n` letters, `C(n+d, d)`.
pub fn pbw_count(n: usize, d: usize) -> usize {
    (1..=d).fold(1usize, |acc, k| acc * (n + k) / k)
}

/// `U(A)` for a fixed NCPA, with a shared memo of straightened words.
pub struct Uea {
    algebra: Arc<Ncpa>,
    cap: usize,
    memo: RwLock<HashMap<Vec<usize>, UElement>>,
}

impl fmt::Debug for Uea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Uea")
            .field("algebra", &self.algebra.name())
            .field("cap", &self.cap)
            .finish()
    }
}

impl Uea {
    /// Uses the degree cap from the environment.
    pub fn new(algebra: impl Into<Arc<Ncpa>>) -> Self {
        Self::with_cap(algebra, degree_cap_from_env())
    }

    pub fn with_cap(algebra: impl Into<Arc<Ncpa>>, cap: usize) -> Self {
        Uea {
            algebra: algebra.into(),
            cap,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &Ncpa {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<Ncpa> {
        &self.algebra
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.cap {
            return Err(Error::DegreeCapExceeded {
                degree,
                cap: self.cap,
            });
        }
        Ok(())
    }

    fn check_letters(&self, letters: &[usize]) -> Result<()> {
        let n = self.algebra.dim();
        match letters.iter().find(|&&i| i >= n) {
            Some(&index) => Err(Error::IndexOutOfRange { index, dim: n }),
            None => Ok(()),
        }
    }

    /// Checks that every monomial uses valid letters and respects the cap.
    pub fn check_element(&self, x: &UElement) -> Result<()> {
        for m in x.terms.keys() {
            self.check_letters(&m.0)?;
            self.check_degree(m.degree())?;
        }
        Ok(())
    }

    fn check_a(&self, a: &AElement) -> Result<()> {
        a.coords.check_len(self.algebra.dim())
    }

    /// PBW normal form of the image of `w` in `U(A)`.
    pub fn straighten(&self, w: &Word) -> Result<UElement> {
        self.check_letters(&w.0)?;
        self.check_degree(w.degree())?;
        Ok(self.straighten_unchecked(&w.0))
    }

    pub(crate) fn straighten_unchecked(&self, w: &[usize]) -> UElement {
        let Some(k) = w.windows(2).position(|p| p[0] > p[1]) else {
            return UElement::monomial(UMonomial(w.to_vec()));
        };
        if let Some(hit) = self.memo.read().expect("memo lock").get(w) {
            return hit.clone();
        }
        let mut swapped = w.to_vec();
        swapped.swap(k, k + 1);
        let mut out = self.straighten_unchecked(&swapped);
        for (c, coef) in self.algebra.bracket_basis(w[k], w[k + 1]).iter() {
            let mut shorter = Vec::with_capacity(w.len() - 1);
            shorter.extend_from_slice(&w[..k]);
            shorter.push(c);
            shorter.extend_from_slice(&w[k + 2..]);
            out.add_scaled(coef, &self.straighten_unchecked(&shorter));
        }
        self.memo
            .write()
            .expect("memo lock")
            .insert(w.to_vec(), out.clone());
        out
    }

    /// Straightened product of two monomials.
    pub(crate) fn mul_monomials(&self, x: &UMonomial, y: &UMonomial) -> UElement {
        let mut w = Vec::with_capacity(x.degree() + y.degree());
        w.extend_from_slice(&x.0);
        w.extend_from_slice(&y.0);
        self.straighten_unchecked(&w)
    }

    pub fn u_multiply(&self, x: &UElement, y: &UElement) -> Result<UElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        self.check_degree(x.degree() + y.degree())?;
        let mut out = UElement::zero();
        for (mx, cx) in &x.terms {
            for (my, cy) in &y.terms {
                out.add_scaled(&(cx * cy), &self.mul_monomials(mx, my));
            }
        }
        Ok(out)
    }

    /// Shuffle coproduct. Blocks of a sorted word are sorted, so no
    /// straightening is needed.
    pub fn u_coproduct(&self, x: &UElement) -> Result<UCoproduct> {
        self.check_element(x)?;
        let mut out = UCoproduct::new();
        for (m, c) in &x.terms {
            for ((l, r), d) in words::shuffle_coproduct_capped(&m.to_word(), self.cap)? {
                let key = (UMonomial::from_sorted(l.0), UMonomial::from_sorted(r.0));
                let entry = out.entry(key).or_insert_with(Rational::zero);
                *entry += c * d;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Nested bracket `{v_{i(1)}, {v_{i(2)}, ... {v_{i(r)}, v}...}}`.
    pub(crate) fn lie_act_monomial(&self, m: &UMonomial, v: &SparseVector) -> SparseVector {
        let mut out = v.clone();
        for &i in m.0.iter().rev() {
            out = self
                .algebra
                .ad_matrix(i)
                .apply(&out)
                .expect("dimension checked");
        }
        out
    }

    /// Matrix of `a -> m(a)` on `A`.
    pub fn lie_matrix(&self, m: &UMonomial) -> Matrix {
        let n = self.algebra.dim();
        m.0.iter().fold(Matrix::identity(n), |acc, &i| {
            acc.mul(self.algebra.ad_matrix(i))
        })
    }

    pub fn lie_act(&self, x: &UElement, a: &AElement) -> Result<AElement> {
        self.check_element(x)?;
        self.check_a(a)?;
        let mut out = SparseVector::zero(self.algebra.dim());
        for (m, c) in &x.terms {
            out.add_scaled(c, &self.lie_act_monomial(m, &a.coords));
        }
        Ok(AElement::new(out))
    }

    /// Action on `A ⊗ A` via the coproduct: `x(a ⊗ b) = sum x1(a) ⊗ x2(b)`.
    /// Tensor coordinates are indexed `p * n + q`.
    pub fn act_tensor(&self, x: &UElement, a: &AElement, b: &AElement) -> Result<SparseVector> {
        self.check_a(a)?;
        self.check_a(b)?;
        let n = self.algebra.dim();
        let mut out = SparseVector::zero(n * n);
        for ((l, r), c) in self.u_coproduct(x)? {
            let la = self.lie_act_monomial(&l, &a.coords);
            let rb = self.lie_act_monomial(&r, &b.coords);
            out.add_scaled(&c, &outer(&la, &rb));
        }
        Ok(out)
    }

    /// Checks `x(a b) = sum x1(a) x2(b)` for every PBW monomial `x` of degree
    /// at most `degree` and all basis pairs, on `A`, `A^op` and `A^e`, plus
    /// `x(1) = ε(x) 1` on `A`.
    pub fn verify_module_algebra(&self, degree: usize) -> Result<ModuleAlgebraReport> {
        self.check_degree(degree)?;
        let alg = &*self.algebra;
        let n = alg.dim();
        let monomials = pbw_monomials(n, degree);

        // lie[m][k] = m(v_k); every block of a sorted monomial is itself in `monomials`.
        let mut lie: HashMap<UMonomial, Vec<SparseVector>> = HashMap::new();
        for m in &monomials {
            let images = match m.0.split_first() {
                None => (0..n).map(|k| SparseVector::unit(n, k)).collect(),
                Some((&first, rest)) => {
                    let inner = &lie[&UMonomial(rest.to_vec())];
                    inner
                        .iter()
                        .map(|v| alg.ad_matrix(first).apply(v).expect("square"))
                        .collect()
                }
            };
            lie.insert(m.clone(), images);
        }
        let act = |m: &UMonomial, v: &SparseVector| -> SparseVector {
            let mut out = SparseVector::zero(n);
            for (k, c) in v.iter() {
                out.add_scaled(c, &lie[m][k]);
            }
            out
        };

        let mut report = ModuleAlgebraReport {
            degree,
            checked: 0,
            failures: Vec::new(),
        };
        let mut tensor_cache: HashMap<(UMonomial, usize, usize), SparseVector> = HashMap::new();

        for m in &monomials {
            let delta = self.u_coproduct(&UElement::monomial(m.clone()))?;

            let lhs = act(m, alg.unit_coords());
            let rhs = if m.is_one() {
                alg.unit_coords().clone()
            } else {
                SparseVector::zero(n)
            };
            report.record(ModuleAlgebraTarget::Unit, m, vec![], lhs, rhs);

            for a in 0..n {
                for b in 0..n {
                    let lhs = act(m, alg.mul_basis(a, b));
                    let mut rhs = SparseVector::zero(n);
                    for ((l, r), c) in &delta {
                        rhs.add_scaled(c, &alg.mul_coords(&lie[l][a], &lie[r][b]));
                    }
                    report.record(ModuleAlgebraTarget::A, m, vec![a, b], lhs, rhs);

                    // a ∘ b = b a
                    let lhs = act(m, alg.mul_basis(b, a));
                    let mut rhs = SparseVector::zero(n);
                    for ((l, r), c) in &delta {
                        rhs.add_scaled(c, &alg.mul_coords(&lie[r][b], &lie[l][a]));
                    }
                    report.record(ModuleAlgebraTarget::Aop, m, vec![a, b], lhs, rhs);
                }
            }

            let mut tensor_basis = |m: &UMonomial, p: usize, q: usize| -> SparseVector {
                tensor_cache
                    .entry((m.clone(), p, q))
                    .or_insert_with(|| {
                        let mut out = SparseVector::zero(n * n);
                        let delta = self
                            .u_coproduct(&UElement::monomial(m.clone()))
                            .expect("within cap");
                        for ((l, r), c) in &delta {
                            out.add_scaled(c, &outer(&lie[l][p], &lie[r][q]));
                        }
                        out
                    })
                    .clone()
            };
            for a1 in 0..n {
                for b1 in 0..n {
                    for a2 in 0..n {
                        for b2 in 0..n {
                            // (a1 ⊗ b1)(a2 ⊗ b2) = a1 a2 ⊗ b2 b1
                            let prod = outer(alg.mul_basis(a1, a2), alg.mul_basis(b2, b1));
                            let mut lhs = SparseVector::zero(n * n);
                            for (pq, c) in prod.iter() {
                                lhs.add_scaled(c, &tensor_basis(m, pq / n, pq % n));
                            }
                            let mut rhs = SparseVector::zero(n * n);
                            for ((l, r), c) in &delta {
                                let s = tensor_basis(l, a1, b1);
                                let t = tensor_basis(r, a2, b2);
                                rhs.add_scaled(c, &enveloping_mul(alg, &s, &t));
                            }
                            report.record(
                                ModuleAlgebraTarget::Ae,
                                m,
                                vec![a1, b1, a2, b2],
                                lhs,
                                rhs,
                            );
                        }
                    }
                }
            }
        }
        Ok(report)
    }
}

/// `u ⊗ v` in coordinates `p * n + q`.
pub(crate) fn outer(u: &SparseVector, v: &SparseVector) -> SparseVector {
    let n = v.len();
    let mut out = SparseVector::zero(u.len() * n);
    for (p, a) in u.iter() {
        for (q, b) in v.iter() {
            out.add_at(p * n + q, &(a * b));
        }
    }
    out
}

/// Product in `A^e = A ⊗ A^op`: `(a ⊗ b)(c ⊗ d) = ac ⊗ db`.
pub(crate) fn enveloping_mul(alg: &Ncpa, s: &SparseVector, t: &SparseVector) -> SparseVector {
    let n = alg.dim();
    let mut out = SparseVector::zero(n * n);
    for (pq, x) in s.iter() {
        let (p, q) = (pq / n, pq % n);
        for (rs, y) in t.iter() {
            let (r, s2) = (rs / n, rs % n);
            let left = alg.mul_basis(p, r);
            let right = alg.mul_basis(s2, q);
            if left.is_zero() || right.is_zero() {
                continue;
            }
            out.add_scaled(&(x * y), &outer(left, right));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModuleAlgebraTarget {
    /// `x(1_A) = ε(x) 1_A`
    Unit,
    A,
    Aop,
    Ae,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleAlgebraFailure {
    pub target: ModuleAlgebraTarget,
    pub monomial: UMonomial,
    /// Basis indices of the checked pair: `[a, b]`, or `[a1, b1, a2, b2]` on `A^e`.
    pub indices: Vec<usize>,
    pub lhs: SparseVector,
    pub rhs: SparseVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleAlgebraReport {
    pub degree: usize,
    pub checked: usize,
    pub failures: Vec<ModuleAlgebraFailure>,
}

impl ModuleAlgebraReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(
        &mut self,
        target: ModuleAlgebraTarget,
        monomial: &UMonomial,
        indices: Vec<usize>,
        lhs: SparseVector,
        rhs: SparseVector,
    ) {
        self.checked += 1;
        if lhs != rhs {
            self.failures.push(ModuleAlgebraFailure {
                target,
                monomial: monomial.clone(),
                indices,
                lhs,
                rhs,
            });
        }
    }
}

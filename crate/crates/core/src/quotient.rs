//! Degree-truncated probes of quotients of `Q(A)` by two-sided ideals: the
//! Poisson enveloping algebra `P(A) = Q(A)/J`, the variant `P'(A)` (which
//! adds the `OH` generators), and `Q(A)/(J + I)` for standard NCPAs.
//!
//! `Q(A)` is infinite-dimensional, so the ideal is only ever seen through
//!
//! ```text
//! W_D = span{ m1 · g · m2 : g a generator, deg m1 + deg g + deg m2 <= D }
//! ```
//!
//! cut down to `Q(A)_{<=d}` (U-degree at most `d`). Every monomial of degree
//! `r` is `i(a) k(b) j(v_1) ... j(v_r)`, so `W_D` is computed as an
//! operator closure: `W_b` is the closure of `W_{b-1} + j(A) W_{b-1} +
//! W_{b-1} j(A)` and the degree-`b` generators under left and right
//! multiplication by `i(A)` and `k(A)` (which do not raise the degree).
//!
//! Coordinates of `Q(A)_{<=D}` list the basis monomials in term order
//! *reversed*, so the leading entry of an echelon row is its highest term.
//! Rows whose pivot lies among the degree-`<= d` monomials then span exactly
//! `W_D ∩ Q(A)_{<=d}`, and the non-pivot monomials are the greedy coset
//! representatives.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::AElement;
use crate::error::{Error, Result};
use crate::linalg::{extend_closure, LinearOp, SparseVector, Subspace};
use crate::rational;
use crate::smash::{Embedding, QAlgebra, QElement, QMonomial};
use crate::uea::UElement;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IdealLabel {
    /// Generators of `P(A) = Q(A)/J`.
    J,
    /// `j(a) - i(a) + k(a)`, for standard NCPAs.
    I,
    /// `i(a) - k(a)`, the extra relations of `P'(A)`.
    OH,
    Custom(String),
}

impl fmt::Display for IdealLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealLabel::J => f.write_str("J"),
            IdealLabel::I => f.write_str("I"),
            IdealLabel::OH => f.write_str("OH"),
            IdealLabel::Custom(s) => f.write_str(s),
        }
    }
}

impl FromStr for IdealLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "J" => Ok(IdealLabel::J),
            "I" => Ok(IdealLabel::I),
            "OH" => Ok(IdealLabel::OH),
            other => Err(Error::InvalidArgument(format!(
                "unknown ideal {other:?}; expected J, I or OH"
            ))),
        }
    }
}

/// Generators of a two-sided ideal of `Q(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealGens {
    pub label: IdealLabel,
    pub generators: Vec<QElement>,
}

impl IdealGens {
    /// Drops zero generators.
    pub fn new(label: IdealLabel, generators: Vec<QElement>) -> Self {
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        IdealGens { label, generators }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.generators
            .iter()
            .map(QElement::degree)
            .max()
            .unwrap_or(0)
    }

    /// Generators of the ideal named by a label.
    pub fn for_label(q: &QAlgebra, label: &IdealLabel) -> Result<IdealGens> {
        match label {
            IdealLabel::J => Ok(poisson_ideal_j(q)),
            IdealLabel::I => Ok(standard_ideal_i(q)),
            IdealLabel::OH => Ok(oh_ideal_gens(q)),
            IdealLabel::Custom(name) => Err(Error::InvalidArgument(format!(
                "custom ideal {name:?} has no built-in generators"
            ))),
        }
    }

    /// Sum of ideals written like `J+I` or `J+OH`.
    pub fn parse_sum(q: &QAlgebra, spec: &str) -> Result<IdealGens> {
        let labels: Vec<IdealLabel> = spec.split('+').map(str::parse).collect::<Result<_>>()?;
        let parts = labels
            .iter()
            .map(|l| IdealGens::for_label(q, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(IdealGens::sum(parts))
    }

    /// The ideal generated by the union of the generator sets.
    pub fn sum(parts: Vec<IdealGens>) -> IdealGens {
        if parts.len() == 1 {
            return parts.into_iter().next().expect("one part");
        }
        let name = parts
            .iter()
            .map(|p| p.label.to_string())
            .collect::<Vec<_>>()
            .join("+");
        let generators = parts.into_iter().flat_map(|p| p.generators).collect();
        IdealGens::new(IdealLabel::Custom(name), generators)
    }
}

/// `1 ⊗ 1 # (v_p v_q) - v_p ⊗ 1 # v_q - 1 ⊗ v_q # v_p`.
pub fn j_generator(q: &QAlgebra, p: usize, r: usize) -> QElement {
    let alg = q.algebra();
    let n = alg.dim();
    let unit = alg.unit_coords();
    let minus = rational::int(-1);
    let prod = AElement::new(alg.mul_basis(p, r).clone());
    let mut g = QElement::tensor(unit, unit, &UElement::from_a(&prod));
    g.add_scaled(
        &minus,
        &QElement::tensor(
            &SparseVector::unit(n, p),
            unit,
            &UElement::from_a(&alg.basis(r)),
        ),
    );
    g.add_scaled(
        &minus,
        &QElement::tensor(
            unit,
            &SparseVector::unit(n, r),
            &UElement::from_a(&alg.basis(p)),
        ),
    );
    g
}

/// Generators of `J`, one per basis pair `(p, q)` in row-major order.
pub fn poisson_ideal_j(q: &QAlgebra) -> IdealGens {
    let n = q.dim();
    let gens = (0..n * n).map(|k| j_generator(q, k / n, k % n)).collect();
    IdealGens::new(IdealLabel::J, gens)
}

/// `j(a) - i(a) + k(a)` for every basis vector.
pub fn standard_ideal_i(q: &QAlgebra) -> IdealGens {
    let gens = (0..q.dim())
        .map(|a| {
            let e = |kind| q.embed_basis(kind, a).expect("basis index");
            e(Embedding::J).sub(&e(Embedding::I)).add(&e(Embedding::K))
        })
        .collect();
    IdealGens::new(IdealLabel::I, gens)
}

/// `(a ⊗ 1 - 1 ⊗ a) # 1` for every basis vector.
pub fn oh_ideal_gens(q: &QAlgebra) -> IdealGens {
    let gens = (0..q.dim())
        .map(|a| {
            let e = |kind| q.embed_basis(kind, a).expect("basis index");
            e(Embedding::I).sub(&e(Embedding::K))
        })
        .collect();
    IdealGens::new(IdealLabel::OH, gens)
}

/// Coordinates on `Q(A)_{<=D}`: position in reversed term order.
#[derive(Clone, Debug)]
pub struct TruncatedCoords {
    degree: usize,
    monomials: Vec<QMonomial>,
    index: HashMap<QMonomial, usize>,
}

impl TruncatedCoords {
    pub fn new(q: &QAlgebra, degree: usize) -> Self {
        let monomials = q.monomials_up_to(degree);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(pos, m)| (m.clone(), pos))
            .collect();
        TruncatedCoords {
            degree,
            monomials,
            index,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Monomials in term order.
    pub fn monomials(&self) -> &[QMonomial] {
        &self.monomials
    }

    pub fn coordinate(&self, m: &QMonomial) -> Option<usize> {
        self.index.get(m).map(|pos| self.len() - 1 - pos)
    }

    pub fn monomial_at(&self, coordinate: usize) -> &QMonomial {
        &self.monomials[self.len() - 1 - coordinate]
    }

    pub fn to_vector(&self, x: &QElement) -> Result<SparseVector> {
        let mut v = SparseVector::zero(self.len());
        for (m, c) in x.iter() {
            let idx = self.coordinate(m).ok_or(Error::DegreeCapExceeded {
                degree: m.degree(),
                cap: self.degree,
            })?;
            v.set(idx, c.clone());
        }
        Ok(v)
    }

    pub fn to_element(&self, v: &SparseVector) -> QElement {
        QElement::from_terms(
            v.iter()
                .map(|(i, c)| (self.monomial_at(i).clone(), c.clone())),
        )
    }
}

/// Multiplication by a fixed element on one side, with products of basis
/// monomials cached per coordinate.
struct MulOp<'q> {
    q: &'q QAlgebra,
    coords: &'q TruncatedCoords,
    factor: QElement,
    on_left: bool,
    cache: RefCell<HashMap<usize, SparseVector>>,
}

impl<'q> MulOp<'q> {
    fn new(q: &'q QAlgebra, coords: &'q TruncatedCoords, factor: QElement, on_left: bool) -> Self {
        MulOp {
            q,
            coords,
            factor,
            on_left,
            cache: RefCell::new(HashMap::new()),
        }
    }

    fn image_of(&self, coordinate: usize) -> Result<SparseVector> {
        if let Some(v) = self.cache.borrow().get(&coordinate) {
            return Ok(v.clone());
        }
        let m = QElement::monomial(self.coords.monomial_at(coordinate).clone());
        let prod = if self.on_left {
            self.q.q_multiply(&self.factor, &m)?
        } else {
            self.q.q_multiply(&m, &self.factor)?
        };
        let v = self.coords.to_vector(&prod)?;
        self.cache.borrow_mut().insert(coordinate, v.clone());
        Ok(v)
    }

    fn apply(&self, x: &SparseVector) -> Result<SparseVector> {
        let mut out = SparseVector::zero(self.coords.len());
        for (i, c) in x.iter() {
            out.add_scaled(c, &self.image_of(i)?);
        }
        Ok(out)
    }
}

/// The chain `W_0 ⊆ W_1 ⊆ ... ⊆ W_D` for one ideal, with slice ranks.
#[derive(Clone, Debug)]
pub struct Saturation {
    coords: TruncatedCoords,
    /// `slice_ranks[b][d] = dim(W_b ∩ Q_{<=d})` for `d <= D`.
    slice_ranks: Vec<Vec<usize>>,
    space: Subspace,
}

impl Saturation {
    /// Computes `W_0, ..., W_D`.
    pub fn compute(q: &QAlgebra, gens: &IdealGens, max_saturation: usize) -> Result<Saturation> {
        q.uea().check_degree(max_saturation)?;
        for g in &gens.generators {
            q.check_element(g)?;
        }
        let coords = TruncatedCoords::new(q, max_saturation);
        let (slice_ranks, space) = saturate_chain(q, gens, &coords, max_saturation)?;
        Ok(Saturation {
            coords,
            slice_ranks,
            space,
        })
    }

    pub fn max_saturation(&self) -> usize {
        self.slice_ranks.len() - 1
    }

    /// `dim(W_b ∩ Q_{<=d})`.
    pub fn slice_rank(&self, b: usize, d: usize) -> usize {
        self.slice_ranks[b][d]
    }

    /// Whether the slice at degree `d` is unchanged from saturation `b - 1`
    /// to `b`.
    pub fn is_stable(&self, b: usize, d: usize) -> bool {
        b > 0 && self.slice_ranks[b][d] == self.slice_ranks[b - 1][d]
    }

    pub fn coords(&self) -> &TruncatedCoords {
        &self.coords
    }

    /// The full `W_D` in reversed coordinates of `Q_{<=D}`.
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    /// `W_D ∩ Q_{<=d}` in reversed coordinates of `Q_{<=d}`.
    pub fn slice(&self, q: &QAlgebra, d: usize) -> Result<Subspace> {
        let small = q.truncated_dim(d);
        let shift = self.coords.len() - small;
        let rows: Vec<SparseVector> = self
            .space
            .basis()
            .filter(|r| r.leading().is_some_and(|(p, _)| p >= shift))
            .map(|r| r.remap(small, |i| i - shift))
            .collect();
        Subspace::span(rows.iter(), small)
    }
}

fn saturate_chain(
    q: &QAlgebra,
    gens: &IdealGens,
    coords: &TruncatedCoords,
    max_saturation: usize,
) -> Result<(Vec<Vec<usize>>, Subspace)> {
    let n = q.dim();
    let embeds =
        |kind| -> Result<Vec<QElement>> { (0..n).map(|a| q.embed_basis(kind, a)).collect() };
    let (is, js, ks) = (
        embeds(Embedding::I)?,
        embeds(Embedding::J)?,
        embeds(Embedding::K)?,
    );

    let mut flat_ops = Vec::new();
    for x in is.iter().chain(ks.iter()) {
        // i(1) = k(1) = 1, so a multiple of the identity adds nothing
        if x == &q.identity() {
            continue;
        }
        flat_ops.push(MulOp::new(q, coords, x.clone(), true));
        flat_ops.push(MulOp::new(q, coords, x.clone(), false));
    }
    let j_ops: Vec<MulOp> = js
        .iter()
        .flat_map(|x| {
            [
                MulOp::new(q, coords, x.clone(), true),
                MulOp::new(q, coords, x.clone(), false),
            ]
        })
        .collect();
    let flat: Vec<Box<LinearOp>> = flat_ops
        .iter()
        .map(|op| Box::new(move |v: &SparseVector| op.apply(v)) as Box<LinearOp>)
        .collect();
    let flat_refs: Vec<&LinearOp> = flat.iter().map(|b| b.as_ref()).collect();

    let total = coords.len();
    let thresholds: Vec<usize> = (0..=max_saturation)
        .map(|d| total - q.truncated_dim(d))
        .collect();
    let ranks_of = |space: &Subspace| -> Vec<usize> {
        thresholds
            .iter()
            .map(|&t| space.pivots().filter(|&p| p >= t).count())
            .collect()
    };

    let mut space = Subspace::zero(total);
    let mut slice_ranks = Vec::with_capacity(max_saturation + 1);
    for b in 0..=max_saturation {
        let mut seed: Vec<SparseVector> = gens
            .generators
            .iter()
            .filter(|g| g.degree() == b)
            .map(|g| coords.to_vector(g))
            .collect::<Result<_>>()?;
        if b > 0 {
            let previous: Vec<SparseVector> = space.basis().cloned().collect();
            for v in &previous {
                for op in &j_ops {
                    seed.push(op.apply(v)?);
                }
            }
        }
        extend_closure(&mut space, &seed, &flat_refs)?;
        slice_ranks.push(ranks_of(&space));
    }
    Ok((slice_ranks, space))
}

/// `W_D ∩ Q(A)_{<=d}` (reversed coordinates of `Q_{<=d}`) and whether it is
/// unchanged from saturation `D - 1`.
pub fn truncated_ideal_span(
    q: &QAlgebra,
    gens: &IdealGens,
    d: usize,
    saturation: usize,
) -> Result<(Subspace, bool)> {
    check_bounds(d, saturation)?;
    let sat = Saturation::compute(q, gens, saturation)?;
    Ok((sat.slice(q, d)?, sat.is_stable(saturation, d)))
}

fn check_bounds(d: usize, saturation: usize) -> Result<()> {
    if saturation < d {
        return Err(Error::InvalidArgument(format!(
            "saturation bound {saturation} is below the degree {d}"
        )));
    }
    Ok(())
}

/// A finite-dimensional slice `Q(A)_{<=d} / (W_D ∩ Q(A)_{<=d})`.
#[derive(Clone, Debug)]
pub struct TruncatedQuotient {
    pub degree: usize,
    pub saturation: usize,
    pub stable: bool,
    coords: TruncatedCoords,
    ideal_slice: Subspace,
    coset_basis: Vec<QMonomial>,
    /// Reversed coordinate of each coset representative.
    coset_coords: Vec<usize>,
}

impl TruncatedQuotient {
    pub fn compute(q: &QAlgebra, gens: &IdealGens, d: usize, saturation: usize) -> Result<Self> {
        check_bounds(d, saturation)?;
        let sat = Saturation::compute(q, gens, saturation)?;
        Self::from_saturation(q, &sat, d)
    }

    /// Slice of an existing saturation at degree `d <= D`.
    pub fn from_saturation(q: &QAlgebra, sat: &Saturation, d: usize) -> Result<Self> {
        let saturation = sat.max_saturation();
        check_bounds(d, saturation)?;
        let ideal_slice = sat.slice(q, d)?;
        let coords = TruncatedCoords::new(q, d);
        // Non-pivot columns, listed in increasing term order.
        let mut coset_coords: Vec<usize> = ideal_slice.free_columns();
        coset_coords.reverse();
        let coset_basis = coset_coords
            .iter()
            .map(|&c| coords.monomial_at(c).clone())
            .collect();
        Ok(TruncatedQuotient {
            degree: d,
            saturation,
            stable: sat.is_stable(saturation, d),
            coords,
            ideal_slice,
            coset_basis,
            coset_coords,
        })
    }

    pub fn dim(&self) -> usize {
        self.coset_basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn ideal_slice(&self) -> &Subspace {
        &self.ideal_slice
    }

    pub fn coset_basis(&self) -> &[QMonomial] {
        &self.coset_basis
    }

    pub fn coords(&self) -> &TruncatedCoords {
        &self.coords
    }

    /// Coordinates of `x` modulo the ideal slice, in the coset basis.
    pub fn reduce(&self, x: &QElement) -> Result<SparseVector> {
        let v = self.coords.to_vector(x)?;
        let r = self.ideal_slice.reduce(&v)?;
        let mut out = SparseVector::zero(self.dim());
        for (k, &c) in self.coset_coords.iter().enumerate() {
            out.set(k, r.get(c));
        }
        Ok(out)
    }

    /// Whether `x` lies in the ideal slice.
    pub fn contains(&self, x: &QElement) -> Result<bool> {
        Ok(self.reduce(x)?.is_zero())
    }
}

/// One row of a dimension table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionRow {
    pub degree: usize,
    pub saturation: usize,
    pub ambient: usize,
    pub slice_rank: usize,
    pub dim: usize,
    pub stable: bool,
}

/// Quotient dimensions at degrees `0..=d`, each with saturation `saturation`
/// if given, otherwise `degree + 2`. A single saturation run serves all rows.
pub fn dimension_table(
    q: &QAlgebra,
    gens: &IdealGens,
    d: usize,
    saturation: Option<usize>,
) -> Result<Vec<DimensionRow>> {
    if let Some(s) = saturation {
        check_bounds(d, s)?;
    }
    let max = saturation.unwrap_or(d + 2);
    let sat = Saturation::compute(q, gens, max)?;
    Ok((0..=d)
        .map(|k| {
            let b = saturation.unwrap_or(k + 2);
            let ambient = q.truncated_dim(k);
            let slice_rank = sat.slice_rank(b, k);
            DimensionRow {
                degree: k,
                saturation: b,
                ambient,
                slice_rank,
                dim: ambient - slice_rank,
                stable: sat.is_stable(b, k),
            }
        })
        .collect())
}


#[cfg(test)]
mod trunc2_witnesses {
    use super::*;
    use crate::catalog;
    use crate::uea::UMonomial;

    fn qm(i: usize, j: usize, u: &[usize]) -> QElement {
        QElement::monomial(QMonomial::new(i, j, UMonomial::new(u.to_vec()).unwrap()))
    }

    /// `i(x) j(x) j(y) = i(y) j(x)^2` and `i(y) j(x) j(y) = i(x) j(y)^2` in
    /// P(A): both follow from rewriting `k(x) j(x) j(y)` and `k(y) j(x) j(y)`
    /// in two ways.
    #[test]
    fn degree_two_dependencies() {
        let q = QAlgebra::with_cap(catalog::trunc2(2), 8);
        let tq = TruncatedQuotient::compute(&q, &poisson_ideal_j(&q), 2, 4).unwrap();
        assert_eq!(tq.dim(), 22);
        assert!(tq
            .contains(&qm(1, 0, &[1, 2]).sub(&qm(2, 0, &[1, 1])))
            .unwrap());
        assert!(tq
            .contains(&qm(2, 0, &[1, 2]).sub(&qm(1, 0, &[2, 2])))
            .unwrap());
        assert!(!tq.contains(&qm(1, 0, &[1, 2])).unwrap());
    }
}

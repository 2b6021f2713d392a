//! Sparse exact linear algebra: vectors, echelonized subspaces, closures
//! under linear operators, and small dense matrices.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A vector of fixed length with only its nonzero entries stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseVector {
    len: usize,
    entries: BTreeMap<usize, Rational>,
}

impl SparseVector {
    pub fn zero(len: usize) -> Self {
        Self {
            len,
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zero(len);
        v.set(index, Rational::one());
        v
    }

    /// Builds a vector from `(index, value)` pairs, summing repeated indices.
    pub fn from_pairs<I>(len: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut v = Self::zero(len);
        for (i, c) in pairs {
            if i >= len {
                return Err(Error::IndexOutOfRange { index: i, dim: len });
            }
            v.add_at(i, &c);
        }
        Ok(v)
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        let mut v = Self::zero(values.len());
        for (i, c) in values.iter().enumerate() {
            v.set(i, c.clone());
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Rational {
        self.entries.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Panics if `i` is out of range.
    pub fn set(&mut self, i: usize, c: Rational) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        if c.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, c);
        }
    }

    /// Panics if `i` is out of range.
    pub fn add_at(&mut self, i: usize, c: &Rational) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry(i).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(&i);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn leading(&self) -> Option<(usize, &Rational)> {
        self.entries.iter().next().map(|(i, c)| (*i, c))
    }

    pub fn check_len(&self, expected: usize) -> Result<()> {
        if self.len != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.len,
            });
        }
        Ok(())
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Rational, other: &SparseVector) {
        debug_assert_eq!(self.len, other.len);
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_at(i, &(c * x));
        }
    }

    pub fn scaled(&self, c: &Rational) -> SparseVector {
        if c.is_zero() {
            return Self::zero(self.len);
        }
        Self {
            len: self.len,
            entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    pub fn sub(&self, other: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), other);
        out
    }

    pub fn add(&self, other: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), other);
        out
    }

    pub fn to_dense(&self) -> Vec<Rational> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Re-indexes every entry through `f`, into a vector of length `len`.
    pub fn remap(&self, len: usize, f: impl Fn(usize) -> usize) -> SparseVector {
        let mut out = Self::zero(len);
        for (i, c) in self.iter() {
            out.add_at(f(i), c);
        }
        out
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .to_dense()
            .iter()
            .map(crate::rational::format)
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A linear subspace of `K^ambient`, stored as a reduced row-echelon basis.
///
/// Rows are keyed by pivot column; each pivot entry is 1 and is the only
/// nonzero entry of that column among the rows. Two subspaces are equal iff
/// their bases are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: BTreeMap<usize, SparseVector>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            rows: BTreeMap::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Self::zero(ambient);
        for i in 0..ambient {
            s.rows.insert(i, SparseVector::unit(ambient, i));
        }
        s
    }

    /// Echelonized span of `vectors`.
    pub fn span<'a, I>(vectors: I, ambient: usize) -> Result<Self>
    where
        I: IntoIterator<Item = &'a SparseVector>,
    {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn basis(&self) -> impl Iterator<Item = &SparseVector> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &SparseVector) -> Result<SparseVector> {
        v.check_len(self.ambient)?;
        Ok(self.reduce_unchecked(v.clone()))
    }

    fn reduce_unchecked(&self, mut v: SparseVector) -> SparseVector {
        // Rows are fully reduced, so subtracting one never creates an entry
        // in another pivot column.
        let hits: Vec<(usize, Rational)> = v
            .iter()
            .filter(|(i, _)| self.rows.contains_key(i))
            .map(|(i, c)| (i, c.clone()))
            .collect();
        for (col, c) in hits {
            v.add_scaled(&-c, &self.rows[&col]);
        }
        v
    }

    pub fn contains(&self, v: &SparseVector) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Adds `v` to the span. Returns the normalized new basis row when the
    /// rank grows, `None` when `v` was already in the span.
    pub fn insert(&mut self, v: &SparseVector) -> Result<Option<SparseVector>> {
        let r = self.reduce(v)?;
        let (pivot, lead) = match r.leading() {
            None => return Ok(None),
            Some((p, c)) => (p, c.clone()),
        };
        let row = r.scaled(&lead.recip());
        for other in self.rows.values_mut() {
            let c = other.get(pivot);
            if !c.is_zero() {
                other.add_scaled(&-c, &row);
            }
        }
        self.rows.insert(pivot, row.clone());
        Ok(Some(row))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        for v in self.basis() {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Basis of a complement: the unit vectors of the non-pivot columns.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.is_pivot(*c)).collect()
    }
}

/// A linear map on sparse vectors.
pub type LinearOp<'a> = dyn Fn(&SparseVector) -> Result<SparseVector> + 'a;

/// Smallest subspace containing `seed` and closed under every operator.
pub fn saturate_closure(
    seed: &[SparseVector],
    operators: &[&LinearOp<'_>],
    ambient: usize,
) -> Result<Subspace> {
    let mut space = Subspace::zero(ambient);
    extend_closure(&mut space, seed, operators)?;
    Ok(space)
}

/// Grows `space` by `seed` and closes it under `operators`. Assumes `space`
/// is already closed on entry.
pub fn extend_closure(
    space: &mut Subspace,
    seed: &[SparseVector],
    operators: &[&LinearOp<'_>],
) -> Result<()> {
    let ambient = space.ambient_dim();
    let mut queue = Vec::new();
    for v in seed {
        if let Some(row) = space.insert(v)? {
            queue.push(row);
        }
    }
    while let Some(v) = queue.pop() {
        for op in operators {
            let w = op(&v)?;
            w.check_len(ambient)?;
            if let Some(row) = space.insert(&w)? {
                queue.push(row);
            }
        }
    }
    Ok(())
}

/// Solution space of the homogeneous system whose equations are `rows`
/// (each a linear form on `K^nvars`).
pub fn kernel(rows: &[SparseVector], nvars: usize) -> Result<Subspace> {
    let eqs = Subspace::span(rows.iter(), nvars)?;
    let mut sol = Subspace::zero(nvars);
    for free in eqs.free_columns() {
        let mut v = SparseVector::unit(nvars, free);
        for (pivot, row) in eqs.rows.iter() {
            let c = row.get(free);
            if !c.is_zero() {
                v.set(*pivot, -c);
            }
        }
        sol.insert(&v)?;
    }
    Ok(sol)
}

/// Dense matrix over the rationals. Acts on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[SparseVector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            col.check_len(rows)?;
            for (i, c) in col.iter() {
                m.set(i, j, c.clone());
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Rational) {
        self.data[i * self.cols + j] = c;
    }

    pub fn add_at(&mut self, i: usize, j: usize, c: &Rational) {
        self.data[i * self.cols + j] += c;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn column(&self, j: usize) -> SparseVector {
        let mut v = SparseVector::zero(self.rows);
        for i in 0..self.rows {
            v.set(i, self.get(i, j).clone());
        }
        v
    }

    pub fn apply(&self, v: &SparseVector) -> Result<SparseVector> {
        v.check_len(self.cols)?;
        let mut out = SparseVector::zero(self.rows);
        for (j, c) in v.iter() {
            for i in 0..self.rows {
                let a = self.get(i, j);
                if !a.is_zero() {
                    out.add_at(i, &(a * c));
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Rational, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if c.is_zero() {
            return;
        }
        for (x, y) in self.data.iter_mut().zip(other.data.iter()) {
            if !y.is_zero() {
                *x += c * y;
            }
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), other);
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), other);
        out
    }

    pub fn scaled(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .sum()
    }

    /// Row-major flattening, used to treat matrices as vectors.
    pub fn to_vector(&self) -> SparseVector {
        SparseVector::from_dense(&self.data)
    }

    pub fn from_vector(rows: usize, cols: usize, v: &SparseVector) -> Result<Matrix> {
        v.check_len(rows * cols)?;
        let mut m = Matrix::zeros(rows, cols);
        for (k, c) in v.iter() {
            m.data[k] = c.clone();
        }
        Ok(m)
    }

    /// Nonzero entries as `(row, col, value)` triples in row-major order.
    pub fn triples(&self) -> Vec<(usize, usize, Rational)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let c = self.get(i, j);
                if !c.is_zero() {
                    out.push((i, j, c.clone()));
                }
            }
        }
        out
    }

    /// Column space.
    pub fn image(&self) -> Result<Subspace> {
        let cols: Vec<SparseVector> = (0..self.cols).map(|j| self.column(j)).collect();
        Subspace::span(cols.iter(), self.rows)
    }

    /// Null space.
    pub fn null_space(&self) -> Result<Subspace> {
        let rows: Vec<SparseVector> = (0..self.rows)
            .map(|i| SparseVector::from_dense(&self.data[i * self.cols..(i + 1) * self.cols]))
            .collect();
        kernel(&rows, self.cols)
    }
}

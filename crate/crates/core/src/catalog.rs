//! Small algebras used throughout the tests, benches and bundled data files.

use crate::algebra::{AlgebraPresentation, Ncpa};
use crate::linalg::{Matrix, SparseVector};
use crate::module::QuasiPoissonModule;
use crate::rational::int;

fn unit_vec(n: usize, pairs: &[(usize, i64)]) -> SparseVector {
    SparseVector::from_pairs(n, pairs.iter().map(|(i, c)| (*i, int(*c)))).expect("in range")
}

fn valid(p: AlgebraPresentation) -> Ncpa {
    Ncpa::validate(p).expect("catalog algebra is a valid NCPA")
}

/// The ground field `K` with basis `{1}`.
pub fn ground_field() -> Ncpa {
    let mut p = AlgebraPresentation::new("K", &["1"], unit_vec(1, &[(0, 1)]));
    p.set_mul(0, 0, 0, int(1));
    valid(p)
}

/// `K x K` with orthogonal idempotents `e1, e2` and zero bracket.
pub fn kxk_presentation() -> AlgebraPresentation {
    let mut p = AlgebraPresentation::new("KxK", &["e1", "e2"], unit_vec(2, &[(0, 1), (1, 1)]));
    p.set_mul(0, 0, 0, int(1)).set_mul(1, 1, 1, int(1));
    p
}

pub fn kxk() -> Ncpa {
    valid(kxk_presentation())
}

/// 2x2 matrices with basis `E11, E12, E21, E22` and no bracket.
pub fn m2_presentation() -> AlgebraPresentation {
    let idx = |i: usize, j: usize| 2 * i + j;
    let mut p = AlgebraPresentation::new(
        "M2",
        &["E11", "E12", "E21", "E22"],
        unit_vec(4, &[(0, 1), (3, 1)]),
    );
    for i in 0..2 {
        for j in 0..2 {
            for l in 0..2 {
                p.set_mul(idx(i, j), idx(j, l), idx(i, l), int(1));
            }
        }
    }
    p
}

/// The standard NCPA of `M2`: bracket is the commutator.
pub fn m2_standard() -> Ncpa {
    let mut p = m2_presentation();
    p.name = "M2std".into();
    Ncpa::standard(p).expect("M2 is associative")
}

/// Upper-triangular 2x2 matrices `E11, E12, E22` with the commutator bracket.
pub fn upper_triangular_standard() -> Ncpa {
    let mut p = AlgebraPresentation::new(
        "T2std",
        &["E11", "E12", "E22"],
        unit_vec(3, &[(0, 1), (2, 1)]),
    );
    p.set_mul(0, 0, 0, int(1))
        .set_mul(0, 1, 1, int(1))
        .set_mul(1, 2, 1, int(1))
        .set_mul(2, 2, 2, int(1));
    Ncpa::standard(p).expect("T2 is associative")
}

/// `K<x1..xn>/J^2` with zero bracket: basis `1, x1, ..., xn`, all `xi xj = 0`.
pub fn trunc2(n: usize) -> Ncpa {
    let labels: Vec<String> = std::iter::once("1".to_string())
        .chain((1..=n).map(|i| format!("x{i}")))
        .collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let mut p = AlgebraPresentation::new(format!("trunc2-n{n}"), &refs, unit_vec(n + 1, &[(0, 1)]));
    p.set_mul(0, 0, 0, int(1));
    for i in 1..=n {
        p.set_mul(0, i, i, int(1)).set_mul(i, 0, i, int(1));
    }
    valid(p)
}

/// `K[x]/x^2` with zero bracket.
pub fn dual_numbers() -> Ncpa {
    let mut p = AlgebraPresentation::new("K[x]/x^2", &["1", "x"], unit_vec(2, &[(0, 1)]));
    p.set_mul(0, 0, 0, int(1))
        .set_mul(0, 1, 1, int(1))
        .set_mul(1, 0, 1, int(1));
    valid(p)
}

/// A unital but non-associative product: `x x = y`, `x y = x`.
pub fn non_associative_presentation() -> AlgebraPresentation {
    let mut p = AlgebraPresentation::new("nonassoc", &["1", "x", "y"], unit_vec(3, &[(0, 1)]));
    for i in 0..3 {
        p.set_mul(0, i, i, int(1));
        if i > 0 {
            p.set_mul(i, 0, i, int(1));
        }
    }
    p.set_mul(1, 1, 2, int(1)).set_mul(1, 2, 1, int(1));
    p
}

/// `K[x]/x^2` with the Lie bracket `{1, x} = x`, which breaks Leibniz.
pub fn non_leibniz_presentation() -> AlgebraPresentation {
    let mut p = AlgebraPresentation::new("nonleibniz", &["1", "x"], unit_vec(2, &[(0, 1)]));
    p.set_mul(0, 0, 0, int(1))
        .set_mul(0, 1, 1, int(1))
        .set_mul(1, 0, 1, int(1));
    p.set_bracket(0, 1, 1, int(1)).set_bracket(1, 0, 1, int(-1));
    p
}

/// `K x K` with `{e1, e1} = e1`.
pub fn non_antisymmetric_presentation() -> AlgebraPresentation {
    let mut p = kxk_presentation();
    p.name = "KxK-bad-bracket".into();
    p.set_bracket(0, 0, 0, int(1));
    p
}

/// The three algebras shipped as data files: `K x K`, standard `M2`, and the
/// 2-truncated algebra on two generators.
pub fn bundled() -> Vec<Ncpa> {
    vec![kxk(), m2_standard(), trunc2(2)]
}

/// Poisson module over `K x K` on `K^len` where `e1` acts as the identity on
/// the left, `e2` on the right (swapped if `swap`), and the Lie action of
/// `e1` is the nilpotent shift `N` with `{e2, -}_* = -N`.
///
/// `x^k` in the corner `e1 P e2` acts by `N^k`, so these modules separate the
/// powers of `x` up to degree `len - 1`.
pub fn kxk_jordan_module(len: usize, swap: bool) -> QuasiPoissonModule {
    let id = Matrix::identity(len);
    let zero = Matrix::zeros(len, len);
    let mut shift = Matrix::zeros(len, len);
    for i in 0..len.saturating_sub(1) {
        shift.set(i, i + 1, int(1));
    }
    let neg = shift.scaled(&int(-1));
    let (a, b) = if swap { (1, 0) } else { (0, 1) };
    let mut left = vec![zero.clone(); 2];
    let mut right = vec![zero.clone(); 2];
    let mut lie = vec![zero; 2];
    left[a] = id.clone();
    right[b] = id;
    lie[a] = shift;
    lie[b] = neg;
    QuasiPoissonModule {
        dim: len,
        left,
        right,
        lie,
    }
}

/// One-dimensional module over `K x K` where `e_i` acts as `1` on both
/// sides, the other idempotent as `0`, with zero Lie action.
pub fn kxk_idempotent_module(i: usize) -> QuasiPoissonModule {
    let mut left = vec![Matrix::zeros(1, 1); 2];
    left[i] = Matrix::identity(1);
    QuasiPoissonModule {
        dim: 1,
        right: left.clone(),
        left,
        lie: vec![Matrix::zeros(1, 1); 2],
    }
}

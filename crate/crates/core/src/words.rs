//! Words in the tensor algebra `T(A)`, ordered partitions of their letter
//! positions, the shuffle coproduct and the counit.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Words longer than this are refused by default; `p^r` terms blow up fast.
pub const DEFAULT_WORD_DEGREE_CAP: usize = 10;

/// A word `v_{i(1)} ... v_{i(r)}` of basis indices. The empty word is `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    /// Concatenation `self ∨ other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Letters at the given positions, in position order.
    pub fn subword(&self, positions: &[usize]) -> Word {
        Word(positions.iter().map(|&p| self.0[p]).collect())
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("v{i}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// An ordered partition of positions `0..r` into `p` labelled blocks, some
/// possibly empty. Positions within a block are increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl OrderedPartition {
    /// Splits `word` into the subwords picked out by each block.
    pub fn apply(&self, word: &Word) -> Vec<Word> {
        self.blocks.iter().map(|b| word.subword(b)).collect()
    }
}

fn check_degree(r: usize, cap: usize) -> Result<()> {
    if r > cap {
        return Err(Error::DegreeCapExceeded { degree: r, cap });
    }
    Ok(())
}

/// Calls `f` with every block assignment `positions -> 0..p`, in the order of
/// a base-`p` counter whose most significant digit is position 0.
pub fn for_each_assignment(r: usize, p: usize, mut f: impl FnMut(&[usize])) {
    let mut digits = vec![0usize; r];
    loop {
        f(&digits);
        let mut k = r;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < p {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// All `p^r` ordered `p`-partitions of `{0..r}`.
pub fn ordered_partitions(r: usize, p: usize) -> Result<Vec<OrderedPartition>> {
    ordered_partitions_capped(r, p, DEFAULT_WORD_DEGREE_CAP)
}

pub fn ordered_partitions_capped(r: usize, p: usize, cap: usize) -> Result<Vec<OrderedPartition>> {
    if p == 0 {
        return Err(Error::InvalidArgument(
            "number of blocks must be at least 1".into(),
        ));
    }
    check_degree(r, cap)?;
    let mut out = Vec::with_capacity(p.pow(r as u32));
    for_each_assignment(r, p, |digits| {
        let mut blocks = vec![Vec::new(); p];
        for (pos, &b) in digits.iter().enumerate() {
            blocks[b].push(pos);
        }
        out.push(OrderedPartition { blocks });
    });
    Ok(out)
}

/// Formal sum of `left ⊗ right` word pairs.
pub type Coproduct = BTreeMap<(Word, Word), Rational>;

/// `Δ(w) = Σ w_X ⊗ w_Y` over ordered bipartitions `X ⊔ Y` of the positions.
pub fn shuffle_coproduct(w: &Word) -> Result<Coproduct> {
    shuffle_coproduct_capped(w, DEFAULT_WORD_DEGREE_CAP)
}

pub fn shuffle_coproduct_capped(w: &Word, cap: usize) -> Result<Coproduct> {
    check_degree(w.degree(), cap)?;
    let mut out = Coproduct::new();
    for_each_assignment(w.degree(), 2, |digits| {
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for (pos, &b) in digits.iter().enumerate() {
            if b == 0 {
                x.push(w.0[pos]);
            } else {
                y.push(w.0[pos]);
            }
        }
        *out.entry((Word(x), Word(y))).or_insert_with(Rational::zero) += Rational::one();
    });
    Ok(out)
}

/// `ε(1) = 1`, `ε(w) = 0` for words of positive degree.
pub fn counit(w: &Word) -> Rational {
    if w.degree() == 0 {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// Counit extended linearly to a formal sum of words.
pub fn counit_sum(sum: &BTreeMap<Word, Rational>) -> Rational {
    sum.iter().map(|(w, c)| c * counit(w)).sum()
}

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Outer-layer signs `a ∈ {±1}^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern {
    a: Vec<i8>,
}

impl SignPattern {
    pub fn new(a: Vec<i8>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidSigns("m must be at least 1".into()));
        }
        if let Some(x) = a.iter().find(|&&x| x != 1 && x != -1) {
            return Err(Error::InvalidSigns(format!("entry {x} is not ±1")));
        }
        Ok(SignPattern { a })
    }

    /// `(+1, -1, +1, -1, …)` of length `m`.
    pub fn alternating(m: usize) -> Result<Self> {
        Self::new((0..m).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect())
    }

    pub fn all_positive(m: usize) -> Result<Self> {
        Self::new(alloc::vec![1; m])
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.a
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.a[i] as f64
    }

    pub fn plus_count(&self) -> usize {
        self.a.iter().filter(|&&x| x == 1).count()
    }

    pub fn minus_count(&self) -> usize {
        self.a.len() - self.plus_count()
    }

    /// `min(#{a = +1}, #{a = -1})`.
    pub fn underbar_m(&self) -> usize {
        self.plus_count().min(self.minus_count())
    }

    /// `√(m / m̲)`, infinite when `m̲ = 0`.
    pub fn c_m(&self) -> f64 {
        let mu = self.underbar_m();
        if mu == 0 {
            f64::INFINITY
        } else {
            math::sqrt(self.m() as f64 / mu as f64)
        }
    }

    /// Indices of the first `k` (plus, minus) pairs in original order.
    pub fn pairs(&self, k: usize) -> Result<Vec<(usize, usize)>> {
        let plus: Vec<usize> = (0..self.m()).filter(|&i| self.a[i] == 1).collect();
        let minus: Vec<usize> = (0..self.m()).filter(|&i| self.a[i] == -1).collect();
        let available = plus.len().min(minus.len());
        if k > available {
            return Err(Error::InsufficientPairs {
                needed: k,
                available,
            });
        }
        Ok((0..k).map(|i| (plus[i], minus[i])).collect())
    }
}

/// Result of [`reorder_alternating`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reordering {
    /// `permutation[k]` is the original index placed at position `k`.
    pub permutation: Vec<usize>,
    /// The reordered pattern (after the global flip, if any).
    pub reordered: SignPattern,
    /// True when all signs were flipped so that minus signs are the minority.
    pub flipped: bool,
    pub underbar_m: usize,
    pub c_m: f64,
}

/// Orders nodes so the first `2m̲` signs alternate `+, -, …` and the rest are `+`, flipping
/// all signs first if minus signs are the majority.
pub fn reorder_alternating(signs: &SignPattern) -> Reordering {
    let flipped = signs.minus_count() > signs.plus_count();
    let eff: Vec<i8> = signs
        .as_slice()
        .iter()
        .map(|&x| if flipped { -x } else { x })
        .collect();
    let plus: Vec<usize> = (0..eff.len()).filter(|&i| eff[i] == 1).collect();
    let minus: Vec<usize> = (0..eff.len()).filter(|&i| eff[i] == -1).collect();
    let mu = minus.len();
    let mut permutation = Vec::with_capacity(eff.len());
    for k in 0..mu {
        permutation.push(plus[k]);
        permutation.push(minus[k]);
    }
    permutation.extend_from_slice(&plus[mu..]);
    let reordered =
        SignPattern::new(permutation.iter().map(|&i| eff[i]).collect()).expect("same entries");
    Reordering {
        permutation,
        reordered,
        flipped,
        underbar_m: signs.underbar_m(),
        c_m: signs.c_m(),
    }
}

//! Multi-indices and the canonical monomial enumeration.
//!
//! The library-wide monomial order is graded-lexicographic with the first
//! exponent most significant: degree blocks come in increasing degree, and
//! inside the degree-`k` block indices are listed with `i1` descending, then
//! `i2` descending. So for `k = 2` the order is
//! `x1², x1x2, x1x3, x2², x2x3, x3²`. Every operator matrix and nullspace
//! basis in the crate is expressed in this fixed order.

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// Number of monomials of exact degree `k` in three variables,
/// `(k+1)(k+2)/2`.
pub fn mono_count(k: usize) -> usize {
    (k + 1) * (k + 2) / 2
}

/// Exponent triple of a monomial `X^i = x1^{i1} x2^{i2} x3^{i3}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    pub exps: [usize; 3],
}

impl MultiIndex {
    pub fn new(i1: usize, i2: usize, i3: usize) -> Self {
        MultiIndex { exps: [i1, i2, i3] }
    }

    pub fn zero() -> Self {
        MultiIndex { exps: [0, 0, 0] }
    }

    /// The canonical basis multi-index `e_g` (g in 0..3).
    pub fn unit(g: usize) -> Self {
        let mut exps = [0, 0, 0];
        exps[g] = 1;
        MultiIndex { exps }
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().sum()
    }

    pub fn exp(&self, g: usize) -> usize {
        self.exps[g]
    }

    /// Exponent sum, `X^i · X^j = X^{i+j}`.
    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex {
            exps: [
                self.exps[0] + other.exps[0],
                self.exps[1] + other.exps[1],
                self.exps[2] + other.exps[2],
            ],
        }
    }

    /// Increment the exponent of variable `g`.
    pub fn bump(&self, g: usize) -> MultiIndex {
        let mut exps = self.exps;
        exps[g] += 1;
        MultiIndex { exps }
    }

    /// Decrement the exponent of variable `g`, if possible.
    pub fn checked_dec(&self, g: usize) -> Option<MultiIndex> {
        if self.exps[g] == 0 {
            return None;
        }
        let mut exps = self.exps;
        exps[g] -= 1;
        Some(MultiIndex { exps })
    }

    /// Position of this index inside its own degree block, under the
    /// canonical order.
    pub fn position(&self) -> usize {
        let k = self.degree();
        let r = k - self.exps[0];
        r * (r + 1) / 2 + (r - self.exps[1])
    }

    /// Inverse of [`MultiIndex::position`] for degree `k`.
    pub fn from_position(k: usize, pos: usize) -> MultiIndex {
        debug_assert!(pos < mono_count(k));
        let mut r = 0;
        while (r + 1) * (r + 2) / 2 <= pos {
            r += 1;
        }
        let rem = pos - r * (r + 1) / 2;
        MultiIndex::new(k - r, r - rem, rem)
    }

    /// All multi-indices of degree `k` in canonical order.
    pub fn enumerate(k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::with_capacity(mono_count(k));
        for i1 in (0..=k).rev() {
            for i2 in (0..=k - i1).rev() {
                out.push(MultiIndex::new(i1, i2, k - i1 - i2));
            }
        }
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.position()).cmp(&(other.degree(), other.position()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.exps[0], self.exps[1], self.exps[2])
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.exps.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(deserializer)?;
        if v.len() != 3 {
            return Err(de::Error::custom(format!(
                "multi-index must have 3 entries, got {}",
                v.len()
            )));
        }
        Ok(MultiIndex::new(v[0], v[1], v[2]))
    }
}

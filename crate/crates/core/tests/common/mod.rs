//! Shared helpers for the integration suites: a deterministic generator for
//! reproducible random polynomials and jets, plus a brute-force full
//! polynomial multiplier kept independent of the library's graded product.

// Each test target compiles its own copy and uses a different subset.
#![allow(dead_code)]

use qtmaxwell::multiindex::{mono_count, MultiIndex};
use qtmaxwell::poly::{CoefficientJet, GradedVecPoly, HomScalarPoly, HomVecPoly};
use qtmaxwell::Rational;
use std::collections::BTreeMap;

/// splitmix64; deterministic across runs and platforms.
pub struct Rng(pub u64);

impl Rng {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn rational(&mut self) -> Rational {
        let num = (self.next_u64() % 19) as i64 - 9;
        let den = (self.next_u64() % 3) as i64 + 1;
        Rational::new(num, den)
    }

    pub fn scalar_poly(&mut self, degree: usize) -> HomScalarPoly {
        HomScalarPoly::from_coeffs(
            degree,
            (0..mono_count(degree)).map(|_| self.rational()).collect(),
        )
    }

    pub fn vec_poly(&mut self, degree: usize) -> HomVecPoly {
        HomVecPoly::from_comps([
            self.scalar_poly(degree),
            self.scalar_poly(degree),
            self.scalar_poly(degree),
        ])
    }

    pub fn graded_vec_poly(&mut self, max_degree: usize) -> GradedVecPoly {
        let mut out = GradedVecPoly::zero(max_degree);
        for k in 0..=max_degree {
            out.set_part(k, self.vec_poly(k));
        }
        out
    }

    /// Jet with constant part `e0` and random components up to `depth`.
    pub fn jet(&mut self, depth: usize, e0: Rational) -> CoefficientJet {
        let mut parts = vec![HomScalarPoly::constant(e0)];
        for j in 1..=depth {
            parts.push(self.scalar_poly(j));
        }
        CoefficientJet::new(parts).expect("constant part is nonzero")
    }
}

/// Sparse inhomogeneous polynomial used as an independent multiplication
/// oracle: plain term-by-term products with no grading shortcuts.
#[derive(Clone, Default)]
pub struct NaivePoly(pub BTreeMap<(usize, usize, usize), Rational>);

impl NaivePoly {
    pub fn from_hom(p: &HomScalarPoly) -> Self {
        let mut map = BTreeMap::new();
        for (idx, c) in p.terms() {
            map.insert((idx.exp(0), idx.exp(1), idx.exp(2)), c.clone());
        }
        NaivePoly(map)
    }

    pub fn mul(&self, other: &NaivePoly) -> NaivePoly {
        let mut out: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for (i, a) in &self.0 {
            for (j, b) in &other.0 {
                let key = (i.0 + j.0, i.1 + j.1, i.2 + j.2);
                let term = a * b;
                out.entry(key)
                    .and_modify(|acc| *acc += &term)
                    .or_insert(term);
            }
        }
        NaivePoly(out)
    }

    pub fn add(&self, other: &NaivePoly) -> NaivePoly {
        let mut out = self.0.clone();
        for (k, v) in &other.0 {
            out.entry(*k)
                .and_modify(|acc| *acc += v)
                .or_insert_with(|| v.clone());
        }
        NaivePoly(out)
    }

    /// Homogeneous component of exact degree `k`.
    pub fn component(&self, k: usize) -> HomScalarPoly {
        let mut out = HomScalarPoly::zero(k);
        for ((i1, i2, i3), c) in &self.0 {
            if i1 + i2 + i3 == k && !c.is_zero() {
                out.set_coeff(&MultiIndex::new(*i1, *i2, *i3), c.clone());
            }
        }
        out
    }
}

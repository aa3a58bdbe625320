//! Homogeneous polynomial algebra with exact rational coefficients.
//!
//! A degree-`k` scalar block is stored densely: one coefficient per monomial
//! of degree `k`, in the canonical order of [`crate::multiindex`]. Vector
//! fields are triples of equal-degree scalar blocks, and a full polynomial of
//! degree at most `p` is the list of its homogeneous components. All values
//! are immutable after construction and all operations are pure.

use crate::multiindex::{mono_count, MultiIndex};
use crate::rational::Rational;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A homogeneous scalar polynomial of fixed degree.
#[derive(Clone, PartialEq, Eq)]
pub struct HomScalarPoly {
    degree: usize,
    coeffs: Vec<Rational>,
}

impl HomScalarPoly {
    pub fn zero(degree: usize) -> Self {
        HomScalarPoly {
            degree,
            coeffs: vec![Rational::zero(); mono_count(degree)],
        }
    }

    /// Degree-0 polynomial with the given constant value.
    pub fn constant(c: Rational) -> Self {
        HomScalarPoly {
            degree: 0,
            coeffs: vec![c],
        }
    }

    /// The monomial `coef · X^idx`.
    pub fn monomial(idx: MultiIndex, coef: Rational) -> Self {
        let mut p = HomScalarPoly::zero(idx.degree());
        p.coeffs[idx.position()] = coef;
        p
    }

    pub fn from_coeffs(degree: usize, coeffs: Vec<Rational>) -> Self {
        assert_eq!(coeffs.len(), mono_count(degree), "dense block length");
        HomScalarPoly { degree, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, idx: &MultiIndex) -> &Rational {
        debug_assert_eq!(idx.degree(), self.degree);
        &self.coeffs[idx.position()]
    }

    pub fn set_coeff(&mut self, idx: &MultiIndex, c: Rational) {
        assert_eq!(idx.degree(), self.degree, "monomial degree mismatch");
        self.coeffs[idx.position()] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Nonzero terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &Rational)> {
        let degree = self.degree;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(pos, c)| (MultiIndex::from_position(degree, pos), c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        HomScalarPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Exact product; the result is homogeneous of the summed degree.
    pub fn mul(&self, other: &HomScalarPoly) -> HomScalarPoly {
        let mut out = HomScalarPoly::zero(self.degree + other.degree);
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                let pos = i.plus(&j).position();
                out.coeffs[pos] += &(a * b);
            }
        }
        out
    }

    /// Partial derivative in variable `g`. Degree-0 input maps to the zero
    /// degree-0 polynomial.
    pub fn partial(&self, g: usize) -> HomScalarPoly {
        if self.degree == 0 {
            return HomScalarPoly::zero(0);
        }
        let mut out = HomScalarPoly::zero(self.degree - 1);
        for (idx, c) in self.terms() {
            if let Some(lower) = idx.checked_dec(g) {
                let factor = Rational::from_int(idx.exp(g) as i64);
                out.coeffs[lower.position()] += &(c * &factor);
            }
        }
        out
    }

    fn add_inner(&self, other: &Self, sign_minus: bool) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch in add/sub");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| if sign_minus { a - b } else { a + b })
            .collect();
        HomScalarPoly {
            degree: self.degree,
            coeffs,
        }
    }
}

impl fmt::Debug for HomScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0[deg {}]", self.degree);
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(i, c)| format!("{c}·X^{i:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

macro_rules! forward_poly_binop {
    ($ty:ident, $trait:ident, $method:ident, $inherent:ident) => {
        impl $trait<&$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                self.$inherent(rhs)
            }
        }
        impl $trait<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$inherent(&rhs)
            }
        }
        impl $trait<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                (&self).$inherent(rhs)
            }
        }
        impl $trait<$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                self.$inherent(&rhs)
            }
        }
    };
}

impl HomScalarPoly {
    fn add_ref(&self, other: &Self) -> Self {
        self.add_inner(other, false)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_inner(other, true)
    }
}

forward_poly_binop!(HomScalarPoly, Add, add, add_ref);
forward_poly_binop!(HomScalarPoly, Sub, sub, sub_ref);

impl Neg for &HomScalarPoly {
    type Output = HomScalarPoly;
    fn neg(self) -> HomScalarPoly {
        self.scale(&Rational::from_int(-1))
    }
}

impl Neg for HomScalarPoly {
    type Output = HomScalarPoly;
    fn neg(self) -> HomScalarPoly {
        -&self
    }
}

/// A homogeneous polynomial vector field: three scalar blocks of one degree.
#[derive(Clone, PartialEq, Eq)]
pub struct HomVecPoly {
    degree: usize,
    comps: [HomScalarPoly; 3],
}

impl HomVecPoly {
    pub fn zero(degree: usize) -> Self {
        HomVecPoly {
            degree,
            comps: [
                HomScalarPoly::zero(degree),
                HomScalarPoly::zero(degree),
                HomScalarPoly::zero(degree),
            ],
        }
    }

    pub fn from_comps(comps: [HomScalarPoly; 3]) -> Self {
        let degree = comps[0].degree();
        assert!(
            comps.iter().all(|c| c.degree() == degree),
            "vector components must share one degree"
        );
        HomVecPoly { degree, comps }
    }

    /// The field with `poly` in component `g` and zero elsewhere.
    pub fn single(g: usize, poly: HomScalarPoly) -> Self {
        let degree = poly.degree();
        let mut comps = [
            HomScalarPoly::zero(degree),
            HomScalarPoly::zero(degree),
            HomScalarPoly::zero(degree),
        ];
        comps[g] = poly;
        HomVecPoly { degree, comps }
    }

    /// Canonical unit field of the degree-`k` block: monomial number
    /// `mono_idx` in component `comp`.
    pub fn unit(degree: usize, comp: usize, mono_idx: usize) -> Self {
        HomVecPoly::single(
            comp,
            HomScalarPoly::monomial(MultiIndex::from_position(degree, mono_idx), Rational::one()),
        )
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn comp(&self, g: usize) -> &HomScalarPoly {
        &self.comps[g]
    }

    pub fn comps(&self) -> &[HomScalarPoly; 3] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(HomScalarPoly::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        HomVecPoly {
            degree: self.degree,
            comps: [
                self.comps[0].scale(c),
                self.comps[1].scale(c),
                self.comps[2].scale(c),
            ],
        }
    }

    /// Coordinates in the canonical component-major order: all of component
    /// 1, then 2, then 3.
    pub fn to_coords(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(3 * mono_count(self.degree));
        for comp in &self.comps {
            out.extend(comp.coeffs().iter().cloned());
        }
        out
    }

    pub fn from_coords(degree: usize, coords: &[Rational]) -> Self {
        let n = mono_count(degree);
        assert_eq!(coords.len(), 3 * n, "coordinate length mismatch");
        HomVecPoly {
            degree,
            comps: [
                HomScalarPoly::from_coeffs(degree, coords[..n].to_vec()),
                HomScalarPoly::from_coeffs(degree, coords[n..2 * n].to_vec()),
                HomScalarPoly::from_coeffs(degree, coords[2 * n..].to_vec()),
            ],
        }
    }

    fn add_inner(&self, other: &Self, minus: bool) -> Self {
        HomVecPoly {
            degree: self.degree,
            comps: [
                self.comps[0].add_inner(&other.comps[0], minus),
                self.comps[1].add_inner(&other.comps[1], minus),
                self.comps[2].add_inner(&other.comps[2], minus),
            ],
        }
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.add_inner(other, false)
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_inner(other, true)
    }
}

forward_poly_binop!(HomVecPoly, Add, add, add_ref);
forward_poly_binop!(HomVecPoly, Sub, sub, sub_ref);

impl Neg for &HomVecPoly {
    type Output = HomVecPoly;
    fn neg(self) -> HomVecPoly {
        self.scale(&Rational::from_int(-1))
    }
}

impl Neg for HomVecPoly {
    type Output = HomVecPoly;
    fn neg(self) -> HomVecPoly {
        -&self
    }
}

impl fmt::Debug for HomVecPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:?}, {:?}, {:?})",
            self.comps[0], self.comps[1], self.comps[2]
        )
    }
}

/// Scalar-times-vector product `a · V`, componentwise and exact.
pub fn hom_mul(a: &HomScalarPoly, v: &HomVecPoly) -> HomVecPoly {
    HomVecPoly::from_comps([a.mul(v.comp(0)), a.mul(v.comp(1)), a.mul(v.comp(2))])
}

/// Dot product of two vector fields; the result has the summed degree.
pub fn dot(a: &HomVecPoly, b: &HomVecPoly) -> HomScalarPoly {
    let mut out = a.comp(0).mul(b.comp(0));
    out = &out + &a.comp(1).mul(b.comp(1));
    &out + &a.comp(2).mul(b.comp(2))
}

/// A vector polynomial of degree at most `p`, stored by homogeneous
/// component: `parts[k]` has degree exactly `k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedVecPoly {
    parts: Vec<HomVecPoly>,
}

impl GradedVecPoly {
    pub fn zero(max_degree: usize) -> Self {
        GradedVecPoly {
            parts: (0..=max_degree).map(HomVecPoly::zero).collect(),
        }
    }

    pub fn from_parts(parts: Vec<HomVecPoly>) -> Self {
        assert!(!parts.is_empty(), "graded polynomial needs a degree-0 part");
        for (k, part) in parts.iter().enumerate() {
            assert_eq!(part.degree(), k, "part {k} has wrong degree");
        }
        GradedVecPoly { parts }
    }

    pub fn max_degree(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn part(&self, k: usize) -> &HomVecPoly {
        &self.parts[k]
    }

    /// Component of degree `k`, treating degrees beyond `max_degree` as zero.
    pub fn part_or_zero(&self, k: usize) -> HomVecPoly {
        self.parts
            .get(k)
            .cloned()
            .unwrap_or_else(|| HomVecPoly::zero(k))
    }

    pub fn parts(&self) -> &[HomVecPoly] {
        &self.parts
    }

    pub fn set_part(&mut self, k: usize, v: HomVecPoly) {
        assert_eq!(v.degree(), k, "part degree mismatch");
        self.parts[k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(HomVecPoly::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GradedVecPoly {
            parts: self.parts.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Sum, zero-extending the shorter polynomial.
    pub fn add(&self, other: &Self) -> Self {
        let p = self.max_degree().max(other.max_degree());
        let parts = (0..=p)
            .map(|k| &self.part_or_zero(k) + &other.part_or_zero(k))
            .collect();
        GradedVecPoly { parts }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    /// All coordinates, degree blocks concatenated in increasing degree,
    /// each block component-major.
    pub fn to_coords(&self) -> Vec<Rational> {
        self.parts.iter().flat_map(|p| p.to_coords()).collect()
    }
}

/// Taylor data of the coefficient `ε` at the basepoint: homogeneous
/// components in shifted coordinates, with a nonzero constant part.
///
/// Components beyond the stored list are exactly zero, so a polynomial
/// coefficient like `ε ≡ 1` is fully described by a degree-0 jet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientJet {
    basepoint: [Rational; 3],
    parts: Vec<HomScalarPoly>,
}

impl CoefficientJet {
    /// Build from homogeneous components; `parts[j]` must have degree `j`
    /// and the constant component must be nonzero.
    pub fn new(parts: Vec<HomScalarPoly>) -> Result<Self> {
        Self::with_basepoint(
            [Rational::zero(), Rational::zero(), Rational::zero()],
            parts,
        )
    }

    /// Same as [`CoefficientJet::new`]; the basepoint is carried for
    /// provenance only, all components are already in shifted coordinates.
    pub fn with_basepoint(basepoint: [Rational; 3], parts: Vec<HomScalarPoly>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidInput(
                "coefficient jet needs at least the constant component".into(),
            ));
        }
        for (j, part) in parts.iter().enumerate() {
            if part.degree() != j {
                return Err(Error::ShapeMismatch(format!(
                    "jet component {j} has degree {}",
                    part.degree()
                )));
            }
        }
        if parts[0].is_zero() {
            return Err(Error::DegenerateCoefficient);
        }
        Ok(CoefficientJet { basepoint, parts })
    }

    /// The constant coefficient `ε ≡ c`.
    pub fn constant(c: Rational) -> Result<Self> {
        Self::new(vec![HomScalarPoly::constant(c)])
    }

    pub fn max_degree(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn basepoint(&self) -> &[Rational; 3] {
        &self.basepoint
    }

    /// Homogeneous component of degree `j` (zero beyond the stored list).
    pub fn component(&self, j: usize) -> HomScalarPoly {
        self.parts
            .get(j)
            .cloned()
            .unwrap_or_else(|| HomScalarPoly::zero(j))
    }

    /// The (nonzero) constant value `ε₀`.
    pub fn constant_value(&self) -> &Rational {
        &self.parts[0].coeffs()[0]
    }
}

/// Degree-`k` homogeneous component of the product `ε · Π`, i.e.
/// `Σ_{k'=0..k} ε_{k−k'} Π_{k'}`.
pub fn graded_product_component(
    eps: &CoefficientJet,
    pi: &GradedVecPoly,
    k: usize,
) -> HomVecPoly {
    let mut out = HomVecPoly::zero(k);
    for kp in 0..=k.min(pi.max_degree()) {
        let factor = eps.component(k - kp);
        if factor.is_zero() {
            continue;
        }
        out = &out + &hom_mul(&factor, pi.part(kp));
    }
    out
}

// ---- JSON encoding ----
//
// Rational: "num/den" string. MultiIndex: [i1,i2,i3].
// HomScalarPoly: {"degree": k, "terms": [{"idx": [...], "coef": "..."}]}
// with zero terms omitted. HomVecPoly: 3-element array of scalar blocks.
// GradedVecPoly: {"max_degree": p, "parts": [...]}.

#[derive(Serialize, Deserialize)]
struct TermDto {
    idx: MultiIndex,
    coef: Rational,
}

#[derive(Serialize, Deserialize)]
struct HomScalarPolyDto {
    degree: usize,
    terms: Vec<TermDto>,
}

impl From<HomScalarPoly> for HomScalarPolyDto {
    fn from(p: HomScalarPoly) -> Self {
        HomScalarPolyDto {
            degree: p.degree(),
            terms: p
                .terms()
                .map(|(idx, coef)| TermDto {
                    idx,
                    coef: coef.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<HomScalarPolyDto> for HomScalarPoly {
    type Error = String;

    fn try_from(dto: HomScalarPolyDto) -> std::result::Result<Self, String> {
        let mut p = HomScalarPoly::zero(dto.degree);
        for term in &dto.terms {
            if term.idx.degree() != dto.degree {
                return Err(format!(
                    "term {:?} has degree {}, block degree is {}",
                    term.idx,
                    term.idx.degree(),
                    dto.degree
                ));
            }
            if !p.coeff(&term.idx).is_zero() {
                return Err(format!("duplicate term index {:?}", term.idx));
            }
            p.set_coeff(&term.idx, term.coef.clone());
        }
        Ok(p)
    }
}

impl Serialize for HomScalarPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HomScalarPolyDto::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomScalarPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = HomScalarPolyDto::deserialize(d)?;
        HomScalarPoly::try_from(dto).map_err(serde::de::Error::custom)
    }
}

impl Serialize for HomVecPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.comps.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomVecPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let comps = Vec::<HomScalarPoly>::deserialize(d)?;
        if comps.len() != 3 {
            return Err(serde::de::Error::custom(format!(
                "vector field must have 3 components, got {}",
                comps.len()
            )));
        }
        let degree = comps[0].degree();
        if comps.iter().any(|c| c.degree() != degree) {
            return Err(serde::de::Error::custom(
                "vector components must share one degree",
            ));
        }
        let mut it = comps.into_iter();
        Ok(HomVecPoly::from_comps([
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        ]))
    }
}

#[derive(Serialize, Deserialize)]
struct GradedVecPolyDto {
    max_degree: usize,
    parts: Vec<HomVecPoly>,
}

impl Serialize for GradedVecPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GradedVecPolyDto {
            max_degree: self.max_degree(),
            parts: self.parts.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedVecPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = GradedVecPolyDto::deserialize(d)?;
        if dto.parts.len() != dto.max_degree + 1 {
            return Err(serde::de::Error::custom(format!(
                "max_degree {} needs {} parts, got {}",
                dto.max_degree,
                dto.max_degree + 1,
                dto.parts.len()
            )));
        }
        for (k, part) in dto.parts.iter().enumerate() {
            if part.degree() != k {
                return Err(serde::de::Error::custom(format!(
                    "part {k} has degree {}",
                    part.degree()
                )));
            }
        }
        Ok(GradedVecPoly { parts: dto.parts })
    }
}

/// On-disk coefficient file: the basepoint is recorded for provenance only,
/// the components are already in shifted coordinates.
#[derive(Serialize, Deserialize)]
struct CoefficientJetDto {
    max_degree: usize,
    #[serde(default = "zero_basepoint")]
    basepoint: [Rational; 3],
    parts: Vec<HomScalarPoly>,
}

fn zero_basepoint() -> [Rational; 3] {
    [Rational::zero(), Rational::zero(), Rational::zero()]
}

impl Serialize for CoefficientJet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoefficientJetDto {
            max_degree: self.max_degree(),
            basepoint: self.basepoint.clone(),
            parts: self.parts.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoefficientJet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = CoefficientJetDto::deserialize(d)?;
        if dto.parts.len() != dto.max_degree + 1 {
            return Err(serde::de::Error::custom(format!(
                "max_degree {} needs {} parts, got {}",
                dto.max_degree,
                dto.max_degree + 1,
                dto.parts.len()
            )));
        }
        CoefficientJet::with_basepoint(dto.basepoint, dto.parts)
            .map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

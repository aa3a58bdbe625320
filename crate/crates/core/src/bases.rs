//! Explicit bases of the solenoidal, irrotational and harmonic subspaces of
//! homogeneous polynomial vector fields, and deterministic complements.
//!
//! The divergence-free space of degree `k` is spanned by five closed-form
//! generator families ([`psi`]). The irrotational space is spanned by
//! gradients of degree-`k+1` monomials. Harmonic fields (divergence free and
//! curl free at once) are gradients of harmonic scalar polynomials, obtained
//! from an exact nullspace of the scalar Laplacian.
//!
//! The complements written `*` below are not canonical; this library fixes
//! them deterministically by greedy column reduction: extend the harmonic
//! basis by solenoidal (resp. gradient) generators in enumeration order,
//! keeping exactly the vectors that enlarge the span. Every produced basis
//! is certified linearly independent by exact rank.

use crate::cache::memo;
use crate::diffops::{self, OpKind};
use crate::linalg::{IncrementalSpan, LinearSolver, Matrix};
use crate::multiindex::{mono_count, MultiIndex};
use crate::poly::{HomScalarPoly, HomVecPoly};
use crate::rational::Rational;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

/// Tags naming which space a basis spans.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum SpaceTag {
    /// Divergence-free fields of one degree.
    #[serde(rename = "sol")]
    Solenoidal,
    /// Curl-free fields of one degree.
    #[serde(rename = "irr")]
    Irrotational,
    /// Fields that are both divergence free and curl free.
    #[serde(rename = "harm")]
    Harmonic,
    /// Deterministic complement of the harmonic space inside the solenoidal
    /// space.
    #[serde(rename = "sol-star")]
    SolenoidalStar,
    /// Deterministic complement of the harmonic space inside the
    /// irrotational space.
    #[serde(rename = "irr-star")]
    IrrotationalStar,
    /// Range of the graded gradient (coincides with the irrotational space).
    #[serde(rename = "range-grad")]
    GradientRange,
    /// Kernel of the graded curl (coincides with the irrotational space).
    #[serde(rename = "ker-curl")]
    CurlKernel,
    /// Kernel of the vector Laplacian restricted to the starred solenoidal
    /// complement two degrees up.
    #[serde(rename = "lap-kernel")]
    VecLapKernel,
}

/// A certified basis of one tagged subspace of the degree-`k` block.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SpaceBasis {
    pub tag: SpaceTag,
    pub degree: usize,
    pub vectors: Vec<HomVecPoly>,
}

impl SpaceBasis {
    /// Certify independence and wrap. Panics if the vectors are dependent:
    /// every builder in this module produces provably independent sets, so a
    /// failure means a bug, not bad input.
    pub(crate) fn certified(tag: SpaceTag, degree: usize, vectors: Vec<HomVecPoly>) -> Self {
        let mut span = IncrementalSpan::new(3 * mono_count(degree));
        for (i, v) in vectors.iter().enumerate() {
            assert_eq!(v.degree(), degree, "basis vector degree mismatch");
            assert!(
                span.insert(&v.to_coords()),
                "{tag:?} basis vector {i} is dependent at degree {degree}"
            );
        }
        SpaceBasis {
            tag,
            degree,
            vectors,
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Linear combination `Σ coeffs[i] · vectors[i]`.
    pub fn combination(&self, coeffs: &[Rational]) -> HomVecPoly {
        assert_eq!(coeffs.len(), self.vectors.len(), "coefficient count");
        let mut out = HomVecPoly::zero(self.degree);
        for (c, v) in coeffs.iter().zip(&self.vectors) {
            if !c.is_zero() {
                out = &out + &v.scale(c);
            }
        }
        out
    }

    /// Coordinate matrix with one column per basis vector.
    pub fn coordinate_matrix(&self) -> Matrix {
        let cols: Vec<Vec<Rational>> = self.vectors.iter().map(HomVecPoly::to_coords).collect();
        Matrix::from_columns(3 * mono_count(self.degree), &cols)
    }

    /// Exact coordinates of `v` in this basis, or `None` if `v` is outside
    /// the span.
    pub fn membership_coords(&self, v: &HomVecPoly) -> Option<Vec<Rational>> {
        if v.degree() != self.degree {
            return None;
        }
        let solver = LinearSolver::new(&self.coordinate_matrix());
        solver.solve(&v.to_coords())
    }
}

/// Label of one divergence-free generator: degree, family 1–5 and a
/// multi-index of that degree.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PsiLabel {
    pub degree: usize,
    pub family: usize,
    pub index: MultiIndex,
}

impl PsiLabel {
    pub fn new(degree: usize, family: usize, index: MultiIndex) -> Self {
        PsiLabel {
            degree,
            family,
            index,
        }
    }
}

/// The divergence-free generator named by `label`:
///
/// * family 1: `(X^i, 0, 0)` with `i1 = 0`
/// * family 2: `(0, X^i, 0)` with `i2 = 0`
/// * family 3: `(0, 0, X^i)` with `i3 = 0`
/// * family 4: `((i3+1)·X^i, 0, −i1·X^{i−e1+e3})` with `i1 > 0`
/// * family 5: `(0, (i3+1)·X^i, −i2·X^{i−e2+e3})` with `i2 > 0`
pub fn psi(label: &PsiLabel) -> Result<HomVecPoly> {
    let i = &label.index;
    if i.degree() != label.degree {
        return Err(Error::InadmissibleLabel(format!(
            "index {i:?} has degree {}, label says {}",
            i.degree(),
            label.degree
        )));
    }
    let admissible = |ok: bool, constraint: &str| -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::InadmissibleLabel(format!(
                "family {} requires {constraint} (index {i:?})",
                label.family
            )))
        }
    };
    let mono = |idx: MultiIndex, c: i64| HomScalarPoly::monomial(idx, Rational::from_int(c));
    match label.family {
        1 => {
            admissible(i.exp(0) == 0, "i1 = 0")?;
            Ok(HomVecPoly::single(0, mono(*i, 1)))
        }
        2 => {
            admissible(i.exp(1) == 0, "i2 = 0")?;
            Ok(HomVecPoly::single(1, mono(*i, 1)))
        }
        3 => {
            admissible(i.exp(2) == 0, "i3 = 0")?;
            Ok(HomVecPoly::single(2, mono(*i, 1)))
        }
        4 => {
            admissible(i.exp(0) > 0, "i1 > 0")?;
            let first = mono(*i, (i.exp(2) + 1) as i64);
            let shifted = i.checked_dec(0).expect("i1 > 0").bump(2);
            let third = mono(shifted, -(i.exp(0) as i64));
            Ok(HomVecPoly::from_comps([
                first,
                HomScalarPoly::zero(label.degree),
                third,
            ]))
        }
        5 => {
            admissible(i.exp(1) > 0, "i2 > 0")?;
            let second = mono(*i, (i.exp(2) + 1) as i64);
            let shifted = i.checked_dec(1).expect("i2 > 0").bump(2);
            let third = mono(shifted, -(i.exp(1) as i64));
            Ok(HomVecPoly::from_comps([
                HomScalarPoly::zero(label.degree),
                second,
                third,
            ]))
        }
        f => Err(Error::InadmissibleLabel(format!(
            "family must be 1..=5, got {f}"
        ))),
    }
}

/// All admissible labels of degree `k`, in the fixed enumeration order:
/// family ascending, index in canonical monomial order within each family.
pub fn psi_labels(k: usize) -> Vec<PsiLabel> {
    let mut labels = Vec::new();
    for family in 1..=5 {
        for index in MultiIndex::enumerate(k) {
            let ok = match family {
                1 => index.exp(0) == 0,
                2 => index.exp(1) == 0,
                3 => index.exp(2) == 0,
                4 => index.exp(0) > 0,
                5 => index.exp(1) > 0,
                _ => unreachable!(),
            };
            if ok {
                labels.push(PsiLabel::new(k, family, index));
            }
        }
    }
    labels
}

static SOL_CACHE: LazyLock<Mutex<HashMap<usize, Arc<SpaceBasis>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));
static IRR_CACHE: LazyLock<Mutex<HashMap<usize, Arc<SpaceBasis>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));
static HARM_CACHE: LazyLock<Mutex<HashMap<usize, Arc<SpaceBasis>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));
#[allow(clippy::type_complexity)]
static STAR_CACHE: LazyLock<Mutex<HashMap<usize, (Arc<SpaceBasis>, Arc<SpaceBasis>)>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Basis of the degree-`k` divergence-free space, size `(k+1)(k+3)`
/// (the three constant fields at `k = 0`).
pub fn solenoidal_basis(k: usize) -> Arc<SpaceBasis> {
    memo(&SOL_CACHE, k, || {
        let vectors: Vec<HomVecPoly> = psi_labels(k)
            .iter()
            .map(|l| psi(l).expect("enumerated labels are admissible"))
            .collect();
        Arc::new(SpaceBasis::certified(SpaceTag::Solenoidal, k, vectors))
    })
}

/// Basis of the degree-`k` curl-free space: gradients of the degree-`k+1`
/// monomials, size `(k+2)(k+3)/2`.
pub fn irrotational_basis(k: usize) -> Arc<SpaceBasis> {
    memo(&IRR_CACHE, k, || {
        let vectors: Vec<HomVecPoly> = MultiIndex::enumerate(k + 1)
            .into_iter()
            .map(|i| diffops::gradient(&HomScalarPoly::monomial(i, Rational::one())))
            .collect();
        Arc::new(SpaceBasis::certified(SpaceTag::Irrotational, k, vectors))
    })
}

/// Basis of the degree-`k` harmonic space (divergence free and curl free),
/// size `2k+3`: gradients of an exact nullspace basis of the scalar
/// Laplacian one degree up.
pub fn harmonic_basis(k: usize) -> Arc<SpaceBasis> {
    memo(&HARM_CACHE, k, || {
        let vectors: Vec<HomVecPoly> = if k == 0 {
            (0..3).map(|g| HomVecPoly::unit(0, g, 0)).collect()
        } else {
            let lap = diffops::operator_matrix(OpKind::ScalarLap, k - 1);
            diffops::nullspace(&lap)
                .into_iter()
                .map(|coords| {
                    let h = HomScalarPoly::from_coeffs(k + 1, coords);
                    diffops::gradient(&h)
                })
                .collect()
        };
        Arc::new(SpaceBasis::certified(SpaceTag::Harmonic, k, vectors))
    })
}

/// Deterministic complements of the harmonic space inside the solenoidal and
/// irrotational spaces, of sizes `k(k+2)` and `k(k+1)/2`. Both are empty at
/// `k = 0`, where the whole block is harmonic.
pub fn star_complements(k: usize) -> (Arc<SpaceBasis>, Arc<SpaceBasis>) {
    memo(&STAR_CACHE, k, || {
        if k == 0 {
            return (
                Arc::new(SpaceBasis {
                    tag: SpaceTag::SolenoidalStar,
                    degree: 0,
                    vectors: Vec::new(),
                }),
                Arc::new(SpaceBasis {
                    tag: SpaceTag::IrrotationalStar,
                    degree: 0,
                    vectors: Vec::new(),
                }),
            );
        }
        let harm = harmonic_basis(k);
        let sol_star = greedy_complement(SpaceTag::SolenoidalStar, &harm, &solenoidal_basis(k));
        let irr_star = greedy_complement(SpaceTag::IrrotationalStar, &harm, &irrotational_basis(k));
        (Arc::new(sol_star), Arc::new(irr_star))
    })
}

/// Extend `seed` greedily by vectors of `pool` (in pool order) to a basis of
/// the pool's span; the added vectors form the complement.
fn greedy_complement(tag: SpaceTag, seed: &SpaceBasis, pool: &SpaceBasis) -> SpaceBasis {
    let degree = pool.degree;
    let mut span = IncrementalSpan::new(3 * mono_count(degree));
    for v in &seed.vectors {
        let fresh = span.insert(&v.to_coords());
        assert!(fresh, "seed basis must be independent");
    }
    let mut added = Vec::new();
    for v in &pool.vectors {
        if span.insert(&v.to_coords()) {
            added.push(v.clone());
        }
    }
    // final span = seed + pool; rank equal to the pool dimension certifies
    // that the seed space is contained in the pool space
    assert_eq!(
        span.rank(),
        pool.len(),
        "seed must lie inside the pool span"
    );
    SpaceBasis::certified(tag, degree, added)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffops::{curl, divergence};

    #[test]
    fn psi_constant_field() {
        let v = psi(&PsiLabel::new(0, 1, MultiIndex::zero())).unwrap();
        assert_eq!(v, HomVecPoly::unit(0, 0, 0));
    }

    #[test]
    fn psi_family_four_by_hand() {
        // (k=2, j=4, i=(1,0,1)) → (2·x1x3, 0, −x3²), divergence free
        let v = psi(&PsiLabel::new(2, 4, MultiIndex::new(1, 0, 1))).unwrap();
        assert_eq!(
            v.comp(0),
            &HomScalarPoly::monomial(MultiIndex::new(1, 0, 1), Rational::from_int(2))
        );
        assert!(v.comp(1).is_zero());
        assert_eq!(
            v.comp(2),
            &HomScalarPoly::monomial(MultiIndex::new(0, 0, 2), Rational::from_int(-1))
        );
        assert!(divergence(&v).is_zero());
    }

    #[test]
    fn psi_rejects_inadmissible() {
        let err = psi(&PsiLabel::new(1, 4, MultiIndex::new(0, 1, 0))).unwrap_err();
        assert!(err.to_string().contains("i1 > 0"));
        assert!(psi(&PsiLabel::new(2, 1, MultiIndex::new(1, 1, 0))).is_err());
        assert!(psi(&PsiLabel::new(1, 6, MultiIndex::new(0, 1, 0))).is_err());
        // degree mismatch between label and index
        assert!(psi(&PsiLabel::new(3, 1, MultiIndex::new(0, 1, 0))).is_err());
    }

    #[test]
    fn solenoidal_sizes_and_property() {
        assert_eq!(solenoidal_basis(0).len(), 3);
        assert_eq!(solenoidal_basis(1).len(), 8);
        assert_eq!(solenoidal_basis(2).len(), 15);
        for k in 0..=4 {
            let basis = solenoidal_basis(k);
            assert_eq!(basis.len(), (k + 1) * (k + 3));
            for v in &basis.vectors {
                assert!(divergence(v).is_zero());
            }
        }
    }

    #[test]
    fn irrotational_sizes_and_property() {
        assert_eq!(irrotational_basis(1).len(), 6);
        assert_eq!(irrotational_basis(3).len(), 15);
        for k in 0..=4 {
            let basis = irrotational_basis(k);
            assert_eq!(basis.len(), (k + 2) * (k + 3) / 2);
            for v in &basis.vectors {
                assert!(curl(v).is_zero());
            }
        }
    }

    #[test]
    fn harmonic_sizes_and_property() {
        assert_eq!(harmonic_basis(0).len(), 3);
        assert_eq!(harmonic_basis(1).len(), 5);
        for k in 0..=5 {
            let basis = harmonic_basis(k);
            assert_eq!(basis.len(), 2 * k + 3);
            for v in &basis.vectors {
                assert!(divergence(v).is_zero());
                assert!(curl(v).is_zero());
            }
        }
    }

    #[test]
    fn star_complement_sizes() {
        for (k, sol, irr) in [(1, 3, 1), (2, 8, 3), (4, 24, 10)] {
            let (s, i) = star_complements(k);
            assert_eq!((s.len(), i.len()), (sol, irr));
            assert_eq!(s.len(), k * (k + 2));
            assert_eq!(i.len(), k * (k + 1) / 2);
        }
        let (s0, i0) = star_complements(0);
        assert!(s0.is_empty() && i0.is_empty());
    }

    #[test]
    fn three_way_direct_sum_is_full_block() {
        for k in 1..=5 {
            let (sol_star, irr_star) = star_complements(k);
            let harm = harmonic_basis(k);
            let mut span = IncrementalSpan::new(3 * mono_count(k));
            for v in sol_star
                .vectors
                .iter()
                .chain(&irr_star.vectors)
                .chain(&harm.vectors)
            {
                assert!(span.insert(&v.to_coords()));
            }
            assert_eq!(span.rank(), 3 * mono_count(k));
        }
    }

    #[test]
    fn harmonic_is_the_intersection() {
        // dim(S ∩ I) = dim S + dim I − dim(S + I) computed exactly, and each
        // harmonic basis element has coordinates in both spaces.
        for k in 1..=4 {
            let sol = solenoidal_basis(k);
            let irr = irrotational_basis(k);
            let mut span = IncrementalSpan::new(3 * mono_count(k));
            let mut total = 0;
            for v in sol.vectors.iter().chain(&irr.vectors) {
                if span.insert(&v.to_coords()) {
                    total += 1;
                }
            }
            let inter_dim = sol.len() + irr.len() - total;
            assert_eq!(inter_dim, 2 * k + 3);
            let harm = harmonic_basis(k);
            for v in &harm.vectors {
                assert!(sol.membership_coords(v).is_some());
                assert!(irr.membership_coords(v).is_some());
            }
        }
    }

    #[test]
    fn psi_union_counts_match_kernel_bookkeeping() {
        for k in 1..=6 {
            let labels = psi_labels(k);
            let singles = labels.iter().filter(|l| l.family <= 3).count();
            let doubles = labels.iter().filter(|l| l.family >= 4).count();
            assert_eq!(singles, 3 * (k + 1));
            assert_eq!(doubles, k * (k + 1));
            assert_eq!(labels.len(), (k + 1) * (k + 3));
        }
    }

    #[test]
    fn membership_rejects_outside_vectors() {
        let harm = harmonic_basis(2);
        // (x1x2, 0, 0) has nonzero divergence, so it is not harmonic
        let v = HomVecPoly::single(
            0,
            HomScalarPoly::monomial(MultiIndex::new(1, 1, 0), Rational::one()),
        );
        assert!(harm.membership_coords(&v).is_none());
    }
}

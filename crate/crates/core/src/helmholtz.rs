//! Helmholtz decomposition of homogeneous polynomial vector fields.
//!
//! Every degree-`k` field splits uniquely as `V = F + G + H` with `F` in the
//! starred solenoidal complement, `G` in the starred irrotational complement
//! and `H` harmonic ([`decompose`]). The three tagged bases concatenate to a
//! square invertible coordinate system, whose elimination is memoized per
//! degree.
//!
//! [`split_sol_irr`] is the cheaper two-way split into a solenoidal plus an
//! irrotational part. That split is *not* unique (any harmonic gradient can
//! be moved across), so only membership and reconstruction are guaranteed;
//! the particular choice is fixed by the deterministic Laplace solve.

use crate::bases::{harmonic_basis, star_complements};
use crate::cache::memo;
use crate::diffops::{self, OpKind};
use crate::linalg::LinearSolver;
use crate::multiindex::mono_count;
use crate::poly::{HomScalarPoly, HomVecPoly};
use crate::rational::Rational;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

/// The unique three-way split of a degree-`k` field.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HelmholtzTriple {
    pub degree: usize,
    /// Component in the starred solenoidal complement.
    pub sol_star: HomVecPoly,
    /// Component in the starred irrotational complement.
    pub irr_star: HomVecPoly,
    /// Harmonic component.
    pub harmonic: HomVecPoly,
}

impl HelmholtzTriple {
    /// `F + G + H`, which reconstructs the decomposed field exactly.
    pub fn reconstruct(&self) -> HomVecPoly {
        &(&self.sol_star + &self.irr_star) + &self.harmonic
    }
}

static SOLVER_CACHE: LazyLock<Mutex<HashMap<usize, Arc<LinearSolver>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Memoized elimination of the square system whose columns are the
/// concatenated starred-solenoidal, starred-irrotational and harmonic bases
/// of degree `k`.
fn decomposition_solver(k: usize) -> Arc<LinearSolver> {
    memo(&SOLVER_CACHE, k, || {
        let (sol_star, irr_star) = star_complements(k);
        let harm = harmonic_basis(k);
        let mut columns = Vec::with_capacity(3 * mono_count(k));
        for v in sol_star
            .vectors
            .iter()
            .chain(&irr_star.vectors)
            .chain(&harm.vectors)
        {
            columns.push(v.to_coords());
        }
        let matrix = crate::linalg::Matrix::from_columns(3 * mono_count(k), &columns);
        let solver = LinearSolver::new(&matrix);
        assert_eq!(
            solver.rank(),
            3 * mono_count(k),
            "three-way basis must be square invertible at degree {k}"
        );
        Arc::new(solver)
    })
}

/// Unique decomposition `V = F + G + H`. At degree 0 the whole block is
/// harmonic, so `F = G = 0` and `H = V`.
///
/// ```
/// use qtmaxwell::helmholtz::decompose;
/// use qtmaxwell::{HomVecPoly, HomScalarPoly, MultiIndex, Rational};
///
/// // V = (x1, 0, 0) has divergence 1, so its irrotational part is nonzero
/// let x1 = HomScalarPoly::monomial(MultiIndex::unit(0), Rational::one());
/// let v = HomVecPoly::single(0, x1);
/// let triple = decompose(&v);
/// assert!(!triple.irr_star.is_zero());
/// assert_eq!(triple.reconstruct(), v);
/// ```
pub fn decompose(v: &HomVecPoly) -> HelmholtzTriple {
    let k = v.degree();
    if k == 0 {
        return HelmholtzTriple {
            degree: 0,
            sol_star: HomVecPoly::zero(0),
            irr_star: HomVecPoly::zero(0),
            harmonic: v.clone(),
        };
    }
    let solver = decomposition_solver(k);
    let coords = solver
        .solve(&v.to_coords())
        .expect("square invertible system");
    let (sol_star, irr_star) = star_complements(k);
    let harm = harmonic_basis(k);
    let n_s = sol_star.len();
    let n_i = irr_star.len();
    HelmholtzTriple {
        degree: k,
        sol_star: sol_star.combination(&coords[..n_s]),
        irr_star: irr_star.combination(&coords[n_s..n_s + n_i]),
        harmonic: harm.combination(&coords[n_s + n_i..]),
    }
}

/// Two-way split `V = F + G` with `F` solenoidal and `G` irrotational:
/// solve `Δg = ∇·V` for a scalar `g` two degrees up (deterministic
/// particular solution), set `G = ∇g` and `F = V − G`.
pub fn split_sol_irr(v: &HomVecPoly) -> (HomVecPoly, HomVecPoly) {
    let m = v.degree();
    if m == 0 {
        return (v.clone(), HomVecPoly::zero(0));
    }
    let rhs = diffops::divergence(v);
    let lap = diffops::operator_matrix(OpKind::ScalarLap, m - 1);
    let g_coeffs = lap
        .matrix
        .solve(rhs.coeffs())
        .expect("scalar Laplacian is surjective on homogeneous blocks");
    let g_poly = HomScalarPoly::from_coeffs(m + 1, g_coeffs);
    let irrotational = diffops::gradient(&g_poly);
    let solenoidal = v - &irrotational;
    (solenoidal, irrotational)
}

/// Scale every component of a triple (decomposition is linear).
impl HelmholtzTriple {
    pub fn scale(&self, c: &Rational) -> Self {
        HelmholtzTriple {
            degree: self.degree,
            sol_star: self.sol_star.scale(c),
            irr_star: self.irr_star.scale(c),
            harmonic: self.harmonic.scale(c),
        }
    }
}

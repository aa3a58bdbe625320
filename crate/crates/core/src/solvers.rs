//! Exact right inverses of the two restricted operators driving the
//! quasi-Trefftz construction.
//!
//! The divergence restricted to the starred irrotational complement one
//! degree up is bijective, so [`solve_div_irrotational`] returns *the*
//! preimage. The vector Laplacian restricted to the starred solenoidal
//! complement two degrees up is surjective onto divergence-free fields but
//! has a kernel of dimension `2k+5`; [`solve_veclap_solenoidal`] returns the
//! deterministic particular preimage (free coordinates zero) and
//! [`veclap_restricted_kernel`] spans the remaining freedom.
//!
//! The `_full` variants solve in the unrestricted spaces instead; they feed
//! the single-step construction route kept as a cross-check.

use crate::bases::{solenoidal_basis, star_complements, SpaceBasis, SpaceTag};
use crate::cache::memo;
use crate::diffops::{divergence, vector_laplacian};
use crate::linalg::{LinearSolver, Matrix};
use crate::multiindex::mono_count;
use crate::poly::{HomScalarPoly, HomVecPoly};
use crate::rational::Rational;
use crate::{Error, Result};
use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

static DIV_IRR_CACHE: LazyLock<Mutex<HashMap<usize, Arc<LinearSolver>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));
static VECLAP_STAR_CACHE: LazyLock<Mutex<HashMap<usize, Arc<LinearSolver>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));
static VECLAP_FULL_CACHE: LazyLock<Mutex<HashMap<usize, Arc<LinearSolver>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));
static KERNEL_CACHE: LazyLock<Mutex<HashMap<usize, Arc<SpaceBasis>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Matrix of `op` applied to each vector of `basis`, one column per basis
/// vector, in canonical codomain coordinates.
fn op_on_basis(
    basis: &SpaceBasis,
    codomain_dim: usize,
    op: impl Fn(&HomVecPoly) -> Vec<Rational>,
) -> Matrix {
    let columns: Vec<Vec<Rational>> = basis.vectors.iter().map(op).collect();
    Matrix::from_columns(codomain_dim, &columns)
}

/// Elimination of "divergence on the starred irrotational basis of degree
/// `k+1`", a square bijective system.
fn div_irr_solver(k: usize) -> Arc<LinearSolver> {
    memo(&DIV_IRR_CACHE, k, || {
        let (_, irr_star) = star_complements(k + 1);
        let m = op_on_basis(&irr_star, mono_count(k), |v| {
            divergence(v).coeffs().to_vec()
        });
        let solver = LinearSolver::new(&m);
        assert_eq!(
            solver.rank(),
            mono_count(k),
            "restricted divergence must be bijective at degree {k}"
        );
        Arc::new(solver)
    })
}

fn veclap_star_solver(k: usize) -> Arc<LinearSolver> {
    memo(&VECLAP_STAR_CACHE, k, || {
        let (sol_star, _) = star_complements(k + 2);
        let m = op_on_basis(&sol_star, 3 * mono_count(k), |v| {
            vector_laplacian(v).to_coords()
        });
        Arc::new(LinearSolver::new(&m))
    })
}

fn veclap_full_solver(k: usize) -> Arc<LinearSolver> {
    memo(&VECLAP_FULL_CACHE, k, || {
        let sol = solenoidal_basis(k + 2);
        let m = op_on_basis(&sol, 3 * mono_count(k), |v| {
            vector_laplacian(v).to_coords()
        });
        Arc::new(LinearSolver::new(&m))
    })
}

/// The unique field `G` in the starred irrotational complement of degree
/// `k+1` with `∇·G = rhs` (degree `k`).
pub fn solve_div_irrotational(rhs: &HomScalarPoly) -> HomVecPoly {
    let k = rhs.degree();
    let solver = div_irr_solver(k);
    let coords = solver
        .solve(rhs.coeffs())
        .expect("restricted divergence is bijective");
    let (_, irr_star) = star_complements(k + 1);
    irr_star.combination(&coords)
}

/// Closed-form full-space divergence preimage: each term `λ·X^i` of `rhs`
/// contributes `λ/(i1+1) · X^{i+e1}` to the first component.
pub fn solve_div_any(rhs: &HomScalarPoly) -> HomVecPoly {
    let k = rhs.degree();
    let mut first = HomScalarPoly::zero(k + 1);
    for (idx, coef) in rhs.terms() {
        let denom = Rational::from_int(idx.exp(0) as i64 + 1);
        let lifted = idx.bump(0);
        first.set_coeff(&lifted, coef / &denom);
    }
    HomVecPoly::single(0, first)
}

/// A field `F` in the starred solenoidal complement of degree `k+2` with
/// `ΔF = rhs`, for divergence-free `rhs` of degree `k`. The particular
/// preimage is fixed by the deterministic elimination (free coordinates
/// zero); add kernel vectors for the other solutions.
pub fn solve_veclap_solenoidal(rhs: &HomVecPoly) -> Result<HomVecPoly> {
    let k = rhs.degree();
    if !divergence(rhs).is_zero() {
        return Err(Error::DivergenceObstruction);
    }
    let solver = veclap_star_solver(k);
    let coords = solver
        .solve(&rhs.to_coords())
        .expect("restricted vector Laplacian is surjective onto solenoidal fields");
    let (sol_star, _) = star_complements(k + 2);
    Ok(sol_star.combination(&coords))
}

/// Like [`solve_veclap_solenoidal`] but solving in the full solenoidal
/// space of degree `k+2`; the result may carry a harmonic component.
pub fn solve_veclap_solenoidal_full(rhs: &HomVecPoly) -> Result<HomVecPoly> {
    let k = rhs.degree();
    if !divergence(rhs).is_zero() {
        return Err(Error::DivergenceObstruction);
    }
    let solver = veclap_full_solver(k);
    let coords = solver
        .solve(&rhs.to_coords())
        .expect("vector Laplacian is surjective between solenoidal blocks");
    Ok(solenoidal_basis(k + 2).combination(&coords))
}

/// Exact kernel basis of the vector Laplacian restricted to the starred
/// solenoidal complement of degree `k+2`; its size is `2k+5`.
pub fn veclap_restricted_kernel(k: usize) -> Arc<SpaceBasis> {
    memo(&KERNEL_CACHE, k, || {
        let solver = veclap_star_solver(k);
        let (sol_star, _) = star_complements(k + 2);
        let vectors: Vec<HomVecPoly> = solver
            .nullspace()
            .into_iter()
            .map(|coords| sol_star.combination(&coords))
            .collect();
        Arc::new(SpaceBasis::certified(
            SpaceTag::VecLapKernel,
            k + 2,
            vectors,
        ))
    })
}

/// Rank and kernel dimension of the vector Laplacian restricted to the full
/// solenoidal space (used by the invariant suites).
pub fn veclap_on_solenoidal_rank_nullity(k: usize) -> (usize, usize) {
    let solver = veclap_full_solver(k);
    (solver.rank(), solver.cols() - solver.rank())
}

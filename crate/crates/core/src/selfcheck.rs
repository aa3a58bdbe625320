//! Invariant suites runnable from the CLI.
//!
//! Each suite re-derives a family of structural facts from scratch — rank
//! identities of the graded operators, dimension tables of the tagged
//! subspaces, uniqueness of the Helmholtz decomposition under permuted
//! elimination, restricted-operator kernels, the sign self-test, and one
//! enumerated-basis-versus-oracle comparison — and reports pass/fail with a
//! short detail line. Failures indicate a broken build, never bad user
//! input.

use crate::bases::{harmonic_basis, irrotational_basis, solenoidal_basis, star_complements};
use crate::diffops::{self, curl, divergence, gradient, OpKind};
use crate::helmholtz::{decompose, HelmholtzTriple};
use crate::linalg::{LinearSolver, Matrix};
use crate::multiindex::{mono_count, MultiIndex};
use crate::poly::{CoefficientJet, HomScalarPoly, HomVecPoly};
use crate::qtspace::{dimension_formula, enumerate_basis, oracle_dimension, sign_self_test};
use crate::rational::Rational;
use crate::solvers::{
    solve_div_irrotational, veclap_on_solenoidal_rank_nullity, veclap_restricted_kernel,
};

/// Outcome of one suite.
#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl SuiteResult {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        SuiteResult {
            name,
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        SuiteResult {
            name,
            passed: false,
            detail: detail.into(),
        }
    }
}

/// Run every suite. `max_k` bounds the operator degree range, `max_p` the
/// enumerate-versus-oracle degree, `seed` drives the randomized checks
/// deterministically.
pub fn run(max_k: usize, max_p: usize, seed: u64) -> Vec<SuiteResult> {
    vec![
        exact_sequence_suite(max_k),
        dimension_table_suite(max_k),
        helmholtz_suite(max_k, seed),
        restricted_operator_suite(max_k),
        sign_suite(),
        enumerate_vs_oracle_suite(max_p, seed),
    ]
}

/// Deterministic 64-bit generator (splitmix64), enough for reproducible
/// random polynomials without a dependency.
pub(crate) struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Small rational with numerator in [−9, 9] and denominator in {1,2,3}.
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

    /// Random coefficient jet of the given depth with constant part `e0`.
    pub fn jet(&mut self, depth: usize, e0: Rational) -> CoefficientJet {
        let mut parts = vec![HomScalarPoly::constant(e0)];
        for j in 1..=depth {
            parts.push(self.scalar_poly(j));
        }
        CoefficientJet::new(parts).expect("nonzero constant part")
    }
}

fn exact_sequence_suite(max_k: usize) -> SuiteResult {
    exact_sequence_suite_with(&diffops::operator_matrix, max_k)
}

/// The exact-sequence checks against a pluggable matrix source, so tests can
/// inject a corrupted operator and watch the suite fail.
pub(crate) fn exact_sequence_suite_with(
    matrix_of: &dyn Fn(OpKind, usize) -> std::sync::Arc<diffops::OperatorMatrix>,
    max_k: usize,
) -> SuiteResult {
    const NAME: &str = "exact-sequence";
    for k in 0..=max_k {
        let grad = matrix_of(OpKind::Grad, k);
        let div = matrix_of(OpKind::Div, k);
        let curl_m = matrix_of(OpKind::Curl, k);
        let rk_grad = diffops::rank(&grad);
        let rk_div = diffops::rank(&div);
        let rk_curl = diffops::rank(&curl_m);
        let checks = [
            (rk_grad == (k + 2) * (k + 3) / 2, "rank of gradient"),
            (rk_div == (k + 1) * (k + 2) / 2, "rank of divergence"),
            (rk_curl == (k + 1) * (k + 3), "rank of curl"),
            (
                grad.cols() - rk_grad == 0,
                "gradient kernel must be trivial",
            ),
            (
                curl_m.cols() - rk_curl == (k + 3) * (k + 4) / 2,
                "curl kernel dimension",
            ),
            (
                div.cols() - rk_div == (k + 2) * (k + 4),
                "divergence kernel dimension",
            ),
        ];
        for (ok, what) in checks {
            if !ok {
                return SuiteResult::fail(NAME, format!("{what} failed at k = {k}"));
            }
        }
        // zero compositions, checked symbolically on every basis monomial
        for i in MultiIndex::enumerate(k + 2) {
            let f = HomScalarPoly::monomial(i, Rational::one());
            if !curl(&gradient(&f)).is_zero() {
                return SuiteResult::fail(NAME, format!("curl∘grad ≠ 0 at k = {k}"));
            }
        }
        for comp in 0..3 {
            for m in 0..mono_count(k + 2) {
                let v = HomVecPoly::unit(k + 2, comp, m);
                if !divergence(&curl(&v)).is_zero() {
                    return SuiteResult::fail(NAME, format!("div∘curl ≠ 0 at k = {k}"));
                }
            }
        }
        // range equalities follow from zero composition plus rank matching
        let rk_grad_up = diffops::rank(&matrix_of(OpKind::Grad, k + 2));
        let curl_up = matrix_of(OpKind::Curl, k + 1);
        let rk_curl_up = diffops::rank(&curl_up);
        if rk_grad_up != curl_up.cols() - rk_curl_up {
            return SuiteResult::fail(
                NAME,
                format!("gradient range ≠ curl kernel at k = {k}"),
            );
        }
        if rk_curl_up != div.cols() - rk_div {
            return SuiteResult::fail(NAME, format!("curl range ≠ divergence kernel at k = {k}"));
        }
    }
    SuiteResult::pass(NAME, format!("rank identities and compositions, k ≤ {max_k}"))
}

fn dimension_table_suite(max_k: usize) -> SuiteResult {
    const NAME: &str = "dimension-tables";
    for k in 1..=max_k {
        let sol = solenoidal_basis(k);
        let irr = irrotational_basis(k);
        let harm = harmonic_basis(k);
        let (sol_star, irr_star) = star_complements(k);
        let table = [
            (sol.len(), (k + 1) * (k + 3), "solenoidal"),
            (irr.len(), (k + 2) * (k + 3) / 2, "irrotational"),
            (harm.len(), 2 * k + 3, "harmonic"),
            (sol_star.len(), k * (k + 2), "solenoidal complement"),
            (irr_star.len(), k * (k + 1) / 2, "irrotational complement"),
        ];
        for (got, want, what) in table {
            if got != want {
                return SuiteResult::fail(
                    NAME,
                    format!("{what} basis has {got} vectors at k = {k}, want {want}"),
                );
            }
        }
        // the three-way sum must fill the block
        let full = 3 * mono_count(k);
        if sol_star.len() + irr_star.len() + harm.len() != full {
            return SuiteResult::fail(NAME, format!("three-way sum short at k = {k}"));
        }
    }
    SuiteResult::pass(NAME, format!("all tagged dimensions, k ≤ {max_k}"))
}

/// Decompose by solving the concatenated system with rows visited in a
/// seeded random order; uniqueness means the permuted solve returns the
/// same triple.
fn decompose_permuted(v: &HomVecPoly, rng: &mut SplitMix64) -> HelmholtzTriple {
    let k = v.degree();
    let (sol_star, irr_star) = star_complements(k);
    let harm = harmonic_basis(k);
    let columns: Vec<Vec<Rational>> = sol_star
        .vectors
        .iter()
        .chain(&irr_star.vectors)
        .chain(&harm.vectors)
        .map(HomVecPoly::to_coords)
        .collect();
    let n = 3 * mono_count(k);
    // random row permutation (Fisher–Yates)
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    let mut m = Matrix::zeros(n, columns.len());
    for (j, col) in columns.iter().enumerate() {
        for (r, value) in col.iter().enumerate() {
            *m.at_mut(perm[r], j) = value.clone();
        }
    }
    let coords_in = v.to_coords();
    let mut rhs = vec![Rational::zero(); n];
    for (r, value) in coords_in.iter().enumerate() {
        rhs[perm[r]] = value.clone();
    }
    let coords = LinearSolver::new(&m).solve(&rhs).expect("invertible");
    let n_s = sol_star.len();
    let n_i = irr_star.len();
    HelmholtzTriple {
        degree: k,
        sol_star: sol_star.combination(&coords[..n_s]),
        irr_star: irr_star.combination(&coords[n_s..n_s + n_i]),
        harmonic: harm.combination(&coords[n_s + n_i..]),
    }
}

fn helmholtz_suite(max_k: usize, seed: u64) -> SuiteResult {
    const NAME: &str = "helmholtz";
    let mut rng = SplitMix64(seed);
    let fields_per_degree = 10;
    for k in 1..=max_k {
        for _ in 0..fields_per_degree {
            let v = rng.vec_poly(k);
            let t = decompose(&v);
            if t.reconstruct() != v {
                return SuiteResult::fail(NAME, format!("reconstruction failed at k = {k}"));
            }
            if !divergence(&(&t.sol_star + &t.harmonic)).is_zero()
                || !curl(&(&t.irr_star + &t.harmonic)).is_zero()
            {
                return SuiteResult::fail(NAME, format!("component identities failed at k = {k}"));
            }
        }
        // uniqueness under permuted elimination, two fields per degree
        for _ in 0..2 {
            let v = rng.vec_poly(k);
            let direct = decompose(&v);
            let permuted = decompose_permuted(&v, &mut rng);
            if direct != permuted {
                return SuiteResult::fail(NAME, format!("uniqueness failed at k = {k}"));
            }
        }
    }
    SuiteResult::pass(
        NAME,
        format!("{fields_per_degree} reconstructions + permuted uniqueness per degree, k ≤ {max_k}"),
    )
}

fn restricted_operator_suite(max_k: usize) -> SuiteResult {
    const NAME: &str = "restricted-operators";
    for k in 0..=max_k {
        let (rank, nullity) = veclap_on_solenoidal_rank_nullity(k);
        if rank != (k + 1) * (k + 3) {
            return SuiteResult::fail(NAME, format!("solenoidal Laplacian rank at k = {k}"));
        }
        if nullity != 4 * (k + 3) {
            return SuiteResult::fail(NAME, format!("solenoidal Laplacian kernel at k = {k}"));
        }
        if veclap_restricted_kernel(k).len() != 2 * k + 5 {
            return SuiteResult::fail(NAME, format!("restricted kernel size at k = {k}"));
        }
        // two-sided inverse of the restricted divergence
        for idx in MultiIndex::enumerate(k) {
            let rhs = HomScalarPoly::monomial(idx, Rational::one());
            if divergence(&solve_div_irrotational(&rhs)) != rhs {
                return SuiteResult::fail(NAME, format!("divergence right inverse at k = {k}"));
            }
        }
        let (_, irr_star) = star_complements(k + 1);
        for g in &irr_star.vectors {
            if solve_div_irrotational(&divergence(g)) != *g {
                return SuiteResult::fail(NAME, format!("divergence left inverse at k = {k}"));
            }
        }
        // commutation: divergence after Laplacian equals Laplacian after
        // divergence, as an exact matrix identity (k ≥ 1)
        if k >= 1 {
            let lhs = diffops::operator_matrix(OpKind::Div, k - 1)
                .matrix
                .matmul(&diffops::operator_matrix(OpKind::VecLap, k).matrix);
            let rhs = diffops::operator_matrix(OpKind::ScalarLap, k - 1)
                .matrix
                .matmul(&diffops::operator_matrix(OpKind::Div, k + 1).matrix);
            if lhs != rhs {
                return SuiteResult::fail(NAME, format!("commutation identity at k = {k}"));
            }
        }
    }
    SuiteResult::pass(NAME, format!("ranks, kernels and inverses, k ≤ {max_k}"))
}

fn sign_suite() -> SuiteResult {
    const NAME: &str = "sign-self-test";
    match sign_self_test() {
        Ok(crate::qtspace::SignConvention::Negative) => {
            SuiteResult::pass(NAME, "exactly the negative-load convention verifies")
        }
        Ok(other) => SuiteResult::fail(NAME, format!("unexpected passing convention {other:?}")),
        Err(e) => SuiteResult::fail(NAME, e.to_string()),
    }
}

fn enumerate_vs_oracle_suite(max_p: usize, seed: u64) -> SuiteResult {
    const NAME: &str = "enumerate-vs-oracle";
    let p = max_p.clamp(3, 6);
    let mut rng = SplitMix64(seed ^ 0xA5A5_A5A5);
    let eps = rng.jet(p, Rational::from_int(2));
    let formula = dimension_formula(p);
    let enumerated = match enumerate_basis(&eps, p) {
        Ok(v) => v,
        Err(e) => return SuiteResult::fail(NAME, format!("enumeration failed: {e}")),
    };
    if enumerated.len() != formula {
        return SuiteResult::fail(
            NAME,
            format!("enumerated {} elements, formula says {formula}", enumerated.len()),
        );
    }
    match oracle_dimension(&eps, p) {
        Ok(dim) if dim == formula => SuiteResult::pass(
            NAME,
            format!("p = {p}: enumerated = oracle = formula = {formula}"),
        ),
        Ok(dim) => SuiteResult::fail(NAME, format!("oracle says {dim}, formula {formula}")),
        Err(e) => SuiteResult::fail(NAME, format!("oracle failed: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffops::OperatorMatrix;
    use std::sync::Arc;

    #[test]
    fn default_run_passes() {
        let results = run(4, 3, 7);
        for r in &results {
            assert!(r.passed, "suite {} failed: {}", r.name, r.detail);
        }
        assert_eq!(results.len(), 6);
    }

    #[test]
    fn corrupted_operator_is_reported() {
        // fault injection: hand the exact-sequence suite a gradient matrix
        // with a zeroed column, which drops its rank
        let corrupt = |op: OpKind, k: usize| -> Arc<OperatorMatrix> {
            let m = diffops::operator_matrix(op, k);
            if op == OpKind::Grad && k == 1 {
                let mut bad = (*m).clone();
                for r in 0..bad.rows() {
                    *bad.matrix.at_mut(r, 0) = Rational::zero();
                }
                return Arc::new(bad);
            }
            m
        };
        let result = exact_sequence_suite_with(&corrupt, 2);
        assert!(!result.passed);
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let mut a = SplitMix64(99);
        let mut b = SplitMix64(99);
        for _ in 0..50 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        assert_eq!(SplitMix64(1).vec_poly(3), SplitMix64(1).vec_poly(3));
    }
}

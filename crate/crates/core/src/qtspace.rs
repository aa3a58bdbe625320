//! The quasi-Trefftz space for the operator `∇×∇× − ε`.
//!
//! A degree-`p` vector polynomial `Π = Σ Π_k` is quasi-Trefftz when the
//! Taylor expansion of `∇×∇×Π − εΠ` vanishes through order `p−2` and the
//! expansion of `∇·(εΠ)` vanishes through order `p−1`. Written in
//! homogeneous blocks the two conditions become one triangular system that
//! is solved degree by degree: at each step the divergence condition
//! determines the irrotational-star component through a bijective solve, the
//! curl-curl condition determines a solenoidal-star component through a
//! surjective solve, and the remaining freedom — kernel directions of the
//! restricted Laplacian plus a harmonic component — is parameterized by
//! [`FreeParameters`]. Counting those choices gives the dimension
//! `2p² + 6p + 3`.
//!
//! [`verify`] recomputes both residuals from scratch and is the arbiter of
//! correctness; [`oracle_dimension`] independently assembles the full Taylor
//! constraint system on all of `(P_p)³` and reports its exact nullspace
//! dimension, with no reference to the construction path.

use crate::bases::{harmonic_basis, star_complements};
use crate::diffops::{curl, divergence, gradient, vector_laplacian};
use crate::linalg::{IncrementalSpan, Matrix};
use crate::multiindex::mono_count;
use crate::poly::{
    dot, graded_product_component, hom_mul, CoefficientJet, GradedVecPoly, HomScalarPoly,
    HomVecPoly,
};
use crate::rational::Rational;
use crate::solvers::{
    solve_div_any, solve_div_irrotational, solve_veclap_solenoidal, solve_veclap_solenoidal_full,
    veclap_restricted_kernel,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// `dim QT_p = 2p² + 6p + 3` for `p > 2`.
pub fn dimension_formula(p: usize) -> usize {
    2 * p * p + 6 * p + 3
}

/// Documentation row comparing against a plane-wave space of matching
/// order: `(p, 2(p+3)(p+1), 2p²+6p+3)`.
pub fn pw_comparison_row(p: usize) -> (usize, usize, usize) {
    (p, 2 * (p + 3) * (p + 1), dimension_formula(p))
}

/// Sign applied to the curl-curl load before the restricted Laplacian solve.
///
/// For solenoidal `F` the identity `∇×∇×F = −ΔF` forces the negative
/// convention; the positive one is kept only so the self-test can
/// demonstrate that exactly one of the two passes verification.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SignConvention {
    /// Solve `ΔF = −(εΠ)_k` (the identity-consistent choice, the default).
    Negative,
    /// Solve `ΔF = +(εΠ)_k` (rejected by the verifier).
    Positive,
}

/// The free choices that parameterize one quasi-Trefftz function of degree
/// `p`: the constant block, the degree-1 solenoidal-star and harmonic
/// blocks, and per step `k = 0..p−2` the restricted-kernel and harmonic
/// coordinates of degree `k+2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeParameters {
    /// Coordinates of `Π_0` in the three constant unit fields.
    pub pi0: [Rational; 3],
    /// Coordinates in the starred solenoidal basis of degree 1 (3 entries).
    pub f1: Vec<Rational>,
    /// Coordinates in the harmonic basis of degree 1 (5 entries).
    pub h1: Vec<Rational>,
    /// `kernel[k]` has `2k+5` coordinates in the restricted-Laplacian kernel
    /// basis of degree `k+2`, for `k = 0..p−2`.
    pub kernel: Vec<Vec<Rational>>,
    /// `harmonic[k]` has `2k+7` coordinates in the harmonic basis of degree
    /// `k+2`, for `k = 0..p−2`.
    pub harmonic: Vec<Vec<Rational>>,
}

impl FreeParameters {
    pub fn zeros(p: usize) -> Self {
        assert!(p >= 2);
        FreeParameters {
            pi0: [Rational::zero(), Rational::zero(), Rational::zero()],
            f1: vec![Rational::zero(); 3],
            h1: vec![Rational::zero(); 5],
            kernel: (0..=p - 2).map(|k| vec![Rational::zero(); 2 * k + 5]).collect(),
            harmonic: (0..=p - 2).map(|k| vec![Rational::zero(); 2 * k + 7]).collect(),
        }
    }

    /// Total number of free coordinates; equals [`dimension_formula`].
    pub fn parameter_count(p: usize) -> usize {
        11 + (0..=p - 2).map(|k| 4 * k + 12).sum::<usize>()
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        let shape_err = |what: &str| Error::ShapeMismatch(format!("free parameters: {what}"));
        if self.f1.len() != 3 {
            return Err(shape_err("f1 must have 3 entries"));
        }
        if self.h1.len() != 5 {
            return Err(shape_err("h1 must have 5 entries"));
        }
        if self.kernel.len() != p - 1 || self.harmonic.len() != p - 1 {
            return Err(shape_err("need one kernel and one harmonic block per step"));
        }
        for k in 0..=p - 2 {
            if self.kernel[k].len() != 2 * k + 5 {
                return Err(shape_err("kernel block has wrong length"));
            }
            if self.harmonic[k].len() != 2 * k + 7 {
                return Err(shape_err("harmonic block has wrong length"));
            }
        }
        Ok(())
    }

    /// All unit parameter sets in the fixed enumeration order, named
    /// `qt_{p}_{slot}_{index}`: constant block first, then the degree-1
    /// solenoidal-star and harmonic blocks, then per step the kernel and
    /// harmonic coordinates.
    pub fn units(p: usize) -> Vec<(String, FreeParameters)> {
        let mut out = Vec::with_capacity(Self::parameter_count(p));
        for i in 0..3 {
            let mut u = Self::zeros(p);
            u.pi0[i] = Rational::one();
            out.push((format!("qt_{p}_pi0_{i}"), u));
        }
        for i in 0..3 {
            let mut u = Self::zeros(p);
            u.f1[i] = Rational::one();
            out.push((format!("qt_{p}_f1_{i}"), u));
        }
        for i in 0..5 {
            let mut u = Self::zeros(p);
            u.h1[i] = Rational::one();
            out.push((format!("qt_{p}_h1_{i}"), u));
        }
        for k in 0..=p - 2 {
            for i in 0..2 * k + 5 {
                let mut u = Self::zeros(p);
                u.kernel[k][i] = Rational::one();
                out.push((format!("qt_{p}_ker{k}_{i}"), u));
            }
            for i in 0..2 * k + 7 {
                let mut u = Self::zeros(p);
                u.harmonic[k][i] = Rational::one();
                out.push((format!("qt_{p}_harm{k}_{i}"), u));
            }
        }
        out
    }

    /// `a·u + b·v`, entry by entry (the construction is linear in the
    /// parameters).
    pub fn linear_combination(
        a: &Rational,
        u: &FreeParameters,
        b: &Rational,
        v: &FreeParameters,
    ) -> FreeParameters {
        let comb = |x: &Rational, y: &Rational| &(a * x) + &(b * y);
        let comb_vec =
            |x: &[Rational], y: &[Rational]| x.iter().zip(y).map(|(x, y)| comb(x, y)).collect();
        FreeParameters {
            pi0: [
                comb(&u.pi0[0], &v.pi0[0]),
                comb(&u.pi0[1], &v.pi0[1]),
                comb(&u.pi0[2], &v.pi0[2]),
            ],
            f1: comb_vec(&u.f1, &v.f1),
            h1: comb_vec(&u.h1, &v.h1),
            kernel: u
                .kernel
                .iter()
                .zip(&v.kernel)
                .map(|(x, y)| comb_vec(x, y))
                .collect(),
            harmonic: u
                .harmonic
                .iter()
                .zip(&v.harmonic)
                .map(|(x, y)| comb_vec(x, y))
                .collect(),
        }
    }
}

/// One enumerated basis element: the polynomial, the parameters that
/// produced it, and whether the residual verifier has signed off on it.
#[derive(Clone, Debug)]
pub struct QTBasisElement {
    pub name: String,
    pub poly: GradedVecPoly,
    pub params: FreeParameters,
    pub certified: bool,
}

/// Outcome of the residual verifier.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VerifyOutcome {
    /// All homogeneous components of `∇×∇×Π − εΠ` of degree ≤ p−2 vanish.
    pub curlcurl_ok: bool,
    /// All homogeneous components of `∇·(εΠ)` of degree ≤ p−1 vanish.
    pub divergence_ok: bool,
}

impl VerifyOutcome {
    pub fn all_ok(&self) -> bool {
        self.curlcurl_ok && self.divergence_ok
    }
}

fn constant_field(coords: &[Rational; 3]) -> HomVecPoly {
    HomVecPoly::from_comps([
        HomScalarPoly::constant(coords[0].clone()),
        HomScalarPoly::constant(coords[1].clone()),
        HomScalarPoly::constant(coords[2].clone()),
    ])
}

/// Degree-`k+1` divergence load
/// `−ε₀⁻¹ (Σ_{k'≤k+1} ∇ε_{k+2−k'}·Π_{k'} + Σ_{1≤k'≤k+1} ε_{k+2−k'}·∇·Π_{k'})`.
/// The divergences of the solenoidal and harmonic components vanish, so
/// `∇·Π_{k'}` is the divergence of the irrotational-star component alone.
#[allow(clippy::needless_range_loop)]
fn divergence_load(
    eps: &CoefficientJet,
    pi: &[HomVecPoly],
    k: usize,
    neg_inv_e0: &Rational,
) -> HomScalarPoly {
    let mut acc = HomScalarPoly::zero(k + 1);
    for kp in 0..=k + 1 {
        let grad_eps = gradient(&eps.component(k + 2 - kp));
        if !grad_eps.is_zero() {
            acc = &acc + &dot(&grad_eps, &pi[kp]);
        }
    }
    for kp in 1..=k + 1 {
        let div_pi = divergence(&pi[kp]);
        if !div_pi.is_zero() {
            acc = &acc + &eps.component(k + 2 - kp).mul(&div_pi);
        }
    }
    acc.scale(neg_inv_e0)
}

/// Degree-`k` curl-curl load `Σ_{k'≤k} ε_{k−k'} Π_{k'}`.
#[allow(clippy::needless_range_loop)]
fn curlcurl_load(eps: &CoefficientJet, pi: &[HomVecPoly], k: usize) -> HomVecPoly {
    let mut acc = HomVecPoly::zero(k);
    for kp in 0..=k {
        let factor = eps.component(k - kp);
        if !factor.is_zero() {
            acc = &acc + &hom_mul(&factor, &pi[kp]);
        }
    }
    acc
}

/// Construct the quasi-Trefftz function determined by `params`, using the
/// default (identity-consistent) sign convention.
pub fn construct(params: &FreeParameters, eps: &CoefficientJet, p: usize) -> Result<GradedVecPoly> {
    construct_with_sign(params, eps, p, SignConvention::Negative)
}

/// Degree-by-degree construction: the divergence condition fixes the
/// irrotational-star block through the bijective restricted divergence, the
/// curl-curl condition fixes a solenoidal-star block through the restricted
/// Laplacian, and the kernel/harmonic parameters are added on top.
pub fn construct_with_sign(
    params: &FreeParameters,
    eps: &CoefficientJet,
    p: usize,
    sign: SignConvention,
) -> Result<GradedVecPoly> {
    if p < 3 {
        return Err(Error::DegreeTooSmall(p));
    }
    if eps.component(0).is_zero() {
        return Err(Error::DegenerateCoefficient);
    }
    params.validate(p)?;
    let neg_inv_e0 = -eps.constant_value().recip();

    let mut pi: Vec<HomVecPoly> = Vec::with_capacity(p + 1);
    pi.push(constant_field(&params.pi0));

    // Degree 1: the divergence condition at order 0 plus the free choices.
    let tmp_d = {
        let grad_eps1 = gradient(&eps.component(1));
        dot(&grad_eps1, &pi[0]).scale(&neg_inv_e0)
    };
    let g1 = solve_div_irrotational(&tmp_d);
    let (sol_star_1, _) = star_complements(1);
    let f1 = sol_star_1.combination(&params.f1);
    let h1 = harmonic_basis(1).combination(&params.h1);
    pi.push(&(&f1 + &g1) + &h1);

    // Degrees 2..p, one step per curl-curl order k.
    for k in 0..=p - 2 {
        let tmp_d = divergence_load(eps, &pi, k, &neg_inv_e0);
        let tmp_l = curlcurl_load(eps, &pi, k);
        let lap_rhs = match sign {
            SignConvention::Negative => -&tmp_l,
            SignConvention::Positive => tmp_l,
        };
        let g_next = solve_div_irrotational(&tmp_d);
        let mut f_next = solve_veclap_solenoidal(&lap_rhs)?;
        let kernel = veclap_restricted_kernel(k);
        f_next = &f_next + &kernel.combination(&params.kernel[k]);
        let h_next = harmonic_basis(k + 2).combination(&params.harmonic[k]);
        pi.push(&(&f_next + &g_next) + &h_next);
    }
    Ok(GradedVecPoly::from_parts(pi))
}

/// Single-step construction route: the per-degree solves run in the full
/// spaces (closed-form divergence preimage, Laplacian solve over all
/// solenoidal fields), so there are no kernel or harmonic coordinate slots —
/// only the constant block and the degree-1 choices remain free.
pub fn construct_single_step(
    pi0: &[Rational; 3],
    f1: &[Rational],
    h1: &[Rational],
    eps: &CoefficientJet,
    p: usize,
) -> Result<GradedVecPoly> {
    if p < 3 {
        return Err(Error::DegreeTooSmall(p));
    }
    if eps.component(0).is_zero() {
        return Err(Error::DegenerateCoefficient);
    }
    let neg_inv_e0 = -eps.constant_value().recip();

    let mut pi: Vec<HomVecPoly> = Vec::with_capacity(p + 1);
    pi.push(constant_field(pi0));

    let tmp_d = dot(&gradient(&eps.component(1)), &pi[0]).scale(&neg_inv_e0);
    let g1 = solve_div_irrotational(&tmp_d);
    let (sol_star_1, _) = star_complements(1);
    let f1 = sol_star_1.combination(f1);
    let h1 = harmonic_basis(1).combination(h1);
    pi.push(&(&f1 + &g1) + &h1);

    for k in 0..=p - 2 {
        let tmp_d = divergence_load(eps, &pi, k, &neg_inv_e0);
        let tmp_l = curlcurl_load(eps, &pi, k);
        let g_next = solve_div_any(&tmp_d);
        // The full-space divergence preimage is not irrotational, so it
        // contributes ∇(∇·G) − ΔG to the curl-curl block; the Laplacian load
        // absorbs that term. It is divergence free because both pieces have
        // divergence Δ(tmp_D).
        let correction = &gradient(&tmp_d) - &vector_laplacian(&g_next);
        let lap_rhs = &(-&tmp_l) + &correction;
        let f_next = solve_veclap_solenoidal_full(&lap_rhs)?;
        pi.push(&f_next + &g_next);
    }
    Ok(GradedVecPoly::from_parts(pi))
}

/// Recompute both truncated residuals of `Π` exactly, block by block.
/// Never fails: nonzero residuals only clear the corresponding flag.
pub fn verify(pi: &GradedVecPoly, eps: &CoefficientJet, p: usize) -> VerifyOutcome {
    let mut curlcurl_ok = true;
    if p >= 2 {
        for k in 0..=p - 2 {
            let lhs = curl(&curl(&pi.part_or_zero(k + 2)));
            let rhs = graded_product_component(eps, pi, k);
            if lhs != rhs {
                curlcurl_ok = false;
                break;
            }
        }
    }
    let mut divergence_ok = true;
    for k in 1..=p {
        let product_block = graded_product_component(eps, pi, k);
        if !divergence(&product_block).is_zero() {
            divergence_ok = false;
            break;
        }
    }
    VerifyOutcome {
        curlcurl_ok,
        divergence_ok,
    }
}

/// Construct, certify and collect the full basis: one element per free
/// parameter, each verified, with exact linear independence of the whole
/// family checked at the end.
pub fn enumerate_basis(eps: &CoefficientJet, p: usize) -> Result<Vec<QTBasisElement>> {
    enumerate_basis_with_jobs(eps, p, 1)
}

/// [`enumerate_basis`] with the per-element construction fanned out over
/// `jobs` threads. The output order is the enumeration order regardless of
/// `jobs`.
pub fn enumerate_basis_with_jobs(
    eps: &CoefficientJet,
    p: usize,
    jobs: usize,
) -> Result<Vec<QTBasisElement>> {
    if p < 3 {
        return Err(Error::DegreeTooSmall(p));
    }
    let units = FreeParameters::units(p);
    let jobs = jobs.max(1).min(units.len());

    let build = |(name, params): &(String, FreeParameters)| -> Result<QTBasisElement> {
        let poly = construct(params, eps, p)?;
        let outcome = verify(&poly, eps, p);
        if !outcome.all_ok() {
            return Err(Error::CertificationFailure(format!(
                "element {name} failed residual verification"
            )));
        }
        Ok(QTBasisElement {
            name: name.clone(),
            poly,
            params: params.clone(),
            certified: true,
        })
    };

    let elements: Vec<QTBasisElement> = if jobs == 1 {
        units.iter().map(build).collect::<Result<_>>()?
    } else {
        let chunk = units.len().div_ceil(jobs);
        let results: Vec<Vec<Result<QTBasisElement>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = units
                .chunks(chunk)
                .map(|slice| scope.spawn(move || slice.iter().map(build).collect()))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        results
            .into_iter()
            .flatten()
            .collect::<Result<Vec<_>>>()?
    };

    // Independence of the whole family, certified by exact rank.
    let total_coords = elements[0].poly.to_coords().len();
    let mut span = IncrementalSpan::new(total_coords);
    for e in &elements {
        if !span.insert(&e.poly.to_coords()) {
            return Err(Error::CertificationFailure(format!(
                "element {} is linearly dependent on its predecessors",
                e.name
            )));
        }
    }
    debug_assert_eq!(elements.len(), dimension_formula(p));
    Ok(elements)
}

/// The full Taylor-constraint system on the coordinates of `Π ∈ (P_p)³`:
/// one row block per constrained residual (all curl-curl components of
/// degree ≤ p−2, then all divergence components of degree ≤ p−1). The
/// quasi-Trefftz space is exactly its nullspace. Assembled directly from
/// the differential operators, with no reference to the construction path.
pub fn oracle_matrix(eps: &CoefficientJet, p: usize) -> Result<Matrix> {
    if p < 3 {
        return Err(Error::DegreeTooSmall(p));
    }
    let unknowns: usize = (0..=p).map(|l| 3 * mono_count(l)).sum();
    let rows: usize = (0..=p - 2).map(|k| 3 * mono_count(k)).sum::<usize>()
        + (1..=p).map(|k| mono_count(k - 1)).sum::<usize>();

    let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(unknowns);
    for l in 0..=p {
        let block = mono_count(l);
        for comp in 0..3 {
            for mono_idx in 0..block {
                let unit = HomVecPoly::unit(l, comp, mono_idx);
                let mut col = Vec::with_capacity(rows);
                for k in 0..=p - 2 {
                    let mut residual = if l == k + 2 {
                        curl(&curl(&unit))
                    } else {
                        HomVecPoly::zero(k)
                    };
                    if l <= k {
                        let factor = eps.component(k - l);
                        if !factor.is_zero() {
                            residual = &residual - &hom_mul(&factor, &unit);
                        }
                    }
                    col.extend(residual.to_coords());
                }
                for k in 1..=p {
                    let block_div = if l <= k {
                        divergence(&hom_mul(&eps.component(k - l), &unit))
                    } else {
                        HomScalarPoly::zero(k - 1)
                    };
                    col.extend(block_div.coeffs().iter().cloned());
                }
                debug_assert_eq!(col.len(), rows);
                columns.push(col);
            }
        }
    }
    Ok(Matrix::from_columns(rows, &columns))
}

/// Independent brute-force dimension: the exact nullspace dimension of
/// [`oracle_matrix`].
pub fn oracle_dimension(eps: &CoefficientJet, p: usize) -> Result<usize> {
    let matrix = oracle_matrix(eps, p)?;
    Ok(matrix.cols() - matrix.rank())
}

/// Determine which sign convention the residual verifier accepts, by
/// building one function both ways for `ε ≡ 1`, `p = 3`. Exactly one must
/// pass; anything else is reported as a hard failure.
pub fn sign_self_test() -> Result<SignConvention> {
    let eps = CoefficientJet::constant(Rational::one())?;
    let p = 3;
    let mut params = FreeParameters::zeros(p);
    params.pi0[0] = Rational::one();
    let negative = construct_with_sign(&params, &eps, p, SignConvention::Negative)?;
    let positive = construct_with_sign(&params, &eps, p, SignConvention::Positive)?;
    let neg_ok = verify(&negative, &eps, p).all_ok();
    let pos_ok = verify(&positive, &eps, p).all_ok();
    match (neg_ok, pos_ok) {
        (true, false) => Ok(SignConvention::Negative),
        (false, true) => Ok(SignConvention::Positive),
        both => Err(Error::CertificationFailure(format!(
            "sign self-test must single out one convention, got {both:?}"
        ))),
    }
}

// ---- Wire format of an enumerated basis ----

/// On-disk basis file: `{"p", "dimension", "elements": [...]}`.
#[derive(Serialize, Deserialize)]
pub struct BasisFile {
    pub p: usize,
    pub dimension: usize,
    pub elements: Vec<BasisFileElement>,
}

#[derive(Serialize, Deserialize)]
pub struct BasisFileElement {
    pub name: String,
    pub poly: GradedVecPoly,
    pub certified: bool,
}

impl BasisFile {
    pub fn from_elements(p: usize, elements: &[QTBasisElement]) -> Self {
        BasisFile {
            p,
            dimension: elements.len(),
            elements: elements
                .iter()
                .map(|e| BasisFileElement {
                    name: e.name.clone(),
                    poly: e.poly.clone(),
                    certified: e.certified,
                })
                .collect(),
        }
    }
}

//! Graded differential operators on homogeneous polynomial blocks.
//!
//! Gradient, divergence and curl lower the degree by one, the two Laplacians
//! by two. Inputs whose degree is below the operator order map to the zero
//! element of the degree-0 block: those are the degenerate "star" pieces of
//! the graded decomposition, and treating them as zero maps keeps every
//! caller total.
//!
//! [`assemble_matrix`] expresses an operator on one degree block in the
//! canonical monomial coordinates. Matrices are memoized per
//! `(op_kind, k)`; if the `QT_CACHE_DIR` environment variable points at a
//! directory they are additionally persisted there as JSON, keyed by the
//! same pair. The persistent layer is best effort and correctness never
//! depends on it.

use crate::cache::memo;
use crate::linalg::Matrix;
use crate::multiindex::{mono_count, MultiIndex};
use crate::poly::{HomScalarPoly, HomVecPoly};
use crate::rational::Rational;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

/// Exact gradient. Degree `k+1` input gives a degree-`k` field; constants
/// give the zero degree-0 field.
pub fn gradient(f: &HomScalarPoly) -> HomVecPoly {
    HomVecPoly::from_comps([f.partial(0), f.partial(1), f.partial(2)])
}

/// Exact divergence; constants give the zero degree-0 polynomial.
pub fn divergence(v: &HomVecPoly) -> HomScalarPoly {
    let d0 = v.comp(0).partial(0);
    let d1 = v.comp(1).partial(1);
    let d2 = v.comp(2).partial(2);
    &(&d0 + &d1) + &d2
}

/// Exact curl; constants give the zero degree-0 field.
pub fn curl(v: &HomVecPoly) -> HomVecPoly {
    HomVecPoly::from_comps([
        &v.comp(2).partial(1) - &v.comp(1).partial(2),
        &v.comp(0).partial(2) - &v.comp(2).partial(0),
        &v.comp(1).partial(0) - &v.comp(0).partial(1),
    ])
}

/// Exact scalar Laplacian; degree 0 and 1 inputs give the zero degree-0
/// polynomial.
pub fn scalar_laplacian(f: &HomScalarPoly) -> HomScalarPoly {
    if f.degree() < 2 {
        return HomScalarPoly::zero(0);
    }
    let d0 = f.partial(0).partial(0);
    let d1 = f.partial(1).partial(1);
    let d2 = f.partial(2).partial(2);
    &(&d0 + &d1) + &d2
}

/// Componentwise Laplacian of a vector field.
pub fn vector_laplacian(v: &HomVecPoly) -> HomVecPoly {
    HomVecPoly::from_comps([
        scalar_laplacian(v.comp(0)),
        scalar_laplacian(v.comp(1)),
        scalar_laplacian(v.comp(2)),
    ])
}

/// Checks `∇×∇×V = −ΔV + ∇(∇·V)` exactly on one homogeneous block.
/// Holds for every vector field; exposed as a runtime cross-check.
pub fn curl_curl_identity_holds(v: &HomVecPoly) -> bool {
    let lhs = curl(&curl(v));
    let rhs = &gradient(&divergence(v)) - &vector_laplacian(v);
    lhs == rhs
}

/// The five graded operator kinds with canonical matrices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Grad,
    Div,
    Curl,
    #[serde(rename = "lap")]
    ScalarLap,
    #[serde(rename = "veclap")]
    VecLap,
}

impl OpKind {
    /// Order of the operator: how many degrees it lowers.
    pub fn order(self) -> usize {
        match self {
            OpKind::Grad | OpKind::Div | OpKind::Curl => 1,
            OpKind::ScalarLap | OpKind::VecLap => 2,
        }
    }

    fn domain_is_vector(self) -> bool {
        matches!(self, OpKind::Div | OpKind::Curl | OpKind::VecLap)
    }

    fn codomain_is_vector(self) -> bool {
        matches!(self, OpKind::Grad | OpKind::Curl | OpKind::VecLap)
    }

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Grad => "grad",
            OpKind::Div => "div",
            OpKind::Curl => "curl",
            OpKind::ScalarLap => "lap",
            OpKind::VecLap => "veclap",
        }
    }
}

/// Canonical-basis matrix of a graded operator mapping the degree-`k+γ`
/// block onto the degree-`k` block. Column `j` is the image of canonical
/// basis element `j` of the domain, in canonical codomain coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OperatorMatrix {
    pub op_kind: OpKind,
    pub domain_degree: usize,
    pub codomain_degree: usize,
    pub matrix: Matrix,
}

impl OperatorMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }
}

fn block_dim(degree: usize, vector: bool) -> usize {
    if vector {
        3 * mono_count(degree)
    } else {
        mono_count(degree)
    }
}

fn scalar_unit(degree: usize, idx: usize) -> HomScalarPoly {
    HomScalarPoly::monomial(MultiIndex::from_position(degree, idx), Rational::one())
}

/// Assemble the canonical matrix of `op` with codomain degree `k`.
pub fn assemble_matrix(op: OpKind, k: usize) -> OperatorMatrix {
    let domain_degree = k + op.order();
    let rows = block_dim(k, op.codomain_is_vector());
    let cols = block_dim(domain_degree, op.domain_is_vector());
    let mut columns = Vec::with_capacity(cols);
    for j in 0..cols {
        let col = match op {
            OpKind::Grad => gradient(&scalar_unit(domain_degree, j)).to_coords(),
            OpKind::ScalarLap => scalar_laplacian(&scalar_unit(domain_degree, j))
                .coeffs()
                .to_vec(),
            OpKind::Div => {
                let n = mono_count(domain_degree);
                divergence(&HomVecPoly::unit(domain_degree, j / n, j % n))
                    .coeffs()
                    .to_vec()
            }
            OpKind::Curl => {
                let n = mono_count(domain_degree);
                curl(&HomVecPoly::unit(domain_degree, j / n, j % n)).to_coords()
            }
            OpKind::VecLap => {
                let n = mono_count(domain_degree);
                vector_laplacian(&HomVecPoly::unit(domain_degree, j / n, j % n)).to_coords()
            }
        };
        debug_assert_eq!(col.len(), rows);
        columns.push(col);
    }
    OperatorMatrix {
        op_kind: op,
        domain_degree,
        codomain_degree: k,
        matrix: Matrix::from_columns(rows, &columns),
    }
}

type MatrixCache = Mutex<HashMap<(OpKind, usize), Arc<OperatorMatrix>>>;

static MATRIX_CACHE: LazyLock<MatrixCache> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// Memoized [`assemble_matrix`], with optional on-disk persistence under
/// `QT_CACHE_DIR`.
pub fn operator_matrix(op: OpKind, k: usize) -> Arc<OperatorMatrix> {
    memo(&MATRIX_CACHE, (op, k), || {
        if let Some(m) = load_persistent(op, k) {
            return Arc::new(m);
        }
        let m = assemble_matrix(op, k);
        store_persistent(&m);
        Arc::new(m)
    })
}

/// Exact rank of an operator matrix.
pub fn rank(m: &OperatorMatrix) -> usize {
    m.matrix.rank()
}

/// Deterministic exact nullspace basis, dimension `cols − rank`.
pub fn nullspace(m: &OperatorMatrix) -> Vec<Vec<Rational>> {
    m.matrix.nullspace()
}

// ---- JSON form and the optional persistent cache ----

/// Wire form of an operator matrix: entries row-major as `"num/den"`.
#[derive(Serialize, Deserialize)]
pub struct OperatorMatrixDto {
    pub op: OpKind,
    pub k: usize,
    pub rows: usize,
    pub cols: usize,
    pub domain_degree: usize,
    pub codomain_degree: usize,
    pub entries: Vec<Rational>,
}

impl From<&OperatorMatrix> for OperatorMatrixDto {
    fn from(m: &OperatorMatrix) -> Self {
        OperatorMatrixDto {
            op: m.op_kind,
            k: m.codomain_degree,
            rows: m.rows(),
            cols: m.cols(),
            domain_degree: m.domain_degree,
            codomain_degree: m.codomain_degree,
            entries: m.matrix.entries_row_major().to_vec(),
        }
    }
}

impl TryFrom<OperatorMatrixDto> for OperatorMatrix {
    type Error = String;

    fn try_from(dto: OperatorMatrixDto) -> Result<Self, String> {
        if dto.entries.len() != dto.rows * dto.cols {
            return Err(format!(
                "entries length {} does not match {}x{}",
                dto.entries.len(),
                dto.rows,
                dto.cols
            ));
        }
        let mut matrix = Matrix::zeros(dto.rows, dto.cols);
        for (i, v) in dto.entries.into_iter().enumerate() {
            *matrix.at_mut(i / dto.cols, i % dto.cols) = v;
        }
        Ok(OperatorMatrix {
            op_kind: dto.op,
            domain_degree: dto.domain_degree,
            codomain_degree: dto.codomain_degree,
            matrix,
        })
    }
}

fn cache_path(op: OpKind, k: usize) -> Option<std::path::PathBuf> {
    let dir = std::env::var_os("QT_CACHE_DIR")?;
    Some(std::path::Path::new(&dir).join(format!("op_{}_{k}.json", op.name())))
}

fn load_persistent(op: OpKind, k: usize) -> Option<OperatorMatrix> {
    let path = cache_path(op, k)?;
    let text = std::fs::read_to_string(path).ok()?;
    let dto: OperatorMatrixDto = serde_json::from_str(&text).ok()?;
    if dto.op != op || dto.k != k {
        return None;
    }
    OperatorMatrix::try_from(dto).ok()
}

fn store_persistent(m: &OperatorMatrix) {
    let Some(path) = cache_path(m.op_kind, m.codomain_degree) else {
        return;
    };
    if let Some(parent) = path.parent() {
        let _ = std::fs::create_dir_all(parent);
    }
    if let Ok(text) = serde_json::to_string(&OperatorMatrixDto::from(m)) {
        let _ = std::fs::write(path, text);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(i: (usize, usize, usize)) -> HomScalarPoly {
        HomScalarPoly::monomial(MultiIndex::new(i.0, i.1, i.2), Rational::one())
    }

    #[test]
    fn gradient_of_constant_is_zero() {
        let c = HomScalarPoly::constant(Rational::from_int(5));
        assert!(gradient(&c).is_zero());
    }

    #[test]
    fn gradient_of_monomial() {
        // ∇X^i = (i1 X^{i−e1}, i2 X^{i−e2}, i3 X^{i−e3}) on i = (2,1,0)
        let g = gradient(&mono((2, 1, 0)));
        assert_eq!(g.comp(0), &mono((1, 1, 0)).scale(&Rational::from_int(2)));
        assert_eq!(g.comp(1), &mono((2, 0, 0)));
        assert!(g.comp(2).is_zero());
    }

    #[test]
    fn gradient_of_xyz() {
        let g = gradient(&mono((1, 1, 1)));
        assert_eq!(g.comp(0), &mono((0, 1, 1)));
        assert_eq!(g.comp(1), &mono((1, 0, 1)));
        assert_eq!(g.comp(2), &mono((1, 1, 0)));
    }

    #[test]
    fn divergence_surjectivity_witness() {
        // ∇·(X^{i+e1}/(i1+1), 0, 0) = X^i on i = (1, 2, 0)
        let v = HomVecPoly::single(0, mono((2, 2, 0)).scale(&Rational::new(1, 2)));
        assert_eq!(divergence(&v), mono((1, 2, 0)));
    }

    #[test]
    fn divergence_of_constant_is_zero() {
        let v = HomVecPoly::single(1, HomScalarPoly::constant(Rational::from_int(3)));
        assert!(divergence(&v).is_zero());
    }

    #[test]
    fn divergence_kernel_generator() {
        // ((i3+1)X^i, 0, −i1 X^{i−e1+e3}) with i = (1,2,0): (x1x2², 0, −x2²x3)
        let v = HomVecPoly::from_comps([
            mono((1, 2, 0)),
            HomScalarPoly::zero(3),
            mono((0, 2, 1)).scale(&Rational::from_int(-1)),
        ]);
        assert!(divergence(&v).is_zero());
    }

    #[test]
    fn curl_of_gradient_vanishes() {
        for f in [mono((2, 1, 2)), mono((0, 3, 1)), &mono((1, 1, 1)) + &mono((3, 0, 0))] {
            assert!(curl(&gradient(&f)).is_zero());
        }
    }

    #[test]
    fn curl_range_witness() {
        // ∇×(0, 0, X^{i+e2}/(i2+1)) = (X^i, 0, 0) when i1 = 0; take i = (0,1,1)
        let v = HomVecPoly::single(2, mono((0, 2, 1)).scale(&Rational::new(1, 2)));
        let c = curl(&v);
        assert_eq!(c.comp(0), &mono((0, 1, 1)));
        assert!(c.comp(1).is_zero());
        assert!(c.comp(2).is_zero());
    }

    #[test]
    fn curl_by_hand() {
        // ∇×(0, x3, 0) = (−1, 0, 0)
        let v = HomVecPoly::single(1, mono((0, 0, 1)));
        let c = curl(&v);
        assert_eq!(c.comp(0), &HomScalarPoly::constant(Rational::from_int(-1)));
        assert!(c.comp(1).is_zero());
        assert!(c.comp(2).is_zero());
    }

    #[test]
    fn scalar_laplacian_examples() {
        assert_eq!(
            scalar_laplacian(&mono((2, 0, 0))),
            HomScalarPoly::constant(Rational::from_int(2))
        );
        let harmonic = &mono((2, 0, 0)) - &mono((0, 2, 0));
        assert!(scalar_laplacian(&harmonic).is_zero());
        assert_eq!(
            scalar_laplacian(&mono((2, 1, 0))),
            mono((0, 1, 0)).scale(&Rational::from_int(2))
        );
    }

    #[test]
    fn vector_laplacian_examples() {
        // Δ(x3³, 0, 0) = (6x3, 0, 0)
        let v = HomVecPoly::single(0, mono((0, 0, 3)));
        assert_eq!(
            vector_laplacian(&v),
            HomVecPoly::single(0, mono((0, 0, 1)).scale(&Rational::from_int(6)))
        );
        // harmonic gradient is annihilated
        assert!(vector_laplacian(&gradient(&mono((1, 1, 1)))).is_zero());
        // Δ(x2², 0, 0) = (2, 0, 0): the factor 2 is forced by Δx2² = 2
        let w = HomVecPoly::single(0, mono((0, 2, 0)));
        assert_eq!(
            vector_laplacian(&w),
            HomVecPoly::single(0, HomScalarPoly::constant(Rational::from_int(2)))
        );
    }

    #[test]
    fn curl_curl_identity_on_samples() {
        let samples = [
            HomVecPoly::single(0, mono((0, 2, 0))),
            gradient(&mono((2, 1, 1))),
            HomVecPoly::from_comps([mono((1, 1, 2)), mono((0, 4, 0)), mono((2, 0, 2))]),
        ];
        for v in samples {
            assert!(curl_curl_identity_holds(&v));
        }
    }

    #[test]
    fn matrix_shapes_and_ranks() {
        let g0 = assemble_matrix(OpKind::Grad, 0);
        assert_eq!((g0.rows(), g0.cols()), (3, 3));
        assert_eq!(rank(&g0), 3);

        let d0 = assemble_matrix(OpKind::Div, 0);
        assert_eq!((d0.rows(), d0.cols()), (1, 9));
        assert_eq!(rank(&d0), 1);

        let c2 = assemble_matrix(OpKind::Curl, 2);
        assert_eq!(rank(&c2), 15);
    }

    #[test]
    fn nullspace_dimensions() {
        for k in 0..=3 {
            let d = assemble_matrix(OpKind::Div, k);
            assert_eq!(nullspace(&d).len(), (k + 2) * (k + 4));
            let c = assemble_matrix(OpKind::Curl, k);
            assert_eq!(nullspace(&c).len(), (k + 3) * (k + 4) / 2);
        }
    }

    #[test]
    fn matrix_agrees_with_function() {
        // applying the assembled matrix to coordinates equals applying curl
        let k = 2;
        let m = operator_matrix(OpKind::Curl, k);
        let v = HomVecPoly::from_comps([mono((1, 1, 1)), mono((3, 0, 0)), mono((0, 1, 2))]);
        let image = m.matrix.mul_vec(&v.to_coords());
        assert_eq!(HomVecPoly::from_coords(k, &image), curl(&v));
    }

    #[test]
    fn identity_check_on_gradients() {
        // both sides reduce to ∇Δf − Δ∇f = 0 on gradients
        let f = mono((2, 2, 1));
        let v = gradient(&f);
        assert!(curl(&curl(&v)).is_zero());
        assert!(curl_curl_identity_holds(&v));
    }
}

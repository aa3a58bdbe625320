//! Dense exact-rational linear algebra.
//!
//! Gaussian elimination uses one fixed pivot rule everywhere: scan columns
//! left to right and take the first row with a nonzero entry. With exact
//! arithmetic no pivot-magnitude heuristics are needed, and the fixed rule
//! makes every rank, nullspace basis and particular solution reproducible
//! bit for bit.

use crate::rational::Rational;
use std::fmt;

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Build from column vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let cols = columns.len();
        let mut m = Matrix::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has wrong length");
            for (i, v) in col.iter().enumerate() {
                *m.at_mut(i, j) = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn entries_row_major(&self) -> &[Rational] {
        &self.data
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for (a, x) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if !b.is_zero() {
                        *out.at_mut(r, c) += &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Reduce `self` to reduced row echelon form in place, eliminating only
    /// over the first `lead_cols` columns (trailing columns ride along, which
    /// is how augmented systems are solved). Returns the pivot columns.
    fn rref_leading(&mut self, lead_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..lead_cols {
            let Some(pivot_row) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, pivot_row);
            let inv = self.at(row, col).recip();
            for c in col..self.cols {
                let v = self.at(row, c) * &inv;
                *self.at_mut(row, c) = v;
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for c in col..self.cols {
                        let delta = self.at(row, c) * &factor;
                        *self.at_mut(r, c) -= &delta;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rref(&mut self) -> Vec<usize> {
        self.rref_leading(self.cols)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Deterministic nullspace basis: one vector per free column, in
    /// ascending column order, with a 1 in the free position.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        LinearSolver::new(self).nullspace()
    }

    /// One exact solution of `self · x = rhs` with all free variables set to
    /// zero, or `None` if the system is inconsistent.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        LinearSolver::new(self).solve(rhs)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Precomputed elimination of a matrix `A`, reusable across right-hand
/// sides: stores `R = rref(A)` together with the transform `T` such that
/// `T·A = R`.
pub struct LinearSolver {
    reduced: Matrix,
    transform: Matrix,
    pivots: Vec<usize>,
}

impl LinearSolver {
    pub fn new(a: &Matrix) -> Self {
        let rows = a.rows();
        let cols = a.cols();
        let mut aug = Matrix::zeros(rows, cols + rows);
        for r in 0..rows {
            for c in 0..cols {
                *aug.at_mut(r, c) = a.at(r, c).clone();
            }
            *aug.at_mut(r, cols + r) = Rational::one();
        }
        let pivots = aug.rref_leading(cols);
        let mut reduced = Matrix::zeros(rows, cols);
        let mut transform = Matrix::zeros(rows, rows);
        for r in 0..rows {
            for c in 0..cols {
                *reduced.at_mut(r, c) = aug.at(r, c).clone();
            }
            for c in 0..rows {
                *transform.at_mut(r, c) = aug.at(r, cols + c).clone();
            }
        }
        LinearSolver {
            reduced,
            transform,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.reduced.cols()
    }

    /// Particular solution with free variables zero, or `None` if
    /// inconsistent.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        let y = self.transform.mul_vec(rhs);
        // Rows below the rank are zero rows of R; they demand zero on the rhs.
        for value in y.iter().skip(self.pivots.len()) {
            if !value.is_zero() {
                return None;
            }
        }
        let mut x = vec![Rational::zero(); self.reduced.cols()];
        for (r, &col) in self.pivots.iter().enumerate() {
            x[col] = y[r].clone();
        }
        Some(x)
    }

    /// Nullspace basis of `A`: one vector per free column in ascending
    /// order.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let cols = self.reduced.cols();
        let mut is_pivot = vec![false; cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::with_capacity(cols - self.pivots.len());
        for free in 0..cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (r, &col) in self.pivots.iter().enumerate() {
                v[col] = -self.reduced.at(r, free);
            }
            basis.push(v);
        }
        basis
    }
}

/// Incrementally built row space, used for greedy basis completion and
/// exact membership tests.
pub struct IncrementalSpan {
    cols: usize,
    // (pivot column, reduced row with leading 1)
    rows: Vec<(usize, Vec<Rational>)>,
}

impl IncrementalSpan {
    pub fn new(cols: usize) -> Self {
        IncrementalSpan {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let factor = v[*pivot].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &(&factor * r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Rational::is_zero)
    }

    /// Add `v` to the span. Returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.cols, "span vector length mismatch");
        let mut reduced = self.reduce(v);
        let Some(pivot) = reduced.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = reduced[pivot].recip();
        for x in reduced.iter_mut() {
            *x *= &inv;
        }
        self.rows.push((pivot, reduced));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&n| q(n)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_rref() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(Matrix::zeros(4, 5).rank(), 0);
        assert_eq!(Matrix::identity(7).rank(), 7);
    }

    #[test]
    fn nullspace_dimension_and_membership() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = mat(&[&[1, 1], &[1, -1]]);
        let x = m.solve(&[q(3), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);

        let singular = mat(&[&[1, 1], &[2, 2]]);
        assert!(singular.solve(&[q(1), q(3)]).is_none());
        // consistent underdetermined: free variable forced to zero
        let x = singular.solve(&[q(1), q(2)]).unwrap();
        assert_eq!(x, vec![q(1), q(0)]);
    }

    #[test]
    fn solver_matches_direct_solve() {
        let m = mat(&[&[2, 0, 1], &[0, 3, -1]]);
        let solver = LinearSolver::new(&m);
        for rhs in [[q(1), q(0)], [q(0), q(1)], [q(5), q(-7)]] {
            let x = solver.solve(&rhs).unwrap();
            assert_eq!(m.mul_vec(&x), rhs.to_vec());
        }
        assert_eq!(solver.rank(), 2);
        assert_eq!(solver.nullspace().len(), 1);
    }

    #[test]
    fn incremental_span_greedy() {
        let mut span = IncrementalSpan::new(3);
        assert!(span.insert(&[q(1), q(1), q(0)]));
        assert!(!span.insert(&[q(2), q(2), q(0)]));
        assert!(span.insert(&[q(0), q(1), q(1)]));
        assert_eq!(span.rank(), 2);
        assert!(span.contains(&[q(1), q(2), q(1)]));
        assert!(!span.contains(&[q(0), q(0), q(1)]));
    }

    #[test]
    fn rank_nullity_consistency() {
        // rank + nullity = cols on a few shaped examples
        for m in [
            mat(&[&[1, 2, 3, 4], &[0, 0, 1, 1]]),
            mat(&[&[0, 0], &[0, 0], &[1, 0]]),
            Matrix::identity(5),
        ] {
            assert_eq!(m.rank() + m.nullspace().len(), m.cols());
        }
    }
}

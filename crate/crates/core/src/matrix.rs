//! Dense exact matrices over a [`Field`] and the linear algebra the rest of
//! the crate stands on: composition, rank, and column-span membership.
//!
//! Everything runs Gaussian elimination with first-nonzero pivoting — at
//! exact arithmetic there is nothing to stabilize, and grids stay small
//! enough (a few hundred points, dimensions below a few dozen) that dense
//! storage is the simple, right-sized choice.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::field::Field;

/// Dense row-major matrix. Zero rows or columns are legal (they appear as
/// maps in and out of zero-dimensional spaces) and behave as expected.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Builds from explicit rows; the column count comes from the first row
    /// (an empty row list gives a 0×0 matrix). Ragged input is rejected.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, Error> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_shape(rows.len(), cols, rows)
    }

    /// Builds from rows against an expected shape — needed to round-trip
    /// matrices with zero rows, whose serialized form `[]` carries no
    /// column count.
    pub fn from_rows_with_shape(
        rows: usize,
        cols: usize,
        entries: Vec<Vec<F>>,
    ) -> Result<Self, Error> {
        if entries.len() != rows {
            return Err(Error::Shape(format!(
                "expected {rows} rows, got {}",
                entries.len()
            )));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for (i, row) in entries.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: F) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    /// Matrix product `self · rhs` (apply `rhs` first, then `self`).
    pub fn compose(&self, rhs: &Matrix<F>) -> Result<Matrix<F>, Error> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let term = a.mul(rhs.get(k, c));
                    out.set(r, c, out.get(r, c).add(&term));
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>, Error> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![F::zero(); self.rows];
        for (r, slot) in out.iter_mut().enumerate() {
            for (c, entry) in v.iter().enumerate() {
                let term = self.get(r, c).mul(entry);
                *slot = slot.add(&term);
            }
        }
        Ok(out)
    }

    /// Dimension of the column span, by elimination on a working copy.
    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        reduce(&mut work, self.rows, self.cols)
    }

    /// Solves `self · x = rhs`. `Ok(Some(x))` with `self·x = rhs` exactly
    /// (free variables set to zero), `Ok(None)` when `rhs` is outside the
    /// column span, `Err` on a length mismatch.
    pub fn solve(&self, rhs: &[F]) -> Result<Option<Vec<F>>, Error> {
        if rhs.len() != self.rows {
            return Err(Error::Shape(format!(
                "right-hand side of length {} against {}x{} matrix",
                rhs.len(),
                self.rows,
                self.cols
            )));
        }
        // Augmented matrix [self | rhs], reduced in place.
        let width = self.cols + 1;
        let mut work = Vec::with_capacity(self.rows * width);
        for (r, entry) in rhs.iter().enumerate() {
            work.extend_from_slice(self.row(r));
            work.push(entry.clone());
        }
        reduce(&mut work, self.rows, width);

        // A pivot in the augmented column means inconsistency.
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for r in 0..self.rows {
            if let Some(c) = (0..width).find(|&c| !work[r * width + c].is_zero()) {
                if c == self.cols {
                    return Ok(None);
                }
                pivots.push((r, c));
            }
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, c) in pivots {
            x[c] = work[r * width + self.cols].clone();
        }
        Ok(Some(x))
    }

    /// Column-span membership with an explicit witness: coefficients `c`
    /// with `self · c = v`, if any.
    pub fn in_column_span(&self, v: &[F]) -> Result<Option<Vec<F>>, Error> {
        self.solve(v)
    }
}

/// In-place reduction to reduced row echelon form; returns the rank.
fn reduce<F: Field>(data: &mut [F], rows: usize, cols: usize) -> usize {
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(src) = (pivot_row..rows).find(|&r| !data[r * cols + col].is_zero()) else {
            continue;
        };
        for c in 0..cols {
            data.swap(pivot_row * cols + c, src * cols + c);
        }
        let inv = data[pivot_row * cols + col]
            .inv()
            .expect("pivot is nonzero");
        for c in col..cols {
            data[pivot_row * cols + c] = data[pivot_row * cols + c].mul(&inv);
        }
        for r in 0..rows {
            if r == pivot_row || data[r * cols + col].is_zero() {
                continue;
            }
            let factor = data[r * cols + col].clone();
            for c in col..cols {
                let term = factor.mul(&data[pivot_row * cols + c]);
                data[r * cols + c] = data[r * cols + c].sub(&term);
            }
        }
        pivot_row += 1;
    }
    pivot_row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, Gf2, Rational};

    fn gf2(rows: &[&[u8]]) -> Matrix<Gf2> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&b| Gf2(b != 0)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&n| rat_int(n)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_identity_gf2() {
        assert_eq!(Matrix::<Gf2>::identity(2).rank(), 2);
    }

    #[test]
    fn rank_zero_matrix_q() {
        assert_eq!(Matrix::<Rational>::zeros(3, 3).rank(), 0);
    }

    #[test]
    fn rank_of_dependent_rows_q() {
        // [[1,2],[2,4]]: second row is twice the first.
        assert_eq!(q(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn span_identity_is_direct() {
        let id = Matrix::<Gf2>::identity(2);
        let witness = id.in_column_span(&[Gf2(true), Gf2(false)]).unwrap();
        assert_eq!(witness, Some(vec![Gf2(true), Gf2(false)]));
    }

    #[test]
    fn span_of_zero_matrix_misses_nonzero() {
        let zero = Matrix::<Gf2>::zeros(2, 2);
        assert_eq!(
            zero.in_column_span(&[Gf2(true), Gf2(false)]).unwrap(),
            None
        );
        // The zero vector is always reachable.
        assert!(zero
            .in_column_span(&[Gf2(false), Gf2(false)])
            .unwrap()
            .is_some());
    }

    #[test]
    fn span_witness_upper_triangular_gf2() {
        // [[1,1],[0,1]] · (1,1)^T = (0,1)^T over GF(2); confirmed by
        // enumerating all four coefficient vectors by hand.
        let m = gf2(&[&[1, 1], &[0, 1]]);
        let witness = m.in_column_span(&[Gf2(false), Gf2(true)]).unwrap();
        assert_eq!(witness, Some(vec![Gf2(true), Gf2(true)]));
    }

    #[test]
    fn span_witness_reproduces_target() {
        // Wide system with a free variable: witness must still multiply back.
        let m = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let target = [rat_int(2), rat_int(4)];
        let witness = m.in_column_span(&target).unwrap().unwrap();
        assert_eq!(m.mul_vec(&witness).unwrap(), target.to_vec());
    }

    #[test]
    fn compose_identities() {
        let id = Matrix::<Gf2>::identity(3);
        assert_eq!(id.compose(&id).unwrap(), id);
    }

    #[test]
    fn compose_with_zero_annihilates() {
        let m = gf2(&[&[1, 0], &[1, 1]]);
        let zero = Matrix::<Gf2>::zeros(2, 2);
        assert!(m.compose(&zero).unwrap().is_zero());
        assert!(zero.compose(&m).unwrap().is_zero());
    }

    #[test]
    fn compose_cancels_in_characteristic_two() {
        // [[1,1]] · [[1],[1]] = [1+1] = [0] over GF(2).
        let row = gf2(&[&[1, 1]]);
        let col = gf2(&[&[1], &[1]]);
        let product = row.compose(&col).unwrap();
        assert_eq!(product, Matrix::zeros(1, 1));
    }

    #[test]
    fn compose_rejects_mismatched_shapes() {
        let a = Matrix::<Gf2>::zeros(2, 3);
        let b = Matrix::<Gf2>::zeros(2, 3);
        assert!(matches!(a.compose(&b), Err(Error::Shape(_))));
    }

    #[test]
    fn zero_dimensional_maps_behave() {
        // Maps through a zero-dimensional space: 2x0 · 0x3 = zero 2x3.
        let into = Matrix::<Gf2>::zeros(2, 0);
        let outof = Matrix::<Gf2>::zeros(0, 3);
        let through = into.compose(&outof).unwrap();
        assert_eq!(through, Matrix::zeros(2, 3));
        assert_eq!(into.rank(), 0);
        // Only the zero vector lies in the span of no columns.
        assert_eq!(
            into.in_column_span(&[Gf2(true), Gf2(false)]).unwrap(),
            None
        );
        assert_eq!(
            into.in_column_span(&[Gf2(false), Gf2(false)]).unwrap(),
            Some(vec![])
        );
    }

    #[test]
    fn from_rows_rejects_ragged_input() {
        let ragged = vec![vec![Gf2(true)], vec![Gf2(true), Gf2(false)]];
        assert!(matches!(Matrix::from_rows(ragged), Err(Error::Shape(_))));
    }

    #[test]
    fn rational_elimination_is_exact() {
        // A matrix whose elimination forces fractional pivots.
        let m = q(&[&[2, 1], &[1, 3]]);
        assert_eq!(m.rank(), 2);
        let witness = m
            .in_column_span(&[rat_int(1), rat_int(0)])
            .unwrap()
            .unwrap();
        assert_eq!(m.mul_vec(&witness).unwrap(), vec![rat_int(1), rat_int(0)]);
    }
}

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Rational;
use crate::quadratic_space::Subspace;

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Result of reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: RatMatrix,
    pub pivot_columns: Vec<usize>,
    pub rank: usize,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        RatMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        RatMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let n = values.len();
        let mut m = RatMatrix::zero(n, n);
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Rational> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn trace(&self) -> Rational {
        assert!(self.is_square(), "trace needs a square matrix");
        let mut t = Rational::zero();
        for i in 0..self.rows {
            t += self.get(i, i).clone();
        }
        t
    }

    pub fn pow(&self, k: u32) -> RatMatrix {
        assert!(self.is_square(), "pow needs a square matrix");
        let mut acc = RatMatrix::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Matrix-vector product (vector as column).
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for c in 0..self.cols {
                    if !self.get(r, c).is_zero() && !v[c].is_zero() {
                        acc += self.get(r, c) * &v[c];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        RatMatrix::new(self.rows + other.rows, self.cols, entries)
    }

    pub fn hstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = self.row(r);
            row.extend(other.row(r));
            rows.push(row);
        }
        RatMatrix::from_rows(rows)
    }

    /// Unique reduced row echelon form, plus pivot columns and rank.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivot_columns = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            // Locate a nonzero pivot at or below pivot_row.
            let Some(src) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, src);
            let inv = m.get(pivot_row, col).recip();
            m.scale_row(pivot_row, &inv);
            for r in 0..m.rows {
                if r != pivot_row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    m.sub_scaled_row(r, pivot_row, &factor);
                }
            }
            pivot_columns.push(col);
            pivot_row += 1;
        }
        let rank = pivot_columns.len();
        Rref { reduced: m, pivot_columns, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Canonical basis of {x : self·x = 0}, as a subspace of the column space
    /// dimension.
    pub fn kernel_basis(&self) -> Subspace {
        let Rref { reduced, pivot_columns, rank } = self.rref();
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|c| !pivot_columns.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (i, &p) in pivot_columns.iter().enumerate().take(rank) {
                v[p] = -reduced.get(i, f).clone();
            }
            basis.push(v);
        }
        Subspace::from_rows(n, RatMatrix::from_rows_allowing_empty(basis, n))
    }

    pub(crate) fn from_rows_allowing_empty(rows: Vec<Vec<Rational>>, cols: usize) -> RatMatrix {
        if rows.is_empty() {
            RatMatrix::zero(0, cols)
        } else {
            RatMatrix::from_rows(rows)
        }
    }

    /// One solution x of self·x = b, if the system is consistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let b_col = RatMatrix::new(self.rows, 1, b.to_vec());
        let augmented = self.hstack(&b_col);
        let Rref { reduced, pivot_columns, rank } = augmented.rref();
        if pivot_columns.contains(&self.cols) {
            return None; // pivot in the constant column: inconsistent
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in pivot_columns.iter().enumerate().take(rank) {
            x[p] = reduced.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        assert!(self.is_square(), "inverse needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(RatMatrix::zero(0, 0));
        }
        let augmented = self.hstack(&RatMatrix::identity(n));
        let Rref { reduced, pivot_columns, .. } = augmented.rref();
        // Invertible exactly when every pivot lands in the left block.
        if pivot_columns.len() < n || pivot_columns[n - 1] != n - 1 {
            return None;
        }
        let mut inv = RatMatrix::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, reduced.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> Rational {
        assert!(self.is_square(), "det needs a square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(src) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Rational::zero();
            };
            if src != col {
                m.swap_rows(col, src);
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det *= pivot.clone();
            for r in (col + 1)..n {
                if !m.get(r, col).is_zero() {
                    let factor = m.get(r, col) / &pivot;
                    m.sub_scaled_row(r, col, &factor);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: &Rational) {
        for c in 0..self.cols {
            let v = self.get(r, c) * s;
            self.set(r, c, v);
        }
    }

    /// row r -= factor * row src
    fn sub_scaled_row(&mut self, r: usize, src: usize, factor: &Rational) {
        for c in 0..self.cols {
            let v = self.get(r, c) - &(self.get(src, c) * factor);
            self.set(r, c, v);
        }
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &RatMatrix {
    type Output = RatMatrix;
    fn neg(self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = RatMatrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + &(a * b);
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows)
    }

    #[test]
    fn rref_identity() {
        let r = RatMatrix::identity(2).rref();
        assert_eq!(r.reduced, RatMatrix::identity(2));
        assert_eq!(r.pivot_columns, vec![0, 1]);
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn rref_dependent_rows() {
        let r = m(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r.reduced, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.pivot_columns, vec![0]);
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn rref_of_h_minus_identity_has_rank_2() {
        // h - I for the worked SO(2,2) element at t=1 equals the nilpotent
        // generator itself; its row space is 2-dimensional.
        let n = m(&[
            &[0, -1, 0, 1],
            &[1, 0, -1, 0],
            &[0, -1, 0, 1],
            &[1, 0, -1, 0],
        ]);
        assert_eq!(n.rref().rank, 2);
    }

    #[test]
    fn rref_is_idempotent() {
        let a = m(&[&[2, 4, 1], &[0, 3, 5], &[2, 7, 6]]);
        let once = a.rref().reduced;
        assert_eq!(once.rref().reduced, once);
    }

    #[test]
    fn kernel_of_zero_matrix_is_everything() {
        let k = RatMatrix::zero(3, 3).kernel_basis();
        assert_eq!(k.dim(), 3);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let k = RatMatrix::identity(3).kernel_basis();
        assert_eq!(k.dim(), 0);
    }

    #[test]
    fn kernel_of_nilpotent_generator() {
        // Rows impose x2 = x4 and x1 = x3, so the kernel is
        // span{e1+e3, e2+e4}.
        let n = m(&[
            &[0, -1, 0, 1],
            &[1, 0, -1, 0],
            &[0, -1, 0, 1],
            &[1, 0, -1, 0],
        ]);
        let k = n.kernel_basis();
        assert_eq!(
            k,
            Subspace::from_i64_rows(4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]])
        );
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 2], &[2, 4]]);
        let x = a
            .solve(&[Rational::from_i64(3), Rational::from_i64(6)])
            .unwrap();
        assert_eq!(a.mul_vec(&x), vec![Rational::from_i64(3), Rational::from_i64(6)]);
        assert!(a
            .solve(&[Rational::from_i64(3), Rational::from_i64(5)])
            .is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, RatMatrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn det_values() {
        assert_eq!(m(&[&[2, 1], &[7, 4]]).det(), Rational::from_i64(1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(), Rational::zero());
        assert_eq!(
            RatMatrix::diagonal(&[
                Rational::from_i64(1),
                Rational::from_i64(1),
                Rational::from_i64(-1),
                Rational::from_i64(-1)
            ])
            .det(),
            Rational::from_i64(1)
        );
    }

    #[test]
    fn rank_nullity() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.kernel_basis().dim() + a.rank(), a.cols());
    }
}

//! Dense matrices over any of the crate's exact scalar types.
//!
//! The characteristic polynomial uses the Berkowitz algorithm, which is
//! division free and therefore valid over plain polynomial rings, not just
//! fields. Field-only routines (rank, inverse, solving) are gated behind
//! [`FieldElem`].

use std::fmt;
use std::sync::Arc;

use num::{One, Zero};

use crate::frac::Frac;
use crate::poly::{Poly, VarTable};
use crate::scalar::Rat;

/// Commutative ring element with context-aware constants: `zero_of` and
/// `one_of` build constants living in the same ring as `self`, which
/// matters for polynomials that carry a variable table.
pub trait RingElem: Clone + PartialEq + fmt::Debug {
    fn zero_of(&self) -> Self;
    fn one_of(&self) -> Self;
    fn from_rat_of(&self, c: &Rat) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
}

pub trait FieldElem: RingElem {
    /// Multiplicative inverse, `None` for zero.
    fn inv_ref(&self) -> Option<Self>;
}

impl RingElem for Rat {
    fn zero_of(&self) -> Self {
        Rat::zero()
    }
    fn one_of(&self) -> Self {
        Rat::one()
    }
    fn from_rat_of(&self, c: &Rat) -> Self {
        c.clone()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self.clone()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl FieldElem for Rat {
    fn inv_ref(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl RingElem for Poly {
    fn zero_of(&self) -> Self {
        Poly::zero(self.vars())
    }
    fn one_of(&self) -> Self {
        Poly::one(self.vars())
    }
    fn from_rat_of(&self, c: &Rat) -> Self {
        Poly::constant(self.vars(), c.clone())
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl RingElem for Frac {
    fn zero_of(&self) -> Self {
        Frac::zero(self.vars())
    }
    fn one_of(&self) -> Self {
        Frac::one(self.vars())
    }
    fn from_rat_of(&self, c: &Rat) -> Self {
        Frac::constant(self.vars(), c.clone())
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl FieldElem for Frac {
    fn inv_ref(&self) -> Option<Self> {
        self.inv()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: RingElem> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        assert!(r > 0, "empty matrix");
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn filled(rows: usize, cols: usize, fill: &T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![fill.clone(); rows * cols],
        }
    }

    pub fn zero(rows: usize, cols: usize, template: &T) -> Self {
        Matrix::filled(rows, cols, &template.zero_of())
    }

    pub fn identity(n: usize, template: &T) -> Self {
        let mut m = Matrix::zero(n, n, template);
        for i in 0..n {
            *m.at_mut(i, i) = template.one_of();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: RingElem>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix<T> {
        let mut rows = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            rows.push((0..self.rows).map(|i| self.at(i, j).clone()).collect());
        }
        Matrix::from_rows(rows)
    }

    pub fn add(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.sub_ref(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul_ref(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let zero = self.data[0].zero_of();
        let mut out = Matrix::filled(self.rows, other.cols, &zero);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero_elem() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero_elem() {
                        continue;
                    }
                    let cur = out.at(i, j).add_ref(&a.mul_ref(b));
                    *out.at_mut(i, j) = cur;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        let zero = self.data[0].zero_of();
        (0..self.rows)
            .map(|i| {
                let mut acc = zero.clone();
                for j in 0..self.cols {
                    acc = acc.add_ref(&self.at(i, j).mul_ref(&v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero_elem())
    }

    pub fn trace(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let mut acc = self.data[0].zero_of();
        for i in 0..self.rows {
            acc = acc.add_ref(self.at(i, i));
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Matrix<T> {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows, &self.data[0]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Characteristic polynomial by the Berkowitz method, division free.
    /// Coefficients are returned in ascending order, length `n + 1`,
    /// normalized monic (the top coefficient is exactly one).
    pub fn char_poly(&self) -> Vec<T> {
        assert_eq!(self.rows, self.cols, "char poly of a non-square matrix");
        let n = self.rows;
        let one = self.data[0].one_of();
        let zero = self.data[0].zero_of();
        // Descending coefficient vectors; p = char poly of the leading
        // principal r x r block, starting from the empty matrix.
        let mut p: Vec<T> = vec![one.clone()];
        for r in 1..=n {
            let a = self.at(r - 1, r - 1).clone();
            // q holds 1, -a, -(R C), -(R A C), ..., descending, length r+1.
            let mut q: Vec<T> = Vec::with_capacity(r + 1);
            q.push(one.clone());
            q.push(a.neg_ref());
            if r > 1 {
                let row: Vec<T> = (0..r - 1).map(|j| self.at(r - 1, j).clone()).collect();
                let mut col: Vec<T> = (0..r - 1).map(|i| self.at(i, r - 1).clone()).collect();
                for _ in 2..=r {
                    let mut s = zero.clone();
                    for (x, y) in row.iter().zip(&col) {
                        s = s.add_ref(&x.mul_ref(y));
                    }
                    q.push(s.neg_ref());
                    // col <- A * col, where A is the (r-1) principal block.
                    let mut next = Vec::with_capacity(r - 1);
                    for i in 0..r - 1 {
                        let mut acc = zero.clone();
                        for (k, c) in col.iter().enumerate() {
                            acc = acc.add_ref(&self.at(i, k).mul_ref(c));
                        }
                        next.push(acc);
                    }
                    col = next;
                }
            }
            // Truncated convolution: new[i] = sum_j q[i-j] p[j].
            let mut next = vec![zero.clone(); r + 1];
            for (j, pj) in p.iter().enumerate() {
                for (k, qk) in q.iter().enumerate() {
                    let i = j + k;
                    if i <= r {
                        next[i] = next[i].add_ref(&qk.mul_ref(pj));
                    }
                }
            }
            p = next;
        }
        p.reverse();
        p
    }

    /// Determinant via the characteristic polynomial's constant term.
    pub fn det(&self) -> T {
        let n = self.rows;
        let c0 = self.char_poly().swap_remove(0);
        if n % 2 == 0 {
            c0
        } else {
            c0.neg_ref()
        }
    }

    /// Minor determinant on explicit row and column index sets
    /// (0-based, strictly increasing), by Laplace expansion.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> T {
        assert_eq!(rows.len(), cols.len(), "minor must be square");
        let one = self.data[0].one_of();
        if rows.is_empty() {
            return one;
        }
        if rows.len() == 1 {
            return self.at(rows[0], cols[0]).clone();
        }
        let mut acc = self.data[0].zero_of();
        for (k, &c) in cols.iter().enumerate() {
            let entry = self.at(rows[0], c);
            if entry.is_zero_elem() {
                continue;
            }
            let sub_rows = &rows[1..];
            let sub_cols: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, &x)| x)
                .collect();
            let term = entry.mul_ref(&self.minor(sub_rows, &sub_cols));
            acc = if k % 2 == 0 {
                acc.add_ref(&term)
            } else {
                acc.sub_ref(&term)
            };
        }
        acc
    }
}

impl<T: FieldElem> Matrix<T> {
    /// Row-reduce in place; returns the rank.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let pivot = (rank..m.rows).find(|&i| !m.at(i, col).is_zero_elem());
            let Some(p) = pivot else { continue };
            m.swap_rows(rank, p);
            let inv = m.at(rank, col).inv_ref().unwrap();
            for j in col..m.cols {
                *m.at_mut(rank, j) = m.at(rank, j).mul_ref(&inv);
            }
            for i in 0..m.rows {
                if i != rank && !m.at(i, col).is_zero_elem() {
                    let f = m.at(i, col).clone();
                    for j in col..m.cols {
                        let v = m.at(i, j).sub_ref(&f.mul_ref(m.at(rank, j)));
                        *m.at_mut(i, j) = v;
                    }
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<T>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Matrix::identity(n, &self.data[0]);
        for col in 0..n {
            let pivot = (col..n).find(|&i| !m.at(i, col).is_zero_elem())?;
            m.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let f = m.at(col, col).inv_ref().unwrap();
            for j in 0..n {
                *m.at_mut(col, j) = m.at(col, j).mul_ref(&f);
                *inv.at_mut(col, j) = inv.at(col, j).mul_ref(&f);
            }
            for i in 0..n {
                if i != col && !m.at(i, col).is_zero_elem() {
                    let g = m.at(i, col).clone();
                    for j in 0..n {
                        let a = m.at(i, j).sub_ref(&g.mul_ref(m.at(col, j)));
                        *m.at_mut(i, j) = a;
                        let b = inv.at(i, j).sub_ref(&g.mul_ref(inv.at(col, j)));
                        *inv.at_mut(i, j) = b;
                    }
                }
            }
        }
        Some(inv)
    }

    /// Solve `A x = b` where `A` is this matrix (possibly rectangular).
    /// Returns `None` if the system is inconsistent, `Some(Err(()))` if it
    /// is consistent but underdetermined, and `Some(Ok(x))` for a unique
    /// solution.
    #[allow(clippy::result_unit_err)]
    pub fn solve(&self, b: &[T]) -> Option<Result<Vec<T>, ()>> {
        assert_eq!(self.rows, b.len());
        let zero = self.data[0].zero_of();
        let mut m = self.clone();
        let mut rhs = b.to_vec();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&i| !m.at(i, col).is_zero_elem()) else {
                continue;
            };
            m.swap_rows(rank, p);
            rhs.swap(rank, p);
            let f = m.at(rank, col).inv_ref().unwrap();
            for j in 0..m.cols {
                *m.at_mut(rank, j) = m.at(rank, j).mul_ref(&f);
            }
            rhs[rank] = rhs[rank].mul_ref(&f);
            for i in 0..m.rows {
                if i != rank && !m.at(i, col).is_zero_elem() {
                    let g = m.at(i, col).clone();
                    for j in 0..m.cols {
                        let v = m.at(i, j).sub_ref(&g.mul_ref(m.at(rank, j)));
                        *m.at_mut(i, j) = v;
                    }
                    rhs[i] = rhs[i].sub_ref(&g.mul_ref(&rhs[rank]));
                }
            }
            pivots.push((rank, col));
            rank += 1;
        }
        for i in rank..m.rows {
            if !rhs[i].is_zero_elem() {
                return None;
            }
        }
        if rank < m.cols {
            return Some(Err(()));
        }
        let mut x = vec![zero; m.cols];
        for (row, col) in pivots {
            x[col] = rhs[row].clone();
        }
        Some(Ok(x))
    }
}

/// Express `target` as a linear combination of `basis` vectors, all over a
/// field; returns the coefficients or `None` if `target` is outside the
/// span (or the expression is not unique).
pub fn express_in_span<T: FieldElem>(basis: &[Vec<T>], target: &[T]) -> Option<Vec<T>> {
    if basis.is_empty() {
        return None;
    }
    let dim = target.len();
    assert!(basis.iter().all(|v| v.len() == dim));
    // Columns are the basis vectors.
    let mut rows = Vec::with_capacity(dim);
    for i in 0..dim {
        rows.push(basis.iter().map(|v| v[i].clone()).collect::<Vec<_>>());
    }
    match Matrix::from_rows(rows).solve(target) {
        Some(Ok(x)) => Some(x),
        _ => None,
    }
}

impl<T: RingElem + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| format!("{}", self.at(i, j)))
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = (0..self.cols)
            .map(|j| cells.iter().map(|r| r[j].len()).max().unwrap_or(0))
            .collect();
        for row in &cells {
            write!(f, "[")?;
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{cell:>width$}", width = widths[j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Variable table holder used by tests and small call sites that need a
/// scratch polynomial ring.
pub fn shared_table(build: impl FnOnce(&mut VarTable)) -> Arc<VarTable> {
    let mut t = VarTable::new();
    build(&mut t);
    Arc::new(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rfrac, rint};

    #[test]
    fn char_poly_frozen_2x2() {
        // Companion-style matrix [[0,2],[1,0]]: char poly x^2 - 2.
        let m = Matrix::from_rows(vec![
            vec![rint(0), rint(2)],
            vec![rint(1), rint(0)],
        ]);
        assert_eq!(m.char_poly(), vec![rint(-2), rint(0), rint(1)]);
        assert_eq!(m.det(), rint(-2));
    }

    #[test]
    fn char_poly_matches_trace_and_det_3x3() {
        let m = Matrix::from_rows(vec![
            vec![rint(1), rint(2), rint(0)],
            vec![rint(-1), rint(3), rint(1)],
            vec![rint(0), rint(4), rint(-2)],
        ]);
        let cp = m.char_poly();
        assert_eq!(cp.len(), 4);
        assert_eq!(cp[3], rint(1));
        assert_eq!(cp[2], m.trace().neg_ref());
        assert_eq!(m.det(), cp[0].neg_ref());
    }

    #[test]
    fn inverse_and_solve() {
        let m = Matrix::from_rows(vec![
            vec![rint(2), rint(1)],
            vec![rint(5), rint(3)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2, &rint(0)));
        let x = m.solve(&[rint(1), rint(2)]).unwrap().unwrap();
        assert_eq!(x, vec![rint(1), rint(-1)]);
        assert_eq!(m.rank(), 2);

        let singular = Matrix::from_rows(vec![
            vec![rint(1), rint(2)],
            vec![rint(2), rint(4)],
        ]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.rank(), 1);
        assert!(singular.solve(&[rint(0), rint(1)]).is_none());
    }

    #[test]
    fn span_expression() {
        let b1 = vec![rint(1), rint(0), rint(1)];
        let b2 = vec![rint(0), rint(1), rint(1)];
        let t = vec![rfrac(1, 2), rint(2), rfrac(5, 2)];
        let c = express_in_span(&[b1, b2], &t).unwrap();
        assert_eq!(c, vec![rfrac(1, 2), rint(2)]);
        let outside = vec![rint(0), rint(0), rint(1)];
        assert!(express_in_span(&[vec![rint(1), rint(0), rint(0)]], &outside).is_none());
    }

    #[test]
    fn minors() {
        let m = Matrix::from_rows(vec![
            vec![rint(1), rint(2), rint(3)],
            vec![rint(4), rint(5), rint(6)],
            vec![rint(7), rint(8), rint(10)],
        ]);
        assert_eq!(m.minor(&[0, 1], &[1, 2]), rint(2 * 6 - 3 * 5));
        assert_eq!(m.minor(&[0, 1, 2], &[0, 1, 2]), m.det());
    }
}

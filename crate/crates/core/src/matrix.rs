//! Dense matrices over ℚ.
//!
//! Elimination always pivots on the leftmost available column and, within
//! it, the smallest row index holding a nonzero entry, so every output is
//! reproducible.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(crate::rational::format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: RationalMatrix,
    pub pivots: Vec<usize>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds from row vectors; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: &[Vec<Rational>], cols: usize) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            entries.extend(r.iter().cloned());
        }
        Self { rows: rows.len(), cols, entries }
    }

    pub fn from_int_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let rr: Vec<Vec<Rational>> = rows.iter().map(|r| crate::rational::to_rational_vec(r)).collect();
        Self::from_rows(&rr, cols)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rr: Vec<Vec<Rational>> = rows.iter().map(|r| crate::rational::rat_vec(r)).collect();
        Self::from_rows(&rr, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, x.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows).map(|r| crate::rational::dot(self.row(r), x)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Self { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let rows: Vec<Vec<Rational>> = idx.iter().map(|&r| self.row(r).to_vec()).collect();
        Self::from_rows(&rows, self.cols)
    }

    /// Gauss–Jordan reduction to reduced row echelon form.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m[(r, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, lead);
            let inv = m[(lead, c)].recip();
            for k in c..m.cols {
                let v = &m[(lead, k)] * &inv;
                m[(lead, k)] = v;
            }
            for r in 0..m.rows {
                if r == lead || m[(r, c)].is_zero() {
                    continue;
                }
                let f = m[(r, c)].clone();
                for k in c..m.cols {
                    let v = &m[(lead, k)] * &f;
                    if !v.is_zero() {
                        m[(r, k)] -= v;
                    }
                }
            }
            pivots.push(c);
            lead += 1;
        }
        Echelon { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Nonzero rows of the reduced echelon form: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> Vec<Vec<Rational>> {
        let e = self.rref();
        (0..e.pivots.len()).map(|r| e.matrix.row(r).to_vec()).collect()
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&r| !m[(r, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for r in c + 1..m.rows {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let f = &m[(r, c)] / &piv;
                for k in c..m.cols {
                    let v = &m[(c, k)] * &f;
                    m[(r, k)] -= v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Rational::one();
        }
        let e = aug.rref();
        if e.pivots.len() < n || e.pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = e.matrix[(r, n + c)].clone();
            }
        }
        Some(inv)
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.entries[r * self.cols + c]
    }
}

/// Rank over ℚ by fraction-free (Bareiss) elimination on the matrix with
/// each row scaled to integers.
pub fn rank(m: &RationalMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|r| {
            let row = m.row(r);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * &lcm).to_integer()).collect()
        })
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        let piv = a[rank][c].clone();
        for r in rank + 1..rows {
            let f = a[r][c].clone();
            for k in c..cols {
                let v = &piv * &a[r][k] - &f * &a[rank][k];
                // Bareiss: exact division by the previous pivot
                a[r][k] = v / &prev;
            }
        }
        prev = piv;
        rank += 1;
    }
    rank
}

/// Solves `A·x = b`. When the solution set is positive-dimensional the free
/// variables are set to zero.
pub fn solve(a: &RationalMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let n = a.cols();
    let mut aug = RationalMatrix::zeros(a.rows(), n + 1);
    for r in 0..a.rows() {
        for c in 0..n {
            aug[(r, c)] = a[(r, c)].clone();
        }
        aug[(r, n)] = b[r].clone();
    }
    let e = aug.rref();
    if e.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &c) in e.pivots.iter().enumerate() {
        x[c] = e.matrix[(r, n)].clone();
    }
    Some(x)
}

/// Basis of `{x : A·x = 0}`, one vector per free column, in column order.
pub fn nullspace(a: &RationalMatrix) -> Vec<Vec<Rational>> {
    let e = a.rref();
    let n = a.cols();
    let mut is_pivot = vec![None; n];
    for (r, &c) in e.pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![Rational::zero(); n];
        v[free] = Rational::one();
        for (r, &c) in e.pivots.iter().enumerate() {
            v[c] = -e.matrix[(r, free)].clone();
        }
        basis.push(v);
    }
    basis
}

//! Integer matrices and lattice normal forms (Hermite, Smith).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::{nullspace, RationalMatrix};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged integer matrix");
        Self { cols, data: rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| crate::rational::int_vec(r)).collect(), cols)
    }

    pub fn rows(&self) -> usize {
        self.data.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r]
    }

    pub fn row_vecs(&self) -> &[Vec<BigInt>] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r][c]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        self.data.iter().map(|r| r[c].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows());
        for (r, row) in self.data.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                t.data[c][r] = x.clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows());
        let mut out = Self::zeros(self.rows(), other.cols);
        for r in 0..self.rows() {
            for k in 0..self.cols {
                if self.data[r][k].is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r][c] += &self.data[r][k] * &other.data[k][c];
                }
            }
        }
        out
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix::from_int_rows(&self.data, self.cols)
    }

    pub fn determinant(&self) -> BigInt {
        self.to_rational().determinant().to_integer()
    }

    /// Converts a rational matrix whose entries are all integers.
    pub fn try_from_rational(m: &RationalMatrix) -> Option<Self> {
        let mut rows = Vec::with_capacity(m.rows());
        for r in 0..m.rows() {
            let row: Option<Vec<BigInt>> =
                m.row(r).iter().map(|x| x.is_integer().then(|| x.to_integer())).collect();
            rows.push(row?);
        }
        Some(Self::from_rows(rows, m.cols()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.data {
            row.swap(a, b);
        }
    }

    /// row[dst] -= f · row[src]
    fn sub_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        let src_row = self.data[src].clone();
        for (d, s) in self.data[dst].iter_mut().zip(&src_row) {
            *d -= f * s;
        }
    }

    /// col[dst] -= f · col[src]
    fn sub_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for row in &mut self.data {
            let v = f * &row[src];
            row[dst] -= v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for x in &mut self.data[r] {
            *x = -x.clone();
        }
    }
}

/// Row Hermite normal form: `h = u · a`, `u` unimodular.
///
/// Convention: pivots positive, entries above a pivot reduced into
/// `[0, pivot)`, zero rows last.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
}

pub fn hermite_normal_form(a: &IntMatrix) -> HermiteForm {
    let rows = a.rows();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..a.cols() {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !h.data[i][c].is_zero())
                .min_by(|&i, &j| h.data[i][c].abs().cmp(&h.data[j][c].abs()).then(i.cmp(&j)));
            let Some(p) = best else { break };
            h.swap_rows(p, r);
            u.swap_rows(p, r);
            let mut done = true;
            for i in r + 1..rows {
                if h.data[i][c].is_zero() {
                    continue;
                }
                let q = h.data[i][c].div_floor(&h.data[r][c]);
                h.sub_row(i, r, &q);
                u.sub_row(i, r, &q);
                if !h.data[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.data[r][c].is_zero() {
            continue;
        }
        if h.data[r][c].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h.data[i][c].div_floor(&h.data[r][c]);
            h.sub_row(i, r, &q);
            u.sub_row(i, r, &q);
        }
        r += 1;
    }
    HermiteForm { h, u, rank: r }
}

/// Smith normal form `d = p · a · q` with `p`, `q` unimodular and
/// `d` diagonal with `d_1 | d_2 | … | d_r`, all positive.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub p: IntMatrix,
    pub q: IntMatrix,
    pub invariants: Vec<BigInt>,
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut p = IntMatrix::identity(rows);
    let mut q = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d.data[i][j].is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| d.data[i][j].abs() < d.data[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        p.swap_rows(t, bi);
        d.swap_cols(t, bj);
        q.swap_cols(t, bj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d.data[i][t].is_zero() {
                    continue;
                }
                let f = d.data[i][t].div_floor(&d.data[t][t]);
                d.sub_row(i, t, &f);
                p.sub_row(i, t, &f);
                dirty |= !d.data[i][t].is_zero();
            }
            for j in t + 1..cols {
                if d.data[t][j].is_zero() {
                    continue;
                }
                let f = d.data[t][j].div_floor(&d.data[t][t]);
                d.sub_col(j, t, &f);
                q.sub_col(j, t, &f);
                dirty |= !d.data[t][j].is_zero();
            }
            if dirty {
                // a remainder smaller than the pivot appeared in row/column t
                let mut m = (t, t);
                for i in t + 1..rows {
                    if !d.data[i][t].is_zero() && d.data[i][t].abs() < d.data[m.0][m.1].abs() {
                        m = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !d.data[t][j].is_zero() && d.data[t][j].abs() < d.data[m.0][m.1].abs() {
                        m = (t, j);
                    }
                }
                if m.0 != t {
                    d.swap_rows(t, m.0);
                    p.swap_rows(t, m.0);
                }
                if m.1 != t {
                    d.swap_cols(t, m.1);
                    q.swap_cols(t, m.1);
                }
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.data[i][j].is_multiple_of(&d.data[t][t])));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    d.sub_row(t, i, &minus_one);
                    p.sub_row(t, i, &minus_one);
                }
                None => break,
            }
        }
        if d.data[t][t].is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
        t += 1;
    }
    let invariants = (0..t).map(|i| d.data[i][i].clone()).collect();
    SmithForm { d, p, q, invariants }
}

/// Invariant factors `d_1 | … | d_r`, `r = rank(a)`.
pub fn smith_invariants(a: &IntMatrix) -> Vec<BigInt> {
    smith_normal_form(a).invariants
}

/// Lattice basis of `{x ∈ ℤ^n : a·x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = a.cols();
    let hf = hermite_normal_form(&a.transpose());
    let kernel: Vec<Vec<BigInt>> = (hf.rank..n).map(|r| hf.u.row(r).to_vec()).collect();
    canonical_lattice_basis(kernel, n)
}

/// Hermite-reduced basis of the lattice spanned by `gens`.
pub fn canonical_lattice_basis(gens: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    if gens.is_empty() {
        return gens;
    }
    let hf = hermite_normal_form(&IntMatrix::from_rows(gens, n));
    (0..hf.rank).map(|r| hf.h.row(r).to_vec()).collect()
}

/// Integer basis of `S ∩ ℤ^k` for the rational subspace `S` spanned by
/// `basis` (rows of length `k`): clear denominators of the annihilator and
/// saturate through a Hermite transform.
pub fn subspace_lattice_points(basis: &[Vec<Rational>], k: usize) -> Vec<Vec<BigInt>> {
    let s = RationalMatrix::from_rows(basis, k);
    let annihilator = nullspace(&s);
    let rows: Vec<Vec<BigInt>> = annihilator.iter().map(|v| crate::rational::primitive_integer(v)).collect();
    integer_kernel(&IntMatrix::from_rows(rows, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int_vec, ratio};
    use proptest::prelude::*;

    fn check_hnf(a: &IntMatrix) -> HermiteForm {
        let hf = hermite_normal_form(a);
        assert_eq!(hf.u.mul(a), hf.h);
        assert_eq!(hf.u.determinant().abs(), BigInt::one());
        hf
    }

    #[test]
    fn hnf_examples() {
        let id = IntMatrix::identity(3);
        let hf = check_hnf(&id);
        assert_eq!(hf.h, id);
        assert_eq!(hf.u, id);

        let a = IntMatrix::from_i64(&[&[2, 4], &[1, 3]]);
        let hf = check_hnf(&a);
        // pivots 1 and 2; entry above the second pivot reduced into [0, 2)
        assert_eq!(hf.h, IntMatrix::from_i64(&[&[1, 1], &[0, 2]]));

        let z = IntMatrix::zeros(2, 3);
        let hf = check_hnf(&z);
        assert_eq!(hf.h, z);
        assert_eq!(hf.u, IntMatrix::identity(2));
        assert_eq!(hf.rank, 0);
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_invariants(&IntMatrix::identity(4)), int_vec(&[1, 1, 1, 1]));
        assert_eq!(smith_invariants(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]])), int_vec(&[1, 6]));
        let cp2 = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[-1, -1]]);
        assert_eq!(smith_invariants(&cp2), int_vec(&[1, 1]));
        assert!(smith_invariants(&IntMatrix::zeros(2, 2)).is_empty());
    }

    #[test]
    fn lattice_points_examples() {
        let half = vec![vec![ratio(1, 2), ratio(1, 2)]];
        assert_eq!(subspace_lattice_points(&half, 2), vec![int_vec(&[1, 1])]);
        let axis = vec![vec![ratio(1, 1), ratio(0, 1)]];
        assert_eq!(subspace_lattice_points(&axis, 2), vec![int_vec(&[1, 0])]);
        assert!(subspace_lattice_points(&[], 3).is_empty());
        // a line of slope 2/3 meets ℤ² in multiples of (3, 2)
        let line = vec![vec![ratio(1, 1), ratio(2, 3)]];
        assert_eq!(subspace_lattice_points(&line, 2), vec![int_vec(&[3, 2])]);
    }

    fn int_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..7, r * c)
                .prop_map(move |v| IntMatrix::from_rows(v.chunks(c).map(int_vec).collect(), c))
        })
    }

    /// Product of random elementary integer operations.
    fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec((0..n, 0..n, -3i64..4, any::<bool>()), 0..8).prop_map(move |ops| {
            let mut u = IntMatrix::identity(n);
            for (i, j, f, swap) in ops {
                if swap {
                    u.swap_rows(i, j);
                } else if i != j {
                    u.sub_row(i, j, &BigInt::from(f));
                }
            }
            u
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn hnf_properties(a in int_matrix()) {
            let hf = check_hnf(&a);
            let again = hermite_normal_form(&hf.h);
            prop_assert_eq!(again.h, hf.h.clone());
            prop_assert_eq!(hf.rank, crate::matrix::rank(&a.to_rational()));
        }

        #[test]
        fn smith_properties(
            (a, p, q) in int_matrix().prop_flat_map(|a| {
                let (r, c) = (a.rows(), a.cols());
                (Just(a), unimodular(r), unimodular(c))
            })
        ) {
            let sf = smith_normal_form(&a);
            prop_assert_eq!(sf.p.mul(&a).mul(&sf.q), sf.d.clone());
            prop_assert_eq!(sf.p.determinant().abs(), BigInt::one());
            prop_assert_eq!(sf.q.determinant().abs(), BigInt::one());
            prop_assert_eq!(sf.invariants.len(), crate::matrix::rank(&a.to_rational()));
            for w in sf.invariants.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
            prop_assert!(sf.invariants.iter().all(|d| d.is_positive()));
            let transformed = p.mul(&a).mul(&q);
            prop_assert_eq!(smith_invariants(&transformed), sf.invariants);
        }

        #[test]
        fn lattice_points_saturate(
            basis in proptest::collection::vec(proptest::collection::vec((-4i64..5, 1i64..4), 4), 0..3),
            coeffs in proptest::collection::vec(-3i64..4, 3),
        ) {
            let k = 4;
            let basis: Vec<Vec<Rational>> =
                basis.iter().map(|v| v.iter().map(|&(p, q)| ratio(p, q)).collect()).collect();
            let out = subspace_lattice_points(&basis, k);
            let s_rank = crate::matrix::rank(&RationalMatrix::from_rows(&basis, k));
            prop_assert_eq!(out.len(), s_rank);
            // every output vector lies in S
            for v in &out {
                let mut rows = basis.clone();
                rows.push(crate::rational::to_rational_vec(v));
                prop_assert_eq!(crate::matrix::rank(&RationalMatrix::from_rows(&rows, k)), s_rank);
            }
            // integer points of S built from scaled basis vectors are integer combinations of the output
            let mut point = vec![Rational::zero(); k];
            for (b, c) in basis.iter().zip(&coeffs) {
                let prim = crate::rational::primitive_integer(b);
                for i in 0..k {
                    point[i] += Rational::from_integer(&prim[i] * BigInt::from(*c));
                }
            }
            if !out.is_empty() {
                let m = RationalMatrix::from_int_rows(&out, k).transpose();
                let sol = crate::matrix::solve(&m, &point).expect("point lies in S");
                prop_assert!(sol.iter().all(|x| x.is_integer()));
            }
        }
    }
}

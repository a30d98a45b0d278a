//! Cone-level predicates on explicit generator lists.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::{smith_invariants, IntMatrix};
use crate::lp::{lp_solve, LinearProgram};
use crate::matrix::{rank, RationalMatrix};
use crate::rational::{dot, primitive_integer, to_rational_vec, Rational};

fn unit(len: usize, at: usize) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); len];
    e[at] = Rational::one();
    e
}

/// Decides `x ∈ cone(gens)` by an exact feasibility LP.
pub fn cone_contains(gens: &[Vec<Rational>], dim: usize, x: &[Rational]) -> bool {
    let k = gens.len();
    let mut lp = LinearProgram::new(k);
    for j in 0..dim {
        lp.equal(gens.iter().map(|g| g[j].clone()).collect(), x[j].clone());
    }
    for i in 0..k {
        lp.ge(unit(k, i), Rational::zero());
    }
    lp_solve(&lp).is_feasible()
}

/// A cone contains a line iff some nontrivial non-negative combination of
/// its generators vanishes.
pub fn cone_is_strictly_convex(gens: &[Vec<Rational>], dim: usize) -> bool {
    let k = gens.len();
    if k == 0 {
        return true;
    }
    let mut lp = LinearProgram::new(k);
    for j in 0..dim {
        lp.equal(gens.iter().map(|g| g[j].clone()).collect(), Rational::zero());
    }
    lp.equal(vec![Rational::one(); k], Rational::one());
    for i in 0..k {
        lp.ge(unit(k, i), Rational::zero());
    }
    !lp_solve(&lp).is_feasible()
}

pub fn cone_is_simplicial(gens: &[Vec<Rational>], dim: usize) -> bool {
    rank(&RationalMatrix::from_rows(gens, dim)) == gens.len()
}

/// Simplicial, and the generators extend to a lattice basis (all Smith
/// invariants equal 1).
pub fn cone_is_regular(gens: &[Vec<BigInt>], dim: usize) -> bool {
    let rows: Vec<Vec<Rational>> = gens.iter().map(|g| to_rational_vec(g)).collect();
    if !cone_is_simplicial(&rows, dim) {
        return false;
    }
    let inv = smith_invariants(&IntMatrix::from_rows(gens.to_vec(), dim));
    inv.len() == gens.len() && inv.iter().all(One::is_one)
}

/// The cone `{x : ⟨u, x⟩ ≥ 0 for every listed u}`. The normals generate the
/// dual cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfspaceDescription {
    pub dim: usize,
    #[serde(with = "crate::rational::serde_rational_rows")]
    pub normals: Vec<Vec<Rational>>,
}

impl HalfspaceDescription {
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.normals.iter().all(|u| dot(u, x) >= Rational::zero())
    }
}

/// Homogeneous linear constraint over `(x, λ)`.
#[derive(Clone, PartialEq, Eq)]
struct Row(Vec<Rational>);

impl Row {
    fn normalized(self) -> Option<Row> {
        if self.0.iter().all(Zero::is_zero) {
            return None;
        }
        Some(Row(to_rational_vec(&primitive_integer(&self.0))))
    }

    /// self − (self[col] / pivot[col])·pivot
    fn eliminate(&self, pivot: &Row, col: usize) -> Row {
        let f = &self.0[col] / &pivot.0[col];
        Row(self.0.iter().zip(&pivot.0).map(|(a, b)| a - &f * b).collect())
    }
}

fn push_unique(rows: &mut Vec<Row>, r: Row) {
    if let Some(r) = r.normalized() {
        if !rows.contains(&r) {
            rows.push(r);
        }
    }
}

/// Generators of the dual cone by Fourier–Motzkin elimination of `λ` from
/// `{x = Σ λ_i g_i, λ ≥ 0}`, followed by exact-LP redundancy removal.
pub fn dual_cone(gens: &[Vec<Rational>], dim: usize) -> HalfspaceDescription {
    let k = gens.len();
    let width = dim + k;
    let mut equalities: Vec<Row> = (0..dim)
        .map(|j| {
            let mut r = vec![Rational::zero(); width];
            r[j] = Rational::one();
            for (i, g) in gens.iter().enumerate() {
                r[dim + i] = -g[j].clone();
            }
            Row(r)
        })
        .collect();
    let mut inequalities: Vec<Row> = (0..k).map(|i| Row(unit(width, dim + i))).collect();

    for col in dim..width {
        if let Some(p) = equalities.iter().position(|e| !e.0[col].is_zero()) {
            let pivot = equalities.remove(p);
            equalities = equalities
                .iter()
                .filter_map(|e| if e.0[col].is_zero() { Some(e.clone()) } else { e.eliminate(&pivot, col).normalized() })
                .collect();
            let old = std::mem::take(&mut inequalities);
            for r in old {
                let r = if r.0[col].is_zero() { r } else { r.eliminate(&pivot, col) };
                push_unique(&mut inequalities, r);
            }
            continue;
        }
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in inequalities.drain(..) {
            match r.0[col].partial_cmp(&Rational::zero()) {
                Some(std::cmp::Ordering::Greater) => pos.push(r),
                Some(std::cmp::Ordering::Less) => neg.push(r),
                _ => rest.push(r),
            }
        }
        let mut next = Vec::new();
        for r in rest {
            push_unique(&mut next, r);
        }
        for p in &pos {
            for n in &neg {
                let a = -n.0[col].clone();
                let b = p.0[col].clone();
                let combo = Row(p.0.iter().zip(&n.0).map(|(x, y)| &a * x + &b * y).collect());
                push_unique(&mut next, combo);
            }
        }
        inequalities = next;
    }

    let mut normals: Vec<Vec<Rational>> = Vec::new();
    let mut add = |v: Vec<Rational>| {
        let v: Vec<Rational> = v[..dim].to_vec();
        if v.iter().all(Zero::is_zero) {
            return;
        }
        let v = to_rational_vec(&primitive_integer(&v));
        if !normals.contains(&v) {
            normals.push(v);
        }
    };
    for e in &equalities {
        add(e.0.clone());
        add(e.0.iter().map(|x| -x.clone()).collect());
    }
    for r in &inequalities {
        add(r.0.clone());
    }
    normals.sort_by(|a, b| b.cmp(a));

    let mut i = 0;
    while i < normals.len() {
        let others: Vec<Vec<Rational>> =
            normals.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
        if cone_contains(&others, dim, &normals[i]) {
            normals.remove(i);
        } else {
            i += 1;
        }
    }
    HalfspaceDescription { dim, normals }
}

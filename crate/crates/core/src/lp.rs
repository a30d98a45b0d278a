//! Exact linear programming over ℚ.
//!
//! Two-phase tableau simplex with Bland's rule. Variables are free; every
//! constraint is `row·x ≥ rhs` or `row·x = rhs`; the objective is maximized.
//! Optimal answers carry a dual vector that is checked before returning.

use num_traits::{Signed, Zero};

use crate::matrix::{solve, RationalMatrix};
use crate::rational::{dot, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub vars: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub point: Vec<Rational>,
    /// One multiplier per constraint: `≤ 0` on `≥` rows, free on `=` rows,
    /// with `Σ y_i row_i = objective` and `Σ y_i rhs_i = value`.
    pub dual: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LinearProgram {
    /// Feasibility problem (zero objective) in `vars` free variables.
    pub fn new(vars: usize) -> Self {
        Self { vars, constraints: Vec::new(), objective: vec![Rational::zero(); vars] }
    }

    pub fn ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.vars, "constraint row length");
        self.constraints.push(Constraint { coeffs, relation: Relation::Ge, rhs });
        self
    }

    pub fn equal(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.vars, "constraint row length");
        self.constraints.push(Constraint { coeffs, relation: Relation::Eq, rhs });
        self
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) -> &mut Self {
        assert_eq!(objective.len(), self.vars, "objective length");
        self.objective = objective;
        self
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.vars
            && self.constraints.iter().all(|c| {
                let lhs = dot(&c.coeffs, x);
                match c.relation {
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }

    /// Checks that `y` is dual feasible with objective `value`, which by weak
    /// duality certifies that no feasible point exceeds `value`.
    pub fn dual_certifies(&self, y: &[Rational], value: &Rational) -> bool {
        if y.len() != self.constraints.len() {
            return false;
        }
        let sign_ok = self
            .constraints
            .iter()
            .zip(y)
            .all(|(c, yi)| c.relation == Relation::Eq || !yi.is_positive());
        let mut combo = vec![Rational::zero(); self.vars];
        let mut bound = Rational::zero();
        for (c, yi) in self.constraints.iter().zip(y) {
            for (acc, a) in combo.iter_mut().zip(&c.coeffs) {
                *acc += yi * a;
            }
            bound += yi * &c.rhs;
        }
        sign_ok && combo == self.objective && &bound == value
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

enum PhaseResult {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost·z` over columns `< allowed` with Bland's rule.
    fn run(&mut self, cost: &[Rational], allowed: usize) -> PhaseResult {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut rc = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() && !cost[b].is_zero() {
                        rc -= &cost[b] * &self.rows[i][j];
                    }
                }
                rc.is_positive()
            });
            let Some(j) = entering else { return PhaseResult::Optimal };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((i, _)) = leave else { return PhaseResult::Unbounded };
            self.pivot(i, j);
        }
    }
}

pub fn lp_solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.vars;
    let rows = lp.constraints.len();
    let slack_rows: Vec<usize> = (0..rows).filter(|&i| lp.constraints[i].relation == Relation::Ge).collect();
    // standard-form columns: x⁺ (n), x⁻ (n), one surplus per ≥ row
    let structural = 2 * n + slack_rows.len();
    let width = structural + rows;
    let mut signs = Vec::with_capacity(rows);
    let mut std_rows: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for (i, c) in lp.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); width + 1];
        for (k, a) in c.coeffs.iter().enumerate() {
            row[k] = a.clone();
            row[n + k] = -a.clone();
        }
        if let Some(pos) = slack_rows.iter().position(|&s| s == i) {
            row[2 * n + pos] = Rational::from_integer((-1).into());
        }
        row[width] = c.rhs.clone();
        let sign = if c.rhs.is_negative() { -1 } else { 1 };
        if sign < 0 {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[structural + i] = Rational::from_integer(1.into());
        signs.push(sign);
        std_rows.push(row);
    }

    let mut tab = Tableau { rows: std_rows.clone(), basis: (structural..width).collect(), width };

    let mut phase1 = vec![Rational::zero(); width];
    for c in phase1.iter_mut().skip(structural) {
        *c = Rational::from_integer((-1).into());
    }
    tab.run(&phase1, width);
    let infeasibility: Rational = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= structural)
        .fold(Rational::zero(), |acc, (i, _)| acc + tab.rhs(i));
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }

    // drive artificials out of the basis; rows where that is impossible are redundant
    let mut kept: Vec<usize> = (0..rows).collect();
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] < structural {
            i += 1;
            continue;
        }
        match (0..structural).find(|&j| !tab.rows[i][j].is_zero()) {
            Some(j) => {
                tab.pivot(i, j);
                i += 1;
            }
            None => {
                tab.rows.remove(i);
                tab.basis.remove(i);
                kept.remove(i);
            }
        }
    }

    let mut cost = vec![Rational::zero(); width];
    for k in 0..n {
        cost[k] = lp.objective[k].clone();
        cost[n + k] = -lp.objective[k].clone();
    }
    if let PhaseResult::Unbounded = tab.run(&cost, structural) {
        return LpOutcome::Unbounded;
    }

    let mut z = vec![Rational::zero(); structural];
    for (i, &b) in tab.basis.iter().enumerate() {
        z[b] = tab.rhs(i).clone();
    }
    let point: Vec<Rational> = (0..n).map(|k| &z[k] - &z[n + k]).collect();
    let value = dot(&lp.objective, &point);

    // duals from Bᵀy = c_B on the original (sign-normalized) rows; the row
    // order of `tab` matches `kept`
    let b_cols: Vec<Vec<Rational>> = tab
        .basis
        .iter()
        .map(|&col| kept.iter().map(|&r| std_rows[r][col].clone()).collect())
        .collect();
    let bt = RationalMatrix::from_rows(&b_cols, kept.len());
    let c_b: Vec<Rational> = tab.basis.iter().map(|&col| cost[col].clone()).collect();
    let y_std = solve(&bt, &c_b).expect("basis matrix is nonsingular");
    let mut dual = vec![Rational::zero(); rows];
    for (k, &r) in kept.iter().enumerate() {
        dual[r] = if signs[r] < 0 { -y_std[k].clone() } else { y_std[k].clone() };
    }

    assert!(lp.satisfied_by(&point), "simplex returned an infeasible point");
    assert!(lp.dual_certifies(&dual, &value), "simplex optimum failed the dual check");
    LpOutcome::Optimal(LpSolution { value, point, dual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_vec, ratio};
    use proptest::prelude::*;

    #[test]
    fn textbook_cases() {
        let mut lp = LinearProgram::new(1);
        lp.ge(rat_vec(&[-1]), rat(-1)).ge(rat_vec(&[1]), rat(0)).maximize(rat_vec(&[1]));
        let sol = lp_solve(&lp);
        let s = sol.optimal().unwrap();
        assert_eq!(s.value, rat(1));
        assert_eq!(s.point, rat_vec(&[1]));

        let mut lp = LinearProgram::new(1);
        lp.ge(rat_vec(&[1]), rat(0)).maximize(rat_vec(&[1]));
        assert_eq!(lp_solve(&lp), LpOutcome::Unbounded);

        let mut lp = LinearProgram::new(1);
        lp.ge(rat_vec(&[1]), rat(1)).ge(rat_vec(&[-1]), rat(0));
        assert_eq!(lp_solve(&lp), LpOutcome::Infeasible);
    }

    #[test]
    fn equality_and_redundant_rows() {
        // x + y = 2, 2x + 2y = 4 (redundant), x - y ≥ 0, maximize y
        let mut lp = LinearProgram::new(2);
        lp.equal(rat_vec(&[1, 1]), rat(2))
            .equal(rat_vec(&[2, 2]), rat(4))
            .ge(rat_vec(&[1, -1]), rat(0))
            .maximize(rat_vec(&[0, 1]));
        let s = lp_solve(&lp).optimal().cloned().unwrap();
        assert_eq!(s.value, rat(1));
        assert_eq!(s.point, rat_vec(&[1, 1]));
    }

    #[test]
    fn fractional_optimum() {
        // max x + y s.t. 3x + y ≤ 2, x + 3y ≤ 2
        let mut lp = LinearProgram::new(2);
        lp.ge(rat_vec(&[-3, -1]), rat(-2)).ge(rat_vec(&[-1, -3]), rat(-2)).maximize(rat_vec(&[1, 1]));
        let s = lp_solve(&lp).optimal().cloned().unwrap();
        assert_eq!(s.value, rat(1));
        assert_eq!(s.point, vec![ratio(1, 2), ratio(1, 2)]);
    }

    /// Brute force over vertices: for a bounded feasible LP with box
    /// constraints, the optimum is attained at a basic solution.
    fn brute_force_optimum(lp: &LinearProgram) -> Option<Rational> {
        let n = lp.vars;
        let m = lp.constraints.len();
        let mut best: Option<Rational> = None;
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            let rows: Vec<Vec<Rational>> = idx.iter().map(|&i| lp.constraints[i].coeffs.clone()).collect();
            let a = RationalMatrix::from_rows(&rows, n);
            if crate::matrix::rank(&a) == n {
                let b: Vec<Rational> = idx.iter().map(|&i| lp.constraints[i].rhs.clone()).collect();
                if let Some(x) = solve(&a, &b) {
                    if lp.satisfied_by(&x) {
                        let v = dot(&lp.objective, &x);
                        if best.as_ref().map_or(true, |bv| v > *bv) {
                            best = Some(v);
                        }
                    }
                }
            }
            // next combination
            let mut k = n;
            loop {
                if k == 0 {
                    return best;
                }
                k -= 1;
                if idx[k] < m - n + k {
                    idx[k] += 1;
                    for t in k + 1..n {
                        idx[t] = idx[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn boxed_lp() -> impl Strategy<Value = LinearProgram> {
        (1usize..4, 0usize..4).prop_flat_map(|(n, extra)| {
            (
                proptest::collection::vec(proptest::collection::vec(-3i64..4, n + 1), extra),
                proptest::collection::vec(-3i64..4, n),
            )
                .prop_map(move |(rows, obj)| {
                    let mut lp = LinearProgram::new(n);
                    for k in 0..n {
                        let mut e = vec![rat(0); n];
                        e[k] = rat(1);
                        lp.ge(e.clone(), rat(-3));
                        e[k] = rat(-1);
                        lp.ge(e, rat(-3));
                    }
                    for r in rows {
                        lp.ge(rat_vec(&r[..n]), rat(r[n]));
                    }
                    lp.maximize(rat_vec(&obj));
                    lp
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn simplex_matches_vertex_enumeration(lp in boxed_lp()) {
            let brute = brute_force_optimum(&lp);
            match lp_solve(&lp) {
                LpOutcome::Optimal(s) => {
                    prop_assert!(lp.satisfied_by(&s.point));
                    prop_assert!(lp.dual_certifies(&s.dual, &s.value));
                    prop_assert_eq!(Some(s.value), brute);
                }
                LpOutcome::Infeasible => prop_assert_eq!(brute, None),
                LpOutcome::Unbounded => prop_assert!(false, "boxed LP cannot be unbounded"),
            }
        }
    }
}

//! Exact-rational linear programming.
//!
//! Problems are stated as `max c·y` subject to `A_i·y ≤ b_i` or
//! `A_i·y = b_i`, with every variable free. The solver runs a two-phase
//! revised simplex with Bland's rule on the dual standard form
//!
//! ```text
//! min b·λ   s.t.  Aᵀλ = c,  λ ≥ 0
//! ```
//!
//! where each equality row contributes a `+A_i` and a `−A_i` column. The
//! primal point is read off the simplex multipliers of the final basis,
//! so a single solve yields both halves of the certificate.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Upper bound on the number of rows accepted by [`LinearProgram::solve`].
pub const MAX_ROWS: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Row {
    /// `A_i·y`.
    pub fn activity(&self, y: &[Rational]) -> Rational {
        self.coeffs.iter().zip(y).map(|(a, v)| *a * *v).sum()
    }
}

/// `max objective·y` over free variables `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    rows: Vec<Row>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Unbounded => "unbounded",
            LpStatus::Infeasible => "infeasible",
        })
    }
}

/// Result of a solve. `primal`, `dual` and `objective_value` are only
/// meaningful when the status is [`LpStatus::Optimal`]; otherwise the
/// vectors are empty and the objective is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<Rational>,
    /// One multiplier per row: nonnegative for `≤` rows, free for `=` rows.
    pub dual: Vec<Rational>,
    pub objective_value: Rational,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Result<LinearProgram> {
        if objective.is_empty() {
            return Err(Error::InvalidInstance("a linear program needs at least one variable".into()));
        }
        Ok(LinearProgram {
            objective,
            rows: Vec::new(),
        })
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Result<()> {
        if coeffs.len() != self.n_vars() {
            return Err(Error::InvalidInstance(format!(
                "row has {} coefficients, expected {}",
                coeffs.len(),
                self.n_vars()
            )));
        }
        self.rows.push(Row { coeffs, relation, rhs });
        Ok(())
    }

    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.add_row(coeffs, Relation::Le, rhs)
    }

    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.add_row(coeffs, Relation::Eq, rhs)
    }

    /// Same problem with rows reordered so that new row `i` is old row `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> LinearProgram {
        LinearProgram {
            objective: self.objective.clone(),
            rows: order.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// Solves the program and re-verifies the certificate of an optimal
    /// outcome. A failed verification is reported as
    /// [`Error::Inconsistency`].
    pub fn solve(&self) -> Result<LpSolution> {
        if self.rows.len() > MAX_ROWS {
            return Err(Error::InvalidInstance(format!(
                "linear program has {} rows, limit is {MAX_ROWS}",
                self.rows.len()
            )));
        }
        let columns: Vec<(usize, bool)> = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                let pair = (row.relation == Relation::Eq).then_some((i, true));
                std::iter::once((i, false)).chain(pair)
            })
            .collect();

        let dual_form = StandardForm {
            lp: self,
            columns: &columns,
            farkas: false,
        };
        match simplex(&dual_form) {
            Outcome::Optimal { basis, x_b, pi } => {
                let mut dual = vec![Rational::ZERO; self.rows.len()];
                for (r, &k) in basis.iter().enumerate() {
                    if k < columns.len() {
                        let (row, negated) = columns[k];
                        if negated {
                            dual[row] -= x_b[r];
                        } else {
                            dual[row] += x_b[r];
                        }
                    }
                }
                let objective_value = dot(&self.objective, &pi);
                let solution = LpSolution {
                    status: LpStatus::Optimal,
                    primal: pi,
                    dual,
                    objective_value,
                };
                solution.verify(self)?;
                Ok(solution)
            }
            // dual unbounded below: no primal point exists
            Outcome::Unbounded => Ok(LpSolution::without_optimum(LpStatus::Infeasible)),
            Outcome::Infeasible => {
                let farkas = StandardForm {
                    lp: self,
                    columns: &columns,
                    farkas: true,
                };
                let status = match simplex(&farkas) {
                    Outcome::Optimal { basis, x_b, .. } => {
                        let value: Rational = basis
                            .iter()
                            .zip(&x_b)
                            .filter(|(&k, _)| k < columns.len())
                            .map(|(&k, &x)| farkas.cost(k) * x)
                            .sum();
                        if value.is_negative() {
                            LpStatus::Infeasible
                        } else {
                            LpStatus::Unbounded
                        }
                    }
                    _ => LpStatus::Unbounded,
                };
                Ok(LpSolution::without_optimum(status))
            }
        }
    }
}

impl LpSolution {
    fn without_optimum(status: LpStatus) -> LpSolution {
        LpSolution {
            status,
            primal: Vec::new(),
            dual: Vec::new(),
            objective_value: Rational::ZERO,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Exact optimality check: primal feasibility, dual feasibility,
    /// equal objectives and complementary slackness on every `≤` row.
    pub fn verify(&self, lp: &LinearProgram) -> Result<()> {
        let fail = |msg: String| Err(Error::Inconsistency(format!("LP certificate: {msg}")));
        if self.status != LpStatus::Optimal {
            return fail(format!("status is {}, not optimal", self.status));
        }
        if self.primal.len() != lp.n_vars() || self.dual.len() != lp.rows.len() {
            return fail("certificate dimensions do not match the program".into());
        }
        for (i, row) in lp.rows.iter().enumerate() {
            let slack = row.rhs - row.activity(&self.primal);
            let lambda = self.dual[i];
            match row.relation {
                Relation::Le => {
                    if slack.is_negative() {
                        return fail(format!("row {i} violated by {}", -slack));
                    }
                    if lambda.is_negative() {
                        return fail(format!("multiplier of row {i} is negative"));
                    }
                    if !(lambda * slack).is_zero() {
                        return fail(format!("complementary slackness fails on row {i}"));
                    }
                }
                Relation::Eq => {
                    if !slack.is_zero() {
                        return fail(format!("equality row {i} off by {slack}"));
                    }
                }
            }
        }
        for j in 0..lp.n_vars() {
            let column: Rational = lp.rows.iter().zip(&self.dual).map(|(row, l)| row.coeffs[j] * *l).sum();
            if column != lp.objective[j] {
                return fail(format!("dual constraint for variable {j} gives {column}, expected {}", lp.objective[j]));
            }
        }
        let primal_value = dot(&lp.objective, &self.primal);
        let dual_value: Rational = lp.rows.iter().zip(&self.dual).map(|(row, l)| row.rhs * *l).sum();
        if primal_value != self.objective_value || dual_value != primal_value {
            return fail(format!("objectives differ: primal {primal_value}, dual {dual_value}"));
        }
        Ok(())
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

/// `min cost·λ` s.t. `Mλ = rhs`, `λ ≥ 0`, with columns generated from the
/// rows of the primal. The Farkas variant appends the row `Σλ = 1` and
/// uses a zero right-hand side for the primal rows.
struct StandardForm<'a> {
    lp: &'a LinearProgram,
    columns: &'a [(usize, bool)],
    farkas: bool,
}

impl StandardForm<'_> {
    fn n_rows(&self) -> usize {
        self.lp.n_vars() + usize::from(self.farkas)
    }

    fn n_cols(&self) -> usize {
        self.columns.len()
    }

    fn entry(&self, k: usize, j: usize) -> Rational {
        let (row, negated) = self.columns[k];
        if j == self.lp.n_vars() {
            return Rational::ONE;
        }
        let a = self.lp.rows[row].coeffs[j];
        if negated {
            -a
        } else {
            a
        }
    }

    fn cost(&self, k: usize) -> Rational {
        let (row, negated) = self.columns[k];
        let b = self.lp.rows[row].rhs;
        if negated {
            -b
        } else {
            b
        }
    }

    fn rhs(&self, j: usize) -> Rational {
        match (self.farkas, j == self.lp.n_vars()) {
            (true, true) => Rational::ONE,
            (true, false) => Rational::ZERO,
            (false, _) => self.lp.objective[j],
        }
    }
}

enum Outcome {
    Optimal {
        basis: Vec<usize>,
        x_b: Vec<Rational>,
        /// Simplex multipliers `c_B B⁻¹` in the original row signs.
        pi: Vec<Rational>,
    },
    Unbounded,
    Infeasible,
}

struct Tableau<'a> {
    sf: &'a StandardForm<'a>,
    /// Row sign flips making the right-hand side nonnegative.
    flip: Vec<bool>,
    /// Column `n_cols + j` is the artificial of row `j`.
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    b_inv: Vec<Vec<Rational>>,
    x_b: Vec<Rational>,
}

enum Phase {
    One,
    Two,
}

impl<'a> Tableau<'a> {
    fn new(sf: &'a StandardForm<'a>) -> Tableau<'a> {
        let m = sf.n_rows();
        let n = sf.n_cols();
        let flip: Vec<bool> = (0..m).map(|j| sf.rhs(j).is_negative()).collect();
        let x_b = (0..m).map(|j| sf.rhs(j).abs()).collect();
        let b_inv = (0..m)
            .map(|r| (0..m).map(|c| if r == c { Rational::ONE } else { Rational::ZERO }).collect())
            .collect();
        let mut in_basis = vec![false; n + m];
        in_basis[n..].iter_mut().for_each(|b| *b = true);
        Tableau {
            sf,
            flip,
            basis: (n..n + m).collect(),
            in_basis,
            b_inv,
            x_b,
        }
    }

    fn is_artificial(&self, k: usize) -> bool {
        k >= self.sf.n_cols()
    }

    fn entry(&self, k: usize, j: usize) -> Rational {
        if self.is_artificial(k) {
            return if k - self.sf.n_cols() == j { Rational::ONE } else { Rational::ZERO };
        }
        let a = self.sf.entry(k, j);
        if self.flip[j] {
            -a
        } else {
            a
        }
    }

    fn cost(&self, k: usize, phase: &Phase) -> Rational {
        match (phase, self.is_artificial(k)) {
            (Phase::One, true) => Rational::ONE,
            (Phase::One, false) | (Phase::Two, true) => Rational::ZERO,
            (Phase::Two, false) => self.sf.cost(k),
        }
    }

    fn multipliers(&self, phase: &Phase) -> Vec<Rational> {
        let m = self.basis.len();
        let mut pi = vec![Rational::ZERO; m];
        for (r, &k) in self.basis.iter().enumerate() {
            let c = self.cost(k, phase);
            if c.is_zero() {
                continue;
            }
            for (p, b) in pi.iter_mut().zip(&self.b_inv[r]) {
                *p += c * *b;
            }
        }
        pi
    }

    /// `B⁻¹ a_k`.
    fn direction(&self, k: usize) -> Vec<Rational> {
        let column: Vec<Rational> = (0..self.basis.len()).map(|j| self.entry(k, j)).collect();
        self.b_inv.iter().map(|row| dot(row, &column)).collect()
    }

    fn pivot(&mut self, r: usize, k: usize, u: &[Rational]) {
        let piv = u[r];
        for v in self.b_inv[r].iter_mut() {
            *v = *v / piv;
        }
        self.x_b[r] = self.x_b[r] / piv;
        let pivot_row = self.b_inv[r].clone();
        let pivot_x = self.x_b[r];
        for (i, &f) in u.iter().enumerate() {
            if i == r || f.is_zero() {
                continue;
            }
            for (v, p) in self.b_inv[i].iter_mut().zip(&pivot_row) {
                *v -= f * *p;
            }
            self.x_b[i] -= f * pivot_x;
        }
        self.in_basis[self.basis[r]] = false;
        self.in_basis[k] = true;
        self.basis[r] = k;
    }

    /// Bland's rule: lowest-index improving column, lowest-index leaving
    /// variable among ratio ties. Artificials never re-enter.
    fn run(&mut self, phase: Phase) -> bool {
        loop {
            let pi = self.multipliers(&phase);
            let entering = (0..self.sf.n_cols()).find(|&k| {
                !self.in_basis[k] && {
                    let priced: Rational = pi.iter().enumerate().map(|(j, p)| *p * self.entry(k, j)).sum();
                    (self.cost(k, &phase) - priced).is_negative()
                }
            });
            let Some(k) = entering else {
                return true;
            };
            let u = self.direction(k);
            let mut leave: Option<(usize, Rational)> = None;
            for (r, &ur) in u.iter().enumerate() {
                if !ur.is_positive() {
                    continue;
                }
                let ratio = self.x_b[r] / ur;
                let better = match leave {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < best_ratio || (ratio == best_ratio && self.basis[r] < self.basis[best])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, k, &u),
                None => return false,
            }
        }
    }

    /// Pivots zero-valued artificials out of the basis where a structural
    /// column can replace them. Those that remain sit on redundant rows.
    fn expel_artificials(&mut self) {
        for r in 0..self.basis.len() {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            let replacement = (0..self.sf.n_cols()).find_map(|k| {
                if self.in_basis[k] {
                    return None;
                }
                let u = self.direction(k);
                (!u[r].is_zero()).then_some((k, u))
            });
            if let Some((k, u)) = replacement {
                self.pivot(r, k, &u);
            }
        }
    }
}

fn simplex(sf: &StandardForm<'_>) -> Outcome {
    let mut t = Tableau::new(sf);
    // phase one is bounded below by zero, so it always terminates optimal
    t.run(Phase::One);
    let infeasibility: Rational = t
        .basis
        .iter()
        .zip(&t.x_b)
        .filter(|(&k, _)| t.is_artificial(k))
        .map(|(_, &x)| x)
        .sum();
    if infeasibility.is_positive() {
        return Outcome::Infeasible;
    }
    t.expel_artificials();
    if !t.run(Phase::Two) {
        return Outcome::Unbounded;
    }
    let pi = t
        .multipliers(&Phase::Two)
        .into_iter()
        .zip(&t.flip)
        .map(|(p, &f)| if f { -p } else { p })
        .collect();
    Outcome::Optimal {
        basis: t.basis,
        x_b: t.x_b,
        pi,
    }
}

//! Exact simplex linear programming.
//!
//! Two entry points:
//!
//! * [`solve_standard`] solves `min c·w` subject to `A w = b, w ≥ 0` with a
//!   two-phase revised simplex that keeps the basis inverse explicitly.
//!   Entering columns follow Dantzig's rule (most negative reduced cost);
//!   after a run of degenerate pivots the phase switches to Bland's rule
//!   (lowest entering index, lowest leaving index on ratio ties) for the
//!   rest of the phase, so it always terminates.
//! * [`lp_solve`] takes the general form used by the geometry modules: free
//!   variables, equality rows and `≤` rows. Geometry LPs have a handful of
//!   variables and one or two rows per extreme point, so the general form is
//!   solved through its dual, which has one row per primal variable. The
//!   primal point is read off as the simplex multipliers of the dual.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, int_dot, scaled};
use crate::scalar::{zero, Scalar};

/// `minimize objective·u` over free variables `u`, subject to equality rows
/// and `row·u ≤ bound` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    pub num_vars: usize,
    pub objective: Vec<T>,
    pub equalities: Vec<(Vec<T>, T)>,
    pub inequalities: Vec<(Vec<T>, T)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome<T> {
    pub status: LpStatus,
    /// Present iff `status == Optimal`.
    pub value: Option<T>,
    /// Present iff `status == Optimal`.
    pub point: Option<Vec<T>>,
}

impl<T: Scalar> LinearProgram<T> {
    /// Feasibility problem (zero objective) in `num_vars` free variables.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![zero(); num_vars],
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn minimize(mut self, objective: Vec<T>) -> Self {
        self.objective = objective;
        self
    }

    /// Stored as `minimize(-objective)`, so the reported value is the
    /// negated maximum.
    pub fn maximize(mut self, objective: Vec<T>) -> Self {
        self.objective = objective.into_iter().map(|c| -c).collect();
        self
    }

    pub fn equal(&mut self, row: Vec<T>, rhs: T) -> &mut Self {
        self.equalities.push((row, rhs));
        self
    }

    pub fn at_most(&mut self, row: Vec<T>, bound: T) -> &mut Self {
        self.inequalities.push((row, bound));
        self
    }

    pub fn at_least(&mut self, row: Vec<T>, bound: T) -> &mut Self {
        self.inequalities
            .push((row.into_iter().map(|c| -c).collect(), -bound));
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars;
        if self.objective.len() != n {
            return Err(Error::input(format!(
                "objective has {} coefficients, expected {n}",
                self.objective.len()
            )));
        }
        let rows = self.equalities.iter().chain(&self.inequalities);
        if let Some((i, (row, _))) = rows.enumerate().find(|(_, (row, _))| row.len() != n) {
            return Err(Error::input(format!(
                "constraint row {i} has {} coefficients, expected {n}",
                row.len()
            )));
        }
        Ok(())
    }

    /// Exact check that `point` satisfies every constraint.
    pub fn is_feasible(&self, point: &[T]) -> bool {
        point.len() == self.num_vars
            && self.equalities.iter().all(|(row, rhs)| &dot(row, point) == rhs)
            && self.inequalities.iter().all(|(row, bound)| &dot(row, point) <= bound)
    }
}

impl<T: Scalar> LpOutcome<T> {
    fn without_point(status: LpStatus) -> Self {
        LpOutcome {
            status,
            value: None,
            point: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Solves a general-form program exactly.
pub fn lp_solve<T: Scalar>(prog: &LinearProgram<T>) -> Result<LpOutcome<T>> {
    prog.validate()?;
    let n = prog.num_vars;

    // Dual: min Σ e·λ⁺ − e·λ⁻ + g·μ  s.t.  Eᵀλ⁺ − Eᵀλ⁻ + Gᵀμ = −c, all ≥ 0.
    let mut columns = Vec::with_capacity(2 * prog.equalities.len() + prog.inequalities.len());
    let mut costs = Vec::with_capacity(columns.capacity());
    for (row, rhs) in &prog.equalities {
        columns.push(row.clone());
        costs.push(rhs.clone());
        columns.push(row.iter().map(|c| -c.clone()).collect());
        costs.push(-rhs.clone());
    }
    for (row, bound) in &prog.inequalities {
        columns.push(row.clone());
        costs.push(bound.clone());
    }
    let rhs: Vec<T> = prog.objective.iter().map(|c| -c.clone()).collect();
    let mut dual = StandardForm {
        rows: n,
        columns,
        costs,
        rhs,
    };

    let sol = solve_standard(&dual)?;
    match sol.status {
        LpStatus::Optimal => {
            let point = sol.duals;
            let value = dot(&prog.objective, &point);
            debug_assert!(prog.is_feasible(&point));
            Ok(LpOutcome {
                status: LpStatus::Optimal,
                value: Some(value),
                point: Some(point),
            })
        }
        LpStatus::Unbounded => Ok(LpOutcome::without_point(LpStatus::Infeasible)),
        LpStatus::Infeasible => {
            // Primal is infeasible or unbounded; the zero-objective primal
            // decides which.
            dual.rhs = vec![zero(); n];
            let probe = solve_standard(&dual)?;
            let status = if probe.status == LpStatus::Unbounded {
                LpStatus::Infeasible
            } else {
                LpStatus::Unbounded
            };
            Ok(LpOutcome::without_point(status))
        }
    }
}

/// `minimize costs·w` subject to `Σ_j columns[j] w_j = rhs`, `w ≥ 0`.
///
/// Stored column-wise; each column has `rows` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardForm<T> {
    pub rows: usize,
    pub columns: Vec<Vec<T>>,
    pub costs: Vec<T>,
    pub rhs: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardSolution<T> {
    pub status: LpStatus,
    /// Primal values, one per column (zeros unless optimal).
    pub x: Vec<T>,
    pub value: T,
    /// Simplex multipliers `c_B B⁻¹` for the original rows, one per row.
    pub duals: Vec<T>,
}

impl<T: Scalar> StandardForm<T> {
    pub fn new(rows: usize) -> Self {
        StandardForm {
            rows,
            columns: Vec::new(),
            costs: Vec::new(),
            rhs: vec![zero(); rows],
        }
    }

    pub fn push_column(&mut self, column: Vec<T>, cost: T) -> usize {
        self.columns.push(column);
        self.costs.push(cost);
        self.columns.len() - 1
    }

    fn validate(&self) -> Result<()> {
        if self.rhs.len() != self.rows {
            return Err(Error::input("right-hand side length differs from row count"));
        }
        if self.costs.len() != self.columns.len() {
            return Err(Error::input("cost vector length differs from column count"));
        }
        if self.columns.iter().any(|c| c.len() != self.rows) {
            return Err(Error::input("column length differs from row count"));
        }
        Ok(())
    }
}

pub fn solve_standard<T: Scalar>(sf: &StandardForm<T>) -> Result<StandardSolution<T>> {
    sf.validate()?;
    let m = sf.rows;
    let n = sf.columns.len();

    // Make the right-hand side non-negative by flipping rows.
    let flip: Vec<bool> = sf.rhs.iter().map(|b| b.is_negative()).collect();
    let columns: Vec<Vec<T>> = sf
        .columns
        .iter()
        .map(|col| {
            col.iter()
                .zip(&flip)
                .map(|(a, &f)| if f { -a.clone() } else { a.clone() })
                .collect()
        })
        .collect();
    let rhs: Vec<T> = sf.rhs.iter().map(|b| b.abs()).collect();

    let mut tab = Revised::new(&columns, rhs);

    // Phase 1: minimise the sum of artificials.
    let phase_one: Vec<T> = vec![zero(); n];
    tab.set_costs(&phase_one, T::one());
    if tab.iterate() == Step::Unbounded {
        unreachable!("phase one objective is bounded below by zero");
    }
    let infeasibility = tab
        .basis
        .iter()
        .zip(&tab.xb)
        .filter(|(&j, _)| j >= n)
        .fold(zero::<T>(), |mut acc, (_, x)| {
            acc += x;
            acc
        });
    if infeasibility.is_positive() {
        return Ok(StandardSolution {
            status: LpStatus::Infeasible,
            x: vec![zero(); n],
            value: zero(),
            duals: vec![zero(); m],
        });
    }
    tab.drive_out_artificials();

    // Phase 2.
    tab.set_costs(&sf.costs, zero());
    let step = tab.iterate();
    let mut x = vec![zero::<T>(); n];
    for (&j, v) in tab.basis.iter().zip(&tab.xb) {
        if j < n {
            x[j] = v.clone();
        }
    }
    let mut duals = tab.multipliers();
    for (d, &f) in duals.iter_mut().zip(&flip) {
        if f {
            *d = -d.clone();
        }
    }
    let status = match step {
        Step::Optimal => LpStatus::Optimal,
        Step::Unbounded => LpStatus::Unbounded,
    };
    let value = if status == LpStatus::Optimal {
        dot(&sf.costs, &x)
    } else {
        zero()
    };
    Ok(StandardSolution {
        status,
        x,
        value,
        duals,
    })
}

#[derive(Debug, PartialEq, Eq)]
enum Step {
    Optimal,
    Unbounded,
}

/// Revised simplex state. Column indices `< n` are structural, `n + r` is
/// the artificial of row `r`. Artificials never re-enter once they leave.
struct Revised<'a, T> {
    columns: &'a [Vec<T>],
    m: usize,
    n: usize,
    binv: Vec<Vec<T>>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    xb: Vec<T>,
    costs: Vec<T>,
    /// Integer-scaled `(A_j, c_j)` for pricing.
    priced: Vec<Vec<BigInt>>,
    artificial_cost: T,
    bland: bool,
    degenerate_streak: usize,
}

/// Consecutive degenerate pivots tolerated before switching to Bland's rule
/// for good.
const DEGENERATE_LIMIT: usize = 16;

impl<'a, T: Scalar> Revised<'a, T> {
    fn new(columns: &'a [Vec<T>], rhs: Vec<T>) -> Self {
        let m = rhs.len();
        let n = columns.len();
        let binv = (0..m)
            .map(|i| (0..m).map(|k| if i == k { T::one() } else { zero() }).collect())
            .collect();
        let mut in_basis = vec![false; n + m];
        for flag in &mut in_basis[n..] {
            *flag = true;
        }
        Revised {
            columns,
            m,
            n,
            binv,
            basis: (n..n + m).collect(),
            in_basis,
            xb: rhs,
            costs: Vec::new(),
            priced: Vec::new(),
            artificial_cost: zero(),
            bland: false,
            degenerate_streak: 0,
        }
    }

    fn set_costs(&mut self, costs: &[T], artificial_cost: T) {
        self.costs = costs.to_vec();
        self.artificial_cost = artificial_cost;
        self.priced = self
            .columns
            .iter()
            .zip(costs)
            .map(|(col, c)| {
                let mut v = col.clone();
                v.push(c.clone());
                scaled(&v).num
            })
            .collect();
        self.bland = false;
        self.degenerate_streak = 0;
    }

    fn cost(&self, j: usize) -> &T {
        if j < self.n {
            &self.costs[j]
        } else {
            &self.artificial_cost
        }
    }

    /// π = c_B B⁻¹
    fn multipliers(&self) -> Vec<T> {
        let mut pi = vec![zero::<T>(); self.m];
        for (i, &j) in self.basis.iter().enumerate() {
            let c = self.cost(j).clone();
            if c.is_zero() {
                continue;
            }
            crate::linalg::add_scaled(&mut pi, &c, &self.binv[i]);
        }
        pi
    }

    /// B⁻¹ a_j
    fn ftran(&self, j: usize) -> Vec<T> {
        let col = &self.columns[j];
        self.binv.iter().map(|row| dot(row, col)).collect()
    }

    fn iterate(&mut self) -> Step {
        loop {
            // Reduced cost of column j, scaled by a positive factor:
            // c'_j·D − P·A'_j with π = P/D and (A_j, c_j) = (A'_j, c'_j)/L_j.
            let pi = scaled(&self.multipliers());
            let mut row: Vec<BigInt> = pi.num.iter().map(|p| -p).collect();
            row.push(pi.den);
            let mut entering: Option<(usize, BigInt)> = None;
            for j in 0..self.n {
                if self.in_basis[j] {
                    continue;
                }
                let d = int_dot(&row, &self.priced[j]);
                if !d.is_negative() {
                    continue;
                }
                if self.bland {
                    entering = Some((j, d));
                    break;
                }
                if entering.as_ref().is_none_or(|(_, best)| d < *best) {
                    entering = Some((j, d));
                }
            }
            let Some((j, _)) = entering else {
                return Step::Optimal;
            };
            let alpha = self.ftran(j);
            let mut leave: Option<(usize, T)> = None;
            for (i, a) in alpha.iter().enumerate() {
                if !a.is_positive() {
                    continue;
                }
                let mut ratio = self.xb[i].clone();
                ratio /= a;
                let better = match &leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, step)) = leave else {
                return Step::Unbounded;
            };
            if step.is_zero() {
                self.degenerate_streak += 1;
                if self.degenerate_streak > DEGENERATE_LIMIT {
                    self.bland = true;
                }
            } else {
                self.degenerate_streak = 0;
            }
            self.pivot(r, j, &alpha);
        }
    }

    fn pivot(&mut self, r: usize, j: usize, alpha: &[T]) {
        let pivot = alpha[r].clone();
        let mut theta = self.xb[r].clone();
        theta /= &pivot;
        for (i, a) in alpha.iter().enumerate() {
            if i == r || a.is_zero() {
                continue;
            }
            let mut t = a.clone();
            t *= &theta;
            self.xb[i] -= &t;
        }
        self.xb[r] = theta;

        for x in self.binv[r].iter_mut() {
            *x /= &pivot;
        }
        let pivot_row = self.binv[r].clone();
        for (i, a) in alpha.iter().enumerate() {
            if i == r || a.is_zero() {
                continue;
            }
            crate::linalg::add_scaled(&mut self.binv[i], &-a.clone(), &pivot_row);
        }

        let old = self.basis[r];
        self.in_basis[old] = false;
        self.in_basis[j] = true;
        self.basis[r] = j;
    }

    /// After a feasible phase one, swap zero-level artificials for structural
    /// columns where the row allows it. Rows where no structural column has a
    /// non-zero entry are redundant and keep their artificial at zero.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if self.basis[r] < self.n {
                continue;
            }
            let candidate = (0..self.n).find(|&j| {
                !self.in_basis[j] && !dot(&self.binv[r], &self.columns[j]).is_zero()
            });
            if let Some(j) = candidate {
                let alpha = self.ftran(j);
                self.pivot(r, j, &alpha);
            }
        }
    }
}

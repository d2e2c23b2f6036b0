//! Counters: affine functionals with values in `[0, 1]` on the state space.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::Face;
use crate::linalg::dot;
use crate::lp::{lp_solve, LinearProgram, LpStatus};
use crate::scalar::{zero, Scalar};
use crate::space::StateSpace;

/// `φ(x) = a·x + b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Counter<T> {
    pub a: Vec<T>,
    pub b: T,
}

impl<T: Scalar> Counter<T> {
    pub fn new(a: Vec<T>, b: T) -> Self {
        Counter { a, b }
    }

    pub fn constant(dimension: usize, value: T) -> Self {
        Counter {
            a: vec![zero(); dimension],
            b: value,
        }
    }

    pub fn dimension(&self) -> usize {
        self.a.len()
    }

    pub fn evaluate(&self, x: &[T]) -> Result<T> {
        if x.len() != self.a.len() {
            return Err(Error::input(format!(
                "counter has dimension {}, point has {} coordinates",
                self.a.len(),
                x.len()
            )));
        }
        Ok(self.value_at(x))
    }

    pub(crate) fn value_at(&self, x: &[T]) -> T {
        let mut v = dot(&self.a, x);
        v += &self.b;
        v
    }

    /// `1 − φ`, which swaps the one-set and the zero-set.
    pub fn complement(&self) -> Self {
        Counter {
            a: self.a.iter().map(|c| -c.clone()).collect(),
            b: T::one() - self.b.clone(),
        }
    }

    /// Values on the extreme points.
    pub fn vertex_values(&self, space: &StateSpace<T>) -> Result<Vec<T>> {
        space.vertices().iter().map(|v| self.evaluate(v)).collect()
    }

    /// `0 ≤ φ ≤ 1` on every extreme point, hence on the whole space.
    pub fn is_normal(&self, space: &StateSpace<T>) -> Result<bool> {
        let values = self.vertex_values(space)?;
        Ok(values.iter().all(|v| !v.is_negative() && v <= &T::one()))
    }

    fn require_normal(&self, space: &StateSpace<T>) -> Result<Vec<T>> {
        let values = self.vertex_values(space)?;
        if values.iter().any(|v| v.is_negative() || v > &T::one()) {
            return Err(Error::domain(format!(
                "counter {self} is not normal on {}",
                space.label()
            )));
        }
        Ok(values)
    }

    /// Face spanned by the extreme points where `φ = 1`.
    pub fn one_set(&self, space: &StateSpace<T>) -> Result<Face<T>> {
        let values = self.require_normal(space)?;
        let idx = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_one())
            .map(|(i, _)| i);
        Ok(Face::from_sorted(space, idx.collect()))
    }

    /// Face spanned by the extreme points where `φ = 0`.
    pub fn zero_set(&self, space: &StateSpace<T>) -> Result<Face<T>> {
        let values = self.require_normal(space)?;
        let idx = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_zero())
            .map(|(i, _)| i);
        Ok(Face::from_sorted(space, idx.collect()))
    }
}

impl<T: Scalar> fmt::Display for Counter<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            match (first, sign) {
                (true, "-") => write!(f, "-")?,
                (true, _) => {}
                (false, s) => write!(f, " {s} ")?,
            }
            if mag.is_one() {
                write!(f, "x{i}")?;
            } else {
                write!(f, "{mag}*x{i}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.b)
        } else if self.b.is_negative() {
            write!(f, " - {}", -self.b.clone())
        } else if self.b.is_zero() {
            Ok(())
        } else {
            write!(f, " + {}", self.b)
        }
    }
}

/// Builder for LPs whose first `d + 1` variables are the coefficients
/// `(a, b)` of a normal functional, followed by `extra` auxiliary variables.
///
/// The gradient `a` is pinned to the direction space of the hull, so a
/// functional is determined by its values on the extreme points.
pub(crate) struct NormalProgram<'s, T> {
    pub space: &'s StateSpace<T>,
    pub lp: LinearProgram<T>,
    pub extra: usize,
}

impl<'s, T: Scalar> NormalProgram<'s, T> {
    pub fn new(space: &'s StateSpace<T>, extra: usize) -> Self {
        let d = space.dimension();
        let mut lp = LinearProgram::new(d + 1 + extra);
        for n in space.normals() {
            let mut row = n.clone();
            row.resize(d + 1 + extra, zero());
            lp.equal(row, zero());
        }
        let mut prog = NormalProgram { space, lp, extra };
        for v in space.vertices() {
            let row = prog.eval_row(v);
            prog.lp.at_least(row.clone(), zero());
            prog.lp.at_most(row, T::one());
        }
        prog
    }

    /// Row `r` with `r·u = φ(x)`.
    pub fn eval_row(&self, x: &[T]) -> Vec<T> {
        let mut row = x.to_vec();
        row.push(T::one());
        row.resize(row.len() + self.extra, zero());
        row
    }

    /// Row selecting auxiliary variable `k`.
    pub fn extra_row(&self, k: usize) -> Vec<T> {
        let d = self.space.dimension();
        let mut row = vec![zero(); d + 1 + self.extra];
        row[d + 1 + k] = T::one();
        row
    }

    pub fn counter_from(&self, point: &[T]) -> Counter<T> {
        let d = self.space.dimension();
        Counter {
            a: point[..d].to_vec(),
            b: point[d].clone(),
        }
    }
}

/// Largest `s` such that some normal φ is 1 on `face` and at most `1 − s`
/// on every other extreme point, with an optimal `(φ, s)`.
pub(crate) fn max_slack<T: Scalar>(
    space: &StateSpace<T>,
    face: &[usize],
) -> Result<(T, Counter<T>)> {
    let mut prog = NormalProgram::new(space, 1);
    let s_row = prog.extra_row(0);
    for (i, v) in space.vertices().iter().enumerate() {
        let row = prog.eval_row(v);
        if face.binary_search(&i).is_ok() {
            prog.lp.equal(row, T::one());
        } else {
            let mut with_slack = row;
            with_slack[space.dimension() + 1] = T::one();
            prog.lp.at_most(with_slack, T::one());
        }
    }
    let lp = std::mem::replace(&mut prog.lp, LinearProgram::new(0)).maximize(s_row);
    let out = lp_solve(&lp)?;
    match (out.status, out.point) {
        (LpStatus::Optimal, Some(point)) => {
            let s = point[space.dimension() + 1].clone();
            Ok((s, prog.counter_from(&point)))
        }
        (status, _) => Err(Error::domain(format!(
            "no normal functional is 1 on the given vertex set ({status:?})"
        ))),
    }
}

/// Normal functional whose one-set is exactly `face`.
///
/// Maximises the smallest gap `1 − φ(v)` over extreme points `v` outside the
/// face, then picks the lexicographically smallest `(a, b)` among the
/// maximisers. The improper face `S` gets the constant 1.
pub fn support_counter<T: Scalar>(space: &StateSpace<T>, face: &Face<T>) -> Result<Counter<T>> {
    face.check_space(space)?;
    if face.is_empty() {
        return Err(Error::input("the empty face has no supporting counter with value 1"));
    }
    let d = space.dimension();
    if face.len() == space.num_vertices() {
        return Ok(Counter::constant(d, T::one()));
    }
    let (best, _) = max_slack(space, face.vertices())?;
    if !best.is_positive() {
        return Err(Error::domain(format!("face {face} is not exposed")));
    }

    let mut prog = NormalProgram::new(space, 0);
    for (i, v) in space.vertices().iter().enumerate() {
        let row = prog.eval_row(v);
        if face.contains_vertex(i) {
            prog.lp.equal(row, T::one());
        } else {
            prog.lp.at_most(row, T::one() - best.clone());
        }
    }
    let mut fixed: Vec<T> = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let mut objective = vec![zero::<T>(); d + 1];
        objective[k] = T::one();
        let lp = prog.lp.clone().minimize(objective.clone());
        let out = lp_solve(&lp)?;
        let point = match (out.status, out.point) {
            (LpStatus::Optimal, Some(p)) => p,
            (status, _) => {
                return Err(Error::domain(format!(
                    "support counter tie-break failed at coordinate {k} ({status:?})"
                )))
            }
        };
        fixed.push(point[k].clone());
        prog.lp.equal(objective, point[k].clone());
    }
    let b = fixed.pop().unwrap_or_else(zero);
    Ok(Counter { a: fixed, b })
}

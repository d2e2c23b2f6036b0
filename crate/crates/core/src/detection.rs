//! Detection ratios `y:x = min { φ(y) : φ normal, φ(x) = 1 }`.
//!
//! Over a polytope the normal functionals with `φ(x) = 1` form a polytope as
//! well, so the infimum is attained and one LP gives the exact value together
//! with a minimising counter.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::counter::{Counter, NormalProgram};
use crate::error::{Error, Result};
use crate::lattice::{MAX_LATTICE_DIM, MAX_LATTICE_VERTICES};
use crate::lp::{lp_solve, LinearProgram, LpStatus};
use crate::scalar::{zero, Scalar};
use crate::space::{StatePoint, StateSpace};

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionRatioResult<T> {
    pub ratio: T,
    /// Normal, equal to 1 at `x` and to `ratio` at `y`.
    pub counter: Counter<T>,
    /// The state detected with certainty.
    pub x: StatePoint<T>,
    /// The probe state.
    pub y: StatePoint<T>,
}

fn require_inside<T: Scalar>(space: &StateSpace<T>, p: &[T], name: &str) -> Result<()> {
    if !space.contains(p)? {
        return Err(Error::input(format!(
            "{name} = {} lies outside the state space",
            StatePoint(p.to_vec())
        )));
    }
    Ok(())
}

/// Some non-constant normal counter reaches 1 at `x`. Decided with a single
/// LP: minimise the sum of vertex values subject to `φ(x) = 1`; the minimum
/// stays at the vertex count only when every such counter is `≡ 1`.
pub(crate) fn detectable<T: Scalar>(space: &StateSpace<T>, x: &[T]) -> Result<bool> {
    let mut prog = NormalProgram::new(space, 0);
    let row = prog.eval_row(x);
    prog.lp.equal(row, T::one());
    let mut total = vec![zero::<T>(); space.dimension() + 1];
    for v in space.vertices() {
        for (acc, c) in total.iter_mut().zip(prog.eval_row(v)) {
            *acc += &c;
        }
    }
    let lp = std::mem::replace(&mut prog.lp, LinearProgram::new(0)).minimize(total);
    let out = lp_solve(&lp)?;
    match out.value {
        Some(v) if out.status == LpStatus::Optimal => {
            Ok(v < T::from_int(space.num_vertices() as i64))
        }
        _ => Ok(false),
    }
}

/// `y:x`, the smallest fraction of `y` admitted by any counter that detects
/// every `x`. Refuses `x` in the relative interior, where only the constant
/// counter reaches 1.
pub fn detection_ratio<T: Scalar>(
    space: &StateSpace<T>,
    y: &[T],
    x: &[T],
) -> Result<DetectionRatioResult<T>> {
    space.check_dimension(x)?;
    space.check_dimension(y)?;
    require_inside(space, x, "x")?;
    require_inside(space, y, "y")?;
    if !detectable(space, x)? {
        return Err(Error::domain(format!(
            "state not detectable with certainty: {} lies in the interior of {}",
            StatePoint(x.to_vec()),
            space.label()
        )));
    }
    let mut prog = NormalProgram::new(space, 0);
    let xrow = prog.eval_row(x);
    prog.lp.equal(xrow, T::one());
    let yrow = prog.eval_row(y);
    let lp = std::mem::replace(&mut prog.lp, LinearProgram::new(0)).minimize(yrow);
    let out = lp_solve(&lp)?;
    match (out.status, out.point, out.value) {
        (LpStatus::Optimal, Some(point), Some(ratio)) => Ok(DetectionRatioResult {
            ratio,
            counter: prog.counter_from(&point),
            x: StatePoint(x.to_vec()),
            y: StatePoint(y.to_vec()),
        }),
        (status, _, _) => Err(Error::domain(format!(
            "detection LP did not reach an optimum ({status:?})"
        ))),
    }
}

/// `entry[i][j] = v_i : v_j` over the extreme points.
pub fn ratio_matrix<T: Scalar>(space: &StateSpace<T>) -> Result<Vec<Vec<T>>> {
    let m = space.num_vertices();
    if space.affine_dim() > MAX_LATTICE_DIM || m > MAX_LATTICE_VERTICES {
        return Err(Error::Resource(format!(
            "ratio matrix is limited to affine dimension ≤ {MAX_LATTICE_DIM} and at most \
             {MAX_LATTICE_VERTICES} extreme points (got {}, {m}); use detection_ratio on \
             individual pairs",
            space.affine_dim()
        )));
    }
    let verts = space.vertices();
    (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        Ok(T::one())
                    } else {
                        detection_ratio(space, &verts[i], &verts[j]).map(|r| r.ratio)
                    }
                })
                .collect()
        })
        .collect()
}

/// Random normal counters with `φ(x) = 1`: vertices of the counter polytope
/// picked by random objectives, blended pairwise with random weights.
pub fn sample_detecting_counters<T: Scalar>(
    space: &StateSpace<T>,
    x: &[T],
    trials: usize,
    seed: u64,
) -> Result<Vec<Counter<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut base = NormalProgram::new(space, 0);
    let xrow = base.eval_row(x);
    base.lp.equal(xrow, T::one());
    let rows: Vec<Vec<T>> = space.vertices().iter().map(|v| base.eval_row(v)).collect();

    let mut out: Vec<Counter<T>> = Vec::with_capacity(trials);
    while out.len() < trials {
        // Objectives built from vertex values keep the LP bounded.
        let mut objective = vec![zero::<T>(); space.dimension() + 1];
        for row in &rows {
            let c = T::from_int(rng.random_range(-8..=8));
            crate::linalg::add_scaled(&mut objective, &c, row);
        }
        let lp = base.lp.clone().minimize(objective);
        let sol = lp_solve(&lp)?;
        let Some(point) = sol.point else {
            return Err(Error::domain("no normal counter detects x with certainty"));
        };
        let mut phi = base.counter_from(&point);
        if let Some(prev) = out.last() {
            if rng.random_bool(0.5) {
                let t = T::from_ratio(rng.random_range(1..16), 16);
                phi = blend(&phi, prev, &t);
            }
        }
        out.push(phi);
    }
    Ok(out)
}

fn blend<T: Scalar>(p: &Counter<T>, q: &Counter<T>, t: &T) -> Counter<T> {
    let s = T::one() - t.clone();
    let mix = |a: &T, b: &T| {
        let mut l = a.clone();
        l *= t;
        let mut r = b.clone();
        r *= &s;
        l + r
    };
    Counter {
        a: p.a.iter().zip(&q.a).map(|(a, b)| mix(a, b)).collect(),
        b: mix(&p.b, &q.b),
    }
}

/// Outcome of sampling counters against the detection-ratio lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpossibilityReport<T> {
    pub ratio: T,
    /// `φ(y)` for each sampled counter.
    pub samples: Vec<T>,
    pub violations: usize,
}

impl<T: Scalar> ImpossibilityReport<T> {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Samples counters that detect `x` with certainty and compares `φ(y)`
/// against `y:x` exactly.
pub fn impossibility_report<T: Scalar>(
    space: &StateSpace<T>,
    x: &[T],
    y: &[T],
    trials: usize,
    seed: u64,
) -> Result<ImpossibilityReport<T>> {
    let ratio = detection_ratio(space, y, x)?.ratio;
    let samples: Vec<T> = sample_detecting_counters(space, x, trials, seed)?
        .iter()
        .map(|phi| phi.value_at(y))
        .collect();
    let violations = samples.iter().filter(|s| **s < ratio).count();
    Ok(ImpossibilityReport {
        ratio,
        samples,
        violations,
    })
}

/// True iff no sampled counter with `φ(x) = 1` admits less than `y:x` of `y`.
pub fn impossibility_check<T: Scalar>(
    space: &StateSpace<T>,
    x: &[T],
    y: &[T],
    trials: usize,
    seed: u64,
) -> Result<bool> {
    impossibility_report(space, x, y, trials, seed).map(|r| r.holds())
}

/// Draws a random seed; handy for callers that do not need reproducibility.
pub fn random_seed() -> u64 {
    rand::rng().random()
}

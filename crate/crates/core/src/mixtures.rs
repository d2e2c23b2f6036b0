//! Convex decompositions of states into extreme points.

use std::fmt;

use crate::error::{Error, Result};
use crate::lp::{solve_standard, LpStatus, StandardForm};
use crate::scalar::{zero, Scalar};
use crate::space::{decomposition_form, mix, StatePoint, StateSpace};

/// `target = Σ weight · vertex`, all weights positive, summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexDecomposition<T> {
    /// `(weight, vertex index)`, ordered by vertex index.
    pub terms: Vec<(T, usize)>,
    pub target: StatePoint<T>,
}

impl<T: Scalar> ConvexDecomposition<T> {
    pub fn support(&self) -> Vec<usize> {
        self.terms.iter().map(|(_, i)| *i).collect()
    }

    /// Recomputes the mixture from the space's extreme points.
    pub fn remix(&self, space: &StateSpace<T>) -> Result<StatePoint<T>> {
        let verts = space.vertices();
        let terms: Vec<(T, &[T])> = self
            .terms
            .iter()
            .map(|(w, i)| (w.clone(), verts[*i].as_slice()))
            .collect();
        mix(&terms)
    }
}

impl<T: Scalar> fmt::Display for ConvexDecomposition<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (w, i)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{w}·v{i}")?;
        }
        Ok(())
    }
}

/// Lexicographic decomposition: maximise the weight of the lowest-indexed
/// allowed vertex, fix it, move on. The result is a basic solution, so it
/// uses at most `affine_dim + 1` vertices.
fn lex_decompose<T: Scalar>(
    space: &StateSpace<T>,
    x: &[T],
    allowed: &[bool],
) -> Result<Option<ConvexDecomposition<T>>> {
    let cols: Vec<usize> = (0..space.num_vertices()).filter(|&i| allowed[i]).collect();
    let refs: Vec<&[T]> = cols.iter().map(|&i| space.vertices()[i].as_slice()).collect();
    let full = decomposition_form(&refs, x);
    if solve_standard(&full)?.status != LpStatus::Optimal {
        return Ok(None);
    }

    let mut remaining: Vec<usize> = (0..cols.len()).collect();
    let mut rhs = full.rhs.clone();
    let mut terms = Vec::new();
    let last = rhs.len() - 1;
    while let Some(&first) = remaining.first() {
        if rhs[last].is_zero() {
            break;
        }
        let mut sf = StandardForm::new(full.rows);
        for &k in &remaining {
            let cost = if k == first { -T::one() } else { zero() };
            sf.push_column(full.columns[k].clone(), cost);
        }
        sf.rhs = rhs.clone();
        let sol = solve_standard(&sf)?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::domain("decomposition LP lost feasibility"));
        }
        let w = sol.x[0].clone();
        if w.is_positive() {
            crate::linalg::add_scaled(&mut rhs, &-w.clone(), &full.columns[first]);
            terms.push((w, cols[first]));
        }
        remaining.remove(0);
    }
    Ok(Some(ConvexDecomposition {
        terms,
        target: StatePoint(x.to_vec()),
    }))
}

/// A decomposition of `x` into at most `affine_dim + 1` extreme points.
pub fn decompose<T: Scalar>(space: &StateSpace<T>, x: &[T]) -> Result<ConvexDecomposition<T>> {
    space.check_dimension(x)?;
    let allowed = vec![true; space.num_vertices()];
    lex_decompose(space, x, &allowed)?.ok_or_else(|| {
        Error::domain(format!(
            "point {} lies outside the state space",
            StatePoint(x.to_vec())
        ))
    })
}

/// Two decompositions of `x` with different supports, or `None` when the
/// decomposition is unique.
///
/// Starting from the default decomposition, each support vertex in turn is
/// forced to weight zero. Any other basic decomposition must drop at least
/// one of those vertices, so if every forced problem is infeasible the
/// decomposition is unique.
pub fn distinct_decompositions<T: Scalar>(
    space: &StateSpace<T>,
    x: &[T],
) -> Result<Option<(ConvexDecomposition<T>, ConvexDecomposition<T>)>> {
    let base = decompose(space, x)?;
    for i in base.support() {
        let mut allowed = vec![true; space.num_vertices()];
        allowed[i] = false;
        if let Some(other) = lex_decompose(space, x, &allowed)? {
            return Ok(Some((base, other)));
        }
    }
    Ok(None)
}

/// Extreme-point count equals affine dimension plus one.
pub fn is_simplex<T: Scalar>(space: &StateSpace<T>) -> bool {
    space.num_vertices() == space.affine_dim() + 1
}

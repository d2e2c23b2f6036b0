//! Convex state spaces given by their extreme points.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, int_dot, scaled, sub, Scaled};
use crate::lp::{solve_standard, LpStatus, StandardForm};
use crate::scalar::{zero, Scalar};

/// Identity of a state space, derived from its extreme points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpaceId(pub u64);

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

/// A point of the affine space the states live in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StatePoint<T>(pub Vec<T>);

impl<T> Deref for StatePoint<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> From<Vec<T>> for StatePoint<T> {
    fn from(coords: Vec<T>) -> Self {
        StatePoint(coords)
    }
}

impl<T: Scalar> fmt::Display for StatePoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The convex hull of finitely many extreme points.
///
/// Cheap to clone; faces keep a handle to the space they belong to.
#[derive(Clone)]
pub struct StateSpace<T> {
    inner: Arc<Inner<T>>,
}

struct Inner<T> {
    label: String,
    dimension: usize,
    vertices: Vec<Vec<T>>,
    id: SpaceId,
    affine_dim: usize,
    /// Basis of the vectors orthogonal to every edge direction of the hull.
    normals: Vec<Vec<T>>,
}

/// Why an input point was dropped by [`make_state_space`].
#[derive(Debug, Clone, PartialEq)]
pub enum Pruned<T> {
    /// Repeats an earlier input point.
    Duplicate { index: usize, first: usize },
    /// Convex combination of other inputs; `weights[k]` multiplies input `sources[k]`.
    Mixture {
        index: usize,
        sources: Vec<usize>,
        weights: Vec<T>,
    },
}

impl<T> fmt::Debug for StateSpace<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateSpace")
            .field("label", &self.inner.label)
            .field("dimension", &self.inner.dimension)
            .field("vertices", &self.inner.vertices)
            .finish()
    }
}

impl<T> PartialEq for StateSpace<T> {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}

impl<T> Eq for StateSpace<T> {}

/// `out[i]` is true when point `i` of `keep` is the unique maximiser of
/// `⟨·, p_i − c⟩` over the kept points, `c` a dyadic rounding of the centroid.
/// Any `c` gives a sound certificate; the centroid makes it usually succeed.
fn exposed_by_centroid_direction<T: Scalar>(points: &[Vec<T>], keep: &[usize]) -> Vec<bool> {
    let mut out = vec![false; points.len()];
    if keep.len() < 2 {
        return out;
    }
    let d = points[keep[0]].len();
    let mut centroid = vec![0.0f64; d];
    for &k in keep {
        for (c, x) in centroid.iter_mut().zip(&points[k]) {
            *c += x.as_f64() / keep.len() as f64;
        }
    }
    let Some(centroid) = centroid
        .iter()
        .map(|&c| T::from_f64_exact(c))
        .collect::<Option<Vec<T>>>()
    else {
        return out;
    };
    let ints: Vec<Scaled> = points.iter().map(|p| scaled(p)).collect();
    for &i in keep {
        let dir = scaled(&sub(&points[i], &centroid)).num;
        let top = int_dot(&ints[i].num, &dir);
        out[i] = keep.iter().all(|&j| {
            j == i || int_dot(&ints[j].num, &dir) * &ints[i].den < &top * &ints[j].den
        });
    }
    out
}

/// Builds a state space from candidate points, keeping only extreme points
/// in first-occurrence order.
pub fn make_state_space<T: Scalar>(label: &str, points: Vec<Vec<T>>) -> Result<StateSpace<T>> {
    StateSpace::build(label, points).map(|(space, _)| space)
}

impl<T: Scalar> StateSpace<T> {
    /// Like [`make_state_space`], also returning a certificate for every
    /// dropped input point.
    pub fn build(label: &str, points: Vec<Vec<T>>) -> Result<(Self, Vec<Pruned<T>>)> {
        let Some(first) = points.first() else {
            return Err(Error::input("a state space needs at least one point"));
        };
        let dimension = first.len();
        if let Some(i) = points.iter().position(|p| p.len() != dimension) {
            return Err(Error::input(format!(
                "point {i} has {} coordinates, expected {dimension}",
                points[i].len()
            )));
        }

        let mut pruned = Vec::new();
        let mut keep: Vec<usize> = Vec::new();
        for (i, p) in points.iter().enumerate() {
            match keep.iter().find(|&&k| &points[k] == p) {
                Some(&k) => pruned.push(Pruned::Duplicate { index: i, first: k }),
                None => keep.push(i),
            }
        }

        // A point that uniquely maximises `p - centroid` is extreme; only the
        // rest need an LP.
        let surely_extreme = exposed_by_centroid_direction(&points, &keep);

        // Points that are mixtures of the others never become extreme after
        // other removals, so one stable pass suffices.
        let mut pos = 0;
        while pos < keep.len() {
            let i = keep[pos];
            if surely_extreme[i] {
                pos += 1;
                continue;
            }
            let others: Vec<usize> = keep.iter().copied().filter(|&k| k != i).collect();
            let refs: Vec<&[T]> = others.iter().map(|&k| points[k].as_slice()).collect();
            match convex_weights(&refs, &points[i])? {
                Some(weights) if !others.is_empty() => {
                    let (sources, weights) = others
                        .into_iter()
                        .zip(weights)
                        .filter(|(_, w)| !w.is_zero())
                        .unzip();
                    pruned.push(Pruned::Mixture {
                        index: i,
                        sources,
                        weights,
                    });
                    keep.remove(pos);
                }
                _ => pos += 1,
            }
        }

        let vertices: Vec<Vec<T>> = keep.into_iter().map(|k| points[k].clone()).collect();
        Ok((Self::from_extreme_points(label, dimension, vertices), pruned))
    }

    fn from_extreme_points(label: &str, dimension: usize, vertices: Vec<Vec<T>>) -> Self {
        let diffs: Vec<Vec<T>> = vertices[1..].iter().map(|v| sub(v, &vertices[0])).collect();
        let normals = linalg::null_space(&diffs, dimension);
        let affine_dim = dimension - normals.len();

        let mut hasher = DefaultHasher::new();
        dimension.hash(&mut hasher);
        for v in &vertices {
            for c in v {
                c.to_string().hash(&mut hasher);
            }
            0xffu8.hash(&mut hasher);
        }
        StateSpace {
            inner: Arc::new(Inner {
                label: label.to_string(),
                dimension,
                vertices,
                id: SpaceId(hasher.finish()),
                affine_dim,
                normals,
            }),
        }
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    /// Dimension of the ambient affine space.
    pub fn dimension(&self) -> usize {
        self.inner.dimension
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.inner.vertices
    }

    pub fn vertex(&self, i: usize) -> Result<StatePoint<T>> {
        self.inner
            .vertices
            .get(i)
            .map(|v| StatePoint(v.clone()))
            .ok_or_else(|| {
                Error::input(format!(
                    "vertex index {i} out of range ({} extreme points)",
                    self.num_vertices()
                ))
            })
    }

    pub fn num_vertices(&self) -> usize {
        self.inner.vertices.len()
    }

    pub fn id(&self) -> SpaceId {
        self.inner.id
    }

    /// Affine dimension of the hull.
    pub fn affine_dim(&self) -> usize {
        self.inner.affine_dim
    }

    /// Vectors orthogonal to the hull's direction space; empty when the hull
    /// is full-dimensional.
    pub(crate) fn normals(&self) -> &[Vec<T>] {
        &self.inner.normals
    }

    pub(crate) fn check_dimension(&self, x: &[T]) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::input(format!(
                "point has {} coordinates, state space has dimension {}",
                x.len(),
                self.dimension()
            )));
        }
        Ok(())
    }

    /// Is `x` a convex combination of the extreme points?
    pub fn contains(&self, x: &[T]) -> Result<bool> {
        self.check_dimension(x)?;
        let refs: Vec<&[T]> = self.vertices().iter().map(|v| v.as_slice()).collect();
        Ok(convex_weights(&refs, x)?.is_some())
    }

    pub(crate) fn require_member(&self, x: &[T]) -> Result<()> {
        if !self.contains(x)? {
            return Err(Error::domain(format!(
                "point {} lies outside the state space",
                StatePoint(x.to_vec())
            )));
        }
        Ok(())
    }

    /// Centroid of the listed extreme points.
    pub(crate) fn centroid(&self, indices: &[usize]) -> Vec<T> {
        let mut c = vec![zero::<T>(); self.dimension()];
        for &i in indices {
            for (acc, x) in c.iter_mut().zip(&self.vertices()[i]) {
                *acc += x;
            }
        }
        let n = T::from_int(indices.len() as i64);
        for acc in c.iter_mut() {
            *acc /= &n;
        }
        c
    }
}

/// Weights `λ ≥ 0, Σλ = 1` with `Σ λ_k points[k] = x`, if any exist.
pub(crate) fn convex_weights<T: Scalar>(points: &[&[T]], x: &[T]) -> Result<Option<Vec<T>>> {
    let sf = decomposition_form(points, x);
    let sol = solve_standard(&sf)?;
    Ok((sol.status == LpStatus::Optimal).then_some(sol.x))
}

/// Standard-form rows `Σ λ_k (p_k, 1) = (x, 1)` with zero costs.
pub(crate) fn decomposition_form<T: Scalar>(points: &[&[T]], x: &[T]) -> StandardForm<T> {
    let d = x.len();
    let mut sf = StandardForm::new(d + 1);
    for p in points {
        let mut col = p.to_vec();
        col.push(T::one());
        sf.push_column(col, zero());
    }
    sf.rhs = x.to_vec();
    sf.rhs.push(T::one());
    sf
}

/// Convex combination `Σ w_k x_k`; weights must be non-negative and sum to exactly one.
pub fn mix<T: Scalar>(terms: &[(T, &[T])]) -> Result<StatePoint<T>> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::input("a mixture needs at least one component"));
    };
    let d = first.len();
    let mut total = zero::<T>();
    let mut out = vec![zero::<T>(); d];
    for (w, x) in terms {
        if w.is_negative() {
            return Err(Error::input(format!("negative mixing weight {w}")));
        }
        if x.len() != d {
            return Err(Error::input("mixture components have different dimensions"));
        }
        total += w;
        linalg::add_scaled(&mut out, w, x);
    }
    if !total.is_one() {
        return Err(Error::input(format!("mixing weights sum to {total}, not 1")));
    }
    Ok(StatePoint(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    type Q = ExactScalar;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn pt(xs: &[(i64, i64)]) -> Vec<Q> {
        xs.iter().map(|&(n, d)| q(n, d)).collect()
    }

    fn ints(xs: &[&[i64]]) -> Vec<Vec<Q>> {
        xs.iter()
            .map(|p| p.iter().map(|&x| Q::from_int(x)).collect())
            .collect()
    }

    fn square() -> StateSpace<Q> {
        make_state_space("square", ints(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]])).unwrap()
    }

    #[test]
    fn interior_candidate_is_pruned_with_certificate() {
        let mut pts = ints(&[&[0, 0], &[1, 0], &[0, 1]]);
        pts.push(pt(&[(1, 4), (1, 4)]));
        let (s, pruned) = StateSpace::build("t", pts.clone()).unwrap();
        assert_eq!(s.num_vertices(), 3);
        let Pruned::Mixture {
            index,
            sources,
            weights,
        } = &pruned[0]
        else {
            panic!("expected a mixture certificate");
        };
        assert_eq!(*index, 3);
        let terms: Vec<(Q, &[Q])> = sources
            .iter()
            .zip(weights)
            .map(|(&k, w)| (w.clone(), pts[k].as_slice()))
            .collect();
        assert_eq!(mix(&terms).unwrap().0, pts[3]);
    }

    #[test]
    fn duplicates_keep_first_occurrence() {
        let (s, pruned) =
            StateSpace::build("d", ints(&[&[1, 0], &[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert_eq!(s.vertices(), ints(&[&[1, 0], &[0, 0], &[0, 1]]).as_slice());
        assert_eq!(pruned, vec![Pruned::Duplicate { index: 2, first: 0 }]);
    }

    #[test]
    fn square_keeps_all_vertices() {
        assert_eq!(square().num_vertices(), 4);
    }

    #[test]
    fn single_point_space() {
        let s = make_state_space("pt", ints(&[&[0, 0]])).unwrap();
        assert_eq!(s.num_vertices(), 1);
        assert_eq!(s.affine_dim(), 0);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(make_state_space::<Q>("e", vec![]), Err(Error::Input(_))));
        assert!(matches!(
            make_state_space("r", ints(&[&[0, 0], &[1]])),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn affine_dimensions() {
        assert_eq!(square().affine_dim(), 2);
        let seg = make_state_space("seg", ints(&[&[0, 0], &[1, 1]])).unwrap();
        assert_eq!(seg.affine_dim(), 1);
        assert_eq!(seg.normals().len(), 1);
    }

    #[test]
    fn collinear_middle_point_is_pruned() {
        let s = make_state_space("seg", ints(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap();
        assert_eq!(s.vertices(), ints(&[&[0, 0], &[2, 2]]).as_slice());
    }

    #[test]
    fn membership() {
        let s = square();
        assert!(s.contains(&pt(&[(1, 2), (1, 2)])).unwrap());
        assert!(!s.contains(&pt(&[(2, 1), (0, 1)])).unwrap());
        let tri = make_state_space("tri", ints(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert!(tri.contains(&pt(&[(1, 2), (1, 2)])).unwrap());
        assert!(!tri.contains(&pt(&[(1, 2), (2, 3)])).unwrap());
        assert!(matches!(s.contains(&pt(&[(1, 2)])), Err(Error::Input(_))));
    }

    #[test]
    fn mixing() {
        let a = pt(&[(0, 1), (0, 1)]);
        let b = pt(&[(1, 1), (1, 1)]);
        assert_eq!(
            mix(&[(q(1, 2), &a), (q(1, 2), &b)]).unwrap().0,
            pt(&[(1, 2), (1, 2)])
        );
        assert_eq!(mix(&[(q(1, 1), &a), (q(0, 1), &b)]).unwrap().0, a);
        let c = pt(&[(1, 1), (0, 1)]);
        assert_eq!(
            mix(&[(q(1, 4), &a), (q(3, 4), &c)]).unwrap().0,
            pt(&[(3, 4), (0, 1)])
        );
        assert!(mix(&[(q(-1, 2), &a), (q(3, 2), &b)]).is_err());
        assert!(mix(&[(q(1, 2), &a), (q(1, 3), &b)]).is_err());
    }

    #[test]
    fn ids_follow_geometry_not_label() {
        let a = make_state_space("a", ints(&[&[0, 0], &[1, 0]])).unwrap();
        let b = make_state_space("b", ints(&[&[0, 0], &[1, 0]])).unwrap();
        let c = make_state_space("c", ints(&[&[0, 0], &[2, 0]])).unwrap();
        assert_eq!(a.id(), b.id());
        assert_ne!(a.id(), c.id());
    }
}

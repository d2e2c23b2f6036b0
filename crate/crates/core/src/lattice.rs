//! Faces of a state space and the lattice they form.
//!
//! A face is stored as the sorted list of extreme-point indices it contains;
//! for a polytope the face is the convex hull of those points. Order is
//! inclusion, meet is intersection, join is the smallest face containing
//! both arguments.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;

use crate::counter::{max_slack, Counter, NormalProgram};
use crate::error::{Error, Result};
use crate::linalg::{self, affine_rank, dot, sub};
use crate::lp::{lp_solve, solve_standard, LpStatus};
use crate::scalar::{zero, Scalar};
use crate::space::{decomposition_form, SpaceId, StateSpace};

/// Largest affine dimension accepted by [`enumerate_faces`].
pub const MAX_LATTICE_DIM: usize = 6;
/// Largest extreme-point count accepted by [`enumerate_faces`].
pub const MAX_LATTICE_VERTICES: usize = 24;

/// A face of a state space.
#[derive(Clone)]
pub struct Face<T> {
    space: StateSpace<T>,
    vertices: Vec<usize>,
    rank: isize,
}

impl<T: Scalar> Face<T> {
    /// `vertices` must be sorted and duplicate-free.
    pub(crate) fn from_sorted(space: &StateSpace<T>, vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        let pts: Vec<&[T]> = vertices
            .iter()
            .map(|&i| space.vertices()[i].as_slice())
            .collect();
        Face {
            rank: affine_rank(&pts),
            space: space.clone(),
            vertices,
        }
    }

    pub fn empty(space: &StateSpace<T>) -> Self {
        Face {
            space: space.clone(),
            vertices: Vec::new(),
            rank: -1,
        }
    }

    pub fn full(space: &StateSpace<T>) -> Self {
        Face {
            space: space.clone(),
            vertices: (0..space.num_vertices()).collect(),
            rank: space.affine_dim() as isize,
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Affine dimension; -1 for the empty face.
    pub fn rank(&self) -> isize {
        self.rank
    }

    pub fn space_id(&self) -> SpaceId {
        self.space.id()
    }

    pub fn is_full(&self) -> bool {
        self.vertices.len() == self.space.num_vertices()
    }

    pub fn contains_vertex(&self, i: usize) -> bool {
        self.vertices.binary_search(&i).is_ok()
    }

    pub(crate) fn check_space(&self, space: &StateSpace<T>) -> Result<()> {
        if self.space.id() != space.id() {
            return Err(Error::input("face belongs to a different state space"));
        }
        Ok(())
    }

    fn check_same(&self, other: &Face<T>) -> Result<()> {
        if self.space.id() != other.space.id() {
            return Err(Error::input("faces belong to different state spaces"));
        }
        Ok(())
    }

    /// `self ≤ other`, i.e. inclusion.
    pub fn leq(&self, other: &Face<T>) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.vertices.iter().all(|&i| other.contains_vertex(i)))
    }

    /// Intersection.
    pub fn meet(&self, other: &Face<T>) -> Result<Face<T>> {
        self.check_same(other)?;
        let common = self
            .vertices
            .iter()
            .copied()
            .filter(|&i| other.contains_vertex(i))
            .collect();
        Ok(Face::from_sorted(&self.space, common))
    }

    fn mask(&self) -> u64 {
        self.vertices.iter().fold(0, |m, &i| m | (1 << i))
    }
}

impl<T> PartialEq for Face<T> {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.vertices == other.vertices
    }
}

impl<T> Eq for Face<T> {}

impl<T> Hash for Face<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
    }
}

impl<T> PartialOrd for Face<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sorts by rank, then by vertex list.
impl<T> Ord for Face<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rank, &self.vertices).cmp(&(other.rank, &other.vertices))
    }
}

impl<T> fmt::Debug for Face<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Face{:?}", self.vertices)
    }
}

impl<T> fmt::Display for Face<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vertices.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "{{")?;
        for (k, i) in self.vertices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl<T: Scalar> StateSpace<T> {
    /// The face with exactly these extreme points; errors if the set is not a face.
    pub fn face(&self, indices: &[usize]) -> Result<Face<T>> {
        let mut v = indices.to_vec();
        v.sort_unstable();
        v.dedup();
        if let Some(&bad) = v.iter().find(|&&i| i >= self.num_vertices()) {
            return Err(Error::input(format!(
                "vertex index {bad} out of range ({} extreme points)",
                self.num_vertices()
            )));
        }
        let face = Face::from_sorted(self, v);
        if !is_exposed(self, &face)? {
            return Err(Error::domain(format!(
                "vertex set {face} does not span a face of {}",
                self.label()
            )));
        }
        Ok(face)
    }
}

/// `P₁ ≤ P₂`.
pub fn face_leq<T: Scalar>(p1: &Face<T>, p2: &Face<T>) -> Result<bool> {
    p1.leq(p2)
}

/// `P₁ ∧ P₂`.
pub fn face_meet<T: Scalar>(p1: &Face<T>, p2: &Face<T>) -> Result<Face<T>> {
    p1.meet(p2)
}

/// Smallest face containing `x`: the extreme points that carry positive
/// weight in at least one convex decomposition of `x`.
pub fn minimal_face<T: Scalar>(space: &StateSpace<T>, x: &[T]) -> Result<Face<T>> {
    space.check_dimension(x)?;
    let refs: Vec<&[T]> = space.vertices().iter().map(|v| v.as_slice()).collect();
    let mut sf = decomposition_form(&refs, x);
    let first = solve_standard(&sf)?;
    if first.status != LpStatus::Optimal {
        return Err(Error::domain(format!(
            "point {} lies outside the state space",
            crate::space::StatePoint(x.to_vec())
        )));
    }
    let mut positive: Vec<bool> = first.x.iter().map(|w| w.is_positive()).collect();
    for i in 0..space.num_vertices() {
        if positive[i] {
            continue;
        }
        sf.costs = vec![zero(); space.num_vertices()];
        sf.costs[i] = -T::one();
        let sol = solve_standard(&sf)?;
        if sol.status == LpStatus::Optimal {
            for (flag, w) in positive.iter_mut().zip(&sol.x) {
                *flag |= w.is_positive();
            }
        }
    }
    let idx = positive
        .iter()
        .enumerate()
        .filter(|(_, &p)| p)
        .map(|(i, _)| i)
        .collect();
    Ok(Face::from_sorted(space, idx))
}

/// True iff `x` lies on the relative boundary: its minimal face is proper,
/// equivalently a non-constant normal counter reaches 1 at `x`. The second
/// form needs one LP and is what gets evaluated. A one-point space has empty
/// relative boundary.
pub fn is_boundary<T: Scalar>(space: &StateSpace<T>, x: &[T]) -> Result<bool> {
    space.check_dimension(x)?;
    space.require_member(x)?;
    crate::detection::detectable(space, x)
}

/// `P₁ ∨ P₂`: the minimal face of the midpoint of the two vertex centroids.
pub fn face_join<T: Scalar>(space: &StateSpace<T>, p1: &Face<T>, p2: &Face<T>) -> Result<Face<T>> {
    p1.check_space(space)?;
    p2.check_space(space)?;
    if p1.is_empty() {
        return Ok(p2.clone());
    }
    if p2.is_empty() {
        return Ok(p1.clone());
    }
    let c1 = space.centroid(p1.vertices());
    let c2 = space.centroid(p2.vertices());
    let half = T::from_ratio(1, 2);
    let mid: Vec<T> = c1
        .iter()
        .zip(&c2)
        .map(|(a, b)| {
            let mut m = a.clone();
            m += b;
            m *= &half;
            m
        })
        .collect();
    minimal_face(space, &mid)
}

/// Is `face` cut out of the space by a supporting hyperplane? Decided by
/// maximising the smallest gap `1 − φ(v)` outside the face; exposed iff the
/// optimum is positive. By convention `S` (via φ ≡ 1) and `∅` (via φ ≡ 0)
/// are exposed.
pub fn is_exposed<T: Scalar>(space: &StateSpace<T>, face: &Face<T>) -> Result<bool> {
    face.check_space(space)?;
    if face.is_empty() || face.is_full() {
        return Ok(true);
    }
    let (slack, _) = max_slack(space, face.vertices())?;
    Ok(slack.is_positive())
}

/// Result of an orthogonality test.
#[derive(Debug, Clone, PartialEq)]
pub struct Orthogonality<T> {
    pub orthogonal: bool,
    /// Counter equal to 1 on the first face and 0 on the second.
    pub witness: Option<Counter<T>>,
}

/// `P₁ ⊥ P₂`: some normal counter is identically 1 on `P₁` and 0 on `P₂`.
///
/// Orthogonality against the empty face is left undefined and refused.
pub fn orthogonal<T: Scalar>(
    space: &StateSpace<T>,
    p1: &Face<T>,
    p2: &Face<T>,
) -> Result<Orthogonality<T>> {
    p1.check_space(space)?;
    p2.check_space(space)?;
    if p1.is_empty() || p2.is_empty() {
        return Err(Error::input("orthogonality is only defined for non-empty faces"));
    }
    let mut prog = NormalProgram::new(space, 0);
    for &i in p1.vertices() {
        let row = prog.eval_row(&space.vertices()[i]);
        prog.lp.equal(row, T::one());
    }
    for &i in p2.vertices() {
        let row = prog.eval_row(&space.vertices()[i]);
        prog.lp.equal(row, zero());
    }
    let out = lp_solve(&prog.lp)?;
    Ok(match (out.status, out.point) {
        (LpStatus::Optimal, Some(point)) => Orthogonality {
            orthogonal: true,
            witness: Some(prog.counter_from(&point)),
        },
        _ => Orthogonality {
            orthogonal: false,
            witness: None,
        },
    })
}

/// Maximal faces (under inclusion) among those orthogonal to `face`. More
/// than one entry means `face` has no orthocomplement.
pub fn maximal_orthogonal_faces<T: Scalar>(
    space: &StateSpace<T>,
    face: &Face<T>,
) -> Result<Vec<Face<T>>> {
    face.check_space(space)?;
    if face.is_empty() || face.is_full() {
        return Err(Error::input("maximal orthogonal faces need a non-empty proper face"));
    }
    let lattice = enumerate_faces(space)?;
    let ortho: Vec<&Face<T>> = lattice
        .faces
        .par_iter()
        .filter(|q| !q.is_empty())
        .map(|q| orthogonal(space, face, q).map(|o| (q, o.orthogonal)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, ok)| *ok)
        .map(|(q, _)| q)
        .collect();
    let maximal = ortho
        .iter()
        .filter(|q| {
            !ortho
                .iter()
                .any(|r| r.len() > q.len() && q.vertices().iter().all(|&i| r.contains_vertex(i)))
        })
        .map(|q| (*q).clone())
        .collect();
    Ok(maximal)
}

/// All faces of a state space with their covering relation.
#[derive(Debug, Clone)]
pub struct FaceLattice<T> {
    /// Sorted by rank, then vertex list. `faces[0]` is `∅`, the last is `S`.
    pub faces: Vec<Face<T>>,
    /// `(child, parent)` index pairs where `parent` covers `child`.
    pub cover_pairs: Vec<(usize, usize)>,
    /// A normal counter whose one-set is exactly the face.
    pub certificates: Vec<Counter<T>>,
}

impl<T: Scalar> FaceLattice<T> {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn index_of(&self, face: &Face<T>) -> Option<usize> {
        self.faces.binary_search(face).ok()
    }

    /// Number of faces of each rank, starting at rank -1.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.faces.last().map_or(-1, |f| f.rank());
        (-1..=top)
            .map(|r| self.faces.iter().filter(|f| f.rank() == r).count())
            .collect()
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        let m = self.faces[i].mask() & self.faces[j].mask();
        self.by_mask(m)
    }

    /// Join by definition: the intersection of every face containing both.
    pub fn join(&self, i: usize, j: usize) -> usize {
        let both = self.faces[i].mask() | self.faces[j].mask();
        let m = self
            .faces
            .iter()
            .map(Face::mask)
            .filter(|m| m & both == both)
            .fold(u64::MAX, |acc, m| acc & m);
        self.by_mask(m)
    }

    fn by_mask(&self, m: u64) -> usize {
        self.faces
            .iter()
            .position(|f| f.mask() == m)
            .expect("face lattice is closed under intersection")
    }
}

/// Enumerates every face of `space`.
///
/// Facets come from brute force over affinely independent vertex subsets of
/// size `dim`: the hyperplane through the subset supports the space iff all
/// extreme points lie on one side. Every other proper face is an
/// intersection of facets. Each face carries a certifying counter.
pub fn enumerate_faces<T: Scalar>(space: &StateSpace<T>) -> Result<FaceLattice<T>> {
    let m = space.num_vertices();
    let k = space.affine_dim();
    if k > MAX_LATTICE_DIM || m > MAX_LATTICE_VERTICES {
        return Err(Error::Resource(format!(
            "face enumeration is limited to affine dimension ≤ {MAX_LATTICE_DIM} and at most \
             {MAX_LATTICE_VERTICES} extreme points (got dimension {k}, {m} points); \
             query individual faces with minimal_face/is_exposed instead"
        )));
    }
    let d = space.dimension();
    let full: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };

    let mut certified: Vec<(u64, Counter<T>)> = Vec::new();
    let facets = if k == 0 { Vec::new() } else { facets(space) };

    let mut seen: HashSet<u64> = HashSet::new();
    let mut masks: Vec<u64> = Vec::new();
    let mut push = |mask: u64, masks: &mut Vec<u64>| {
        if seen.insert(mask) {
            masks.push(mask);
        }
    };
    push(0, &mut masks);
    push(full, &mut masks);
    for (mask, _) in &facets {
        push(*mask, &mut masks);
    }
    let mut cursor = 0;
    while cursor < masks.len() {
        let f = masks[cursor];
        cursor += 1;
        if f == full {
            continue;
        }
        for (facet, _) in &facets {
            push(f & facet, &mut masks);
        }
    }

    for &mask in &masks {
        let cert = if mask == full {
            Counter::constant(d, T::one())
        } else if mask == 0 {
            Counter::constant(d, zero())
        } else {
            let containing: Vec<&Counter<T>> = facets
                .iter()
                .filter(|(fm, _)| fm & mask == mask)
                .map(|(_, c)| c)
                .collect();
            average(&containing, d)
        };
        certified.push((mask, cert));
    }

    let mut entries: Vec<(Face<T>, Counter<T>)> = certified
        .into_iter()
        .map(|(mask, cert)| {
            let idx: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            (Face::from_sorted(space, idx), cert)
        })
        .collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let (faces, certificates): (Vec<_>, Vec<_>) = entries.into_iter().unzip();

    let mut cover_pairs = Vec::new();
    for (i, child) in faces.iter().enumerate() {
        let cm = child.mask();
        for (j, parent) in faces.iter().enumerate() {
            if parent.rank() == child.rank() + 1 && parent.mask() & cm == cm {
                cover_pairs.push((i, j));
            }
        }
    }
    Ok(FaceLattice {
        faces,
        cover_pairs,
        certificates,
    })
}

fn average<T: Scalar>(counters: &[&Counter<T>], d: usize) -> Counter<T> {
    let mut a = vec![zero::<T>(); d];
    let mut b = zero::<T>();
    for c in counters {
        for (acc, x) in a.iter_mut().zip(&c.a) {
            *acc += x;
        }
        b += &c.b;
    }
    let n = T::from_int(counters.len() as i64);
    for acc in a.iter_mut() {
        *acc /= &n;
    }
    b /= &n;
    Counter { a, b }
}

/// Facets as vertex masks with a counter equal to 1 exactly on the facet.
fn facets<T: Scalar>(space: &StateSpace<T>) -> Vec<(u64, Counter<T>)> {
    let verts = space.vertices();
    let m = verts.len();
    let k = space.affine_dim();
    let d = space.dimension();

    // Coordinates on `k` ambient axes along which the hull projects
    // bijectively onto its affine span.
    let mut diffs: Vec<Vec<T>> = verts[1..].iter().map(|v| sub(v, &verts[0])).collect();
    let axes = linalg::rref(&mut diffs, d);
    let proj: Vec<Vec<T>> = verts
        .iter()
        .map(|v| axes.iter().map(|&a| v[a].clone()).collect())
        .collect();

    let mut found: Vec<(u64, Counter<T>)> = Vec::new();
    let mut index: HashMap<u64, usize> = HashMap::new();
    for subset in combinations(m, k) {
        let smask = subset.iter().fold(0u64, |acc, &i| acc | (1 << i));
        if found.iter().any(|(f, _)| f & smask == smask) {
            continue;
        }
        let rows: Vec<Vec<T>> = subset
            .iter()
            .map(|&i| {
                let mut r = proj[i].clone();
                r.push(T::one());
                r
            })
            .collect();
        let ns = linalg::null_space(&rows, k + 1);
        if ns.len() != 1 {
            continue;
        }
        let h = &ns[0];
        let values: Vec<T> = proj
            .iter()
            .map(|p| {
                let mut x = p.clone();
                x.push(T::one());
                dot(&x, h)
            })
            .collect();
        let sign = if values.iter().all(|v| !v.is_negative()) {
            T::one()
        } else if values.iter().all(|v| !v.is_positive()) {
            -T::one()
        } else {
            continue;
        };
        let values: Vec<T> = values.into_iter().map(|v| v * sign.clone()).collect();
        let fmask = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_zero())
            .fold(0u64, |acc, (i, _)| acc | (1 << i));
        if index.contains_key(&fmask) {
            continue;
        }
        // φ = 1 − ψ / max ψ, lifted back to the ambient coordinates.
        let top = values.iter().max().cloned().unwrap_or_else(T::one);
        let mut a = vec![zero::<T>(); d];
        for (j, &axis) in axes.iter().enumerate() {
            let mut c = -(h[j].clone() * sign.clone());
            c /= &top;
            a[axis] = c;
        }
        let mut b = h[k].clone() * sign.clone();
        b /= &top;
        let b = T::one() - b;
        index.insert(fmask, found.len());
        found.push((fmask, Counter { a, b }));
    }
    found
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let next = {
            let mut c = out.clone();
            let mut i = k;
            loop {
                if i == 0 {
                    break None;
                }
                i -= 1;
                if c[i] < n - k + i {
                    c[i] += 1;
                    for j in i + 1..k {
                        c[j] = c[j - 1] + 1;
                    }
                    break Some(c);
                }
            }
        };
        current = next;
        Some(out)
    })
}

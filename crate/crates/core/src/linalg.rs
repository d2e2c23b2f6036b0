//! Dense exact linear algebra on `Vec<T>` rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{zero, Scalar};

/// `num / den` with a positive common denominator; integer arithmetic on the
/// numerators avoids the gcd work of rational products.
pub(crate) struct Scaled {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

pub(crate) fn scaled<T: Scalar>(x: &[T]) -> Scaled {
    let big: Vec<_> = x.iter().map(|v| v.to_big()).collect();
    let den = big
        .iter()
        .fold(BigInt::one(), |acc, v| if v.is_zero() { acc } else { acc.lcm(v.denom()) });
    let num = big
        .iter()
        .map(|v| {
            if v.is_zero() {
                BigInt::zero()
            } else {
                v.numer() * (&den / v.denom())
            }
        })
        .collect();
    Scaled { num, den }
}

pub(crate) fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc += x * y;
    }
    acc
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = zero::<T>();
    let mut term = zero::<T>();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        term.clone_from(x);
        term *= y;
        acc += &term;
    }
    acc
}

pub(crate) fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let mut d = x.clone();
            d -= y;
            d
        })
        .collect()
}

/// `acc += factor * v`
pub(crate) fn add_scaled<T: Scalar>(acc: &mut [T], factor: &T, v: &[T]) {
    if factor.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if x.is_zero() {
            continue;
        }
        let mut t = x.clone();
        t *= factor;
        *a += &t;
    }
}

/// Reduced row echelon form in place. Returns the pivot column of each
/// non-zero row, in order.
pub(crate) fn rref<T: Scalar>(rows: &mut Vec<Vec<T>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = {
            let mut one = T::one();
            one /= &rows[r][c];
            one
        };
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = -row[c].clone();
            add_scaled(row, &factor, &pivot_row);
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub(crate) fn rank<T: Scalar>(rows: &[Vec<T>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let ncols = first.len();
    let mut work = rows.to_vec();
    rref(&mut work, ncols).len()
}

/// Basis of `{z : rows * z = 0}`.
pub(crate) fn null_space<T: Scalar>(rows: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    let mut work = rows.to_vec();
    let pivots = rref(&mut work, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut z = vec![zero::<T>(); ncols];
            z[f] = T::one();
            for (row, &p) in work.iter().zip(&pivots) {
                z[p] = -row[f].clone();
            }
            z
        })
        .collect()
}

/// Affine dimension of a point set: rank of the differences from the first point.
/// The empty set has dimension -1.
pub(crate) fn affine_rank<T: Scalar>(points: &[&[T]]) -> isize {
    let Some((first, rest)) = points.split_first() else {
        return -1;
    };
    let diffs: Vec<Vec<T>> = rest.iter().map(|p| sub(p, first)).collect();
    rank(&diffs) as isize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;
    use num_traits::Zero;

    fn v(xs: &[i64]) -> Vec<ExactScalar> {
        xs.iter().map(|&x| ExactScalar::from_int(x)).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank(&[v(&[1, 2]), v(&[2, 4])]), 1);
        assert_eq!(rank(&[v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]), 2);
        assert_eq!(rank::<ExactScalar>(&[]), 0);
    }

    #[test]
    fn null_space_is_annihilated() {
        let rows = vec![v(&[1, 1, 0]), v(&[0, 1, 1])];
        let ns = null_space(&rows, 3);
        assert_eq!(ns.len(), 1);
        for z in &ns {
            for r in &rows {
                assert!(dot(r, z).is_zero());
            }
        }
        assert_eq!(null_space::<ExactScalar>(&[], 2).len(), 2);
    }

    #[test]
    fn affine_ranks() {
        let pts = [v(&[0, 0]), v(&[1, 1]), v(&[2, 2])];
        let refs: Vec<&[ExactScalar]> = pts.iter().map(|p| p.as_slice()).collect();
        assert_eq!(affine_rank(&refs), 1);
        assert_eq!(affine_rank::<ExactScalar>(&[]), -1);
        assert_eq!(affine_rank(&refs[..1]), 0);
    }
}

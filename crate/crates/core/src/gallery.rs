//! Built-in example state spaces.

use crate::error::Result;
use crate::quantum::equator_polygon;
use crate::scalar::{ExactScalar, Scalar};
use crate::space::{make_state_space, StateSpace};

fn ints(label: &str, points: &[&[i64]]) -> StateSpace<ExactScalar> {
    let pts = points
        .iter()
        .map(|p| p.iter().map(|&x| ExactScalar::from_int(x)).collect())
        .collect();
    make_state_space(label, pts).expect("gallery spaces are valid")
}

/// `(0,0), (1,0), (0,1)`.
pub fn triangle() -> StateSpace<ExactScalar> {
    ints("triangle", &[&[0, 0], &[1, 0], &[0, 1]])
}

/// Unit square, counter-clockwise from the origin.
pub fn square() -> StateSpace<ExactScalar> {
    ints("square", &[&[0, 0], &[1, 0], &[1, 1], &[0, 1]])
}

/// `{0,1}³`, vertex `k` has coordinates given by the bits of `k`.
pub fn cube() -> StateSpace<ExactScalar> {
    let pts: Vec<Vec<i64>> = (0..8).map(|k| (0..3).map(|b| (k >> b) & 1).collect()).collect();
    let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
    ints("cube", &refs)
}

pub fn pentagon() -> StateSpace<ExactScalar> {
    let p = equator_polygon(5).expect("N = 5 is valid");
    make_state_space("pentagon", p.vertices().to_vec()).expect("pentagon is valid")
}

/// The six eigenstates of the Pauli matrices as Bloch vectors.
pub fn bloch_octahedron() -> StateSpace<ExactScalar> {
    ints(
        "bloch-octahedron",
        &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]],
    )
}

/// `(file stem, space)` for every gallery entry.
pub fn gallery() -> Result<Vec<(String, StateSpace<ExactScalar>)>> {
    let mut out = vec![
        ("triangle".to_string(), triangle()),
        ("square".to_string(), square()),
        ("pentagon".to_string(), pentagon()),
        ("cube".to_string(), cube()),
    ];
    for n in [8, 36, 360] {
        out.push((format!("{n}-gon"), equator_polygon(n)?));
    }
    out.push(("bloch-octahedron".to_string(), bloch_octahedron()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(triangle().num_vertices(), 3);
        assert_eq!(square().num_vertices(), 4);
        assert_eq!(pentagon().num_vertices(), 5);
        assert_eq!(cube().num_vertices(), 8);
        assert_eq!(cube().affine_dim(), 3);
        assert_eq!(bloch_octahedron().num_vertices(), 6);
    }
}

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stategeom::gallery;
use stategeom::{
    enumerate_faces, face_join, face_leq, face_meet, is_boundary, is_exposed, make_state_space,
    maximal_orthogonal_faces, minimal_face, mix, orthogonal, ExactScalar, ExactStateSpace, Scalar,
};

type Q = ExactScalar;

fn spaces() -> Vec<ExactStateSpace> {
    vec![
        gallery::triangle(),
        gallery::square(),
        gallery::pentagon(),
        gallery::cube(),
        gallery::bloch_octahedron(),
    ]
}

#[test]
fn lattice_laws() {
    for s in spaces() {
        let l = enumerate_faces(&s).unwrap();
        let n = l.len();
        assert!(l.faces[0].is_empty() && l.faces[n - 1].is_full());
        for a in 0..n {
            assert_eq!(l.meet(a, a), a);
            assert_eq!(l.join(a, a), a);
            assert_eq!(l.meet(a, 0), 0);
            assert_eq!(l.join(a, n - 1), n - 1);
            for b in 0..n {
                assert_eq!(l.meet(a, b), l.meet(b, a));
                assert_eq!(l.join(a, b), l.join(b, a));
                assert_eq!(l.meet(a, l.join(a, b)), a, "absorption in {}", s.label());
                assert_eq!(l.join(a, l.meet(a, b)), a, "absorption in {}", s.label());
                for c in 0..n {
                    assert_eq!(l.meet(l.meet(a, b), c), l.meet(a, l.meet(b, c)));
                    assert_eq!(l.join(l.join(a, b), c), l.join(a, l.join(b, c)));
                }
            }
        }
    }
}

#[test]
fn lp_join_and_meet_match_the_lattice() {
    for s in spaces() {
        let l = enumerate_faces(&s).unwrap();
        for (a, fa) in l.faces.iter().enumerate() {
            for (b, fb) in l.faces.iter().enumerate() {
                assert_eq!(&face_join(&s, fa, fb).unwrap(), &l.faces[l.join(a, b)]);
                assert_eq!(&face_meet(fa, fb).unwrap(), &l.faces[l.meet(a, b)]);
                assert_eq!(face_leq(fa, fb).unwrap(), l.meet(a, b) == a);
            }
        }
    }
}

#[test]
fn cover_pairs_step_one_rank() {
    for s in spaces() {
        let l = enumerate_faces(&s).unwrap();
        for &(i, j) in &l.cover_pairs {
            assert!(face_leq(&l.faces[i], &l.faces[j]).unwrap());
            assert_eq!(l.faces[i].rank() + 1, l.faces[j].rank());
        }
        // every non-top face is covered by something
        for i in 0..l.len() - 1 {
            assert!(l.cover_pairs.iter().any(|&(a, _)| a == i));
        }
    }
}

#[test]
fn every_polytope_face_is_exposed() {
    for s in spaces() {
        for f in enumerate_faces(&s).unwrap().faces {
            assert!(is_exposed(&s, &f).unwrap());
        }
    }
}

#[test]
fn orthogonality_is_symmetric_and_disjoint() {
    for s in spaces() {
        let l = enumerate_faces(&s).unwrap();
        let proper: Vec<_> = l.faces.iter().filter(|f| !f.is_empty()).collect();
        for p in &proper {
            for r in &proper {
                let o = orthogonal(&s, p, r).unwrap();
                assert_eq!(o.orthogonal, orthogonal(&s, r, p).unwrap().orthogonal);
                if let Some(phi) = o.witness {
                    assert!(face_meet(p, r).unwrap().is_empty());
                    assert!(phi.is_normal(&s).unwrap());
                    assert!(p.vertices().iter().all(|&i| phi.evaluate(&s.vertices()[i]).unwrap() == Q::from_int(1)));
                    assert!(r.vertices().iter().all(|&i| phi.evaluate(&s.vertices()[i]).unwrap() == Q::from_int(0)));
                }
            }
        }
    }
}

#[test]
fn maximal_orthogonal_faces_are_maximal() {
    for s in spaces() {
        let l = enumerate_faces(&s).unwrap();
        for p in l.faces.iter().filter(|f| !f.is_empty() && !f.is_full()) {
            let maxima = maximal_orthogonal_faces(&s, p).unwrap();
            assert!(!maxima.is_empty());
            for m in &maxima {
                assert!(orthogonal(&s, p, m).unwrap().orthogonal);
                for bigger in l.faces.iter().filter(|f| face_leq(m, f).unwrap() && *f != m) {
                    assert!(!orthogonal(&s, p, bigger).unwrap().orthogonal);
                }
            }
        }
    }
}

#[test]
fn minimal_faces_of_random_mixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for s in spaces() {
        for _ in 0..30 {
            let k = rng.random_range(1..=s.num_vertices());
            let mut support: Vec<usize> = (0..s.num_vertices()).collect();
            for i in (1..support.len()).rev() {
                support.swap(i, rng.random_range(0..=i));
            }
            support.truncate(k);
            let w: Vec<i64> = (0..k).map(|_| rng.random_range(1..=9)).collect();
            let total: i64 = w.iter().sum();
            let terms: Vec<(Q, &[Q])> = support
                .iter()
                .zip(&w)
                .map(|(&i, &wi)| (Q::from_ratio(wi, total), s.vertices()[i].as_slice()))
                .collect();
            let x = mix(&terms).unwrap();
            let f = minimal_face(&s, &x).unwrap();
            // the face holds every point of the support, and x lies in it
            for &i in &support {
                assert!(f.contains_vertex(i));
            }
            let pts: Vec<Vec<Q>> = f.vertices().iter().map(|&i| s.vertices()[i].clone()).collect();
            assert!(make_state_space("f", pts).unwrap().contains(&x).unwrap());
            assert_eq!(is_boundary(&s, &x).unwrap(), !f.is_full());
        }
    }
}

#[test]
fn extreme_points_are_boundary() {
    for s in spaces() {
        for v in s.vertices() {
            assert!(is_boundary(&s, v).unwrap());
            assert_eq!(minimal_face(&s, v).unwrap().len(), 1);
        }
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Strict convex hull size by Andrew's monotone chain.
fn hull_size(points: &[(i64, i64)]) -> usize {
    let mut p = points.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p.len();
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> =
            if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    // collinear input collapses to a segment
    hull.len().max(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_polygon_face_counts(points in prop::collection::vec((-6i64..=6, -6i64..=6), 1..10)) {
        let pts: Vec<Vec<Q>> = points.iter().map(|&(x, y)| vec![Q::from_int(x), Q::from_int(y)]).collect();
        let s = make_state_space("random", pts).unwrap();
        let m = hull_size(&points);
        prop_assert_eq!(s.num_vertices(), m);
        let l = enumerate_faces(&s).unwrap();
        let expected = match s.affine_dim() {
            0 => vec![1, 1],
            1 => vec![1, 2, 1],
            _ => vec![1, m, m, 1],
        };
        prop_assert_eq!(l.f_vector(), expected);
        for (f, phi) in l.faces.iter().zip(&l.certificates) {
            prop_assert!(phi.is_normal(&s).unwrap());
            prop_assert_eq!(&phi.one_set(&s).unwrap(), f);
        }
    }
}

#[test]
fn complement_witness_reverses_orthogonality() {
    for s in spaces() {
        let l = enumerate_faces(&s).unwrap();
        for p in l.faces.iter().filter(|f| !f.is_empty()) {
            for r in l.faces.iter().filter(|f| !f.is_empty()) {
                if let Some(phi) = orthogonal(&s, p, r).unwrap().witness {
                    let psi = phi.complement();
                    assert!(psi.is_normal(&s).unwrap());
                    assert!(face_leq(p, &psi.zero_set(&s).unwrap()).unwrap());
                    assert!(face_leq(r, &psi.one_set(&s).unwrap()).unwrap());
                }
            }
        }
    }
}

#[test]
fn triangle_orthogonals_are_complements() {
    let s = gallery::triangle();
    let l = enumerate_faces(&s).unwrap();
    for p in l.faces.iter().filter(|f| !f.is_empty() && !f.is_full()) {
        let maxima = maximal_orthogonal_faces(&s, p).unwrap();
        assert_eq!(maxima.len(), 1);
        assert!(face_meet(p, &maxima[0]).unwrap().is_empty());
        assert!(face_join(&s, p, &maxima[0]).unwrap().is_full());
    }
    let sq = gallery::square();
    for i in 0..4 {
        assert_eq!(maximal_orthogonal_faces(&sq, &sq.face(&[i]).unwrap()).unwrap().len(), 2);
    }
}

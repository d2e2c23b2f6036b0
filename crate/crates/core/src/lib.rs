//! Convex state spaces of statistical theories: face lattices, normal
//! functionals ("counters"), detection ratios, mixtures, and a floating-point
//! quantum backend for comparison.
//!
//! The polytope engine is generic over an exact ordered field ([`Scalar`]);
//! the quantum backend is generic over a float type ([`Real`]). The aliases
//! below fix the usual choices.

pub mod counter;
pub mod detection;
pub mod error;
pub mod format;
pub mod gallery;
pub mod lattice;
mod linalg;
pub mod lp;
pub mod mixtures;
pub mod quantum;
pub mod scalar;
pub mod space;

pub use counter::{support_counter, Counter};
pub use detection::{
    detection_ratio, impossibility_check, impossibility_report, ratio_matrix,
    sample_detecting_counters, DetectionRatioResult, ImpossibilityReport,
};
pub use error::{Error, Result};
pub use lattice::{
    enumerate_faces, face_join, face_leq, face_meet, is_boundary, is_exposed,
    maximal_orthogonal_faces, minimal_face, orthogonal, Face, FaceLattice, Orthogonality,
};
pub use lp::{lp_solve, LinearProgram, LpOutcome, LpStatus};
pub use mixtures::{decompose, distinct_decompositions, is_simplex, ConvexDecomposition};
pub use quantum::{
    ball_detection_ratio, bloch_from_pure, effect_lower_bound_check, equator_polygon,
    pure_from_bloch, transition_probability, BlochVector, DensityMatrix, PureState,
};
pub use scalar::{decimal, ExactScalar, Real, Scalar, SmallRational};
pub use space::{make_state_space, mix, SpaceId, StatePoint, StateSpace};

pub type ExactPoint = StatePoint<ExactScalar>;
pub type ExactStateSpace = StateSpace<ExactScalar>;
pub type ExactFace = Face<ExactScalar>;
pub type ExactCounter = Counter<ExactScalar>;
pub type ExactLattice = FaceLattice<ExactScalar>;
pub type ExactDecomposition = ConvexDecomposition<ExactScalar>;

pub type PureState64 = PureState<f64>;
pub type PureState32 = PureState<f32>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type BlochVector64 = BlochVector<f64>;

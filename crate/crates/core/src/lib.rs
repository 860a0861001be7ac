//! Upper bounds on the first torus-invariant Laplacian eigenvalue `λ₁ᵀ` of
//! toric Kähler metrics, computed from the moment polytope.
//!
//! * [`polytope`]: Delzant polytopes, vertex enumeration, triangulation and
//!   the lattice-normalised facet measure `σ`.
//! * [`integrate`]: exact rational integration of polynomials over polytopes
//!   and their boundaries.
//! * [`bounds`]: the moment-matrix pencils giving the bounds for metrics with
//!   non-negative scalar curvature and for extremal metrics.
//! * [`calabi`]: the explicit extremal family on the blown-up projective plane.
//! * [`numerics`]: exact linear algebra, eigensolver, quadrature and friends.
//!
//! ```
//! use toric_core::{cpn_simplex, theorem1_bound};
//!
//! let p = cpn_simplex(3).unwrap();
//! let bound = theorem1_bound(&p).unwrap();
//! assert!((bound.value - 5.0).abs() < 1e-10);
//! ```

// index loops mirror the matrix formulas; negated float comparisons reject NaN
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod calabi;
pub mod integrate;
pub mod numerics;
pub mod polynomial;
pub mod polytope;

pub use bounds::{
    product_sphere_spectrum, rescale_bound, solve_extremal_s, theorem1_bound, theorem2_bound,
    BoundError, BoundResult, ScalarAffine,
};
pub use calabi::{
    closed_form_bound, find_critical_a, gram_matrices, rayleigh_ritz, sweep, Branch, CalabiError,
    CalabiMetric, GramPair, SweepRecord,
};
pub use integrate::{centroid, moments_up_to, MomentTable};
pub use numerics::rational::{format_rational, parse_rational, Rational};
pub use polynomial::Polynomial;
pub use polytope::{
    builtin_polytope, cpn_simplex, parse_polytope_json, rectangle, trapezoid, AffineFunctional,
    Builtin, DelzantPolytope, PolytopeError, PolytopeFileError,
};

/// Crate version, embedded in report headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

//! Numerical kernels: exact rationals and linear algebra, the symmetric
//! generalized eigensolver, Gauss–Legendre/Duffy quadrature, bisection and
//! finite-difference stencils.

pub mod eigen;
pub mod exact;
pub mod quadrature;
pub mod rational;
pub mod roots;
pub mod stencil;

pub use eigen::{generalized_symmetric_eigen, EigenError, GeneralizedEigen, SymMatrix};
pub use quadrature::{duffy_triangle, gauss_legendre, GaussRule, TriangleRule};
pub use rational::{parse_rational, rat, Rational};
pub use roots::{bisect_root, NoSignChange};

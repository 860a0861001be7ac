//! The Calabi family of U(2)-invariant extremal metrics on the one-point
//! blow-up of the projective plane, parameterised by `a ∈ (−1, 2)`.
//!
//! The moment polytope is `trapezoid(a)`. The symplectic potential is only
//! needed through its Hessian, which depends on the profile `z(t)` with
//! `t = x₁ + x₂`. Everything here is `f64` except the exact moment matrix.
//!
//! Absolute `L²` norms in [`GramPair`] omit the common `(2π)²` torus-fibre
//! volume. The factor cancels in every Rayleigh quotient.

use std::fmt;
use std::io::{self, Write};
use std::sync::OnceLock;

use rayon::prelude::*;
use thiserror::Error;

use crate::integrate::moments_up_to;
use crate::numerics::eigen::{generalized_symmetric_eigen, EigenError, SymMatrix};
use crate::numerics::quadrature::{duffy_triangle, Point2, MAX_ORDER};
use crate::numerics::rational::{from_f64, int, to_f64, Rational};
use crate::numerics::roots::bisect_root;
use crate::numerics::stencil::second_partial;
use crate::polytope::{trapezoid, PolytopeError};

/// Quadrature order per direction per triangle used when none is given.
pub const DEFAULT_ORDER: usize = 40;
/// Smallest accepted quadrature order.
pub const MIN_ORDER: usize = 8;
/// Relative change of `M̃` under order doubling above which a warning is attached.
pub const QUADRATURE_TOL: f64 = 1e-6;
/// Pencil eigenvalues below this fraction of the largest count as zero.
pub const ZERO_EIGEN_REL: f64 = 1e-9;
pub const DEFAULT_A_MIN: f64 = -0.99;
pub const DEFAULT_A_MAX: f64 = 1.99;
pub const DEFAULT_GRID: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalabiError {
    #[error("parameter a = {0} must lie in the open interval (-1, 2)")]
    ParameterOutOfRange(f64),
    #[error("profile argument t = {t} lies outside [-a, 1] = [{lo}, 1]", lo = -.a)]
    ProfileDomain { a: f64, t: f64 },
    #[error("point ({}, {}) is not strictly inside trapezoid({a})", .x[0], .x[1])]
    NotInterior { a: f64, x: [f64; 2] },
    #[error("point ({}, {}) is closer than 2h = {} to the boundary", .x[0], .x[1], 2.0 * .h)]
    MarginViolated { x: [f64; 2], h: f64 },
    #[error("quadrature order {0} outside {MIN_ORDER}..={MAX_ORDER}")]
    QuadratureOrder(usize),
    #[error("invalid sweep grid: need -1 < a_min < a_max < 2 and count >= 2 (got {a_min}, {a_max}, {count})")]
    InvalidGrid {
        a_min: f64,
        a_max: f64,
        count: usize,
    },
    #[error("Gram pencil: {0}")]
    Eigen(#[from] EigenError),
    #[error("pencil has no positive eigenvalue")]
    NoPositiveEigenvalue,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

fn check_parameter(a: f64) -> Result<(), CalabiError> {
    if a > -1.0 && a < 2.0 {
        Ok(())
    } else {
        Err(CalabiError::ParameterOutOfRange(a))
    }
}

/// `a² − 16a + 37`, positive on `(−1, 2)`.
fn q37(a: f64) -> f64 {
    a * a - 16.0 * a + 37.0
}

/// Extremal scalar curvature `S = α(x₁+x₂) + β` as exact rationals.
pub fn alpha_beta_exact(a: &Rational) -> (Rational, Rational) {
    let one = int(1);
    let denom = (a + &one) * (a * a - int(16) * a + int(37));
    let alpha = int(48) * (int(2) - a) / &denom;
    let beta = int(12) * (int(4) * a - int(3) * a * a + int(13)) / &denom;
    (alpha, beta)
}

/// Parameters of one metric in the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalabiMetric {
    a: f64,
    alpha: f64,
    beta: f64,
    normalization: f64,
}

impl CalabiMetric {
    pub fn new(a: f64) -> Result<Self, CalabiError> {
        check_parameter(a)?;
        let d = (a + 1.0) * q37(a);
        Ok(Self {
            a,
            alpha: 48.0 * (2.0 - a) / d,
            beta: 12.0 * (4.0 * a - 3.0 * a * a + 13.0) / d,
            normalization: normalization(a),
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Scale `c(a)` of the normalised metric `g_a = c(a)·g(a)`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn scalar_curvature(&self, x: [f64; 2]) -> f64 {
        self.alpha * (x[0] + x[1]) + self.beta
    }

    /// The four defining functionals `x₁+1, x₂+1, x₁+x₂+a, 1−x₁−x₂`.
    pub fn facet_values(&self, x: [f64; 2]) -> [f64; 4] {
        let t = x[0] + x[1];
        [x[0] + 1.0, x[1] + 1.0, t + self.a, 1.0 - t]
    }

    pub fn is_interior(&self, x: [f64; 2]) -> bool {
        self.facet_values(x).iter().all(|&v| v > 0.0)
    }

    fn require_interior(&self, x: [f64; 2]) -> Result<(), CalabiError> {
        if self.is_interior(x) {
            Ok(())
        } else {
            Err(CalabiError::NotInterior { a: self.a, x })
        }
    }

    /// `z(t)` without the domain check.
    fn z(&self, t: f64) -> f64 {
        let a = self.a;
        let quadratic = a * a * t - 4.0 * a * a + 2.0 * a * t * t + 10.0 * a * t + 36.0 * a
            - 4.0 * t * t
            - 33.0 * t
            - 74.0;
        (t - 1.0) * (a + t) * quadratic / ((t + 2.0).powi(2) * (a + 1.0) * q37(a))
    }

    /// Shared `(z⁻¹ − 1)/(2 + t)` term and the two `1/(xᵢ+1)` terms.
    fn hessian_parts(&self, x: [f64; 2]) -> (f64, f64, f64) {
        let t = x[0] + x[1];
        let w = (1.0 / self.z(t) - 1.0) / (2.0 + t);
        (w, 1.0 / (x[0] + 1.0), 1.0 / (x[1] + 1.0))
    }

    /// Euclidean Hessian `D²u` of the symplectic potential.
    pub fn hessian_u(&self, x: [f64; 2]) -> Result<[[f64; 2]; 2], CalabiError> {
        self.require_interior(x)?;
        let (w, p1, p2) = self.hessian_parts(x);
        Ok([[0.5 * (p1 + w), 0.5 * w], [0.5 * w, 0.5 * (p2 + w)]])
    }

    /// `(D²u)⁻¹` by the adjugate formula, with the determinant expanded so the
    /// `w²` terms cancel symbolically rather than numerically.
    pub fn inverse_hessian(&self, x: [f64; 2]) -> Result<[[f64; 2]; 2], CalabiError> {
        self.require_interior(x)?;
        Ok(self.inverse_hessian_unchecked(x))
    }

    fn inverse_hessian_unchecked(&self, x: [f64; 2]) -> [[f64; 2]; 2] {
        let (w, p1, p2) = self.hessian_parts(x);
        // det(D²u) = ¼(p₁p₂ + w(p₁+p₂)); inverse = adj/det with adj = ½[…]
        let k = 2.0 / (p1 * p2 + w * (p1 + p2));
        [[k * (p2 + w), -k * w], [-k * w, k * (p1 + w)]]
    }
}

/// `c(a) = 2√2 / √((a+1)(5−a))`.
pub fn normalization(a: f64) -> f64 {
    2.0 * std::f64::consts::SQRT_2 / ((a + 1.0) * (5.0 - a)).sqrt()
}

/// Dense univariate polynomial, coefficients in ascending degree.
#[derive(Debug, Clone)]
struct Poly1(Vec<f64>);

impl Poly1 {
    fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    fn derivative(&self) -> Poly1 {
        Poly1(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    fn mul(&self, other: &Poly1) -> Poly1 {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            for (j, y) in other.0.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Poly1(out)
    }
}

/// Numerator of `z` as a polynomial in `s = t + 2`, so that
/// `z = P(s) / (K·s²)` with `K = (a+1)(a²−16a+37)`.
fn profile_numerator(a: f64) -> Poly1 {
    // quadratic factor c₀ + c₁t + c₂t² rewritten in s
    let (c0, c1, c2) = (
        -4.0 * a * a + 36.0 * a - 74.0,
        a * a + 10.0 * a - 33.0,
        2.0 * a - 4.0,
    );
    let quadratic = Poly1(vec![c0 - 2.0 * c1 + 4.0 * c2, c1 - 4.0 * c2, c2]);
    Poly1(vec![-3.0, 1.0])
        .mul(&Poly1(vec![a - 2.0, 1.0]))
        .mul(&quadratic)
}

/// Profile `z(t)` on `[−a, 1]`.
pub fn z_profile(a: f64, t: f64) -> Result<f64, CalabiError> {
    let m = CalabiMetric::new(a)?;
    if !(t >= -a && t <= 1.0) {
        return Err(CalabiError::ProfileDomain { a, t });
    }
    Ok(m.z(t))
}

/// Left side of the profile ODE
/// `z″ + 4z′/(2+t) − 2(1−z)/(t+2)² + αt/(2(2+t)) + β/(2(2+t))`,
/// with `z′, z″` from quotient-rule derivatives of the closed form.
pub fn ode_residual(a: f64, t: f64) -> Result<f64, CalabiError> {
    let m = CalabiMetric::new(a)?;
    let p = profile_numerator(a);
    let dp = p.derivative();
    let ddp = dp.derivative();
    let k = (a + 1.0) * q37(a);
    let s = t + 2.0;
    let (pv, dpv, ddpv) = (p.eval(s), dp.eval(s), ddp.eval(s));
    // quotient rule for P/(K·s²)
    let z = pv / (k * s * s);
    let dz = (dpv * s - 2.0 * pv) / (k * s.powi(3));
    let ddz = (ddpv * s * s - 4.0 * dpv * s + 6.0 * pv) / (k * s.powi(4));
    Ok(ddz + 4.0 * dz / s - 2.0 * (1.0 - z) / (s * s)
        + m.alpha * t / (2.0 * s)
        + m.beta / (2.0 * s))
}

/// `−Σᵢⱼ ∂ᵢ∂ⱼuⁱʲ − (α(x₁+x₂) + β)` by central differences with step `h`.
pub fn scalar_curvature_check(a: f64, x: [f64; 2], h: f64) -> Result<f64, CalabiError> {
    let m = CalabiMetric::new(a)?;
    // Euclidean distance to each facet is ψ/|ν|
    let norms = [1.0, 1.0, std::f64::consts::SQRT_2, std::f64::consts::SQRT_2];
    let too_close = m
        .facet_values(x)
        .iter()
        .zip(norms)
        .any(|(v, n)| v / n < 2.0 * h);
    if !(h > 0.0) || too_close {
        return Err(CalabiError::MarginViolated { x, h });
    }
    let mut divergence = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let entry = |y: [f64; 2]| m.inverse_hessian_unchecked(y)[i][j];
            divergence += second_partial(entry, x, i, j, h);
        }
    }
    Ok(-divergence - m.scalar_curvature(x))
}

/// Printed rational functions with `‖∇φ‖²/‖φ‖² = (A(1+b²)+bB)/(C(1+b²)+bD)`
/// for `φ = x̃₁ + b·x̃₂` on the unnormalised metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotientCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl QuotientCoefficients {
    pub fn quotient(&self, b2: f64) -> f64 {
        let s = 1.0 + b2 * b2;
        (self.a * s + b2 * self.b) / (self.c * s + b2 * self.d)
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }
}

pub fn quotient_coefficients(a: f64) -> Result<QuotientCoefficients, CalabiError> {
    check_parameter(a)?;
    let a2 = a * a;
    let a3 = a2 * a;
    let a4 = a3 * a;
    let q = q37(a);
    Ok(QuotientCoefficients {
        a: (a + 1.0) * (a4 - 14.0 * a3 + 132.0 * a2 - 590.0 * a + 883.0) / (10.0 * q),
        b: -(a + 1.0) * (7.0 * a4 - 188.0 * a3 + 1284.0 * a2 - 3860.0 * a + 4381.0) / (30.0 * q),
        c: -(a + 1.0) * (a4 - 14.0 * a3 + 60.0 * a2 - 158.0 * a + 253.0) / (36.0 * (a - 5.0)),
        d: (a + 1.0) * (a4 - 14.0 * a3 + 114.0 * a2 - 374.0 * a + 469.0) / (36.0 * (a - 5.0)),
    })
}

/// `p(a) = 2a⁴ − 85a³ + 777a² − 2233a + 1763`.
pub fn critical_polynomial(a: f64) -> f64 {
    (((2.0 * a - 85.0) * a + 777.0) * a - 2233.0) * a + 1763.0
}

/// Factored form of `AD − BC`.
pub fn det_factorization(a: f64) -> f64 {
    -(a - 2.0) * (a * a - 7.0 * a + 19.0) * critical_polynomial(a) * (a + 1.0).powi(3)
        / (540.0 * (a - 5.0) * q37(a))
}

/// The unique root of [`critical_polynomial`] on `[−1, 2]`, to `10⁻¹²`.
pub fn find_critical_a() -> f64 {
    static CRITICAL: OnceLock<f64> = OnceLock::new();
    *CRITICAL.get_or_init(|| {
        bisect_root(critical_polynomial, -1.0, 2.0, 1e-12)
            .expect("critical polynomial changes sign on [-1, 2]")
    })
}

/// Which `ℤ₂`-symmetry class of test function attains the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `φ ∝ x̃₁ − x̃₂`
    AntiInvariant,
    /// `φ ∝ x̃₁ + x̃₂`
    Invariant,
}

impl Branch {
    pub fn direction(self) -> [f64; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Branch::AntiInvariant => [s, -s],
            Branch::Invariant => [s, s],
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::AntiInvariant => "anti-invariant",
            Branch::Invariant => "invariant",
        })
    }
}

/// Both printed closed forms `(anti-invariant, invariant)` for the normalised metric.
pub fn closed_form_branches(a: f64) -> Result<(f64, f64), CalabiError> {
    check_parameter(a)?;
    let a2 = a * a;
    let a3 = a2 * a;
    let a4 = a3 * a;
    let q = q37(a);
    let anti = (2.0 * (a + 1.0)).sqrt()
        * (13.0 * a4 - 272.0 * a3 + 2076.0 * a2 - 7400.0 * a + 9679.0)
        / (10.0 * (5.0 - a).sqrt() * (a2 - 4.0 * a + 13.0) * q);
    let inv = -3.0
        * std::f64::consts::SQRT_2
        * (5.0 - a).powf(1.5)
        * (a3 - 105.0 * a2 + 597.0 * a - 917.0)
        / (10.0 * (a + 1.0).sqrt() * q * q);
    Ok((anti, inv))
}

/// Closed-form bound for the normalised metric, branch chosen by `a` against `a_c`.
pub fn closed_form_bound(a: f64) -> Result<(f64, Branch), CalabiError> {
    let (anti, inv) = closed_form_branches(a)?;
    Ok(if a < find_critical_a() {
        (anti, Branch::AntiInvariant)
    } else {
        (inv, Branch::Invariant)
    })
}

/// Test set `{1, x₁, x₂, x₁², x₂², x₁x₂}`.
pub const TEST_EXPONENTS: [[u32; 2]; 6] = [[0, 0], [1, 0], [0, 1], [2, 0], [0, 2], [1, 1]];

fn test_gradients(x: Point2) -> [[f64; 2]; 6] {
    [
        [0.0, 0.0],
        [1.0, 0.0],
        [0.0, 1.0],
        [2.0 * x[0], 0.0],
        [0.0, 2.0 * x[1]],
        [x[1], x[0]],
    ]
}

/// `L²` Gram matrix `M` and Dirichlet matrix `M̃` over the test set.
#[derive(Debug, Clone)]
pub struct GramPair {
    pub m: SymMatrix,
    pub m_tilde: SymMatrix,
    pub order: usize,
    /// Relative Frobenius change of `M̃` when the order is doubled.
    pub doubling_change: Option<f64>,
    pub warnings: Vec<String>,
}

/// Triangles of the trapezoid sharing the apex `(−1, 2)`.
pub fn trapezoid_triangles(a: f64) -> [[Point2; 3]; 2] {
    let apex = [-1.0, 2.0];
    [
        [apex, [-1.0, 1.0 - a], [1.0 - a, -1.0]],
        [apex, [1.0 - a, -1.0], [2.0, -1.0]],
    ]
}

/// `∫_P uᵏˡ ∂ₖφᵢ ∂ₗφⱼ dμ` by Duffy–Gauss quadrature.
fn dirichlet_matrix(m: &CalabiMetric, order: usize) -> SymMatrix {
    let mut out = SymMatrix::zeros(6);
    for tri in trapezoid_triangles(m.a) {
        let rule = duffy_triangle(order, tri);
        for (&x, &w) in rule.points.iter().zip(&rule.weights) {
            let u = m.inverse_hessian_unchecked(x);
            let g = test_gradients(x);
            for i in 1..6 {
                let ug = [
                    u[0][0] * g[i][0] + u[0][1] * g[i][1],
                    u[1][0] * g[i][0] + u[1][1] * g[i][1],
                ];
                for j in 1..=i {
                    out.add_to(i, j, w * (ug[0] * g[j][0] + ug[1] * g[j][1]));
                }
            }
        }
    }
    out
}

/// Exact moment matrix `M_ij = ∫_P φᵢφⱼ dμ` at the binary value of `a`.
fn moment_matrix(a: f64) -> Result<SymMatrix, CalabiError> {
    let p = trapezoid(&from_f64(a))?;
    let table = moments_up_to(&p, 4);
    Ok(SymMatrix::from_fn(6, |i, j| {
        let e = [
            TEST_EXPONENTS[i][0] + TEST_EXPONENTS[j][0],
            TEST_EXPONENTS[i][1] + TEST_EXPONENTS[j][1],
        ];
        to_f64(table.interior(&e))
    }))
}

pub fn gram_matrices(a: f64, order: usize) -> Result<GramPair, CalabiError> {
    let metric = CalabiMetric::new(a)?;
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(CalabiError::QuadratureOrder(order));
    }
    let m = moment_matrix(a)?;
    let m_tilde = dirichlet_matrix(&metric, order);
    let mut warnings = Vec::new();
    let doubling_change = if 2 * order <= MAX_ORDER {
        let fine = dirichlet_matrix(&metric, 2 * order);
        let diff = SymMatrix::from_fn(6, |i, j| fine.get(i, j) - m_tilde.get(i, j));
        let change = diff.frobenius_norm() / fine.frobenius_norm();
        if change > QUADRATURE_TOL {
            warnings.push(format!(
                "quadrature not converged at a = {a}: order {order} vs {} differ by {change:.3e} (relative)",
                2 * order
            ));
        }
        Some(change)
    } else {
        None
    };
    Ok(GramPair {
        m,
        m_tilde,
        order,
        doubling_change,
        warnings,
    })
}

impl GramPair {
    /// Smallest eigenvalue of the pencil `(M̃, M)` above the zero threshold,
    /// for the unnormalised metric.
    pub fn smallest_positive_eigenvalue(&self) -> Result<f64, CalabiError> {
        let eig = generalized_symmetric_eigen(&self.m_tilde, &self.m)?;
        let largest = eig.values.iter().cloned().fold(f64::MIN, f64::max);
        eig.values
            .iter()
            .copied()
            .find(|&v| v > ZERO_EIGEN_REL * largest)
            .ok_or(CalabiError::NoPositiveEigenvalue)
    }
}

/// Rayleigh–Ritz approximation of `λ₁ᵀ(g_a)` over the test set, normalised.
pub fn rayleigh_ritz(a: f64, order: usize) -> Result<f64, CalabiError> {
    let gram = gram_matrices(a, order)?;
    Ok(gram.smallest_positive_eigenvalue()? / normalization(a))
}

/// One grid point of the family sweep. All bounds are for the normalised metric.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub a: f64,
    pub bound_antiinvariant: f64,
    pub bound_invariant: f64,
    pub bound: f64,
    pub branch: Branch,
    pub rayleigh_ritz: Option<f64>,
    pub gap: Option<f64>,
    pub warnings: Vec<String>,
    pub error: Option<String>,
}

fn sweep_point(a: f64, order: usize) -> Result<SweepRecord, CalabiError> {
    let coeffs = quotient_coefficients(a)?;
    let c = normalization(a);
    let anti = coeffs.quotient(-1.0) / c;
    let inv = coeffs.quotient(1.0) / c;
    let (bound, branch) = if inv < anti {
        (inv, Branch::Invariant)
    } else {
        (anti, Branch::AntiInvariant)
    };
    let (rr, warnings, error) = match gram_matrices(a, order) {
        Ok(g) => match g.smallest_positive_eigenvalue() {
            Ok(v) => (Some(v / c), g.warnings, None),
            Err(e) => (None, g.warnings, Some(e.to_string())),
        },
        Err(e) => (None, Vec::new(), Some(e.to_string())),
    };
    Ok(SweepRecord {
        a,
        bound_antiinvariant: anti,
        bound_invariant: inv,
        bound,
        branch,
        rayleigh_ritz: rr,
        gap: rr.map(|r| bound - r),
        warnings,
        error,
    })
}

/// Evenly spaced grid including both endpoints.
pub fn grid(a_min: f64, a_max: f64, count: usize) -> Result<Vec<f64>, CalabiError> {
    if !(a_min > -1.0 && a_min < a_max && a_max < 2.0 && count >= 2) {
        return Err(CalabiError::InvalidGrid {
            a_min,
            a_max,
            count,
        });
    }
    let step = (a_max - a_min) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i + 1 == count {
                a_max
            } else {
                a_min + i as f64 * step
            }
        })
        .collect())
}

/// Evaluates the family on an evenly spaced grid, in parallel, keeping grid order.
pub fn sweep(
    a_min: f64,
    a_max: f64,
    count: usize,
    order: usize,
) -> Result<Vec<SweepRecord>, CalabiError> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(CalabiError::QuadratureOrder(order));
    }
    let points = grid(a_min, a_max, count)?;
    Ok(points
        .par_iter()
        .map(|&a| sweep_point(a, order).expect("grid points lie inside (-1, 2)"))
        .collect())
}

/// `printf("%.12g")`-style formatting.
pub fn format_g12(x: f64) -> String {
    format_significant(x, 12)
}

fn format_significant(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CSV_HEADER: &str = "a,bound_antiinv,bound_inv,bound,branch,rayleigh_ritz,gap";

pub fn write_sweep_csv(records: &[SweepRecord], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        let opt = |v: Option<f64>| v.map_or_else(|| "nan".to_string(), format_g12);
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            format_g12(r.a),
            format_g12(r.bound_antiinvariant),
            format_g12(r.bound_invariant),
            format_g12(r.bound),
            r.branch,
            opt(r.rayleigh_ritz),
            opt(r.gap)
        )?;
    }
    Ok(())
}

/// Gnuplot script drawing the two branch bounds, the Rayleigh–Ritz values
/// and their gap from a sweep CSV.
pub fn gnuplot_script(csv_path: &str) -> String {
    let a_c = find_critical_a();
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel 'a'\n\
         set arrow from {a_c:.6},graph 0 to {a_c:.6},graph 1 nohead dashtype 2\n\
         set terminal pngcairo size 900,600\n\
         set output 'bounds.png'\n\
         set ylabel 'normalised bound'\n\
         plot '{csv_path}' using 1:2 with lines title 'anti-invariant', \\\n     \
         '' using 1:3 with lines title 'invariant'\n\
         set output 'rayleigh_ritz.png'\n\
         set ylabel 'Rayleigh-Ritz'\n\
         plot '{csv_path}' using 1:4 with lines title 'bound', \\\n     \
         '' using 1:6 with lines title 'Rayleigh-Ritz'\n\
         set output 'gap.png'\n\
         set ylabel 'bound - Rayleigh-Ritz'\n\
         plot '{csv_path}' using 1:7 with lines title 'gap'\n"
    )
}

//! Upper bounds on λ₁ᵀ from polytope moments.
//!
//! For a test function `φ = Σ bᵢ x̃ᵢ` (coordinates centred at the centroid),
//! integration by parts against the symplectic potential turns the Dirichlet
//! energy into boundary and interior moments, so the Rayleigh quotient is
//! `bᵀN b / bᵀD b` with
//!
//! * `D_ij = ∫_P x̃ᵢ x̃ⱼ dμ`,
//! * `N_ij = ∫_{∂P} xᵢxⱼ dσ` when only `S ≥ 0` is known (the `S`-term is dropped),
//! * `N_ij = ∫_{∂P} xᵢxⱼ dσ − ½∫_P S xᵢxⱼ dμ` when `S` is the extremal affine
//!   scalar curvature fixed by the polytope.
//!
//! The bound is the smallest eigenvalue of the pencil `(N, D)`. Matrices are
//! assembled exactly and only the eigensolve runs in floating point.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::integrate::{moments_up_to, MomentTable};
use crate::numerics::eigen::{dot, generalized_symmetric_eigen, EigenError, SymMatrix};
use crate::numerics::exact::{solve, RationalMatrix};
use crate::numerics::rational::{int, to_f64, Rational};
use crate::polynomial::Polynomial;
use crate::polytope::DelzantPolytope;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("denominator matrix is not positive definite (degenerate polytope): {0}")]
    DegenerateDenominator(EigenError),
    #[error("eigensolver failed: {0}")]
    Eigen(EigenError),
    #[error("moment system for the extremal scalar curvature is singular")]
    SingularMomentSystem,
    #[error("rescaling factor must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("parameter a = {0} must satisfy a >= 1")]
    ParameterOutOfRange(f64),
    #[error("spectrum cutoff must be at least 1")]
    ZeroCutoff,
}

/// Affine scalar curvature `S(x) = a₀ + Σ aᵢ xᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarAffine {
    pub a0: Rational,
    pub grad: Vec<Rational>,
}

impl ScalarAffine {
    pub fn as_polynomial(&self) -> Polynomial {
        Polynomial::affine(&self.grad, self.a0.clone())
    }

    pub fn to_f64(&self) -> (f64, Vec<f64>) {
        (to_f64(&self.a0), self.grad.iter().map(to_f64).collect())
    }

    pub fn is_constant(&self) -> bool {
        self.grad.iter().all(Zero::is_zero)
    }

    /// Minimum over the polytope, attained at a vertex.
    pub fn min_over(&self, p: &DelzantPolytope) -> Rational {
        let s = self.as_polynomial();
        p.vertices()
            .iter()
            .map(|v| s.eval(v))
            .min()
            .expect("polytope has vertices")
    }
}

impl fmt::Display for ScalarAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.a0)?;
        for (i, c) in self.grad.iter().enumerate() {
            if c.is_negative() {
                write!(f, " - {}·x{}", -c, i + 1)?;
            } else {
                write!(f, " + {}·x{}", c, i + 1)?;
            }
        }
        Ok(())
    }
}

/// Outcome of a bound pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    /// Upper bound for λ₁ᵀ (already divided by `scale`).
    pub value: f64,
    /// Unit-length minimising direction `b`, positive leading component.
    pub minimizer_b: Vec<f64>,
    pub numerator_matrix: RationalMatrix,
    pub denominator_matrix: RationalMatrix,
    /// Metric scale the value refers to; 1 for the polytope's own metric.
    pub scale: f64,
    pub warnings: Vec<String>,
}

impl BoundResult {
    /// `bᵀN b / bᵀD b` for the unscaled matrices.
    pub fn quotient(&self, b: &[f64]) -> f64 {
        let n = float_matrix(&self.numerator_matrix);
        let d = float_matrix(&self.denominator_matrix);
        n.quadratic_form(b) / d.quadratic_form(b)
    }
}

pub const NONNEGATIVE_CURVATURE_CAVEAT: &str =
    "bound assumes non-negative scalar curvature, which polytope data alone cannot certify";

fn float_matrix(m: &RationalMatrix) -> SymMatrix {
    SymMatrix::from_rows(
        &m.iter()
            .map(|r| r.iter().map(to_f64).collect())
            .collect::<Vec<_>>(),
    )
}

fn unit(dim: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; dim];
    e[i] = 1;
    e
}

fn pair(dim: usize, i: usize, j: usize) -> Vec<u32> {
    let mut e = vec![0; dim];
    e[i] += 1;
    e[j] += 1;
    e
}

/// `∫_P x̃ᵢx̃ⱼ dμ = m_{eᵢ+eⱼ} − cᵢcⱼ·vol`.
fn centred_second_moments(t: &MomentTable) -> RationalMatrix {
    let n = t.dim();
    let c = t.centroid();
    let vol = t.volume();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| t.interior(&pair(n, i, j)) - &c[i] * &c[j] * vol)
                .collect()
        })
        .collect()
}

fn boundary_second_moments(t: &MomentTable) -> RationalMatrix {
    let n = t.dim();
    (0..n)
        .map(|i| (0..n).map(|j| t.boundary(&pair(n, i, j)).clone()).collect())
        .collect()
}

const EIGEN_CLUSTER_TOL: f64 = 1e-9;

/// Minimising direction for the smallest eigenvalue.
///
/// When the eigenvalue is multiple, this is the unit vector of the eigenspace
/// with lexicographically largest absolute components: the Euclidean projection
/// of the first standard basis vector not orthogonal to the eigenspace.
fn select_minimizer(values: &[f64], vectors: &[Vec<f64>]) -> Vec<f64> {
    let lead = values[0];
    let tol = EIGEN_CLUSTER_TOL * lead.abs().max(1.0);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for (v, vec) in values.iter().zip(vectors) {
        if (v - lead).abs() > tol {
            break;
        }
        let mut w = vec.clone();
        for q in &basis {
            let proj = dot(&w, q);
            w.iter_mut().zip(q).for_each(|(x, y)| *x -= proj * y);
        }
        let norm = dot(&w, &w).sqrt();
        if norm > 1e-12 {
            basis.push(w.into_iter().map(|x| x / norm).collect());
        }
    }
    let n = vectors[0].len();
    for k in 0..n {
        let mut p = vec![0.0; n];
        for q in &basis {
            let coeff = q[k];
            p.iter_mut().zip(q).for_each(|(x, y)| *x += coeff * y);
        }
        let norm = dot(&p, &p).sqrt();
        if norm > 1e-8 {
            let mut b: Vec<f64> = p.into_iter().map(|x| x / norm).collect();
            for x in b.iter_mut() {
                if x.abs() < 1e-15 {
                    *x = 0.0;
                }
            }
            crate::numerics::eigen::orient_positive(&mut b);
            return b;
        }
    }
    unreachable!("a nonempty eigenspace has a nonzero projection of some basis vector")
}

fn pencil_bound(
    numerator: RationalMatrix,
    denominator: RationalMatrix,
    warnings: Vec<String>,
) -> Result<BoundResult, BoundError> {
    let nf = float_matrix(&numerator);
    let df = float_matrix(&denominator);
    let eig = generalized_symmetric_eigen(&nf, &df).map_err(|e| match e {
        EigenError::NotPositiveDefinite { .. } => BoundError::DegenerateDenominator(e),
        other => BoundError::Eigen(other),
    })?;
    let minimizer_b = select_minimizer(&eig.values, &eig.vectors);
    Ok(BoundResult {
        value: eig.values[0],
        minimizer_b,
        numerator_matrix: numerator,
        denominator_matrix: denominator,
        scale: 1.0,
        warnings,
    })
}

fn polytope_warnings(p: &DelzantPolytope) -> Vec<String> {
    p.warnings().to_vec()
}

/// Bound under the non-negative scalar curvature hypothesis, with the
/// boundary quadratic taken in uncentred coordinates.
pub fn theorem1_bound(p: &DelzantPolytope) -> Result<BoundResult, BoundError> {
    let t = moments_up_to(p, 2);
    let mut warnings = polytope_warnings(p);
    warnings.push(NONNEGATIVE_CURVATURE_CAVEAT.to_string());
    pencil_bound(
        boundary_second_moments(&t),
        centred_second_moments(&t),
        warnings,
    )
}

fn extremal_from_table(t: &MomentTable) -> Result<ScalarAffine, BoundError> {
    let n = t.dim();
    // Basis {1, x₁, …, xₙ}; index 0 is the constant.
    let basis = |k: usize| if k == 0 { vec![0; n] } else { unit(n, k - 1) };
    let sum = |a: &[u32], b: &[u32]| -> Vec<u32> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    let matrix: RationalMatrix = (0..=n)
        .map(|j| {
            (0..=n)
                .map(|i| t.interior(&sum(&basis(i), &basis(j))).clone())
                .collect()
        })
        .collect();
    let rhs: Vec<Rational> = (0..=n).map(|j| int(2) * t.boundary(&basis(j))).collect();
    let sol = solve(&matrix, &rhs).ok_or(BoundError::SingularMomentSystem)?;
    Ok(ScalarAffine {
        a0: sol[0].clone(),
        grad: sol[1..].to_vec(),
    })
}

/// The affine `S` forced by `∫_P S·F dμ = 2∫_{∂P} F dσ` for all affine `F`.
pub fn solve_extremal_s(p: &DelzantPolytope) -> Result<ScalarAffine, BoundError> {
    extremal_from_table(&moments_up_to(p, 2))
}

/// Bound for an extremal metric: the `S`-term is kept using the solved
/// affine scalar curvature.
pub fn theorem2_bound(p: &DelzantPolytope) -> Result<BoundResult, BoundError> {
    let t = moments_up_to(p, 3);
    let s = extremal_from_table(&t)?;
    let n = p.dim();
    let half = Rational::new(1.into(), 2.into());
    let numerator: RationalMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let xij = Polynomial::monomial(n, pair(n, i, j), int(1));
                    let interior = t.integrate_interior(&(&s.as_polynomial() * &xij));
                    t.boundary(&pair(n, i, j)) - &half * interior
                })
                .collect()
        })
        .collect();
    let result = pencil_bound(numerator, centred_second_moments(&t), polytope_warnings(p))?;
    let mut result = result;
    if result.value <= 0.0 {
        result.warnings.push(format!(
            "non-positive bound {:.6}: no extremal metric with this affine scalar curvature can exist in this class",
            result.value
        ));
    }
    Ok(result)
}

/// Bound for the metric `c·g`: eigenvalues scale as `1/c`.
pub fn rescale_bound(result: &BoundResult, c: f64) -> Result<BoundResult, BoundError> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(BoundError::NonPositiveScale(c));
    }
    Ok(BoundResult {
        value: result.value / c,
        scale: result.scale * c,
        ..result.clone()
    })
}

/// Sorted distinct values `a⁻¹k(k+1) + a·l(l+1)` for `k, l ≤ cutoff`: the
/// spectrum of the product of round spheres scaled by `a` and `a⁻¹`.
pub fn product_sphere_spectrum(a: f64, cutoff: usize) -> Result<Vec<f64>, BoundError> {
    if !(a >= 1.0) {
        return Err(BoundError::ParameterOutOfRange(a));
    }
    if cutoff == 0 {
        return Err(BoundError::ZeroCutoff);
    }
    let mut values: Vec<f64> = (0..=cutoff)
        .flat_map(|k| (0..=cutoff).map(move |l| (k as f64, l as f64)))
        .map(|(k, l)| k * (k + 1.0) / a + a * l * (l + 1.0))
        .collect();
    values.sort_by(f64::total_cmp);
    values.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs().max(1.0));
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;
    use crate::polytope::{cpn_simplex, rectangle, trapezoid};
    use approx::assert_abs_diff_eq;

    #[test]
    fn cpn_theorem1_is_n_plus_two() {
        for n in 1..=5 {
            let r = theorem1_bound(&cpn_simplex(n).unwrap()).unwrap();
            assert_abs_diff_eq!(r.value, (n + 2) as f64, epsilon = 1e-10);
            // F = x₁ realises the infimum
            let mut e1 = vec![0.0; n];
            e1[0] = 1.0;
            assert_eq!(r.minimizer_b, e1);
            assert!(r
                .warnings
                .iter()
                .any(|w| w.contains("non-negative scalar curvature")));
        }
    }

    #[test]
    fn square_theorem1_is_four() {
        let r = theorem1_bound(&rectangle(&int(1)).unwrap()).unwrap();
        assert_eq!(r.numerator_matrix[0][0], rat(16, 3));
        assert_eq!(r.denominator_matrix[0][0], rat(4, 3));
        assert_eq!(r.numerator_matrix[0][1], int(0));
        assert_abs_diff_eq!(r.value, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn extremal_s_on_reference_polytopes() {
        for a in [int(1), rat(3, 2), int(2), int(3)] {
            let s = solve_extremal_s(&rectangle(&a).unwrap()).unwrap();
            assert_eq!(s.a0, int(2) * &a + int(2) / &a);
            assert!(s.is_constant());
        }
        let s = solve_extremal_s(&cpn_simplex(2).unwrap()).unwrap();
        assert_eq!(
            s,
            ScalarAffine {
                a0: int(4),
                grad: vec![int(0), int(0)]
            }
        );
        let s = solve_extremal_s(&trapezoid(&int(1)).unwrap()).unwrap();
        assert_eq!(s.a0, rat(42, 11));
        assert_eq!(s.grad, vec![rat(12, 11), rat(12, 11)]);
    }

    #[test]
    fn theorem2_is_tight_on_rectangles() {
        for a in [int(1), rat(3, 2), int(2), int(3)] {
            let r = theorem2_bound(&rectangle(&a).unwrap()).unwrap();
            let af = to_f64(&a);
            assert_abs_diff_eq!(r.value, 2.0 / af, epsilon = 1e-12);
            assert_eq!(r.numerator_matrix[0][0], int(8) * &a / int(3));
            assert_eq!(r.denominator_matrix[0][0], int(4) * &a * &a / int(3));
        }
    }

    #[test]
    fn theorem2_on_cpn_is_two() {
        for n in 1..=4 {
            let r = theorem2_bound(&cpn_simplex(n).unwrap()).unwrap();
            assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn trapezoid_numerator_matches_printed_coefficient() {
        let r = theorem2_bound(&trapezoid(&int(1)).unwrap()).unwrap();
        assert_eq!(r.numerator_matrix[0][0], rat(206, 55));
        assert_eq!(r.numerator_matrix[1][1], rat(206, 55));
    }

    #[test]
    fn minimizer_attains_value() {
        let r = theorem2_bound(&trapezoid(&rat(1, 2)).unwrap()).unwrap();
        assert_abs_diff_eq!(r.quotient(&r.minimizer_b), r.value, epsilon = 1e-12);
    }

    #[test]
    fn rescaling() {
        let r = theorem2_bound(&rectangle(&int(1)).unwrap()).unwrap();
        assert_abs_diff_eq!(rescale_bound(&r, 1.0).unwrap().value, 2.0, epsilon = 1e-12);
        let half = rescale_bound(&r, 2.0).unwrap();
        assert_abs_diff_eq!(half.value, 1.0, epsilon = 1e-12);
        assert_eq!(half.scale, 2.0);
        assert_eq!(half.numerator_matrix, r.numerator_matrix);
        assert!(rescale_bound(&r, 0.0).is_err());
        assert!(rescale_bound(&r, -1.0).is_err());
    }

    #[test]
    fn product_spectrum() {
        let s = product_sphere_spectrum(1.0, 2).unwrap();
        assert_eq!(s, vec![0.0, 2.0, 4.0, 6.0, 8.0, 12.0]);
        assert_eq!(product_sphere_spectrum(2.0, 3).unwrap()[1], 1.0);
        assert!(product_sphere_spectrum(0.5, 2).is_err());
        assert!(product_sphere_spectrum(1.0, 0).is_err());
    }

    #[test]
    fn minimizer_tie_break_is_projection_of_first_axis() {
        // Eigenspace spanned by (1,1,0)/√2 and (0,0,1): projection of e₁ is (1,1,0)/√2.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let values = [1.0, 1.0, 3.0];
        let vectors = vec![vec![0.0, 0.0, 1.0], vec![s, s, 0.0], vec![s, -s, 0.0]];
        let b = select_minimizer(&values, &vectors);
        assert_abs_diff_eq!(b[0], s, epsilon = 1e-15);
        assert_abs_diff_eq!(b[1], s, epsilon = 1e-15);
        assert_eq!(b[2], 0.0);
    }

    #[test]
    fn common_scaling_leaves_minimizer_unchanged() {
        let r = theorem2_bound(&trapezoid(&rat(-1, 3)).unwrap()).unwrap();
        let k = rat(7, 3);
        let scale = |m: &RationalMatrix| -> RationalMatrix {
            m.iter()
                .map(|row| row.iter().map(|x| x * &k).collect())
                .collect()
        };
        let s = pencil_bound(
            scale(&r.numerator_matrix),
            scale(&r.denominator_matrix),
            vec![],
        )
        .unwrap();
        assert_abs_diff_eq!(s.value, r.value, epsilon = 1e-12);
        for (x, y) in s.minimizer_b.iter().zip(&r.minimizer_b) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-10);
        }
    }

    #[test]
    fn dropping_nonnegative_curvature_term_enlarges_bound() {
        let mut polytopes: Vec<_> = (1..=4).map(|n| cpn_simplex(n).unwrap()).collect();
        polytopes.extend([int(1), rat(5, 2)].iter().map(|a| rectangle(a).unwrap()));
        for p in &polytopes {
            assert!(!solve_extremal_s(p).unwrap().min_over(p).is_negative());
            let t1 = theorem1_bound(p).unwrap().value;
            let t2 = theorem2_bound(p).unwrap().value;
            assert!(t1 >= t2 - 1e-12, "{}: {t1} < {t2}", p.label());
        }
    }
}

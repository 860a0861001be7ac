//! Exact integration of polynomials over polytopes (Lebesgue measure) and over
//! their boundaries (lattice-normalised facet measure).
//!
//! Every simplex integral goes through barycentric coordinates: substituting
//! `x = Σ λᵢ sᵢ` turns a polynomial in `x` into one in `λ`, and the Dirichlet
//! integral `∫ λ^k = vol · d! · Πkᵢ! / (d + |k|)!` finishes the job. The
//! closed-form sum for powers of an affine function,
//! [`brion_linear_power`], is kept as an independent second route.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::numerics::rational::{factorial, to_f64, Rational};
use crate::polynomial::{Exponent, Polynomial};
use crate::polytope::{DelzantPolytope, Point, Simplex};

/// Degree to which moment tables are built unless asked otherwise. Gram
/// matrices of quadratic test functions need degree 4.
pub const DEFAULT_MAX_DEGREE: u32 = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrateError {
    #[error("Monte Carlo needs at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("no Monte Carlo sample landed inside the polytope ({samples} drawn)")]
    NoAcceptedSamples { samples: usize },
}

fn dirichlet_factor(d: usize, exponent: &[u32]) -> Rational {
    let total: u32 = exponent.iter().sum();
    let num = exponent
        .iter()
        .fold(factorial(d as u32), |acc, &k| acc * factorial(k));
    Rational::new(num, factorial(d as u32 + total))
}

/// Barycentric images `x_j = Σᵢ sᵢ[j] λᵢ` in the ring `ℚ[λ₀,…,λ_d]`.
fn barycentric_images(s: &Simplex) -> Vec<Polynomial> {
    let verts = s.vertices();
    let d1 = verts.len();
    (0..s.ambient_dim())
        .map(|j| {
            let coeffs: Vec<Rational> = verts.iter().map(|v| v[j].clone()).collect();
            debug_assert_eq!(coeffs.len(), d1);
            Polynomial::affine(&coeffs, Rational::zero())
        })
        .collect()
}

/// `∫_s f` with respect to the measure carried by `s`.
pub fn integrate_polynomial_simplex(s: &Simplex, f: &Polynomial) -> Rational {
    assert_eq!(
        f.dim(),
        s.ambient_dim(),
        "polynomial/simplex dimension mismatch"
    );
    if f.is_zero() {
        return Rational::zero();
    }
    let lambda = f.compose(&barycentric_images(s));
    let d = s.dim();
    let sum = lambda.terms().fold(Rational::zero(), |acc, (k, c)| {
        acc + c * dirichlet_factor(d, k)
    });
    sum * s.measure_scale()
}

/// `∫_s x^α` by the barycentric substitution and Dirichlet integrals.
pub fn integrate_monomial_simplex(s: &Simplex, alpha: &[u32]) -> Rational {
    let f = Polynomial::monomial(
        s.ambient_dim(),
        alpha.to_vec(),
        Rational::from_integer(1.into()),
    );
    integrate_polynomial_simplex(s, &f)
}

/// `∫_s Φ^q` for affine `Φ` via
/// `vol · d!·q!/(q+d)! · Σ_{|k|=q} Φ(s₀)^{k₀}⋯Φ(s_d)^{k_d}`.
///
/// Panics if `phi` has degree above one.
pub fn brion_linear_power(s: &Simplex, phi: &Polynomial, q: u32) -> Rational {
    assert!(
        phi.degree() <= 1,
        "Φ must be affine, got degree {}",
        phi.degree()
    );
    let values: Vec<Rational> = s.vertices().iter().map(|v| phi.eval(v)).collect();
    let q = q as usize;
    // h[j] = complete homogeneous sum of degree j over the values seen so far.
    let mut h = vec![Rational::zero(); q + 1];
    h[0] = Rational::from_integer(1.into());
    for v in &values {
        for j in 1..=q {
            // h_new[j] = h_old[j] + v·h_new[j−1]
            let add = v * &h[j - 1];
            h[j] += add;
        }
    }
    let d = s.dim() as u32;
    let coeff = Rational::new(factorial(d) * factorial(q as u32), factorial(q as u32 + d));
    s.measure_scale() * coeff * &h[q]
}

pub fn integrate_over_polytope(p: &DelzantPolytope, f: &Polynomial) -> Rational {
    p.triangulate_interior()
        .iter()
        .fold(Rational::zero(), |acc, s| {
            acc + integrate_polynomial_simplex(s, f)
        })
}

/// `∫_{∂P} f dσ` with the lattice-normalised facet measure.
pub fn integrate_over_boundary(p: &DelzantPolytope, f: &Polynomial) -> Rational {
    p.facet_decomposition()
        .iter()
        .flat_map(|facet| facet.simplices.iter())
        .fold(Rational::zero(), |acc, s| {
            acc + integrate_polynomial_simplex(s, f)
        })
}

/// All exponents in `dim` variables with total degree ≤ `max_degree`, graded.
pub fn exponents_up_to(dim: usize, max_degree: u32) -> Vec<Exponent> {
    fn rec(prefix: &mut Vec<u32>, dim: usize, remaining: u32, out: &mut Vec<Exponent>) {
        if prefix.len() == dim {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for k in (0..=remaining).rev() {
            prefix.push(k);
            rec(prefix, dim, remaining - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for deg in 0..=max_degree {
        rec(&mut Vec::with_capacity(dim), dim, deg, &mut out);
    }
    out
}

/// Interior moments `∫_P x^α dμ` and boundary moments `∫_{∂P} x^α dσ` for
/// `|α| ≤ max_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    label: String,
    dim: usize,
    max_degree: u32,
    interior: BTreeMap<Exponent, Rational>,
    boundary: BTreeMap<Exponent, Rational>,
}

impl MomentTable {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Panics if `|α|` exceeds the table's degree.
    pub fn interior(&self, alpha: &[u32]) -> &Rational {
        self.interior.get(alpha).unwrap_or_else(|| {
            panic!(
                "moment {alpha:?} not in table of degree {}",
                self.max_degree
            )
        })
    }

    pub fn boundary(&self, alpha: &[u32]) -> &Rational {
        self.boundary.get(alpha).unwrap_or_else(|| {
            panic!(
                "moment {alpha:?} not in table of degree {}",
                self.max_degree
            )
        })
    }

    pub fn volume(&self) -> &Rational {
        self.interior(&vec![0; self.dim])
    }

    pub fn integrate_interior(&self, f: &Polynomial) -> Rational {
        f.terms()
            .fold(Rational::zero(), |acc, (e, c)| acc + c * self.interior(e))
    }

    pub fn integrate_boundary(&self, f: &Polynomial) -> Rational {
        f.terms()
            .fold(Rational::zero(), |acc, (e, c)| acc + c * self.boundary(e))
    }

    pub fn centroid(&self) -> Point {
        let vol = self.volume();
        (0..self.dim)
            .map(|i| {
                let mut e = vec![0; self.dim];
                e[i] = 1;
                self.interior(&e) / vol
            })
            .collect()
    }
}

fn simplex_moments(s: &Simplex, exps: &[Exponent]) -> Vec<Rational> {
    exps.iter()
        .map(|e| integrate_monomial_simplex(s, e))
        .collect()
}

pub fn moments_up_to(p: &DelzantPolytope, max_degree: u32) -> MomentTable {
    let exps = exponents_up_to(p.dim(), max_degree);
    let accumulate = |simplices: Vec<&Simplex>| -> BTreeMap<Exponent, Rational> {
        let mut totals = vec![Rational::zero(); exps.len()];
        for s in simplices {
            for (t, m) in totals.iter_mut().zip(simplex_moments(s, &exps)) {
                *t += m;
            }
        }
        exps.iter().cloned().zip(totals).collect()
    };
    let interior = accumulate(p.triangulate_interior().iter().collect());
    let boundary = accumulate(
        p.facet_decomposition()
            .iter()
            .flat_map(|f| f.simplices.iter())
            .collect(),
    );
    MomentTable {
        label: p.label().to_string(),
        dim: p.dim(),
        max_degree,
        interior,
        boundary,
    }
}

/// Point `c` with `∫_P (xᵢ − cᵢ) dμ = 0`.
pub fn centroid(p: &DelzantPolytope) -> Point {
    moments_up_to(p, 1).centroid()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub value: f64,
    pub std_error: f64,
    pub accepted: usize,
    pub samples: usize,
}

pub const MIN_MONTE_CARLO_SAMPLES: usize = 1000;

/// Rejection-sampling estimate of `∫_P f dμ` from uniform draws in the
/// bounding box. Deterministic for a given seed.
pub fn monte_carlo_estimate(
    p: &DelzantPolytope,
    f: &Polynomial,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate, IntegrateError> {
    if samples < MIN_MONTE_CARLO_SAMPLES {
        return Err(IntegrateError::TooFewSamples {
            min: MIN_MONTE_CARLO_SAMPLES,
            got: samples,
        });
    }
    let n = p.dim();
    let verts: Vec<Vec<f64>> = p
        .vertices()
        .iter()
        .map(|v| v.iter().map(to_f64).collect())
        .collect();
    let lo: Vec<f64> = (0..n)
        .map(|i| verts.iter().map(|v| v[i]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..n)
        .map(|i| verts.iter().map(|v| v[i]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let box_volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let ff = f.to_float();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; n];
    let (mut sum, mut sum_sq, mut accepted) = (0.0, 0.0, 0usize);
    for _ in 0..samples {
        for i in 0..n {
            x[i] = rng.random_range(lo[i]..hi[i]);
        }
        if p.contains_f64(&x) {
            accepted += 1;
            let y = box_volume * ff.eval(&x);
            sum += y;
            sum_sq += y * y;
        }
    }
    if accepted == 0 {
        return Err(IntegrateError::NoAcceptedSamples { samples });
    }
    let m = samples as f64;
    let mean = sum / m;
    let var = (sum_sq / m - mean * mean).max(0.0) * m / (m - 1.0);
    Ok(MonteCarloEstimate {
        value: mean,
        std_error: (var / m).sqrt(),
        accepted,
        samples,
    })
}

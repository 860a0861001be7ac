//! Rational convex polytopes given by facet inequalities `ψ_k(x) = ⟨ν_k, x⟩ + c_k ≥ 0`
//! with primitive integer normals, together with the derived combinatorics the
//! integration code needs: vertices, facet–vertex incidence, a pulling
//! triangulation of the interior and of every facet, and the lattice-normalised
//! facet measure.

mod builtin;
mod io;
mod triangulate;
mod vertices;

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::numerics::exact::{affine_dimension, determinant};
use crate::numerics::rational::{factorial, int, to_f64, Rational};

pub use builtin::{builtin_polytope, cpn_simplex, rectangle, trapezoid, Builtin};
pub use io::{parse_polytope_json, polytope_to_json, PolytopeFileError};
pub use vertices::enumerate_vertices;

/// Exact point in ℝⁿ.
pub type Point = Vec<Rational>;

pub fn format_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolytopeError {
    #[error("polytope dimension must be positive")]
    ZeroDimension,
    #[error("no facets given")]
    NoFacets,
    #[error("facet {index}: normal has {got} entries, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("facet normal must be nonzero")]
    ZeroNormal,
    #[error("facet normal {normal:?} is not primitive (gcd {gcd})")]
    NonPrimitiveNormal { normal: Vec<i64>, gcd: i64 },
    #[error("polytope is unbounded: recession direction {}", format_point(.direction))]
    Unbounded { direction: Point },
    #[error("facet inequalities have no common solution")]
    Empty,
    #[error("polytope is not full-dimensional (vertices span dimension {spanned} < {dim})")]
    NotFullDimensional { spanned: usize, dim: usize },
    #[error("facet {index} does not support a codimension-one face")]
    RedundantFacet { index: usize },
    #[error("simplex vertices are affinely dependent")]
    DegenerateSimplex,
    #[error("simplex measure must be positive")]
    NonPositiveMeasure,
    #[error("lattice measure is only defined for codimension-one faces (got {vertices} vertices in dimension {dim})")]
    FaceCodimension { vertices: usize, dim: usize },
    #[error("{family}: parameter {value} outside the valid range {range}")]
    ParameterOutOfRange {
        family: &'static str,
        value: String,
        range: &'static str,
    },
    #[error("unknown builtin polytope `{0}` (expected cpn:N, rectangle:A or trapezoid:A)")]
    UnknownBuiltin(String),
}

/// Facet-defining affine function `ψ(x) = ⟨normal, x⟩ + offset` with a
/// primitive integer normal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineFunctional {
    normal: Vec<i64>,
    offset: Rational,
}

fn gcd_of(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

impl AffineFunctional {
    /// Requires a nonzero primitive normal.
    pub fn new(normal: Vec<i64>, offset: Rational) -> Result<Self, PolytopeError> {
        match gcd_of(&normal) {
            0 => Err(PolytopeError::ZeroNormal),
            1 => Ok(Self { normal, offset }),
            gcd => Err(PolytopeError::NonPrimitiveNormal { normal, gcd }),
        }
    }

    /// Divides out the gcd of the normal (and the offset with it). The second
    /// component is true when a reduction happened.
    pub fn primitive(normal: Vec<i64>, offset: Rational) -> Result<(Self, bool), PolytopeError> {
        let g = gcd_of(&normal);
        if g == 0 {
            return Err(PolytopeError::ZeroNormal);
        }
        let normal: Vec<i64> = normal.iter().map(|x| x / g).collect();
        let offset = offset / int(g);
        Ok((Self { normal, offset }, g != 1))
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[i64] {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn normal_rational(&self) -> Vec<Rational> {
        self.normal.iter().map(|&v| int(v)).collect()
    }

    /// Squared Euclidean length of the normal.
    pub fn normal_norm_sq(&self) -> i64 {
        self.normal.iter().map(|v| v * v).sum()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.normal
            .iter()
            .zip(x)
            .fold(self.offset.clone(), |acc, (&n, xi)| acc + xi * int(n))
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.normal
            .iter()
            .zip(x)
            .fold(to_f64(&self.offset), |acc, (&n, xi)| acc + n as f64 * xi)
    }

    /// Same half-space scaled about the origin by `t > 0`.
    pub fn dilated(&self, t: &Rational) -> Self {
        Self {
            normal: self.normal.clone(),
            offset: &self.offset * t,
        }
    }
}

impl fmt::Display for AffineFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.offset)?;
        for (i, &n) in self.normal.iter().enumerate() {
            match n {
                0 => {}
                1 => write!(f, " + x{}", i + 1)?,
                -1 => write!(f, " - x{}", i + 1)?,
                n if n < 0 => write!(f, " - {}x{}", -n, i + 1)?,
                n => write!(f, " + {n}x{}", i + 1)?,
            }
        }
        Ok(())
    }
}

/// A `d`-simplex in ℝⁿ with the total measure it carries (Lebesgue for
/// `d = n`, lattice-normalised for facet pieces).
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Point>,
    measure_scale: Rational,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>, measure_scale: Rational) -> Result<Self, PolytopeError> {
        let refs: Vec<&Point> = vertices.iter().collect();
        if affine_dimension(&refs) != Some(vertices.len().saturating_sub(1)) {
            return Err(PolytopeError::DegenerateSimplex);
        }
        if !measure_scale.is_positive() {
            return Err(PolytopeError::NonPositiveMeasure);
        }
        Ok(Self {
            vertices,
            measure_scale,
        })
    }

    /// Full-dimensional simplex with its Lebesgue volume `|det(edges)|/n!`.
    pub fn lebesgue(vertices: Vec<Point>) -> Result<Self, PolytopeError> {
        let n = vertices.first().map_or(0, Vec::len);
        if vertices.len() != n + 1 {
            return Err(PolytopeError::DegenerateSimplex);
        }
        let edges = edge_matrix(&vertices);
        let vol = determinant(&edges).abs() / Rational::from_integer(factorial(n as u32));
        Self::new(vertices, vol)
    }

    /// Facet simplex with the integral Lebesgue measure of the hyperplane
    /// orthogonal to the primitive `normal`.
    pub fn lattice_facet(vertices: Vec<Point>, normal: &[i64]) -> Result<Self, PolytopeError> {
        let scale = lattice_measure(&vertices, normal)?;
        Self::new(vertices, scale)
    }

    /// Simplex dimension `d`.
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn measure_scale(&self) -> &Rational {
        &self.measure_scale
    }
}

fn edge_matrix(vertices: &[Point]) -> Vec<Vec<Rational>> {
    let base = &vertices[0];
    vertices[1..]
        .iter()
        .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect()
}

/// `|det(e₁,…,e_{n−1}, ν)| / (|ν|²·(n−1)!)`: the Euclidean `(n−1)`-volume
/// divided by `|ν|`, which is the lattice-normalised measure on a hyperplane
/// with primitive normal `ν`.
pub fn lattice_measure(vertices: &[Point], normal: &[i64]) -> Result<Rational, PolytopeError> {
    let n = normal.len();
    if vertices.len() != n || vertices.iter().any(|v| v.len() != n) {
        return Err(PolytopeError::FaceCodimension {
            vertices: vertices.len(),
            dim: n,
        });
    }
    let mut m = edge_matrix(vertices);
    m.push(normal.iter().map(|&v| int(v)).collect());
    let norm_sq: i64 = normal.iter().map(|v| v * v).sum();
    let denom = int(norm_sq) * Rational::from_integer(factorial(n as u32 - 1));
    Ok(determinant(&m).abs() / denom)
}

/// One facet with its lattice-measured triangulation.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub index: usize,
    pub functional: AffineFunctional,
    pub simplices: Vec<Simplex>,
}

impl Facet {
    pub fn measure(&self) -> Rational {
        self.simplices
            .iter()
            .fold(Rational::zero(), |acc, s| acc + s.measure_scale())
    }
}

/// Per-vertex outcome of the Delzant test.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexCheck {
    pub vertex: Point,
    pub active_facets: Vec<usize>,
    /// Determinant of the active normals, when exactly `n` facets meet.
    pub determinant: Option<i64>,
}

impl VertexCheck {
    pub fn passes(&self) -> bool {
        matches!(self.determinant, Some(d) if d.abs() == 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelzantReport {
    pub dim: usize,
    pub vertices: Vec<VertexCheck>,
}

impl DelzantReport {
    pub fn passed(&self) -> bool {
        self.vertices.iter().all(VertexCheck::passes)
    }
}

impl fmt::Display for DelzantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            let det = v
                .determinant
                .map_or_else(|| "n/a".to_string(), |d| d.to_string());
            writeln!(
                f,
                "  vertex {:<16} active facets {:?} det {:>4}  {}",
                format_point(&v.vertex),
                v.active_facets,
                det,
                if v.passes() { "ok" } else { "FAIL" }
            )?;
        }
        write!(
            f,
            "  Delzant condition: {}",
            if self.passed() { "pass" } else { "fail" }
        )
    }
}

/// Bounded full-dimensional rational polytope with derived vertex, incidence
/// and triangulation data. Immutable after construction.
#[derive(Debug, Clone)]
pub struct DelzantPolytope {
    label: String,
    dim: usize,
    facets: Vec<AffineFunctional>,
    vertices: Vec<Point>,
    incidence: Vec<Vec<usize>>,
    interior: Vec<Simplex>,
    boundary: Vec<Facet>,
    warnings: Vec<String>,
}

impl DelzantPolytope {
    pub fn new(dim: usize, facets: Vec<AffineFunctional>) -> Result<Self, PolytopeError> {
        let vertices = enumerate_vertices(&facets, dim)?;
        let refs: Vec<&Point> = vertices.iter().collect();
        let spanned = affine_dimension(&refs).unwrap_or(0);
        if spanned < dim {
            return Err(PolytopeError::NotFullDimensional { spanned, dim });
        }
        let incidence: Vec<Vec<usize>> = facets
            .iter()
            .map(|psi| {
                (0..vertices.len())
                    .filter(|&v| psi.eval(&vertices[v]).is_zero())
                    .collect()
            })
            .collect();
        for (index, verts) in incidence.iter().enumerate() {
            let refs: Vec<&Point> = verts.iter().map(|&v| &vertices[v]).collect();
            if affine_dimension(&refs).map_or(true, |d| d + 1 != dim) {
                return Err(PolytopeError::RedundantFacet { index });
            }
        }

        let all: Vec<usize> = (0..vertices.len()).collect();
        let interior = triangulate::pulling(&vertices, &incidence, &all, dim)
            .into_iter()
            .map(|s| Simplex::lebesgue(s.iter().map(|&i| vertices[i].clone()).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        let boundary = facets
            .iter()
            .enumerate()
            .map(|(index, psi)| {
                let simplices =
                    triangulate::pulling(&vertices, &incidence, &incidence[index], dim - 1)
                        .into_iter()
                        .map(|s| {
                            Simplex::lattice_facet(
                                s.iter().map(|&i| vertices[i].clone()).collect(),
                                psi.normal(),
                            )
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                Ok(Facet {
                    index,
                    functional: psi.clone(),
                    simplices,
                })
            })
            .collect::<Result<Vec<_>, PolytopeError>>()?;

        let mut p = Self {
            label: format!("polytope[dim {dim}, {} facets]", facets.len()),
            dim,
            facets,
            vertices,
            incidence,
            interior,
            boundary,
            warnings: Vec::new(),
        };
        if !p.check_delzant().passed() {
            p.warnings.push(
                "polytope fails the Delzant condition; moment integrals are still computed"
                    .to_string(),
            );
        }
        Ok(p)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_warning(mut self, warning: impl Into<String>) -> Self {
        self.warnings.push(warning.into());
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[AffineFunctional] {
        &self.facets
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Facet index → indices of the vertices it contains.
    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Fan (pulling) triangulation from the lexicographically smallest vertex.
    pub fn triangulate_interior(&self) -> &[Simplex] {
        &self.interior
    }

    pub fn facet_decomposition(&self) -> &[Facet] {
        &self.boundary
    }

    pub fn volume(&self) -> Rational {
        self.interior
            .iter()
            .fold(Rational::zero(), |acc, s| acc + s.measure_scale())
    }

    /// Total lattice measure of the boundary.
    pub fn boundary_measure(&self) -> Rational {
        self.boundary
            .iter()
            .fold(Rational::zero(), |acc, f| acc + f.measure())
    }

    pub fn contains_f64(&self, x: &[f64]) -> bool {
        self.facets.iter().all(|psi| psi.eval_f64(x) >= 0.0)
    }

    /// Image under `x ↦ t·x` for rational `t > 0`.
    pub fn dilate(&self, t: &Rational) -> Result<Self, PolytopeError> {
        assert!(t.is_positive(), "dilation factor must be positive");
        let facets = self.facets.iter().map(|f| f.dilated(t)).collect();
        Ok(Self::new(self.dim, facets)?.with_label(format!("{} scaled by {t}", self.label)))
    }

    pub fn check_delzant(&self) -> DelzantReport {
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let active: Vec<usize> = (0..self.facets.len())
                    .filter(|&k| self.facets[k].eval(v).is_zero())
                    .collect();
                let determinant = (active.len() == self.dim).then(|| {
                    let m: Vec<Vec<Rational>> = active
                        .iter()
                        .map(|&k| self.facets[k].normal_rational())
                        .collect();
                    determinant(&m)
                        .to_integer()
                        .to_i64()
                        .expect("determinant of small integer matrix")
                });
                VertexCheck {
                    vertex: v.clone(),
                    active_facets: active,
                    determinant,
                }
            })
            .collect();
        DelzantReport {
            dim: self.dim,
            vertices,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;

    fn psi(normal: &[i64], offset: Rational) -> AffineFunctional {
        AffineFunctional::new(normal.to_vec(), offset).unwrap()
    }

    fn unit_triangle() -> DelzantPolytope {
        DelzantPolytope::new(
            2,
            vec![
                psi(&[1, 0], int(0)),
                psi(&[0, 1], int(0)),
                psi(&[-1, -1], int(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn hypotenuse_has_lattice_length_one() {
        let p = unit_triangle();
        let hyp = &p.facet_decomposition()[2];
        assert_eq!(hyp.measure(), int(1));
        assert_eq!(p.boundary_measure(), int(3));
        assert_eq!(p.volume(), rat(1, 2));
    }

    #[test]
    fn non_primitive_normal_is_rejected_or_reduced() {
        assert!(matches!(
            AffineFunctional::new(vec![2, 4], int(1)),
            Err(PolytopeError::NonPrimitiveNormal { gcd: 2, .. })
        ));
        let (f, reduced) = AffineFunctional::primitive(vec![2, 4], int(1)).unwrap();
        assert!(reduced);
        assert_eq!(f.normal(), &[1, 2]);
        assert_eq!(f.offset(), &rat(1, 2));
        assert_eq!(
            AffineFunctional::new(vec![0, 0], int(1)),
            Err(PolytopeError::ZeroNormal)
        );
    }

    #[test]
    fn unbounded_polytope_reports_direction() {
        let err =
            DelzantPolytope::new(2, vec![psi(&[1, 0], int(1)), psi(&[0, 1], int(1))]).unwrap_err();
        let PolytopeError::Unbounded { direction } = err else {
            panic!("expected unbounded, got {err:?}");
        };
        // direction d satisfies ⟨ν, d⟩ ≥ 0 for both normals
        assert!(direction.iter().all(|d| !d.is_negative()));
        assert!(direction.iter().any(|d| d.is_positive()));
    }

    #[test]
    fn empty_polytope_is_an_error() {
        let err =
            DelzantPolytope::new(1, vec![psi(&[1], int(-2)), psi(&[-1], int(1))]).unwrap_err();
        assert_eq!(err, PolytopeError::Empty);
    }

    #[test]
    fn flat_polytope_is_not_full_dimensional() {
        let err = DelzantPolytope::new(
            2,
            vec![
                psi(&[1, 0], int(1)),
                psi(&[-1, 0], int(1)),
                psi(&[0, 1], int(0)),
                psi(&[0, -1], int(0)),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, PolytopeError::NotFullDimensional { .. }));
    }

    #[test]
    fn redundant_facet_is_rejected() {
        let err = DelzantPolytope::new(
            1,
            vec![psi(&[1], int(1)), psi(&[-1], int(1)), psi(&[1], int(5))],
        )
        .unwrap_err();
        assert_eq!(err, PolytopeError::RedundantFacet { index: 2 });
    }

    #[test]
    fn non_unimodular_square_fails_delzant() {
        let p = DelzantPolytope::new(
            2,
            vec![
                psi(&[1, 0], int(1)),
                psi(&[-1, 0], int(1)),
                psi(&[1, 2], int(1)),
                psi(&[-1, -2], int(1)),
            ],
        )
        .unwrap();
        let report = p.check_delzant();
        assert!(!report.passed());
        assert!(report
            .vertices
            .iter()
            .all(|v| v.determinant.map(i64::abs) == Some(2)));
        assert!(!p.warnings().is_empty());
    }

    #[test]
    fn lattice_measure_rejects_lower_dimensional_faces() {
        let err = lattice_measure(&[vec![int(0), int(0), int(0)]], &[0, 0, 1]).unwrap_err();
        assert!(matches!(err, PolytopeError::FaceCodimension { .. }));
    }

    #[test]
    fn simplex_validation() {
        assert_eq!(
            Simplex::new(vec![vec![int(0)], vec![int(1)]], int(0)),
            Err(PolytopeError::NonPositiveMeasure)
        );
        assert_eq!(
            Simplex::lebesgue(vec![
                vec![int(0), int(0)],
                vec![int(1), int(1)],
                vec![int(2), int(2)]
            ]),
            Err(PolytopeError::DegenerateSimplex)
        );
    }
}

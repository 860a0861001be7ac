//! The three polytope families used as reference models: the standard simplex
//! of CPⁿ, the rectangle of CP¹×CP¹ and the trapezoid of the one-point blow-up
//! of CP².

use std::fmt;
use std::str::FromStr;

use num_traits::One;

use super::{AffineFunctional, DelzantPolytope, PolytopeError};
use crate::numerics::rational::{int, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    /// `{1 + x_i ≥ 0, 1 − Σx_i ≥ 0}` in ℝⁿ.
    CpnSimplex(usize),
    /// `{a ± x₁ ≥ 0, a⁻¹ ± x₂ ≥ 0}`, `a ≥ 1`.
    Rectangle(Rational),
    /// `{1 + x₁, 1 + x₂, a + x₁ + x₂, 1 − x₁ − x₂} ≥ 0`, `−1 < a < 2`.
    Trapezoid(Rational),
}

impl FromStr for Builtin {
    type Err = PolytopeError;

    /// Accepts `cpn:N`, `rectangle:A`, `trapezoid:A` with rational `A` as `p/q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || PolytopeError::UnknownBuiltin(s.to_string());
        let (name, param) = s.split_once(':').ok_or_else(unknown)?;
        match name.trim() {
            "cpn" | "cpn_simplex" => {
                let n = param.trim().parse::<usize>().map_err(|_| unknown())?;
                Ok(Builtin::CpnSimplex(n))
            }
            "rectangle" => Ok(Builtin::Rectangle(
                parse_rational(param).map_err(|_| unknown())?,
            )),
            "trapezoid" => Ok(Builtin::Trapezoid(
                parse_rational(param).map_err(|_| unknown())?,
            )),
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::CpnSimplex(n) => write!(f, "cpn:{n}"),
            Builtin::Rectangle(a) => write!(f, "rectangle:{a}"),
            Builtin::Trapezoid(a) => write!(f, "trapezoid:{a}"),
        }
    }
}

pub fn builtin_polytope(b: &Builtin) -> Result<DelzantPolytope, PolytopeError> {
    match b {
        Builtin::CpnSimplex(n) => cpn_simplex(*n),
        Builtin::Rectangle(a) => rectangle(a),
        Builtin::Trapezoid(a) => trapezoid(a),
    }
}

fn functional(normal: Vec<i64>, offset: Rational) -> AffineFunctional {
    AffineFunctional::new(normal, offset).expect("builtin normals are primitive")
}

/// Largest simplex dimension accepted; vertex enumeration is combinatorial.
pub const MAX_CPN_DIM: usize = 12;

pub fn cpn_simplex(n: usize) -> Result<DelzantPolytope, PolytopeError> {
    if !(1..=MAX_CPN_DIM).contains(&n) {
        return Err(PolytopeError::ParameterOutOfRange {
            family: "cpn",
            value: n.to_string(),
            range: "1 <= n <= 12",
        });
    }
    let mut facets: Vec<AffineFunctional> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            functional(e, int(1))
        })
        .collect();
    facets.push(functional(vec![-1; n], int(1)));
    Ok(DelzantPolytope::new(n, facets)?.with_label(format!("cpn:{n}")))
}

pub fn rectangle(a: &Rational) -> Result<DelzantPolytope, PolytopeError> {
    if *a < Rational::one() {
        return Err(PolytopeError::ParameterOutOfRange {
            family: "rectangle",
            value: a.to_string(),
            range: "[1, inf)",
        });
    }
    let inv = a.recip();
    let facets = vec![
        functional(vec![1, 0], a.clone()),
        functional(vec![-1, 0], a.clone()),
        functional(vec![0, 1], inv.clone()),
        functional(vec![0, -1], inv),
    ];
    Ok(DelzantPolytope::new(2, facets)?.with_label(format!("rectangle:{a}")))
}

/// At `a = 2` the facet `a + x₁ + x₂` collapses to the vertex `(−1, −1)` and the
/// polytope is the CP² simplex; that endpoint returns `cpn:2` with a warning.
pub fn trapezoid(a: &Rational) -> Result<DelzantPolytope, PolytopeError> {
    if *a == int(2) {
        return Ok(cpn_simplex(2)?.with_label("trapezoid:2").with_warning(
            "trapezoid:2 is the boundary of the parameter range (-1, 2); \
                 the facet a + x1 + x2 degenerates and the CP^2 simplex is returned",
        ));
    }
    if !(a > &int(-1) && a < &int(2)) {
        return Err(PolytopeError::ParameterOutOfRange {
            family: "trapezoid",
            value: a.to_string(),
            range: "(-1, 2)",
        });
    }
    let facets = vec![
        functional(vec![1, 0], int(1)),
        functional(vec![0, 1], int(1)),
        functional(vec![1, 1], a.clone()),
        functional(vec![-1, -1], int(1)),
    ];
    Ok(DelzantPolytope::new(2, facets)?.with_label(format!("trapezoid:{a}")))
}

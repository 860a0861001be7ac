//! JSON polytope files:
//! `{"dim": n, "facets": [{"normal": [int, …], "offset": "p/q"}, …]}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AffineFunctional, DelzantPolytope, PolytopeError};
use crate::numerics::rational::{format_rational, parse_rational};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FacetEntry {
    normal: Vec<i64>,
    offset: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeFile {
    dim: usize,
    facets: Vec<FacetEntry>,
}

#[derive(Debug, Error)]
pub enum PolytopeFileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Geometry(#[from] PolytopeError),
}

impl PolytopeFileError {
    /// Malformed input as opposed to a well-formed but infeasible polytope.
    pub fn is_malformed(&self) -> bool {
        !matches!(self, PolytopeFileError::Geometry(_))
    }
}

/// Parses and validates a polytope file. Non-primitive normals are reduced
/// and reported through the polytope's warnings.
pub fn parse_polytope_json(text: &str) -> Result<DelzantPolytope, PolytopeFileError> {
    let file: PolytopeFile = serde_json::from_str(text).map_err(|e| PolytopeFileError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.dim == 0 {
        return Err(PolytopeFileError::Field {
            field: "dim".into(),
            message: "must be a positive integer".into(),
        });
    }
    if file.facets.is_empty() {
        return Err(PolytopeFileError::Field {
            field: "facets".into(),
            message: "at least one facet is required".into(),
        });
    }
    let mut facets = Vec::with_capacity(file.facets.len());
    let mut warnings = Vec::new();
    for (i, entry) in file.facets.into_iter().enumerate() {
        if entry.normal.len() != file.dim {
            return Err(PolytopeFileError::Field {
                field: format!("facets[{i}].normal"),
                message: format!(
                    "has {} entries, expected dim = {}",
                    entry.normal.len(),
                    file.dim
                ),
            });
        }
        let offset = parse_rational(&entry.offset).map_err(|e| PolytopeFileError::Field {
            field: format!("facets[{i}].offset"),
            message: e.to_string(),
        })?;
        let original = entry.normal.clone();
        let (psi, reduced) = AffineFunctional::primitive(entry.normal, offset).map_err(|e| {
            PolytopeFileError::Field {
                field: format!("facets[{i}].normal"),
                message: e.to_string(),
            }
        })?;
        if reduced {
            warnings.push(format!(
                "facets[{i}]: normal {original:?} is not primitive; reduced to {:?}",
                psi.normal()
            ));
        }
        facets.push(psi);
    }
    let mut p = DelzantPolytope::new(file.dim, facets)?;
    for w in warnings {
        p = p.with_warning(w);
    }
    Ok(p)
}

pub fn polytope_to_json(p: &DelzantPolytope) -> String {
    let file = PolytopeFile {
        dim: p.dim(),
        facets: p
            .facets()
            .iter()
            .map(|f| FacetEntry {
                normal: f.normal().to_vec(),
                offset: format_rational(f.offset()),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("polytope serialises")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};
    use crate::polytope::trapezoid;

    #[test]
    fn parses_trapezoid_file() {
        let text = r#"{"dim": 2, "facets": [
            {"normal": [1, 0], "offset": "1"},
            {"normal": [0, 1], "offset": "1"},
            {"normal": [1, 1], "offset": "1/2"},
            {"normal": [-1, -1], "offset": "1"}]}"#;
        let p = parse_polytope_json(text).unwrap();
        assert_eq!(p.facets(), trapezoid(&rat(1, 2)).unwrap().facets());
    }

    #[test]
    fn round_trip_through_json() {
        let p = trapezoid(&rat(-1, 3)).unwrap();
        let q = parse_polytope_json(&polytope_to_json(&p)).unwrap();
        assert_eq!(p.facets(), q.facets());
    }

    #[test]
    fn reduces_non_primitive_normals_with_warning() {
        let text = r#"{"dim": 1, "facets": [
            {"normal": [2], "offset": "2"}, {"normal": [-1], "offset": "1"}]}"#;
        let p = parse_polytope_json(text).unwrap();
        assert_eq!(p.facets()[0].offset(), &int(1));
        assert!(p.warnings().iter().any(|w| w.contains("not primitive")));
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_polytope_json("{\"dim\": 2,\n \"facets\": [}").unwrap_err();
        match err {
            PolytopeFileError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn field_errors_name_the_field() {
        let decimal = r#"{"dim": 1, "facets": [{"normal": [1], "offset": "0.5"}]}"#;
        match parse_polytope_json(decimal).unwrap_err() {
            PolytopeFileError::Field { field, .. } => assert_eq!(field, "facets[0].offset"),
            other => panic!("unexpected {other:?}"),
        }
        let short = r#"{"dim": 2, "facets": [{"normal": [1], "offset": "1"}]}"#;
        match parse_polytope_json(short).unwrap_err() {
            PolytopeFileError::Field { field, .. } => assert_eq!(field, "facets[0].normal"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_polytope_is_a_geometry_error() {
        let text = r#"{"dim": 1, "facets": [{"normal": [1], "offset": "0"}]}"#;
        let err = parse_polytope_json(text).unwrap_err();
        assert!(!err.is_malformed());
    }
}

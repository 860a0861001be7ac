//! Pulling triangulation of a face: cone from the face's lexicographically
//! smallest vertex over the triangulations of every sub-facet not containing it.

use std::collections::BTreeSet;

use super::Point;
use crate::numerics::exact::affine_dimension;

/// Triangulates the `face_dim`-dimensional face whose vertex indices (sorted,
/// into the lexicographically sorted `vertices`) are `face`. Returns simplices
/// as vertex-index lists, apex first.
pub(super) fn pulling(
    vertices: &[Point],
    incidence: &[Vec<usize>],
    face: &[usize],
    face_dim: usize,
) -> Vec<Vec<usize>> {
    if face_dim == 0 {
        return vec![vec![face[0]]];
    }
    let apex = *face.iter().min().expect("face has vertices");
    let mut sub_faces = BTreeSet::new();
    for facet in incidence {
        let sub: Vec<usize> = face.iter().copied().filter(|v| facet.contains(v)).collect();
        if sub.contains(&apex) {
            continue;
        }
        let refs: Vec<&Point> = sub.iter().map(|&i| &vertices[i]).collect();
        if affine_dimension(&refs) == Some(face_dim - 1) {
            sub_faces.insert(sub);
        }
    }
    sub_faces
        .iter()
        .flat_map(|sub| pulling(vertices, incidence, sub, face_dim - 1))
        .map(|mut s| {
            s.insert(0, apex);
            s
        })
        .collect()
}

//! Vertex enumeration by intersecting every `n`-subset of facet hyperplanes.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::Signed;

use super::{AffineFunctional, Point, PolytopeError};
use crate::numerics::exact::{nullspace, rank, solve};
use crate::numerics::rational::Rational;

fn normals(facets: &[AffineFunctional], subset: &[usize]) -> Vec<Vec<Rational>> {
    subset
        .iter()
        .map(|&k| facets[k].normal_rational())
        .collect()
}

/// A nonzero `d` with `⟨ν_k, d⟩ ≥ 0` for every facet, if one exists.
///
/// When the normals span ℝⁿ the recession cone is pointed, so it is nonzero
/// exactly when it has an extreme ray, and every extreme ray is cut out by
/// `n − 1` independent tight constraints.
fn recession_direction(facets: &[AffineFunctional], dim: usize) -> Option<Point> {
    let all: Vec<usize> = (0..facets.len()).collect();
    let full = normals(facets, &all);
    if rank(&full) < dim {
        return nullspace(&full, dim).into_iter().next();
    }
    let feasible = |d: &Point| {
        facets.iter().all(|f| {
            let s: Rational = f.normal_rational().iter().zip(d).map(|(a, b)| a * b).sum();
            !s.is_negative()
        })
    };
    for subset in (0..facets.len()).combinations(dim - 1) {
        let ns = nullspace(&normals(facets, &subset), dim);
        if ns.len() != 1 {
            continue;
        }
        let d = &ns[0];
        if feasible(d) {
            return Some(d.clone());
        }
        let neg: Point = d.iter().map(|x| -x).collect();
        if feasible(&neg) {
            return Some(neg);
        }
    }
    None
}

/// All vertices of `{x : ψ_k(x) ≥ 0 ∀k}`, deduplicated and in lexicographic order.
pub fn enumerate_vertices(
    facets: &[AffineFunctional],
    dim: usize,
) -> Result<Vec<Point>, PolytopeError> {
    if dim == 0 {
        return Err(PolytopeError::ZeroDimension);
    }
    if facets.is_empty() {
        return Err(PolytopeError::NoFacets);
    }
    for (index, f) in facets.iter().enumerate() {
        if f.dim() != dim {
            return Err(PolytopeError::DimensionMismatch {
                index,
                expected: dim,
                got: f.dim(),
            });
        }
    }
    if let Some(direction) = recession_direction(facets, dim) {
        return Err(PolytopeError::Unbounded { direction });
    }
    let mut found = BTreeSet::new();
    for subset in (0..facets.len()).combinations(dim) {
        let a = normals(facets, &subset);
        let b: Vec<Rational> = subset
            .iter()
            .map(|&k| -facets[k].offset().clone())
            .collect();
        let Some(x) = solve(&a, &b) else { continue };
        if facets.iter().all(|f| !f.eval(&x).is_negative()) {
            found.insert(x);
        }
    }
    if found.is_empty() {
        return Err(PolytopeError::Empty);
    }
    Ok(found.into_iter().collect())
}

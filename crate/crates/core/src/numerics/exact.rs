//! Dense exact linear algebra over [`Rational`] by fraction-exact Gaussian
//! elimination. Sizes here never exceed a handful of rows.

use num_traits::{One, Signed, Zero};

use super::rational::Rational;

pub type RationalMatrix = Vec<Vec<Rational>>;

/// Row-reduces `m` in place to reduced row echelon form and returns the pivot
/// columns.
fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

/// Unique solution of the square system `a x = b`, or `None` when `a` is singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    assert_eq!(b.len(), n, "rhs length mismatch");
    let mut aug: RationalMatrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= &piv;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &piv;
            for j in c..n {
                let delta = &f * &m[c][j];
                m[i][j] -= delta;
            }
        }
    }
    det
}

/// Basis of `{x : m x = 0}`; `cols` is the number of unknowns (needed when `m` has no rows).
pub fn nullspace(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut work = m.to_vec();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -work[row][f].clone();
            }
            v
        })
        .collect()
}

/// Affine dimension of a point set (−1 encoded as `None` for the empty set).
pub fn affine_dimension(points: &[&Vec<Rational>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: RationalMatrix = rest
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
        .collect();
    Some(rank(&diffs))
}

pub fn abs_det(a: &[Vec<Rational>]) -> Rational {
    determinant(a).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect()
    }

    #[test]
    fn solves_small_system() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
    }

    #[test]
    fn singular_system_has_no_unique_solution() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert!(solve(&a, &[int(1), int(2)]).is_none());
        assert_eq!(determinant(&a), int(0));
        assert_eq!(rank(&a), 1);
    }

    #[test]
    fn determinant_with_pivoting() {
        let a = m(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(determinant(&a), int(-2));
    }

    #[test]
    fn nullspace_of_empty_system_is_everything() {
        assert_eq!(nullspace(&[], 2).len(), 2);
        let ns = nullspace(&m(&[&[1, 1]]), 2);
        assert_eq!(ns, vec![vec![int(-1), int(1)]]);
    }
}

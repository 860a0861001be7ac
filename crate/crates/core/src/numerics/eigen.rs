//! Small dense symmetric eigenproblems.
//!
//! The generalized pencil `A v = λ B v` with `B` positive definite is reduced
//! to a standard symmetric problem with the Cholesky factor `B = L Lᵀ`, and the
//! reduced matrix `L⁻¹ A L⁻ᵀ` is diagonalised by cyclic Jacobi rotations.
//! Everything here is sized for pencils of order ≤ 8.

use thiserror::Error;

/// Symmetric matrix stored as its packed lower triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    order: usize,
    packed: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            packed: vec![0.0; order * (order + 1) / 2],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from a full square matrix, averaging the two triangles.
    ///
    /// Panics if `rows` is not square.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for j in 0..=i {
                m.set(i, j, 0.5 * (rows[i][j] + rows[j][i]));
            }
        }
        m
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    fn index(i: usize, j: usize) -> usize {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        r * (r + 1) / 2 + c
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.packed[Self::index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.packed[Self::index(i, j)] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.packed[Self::index(i, j)] += v;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        dot(v, &self.mul_vec(v))
    }

    pub fn frobenius_norm(&self) -> f64 {
        (0..self.order)
            .flat_map(|i| (0..self.order).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            order: self.order,
            packed: self.packed.iter().map(|v| v * s).collect(),
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("matrix is not positive definite: Cholesky pivot {pivot} is {value:e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("pencil orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("Jacobi iteration did not converge in {0} sweeps")]
    NoConvergence(usize),
}

/// Lower-triangular Cholesky factor, row-major.
pub fn cholesky(b: &SymMatrix) -> Result<Vec<Vec<f64>>, EigenError> {
    let n = b.order();
    let mut l = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut d = b.get(j, j);
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if !(d > 0.0) {
            return Err(EigenError::NotPositiveDefinite { pivot: j, value: d });
        }
        let djj = d.sqrt();
        l[j][j] = djj;
        for i in j + 1..n {
            let mut s = b.get(i, j);
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / djj;
        }
    }
    Ok(l)
}

pub const JACOBI_MAX_SWEEPS: usize = 50;
const JACOBI_TOL: f64 = 1e-14;

/// Eigen-decomposition of a standard symmetric problem.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// `vectors[k]` pairs with `values[k]`; orthonormal.
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

fn off_diagonal_norm(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalisation.
pub fn jacobi_eigen(m: &SymMatrix) -> Result<SymmetricEigen, EigenError> {
    let n = m.order();
    let mut a = m.to_rows();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut sweeps = 0;
    while off_diagonal_norm(&a) > JACOBI_TOL * scale {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(EigenError::NoConvergence(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    Ok(SymmetricEigen {
        values: order.iter().map(|&i| a[i][i]).collect(),
        vectors: order
            .iter()
            .map(|&i| (0..n).map(|k| v[k][i]).collect())
            .collect(),
        sweeps,
    })
}

/// Solution of `A v = λ B v`.
#[derive(Debug, Clone)]
pub struct GeneralizedEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// B-orthonormal eigenvectors with positive leading component.
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

/// Flips `v` so its first non-negligible component is positive.
pub fn orient_positive(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(lead) = v.iter().find(|x| x.abs() > 1e-12 * max) {
        if *lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

pub fn generalized_symmetric_eigen(
    a: &SymMatrix,
    b: &SymMatrix,
) -> Result<GeneralizedEigen, EigenError> {
    let n = a.order();
    if b.order() != n {
        return Err(EigenError::OrderMismatch(n, b.order()));
    }
    let l = cholesky(b)?;

    // X = L⁻¹ A via forward substitution on each column, then C = X L⁻ᵀ.
    let forward = |rhs: &[f64]| -> Vec<f64> {
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = rhs[i];
            for k in 0..i {
                s -= l[i][k] * y[k];
            }
            y[i] = s / l[i][i];
        }
        y
    };
    let a_rows = a.to_rows();
    let x_cols: Vec<Vec<f64>> = (0..n)
        .map(|j| forward(&(0..n).map(|i| a_rows[i][j]).collect::<Vec<_>>()))
        .collect();
    // x_cols[j][i] = X[i][j]; C = X L⁻ᵀ means Cᵀ = L⁻¹ Xᵀ, so solve on rows of X.
    let c_rows: Vec<Vec<f64>> = (0..n)
        .map(|i| forward(&(0..n).map(|j| x_cols[j][i]).collect::<Vec<_>>()))
        .collect();
    let c = SymMatrix::from_rows(&c_rows);
    let std = jacobi_eigen(&c)?;

    let backward = |y: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= l[k][i] * x[k];
            }
            x[i] = s / l[i][i];
        }
        x
    };
    let vectors = std
        .vectors
        .iter()
        .map(|y| {
            let mut v = backward(y);
            orient_positive(&mut v);
            v
        })
        .collect();
    Ok(GeneralizedEigen {
        values: std.values,
        vectors,
        sweeps: std.sweeps,
    })
}

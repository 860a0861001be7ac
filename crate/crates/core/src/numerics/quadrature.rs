//! Gauss–Legendre rules and their Duffy-collapsed images on triangles.

use std::f64::consts::PI;

pub const MAX_ORDER: usize = 256;
const NEWTON_TOL: f64 = 1e-15;

/// Nodes and weights on `[-1, 1]`, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Legendre polynomial `P_n(x)` and its derivative via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n_f = n as f64;
    let dp = n_f * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre rule with `order` points, computed by Newton iteration on
/// `P_order` from Chebyshev-like initial guesses.
///
/// Panics unless `1 <= order <= 256`.
pub fn gauss_legendre(order: usize) -> GaussRule {
    assert!(
        (1..=MAX_ORDER).contains(&order),
        "Gauss-Legendre order must lie in 1..={MAX_ORDER}, got {order}"
    );
    if order == 1 {
        return GaussRule {
            nodes: vec![0.0],
            weights: vec![2.0],
        };
    }
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < NEWTON_TOL {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}

pub type Point2 = [f64; 2];

/// Tensor rule on a triangle: points with weights summing to the triangle's area.
#[derive(Debug, Clone)]
pub struct TriangleRule {
    pub points: Vec<Point2>,
    pub weights: Vec<f64>,
}

impl TriangleRule {
    pub fn integrate(&self, mut f: impl FnMut(Point2) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(p))
            .sum()
    }
}

/// Collapsed-coordinate (Duffy) rule: the square `[0,1]²` is mapped onto the
/// triangle `(p0, p1, p2)` by `(u, v) ↦ p0 + u(1−v)(p1−p0) + uv(p2−p0)`, with
/// Jacobian `2·area·u`. The apex `p0` is the collapsed vertex. Every node is
/// strictly interior.
pub fn duffy_triangle(order: usize, triangle: [Point2; 3]) -> TriangleRule {
    let rule = gauss_legendre(order);
    let [p0, p1, p2] = triangle;
    let e1 = [p1[0] - p0[0], p1[1] - p0[1]];
    let e2 = [p2[0] - p0[0], p2[1] - p0[1]];
    let area = 0.5 * (e1[0] * e2[1] - e1[1] * e2[0]).abs();
    let unit: Vec<(f64, f64)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect();
    let mut points = Vec::with_capacity(order * order);
    let mut weights = Vec::with_capacity(order * order);
    for &(u, wu) in &unit {
        for &(v, wv) in &unit {
            let l1 = u * (1.0 - v);
            let l2 = u * v;
            points.push([
                p0[0] + l1 * e1[0] + l2 * e2[0],
                p0[1] + l1 * e1[1] + l2 * e2[1],
            ]);
            weights.push(wu * wv * u * 2.0 * area);
        }
    }
    TriangleRule { points, weights }
}

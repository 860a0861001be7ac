//! Central finite-difference stencils, second order in the step.

/// `∂²f/∂xᵢ∂xⱼ` at `x` with step `h`.
pub fn second_partial<const N: usize>(
    f: impl Fn([f64; N]) -> f64,
    x: [f64; N],
    i: usize,
    j: usize,
    h: f64,
) -> f64 {
    let shift = |di: f64, dj: f64| {
        let mut y = x;
        y[i] += di;
        y[j] += dj;
        f(y)
    };
    if i == j {
        (shift(h, 0.0) - 2.0 * f(x) + shift(-h, 0.0)) / (h * h)
    } else {
        (shift(h, h) - shift(h, -h) - shift(-h, h) + shift(-h, -h)) / (4.0 * h * h)
    }
}

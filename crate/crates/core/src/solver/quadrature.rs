use std::f64::consts::PI;

/// Product-quadrature weights for the logarithmic kernel on `M = 2n` equispaced nodes:
///
/// ```text
/// ∫₀^{2π} log(4 sin²((t_i − τ)/2)) f(τ) dτ ≈ Σ_j R[(i − j) mod M] f(t_j)
/// ```
///
/// exact for trigonometric polynomials `f` of degree below `n`.
pub fn log_weights(m: usize) -> Vec<f64> {
    assert!(m >= 2 && m.is_multiple_of(2), "log_weights needs an even node count");
    let n = m / 2;
    let nf = n as f64;
    (0..m)
        .map(|k| {
            let s: f64 = (1..n)
                .map(|j| (j as f64 * k as f64 * PI / nf).cos() / j as f64)
                .sum();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            -2.0 * PI / nf * s - sign * PI / (nf * nf)
        })
        .collect()
}

/// Principal branch of the Lambert W function for `x ≥ 0`.
///
/// Halley iteration from `log(1 + x)`.
pub fn lambert_w(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !(x > 0.0) || !x.is_finite() {
        return f64::NAN;
    }
    let mut w = x.ln_1p();
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn known_values() {
        assert!((lambert_w(E) - 1.0).abs() < 1e-15);
        assert!((lambert_w(1.0) - 0.567_143_290_409_783_8).abs() < 1e-14);
        assert!(lambert_w(1e-12).abs() <= 2e-12);
        assert_eq!(lambert_w(0.0), 0.0);
    }

    #[test]
    fn omega_constant_from_plain_newton() {
        // Oracle: Newton on w e^w = 1 written out independently.
        let mut w = 0.5_f64;
        for _ in 0..50 {
            w -= (w * w.exp() - 1.0) / (w.exp() * (1.0 + w));
        }
        assert!((lambert_w(1.0) - w).abs() < 1e-15);
    }

    #[test]
    fn residual_is_tiny_across_scales() {
        let mut x = 1e-10;
        while x < 1e10 {
            let w = lambert_w(x);
            assert!(((w * w.exp() - x) / x).abs() <= 1e-14, "x = {x}");
            x *= 3.7;
        }
    }
}

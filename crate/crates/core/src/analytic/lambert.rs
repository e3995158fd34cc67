use std::f64::consts::E;

use crate::error::{Error, Result};

/// Principal branch `W0(x)` of the inverse of `w e^w`, for `x >= −1/e`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    let branch = -(-1.0f64).exp();
    if x.is_nan() || x < branch {
        return Err(Error::Domain(format!("lambert_w0 needs x >= -1/e, got {x}")));
    }
    if x == branch {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }

    let mut w = if x < -0.25 {
        // series around the branch point
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x > E {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    } else {
        (1.0 + x).ln() * 0.8
    };

    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_values() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert!((lambert_w0(E).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(lambert_w0(-(-1.0f64).exp()).unwrap(), -1.0);
        assert!(lambert_w0(-0.4).is_err());
    }

    #[test]
    fn saturation_scale_arguments() {
        let w = lambert_w0(1.077e11).unwrap();
        assert!((w - 22.30).abs() < 0.01, "{w}");
        let w = lambert_w0(1.077e15).unwrap();
        assert!((w - 31.17).abs() < 0.01, "{w}");
    }

    #[test]
    fn defining_identity_across_scales() {
        let mut x = -0.367_879;
        while x < 1e300 {
            let w = lambert_w0(x).unwrap();
            let back = w * w.exp();
            assert!((back - x).abs() <= 1e-12 * x.abs().max(1e-300), "x={x} w={w}");
            x = if x < 0.0 { x / 3.0 + 1e-3 } else { x * 7.3 + 1e-3 };
        }
    }
}

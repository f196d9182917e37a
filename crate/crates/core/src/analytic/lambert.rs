use crate::error::{Error, Result};

/// Principal branch of the Lambert W function on `[0, inf)`.
pub fn lambert_w(y: f64) -> Result<f64> {
    if !(y >= 0.0) || !y.is_finite() {
        return Err(Error::InvalidArgument(format!("lambert_w needs finite y >= 0, got {y}")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let mut w = y.ln_1p();
    for _ in 0..200 {
        let ew = w.exp();
        let f = w * ew - y;
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-16 * w.abs().max(1.0) {
            break;
        }
    }
    let resid = (w * w.exp() - y).abs();
    if resid > 1e-12 * y.max(1.0) {
        // one Newton polish on the residual
        let ew = w.exp();
        w -= (w * ew - y) / (ew * (w + 1.0));
    }
    Ok(w)
}

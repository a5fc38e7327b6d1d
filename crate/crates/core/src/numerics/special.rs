use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Error function, `2/√π ∫₀ˣ e^{-t²} dt`.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function, accurate in relative terms for large `x`.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Inverse error function on (-1, 1).
pub fn erf_inv(y: f64) -> Result<f64> {
    if !(y > -1.0 && y < 1.0) {
        return Err(Error::Domain(format!("erf_inv requires |y| < 1, got {y}")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let mut x = statrs::function::erf::erf_inv(y);
    // one Newton step on erf(x) - y
    let slope = 2.0 / PI.sqrt() * (-x * x).exp();
    if slope > 0.0 {
        x -= (erf(x) - y) / slope;
    }
    Ok(x)
}

/// Gaussian Mills ratio `(1 - Φ(x)) / ϕ(x)`, i.e. `Erfc(x/√2) / (√(2/π) e^{-x²/2})`.
///
/// Switches to the Laplace continued fraction at `x = 8`, where the
/// direct quotient loses precision and eventually underflows.
pub fn mills_ratio(x: f64) -> f64 {
    if x < 8.0 {
        let phi = (2.0 / PI).sqrt() * (-0.5 * x * x).exp();
        return erfc(x / std::f64::consts::SQRT_2) / phi;
    }
    let mut tail = x;
    for k in (1..=80).rev() {
        tail = x + k as f64 / tail;
    }
    1.0 / tail
}

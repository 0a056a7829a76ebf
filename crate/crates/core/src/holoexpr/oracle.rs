use std::f64::consts::PI;

use num_complex::Complex64;

use super::{HoloExpr, Point4, VarId};
use crate::error::{Error, Result};

pub const DEFAULT_ORACLE_RADIUS: f64 = 0.1;
pub const DEFAULT_ORACLE_N: usize = 64;

/// Partial derivative by the discretized Cauchy integral formula
///
/// ```text
/// d f / d v (p) ~ 1/(n r) * sum_k exp(-i theta_k) f(p + r exp(i theta_k) e_v)
/// ```
///
/// with `theta_k = 2 pi k / n`. For entire functions the trapezoidal rule on
/// the circle converges geometrically in `n`. This never touches the
/// symbolic differentiator.
pub fn cauchy_derivative(
    e: &HoloExpr,
    v: VarId,
    p: &Point4,
    radius: f64,
    n: usize,
) -> Result<Complex64> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "oracle radius must be positive, got {radius}"
        )));
    }
    if n < 8 {
        return Err(Error::InvalidParameter(format!(
            "oracle needs at least 8 nodes, got {n}"
        )));
    }
    let mut q = *p;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let theta = 2.0 * PI * k as f64 / n as f64;
        let w = Complex64::from_polar(1.0, theta);
        q[v.slot()] = p[v.slot()] + radius * w;
        acc += e.eval(&q) / w;
    }
    Ok(acc / (n as f64 * radius))
}

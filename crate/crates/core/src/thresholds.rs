//! Closed-form thresholds on the number of summands.
//!
//! Every value is returned as a real number; the condition on `n` is strict,
//! so [`smallest_integer_above`] is the caller's rounding rule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const CHECK_TOL: f64 = 1e-9;

fn check_c(c: f64) -> Result<()> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::InvalidParameter(format!("c = {c} not in (0, 1]")));
    }
    Ok(())
}

fn check_d(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    Ok(())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= CHECK_TOL * a.abs().max(b.abs()).max(1.0)
}

/// `√d (1+λ) / (λ (α−λ))`.
pub fn phi(alpha: f64, lambda: f64, d: usize) -> Result<f64> {
    check_d(d)?;
    if !(lambda > 0.0 && lambda < alpha) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need 0 < lambda < alpha, got lambda = {lambda}, alpha = {alpha}"
        )));
    }
    Ok((d as f64).sqrt() * (1.0 + lambda) / (lambda * (alpha - lambda)))
}

/// Minimizer of `λ ↦ phi(α, λ, d)` on `(0, α)`: `√(1+α) − 1`, evaluated as
/// `α / (√(1+α) + 1)` to avoid cancellation for small `α`.
pub fn lambda_star(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} must be positive"
        )));
    }
    let l = alpha / ((1.0 + alpha).sqrt() + 1.0);
    // α − λ = λ(1 + λ) characterizes the root
    if !close(alpha - l, l * (1.0 + l)) {
        return Err(Error::Internal(format!(
            "lambda* identity fails at alpha = {alpha}"
        )));
    }
    Ok(l)
}

/// `√d (√(1+c) + 1)² / c²`, equal to `√d / (√(1+c) − 1)²`.
pub fn n_main(c: f64, d: usize) -> Result<f64> {
    check_c(c)?;
    check_d(d)?;
    let sd = (d as f64).sqrt();
    let s = (1.0 + c).sqrt() + 1.0;
    let v = sd * s * s / (c * c);
    let l = lambda_star(c)?;
    if !close(v, sd / (l * l)) {
        return Err(Error::Internal(format!(
            "threshold forms disagree at c = {c}"
        )));
    }
    if !(v < coarse_main(c, d)) {
        return Err(Error::Internal(format!(
            "threshold exceeds 6√d/c² at c = {c}"
        )));
    }
    Ok(v)
}

/// `6 √d / c²`, a simpler sufficient threshold.
pub fn coarse_main(c: f64, d: usize) -> f64 {
    6.0 * (d as f64).sqrt() / (c * c)
}

/// `2^11 c^−3 + 1`.
pub fn n_fw(c: f64) -> Result<f64> {
    check_c(c)?;
    Ok(2048.0 / (c * c * c) + 1.0)
}

/// `(1024/3)² c^−2`: below this dimension `6√d/c² < 2048/c³`.
pub fn crossover_dim(c: f64) -> Result<f64> {
    check_c(c)?;
    let v = (1024.0f64 / 3.0).powi(2) / (c * c);
    let below = v - 1.0;
    if below > 0.0 && !(6.0 * below.sqrt() / (c * c) < 2048.0 / (c * c * c)) {
        return Err(Error::Internal(format!("crossover check fails at c = {c}")));
    }
    Ok(v)
}

/// Least integer strictly greater than `t`.
pub fn smallest_integer_above(t: f64) -> u64 {
    t.floor() as u64 + 1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub c: f64,
    pub d: usize,
    pub n_main: f64,
    pub n_main_coarse: f64,
    pub n_fw: f64,
    pub n_min: f64,
    pub n_required: u64,
    pub lambda_star_at_c: f64,
    pub crossover_dim: f64,
}

pub fn threshold_report(c: f64, d: usize) -> Result<ThresholdReport> {
    let n_main = n_main(c, d)?;
    let n_fw = n_fw(c)?;
    let n_min = n_main.min(n_fw);
    Ok(ThresholdReport {
        c,
        d,
        n_main,
        n_main_coarse: coarse_main(c, d),
        n_fw,
        n_min,
        n_required: smallest_integer_above(n_min),
        lambda_star_at_c: lambda_star(c)?,
        crossover_dim: crossover_dim(c)?,
    })
}

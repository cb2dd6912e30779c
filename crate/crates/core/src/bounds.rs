//! Closed-form and quadrature quantities behind the cardinality bound.
//!
//! For a set `A ⊂ R^D` with `∠A ≤ θ` the bound reads `|A| ≤ 1/f_d(η_d(θ))`
//! with `d = D − 1`, where
//!
//! * `θ_d = arccos(−1/d)`,
//! * `η_d(θ) = arcsin(sin(θ/2) / sin(θ_d/2))` and `sin(θ_d/2) = √((d+1)/(2d))`,
//! * `f_d(η) = ∫_0^{π/2−η} sin^{d−1} t dt / ∫_0^π sin^{d−1} t dt`, the fraction
//!   of `S^d` taken by the normal cone at the apex of a circular cone of
//!   half-angle `η`.
//!
//! The hypothesis of the bound is `θ < θ_D`; between `θ_D` and `θ_{D−1}` the
//! formula is still defined and is reported with `theorem_applicable = false`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Angle;
use crate::quadrature::{adaptive_simpson, QuadratureResult, ABS_TOL};

/// Slack for comparisons against `θ_d` and for the `arcsin` argument.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Cardinality bound for one `(θ, D)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theta: Angle,
    pub ambient_dim: usize,
    pub eta: Angle,
    pub f_value: QuadratureResult,
    pub bound: f64,
    /// `ln(bound)`, finite even when `bound` overflows.
    pub ln_bound: f64,
    pub theorem_applicable: bool,
}

/// `θ_d = arccos(−1/d)`.
pub fn theta_d(d: usize) -> Angle {
    assert!(d >= 1, "theta_d needs d >= 1");
    Angle::from_cos(-1.0 / d as f64)
}

/// `sin(θ_d/2) = √((d+1)/(2d))`.
pub fn half_theta_d_sine(d: usize) -> f64 {
    let d = d as f64;
    ((d + 1.0) / (2.0 * d)).sqrt()
}

/// Inverse of `R ↦ 2 arcsin(sin(θ_d/2) sin R)` evaluated at `x`.
pub(crate) fn dekster_inverse(x: Angle, d: usize) -> Result<Angle> {
    if d == 0 {
        return Err(Error::OutOfRange("dimension must be at least 1".into()));
    }
    let ratio = (x.radians() / 2.0).sin() / half_theta_d_sine(d);
    if ratio > 1.0 + BOUNDARY_TOL {
        return Err(Error::OutOfRange(format!(
            "angle {} exceeds theta_{d} = {}",
            x.radians(),
            theta_d(d).radians()
        )));
    }
    Ok(Angle::new(ratio.min(1.0).asin()).expect("arcsin of [0,1] lies in [0, π/2]"))
}

/// `η_d(θ) = arcsin(sin(θ/2)/sin(θ_d/2))`, defined for `0 < θ ≤ θ_d`.
pub fn eta_of_theta(theta: Angle, d: usize) -> Result<Angle> {
    if theta.radians() <= 0.0 {
        return Err(Error::OutOfRange("theta must be positive".into()));
    }
    dekster_inverse(theta, d)
}

/// `ln ∫_lo^hi sin^{d−1} t dt` for `0 ≤ lo < hi ≤ π/2`, with the integrand
/// rescaled by its maximum `sin^{d−1}(hi)` so it never underflows wholesale.
fn ln_sine_power_integral(d: usize, hi: f64) -> (f64, QuadratureResult) {
    if d == 1 {
        let q = QuadratureResult {
            value: hi,
            abs_error_estimate: 0.0,
            panels: 1,
        };
        return (hi.ln(), q);
    }
    let power = (d - 1) as f64;
    let ln_peak = power * hi.sin().ln();
    let q = adaptive_simpson(
        |t| {
            let s = t.sin();
            if s <= 0.0 {
                0.0
            } else {
                (power * s.ln() - ln_peak).exp()
            }
        },
        0.0,
        hi,
        ABS_TOL,
    );
    (ln_peak + q.value.ln(), q)
}

/// `ln f_d(η)` together with its quadrature record.
fn ln_f_fraction(d: usize, eta: Angle) -> Result<(f64, QuadratureResult)> {
    if d == 0 {
        return Err(Error::OutOfRange("dimension must be at least 1".into()));
    }
    let eta = eta.radians();
    if !(0.0..=FRAC_PI_2).contains(&eta) {
        return Err(Error::OutOfRange(format!("eta {eta} not in [0, π/2]")));
    }
    // full integral over [0, π] is twice the half-range integral
    let (ln_half, q_half) = ln_sine_power_integral(d, FRAC_PI_2);
    let upper = FRAC_PI_2 - eta;
    if upper <= 0.0 {
        let q = QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            panels: q_half.panels,
        };
        return Ok((f64::NEG_INFINITY, q));
    }
    let (ln_num, q_num) = if eta == 0.0 {
        (ln_half, q_half)
    } else {
        ln_sine_power_integral(d, upper)
    };
    let ln_f = ln_num - ln_half - std::f64::consts::LN_2;
    let value = 0.5 * (ln_num - ln_half).exp();
    let rel = q_num.abs_error_estimate / q_num.value + q_half.abs_error_estimate / q_half.value;
    let q = QuadratureResult {
        value,
        abs_error_estimate: value * rel,
        panels: q_num.panels + q_half.panels,
    };
    Ok((ln_f, q))
}

/// `f_d(η)`, the normalized integral of `sin^{d−1}` over `[0, π/2 − η]`.
pub fn f_fraction(d: usize, eta: Angle) -> Result<QuadratureResult> {
    ln_f_fraction(d, eta).map(|(_, q)| q)
}

/// `1/f_{D−1}(η_{D−1}(θ))` with the hypothesis flag `θ < θ_D`.
pub fn cardinality_bound(theta: Angle, ambient_dim: usize) -> Result<BoundReport> {
    if ambient_dim < 2 {
        return Err(Error::OutOfRange("ambient dimension must be at least 2".into()));
    }
    let d = ambient_dim - 1;
    let eta = eta_of_theta(theta, d)?;
    let (ln_f, f_value) = ln_f_fraction(d, eta)?;
    let theorem_applicable = theta.radians() < theta_d(ambient_dim).radians() - BOUNDARY_TOL;
    Ok(BoundReport {
        theta,
        ambient_dim,
        eta,
        f_value,
        bound: (-ln_f).exp(),
        ln_bound: -ln_f,
        theorem_applicable,
    })
}

/// `2 (π/2)^{2d−1} d^{d/2}`: the large-dimension envelope for `θ = π/2`,
/// without its `1 + O(1/d)` factor.
pub fn asymptotic_envelope(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::OutOfRange("envelope needs d >= 2".into()));
    }
    let df = d as f64;
    let ln = std::f64::consts::LN_2 + (2.0 * df - 1.0) * FRAC_PI_2.ln() + 0.5 * df * df.ln();
    let v = ln.exp();
    if !v.is_finite() {
        return Err(Error::Overflow(format!("envelope at d = {d} exceeds f64 range")));
    }
    Ok(v)
}

/// `ln` of [`asymptotic_envelope`], finite for every `d ≥ 2`.
pub fn ln_asymptotic_envelope(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::OutOfRange("envelope needs d >= 2".into()));
    }
    let df = d as f64;
    Ok(std::f64::consts::LN_2 + (2.0 * df - 1.0) * FRAC_PI_2.ln() + 0.5 * df * df.ln())
}

/// Planar bound `2π/(π − θ)`; equals `cardinality_bound(θ, 2).bound`.
pub fn planar_bound(theta: Angle) -> f64 {
    2.0 * PI / (PI - theta.radians())
}

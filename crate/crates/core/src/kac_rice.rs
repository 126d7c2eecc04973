//! Kac-Rice constants of a stationary Gaussian field whose spectral measure
//! has second moment `μ̂(2) = α + iβ`.
//!
//! `c₁` is the constant in `E[L] = c₁ · (scale)`, written in the normalized
//! convention where gradients carry no `2π`. A field `F(R·)` with frequencies
//! on the unit circle, as produced by [`crate::gaussian`], has expected
//! nodal length `2π c₁ R` per unit area; see [`physical_length_density`].

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::measure::{DirectionMeasure, MomentMatrix};
use crate::quadrature::{integrate, integrate_breaks};

const DEGENERACY_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KacRiceInput {
    pub alpha: f64,
    pub beta: f64,
}

impl KacRiceInput {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let input = Self { alpha, beta };
        input.check()?;
        Ok(input)
    }

    pub fn from_measure(mu: &DirectionMeasure) -> Result<Self> {
        let m = mu.fourier_moment(2);
        Self::new(m.re, m.im)
    }

    fn modulus_sq(&self) -> f64 {
        self.alpha * self.alpha + self.beta * self.beta
    }

    fn check(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.beta.is_finite()) {
            return Err(invalid("alpha and beta must be finite"));
        }
        if self.modulus_sq() >= 1.0 - DEGENERACY_MARGIN {
            return Err(Error::Degenerate(format!(
                "|mu(2)|^2 = {} leaves the moment matrix singular",
                self.modulus_sq()
            )));
        }
        Ok(())
    }

    /// `(1 − α² − β²)/4 = det L`.
    pub fn det(&self) -> f64 {
        0.25 * (1.0 - self.modulus_sq())
    }

    pub fn moment_matrix(&self) -> MomentMatrix {
        MomentMatrix::from_moment(num_complex::Complex64::new(self.alpha, self.beta))
    }
}

/// `c₁ = (1−α²)/(2^{5/2}π) ∫₀^{2π} (1 − α cos 2θ)^{−3/2} dθ`, valid for `β = 0`.
pub fn expected_length_constant_closed_form(alpha: f64) -> Result<f64> {
    KacRiceInput::new(alpha, 0.0)?;
    let r = integrate_breaks(
        |t| (1.0 - alpha * (2.0 * t).cos()).powf(-1.5),
        &[0.0, 0.25 * PI, 0.5 * PI, 0.75 * PI, PI],
        1e-14,
        1e-14,
        2000,
    );
    if !r.converged {
        return Err(Error::NotConverged(format!(
            "c1 quadrature at alpha={alpha}: error {}",
            r.error
        )));
    }
    // the integrand has period π
    Ok((1.0 - alpha * alpha) / (2f64.powf(2.5) * PI) * 2.0 * r.value)
}

/// `E|Z|` for `Z ~ N(0, L)`: with eigenvalues `σ₁², σ₂²`,
/// `E|Z| = √(π/2)/(2π) ∫₀^{2π} √(σ₁² cos²φ + σ₂² sin²φ) dφ`.
pub fn gaussian_norm_expectation(l: [[f64; 2]; 2]) -> Result<f64> {
    let (a, b, c) = (l[0][0], 0.5 * (l[0][1] + l[1][0]), l[1][1]);
    if (l[0][1] - l[1][0]).abs() > 1e-12 * (a.abs() + c.abs()).max(1.0) {
        return Err(invalid("matrix is not symmetric"));
    }
    let mean = 0.5 * (a + c);
    let spread = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let (s1, s2) = (mean + spread, mean - spread);
    let det = a * c - b * b;
    if !(det > 0.0) || s2 <= 0.0 {
        return Err(Error::Degenerate(format!(
            "covariance matrix singular (det {det})"
        )));
    }
    let r = integrate(
        |p: f64| (s1 * p.cos().powi(2) + s2 * p.sin().powi(2)).sqrt(),
        0.0,
        0.5 * PI,
        1e-15,
        1e-14,
        2000,
    );
    // four equal quarter periods
    Ok((0.5 * PI).sqrt() / TAU * 4.0 * r.value)
}

/// `c₁ = E|Z|/√(2π)`, `Z ~ N(0, L)`. The general path; agrees with the
/// closed form when `β = 0`.
pub fn expected_length_constant(input: &KacRiceInput) -> Result<f64> {
    input.check()?;
    Ok(gaussian_norm_expectation(input.moment_matrix().l)? / TAU.sqrt())
}

/// Expected nodal length per unit area of `F(R·)` divided by `R`, for a
/// field with frequencies on the unit circle: `2π c₁`.
pub fn physical_length_density(input: &KacRiceInput) -> Result<f64> {
    Ok(TAU * expected_length_constant(input)?)
}

/// `h(t, s) = √[(1 + t + t²D)(1 + s + s²D)]`, `D = (1 − α² − β²)/4`.
pub fn h_function(t: f64, s: f64, input: &KacRiceInput) -> Result<f64> {
    if !(t >= 0.0 && s >= 0.0) {
        return Err(invalid(format!("h needs t, s >= 0, got ({t}, {s})")));
    }
    let d = input.det();
    Ok(((1.0 + t + t * t * d) * (1.0 + s + s * s * d)).sqrt())
}

const TRUNCATION: f64 = 1e6;

/// `∫₀^∞ (1 − 1/h(t, 0)) t^{−3/2} dt`, by `t = u²` on `[0, 10⁶]` plus the
/// leading terms of the tail expansion.
pub fn variance_integral(input: &KacRiceInput) -> Result<f64> {
    input.check()?;
    let d = input.det();
    let integrand = |u: f64| {
        if u == 0.0 {
            return 1.0;
        }
        let t = u * u;
        let h = (1.0 + t + t * t * d).sqrt();
        // 1 − 1/h = (h − 1)/h, and h − 1 = (t + t²D)/(h + 1) avoids cancellation
        let one_minus = (t + t * t * d) / ((h + 1.0) * h);
        2.0 * one_minus / t
    };
    let umax = TRUNCATION.sqrt();
    let r = integrate_breaks(
        integrand,
        &[0.0, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0, umax],
        1e-12,
        1e-13,
        4000,
    );
    if !r.converged {
        return Err(Error::NotConverged(format!(
            "variance integral: error {}",
            r.error
        )));
    }
    // for t > T: 1 − 1/h ≈ 1 − 1/(√D t)
    let tail = 2.0 / TRUNCATION.sqrt() - (2.0 / 3.0) * TRUNCATION.powf(-1.5) / d.sqrt();
    Ok(r.value + tail)
}

/// The displayed variance-constant formula
/// `(1/(2π²)) (∫₀^∞ (1 − 1/h(t,0)) t^{−3/2} dt)² − c₁²`.
///
/// This is the literal value of that expression. At `μ̂(2) = 0` it equals
/// `1/8`, not `0`; Monte Carlo decides the true variance constant.
pub fn variance_constant_formula(input: &KacRiceInput) -> Result<f64> {
    let i = variance_integral(input)?;
    let c1 = expected_length_constant(input)?;
    Ok(i * i / (2.0 * PI * PI) - c1 * c1)
}

/// Reference random-wave variance `ln R / (512π)`.
pub fn berry_variance(r: f64) -> Result<f64> {
    if !(r > 1.0) {
        return Err(invalid(format!("R must exceed 1, got {r}")));
    }
    Ok(r.ln() / (512.0 * PI))
}

//! Symmetric probability measures on the unit circle, their Fourier moments
//! and the covariance `r(w) = ∫ e(⟨w, u⟩) dμ(u)` of the associated
//! stationary Gaussian field. Angles are in radians, `e(t) = exp(2πit)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel;
use crate::error::{Error, Result};
use crate::quadrature::integrate;

const MASS_TOL: f64 = 1e-12;
const ANGLE_TOL: f64 = 1e-9;
/// `det L` below this marks a measure supported on a line.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;
const ARC_ABS_TOL: f64 = 1e-10;

/// A probability measure on `S¹`, invariant under `u → −u`.
///
/// Arcs are `[start, end)` in radians with `start < end ≤ start + 2π`;
/// each carries `weights[i]` of mass spread uniformly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum DirectionMeasure {
    Atomic {
        atoms: Vec<f64>,
        weights: Vec<f64>,
    },
    ArcUniform {
        arcs: Vec<[f64; 2]>,
        weights: Vec<f64>,
    },
    Lebesgue,
}

/// The normalized second-moment matrix `L = E[u uᵀ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentMatrix {
    pub alpha: f64,
    pub beta: f64,
    pub l: [[f64; 2]; 2],
    pub det: f64,
    pub degenerate: bool,
}

impl MomentMatrix {
    pub fn from_moment(m2: Complex64) -> Self {
        let (alpha, beta) = (m2.re, m2.im);
        let l = [
            [0.5 + 0.5 * alpha, 0.5 * beta],
            [0.5 * beta, 0.5 - 0.5 * alpha],
        ];
        let det = 0.25 * (1.0 - alpha * alpha - beta * beta);
        Self {
            alpha,
            beta,
            l,
            det,
            degenerate: det < DEGENERACY_THRESHOLD,
        }
    }

    pub fn trace(&self) -> f64 {
        self.l[0][0] + self.l[1][1]
    }
}

fn wrap_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidMeasure("no mass".into()));
    }
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
        return Err(Error::InvalidMeasure(format!("non-positive weight {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidMeasure(format!("total mass {total} != 1")));
    }
    Ok(())
}

impl DirectionMeasure {
    /// Atoms at `angles` with `weights`; validated.
    pub fn atomic(angles: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let m = DirectionMeasure::Atomic {
            atoms: angles.into_iter().map(wrap_angle).collect(),
            weights,
        };
        m.validate()?;
        Ok(m)
    }

    /// Uniform mass on arcs; validated.
    pub fn arc_uniform(arcs: Vec<[f64; 2]>, weights: Vec<f64>) -> Result<Self> {
        let m = DirectionMeasure::ArcUniform { arcs, weights };
        m.validate()?;
        Ok(m)
    }

    /// Uniform measure on the union of the chosen eighths of the circle,
    /// numbered `1..=8` anticlockwise from `(1, 0)`, each eighth
    /// `[(k−1)π/4, kπ/4)`.
    pub fn eighth_arcs(selection: &[usize]) -> Result<Self> {
        if selection.is_empty() {
            return Err(Error::InvalidMeasure("empty arc selection".into()));
        }
        if let Some(k) = selection.iter().find(|k| !(1..=8).contains(*k)) {
            return Err(Error::InvalidMeasure(format!(
                "arc index {k} outside 1..=8"
            )));
        }
        let mass = 1.0 / selection.len() as f64;
        let arcs = selection
            .iter()
            .map(|&k| [(k - 1) as f64 * PI / 4.0, k as f64 * PI / 4.0])
            .collect();
        Self::arc_uniform(arcs, vec![mass; selection.len()])
    }

    /// The two-arc measure on the first and fifth eighths.
    pub fn eight_arc() -> Self {
        Self::eighth_arcs(&[1, 5]).expect("fixed selection is valid")
    }

    /// Checks total mass, positivity and antipodal symmetry.
    pub fn validate(&self) -> Result<()> {
        match self {
            DirectionMeasure::Lebesgue => Ok(()),
            DirectionMeasure::Atomic { atoms, weights } => {
                if atoms.len() != weights.len() {
                    return Err(Error::InvalidMeasure(
                        "atoms and weights differ in length".into(),
                    ));
                }
                check_weights(weights)?;
                for (i, (&t, &w)) in atoms.iter().zip(weights).enumerate() {
                    if !t.is_finite() {
                        return Err(Error::InvalidMeasure(format!("atom {i} angle not finite")));
                    }
                    let opposite: f64 = atoms
                        .iter()
                        .zip(weights)
                        .filter(|(s, _)| angle_distance(**s, t + PI) < ANGLE_TOL)
                        .map(|(_, v)| *v)
                        .sum();
                    let here: f64 = atoms
                        .iter()
                        .zip(weights)
                        .filter(|(s, _)| angle_distance(**s, t) < ANGLE_TOL)
                        .map(|(_, v)| *v)
                        .sum();
                    if (opposite - here).abs() > MASS_TOL {
                        return Err(Error::InvalidMeasure(format!(
                            "atom at {t} (weight {w}) lacks an antipodal partner of equal weight"
                        )));
                    }
                }
                Ok(())
            }
            DirectionMeasure::ArcUniform { arcs, weights } => {
                if arcs.len() != weights.len() {
                    return Err(Error::InvalidMeasure(
                        "arcs and weights differ in length".into(),
                    ));
                }
                check_weights(weights)?;
                for [a, b] in arcs {
                    if !(a.is_finite() && b.is_finite() && b > a && b - a <= TAU + ANGLE_TOL) {
                        return Err(Error::InvalidMeasure(format!("bad arc [{a}, {b})")));
                    }
                }
                // symmetry: the measure must agree with its rotation by π
                for k in [1i32, 3, 5, 7] {
                    let m = self.fourier_moment(k);
                    if m.norm() > 1e-9 {
                        return Err(Error::InvalidMeasure(format!(
                            "arcs not antipodally symmetric (|moment {k}| = {})",
                            m.norm()
                        )));
                    }
                }
                for (i, ([a, b], w)) in arcs.iter().zip(weights).enumerate() {
                    let density = w / (b - a);
                    let partner = arcs.iter().zip(weights).any(|([c, d], v)| {
                        angle_distance(*c, a + PI) < ANGLE_TOL
                            && ((d - c) - (b - a)).abs() < ANGLE_TOL
                            && (v / (d - c) - density).abs() < MASS_TOL * density.max(1.0)
                    });
                    let full = (b - a - TAU).abs() < ANGLE_TOL;
                    if !partner && !full {
                        return Err(Error::InvalidMeasure(format!(
                            "arc {i} has no antipodal translate"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// `μ̂(k) = ∫ z^k dμ(z)`.
    pub fn fourier_moment(&self, k: i32) -> Complex64 {
        match self {
            DirectionMeasure::Lebesgue => {
                if k == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            DirectionMeasure::Atomic { atoms, weights } => atoms
                .iter()
                .zip(weights)
                .map(|(&t, &w)| Complex64::from_polar(w, k as f64 * t))
                .sum(),
            DirectionMeasure::ArcUniform { arcs, weights } => arcs
                .iter()
                .zip(weights)
                .map(|(&[a, b], &w)| {
                    if k == 0 {
                        Complex64::new(w, 0.0)
                    } else {
                        let kf = k as f64;
                        let diff =
                            Complex64::from_polar(1.0, kf * b) - Complex64::from_polar(1.0, kf * a);
                        diff / Complex64::new(0.0, kf) * (w / (b - a))
                    }
                })
                .sum(),
        }
    }

    pub fn moment_matrix(&self) -> MomentMatrix {
        MomentMatrix::from_moment(self.fourier_moment(2))
    }

    pub fn is_degenerate(&self) -> bool {
        self.moment_matrix().degenerate
    }

    /// `r(w)`; for Lebesgue this is `J₀(2π|w|)`.
    pub fn covariance(&self, w: [f64; 2]) -> f64 {
        match self {
            DirectionMeasure::Lebesgue => bessel::j0(TAU * w[0].hypot(w[1])),
            DirectionMeasure::Atomic { atoms, weights } => atoms
                .iter()
                .zip(weights)
                .map(|(&t, &m)| m * (TAU * (w[0] * t.cos() + w[1] * t.sin())).cos())
                .sum(),
            DirectionMeasure::ArcUniform { arcs, weights } => arcs
                .iter()
                .zip(weights)
                .map(|(&[a, b], &m)| {
                    let f = |t: f64| (TAU * (w[0] * t.cos() + w[1] * t.sin())).cos();
                    m / (b - a) * arc_integral(f, a, b)
                })
                .sum(),
        }
    }

    /// Gradient and Hessian of `r` at `w`.
    pub fn covariance_derivatives(&self, w: [f64; 2]) -> ([f64; 2], [[f64; 2]; 2]) {
        let four_pi2 = TAU * TAU;
        match self {
            DirectionMeasure::Lebesgue => {
                let rho = w[0].hypot(w[1]);
                let z = TAU * rho;
                let j1x = bessel::j1_over_x(z);
                let grad = [-four_pi2 * j1x * w[0], -four_pi2 * j1x * w[1]];
                // radial profile: f'/ρ = −4π² J₁(z)/z, f'' = −4π² (J₀(z) − J₁(z)/z)
                let tangential = -four_pi2 * j1x;
                let radial = -four_pi2 * (bessel::j0(z) - j1x);
                let (ux, uy) = if rho > 0.0 {
                    (w[0] / rho, w[1] / rho)
                } else {
                    (1.0, 0.0)
                };
                let d = radial - tangential;
                let hess = [
                    [tangential + d * ux * ux, d * ux * uy],
                    [d * ux * uy, tangential + d * uy * uy],
                ];
                (grad, hess)
            }
            DirectionMeasure::Atomic { atoms, weights } => {
                let mut g = [0.0; 2];
                let mut h = [[0.0; 2]; 2];
                for (&t, &m) in atoms.iter().zip(weights) {
                    let u = [t.cos(), t.sin()];
                    let phase = TAU * (w[0] * u[0] + w[1] * u[1]);
                    let (s, c) = phase.sin_cos();
                    for i in 0..2 {
                        g[i] -= m * TAU * u[i] * s;
                        for j in 0..2 {
                            h[i][j] -= m * four_pi2 * u[i] * u[j] * c;
                        }
                    }
                }
                (g, h)
            }
            DirectionMeasure::ArcUniform { arcs, weights } => {
                let mut g = [0.0; 2];
                let mut h = [[0.0; 2]; 2];
                for (&[a, b], &m) in arcs.iter().zip(weights) {
                    let density = m / (b - a);
                    let phase = |t: f64| TAU * (w[0] * t.cos() + w[1] * t.sin());
                    let gx = arc_integral(|t| t.cos() * phase(t).sin(), a, b);
                    let gy = arc_integral(|t| t.sin() * phase(t).sin(), a, b);
                    let hxx = arc_integral(|t| t.cos() * t.cos() * phase(t).cos(), a, b);
                    let hxy = arc_integral(|t| t.cos() * t.sin() * phase(t).cos(), a, b);
                    let hyy = arc_integral(|t| t.sin() * t.sin() * phase(t).cos(), a, b);
                    g[0] -= density * TAU * gx;
                    g[1] -= density * TAU * gy;
                    h[0][0] -= density * four_pi2 * hxx;
                    h[0][1] -= density * four_pi2 * hxy;
                    h[1][1] -= density * four_pi2 * hyy;
                }
                h[1][0] = h[0][1];
                (g, h)
            }
        }
    }
}

fn arc_integral<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    integrate(f, a, b, ARC_ABS_TOL * 1e-2, 0.0, 4000).value
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn four_atoms() -> DirectionMeasure {
        DirectionMeasure::atomic(vec![0.0, PI / 2.0, PI, 1.5 * PI], vec![0.25; 4]).unwrap()
    }

    fn axis_pair() -> DirectionMeasure {
        DirectionMeasure::atomic(vec![0.0, PI], vec![0.5, 0.5]).unwrap()
    }

    // Dense midpoint discretization, the oracle for arcs and Lebesgue.
    fn dense(mu: &DirectionMeasure, n: usize) -> DirectionMeasure {
        let mut atoms = Vec::new();
        let mut weights = Vec::new();
        match mu {
            DirectionMeasure::Lebesgue => {
                for k in 0..n {
                    atoms.push((k as f64 + 0.5) * TAU / n as f64);
                    weights.push(1.0 / n as f64);
                }
            }
            DirectionMeasure::ArcUniform { arcs, weights: w } => {
                let per = n / arcs.len();
                for (&[a, b], &m) in arcs.iter().zip(w) {
                    for k in 0..per {
                        atoms.push(a + (k as f64 + 0.5) * (b - a) / per as f64);
                        weights.push(m / per as f64);
                    }
                }
            }
            DirectionMeasure::Atomic { .. } => return mu.clone(),
        }
        DirectionMeasure::Atomic { atoms, weights }
    }

    #[test]
    fn moment_examples() {
        assert_eq!(
            DirectionMeasure::Lebesgue.fourier_moment(2),
            Complex64::new(0.0, 0.0)
        );
        assert!(four_atoms().fourier_moment(2).norm() < 1e-15);
        assert!((four_atoms().fourier_moment(4) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn eight_arc_second_moment() {
        let m = DirectionMeasure::eight_arc().fourier_moment(2);
        // quadrature oracle over the two arcs
        let re =
            2.0 * integrate(|t| (2.0 * t).cos(), 0.0, PI / 4.0, 1e-14, 0.0, 100).value * (2.0 / PI);
        let im =
            2.0 * integrate(|t| (2.0 * t).sin(), 0.0, PI / 4.0, 1e-14, 0.0, 100).value * (2.0 / PI);
        assert!((m.re - re).abs() < 1e-13 && (m.im - im).abs() < 1e-13);
        assert!((m.re - 2.0 / PI).abs() < 1e-14 && (m.im - 2.0 / PI).abs() < 1e-14);
        assert!(m.norm() < 1.0);
    }

    #[test]
    fn covariance_examples() {
        for mu in [
            DirectionMeasure::Lebesgue,
            four_atoms(),
            DirectionMeasure::eight_arc(),
        ] {
            assert!((mu.covariance([0.0, 0.0]) - 1.0).abs() < 1e-12);
        }
        // J₀(2π), 30-digit reference value
        assert!(
            (DirectionMeasure::Lebesgue.covariance([1.0, 0.0]) - 0.220_276_908_539_934).abs()
                < 1e-9
        );
        for t in [0.1, 0.37, 2.5] {
            assert!((axis_pair().covariance([t, 0.0]) - (TAU * t).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn derivative_examples() {
        for mu in [
            DirectionMeasure::Lebesgue,
            four_atoms(),
            DirectionMeasure::eight_arc(),
        ] {
            let (g, h) = mu.covariance_derivatives([0.0, 0.0]);
            assert!(g[0].abs() < 1e-14 && g[1].abs() < 1e-14);
            let l = mu.moment_matrix().l;
            for i in 0..2 {
                for j in 0..2 {
                    assert!((h[i][j] + TAU * TAU * l[i][j]).abs() < 1e-9, "{mu:?}");
                }
            }
        }
        let (_, h) = axis_pair().covariance_derivatives([0.0, 0.0]);
        assert!((h[0][0] + 4.0 * PI * PI).abs() < 1e-12);
        assert!(h[1][1].abs() < 1e-12 && h[0][1].abs() < 1e-12);
    }

    #[test]
    fn moment_matrix_examples() {
        let l = DirectionMeasure::Lebesgue.moment_matrix();
        assert_eq!(l.l, [[0.5, 0.0], [0.0, 0.5]]);
        assert!(!l.degenerate);
        let a = axis_pair().moment_matrix();
        assert!((a.alpha - 1.0).abs() < 1e-15 && a.degenerate);
        let e = DirectionMeasure::eight_arc().moment_matrix();
        let m2 = DirectionMeasure::eight_arc().fourier_moment(2);
        assert!((e.det - 0.25 * (1.0 - m2.norm_sqr())).abs() < 1e-15);
    }

    #[test]
    fn covariance_matches_dense_discretization() {
        for mu in [DirectionMeasure::Lebesgue, DirectionMeasure::eight_arc()] {
            let d = dense(&mu, 4096);
            for i in 0..20 {
                let t = i as f64 * 0.37;
                let w = [
                    4.0 * (t.cos()) * (i as f64 / 20.0),
                    4.0 * t.sin() * (i as f64 / 20.0),
                ];
                let diff = (mu.covariance(w) - d.covariance(w)).abs();
                assert!(diff < 1e-6, "{mu:?} at {w:?}: {diff}");
            }
        }
    }

    #[test]
    fn rejects_asymmetric_or_unnormalized() {
        assert!(DirectionMeasure::atomic(vec![0.0], vec![1.0]).is_err());
        assert!(DirectionMeasure::atomic(vec![0.0, PI], vec![0.5, 0.4]).is_err());
        assert!(DirectionMeasure::eighth_arcs(&[1, 2]).is_err());
        assert!(DirectionMeasure::eighth_arcs(&[2, 6]).is_ok());
    }

    #[test]
    fn json_round_trip() {
        for mu in [
            DirectionMeasure::Lebesgue,
            four_atoms(),
            DirectionMeasure::eight_arc(),
        ] {
            let s = serde_json::to_string(&mu).unwrap();
            let back: DirectionMeasure = serde_json::from_str(&s).unwrap();
            assert_eq!(back, mu);
        }
        let s = serde_json::to_string(&DirectionMeasure::Lebesgue).unwrap();
        assert_eq!(s, r#"{"type":"lebesgue"}"#);
    }

    fn arb_measure() -> impl Strategy<Value = DirectionMeasure> {
        prop_oneof![
            Just(DirectionMeasure::Lebesgue),
            Just(DirectionMeasure::eight_arc()),
            prop::collection::vec((0.0..PI, 0.1f64..1.0), 1..8).prop_map(|pairs| {
                let total: f64 = pairs.iter().map(|p| 2.0 * p.1).sum();
                let mut atoms = Vec::new();
                let mut weights = Vec::new();
                for (t, w) in pairs {
                    atoms.extend([t, t + PI]);
                    weights.extend([w / total, w / total]);
                }
                DirectionMeasure::Atomic { atoms, weights }
            }),
        ]
    }

    proptest! {
        #[test]
        fn odd_moments_vanish(mu in arb_measure()) {
            for k in (1..=15).step_by(2) {
                prop_assert!(mu.fourier_moment(k).norm() <= 1e-12);
            }
            prop_assert!((mu.fourier_moment(0) - 1.0).norm() <= 1e-12);
            for k in 0..16 {
                prop_assert!(mu.fourier_moment(k).norm() <= 1.0 + 1e-12);
            }
        }

        #[test]
        fn moment_matrix_is_psd_with_unit_trace(mu in arb_measure()) {
            let m = mu.moment_matrix();
            prop_assert!((m.trace() - 1.0).abs() <= 1e-14);
            prop_assert!(m.det >= -1e-15);
            prop_assert!(m.l[0][0] >= 0.0 && m.l[1][1] >= 0.0);
        }

        #[test]
        fn derivatives_match_finite_differences(
            mu in arb_measure(),
            x in -2.0f64..2.0,
            y in -2.0f64..2.0,
        ) {
            let step = 1e-4;
            let (g, h) = mu.covariance_derivatives([x, y]);
            let scale = TAU * TAU;
            for i in 0..2 {
                let mut p = [x, y];
                let mut q = [x, y];
                p[i] += step;
                q[i] -= step;
                let fd = (mu.covariance(p) - mu.covariance(q)) / (2.0 * step);
                prop_assert!((fd - g[i]).abs() <= 1e-4 * scale, "grad {i}: {fd} vs {}", g[i]);
                let (gp, _) = mu.covariance_derivatives(p);
                let (gq, _) = mu.covariance_derivatives(q);
                for j in 0..2 {
                    let fd2 = (gp[j] - gq[j]) / (2.0 * step);
                    prop_assert!((fd2 - h[i][j]).abs() <= 1e-4 * scale, "hess {i}{j}: {fd2} vs {}", h[i][j]);
                }
            }
        }
    }
}

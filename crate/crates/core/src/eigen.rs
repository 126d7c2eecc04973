//! Toral Laplace eigenfunctions `f(x) = Σ_{|ξ|²=λ} a_ξ e(⟨ξ, x⟩)` and their
//! Planck-scale windows `F_x(y) = f(x + R y/√λ)`, `y ∈ [−½, ½]²`.

use std::borrow::Cow;
use std::collections::HashMap;
use std::f64::consts::TAU;

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::field::{GridSampler, PlanarField, TrigSum};
use crate::lattice::{lattice_points, multiplicity, LatticePoint};
use crate::measure::DirectionMeasure;

const SYMMETRY_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-12;
const IMAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub xi: [i64; 2],
    pub re: f64,
    pub im: f64,
}

impl Coefficient {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    lambda: u64,
    coefficients: Vec<Coefficient>,
}

/// A validated eigenfunction: Hermitian, unit `L²` norm, frequencies on the
/// circle `|ξ|² = λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub struct EigenfunctionSpec {
    lambda: u64,
    coefficients: Vec<Coefficient>,
    /// One term per pair `{ξ, −ξ}`, wave vectors `2πξ`.
    folded: TrigSum,
}

impl TryFrom<SpecJson> for EigenfunctionSpec {
    type Error = Error;
    fn try_from(j: SpecJson) -> Result<Self> {
        EigenfunctionSpec::new(j.lambda, j.coefficients)
    }
}

impl From<EigenfunctionSpec> for SpecJson {
    fn from(s: EigenfunctionSpec) -> Self {
        SpecJson {
            lambda: s.lambda,
            coefficients: s.coefficients,
        }
    }
}

impl EigenfunctionSpec {
    pub fn new(lambda: u64, coefficients: Vec<Coefficient>) -> Result<Self> {
        if lambda == 0 {
            return Err(invalid("lambda must be >= 1"));
        }
        let mut by_xi: HashMap<[i64; 2], Complex64> = HashMap::new();
        for c in &coefficients {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(invalid(format!("non-finite coefficient at {:?}", c.xi)));
            }
            let n = c.xi[0] * c.xi[0] + c.xi[1] * c.xi[1];
            if n as u64 != lambda {
                return Err(invalid(format!("|{:?}|^2 = {n} != lambda {lambda}", c.xi)));
            }
            if by_xi.insert(c.xi, c.value()).is_some() {
                return Err(invalid(format!("duplicate frequency {:?}", c.xi)));
            }
        }
        for (xi, a) in &by_xi {
            let partner = by_xi.get(&[-xi[0], -xi[1]]).copied().unwrap_or_default();
            if (partner - a.conj()).norm() > SYMMETRY_TOL {
                return Err(invalid(format!(
                    "coefficient at {xi:?} breaks a_(-xi) = conj(a_xi)"
                )));
            }
        }
        let norm: f64 = coefficients.iter().map(|c| c.value().norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        let mut coefficients = coefficients;
        coefficients.sort_by(|a, b| {
            crate::lattice::angle_cmp(
                &LatticePoint::new(a.xi[0], a.xi[1]),
                &LatticePoint::new(b.xi[0], b.xi[1]),
            )
        });
        let folded = fold(&coefficients);
        Ok(Self {
            lambda,
            coefficients,
            folded,
        })
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn coefficients(&self) -> &[Coefficient] {
        &self.coefficients
    }

    /// The real trigonometric sum with one term per antipodal pair.
    pub fn trig_sum(&self) -> &TrigSum {
        &self.folded
    }

    /// `f(x)` in real arithmetic.
    pub fn evaluate(&self, x: [f64; 2]) -> f64 {
        self.folded.value(x)
    }

    /// `f(x)` summed over every coefficient in complex arithmetic.
    pub fn evaluate_complex(&self, x: [f64; 2]) -> Complex64 {
        self.coefficients
            .iter()
            .map(|c| {
                c.value()
                    * Complex64::from_polar(
                        1.0,
                        TAU * (c.xi[0] as f64 * x[0] + c.xi[1] as f64 * x[1]),
                    )
            })
            .sum()
    }

    /// `f(x)` after confirming the imaginary residue is negligible.
    pub fn evaluate_checked(&self, x: [f64; 2]) -> Result<f64> {
        let z = self.evaluate_complex(x);
        if z.im.abs() > IMAG_TOL {
            return Err(Error::Internal(format!(
                "imaginary residue {} at {x:?}",
                z.im
            )));
        }
        Ok(z.re)
    }

    pub fn evaluate_gradient(&self, x: [f64; 2]) -> [f64; 2] {
        self.folded.gradient(x)
    }

    /// `max_ξ |a_ξ|² · N^{1−ε}`; flat at level `ε` iff at most 100.
    pub fn flatness_margin(&self, epsilon: f64) -> f64 {
        let n = lattice_points(self.lambda).len() as f64;
        let max = self
            .coefficients
            .iter()
            .map(|c| c.value().norm_sqr())
            .fold(0.0, f64::max);
        max * n.powf(1.0 - epsilon)
    }

    /// The spec with `a_ξ` replaced by `a_ξ e(⟨ξ, τ⟩)`, i.e. `f(· + τ)`.
    pub fn translated(&self, tau: [f64; 2]) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .map(|c| {
                let z = c.value()
                    * Complex64::from_polar(
                        1.0,
                        TAU * (c.xi[0] as f64 * tau[0] + c.xi[1] as f64 * tau[1]),
                    );
                Coefficient {
                    xi: c.xi,
                    re: z.re,
                    im: z.im,
                }
            })
            .collect();
        Self::new(self.lambda, coefficients).expect("phase shifts preserve validity")
    }

    /// The direction measure with atoms at `ξ/√λ` and weights `|a_ξ|²`.
    pub fn spectral_measure(&self) -> Result<DirectionMeasure> {
        let norm: f64 = self.coefficients.iter().map(|c| c.value().norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        let (atoms, weights) = self
            .coefficients
            .iter()
            .filter(|c| c.value().norm_sqr() > 0.0)
            .map(|c| {
                (
                    LatticePoint::new(c.xi[0], c.xi[1]).angle(),
                    c.value().norm_sqr(),
                )
            })
            .unzip();
        DirectionMeasure::atomic(atoms, weights)
    }

    /// The window field `F_x` at scale `R`.
    pub fn restrict(&self, window: PlanckWindow) -> Result<Restriction<'_>> {
        if !(window.r >= 1.0) || !window.r.is_finite() {
            return Err(invalid(format!(
                "window scale R must be >= 1, got {}",
                window.r
            )));
        }
        let s = window.r / (self.lambda as f64).sqrt();
        let folded = self.folded.shifted(window.center).scaled(s);
        Ok(Restriction {
            spec: self,
            window,
            s,
            folded,
        })
    }
}

fn fold(coefficients: &[Coefficient]) -> TrigSum {
    // keep the representative with positive angle in [0, π)
    let mut k = Vec::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for c in coefficients {
        let p = LatticePoint::new(c.xi[0], c.xi[1]);
        let upper = p.x2 > 0 || (p.x2 == 0 && p.x1 > 0);
        if !upper {
            continue;
        }
        k.push([TAU * p.x1 as f64, TAU * p.x2 as f64]);
        a.push(2.0 * c.re);
        b.push(-2.0 * c.im);
    }
    TrigSum::new(k, a, b)
}

impl PlanarField for EigenfunctionSpec {
    fn value(&self, p: [f64; 2]) -> f64 {
        self.evaluate(p)
    }

    fn gradient(&self, p: [f64; 2]) -> [f64; 2] {
        self.evaluate_gradient(p)
    }

    fn hessian_bound(&self) -> Option<f64> {
        self.folded.hessian_bound()
    }

    fn grid_sampler<'a>(&'a self, xs: &'a [f64]) -> Box<dyn GridSampler + 'a> {
        self.folded.grid_sampler(xs)
    }

    fn as_trig_sum(&self) -> Option<Cow<'_, TrigSum>> {
        Some(Cow::Borrowed(&self.folded))
    }
}

/// Center `x ∈ [0,1)²` and scale `R ≥ 1` of a Planck window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanckWindow {
    pub center: [f64; 2],
    pub r: f64,
}

/// `F_x(y) = f(x + R y/√λ)`.
#[derive(Debug, Clone)]
pub struct Restriction<'a> {
    spec: &'a EigenfunctionSpec,
    window: PlanckWindow,
    /// `R/√λ`.
    s: f64,
    folded: TrigSum,
}

impl Restriction<'_> {
    pub fn window(&self) -> PlanckWindow {
        self.window
    }

    /// Side of the window in torus coordinates, `R/√λ`.
    pub fn physical_side(&self) -> f64 {
        self.s
    }

    fn to_torus(&self, y: [f64; 2]) -> [f64; 2] {
        [
            self.window.center[0] + self.s * y[0],
            self.window.center[1] + self.s * y[1],
        ]
    }
}

impl PlanarField for Restriction<'_> {
    fn value(&self, y: [f64; 2]) -> f64 {
        self.spec.evaluate(self.to_torus(y))
    }

    fn gradient(&self, y: [f64; 2]) -> [f64; 2] {
        let g = self.spec.evaluate_gradient(self.to_torus(y));
        [self.s * g[0], self.s * g[1]]
    }

    fn hessian_bound(&self) -> Option<f64> {
        self.folded.hessian_bound()
    }

    fn grid_sampler<'a>(&'a self, xs: &'a [f64]) -> Box<dyn GridSampler + 'a> {
        self.folded.grid_sampler(xs)
    }

    fn as_trig_sum(&self) -> Option<Cow<'_, TrigSum>> {
        Some(Cow::Borrowed(&self.folded))
    }
}

fn require_points(lambda: u64) -> Result<Vec<LatticePoint>> {
    if lambda == 0 {
        return Err(invalid("lambda must be >= 1"));
    }
    let n = multiplicity(lambda)?;
    if n == 0 {
        return Err(Error::NotRepresentable(lambda));
    }
    Ok(lattice_points(lambda).points)
}

/// All coefficients `1/√N`.
pub fn build_bourgain(lambda: u64) -> Result<EigenfunctionSpec> {
    let points = require_points(lambda)?;
    let a = 1.0 / (points.len() as f64).sqrt();
    let coefficients = points
        .iter()
        .map(|p| Coefficient {
            xi: [p.x1, p.x2],
            re: a,
            im: 0.0,
        })
        .collect();
    EigenfunctionSpec::new(lambda, coefficients)
}

/// Octant `1..=8` containing the angle of `p`, octant `k` being
/// `[(k−1)π/4, kπ/4)`. Exact integer arithmetic.
pub fn octant(p: LatticePoint) -> usize {
    let (x, y) = (p.x1, p.x2);
    let (q, xr, yr) = if x > 0 && y >= 0 {
        (0, x, y)
    } else if x <= 0 && y > 0 {
        (1, y, -x)
    } else if x < 0 && y <= 0 {
        (2, -x, -y)
    } else {
        (3, -y, x)
    };
    let sub = if yr < xr { 0 } else { 1 };
    2 * q + sub + 1
}

/// Equal coefficients on the lattice points in the chosen octants (an
/// antipodally closed set), renormalized to unit `L²` norm.
pub fn build_arc_bourgain(lambda: u64, arcs: &[usize]) -> Result<EigenfunctionSpec> {
    let points = require_points(lambda)?;
    if arcs.is_empty() {
        return Err(invalid("empty arc selection"));
    }
    if let Some(k) = arcs.iter().find(|k| !(1..=8).contains(*k)) {
        return Err(invalid(format!("arc index {k} outside 1..=8")));
    }
    for &k in arcs {
        let opposite = (k + 3) % 8 + 1;
        if !arcs.contains(&opposite) {
            return Err(invalid(format!(
                "arc {k} selected without its antipodal arc {opposite}"
            )));
        }
    }
    let chosen: Vec<LatticePoint> = points
        .into_iter()
        .filter(|p| arcs.contains(&octant(*p)))
        .collect();
    if chosen.is_empty() {
        return Err(invalid(format!(
            "no lattice point of lambda={lambda} lies in arcs {arcs:?}"
        )));
    }
    let a = 1.0 / (chosen.len() as f64).sqrt();
    let coefficients = chosen
        .iter()
        .map(|p| Coefficient {
            xi: [p.x1, p.x2],
            re: a,
            im: 0.0,
        })
        .collect();
    EigenfunctionSpec::new(lambda, coefficients)
}

/// `√2 cos(2πm x₁)`: coefficients `1/√2` at `(±m, 0)`, `λ = m²`.
pub fn build_cos_line(m: u64) -> Result<EigenfunctionSpec> {
    if m == 0 {
        return Err(invalid("m must be >= 1"));
    }
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let m = m as i64;
    EigenfunctionSpec::new(
        (m * m) as u64,
        vec![
            Coefficient {
                xi: [m, 0],
                re: a,
                im: 0.0,
            },
            Coefficient {
                xi: [-m, 0],
                re: a,
                im: 0.0,
            },
        ],
    )
}

/// Random phases and moderately varying magnitudes on every antipodal pair.
pub fn build_random_flat(lambda: u64, epsilon: f64, seed: u64) -> Result<EigenfunctionSpec> {
    let points = require_points(lambda)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let upper: Vec<&LatticePoint> = points
        .iter()
        .filter(|p| p.x2 > 0 || (p.x2 == 0 && p.x1 > 0))
        .collect();
    let draws: Vec<(f64, f64)> = upper
        .iter()
        .map(|_| (rng.random_range(0.5..1.5), rng.random_range(0.0..TAU)))
        .collect();
    let total: f64 = 2.0 * draws.iter().map(|d| d.0).sum::<f64>();
    let mut coefficients = Vec::with_capacity(points.len());
    for (p, (w, phi)) in upper.iter().zip(&draws) {
        let z = Complex64::from_polar((w / total).sqrt(), *phi);
        coefficients.push(Coefficient {
            xi: [p.x1, p.x2],
            re: z.re,
            im: z.im,
        });
        coefficients.push(Coefficient {
            xi: [-p.x1, -p.x2],
            re: z.re,
            im: -z.im,
        });
    }
    let spec = EigenfunctionSpec::new(lambda, coefficients)?;
    let margin = spec.flatness_margin(epsilon);
    if margin > 100.0 {
        return Err(invalid(format!(
            "no flat spec at epsilon={epsilon} for lambda={lambda} (margin {margin})"
        )));
    }
    Ok(spec)
}

/// Values of `f` on the tensor grid, rows indexed by `y`.
pub fn evaluate_grid(spec: &EigenfunctionSpec, xs: &[f64], ys: &[f64]) -> Array2<f64> {
    spec.grid_sampler(xs).sample(ys)
}

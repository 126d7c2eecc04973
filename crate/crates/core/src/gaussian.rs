//! Stationary Gaussian fields `F(y) = Σ_k √(2w_k)(a_k cos 2πR⟨u_k, y⟩ +
//! b_k sin 2πR⟨u_k, y⟩)` with one term per antipodal atom pair, and Monte
//! Carlo statistics of their nodal length on a unit square.

use std::borrow::Cow;
use std::f64::consts::{PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::field::{GridSampler, PlanarField, TrigSum};
use crate::measure::DirectionMeasure;
use crate::nodal::{nodal_length, NodalOptions, Region};
use crate::rng::stream_seed;

/// Equal-mass discretization with `n_atoms` atoms in antipodal pairs.
///
/// A half-open half circle starting at `−π/n` carries mass ½; it is cut into
/// `n/2` strata of mass `1/n` and each stratum contributes the atom at its
/// mass midpoint, together with the antipodal copy. Atomic input is
/// returned unchanged.
pub fn discretize_measure(mu: &DirectionMeasure, n_atoms: usize) -> Result<DirectionMeasure> {
    if n_atoms < 4 || !n_atoms.is_multiple_of(2) {
        return Err(invalid(format!(
            "n_atoms must be even and at least 4, got {n_atoms}"
        )));
    }
    mu.validate()?;
    if mu.is_degenerate() {
        return Err(Error::Degenerate("measure is supported on a line".into()));
    }
    let n = n_atoms as f64;
    let half: Vec<f64> = match mu {
        DirectionMeasure::Atomic { .. } => return Ok(mu.clone()),
        DirectionMeasure::Lebesgue => (0..n_atoms / 2).map(|k| TAU * k as f64 / n).collect(),
        DirectionMeasure::ArcUniform { arcs, weights } => {
            let theta0 = -PI / n;
            let pieces = window_pieces(arcs, weights, theta0);
            let cdf = |t: f64| -> f64 {
                pieces
                    .iter()
                    .map(|&(lo, hi, d)| d * (t.min(hi) - lo).max(0.0))
                    .sum()
            };
            let total = cdf(theta0 + PI);
            if (total - 0.5).abs() > 1e-9 {
                return Err(Error::InvalidMeasure(format!(
                    "half circle carries mass {total}, not 1/2"
                )));
            }
            (0..n_atoms / 2)
                .map(|k| {
                    let target = (k as f64 + 0.5) / n;
                    let (mut lo, mut hi) = (theta0, theta0 + PI);
                    for _ in 0..100 {
                        let mid = 0.5 * (lo + hi);
                        if cdf(mid) < target {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    0.5 * (lo + hi)
                })
                .collect()
        }
    };
    let mut atoms = Vec::with_capacity(n_atoms);
    for &t in &half {
        atoms.push(t.rem_euclid(TAU));
    }
    for &t in &half {
        atoms.push((t + PI).rem_euclid(TAU));
    }
    DirectionMeasure::atomic(atoms, vec![1.0 / n; n_atoms])
}

/// Arc pieces `(lo, hi, density)` inside `[θ₀, θ₀ + π)`.
fn window_pieces(arcs: &[[f64; 2]], weights: &[f64], theta0: f64) -> Vec<(f64, f64, f64)> {
    let end = theta0 + PI;
    let mut out = Vec::new();
    for (&[a, b], &w) in arcs.iter().zip(weights) {
        let d = w / (b - a);
        let start = theta0 + (a - theta0).rem_euclid(TAU);
        let stop = start + (b - a);
        for (lo, hi) in [(start, stop), (start - TAU, stop - TAU)] {
            let (lo, hi) = (lo.max(theta0), hi.min(end));
            if hi > lo {
                out.push((lo, hi, d));
            }
        }
    }
    out
}

/// One realization at scale `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub r: f64,
    /// Unit frequency per antipodal pair, angle in `[0, π)`.
    pub frequencies: Vec<[f64; 2]>,
    /// `√(2w)` per pair.
    pub amplitudes: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    trig: TrigSum,
}

impl FieldSample {
    pub fn trig_sum(&self) -> &TrigSum {
        &self.trig
    }
}

impl PlanarField for FieldSample {
    fn value(&self, p: [f64; 2]) -> f64 {
        self.trig.value(p)
    }

    fn gradient(&self, p: [f64; 2]) -> [f64; 2] {
        self.trig.gradient(p)
    }

    fn hessian_bound(&self) -> Option<f64> {
        self.trig.hessian_bound()
    }

    fn grid_sampler<'a>(&'a self, xs: &'a [f64]) -> Box<dyn GridSampler + 'a> {
        self.trig.grid_sampler(xs)
    }

    fn as_trig_sum(&self) -> Option<Cow<'_, TrigSum>> {
        Some(Cow::Borrowed(&self.trig))
    }
}

/// Draws a realization for a symmetric atomic `mu`.
pub fn sample_field(mu: &DirectionMeasure, r: f64, seed: u64) -> Result<FieldSample> {
    let DirectionMeasure::Atomic { atoms, weights } = mu else {
        return Err(Error::InvalidMeasure(
            "sampling needs an atomic measure; discretize first".into(),
        ));
    };
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid(format!("R must be positive, got {r}")));
    }
    mu.validate()?;
    if mu.is_degenerate() {
        return Err(Error::Degenerate("measure is supported on a line".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut frequencies = Vec::new();
    let mut amplitudes = Vec::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (&t, &w) in atoms.iter().zip(weights) {
        if t.rem_euclid(TAU) >= PI {
            continue;
        }
        frequencies.push([t.cos(), t.sin()]);
        amplitudes.push((2.0 * w).sqrt());
        a.push(StandardNormal.sample(&mut rng));
        b.push(StandardNormal.sample(&mut rng));
    }
    let trig = TrigSum::new(
        frequencies
            .iter()
            .map(|u| [TAU * r * u[0], TAU * r * u[1]])
            .collect(),
        amplitudes.iter().zip(&a).map(|(s, x)| s * x).collect(),
        amplitudes.iter().zip(&b).map(|(s, x)| s * x).collect(),
    );
    Ok(FieldSample {
        r,
        frequencies,
        amplitudes,
        a,
        b,
        trig,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McOptions {
    pub nodal: NodalOptions,
    /// Atoms used to discretize non-atomic measures.
    pub n_atoms: usize,
    /// Center of the unit square the length is measured on.
    pub offset: [f64; 2],
}

impl Default for McOptions {
    fn default() -> Self {
        Self {
            nodal: NodalOptions::default(),
            n_atoms: 256,
            offset: [0.0, 0.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub sample_index: usize,
    pub seed: u64,
    pub length: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McStatistics {
    pub r: f64,
    pub n_samples: usize,
    pub mean: f64,
    /// Unbiased sample variance of the length.
    pub variance: f64,
    /// `√(variance / n_samples)`.
    pub standard_error: f64,
    /// Standard error of `variance`, from the fourth central moment.
    pub variance_standard_error: f64,
    pub unconverged: usize,
    pub samples: Vec<SampleRecord>,
}

/// Summary statistics of a sample: mean, unbiased variance, standard error
/// of the mean and of the variance.
pub fn sample_moments(xs: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0, 0.0, 0.0);
    }
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    let var = m2 * n / (n - 1.0);
    let var_se = ((m4 - m2 * m2 * (n - 3.0) / (n - 1.0)).max(0.0) / n).sqrt();
    (mean, var, (var / n).sqrt(), var_se)
}

/// Nodal length of i.i.d. realizations on the unit square; sample `i` uses
/// seed `stream_seed(seed, i)`.
pub fn mc_nodal_statistics(
    mu: &DirectionMeasure,
    r: f64,
    n_samples: usize,
    opts: &McOptions,
    seed: u64,
) -> Result<McStatistics> {
    if n_samples < 30 {
        return Err(invalid(format!(
            "n_samples must be at least 30, got {n_samples}"
        )));
    }
    let atomic = discretize_measure(mu, opts.n_atoms)?;
    let region = Region::Square {
        center: opts.offset,
        half_side: 0.5,
    };
    let results: Vec<Result<SampleRecord>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let s = stream_seed(seed, i as u64);
            let field = sample_field(&atomic, r, s)?;
            let e = nodal_length(&field, &region, &opts.nodal)?;
            Ok(SampleRecord {
                sample_index: i,
                seed: s,
                length: e.length,
                converged: e.converged,
            })
        })
        .collect();
    let samples = results.into_iter().collect::<Result<Vec<_>>>()?;
    let lengths: Vec<f64> = samples.iter().map(|s| s.length).collect();
    let (mean, variance, standard_error, variance_standard_error) = sample_moments(&lengths);
    Ok(McStatistics {
        r,
        n_samples,
        mean,
        variance,
        standard_error,
        variance_standard_error,
        unconverged: samples.iter().filter(|s| !s.converged).count(),
        samples,
    })
}

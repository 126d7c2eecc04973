//! Log-integrability, small-value measure, and Planck-scale length
//! statistics.
//!
//! Zero detection is certified by the Taylor bound
//! `|f(x)| ≥ |f(c)| − |∇f(c)|ρ − ½‖∇²f(c)‖ρ² − ⅙Tρ³` on a cell of
//! circumradius `ρ`, with `T` a global third-derivative bound. Fields that
//! are not trigonometric sums use their global Hessian bound and `T = 0`.
//! Cells where the lower bound is not positive are "suspect".

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::EigenfunctionSpec;
use crate::error::{invalid, Result};
use crate::field::{PlanarField, TrigSum};
use crate::kac_rice::{physical_length_density, KacRiceInput};
use crate::nodal::{nodal_length_planck, NodalOptions, Region};
use crate::quadrature::{GL3_NODES, GL3_WEIGHTS};
use crate::rng::stream_rng;

/// Hard cap on dyadic subdivision below the base grid.
pub const MAX_DEPTH: u32 = 12;
/// Default relative target for `log_moment`.
pub const LOG_REL_TOL: f64 = 2e-2;
/// Small-value cells are leaves once the Hessian bound over the cell
/// satisfies `Hρ ≤ η|∇f(c)|`.
const SMALL_VALUE_ETA: f64 = 0.25;
const SMALL_VALUE_MAX_DEPTH: u32 = 8;
pub const HISTOGRAM_BINS: usize = 64;

/// Child lower-left offsets in units of the child side.
const CHILDREN: [(f64, f64); 4] = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub p: u32,
    pub value: f64,
    /// Base cells per side, or the nodal resolution for Monte Carlo moments.
    pub resolution: usize,
    pub subdivision_depth: u32,
    /// Depth comparison for quadrature, standard error for Monte Carlo.
    pub error_estimate: f64,
    pub converged: bool,
    /// Suspect leaves at the deepest level.
    pub suspect_leaves: u64,
    /// Monte Carlo sample count; zero for quadrature.
    pub n_samples: usize,
    pub unconverged: usize,
}

/// Lower-left corner and side of the integration square.
fn square_of(region: &Region) -> Result<([f64; 2], f64)> {
    match *region {
        Region::Square { center, half_side } if half_side > 0.0 => Ok((
            [center[0] - half_side, center[1] - half_side],
            2.0 * half_side,
        )),
        Region::FullTorus => Ok(([0.0, 0.0], 1.0)),
        _ => Err(invalid(
            "region must be a square with positive side or the full torus",
        )),
    }
}

/// Center data of a cell.
#[derive(Debug, Clone, Copy)]
struct Jet {
    f0: f64,
    g: [f64; 2],
    /// Hessian norm at the center, or a global bound.
    hess: f64,
    /// Bound on third directional derivatives.
    third: f64,
}

impl Jet {
    fn grad_norm(&self) -> f64 {
        self.g[0].hypot(self.g[1])
    }

    /// `(lower, upper)` bounds on `|f|` over the cell.
    fn bounds(&self, rho: f64) -> (f64, f64) {
        let slack =
            self.grad_norm() * rho + 0.5 * self.hess * rho * rho + self.third * rho.powi(3) / 6.0;
        (self.f0.abs() - slack, self.f0.abs() + slack)
    }

    /// Bound on the Hessian norm anywhere in the cell.
    fn cell_hessian(&self, rho: f64) -> f64 {
        self.hess + self.third * rho
    }
}

/// Depth-first cell walker. State for the cell currently visited at each
/// level lives in a per-task scratch, so descending never allocates.
trait CellEval: Sync {
    type Scratch: Send;

    fn scratch(&self, max_depth: u32) -> Self::Scratch;
    fn set_root(&self, s: &mut Self::Scratch, x0: [f64; 2]);
    /// Moves level `level + 1` to child `which` of the cell at `level`.
    fn set_child(&self, s: &mut Self::Scratch, level: u32, which: usize);
    fn jet(&self, s: &Self::Scratch, level: u32) -> Jet;
    /// Values at the 3×3 Gauss nodes, index `3i + j` for node `(uᵢ, vⱼ)`.
    fn gauss_values(&self, s: &Self::Scratch, level: u32) -> [f64; 9];
}

struct Generic<'a, F: ?Sized> {
    field: &'a F,
    hess: f64,
    h0: f64,
}

impl<F: PlanarField + ?Sized> CellEval for Generic<'_, F> {
    /// Lower-left corner per level.
    type Scratch = Vec<[f64; 2]>;

    fn scratch(&self, max_depth: u32) -> Self::Scratch {
        vec![[0.0; 2]; max_depth as usize + 1]
    }

    fn set_root(&self, s: &mut Self::Scratch, x0: [f64; 2]) {
        s[0] = x0;
    }

    fn set_child(&self, s: &mut Self::Scratch, level: u32, which: usize) {
        let h = self.h0 / f64::powi(2.0, level as i32 + 1);
        let (dx, dy) = CHILDREN[which];
        let p = s[level as usize];
        s[level as usize + 1] = [p[0] + dx * h, p[1] + dy * h];
    }

    fn jet(&self, s: &Self::Scratch, level: u32) -> Jet {
        let h = self.h0 / f64::powi(2.0, level as i32);
        let p = s[level as usize];
        let c = [p[0] + 0.5 * h, p[1] + 0.5 * h];
        Jet {
            f0: self.field.value(c),
            g: self.field.gradient(c),
            hess: self.hess,
            third: 0.0,
        }
    }

    fn gauss_values(&self, s: &Self::Scratch, level: u32) -> [f64; 9] {
        let h = self.h0 / f64::powi(2.0, level as i32);
        let p = s[level as usize];
        let mut out = [0.0; 9];
        for (i, u) in GL3_NODES.iter().enumerate() {
            for (j, v) in GL3_NODES.iter().enumerate() {
                out[3 * i + j] = self
                    .field
                    .value([p[0] + 0.5 * h * (1.0 + u), p[1] + 0.5 * h * (1.0 + v)]);
            }
        }
        out
    }
}

/// Trigonometric sums in phase form: `f = Re Σ c_j z_j` with
/// `c_j = A_j − iB_j` and `z_j = e^{i⟨k_j, center⟩}`. Moving to a child or a
/// Gauss node multiplies `z_j` by a precomputed per-level phase.
struct Trig<'a> {
    k: &'a [[f64; 2]],
    c: Vec<Complex64>,
    third: f64,
    h0: f64,
    /// `[level][term][child]`.
    child_shift: Vec<Vec<[Complex64; 4]>>,
    /// `[level][term][node]`.
    node_shift: Vec<Vec<[Complex64; 9]>>,
}

fn phase(k: [f64; 2], d: [f64; 2]) -> Complex64 {
    let (s, c) = (k[0] * d[0] + k[1] * d[1]).sin_cos();
    Complex64::new(c, s)
}

impl<'a> Trig<'a> {
    fn new(sum: &'a TrigSum, h0: f64, max_depth: u32) -> Self {
        let c = sum
            .a
            .iter()
            .zip(&sum.b)
            .map(|(a, b)| Complex64::new(*a, -*b))
            .collect::<Vec<_>>();
        let third = c
            .iter()
            .zip(&sum.k)
            .map(|(c, k)| c.norm() * k[0].hypot(k[1]).powi(3))
            .sum();
        let mut child_shift = Vec::new();
        let mut node_shift = Vec::new();
        for level in 0..=max_depth {
            let h = h0 / f64::powi(2.0, level as i32);
            child_shift.push(
                sum.k
                    .iter()
                    .map(|&k| {
                        CHILDREN
                            .map(|(dx, dy)| phase(k, [(dx - 0.5) * 0.5 * h, (dy - 0.5) * 0.5 * h]))
                    })
                    .collect(),
            );
            node_shift.push(
                sum.k
                    .iter()
                    .map(|&k| {
                        let mut out = [Complex64::new(1.0, 0.0); 9];
                        for (i, u) in GL3_NODES.iter().enumerate() {
                            for (j, v) in GL3_NODES.iter().enumerate() {
                                out[3 * i + j] = phase(k, [0.5 * h * u, 0.5 * h * v]);
                            }
                        }
                        out
                    })
                    .collect(),
            );
        }
        Self {
            k: &sum.k,
            c,
            third,
            h0,
            child_shift,
            node_shift,
        }
    }
}

impl CellEval for Trig<'_> {
    /// Center phases per level.
    type Scratch = Vec<Vec<Complex64>>;

    fn scratch(&self, max_depth: u32) -> Self::Scratch {
        vec![vec![Complex64::new(1.0, 0.0); self.k.len()]; max_depth as usize + 1]
    }

    fn set_root(&self, s: &mut Self::Scratch, x0: [f64; 2]) {
        let c = [x0[0] + 0.5 * self.h0, x0[1] + 0.5 * self.h0];
        for (z, &k) in s[0].iter_mut().zip(self.k) {
            *z = phase(k, c);
        }
    }

    fn set_child(&self, s: &mut Self::Scratch, level: u32, which: usize) {
        let l = level as usize;
        let (parent, child) = s.split_at_mut(l + 1);
        for ((z, p), sh) in child[0]
            .iter_mut()
            .zip(&parent[l])
            .zip(&self.child_shift[l])
        {
            *z = p * sh[which];
        }
    }

    fn jet(&self, s: &Self::Scratch, level: u32) -> Jet {
        let (mut f0, mut g, mut h) = (0.0, [0.0; 2], [0.0; 3]);
        for ((z, c), k) in s[level as usize].iter().zip(&self.c).zip(self.k) {
            let w = c * z;
            f0 += w.re;
            g[0] -= w.im * k[0];
            g[1] -= w.im * k[1];
            h[0] -= w.re * k[0] * k[0];
            h[1] -= w.re * k[0] * k[1];
            h[2] -= w.re * k[1] * k[1];
        }
        let mid = 0.5 * (h[0] + h[2]);
        let rad = (0.5 * (h[0] - h[2])).hypot(h[1]);
        Jet {
            f0,
            g,
            hess: mid.abs() + rad,
            third: self.third,
        }
    }

    fn gauss_values(&self, s: &Self::Scratch, level: u32) -> [f64; 9] {
        let l = level as usize;
        let mut out = [0.0; 9];
        for ((z, c), sh) in s[l].iter().zip(&self.c).zip(&self.node_shift[l]) {
            let w = c * z;
            for (o, e) in out.iter_mut().zip(sh) {
                *o += (w * e).re;
            }
        }
        out
    }
}

fn require_hessian<F: PlanarField + ?Sized>(field: &F) -> Result<f64> {
    match field.hessian_bound() {
        Some(h) if h.is_finite() && h >= 0.0 => Ok(h),
        _ => Err(invalid("field must supply a finite Hessian bound")),
    }
}

fn gauss_log(values: &[f64; 9], p: i32, h: f64) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let v = values[3 * i + j].abs().max(f64::MIN_POSITIVE);
            s += GL3_WEIGHTS[i] * GL3_WEIGHTS[j] * v.ln().abs().powi(p);
        }
    }
    0.25 * h * h * s
}

/// `(I_D, I_{D−1}, suspect leaves at depth D)` on the current cell.
fn log_cell<E: CellEval>(
    e: &E,
    s: &mut E::Scratch,
    level: u32,
    depth: u32,
    p: i32,
    h: f64,
) -> (f64, f64, u64) {
    let (lower, _) = e.jet(s, level).bounds(h * FRAC_1_SQRT_2);
    if lower > 0.0 || level == depth {
        let g = gauss_log(&e.gauss_values(s, level), p, h);
        return (g, g, u64::from(lower <= 0.0));
    }
    let (mut fine, mut coarse, mut suspect) = (0.0, 0.0, 0);
    for which in 0..4 {
        e.set_child(s, level, which);
        let (f, c, n) = log_cell(e, s, level + 1, depth, p, 0.5 * h);
        fine += f;
        coarse += c;
        suspect += n;
    }
    if level + 1 == depth {
        coarse = gauss_log(&e.gauss_values(s, level), p, h);
    }
    (fine, coarse, suspect)
}

/// Sums `per_cell` over the base grid with rows in parallel, reducing rows
/// in order so the result does not depend on the thread count.
fn sum_base_grid<E, T>(
    e: &E,
    origin: [f64; 2],
    h: f64,
    resolution: usize,
    max_depth: u32,
    per_cell: T,
) -> (f64, f64, u64)
where
    E: CellEval,
    T: Fn(&mut E::Scratch) -> (f64, f64, u64) + Sync,
{
    let rows: Vec<(f64, f64, u64)> = (0..resolution)
        .into_par_iter()
        .map(|j| {
            let mut s = e.scratch(max_depth);
            let mut acc = (0.0, 0.0, 0);
            for i in 0..resolution {
                e.set_root(&mut s, [origin[0] + i as f64 * h, origin[1] + j as f64 * h]);
                let r = per_cell(&mut s);
                acc = (acc.0 + r.0, acc.1 + r.1, acc.2 + r.2);
            }
            acc
        })
        .collect();
    rows.iter()
        .fold((0.0, 0.0, 0), |a, r| (a.0 + r.0, a.1 + r.1, a.2 + r.2))
}

/// Mean of `|log|f||^p` over the region at a fixed subdivision depth.
///
/// Suspect cells are refined to exactly `depth` levels below the base grid;
/// the error estimate is the change from stopping one level earlier.
pub fn log_moment_at_depth<F: PlanarField + ?Sized>(
    field: &F,
    p: u32,
    region: &Region,
    resolution: usize,
    depth: u32,
) -> Result<MomentReport> {
    if p < 1 {
        return Err(invalid("p must be at least 1"));
    }
    if resolution == 0 {
        return Err(invalid("resolution must be positive"));
    }
    if !(1..=MAX_DEPTH).contains(&depth) {
        return Err(invalid(format!("depth must lie in 1..={MAX_DEPTH}")));
    }
    let (origin, side) = square_of(region)?;
    let h = side / resolution as f64;
    let pi = p as i32;
    let (fine, coarse, suspect) = match field.as_trig_sum() {
        Some(sum) => {
            let e = Trig::new(&sum, h, depth);
            sum_base_grid(&e, origin, h, resolution, depth, |s| {
                log_cell(&e, s, 0, depth, pi, h)
            })
        }
        None => {
            let e = Generic {
                field,
                hess: require_hessian(field)?,
                h0: h,
            };
            sum_base_grid(&e, origin, h, resolution, depth, |s| {
                log_cell(&e, s, 0, depth, pi, h)
            })
        }
    };
    let area = side * side;
    let value = fine / area;
    let error_estimate = (fine - coarse).abs() / area;
    Ok(MomentReport {
        p,
        value,
        resolution,
        subdivision_depth: depth,
        error_estimate,
        converged: error_estimate <= LOG_REL_TOL * value,
        suspect_leaves: suspect,
        n_samples: 0,
        unconverged: 0,
    })
}

/// Mean of `|log|f||^p` over the region, deepening the subdivision until
/// two consecutive depth comparisons fall below `rel_tol · value` or the
/// depth cap is reached. A single small comparison is not trusted: at
/// shallow depth Gauss nodes can sit on exact zeros and both levels are
/// equally wrong. `error_estimate` is the larger of the two comparisons.
pub fn log_moment_to<F: PlanarField + ?Sized>(
    field: &F,
    p: u32,
    region: &Region,
    resolution: usize,
    rel_tol: f64,
) -> Result<MomentReport> {
    if !(rel_tol > 0.0) {
        return Err(invalid("rel_tol must be positive"));
    }
    let mut previous_error = log_moment_at_depth(field, p, region, resolution, 1)?.error_estimate;
    for depth in 2..=MAX_DEPTH {
        let mut report = log_moment_at_depth(field, p, region, resolution, depth)?;
        let raw = report.error_estimate;
        report.error_estimate = raw.max(previous_error);
        report.converged = report.error_estimate <= rel_tol * report.value;
        if report.converged || depth == MAX_DEPTH {
            return Ok(report);
        }
        previous_error = raw;
    }
    unreachable!("the loop returns at MAX_DEPTH")
}

/// `log_moment_to` at `LOG_REL_TOL`.
pub fn log_moment<F: PlanarField + ?Sized>(
    field: &F,
    p: u32,
    region: &Region,
    resolution: usize,
) -> Result<MomentReport> {
    log_moment_to(field, p, region, resolution, LOG_REL_TOL)
}

/// CDF of `g₁U + g₂V` with `U, V` uniform on `[−h/2, h/2]`: a trapezoid
/// density with plateau half-width `a − b` and support half-width `a + b`.
fn linear_cdf(s: f64, g: [f64; 2], h: f64) -> f64 {
    let (mut a, mut b) = (0.5 * h * g[0].abs(), 0.5 * h * g[1].abs());
    if b > a {
        std::mem::swap(&mut a, &mut b);
    }
    if a == 0.0 {
        return if s >= 0.0 { 1.0 } else { 0.0 };
    }
    let lower_tail = |t: f64| -> f64 {
        if t <= -(a + b) {
            0.0
        } else if t >= -(a - b) {
            0.5 + t / (2.0 * a)
        } else {
            (t + a + b).powi(2) / (8.0 * a * b)
        }
    };
    if s <= 0.0 {
        lower_tail(s)
    } else {
        1.0 - lower_tail(-s)
    }
}

/// Area of `{|f| ≤ δ}` in the current cell. The subdivision never looks at
/// `δ`, so the result is nondecreasing in `δ`.
fn small_value_cell<E: CellEval>(e: &E, s: &mut E::Scratch, level: u32, delta: f64, h: f64) -> f64 {
    let jet = e.jet(s, level);
    let rho = h * FRAC_1_SQRT_2;
    let leaf = jet.cell_hessian(rho) * rho <= SMALL_VALUE_ETA * jet.grad_norm()
        || level == SMALL_VALUE_MAX_DEPTH;
    if !leaf {
        let mut area = 0.0;
        for which in 0..4 {
            e.set_child(s, level, which);
            area += small_value_cell(e, s, level + 1, delta, 0.5 * h);
        }
        return area;
    }
    let (lower, upper) = jet.bounds(rho);
    if upper <= delta {
        h * h
    } else if lower > delta {
        0.0
    } else {
        h * h * (linear_cdf(delta - jet.f0, jet.g, h) - linear_cdf(-delta - jet.f0, jet.g, h))
    }
}

/// Fraction of the region where `|f| ≤ δ`.
///
/// Cells are subdivided until the linear model is accurate relative to the
/// gradient; each leaf contributes the exact strip area of its linear model,
/// or its full or empty area when the Taylor bounds decide it outright.
pub fn small_value_measure<F: PlanarField + ?Sized>(
    field: &F,
    delta: f64,
    region: &Region,
    resolution: usize,
) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(invalid("delta must be positive"));
    }
    if resolution == 0 {
        return Err(invalid("resolution must be positive"));
    }
    let (origin, side) = square_of(region)?;
    let h = side / resolution as f64;
    let d = SMALL_VALUE_MAX_DEPTH;
    let (area, _, _) = match field.as_trig_sum() {
        Some(sum) => {
            let e = Trig::new(&sum, h, d);
            sum_base_grid(&e, origin, h, resolution, d, |s| {
                (small_value_cell(&e, s, 0, delta, h), 0.0, 0)
            })
        }
        None => {
            let e = Generic {
                field,
                hess: require_hessian(field)?,
                h0: h,
            };
            sum_base_grid(&e, origin, h, resolution, d, |s| {
                (small_value_cell(&e, s, 0, delta, h), 0.0, 0)
            })
        }
    };
    Ok((area / (side * side)).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanckSample {
    pub index: usize,
    pub x: [f64; 2],
    /// `L(F_x)` on `[−½, ½]²`.
    pub length: f64,
    pub converged: bool,
}

/// Sample plan shared by `length_moment` and `planck_distribution`: point
/// `i` is drawn uniformly on the torus from `stream_rng(seed, i)`.
pub fn planck_samples(
    spec: &EigenfunctionSpec,
    r: f64,
    n_x: usize,
    opts: &NodalOptions,
    seed: u64,
) -> Result<Vec<PlanckSample>> {
    if !(r >= 1.0) {
        return Err(invalid(format!("R must be at least 1, got {r}")));
    }
    (0..n_x)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let x = [rng.random::<f64>(), rng.random::<f64>()];
            let e = nodal_length_planck(spec, x, r, opts)?;
            Ok(PlanckSample {
                index: i,
                x,
                length: e.length,
                converged: e.converged,
            })
        })
        .collect()
}

fn mean_and_se(xs: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var, (var / n).sqrt())
}

/// Monte Carlo mean of `L(F_x)^p` over uniform `x`, with its standard error.
pub fn length_moment(
    spec: &EigenfunctionSpec,
    r: f64,
    p: u32,
    n_x: usize,
    opts: &NodalOptions,
    seed: u64,
) -> Result<MomentReport> {
    if p < 1 {
        return Err(invalid("p must be at least 1"));
    }
    if n_x < 30 {
        return Err(invalid(format!("n_x must be at least 30, got {n_x}")));
    }
    let samples = planck_samples(spec, r, n_x, opts, seed)?;
    Ok(moment_from_samples(&samples, p, opts.resolution))
}

/// `length_moment` on an already drawn sample set.
pub fn moment_from_samples(samples: &[PlanckSample], p: u32, resolution: usize) -> MomentReport {
    let powers: Vec<f64> = samples.iter().map(|s| s.length.powi(p as i32)).collect();
    let (value, _, se) = mean_and_se(&powers);
    MomentReport {
        p,
        value,
        resolution,
        subdivision_depth: 0,
        error_estimate: se,
        converged: samples.iter().all(|s| s.converged),
        suspect_leaves: 0,
        n_samples: samples.len(),
        unconverged: samples.iter().filter(|s| !s.converged).count(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthDistribution {
    pub lambda: u64,
    pub r: f64,
    pub n_x: usize,
    pub samples: Vec<PlanckSample>,
    /// Mean of `L/R`.
    pub mean: f64,
    /// Unbiased variance of `L/R`.
    pub variance: f64,
    pub standard_error: f64,
    /// Kac-Rice length per unit `R` for the spec's spectral measure; the
    /// reference for `equidist_fraction`.
    pub center: f64,
    /// Counts of `L/R` over `[0, 3·center]`; larger values land in the last
    /// bin.
    pub histogram: Vec<u64>,
    pub unconverged: usize,
}

impl LengthDistribution {
    pub fn ratios(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.length / self.r).collect()
    }

    /// Share of samples with `|L/R − center| > ε·center`.
    pub fn equidist_fraction(&self, epsilon: f64) -> f64 {
        let far = self
            .ratios()
            .iter()
            .filter(|q| (*q - self.center).abs() > epsilon * self.center)
            .count();
        far as f64 / self.n_x as f64
    }

    pub fn histogram_edges(&self) -> Vec<f64> {
        let top = 3.0 * self.center;
        (0..=HISTOGRAM_BINS)
            .map(|i| top * i as f64 / HISTOGRAM_BINS as f64)
            .collect()
    }
}

/// Distribution of `L(F_x)/R` over uniform `x`.
pub fn planck_distribution(
    spec: &EigenfunctionSpec,
    r: f64,
    n_x: usize,
    opts: &NodalOptions,
    seed: u64,
) -> Result<LengthDistribution> {
    if n_x < 100 {
        return Err(invalid(format!("n_x must be at least 100, got {n_x}")));
    }
    let center = physical_length_density(&KacRiceInput::from_measure(&spec.spectral_measure()?)?)?;
    let samples = planck_samples(spec, r, n_x, opts, seed)?;
    let ratios: Vec<f64> = samples.iter().map(|s| s.length / r).collect();
    let (mean, variance, standard_error) = mean_and_se(&ratios);
    let mut histogram = vec![0u64; HISTOGRAM_BINS];
    let width = 3.0 * center / HISTOGRAM_BINS as f64;
    for q in &ratios {
        let bin = ((q / width).floor().max(0.0) as usize).min(HISTOGRAM_BINS - 1);
        histogram[bin] += 1;
    }
    Ok(LengthDistribution {
        lambda: spec.lambda(),
        r,
        n_x,
        unconverged: samples.iter().filter(|s| !s.converged).count(),
        samples,
        mean,
        variance,
        standard_error,
        center,
        histogram,
    })
}

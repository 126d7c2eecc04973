//! Nodal length by marching squares with resolution doubling, the doubling
//! index diagnostic, and the local-to-global identity
//! `L(f, B) ≈ (√λ/R) ∫_B L(F_x) dx`.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{EigenfunctionSpec, PlanckWindow};
use crate::error::{invalid, Error, Result};
use crate::field::{GridSampler, PlanarField};
use crate::rng::stream_rng;

/// Cell rows per reduction band. Fixed so that sums do not depend on the
/// thread count.
const BAND: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Region {
    Square { center: [f64; 2], half_side: f64 },
    Disk { center: [f64; 2], radius: f64 },
    FullTorus,
}

impl Region {
    /// The window domain `[−½, ½]²`.
    pub fn unit_square() -> Self {
        Region::Square {
            center: [0.0, 0.0],
            half_side: 0.5,
        }
    }

    pub fn area(&self) -> f64 {
        match *self {
            Region::Square { half_side, .. } => 4.0 * half_side * half_side,
            Region::Disk { radius, .. } => PI * radius * radius,
            Region::FullTorus => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodalOptions {
    /// Starting cells per side; a power of two, at least 64.
    pub resolution: usize,
    /// Stop when successive estimates differ by less than
    /// `refine_tol · max(1, estimate)`.
    pub refine_tol: f64,
    pub max_resolution: usize,
}

impl Default for NodalOptions {
    fn default() -> Self {
        Self {
            resolution: 64,
            refine_tol: 1e-3,
            max_resolution: 8192,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub resolution: usize,
    pub length: f64,
    pub cell_ambiguities: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalEstimate {
    pub length: f64,
    pub resolution: usize,
    /// `|estimate(n) − estimate(n/2)|`.
    pub refinement_error: f64,
    pub cell_ambiguities: u64,
    pub converged: bool,
    /// Set when no cell at the final resolution saw a sign change.
    pub no_crossing: bool,
    pub history: Vec<Level>,
}

#[derive(Debug, Clone, Copy)]
enum Clip {
    None,
    Inside { center: [f64; 2], radius: f64 },
    Outside { center: [f64; 2], radius: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Grid {
    x0: f64,
    y0: f64,
    h: f64,
    n: usize,
    /// Periodic: node `n` repeats node `0`.
    wrap: bool,
}

impl Grid {
    fn for_region(region: &Region, n: usize) -> Result<(Grid, Clip)> {
        match *region {
            Region::Square { center, half_side } => {
                if !(half_side > 0.0) {
                    return Err(invalid("square half-side must be positive"));
                }
                let h = 2.0 * half_side / n as f64;
                Ok((
                    Grid {
                        x0: center[0] - half_side,
                        y0: center[1] - half_side,
                        h,
                        n,
                        wrap: false,
                    },
                    Clip::None,
                ))
            }
            Region::Disk { center, radius } => {
                if !(radius > 0.0) {
                    return Err(invalid("disk radius must be positive"));
                }
                let h = 2.0 * radius / n as f64;
                Ok((
                    Grid {
                        x0: center[0] - radius,
                        y0: center[1] - radius,
                        h,
                        n,
                        wrap: false,
                    },
                    Clip::Inside { center, radius },
                ))
            }
            Region::FullTorus => {
                // half-cell offset keeps lattice-aligned zeros off the nodes
                let h = 1.0 / n as f64;
                Ok((
                    Grid {
                        x0: 0.5 * h,
                        y0: 0.5 * h,
                        h,
                        n,
                        wrap: true,
                    },
                    Clip::None,
                ))
            }
        }
    }

    fn coord(&self, origin: f64, i: usize) -> f64 {
        let i = if self.wrap { i % self.n } else { i };
        origin + i as f64 * self.h
    }
}

fn inside_fraction(p: [f64; 2], q: [f64; 2], center: [f64; 2], radius: f64) -> f64 {
    let d = [q[0] - p[0], q[1] - p[1]];
    let m = [p[0] - center[0], p[1] - center[1]];
    let a = d[0] * d[0] + d[1] * d[1];
    if a == 0.0 {
        return 0.0;
    }
    let b = m[0] * d[0] + m[1] * d[1];
    let c = m[0] * m[0] + m[1] * m[1] - radius * radius;
    let disc = b * b - a * c;
    if disc <= 0.0 {
        return 0.0;
    }
    let root = disc.sqrt();
    let s1 = (-b - root) / a;
    let s2 = (-b + root) / a;
    (s2.min(1.0) - s1.max(0.0)).max(0.0)
}

fn segment_length(p: [f64; 2], q: [f64; 2], clip: Clip) -> f64 {
    let full = (q[0] - p[0]).hypot(q[1] - p[1]);
    match clip {
        Clip::None => full,
        Clip::Inside { center, radius } => full * inside_fraction(p, q, center, radius),
        Clip::Outside { center, radius } => full * (1.0 - inside_fraction(p, q, center, radius)),
    }
}

struct LevelSum {
    length: f64,
    ambiguities: u64,
    crossings: u64,
}

fn measure_level<F: PlanarField + ?Sized>(field: &F, grid: Grid, clip: Clip) -> LevelSum {
    let n = grid.n;
    let xs: Vec<f64> = (0..=n).map(|i| grid.coord(grid.x0, i)).collect();
    let sampler: Box<dyn GridSampler + '_> = field.grid_sampler(&xs);
    let bands: Vec<usize> = (0..n).step_by(BAND).collect();
    let parts: Vec<LevelSum> = bands
        .par_iter()
        .map(|&j0| {
            let j1 = (j0 + BAND).min(n);
            let ys: Vec<f64> = (j0..=j1).map(|j| grid.coord(grid.y0, j)).collect();
            let g = sampler.sample(&ys);
            let mut sum = LevelSum {
                length: 0.0,
                ambiguities: 0,
                crossings: 0,
            };
            for jj in 0..(j1 - j0) {
                let y = grid.y0 + (j0 + jj) as f64 * grid.h;
                for i in 0..n {
                    let x = grid.x0 + i as f64 * grid.h;
                    if let Clip::Inside { center, radius } = clip {
                        let cx = (x + 0.5 * grid.h - center[0]).abs();
                        let cy = (y + 0.5 * grid.h - center[1]).abs();
                        if cx.hypot(cy) > radius + grid.h {
                            continue;
                        }
                    }
                    let v = [
                        g[[jj, i]],
                        g[[jj, i + 1]],
                        g[[jj + 1, i + 1]],
                        g[[jj + 1, i]],
                    ];
                    cell(field, &v, x, y, grid.h, clip, &mut sum);
                }
            }
            sum
        })
        .collect();
    let mut total = LevelSum {
        length: 0.0,
        ambiguities: 0,
        crossings: 0,
    };
    for p in parts {
        total.length += p.length;
        total.ambiguities += p.ambiguities;
        total.crossings += p.crossings;
    }
    total
}

/// One marching-squares cell. Corners anticlockwise from bottom-left:
/// `v = [v00, v10, v11, v01]`; edges `0` bottom, `1` right, `2` top, `3` left.
fn cell<F: PlanarField + ?Sized>(
    field: &F,
    v: &[f64; 4],
    x: f64,
    y: f64,
    h: f64,
    clip: Clip,
    sum: &mut LevelSum,
) {
    // exact zeros count as +0
    let pos = [v[0] >= 0.0, v[1] >= 0.0, v[2] >= 0.0, v[3] >= 0.0];
    if pos.iter().all(|&p| p == pos[0]) {
        return;
    }
    sum.crossings += 1;
    let crossing = |e: usize| -> [f64; 2] {
        let (a, b) = (v[e], v[(e + 1) % 4]);
        let t = a / (a - b);
        // local coordinates of the edge start and direction
        let (sx, sy, dx, dy) = match e {
            0 => (0.0, 0.0, 1.0, 0.0),
            1 => (1.0, 0.0, 0.0, 1.0),
            2 => (1.0, 1.0, -1.0, 0.0),
            _ => (0.0, 1.0, 0.0, -1.0),
        };
        [x + (sx + t * dx) * h, y + (sy + t * dy) * h]
    };
    let cut: Vec<usize> = (0..4).filter(|&e| pos[e] != pos[(e + 1) % 4]).collect();
    if cut.len() == 2 {
        sum.length += segment_length(crossing(cut[0]), crossing(cut[1]), clip);
        return;
    }
    sum.ambiguities += 1;
    let center = field.value([x + 0.5 * h, y + 0.5 * h]) >= 0.0;
    let (e0, e1, e2, e3) = (crossing(0), crossing(1), crossing(2), crossing(3));
    if center == pos[0] {
        // v00 and v11 joined through the center: cut off v10 and v01
        sum.length += segment_length(e0, e1, clip) + segment_length(e2, e3, clip);
    } else {
        sum.length += segment_length(e3, e0, clip) + segment_length(e1, e2, clip);
    }
}

fn check_options(opts: &NodalOptions) -> Result<()> {
    let n = opts.resolution;
    if n < 64 || !n.is_power_of_two() {
        return Err(invalid(format!(
            "resolution must be a power of two >= 64, got {n}"
        )));
    }
    if opts.max_resolution < n {
        return Err(invalid("max_resolution below the starting resolution"));
    }
    if !(opts.refine_tol > 0.0) {
        return Err(invalid("refine_tol must be positive"));
    }
    Ok(())
}

fn refine<F: PlanarField + ?Sized>(
    field: &F,
    region: &Region,
    clip_override: Option<Clip>,
    opts: &NodalOptions,
) -> Result<NodalEstimate> {
    check_options(opts)?;
    let mut n = opts.resolution;
    let mut history: Vec<Level> = Vec::new();
    let mut last_crossings;
    loop {
        let (grid, clip) = Grid::for_region(region, n)?;
        let s = measure_level(field, grid, clip_override.unwrap_or(clip));
        last_crossings = s.crossings;
        history.push(Level {
            resolution: n,
            length: s.length,
            cell_ambiguities: s.ambiguities,
        });
        if history.len() >= 2 {
            let prev = history[history.len() - 2].length;
            let err = (s.length - prev).abs();
            let done = err < opts.refine_tol * s.length.max(1.0);
            if done || 2 * n > opts.max_resolution {
                return Ok(NodalEstimate {
                    length: s.length,
                    resolution: n,
                    refinement_error: err,
                    cell_ambiguities: s.ambiguities,
                    converged: done,
                    no_crossing: last_crossings == 0,
                    history,
                });
            }
        } else if 2 * n > opts.max_resolution {
            return Ok(NodalEstimate {
                length: s.length,
                resolution: n,
                refinement_error: f64::INFINITY,
                cell_ambiguities: s.ambiguities,
                converged: false,
                no_crossing: last_crossings == 0,
                history,
            });
        }
        n *= 2;
    }
}

/// Length of the zero set of `field` inside `region`.
pub fn nodal_length<F: PlanarField + ?Sized>(
    field: &F,
    region: &Region,
    opts: &NodalOptions,
) -> Result<NodalEstimate> {
    refine(field, region, None, opts)
}

/// Length of the zero set inside the square `square` but outside the disk.
pub fn nodal_length_outside_disk<F: PlanarField + ?Sized>(
    field: &F,
    square: &Region,
    disk_center: [f64; 2],
    radius: f64,
    opts: &NodalOptions,
) -> Result<NodalEstimate> {
    if !matches!(square, Region::Square { .. }) {
        return Err(invalid("complement measurement needs a square region"));
    }
    refine(
        field,
        square,
        Some(Clip::Outside {
            center: disk_center,
            radius,
        }),
        opts,
    )
}

/// `L(F_x)` on `[−½, ½]²`.
pub fn nodal_length_planck(
    spec: &EigenfunctionSpec,
    x: [f64; 2],
    r: f64,
    opts: &NodalOptions,
) -> Result<NodalEstimate> {
    let window = spec.restrict(PlanckWindow { center: x, r })?;
    nodal_length(&window, &Region::unit_square(), opts)
}

const DOUBLING_GRID: usize = 512;

fn grid_sup<F: PlanarField + ?Sized>(field: &F, center: [f64; 2], half: f64) -> f64 {
    let m = DOUBLING_GRID;
    let pts: Vec<f64> = (0..m)
        .map(|i| -half + 2.0 * half * i as f64 / (m - 1) as f64)
        .collect();
    let xs: Vec<f64> = pts.iter().map(|p| center[0] + p).collect();
    let ys: Vec<f64> = pts.iter().map(|p| center[1] + p).collect();
    let sampler = field.grid_sampler(&xs);
    ys.par_chunks(64)
        .map(|chunk| {
            sampler
                .sample(chunk)
                .iter()
                .fold(0.0f64, |a, v| a.max(v.abs()))
        })
        .reduce(|| 0.0, f64::max)
}

/// `log(sup_{2B}|F| / sup_B|F|)` for the square `B` (sups on 512² grids).
pub fn doubling_ratio<F: PlanarField + ?Sized>(
    field: &F,
    center: [f64; 2],
    half_side: f64,
) -> Result<f64> {
    if !(half_side > 0.0) {
        return Err(invalid("half-side must be positive"));
    }
    let inner = grid_sup(field, center, half_side);
    if inner < 1e-300 {
        return Err(Error::Degenerate(format!(
            "sup over the inner box is {inner}"
        )));
    }
    let outer = grid_sup(field, center, 2.0 * half_side);
    Ok((outer / inner).ln())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    /// `L(f, B)`.
    pub lhs: f64,
    /// `(√λ/R) · vol(B) · mean_x L(F_x)`.
    pub rhs: f64,
    pub rhs_standard_error: f64,
    /// `|lhs − rhs| / lhs`.
    pub discrepancy: f64,
    /// `rhs_standard_error / lhs`.
    pub relative_standard_error: f64,
    pub n_mc: usize,
    pub unconverged: usize,
}

impl LocalityReport {
    /// Discrepancy within `max(2%, 3 standard errors)`.
    pub fn passes(&self) -> bool {
        self.discrepancy <= 0.02f64.max(3.0 * self.relative_standard_error)
    }
}

/// Compares `L(f, B)` on the disk `B` with the Monte-Carlo average of window
/// lengths over centers uniform in `B`.
pub fn locality_check(
    spec: &EigenfunctionSpec,
    center: [f64; 2],
    radius: f64,
    r: f64,
    n_mc: usize,
    opts: &NodalOptions,
    seed: u64,
) -> Result<LocalityReport> {
    if n_mc == 0 {
        return Err(invalid("n_mc must be positive"));
    }
    let sqrt_lambda = (spec.lambda() as f64).sqrt();
    let min_radius = 10.0 * r / sqrt_lambda;
    if radius < min_radius {
        return Err(invalid(format!(
            "disk radius {radius} below 10·R/√λ = {min_radius}; the boundary term would dominate"
        )));
    }
    let lhs = nodal_length(spec, &Region::Disk { center, radius }, opts)?;
    let samples: Vec<Result<NodalEstimate>> = (0..n_mc)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let rho = radius * rng.random::<f64>().sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            let x = [center[0] + rho * theta.cos(), center[1] + rho * theta.sin()];
            nodal_length_planck(spec, x, r, opts)
        })
        .collect();
    let mut lengths = Vec::with_capacity(n_mc);
    let mut unconverged = usize::from(!lhs.converged);
    for s in samples {
        let s = s?;
        unconverged += (!s.converged) as usize;
        lengths.push(s.length);
    }
    let n = n_mc as f64;
    let mean = lengths.iter().sum::<f64>() / n;
    let var = if n_mc > 1 {
        lengths.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let scale = sqrt_lambda / r * PI * radius * radius;
    let rhs = scale * mean;
    let se = scale * (var / n).sqrt();
    Ok(LocalityReport {
        lhs: lhs.length,
        rhs,
        rhs_standard_error: se,
        discrepancy: (lhs.length - rhs).abs() / lhs.length,
        relative_standard_error: se / lhs.length,
        n_mc,
        unconverged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{build_bourgain, build_cos_line};
    use crate::field::{FnField, LinearField, Rotated90};

    #[test]
    fn linear_field_is_exact() {
        let g = LinearField {
            c: [1.0, 0.0],
            d: 0.0,
        };
        for n in [64, 128, 1024] {
            let opts = NodalOptions {
                resolution: n,
                ..Default::default()
            };
            let e = nodal_length(&g, &Region::unit_square(), &opts).unwrap();
            assert!((e.length - 1.0).abs() < 1e-12, "{}", e.length);
            for level in &e.history {
                assert!((level.length - 1.0).abs() < 1e-12);
            }
        }
        let tilted = LinearField {
            c: [1.0, 1.0],
            d: 0.0,
        };
        let e = nodal_length(&tilted, &Region::unit_square(), &NodalOptions::default()).unwrap();
        assert!((e.length - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cos_line_on_torus() {
        let f = build_cos_line(3).unwrap();
        let e = nodal_length(&f, &Region::FullTorus, &NodalOptions::default()).unwrap();
        assert!((e.length - 6.0).abs() < 6e-3, "{}", e.length);
        assert!(e.converged);
    }

    #[test]
    fn constant_sign_has_no_crossing() {
        let f = FnField {
            value: |_p: [f64; 2]| 2.0,
            gradient: |_p: [f64; 2]| [0.0, 0.0],
            hessian_bound: Some(0.0),
        };
        let e = nodal_length(&f, &Region::unit_square(), &NodalOptions::default()).unwrap();
        assert_eq!(e.length, 0.0);
        assert!(e.no_crossing && e.converged);
    }

    #[test]
    fn circle_length() {
        let f = FnField {
            value: |p: [f64; 2]| p[0] * p[0] + p[1] * p[1] - 0.09,
            gradient: |p: [f64; 2]| [2.0 * p[0], 2.0 * p[1]],
            hessian_bound: Some(2.0),
        };
        let e = nodal_length(
            &f,
            &Region::unit_square(),
            &NodalOptions {
                refine_tol: 1e-6,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((e.length - 0.6 * PI).abs() < 1e-5, "{}", e.length);
    }

    #[test]
    fn disk_clipping_of_a_line() {
        let g = LinearField {
            c: [1.0, 0.0],
            d: -0.1,
        };
        let e = nodal_length(
            &g,
            &Region::Disk {
                center: [0.0, 0.0],
                radius: 0.3,
            },
            &NodalOptions::default(),
        )
        .unwrap();
        let chord = 2.0 * (0.09f64 - 0.01).sqrt();
        assert!((e.length - chord).abs() < 1e-12, "{} vs {chord}", e.length);
    }

    #[test]
    fn disk_plus_complement_equals_square() {
        let spec = build_bourgain(65).unwrap();
        let opts = NodalOptions {
            refine_tol: 1e-4,
            ..Default::default()
        };
        let sq = Region::Square {
            center: [0.4, 0.6],
            half_side: 0.25,
        };
        let whole = nodal_length(&spec, &sq, &opts).unwrap();
        let inside = nodal_length(
            &spec,
            &Region::Disk {
                center: [0.4, 0.6],
                radius: 0.25,
            },
            &opts,
        )
        .unwrap();
        let outside = nodal_length_outside_disk(&spec, &sq, [0.4, 0.6], 0.25, &opts).unwrap();
        let tol = 2.0 * opts.refine_tol * whole.length;
        assert!((inside.length + outside.length - whole.length).abs() <= tol);
    }

    #[test]
    fn rotation_invariance() {
        let spec = build_bourgain(325).unwrap();
        let window = spec
            .restrict(PlanckWindow {
                center: [0.17, 0.61],
                r: 6.0,
            })
            .unwrap();
        let opts = NodalOptions::default();
        let a = nodal_length(&window, &Region::unit_square(), &opts).unwrap();
        let b = nodal_length(&Rotated90(&window), &Region::unit_square(), &opts).unwrap();
        assert!((a.length - b.length).abs() <= opts.refine_tol * a.length.max(1.0) * 2.0);
    }

    #[test]
    fn monotone_refinement_without_saddles() {
        let f = FnField {
            value: |p: [f64; 2]| p[0] * p[0] + 0.5 * p[1] * p[1] + 0.3 * p[0] * p[1] - 0.09,
            gradient: |p: [f64; 2]| [2.0 * p[0] + 0.3 * p[1], p[1] + 0.3 * p[0]],
            hessian_bound: Some(2.1),
        };
        let opts = NodalOptions {
            refine_tol: 1e-13,
            max_resolution: 4096,
            resolution: 64,
        };
        let e = nodal_length(
            &f,
            &Region::Square {
                center: [0.01, 0.02],
                half_side: 0.5,
            },
            &opts,
        )
        .unwrap();
        let diffs: Vec<f64> = e
            .history
            .windows(2)
            .map(|w| (w[1].length - w[0].length).abs())
            .collect();
        for d in diffs.windows(2) {
            assert!(d[1] < d[0], "{diffs:?}");
        }
    }

    // Near-touching branches make single steps non-monotone; the overall
    // trend must still converge.
    #[test]
    fn refinement_converges_on_bourgain_windows() {
        let spec = build_bourgain(325).unwrap();
        let opts = NodalOptions {
            refine_tol: 1e-12,
            max_resolution: 2048,
            resolution: 64,
        };
        let mut rng = stream_rng(5, 0);
        for _ in 0..20 {
            let x = [rng.random::<f64>(), rng.random::<f64>()];
            let e = nodal_length_planck(&spec, x, 4.0, &opts).unwrap();
            let diffs: Vec<f64> = e
                .history
                .windows(2)
                .map(|w| (w[1].length - w[0].length).abs())
                .collect();
            let first_two = diffs[0].max(diffs[1]);
            assert!(*diffs.last().unwrap() < 0.5 * first_two, "{x:?}: {diffs:?}");
            assert!(*diffs.last().unwrap() < 1e-3 * e.length, "{x:?}: {diffs:?}");
        }
    }

    #[test]
    fn rescaling_identity() {
        let spec = build_bourgain(325).unwrap();
        let r = 5.0;
        let x = [0.3, 0.7];
        let opts = NodalOptions {
            refine_tol: 1e-5,
            ..Default::default()
        };
        let window = nodal_length_planck(&spec, x, r, &opts).unwrap();
        let side = r / 325f64.sqrt();
        let physical = nodal_length(
            &spec,
            &Region::Square {
                center: x,
                half_side: 0.5 * side,
            },
            &opts,
        )
        .unwrap();
        let predicted = side * window.length;
        assert!((physical.length - predicted).abs() <= 0.01 * physical.length);
    }

    #[test]
    fn planck_cos_line_matches_physical() {
        let spec = build_cos_line(8).unwrap();
        let opts = NodalOptions {
            refine_tol: 1e-6,
            ..Default::default()
        };
        let r = 3.0;
        let x = [0.37, 0.2];
        let w = nodal_length_planck(&spec, x, r, &opts).unwrap();
        let side = r / 8.0;
        let p = nodal_length(
            &spec,
            &Region::Square {
                center: x,
                half_side: 0.5 * side,
            },
            &opts,
        )
        .unwrap();
        assert!((p.length - side * w.length).abs() <= 0.01 * p.length);
        // 2m lines per unit length, window of side R/m: 2R full-height lines
        assert!((w.length - 2.0 * r).abs() < 1e-9, "{}", w.length);
    }

    #[test]
    fn doubling_examples() {
        let g = LinearField {
            c: [1.0, 0.0],
            d: 0.0,
        };
        assert!(
            (doubling_ratio(&g, [0.0, 0.0], 0.5).unwrap() - 2f64.ln()).abs() < 0.01 * 2f64.ln()
        );
        let c = LinearField {
            c: [0.0, 0.0],
            d: 3.0,
        };
        assert_eq!(doubling_ratio(&c, [0.0, 0.0], 0.5).unwrap(), 0.0);
        let z = LinearField {
            c: [0.0, 0.0],
            d: 0.0,
        };
        assert!(matches!(
            doubling_ratio(&z, [0.0, 0.0], 0.5),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn locality_errors() {
        let spec = build_cos_line(64).unwrap();
        let opts = NodalOptions::default();
        assert!(locality_check(&spec, [0.5, 0.5], 0.35, 2.0, 0, &opts, 1).is_err());
        assert!(locality_check(&spec, [0.5, 0.5], 0.1, 2.0, 10, &opts, 1).is_err());
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let spec = build_bourgain(1105).unwrap();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                nodal_length(&spec, &Region::FullTorus, &NodalOptions::default())
                    .unwrap()
                    .length
            })
        };
        assert_eq!(run(1).to_bits(), run(4).to_bits());
    }
}

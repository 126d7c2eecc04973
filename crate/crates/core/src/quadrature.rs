//! One-dimensional adaptive Gauss–Kronrod quadrature.
//!
//! Global bisection on the panel with the largest error estimate, 7-point
//! Gauss / 15-point Kronrod pairs on each panel. Panel selection is
//! deterministic (largest error, lowest index on ties) so repeated calls
//! return bit-identical results.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Panel { a, b, value, error }
}

/// Adaptive integral of `f` over `[a, b]`.
///
/// Stops when the summed error estimate is below `max(abs_tol, rel_tol·|I|)`
/// or `max_panels` panels are in use; `converged` records which.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            panels: 0,
            converged: true,
        };
    }
    let mut panels = vec![kronrod15(&mut f, a, b)];
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target {
            return QuadResult {
                value,
                error,
                panels: panels.len(),
                converged: true,
            };
        }
        if panels.len() >= max_panels {
            return QuadResult {
                value,
                error,
                panels: panels.len(),
                converged: false,
            };
        }
        let (worst, _) =
            panels
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |(bi, be), (i, p)| {
                    if p.error > be {
                        (i, p.error)
                    } else {
                        (bi, be)
                    }
                });
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // panel below floating-point resolution
            return QuadResult {
                value,
                error,
                panels: panels.len(),
                converged: false,
            };
        }
        panels[worst] = kronrod15(&mut f, p.a, mid);
        panels.push(kronrod15(&mut f, mid, p.b));
    }
}

/// Adaptive integral over consecutive sub-intervals split at `breaks`
/// (sorted, including both end points). Tolerances apply to the total.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> QuadResult {
    let pieces = breaks.len().saturating_sub(1).max(1);
    let mut total = QuadResult {
        value: 0.0,
        error: 0.0,
        panels: 0,
        converged: true,
    };
    for w in breaks.windows(2) {
        let r = integrate(
            &mut f,
            w[0],
            w[1],
            abs_tol / pieces as f64,
            rel_tol,
            max_panels,
        );
        total.value += r.value;
        total.error += r.error;
        total.panels += r.panels;
        total.converged &= r.converged;
    }
    total
}

/// Three-point Gauss–Legendre nodes and weights on `[-1, 1]`.
pub(crate) const GL3_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
pub(crate) const GL3_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-14, 0.0, 10);
        assert!((r.value - (63.0 / 6.0 - 9.0)).abs() < 1e-13);
        assert_eq!(r.panels, 1);
    }

    #[test]
    fn endpoint_log_singularity() {
        // ∫_0^1 ln x dx = -1
        let r = integrate(|x| x.ln(), 0.0, 1.0, 1e-10, 0.0, 500);
        assert!(r.converged);
        assert!((r.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn peaked_integrand() {
        let r = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10, 1e-12, 1000);
        let exact = 2.0 / 1e-2 * (1.0f64 / 1e-2).atan();
        assert!((r.value - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn breaks_sum_pieces() {
        let r = integrate_breaks(|x| x.sin().abs(), &[0.0, PI, 2.0 * PI], 1e-12, 0.0, 100);
        assert!((r.value - 4.0).abs() < 1e-11);
    }
}

//! Bessel functions of the first kind, orders 0 and 1.
//!
//! Power series below `SWITCH`, Hankel asymptotic expansion (truncated at the
//! smallest term) above. Both branches are accurate to about 1e-11 absolute;
//! the switch point balances series cancellation against the asymptotic
//! remainder `~exp(-2x)`.

use std::f64::consts::PI;

const SWITCH: f64 = 14.0;

fn series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = half.powi(order as i32);
    for k in 1..=order {
        term /= k as f64;
    }
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + order as f64));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && k > 2.0 {
            break;
        }
        k += 1.0;
        if k > 200.0 {
            break;
        }
    }
    sum
}

fn hankel(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    for k in 1..60u32 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() > term.abs() || next == 0.0 {
            break;
        }
        term = next;
        // signs: P = a0 - a2 + a4 ..., Q = a1 - a3 + ...
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * order as f64 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// J₀(x).
pub fn j0(x: f64) -> f64 {
    let x = x.abs();
    if x < SWITCH {
        series(0, x)
    } else {
        hankel(0, x)
    }
}

/// J₁(x).
pub fn j1(x: f64) -> f64 {
    let s = x.signum();
    let x = x.abs();
    let v = if x < SWITCH {
        series(1, x)
    } else {
        hankel(1, x)
    };
    s * v
}

/// J₁(x)/x, continuous at 0 with value ½.
pub fn j1_over_x(x: f64) -> f64 {
    let x = x.abs();
    if x < 1e-3 {
        let x2 = x * x;
        0.5 - x2 / 16.0 + x2 * x2 / 384.0
    } else {
        j1(x) / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // (1/π)∫_0^π cos(x sin t) dt with the trapezoid rule; exponentially
    // convergent for this periodic integrand.
    fn j0_trapezoid(x: f64) -> f64 {
        let m = 400;
        let h = PI / m as f64;
        let mut s = 0.5 * (1.0 + 1.0);
        for k in 1..m {
            s += (x * (k as f64 * h).sin()).cos();
        }
        s * h / PI
    }

    fn j1_trapezoid(x: f64) -> f64 {
        // (1/π)∫_0^π cos(t - x sin t) dt
        let m = 400;
        let h = PI / m as f64;
        let mut s = 0.5 * (1.0 + (PI).cos());
        for k in 1..m {
            let t = k as f64 * h;
            s += (t - x * t.sin()).cos();
        }
        s * h / PI
    }

    #[test]
    fn j0_against_integral_representation() {
        for i in 0..400 {
            let x = i as f64 * 0.1;
            let d = (j0(x) - j0_trapezoid(x)).abs();
            assert!(d < 1e-10, "x={x} diff={d}");
        }
    }

    #[test]
    fn j1_against_integral_representation() {
        for i in 0..400 {
            let x = i as f64 * 0.1 + 0.05;
            let d = (j1(x) - j1_trapezoid(x)).abs();
            assert!(d < 1e-10, "x={x} diff={d}");
        }
    }

    #[test]
    fn known_values() {
        assert!((j0(0.0) - 1.0).abs() < 1e-16);
        // first zero of J0
        assert!(j0(2.404_825_557_695_773).abs() < 1e-12);
        assert!((j1_over_x(0.0) - 0.5).abs() < 1e-16);
        assert!((j1_over_x(2e-3) - j1(2e-3) / 2e-3).abs() < 1e-14);
    }
}

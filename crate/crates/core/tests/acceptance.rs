//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs with a custom harness so that every line is printed even when the
//! suite is driven by `cargo test`. Pass criterion numbers as arguments to
//! run a subset, e.g. `cargo test --test acceptance -- 1 7`.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use nodal_lab::eigen::{build_bourgain, build_cos_line};
use nodal_lab::field::LinearField;
use nodal_lab::gaussian::{mc_nodal_statistics, McOptions, McStatistics};
use nodal_lab::kac_rice::{
    expected_length_constant, expected_length_constant_closed_form, variance_constant_formula,
    KacRiceInput,
};
use nodal_lab::lattice::{find_semi_correlations, lattice_points, Axis, SearchBudget, Tuple};
use nodal_lab::loglab::{length_moment, log_moment, moment_from_samples, planck_samples};
use nodal_lab::measure::DirectionMeasure;
use nodal_lab::nodal::{locality_check, nodal_length, NodalOptions, Region};

/// `1/(2√2)`.
const C1: f64 = 0.353_553_390_593_273_8;
const MC_SEED: u64 = 2024;

struct Outcome {
    pass: bool,
    summary: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: String) -> Self {
        Self {
            pass,
            summary,
            notes: Vec::new(),
        }
    }

    fn note(mut self, s: String) -> Self {
        self.notes.push(s);
        self
    }
}

fn within(limit: Duration, t: Instant) -> (bool, String) {
    let e = t.elapsed();
    (
        e < limit,
        format!("{:.2}s of {}s", e.as_secs_f64(), limit.as_secs()),
    )
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let at_zero = expected_length_constant_closed_form(0.0).unwrap();
    let err0 = (at_zero - 2f64.powf(-1.5)).abs();
    let mut worst: f64 = 0.0;
    for alpha in [0.0, 0.3, 0.6, 0.9] {
        let closed = expected_length_constant_closed_form(alpha).unwrap();
        let general = expected_length_constant(&KacRiceInput::new(alpha, 0.0).unwrap()).unwrap();
        worst = worst.max((closed - general).abs());
    }
    let (fast, time) = within(Duration::from_secs(1), t);
    Outcome::new(
        err0 <= 1e-10 && worst <= 1e-8 && fast,
        format!("c1(0,0) error {err0:.1e} (tol 1e-10); closed vs general max gap {worst:.1e} (tol 1e-8); {time}"),
    )
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let line = LinearField {
        c: [0.0, 1.0],
        d: 0.0,
    };
    let mut worst_linear: f64 = 0.0;
    let mut n = 64;
    while n <= 2048 {
        let opts = NodalOptions {
            resolution: n,
            refine_tol: 1e-3,
            max_resolution: n,
        };
        let e = nodal_length(&line, &Region::unit_square(), &opts).unwrap();
        worst_linear = worst_linear.max((e.length - 1.0).abs());
        n *= 2;
    }
    let cos = nodal_length(
        &build_cos_line(3).unwrap(),
        &Region::FullTorus,
        &NodalOptions::default(),
    )
    .unwrap();
    let rel = (cos.length - 6.0).abs() / 6.0;
    let (fast, time) = within(Duration::from_secs(10), t);
    Outcome::new(
        worst_linear < 1e-9 && rel <= 1e-3 && cos.resolution <= 2048 && fast,
        format!(
            "linear max |L-1| {worst_linear:.1e} over 64..2048; cos(2pi 3x) L = {:.5} (rel {rel:.1e}) at n = {}; {time}",
            cos.length, cos.resolution
        ),
    )
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let mut devs = Vec::new();
    let mut corrected = Vec::new();
    let mut parts = Vec::new();
    for lambda in [325u64, 1105, 4225] {
        let e = nodal_length(
            &build_bourgain(lambda).unwrap(),
            &Region::FullTorus,
            &NodalOptions::default(),
        )
        .unwrap();
        let q = e.length / (lambda as f64).sqrt();
        devs.push((q - C1).abs() / C1);
        corrected.push((q - TAU * C1).abs() / (TAU * C1));
        parts.push(format!("{lambda}: L/sqrt(lambda) = {q:.4}"));
    }
    let monotone = |d: &[f64]| d.windows(2).all(|w| w[1] <= w[0]);
    let (fast, time) = within(Duration::from_secs(600), t);
    let pass = devs.iter().all(|d| *d <= 0.07) && monotone(&devs) && fast;
    Outcome::new(
        pass,
        format!(
            "{}; relative deviation from 1/(2 sqrt 2): {}; {time}",
            parts.join(", "),
            devs.iter().map(|d| format!("{:.1}%", 100.0 * d)).collect::<Vec<_>>().join(", ")
        ),
    )
    .note(format!(
        "with frequencies 2 pi xi the length per sqrt(lambda) is 2 pi c1 = {:.4}; deviations from it: {} (<= 7%: {}, nonincreasing: {})",
        TAU * C1,
        corrected.iter().map(|d| format!("{:.2}%", 100.0 * d)).collect::<Vec<_>>().join(", "),
        corrected.iter().all(|d| *d <= 0.07),
        monotone(&corrected)
    ))
}

fn lebesgue_runs() -> &'static [McStatistics] {
    static RUNS: OnceLock<Vec<McStatistics>> = OnceLock::new();
    RUNS.get_or_init(|| {
        [8.0, 16.0, 32.0]
            .iter()
            .map(|&r| {
                mc_nodal_statistics(
                    &DirectionMeasure::Lebesgue,
                    r,
                    200,
                    &McOptions::default(),
                    MC_SEED,
                )
                .unwrap()
            })
            .collect()
    })
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let s = &lebesgue_runs()[2];
    let target = C1 * 32.0;
    let z = (s.mean - target).abs() / s.standard_error;
    let (fast, time) = within(Duration::from_secs(900), t);
    let physical = TAU * C1 * 32.0;
    Outcome::new(
        z <= 3.0 && fast,
        format!(
            "mean {:.4} +- {:.4} vs c1 R = {target:.4}: {z:.1} SE; unconverged {}; {time}",
            s.mean, s.standard_error, s.unconverged
        ),
    )
    .note(format!(
        "vs 2 pi c1 R = {physical:.4}: {:.2} SE",
        (s.mean - physical).abs() / s.standard_error
    ))
}

fn criterion_5() -> Outcome {
    let runs = lebesgue_runs();
    let scaled: Vec<f64> = runs.iter().map(|s| s.variance / (s.r * s.r)).collect();
    let decreasing = scaled.windows(2).all(|w| w[1] < w[0]);
    let var32 = runs[2].variance;
    let berry = 32f64.ln() / (512.0 * PI);
    let factor = (var32 / berry).max(berry / var32);
    let band = if factor <= 4.0 {
        "inside factor 4"
    } else if factor <= 8.0 {
        "factor in [4, 8], logged only"
    } else {
        "outside factor 8"
    };
    let berry_k = (TAU * 32.0).ln() / (512.0 * PI);
    Outcome::new(
        decreasing && factor <= 8.0,
        format!(
            "Var/R^2 at R = 8, 16, 32: {} (strictly decreasing: {decreasing}); Var(R=32) = {var32:.5} vs log 32/(512 pi) = {berry:.5}: factor {factor:.2}, {band}",
            scaled.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    )
    .note(format!(
        "variance standard errors: {}",
        runs.iter().map(|s| format!("{:.1e}", s.variance_standard_error)).collect::<Vec<_>>().join(", ")
    ))
    .note(format!(
        "with wavenumber k = 2 pi R the reference log(k)/(512 pi) = {berry_k:.5}, factor {:.2}",
        var32 / berry_k
    ))
}

fn criterion_6() -> Outcome {
    let leb = &lebesgue_runs()[2];
    let arc = mc_nodal_statistics(
        &DirectionMeasure::eight_arc(),
        32.0,
        200,
        &McOptions::default(),
        MC_SEED,
    )
    .unwrap();
    let ratio = arc.variance / leb.variance;
    let rel_se = (arc.variance_standard_error / arc.variance)
        .hypot(leb.variance_standard_error / leb.variance);
    Outcome::new(
        ratio >= 5.0,
        format!(
            "Var/R^2 at R = 32: 8-arc {:.3e}, Lebesgue {:.3e}, ratio {ratio:.2} +- {:.2} (need >= 5)",
            arc.variance / 1024.0,
            leb.variance / 1024.0,
            ratio * rel_se
        ),
    )
}

/// Sorted-descending value multisets of one coordinate of `2ℓ` lattice
/// points that sum to zero and are not closed under negation.
fn semi_oracle(lambda: u64, ell: usize) -> BTreeSet<Vec<i64>> {
    let mut vals = Vec::new();
    let r = (lambda as f64).sqrt() as i64 + 1;
    for a in -r..=r {
        for b in -r..=r {
            if (a * a + b * b) as u64 == lambda {
                vals.push(a);
            }
        }
    }
    let n = vals.len();
    let mut out = BTreeSet::new();
    let mut consider = |mut t: Vec<i64>| {
        if t.iter().sum::<i64>() != 0 {
            return;
        }
        t.sort_unstable_by(|a, b| b.cmp(a));
        let mut neg: Vec<i64> = t.iter().map(|v| -v).collect();
        neg.sort_unstable_by(|a, b| b.cmp(a));
        if neg != t {
            out.insert(t);
        }
    };
    for a in 0..n {
        for b in a..n {
            if ell == 1 {
                consider(vec![vals[a], vals[b]]);
                continue;
            }
            for c in b..n {
                for d in c..n {
                    consider(vec![vals[a], vals[b], vals[c], vals[d]]);
                }
            }
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let budget = SearchBudget::default();
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for lambda in 1..=500u64 {
        if lattice_points(lambda).points.is_empty() {
            continue;
        }
        checked += 1;
        for ell in 1..=2 {
            let got: BTreeSet<Vec<i64>> = find_semi_correlations(lambda, ell, Axis::First, &budget)
                .unwrap()
                .nontrivial_tuples
                .into_iter()
                .filter_map(|t| match t {
                    Tuple::Values(v) => Some(v),
                    Tuple::Points(_) => None,
                })
                .collect();
            if got != semi_oracle(lambda, ell) {
                mismatches.push((lambda, ell));
            }
        }
    }
    let tuples = |lambda| {
        find_semi_correlations(lambda, 2, Axis::First, &budget)
            .unwrap()
            .nontrivial_tuples
    };
    let none_at_5 = tuples(5).is_empty()
        && find_semi_correlations(5, 1, Axis::First, &budget)
            .unwrap()
            .nontrivial_tuples
            .is_empty();
    let witness = tuples(25).contains(&Tuple::Values(vec![5, 3, -4, -4]));
    let (fast, time) = within(Duration::from_secs(60), t);
    Outcome::new(
        mismatches.is_empty() && none_at_5 && witness && fast,
        format!(
            "{checked} representable lambda <= 500, ell in {{1,2}}: {} mismatches; lambda=5 none: {none_at_5}; lambda=25 witness (5,3,-4,-4): {witness}; {time}",
            mismatches.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut values = Vec::new();
    let mut ok = true;
    let mut parts = Vec::new();
    for (lambda, res) in [(325u64, 128usize), (1105, 128), (4225, 256)] {
        let r = log_moment(&build_bourgain(lambda).unwrap(), 2, &Region::FullTorus, res).unwrap();
        let rel = r.error_estimate / r.value;
        ok &= rel < 0.05;
        values.push(r.value);
        parts.push(format!(
            "{lambda}: {:.4} (err {:.1}%, depth {})",
            r.value,
            100.0 * rel,
            r.subdivision_depth
        ));
    }
    let spread = values.iter().cloned().fold(f64::MIN, f64::max)
        / values.iter().cloned().fold(f64::MAX, f64::min);
    Outcome::new(
        ok && spread <= 2.0,
        format!(
            "mean |log|f||^2: {}; max/min {spread:.3} (need <= 2)",
            parts.join(", ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let spec = build_bourgain(1105).unwrap();
    let opts = NodalOptions::default();
    let m2 = length_moment(&spec, 8.0, 2, 300, &opts, MC_SEED).unwrap();
    let samples = planck_samples(&spec, 8.0, 300, &opts, MC_SEED).unwrap();
    let m: Vec<f64> = (1..=3)
        .map(|p| moment_from_samples(&samples, p, opts.resolution).value)
        .collect();
    let jensen = m[1] >= m[0] * m[0] && m[2].cbrt() >= m[1].sqrt();
    let rel = m2.error_estimate / m2.value;
    Outcome::new(
        m2.value.is_finite() && rel < 0.1 && jensen,
        format!(
            "E L^2 = {:.3} +- {:.3} ({:.2}% of mean); power means p=1,2,3: {:.4}, {:.4}, {:.4} (nondecreasing: {jensen})",
            m2.value,
            m2.error_estimate,
            100.0 * rel,
            m[0],
            m[1].sqrt(),
            m[2].cbrt()
        ),
    )
}

fn criterion_10() -> Outcome {
    let opts = NodalOptions::default();
    let cases = [
        ("cos-line m=64", build_cos_line(64).unwrap(), 0.35, 2.0),
        ("Bourgain 1105", build_bourgain(1105).unwrap(), 0.46, 1.5),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, spec, radius, r) in cases {
        let rep = locality_check(&spec, [0.5, 0.5], radius, r, 400, &opts, MC_SEED).unwrap();
        ok &= rep.passes();
        parts.push(format!(
            "{name} (disk {radius}, R {r}): discrepancy {:.2}% vs allowed {:.2}%",
            100.0 * rep.discrepancy,
            100.0 * 0.02f64.max(3.0 * rep.relative_standard_error)
        ));
    }
    Outcome::new(ok, parts.join("; "))
}

fn criterion_11() -> Outcome {
    let c2 = variance_constant_formula(&KacRiceInput::new(0.0, 0.0).unwrap()).unwrap();
    let runs = lebesgue_runs();
    let scaled: Vec<f64> = runs.iter().map(|s| s.variance / (s.r * s.r)).collect();
    Outcome::new(
        (c2 - 0.125).abs() < 1e-8,
        format!("variance formula at (alpha, beta) = (0, 0) gives c2 = {c2:.10}"),
    )
    .note("conflict: for a measure with vanishing second moment the variance constant is stated to be c2 = 0, but the formula evaluates to 1/8".into())
    .note(format!(
        "Monte Carlo arbitrates: Lebesgue Var/R^2 = {} at R = 8, 16, 32, falling like R^-2 and so consistent with c2 = 0",
        scaled.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>().join(", ")
    ))
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "Kac-Rice constant", criterion_1),
        (2, "exact nodal lengths", criterion_2),
        (3, "Bourgain length law", criterion_3),
        (4, "random wave mean", criterion_4),
        (5, "Lebesgue variance cancellation", criterion_5),
        (6, "8-arc positive variance", criterion_6),
        (7, "semi-correlation oracle", criterion_7),
        (8, "log-integrability", criterion_8),
        (9, "length moments", criterion_9),
        (10, "locality", criterion_10),
        (11, "variance constant conflict", criterion_11),
    ];
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = Vec::new();
    for (n, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let t = Instant::now();
        let o = run();
        println!(
            "[{}] criterion {n:>2} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.summary,
            t.elapsed().as_secs_f64()
        );
        for note in &o.notes {
            println!("           note: {note}");
        }
        if !o.pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all selected criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}

use clap::{Args, Subcommand};
use nodal_lab::gaussian::sample_moments;
use nodal_lab::loglab::{
    log_moment_to, moment_from_samples, planck_distribution, planck_samples, small_value_measure,
    MomentReport, LOG_REL_TOL,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{NodalArgs, RegionArgs, SpecArgs};
use crate::config::{merged, need, validation, CliResult, Ctx};
use crate::output::{num, Outcome, Report, Status};

#[derive(Subcommand, Debug)]
pub enum LogLabCmd {
    /// Adaptive quadrature of ∫|log|f||^p over a region.
    Logmoment(LogMomentArgs),
    /// Volume of {|f| ≤ δ} for one or more δ.
    Smallvalue(SmallValueArgs),
    /// p-th moment of Planck-window nodal lengths.
    Lengthmoment(LengthMomentArgs),
    /// Distribution of L(F_x)/R over uniform window centers.
    Distribution(DistributionArgs),
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct LogMomentArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub p: Option<u32>,
    #[command(flatten)]
    #[serde(flatten)]
    pub region: RegionArgs,
    /// Base grid cells per side.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Relative tolerance between successive subdivision depths.
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct SmallValueArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    /// Thresholds, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub delta: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(flatten)]
    pub region: RegionArgs,
    #[arg(long)]
    pub resolution: Option<usize>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct LengthMomentArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub r: Option<f64>,
    #[arg(long)]
    pub p: Option<u32>,
    /// Window centers sampled uniformly on the torus.
    #[arg(long)]
    pub n_x: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub nodal: NodalArgs,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct DistributionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub r: Option<f64>,
    #[arg(long)]
    pub n_x: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub nodal: NodalArgs,
}

const MOMENT_COLUMNS: [&str; 9] = [
    "p",
    "value",
    "resolution",
    "subdivision_depth",
    "error_estimate",
    "converged",
    "suspect_leaves",
    "n_samples",
    "unconverged",
];

fn moment_row(m: &MomentReport) -> Vec<String> {
    vec![
        m.p.to_string(),
        num(m.value),
        m.resolution.to_string(),
        m.subdivision_depth.to_string(),
        num(m.error_estimate),
        m.converged.to_string(),
        m.suspect_leaves.to_string(),
        m.n_samples.to_string(),
        m.unconverged.to_string(),
    ]
}

pub fn run(cmd: &LogLabCmd, ctx: &Ctx) -> CliResult<Outcome> {
    match cmd {
        LogLabCmd::Logmoment(a) => {
            let defaults = merged(
                json!({ "p": 2, "resolution": 64, "rel_tol": LOG_REL_TOL }),
                RegionArgs::defaults(),
            );
            let (a, config) = ctx.resolve(a, defaults)?;
            let spec = a.spec.load()?;
            let m = log_moment_to(
                &spec,
                need(&a.p, "p")?,
                &a.region.region()?,
                need(&a.resolution, "resolution")?,
                need(&a.rel_tol, "rel_tol")?,
            )?;
            let line = format!(
                "lambda={} p={} value={} error_estimate={} depth={}",
                spec.lambda(),
                m.p,
                m.value,
                m.error_estimate,
                m.subdivision_depth
            );
            let status = if m.converged {
                Status::Complete
            } else {
                Status::NotConverged(format!(
                    "error estimate {} at depth {}",
                    m.error_estimate, m.subdivision_depth
                ))
            };
            let report = Report::table(MOMENT_COLUMNS.to_vec(), vec![moment_row(&m)], line)
                .with_summary(json!({ "lambda": spec.lambda(), "p": m.p, "value": m.value, "error_estimate": m.error_estimate }))
                .with_status(status);
            Ok(Outcome {
                command: "loglab logmoment",
                config,
                report,
            })
        }
        LogLabCmd::Smallvalue(a) => {
            let defaults = merged(
                json!({ "delta": [0.1, 0.01, 0.001], "resolution": 64 }),
                RegionArgs::defaults(),
            );
            let (a, config) = ctx.resolve(a, defaults)?;
            let spec = a.spec.load()?;
            let region = a.region.region()?;
            let resolution = need(&a.resolution, "resolution")?;
            let deltas = need(&a.delta, "delta")?;
            if deltas.is_empty() {
                return Err(validation("--delta needs at least one value"));
            }
            let rows = deltas
                .iter()
                .map(|&d| {
                    small_value_measure(&spec, d, &region, resolution).map(|v| vec![num(d), num(v)])
                })
                .collect::<nodal_lab::Result<Vec<_>>>()?;
            let line = format!("lambda={} thresholds={}", spec.lambda(), rows.len());
            Ok(Outcome {
                command: "loglab smallvalue",
                config,
                report: Report::table(vec!["delta", "measure"], rows, line),
            })
        }
        LogLabCmd::Lengthmoment(a) => {
            let (a, config) = ctx.resolve(
                a,
                merged(json!({ "p": 2, "n_x": 300 }), NodalArgs::defaults()),
            )?;
            let spec = a.spec.load()?;
            let seed = need(&a.seed, "seed")?;
            let r = need(&a.r, "R")?;
            let p = need(&a.p, "p")?;
            let n_x = need(&a.n_x, "n_x")?;
            if p < 1 {
                return Err(validation("--p must be at least 1"));
            }
            if n_x < 30 {
                return Err(validation(format!("--n-x must be at least 30, got {n_x}")));
            }
            let opts = a.nodal.options()?;
            let samples = planck_samples(&spec, r, n_x, &opts, seed)?;
            let m = moment_from_samples(&samples, p, opts.resolution);
            let powers: Vec<f64> = samples.iter().map(|s| s.length.powi(p as i32)).collect();
            let (_, var, _, _) = sample_moments(&powers);
            let line = format!(
                "lambda={} R={r} p={p} moment={} se={}",
                spec.lambda(),
                m.value,
                m.error_estimate
            );
            let status = if m.unconverged == 0 {
                Status::Complete
            } else {
                Status::NotConverged(format!("{} window lengths unconverged", m.unconverged))
            };
            let report = Report::table(MOMENT_COLUMNS.to_vec(), vec![moment_row(&m)], line)
                .with_summary(json!({
                    "lambda": spec.lambda(),
                    "R": r,
                    "p": p,
                    "n_x": n_x,
                    "mean": m.value,
                    "var": var,
                    "se": m.error_estimate,
                    "histogram": [],
                }))
                .with_status(status);
            Ok(Outcome {
                command: "loglab lengthmoment",
                config,
                report,
            })
        }
        LogLabCmd::Distribution(a) => {
            let (a, config) =
                ctx.resolve(a, merged(json!({ "n_x": 300 }), NodalArgs::defaults()))?;
            let spec = a.spec.load()?;
            let seed = need(&a.seed, "seed")?;
            let r = need(&a.r, "R")?;
            let d = planck_distribution(&spec, r, need(&a.n_x, "n_x")?, &a.nodal.options()?, seed)?;
            let rows = d
                .samples
                .iter()
                .map(|s| {
                    vec![
                        s.index.to_string(),
                        num(s.x[0]),
                        num(s.x[1]),
                        num(s.length),
                        num(s.length / r),
                        s.converged.to_string(),
                    ]
                })
                .collect();
            let far = d.equidist_fraction(0.05);
            let line = format!(
                "lambda={} R={r} mean={} var={} se={} center={} far_5pct={far}",
                d.lambda, d.mean, d.variance, d.standard_error, d.center
            );
            let status = if d.unconverged == 0 {
                Status::Complete
            } else {
                Status::NotConverged(format!("{} window lengths unconverged", d.unconverged))
            };
            let report = Report::table(
                vec!["index", "x1", "x2", "length", "ratio", "converged"],
                rows,
                line,
            )
            .with_summary(json!({
                "lambda": d.lambda,
                "R": r,
                "p": Value::Null,
                "n_x": d.n_x,
                "mean": d.mean,
                "var": d.variance,
                "se": d.standard_error,
                "histogram": d.histogram,
                "histogram_edges": d.histogram_edges(),
                "center": d.center,
                "equidist_fraction_5pct": far,
            }))
            .with_status(status);
            Ok(Outcome {
                command: "loglab distribution",
                config,
                report,
            })
        }
    }
}

use clap::{Args, Subcommand};
use nodal_lab::lattice::{
    find_correlations, find_semi_correlations, lattice_points, min_quasi_correlation,
    scan_admissible_eigenvalues, Axis, CorrelationReport, Tuple,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::args::BudgetArgs;
use crate::config::{merged, need, validation, CliResult, Ctx};
use crate::output::{num, Outcome, Report, Status};

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Lattice points on the circle |ξ|² = λ.
    Points(PointsArgs),
    /// Flags eigenvalues up to a bound that carry nontrivial semi-correlations.
    Scan(ScanArgs),
    /// Nontrivial vanishing sums of 2ℓ lattice points.
    Correlations(CorrelationArgs),
    /// Nontrivial vanishing sums of one coordinate of 2ℓ lattice points.
    Semi(CorrelationArgs),
    /// Smallest nonzero sum of 2ℓ lattice points.
    Quasi(QuasiArgs),
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct PointsArgs {
    #[arg(long)]
    pub lambda: Option<u64>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct ScanArgs {
    /// Largest λ scanned.
    #[arg(long)]
    pub bound: Option<u64>,
    #[arg(long)]
    pub ell: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct CorrelationArgs {
    #[arg(long)]
    pub lambda: Option<u64>,
    #[arg(long)]
    pub ell: Option<usize>,
    /// first or second (semi-correlations only).
    #[arg(long)]
    pub axis: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct QuasiArgs {
    #[arg(long)]
    pub lambda: Option<u64>,
    #[arg(long)]
    pub ell: Option<usize>,
    /// first, second or full-vector.
    #[arg(long)]
    pub axis: Option<String>,
    /// Exponent in the threshold λ^(−1/2+δ).
    #[arg(long)]
    pub delta: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub budget: BudgetArgs,
}

fn parse_axis(text: &str) -> CliResult<Axis> {
    match text {
        "first" => Ok(Axis::First),
        "second" => Ok(Axis::Second),
        "full-vector" => Ok(Axis::FullVector),
        other => Err(validation(format!(
            "unknown axis '{other}' (first, second, full-vector)"
        ))),
    }
}

fn tuple_text(t: &Tuple) -> String {
    match t {
        Tuple::Values(v) => v
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        Tuple::Points(p) => p
            .iter()
            .map(|q| format!("({},{})", q.x1, q.x2))
            .collect::<Vec<_>>()
            .join(" "),
    }
}

/// A search that ran out of budget still yields a (header-only) table.
fn tuples_report(
    result: nodal_lab::Result<CorrelationReport>,
    lambda: u64,
    ell: usize,
) -> CliResult<Report> {
    let columns = vec!["index", "tuple"];
    match result {
        Ok(rep) => {
            let rows: Vec<Vec<String>> = rep
                .nontrivial_tuples
                .iter()
                .enumerate()
                .map(|(i, t)| vec![i.to_string(), tuple_text(t)])
                .collect();
            let line = format!(
                "lambda={lambda} ell={ell} nontrivial={} cost={}",
                rows.len(),
                rep.cost
            );
            Ok(Report::table(columns, rows, line)
                .with_summary(json!({ "nontrivial": rep.nontrivial_tuples.len() })))
        }
        Err(e @ nodal_lab::Error::BudgetExceeded { .. }) => {
            Ok(
                Report::table(columns, Vec::new(), format!("lambda={lambda} ell={ell}"))
                    .with_status(Status::Truncated(e.to_string())),
            )
        }
        Err(e) => Err(e.into()),
    }
}

pub fn run(cmd: &LatticeCmd, ctx: &Ctx) -> CliResult<Outcome> {
    match cmd {
        LatticeCmd::Points(a) => {
            let (a, config) = ctx.resolve(a, json!({}))?;
            let lambda = need(&a.lambda, "lambda")?;
            let circle = lattice_points(lambda);
            let rows: Vec<Vec<String>> = circle
                .points
                .iter()
                .map(|p| vec![p.x1.to_string(), p.x2.to_string()])
                .collect();
            let line = format!("lambda={lambda} points={}", rows.len());
            Ok(Outcome {
                command: "lattice points",
                config,
                report: Report::table(vec!["x1", "x2"], rows, line),
            })
        }
        LatticeCmd::Scan(a) => {
            let (a, config) =
                ctx.resolve(a, merged(json!({ "ell": 2 }), BudgetArgs::defaults()))?;
            let bound = need(&a.bound, "bound")?;
            let ell = need(&a.ell, "ell")?;
            let rep = scan_admissible_eigenvalues(bound, ell, &a.budget.budget()?)?;
            let rows: Vec<Vec<String>> = rep
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.lambda.to_string(),
                        r.has_nontrivial_semi_correlation.to_string(),
                        num(r.running_density),
                    ]
                })
                .collect();
            let flagged = rep
                .rows
                .iter()
                .filter(|r| r.has_nontrivial_semi_correlation)
                .count();
            let last = rep.rows.last().map(|r| r.lambda).unwrap_or(0);
            let line = format!(
                "bound={bound} ell={ell} scanned={} flagged={flagged} last_lambda={last}",
                rep.rows.len()
            );
            let status = if rep.truncated {
                Status::Truncated("search budget exhausted".into())
            } else {
                Status::Complete
            };
            let report = Report::table(vec!["lambda", "has_nontrivial_semi_correlation", "running_density"], rows, line)
                .with_summary(json!({ "scanned": rep.rows.len(), "flagged": flagged, "truncated": rep.truncated }))
                .with_status(status);
            Ok(Outcome {
                command: "lattice scan",
                config,
                report,
            })
        }
        LatticeCmd::Correlations(a) => {
            let (a, config) =
                ctx.resolve(a, merged(json!({ "ell": 2 }), BudgetArgs::defaults()))?;
            if a.axis.is_some() {
                return Err(validation("--axis applies to semi and quasi only"));
            }
            let lambda = need(&a.lambda, "lambda")?;
            let ell = need(&a.ell, "ell")?;
            let report = tuples_report(
                find_correlations(lambda, ell, &a.budget.budget()?),
                lambda,
                ell,
            )?;
            Ok(Outcome {
                command: "lattice correlations",
                config,
                report,
            })
        }
        LatticeCmd::Semi(a) => {
            let (a, config) = ctx.resolve(
                a,
                merged(json!({ "ell": 2, "axis": "first" }), BudgetArgs::defaults()),
            )?;
            let lambda = need(&a.lambda, "lambda")?;
            let ell = need(&a.ell, "ell")?;
            let axis = parse_axis(&need(&a.axis, "axis")?)?;
            let report = tuples_report(
                find_semi_correlations(lambda, ell, axis, &a.budget.budget()?),
                lambda,
                ell,
            )?;
            Ok(Outcome {
                command: "lattice semi",
                config,
                report,
            })
        }
        LatticeCmd::Quasi(a) => {
            let defaults = merged(
                json!({ "ell": 2, "axis": "full-vector", "delta": 0.0 }),
                BudgetArgs::defaults(),
            );
            let (a, config) = ctx.resolve(a, defaults)?;
            let lambda = need(&a.lambda, "lambda")?;
            let ell = need(&a.ell, "ell")?;
            let axis_name = need(&a.axis, "axis")?;
            let columns = vec![
                "lambda",
                "ell",
                "axis",
                "min_nonzero_abs",
                "threshold_ratio",
                "cost",
            ];
            let report = match min_quasi_correlation(
                lambda,
                ell,
                parse_axis(&axis_name)?,
                need(&a.delta, "delta")?,
                &a.budget.budget()?,
            ) {
                Ok(rep) => {
                    let min = rep.min_nonzero_abs.unwrap_or(f64::NAN);
                    let ratio = rep.threshold_ratio.unwrap_or(f64::NAN);
                    let row = vec![
                        lambda.to_string(),
                        ell.to_string(),
                        axis_name,
                        num(min),
                        num(ratio),
                        rep.cost.to_string(),
                    ];
                    Report::table(
                        columns,
                        vec![row],
                        format!("lambda={lambda} ell={ell} min={min} ratio={ratio}"),
                    )
                    .with_summary(json!({ "min_nonzero_abs": min, "threshold_ratio": ratio }))
                }
                Err(e @ nodal_lab::Error::BudgetExceeded { .. }) => {
                    Report::table(columns, Vec::new(), format!("lambda={lambda} ell={ell}"))
                        .with_status(Status::Truncated(e.to_string()))
                }
                Err(e) => return Err(e.into()),
            };
            Ok(Outcome {
                command: "lattice quasi",
                config,
                report,
            })
        }
    }
}

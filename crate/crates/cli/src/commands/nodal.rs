use clap::{Args, Subcommand};
use nodal_lab::nodal::{
    doubling_ratio, locality_check, nodal_length, nodal_length_planck, NodalEstimate,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::args::{NodalArgs, RegionArgs, SpecArgs};
use crate::config::{merged, need, need_pair, CliResult, Ctx};
use crate::output::{num, Outcome, Report, Status};

#[derive(Subcommand, Debug)]
pub enum NodalCmd {
    /// Nodal length over a region of the torus.
    Length(LengthArgs),
    /// Nodal length of the rescaled window F_x(y) = f(x + R y / √λ).
    Planck(PlanckArgs),
    /// Doubling exponent log(sup over 2Q / sup over Q).
    Doubling(DoublingArgs),
    /// Disk length against the Monte-Carlo average of window lengths.
    Locality(LocalityArgs),
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct LengthArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub region: RegionArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub nodal: NodalArgs,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct PlanckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    /// Window center x,y on the torus.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub r: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub nodal: NodalArgs,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct DoublingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub center: Option<Vec<f64>>,
    #[arg(long)]
    pub half_side: Option<f64>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct LocalityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub center: Option<Vec<f64>>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub r: Option<f64>,
    /// Monte-Carlo window centers.
    #[arg(long)]
    pub n_mc: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub nodal: NodalArgs,
}

fn estimate_report(e: &NodalEstimate, lead: String) -> Report {
    let rows = e
        .history
        .iter()
        .map(|l| {
            vec![
                l.resolution.to_string(),
                num(l.length),
                l.cell_ambiguities.to_string(),
            ]
        })
        .collect();
    let line = format!(
        "{lead} length={} resolution={} refinement_error={}",
        e.length, e.resolution, e.refinement_error
    );
    let status = if e.converged {
        Status::Complete
    } else {
        Status::NotConverged(format!(
            "refinement error {} at resolution {}",
            e.refinement_error, e.resolution
        ))
    };
    Report::table(vec!["resolution", "length", "cell_ambiguities"], rows, line)
        .with_summary(json!({
            "length": e.length,
            "resolution": e.resolution,
            "refinement_error": e.refinement_error,
            "converged": e.converged,
            "no_crossing": e.no_crossing,
        }))
        .with_status(status)
}

pub fn run(cmd: &NodalCmd, ctx: &Ctx) -> CliResult<Outcome> {
    match cmd {
        NodalCmd::Length(a) => {
            let (a, config) =
                ctx.resolve(a, merged(RegionArgs::defaults(), NodalArgs::defaults()))?;
            let spec = a.spec.load()?;
            let e = nodal_length(&spec, &a.region.region()?, &a.nodal.options()?)?;
            let report = estimate_report(&e, format!("lambda={}", spec.lambda()));
            Ok(Outcome {
                command: "nodal length",
                config,
                report,
            })
        }
        NodalCmd::Planck(a) => {
            let (a, config) = ctx.resolve(a, NodalArgs::defaults())?;
            let spec = a.spec.load()?;
            let x = need_pair(&a.x, "x")?;
            let r = need(&a.r, "R")?;
            let e = nodal_length_planck(&spec, x, r, &a.nodal.options()?)?;
            let report = estimate_report(&e, format!("lambda={} R={r}", spec.lambda()));
            Ok(Outcome {
                command: "nodal planck",
                config,
                report,
            })
        }
        NodalCmd::Doubling(a) => {
            let (a, config) = ctx.resolve(a, json!({ "center": [0.5, 0.5], "half_side": 0.05 }))?;
            let spec = a.spec.load()?;
            let c = need_pair(&a.center, "center")?;
            let h = need(&a.half_side, "half_side")?;
            let ratio = doubling_ratio(&spec, c, h)?;
            let row = vec![
                spec.lambda().to_string(),
                num(c[0]),
                num(c[1]),
                num(h),
                num(ratio),
            ];
            let line = format!("lambda={} doubling={ratio}", spec.lambda());
            let report = Report::table(
                vec!["lambda", "center_x", "center_y", "half_side", "doubling"],
                vec![row],
                line,
            )
            .with_summary(json!({ "doubling": ratio }));
            Ok(Outcome {
                command: "nodal doubling",
                config,
                report,
            })
        }
        NodalCmd::Locality(a) => {
            let (a, config) = ctx.resolve(
                a,
                merged(
                    json!({ "center": [0.5, 0.5], "n_mc": 400 }),
                    NodalArgs::defaults(),
                ),
            )?;
            let spec = a.spec.load()?;
            let seed = need(&a.seed, "seed")?;
            let rep = locality_check(
                &spec,
                need_pair(&a.center, "center")?,
                need(&a.radius, "radius")?,
                need(&a.r, "R")?,
                need(&a.n_mc, "n_mc")?,
                &a.nodal.options()?,
                seed,
            )?;
            let passes = rep.passes();
            let row = vec![
                num(rep.lhs),
                num(rep.rhs),
                num(rep.rhs_standard_error),
                num(rep.discrepancy),
                num(rep.relative_standard_error),
                rep.n_mc.to_string(),
                rep.unconverged.to_string(),
                passes.to_string(),
            ];
            let columns = vec![
                "lhs",
                "rhs",
                "rhs_standard_error",
                "discrepancy",
                "relative_standard_error",
                "n_mc",
                "unconverged",
                "passes",
            ];
            let line = format!(
                "lhs={} rhs={} discrepancy={} passes={passes}",
                rep.lhs, rep.rhs, rep.discrepancy
            );
            let status = if rep.unconverged == 0 {
                Status::Complete
            } else {
                Status::NotConverged(format!("{} window lengths unconverged", rep.unconverged))
            };
            let report = Report::table(columns, vec![row], line)
                .with_summary(json!({ "discrepancy": rep.discrepancy, "passes": passes }))
                .with_status(status);
            Ok(Outcome {
                command: "nodal locality",
                config,
                report,
            })
        }
    }
}

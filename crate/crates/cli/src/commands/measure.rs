use clap::{Args, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::args::{pairs, parse_measure};
use crate::config::{need, validation, CliResult, Ctx};
use crate::output::{num, Outcome, Report};

#[derive(Subcommand, Debug)]
pub enum MeasureCmd {
    /// Fourier moments μ̂(k) for k = 0..=kmax.
    Moments(MomentsArgs),
    /// Covariance r(w) = ∫ e(⟨w,u⟩) dμ(u).
    Covariance(CovarianceArgs),
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct MomentsArgs {
    /// lebesgue, eight-arc, arcs:I,J,... or file:PATH.
    #[arg(long)]
    pub measure: Option<String>,
    #[arg(long)]
    pub kmax: Option<u32>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct CovarianceArgs {
    #[arg(long)]
    pub measure: Option<String>,
    /// Lags x,y,x,y,...
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub w: Option<Vec<f64>>,
}

pub fn run(cmd: &MeasureCmd, ctx: &Ctx) -> CliResult<Outcome> {
    match cmd {
        MeasureCmd::Moments(a) => {
            let (a, config) = ctx.resolve(a, json!({ "measure": "lebesgue", "kmax": 8 }))?;
            let name = need(&a.measure, "measure")?;
            let mu = parse_measure(&name)?;
            let kmax = need(&a.kmax, "kmax")?;
            let kmax = i32::try_from(kmax).map_err(|_| validation("--kmax too large"))?;
            let rows = (0..=kmax)
                .map(|k| {
                    let m = mu.fourier_moment(k);
                    vec![k.to_string(), num(m.re), num(m.im)]
                })
                .collect();
            let m2 = mu.fourier_moment(2);
            let line = format!("measure={name} mu2=({}, {})", m2.re, m2.im);
            let report = Report::table(vec!["k", "re", "im"], rows, line).with_summary(
                json!({ "alpha": m2.re, "beta": m2.im, "degenerate": mu.is_degenerate() }),
            );
            Ok(Outcome {
                command: "measure moments",
                config,
                report,
            })
        }
        MeasureCmd::Covariance(a) => {
            let (a, config) = ctx.resolve(a, json!({ "measure": "lebesgue", "w": [1.0, 0.0] }))?;
            let name = need(&a.measure, "measure")?;
            let mu = parse_measure(&name)?;
            let lags = pairs(&need(&a.w, "w")?, "w")?;
            let rows: Vec<Vec<String>> = lags
                .iter()
                .map(|&w| vec![num(w[0]), num(w[1]), num(mu.covariance(w))])
                .collect();
            let line = format!("measure={name} lags={}", rows.len());
            Ok(Outcome {
                command: "measure covariance",
                config,
                report: Report::table(vec!["w1", "w2", "r"], rows, line),
            })
        }
    }
}

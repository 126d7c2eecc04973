use clap::{Args, Subcommand};
use nodal_lab::field::PlanarField;
use nodal_lab::gaussian::{discretize_measure, mc_nodal_statistics, sample_field, McOptions};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{parse_measure, NodalArgs};
use crate::config::{merged, need, need_pair, CliResult, Ctx};
use crate::output::{num, Outcome, Report, Status};

#[derive(Subcommand, Debug)]
pub enum RwmCmd {
    /// One realization of the random wave: its coefficients, or its values on a grid.
    Sample(SampleArgs),
    /// Monte-Carlo nodal length statistics on the unit square.
    Stats(StatsArgs),
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct SampleArgs {
    /// lebesgue, eight-arc, arcs:I,J,... or file:PATH.
    #[arg(long)]
    pub measure: Option<String>,
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub r: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Atoms used to discretize a continuous measure.
    #[arg(long)]
    pub n_atoms: Option<usize>,
    /// Write values on the n×n grid of [0,1)² instead of coefficients.
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct StatsArgs {
    #[arg(long)]
    pub measure: Option<String>,
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub r: Option<f64>,
    /// Number of independent realizations.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_atoms: Option<usize>,
    /// Center of the unit square the length is measured on, as x,y.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub offset: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(flatten)]
    pub nodal: NodalArgs,
}

pub fn run(cmd: &RwmCmd, ctx: &Ctx) -> CliResult<Outcome> {
    let n_atoms = McOptions::default().n_atoms;
    match cmd {
        RwmCmd::Sample(a) => {
            let (a, config) =
                ctx.resolve(a, json!({ "measure": "lebesgue", "n_atoms": n_atoms }))?;
            let mu = discretize_measure(
                &parse_measure(&need(&a.measure, "measure")?)?,
                need(&a.n_atoms, "n_atoms")?,
            )?;
            let seed = need(&a.seed, "seed")?;
            let r = need(&a.r, "R")?;
            let f = sample_field(&mu, r, seed)?;
            let report = match a.grid {
                Some(n) if n > 0 => {
                    let h = 1.0 / n as f64;
                    let rows = (0..n)
                        .flat_map(|i| (0..n).map(move |j| [i as f64 * h, j as f64 * h]))
                        .map(|y| vec![num(y[0]), num(y[1]), num(f.value(y))])
                        .collect();
                    Report::table(vec!["y1", "y2", "value"], rows, format!("R={r} grid={n}"))
                }
                _ => {
                    let rows = (0..f.frequencies.len())
                        .map(|k| {
                            let u = f.frequencies[k];
                            vec![
                                k.to_string(),
                                num(u[0]),
                                num(u[1]),
                                num(f.amplitudes[k]),
                                num(f.a[k]),
                                num(f.b[k]),
                            ]
                        })
                        .collect();
                    Report::table(
                        vec!["index", "u1", "u2", "amplitude", "a", "b"],
                        rows,
                        format!("R={r} pairs={}", f.frequencies.len()),
                    )
                }
            };
            Ok(Outcome {
                command: "rwm sample",
                config,
                report,
            })
        }
        RwmCmd::Stats(a) => {
            let defaults = merged(
                json!({ "measure": "lebesgue", "n": 200, "n_atoms": n_atoms, "offset": [0.0, 0.0] }),
                NodalArgs::defaults(),
            );
            let (a, config) = ctx.resolve(a, defaults)?;
            let mu = parse_measure(&need(&a.measure, "measure")?)?;
            let seed = need(&a.seed, "seed")?;
            let r = need(&a.r, "R")?;
            let opts = McOptions {
                nodal: a.nodal.options()?,
                n_atoms: need(&a.n_atoms, "n_atoms")?,
                offset: need_pair(&a.offset, "offset")?,
            };
            let s = mc_nodal_statistics(&mu, r, need(&a.n, "n")?, &opts, seed)?;
            let rows = s
                .samples
                .iter()
                .map(|x| {
                    vec![
                        x.sample_index.to_string(),
                        x.seed.to_string(),
                        num(x.length),
                        x.converged.to_string(),
                    ]
                })
                .collect();
            let line = format!(
                "R={r} n={} mean={} var={} se={} var/R^2={}",
                s.n_samples,
                s.mean,
                s.variance,
                s.standard_error,
                s.variance / (r * r)
            );
            let status = if s.unconverged == 0 {
                Status::Complete
            } else {
                Status::NotConverged(format!("{} samples unconverged", s.unconverged))
            };
            let report = Report::table(
                vec!["sample_index", "seed", "length", "converged"],
                rows,
                line,
            )
            .with_summary(json!({
                "lambda": Value::Null,
                "R": r,
                "p": Value::Null,
                "n_x": s.n_samples,
                "mean": s.mean,
                "var": s.variance,
                "se": s.standard_error,
                "var_se": s.variance_standard_error,
                "histogram": [],
                "unconverged": s.unconverged,
            }))
            .with_status(status);
            Ok(Outcome {
                command: "rwm stats",
                config,
                report,
            })
        }
    }
}

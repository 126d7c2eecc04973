use clap::{Args, Subcommand};
use nodal_lab::eigen::{build_arc_bourgain, build_bourgain, build_cos_line, build_random_flat};
use nodal_lab::lattice::lattice_points;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::args::{pairs, SpecArgs};
use crate::config::{need, validation, CliResult, Ctx};
use crate::output::{num, Outcome, Report};

#[derive(Subcommand, Debug)]
pub enum EigenCmd {
    /// Builds an eigenfunction and writes its spec as JSON.
    Build(BuildArgs),
    /// Evaluates an eigenfunction at points or on a grid.
    Eval(EvalArgs),
    /// Flatness margin max|a|²·N^(1−ε).
    Flatness(FlatnessArgs),
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct BuildArgs {
    /// bourgain, arc-bourgain, cos-line or random-flat.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub lambda: Option<u64>,
    /// Frequency of the cos-line function cos(2π m x₁).
    #[arg(long)]
    pub m: Option<u64>,
    /// Eighth-circle arcs kept by arc-bourgain.
    #[arg(long, value_delimiter = ',')]
    pub arcs: Option<Vec<usize>>,
    /// Flatness level of random-flat.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct EvalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    /// Evaluation points x,y,x,y,...; overrides --grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Option<Vec<f64>>,
    /// Evaluate on the n×n grid (i/n, j/n).
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct FlatnessArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub epsilon: Option<f64>,
}

pub fn run(cmd: &EigenCmd, ctx: &Ctx) -> CliResult<Outcome> {
    match cmd {
        EigenCmd::Build(a) => {
            let (a, config) = ctx.resolve(a, json!({ "kind": "bourgain" }))?;
            let kind = need(&a.kind, "kind")?;
            let spec =
                match kind.as_str() {
                    "bourgain" => build_bourgain(need(&a.lambda, "lambda")?)?,
                    "arc-bourgain" => {
                        build_arc_bourgain(need(&a.lambda, "lambda")?, &need(&a.arcs, "arcs")?)?
                    }
                    "cos-line" => build_cos_line(need(&a.m, "m")?)?,
                    "random-flat" => build_random_flat(
                        need(&a.lambda, "lambda")?,
                        need(&a.epsilon, "epsilon")?,
                        need(&a.seed, "seed")?,
                    )?,
                    other => return Err(validation(format!(
                        "unknown kind '{other}' (bourgain, arc-bourgain, cos-line, random-flat)"
                    ))),
                };
            let line = format!(
                "kind={kind} lambda={} terms={}",
                spec.lambda(),
                spec.coefficients().len()
            );
            let doc = serde_json::to_value(&spec)
                .map_err(|e| crate::config::CliError::Internal(e.to_string()))?;
            Ok(Outcome {
                command: "eigen build",
                config,
                report: Report::document(doc, line),
            })
        }
        EigenCmd::Eval(a) => {
            let (a, config) = ctx.resolve(a, json!({}))?;
            let spec = a.spec.load()?;
            let points = match (&a.points, a.grid) {
                (Some(p), _) => pairs(p, "points")?,
                (None, Some(n)) if n > 0 => {
                    let h = 1.0 / n as f64;
                    (0..n)
                        .flat_map(|i| (0..n).map(move |j| [i as f64 * h, j as f64 * h]))
                        .collect()
                }
                _ => return Err(validation("give --points x,y,... or --grid n (n ≥ 1)")),
            };
            let rows: Vec<Vec<String>> = points
                .iter()
                .map(|&x| {
                    spec.evaluate_checked(x)
                        .map(|v| vec![num(x[0]), num(x[1]), num(v)])
                })
                .collect::<nodal_lab::Result<_>>()?;
            let line = format!("lambda={} points={}", spec.lambda(), rows.len());
            Ok(Outcome {
                command: "eigen eval",
                config,
                report: Report::table(vec!["x1", "x2", "value"], rows, line),
            })
        }
        EigenCmd::Flatness(a) => {
            let (a, config) = ctx.resolve(a, json!({ "epsilon": 0.1 }))?;
            let spec = a.spec.load()?;
            let eps = need(&a.epsilon, "epsilon")?;
            let margin = spec.flatness_margin(eps);
            let n = lattice_points(spec.lambda()).len();
            let flat = margin <= 100.0;
            let row = vec![
                spec.lambda().to_string(),
                n.to_string(),
                num(eps),
                num(margin),
                flat.to_string(),
            ];
            let line = format!(
                "lambda={} N={n} epsilon={eps} margin={margin} flat={flat}",
                spec.lambda()
            );
            let report = Report::table(
                vec!["lambda", "n_points", "epsilon", "margin", "flat"],
                vec![row],
                line,
            )
            .with_summary(json!({ "margin": margin, "flat": flat }));
            Ok(Outcome {
                command: "eigen flatness",
                config,
                report,
            })
        }
    }
}

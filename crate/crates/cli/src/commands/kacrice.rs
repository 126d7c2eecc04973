use clap::{Args, Subcommand};
use nodal_lab::kac_rice::{
    berry_variance, expected_length_constant, physical_length_density, variance_constant_formula,
    variance_integral, KacRiceInput,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{need, CliResult, Ctx};
use crate::output::{num, Outcome, Report};

#[derive(Subcommand, Debug)]
pub enum KacRiceCmd {
    /// Expected nodal length constant c₁(α, β).
    C1(MomentArgs),
    /// The closed-form variance constant and its integral term.
    C2Formula(MomentArgs),
    /// Berry's reference variance log R / (512π).
    Berry(BerryArgs),
}

/// Real and imaginary part of μ̂(2).
#[derive(Args, Debug, Serialize, Deserialize)]
pub struct MomentArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct BerryArgs {
    /// One or more scales R, comma separated.
    #[arg(long = "R", value_delimiter = ',')]
    #[serde(rename = "R")]
    pub r: Option<Vec<f64>>,
}

pub fn run(cmd: &KacRiceCmd, ctx: &Ctx) -> CliResult<Outcome> {
    let zero = json!({ "alpha": 0.0, "beta": 0.0 });
    match cmd {
        KacRiceCmd::C1(a) => {
            let (a, config) = ctx.resolve(a, zero)?;
            let input = KacRiceInput::new(need(&a.alpha, "alpha")?, need(&a.beta, "beta")?)?;
            let c1 = expected_length_constant(&input)?;
            let density = physical_length_density(&input)?;
            let row = vec![num(input.alpha), num(input.beta), num(c1), num(density)];
            let line = format!("c1={c1} physical_density={density}");
            let report = Report::table(
                vec!["alpha", "beta", "c1", "physical_density"],
                vec![row],
                line,
            )
            .with_summary(json!({ "c1": c1, "physical_density": density }));
            Ok(Outcome {
                command: "kacrice c1",
                config,
                report,
            })
        }
        KacRiceCmd::C2Formula(a) => {
            let (a, config) = ctx.resolve(a, zero)?;
            let input = KacRiceInput::new(need(&a.alpha, "alpha")?, need(&a.beta, "beta")?)?;
            let integral = variance_integral(&input)?;
            let c2 = variance_constant_formula(&input)?;
            let row = vec![num(input.alpha), num(input.beta), num(integral), num(c2)];
            let line = format!("c2_formula={c2} integral={integral}");
            let report = Report::table(
                vec!["alpha", "beta", "integral", "c2_formula"],
                vec![row],
                line,
            )
            .with_summary(json!({ "c2_formula": c2, "integral": integral }));
            Ok(Outcome {
                command: "kacrice c2-formula",
                config,
                report,
            })
        }
        KacRiceCmd::Berry(a) => {
            let (a, config) = ctx.resolve(a, json!({}))?;
            let rs = need(&a.r, "R")?;
            let rows = rs
                .iter()
                .map(|&r| berry_variance(r).map(|v| vec![num(r), num(v)]))
                .collect::<nodal_lab::Result<Vec<_>>>()?;
            let line = format!("scales={}", rows.len());
            Ok(Outcome {
                command: "kacrice berry",
                config,
                report: Report::table(vec!["R", "berry_variance"], rows, line),
            })
        }
    }
}

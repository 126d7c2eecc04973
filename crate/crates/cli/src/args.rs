//! Argument groups shared across commands.

use std::path::PathBuf;

use clap::Args;
use nodal_lab::eigen::{build_bourgain, EigenfunctionSpec};
use nodal_lab::lattice::SearchBudget;
use nodal_lab::measure::DirectionMeasure;
use nodal_lab::nodal::{NodalOptions, Region};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{need, need_pair, validation, CliResult};

/// Where the eigenfunction comes from: a JSON spec file written by
/// `eigen build`, or the Bourgain function of a given λ.
#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SpecArgs {
    /// Eigenfunction spec JSON, as written by `eigen build`.
    #[arg(long, value_name = "FILE")]
    pub spec: Option<PathBuf>,
    /// Use the Bourgain eigenfunction of this λ instead of a spec file.
    #[arg(long, value_name = "LAMBDA")]
    pub bourgain: Option<u64>,
}

impl SpecArgs {
    pub fn load(&self) -> CliResult<EigenfunctionSpec> {
        match (&self.spec, self.bourgain) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| validation(format!("cannot read spec {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| validation(format!("spec {}: {e}", path.display())))
            }
            (None, Some(lambda)) => Ok(build_bourgain(lambda)?),
            (Some(_), Some(_)) => Err(validation("give either --spec or --bourgain, not both")),
            (None, None) => Err(validation(
                "missing eigenfunction: give --spec FILE or --bourgain LAMBDA",
            )),
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct NodalArgs {
    /// Starting marching-squares cells per side (power of two, at least 64).
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Relative tolerance between successive grid doublings.
    #[arg(long)]
    pub refine_tol: Option<f64>,
    #[arg(long)]
    pub max_resolution: Option<usize>,
}

impl NodalArgs {
    pub fn defaults() -> Value {
        let d = NodalOptions::default();
        json!({ "resolution": d.resolution, "refine_tol": d.refine_tol, "max_resolution": d.max_resolution })
    }

    pub fn options(&self) -> CliResult<NodalOptions> {
        Ok(NodalOptions {
            resolution: need(&self.resolution, "resolution")?,
            refine_tol: need(&self.refine_tol, "refine_tol")?,
            max_resolution: need(&self.max_resolution, "max_resolution")?,
        })
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct RegionArgs {
    /// torus, square or disk.
    #[arg(long)]
    pub region: Option<String>,
    /// Center of a square or disk region, as x,y.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub center: Option<Vec<f64>>,
    #[arg(long)]
    pub half_side: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
}

impl RegionArgs {
    pub fn defaults() -> Value {
        json!({ "region": "torus" })
    }

    pub fn region(&self) -> CliResult<Region> {
        match need(&self.region, "region")?.as_str() {
            "torus" => Ok(Region::FullTorus),
            "square" => Ok(Region::Square {
                center: need_pair(&self.center, "center")?,
                half_side: need(&self.half_side, "half_side")?,
            }),
            "disk" => Ok(Region::Disk {
                center: need_pair(&self.center, "center")?,
                radius: need(&self.radius, "radius")?,
            }),
            other => Err(validation(format!(
                "unknown region '{other}' (torus, square, disk)"
            ))),
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct BudgetArgs {
    /// Cap on candidate tuples examined.
    #[arg(long)]
    pub max_candidates: Option<u64>,
    /// Raw tuple count above which the search switches to meet-in-the-middle.
    #[arg(long)]
    pub mitm_threshold: Option<u64>,
}

impl BudgetArgs {
    pub fn defaults() -> Value {
        let d = SearchBudget::default();
        json!({ "max_candidates": d.max_candidates as u64, "mitm_threshold": d.mitm_threshold as u64 })
    }

    pub fn budget(&self) -> CliResult<SearchBudget> {
        Ok(SearchBudget {
            max_candidates: need(&self.max_candidates, "max_candidates")?.into(),
            mitm_threshold: need(&self.mitm_threshold, "mitm_threshold")?.into(),
        })
    }
}

/// Parses `lebesgue`, `eight-arc`, `arcs:1,5` (eighth-circle arcs by index)
/// or `file:PATH` (a measure JSON document).
pub fn parse_measure(text: &str) -> CliResult<DirectionMeasure> {
    if text == "lebesgue" {
        return Ok(DirectionMeasure::Lebesgue);
    }
    if text == "eight-arc" {
        return Ok(DirectionMeasure::eight_arc());
    }
    if let Some(list) = text.strip_prefix("arcs:") {
        let arcs = list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| validation(format!("bad arc index '{s}'")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        return Ok(DirectionMeasure::eighth_arcs(&arcs)?);
    }
    if let Some(path) = text.strip_prefix("file:") {
        let body = std::fs::read_to_string(path)
            .map_err(|e| validation(format!("cannot read measure {path}: {e}")))?;
        let mu: DirectionMeasure =
            serde_json::from_str(&body).map_err(|e| validation(format!("measure {path}: {e}")))?;
        mu.validate()?;
        return Ok(mu);
    }
    Err(validation(format!(
        "unknown measure '{text}' (lebesgue, eight-arc, arcs:I,J,..., file:PATH)"
    )))
}

/// Splits a flat `x,y,x,y,...` list into points.
pub fn pairs(values: &[f64], name: &str) -> CliResult<Vec<[f64; 2]>> {
    if values.is_empty() || !values.len().is_multiple_of(2) {
        return Err(validation(format!(
            "--{name} takes an even, nonempty list x,y,x,y,..."
        )));
    }
    Ok(values.chunks(2).map(|c| [c[0], c[1]]).collect())
}

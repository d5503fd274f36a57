use clap::Args;
use serde::Serialize;
use serde_json::json;

use typicality::pclt::{figure1_data, tail_comparison, FigureRow};

use super::subsystem;
use crate::output::{emit, CommandOutput, OutputSpec, Table};
use crate::Failure;

#[derive(Debug, Args, Serialize)]
pub struct TailsArgs {
    /// Subsystem dimension d_S.
    #[arg(long)]
    pub ds: u64,
    /// Environment dimension d_E.
    #[arg(long)]
    pub de: u64,
    /// Threshold p at which densities and upper tails are compared.
    #[arg(long, default_value_t = 0.95)]
    pub threshold: f64,
    /// Points in the figure grid over [0, 1.05].
    #[arg(long, default_value_t = 106)]
    pub grid_points: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputSpec,
}

pub fn run(args: &TailsArgs) -> Result<(), Failure> {
    let dims = subsystem(args.ds, args.de)?;
    let at = tail_comparison(dims, args.threshold)?;
    let grid = figure1_data(dims, args.grid_points)?;

    let mut summary = Table::new(vec!["quantity", "value"]).titled(format!(
        "P_k ~ Beta({}, {}) at p = {}",
        args.de,
        args.de * (args.ds - 1),
        args.threshold
    ));
    summary.push(vec!["exact_density".into(), at.exact_density.into()]);
    summary.push(vec!["gaussian_density".into(), at.gaussian_density.into()]);
    summary.push(vec!["density_ratio".into(), at.density_ratio().into()]);
    summary.push(vec!["exact_tail".into(), at.exact_tail.into()]);
    summary.push(vec!["gaussian_tail".into(), at.gaussian_tail.into()]);
    summary.push(vec!["tail_ratio".into(), at.tail_ratio().into()]);

    // The threshold row joins the grid in p order so the CSV stays one
    // sorted figure table.
    let mut rows = grid.clone();
    if !rows.iter().any(|r| (r.p - at.threshold).abs() <= 1e-12) {
        let pos = rows.partition_point(|r| r.p < at.threshold);
        rows.insert(
            pos,
            FigureRow {
                p: at.threshold,
                exact_density: at.exact_density,
                gaussian_density: at.gaussian_density,
                exact_tail: at.exact_tail,
                gaussian_tail: at.gaussian_tail,
            },
        );
    }
    let mut primary = Table::new(vec!["p", "exact_density", "gaussian_density", "exact_tail", "gaussian_tail"]);
    for r in &rows {
        primary.push(vec![
            r.p.into(),
            r.exact_density.into(),
            r.gaussian_density.into(),
            r.exact_tail.into(),
            r.gaussian_tail.into(),
        ]);
    }

    emit(
        &args.out,
        &CommandOutput {
            command: "tails",
            inputs: json!(args),
            sections: vec![summary],
            primary,
            outputs: json!({
                "threshold": {
                    "p": at.threshold,
                    "exact_density": at.exact_density,
                    "gaussian_density": at.gaussian_density,
                    "density_ratio": at.density_ratio(),
                    "exact_tail": at.exact_tail,
                    "gaussian_tail": at.gaussian_tail,
                    "tail_ratio": at.tail_ratio(),
                },
                "grid": grid,
            }),
        },
    )?;
    Ok(())
}

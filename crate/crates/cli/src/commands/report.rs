use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use typicality::report::{run_report, Fault, ReportOptions, DEFAULT_SEED};

use crate::output::{emit, Cell, CommandOutput, Format, OutputSpec, Table};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InjectedFault {
    WrongBernoulli,
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    /// Shorthand for --format json.
    #[arg(long)]
    pub json: bool,
    /// Seed for the Monte Carlo criteria.
    #[arg(long, env = "TYPICALITY_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads for the Monte Carlo criteria (default: all cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Deliberately corrupt an input to confirm the battery can fail.
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<InjectedFault>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputSpec,
}

pub fn run(args: &ReportArgs) -> Result<(), Failure> {
    let mut opts = ReportOptions {
        seed: args.seed,
        fault: args.inject_fault.map(|InjectedFault::WrongBernoulli| Fault::WrongBernoulli),
        ..ReportOptions::default()
    };
    if let Some(w) = args.workers {
        opts.workers = w.max(1);
    }
    let outcomes = run_report(&opts)?;

    let mut table = Table::new(vec!["criterion", "check", "measured", "expected", "result"]);
    for o in &outcomes {
        for ch in &o.checks {
            table.push(vec![
                Cell::from(format!("{:>2} {}", o.id, o.title)),
                ch.label.clone().into(),
                ch.measured.into(),
                ch.expected.clone().into(),
                if ch.pass { "pass" } else { "FAIL" }.into(),
            ]);
        }
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();

    let mut out = args.out.clone();
    if args.json {
        out.format = Format::Json;
    }
    emit(
        &out,
        &CommandOutput {
            command: "report",
            inputs: json!(args),
            sections: Vec::new(),
            primary: table,
            outputs: json!({
                "results": outcomes,
                "all_passed": failed.is_empty(),
            }),
        },
    )?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("criteria failed: {failed:?}")))
    }
}

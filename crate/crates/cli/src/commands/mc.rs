use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use typicality::haar_mc::{ks_test, mi_ensemble, run_ensemble, EnsembleStats};
use typicality::mutual_info::mi_exact;
use typicality::pclt::pk_moments;
use typicality::special_fn::harmonic_range;
use typicality::spectral::{dirichlet_cross_moment, dirichlet_plogp, lubkin_purity, page_entropy};
use typicality::SubsystemDims;

use super::{subsystem, tripartite};
use crate::output::{emit, Cell, CommandOutput, OutputSpec, Table};
use crate::Failure;

/// Default seed when neither `--seed` nor `TYPICALITY_SEED` is given.
const DEFAULT_SEED: u64 = typicality::report::DEFAULT_SEED;
/// `|z|` above which `--strict` fails the run.
const STRICT_Z: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Subsystem,
    Mi,
    Bloch,
}

#[derive(Debug, Args, Serialize)]
pub struct McArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Subsystem dimension (subsystem and bloch modes).
    #[arg(long, required_if_eq_any([("mode", "subsystem"), ("mode", "bloch")]))]
    pub ds: Option<u64>,
    /// Environment dimension.
    #[arg(long)]
    pub de: u64,
    /// Dimension of A (mi mode).
    #[arg(long, required_if_eq("mode", "mi"))]
    pub da: Option<u64>,
    /// Dimension of B (mi mode).
    #[arg(long, required_if_eq("mode", "mi"))]
    pub db: Option<u64>,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, env = "TYPICALITY_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub workers: u64,
    /// Exit with status 4 when any |z| exceeds 5.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputSpec,
}

struct Comparison {
    table: Table,
    rows: Vec<Value>,
    worst_z: f64,
}

impl Comparison {
    fn new() -> Self {
        Self {
            table: Table::new(vec!["quantity", "estimate", "std_error", "target", "z"]),
            rows: Vec::new(),
            worst_z: 0.0,
        }
    }

    fn add(&mut self, name: impl Into<String>, estimate: f64, se: f64, target: f64) {
        let name = name.into();
        let z = (estimate - target) / se;
        if z.is_finite() {
            self.worst_z = self.worst_z.max(z.abs());
        }
        self.table
            .push(vec![Cell::from(name.clone()), estimate.into(), se.into(), target.into(), z.into()]);
        self.rows.push(json!({
            "quantity": name,
            "estimate": estimate,
            "std_error": se,
            "target": target,
            "z": if z.is_finite() { json!(z) } else { Value::Null },
        }));
    }

    /// A row that is reported but not scored.
    fn note(&mut self, name: &str, value: f64, target: f64) {
        self.table
            .push(vec![name.into(), value.into(), "".into(), target.into(), "".into()]);
        self.rows.push(json!({ "quantity": name, "estimate": value, "target": target }));
    }
}

fn subsystem_rows(stats: &EnsembleStats, dims: SubsystemDims, c: &mut Comparison) -> Result<(), Failure> {
    let moments = pk_moments(dims)?;
    for (k, m) in stats.p.iter().enumerate() {
        c.add(format!("P_{}", k + 1), m.mean(), m.std_error(), moments.mean);
    }
    let purity = &stats.purity;
    c.add("purity", purity.mean(), purity.std_error(), lubkin_purity(dims).total);
    // The spectrum of ρ_S equals that of ρ_E, so Page's formula applies in
    // the smaller-first order.
    let page = page_entropy(dims.d_s().min(dims.d_e()), dims.d_s().max(dims.d_e()))?;
    let vn = &stats.von_neumann;
    c.add("von_neumann", vn.mean(), vn.std_error(), page.von_neumann);
    let diag = &stats.diagonal_entropy;
    c.add("diagonal_entropy", diag.mean(), diag.std_error(), harmonic_range(dims.d_e(), dims.n()));
    c.add("p_ln_p", stats.plogp.mean(), stats.plogp.std_error(), dirichlet_plogp(dims));
    if dims.n() >= 2 {
        let cm = &stats.cross_moment;
        c.add("cross_moment", cm.mean(), cm.std_error(), dirichlet_cross_moment(dims.n())?);
    }
    if dims.d_s() >= 2 && stats.count >= typicality::haar_mc::ks::KS_MIN_SAMPLES {
        let ks = ks_test(stats, dims)?;
        c.note("ks_statistic (target: 1% critical value)", ks.statistic, ks.critical_value(0.01));
    }
    c.note("majorization_violations", stats.majorization_violations as f64, 0.0);
    Ok(())
}

fn bloch_rows(stats: &EnsembleStats, dims: SubsystemDims, c: &mut Comparison) -> Result<(), Failure> {
    if dims.d_s() < 2 {
        return Err(Failure::Usage("bloch mode needs d_S >= 2".into()));
    }
    let target = 2.0 / (dims.d_s() as f64 * (dims.n() as f64 + 1.0));
    for a in 0..stats.bloch.len() {
        let family = if stats.cartan[a] { "cartan" } else { "offdiag" };
        let (var, se) = stats.bloch_variance(a);
        c.add(format!("var r_{} ({family})", a + 1), var, se, target);
    }
    let gap = &stats.family_gap;
    c.add("cartan - offdiag mean variance", gap.mean(), gap.std_error(), 0.0);
    Ok(())
}

pub fn run(args: &McArgs) -> Result<(), Failure> {
    let workers = args.workers as usize;
    let mut c = Comparison::new();
    match args.mode {
        Mode::Subsystem | Mode::Bloch => {
            let dims = subsystem(args.ds.expect("required by clap"), args.de)?;
            let stats = run_ensemble(dims, args.samples, args.seed, workers)?;
            if args.mode == Mode::Subsystem {
                subsystem_rows(&stats, dims, &mut c)?;
            } else {
                bloch_rows(&stats, dims, &mut c)?;
            }
        }
        Mode::Mi => {
            let dims = tripartite(args.da.expect("required by clap"), args.db.expect("required by clap"), args.de)?;
            let m = mi_ensemble(dims, args.samples, args.seed, workers)?;
            c.add("mutual_information", m.mean_mi, m.stderr, mi_exact(dims).total);
        }
    }
    let worst_z = c.worst_z;
    emit(
        &args.out,
        &CommandOutput {
            command: "mc",
            inputs: json!(args),
            sections: Vec::new(),
            primary: c.table,
            outputs: json!({ "rows": c.rows, "max_abs_z": worst_z }),
        },
    )?;
    if args.strict && worst_z > STRICT_Z {
        return Err(Failure::Check(format!("max |z| = {worst_z:.2} exceeds {STRICT_Z}")));
    }
    Ok(())
}

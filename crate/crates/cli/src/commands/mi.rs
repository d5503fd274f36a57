use std::str::FromStr;

use clap::Args;
use serde::Serialize;
use serde_json::{json, Map, Value};

use typicality::mutual_info::{
    mi_bernoulli_series, mi_closed_form, mi_exact, mi_leading, mi_naive_factorized,
    optimal_truncation_order, DEFAULT_TOL,
};
use typicality::special_fn::BERNOULLI_K_MAX;
use typicality::TripartiteDims;

use super::tripartite;
use crate::output::{emit, Cell, CommandOutput, OutputSpec, Table};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Series(usize),
    Integral,
    All,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Method::Exact),
            "integral" => Ok(Method::Integral),
            "all" => Ok(Method::All),
            _ => {
                let k = s
                    .strip_prefix("series:")
                    .ok_or_else(|| format!("expected exact, series:K, integral or all, got '{s}'"))?;
                let k: usize = k.parse().map_err(|_| format!("series order must be an integer, got '{k}'"))?;
                if k > BERNOULLI_K_MAX {
                    return Err(format!("series order must be at most {BERNOULLI_K_MAX}"));
                }
                Ok(Method::Series(k))
            }
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct MiArgs {
    /// Dimension of subsystem A.
    #[arg(long)]
    pub da: u64,
    /// Dimension of subsystem B.
    #[arg(long)]
    pub db: u64,
    /// Dimension of the environment E.
    #[arg(long)]
    pub de: u64,
    /// exact, series:K (K terms), integral, or all.
    #[arg(long, default_value = "exact")]
    pub method: Method,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputSpec,
}

struct Rows {
    table: Table,
    json: Map<String, Value>,
}

impl Rows {
    fn new() -> Self {
        Self {
            table: Table::new(vec!["quantity", "value"]),
            json: Map::new(),
        }
    }

    fn add(&mut self, name: &str, value: f64) {
        self.table.push(vec![Cell::from(name), value.into()]);
        self.json.insert(name.to_string(), json!(value));
    }
}

fn exact_rows(dims: TripartiteDims, rows: &mut Rows) -> f64 {
    let d = mi_exact(dims);
    if dims.page_regime() {
        rows.add("exact", d.total);
    } else {
        eprintln!(
            "warning: d_A d_B = {} > d_E = {}; reporting the swapped-regime exact value",
            dims.d_ab(),
            dims.d_e()
        );
        rows.add("exact (swapped-regime exact value)", d.total);
        rows.add("naive_factorized", mi_naive_factorized(dims));
    }
    rows.add("diagonal_mi", d.diagonal_mi);
    rows.add("eigenvalue_correction", d.eigenvalue_correction);
    rows.add("coherence_term", d.coherence_term);
    rows.add("cartan_term", d.cartan_term);
    d.total
}

fn require_regime(dims: TripartiteDims, what: &str) -> Result<(), Failure> {
    if dims.page_regime() {
        Ok(())
    } else {
        Err(Failure::Regime(format!(
            "{what} requires d_A d_B <= d_E, got d_A d_B = {} > d_E = {}",
            dims.d_ab(),
            dims.d_e()
        )))
    }
}

pub fn run(args: &MiArgs) -> Result<(), Failure> {
    let dims = tripartite(args.da, args.db, args.de)?;
    let mut rows = Rows::new();
    match args.method {
        Method::Exact => {
            exact_rows(dims, &mut rows);
        }
        Method::Series(k) => {
            require_regime(dims, "the series form")?;
            let s = mi_bernoulli_series(dims, k)?;
            rows.add("series", s.value);
            rows.add("leading", s.leading);
            rows.add("truncation_estimate", s.truncation_estimate);
            rows.table.push(vec!["order".into(), k.into()]);
            rows.json.insert("order".into(), json!(k));
        }
        Method::Integral => {
            require_regime(dims, "the integral form")?;
            let q = mi_closed_form(dims, DEFAULT_TOL)?;
            rows.add("integral", q.value);
            rows.add("integral_error_estimate", q.abs_error_estimate);
        }
        Method::All => {
            require_regime(dims, "method all (series and integral forms)")?;
            let exact = exact_rows(dims, &mut rows);
            let leading = mi_leading(dims)?;
            let k = optimal_truncation_order(dims)?;
            let series = mi_bernoulli_series(dims, k)?;
            let integral = mi_closed_form(dims, DEFAULT_TOL)?;
            rows.add("leading", leading);
            rows.add("series", series.value);
            rows.table.push(vec!["series_order".into(), k.into()]);
            rows.json.insert("series_order".into(), json!(k));
            rows.add("series_truncation_estimate", series.truncation_estimate);
            rows.add("integral", integral.value);
            rows.add("integral_error_estimate", integral.abs_error_estimate);
            rows.add("delta_leading_exact", leading - exact);
            rows.add("delta_series_exact", series.value - exact);
            rows.add("delta_integral_exact", integral.value - exact);
        }
    }
    emit(
        &args.out,
        &CommandOutput {
            command: "mi",
            inputs: json!(args),
            sections: Vec::new(),
            primary: rows.table,
            outputs: Value::Object(rows.json),
        },
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_parsing() {
        assert_eq!("exact".parse::<Method>(), Ok(Method::Exact));
        assert_eq!("series:3".parse::<Method>(), Ok(Method::Series(3)));
        assert_eq!("series:0".parse::<Method>(), Ok(Method::Series(0)));
        assert!("series:".parse::<Method>().is_err());
        assert!("series:65".parse::<Method>().is_err());
        assert!("bogus".parse::<Method>().is_err());
    }
}
